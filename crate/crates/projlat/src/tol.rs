//! The tolerance ledger.
//!
//! Every numerical gate in the crate routes through one of these constants so
//! that thresholds stay consistent between operations and their audits.

/// Projection certification: ‖p² − p‖, ‖p − p*‖ ≤ `PROJ_REL` · max block dim.
pub const PROJ_REL: f64 = 1e-10;

/// Spectral reconstruction residual: ‖x − Σλᵢpᵢ‖ ≤ `SPEC_REL` · ‖x‖.
pub const SPEC_REL: f64 = 1e-8;

/// Default eigenvalue clustering width, relative to ‖x‖.
pub const CLUSTER_REL: f64 = 1e-8;

/// Rank decisions: singular values above `RANK_REL` · ‖x‖ count.
pub const RANK_REL: f64 = 1e-9;

/// Absolute floor for rank decisions: an element with ‖x‖ at or below this is
/// all rounding noise (projections live at scale 1) and has rank zero.
pub const RANK_ABS_FLOOR: f64 = 1e-10;

/// Meet detection window: eigenvalues of e + f in [2 − `MEET_WINDOW`, 2].
pub const MEET_WINDOW: f64 = 1e-8;

/// Measure additivity audits: defects above `MEAS_REL` · norm bound fail.
pub const MEAS_REL: f64 = 1e-9;

/// Dyadic digit extraction takes a digit already at `step − DIGIT_SLACK`,
/// absorbing eigendecomposition rounding: an eigenvalue that is a dyadic
/// rational up to noise then keeps its remainder at noise scale instead of
/// trailing just under the step forever. Remainders stay within
/// `[−DIGIT_SLACK, 2⁻ⁿ)`, so the 2⁻ᴺ truncation bound survives.
pub const DIGIT_SLACK: f64 = 1e-14;
