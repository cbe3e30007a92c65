//! Error type shared by all core operations.

use alloc::boxed::Box;
use thiserror::Error;

use crate::algebra::Projection;

/// A pair of projections witnessing an additivity failure.
#[derive(Debug, Clone)]
pub struct AdditivityWitness {
    pub e: Projection,
    pub f: Projection,
    /// |ρ(e + f) − ρ(e) − ρ(f)| at the witness pair.
    pub defect: f64,
}

#[derive(Debug, Error)]
pub enum CoreError {
    /// Block dimensions must all be ≥ 1.
    #[error("algebra must have at least one block, all of dimension >= 1")]
    BadBlockDims,

    /// Matrix data does not match the algebra's block dimensions.
    #[error("block shapes do not match the algebra (block {block}: got {got}, want {want})")]
    ShapeMismatch { block: usize, got: usize, want: usize },

    /// Two operands live in different algebras.
    #[error("operands belong to different algebras")]
    AlgebraMismatch,

    /// ‖x − x*‖ exceeded the self-adjointness tolerance.
    #[error("element is not self-adjoint (defect {defect:.3e})")]
    NotSelfAdjoint { defect: f64 },

    /// ‖p² − p‖ or ‖p − p*‖ exceeded the projection tolerance.
    #[error("element is not a projection (defect {defect:.3e}, tolerance {tol:.3e})")]
    NotProjection { defect: f64, tol: f64 },

    /// A canonical form was requested for a pair that is not in position p
    /// (some of the four corner meets are nonzero).
    #[error("projection pair is not in position p within its corner")]
    NotInPositionP,

    /// ‖e − f‖ ≥ 1, so no isoclinic interpolant exists.
    #[error("gap norm {norm} is not strictly below 1")]
    NormTooLarge { norm: f64 },

    /// The pair has a nonzero meet, excluded by the interpolation preconditions.
    #[error("projections have a nonzero meet (rank {rank})")]
    NonzeroMeet { rank: usize },

    /// Spectrum escapes [0, 1] beyond tolerance.
    #[error("spectrum [{min:.6}, {max:.6}] escapes [0, 1]")]
    SpectrumOutOfRange { min: f64, max: f64 },

    /// A measure failed its additivity audit; carries the worst witness pair.
    #[error("measure failed the additivity audit (defect {:.3e})", witness.defect)]
    NotAdditive { witness: Box<AdditivityWitness> },

    /// The operation needs a specific algebra shape (e.g. a single 2×2 block).
    #[error("operation requires a different algebra shape: {need}")]
    WrongAlgebra { need: &'static str },

    /// ‖u*u − 1‖ exceeded tolerance.
    #[error("element is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    /// The source algebra has a 2×2 block, where lattice data cannot determine
    /// a linear extension.
    #[error("source algebra has a 2x2 block; extension is not determined")]
    TypeI2Present,

    /// The morphism does not carry the claim the operation needs.
    #[error("morphism does not claim the '{claim}' property")]
    ClaimMissing { claim: &'static str },

    /// Unitary reconstruction from a lattice morphism failed.
    #[error("reconstruction failed: {reason} (fidelity {fidelity:.6})")]
    ReconstructionFailed { fidelity: f64, reason: &'static str },
}
