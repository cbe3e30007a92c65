//! The projection lattice: ∧, ∨, ¬, central covers, Murray–von Neumann
//! equivalence, and relative-position tests for pairs.
//!
//! The meet is computed spectrally: `ran(e∧f)` is the eigenspace of `e + f`
//! for eigenvalue 2, detected through the window `[2 − δ, 2]` from the
//! tolerance ledger. The join is `range_projection(e + f)`, and the two are
//! De Morgan duals up to the rank thresholds.

use alloc::vec::Vec;

use crate::algebra::{range_basis, range_projection, CMat, Element, Projection};
use crate::error::CoreError;
use crate::tol;

fn check_same_algebra(e: &Projection, f: &Projection) -> Result<(), CoreError> {
    if e.algebra() != f.algebra() {
        return Err(CoreError::AlgebraMismatch);
    }
    Ok(())
}

/// e ∧ f: the projection onto `ran e ∩ ran f`.
pub fn meet(e: &Projection, f: &Projection) -> Result<Projection, CoreError> {
    check_same_algebra(e, f)?;
    let sum = e.element() + f.element();
    let isometries: Vec<CMat> = sum
        .blocks()
        .iter()
        .map(|block| {
            let eig = block.clone().symmetric_eigen();
            let kept: Vec<usize> = (0..eig.eigenvalues.len())
                .filter(|&i| eig.eigenvalues[i] >= 2.0 - tol::MEET_WINDOW)
                .collect();
            let mut iso = CMat::zeros(block.nrows(), kept.len());
            for (c, &i) in kept.iter().enumerate() {
                iso.set_column(c, &eig.eigenvectors.column(i));
            }
            iso
        })
        .collect();
    Projection::from_isometry_blocks(e.algebra(), &isometries)
}

/// e ∨ f: the projection onto `ran e + ran f`.
pub fn join(e: &Projection, f: &Projection) -> Result<Projection, CoreError> {
    check_same_algebra(e, f)?;
    Ok(range_projection(&(e.element() + f.element())))
}

/// 1 − e.
pub fn orthocomplement(e: &Projection) -> Projection {
    e.complement()
}

/// Smallest central projection dominating e: per block, the identity where
/// the block of e is nonzero and zero elsewhere.
pub fn central_cover(e: &Projection) -> Projection {
    let algebra = e.algebra();
    let ranks = e.ranks();
    let isometries: Vec<CMat> = algebra
        .block_dims()
        .iter()
        .zip(&ranks)
        .map(|(&n, &r)| if r > 0 { CMat::identity(n, n) } else { CMat::zeros(n, 0) })
        .collect();
    Projection::from_isometry_blocks(algebra, &isometries).expect("central cover blocks are exact")
}

/// Murray–von Neumann equivalence. In a direct sum of matrix blocks this is
/// exactly equality of the per-block ranks.
pub fn equivalent(e: &Projection, f: &Projection) -> Result<bool, CoreError> {
    check_same_algebra(e, f)?;
    Ok(e.ranks() == f.ranks())
}

/// A partial isometry `v` with `vv* = e` and `v*v = f`, when the projections
/// are equivalent.
pub fn equivalence_witness(e: &Projection, f: &Projection) -> Result<Option<Element>, CoreError> {
    if !equivalent(e, f)? {
        return Ok(None);
    }
    let be = range_basis(e);
    let bf = range_basis(f);
    let blocks: Vec<CMat> = be
        .iter()
        .zip(&bf)
        .zip(e.algebra().block_dims())
        .map(|((a, b), &n)| if a.ncols() == 0 { CMat::zeros(n, n) } else { a * b.adjoint() })
        .collect();
    Ok(Some(Element::from_blocks(e.algebra().clone(), blocks)?))
}

/// The four corner meets of a pair, plus the relative-position flags.
///
/// Position p′ means the cross meets `e∧f̄` and `ē∧f` vanish; position p
/// additionally requires `e∧f = ē∧f̄ = 0`.
#[derive(Debug, Clone)]
pub struct PositionReport {
    pub meet_ef: Projection,
    pub meet_e_not_f: Projection,
    pub meet_not_e_f: Projection,
    pub meet_not_e_not_f: Projection,
    pub in_position_p_prime: bool,
    pub in_position_p: bool,
}

/// Computes all four corner meets and classifies the pair's relative position.
/// Zero-ness of each meet is a rank decision, inherited from the meet window.
pub fn position_check(e: &Projection, f: &Projection) -> Result<PositionReport, CoreError> {
    check_same_algebra(e, f)?;
    let ec = e.complement();
    let fc = f.complement();
    let meet_ef = meet(e, f)?;
    let meet_e_not_f = meet(e, &fc)?;
    let meet_not_e_f = meet(&ec, f)?;
    let meet_not_e_not_f = meet(&ec, &fc)?;
    let cross_zero = meet_e_not_f.rank() == 0 && meet_not_e_f.rank() == 0;
    let corners_zero = meet_ef.rank() == 0 && meet_not_e_not_f.rank() == 0;
    Ok(PositionReport {
        in_position_p_prime: cross_zero,
        in_position_p: cross_zero && corners_zero,
        meet_ef,
        meet_e_not_f,
        meet_not_e_f,
        meet_not_e_not_f,
    })
}
