//! Canonical geometry of a pair of projections.
//!
//! Any pair (e, f) splits into four commuting corners — e∧f, e∧f̄, ē∧f, ē∧f̄ —
//! plus a *generic* part in position p, where none of the four meets survive.
//! On the generic part the pair is unitarily equivalent to the canonical
//! two-point form
//!
//! ```text
//!   e₀ ≅ [1 0]        f₀ ≅ [   a      √(a−a²)]      a = cos²(principal angle)
//!        [0 0]             [√(a−a²)    1−a   ]
//! ```
//!
//! blockwise over the principal angles. From that form we derive the
//! isoclinic interpolant: a projection g with ege = cos²α·e and fgf = cos²α·f
//! for the half-angle α, built from phased combinations of the canonical
//! basis vectors.

use alloc::vec::Vec;

use num_complex::Complex64;
// Load-bearing only when no crate in the build graph links std; with std
// present, inherent f64 methods shadow the trait and the import idles.
#[allow(unused_imports)]
use num_traits::Float;

use crate::algebra::{range_basis, CMat, Element, Projection};
use crate::error::CoreError;
use crate::lattice::{meet, position_check};
use crate::tol;

// ── Five-part decomposition ─────────────────────────────────────────────────

/// The four commuting corners of a pair plus its generic (position p) part.
#[derive(Debug, Clone)]
pub struct TwoProjectionDecomposition {
    /// e ∧ f.
    pub corner_ef: Projection,
    /// e ∧ f̄.
    pub corner_e_not_f: Projection,
    /// ē ∧ f.
    pub corner_not_e_f: Projection,
    /// ē ∧ f̄.
    pub corner_not_e_not_f: Projection,
    /// e₀ = e − e∧f − e∧f̄.
    pub generic_e: Projection,
    /// f₀ = f − e∧f − ē∧f.
    pub generic_f: Projection,
    /// 1 minus the four corners; equals e₀ ∨ f₀.
    pub generic_support: Projection,
}

/// Splits a pair into its four corners and generic part. The five projections
/// `corner_*` and `generic_support` sum to the unit, and the generic pair is
/// in position p inside its support.
pub fn five_part_decomposition(
    e: &Projection,
    f: &Projection,
) -> Result<TwoProjectionDecomposition, CoreError> {
    let report = position_check(e, f)?;
    let generic_e = Projection::try_new(
        &(e.element() - report.meet_ef.element()) - report.meet_e_not_f.element(),
    )?;
    let generic_f = Projection::try_new(
        &(f.element() - report.meet_ef.element()) - report.meet_not_e_f.element(),
    )?;
    let corners_sum = &(&(report.meet_ef.element() + report.meet_e_not_f.element())
        + report.meet_not_e_f.element())
        + report.meet_not_e_not_f.element();
    let generic_support = Projection::try_new(&e.algebra().unit() - &corners_sum)?;
    Ok(TwoProjectionDecomposition {
        corner_ef: report.meet_ef,
        corner_e_not_f: report.meet_e_not_f,
        corner_not_e_f: report.meet_not_e_f,
        corner_not_e_not_f: report.meet_not_e_not_f,
        generic_e,
        generic_f,
        generic_support,
    })
}

// ── Canonical (Halmos) form ─────────────────────────────────────────────────

/// Canonical form of a generic pair: a block unitary `W` and the principal
/// cosines `a_values` such that `W·e·W*` and `W·f·W*` take the canonical
/// two-point shape in the leading 2m_k coordinates of each block.
#[derive(Debug, Clone)]
pub struct HalmosForm {
    /// Block-diagonal unitary implementing the change of basis.
    pub conjugating_unitary: Element,
    /// cos² of the principal angles, per block in ascending order,
    /// concatenated across blocks. All lie strictly inside (0, 1).
    pub a_values: Vec<f64>,
    /// Number m_k of canonical 2×2 points in each block.
    pub block_points: Vec<usize>,
}

impl HalmosForm {
    fn algebra(&self) -> &crate::algebra::Algebra {
        self.conjugating_unitary.algebra()
    }

    /// Start index of each block's run inside `a_values`.
    fn block_offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.block_points.len());
        let mut acc = 0;
        for &m in &self.block_points {
            offsets.push(acc);
            acc += m;
        }
        offsets
    }

    /// The canonical e: diag(1_m, 0_m, 0, …) in each block.
    pub fn canonical_e(&self) -> Projection {
        let algebra = self.algebra();
        let blocks: Vec<CMat> = algebra
            .block_dims()
            .iter()
            .zip(&self.block_points)
            .map(|(&n, &m)| {
                let mut b = CMat::zeros(n, n);
                for i in 0..m {
                    b[(i, i)] = Complex64::new(1.0, 0.0);
                }
                b
            })
            .collect();
        Projection::try_new(Element::from_blocks(algebra.clone(), blocks).expect("shapes fixed"))
            .expect("canonical e is exact")
    }

    /// The canonical f: per point i, the 2×2 matrix [[a, h], [h, 1−a]] with
    /// h = √(a−a²), embedded at coordinates (i, m+i).
    pub fn canonical_f(&self) -> Projection {
        let algebra = self.algebra();
        let offsets = self.block_offsets();
        let blocks: Vec<CMat> = algebra
            .block_dims()
            .iter()
            .zip(self.block_points.iter().zip(&offsets))
            .map(|(&n, (&m, &off))| {
                let mut b = CMat::zeros(n, n);
                for i in 0..m {
                    let a = self.a_values[off + i];
                    let h = (a - a * a).sqrt();
                    b[(i, i)] = Complex64::new(a, 0.0);
                    b[(i, m + i)] = Complex64::new(h, 0.0);
                    b[(m + i, i)] = Complex64::new(h, 0.0);
                    b[(m + i, m + i)] = Complex64::new(1.0 - a, 0.0);
                }
                b
            })
            .collect();
        Projection::try_new(Element::from_blocks(algebra.clone(), blocks).expect("shapes fixed"))
            .expect("canonical f is a projection")
    }

    /// Undoes the change of basis: returns (W*·C_e·W, W*·C_f·W).
    pub fn reconstruct(&self) -> (Projection, Projection) {
        let w = &self.conjugating_unitary;
        let wh = w.adjoint();
        let e = wh.mul(self.canonical_e().element()).mul(w);
        let f = wh.mul(self.canonical_f().element()).mul(w);
        (
            Projection::try_new(e).expect("conjugate of a projection"),
            Projection::try_new(f).expect("conjugate of a projection"),
        )
    }
}

/// Orthonormal basis of the orthogonal complement of the column span of `m`
/// inside ℂⁿ, via the eigenvectors of `1 − MM*` near 1.
fn orthonormal_complement(m: &CMat, n: usize) -> CMat {
    let gram = CMat::identity(n, n) - m * m.adjoint();
    let eig = gram.symmetric_eigen();
    let kept: Vec<usize> = (0..eig.eigenvalues.len()).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    let mut out = CMat::zeros(n, kept.len());
    for (c, &i) in kept.iter().enumerate() {
        out.set_column(c, &eig.eigenvectors.column(i));
    }
    out
}

/// Computes the canonical form of a pair in position p (inside its corner:
/// the meets e∧f, e∧f̄ and ē∧f must all vanish; ē∧f̄ may survive and is
/// carried into the trailing coordinates untouched).
pub fn halmos_form(e: &Projection, f: &Projection) -> Result<HalmosForm, CoreError> {
    if e.algebra() != f.algebra() {
        return Err(CoreError::AlgebraMismatch);
    }
    let report = position_check(e, f)?;
    if report.meet_ef.rank() > 0
        || report.meet_e_not_f.rank() > 0
        || report.meet_not_e_f.rank() > 0
    {
        return Err(CoreError::NotInPositionP);
    }
    if e.ranks() != f.ranks() {
        return Err(CoreError::NotInPositionP);
    }

    let algebra = e.algebra();
    let e_bases = range_basis(e);
    let mut a_values = Vec::new();
    let mut block_points = Vec::with_capacity(algebra.n_blocks());
    let mut w_blocks = Vec::with_capacity(algebra.n_blocks());

    for (k, &n) in algebra.block_dims().iter().enumerate() {
        let be = &e_bases[k];
        let m = be.ncols();
        block_points.push(m);
        if m == 0 {
            w_blocks.push(CMat::identity(n, n));
            continue;
        }
        let fb = f.element().block(k);

        // Compression of f to ran e; its eigenvalues are the principal
        // cosines a_i, strictly inside (0, 1) for a position-p pair.
        let c = be.adjoint() * fb * be;
        let eig = c.symmetric_eigen();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|&i, &j| {
            eig.eigenvalues[i]
                .partial_cmp(&eig.eigenvalues[j])
                .expect("finite eigenvalues")
                .then(i.cmp(&j))
        });

        let mut vw = CMat::zeros(n, 2 * m);
        for (slot, &i) in order.iter().enumerate() {
            let a = eig.eigenvalues[i].clamp(f64::EPSILON, 1.0 - f64::EPSILON);
            a_values.push(a);
            let h = (a - a * a).sqrt();
            let v = be * eig.eigenvectors.column(i);
            let w = (fb * &v - &v * Complex64::new(a, 0.0)) / Complex64::new(h, 0.0);
            vw.set_column(slot, &v);
            vw.set_column(m + slot, &w);
        }
        let tail = orthonormal_complement(&vw, n);
        let mut basis = CMat::zeros(n, n);
        for i in 0..2 * m {
            basis.set_column(i, &vw.column(i));
        }
        for i in 0..tail.ncols() {
            basis.set_column(2 * m + i, &tail.column(i));
        }
        w_blocks.push(basis.adjoint());
    }

    Ok(HalmosForm {
        conjugating_unitary: Element::from_blocks(algebra.clone(), w_blocks)?,
        a_values,
        block_points,
    })
}

// ── Isoclinic interpolation ─────────────────────────────────────────────────

/// cos θ for the phase of the interpolant at principal cosine `a` and level
/// `λ = cos²α`: the unique value making the canonical vector
/// ψ = √λ·v + √(1−λ)·e^{iθ}·w satisfy |⟨φ, ψ⟩|² = λ against f's canonical
/// vector φ = √a·v + √(1−a)·w. Equals tan(arcsin √(1−a)) · cot(2α) ∈ [0, 1].
pub fn isoclinic_phase_cos(a: f64, lambda: f64) -> f64 {
    let num = (1.0 - a) * (2.0 * lambda - 1.0);
    let den = 2.0 * (a * (1.0 - a) * lambda * (1.0 - lambda)).sqrt();
    (num / den).clamp(-1.0, 1.0)
}

/// Variant of [`isoclinic_phase_cos`] with the squared normalizer `λ − λ²`
/// in place of its square root. Kept only so callers can quantify how the two
/// normalizations differ; the constraint-derived form above is the one the
/// construction uses.
pub fn isoclinic_phase_cos_variant(a: f64, lambda: f64) -> f64 {
    (1.0 / a - 1.0).sqrt() * (lambda - 0.5) / (lambda - lambda * lambda)
}

/// Builds the isoclinic interpolant g of a pair with ‖e − f‖ < 1 and
/// e ∧ f = 0: a projection with ege = cos²α·e, geg = cos²α·g, fgf = cos²α·f,
/// gfg = cos²α·g for α = ½·arcsin ‖e − f‖, together with α itself.
/// Also ‖e − g‖ = ‖f − g‖ = sin α.
pub fn isoclinic_projection(e: &Projection, f: &Projection) -> Result<(Projection, f64), CoreError> {
    if e.algebra() != f.algebra() {
        return Err(CoreError::AlgebraMismatch);
    }
    let s = e.element().norm_diff(f.element());
    if s >= 1.0 {
        return Err(CoreError::NormTooLarge { norm: s });
    }
    let common = meet(e, f)?;
    if common.rank() > 0 {
        return Err(CoreError::NonzeroMeet { rank: common.rank() });
    }
    if s == 0.0 {
        // Only e = f = 0 reaches here: a nonzero equal pair has a meet.
        return Ok((e.algebra().zero_projection(), 0.0));
    }

    let form = halmos_form(e, f)?;
    let alpha = 0.5 * s.clamp(0.0, 1.0).asin();
    let lambda = alpha.cos().powi(2);
    let algebra = e.algebra();

    let offsets = form.block_offsets();
    let mut g_blocks = Vec::with_capacity(algebra.n_blocks());
    for (k, &n) in algebra.block_dims().iter().enumerate() {
        let m = form.block_points[k];
        let mut g = CMat::zeros(n, n);
        if m > 0 {
            let basis = form.conjugating_unitary.block(k).adjoint();
            for i in 0..m {
                let a = form.a_values[offsets[k] + i];
                let theta = isoclinic_phase_cos(a, lambda).acos();
                let phase = Complex64::new(0.0, theta).exp();
                let v = basis.column(i);
                let w = basis.column(m + i);
                let psi = v * Complex64::new(lambda.sqrt(), 0.0)
                    + w * (phase * Complex64::new((1.0 - lambda).sqrt(), 0.0));
                g += &psi * psi.adjoint();
            }
        }
        g_blocks.push(g);
    }
    let g = Projection::try_new(Element::from_blocks(algebra.clone(), g_blocks)?)?;
    Ok((g, alpha))
}

// ── Halving ─────────────────────────────────────────────────────────────────

/// Splits e = p + q + r with p ~ q blockwise and r of rank ≤ 1 per block
/// (so r·A·r is abelian), using e's own eigenvectors: per block the first
/// ⌊k/2⌋ range vectors go to p, the next ⌊k/2⌋ to q, the leftover to r.
pub fn halve(e: &Projection) -> (Projection, Projection, Projection) {
    let algebra = e.algebra();
    let bases = range_basis(e);
    let mut p_iso = Vec::new();
    let mut q_iso = Vec::new();
    let mut r_iso = Vec::new();
    for basis in &bases {
        let k = basis.ncols();
        let m = k / 2;
        p_iso.push(basis.columns(0, m).into_owned());
        q_iso.push(basis.columns(m, m).into_owned());
        r_iso.push(basis.columns(2 * m, k - 2 * m).into_owned());
    }
    (
        Projection::from_isometry_blocks(algebra, &p_iso).expect("eigenvector columns"),
        Projection::from_isometry_blocks(algebra, &q_iso).expect("eigenvector columns"),
        Projection::from_isometry_blocks(algebra, &r_iso).expect("eigenvector columns"),
    )
}

/// Residuals of the four isoclinic identities for (e, f, g) at level
/// λ = cos²α, in the order ege, geg, fgf, gfg. Useful to audits and tests.
pub fn isoclinic_residuals(e: &Projection, f: &Projection, g: &Projection, alpha: f64) -> [f64; 4] {
    let lambda = Complex64::new(alpha.cos().powi(2), 0.0);
    let pair = |x: &Projection, y: &Projection| {
        let xyx = x.element().mul(y.element()).mul(x.element());
        xyx.norm_diff(&x.element().scale(lambda))
    };
    [pair(e, g), pair(g, e), pair(f, g), pair(g, f)]
}

/// Worst deviation of the five parts from an exact resolution: how far the
/// four corners plus generic support are from summing to 1, and how far the
/// generic pieces are from recombining into the original pair.
pub fn decomposition_residual(
    d: &TwoProjectionDecomposition,
    e: &Projection,
    f: &Projection,
) -> f64 {
    let unit = e.algebra().unit();
    let total = &(&(&(d.corner_ef.element() + d.corner_e_not_f.element())
        + d.corner_not_e_f.element())
        + d.corner_not_e_not_f.element())
        + d.generic_support.element();
    let e_back = &(d.corner_ef.element() + d.corner_e_not_f.element()) + d.generic_e.element();
    let f_back = &(d.corner_ef.element() + d.corner_not_e_f.element()) + d.generic_f.element();
    let r1 = total.norm_diff(&unit);
    let r2 = e_back.norm_diff(e.element());
    let r3 = f_back.norm_diff(f.element());
    r1.max(r2).max(r3)
}

/// `tol::SPEC_REL`-scaled bound used by tests of the canonical machinery.
pub fn spec_tol(x: &Element) -> f64 {
    tol::SPEC_REL * x.operator_norm().max(1.0)
}
