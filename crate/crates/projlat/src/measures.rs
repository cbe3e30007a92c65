//! Finitely additive measures on the projection lattice and their extension
//! to linear functionals.
//!
//! A [`Measure`] assigns a scalar to every projection. When it is additive on
//! orthogonal pairs — audited, not assumed — it extends to the whole algebra
//! through the spectral theorem: μ(x) = Σ λᵢ ρ(pᵢ) on Hermitian x, split into
//! real and imaginary parts otherwise. On algebras with no 2×2 block the
//! extension is linear and comes from a trace form, which
//! [`reconstruct_density`] recovers; a single M₂ block admits genuinely
//! nonlinear additive measures, built here from odd cubic harmonics on the
//! Bloch sphere.

use alloc::boxed::Box;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
// Load-bearing only when no crate in the build graph links std; with std
// present, inherent f64 methods shadow the trait and the import idles.
#[allow(unused_imports)]
use num_traits::Float;

use crate::algebra::{
    hermitian_basis, hermitian_spectral, Algebra, CMat, Element, Projection,
};
use crate::error::{AdditivityWitness, CoreError};
use crate::sample;
use crate::tol;

/// Strength of the cubic harmonic in the M₂ nonlinear measure.
const M2_HARMONIC_GAIN: f64 = 0.3;

// ── Measures ────────────────────────────────────────────────────────────────

#[derive(Debug, Clone)]
pub enum MeasureKind {
    /// ρ(p) = tr(T·p).
    Density { t: Element },
    /// ρ(p) = tr(p) / total dimension.
    NormalizedTrace,
    /// Additive but nonlinear measure on a single M₂ block: on rank-1
    /// projections with Bloch vector v, ρ(p) = ½ + g(⟨u, v⟩) for a seeded
    /// axis u and the odd cubic g(t) = gain·(5t³ − 3t)/2.
    M2Nonlinear { seed: u64 },
    /// Deliberately broken: ρ(p) = tr(T·p) + gain·tr(T·p)², which fails
    /// additivity on generic orthogonal pairs. Exists to exercise audits.
    NonAdditive { t: Element, gain: f64 },
}

/// A function on the projections of a fixed algebra. Values are complex in
/// general; `is_real` records when they are guaranteed real.
#[derive(Debug, Clone)]
pub struct Measure {
    algebra: Algebra,
    kind: MeasureKind,
    norm_bound: f64,
    is_real: bool,
}

impl Measure {
    pub fn density(t: Element) -> Measure {
        let norm_bound = t.trace_norm().max(f64::MIN_POSITIVE);
        let is_real = t.self_adjoint_defect() <= t.algebra().proj_tol();
        Measure { algebra: t.algebra().clone(), norm_bound, is_real, kind: MeasureKind::Density { t } }
    }

    pub fn normalized_trace(algebra: &Algebra) -> Measure {
        Measure {
            algebra: algebra.clone(),
            kind: MeasureKind::NormalizedTrace,
            norm_bound: 1.0,
            is_real: true,
        }
    }

    /// The additive-but-nonlinear measure. Only exists on a single M₂ block.
    pub fn m2_nonlinear(algebra: &Algebra, seed: u64) -> Result<Measure, CoreError> {
        if algebra.block_dims() != [2] {
            return Err(CoreError::WrongAlgebra { need: "a single 2x2 block" });
        }
        Ok(Measure {
            algebra: algebra.clone(),
            kind: MeasureKind::M2Nonlinear { seed },
            norm_bound: 1.0,
            is_real: true,
        })
    }

    /// A measure that fails additivity by `gain`-sized quadratic leakage.
    pub fn non_additive(t: Element, gain: f64) -> Measure {
        let base = t.trace_norm().max(f64::MIN_POSITIVE);
        Measure {
            algebra: t.algebra().clone(),
            norm_bound: base + gain * base * base,
            is_real: true,
            kind: MeasureKind::NonAdditive { t, gain },
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    /// sup over projections of |ρ(p)| (an upper bound).
    pub fn norm_bound(&self) -> f64 {
        self.norm_bound
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    pub fn evaluate(&self, p: &Projection) -> Result<Complex64, CoreError> {
        if p.algebra() != &self.algebra {
            return Err(CoreError::AlgebraMismatch);
        }
        match &self.kind {
            MeasureKind::Density { t } => Ok(t.mul(p.element()).trace()),
            MeasureKind::NormalizedTrace => {
                Ok(p.element().trace() / Complex64::new(self.algebra.total_dim() as f64, 0.0))
            }
            MeasureKind::M2Nonlinear { seed } => Ok(Complex64::new(m2_eval(*seed, p), 0.0)),
            MeasureKind::NonAdditive { t, gain } => {
                let base = t.mul(p.element()).trace().re;
                Ok(Complex64::new(base + gain * base * base, 0.0))
            }
        }
    }
}

/// Seeded unit axis for the M₂ nonlinear measure.
fn m2_axis(seed: u64) -> [f64; 3] {
    let mut rng = sample::rng(seed, 0);
    loop {
        let x = sample::gaussian(&mut rng);
        let y = sample::gaussian(&mut rng);
        let z = sample::gaussian(&mut rng);
        let n = (x * x + y * y + z * z).sqrt();
        if n > 1e-3 {
            return [x / n, y / n, z / n];
        }
    }
}

fn m2_eval(seed: u64, p: &Projection) -> f64 {
    let rank = p.rank();
    match rank {
        0 => 0.0,
        2 => 1.0,
        _ => {
            let b = p.element().block(0);
            // Bloch vector of a rank-1 projection p = (1 + v·σ)/2.
            let vx = 2.0 * b[(1, 0)].re;
            let vy = 2.0 * b[(1, 0)].im;
            let vz = b[(0, 0)].re - b[(1, 1)].re;
            let n = (vx * vx + vy * vy + vz * vz).sqrt();
            let axis = m2_axis(seed);
            let t = (axis[0] * vx + axis[1] * vy + axis[2] * vz) / n;
            0.5 + M2_HARMONIC_GAIN * (5.0 * t * t * t - 3.0 * t) / 2.0
        }
    }
}

/// Alias for [`Measure::m2_nonlinear`]: the standing counterexample measure.
pub fn make_m2_nonlinear_measure(algebra: &Algebra, seed: u64) -> Result<Measure, CoreError> {
    Measure::m2_nonlinear(algebra, seed)
}

// ── Extension ───────────────────────────────────────────────────────────────

/// The extension of an (audited) additive measure to the whole algebra via
/// spectral resolutions. Evaluation agrees with the measure exactly on
/// certified projections.
#[derive(Debug, Clone)]
pub struct QuasiLinearFunctional {
    measure: Measure,
    norm: f64,
}

impl QuasiLinearFunctional {
    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    /// ‖μ‖: trace-norm of the fitted representing form, floored by the
    /// measure's own bound.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn evaluate(&self, x: &Element) -> Result<Complex64, CoreError> {
        if x.algebra() != self.measure.algebra() {
            return Err(CoreError::AlgebraMismatch);
        }
        let h = x.adjoint();
        let re = (x + &h).scale(Complex64::new(0.5, 0.0));
        let im = (x - &h).scale(Complex64::new(0.0, -0.5));
        let a = self.evaluate_hermitian(&re)?;
        let b = self.evaluate_hermitian(&im)?;
        Ok(a + b * Complex64::new(0.0, 1.0))
    }

    fn evaluate_hermitian(&self, h: &Element) -> Result<Complex64, CoreError> {
        if h.projection_defect() <= h.algebra().proj_tol() {
            return self.measure.evaluate(&Projection::try_new(h.clone())?);
        }
        let res = hermitian_spectral(h, None)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (lambda, p) in res.iter() {
            acc += Complex64::new(lambda, 0.0) * self.measure.evaluate(p)?;
        }
        Ok(acc)
    }
}

/// Audits additivity on `audit_pairs` seeded orthogonal pairs, then wraps the
/// measure as a functional. The reported norm is the trace norm of the form
/// fitted on the Hermitian basis.
pub fn extend_measure(
    rho: &Measure,
    audit_pairs: usize,
    seed: u64,
) -> Result<QuasiLinearFunctional, CoreError> {
    let algebra = rho.algebra().clone();
    let mut rng = sample::rng(seed, 0x6d65_6173);
    let eps = tol::MEAS_REL * rho.norm_bound();
    let mut worst: Option<AdditivityWitness> = None;
    for _ in 0..audit_pairs {
        let (e, f) = sample::random_orthogonal_pair(&mut rng, &algebra);
        let sum = Projection::try_new(e.element() + f.element())?;
        let defect =
            (rho.evaluate(&sum)? - rho.evaluate(&e)? - rho.evaluate(&f)?).norm();
        if worst.as_ref().map_or(true, |w| defect > w.defect) {
            worst = Some(AdditivityWitness { e, f, defect });
        }
    }
    if let Some(w) = worst {
        if w.defect > eps {
            return Err(CoreError::NotAdditive { witness: Box::new(w) });
        }
    }

    let provisional = QuasiLinearFunctional { measure: rho.clone(), norm: rho.norm_bound() };
    let mut fitted = algebra.zero();
    for b in hermitian_basis(&algebra) {
        let val = provisional.evaluate_hermitian(&b)?;
        fitted = &fitted + &b.scale(val);
    }
    let norm = fitted.trace_norm().max(rho.norm_bound());
    Ok(QuasiLinearFunctional { measure: rho.clone(), norm })
}

// ── Dyadic decomposition ────────────────────────────────────────────────────

/// Greedy dyadic decomposition of 0 ≤ x ≤ 1: projections e₁, e₂, … with
/// ‖x − Σₙ 2⁻ⁿ eₙ‖ ≤ 2⁻ᴺ after N terms. Digits are extracted exactly from
/// the (uncollapsed) spectral resolution.
pub fn dyadic_decomposition(x: &Element, depth: usize) -> Result<Vec<Projection>, CoreError> {
    let res = hermitian_spectral(x, Some(0.0))?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &l in res.eigenvalues() {
        lo = lo.min(l);
        hi = hi.max(l);
    }
    let slack = 1e-9;
    if lo < -slack || hi > 1.0 + slack {
        return Err(CoreError::SpectrumOutOfRange { min: lo, max: hi });
    }

    let algebra = x.algebra();
    let mut remainders: Vec<f64> = res.eigenvalues().iter().map(|l| l.clamp(0.0, 1.0)).collect();
    let mut out = Vec::with_capacity(depth);
    for n in 1..=depth {
        let step = (0.5).powi(n as i32);
        let mut acc = algebra.zero();
        for (i, p) in res.projections().iter().enumerate() {
            if remainders[i] >= step - tol::DIGIT_SLACK {
                remainders[i] -= step;
                acc = &acc + p.element();
            }
        }
        out.push(Projection::try_new(acc)?);
    }
    Ok(out)
}

// ── Density reconstruction ──────────────────────────────────────────────────

/// The tomography family for one block: the n² rank-1 projections built from
/// basis vectors eᵢ, (eᵢ+eⱼ)/√2 and (eᵢ+i·eⱼ)/√2, embedded in block `k`.
fn block_family(algebra: &Algebra, k: usize) -> Vec<Projection> {
    let n = algebra.block_dims()[k];
    let mut out = Vec::with_capacity(n * n);
    let mut embed = |v: DVector<Complex64>| {
        let isometries: Vec<CMat> = algebra
            .block_dims()
            .iter()
            .enumerate()
            .map(|(b, &m)| {
                if b == k {
                    let mut iso = CMat::zeros(m, 1);
                    iso.set_column(0, &v);
                    iso
                } else {
                    CMat::zeros(m, 0)
                }
            })
            .collect();
        out.push(
            Projection::from_isometry_blocks(algebra, &isometries).expect("unit vectors"),
        );
    };
    let inv_sqrt2 = Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);
    for i in 0..n {
        let mut v = DVector::zeros(n);
        v[i] = Complex64::new(1.0, 0.0);
        embed(v);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut v = DVector::zeros(n);
            v[i] = inv_sqrt2;
            v[j] = inv_sqrt2;
            embed(v);
            let mut w = DVector::zeros(n);
            w[i] = inv_sqrt2;
            w[j] = inv_sqrt2 * Complex64::new(0.0, 1.0);
            embed(w);
        }
    }
    out
}

/// Fits tr(T·p) = ρ(p) over the blockwise tomography families and reports the
/// worst absolute misfit on `n_validation` fresh seeded projections. A small
/// residual certifies the measure is (a trace form, hence) linear; the M₂
/// nonlinear measure leaves a residual above 0.05 by construction.
pub fn reconstruct_density(
    rho: &Measure,
    algebra: &Algebra,
    n_validation: usize,
    seed: u64,
) -> Result<(Element, f64), CoreError> {
    if rho.algebra() != algebra {
        return Err(CoreError::AlgebraMismatch);
    }
    let mut t_blocks = Vec::with_capacity(algebra.n_blocks());
    for (k, &n) in algebra.block_dims().iter().enumerate() {
        let family = block_family(algebra, k);
        let mut a = DMatrix::<Complex64>::zeros(n * n, n * n);
        let mut y = DVector::<Complex64>::zeros(n * n);
        for (row, p) in family.iter().enumerate() {
            let pb = p.element().block(k);
            // tr(T·p) = Σ_{r,s} T[r,s]·p[s,r]; unknowns vectorized column-major.
            for s in 0..n {
                for r in 0..n {
                    a[(row, s * n + r)] = pb[(s, r)];
                }
            }
            y[row] = rho.evaluate(p)?;
        }
        let t_vec = match a.clone().lu().solve(&y) {
            Some(sol) => sol,
            None => a
                .svd(true, true)
                .solve(&y, 1e-12)
                .expect("pseudoinverse fallback"),
        };
        let mut t = CMat::zeros(n, n);
        for s in 0..n {
            for r in 0..n {
                t[(r, s)] = t_vec[s * n + r];
            }
        }
        t_blocks.push(t);
    }
    let t = Element::from_blocks(algebra.clone(), t_blocks)?;

    let mut rng = sample::rng(seed, 0x7265_636f);
    let mut residual = 0.0f64;
    for _ in 0..n_validation {
        let ranks = sample::random_ranks(&mut rng, algebra);
        let p = sample::random_projection(&mut rng, algebra, &ranks);
        let misfit = (t.mul(p.element()).trace() - rho.evaluate(&p)?).norm();
        residual = residual.max(misfit);
    }
    Ok((t, residual))
}

// ── Lipschitz audit ─────────────────────────────────────────────────────────

/// Worst ratio |μ(e) − μ(f)| / (‖μ‖·‖e − f‖) over seeded projection pairs;
/// pairs closer than 1e-6 in norm are skipped to keep the quotient
/// well-conditioned.
pub fn lipschitz_audit(mu: &QuasiLinearFunctional, n_pairs: usize, seed: u64) -> f64 {
    let algebra = mu.measure().algebra().clone();
    let mut rng = sample::rng(seed, 0x6c69_7073);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < n_pairs {
        let re = sample::random_ranks(&mut rng, &algebra);
        let rf = sample::random_ranks(&mut rng, &algebra);
        let e = sample::random_projection(&mut rng, &algebra, &re);
        let f = sample::random_projection(&mut rng, &algebra, &rf);
        let gap = e.norm_diff(&f);
        if gap <= 1e-6 {
            continue;
        }
        done += 1;
        let num = (mu.measure().evaluate(&e).expect("same algebra")
            - mu.measure().evaluate(&f).expect("same algebra"))
        .norm();
        worst = worst.max(num / (mu.norm() * gap));
    }
    worst
}
