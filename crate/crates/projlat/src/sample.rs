//! Seeded samplers for test data: Haar unitaries, random projections,
//! Hermitian elements, orthogonal pairs and chains.
//!
//! Determinism contract: every sampler consumes a caller-supplied ChaCha
//! stream and nothing else. The same (seed, stream) always reproduces the
//! same objects, on every platform.

use alloc::vec::Vec;

use num_complex::Complex64;
// Load-bearing only when no crate in the build graph links std; with std
// present, inherent f64 methods shadow the trait and the import idles.
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
pub use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, CMat, Element, Projection};
use crate::two_projections::HalmosForm;

/// A deterministic substream: same seed, independent streams per purpose.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Standard normal via Box–Muller.
pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = 1.0 - rng.gen::<f64>();
    let v: f64 = rng.gen();
    (-2.0 * u.ln()).sqrt() * (2.0 * core::f64::consts::PI * v).cos()
}

pub fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng))
}

/// Haar-distributed n×n unitary: Gaussian matrix, then modified Gram–Schmidt
/// with two orthogonalization passes. Normalizing against positive real
/// column norms fixes the phase convention that makes the result Haar.
pub fn haar_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let mut q = CMat::from_fn(n, n, |_, _| complex_gaussian(rng));
    for j in 0..n {
        for _pass in 0..2 {
            for i in 0..j {
                let qi = q.column(i).into_owned();
                let c = qi.dotc(&q.column(j).into_owned());
                let updated = q.column(j) - &qi * c;
                q.set_column(j, &updated);
            }
        }
        let norm = q.column(j).norm();
        let scaled = q.column(j) / Complex64::new(norm, 0.0);
        q.set_column(j, &scaled);
    }
    q
}

/// First r columns of a Haar unitary.
pub fn haar_isometry(rng: &mut ChaCha8Rng, n: usize, r: usize) -> CMat {
    haar_unitary(rng, n).columns(0, r).into_owned()
}

/// Uniformly random rank vector: each block rank uniform in 0..=n_k.
pub fn random_ranks(rng: &mut ChaCha8Rng, algebra: &Algebra) -> Vec<usize> {
    algebra.block_dims().iter().map(|&n| rng.gen_range(0..=n)).collect()
}

/// Haar-random projection with the given per-block ranks.
pub fn random_projection(rng: &mut ChaCha8Rng, algebra: &Algebra, ranks: &[usize]) -> Projection {
    let isometries: Vec<CMat> = algebra
        .block_dims()
        .iter()
        .zip(ranks)
        .map(|(&n, &r)| haar_isometry(rng, n, r))
        .collect();
    Projection::from_isometry_blocks(algebra, &isometries).expect("Haar columns are orthonormal")
}

/// Random Hermitian element with Gaussian entries, scaled to roughly unit
/// operator norm before applying `scale`.
pub fn random_hermitian(rng: &mut ChaCha8Rng, algebra: &Algebra, scale: f64) -> Element {
    let blocks: Vec<CMat> = algebra
        .block_dims()
        .iter()
        .map(|&n| {
            let a = CMat::from_fn(n, n, |_, _| complex_gaussian(rng));
            (&a + a.adjoint()) * Complex64::new(0.5 * scale / (n as f64).sqrt(), 0.0)
        })
        .collect();
    Element::from_blocks(algebra.clone(), blocks).expect("shapes match")
}

/// Random 0 ≤ x ≤ 1 with eigenvalues on the dyadic grid k/2²⁰, k < 2²⁰,
/// conjugated by a Haar unitary per block.
pub fn random_unit_interval(rng: &mut ChaCha8Rng, algebra: &Algebra) -> Element {
    let blocks: Vec<CMat> = algebra
        .block_dims()
        .iter()
        .map(|&n| {
            let u = haar_unitary(rng, n);
            let mut d = CMat::zeros(n, n);
            for i in 0..n {
                let k: u32 = rng.gen_range(0..(1u32 << 20));
                d[(i, i)] = Complex64::new(k as f64 / (1u32 << 20) as f64, 0.0);
            }
            &u * d * u.adjoint()
        })
        .collect();
    Element::from_blocks(algebra.clone(), blocks).expect("shapes match")
}

/// Orthogonal pair (e, f) with ef = 0: disjoint column ranges of one Haar
/// unitary per block.
pub fn random_orthogonal_pair(rng: &mut ChaCha8Rng, algebra: &Algebra) -> (Projection, Projection) {
    let mut e_iso = Vec::new();
    let mut f_iso = Vec::new();
    for &n in algebra.block_dims() {
        let u = haar_unitary(rng, n);
        let re = rng.gen_range(0..=n);
        let rf = rng.gen_range(0..=(n - re));
        e_iso.push(u.columns(0, re).into_owned());
        f_iso.push(u.columns(re, rf).into_owned());
    }
    (
        Projection::from_isometry_blocks(algebra, &e_iso).expect("Haar columns"),
        Projection::from_isometry_blocks(algebra, &f_iso).expect("Haar columns"),
    )
}

/// Increasing chain e₁ ≤ e₂ ≤ … ≤ e_m from nested column prefixes of one
/// Haar unitary per block.
pub fn random_chain(rng: &mut ChaCha8Rng, algebra: &Algebra, len: usize) -> Vec<Projection> {
    let units: Vec<CMat> = algebra.block_dims().iter().map(|&n| haar_unitary(rng, n)).collect();
    let mut ranks: Vec<Vec<usize>> = Vec::with_capacity(len);
    let mut prev: Vec<usize> = algebra.block_dims().iter().map(|_| 0).collect();
    for step in 0..len {
        let next: Vec<usize> = prev
            .iter()
            .zip(algebra.block_dims())
            .map(|(&p, &n)| {
                let room = n - p;
                let grow = if step + 1 == len { room } else { rng.gen_range(0..=room) };
                p + grow
            })
            .collect();
        ranks.push(next.clone());
        prev = next;
    }
    ranks
        .into_iter()
        .map(|rs| {
            let isometries: Vec<CMat> = units
                .iter()
                .zip(&rs)
                .map(|(u, &r)| u.columns(0, r).into_owned())
                .collect();
            Projection::from_isometry_blocks(algebra, &isometries).expect("Haar columns")
        })
        .collect()
}

/// Equal-rank Haar pair with rank ≤ ⌊n/2⌋ per block (so that generically
/// e ∧ f = 0 and ‖e − f‖ < 1), suitable for isoclinic interpolation.
pub fn random_admissible_pair(rng: &mut ChaCha8Rng, algebra: &Algebra) -> (Projection, Projection) {
    let ranks: Vec<usize> = algebra
        .block_dims()
        .iter()
        .map(|&n| if n >= 2 { rng.gen_range(1..=(n / 2)) } else { 0 })
        .collect();
    let e = random_projection(rng, algebra, &ranks);
    let f = random_projection(rng, algebra, &ranks);
    (e, f)
}

/// Generic-position pair built from a sampled canonical form: per block
/// m = ⌊n/2⌋ points with principal cosines uniform in [a_lo, a_hi],
/// conjugated by a Haar unitary. Returns the pair and the form that made it.
pub fn random_generic_pair(
    rng: &mut ChaCha8Rng,
    algebra: &Algebra,
    a_lo: f64,
    a_hi: f64,
) -> (Projection, Projection, HalmosForm) {
    let mut a_values = Vec::new();
    let mut block_points = Vec::with_capacity(algebra.n_blocks());
    let mut w_blocks = Vec::with_capacity(algebra.n_blocks());
    for &n in algebra.block_dims() {
        let m = n / 2;
        block_points.push(m);
        let mut run: Vec<f64> = (0..m).map(|_| a_lo + (a_hi - a_lo) * rng.gen::<f64>()).collect();
        run.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
        a_values.extend(run);
        w_blocks.push(haar_unitary(rng, n));
    }
    let form = HalmosForm {
        conjugating_unitary: Element::from_blocks(algebra.clone(), w_blocks).expect("shapes match"),
        a_values,
        block_points,
    };
    let (e, f) = form.reconstruct();
    (e, f, form)
}
