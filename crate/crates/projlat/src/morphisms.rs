//! Morphisms of the projection lattice and their linear extensions.
//!
//! A [`LatticeMorphism`] maps projections to projections. When it preserves
//! complements and joins (audited by [`cortho_audit`]) and the source algebra
//! has no 2×2 block, it extends to a linear map on the whole algebra by
//! applying it inside spectral resolutions ([`spectral_extension`]). The
//! extension of an orthoisomorphism is a Jordan *-isomorphism, audited by
//! [`jordan_audit`]; [`wigner_reconstruct`] then recovers the unitary (or
//! antiunitary) that implements it, block by block.
//!
//! Morphisms carry *claims* rather than guarantees: a fault-injected morphism
//! keeps its claims, and the audits are what exposes the lie — with a witness.

use alloc::boxed::Box;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
// Load-bearing only when no crate in the build graph links std; with std
// present, inherent f64 methods shadow the trait and the import idles.
#[allow(unused_imports)]
use num_traits::Float;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    element_from_hermitian_coords, hermitian_basis, hermitian_coords, hermitian_spectral,
    range_basis, Algebra, CMat, Element, Projection,
};
use crate::error::CoreError;
use crate::lattice::join;
use crate::sample;

const STREAM_CORTHO: u64 = 0x636f_7274;
const STREAM_EQUIV: u64 = 0x6571_7569;
const STREAM_PROBE: u64 = 0x7072_6f62;
const STREAM_JORDAN: u64 = 0x6a6f_7264;
const STREAM_CHAIN: u64 = 0x6368_6169;

// ── Lattice morphisms ───────────────────────────────────────────────────────

/// Structural properties a morphism claims to have. Claims are inputs to the
/// audits, not conclusions from them.
#[derive(Debug, Clone, Copy)]
pub struct MorphismClaims {
    /// Preserves 0, 1, complements, joins, and orthogonal additivity.
    pub cortho: bool,
    /// Is a bijection of the projection lattices.
    pub orthoiso: bool,
}

#[derive(Debug, Clone)]
enum MorphismKind {
    /// p ↦ u·p·u*, optionally transposing first (an antiunitary action).
    Unitary { u: Element, transpose: bool },
    /// Behaves like `base` except near `break_at`, where the output is
    /// flipped to its complement. Keeps the base's claims — audits must
    /// catch the lie.
    Fault { base: Box<LatticeMorphism>, break_at: Projection },
}

#[derive(Debug, Clone)]
pub struct LatticeMorphism {
    source: Algebra,
    target: Algebra,
    claims: MorphismClaims,
    kind: MorphismKind,
}

impl LatticeMorphism {
    /// Conjugation by a unitary, with an optional transpose first.
    /// Claims both cortho and orthoiso (honestly).
    pub fn from_unitary(u: Element, transpose: bool) -> Result<Self, CoreError> {
        let unit = u.algebra().unit();
        let defect = u.adjoint().mul(&u).norm_diff(&unit);
        if defect > 1e-8 {
            return Err(CoreError::NotUnitary { defect });
        }
        Ok(Self {
            source: u.algebra().clone(),
            target: u.algebra().clone(),
            claims: MorphismClaims { cortho: true, orthoiso: true },
            kind: MorphismKind::Unitary { u, transpose },
        })
    }

    /// Replaces the claim set — e.g. to model a map whose properties are
    /// simply not asserted, which the claim-gated extensions must refuse.
    pub fn with_claims(mut self, claims: MorphismClaims) -> Self {
        self.claims = claims;
        self
    }

    /// Wraps this morphism with a fault at `break_at`, keeping its claims.
    pub fn with_fault(self, break_at: Projection) -> Self {
        Self {
            source: self.source.clone(),
            target: self.target.clone(),
            claims: self.claims,
            kind: MorphismKind::Fault { base: Box::new(self), break_at },
        }
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn claims(&self) -> MorphismClaims {
        self.claims
    }

    pub fn apply(&self, p: &Projection) -> Result<Projection, CoreError> {
        if p.algebra() != &self.source {
            return Err(CoreError::AlgebraMismatch);
        }
        match &self.kind {
            MorphismKind::Unitary { u, transpose } => {
                let x = if *transpose { p.element().transpose() } else { p.element().clone() };
                Projection::try_new(u.mul(&x).mul(&u.adjoint()))
            }
            MorphismKind::Fault { base, break_at } => {
                let honest = base.apply(p)?;
                if p.element().norm_diff(break_at.element()) <= 1e-8 {
                    Ok(honest.complement())
                } else {
                    Ok(honest)
                }
            }
        }
    }
}

// ── COrtho audit ────────────────────────────────────────────────────────────

/// Input that achieved the worst residual in an audit.
#[derive(Debug, Clone)]
pub struct AuditWitness {
    pub check: &'static str,
    pub e: Projection,
    pub f: Option<Projection>,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct CorthoReport {
    /// max(‖φ(0)‖, ‖φ(1) − 1‖).
    pub zero_unit_residual: f64,
    /// Worst ‖φ(1−p) − (1 − φ(p))‖.
    pub worst_complement: f64,
    /// Worst ‖φ(e∨f) − φ(e)∨φ(f)‖.
    pub worst_join: f64,
    /// Worst ‖φ(e+f) − φ(e) − φ(f)‖ over orthogonal pairs.
    pub worst_additivity: f64,
    pub witness: Option<AuditWitness>,
}

impl CorthoReport {
    pub fn worst(&self) -> f64 {
        self.zero_unit_residual
            .max(self.worst_complement)
            .max(self.worst_join)
            .max(self.worst_additivity)
    }
}

fn audit_round(
    rng: &mut ChaCha8Rng,
    algebra: &Algebra,
) -> (Projection, (Projection, Projection), (Projection, Projection)) {
    let ranks = sample::random_ranks(rng, algebra);
    let p = sample::random_projection(rng, algebra, &ranks);
    let re = sample::random_ranks(rng, algebra);
    let rf = sample::random_ranks(rng, algebra);
    let e = sample::random_projection(rng, algebra, &re);
    let f = sample::random_projection(rng, algebra, &rf);
    let orth = sample::random_orthogonal_pair(rng, algebra);
    (p, (e, f), orth)
}

/// The complement-check inputs `cortho_audit` will visit for these arguments,
/// in order. Stable by contract, so callers can aim a fault at one of them.
pub fn cortho_audit_inputs(algebra: &Algebra, n_samples: usize, seed: u64) -> Vec<Projection> {
    let mut rng = sample::rng(seed, STREAM_CORTHO);
    (0..n_samples).map(|_| audit_round(&mut rng, algebra).0).collect()
}

/// Audits the claimed COrtho properties on seeded samples.
pub fn cortho_audit(
    phi: &LatticeMorphism,
    n_samples: usize,
    seed: u64,
) -> Result<CorthoReport, CoreError> {
    let algebra = phi.source().clone();
    let mut rng = sample::rng(seed, STREAM_CORTHO);

    let zero = algebra.zero_projection();
    let unit = algebra.unit_projection();
    let z = phi.apply(&zero)?.element().operator_norm();
    let u = phi.apply(&unit)?.element().norm_diff(&phi.target().unit());
    let zero_unit_residual = z.max(u);

    let mut report = CorthoReport {
        zero_unit_residual,
        worst_complement: 0.0,
        worst_join: 0.0,
        worst_additivity: 0.0,
        witness: None,
    };
    let note = |check: &'static str, e: &Projection, f: Option<&Projection>, r: f64, slot: &mut f64, witness: &mut Option<AuditWitness>| {
        if r > *slot {
            *slot = r;
        }
        let record = witness.as_ref().map_or(true, |w| r > w.residual);
        if record && r > 0.0 {
            *witness = Some(AuditWitness { check, e: e.clone(), f: f.cloned(), residual: r });
        }
    };

    for _ in 0..n_samples {
        let (p, (e, f), (g, h)) = audit_round(&mut rng, &algebra);

        let lhs = phi.apply(&p.complement())?;
        let rhs = phi.apply(&p)?.complement();
        let r = lhs.norm_diff(&rhs);
        note("complement", &p, None, r, &mut report.worst_complement, &mut report.witness);

        let lhs = phi.apply(&join(&e, &f)?)?;
        let rhs = join(&phi.apply(&e)?, &phi.apply(&f)?)?;
        let r = lhs.norm_diff(&rhs);
        note("join", &e, Some(&f), r, &mut report.worst_join, &mut report.witness);

        let sum = Projection::try_new(g.element() + h.element())?;
        let lhs = phi.apply(&sum)?;
        let rhs = phi.apply(&g)?.element() + phi.apply(&h)?.element();
        let r = lhs.element().norm_diff(&rhs);
        note("additivity", &g, Some(&h), r, &mut report.worst_additivity, &mut report.witness);
    }
    Ok(report)
}

/// Worst residual of φ((1−2p)·q·(1−2p)) = (1−2φ(p))·φ(q)·(1−2φ(p)) over
/// seeded pairs: the symmetry around p acts equivariantly through φ.
pub fn equivariance_check(
    phi: &LatticeMorphism,
    n_pairs: usize,
    seed: u64,
) -> Result<f64, CoreError> {
    let algebra = phi.source().clone();
    let mut rng = sample::rng(seed, STREAM_EQUIV);
    let two = Complex64::new(2.0, 0.0);
    let mut worst = 0.0f64;
    for _ in 0..n_pairs {
        let rp = sample::random_ranks(&mut rng, &algebra);
        let rq = sample::random_ranks(&mut rng, &algebra);
        let p = sample::random_projection(&mut rng, &algebra, &rp);
        let q = sample::random_projection(&mut rng, &algebra, &rq);
        let s = &algebra.unit() - &p.element().scale(two);
        let sqs = Projection::try_new(s.mul(q.element()).mul(&s))?;
        let lhs = phi.apply(&sqs)?;
        let t = &phi.target().unit() - &phi.apply(&p)?.element().scale(two);
        let rhs = t.mul(phi.apply(&q)?.element()).mul(&t);
        worst = worst.max(lhs.element().norm_diff(&rhs));
    }
    Ok(worst)
}

// ── Spectral extension ──────────────────────────────────────────────────────

/// Applies φ inside the spectral resolution: x = Σλᵢpᵢ ↦ Σλᵢφ(pᵢ).
pub fn spectral_apply(phi: &LatticeMorphism, x: &Element) -> Result<Element, CoreError> {
    let res = hermitian_spectral(x, None)?;
    let mut acc = phi.target().zero();
    for (lambda, p) in res.iter() {
        acc = &acc + &phi.apply(p)?.element().scale(Complex64::new(lambda, 0.0));
    }
    Ok(acc)
}

/// A real-linear map between the algebras, stored as its matrix over the
/// Hermitian coordinate bases and extended complex-linearly to the rest.
#[derive(Debug, Clone)]
pub struct LinearMapOnAlgebra {
    source: Algebra,
    target: Algebra,
    matrix: DMatrix<f64>,
}

impl LinearMapOnAlgebra {
    /// Assembles the matrix by evaluating `f` on the Hermitian basis.
    pub fn from_fn(
        source: &Algebra,
        target: &Algebra,
        mut f: impl FnMut(&Element) -> Result<Element, CoreError>,
    ) -> Result<Self, CoreError> {
        let mut matrix = DMatrix::zeros(target.coordinate_dim(), source.coordinate_dim());
        for (j, b) in hermitian_basis(source).iter().enumerate() {
            let y = f(b)?;
            for (i, c) in hermitian_coords(&y).iter().enumerate() {
                matrix[(i, j)] = *c;
            }
        }
        Ok(Self { source: source.clone(), target: target.clone(), matrix })
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    fn apply_hermitian(&self, h: &Element) -> Element {
        let v = DVector::from_vec(hermitian_coords(h));
        let y = &self.matrix * v;
        element_from_hermitian_coords(&self.target, y.as_slice())
    }

    /// Evaluates the map, splitting x into Hermitian parts.
    pub fn apply(&self, x: &Element) -> Element {
        let adj = x.adjoint();
        let h = (x + &adj).scale(Complex64::new(0.5, 0.0));
        let k = (x - &adj).scale(Complex64::new(0.0, -0.5));
        let yh = self.apply_hermitian(&h);
        let yk = self.apply_hermitian(&k);
        &yh + &yk.scale(Complex64::new(0.0, 1.0))
    }

    /// (smallest, largest) singular value of the coordinate matrix; a
    /// bijective extension has the smallest bounded well away from zero.
    pub fn singular_extremes(&self) -> (f64, f64) {
        let sv = self.matrix.clone().svd(false, false).singular_values;
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for &s in sv.iter() {
            lo = lo.min(s);
            hi = hi.max(s);
        }
        (lo, hi)
    }
}

/// Extends a claimed-COrtho morphism to a linear map by applying it through
/// spectral resolutions of the Hermitian basis. Needs a 2×2-free source.
pub fn spectral_extension(phi: &LatticeMorphism) -> Result<LinearMapOnAlgebra, CoreError> {
    if !phi.claims().cortho {
        return Err(CoreError::ClaimMissing { claim: "cortho" });
    }
    if phi.source().has_two_dim_block() {
        return Err(CoreError::TypeI2Present);
    }
    LinearMapOnAlgebra::from_fn(phi.source(), phi.target(), |b| spectral_apply(phi, b))
}

/// Worst ‖S(x+y) − S(x) − S(y)‖ for S = [`spectral_apply`] over seeded pairs
/// of non-commuting Hermitians — the nontrivial half of linearity.
pub fn additivity_probe(
    phi: &LatticeMorphism,
    n_pairs: usize,
    seed: u64,
) -> Result<f64, CoreError> {
    let algebra = phi.source().clone();
    let mut rng = sample::rng(seed, STREAM_PROBE);
    let mut worst = 0.0f64;
    for _ in 0..n_pairs {
        let (x, y) = loop {
            let x = sample::random_hermitian(&mut rng, &algebra, 1.0);
            let y = sample::random_hermitian(&mut rng, &algebra, 1.0);
            let commutator = x.mul(&y).norm_diff(&y.mul(&x));
            if commutator > 1e-6 || algebra.max_block_dim() == 1 {
                break (x, y);
            }
        };
        let lhs = spectral_apply(phi, &(&x + &y))?;
        let rhs = &spectral_apply(phi, &x)? + &spectral_apply(phi, &y)?;
        worst = worst.max(lhs.norm_diff(&rhs));
    }
    Ok(worst)
}

// ── Jordan audit ────────────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy)]
pub struct JordanReport {
    /// Worst ‖Φ(x*) − Φ(x)*‖ over general elements.
    pub worst_star: f64,
    /// Worst ‖Φ(h²) − Φ(h)²‖ over Hermitian h.
    pub worst_square: f64,
    /// Worst projection defect of Φ(p) over projections p.
    pub worst_projection: f64,
    /// Worst ‖Φ(hkh) − Φ(h)Φ(k)Φ(h)‖ over Hermitian pairs.
    pub worst_triple: f64,
}

impl JordanReport {
    pub fn worst(&self) -> f64 {
        self.worst_star.max(self.worst_square).max(self.worst_projection).max(self.worst_triple)
    }
}

/// Audits the Jordan *-morphism identities of a linear map on seeded samples.
pub fn jordan_audit(map: &LinearMapOnAlgebra, n_samples: usize, seed: u64) -> JordanReport {
    let algebra = map.source().clone();
    let mut rng = sample::rng(seed, STREAM_JORDAN);
    let mut report = JordanReport {
        worst_star: 0.0,
        worst_square: 0.0,
        worst_projection: 0.0,
        worst_triple: 0.0,
    };
    for _ in 0..n_samples {
        let h = sample::random_hermitian(&mut rng, &algebra, 1.0);
        let k = sample::random_hermitian(&mut rng, &algebra, 1.0);
        let x = &h + &k.scale(Complex64::new(0.0, 1.0));

        let star = map.apply(&x.adjoint()).norm_diff(&map.apply(&x).adjoint());
        report.worst_star = report.worst_star.max(star);

        let square = map.apply(&h.mul(&h)).norm_diff(&map.apply(&h).mul(&map.apply(&h)));
        report.worst_square = report.worst_square.max(square);

        let ranks = sample::random_ranks(&mut rng, &algebra);
        let p = sample::random_projection(&mut rng, &algebra, &ranks);
        report.worst_projection =
            report.worst_projection.max(map.apply(p.element()).projection_defect());

        let triple = map
            .apply(&h.mul(&k).mul(&h))
            .norm_diff(&map.apply(&h).mul(&map.apply(&k)).mul(&map.apply(&h)));
        report.worst_triple = report.worst_triple.max(triple);
    }
    report
}

/// The standing non-example: x ↦ x + tr(x)·1/dim. Linear, *-preserving, and
/// trace-shaped — but not Jordan: it breaks Φ(h²) = Φ(h)² at order one.
pub fn trace_shift_map(algebra: &Algebra) -> LinearMapOnAlgebra {
    let dim = algebra.total_dim() as f64;
    let unit = algebra.unit();
    LinearMapOnAlgebra::from_fn(algebra, algebra, |b| {
        Ok(&b.clone() + &unit.scale(b.trace() / Complex64::new(dim, 0.0)))
    })
    .expect("assembly cannot fail")
}

// ── Join continuity ─────────────────────────────────────────────────────────

/// Worst ‖φ(e_m) − ⋁ᵢ φ(eᵢ)‖ over seeded increasing chains: joins of images
/// reach the image of the top. A finite surrogate for join-continuity.
pub fn join_continuity_audit(
    phi: &LatticeMorphism,
    n_chains: usize,
    chain_len: usize,
    seed: u64,
) -> Result<f64, CoreError> {
    let algebra = phi.source().clone();
    let mut rng = sample::rng(seed, STREAM_CHAIN);
    let mut worst = 0.0f64;
    for _ in 0..n_chains {
        let chain = sample::random_chain(&mut rng, &algebra, chain_len);
        let top = phi.apply(chain.last().expect("nonempty chain"))?;
        let mut acc = phi.target().zero_projection();
        for e in &chain {
            acc = join(&acc, &phi.apply(e)?)?;
        }
        worst = worst.max(top.norm_diff(&acc));
    }
    Ok(worst)
}

// ── Wigner reconstruction ───────────────────────────────────────────────────

/// The unitary form recovered from an orthoisomorphism: per source block k,
/// block k of `unitary` maps the source block onto target block
/// `block_permutation[k]`, with `p ↦ U·p·U*` (or `U·pᵀ·U*` when
/// `antiunitary`). `fidelity` is the worst overlap tr(φ(p)·U p U*) over the
/// tomography probe family.
#[derive(Debug, Clone)]
pub struct WignerReconstruction {
    pub unitary: Element,
    pub block_permutation: Vec<usize>,
    pub antiunitary: bool,
    pub fidelity: f64,
}

fn embedded_vector_projection(
    algebra: &Algebra,
    k: usize,
    v: &DVector<Complex64>,
) -> Projection {
    let isometries: Vec<CMat> = algebra
        .block_dims()
        .iter()
        .enumerate()
        .map(|(b, &m)| {
            if b == k {
                let mut iso = CMat::zeros(m, 1);
                iso.set_column(0, v);
                iso
            } else {
                CMat::zeros(m, 0)
            }
        })
        .collect();
    Projection::from_isometry_blocks(algebra, &isometries).expect("unit vector")
}

fn fail(reason: &'static str) -> CoreError {
    CoreError::ReconstructionFailed { fidelity: 0.0, reason }
}

/// Recovers the implementing (anti)unitary of a claimed orthoisomorphism on
/// an algebra with all blocks of dimension ≥ 3.
pub fn wigner_reconstruct(phi: &LatticeMorphism) -> Result<WignerReconstruction, CoreError> {
    if !phi.claims().orthoiso {
        return Err(CoreError::ClaimMissing { claim: "orthoiso" });
    }
    let source = phi.source().clone();
    let target = phi.target().clone();
    if source.block_dims().iter().any(|&n| n < 3) {
        return Err(fail("source block of dimension < 3"));
    }

    // Block permutation from central covers: the image of each central
    // projection must fill whole target blocks.
    let mut permutation = Vec::with_capacity(source.n_blocks());
    for k in 0..source.n_blocks() {
        let central: Vec<CMat> = source
            .block_dims()
            .iter()
            .enumerate()
            .map(|(b, &m)| if b == k { CMat::identity(m, m) } else { CMat::zeros(m, 0) })
            .collect();
        let z = Projection::from_isometry_blocks(&source, &central).expect("identity blocks");
        let image = phi.apply(&z)?;
        let ranks = image.ranks();
        let mut hit = None;
        for (b, (&r, &nb)) in ranks.iter().zip(target.block_dims()).enumerate() {
            if r == 0 {
                continue;
            }
            if r != nb || hit.is_some() {
                return Err(fail("image of a central projection is not a single block"));
            }
            hit = Some(b);
        }
        let t = hit.ok_or_else(|| fail("central projection maps to zero"))?;
        if target.block_dims()[t] != source.block_dims()[k] {
            return Err(fail("matched blocks have different dimensions"));
        }
        if permutation.contains(&t) {
            return Err(fail("two central projections map into one block"));
        }
        permutation.push(t);
    }

    let mut u_blocks: Vec<CMat> = Vec::with_capacity(source.n_blocks());
    let mut flags: Vec<bool> = Vec::with_capacity(source.n_blocks());
    let inv_sqrt2 = Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);

    for (k, &n) in source.block_dims().iter().enumerate() {
        let t = permutation[k];
        // Columns from images of the coordinate rank-1 projections.
        let mut cols: Vec<DVector<Complex64>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = DVector::zeros(n);
            v[i] = Complex64::new(1.0, 0.0);
            let q = phi.apply(&embedded_vector_projection(&source, k, &v))?;
            let basis = range_basis(&q);
            if basis[t].ncols() != 1 {
                return Err(fail("image of a coordinate projection is not rank one"));
            }
            cols.push(basis[t].column(0).into_owned());
        }
        // Phase alignment against the first coordinate via the (e₀+eⱼ)/√2
        // probes: the probe image must overlap both columns.
        for j in 1..n {
            let mut v = DVector::zeros(n);
            v[0] = inv_sqrt2;
            v[j] = inv_sqrt2;
            let q = phi.apply(&embedded_vector_projection(&source, k, &v))?;
            let qb = q.element().block(t);
            let c = cols[0].dotc(&(qb * &cols[j]));
            if c.norm() < 0.1 {
                return Err(fail("phase probe lost overlap"));
            }
            let phase = c.conj() / Complex64::new(c.norm(), 0.0);
            cols[j] = &cols[j] * phase;
        }
        // Conjugation type from the (e₀+i·e₁)/√2 probe: its image sees the
        // entry −i/2 in the aligned frame for a unitary action, +i/2 for an
        // antiunitary one.
        let mut v = DVector::zeros(n);
        v[0] = inv_sqrt2;
        v[1] = inv_sqrt2 * Complex64::new(0.0, 1.0);
        let q = phi.apply(&embedded_vector_projection(&source, k, &v))?;
        let c = cols[0].dotc(&(q.element().block(t) * &cols[1]));
        if c.im.abs() < 0.1 {
            return Err(fail("conjugation probe is ambiguous"));
        }
        flags.push(c.im > 0.0);

        let mut u = CMat::zeros(n, n);
        for (i, col) in cols.iter().enumerate() {
            u.set_column(i, col);
        }
        u_blocks.push(u);
    }

    if flags.iter().any(|&f| f != flags[0]) {
        return Err(fail("blocks disagree on conjugation type"));
    }
    let antiunitary = flags[0];
    let unitary = Element::from_blocks(source.clone(), u_blocks)?;

    // Fidelity over the full tomography family of every block.
    let mut fidelity = f64::INFINITY;
    for (k, &n) in source.block_dims().iter().enumerate() {
        let t = permutation[k];
        let u = unitary.block(k);
        let mut probe = |v: &DVector<Complex64>| -> Result<(), CoreError> {
            let p = embedded_vector_projection(&source, k, v);
            let image = phi.apply(&p)?;
            let pb = p.element().block(k);
            let model = if antiunitary { u * pb.conjugate() * u.adjoint() } else { u * pb * u.adjoint() };
            let overlap = (image.element().block(t) * model).diagonal().sum().re;
            fidelity = fidelity.min(overlap);
            Ok(())
        };
        for i in 0..n {
            let mut v = DVector::zeros(n);
            v[i] = Complex64::new(1.0, 0.0);
            probe(&v)?;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let mut v = DVector::zeros(n);
                v[i] = inv_sqrt2;
                v[j] = inv_sqrt2;
                probe(&v)?;
                let mut w = DVector::zeros(n);
                w[i] = inv_sqrt2;
                w[j] = inv_sqrt2 * Complex64::new(0.0, 1.0);
                probe(&w)?;
            }
        }
    }

    Ok(WignerReconstruction { unitary, block_permutation: permutation, antiunitary, fidelity })
}
