mod common;

use num_complex::Complex64;

use projlat::algebra::{CMat, Algebra, Element, Projection};
use projlat::morphisms::{
    additivity_probe, cortho_audit, cortho_audit_inputs, equivariance_check, jordan_audit,
    join_continuity_audit, spectral_apply, spectral_extension, trace_shift_map, wigner_reconstruct,
    LatticeMorphism, LinearMapOnAlgebra, MorphismClaims,
};
use projlat::{sample, CoreError};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn haar_morphism(algebra: &Algebra, seed: u64, transpose: bool) -> LatticeMorphism {
    let mut rng = sample::rng(seed, 0);
    let blocks: Vec<CMat> = algebra
        .block_dims()
        .iter()
        .map(|&n| sample::haar_unitary(&mut rng, n))
        .collect();
    let u = Element::from_blocks(algebra.clone(), blocks).unwrap();
    LatticeMorphism::from_unitary(u, transpose).unwrap()
}

// ── COrtho audits ───────────────────────────────────────────────────────────

#[test]
fn unitary_conjugation_passes_the_cortho_audit() {
    let algebra = Algebra::new(vec![3, 2]).unwrap();
    let phi = haar_morphism(&algebra, 61, false);
    let report = cortho_audit(&phi, 12, 500).unwrap();
    assert!(report.worst() < 1e-8, "worst residual {}", report.worst());
    assert!(report.zero_unit_residual < 1e-10);
}

#[test]
fn transposed_conjugation_also_passes() {
    let algebra = Algebra::new(vec![3]).unwrap();
    let phi = haar_morphism(&algebra, 62, true);
    let report = cortho_audit(&phi, 12, 501).unwrap();
    assert!(report.worst() < 1e-8, "worst residual {}", report.worst());
}

#[test]
fn fault_injection_is_caught_with_a_witness() {
    let algebra = Algebra::new(vec![3, 2]).unwrap();
    let seed = 502;
    let n_samples = 10;
    // Aim the fault at a projection the audit is guaranteed to visit.
    let visits = cortho_audit_inputs(&algebra, n_samples, seed);
    let target = visits[4].clone();
    let phi = haar_morphism(&algebra, 63, false).with_fault(target.clone());

    let report = cortho_audit(&phi, n_samples, seed).unwrap();
    assert!(report.worst() >= 0.9, "fault slipped through: {}", report.worst());
    let witness = report.witness.expect("worst input recorded");
    assert!(witness.residual >= 0.9);
    // The recorded witness is the planted break point.
    assert!(witness.e.norm_diff(&target) < 1e-9 || witness.check != "complement");

    // The same morphism audited on a disjoint schedule stays clean: the
    // fault only fires on its planted input.
    let clean = cortho_audit(&phi, n_samples, seed + 1).unwrap();
    assert!(clean.worst() < 1e-8, "unexpected residual {}", clean.worst());
}

#[test]
fn equivariance_of_symmetries_through_the_morphism() {
    let algebra = Algebra::new(vec![3, 2]).unwrap();
    let phi = haar_morphism(&algebra, 64, false);
    let worst = equivariance_check(&phi, 10, 503).unwrap();
    assert!(worst < 1e-8, "worst residual {worst}");
    // The transpose variant is equally equivariant.
    let psi = haar_morphism(&algebra, 65, true);
    let worst_t = equivariance_check(&psi, 10, 504).unwrap();
    assert!(worst_t < 1e-8, "worst residual {worst_t}");
}

// ── Spectral extension ──────────────────────────────────────────────────────

#[test]
fn spectral_apply_matches_direct_conjugation() {
    // Conjugation commutes with the spectral calculus: Σλᵢ·u·pᵢ·u* must be
    // u·x·u* itself, so the two routes to φ(x) cross-check each other.
    let algebra = Algebra::new(vec![4, 3]).unwrap();
    let mut rng = sample::rng(66, 0);
    let blocks: Vec<CMat> = algebra
        .block_dims()
        .iter()
        .map(|&n| sample::haar_unitary(&mut rng, n))
        .collect();
    let u = Element::from_blocks(algebra.clone(), blocks).unwrap();
    let phi = LatticeMorphism::from_unitary(u.clone(), false).unwrap();
    for _ in 0..5 {
        let x = sample::random_hermitian(&mut rng, &algebra, 1.0);
        let via_spectral = spectral_apply(&phi, &x).unwrap();
        let direct = u.mul(&x).mul(&u.adjoint());
        assert!(
            via_spectral.norm_diff(&direct) < 1e-8 * (1.0 + x.operator_norm()),
            "spectral route drifted by {}",
            via_spectral.norm_diff(&direct)
        );
    }
}

#[test]
fn spectral_extension_is_linear_and_jordan() {
    let algebra = Algebra::new(vec![3, 4]).unwrap();
    let phi = haar_morphism(&algebra, 68, false);
    let ext = spectral_extension(&phi).unwrap();
    let report = jordan_audit(&ext, 8, 505);
    assert!(report.worst() < 1e-7, "jordan residuals {report:?}");
    // A unitary conjugation is an isometry in Hermitian coordinates.
    let (lo, hi) = ext.singular_extremes();
    assert!((lo - 1.0).abs() < 1e-8, "smallest singular value {lo}");
    assert!((hi - 1.0).abs() < 1e-8, "largest singular value {hi}");
    // Additivity on non-commuting inputs, the nontrivial half of linearity.
    let probe = additivity_probe(&phi, 6, 506).unwrap();
    assert!(probe < 1e-7, "additivity defect {probe}");
}

#[test]
fn extension_needs_the_cortho_claim_and_a_two_free_source() {
    let algebra = Algebra::new(vec![3]).unwrap();
    let phi = haar_morphism(&algebra, 69, false)
        .with_claims(MorphismClaims { cortho: false, orthoiso: false });
    assert!(matches!(
        spectral_extension(&phi),
        Err(CoreError::ClaimMissing { claim: "cortho" })
    ));
    let with_two = Algebra::new(vec![3, 2]).unwrap();
    let psi = haar_morphism(&with_two, 70, false);
    assert!(matches!(spectral_extension(&psi), Err(CoreError::TypeI2Present)));
}

#[test]
fn extension_of_transpose_is_jordan_but_antimultiplicative() {
    let algebra = Algebra::new(vec![3]).unwrap();
    let phi = haar_morphism(&algebra, 71, true);
    let ext = spectral_extension(&phi).unwrap();
    let report = jordan_audit(&ext, 8, 507);
    assert!(report.worst() < 1e-7, "jordan residuals {report:?}");

    // But it is not multiplicative: Φ(hk) = Φ(k)Φ(h) instead. Witness pair:
    // a symmetric flip and a diagonal sign.
    let mut hb = CMat::zeros(3, 3);
    hb[(0, 1)] = c(1.0, 0.0);
    hb[(1, 0)] = c(1.0, 0.0);
    let h = Element::from_blocks(algebra.clone(), vec![hb]).unwrap();
    let mut kb = CMat::zeros(3, 3);
    kb[(0, 0)] = c(1.0, 0.0);
    kb[(1, 1)] = c(-1.0, 0.0);
    let k = Element::from_blocks(algebra.clone(), vec![kb]).unwrap();
    let defect = ext.apply(&h.mul(&k)).norm_diff(&ext.apply(&h).mul(&ext.apply(&k)));
    assert!(defect > 1.0, "transpose looked multiplicative: defect {defect}");
    let anti = ext.apply(&h.mul(&k)).norm_diff(&ext.apply(&k).mul(&ext.apply(&h)));
    assert!(anti < 1e-8, "antimultiplicative defect {anti}");
}

#[test]
fn trace_shift_is_linear_but_fails_the_square_identity() {
    let algebra = Algebra::new(vec![3]).unwrap();
    let map = trace_shift_map(&algebra);
    let report = jordan_audit(&map, 8, 508);
    // Star and linearity hold; squares fail at order one.
    assert!(report.worst_star < 1e-10, "star residual {}", report.worst_star);
    assert!(report.worst_square > 0.1, "square residual {}", report.worst_square);
    assert!(report.worst() > 0.1);
    // Where it fails, concretely: Φ(1) = 2 on the unit of a dim-3 factor.
    let unit = algebra.unit();
    let image = map.apply(&unit);
    assert!(image.norm_diff(&unit.scale(c(2.0, 0.0))) < 1e-10);
}

// ── Join continuity ─────────────────────────────────────────────────────────

#[test]
fn joins_of_images_reach_the_image_of_the_top() {
    let algebra = Algebra::new(vec![3, 2]).unwrap();
    let phi = haar_morphism(&algebra, 72, false);
    let worst = join_continuity_audit(&phi, 6, 4, 509).unwrap();
    assert!(worst < 1e-8, "worst residual {worst}");
}

#[test]
fn sampled_chains_are_increasing_and_exhaustive() {
    let algebra = Algebra::new(vec![3, 2]).unwrap();
    let mut rng = sample::rng(73, 0);
    let chain = sample::random_chain(&mut rng, &algebra, 5);
    assert_eq!(chain.len(), 5);
    for w in chain.windows(2) {
        // eᵢ ≤ eᵢ₊₁: the smaller is absorbed by the larger.
        let prod = w[1].element().mul(w[0].element());
        assert!(prod.norm_diff(w[0].element()) < 1e-10);
    }
    assert!(chain.last().unwrap().element().norm_diff(&algebra.unit()) < 1e-10);
}

// ── Wigner reconstruction ───────────────────────────────────────────────────

#[test]
fn wigner_recovers_a_unitary_action() {
    let algebra = Algebra::new(vec![3, 4]).unwrap();
    let phi = haar_morphism(&algebra, 74, false);
    let rec = wigner_reconstruct(&phi).unwrap();
    assert!(!rec.antiunitary);
    assert_eq!(rec.block_permutation, vec![0, 1]);
    assert!(rec.fidelity > 1.0 - 1e-8, "fidelity {}", rec.fidelity);
    // The recovered unitary implements the morphism on fresh samples.
    let u = &rec.unitary;
    assert!(u.adjoint().mul(u).norm_diff(&algebra.unit()) < 1e-8);
    let mut rng = sample::rng(75, 0);
    for _ in 0..4 {
        let ranks = sample::random_ranks(&mut rng, &algebra);
        let p = sample::random_projection(&mut rng, &algebra, &ranks);
        let model = u.mul(p.element()).mul(&u.adjoint());
        let image = phi.apply(&p).unwrap();
        assert!(image.element().norm_diff(&model) < 1e-7);
    }
}

#[test]
fn wigner_detects_an_antiunitary_action() {
    let algebra = Algebra::new(vec![3]).unwrap();
    let phi = haar_morphism(&algebra, 76, true);
    let rec = wigner_reconstruct(&phi).unwrap();
    assert!(rec.antiunitary);
    assert!(rec.fidelity > 1.0 - 1e-8, "fidelity {}", rec.fidelity);
    // Model: p ↦ U·p̄·U* (the conjugate of a Hermitian p is its transpose).
    let u = &rec.unitary;
    let mut rng = sample::rng(77, 0);
    for _ in 0..4 {
        let p = sample::random_projection(&mut rng, &algebra, &[1]);
        let model = u.mul(&p.element().transpose()).mul(&u.adjoint());
        let image = phi.apply(&p).unwrap();
        assert!(image.element().norm_diff(&model) < 1e-7);
    }
}

#[test]
fn wigner_requires_blocks_of_dimension_three() {
    let algebra = Algebra::new(vec![2, 3]).unwrap();
    let phi = haar_morphism(&algebra, 78, false);
    match wigner_reconstruct(&phi) {
        Err(CoreError::ReconstructionFailed { reason, .. }) => {
            assert!(reason.contains("dimension < 3"), "reason: {reason}");
        }
        other => panic!("expected ReconstructionFailed, got {other:?}"),
    }
}

#[test]
fn wigner_requires_the_orthoiso_claim() {
    let algebra = Algebra::new(vec![3]).unwrap();
    let phi = haar_morphism(&algebra, 79, false)
        .with_claims(MorphismClaims { cortho: true, orthoiso: false });
    assert!(matches!(
        wigner_reconstruct(&phi),
        Err(CoreError::ClaimMissing { claim: "orthoiso" })
    ));
}

#[test]
fn wigner_flags_a_faulted_morphism_through_fidelity() {
    // Break the morphism on a probe the reconstruction itself uses: the
    // coordinate projection e₀ of the first block.
    let algebra = Algebra::new(vec![3]).unwrap();
    let mut v = nalgebra::DVector::zeros(3);
    v[0] = c(1.0, 0.0);
    let mut iso = CMat::zeros(3, 1);
    iso.set_column(0, &v);
    let e0 = Projection::from_isometry_blocks(&algebra, &[iso]).unwrap();
    let phi = haar_morphism(&algebra, 80, false).with_fault(e0);
    match wigner_reconstruct(&phi) {
        // Either the rank check trips (image has rank 2) …
        Err(CoreError::ReconstructionFailed { .. }) => {}
        // … or the assembled unitary exposes the lie as lost fidelity.
        Ok(rec) => assert!(rec.fidelity < 0.9, "fidelity {}", rec.fidelity),
        Err(other) => panic!("unexpected error: {other:?}"),
    }
}

// ── Linear maps assembled by hand ───────────────────────────────────────────

#[test]
fn linear_map_assembly_reproduces_its_closure() {
    let algebra = Algebra::new(vec![2, 3]).unwrap();
    let map = LinearMapOnAlgebra::from_fn(&algebra, &algebra, |b| Ok(b.adjoint())).unwrap();
    let mut rng = sample::rng(81, 0);
    let h = sample::random_hermitian(&mut rng, &algebra, 1.0);
    // On Hermitian elements the adjoint is the identity.
    assert!(map.apply(&h).norm_diff(&h) < 1e-10);
    let x = &h + &sample::random_hermitian(&mut rng, &algebra, 1.0).scale(c(0.0, 1.0));
    // Complex-linear extension of a real-linear recipe: x ↦ re(x) − i·im(x)
    // applied coordinate-wise becomes x itself here because the recipe is
    // the identity on both Hermitian parts.
    assert!(map.apply(&x).norm_diff(&x) < 1e-10);
}
