mod common;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

use projlat::algebra::{
    element_from_hermitian_coords, hermitian_basis, hermitian_coords, hermitian_spectral,
    polar_decomposition, range_basis, range_projection, CMat, Algebra, Element, Projection,
};
use projlat::{sample, CoreError};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn diag_element(algebra: &Algebra, entries: &[f64]) -> Element {
    let mut blocks = Vec::new();
    let mut pos = 0;
    for &n in algebra.block_dims() {
        let mut b = CMat::zeros(n, n);
        for i in 0..n {
            b[(i, i)] = c(entries[pos], 0.0);
            pos += 1;
        }
        blocks.push(b);
    }
    Element::from_blocks(algebra.clone(), blocks).unwrap()
}

#[test]
fn operator_norm_picks_largest_singular_value() {
    let algebra = Algebra::new(vec![2]).unwrap();
    let x = diag_element(&algebra, &[3.0, -4.0]);
    assert!((x.operator_norm() - 4.0).abs() < 1e-12);
    assert!((x.trace_norm() - 7.0).abs() < 1e-12);
    assert!((algebra.unit().operator_norm() - 1.0).abs() < 1e-12);
    assert_eq!(algebra.zero().operator_norm(), 0.0);
}

#[test]
fn norms_match_hand_rolled_singular_values() {
    let algebra = Algebra::new(vec![3, 2]).unwrap();
    let mut rng = sample::rng(11, 0);
    let x = sample::random_hermitian(&mut rng, &algebra, 1.5);
    let y = &x + &sample::random_hermitian(&mut rng, &algebra, 0.5)
        .scale(c(0.0, 1.0));
    let mut all: Vec<f64> = Vec::new();
    for b in y.blocks() {
        all.extend(common::singular_values(b));
    }
    let top = all.iter().cloned().fold(0.0, f64::max);
    let sum: f64 = all.iter().sum();
    assert!((y.operator_norm() - top).abs() < 1e-8 * (1.0 + top));
    assert!((y.trace_norm() - sum).abs() < 1e-8 * (1.0 + sum));
}

#[test]
fn projection_certification_rejects_non_idempotents() {
    let algebra = Algebra::new(vec![2]).unwrap();
    let half = algebra.unit().scale(c(0.5, 0.0));
    match Projection::try_new(half) {
        Err(CoreError::NotProjection { defect, .. }) => {
            assert!((defect - 0.25).abs() < 1e-12);
        }
        other => panic!("expected NotProjection, got {other:?}"),
    }
    let skew = Element::from_blocks(
        algebra.clone(),
        vec![CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.3, 0.0), c(0.0, 0.0), c(0.0, 0.0)])],
    )
    .unwrap();
    assert!(Projection::try_new(skew).is_err());
}

#[test]
fn spectral_resolution_of_diagonal_example() {
    let algebra = Algebra::new(vec![3]).unwrap();
    let x = diag_element(&algebra, &[1.0, 1.0, 0.0]);
    let res = hermitian_spectral(&x, None).unwrap();
    assert_eq!(res.len(), 2);
    assert!((res.eigenvalues()[0] - 0.0).abs() < 1e-12);
    assert!((res.eigenvalues()[1] - 1.0).abs() < 1e-12);
    assert_eq!(res.projections()[0].rank(), 1);
    assert_eq!(res.projections()[1].rank(), 2);
    assert!(res.reconstruct().norm_diff(&x) < 1e-12);
}

#[test]
fn spectral_resolution_of_zero_keeps_the_unit() {
    let algebra = Algebra::new(vec![2, 1]).unwrap();
    let res = hermitian_spectral(&algebra.zero(), None).unwrap();
    assert_eq!(res.len(), 1);
    assert_eq!(res.eigenvalues()[0], 0.0);
    assert!(res.projections()[0].element().norm_diff(&algebra.unit()) < 1e-12);
}

#[test]
fn spectral_rejects_non_hermitian_input() {
    let algebra = Algebra::new(vec![2]).unwrap();
    let skew = Element::from_blocks(
        algebra,
        vec![CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])],
    )
    .unwrap();
    assert!(matches!(
        hermitian_spectral(&skew, None),
        Err(CoreError::NotSelfAdjoint { .. })
    ));
}

#[test]
fn spectral_eigenvalues_match_jacobi_oracle() {
    let algebra = Algebra::new(vec![4, 3]).unwrap();
    let mut rng = sample::rng(7, 0);
    let x = sample::random_hermitian(&mut rng, &algebra, 2.0);
    let res = hermitian_spectral(&x, Some(0.0)).unwrap();

    for (k, block) in x.blocks().iter().enumerate() {
        let expected = common::hermitian_eigenvalues(block);
        let mut got = Vec::new();
        for (lambda, p) in res.iter() {
            for _ in 0..p.ranks()[k] {
                got.push(lambda);
            }
        }
        assert_eq!(got.len(), expected.len());
        for (g, e) in got.iter().zip(&expected) {
            assert!((g - e).abs() < 1e-8 * (1.0 + x.operator_norm()), "{g} vs {e}");
        }
    }

    let total: usize = res.projections().iter().map(|p| p.rank()).sum();
    assert_eq!(total, algebra.total_dim());
    assert!(res.reconstruct().norm_diff(&x) < 1e-9 * (1.0 + x.operator_norm()));
}

#[test]
fn spectral_projections_are_orthogonal_resolution() {
    let algebra = Algebra::new(vec![5]).unwrap();
    let mut rng = sample::rng(21, 0);
    let x = sample::random_hermitian(&mut rng, &algebra, 1.0);
    let res = hermitian_spectral(&x, None).unwrap();
    let mut sum = algebra.zero();
    for (_, p) in res.iter() {
        sum = &sum + p.element();
    }
    assert!(sum.norm_diff(&algebra.unit()) < 1e-10);
    for i in 0..res.len() {
        for j in 0..res.len() {
            let prod = res.projections()[i].element().mul(res.projections()[j].element());
            if i == j {
                assert!(prod.norm_diff(res.projections()[i].element()) < 1e-10);
            } else {
                assert!(prod.operator_norm() < 1e-10);
            }
        }
    }
}

#[test]
fn clustering_merges_close_eigenvalues() {
    let algebra = Algebra::new(vec![3]).unwrap();
    let x = diag_element(&algebra, &[0.5, 0.5 + 1e-12, 1.0]);
    let merged = hermitian_spectral(&x, None).unwrap();
    assert_eq!(merged.len(), 2);
    assert_eq!(merged.projections()[0].rank(), 2);
    let kept = hermitian_spectral(&x, Some(0.0)).unwrap();
    assert_eq!(kept.len(), 3);
}

#[test]
fn polar_decomposition_of_diagonal_example() {
    let algebra = Algebra::new(vec![2]).unwrap();
    let x = diag_element(&algebra, &[2.0, 0.0]);
    let (u, h) = polar_decomposition(&x);
    assert!(h.norm_diff(&x) < 1e-12);
    assert!(u.norm_diff(&diag_element(&algebra, &[1.0, 0.0])) < 1e-12);
}

#[test]
fn polar_decomposition_recomposes_and_certifies() {
    let algebra = Algebra::new(vec![3, 2]).unwrap();
    let mut rng = sample::rng(3, 5);
    let h0 = sample::random_hermitian(&mut rng, &algebra, 1.0);
    let k0 = sample::random_hermitian(&mut rng, &algebra, 1.0);
    let x = &h0 + &k0.scale(c(0.0, 1.0));
    let (u, h) = polar_decomposition(&x);
    assert!(u.mul(&h).norm_diff(&x) < 1e-9 * (1.0 + x.operator_norm()));
    assert!(h.self_adjoint_defect() < 1e-10);
    // u*u is the support projection of x.
    let support = range_projection(&x);
    assert!(u.adjoint().mul(&u).norm_diff(support.element()) < 1e-9);
    let corange = range_projection(&x.adjoint());
    assert!(u.mul(&u.adjoint()).norm_diff(corange.element()) < 1e-9);
    // h matches the singular values blockwise.
    for (hb, xb) in h.blocks().iter().zip(x.blocks()) {
        let want = common::singular_values(xb);
        let mut got = common::hermitian_eigenvalues(hb);
        got.reverse();
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-8 * (1.0 + w));
        }
    }
}

#[test]
fn range_projection_trivial_cases() {
    let algebra = Algebra::new(vec![2, 3]).unwrap();
    assert!(range_projection(&algebra.unit())
        .element()
        .norm_diff(&algebra.unit())
        < 1e-12);
    assert_eq!(range_projection(&algebra.zero()).rank(), 0);
    let mut rng = sample::rng(9, 1);
    let p = sample::random_projection(&mut rng, &algebra, &[1, 2]);
    let rp = range_projection(p.element());
    assert!(rp.element().norm_diff(p.element()) < 1e-10);
}

#[test]
fn range_projection_is_smallest_right_support() {
    let algebra = Algebra::new(vec![4]).unwrap();
    let mut rng = sample::rng(13, 2);
    let h = sample::random_hermitian(&mut rng, &algebra, 1.0);
    let p = sample::random_projection(&mut rng, &algebra, &[2]);
    let x = h.mul(p.element());
    let q = range_projection(&x);
    assert!(x.mul(q.element()).norm_diff(&x) < 1e-9);
    assert!(q.rank() <= 2);
    // The oracle agrees on the rank.
    let rank: usize = x
        .blocks()
        .iter()
        .map(|b| common::elimination_rank(b, 1e-9))
        .sum();
    assert_eq!(q.rank(), rank);
}

#[test]
fn range_basis_spans_the_projection() {
    let algebra = Algebra::new(vec![3, 4]).unwrap();
    let mut rng = sample::rng(17, 3);
    let p = sample::random_projection(&mut rng, &algebra, &[2, 3]);
    let bases = range_basis(&p);
    let rebuilt = Projection::from_isometry_blocks(&algebra, &bases).unwrap();
    assert!(rebuilt.element().norm_diff(p.element()) < 1e-10);
    for basis in &bases {
        if basis.ncols() == 0 {
            continue;
        }
        let gram = basis.adjoint() * basis;
        let eye = DMatrix::identity(basis.ncols(), basis.ncols());
        assert!((gram - eye).norm() < 1e-10);
    }
}

#[test]
fn hermitian_basis_is_orthonormal_under_trace() {
    let algebra = Algebra::new(vec![2, 3]).unwrap();
    let basis = hermitian_basis(&algebra);
    assert_eq!(basis.len(), algebra.coordinate_dim());
    for (i, a) in basis.iter().enumerate() {
        assert!(a.self_adjoint_defect() < 1e-12);
        for (j, b) in basis.iter().enumerate() {
            let inner = a.mul(b).trace().re;
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((inner - want).abs() < 1e-12, "basis pair ({i},{j})");
        }
    }
}

#[test]
fn hermitian_coordinates_round_trip() {
    let algebra = Algebra::new(vec![3, 2]).unwrap();
    let mut rng = sample::rng(23, 4);
    let h = sample::random_hermitian(&mut rng, &algebra, 1.0);
    let coords = hermitian_coords(&h);
    assert_eq!(coords.len(), algebra.coordinate_dim());
    let back = element_from_hermitian_coords(&algebra, &coords);
    assert!(back.norm_diff(&h) < 1e-12);
    // Coordinates agree with trace pairing against the basis.
    for (coord, b) in coords.iter().zip(hermitian_basis(&algebra)) {
        let pairing = h.mul(&b).trace().re;
        assert!((coord - pairing).abs() < 1e-10);
    }
}

#[test]
fn algebra_shape_validation() {
    assert!(matches!(Algebra::new(vec![]), Err(CoreError::BadBlockDims)));
    assert!(matches!(Algebra::new(vec![2, 0]), Err(CoreError::BadBlockDims)));
    let algebra = Algebra::new(vec![2, 3]).unwrap();
    assert_eq!(algebra.total_dim(), 5);
    assert_eq!(algebra.coordinate_dim(), 13);
    assert!(algebra.has_two_dim_block());
    let wrong = Element::from_blocks(algebra, vec![CMat::zeros(2, 2), CMat::zeros(2, 2)]);
    assert!(matches!(wrong, Err(CoreError::ShapeMismatch { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coords_round_trip_everywhere(
        dims in proptest::collection::vec(1usize..=4, 1..=3),
        seed in 0u64..1 << 32,
    ) {
        let algebra = Algebra::new(dims).unwrap();
        let mut rng = sample::rng(seed, 40);
        let h = sample::random_hermitian(&mut rng, &algebra, 1.0);
        let back = element_from_hermitian_coords(&algebra, &hermitian_coords(&h));
        prop_assert!(back.norm_diff(&h) < 1e-12);
    }

    #[test]
    fn spectral_reconstruction_everywhere(
        dims in proptest::collection::vec(1usize..=4, 1..=3),
        seed in 0u64..1 << 32,
    ) {
        let algebra = Algebra::new(dims).unwrap();
        let mut rng = sample::rng(seed, 41);
        let h = sample::random_hermitian(&mut rng, &algebra, 1.0);
        let res = hermitian_spectral(&h, None).unwrap();
        prop_assert!(res.reconstruct().norm_diff(&h) < 1e-8 * (1.0 + h.operator_norm()));
        let mut sum = algebra.zero();
        for (_, p) in res.iter() {
            sum = &sum + p.element();
        }
        prop_assert!(sum.norm_diff(&algebra.unit()) < 1e-9);
    }
}
