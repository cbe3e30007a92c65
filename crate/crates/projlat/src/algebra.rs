//! Block-diagonal elements of `A = ⊕ₖ M_{n_k}(ℂ)` and their spectral calculus.
//!
//! An [`Algebra`] is identified by its block dimensions; an [`Element`] stores
//! one dense complex matrix per block. [`Projection`] is a certified wrapper:
//! constructing one checks ‖p − p*‖ and ‖p² − p‖ against the projection
//! tolerance, so downstream lattice code can assume its inputs are honest.
//!
//! Spectral decompositions cluster eigenvalues *across* blocks: the spectral
//! projection of a block-diagonal Hermitian element for a given eigenvalue is
//! itself block-diagonal, and [`hermitian_spectral`] returns exactly those.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
// Load-bearing only when no crate in the build graph links std; with std
// present, inherent f64 methods shadow the trait and the import idles.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::CoreError;
use crate::tol;

/// Dense complex matrix type used for all blocks.
pub type CMat = DMatrix<Complex64>;

// ── Algebra ─────────────────────────────────────────────────────────────────

/// A finite-dimensional matrix algebra `⊕ₖ M_{n_k}(ℂ)`, identified by the
/// list of block dimensions `n_k ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    block_dims: Vec<usize>,
}

impl Algebra {
    pub fn new(block_dims: Vec<usize>) -> Result<Self, CoreError> {
        if block_dims.is_empty() || block_dims.iter().any(|&n| n == 0) {
            return Err(CoreError::BadBlockDims);
        }
        Ok(Self { block_dims })
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn n_blocks(&self) -> usize {
        self.block_dims.len()
    }

    /// Σₖ n_k — dimension of the Hilbert space the algebra acts on.
    pub fn total_dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    /// Σₖ n_k² — real dimension of the Hermitian part.
    pub fn coordinate_dim(&self) -> usize {
        self.block_dims.iter().map(|n| n * n).sum()
    }

    pub fn max_block_dim(&self) -> usize {
        *self.block_dims.iter().max().expect("nonempty")
    }

    /// True iff some block is M₂, the one shape where projection measures can
    /// fail to extend linearly.
    pub fn has_two_dim_block(&self) -> bool {
        self.block_dims.contains(&2)
    }

    /// Certification tolerance for projections in this algebra.
    pub fn proj_tol(&self) -> f64 {
        tol::PROJ_REL * self.max_block_dim() as f64
    }

    pub fn zero(&self) -> Element {
        Element {
            algebra: self.clone(),
            blocks: self.block_dims.iter().map(|&n| CMat::zeros(n, n)).collect(),
        }
    }

    pub fn unit(&self) -> Element {
        Element {
            algebra: self.clone(),
            blocks: self.block_dims.iter().map(|&n| CMat::identity(n, n)).collect(),
        }
    }

    /// Unit as a certified projection.
    pub fn unit_projection(&self) -> Projection {
        Projection(self.unit())
    }

    /// Zero as a certified projection.
    pub fn zero_projection(&self) -> Projection {
        Projection(self.zero())
    }
}

// ── Element ─────────────────────────────────────────────────────────────────

/// An element of the algebra: one complex matrix per block.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    algebra: Algebra,
    blocks: Vec<CMat>,
}

impl Element {
    /// Builds an element, validating block shapes against the algebra.
    pub fn from_blocks(algebra: Algebra, blocks: Vec<CMat>) -> Result<Self, CoreError> {
        if blocks.len() != algebra.n_blocks() {
            return Err(CoreError::ShapeMismatch {
                block: blocks.len(),
                got: blocks.len(),
                want: algebra.n_blocks(),
            });
        }
        for (k, (b, &n)) in blocks.iter().zip(algebra.block_dims()).enumerate() {
            if b.nrows() != n || b.ncols() != n {
                return Err(CoreError::ShapeMismatch { block: k, got: b.nrows().max(b.ncols()), want: n });
            }
        }
        Ok(Self { algebra, blocks })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> &CMat {
        &self.blocks[k]
    }

    fn zip_with(&self, other: &Element, f: impl Fn(&CMat, &CMat) -> CMat) -> Element {
        assert_eq!(self.algebra, other.algebra, "operands belong to different algebras");
        Element {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect(),
        }
    }

    fn map_blocks(&self, f: impl Fn(&CMat) -> CMat) -> Element {
        Element {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(f).collect(),
        }
    }

    /// Matrix product, blockwise.
    pub fn mul(&self, other: &Element) -> Element {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn adjoint(&self) -> Element {
        self.map_blocks(|b| b.adjoint())
    }

    /// Blockwise transpose (no conjugation).
    pub fn transpose(&self) -> Element {
        self.map_blocks(|b| b.transpose())
    }

    pub fn scale(&self, c: Complex64) -> Element {
        self.map_blocks(|b| b * c)
    }

    pub fn trace(&self) -> Complex64 {
        self.blocks.iter().map(|b| b.diagonal().sum()).sum()
    }

    /// Operator norm: the largest singular value over all blocks.
    pub fn operator_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.singular_values().iter().copied().fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }

    /// Trace norm Σσᵢ over all blocks (dual to the operator norm).
    pub fn trace_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.singular_values().iter().sum::<f64>())
            .sum()
    }

    /// ‖x − x*‖.
    pub fn self_adjoint_defect(&self) -> f64 {
        (self - &self.adjoint()).operator_norm()
    }

    /// max(‖x² − x‖, ‖x − x*‖): distance from being a certified projection.
    pub fn projection_defect(&self) -> f64 {
        let idem = (&self.mul(self) - self).operator_norm();
        idem.max(self.self_adjoint_defect())
    }

    /// ‖self − other‖.
    pub fn norm_diff(&self, other: &Element) -> f64 {
        (self - other).operator_norm()
    }
}

impl core::ops::Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl core::ops::Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl core::ops::Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.map_blocks(|b| -b)
    }
}

// ── Projection ──────────────────────────────────────────────────────────────

/// A certified projection: self-adjoint idempotent within the algebra's
/// projection tolerance. The only public constructors check the certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection(Element);

impl Projection {
    /// Certifies `x` as a projection, or reports the defect.
    pub fn try_new(x: Element) -> Result<Self, CoreError> {
        let defect = x.projection_defect();
        let tol = x.algebra().proj_tol();
        if defect <= tol {
            Ok(Self(x))
        } else {
            Err(CoreError::NotProjection { defect, tol })
        }
    }

    /// Builds `Σ vᵢvᵢ*` from per-block isometries (columns orthonormal).
    /// A block matrix with zero columns contributes the zero block.
    pub fn from_isometry_blocks(algebra: &Algebra, isometries: &[CMat]) -> Result<Self, CoreError> {
        assert_eq!(algebra.n_blocks(), isometries.len());
        let blocks: Vec<CMat> = isometries
            .iter()
            .zip(algebra.block_dims())
            .map(|(v, &n)| {
                assert_eq!(v.nrows(), n, "isometry height must match block dim");
                if v.ncols() == 0 {
                    CMat::zeros(n, n)
                } else {
                    v * v.adjoint()
                }
            })
            .collect();
        Self::try_new(Element::from_blocks(algebra.clone(), blocks)?)
    }

    pub fn element(&self) -> &Element {
        &self.0
    }

    pub fn into_element(self) -> Element {
        self.0
    }

    pub fn algebra(&self) -> &Algebra {
        self.0.algebra()
    }

    /// Rank per block, read from the block traces (exact for certified input).
    pub fn ranks(&self) -> Vec<usize> {
        self.0
            .blocks
            .iter()
            .map(|b| b.diagonal().sum().re.round() as usize)
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.ranks().iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0 && self.0.operator_norm() < 0.5
    }

    /// 1 − p, certified for free: it has the same defect as p.
    pub fn complement(&self) -> Projection {
        Projection(&self.algebra().unit() - &self.0)
    }

    pub fn norm_diff(&self, other: &Projection) -> f64 {
        self.0.norm_diff(&other.0)
    }
}

// ── Spectral calculus ───────────────────────────────────────────────────────

/// Finite spectral resolution `x = Σᵢ λᵢ pᵢ` with strictly increasing
/// eigenvalues, mutually orthogonal projections, and `Σᵢ pᵢ = 1`.
/// The zero eigenvalue, when present, keeps its projection.
#[derive(Debug, Clone)]
pub struct SpectralResolution {
    eigenvalues: Vec<f64>,
    projections: Vec<Projection>,
}

impl SpectralResolution {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projections(&self) -> &[Projection] {
        &self.projections
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &Projection)> {
        self.eigenvalues.iter().copied().zip(self.projections.iter())
    }

    /// Σ λᵢ pᵢ.
    pub fn reconstruct(&self) -> Element {
        let algebra = self.projections[0].algebra();
        let mut acc = algebra.zero();
        for (lambda, p) in self.iter() {
            acc = &acc + &p.element().scale(Complex64::new(lambda, 0.0));
        }
        acc
    }
}

/// Spectral resolution of a (certified) Hermitian element.
///
/// Eigenvalues within `cluster_tol` of each other — by gaps in the sorted
/// sequence, across all blocks — are merged into a single projection; the
/// reported eigenvalue is the mean of the cluster. `cluster_tol = None` uses
/// the default `1e-8·‖x‖`; pass `Some(0.0)` to keep every distinct eigenvalue.
pub fn hermitian_spectral(x: &Element, cluster_tol: Option<f64>) -> Result<SpectralResolution, CoreError> {
    let defect = x.self_adjoint_defect();
    if defect > x.algebra().proj_tol() {
        return Err(CoreError::NotSelfAdjoint { defect });
    }
    let h = x.zip_with(&x.adjoint(), |a, b| (a + b) * Complex64::new(0.5, 0.0));
    let ctol = cluster_tol.unwrap_or(tol::CLUSTER_REL * h.operator_norm());

    // (eigenvalue, block index, eigenvector) for every block.
    let mut entries: Vec<(f64, usize, nalgebra::DVector<Complex64>)> = Vec::new();
    for (k, block) in h.blocks.iter().enumerate() {
        let eig = block.clone().symmetric_eigen();
        for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
            entries.push((lambda, k, eig.eigenvectors.column(i).into_owned()));
        }
    }
    entries.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite eigenvalues").then(a.1.cmp(&b.1)));

    let mut eigenvalues = Vec::new();
    let mut projections = Vec::new();
    let mut start = 0;
    while start < entries.len() {
        let mut end = start + 1;
        while end < entries.len() && entries[end].0 - entries[end - 1].0 <= ctol {
            end += 1;
        }
        let cluster = &entries[start..end];
        let mean = cluster.iter().map(|(l, _, _)| l).sum::<f64>() / cluster.len() as f64;
        let mut blocks: Vec<CMat> = x.algebra().block_dims().iter().map(|&n| CMat::zeros(n, n)).collect();
        for (_, k, v) in cluster {
            blocks[*k] += v * v.adjoint();
        }
        eigenvalues.push(mean);
        projections.push(Projection::try_new(Element::from_blocks(x.algebra().clone(), blocks)?)?);
        start = end;
    }

    Ok(SpectralResolution { eigenvalues, projections })
}

/// Singular values at or below this threshold do not count toward the rank
/// of `x`; a norm under the absolute floor makes everything noise.
fn rank_threshold(x: &Element) -> f64 {
    let norm = x.operator_norm();
    if norm <= tol::RANK_ABS_FLOOR {
        f64::INFINITY
    } else {
        tol::RANK_REL * norm
    }
}

/// Polar decomposition `x = u·h` with `h = (x*x)^{1/2}` PSD and `u` the
/// partial isometry over singular values above the rank threshold, so that
/// `u*u = range_projection(x)` and `uu* = range_projection(x*)`.
pub fn polar_decomposition(x: &Element) -> (Element, Element) {
    let threshold = rank_threshold(x);
    let mut u_blocks = Vec::with_capacity(x.blocks.len());
    let mut h_blocks = Vec::with_capacity(x.blocks.len());
    for block in &x.blocks {
        let n = block.nrows();
        let svd = block.clone().svd(true, true);
        let wu = svd.u.expect("u requested");
        let vt = svd.v_t.expect("v_t requested");
        let v = vt.adjoint();
        let mut h = CMat::zeros(n, n);
        let mut u = CMat::zeros(n, n);
        for (i, &sigma) in svd.singular_values.iter().enumerate() {
            let vi = v.column(i);
            h += vi * vi.adjoint() * Complex64::new(sigma, 0.0);
            if sigma > threshold {
                u += wu.column(i) * vi.adjoint();
            }
        }
        u_blocks.push(u);
        h_blocks.push(h);
    }
    let algebra = x.algebra.clone();
    (
        Element { algebra: algebra.clone(), blocks: u_blocks },
        Element { algebra, blocks: h_blocks },
    )
}

/// Smallest projection `q` with `x·q = x`: the support of `x*`, spanned by the
/// right singular vectors with σ above the rank threshold.
pub fn range_projection(x: &Element) -> Projection {
    let threshold = rank_threshold(x);
    let isometries: Vec<CMat> = x
        .blocks
        .iter()
        .map(|block| {
            let n = block.nrows();
            let svd = block.clone().svd(false, true);
            let v = svd.v_t.expect("v_t requested").adjoint();
            let kept: Vec<usize> = svd
                .singular_values
                .iter()
                .enumerate()
                .filter(|(_, &s)| s > threshold)
                .map(|(i, _)| i)
                .collect();
            let mut iso = CMat::zeros(n, kept.len());
            for (c, &i) in kept.iter().enumerate() {
                iso.set_column(c, &v.column(i));
            }
            iso
        })
        .collect();
    Projection::from_isometry_blocks(x.algebra(), &isometries).expect("singular vectors are orthonormal")
}

/// Per-block orthonormal bases of the range of a certified projection, as
/// n×r column matrices: the eigenvectors with eigenvalue near 1, in
/// descending-eigenvalue order (ties by eigendecomposition output order).
pub fn range_basis(p: &Projection) -> Vec<CMat> {
    p.element()
        .blocks()
        .iter()
        .map(|block| {
            let eig = block.clone().symmetric_eigen();
            let mut kept: Vec<usize> = (0..eig.eigenvalues.len()).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
            kept.sort_by(|&i, &j| {
                eig.eigenvalues[j]
                    .partial_cmp(&eig.eigenvalues[i])
                    .expect("finite eigenvalues")
                    .then(i.cmp(&j))
            });
            let mut iso = CMat::zeros(block.nrows(), kept.len());
            for (c, &i) in kept.iter().enumerate() {
                iso.set_column(c, &eig.eigenvectors.column(i));
            }
            iso
        })
        .collect()
}

// ── Hermitian coordinates ───────────────────────────────────────────────────

/// Orthonormal basis (under `⟨x,y⟩ = tr(xy)`) of the Hermitian part of the
/// algebra, enumerated blockwise: diagonal units first, then for each pair
/// i < j the symmetric and antisymmetric off-diagonal combinations.
pub fn hermitian_basis(algebra: &Algebra) -> Vec<Element> {
    let inv_sqrt2 = Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);
    let mut basis = Vec::with_capacity(algebra.coordinate_dim());
    for (k, &n) in algebra.block_dims().iter().enumerate() {
        let mut push = |b: CMat| {
            let mut blocks: Vec<CMat> = algebra.block_dims().iter().map(|&m| CMat::zeros(m, m)).collect();
            blocks[k] = b;
            basis.push(Element { algebra: algebra.clone(), blocks });
        };
        for i in 0..n {
            let mut b = CMat::zeros(n, n);
            b[(i, i)] = Complex64::new(1.0, 0.0);
            push(b);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let mut s = CMat::zeros(n, n);
                s[(i, j)] = Complex64::new(1.0, 0.0);
                s[(j, i)] = Complex64::new(1.0, 0.0);
                push(s * inv_sqrt2);
                let mut a = CMat::zeros(n, n);
                a[(i, j)] = Complex64::new(0.0, -1.0);
                a[(j, i)] = Complex64::new(0.0, 1.0);
                push(a * inv_sqrt2);
            }
        }
    }
    basis
}

/// Coordinates of a Hermitian element in [`hermitian_basis`] order, read off
/// directly from the matrix entries.
pub fn hermitian_coords(x: &Element) -> Vec<f64> {
    let sqrt2 = 2.0_f64.sqrt();
    let mut coords = Vec::with_capacity(x.algebra().coordinate_dim());
    for block in &x.blocks {
        let n = block.nrows();
        for i in 0..n {
            coords.push(block[(i, i)].re);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                coords.push(block[(i, j)].re * sqrt2);
                coords.push(-block[(i, j)].im * sqrt2);
            }
        }
    }
    coords
}

/// Inverse of [`hermitian_coords`].
pub fn element_from_hermitian_coords(algebra: &Algebra, coords: &[f64]) -> Element {
    assert_eq!(coords.len(), algebra.coordinate_dim());
    let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
    let mut blocks = Vec::with_capacity(algebra.n_blocks());
    let mut pos = 0;
    for &n in algebra.block_dims() {
        let mut b = CMat::zeros(n, n);
        for i in 0..n {
            b[(i, i)] = Complex64::new(coords[pos], 0.0);
            pos += 1;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let re = coords[pos] * inv_sqrt2;
                let im = -coords[pos + 1] * inv_sqrt2;
                pos += 2;
                b[(i, j)] = Complex64::new(re, im);
                b[(j, i)] = Complex64::new(re, -im);
            }
        }
        blocks.push(b);
    }
    Element { algebra: algebra.clone(), blocks }
}
