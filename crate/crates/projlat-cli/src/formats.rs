//! JSON wire formats for algebras, elements, measures, and morphisms.
//!
//! Matrix-valued data travels as one flat row-major list of `[re, im]`
//! pairs per block, alongside the block dimensions that give those lists
//! shape. All field names are part of the file contract.

use anyhow::{anyhow, bail, Context, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use projlat::measures::Measure;
use projlat::morphisms::LatticeMorphism;
use projlat::{Algebra, Element, Projection};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// One matrix block: row-major `[re, im]` entries, `n * n` of them.
pub type BlockData = Vec<[f64; 2]>;

/// An algebra on its own: just the block dimensions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub block_dims: Vec<usize>,
}

/// A block-diagonal element: dimensions plus one entry list per block.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementFile {
    pub block_dims: Vec<usize>,
    pub blocks: Vec<BlockData>,
}

/// Two elements over a shared algebra, used for projection-pair fixtures.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairFile {
    pub block_dims: Vec<usize>,
    pub e: Vec<BlockData>,
    pub f: Vec<BlockData>,
}

/// Measure description as stored on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MeasureSpec {
    #[serde(rename = "density")]
    Density {
        #[serde(rename = "T")]
        t: Vec<BlockData>,
    },
    #[serde(rename = "tracial")]
    Tracial,
    #[serde(rename = "m2_nonlinear")]
    M2Nonlinear { seed: u64 },
}

/// Morphism description as stored on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum MorphismSpec {
    #[serde(rename = "unitary")]
    Unitary {
        #[serde(rename = "U")]
        u: Vec<BlockData>,
        transpose: bool,
    },
    #[serde(rename = "fault")]
    Fault {
        base: Box<MorphismSpec>,
        break_at: ElementFile,
    },
}

fn blocks_to_matrices(dims: &[usize], blocks: &[BlockData]) -> Result<Vec<DMatrix<Complex64>>> {
    if blocks.len() != dims.len() {
        bail!(
            "expected {} blocks to match block_dims, found {}",
            dims.len(),
            blocks.len()
        );
    }
    let mut out = Vec::with_capacity(dims.len());
    for (k, (&n, data)) in dims.iter().zip(blocks).enumerate() {
        if data.len() != n * n {
            bail!(
                "block {k} should hold {} entries for dimension {n}, found {}",
                n * n,
                data.len()
            );
        }
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                let [re, im] = data[r * n + c];
                m[(r, c)] = Complex64::new(re, im);
            }
        }
        out.push(m);
    }
    Ok(out)
}

fn matrices_to_blocks(x: &Element) -> Vec<BlockData> {
    x.blocks()
        .iter()
        .map(|b| {
            let n = b.nrows();
            let mut data = Vec::with_capacity(n * n);
            for r in 0..n {
                for c in 0..n {
                    let z = b[(r, c)];
                    data.push([z.re, z.im]);
                }
            }
            data
        })
        .collect()
}

impl AlgebraFile {
    pub fn to_algebra(&self) -> Result<Algebra> {
        Algebra::new(self.block_dims.clone()).map_err(|e| anyhow!("invalid block_dims: {e}"))
    }
}

impl ElementFile {
    pub fn from_element(x: &Element) -> Self {
        ElementFile {
            block_dims: x.algebra().block_dims().to_vec(),
            blocks: matrices_to_blocks(x),
        }
    }

    pub fn to_element(&self) -> Result<Element> {
        let algebra =
            Algebra::new(self.block_dims.clone()).map_err(|e| anyhow!("invalid block_dims: {e}"))?;
        let blocks = blocks_to_matrices(&self.block_dims, &self.blocks)?;
        Element::from_blocks(algebra, blocks).map_err(|e| anyhow!("malformed element: {e}"))
    }

    /// Loads and certifies the stored element as a projection.
    pub fn to_projection(&self) -> Result<Projection> {
        Projection::try_new(self.to_element()?).map_err(|e| anyhow!("not a projection: {e}"))
    }
}

impl PairFile {
    pub fn from_projections(e: &Projection, f: &Projection) -> Self {
        PairFile {
            block_dims: e.algebra().block_dims().to_vec(),
            e: matrices_to_blocks(e.element()),
            f: matrices_to_blocks(f.element()),
        }
    }

    pub fn to_projections(&self) -> Result<(Projection, Projection)> {
        let algebra =
            Algebra::new(self.block_dims.clone()).map_err(|e| anyhow!("invalid block_dims: {e}"))?;
        let make = |blocks: &[BlockData], label: &str| -> Result<Projection> {
            let mats = blocks_to_matrices(&self.block_dims, blocks)
                .with_context(|| format!("field \"{label}\""))?;
            let x = Element::from_blocks(algebra.clone(), mats)
                .map_err(|e| anyhow!("field \"{label}\": {e}"))?;
            Projection::try_new(x).map_err(|e| anyhow!("field \"{label}\" is not a projection: {e}"))
        };
        Ok((make(&self.e, "e")?, make(&self.f, "f")?))
    }
}

impl MeasureSpec {
    pub fn build(&self, algebra: &Algebra) -> Result<Measure> {
        match self {
            MeasureSpec::Density { t } => {
                let mats = blocks_to_matrices(algebra.block_dims(), t).context("field \"T\"")?;
                let t = Element::from_blocks(algebra.clone(), mats)
                    .map_err(|e| anyhow!("field \"T\": {e}"))?;
                Ok(Measure::density(t))
            }
            MeasureSpec::Tracial => Ok(Measure::normalized_trace(algebra)),
            MeasureSpec::M2Nonlinear { seed } => Measure::m2_nonlinear(algebra, *seed)
                .map_err(|e| anyhow!("m2_nonlinear needs a single 2x2 block: {e}")),
        }
    }
}

impl MorphismSpec {
    pub fn build(&self, algebra: &Algebra) -> Result<LatticeMorphism> {
        match self {
            MorphismSpec::Unitary { u, transpose } => {
                let mats = blocks_to_matrices(algebra.block_dims(), u).context("field \"U\"")?;
                let u = Element::from_blocks(algebra.clone(), mats)
                    .map_err(|e| anyhow!("field \"U\": {e}"))?;
                LatticeMorphism::from_unitary(u, *transpose)
                    .map_err(|e| anyhow!("field \"U\": {e}"))
            }
            MorphismSpec::Fault { base, break_at } => {
                let phi = base.build(algebra)?;
                if break_at.block_dims != algebra.block_dims() {
                    bail!("break_at lives on a different algebra");
                }
                let p = break_at
                    .to_projection()
                    .context("field \"break_at\"")?;
                Ok(phi.with_fault(p))
            }
        }
    }
}

/// Parses JSON with the source location kept in the error message.
pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| anyhow!("{what}: {e}"))
}

/// Reads and parses a JSON file, reporting the path and source location on error.
pub fn read_json_file<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    parse_json(&text, &path.display().to_string())
}

/// Serializes a value as pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Resolves an `--algebra` argument: a JSON file path (with `block_dims`,
/// as written by `gen`), or an inline dimension list like `3,4` or `[3,4]`.
pub fn parse_algebra_arg(arg: &str) -> Result<Algebra> {
    let path = Path::new(arg);
    if path.exists() {
        let file: AlgebraFile = read_json_file(path)?;
        return file.to_algebra();
    }
    let trimmed = arg.trim().trim_start_matches('[').trim_end_matches(']');
    if trimmed.is_empty() {
        bail!("empty algebra spec");
    }
    let dims = trimmed
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .with_context(|| format!("bad block dimension {tok:?} in algebra spec {arg:?}"))
        })
        .collect::<Result<Vec<_>>>()?;
    Algebra::new(dims).map_err(|e| anyhow!("invalid algebra spec {arg:?}: {e}"))
}
