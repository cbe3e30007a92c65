//! Seeded JSON fixtures written for offline inspection: algebras,
//! projections, canonical two-projection pairs, measures, and morphisms.

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use projlat::sample;
use projlat::two_projections::HalmosForm;
use projlat::{Algebra, Element};
use std::path::{Path, PathBuf};

use crate::formats::{
    to_json_string, AlgebraFile, ElementFile, MeasureSpec, MorphismSpec, PairFile,
};

const STREAM_FIXTURE: u64 = 0x666978_01;

fn lookup<'a>(pairs: &'a [(String, String)], key: &str) -> Option<&'a str> {
    pairs
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
}

fn parse_pairs(tokens: &[&str]) -> Result<Vec<(String, String)>> {
    tokens
        .iter()
        .map(|tok| match tok.split_once('=') {
            Some((k, v)) if !k.is_empty() && !v.is_empty() => {
                Ok((k.to_string(), v.to_string()))
            }
            _ => bail!("expected key=value, found {tok:?}"),
        })
        .collect()
}

fn parse_usize(pairs: &[(String, String)], key: &str, default: Option<usize>) -> Result<usize> {
    match lookup(pairs, key) {
        Some(v) => v
            .parse::<usize>()
            .with_context(|| format!("bad value for {key}: {v:?}")),
        None => default.ok_or_else(|| anyhow::anyhow!("missing required key {key}")),
    }
}

fn parse_f64(pairs: &[(String, String)], key: &str, default: f64) -> Result<f64> {
    match lookup(pairs, key) {
        Some(v) => v
            .parse::<f64>()
            .with_context(|| format!("bad value for {key}: {v:?}")),
        None => Ok(default),
    }
}

fn parse_dims(pairs: &[(String, String)], key: &str) -> Result<Vec<usize>> {
    let raw = lookup(pairs, key)
        .ok_or_else(|| anyhow::anyhow!("missing required key {key} (e.g. {key}=3,4)"))?;
    raw.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .with_context(|| format!("bad dimension {tok:?} in {key}"))
        })
        .collect()
}

fn write_fixture<T: serde::Serialize>(
    value: &T,
    out: Option<&Path>,
    default_name: &str,
) -> Result<PathBuf> {
    let path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from(default_name));
    std::fs::write(&path, to_json_string(value))
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn random_density_blocks(seed: u64, algebra: &Algebra) -> Element {
    let mut rng = sample::rng(seed, STREAM_FIXTURE);
    let h = sample::random_hermitian(&mut rng, algebra, 1.0);
    let square = h.mul(&h);
    let tr = square.trace().re.max(1e-9);
    square.scale(Complex64::new(1.0 / tr, 0.0))
}

/// Writes the JSON fixture described by `spec` and returns its path.
///
/// Specs are a head word plus `key=value` settings:
/// `algebra dims=3,4`, `halmos-pair a=0.75 n=2`, `random-proj n=5 rank=3`,
/// `measure kind=tracial|density|m2_nonlinear [n=3]`, and
/// `morphism kind=unitary n=3 [transpose=true]`.
pub fn gen_instance(seed: u64, spec: &str, out: Option<&Path>) -> Result<PathBuf> {
    let tokens: Vec<&str> = spec.split_whitespace().collect();
    let Some((head, rest)) = tokens.split_first() else {
        bail!(
            "empty fixture spec; expected e.g. \"halmos-pair a=0.75 n=2\" or \
             \"random-proj n=5 rank=3\""
        );
    };
    let pairs = parse_pairs(rest)?;
    match *head {
        "algebra" => {
            let dims = parse_dims(&pairs, "dims")?;
            Algebra::new(dims.clone()).map_err(|e| anyhow::anyhow!("invalid dims: {e}"))?;
            write_fixture(&AlgebraFile { block_dims: dims }, out, "algebra.json")
        }
        "halmos-pair" => {
            let a = parse_f64(&pairs, "a", 0.75)?;
            let n = parse_usize(&pairs, "n", Some(2))?;
            if !(a > 0.0 && a < 1.0) {
                bail!("a must lie strictly between 0 and 1, got {a}");
            }
            if n < 2 || n % 2 != 0 {
                bail!("n must be even and at least 2, got {n}");
            }
            let algebra = Algebra::new(vec![n]).expect("positive dimension");
            let m = n / 2;
            let form = HalmosForm {
                conjugating_unitary: algebra.unit(),
                a_values: vec![a; m],
                block_points: vec![m],
            };
            let (e, f) = form.reconstruct();
            write_fixture(
                &PairFile::from_projections(&e, &f),
                out,
                "halmos_pair.json",
            )
        }
        "random-proj" => {
            let n = parse_usize(&pairs, "n", None)?;
            let rank = parse_usize(&pairs, "rank", None)?;
            if n == 0 || rank > n {
                bail!("need 0 < rank <= n, got n={n} rank={rank}");
            }
            let algebra = Algebra::new(vec![n]).expect("positive dimension");
            let mut rng = sample::rng(seed, STREAM_FIXTURE);
            let p = sample::random_projection(&mut rng, &algebra, &[rank]);
            write_fixture(
                &ElementFile::from_element(p.element()),
                out,
                "random_proj.json",
            )
        }
        "measure" => {
            let kind = lookup(&pairs, "kind").unwrap_or("tracial");
            let spec = match kind {
                "tracial" => MeasureSpec::Tracial,
                "m2_nonlinear" => MeasureSpec::M2Nonlinear { seed },
                "density" => {
                    let n = parse_usize(&pairs, "n", Some(3))?;
                    let algebra = Algebra::new(vec![n])
                        .map_err(|e| anyhow::anyhow!("invalid n: {e}"))?;
                    let t = random_density_blocks(seed, &algebra);
                    MeasureSpec::Density {
                        t: ElementFile::from_element(&t).blocks,
                    }
                }
                other => bail!("unknown measure kind {other:?}"),
            };
            write_fixture(&spec, out, "measure.json")
        }
        "morphism" => {
            let kind = lookup(&pairs, "kind").unwrap_or("unitary");
            if kind != "unitary" {
                bail!("unknown morphism kind {other:?}", other = kind);
            }
            let n = parse_usize(&pairs, "n", Some(3))?;
            let transpose = match lookup(&pairs, "transpose") {
                Some(v) => v
                    .parse::<bool>()
                    .with_context(|| format!("bad value for transpose: {v:?}"))?,
                None => false,
            };
            let algebra =
                Algebra::new(vec![n]).map_err(|e| anyhow::anyhow!("invalid n: {e}"))?;
            let mut rng = sample::rng(seed, STREAM_FIXTURE);
            let u = Element::from_blocks(
                algebra.clone(),
                vec![sample::haar_unitary(&mut rng, n)],
            )
            .expect("shapes match");
            let spec = MorphismSpec::Unitary {
                u: ElementFile::from_element(&u).blocks,
                transpose,
            };
            write_fixture(&spec, out, "morphism.json")
        }
        other => bail!(
            "unknown fixture spec {other:?}; known heads: algebra, halmos-pair, \
             random-proj, measure, morphism"
        ),
    }
}
