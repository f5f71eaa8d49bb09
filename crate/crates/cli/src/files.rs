//! Text formats for POVMs, observables and confidence regions.
//!
//! A POVM file lists the outcome count and dimension, then one d x d block
//! per effect with complex entries as `re,im` pairs, row-major:
//!
//! ```text
//! # optional comments
//! id = zbasis
//! 2 2
//! 1,0 0,0
//! 0,0 0,0
//!
//! 0,0 0,0
//! 0,0 1,0
//! ```
//!
//! An observable file is the same with the leading line holding only the
//! dimension and a single block. A region file is the flat key-value block
//! produced by `ConfidenceRegion::to_block`.

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use qcert::certifier::ConfidenceRegion;
use qcert::linalg::{ComplexMatrix, HermitianMatrix};
use qcert::quantum::{Observable, Povm};
use std::path::Path;

fn parse_complex(token: &str) -> Result<Complex64> {
    let (re, im) = token
        .split_once(',')
        .with_context(|| format!("expected re,im pair, got `{token}`"))?;
    Ok(Complex64::new(
        re.trim().parse::<f64>()?,
        im.trim().parse::<f64>()?,
    ))
}

fn format_complex(z: Complex64) -> String {
    format!("{},{}", z.re, z.im)
}

struct Tokens {
    id: Option<String>,
    lines: Vec<Vec<String>>,
}

fn tokenize(text: &str) -> Tokens {
    let mut id = None;
    let mut lines = Vec::new();
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("id") {
            let rest = rest.trim_start();
            if let Some(value) = rest.strip_prefix('=') {
                id = Some(value.trim().to_string());
                continue;
            }
        }
        lines.push(line.split_whitespace().map(str::to_string).collect());
    }
    Tokens { id, lines }
}

fn parse_block(rows: &[Vec<String>], dim: usize) -> Result<HermitianMatrix> {
    let mut data = Vec::with_capacity(dim * dim);
    for row in rows {
        if row.len() != dim {
            bail!("expected {dim} entries per row, got {}", row.len());
        }
        for token in row {
            data.push(parse_complex(token)?);
        }
    }
    let mat = ComplexMatrix::from_entries(dim, dim, data)?;
    Ok(HermitianMatrix::new(mat)?)
}

pub fn parse_povm(text: &str) -> Result<Povm> {
    let tokens = tokenize(text);
    let header = tokens.lines.first().context("empty POVM file")?;
    if header.len() != 2 {
        bail!("POVM header must be `m d`, got {} tokens", header.len());
    }
    let m: usize = header[0].parse()?;
    let d: usize = header[1].parse()?;
    let expected = 1 + m * d;
    if tokens.lines.len() != expected {
        bail!(
            "POVM file should have {expected} data lines ({m} blocks of {d} rows), got {}",
            tokens.lines.len()
        );
    }
    let mut effects = Vec::with_capacity(m);
    for k in 0..m {
        let rows = &tokens.lines[1 + k * d..1 + (k + 1) * d];
        effects.push(parse_block(rows, d).with_context(|| format!("effect {k}"))?);
    }
    let povm = Povm::new_unnormalized(effects)?;
    let povm = match tokens.id {
        Some(id) => povm.with_id(id),
        None => povm,
    };
    Ok(povm)
}

pub fn read_povm(path: &Path) -> Result<Povm> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading POVM file {}", path.display()))?;
    parse_povm(&text)
}

pub fn format_povm(povm: &Povm) -> String {
    let mut out = String::new();
    out.push_str(&format!("id = {}\n", povm.id()));
    out.push_str(&format!("{} {}\n", povm.len(), povm.dim()));
    for effect in povm.effects() {
        for r in 0..povm.dim() {
            let row: Vec<String> = (0..povm.dim())
                .map(|c| format_complex(effect.get(r, c)))
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

pub fn write_povm(povm: &Povm, path: &Path) -> Result<()> {
    std::fs::write(path, format_povm(povm))
        .with_context(|| format!("writing POVM file {}", path.display()))
}

pub fn parse_observable(text: &str) -> Result<Observable> {
    let tokens = tokenize(text);
    let header = tokens.lines.first().context("empty observable file")?;
    if header.len() != 1 {
        bail!("observable header must be the dimension alone");
    }
    let d: usize = header[0].parse()?;
    if tokens.lines.len() != 1 + d {
        bail!("observable file should have {d} rows");
    }
    Ok(Observable::new(parse_block(&tokens.lines[1..], d)?))
}

pub fn read_observable(path: &Path) -> Result<Observable> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading observable file {}", path.display()))?;
    parse_observable(&text)
}

/// Parse a region block against the POVM it references. A POVM id recorded
/// in the block must match the POVM's own id.
pub fn parse_region(text: &str, povm: &Povm) -> Result<ConfidenceRegion> {
    let mut delta = None;
    let mut eps1 = None;
    let mut eps2 = None;
    let mut freqs: Option<Vec<f64>> = None;
    let mut povm_id = None;
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .with_context(|| format!("expected key = value, got `{line}`"))?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "povm_id" => povm_id = Some(value.to_string()),
            "delta" => delta = Some(value.parse::<f64>()?),
            "eps1" => eps1 = Some(value.parse::<f64>()?),
            "eps2" => eps2 = Some(value.parse::<f64>()?),
            "f" => {
                freqs = Some(
                    value
                        .split(',')
                        .map(|t| t.trim().parse::<f64>())
                        .collect::<std::result::Result<Vec<f64>, _>>()?,
                )
            }
            other => bail!("unknown region key `{other}`"),
        }
    }
    if let Some(id) = povm_id {
        if id != povm.id() {
            bail!("region was built for POVM `{id}`, got `{}`", povm.id());
        }
    }
    let region = ConfidenceRegion::new(
        povm.clone(),
        freqs.context("region file missing `f`")?,
        eps1.context("region file missing `eps1`")?,
        eps2.context("region file missing `eps2`")?,
        delta.context("region file missing `delta`")?,
    )?;
    Ok(region)
}

pub fn read_region(path: &Path, povm: &Povm) -> Result<ConfidenceRegion> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading region file {}", path.display()))?;
    parse_region(&text, povm)
}
