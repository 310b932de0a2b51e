//! LIBSVM sparse text format: `<label> <index>:<value> ...` per line.

use std::fmt::Write as _;

use super::{Dataset, FeatureVector, Label, PointwiseSample};
use crate::error::{Error, Result};

/// Parses one `index:value` token.
pub(super) fn parse_entry(token: &str) -> std::result::Result<(u32, f64), String> {
    let (idx, val) = token
        .split_once(':')
        .ok_or_else(|| format!("expected index:value, got {token:?}"))?;
    let index: u32 = idx
        .parse()
        .map_err(|_| format!("bad feature index {idx:?}"))?;
    if index == 0 {
        return Err("feature indices are 1-based".into());
    }
    let value: f64 = val
        .parse()
        .map_err(|_| format!("bad feature value {val:?}"))?;
    if !value.is_finite() {
        return Err(format!("feature value {val:?} is not finite"));
    }
    Ok((index, value))
}

/// Parses a run of `index:value` tokens, checking strict index order.
pub(super) fn parse_entries<'a>(
    tokens: impl Iterator<Item = &'a str>,
) -> std::result::Result<Vec<(u32, f64)>, String> {
    let mut entries = Vec::new();
    let mut prev = 0u32;
    for tok in tokens {
        let (index, value) = parse_entry(tok)?;
        if index <= prev {
            return Err(format!(
                "feature indices must be strictly increasing ({prev} then {index})"
            ));
        }
        prev = index;
        entries.push((index, value));
    }
    Ok(entries)
}

/// Resolves the dataset dimension from the largest index seen and an
/// optional override. A file with no features at all gets dimension 1.
pub(super) fn resolve_dim(max_index: u32, max_line: usize, dim_override: Option<usize>) -> Result<usize> {
    match dim_override {
        Some(0) => Err(Error::invalid("dimension override must be positive")),
        Some(d) if (max_index as usize) > d => Err(Error::parse(
            max_line,
            format!("feature index {max_index} exceeds declared dimension {d}"),
        )),
        Some(d) => Ok(d),
        None => Ok((max_index as usize).max(1)),
    }
}

/// Reads a labeled dataset. Any label greater than zero maps to `+1`, all
/// others to `-1`. Blank lines and lines starting with `#` are skipped.
/// Errors carry the 1-based line number.
pub fn parse_libsvm(text: &str, dim_override: Option<usize>) -> Result<Dataset> {
    let mut rows = Vec::new();
    let mut max_index = 0u32;
    let mut max_line = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let label_tok = tokens.next().expect("nonempty line has a token");
        let label: f64 = label_tok
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad label {label_tok:?}")))?;
        if label.is_nan() {
            return Err(Error::parse(lineno, "label is NaN"));
        }
        let entries = parse_entries(tokens).map_err(|m| Error::parse(lineno, m))?;
        if let Some(&(last, _)) = entries.last() {
            if last > max_index {
                max_index = last;
                max_line = lineno;
            }
        }
        rows.push((entries, Label::sign_of(label)));
    }

    let dim = resolve_dim(max_index, max_line, dim_override)?;
    let samples = rows
        .into_iter()
        .map(|(entries, y)| {
            let x = FeatureVector::new(entries, dim).expect("entries validated during parsing");
            PointwiseSample { x, y }
        })
        .collect();
    Dataset::new(samples, dim)
}

pub(super) fn write_entries(out: &mut String, x: &FeatureVector, sep: char) {
    for &(i, v) in x.entries() {
        // `{}` on f64 prints the shortest representation that round-trips.
        let _ = write!(out, "{sep}{i}:{v}");
    }
}

/// Writes canonical LIBSVM text (labels as `+1`/`-1`, LF line endings).
pub fn write_libsvm(data: &Dataset) -> String {
    let mut out = String::new();
    for s in data.samples() {
        let _ = write!(out, "{}", s.y);
        write_entries(&mut out, &s.x, ' ');
        out.push('\n');
    }
    out
}
