//! Pair CSV: a fixed header line, then one pair per row as
//! `tau,<idx:val>...,|,<idx:val>...` where `|` separates the two patterns.
//!
//! ```text
//! tau,idx:val...,|,idx:val...
//! +1,1:0.5,3:2,|,2:-1
//! -1,|,1:4
//! ```

use std::fmt::Write as _;

use super::libsvm::{parse_entries, resolve_dim, write_entries};
use super::{FeatureVector, Label, PairDataset, PairwiseSample};
use crate::error::{Error, Result};

pub const PAIR_CSV_HEADER: &str = "tau,idx:val...,|,idx:val...";

pub fn write_pair_csv(pairs: &PairDataset) -> String {
    let mut out = String::with_capacity(32 * (pairs.len() + 1));
    out.push_str(PAIR_CSV_HEADER);
    out.push('\n');
    for p in pairs.pairs() {
        let _ = write!(out, "{}", p.tau());
        write_entries(&mut out, p.x(), ',');
        out.push_str(",|");
        write_entries(&mut out, p.x_prime(), ',');
        out.push('\n');
    }
    out
}

pub fn parse_pair_csv(text: &str, dim_override: Option<usize>) -> Result<PairDataset> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == PAIR_CSV_HEADER => {}
        _ => {
            return Err(Error::parse(
                1,
                format!("missing pair CSV header {PAIR_CSV_HEADER:?}"),
            ))
        }
    }

    let mut rows = Vec::new();
    let mut max_index = 0u32;
    let mut max_line = 0usize;
    for (lineno, raw) in lines {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let tau: Label = fields
            .next()
            .unwrap_or_default()
            .parse()
            .map_err(|e: Error| Error::parse(lineno, e.to_string()))?;
        let fields: Vec<&str> = fields.collect();
        let bar = fields
            .iter()
            .position(|f| *f == "|")
            .ok_or_else(|| Error::parse(lineno, "missing '|' separator"))?;
        let left = parse_entries(fields[..bar].iter().copied()).map_err(|m| Error::parse(lineno, m))?;
        let right =
            parse_entries(fields[bar + 1..].iter().copied()).map_err(|m| Error::parse(lineno, m))?;
        for side in [&left, &right] {
            if let Some(&(last, _)) = side.last() {
                if last > max_index {
                    max_index = last;
                    max_line = lineno;
                }
            }
        }
        rows.push((left, right, tau));
    }

    let dim = resolve_dim(max_index, max_line, dim_override)?;
    let pairs = rows
        .into_iter()
        .map(|(l, r, tau)| {
            let x = FeatureVector::new(l, dim).expect("validated during parsing");
            let x_prime = FeatureVector::new(r, dim).expect("validated during parsing");
            PairwiseSample::new(x, x_prime, tau)
        })
        .collect::<Result<Vec<_>>>()?;
    PairDataset::new(pairs, dim)
}
