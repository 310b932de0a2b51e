//! Sample containers, synthetic generators, and the text formats used to
//! move datasets between subcommands.
//!
//! Patterns are sparse with 1-based feature indices, following the LIBSVM
//! convention. Pairs never carry the pointwise labels they were built from,
//! only their agreement `tau = y * y'`.

mod libsvm;
mod pair_csv;
mod synth;

use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use libsvm::{parse_libsvm, write_libsvm};
pub use pair_csv::{parse_pair_csv, write_pair_csv, PAIR_CSV_HEADER};
pub use synth::{make_all_ordered_pairs, make_pairs, sample_gaussian, sample_gaussian_pairs, split_pairs};

/// A binary label (or pair agreement) in `{+1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    /// `sign(a) = +1` for `a > 0` and `-1` otherwise, so a zero score is
    /// negative. Every prediction and sign rule in this crate goes through
    /// this function.
    pub fn sign_of(a: f64) -> Label {
        if a > 0.0 {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => -1.0,
        }
    }

    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }
}

impl Neg for Label {
    type Output = Label;

    fn neg(self) -> Label {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        }
    }
}

impl Mul for Label {
    type Output = Label;

    fn mul(self, rhs: Label) -> Label {
        if self == rhs {
            Label::Positive
        } else {
            Label::Negative
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Positive => "+1",
            Label::Negative => "-1",
        })
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Label> {
        match s.trim() {
            "+1" | "1" => Ok(Label::Positive),
            "-1" => Ok(Label::Negative),
            other => Err(Error::invalid(format!("expected +1 or -1, got {other:?}"))),
        }
    }
}

/// Sparse real-valued pattern in canonical form: strictly increasing 1-based
/// indices, no stored zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    entries: Vec<(u32, f64)>,
    dim: usize,
}

impl FeatureVector {
    /// Validates ordering and bounds; zero values are dropped.
    pub fn new(entries: Vec<(u32, f64)>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("feature dimension must be positive"));
        }
        let mut prev = 0u32;
        for &(index, value) in &entries {
            if index == 0 {
                return Err(Error::invalid("feature indices are 1-based"));
            }
            if index <= prev {
                return Err(Error::invalid(format!(
                    "feature indices must be strictly increasing ({prev} then {index})"
                )));
            }
            if index as usize > dim {
                return Err(Error::invalid(format!(
                    "feature index {index} exceeds dimension {dim}"
                )));
            }
            if !value.is_finite() {
                return Err(Error::invalid(format!("feature {index} is not finite")));
            }
            prev = index;
        }
        let entries = entries.into_iter().filter(|&(_, v)| v != 0.0).collect();
        Ok(FeatureVector { entries, dim })
    }

    pub fn from_dense(values: &[f64]) -> Self {
        assert!(!values.is_empty(), "dense vector must be nonempty");
        let entries = values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, &v)| (i as u32 + 1, v))
            .collect();
        FeatureVector {
            entries,
            dim: values.len(),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        FeatureVector {
            entries: Vec::new(),
            dim,
        }
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Value at a 1-based index.
    pub fn get(&self, index: u32) -> f64 {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0.0)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for &(i, v) in &self.entries {
            out[i as usize - 1] = v;
        }
        out
    }

    /// `<x, w>` against a dense vector of length `dim`.
    pub fn dot(&self, dense: &[f64]) -> f64 {
        debug_assert_eq!(dense.len(), self.dim);
        self.entries
            .iter()
            .map(|&(i, v)| v * dense[i as usize - 1])
            .sum()
    }

    /// Re-declares the dimensionality, keeping the entries.
    pub fn with_dim(mut self, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("feature dimension must be positive"));
        }
        if let Some(&(last, _)) = self.entries.last() {
            if last as usize > dim {
                return Err(Error::invalid(format!(
                    "feature index {last} exceeds dimension {dim}"
                )));
            }
        }
        self.dim = dim;
        Ok(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseSample {
    pub x: FeatureVector,
    pub y: Label,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseSample {
    x: FeatureVector,
    x_prime: FeatureVector,
    tau: Label,
}

impl PairwiseSample {
    pub fn new(x: FeatureVector, x_prime: FeatureVector, tau: Label) -> Result<Self> {
        if x.dim() != x_prime.dim() {
            return Err(Error::DimensionMismatch {
                expected: x.dim(),
                found: x_prime.dim(),
            });
        }
        Ok(PairwiseSample { x, x_prime, tau })
    }

    pub fn x(&self) -> &FeatureVector {
        &self.x
    }

    pub fn x_prime(&self) -> &FeatureVector {
        &self.x_prime
    }

    pub fn tau(&self) -> Label {
        self.tau
    }
}

/// Labeled pointwise samples sharing one dimensionality.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: Vec<PointwiseSample>,
    dim: usize,
}

impl Dataset {
    pub fn new(samples: Vec<PointwiseSample>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dataset dimension must be positive"));
        }
        if let Some(bad) = samples.iter().find(|s| s.x.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.x.dim(),
            });
        }
        Ok(Dataset { samples, dim })
    }

    pub fn samples(&self) -> &[PointwiseSample] {
        &self.samples
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn positive_count(&self) -> usize {
        self.samples.iter().filter(|s| s.y.is_positive()).count()
    }
}

/// Pairwise samples sharing one dimensionality. May be empty (for example
/// the second half of a split with ratio 1).
#[derive(Debug, Clone, PartialEq)]
pub struct PairDataset {
    pairs: Vec<PairwiseSample>,
    dim: usize,
}

impl PairDataset {
    pub fn new(pairs: Vec<PairwiseSample>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dataset dimension must be positive"));
        }
        if let Some(bad) = pairs.iter().find(|p| p.x.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.x.dim(),
            });
        }
        Ok(PairDataset { pairs, dim })
    }

    pub fn pairs(&self) -> &[PairwiseSample] {
        &self.pairs
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Splits by agreement into (similar, dissimilar).
    pub fn partition_by_tau(&self) -> (PairDataset, PairDataset) {
        let (sim, dis): (Vec<_>, Vec<_>) = self
            .pairs
            .iter()
            .cloned()
            .partition(|p| p.tau.is_positive());
        (
            PairDataset {
                pairs: sim,
                dim: self.dim,
            },
            PairDataset {
                pairs: dis,
                dim: self.dim,
            },
        )
    }
}

/// Class-conditional 1-D Gaussians `N(mu_y, sigma_y^2)` with a positive
/// class prior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMixtureSpec {
    pub mu_pos: f64,
    pub sigma_pos: f64,
    pub mu_neg: f64,
    pub sigma_neg: f64,
    pub prior_pos: f64,
}

impl GaussianMixtureSpec {
    pub fn new(mu_pos: f64, sigma_pos: f64, mu_neg: f64, sigma_neg: f64, prior_pos: f64) -> Result<Self> {
        let spec = GaussianMixtureSpec {
            mu_pos,
            sigma_pos,
            mu_neg,
            sigma_neg,
            prior_pos,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_prior(self, prior_pos: f64) -> Result<Self> {
        Self::new(self.mu_pos, self.sigma_pos, self.mu_neg, self.sigma_neg, prior_pos)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.mu_pos, self.sigma_pos, self.mu_neg, self.sigma_neg, self.prior_pos]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid("gaussian spec entries must be finite"));
        }
        if self.sigma_pos <= 0.0 || self.sigma_neg <= 0.0 {
            return Err(Error::invalid("gaussian standard deviations must be positive"));
        }
        if !(self.prior_pos > 0.0 && self.prior_pos < 1.0) {
            return Err(Error::invalid(format!(
                "class prior must lie in (0, 1), got {}",
                self.prior_pos
            )));
        }
        Ok(())
    }

    /// Draws one `(x, y)`: the label from a uniform `u < prior_pos`, then
    /// `x = mu_y + sigma_y * z` with `z` standard normal.
    pub fn draw<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> (f64, Label) {
        let u: f64 = rng.random();
        let z: f64 = rng.sample(rand_distr::StandardNormal);
        if u < self.prior_pos {
            (self.mu_pos + self.sigma_pos * z, Label::Positive)
        } else {
            (self.mu_neg + self.sigma_neg * z, Label::Negative)
        }
    }
}

impl Default for GaussianMixtureSpec {
    /// `(mu_+, sigma_+, mu_-, sigma_-) = (1, 1, -1, 2)` with a balanced prior.
    fn default() -> Self {
        GaussianMixtureSpec {
            mu_pos: 1.0,
            sigma_pos: 1.0,
            mu_neg: -1.0,
            sigma_neg: 2.0,
            prior_pos: 0.5,
        }
    }
}

/// Seed for the crate's generator, ChaCha8 seeded through
/// `SeedableRng::seed_from_u64`. The stream is platform independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Child seed for cell or trial `index`: one SplitMix64 step over
    /// `seed + (index + 1) * golden`. Distinct indices give unrelated seeds,
    /// and nested derivations do not collide the way XOR would.
    pub fn derive(self, index: u64) -> RngSeed {
        const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
        let mut z = self.0.wrapping_add(GOLDEN.wrapping_mul(index.wrapping_add(1)));
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        RngSeed(z ^ (z >> 31))
    }
}
