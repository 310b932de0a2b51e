//! Linear scoring model, the signed classifier built from it, and the loss
//! family shared by every risk estimator.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::data::{FeatureVector, Label};
use crate::error::{Error, Result};

/// Anything that maps a pattern to a hard label.
pub trait BinaryClassifier {
    /// Dimensionality of accepted patterns.
    fn input_dim(&self) -> usize;

    /// Prediction without the dimension check. Callers validate once per
    /// dataset.
    fn predict_unchecked(&self, x: &FeatureVector) -> Label;

    fn predict(&self, x: &FeatureVector) -> Result<Label> {
        check_dim(self.input_dim(), x.dim())?;
        Ok(self.predict_unchecked(x))
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `f(x) = <w, x> + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    weights: Vec<f64>,
    bias: f64,
}

impl LinearModel {
    pub fn new(weights: Vec<f64>, bias: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::invalid("model dimension must be positive"));
        }
        if !bias.is_finite() || weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid("model parameters must be finite"));
        }
        Ok(LinearModel { weights, bias })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "model dimension must be positive");
        LinearModel {
            weights: vec![0.0; dim],
            bias: 0.0,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub(crate) fn params_mut(&mut self) -> (&mut [f64], &mut f64) {
        (&mut self.weights, &mut self.bias)
    }

    pub fn is_finite(&self) -> bool {
        self.bias.is_finite() && self.weights.iter().all(|w| w.is_finite())
    }

    /// `<w, x> + b`.
    pub fn score(&self, x: &FeatureVector) -> Result<f64> {
        check_dim(self.dim(), x.dim())?;
        Ok(self.score_unchecked(x))
    }

    #[inline]
    pub(crate) fn score_unchecked(&self, x: &FeatureVector) -> f64 {
        x.dot(&self.weights) + self.bias
    }

    /// `-f`; same decision boundary, opposite labels.
    pub fn negated(&self) -> LinearModel {
        LinearModel {
            weights: self.weights.iter().map(|w| -w).collect(),
            bias: -self.bias,
        }
    }
}

impl BinaryClassifier for LinearModel {
    fn input_dim(&self) -> usize {
        self.dim()
    }

    fn predict_unchecked(&self, x: &FeatureVector) -> Label {
        Label::sign_of(self.score_unchecked(x))
    }
}

/// `s * sign(f(x))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedClassifier {
    pub model: LinearModel,
    pub assignment: Label,
}

impl SignedClassifier {
    pub fn new(model: LinearModel, assignment: Label) -> Self {
        SignedClassifier { model, assignment }
    }

    pub fn flipped(&self) -> SignedClassifier {
        SignedClassifier {
            model: self.model.clone(),
            assignment: -self.assignment,
        }
    }
}

impl BinaryClassifier for SignedClassifier {
    fn input_dim(&self) -> usize {
        self.model.dim()
    }

    fn predict_unchecked(&self, x: &FeatureVector) -> Label {
        self.assignment * self.model.predict_unchecked(x)
    }
}

/// Margin losses `l(z, t)`; every kind depends on `z` and `t` only through
/// the product `z * t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LossKind {
    /// `log(1 + exp(-zt))`
    Logistic,
    /// `max(0, 1 - zt)`
    Hinge,
    /// `(1 - zt)^2`
    Squared,
    /// `1 - zt`
    Unhinged,
    /// `-zt`
    Linear,
}

impl LossKind {
    pub const ALL: [LossKind; 5] = [
        LossKind::Logistic,
        LossKind::Hinge,
        LossKind::Squared,
        LossKind::Unhinged,
        LossKind::Linear,
    ];

    pub fn value(self, z: f64, t: Label) -> f64 {
        let u = z * t.value();
        match self {
            // log1p(exp(-|u|)) + max(0, -u) never overflows.
            LossKind::Logistic => (-u.abs()).exp().ln_1p() + (-u).max(0.0),
            LossKind::Hinge => (1.0 - u).max(0.0),
            LossKind::Squared => (1.0 - u) * (1.0 - u),
            LossKind::Unhinged => 1.0 - u,
            LossKind::Linear => -u,
        }
    }

    /// `d/dz l(z, t)`. The hinge kink at `zt = 1` takes subgradient 0.
    pub fn derivative(self, z: f64, t: Label) -> f64 {
        let tv = t.value();
        let u = z * tv;
        match self {
            LossKind::Logistic => -tv / (1.0 + u.exp()),
            LossKind::Hinge => {
                if u < 1.0 {
                    -tv
                } else {
                    0.0
                }
            }
            LossKind::Squared => -2.0 * tv * (1.0 - u),
            LossKind::Unhinged | LossKind::Linear => -tv,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LossKind::Logistic => "logistic",
            LossKind::Hinge => "hinge",
            LossKind::Squared => "squared",
            LossKind::Unhinged => "unhinged",
            LossKind::Linear => "linear",
        }
    }
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LossKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LossKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown loss {s:?}")))
    }
}

/// Plain-text model: `dim <d>`, `bias <b>`, an optional `assignment <+1|-1>`
/// line, then `<index> <weight>` for every nonzero weight (1-based).
pub fn write_model(model: &LinearModel, assignment: Option<Label>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dim {}", model.dim());
    let _ = writeln!(out, "bias {}", model.bias());
    if let Some(s) = assignment {
        let _ = writeln!(out, "assignment {s}");
    }
    for (i, &w) in model.weights().iter().enumerate() {
        if w != 0.0 {
            let _ = writeln!(out, "{} {w}", i + 1);
        }
    }
    out
}

pub fn parse_model(text: &str) -> Result<(LinearModel, Option<Label>)> {
    let mut dim = None;
    let mut bias = None;
    let mut assignment = None;
    let mut weights: Vec<f64> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let (key, val) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::parse(lineno, format!("expected two fields, got {line:?}")))?;
        let val = val.trim();
        match key {
            "dim" => {
                let d: usize = val
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad dim {val:?}")))?;
                if d == 0 {
                    return Err(Error::parse(lineno, "dim must be positive"));
                }
                dim = Some(d);
                weights = vec![0.0; d];
            }
            "bias" => {
                bias = Some(
                    val.parse::<f64>()
                        .map_err(|_| Error::parse(lineno, format!("bad bias {val:?}")))?,
                )
            }
            "assignment" => {
                assignment = Some(
                    val.parse::<Label>()
                        .map_err(|e| Error::parse(lineno, e.to_string()))?,
                )
            }
            idx => {
                let d = dim.ok_or_else(|| Error::parse(lineno, "weight before dim line"))?;
                let i: usize = idx
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad weight index {idx:?}")))?;
                if i == 0 || i > d {
                    return Err(Error::parse(lineno, format!("weight index {i} outside 1..={d}")));
                }
                weights[i - 1] = val
                    .parse()
                    .map_err(|_| Error::parse(lineno, format!("bad weight {val:?}")))?;
            }
        }
    }
    if dim.is_none() {
        return Err(Error::parse(0, "model has no dim line"));
    }
    let bias = bias.ok_or_else(|| Error::parse(0, "model has no bias line"))?;
    Ok((LinearModel::new(weights, bias)?, assignment))
}
