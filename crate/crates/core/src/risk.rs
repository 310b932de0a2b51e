//! Empirical risk estimators over pairwise data and their gradients.
//!
//! Every estimator is a plain empirical mean over the given pairs, summed in
//! input order with compensated summation so results do not depend on
//! scheduling.

use crate::data::{Dataset, FeatureVector, Label, PairDataset, PairwiseSample, PointwiseSample};
use crate::error::{Error, Result};
use crate::model::{check_dim, BinaryClassifier, LinearModel, LossKind};

/// Positive class prior `pi_+` in `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassPrior(f64);

impl ClassPrior {
    pub fn new(prior_pos: f64) -> Result<Self> {
        if prior_pos > 0.0 && prior_pos < 1.0 {
            Ok(ClassPrior(prior_pos))
        } else {
            Err(Error::invalid(format!("class prior must lie in (0, 1), got {prior_pos}")))
        }
    }

    /// Fraction of positive labels in a labeled dataset.
    pub fn empirical(data: &Dataset) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::Empty("empirical prior of an empty dataset"));
        }
        ClassPrior::new(data.positive_count() as f64 / data.len() as f64)
    }

    pub fn positive(self) -> f64 {
        self.0
    }

    pub fn negative(self) -> f64 {
        1.0 - self.0
    }

    pub fn is_balanced(self) -> bool {
        (self.0 - 0.5).abs() < 1e-12
    }

    /// `sign(2 pi_+ - 1)`, i.e. which class is the majority.
    pub fn majority(self) -> Label {
        Label::sign_of(2.0 * self.0 - 1.0)
    }
}

/// Mixing weights on the probability simplex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaWeights {
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
}

impl GammaWeights {
    pub fn new(g1: f64, g2: f64, g3: f64) -> Result<Self> {
        if [g1, g2, g3].iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
            return Err(Error::invalid("gamma weights must be nonnegative"));
        }
        if (g1 + g2 + g3 - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "gamma weights must sum to 1, got {}",
                g1 + g2 + g3
            )));
        }
        Ok(GammaWeights { g1, g2, g3 })
    }
}

/// Gradient with respect to `(w, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl Gradient {
    pub fn zeros(dim: usize) -> Self {
        Gradient {
            weights: vec![0.0; dim],
            bias: 0.0,
        }
    }

    fn add_scaled(&mut self, x: &FeatureVector, coef: f64) {
        for &(i, v) in x.entries() {
            self.weights[i as usize - 1] += coef * v;
        }
        self.bias += coef;
    }

    fn scale(&mut self, s: f64) {
        self.weights.iter_mut().for_each(|g| *g *= s);
        self.bias *= s;
    }
}

/// Neumaier-compensated running sum.
#[derive(Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

fn mean_of(values: impl Iterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::default();
    let mut n = 0usize;
    for v in values {
        acc.add(v);
        n += 1;
    }
    acc.total() / n as f64
}

pub(crate) fn check_pairs(dim: usize, pairs: &PairDataset, what: &'static str) -> Result<()> {
    if pairs.is_empty() {
        return Err(Error::Empty(what));
    }
    check_dim(dim, pairs.dim())
}

fn check_sd_prior(prior: ClassPrior) -> Result<()> {
    if prior.is_balanced() {
        Err(Error::BalancedPrior("SD risk"))
    } else {
        Ok(())
    }
}

#[inline]
fn pair_scores(model: &LinearModel, p: &PairwiseSample) -> (f64, f64) {
    (model.score_unchecked(p.x()), model.score_unchecked(p.x_prime()))
}

/// Empirical pairwise surrogate risk `(1/m) sum l(f(x) f(x'), tau)`.
pub fn pairwise_surrogate_risk(model: &LinearModel, pairs: &PairDataset, kind: LossKind) -> Result<f64> {
    check_pairs(model.dim(), pairs, "pairwise surrogate risk needs pairs")?;
    Ok(mean_of(pairs.pairs().iter().map(|p| {
        let (a, b) = pair_scores(model, p);
        kind.value(a * b, p.tau())
    })))
}

pub(crate) fn pairwise_gradient_into(
    model: &LinearModel,
    batch: &[&PairwiseSample],
    kind: LossKind,
    grad: &mut Gradient,
) {
    for p in batch {
        let (a, b) = pair_scores(model, p);
        let d = kind.derivative(a * b, p.tau());
        // d/dtheta l(f f') = l'(z) (f' df + f df')
        grad.add_scaled(p.x(), d * b);
        grad.add_scaled(p.x_prime(), d * a);
    }
    grad.scale(1.0 / batch.len() as f64);
}

/// Batch-mean gradient of the pairwise surrogate risk.
pub fn pairwise_risk_gradient(model: &LinearModel, batch: &PairDataset, kind: LossKind) -> Result<Gradient> {
    check_pairs(model.dim(), batch, "gradient needs a nonempty batch")?;
    let refs: Vec<&PairwiseSample> = batch.pairs().iter().collect();
    let mut g = Gradient::zeros(model.dim());
    pairwise_gradient_into(model, &refs, kind, &mut g);
    Ok(g)
}

/// `E[(phi(x, tau) + phi(x', tau))] / (2(2pi-1)) - (1-pi)/(2pi-1)` for a
/// per-point penalty `phi`.
fn sd_functional(pairs: &PairDataset, prior: ClassPrior, phi: impl Fn(&FeatureVector, Label) -> f64) -> f64 {
    let gap = 2.0 * prior.positive() - 1.0;
    let m = mean_of(
        pairs
            .pairs()
            .iter()
            .map(|p| phi(p.x(), p.tau()) + phi(p.x_prime(), p.tau())),
    );
    m / (2.0 * gap) - prior.negative() / gap
}

/// Pointwise 0-1 error of `h` expressed through pairs and the class prior.
/// Undefined at a balanced prior.
pub fn sd_pointwise_risk<C: BinaryClassifier>(clf: &C, pairs: &PairDataset, prior: ClassPrior) -> Result<f64> {
    check_sd_prior(prior)?;
    check_pairs(clf.input_dim(), pairs, "SD risk needs pairs")?;
    Ok(sd_functional(pairs, prior, |x, t| {
        if clf.predict_unchecked(x) != t {
            1.0
        } else {
            0.0
        }
    }))
}

/// SD pointwise risk with each indicator `1{h(x) != tau}` replaced by
/// `l(f(x), tau)`. Not clamped; it can be negative.
pub fn sd_surrogate_risk(model: &LinearModel, pairs: &PairDataset, prior: ClassPrior, kind: LossKind) -> Result<f64> {
    check_sd_prior(prior)?;
    check_pairs(model.dim(), pairs, "SD risk needs pairs")?;
    Ok(sd_functional(pairs, prior, |x, t| kind.value(model.score_unchecked(x), t)))
}

pub(crate) fn sd_gradient_into(
    model: &LinearModel,
    batch: &[&PairwiseSample],
    prior: ClassPrior,
    kind: LossKind,
    grad: &mut Gradient,
) {
    for p in batch {
        let (a, b) = pair_scores(model, p);
        grad.add_scaled(p.x(), kind.derivative(a, p.tau()));
        grad.add_scaled(p.x_prime(), kind.derivative(b, p.tau()));
    }
    let gap = 2.0 * prior.positive() - 1.0;
    grad.scale(1.0 / (2.0 * gap * batch.len() as f64));
}

pub fn sd_surrogate_gradient(
    model: &LinearModel,
    batch: &PairDataset,
    prior: ClassPrior,
    kind: LossKind,
) -> Result<Gradient> {
    check_sd_prior(prior)?;
    check_pairs(model.dim(), batch, "gradient needs a nonempty batch")?;
    let refs: Vec<&PairwiseSample> = batch.pairs().iter().collect();
    let mut g = Gradient::zeros(model.dim());
    sd_gradient_into(model, &refs, prior, kind, &mut g);
    Ok(g)
}

const MCL_FLOOR: f64 = 1e-12;

#[inline]
fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// `(q~, 1 - q~)` with `q~ = q q' + (1-q)(1-q')`, both computed directly.
#[inline]
fn mcl_agreement(a: f64, b: f64) -> (f64, f64) {
    let (qa, qb) = (sigmoid(a), sigmoid(b));
    let (ra, rb) = (sigmoid(-a), sigmoid(-b));
    (qa * qb + ra * rb, qa * rb + ra * qb)
}

fn mcl_pair_loss(a: f64, b: f64, tau: Label) -> f64 {
    let (same, diff) = mcl_agreement(a, b);
    match tau {
        Label::Positive => -same.max(MCL_FLOOR).ln(),
        Label::Negative => -diff.max(MCL_FLOOR).ln(),
    }
}

/// Binary meta-classification likelihood objective: the negative log
/// likelihood of `tau` under `q~(f(x), f(x'))`, log arguments floored at
/// `1e-12`.
pub fn mcl_objective(model: &LinearModel, pairs: &PairDataset) -> Result<f64> {
    check_pairs(model.dim(), pairs, "MCL objective needs pairs")?;
    Ok(mean_of(pairs.pairs().iter().map(|p| {
        let (a, b) = pair_scores(model, p);
        mcl_pair_loss(a, b, p.tau())
    })))
}

pub(crate) fn mcl_gradient_into(model: &LinearModel, batch: &[&PairwiseSample], grad: &mut Gradient) {
    for p in batch {
        let (a, b) = pair_scores(model, p);
        let (same, diff) = mcl_agreement(a, b);
        // d q~/da = q(a)(1-q(a)) (2 q(b) - 1), and d(1-q~)/da is its negative.
        let dsame_da = sigmoid(a) * sigmoid(-a) * (sigmoid(b) - sigmoid(-b));
        let dsame_db = sigmoid(b) * sigmoid(-b) * (sigmoid(a) - sigmoid(-a));
        let (da, db) = match p.tau() {
            Label::Positive if same > MCL_FLOOR => (-dsame_da / same, -dsame_db / same),
            Label::Negative if diff > MCL_FLOOR => (dsame_da / diff, dsame_db / diff),
            _ => (0.0, 0.0),
        };
        grad.add_scaled(p.x(), da);
        grad.add_scaled(p.x_prime(), db);
    }
    grad.scale(1.0 / batch.len() as f64);
}

pub fn mcl_gradient(model: &LinearModel, batch: &PairDataset) -> Result<Gradient> {
    check_pairs(model.dim(), batch, "gradient needs a nonempty batch")?;
    let refs: Vec<&PairwiseSample> = batch.pairs().iter().collect();
    let mut g = Gradient::zeros(model.dim());
    mcl_gradient_into(model, &refs, &mut g);
    Ok(g)
}

/// Ordinary pointwise surrogate risk `(1/n) sum l(f(x), y)`.
pub fn supervised_risk(model: &LinearModel, data: &Dataset, kind: LossKind) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::Empty("supervised risk needs samples"));
    }
    check_dim(model.dim(), data.dim())?;
    Ok(mean_of(
        data.samples()
            .iter()
            .map(|s| kind.value(model.score_unchecked(&s.x), s.y)),
    ))
}

pub(crate) fn supervised_gradient_into(
    model: &LinearModel,
    batch: &[&PointwiseSample],
    kind: LossKind,
    grad: &mut Gradient,
) {
    for s in batch {
        grad.add_scaled(&s.x, kind.derivative(model.score_unchecked(&s.x), s.y));
    }
    grad.scale(1.0 / batch.len() as f64);
}

/// Pairwise surrogate risk estimated from similar, dissimilar, and unlabeled
/// pairs. Unlabeled pairs ignore their stored `tau`. A dataset may be empty
/// only when its coefficient vanishes for the given weights.
#[allow(clippy::too_many_arguments)]
pub fn semi_supervised_risk(
    model: &LinearModel,
    similar: &PairDataset,
    dissimilar: &PairDataset,
    unlabeled: &PairDataset,
    prior: ClassPrior,
    gamma: GammaWeights,
    kind: LossKind,
) -> Result<f64> {
    let GammaWeights { g1, g2, g3 } = gamma;
    let (pp, pn) = (prior.positive(), prior.negative());
    let d = model.dim();

    let mean_loss = |data: &PairDataset, f: &dyn Fn(f64, f64) -> f64| {
        mean_of(data.pairs().iter().map(|p| {
            let (a, b) = pair_scores(model, p);
            let z = a * b;
            f(kind.value(z, Label::Positive), kind.value(z, Label::Negative))
        }))
    };

    let mut risk = 0.0;
    if g1 + g2 > 0.0 {
        check_pairs(d, similar, "similar pairs required for these gamma weights")?;
        risk += (pp * pp + pn * pn) * mean_loss(similar, &|lp, ln| (g1 + g2) * lp - g2 * ln);
    }
    if g1 + g3 > 0.0 {
        check_pairs(d, dissimilar, "dissimilar pairs required for these gamma weights")?;
        risk += 2.0 * pp * pn * mean_loss(dissimilar, &|lp, ln| (g1 + g3) * ln - g3 * lp);
    }
    if g2 + g3 > 0.0 {
        check_pairs(d, unlabeled, "unlabeled pairs required for these gamma weights")?;
        risk += mean_loss(unlabeled, &|lp, ln| g3 * lp + g2 * ln);
    }
    Ok(risk)
}
