//! Stage-2 class assignment, error metrics, and closed forms for the 1-D
//! Gaussian model.

use std::f64::consts::SQRT_2;

use crate::data::{Dataset, FeatureVector, GaussianMixtureSpec, Label, PairDataset};
use crate::error::{Error, Result};
use crate::model::{check_dim, BinaryClassifier, LinearModel, SignedClassifier};
use crate::risk::{check_pairs, ClassPrior};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskReport {
    pub pointwise_error: f64,
    pub clustering_error: f64,
    pub pairwise_error: f64,
}

impl RiskReport {
    pub const CSV_HEADER: &'static str = "pointwise_error,clustering_error,pairwise_error";

    pub fn csv_row(&self) -> String {
        format!("{},{},{}", self.pointwise_error, self.clustering_error, self.pairwise_error)
    }
}

fn check_labeled<C: BinaryClassifier>(clf: &C, data: &Dataset) -> Result<()> {
    if data.is_empty() {
        return Err(Error::Empty("evaluation needs labeled samples"));
    }
    check_dim(clf.input_dim(), data.dim())
}

fn misclassified<C: BinaryClassifier>(clf: &C, data: &Dataset) -> usize {
    data.samples()
        .iter()
        .filter(|s| clf.predict_unchecked(&s.x) != s.y)
        .count()
}

/// Fraction of samples with `h(x) != y`.
pub fn pointwise_error<C: BinaryClassifier>(clf: &C, labeled: &Dataset) -> Result<f64> {
    check_labeled(clf, labeled)?;
    Ok(misclassified(clf, labeled) as f64 / labeled.len() as f64)
}

/// `min(R(h), R(-h))`.
pub fn clustering_error<C: BinaryClassifier>(clf: &C, labeled: &Dataset) -> Result<f64> {
    let e = pointwise_error(clf, labeled)?;
    Ok(e.min(1.0 - e))
}

/// Fraction of pairs with `h(x) h(x') != tau`. Any assignment sign cancels.
pub fn pairwise_error<C: BinaryClassifier>(clf: &C, pairs: &PairDataset) -> Result<f64> {
    check_pairs(clf.input_dim(), pairs, "pairwise error needs pairs")?;
    let wrong = pairs
        .pairs()
        .iter()
        .filter(|p| clf.predict_unchecked(p.x()) * clf.predict_unchecked(p.x_prime()) != p.tau())
        .count();
    Ok(wrong as f64 / pairs.len() as f64)
}

/// All three errors on a labeled set. The pairwise error is over all `n^2`
/// ordered pairs, counted in `O(n)`: a pair is wrong iff exactly one of its
/// points is misclassified.
pub fn evaluate<C: BinaryClassifier>(clf: &C, labeled: &Dataset) -> Result<RiskReport> {
    check_labeled(clf, labeled)?;
    let n = labeled.len() as f64;
    let wrong = misclassified(clf, labeled) as f64;
    let right = n - wrong;
    let pointwise_error = wrong / n;
    Ok(RiskReport {
        pointwise_error,
        clustering_error: pointwise_error.min(1.0 - pointwise_error),
        pairwise_error: 2.0 * wrong * right / (n * n),
    })
}

/// `1/2 - sqrt(1 - 2 r_pair) / 2`, the clustering error implied by a
/// pairwise error.
pub fn clustering_from_pairwise(r_pair: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&r_pair) {
        return Err(Error::invalid(format!("pairwise error must lie in [0, 0.5], got {r_pair}")));
    }
    Ok(0.5 - (1.0 - 2.0 * r_pair).sqrt() / 2.0)
}

/// Empirical `Q(h) = mean((1{h(x) != tau} + 1{h(x') != tau}) / 2)`.
/// Pass the raw model: a pre-signed classifier inverts the meaning of `Q`.
pub fn q_statistic<C: BinaryClassifier>(clf: &C, pairs: &PairDataset) -> Result<f64> {
    check_pairs(clf.input_dim(), pairs, "Q statistic needs pairs")?;
    let misses: usize = pairs
        .pairs()
        .iter()
        .map(|p| {
            usize::from(clf.predict_unchecked(p.x()) != p.tau())
                + usize::from(clf.predict_unchecked(p.x_prime()) != p.tau())
        })
        .sum();
    Ok(misses as f64 / (2 * pairs.len()) as f64)
}

/// `sign(2 pi_+ - 1) * sign(1 - 2Q)` with `sign(0) = -1`, so `Q = 0.5` gives
/// `-sign(2 pi_+ - 1)`.
pub fn assign_sign(prior: ClassPrior, q: f64) -> Result<Label> {
    if prior.is_balanced() {
        return Err(Error::BalancedPrior("class assignment"));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::invalid(format!("Q must lie in [0, 1], got {q}")));
    }
    Ok(prior.majority() * Label::sign_of(1.0 - 2.0 * q))
}

/// `exp(-(m2/2) (2 pi_+ - 1)^2 (2 R - 1)^2)`, an upper bound on the
/// probability that `m2` pairs pick the wrong assignment.
pub fn assignment_error_bound(prior: ClassPrior, m2: usize, r_point: f64) -> Result<f64> {
    if prior.is_balanced() {
        return Err(Error::BalancedPrior("assignment error bound"));
    }
    if !(0.0..=1.0).contains(&r_point) {
        return Err(Error::invalid(format!("pointwise error must lie in [0, 1], got {r_point}")));
    }
    let gap = 2.0 * prior.positive() - 1.0;
    let margin = 2.0 * r_point - 1.0;
    Ok((-(m2 as f64) / 2.0 * gap * gap * margin * margin).exp())
}

/// Stage 2: fixes the sign of a stage-1 model from held-out pairs and the
/// class prior.
pub fn assign_classes(model: &LinearModel, d2: &PairDataset, prior: ClassPrior) -> Result<SignedClassifier> {
    if prior.is_balanced() {
        return Err(Error::BalancedPrior("class assignment"));
    }
    let q = q_statistic(model, d2)?;
    Ok(SignedClassifier::new(model.clone(), assign_sign(prior, q)?))
}

/// Picks the sign with the lower pointwise error on labeled data; ties keep
/// `+1`.
pub fn assign_by_validation(model: &LinearModel, labeled: &Dataset) -> Result<SignedClassifier> {
    let e = pointwise_error(model, labeled)?;
    let sign = if e <= 0.5 { Label::Positive } else { Label::Negative };
    Ok(SignedClassifier::new(model.clone(), sign))
}

/// Assignment from unlabeled data: `sign(2 pi_+ - 1) * sign(mean h(x))`,
/// `sign(0) = -1`. Fails for some classifiers no matter how much data.
pub fn naive_assign<C: BinaryClassifier>(clf: &C, unlabeled: &Dataset, prior: ClassPrior) -> Result<Label> {
    if prior.is_balanced() {
        return Err(Error::BalancedPrior("naive class assignment"));
    }
    if unlabeled.is_empty() {
        return Err(Error::Empty("naive assignment needs samples"));
    }
    check_dim(clf.input_dim(), unlabeled.dim())?;
    let sum: i64 = unlabeled
        .samples()
        .iter()
        .map(|s| if clf.predict_unchecked(&s.x).is_positive() { 1 } else { -1 })
        .sum();
    Ok(prior.majority() * Label::sign_of(sum as f64))
}

/// Whether the naive assignment recovers the optimal sign at population
/// level, given the class-conditional error masses `r_plus = P(h = -1, y = +1)`
/// and `r_minus = P(h = +1, y = -1)`. Zero factors count as `-1`.
///
/// Feasible inputs satisfy `r_plus <= pi_+` and `r_minus <= 1 - pi_+`; only
/// `[0, 1]` is enforced so the sign condition can be evaluated on the whole
/// unit square.
pub fn naive_assign_succeeds(prior: ClassPrior, r_plus: f64, r_minus: f64) -> Result<bool> {
    for (name, r) in [("r_plus", r_plus), ("r_minus", r_minus)] {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::invalid(format!("{name} must lie in [0, 1], got {r}")));
        }
    }
    let p = prior.positive();
    let product = Label::sign_of(2.0 * p - 1.0)
        * Label::sign_of(-2.0 * r_plus + 2.0 * r_minus + 2.0 * p - 1.0)
        * Label::sign_of(1.0 - 2.0 * r_plus - 2.0 * r_minus);
    Ok(product.is_positive())
}

/// `h(x) = +1` iff `x >= theta`, on 1-D inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdClassifier {
    pub theta: f64,
}

impl ThresholdClassifier {
    pub fn classify(&self, x: f64) -> Label {
        if x >= self.theta {
            Label::Positive
        } else {
            Label::Negative
        }
    }
}

impl BinaryClassifier for ThresholdClassifier {
    fn input_dim(&self) -> usize {
        1
    }

    fn predict_unchecked(&self, x: &FeatureVector) -> Label {
        self.classify(x.get(1))
    }
}

/// Standard normal CDF through `erfc`, accurate in both tails.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Population pointwise error of `h_theta` under the 1-D mixture.
pub fn threshold_pointwise_error(theta: f64, spec: &GaussianMixtureSpec) -> Result<f64> {
    spec.validate()?;
    let miss_pos = normal_cdf((theta - spec.mu_pos) / spec.sigma_pos);
    let miss_neg = normal_cdf(-(theta - spec.mu_neg) / spec.sigma_neg);
    Ok(spec.prior_pos * miss_pos + (1.0 - spec.prior_pos) * miss_neg)
}

/// Population pointwise error of a signed 1-D linear classifier. The
/// decision boundary `-b/w` has probability zero, so `>=` versus `>` is
/// immaterial.
pub fn linear_pointwise_error(clf: &SignedClassifier, spec: &GaussianMixtureSpec) -> Result<f64> {
    check_dim(1, clf.model.dim())?;
    let (w, b) = (clf.model.weights()[0], clf.model.bias());
    let raw = if w > 0.0 {
        threshold_pointwise_error(-b / w, spec)?
    } else if w < 0.0 {
        1.0 - threshold_pointwise_error(-b / w, spec)?
    } else if b > 0.0 {
        1.0 - spec.prior_pos
    } else {
        spec.prior_pos
    };
    Ok(if clf.assignment.is_positive() { raw } else { 1.0 - raw })
}
