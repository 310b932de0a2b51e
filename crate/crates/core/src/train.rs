//! Stage-1 trainers: mini-batch SGD over any differentiable objective and the
//! closed-form solver for the unhinged loss.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::data::{Dataset, PairDataset, PairwiseSample, PointwiseSample, RngSeed};
use crate::error::{Error, Result};
use crate::model::{check_dim, LinearModel, LossKind};
use crate::risk::{
    check_pairs, mcl_gradient_into, mcl_objective, pairwise_gradient_into, pairwise_surrogate_risk,
    sd_gradient_into, sd_surrogate_risk, supervised_gradient_into, supervised_risk, ClassPrior, Gradient,
};

/// What SGD minimizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Objective {
    /// Pairwise surrogate risk on `f(x) f(x')`.
    Cips(LossKind),
    /// SD surrogate risk with a known class prior.
    Sd { kind: LossKind, prior: ClassPrior },
    /// Meta-classification likelihood.
    Mcl,
    /// Pointwise risk on labeled points.
    Supervised(LossKind),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub l2: f64,
    pub seed: RngSeed,
    pub objective: Objective,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 1e-2,
            batch_size: 64,
            epochs: 500,
            l2: 1e-4,
            seed: RngSeed(0),
            objective: Objective::Cips(LossKind::Logistic),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::invalid("learning rate must be positive"));
        }
        if self.batch_size == 0 || self.epochs == 0 {
            return Err(Error::invalid("batch size and epochs must be positive"));
        }
        if !(self.l2.is_finite() && self.l2 >= 0.0) {
            return Err(Error::invalid("l2 penalty must be nonnegative"));
        }
        if let Objective::Sd { prior, .. } = self.objective {
            if prior.is_balanced() {
                return Err(Error::BalancedPrior("SD risk"));
            }
        }
        Ok(())
    }
}

/// Training input: pairs for the pairwise objectives, points for `Supervised`.
#[derive(Debug, Clone, Copy)]
pub enum TrainingData<'a> {
    Pairs(&'a PairDataset),
    Points(&'a Dataset),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub model: LinearModel,
    /// Regularized objective on the full training set; entry 0 is the
    /// initial model, entry `k` the model after epoch `k`.
    pub trace: Vec<f64>,
}

const INIT_SCALE: f64 = 1e-2;

fn full_objective(model: &LinearModel, data: TrainingData<'_>, objective: Objective, l2: f64) -> Result<f64> {
    let base = match (objective, data) {
        (Objective::Cips(kind), TrainingData::Pairs(p)) => pairwise_surrogate_risk(model, p, kind)?,
        (Objective::Sd { kind, prior }, TrainingData::Pairs(p)) => sd_surrogate_risk(model, p, prior, kind)?,
        (Objective::Mcl, TrainingData::Pairs(p)) => mcl_objective(model, p)?,
        (Objective::Supervised(kind), TrainingData::Points(d)) => supervised_risk(model, d, kind)?,
        _ => unreachable!("objective and data kind checked before training"),
    };
    let sq: f64 = model.weights().iter().map(|w| w * w).sum();
    Ok(base + 0.5 * l2 * sq)
}

/// Shuffled mini-batch gradient descent with L2 penalty `(l2/2)|w|^2` on the
/// weights only. Each epoch is one pass over a fresh permutation; the last
/// batch may be short. The product objectives (CIPS, MCL) have a zero
/// gradient at the zero model, so they start from weights drawn uniformly in
/// `[-0.01, 0.01]`; the others start at zero. Bias always starts at zero.
pub fn train_sgd(data: TrainingData<'_>, config: &TrainConfig, dim: usize) -> Result<TrainOutcome> {
    config.validate()?;
    let n = match (config.objective, data) {
        (Objective::Supervised(_), TrainingData::Points(d)) => {
            if d.is_empty() {
                return Err(Error::Empty("training needs samples"));
            }
            check_dim(dim, d.dim())?;
            d.len()
        }
        (Objective::Supervised(_), TrainingData::Pairs(_)) => {
            return Err(Error::invalid("supervised training needs labeled points"))
        }
        (_, TrainingData::Pairs(p)) => {
            check_pairs(dim, p, "training needs pairs")?;
            p.len()
        }
        (_, TrainingData::Points(_)) => return Err(Error::invalid("pairwise objectives need pairs")),
    };
    if dim == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }

    let mut rng = config.seed.rng();
    let mut model = LinearModel::zeros(dim);
    if matches!(config.objective, Objective::Cips(_) | Objective::Mcl) {
        for w in model.params_mut().0.iter_mut() {
            *w = rng.random_range(-INIT_SCALE..=INIT_SCALE);
        }
    }

    let mut trace = Vec::with_capacity(config.epochs + 1);
    let initial = full_objective(&model, data, config.objective, config.l2)?;
    if !initial.is_finite() {
        return Err(Error::NonFinite { epoch: 0 });
    }
    trace.push(initial);

    let mut order: Vec<usize> = (0..n).collect();
    let mut grad = Gradient::zeros(dim);
    let mut pair_buf: Vec<&PairwiseSample> = Vec::with_capacity(config.batch_size);
    let mut point_buf: Vec<&PointwiseSample> = Vec::with_capacity(config.batch_size);

    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(config.batch_size) {
            grad.weights.iter_mut().for_each(|g| *g = 0.0);
            grad.bias = 0.0;
            match data {
                TrainingData::Pairs(p) => {
                    pair_buf.clear();
                    pair_buf.extend(chunk.iter().map(|&i| &p.pairs()[i]));
                    match config.objective {
                        Objective::Cips(kind) => pairwise_gradient_into(&model, &pair_buf, kind, &mut grad),
                        Objective::Sd { kind, prior } => sd_gradient_into(&model, &pair_buf, prior, kind, &mut grad),
                        Objective::Mcl => mcl_gradient_into(&model, &pair_buf, &mut grad),
                        Objective::Supervised(_) => unreachable!(),
                    }
                }
                TrainingData::Points(d) => {
                    point_buf.clear();
                    point_buf.extend(chunk.iter().map(|&i| &d.samples()[i]));
                    let Objective::Supervised(kind) = config.objective else { unreachable!() };
                    supervised_gradient_into(&model, &point_buf, kind, &mut grad);
                }
            }
            let (w, b) = model.params_mut();
            for (wi, gi) in w.iter_mut().zip(&grad.weights) {
                *wi -= config.learning_rate * (gi + config.l2 * *wi);
            }
            *b -= config.learning_rate * grad.bias;
        }
        let value = full_objective(&model, data, config.objective, config.l2)?;
        if !value.is_finite() || !model.is_finite() {
            return Err(Error::NonFinite { epoch });
        }
        trace.push(value);
    }
    Ok(TrainOutcome { model, trace })
}

/// `epoch,objective_value` CSV of a training trace.
pub fn write_trace(trace: &[f64]) -> String {
    let mut out = String::from("epoch,objective_value\n");
    for (epoch, v) in trace.iter().enumerate() {
        let _ = writeln!(out, "{epoch},{v}");
    }
    out
}

/// Largest dimension stored densely.
pub const MAX_DENSE_DIM: usize = 10_000;

/// Dense symmetric `M = (1/2m) sum tau (x x'^T + x' x^T)`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PairScatterMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl PairScatterMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `v^T M v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        self.mul_vec(v).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

pub fn build_pair_scatter(pairs: &PairDataset) -> Result<PairScatterMatrix> {
    if pairs.is_empty() {
        return Err(Error::Empty("scatter matrix needs pairs"));
    }
    let d = pairs.dim();
    if d > MAX_DENSE_DIM {
        return Err(Error::DimensionTooLarge { dim: d, limit: MAX_DENSE_DIM });
    }
    let mut data = vec![0.0; d * d];
    for p in pairs.pairs() {
        let t = p.tau().value();
        for &(i, xi) in p.x().entries() {
            for &(j, xj) in p.x_prime().entries() {
                let (i, j) = (i as usize - 1, j as usize - 1);
                let v = t * xi * xj;
                data[i * d + j] += v;
                data[j * d + i] += v;
            }
        }
    }
    let scale = 1.0 / (2.0 * pairs.len() as f64);
    data.iter_mut().for_each(|v| *v *= scale);
    Ok(PairScatterMatrix { dim: d, data })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    /// Unit norm; first nonzero coordinate positive.
    pub vector: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

pub const POWER_TOLERANCE: f64 = 1e-10;
pub const POWER_MAX_ITERATIONS: usize = 100_000;
const POWER_START_SEED: RngSeed = RngSeed(0x9e37_79b9_7f4a_7c15);

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|a| *a /= norm);
    }
    norm
}

fn fix_sign(v: &mut [f64]) {
    if let Some(&first) = v.iter().find(|a| **a != 0.0) {
        if first < 0.0 {
            v.iter_mut().for_each(|a| *a = -*a);
        }
    }
}

/// Leading eigenpair of `M` (largest algebraic eigenvalue) by power iteration
/// on `M + cI`, `c = |M|_1`, which makes every eigenvalue nonnegative. Stops
/// once successive unit iterates differ by at most `1e-10` in norm.
pub fn top_eigenpair(m: &PairScatterMatrix) -> Result<Eigenpair> {
    let d = m.dim();
    let shift = m.norm_one();
    if shift == 0.0 {
        let mut e1 = vec![0.0; d];
        e1[0] = 1.0;
        return Ok(Eigenpair { vector: e1, value: 0.0, iterations: 0 });
    }
    let mut rng = POWER_START_SEED.rng();
    let mut v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
    normalize(&mut v);

    let mut residual = f64::INFINITY;
    for it in 1..=POWER_MAX_ITERATIONS {
        let mut next = m.mul_vec(&v);
        next.iter_mut().zip(&v).for_each(|(a, b)| *a += shift * b);
        if normalize(&mut next) == 0.0 {
            // M + cI annihilates the iterate. For a generic start this only
            // happens when M = -cI, where every unit vector is a top eigenvector.
            if m.as_slice().iter().enumerate().all(|(k, a)| {
                let target = if k / d == k % d { -shift } else { 0.0 };
                *a == target
            }) {
                let mut e1 = vec![0.0; d];
                e1[0] = 1.0;
                return Ok(Eigenpair { vector: e1, value: -shift, iterations: it });
            }
            return Err(Error::NotConverged { iterations: it, residual });
        }
        residual = next.iter().zip(&v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        v = next;
        if residual <= POWER_TOLERANCE {
            fix_sign(&mut v);
            let value = m.quadratic_form(&v);
            return Ok(Eigenpair { vector: v, value, iterations: it });
        }
    }
    Err(Error::NotConverged { iterations: POWER_MAX_ITERATIONS, residual })
}

/// Unit-norm maximizer of `w^T M w`, i.e. the minimizer of the unhinged
/// pairwise risk over `|w| = 1` for `f(x) = w^T x`. Bias is fixed at 0;
/// append a constant feature to emulate one.
pub fn train_unhinged_closed_form(pairs: &PairDataset) -> Result<LinearModel> {
    let m = build_pair_scatter(pairs)?;
    let top = top_eigenpair(&m)?;
    LinearModel::new(top.vector, 0.0)
}
