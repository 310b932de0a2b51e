//! Monte Carlo sweeps over the 1-D Gaussian model. Cells run in parallel,
//! each trial from its own derived seed; results are integer counts or
//! per-trial values aggregated in grid order, so output does not depend on
//! scheduling.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;

use crate::assign::{assign_sign, assignment_error_bound, linear_pointwise_error, threshold_pointwise_error, ThresholdClassifier};
use crate::data::{sample_gaussian, sample_gaussian_pairs, GaussianMixtureSpec, Label, RngSeed};
use crate::error::{Error, Result};
use crate::model::{LossKind, SignedClassifier};
use crate::risk::ClassPrior;
use crate::train::{train_sgd, Objective, TrainConfig, TrainingData};

pub const DEFAULT_THETAS: [f64; 7] = [-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0];
pub const DEFAULT_M_PRIMES: [usize; 5] = [2, 8, 32, 128, 512];

/// `{1/7, ..., 6/7}`.
pub fn default_priors() -> Vec<f64> {
    (1..=6).map(|k| k as f64 / 7.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentSweep {
    /// Mixture including the class prior (must not be balanced).
    pub spec: GaussianMixtureSpec,
    pub thetas: Vec<f64>,
    pub m_primes: Vec<usize>,
    pub trials: usize,
    pub seed: RngSeed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentCell {
    pub theta: f64,
    pub m_prime: usize,
    pub trials: usize,
    pub failures: usize,
    pub empirical_rate: f64,
    pub bound: f64,
}

pub const ASSIGNMENT_CSV_HEADER: &str = "theta,m_prime,trials,failures,empirical_rate,lemma5_bound";

/// One assignment trial for `h_theta`: draws `m_prime` i.i.d. pairs, computes
/// `Q`, and reports whether the chosen sign differs from the population
/// optimum. When both signs are optimal (`R = 0.5`) nothing can fail.
pub fn assignment_trial(spec: &GaussianMixtureSpec, theta: f64, m_prime: usize, seed: RngSeed) -> Result<bool> {
    let prior = ClassPrior::new(spec.prior_pos)?;
    if m_prime == 0 {
        return Err(Error::invalid("m_prime must be positive"));
    }
    let r = threshold_pointwise_error(theta, spec)?;
    let clf = ThresholdClassifier { theta };
    let mut rng = seed.rng();
    let mut misses = 0usize;
    for _ in 0..m_prime {
        let (x, y) = spec.draw(&mut rng);
        let (xp, yp) = spec.draw(&mut rng);
        let tau = y * yp;
        misses += usize::from(clf.classify(x) != tau) + usize::from(clf.classify(xp) != tau);
    }
    let q = misses as f64 / (2 * m_prime) as f64;
    let chosen = assign_sign(prior, q)?;
    Ok(if r < 0.5 {
        chosen != Label::Positive
    } else if r > 0.5 {
        chosen != Label::Negative
    } else {
        false
    })
}

pub fn sweep_assignment(cfg: &AssignmentSweep) -> Result<Vec<AssignmentCell>> {
    let prior = ClassPrior::new(cfg.spec.prior_pos)?;
    if prior.is_balanced() {
        return Err(Error::BalancedPrior("class assignment"));
    }
    if cfg.thetas.is_empty() || cfg.m_primes.is_empty() {
        return Err(Error::invalid("sweep grids must be nonempty"));
    }
    if cfg.trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    if cfg.m_primes.contains(&0) {
        return Err(Error::invalid("m_prime must be positive"));
    }
    cfg.spec.validate()?;

    let grid: Vec<(usize, f64, usize)> = cfg
        .thetas
        .iter()
        .flat_map(|&t| cfg.m_primes.iter().map(move |&m| (t, m)))
        .enumerate()
        .map(|(i, (t, m))| (i, t, m))
        .collect();
    let mut cells = grid
        .par_iter()
        .map(|&(cell, theta, m_prime)| {
            let cell_seed = cfg.seed.derive(cell as u64);
            let failures = (0..cfg.trials)
                .into_par_iter()
                .map(|t| assignment_trial(&cfg.spec, theta, m_prime, cell_seed.derive(t as u64)).map(usize::from))
                .sum::<Result<usize>>()?;
            let r = threshold_pointwise_error(theta, &cfg.spec)?;
            Ok(AssignmentCell {
                theta,
                m_prime,
                trials: cfg.trials,
                failures,
                empirical_rate: failures as f64 / cfg.trials as f64,
                bound: assignment_error_bound(prior, m_prime, r)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    cells.sort_by(|a, b| a.theta.total_cmp(&b.theta).then(a.m_prime.cmp(&b.m_prime)));
    Ok(cells)
}

pub fn write_assignment_csv(cells: &[AssignmentCell]) -> String {
    let mut out = format!("{ASSIGNMENT_CSV_HEADER}\n");
    for c in cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            c.theta, c.m_prime, c.trials, c.failures, c.empirical_rate, c.bound
        );
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Cips,
    Sd,
    Supervised,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Cips, Method::Sd, Method::Supervised];

    pub fn name(self) -> &'static str {
        match self {
            Method::Cips => "cips",
            Method::Sd => "sd",
            Method::Supervised => "supervised",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown method {s:?} (expected cips, sd, or supervised)")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriorSweep {
    /// Class-conditional parameters; its prior is replaced per grid point.
    pub base: GaussianMixtureSpec,
    pub priors: Vec<f64>,
    /// Pairs for CIPS and SD, labeled points for the supervised reference.
    pub m: usize,
    pub methods: Vec<Method>,
    pub trials: usize,
    pub loss: LossKind,
    /// Optimizer settings; `objective` is set per method and `seed` is the
    /// sweep's base seed.
    pub train: TrainConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriorCell {
    pub prior: f64,
    pub method: Method,
    pub m: usize,
    /// `None` where the method is undefined (SD at a balanced prior).
    pub mean_clustering_error: Option<f64>,
    /// `None` when undefined or with a single trial.
    pub std_error: Option<f64>,
}

pub const PRIOR_CSV_HEADER: &str = "prior,method,m,mean_clustering_error,std_error";

/// Population clustering error of one trained model on the 1-D mixture.
/// Trial data come from `data_seed`; the optimizer uses `train.seed`.
pub fn prior_trial(
    spec: &GaussianMixtureSpec,
    method: Method,
    m: usize,
    loss: LossKind,
    train: &TrainConfig,
    data_seed: RngSeed,
) -> Result<f64> {
    let prior = ClassPrior::new(spec.prior_pos)?;
    let model = match method {
        Method::Supervised => {
            let data = sample_gaussian(spec, m, data_seed)?;
            let cfg = TrainConfig { objective: Objective::Supervised(loss), ..train.clone() };
            train_sgd(TrainingData::Points(&data), &cfg, 1)?.model
        }
        Method::Cips | Method::Sd => {
            if m == 0 {
                return Err(Error::Empty("sweep needs at least one pair"));
            }
            let pairs = sample_gaussian_pairs(spec, m, data_seed)?;
            let objective = if method == Method::Cips {
                Objective::Cips(loss)
            } else {
                Objective::Sd { kind: loss, prior }
            };
            let cfg = TrainConfig { objective, ..train.clone() };
            train_sgd(TrainingData::Pairs(&pairs), &cfg, 1)?.model
        }
    };
    let r = linear_pointwise_error(&SignedClassifier::new(model, Label::Positive), spec)?;
    Ok(r.min(1.0 - r))
}

pub fn sweep_prior(cfg: &PriorSweep) -> Result<Vec<PriorCell>> {
    if cfg.priors.is_empty() || cfg.methods.is_empty() {
        return Err(Error::invalid("sweep grids must be nonempty"));
    }
    if cfg.trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    cfg.train.validate()?;
    let specs = cfg
        .priors
        .iter()
        .map(|&p| cfg.base.with_prior(p))
        .collect::<Result<Vec<_>>>()?;

    // Trial t at prior index i shares its data seed across methods.
    let jobs: Vec<(usize, Method, usize)> = (0..specs.len())
        .flat_map(|i| cfg.methods.iter().flat_map(move |&m| (0..cfg.trials).map(move |t| (i, m, t))))
        .collect();
    let results = jobs
        .par_iter()
        .map(|&(i, method, t)| {
            let spec = &specs[i];
            if method == Method::Sd && ClassPrior::new(spec.prior_pos)?.is_balanced() {
                return Ok(None);
            }
            let data_seed = cfg.train.seed.derive(i as u64).derive(t as u64);
            let train = TrainConfig { seed: data_seed.derive(1 + method as u64), ..cfg.train.clone() };
            prior_trial(spec, method, cfg.m, cfg.loss, &train, data_seed).map(Some)
        })
        .collect::<Result<Vec<Option<f64>>>>()?;

    let mut cells: Vec<PriorCell> = results
        .chunks(cfg.trials)
        .zip(jobs.chunks(cfg.trials))
        .map(|(values, keys)| {
            let (i, method, _) = keys[0];
            let values: Option<Vec<f64>> = values.iter().copied().collect();
            let (mean, se) = match values {
                Some(v) => {
                    let n = v.len() as f64;
                    let mean = v.iter().sum::<f64>() / n;
                    let se = (v.len() > 1).then(|| {
                        let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
                        (var / n).sqrt()
                    });
                    (Some(mean), se)
                }
                None => (None, None),
            };
            PriorCell {
                prior: cfg.priors[i],
                method,
                m: cfg.m,
                mean_clustering_error: mean,
                std_error: se,
            }
        })
        .collect();
    cells.sort_by(|a, b| a.prior.total_cmp(&b.prior).then(a.method.cmp(&b.method)));
    Ok(cells)
}

pub fn write_prior_csv(cells: &[PriorCell]) -> String {
    let na = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| x.to_string());
    let mut out = format!("{PRIOR_CSV_HEADER}\n");
    for c in cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            c.prior,
            c.method,
            c.m,
            na(c.mean_clustering_error),
            na(c.std_error)
        );
    }
    out
}
