//! Synthetic generation, random pair coupling, and the two-stage split.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{
    Dataset, FeatureVector, GaussianMixtureSpec, PairDataset, PairwiseSample, PointwiseSample,
    RngSeed,
};
use crate::error::{Error, Result};

/// `n` one-dimensional samples from the class-conditional Gaussian model.
/// Each sample consumes one uniform (label) then one standard normal draw.
pub fn sample_gaussian(spec: &GaussianMixtureSpec, n: usize, seed: RngSeed) -> Result<Dataset> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::Empty("sample count must be at least 1"));
    }
    let mut rng = seed.rng();
    let samples = (0..n)
        .map(|_| {
            let (x, y) = spec.draw(&mut rng);
            PointwiseSample {
                x: FeatureVector::from_dense(&[x]),
                y,
            }
        })
        .collect();
    Dataset::new(samples, 1)
}

/// `m` i.i.d. pairs straight from the mixture: each pair draws `(x, y)` then
/// `(x', y')` and keeps `tau = y * y'`.
pub fn sample_gaussian_pairs(spec: &GaussianMixtureSpec, m: usize, seed: RngSeed) -> Result<PairDataset> {
    spec.validate()?;
    let mut rng = seed.rng();
    let pairs = (0..m)
        .map(|_| {
            let (x, y) = spec.draw(&mut rng);
            let (xp, yp) = spec.draw(&mut rng);
            PairwiseSample::new(FeatureVector::from_dense(&[x]), FeatureVector::from_dense(&[xp]), y * yp)
        })
        .collect::<Result<Vec<_>>>()?;
    PairDataset::new(pairs, 1)
}

/// Random coupling: each of the `m` pairs draws `i` then `j` uniformly with
/// replacement (`i == j` allowed) and keeps only `tau = y_i * y_j`.
pub fn make_pairs(data: &Dataset, m: usize, seed: RngSeed) -> Result<PairDataset> {
    if data.is_empty() {
        return Err(Error::Empty("cannot couple pairs from an empty dataset"));
    }
    let n = data.len();
    let samples = data.samples();
    let mut rng = seed.rng();
    let pairs = (0..m)
        .map(|_| {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            let (a, b) = (&samples[i], &samples[j]);
            PairwiseSample::new(a.x.clone(), b.x.clone(), a.y * b.y)
        })
        .collect::<Result<Vec<_>>>()?;
    PairDataset::new(pairs, data.dim())
}

/// All `n^2` ordered pairs `(i, j)`, row-major, including `i == j`.
pub fn make_all_ordered_pairs(data: &Dataset) -> Result<PairDataset> {
    let samples = data.samples();
    let mut pairs = Vec::with_capacity(samples.len() * samples.len());
    for a in samples {
        for b in samples {
            pairs.push(PairwiseSample::new(a.x.clone(), b.x.clone(), a.y * b.y)?);
        }
    }
    PairDataset::new(pairs, data.dim())
}

/// Random disjoint split into `(D1, D2)` with `|D1| = round(ratio * m)`.
/// Pairs keep their relative order within each half after a uniform
/// permutation of the whole set.
pub fn split_pairs(pairs: &PairDataset, ratio: f64, seed: RngSeed) -> Result<(PairDataset, PairDataset)> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::invalid(format!("split ratio must lie in (0, 1], got {ratio}")));
    }
    if pairs.is_empty() {
        return Err(Error::Empty("cannot split an empty pair set"));
    }
    let m = pairs.len();
    let m1 = ((ratio * m as f64).round() as usize).min(m);
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut seed.rng());
    let take = |idx: &[usize]| {
        let v = idx.iter().map(|&i| pairs.pairs()[i].clone()).collect();
        PairDataset::new(v, pairs.dim())
    };
    Ok((take(&order[..m1])?, take(&order[m1..])?))
}
