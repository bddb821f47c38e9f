use super::{Classifier, Dataset, LearnError};
use crate::corpus::Safety;
use serde::{Deserialize, Serialize};

/// k-nearest-neighbor classifier in min/max-scaled feature space.
///
/// Each masked feature is mapped to `[0, 1]` with the training minimum and
/// maximum (constant features map to 0). Distance is Euclidean; equal
/// distances are ordered by training row index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub mask: Vec<usize>,
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
    /// Training rows restricted to the mask and scaled.
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<Safety>,
    pub n_features: usize,
}

pub fn train_knn(train: &Dataset, k: usize) -> Result<KnnModel, LearnError> {
    if train.is_empty() {
        return Err(LearnError::Empty);
    }
    if k == 0 || k.is_multiple_of(2) {
        return Err(LearnError::Param(format!(
            "k = {k} must be a positive odd integer"
        )));
    }
    if k > train.len() {
        return Err(LearnError::Param(format!(
            "k = {k} exceeds {} training rows",
            train.len()
        )));
    }
    let mask = train.mask().to_vec();
    let mut mins = vec![f64::INFINITY; mask.len()];
    let mut maxs = vec![f64::NEG_INFINITY; mask.len()];
    for row in train.rows() {
        for (j, &f) in mask.iter().enumerate() {
            mins[j] = mins[j].min(row[f]);
            maxs[j] = maxs[j].max(row[f]);
        }
    }
    let mut model = KnnModel {
        k,
        mask,
        mins,
        maxs,
        points: Vec::with_capacity(train.len()),
        labels: train.labels().to_vec(),
        n_features: train.dim(),
    };
    model.points = train.rows().iter().map(|r| model.scale(r)).collect();
    Ok(model)
}

impl KnnModel {
    pub fn scale(&self, x: &[f64]) -> Vec<f64> {
        self.mask
            .iter()
            .enumerate()
            .map(|(j, &f)| {
                let range = self.maxs[j] - self.mins[j];
                if range > 0.0 {
                    (x[f] - self.mins[j]) / range
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// Indices of the k nearest training rows, nearest first.
    pub fn neighbors(&self, x: &[f64]) -> Vec<usize> {
        let q = self.scale(x);
        let mut dist: Vec<(f64, usize)> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let d2: f64 = p.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum();
                (d2, i)
            })
            .collect();
        let k = self.k;
        let by = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
        if k < dist.len() {
            dist.select_nth_unstable_by(k - 1, by);
            dist.truncate(k);
        }
        dist.sort_by(by);
        dist.into_iter().map(|(_, i)| i).collect()
    }
}

impl Classifier for KnnModel {
    fn predict(&self, x: &[f64]) -> Safety {
        let unsafe_votes = self
            .neighbors(x)
            .into_iter()
            .filter(|&i| self.labels[i].is_unsafe())
            .count();
        Safety::from_bool(2 * unsafe_votes > self.k)
    }

    fn n_features(&self) -> usize {
        self.n_features
    }
}
