use super::LearnError;
use crate::corpus::Safety;
use crate::features::{FeatureVector, FeatureView};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Labeled rows plus the feature mask models are allowed to look at.
///
/// Rows keep their full dimensionality; the mask selects the view.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    rows: Vec<Vec<f64>>,
    labels: Vec<Safety>,
    mask: Vec<usize>,
    dim: usize,
}

impl Dataset {
    pub fn new(
        rows: Vec<Vec<f64>>,
        labels: Vec<Safety>,
        mask: Vec<usize>,
    ) -> Result<Self, LearnError> {
        if rows.len() != labels.len() {
            return Err(LearnError::Param(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let dim = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != dim) {
            return Err(LearnError::Dimension {
                expected: dim,
                found: rows[i].len(),
            });
        }
        let mut mask = mask;
        mask.sort_unstable();
        mask.dedup();
        if mask.is_empty() {
            return Err(LearnError::Param("feature mask is empty".into()));
        }
        if !rows.is_empty() {
            if let Some(&bad) = mask.iter().find(|&&m| m >= dim) {
                return Err(LearnError::Param(format!(
                    "mask index {bad} outside dimension {dim}"
                )));
            }
        }
        Ok(Dataset {
            rows,
            labels,
            mask,
            dim,
        })
    }

    /// Dataset over every column of the rows.
    pub fn dense(rows: Vec<Vec<f64>>, labels: Vec<Safety>) -> Result<Self, LearnError> {
        let dim = rows.first().map_or(1, Vec::len);
        Dataset::new(rows, labels, (0..dim).collect())
    }

    pub fn from_features(
        items: impl IntoIterator<Item = (FeatureVector, Safety)>,
        view: FeatureView,
    ) -> Result<Self, LearnError> {
        let (rows, labels): (Vec<_>, Vec<_>) =
            items.into_iter().map(|(f, l)| (f.0.to_vec(), l)).unzip();
        Dataset::new(rows, labels, view.indices())
    }

    pub fn with_mask(&self, mask: Vec<usize>) -> Result<Self, LearnError> {
        Dataset::new(self.rows.clone(), self.labels.clone(), mask)
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn labels(&self) -> &[Safety] {
        &self.labels
    }

    pub fn mask(&self) -> &[usize] {
        &self.mask
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// (safe, unsafe) row counts.
    pub fn class_counts(&self) -> (usize, usize) {
        let unsafe_n = self.labels.iter().filter(|l| l.is_unsafe()).count();
        (self.len() - unsafe_n, unsafe_n)
    }

    pub(crate) fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
            mask: self.mask.clone(),
            dim: self.dim,
        }
    }
}

/// Stratified train/test split after a seeded shuffle.
///
/// Each class contributes `round(n_class * train_fraction)` rows to the
/// training side. Both sides keep the original row order.
pub fn split(
    data: &Dataset,
    train_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset), LearnError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(LearnError::Param(format!(
            "train fraction {train_fraction} outside (0, 1)"
        )));
    }
    if data.is_empty() {
        return Err(LearnError::Empty);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for class in [Safety::Safe, Safety::Unsafe] {
        let mut idx: Vec<usize> = (0..data.len())
            .filter(|&i| data.labels[i] == class)
            .collect();
        if idx.is_empty() {
            return Err(LearnError::Stratification(class));
        }
        idx.shuffle(&mut rng);
        let n_train = (idx.len() as f64 * train_fraction).round() as usize;
        train.extend_from_slice(&idx[..n_train]);
        test.extend_from_slice(&idx[n_train..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((data.subset(&train), data.subset(&test)))
}
