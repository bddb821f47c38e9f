use super::tree::{grow_tree, FeatureSampler, TreeModel, TreeParams};
use super::{Classifier, Dataset, LearnError};
use crate::corpus::Safety;
use crate::seed::derive_seed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    /// Candidate features per node; `None` means `ceil(sqrt(mask size))`.
    pub features_per_split: Option<usize>,
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    /// Train each tree on a bootstrap sample (n draws with replacement).
    pub bootstrap: bool,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 100,
            features_per_split: None,
            max_depth: None,
            min_leaf: 1,
            bootstrap: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<TreeModel>,
    pub tree_seeds: Vec<u64>,
    pub features_per_split: usize,
    pub mask: Vec<usize>,
    pub n_features: usize,
}

impl ForestModel {
    /// Number of trees voting unsafe.
    pub fn unsafe_votes(&self, x: &[f64]) -> usize {
        self.trees
            .iter()
            .filter(|t| t.predict(x).is_unsafe())
            .count()
    }
}

impl Classifier for ForestModel {
    /// Majority vote; an exact tie goes to unsafe.
    fn predict(&self, x: &[f64]) -> Safety {
        Safety::from_bool(2 * self.unsafe_votes(x) >= self.trees.len())
    }

    fn n_features(&self) -> usize {
        self.n_features
    }
}

/// `ceil(sqrt(n))` computed without floating point.
pub fn default_features_per_split(mask_len: usize) -> usize {
    let mut k = 0;
    while k * k < mask_len {
        k += 1;
    }
    k.max(1)
}

/// Trains `n_trees` trees in parallel. Tree `i` draws its bootstrap sample
/// and per-node feature subsets from a stream seeded by `derive_seed(seed, i)`,
/// so the model depends only on the data and `seed`.
pub fn train_forest(
    train: &Dataset,
    params: ForestParams,
    seed: u64,
) -> Result<ForestModel, LearnError> {
    if train.is_empty() {
        return Err(LearnError::Empty);
    }
    if params.n_trees == 0 {
        return Err(LearnError::Param("n_trees must be at least 1".into()));
    }
    let mask_len = train.mask().len();
    let k = params
        .features_per_split
        .unwrap_or_else(|| default_features_per_split(mask_len));
    if k == 0 || k > mask_len {
        return Err(LearnError::Param(format!(
            "features_per_split {k} outside 1..={mask_len}"
        )));
    }
    let tree_params = TreeParams {
        max_depth: params.max_depth,
        min_leaf: params.min_leaf,
    };
    let tree_seeds: Vec<u64> = (0..params.n_trees as u64)
        .map(|i| derive_seed(seed, i))
        .collect();
    let n = train.len();
    let trees = tree_seeds
        .par_iter()
        .map(|&s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let rows: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            let sampler = if k == mask_len {
                FeatureSampler::All
            } else {
                FeatureSampler::Random { k, rng: &mut rng }
            };
            grow_tree(train, &rows, tree_params, sampler)
        })
        .collect();
    Ok(ForestModel {
        trees,
        tree_seeds,
        features_per_split: k,
        mask: train.mask().to_vec(),
        n_features: train.dim(),
    })
}
