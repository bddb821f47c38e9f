//! CART-style binary decision tree with Gini impurity.
//!
//! Candidate thresholds are midpoints between consecutive distinct sorted
//! values; a row goes left when `x[feature] <= threshold`. The split with the
//! lowest weighted Gini impurity wins, ties going to the lowest feature index
//! and then the lowest threshold. Impurities are compared exactly in integer
//! arithmetic so the choice never depends on rounding.

use super::{Classifier, Dataset};
use crate::corpus::Safety;
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    /// `None` grows until purity or `min_leaf`.
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: None,
            min_leaf: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        /// Fraction of unsafe training rows reaching the leaf.
        p_unsafe: f64,
        class: Safety,
        n: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    /// Nodes in preorder; index 0 is the root.
    pub nodes: Vec<Node>,
    pub n_features: usize,
}

impl TreeModel {
    pub fn depth(&self) -> usize {
        fn go(nodes: &[Node], i: usize) -> usize {
            match &nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + go(nodes, *left).max(go(nodes, *right)),
            }
        }
        go(&self.nodes, 0)
    }

    /// Probability of the unsafe class for a row.
    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Leaf { p_unsafe, .. } => return *p_unsafe,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    i = if x[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    }
                }
            }
        }
    }
}

impl Classifier for TreeModel {
    fn predict(&self, x: &[f64]) -> Safety {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Leaf { class, .. } => return *class,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    i = if x[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    }
                }
            }
        }
    }

    fn n_features(&self) -> usize {
        self.n_features
    }
}

/// Leaf class: unsafe on a tie.
pub(crate) fn leaf_class(n_safe: usize, n_unsafe: usize) -> Safety {
    Safety::from_bool(n_unsafe >= n_safe)
}

/// Per-node candidate features: all of the mask, or a random subset.
pub(crate) enum FeatureSampler<'a, R: Rng> {
    All,
    Random { k: usize, rng: &'a mut R },
}

pub fn train_tree(train: &Dataset, params: TreeParams) -> TreeModel {
    grow_tree::<rand_chacha::ChaCha8Rng>(
        train,
        &(0..train.len()).collect::<Vec<_>>(),
        params,
        FeatureSampler::All,
    )
}

pub(crate) fn grow_tree<R: Rng>(
    data: &Dataset,
    rows: &[usize],
    params: TreeParams,
    mut sampler: FeatureSampler<'_, R>,
) -> TreeModel {
    assert!(!rows.is_empty(), "cannot train a tree on zero rows");
    let mut builder = Builder {
        data,
        params,
        nodes: Vec::new(),
        order: Vec::with_capacity(rows.len()),
    };
    builder.grow(rows.to_vec(), 0, &mut sampler);
    TreeModel {
        nodes: builder.nodes,
        n_features: data.dim(),
    }
}

struct Builder<'a> {
    data: &'a Dataset,
    params: TreeParams,
    nodes: Vec<Node>,
    order: Vec<(f64, Safety)>,
}

/// Split quality: sum over children of (a^2 + b^2) / n, as an exact fraction.
/// Larger is purer.
#[derive(Clone, Copy)]
struct Score {
    num: u128,
    den: u128,
}

impl Score {
    fn new(ls: u128, lu: u128, rs: u128, ru: u128) -> Score {
        let (nl, nr) = (ls + lu, rs + ru);
        Score {
            num: (ls * ls + lu * lu) * nr + (rs * rs + ru * ru) * nl,
            den: nl * nr,
        }
    }

    fn beats(self, other: Score) -> bool {
        self.num * other.den > other.num * self.den
    }
}

struct Candidate {
    feature: usize,
    threshold: f64,
    score: Score,
}

impl Builder<'_> {
    fn grow<R: Rng>(
        &mut self,
        rows: Vec<usize>,
        depth: usize,
        sampler: &mut FeatureSampler<'_, R>,
    ) -> usize {
        let labels = self.data.labels();
        let n_unsafe = rows.iter().filter(|&&i| labels[i].is_unsafe()).count();
        let n_safe = rows.len() - n_unsafe;
        let id = self.nodes.len();
        let leaf = Node::Leaf {
            p_unsafe: n_unsafe as f64 / rows.len() as f64,
            class: leaf_class(n_safe, n_unsafe),
            n: rows.len(),
        };
        self.nodes.push(leaf);

        let pure = n_safe == 0 || n_unsafe == 0;
        let depth_capped = self.params.max_depth.is_some_and(|d| depth >= d);
        if pure || depth_capped || rows.len() < 2 * self.params.min_leaf.max(1) {
            return id;
        }

        let features = match sampler {
            FeatureSampler::All => self.data.mask().to_vec(),
            FeatureSampler::Random { k, rng } => {
                let mask = self.data.mask();
                let mut picked: Vec<usize> = sample(&mut **rng, mask.len(), *k)
                    .into_iter()
                    .map(|j| mask[j])
                    .collect();
                picked.sort_unstable();
                picked
            }
        };

        let Some(best) = self.best_split(&rows, &features) else {
            return id;
        };
        let x = self.data.rows();
        let (left, right): (Vec<usize>, Vec<usize>) = rows
            .into_iter()
            .partition(|&i| x[i][best.feature] <= best.threshold);
        let l = self.grow(left, depth + 1, sampler);
        let r = self.grow(right, depth + 1, sampler);
        self.nodes[id] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left: l,
            right: r,
        };
        id
    }

    fn best_split(&mut self, rows: &[usize], features: &[usize]) -> Option<Candidate> {
        let x = self.data.rows();
        let labels = self.data.labels();
        let min_leaf = self.params.min_leaf.max(1);
        let total_unsafe = rows.iter().filter(|&&i| labels[i].is_unsafe()).count() as u128;
        let total = rows.len() as u128;
        let mut best: Option<Candidate> = None;

        for &f in features {
            self.order.clear();
            self.order
                .extend(rows.iter().map(|&i| (x[i][f], labels[i])));
            self.order.sort_by(|a, b| a.0.total_cmp(&b.0));
            let (mut ls, mut lu) = (0u128, 0u128);
            for k in 0..self.order.len() - 1 {
                let (v, label) = self.order[k];
                if label.is_unsafe() {
                    lu += 1;
                } else {
                    ls += 1;
                }
                let next = self.order[k + 1].0;
                if v == next {
                    continue;
                }
                let nl = k + 1;
                if nl < min_leaf || self.order.len() - nl < min_leaf {
                    continue;
                }
                let score = Score::new(
                    ls,
                    lu,
                    total - nl as u128 - (total_unsafe - lu),
                    total_unsafe - lu,
                );
                if best.as_ref().is_none_or(|b| score.beats(b.score)) {
                    let mid = v + (next - v) / 2.0;
                    let threshold = if mid >= next { v } else { mid };
                    best = Some(Candidate {
                        feature: f,
                        threshold,
                        score,
                    });
                }
            }
        }
        best
    }
}
