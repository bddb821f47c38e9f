//! Planted-partition random graphs.

use super::SynthError;
use crate::corpus::Safety;
use crate::netgraph::{LabeledGraph, NodeKind, Relation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Community sizes and edge probabilities of a planted partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityPlan {
    pub sizes: Vec<usize>,
    pub p_in: f64,
    pub p_out: f64,
}

impl CommunityPlan {
    pub fn n_nodes(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        for (name, p) in [("p_in", self.p_in), ("p_out", self.p_out)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(SynthError::Config(format!(
                    "{name} = {p} is not a probability"
                )));
            }
        }
        if self.p_in <= self.p_out {
            return Err(SynthError::Config(format!(
                "p_in = {} must exceed p_out = {}",
                self.p_in, self.p_out
            )));
        }
        if self.sizes.contains(&0) {
            return Err(SynthError::Config(
                "community sizes must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Calls `f(k)` for each `k < n` independently with probability `p`, skipping
/// ahead geometrically so sparse draws cost O(hits).
fn bernoulli_hits(n: u64, p: f64, rng: &mut ChaCha8Rng, mut f: impl FnMut(u64)) {
    if p <= 0.0 || n == 0 {
        return;
    }
    if p >= 1.0 {
        (0..n).for_each(f);
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut k: u64 = 0;
    loop {
        let u: f64 = 1.0 - rng.random::<f64>();
        let skip = (u.ln() / log_q).floor();
        if skip >= (n - k) as f64 {
            return;
        }
        k += skip as u64;
        f(k);
        k += 1;
        if k >= n {
            return;
        }
    }
}

/// Unordered index pair for the `k`-th pair of `0..s` in row-major order.
fn pair_of(k: u64, s: u64) -> (u64, u64) {
    // row a holds pairs (a, a+1..s); find a by walking the triangular offsets
    let mut a =
        ((2 * s - 1) as f64 - (((2 * s - 1) * (2 * s - 1)) as f64 - 8.0 * k as f64).sqrt()) / 2.0;
    a = a.floor().max(0.0);
    let mut a = a as u64;
    let start = |a: u64| a * (2 * s - a - 1) / 2;
    while a > 0 && start(a) > k {
        a -= 1;
    }
    while start(a + 1) <= k {
        a += 1;
    }
    (a, a + 1 + (k - start(a)))
}

/// Samples planted-partition pairs among `members` grouped by `plan.sizes`.
/// Returns `(i, j)` member-index pairs with `i < j`, within-community pairs
/// first.
pub(crate) fn sample_pairs(plan: &CommunityPlan, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut starts = Vec::with_capacity(plan.sizes.len());
    let mut at = 0;
    for &s in &plan.sizes {
        starts.push(at);
        at += s;
    }
    let mut out = Vec::new();
    for (c, &s) in plan.sizes.iter().enumerate() {
        let s64 = s as u64;
        bernoulli_hits(s64 * s64.saturating_sub(1) / 2, plan.p_in, rng, |k| {
            let (a, b) = pair_of(k, s64);
            out.push((starts[c] + a as usize, starts[c] + b as usize));
        });
    }
    for a in 0..plan.sizes.len() {
        for b in a + 1..plan.sizes.len() {
            let (sa, sb) = (plan.sizes[a], plan.sizes[b] as u64);
            bernoulli_hits(sa as u64 * sb, plan.p_out, rng, |k| {
                out.push((starts[a] + (k / sb) as usize, starts[b] + (k % sb) as usize));
            });
        }
    }
    out
}

/// A standalone planted-partition graph with its ground truth.
#[derive(Debug, Clone)]
pub struct PlantedGraph {
    pub graph: LabeledGraph,
    /// Planted community of each node, in node order.
    pub membership: Vec<usize>,
    /// Planted `(n_safe, n_unsafe)` per community.
    pub census: Vec<(usize, usize)>,
}

/// Undirected planted-partition graph. Exactly `round(unsafe_fraction · size)`
/// nodes of each community are unsafe.
pub fn planted_partition_graph(
    plan: &CommunityPlan,
    unsafe_fraction: f64,
    seed: u64,
) -> Result<PlantedGraph, SynthError> {
    plan.validate()?;
    if !(0.0..=1.0).contains(&unsafe_fraction) {
        return Err(SynthError::Config(format!(
            "unsafe_fraction = {unsafe_fraction} is not a fraction"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut graph = LabeledGraph::new();
    let mut membership = Vec::with_capacity(plan.n_nodes());
    let mut census = Vec::with_capacity(plan.sizes.len());
    for (c, &s) in plan.sizes.iter().enumerate() {
        let n_unsafe = (unsafe_fraction * s as f64).round() as usize;
        let mut flags: Vec<bool> = (0..s).map(|i| i < n_unsafe).collect();
        flags.shuffle(&mut rng);
        for f in flags {
            let id = format!("p{:06}", membership.len());
            graph.add_node(&id, NodeKind::Commenter, Safety::from_bool(f));
            membership.push(c);
        }
        census.push((s - n_unsafe, n_unsafe));
    }
    for (a, b) in sample_pairs(plan, &mut rng) {
        graph.add_edge(a, b, Relation::Comment);
    }
    Ok(PlantedGraph {
        graph,
        membership,
        census,
    })
}
