//! Two-phase Louvain: greedy local moves, then aggregation of communities
//! into super-nodes, repeated until a level makes no move.
//!
//! Aggregated graphs carry internal edge weight as a per-node self-loop
//! weight `loops[i]` (each internal edge counted once), so a super-node's
//! degree is `Σ adj + 2·loops`. Level assignments compose back to the input
//! nodes by successive lookup.

use super::{densify, modularity, CommunityError, Partition};
use crate::netgraph::LabeledGraph;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Minimum modularity improvement for a node move.
pub const GAIN_TOLERANCE: f64 = 1e-9;

/// Modularity after every local-move sweep, across all levels.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LouvainTrace {
    pub sweeps: Vec<f64>,
    pub levels: usize,
}

struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    loops: Vec<f64>,
}

impl Level {
    fn from_graph(g: &LabeledGraph) -> Level {
        let n = g.node_count();
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for e in g.edges() {
            adj[e.src].push((e.dst, 1.0));
            adj[e.dst].push((e.src, 1.0));
        }
        let adj = adj.into_iter().map(merge_parallel).collect();
        Level {
            adj,
            loops: vec![0.0; n],
        }
    }

    fn degrees(&self) -> Vec<f64> {
        self.adj
            .iter()
            .zip(&self.loops)
            .map(|(a, &l)| a.iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * l)
            .collect()
    }

    fn quality(&self, comm: &[usize], k: &[f64], m: f64) -> f64 {
        let n_c = comm.iter().max().map_or(0, |&c| c + 1);
        let mut inner = vec![0.0; n_c];
        let mut tot = vec![0.0; n_c];
        for i in 0..self.adj.len() {
            tot[comm[i]] += k[i];
            inner[comm[i]] += self.loops[i];
            for &(j, w) in &self.adj[i] {
                if i < j && comm[i] == comm[j] {
                    inner[comm[i]] += w;
                }
            }
        }
        inner
            .iter()
            .zip(&tot)
            .map(|(&e, &d)| e / m - (d / (2.0 * m)).powi(2))
            .sum()
    }

    fn aggregate(&self, comm: &[usize]) -> Level {
        let n_c = comm.iter().max().map_or(0, |&c| c + 1);
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n_c];
        let mut loops = vec![0.0; n_c];
        for i in 0..self.adj.len() {
            loops[comm[i]] += self.loops[i];
            for &(j, w) in &self.adj[i] {
                let (a, b) = (comm[i], comm[j]);
                if a != b {
                    adj[a].push((b, w));
                } else if i < j {
                    loops[a] += w;
                }
            }
        }
        Level {
            adj: adj.into_iter().map(merge_parallel).collect(),
            loops,
        }
    }
}

fn merge_parallel(mut v: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    v.sort_by_key(|&(j, _)| j);
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(v.len());
    for (j, w) in v {
        match out.last_mut() {
            Some(last) if last.0 == j => last.1 += w,
            _ => out.push((j, w)),
        }
    }
    out
}

/// Local-move phase on one level. Returns the community of each level node
/// and whether any node moved.
fn local_moves(
    level: &Level,
    m: f64,
    rng: &mut ChaCha8Rng,
    trace: &mut LouvainTrace,
) -> (Vec<usize>, bool) {
    let n = level.adj.len();
    let k = level.degrees();
    let m2 = 2.0 * m;
    let mut comm: Vec<usize> = (0..n).collect();
    let mut tot = k.clone();
    let mut weight_to = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    let mut moved_any = false;
    let mut last_q = level.quality(&comm, &k, m);
    loop {
        order.shuffle(rng);
        let mut moved = false;
        for &i in &order {
            let old = comm[i];
            tot[old] -= k[i];
            for &(j, w) in &level.adj[i] {
                let c = comm[j];
                if weight_to[c] == 0.0 {
                    touched.push(c);
                }
                weight_to[c] += w;
            }
            touched.sort_unstable();
            let gain = |c: usize, w_in: f64| (w_in - tot[c] * k[i] / m2) / m;
            let stay = gain(old, weight_to[old]);
            let mut best = (f64::NEG_INFINITY, old);
            for &c in &touched {
                if c == old {
                    continue;
                }
                let g = gain(c, weight_to[c]);
                if g > best.0 + GAIN_TOLERANCE {
                    best = (g, c);
                }
            }
            let target = if best.0 > stay + GAIN_TOLERANCE {
                best.1
            } else {
                old
            };
            for &c in &touched {
                weight_to[c] = 0.0;
            }
            touched.clear();
            tot[target] += k[i];
            if target != old {
                comm[i] = target;
                moved = true;
            }
        }
        if !moved {
            break;
        }
        moved_any = true;
        let q = level.quality(&comm, &k, m);
        assert!(
            q >= last_q - 1e-12,
            "modularity decreased across a sweep: {last_q} -> {q}"
        );
        trace.sweeps.push(q);
        last_q = q;
    }
    (densify(&comm), moved_any)
}

pub fn louvain(g: &LabeledGraph, seed: u64) -> Result<Partition, CommunityError> {
    louvain_with_trace(g, seed).map(|(p, _)| p)
}

/// Louvain partition plus the modularity recorded after every sweep.
pub fn louvain_with_trace(
    g: &LabeledGraph,
    seed: u64,
) -> Result<(Partition, LouvainTrace), CommunityError> {
    if g.is_empty() {
        return Err(CommunityError::EmptyGraph);
    }
    let mut trace = LouvainTrace::default();
    let mut assignment: Vec<usize> = (0..g.node_count()).collect();
    let m = g.edge_count() as f64;
    if m == 0.0 {
        return Ok((Partition::new(g, &assignment)?, trace));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = Level::from_graph(g);
    loop {
        let (comm, moved) = local_moves(&level, m, &mut rng, &mut trace);
        trace.levels += 1;
        if !moved {
            break;
        }
        for a in assignment.iter_mut() {
            *a = comm[*a];
        }
        level = level.aggregate(&comm);
    }
    let p = Partition::new(g, &assignment)?;
    if let Some(&last) = trace.sweeps.last() {
        debug_assert!((p.modularity - last).abs() < 1e-9);
    }
    debug_assert!(p.modularity >= modularity(g, &(0..g.node_count()).collect::<Vec<_>>())? - 1e-12);
    Ok((p, trace))
}
