//! Modularity scoring and Louvain community detection over [`LabeledGraph`].
//!
//! Graphs are scored as undirected unit-weight multigraphs: every stored
//! edge contributes weight 1 between its endpoints regardless of direction
//! or relation.

mod louvain;

pub use louvain::{louvain, louvain_with_trace, LouvainTrace, GAIN_TOLERANCE};

use crate::corpus::Safety;
use crate::netgraph::LabeledGraph;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CommunityError {
    #[error("partition covers {found} nodes, graph has {expected}")]
    Coverage { expected: usize, found: usize },
    #[error("graph has no nodes")]
    EmptyGraph,
}

/// Community assignment in graph node order, with its modularity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub assignment: Vec<usize>,
    pub modularity: f64,
}

impl Partition {
    /// Scores `assignment` on `g`, renumbering communities densely in order
    /// of first appearance.
    pub fn new(g: &LabeledGraph, assignment: &[usize]) -> Result<Partition, CommunityError> {
        let assignment = densify(assignment);
        let modularity = modularity(g, &assignment)?;
        Ok(Partition {
            assignment,
            modularity,
        })
    }

    pub fn n_communities(&self) -> usize {
        self.assignment.iter().max().map_or(0, |&c| c + 1)
    }

    pub fn community_of(&self, g: &LabeledGraph, node_id: &str) -> Option<usize> {
        g.index_of(node_id).map(|i| self.assignment[i])
    }

    /// `node_id\tcommunity_id` lines under a comment header carrying Q.
    pub fn to_tsv(&self, g: &LabeledGraph) -> String {
        let mut out = format!(
            "# modularity {:.6} communities {}\nnode_id\tcommunity_id\n",
            self.modularity,
            self.n_communities()
        );
        for (i, c) in self.assignment.iter().enumerate() {
            writeln!(out, "{}\t{c}", g.node_id(i)).unwrap();
        }
        out
    }
}

/// Relabels ids to `0..k` in order of first appearance.
pub fn densify(assignment: &[usize]) -> Vec<usize> {
    let mut map = HashMap::new();
    assignment
        .iter()
        .map(|&c| {
            let next = map.len();
            *map.entry(c).or_insert(next)
        })
        .collect()
}

/// Newman modularity `Σ_c [e_c/m − (d_c/2m)²]`; 0 when the graph has no
/// edges.
pub fn modularity(g: &LabeledGraph, assignment: &[usize]) -> Result<f64, CommunityError> {
    if assignment.len() != g.node_count() {
        return Err(CommunityError::Coverage {
            expected: g.node_count(),
            found: assignment.len(),
        });
    }
    let m = g.edge_count();
    if m == 0 {
        return Ok(0.0);
    }
    let k = assignment.iter().max().map_or(0, |&c| c + 1);
    let mut intra = vec![0usize; k];
    let mut degree = vec![0usize; k];
    for e in g.edges() {
        let (a, b) = (assignment[e.src], assignment[e.dst]);
        degree[a] += 1;
        degree[b] += 1;
        if a == b {
            intra[a] += 1;
        }
    }
    let m = m as f64;
    Ok(intra
        .iter()
        .zip(&degree)
        .map(|(&e, &d)| e as f64 / m - (d as f64 / (2.0 * m)).powi(2))
        .sum())
}

/// Safety census of one community.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommunityCensus {
    pub community: usize,
    pub n_safe: usize,
    pub n_unsafe: usize,
    pub size: usize,
}

impl CommunityCensus {
    pub fn mixed(&self) -> bool {
        self.n_safe > 0 && self.n_unsafe > 0
    }
}

/// Per-community census, ordered by community id.
pub fn community_composition(
    g: &LabeledGraph,
    p: &Partition,
) -> Result<Vec<CommunityCensus>, CommunityError> {
    if p.assignment.len() != g.node_count() {
        return Err(CommunityError::Coverage {
            expected: g.node_count(),
            found: p.assignment.len(),
        });
    }
    let mut out: Vec<CommunityCensus> = (0..p.n_communities())
        .map(|community| CommunityCensus {
            community,
            n_safe: 0,
            n_unsafe: 0,
            size: 0,
        })
        .collect();
    for (i, &c) in p.assignment.iter().enumerate() {
        let row = &mut out[c];
        row.size += 1;
        match g.node(i).safety {
            Safety::Safe => row.n_safe += 1,
            Safety::Unsafe => row.n_unsafe += 1,
        }
    }
    Ok(out)
}

pub fn composition_table(rows: &[CommunityCensus]) -> String {
    let mut out = String::from("community_id\tn_safe\tn_unsafe\tsize\tmixed\n");
    for r in rows {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            r.community,
            r.n_safe,
            r.n_unsafe,
            r.size,
            r.mixed()
        )
        .unwrap();
    }
    out
}

/// Adjusted Rand index between two labelings of the same items. Two
/// identical single-cluster (or all-singleton) labelings score 1.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len(), "labelings must cover the same items");
    let n = a.len();
    let pairs = |x: u64| x * x.saturating_sub(1) / 2;
    let mut table: HashMap<(usize, usize), u64> = HashMap::new();
    let mut rows: HashMap<usize, u64> = HashMap::new();
    let mut cols: HashMap<usize, u64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: u64 = table.values().map(|&c| pairs(c)).sum();
    let sa: u64 = rows.values().map(|&c| pairs(c)).sum();
    let sb: u64 = cols.values().map(|&c| pairs(c)).sum();
    let total = pairs(n as u64) as f64;
    if total == 0.0 {
        return 1.0;
    }
    let expected = sa as f64 * sb as f64 / total;
    let max = (sa + sb) as f64 / 2.0;
    if max == expected {
        return 1.0;
    }
    (index as f64 - expected) / (max - expected)
}
