//! Fixtures and brute-force reference implementations shared by the
//! integration tests and the acceptance runner. Every oracle here is written
//! directly from its definition, without reusing library internals.

#![allow(dead_code, clippy::needless_range_loop)]

use promoscan::corpus::{Corpus, Safety};
use promoscan::netgraph::{LabeledGraph, NodeKind, Relation};
use rand::Rng;
use std::collections::HashMap;

/// Feature identifiers in the order of the published feature table.
pub const TABLE_FEATURES: [&str; 34] = [
    "video_type",
    "views",
    "comments",
    "dislikes",
    "likes",
    "like_dislike_ratio",
    "title_length",
    "description_length",
    "description_title_ratio",
    "duration_s",
    "days_since_published",
    "title_description_jaccard",
    "title_bad_words",
    "description_bad_words",
    "description_question_marks",
    "description_hyperlinks",
    "description_emoticons",
    "title_has_18",
    "title_description_common_words",
    "user_total_videos",
    "user_total_views",
    "user_total_comments",
    "user_subscribers",
    "channel_title_length",
    "channel_description_length",
    "user_days_since_registered",
    "circled_by_count",
    "plus_one_count",
    "comment_likes",
    "comment_replies",
    "comments_positive",
    "comments_negative",
    "comments_neutral",
    "comment_bad_words",
];

/// Three videos by two uploaders with comments exercising every lexical
/// rule: trailing punctuation, case folding, sentiment override, links with
/// and without `www.`, longest-match emoticons and the `18` flag.
pub const FIXTURE_CORPUS: &str = r#"{
  "format_version": 1,
  "videos": [
    {"video_id": "v1", "uploader_id": "u1", "title": "Funny Cartoon Episode 1",
     "description": "funny cartoon for kids? yes? www.toons.example :)",
     "duration_s": 300, "age_days": 10, "view_count": 1000, "like_count": 40,
     "dislike_count": 0, "comment_count": 3, "video_type": 1,
     "related_ids": ["v2", "v3"], "label": "safe"},
    {"video_id": "v2", "uploader_id": "u1", "title": "Stupid crap show 18+",
     "description": "",
     "duration_s": 120, "age_days": 400, "view_count": 5000, "like_count": 25,
     "dislike_count": 10, "comment_count": 2, "video_type": 2,
     "related_ids": ["v1"], "label": "unsafe"},
    {"video_id": "v3", "uploader_id": "u2", "title": "Idiot idiot!",
     "description": "IDIOT :-) :) http://a.b https://www.c.d ?",
     "duration_s": 45, "age_days": 2, "view_count": 70, "like_count": 0,
     "dislike_count": 3, "comment_count": 4,
     "related_ids": [{"id": "yt-x", "external": true}]}
  ],
  "users": [
    {"user_id": "u1", "roles": ["uploader"], "total_videos": 12, "total_views": 50000,
     "total_comments": 340, "subscriber_count": 800, "channel_title": "Toon Land",
     "channel_description": "Cartoons daily", "age_days": 1200,
     "circled_by_count": 45, "plus_one_count": 7},
    {"user_id": "u2", "roles": ["uploader", "commenter"], "total_videos": 3,
     "total_views": 900, "total_comments": 20, "subscriber_count": 15,
     "channel_title": "xx", "channel_description": "", "age_days": 30},
    {"user_id": "c1", "roles": ["commenter"], "total_videos": 0, "total_views": 0,
     "total_comments": 0, "subscriber_count": 0, "age_days": 100},
    {"user_id": "c2", "roles": ["commenter"], "total_videos": 0, "total_views": 0,
     "total_comments": 0, "subscriber_count": 0, "age_days": 100}
  ],
  "comments": [
    {"comment_id": "k1", "video_id": "v1", "author_id": "c1", "text": "awesome cartoon love it",
     "like_count": 3, "reply_count": 1},
    {"comment_id": "k2", "video_id": "v1", "author_id": "c2", "text": "boring"},
    {"comment_id": "k3", "video_id": "v1", "author_id": "u2", "text": "good but bad",
     "like_count": 1, "reply_count": 2},
    {"comment_id": "k4", "video_id": "v2", "author_id": "c1", "text": "stupid stupid crap",
     "like_count": 2},
    {"comment_id": "k5", "video_id": "v2", "author_id": "c2", "text": "hate this",
     "like_count": 5, "reply_count": 4, "sentiment": "positive"},
    {"comment_id": "k6", "video_id": "v3", "author_id": "c1", "text": "great!"}
  ]
}"#;

/// Hand-computed feature vectors of the fixture videos with a comment cap
/// of 50.
pub fn fixture_expected() -> Vec<(&'static str, [f64; 34])> {
    let u1 = [12.0, 50000.0, 340.0, 800.0, 9.0, 14.0, 1200.0, 45.0, 7.0];
    let u2 = [3.0, 900.0, 20.0, 15.0, 2.0, 0.0, 30.0, 0.0, 0.0];
    let join = |video: [f64; 19], user: [f64; 9], comment: [f64; 6]| {
        let mut out = [0.0; 34];
        out[..19].copy_from_slice(&video);
        out[19..28].copy_from_slice(&user);
        out[28..].copy_from_slice(&comment);
        out
    };
    vec![
        (
            "v1",
            join(
                [
                    1.0,
                    1000.0,
                    3.0,
                    0.0,
                    40.0,
                    40.0,
                    23.0,
                    49.0,
                    49.0 / 23.0,
                    300.0,
                    10.0,
                    2.0 / 9.0,
                    0.0,
                    0.0,
                    2.0,
                    1.0,
                    1.0,
                    0.0,
                    2.0,
                ],
                u1,
                [4.0, 3.0, 1.0, 1.0, 1.0, 0.0],
            ),
        ),
        (
            "v2",
            join(
                [
                    2.0, 5000.0, 2.0, 10.0, 25.0, 2.5, 20.0, 0.0, 0.0, 120.0, 400.0, 0.0, 2.0, 0.0,
                    0.0, 0.0, 0.0, 1.0, 0.0,
                ],
                u1,
                [7.0, 4.0, 1.0, 0.0, 1.0, 3.0],
            ),
        ),
        (
            "v3",
            join(
                [
                    0.0,
                    70.0,
                    4.0,
                    3.0,
                    0.0,
                    0.0,
                    12.0,
                    41.0,
                    41.0 / 12.0,
                    45.0,
                    2.0,
                    1.0 / 7.0,
                    2.0,
                    1.0,
                    1.0,
                    2.0,
                    2.0,
                    0.0,
                    1.0,
                ],
                u2,
                [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            ),
        ),
    ]
}

pub fn fixture_corpus() -> Corpus {
    Corpus::from_json_str(FIXTURE_CORPUS).expect("fixture parses")
}

// ---------------------------------------------------------------- learning

/// Exhaustive-split reference tree, grown by recursion over row subsets.
pub enum RefTree {
    Leaf(Safety),
    Split {
        feature: usize,
        threshold: f64,
        left: Box<RefTree>,
        right: Box<RefTree>,
    },
}

impl RefTree {
    pub fn predict(&self, x: &[f64]) -> Safety {
        match self {
            RefTree::Leaf(s) => *s,
            RefTree::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                if x[*feature] <= *threshold {
                    left.predict(x)
                } else {
                    right.predict(x)
                }
            }
        }
    }
}

/// Weighted child impurity `Σ_c n_c · gini_c` as an exact fraction
/// `num / den`, where `n_c · gini_c = (n_c² - a_c² - b_c²) / n_c`.
fn weighted_impurity(groups: &[(u128, u128)]) -> (u128, u128) {
    // Σ_c (n_c² - a_c² - b_c²) / n_c over a common denominator Π n_c
    let den: u128 = groups.iter().map(|&(a, b)| a + b).product();
    let num = groups
        .iter()
        .map(|&(a, b)| {
            let n = a + b;
            (n * n - a * a - b * b) * (den / n)
        })
        .sum();
    (num, den)
}

/// Grows the reference tree: every (feature, midpoint) candidate is scored
/// by counting the rows on each side from scratch; the strictly lowest
/// weighted Gini wins, scanning features then thresholds in ascending order.
/// Unsafe wins leaf ties.
pub fn ref_tree(rows: &[Vec<f64>], labels: &[Safety], idx: &[usize], min_leaf: usize) -> RefTree {
    let n_unsafe = idx.iter().filter(|&&i| labels[i] == Safety::Unsafe).count();
    let n_safe = idx.len() - n_unsafe;
    let leaf = RefTree::Leaf(if n_unsafe >= n_safe {
        Safety::Unsafe
    } else {
        Safety::Safe
    });
    if n_unsafe == 0 || n_safe == 0 || idx.len() < 2 * min_leaf {
        return leaf;
    }
    let dim = rows[0].len();
    let mut best: Option<(usize, f64, (u128, u128))> = None;
    for f in 0..dim {
        let mut values: Vec<f64> = idx.iter().map(|&i| rows[i][f]).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for w in values.windows(2) {
            let t = w[0] + (w[1] - w[0]) / 2.0;
            let t = if t >= w[1] { w[0] } else { t };
            let count = |side: bool, class: Safety| {
                idx.iter()
                    .filter(|&&i| (rows[i][f] <= t) == side && labels[i] == class)
                    .count() as u128
            };
            let left = (count(true, Safety::Safe), count(true, Safety::Unsafe));
            let right = (count(false, Safety::Safe), count(false, Safety::Unsafe));
            if ((left.0 + left.1) as usize) < min_leaf || ((right.0 + right.1) as usize) < min_leaf
            {
                continue;
            }
            let imp = weighted_impurity(&[left, right]);
            let better = match &best {
                None => true,
                Some((_, _, b)) => imp.0 * b.1 < b.0 * imp.1,
            };
            if better {
                best = Some((f, t, imp));
            }
        }
    }
    let Some((feature, threshold, _)) = best else {
        return leaf;
    };
    let (l, r): (Vec<usize>, Vec<usize>) =
        idx.iter().partition(|&&i| rows[i][feature] <= threshold);
    RefTree::Split {
        feature,
        threshold,
        left: Box::new(ref_tree(rows, labels, &l, min_leaf)),
        right: Box::new(ref_tree(rows, labels, &r, min_leaf)),
    }
}

/// All-pairs kNN: min/max scaling from the training rows, full sort of every
/// distance with index tie-break, strict-majority vote.
pub fn ref_knn(train: &[Vec<f64>], labels: &[Safety], k: usize, x: &[f64]) -> Safety {
    let dim = x.len();
    let scale = |v: &[f64]| -> Vec<f64> {
        (0..dim)
            .map(|j| {
                let lo = train.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min);
                let hi = train.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max);
                if hi > lo {
                    (v[j] - lo) / (hi - lo)
                } else {
                    0.0
                }
            })
            .collect()
    };
    let q = scale(x);
    let mut all: Vec<(f64, usize)> = train
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let p = scale(r);
            (p.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum(), i)
        })
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let votes = all[..k]
        .iter()
        .filter(|&&(_, i)| labels[i] == Safety::Unsafe)
        .count();
    if 2 * votes > k {
        Safety::Unsafe
    } else {
        Safety::Safe
    }
}

/// Confusion counts `(tp, fp, fn, tn)` with unsafe positive.
pub fn ref_confusion(pairs: &[(Safety, Safety)]) -> (usize, usize, usize, usize) {
    let count = |p: Safety, a: Safety| pairs.iter().filter(|&&(x, y)| x == p && y == a).count();
    (
        count(Safety::Unsafe, Safety::Unsafe),
        count(Safety::Unsafe, Safety::Safe),
        count(Safety::Safe, Safety::Unsafe),
        count(Safety::Safe, Safety::Safe),
    )
}

pub fn random_points(
    rng: &mut impl Rng,
    n: usize,
    dim: usize,
    levels: i32,
) -> (Vec<Vec<f64>>, Vec<Safety>) {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            (0..dim)
                .map(|_| rng.random_range(0..levels) as f64)
                .collect()
        })
        .collect();
    // noisy linear rule so trees need several levels
    let labels = rows
        .iter()
        .map(|r| {
            let s: f64 = r
                .iter()
                .enumerate()
                .map(|(j, v)| if j % 2 == 0 { *v } else { -*v })
                .sum();
            Safety::from_bool(s + rng.random_range(-1.0..1.0) > 0.0)
        })
        .collect();
    (rows, labels)
}

// ---------------------------------------------------------------- graphs

pub fn graph_from_edges(
    n: usize,
    edges: &[(usize, usize)],
    relation: Relation,
    unsafe_: &[bool],
) -> LabeledGraph {
    let mut g = LabeledGraph::new();
    for i in 0..n {
        g.add_node(
            &format!("n{i}"),
            NodeKind::Commenter,
            Safety::from_bool(unsafe_[i]),
        );
    }
    for &(a, b) in edges {
        g.add_edge(a, b, relation);
    }
    g
}

pub fn random_graph(rng: &mut impl Rng, n: usize, m: usize, relation: Relation) -> LabeledGraph {
    let flags: Vec<bool> = (0..n).map(|_| rng.random_bool(0.4)).collect();
    let edges: Vec<(usize, usize)> = (0..m)
        .map(|_| (rng.random_range(0..n), rng.random_range(0..n)))
        .collect();
    graph_from_edges(n, &edges, relation, &flags)
}

/// Modularity from the pairwise definition
/// `Q = 1/2m Σ_ij [A_ij - k_i k_j / 2m] δ(c_i, c_j)` on the symmetric
/// adjacency of the graph read as an undirected multigraph.
pub fn ref_modularity(g: &LabeledGraph, comm: &[usize]) -> f64 {
    let n = g.node_count();
    let mut a = vec![vec![0.0f64; n]; n];
    for e in g.edges() {
        a[e.src][e.dst] += 1.0;
        a[e.dst][e.src] += 1.0;
    }
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    if two_m == 0.0 {
        return 0.0;
    }
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if comm[i] == comm[j] {
                q += a[i][j] - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Best modularity over every set partition of the nodes, enumerated as
/// restricted growth strings.
pub fn brute_best_modularity(g: &LabeledGraph) -> f64 {
    let n = g.node_count();
    let mut comm = vec![0usize; n];
    let mut best = f64::NEG_INFINITY;
    fn go(i: usize, max_used: usize, comm: &mut Vec<usize>, g: &LabeledGraph, best: &mut f64) {
        if i == comm.len() {
            *best = best.max(ref_modularity(g, comm));
            return;
        }
        for c in 0..=max_used + 1 {
            comm[i] = c;
            go(i + 1, max_used.max(c), comm, g, best);
        }
    }
    if n == 0 {
        return 0.0;
    }
    go(1, 0, &mut comm, g, &mut best);
    best
}

/// Per-edge transition recount `[ss, su, us, uu]`.
pub fn ref_transitions(g: &LabeledGraph) -> [usize; 4] {
    let mut t = [0; 4];
    for e in g.edges() {
        let s = g.node(e.src).safety == Safety::Unsafe;
        let d = g.node(e.dst).safety == Safety::Unsafe;
        t[2 * s as usize + d as usize] += 1;
    }
    t
}

/// Adjusted Rand index by explicit pair counting.
pub fn ref_ari(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let (mut both, mut only_a, mut only_b, mut neither) = (0f64, 0f64, 0f64, 0f64);
    for i in 0..n {
        for j in i + 1..n {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => both += 1.0,
                (true, false) => only_a += 1.0,
                (false, true) => only_b += 1.0,
                (false, false) => neither += 1.0,
            }
        }
    }
    let pairs = both + only_a + only_b + neither;
    let sa = both + only_a;
    let sb = both + only_b;
    let expected = sa * sb / pairs;
    let max = (sa + sb) / 2.0;
    if max == expected {
        return 1.0;
    }
    (both - expected) / (max - expected)
}

/// Regular files under `dir`, keyed by relative path.
pub fn read_tree(dir: &std::path::Path) -> HashMap<String, Vec<u8>> {
    fn walk(root: &std::path::Path, dir: &std::path::Path, out: &mut HashMap<String, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                let rel = path
                    .strip_prefix(root)
                    .unwrap()
                    .to_string_lossy()
                    .into_owned();
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    let mut out = HashMap::new();
    walk(dir, dir, &mut out);
    out
}

/// Simple G(n, p) graph with `n` in 4..=8 and `p` in [0.2, 0.6).
pub fn small_gnp(rng: &mut impl Rng) -> LabeledGraph {
    let n = rng.random_range(4..=8);
    let p = rng.random_range(0.2..0.6);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(p) {
                edges.push((a, b));
            }
        }
    }
    graph_from_edges(n, &edges, Relation::Comment, &vec![false; n])
}
