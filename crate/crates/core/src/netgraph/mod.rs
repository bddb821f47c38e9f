//! Safety-labeled graphs over videos and users, and safe/unsafe transition
//! counts.
//!
//! Four builders are provided: related-video links between seed videos,
//! the same links collapsed onto uploaders, commenter–uploader engagement,
//! and the combined like/subscribe/playlist behavior graph. Node safety comes
//! from labels or detection verdicts; edges are deduplicated within a
//! relation.

mod export;
mod tally;

pub use export::{edge_list, graphml};
pub use tally::{behavior_table, behavior_tallies, BehaviorTallies, RelationTally};

use crate::corpus::{Corpus, Reference, Safety};
use crate::detect::UploaderVerdict;
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::{self, Write as _};
use thiserror::Error;

pub const DEFAULT_RELATED_TH: usize = 10;
pub const DEFAULT_MIN_COMMENTS: usize = 4;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("labeling error: no label for {kind} {id:?}")]
    Unlabeled { kind: NodeKind, id: String },
    #[error("parameter error: {0}")]
    Param(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Video,
    Uploader,
    Commenter,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Video => "video",
            NodeKind::Uploader => "uploader",
            NodeKind::Commenter => "commenter",
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Related,
    Comment,
    Like,
    Subscribe,
    Playlist,
}

impl Relation {
    pub const BEHAVIORS: [Relation; 3] = [Relation::Like, Relation::Subscribe, Relation::Playlist];

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Related => "related",
            Relation::Comment => "comment",
            Relation::Like => "like",
            Relation::Subscribe => "subscribe",
            Relation::Playlist => "playlist",
        }
    }

    /// Comment edges are undirected; all others point from actor to target.
    pub fn is_directed(self) -> bool {
        self != Relation::Comment
    }

    pub fn parse(s: &str) -> Option<Relation> {
        match s.to_ascii_lowercase().as_str() {
            "related" => Some(Relation::Related),
            "comment" => Some(Relation::Comment),
            "like" | "likes" => Some(Relation::Like),
            "subscribe" | "subscribes" => Some(Relation::Subscribe),
            "playlist" => Some(Relation::Playlist),
            _ => None,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeInfo {
    pub kind: NodeKind,
    pub safety: Safety,
}

/// Edge between node indices. Undirected edges keep the commenter as `src`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub relation: Relation,
}

impl Edge {
    pub fn directed(&self) -> bool {
        self.relation.is_directed()
    }
}

/// Node-labeled multigraph. Nodes keep insertion order; `src != dst` for
/// every edge, and no two edges share `(src, dst, relation)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LabeledGraph {
    nodes: IndexMap<String, NodeInfo>,
    edges: Vec<Edge>,
    seen: HashSet<Edge>,
}

impl LabeledGraph {
    pub fn new() -> Self {
        LabeledGraph::default()
    }

    /// Inserts a node, or returns the index of the existing node with this id.
    pub fn add_node(&mut self, id: &str, kind: NodeKind, safety: Safety) -> usize {
        if let Some(i) = self.nodes.get_index_of(id) {
            return i;
        }
        self.nodes
            .insert_full(id.to_string(), NodeInfo { kind, safety })
            .0
    }

    /// Adds an edge unless it is a self-loop or duplicates an existing
    /// `(src, dst, relation)`. Returns whether the edge was added.
    pub fn add_edge(&mut self, src: usize, dst: usize, relation: Relation) -> bool {
        assert!(
            src < self.nodes.len() && dst < self.nodes.len(),
            "edge endpoint out of range"
        );
        let e = Edge { src, dst, relation };
        if src == dst || !self.seen.insert(e) {
            return false;
        }
        self.edges.push(e);
        true
    }

    pub fn add_edge_by_id(&mut self, src: &str, dst: &str, relation: Relation) -> bool {
        match (self.index_of(src), self.index_of(dst)) {
            (Some(s), Some(d)) => self.add_edge(s, d, relation),
            _ => panic!("edge endpoint {src:?} or {dst:?} is not a node"),
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_id(&self, i: usize) -> &str {
        self.nodes.get_index(i).expect("node index in range").0
    }

    pub fn node(&self, i: usize) -> NodeInfo {
        *self.nodes.get_index(i).expect("node index in range").1
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.nodes.get_index_of(id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&str, NodeInfo)> {
        self.nodes.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Undirected degree of every node.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.nodes.len()];
        for e in &self.edges {
            d[e.src] += 1;
            d[e.dst] += 1;
        }
        d
    }

    /// Copy without degree-zero nodes; relative order is kept.
    pub fn without_isolated(&self) -> LabeledGraph {
        let deg = self.degrees();
        let mut out = LabeledGraph::new();
        let mut remap = vec![usize::MAX; self.nodes.len()];
        for (i, (id, info)) in self.nodes.iter().enumerate() {
            if deg[i] > 0 {
                remap[i] = out.add_node(id, info.kind, info.safety);
            }
        }
        for e in &self.edges {
            out.add_edge(remap[e.src], remap[e.dst], e.relation);
        }
        out
    }
}

/// Edge census by (source safety, destination safety).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    pub ss: usize,
    pub su: usize,
    pub us: usize,
    pub uu: usize,
}

impl TransitionMatrix {
    pub fn total(&self) -> usize {
        self.ss + self.su + self.us + self.uu
    }

    /// Count for `from → to`.
    pub fn get(&self, from: Safety, to: Safety) -> usize {
        match (from, to) {
            (Safety::Safe, Safety::Safe) => self.ss,
            (Safety::Safe, Safety::Unsafe) => self.su,
            (Safety::Unsafe, Safety::Safe) => self.us,
            (Safety::Unsafe, Safety::Unsafe) => self.uu,
        }
    }
}

pub fn transitions(g: &LabeledGraph) -> TransitionMatrix {
    let mut t = TransitionMatrix::default();
    for e in g.edges() {
        let slot = match (g.node(e.src).safety, g.node(e.dst).safety) {
            (Safety::Safe, Safety::Safe) => &mut t.ss,
            (Safety::Safe, Safety::Unsafe) => &mut t.su,
            (Safety::Unsafe, Safety::Safe) => &mut t.us,
            (Safety::Unsafe, Safety::Unsafe) => &mut t.uu,
        };
        *slot += 1;
    }
    debug_assert_eq!(t.total(), g.edge_count());
    t
}

/// Video labels: ground truth where present, else the given prediction.
pub fn video_labels(
    corpus: &Corpus,
    predictions: &HashMap<String, Safety>,
) -> HashMap<String, Safety> {
    corpus
        .videos()
        .values()
        .filter_map(|v| {
            v.label
                .or_else(|| predictions.get(&v.video_id).copied())
                .map(|l| (v.video_id.clone(), l))
        })
        .collect()
}

/// Directed related-video graph over seed videos using each video's first
/// `th` suggestions.
pub fn build_video_graph(
    corpus: &Corpus,
    labels: &HashMap<String, Safety>,
    th: usize,
) -> Result<LabeledGraph, GraphError> {
    if th == 0 {
        return Err(GraphError::Param(
            "related-video th must be positive".into(),
        ));
    }
    let mut g = LabeledGraph::new();
    for id in corpus.videos().keys() {
        let safety = labels
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::Unlabeled {
                kind: NodeKind::Video,
                id: id.clone(),
            })?;
        g.add_node(id, NodeKind::Video, safety);
    }
    for (i, v) in corpus.videos().values().enumerate() {
        for r in v.related_ids.iter().take(th) {
            if r.external {
                continue;
            }
            if let Some(j) = g.index_of(&r.id) {
                g.add_edge(i, j, Relation::Related);
            }
        }
    }
    Ok(g)
}

fn verdict_map(verdicts: &[UploaderVerdict]) -> HashMap<&str, Safety> {
    verdicts
        .iter()
        .map(|v| (v.user_id.as_str(), v.safety()))
        .collect()
}

fn uploader_safety(verdicts: &HashMap<&str, Safety>, id: &str) -> Result<Safety, GraphError> {
    verdicts
        .get(id)
        .copied()
        .ok_or_else(|| GraphError::Unlabeled {
            kind: NodeKind::Uploader,
            id: id.to_string(),
        })
}

/// Collapses a video graph onto the uploaders of its videos.
pub fn build_uploader_graph(
    video_graph: &LabeledGraph,
    corpus: &Corpus,
    verdicts: &[UploaderVerdict],
) -> Result<LabeledGraph, GraphError> {
    let vmap = verdict_map(verdicts);
    let mut g = LabeledGraph::new();
    let mut owner = Vec::with_capacity(video_graph.node_count());
    for (vid, _) in video_graph.nodes() {
        let uid = corpus
            .video(vid)
            .map(|v| v.uploader_id.as_str())
            .ok_or_else(|| GraphError::Unlabeled {
                kind: NodeKind::Video,
                id: vid.to_string(),
            })?;
        let safety = uploader_safety(&vmap, uid)?;
        owner.push(g.add_node(uid, NodeKind::Uploader, safety));
    }
    for e in video_graph.edges() {
        g.add_edge(owner[e.src], owner[e.dst], Relation::Related);
    }
    Ok(g)
}

/// Seed users with their combined safety: unsafe if unsafe in any role held.
fn seed_users<'a>(
    corpus: &'a Corpus,
    verdicts: &[UploaderVerdict],
    commenter_flags: &BTreeSet<String>,
    commenters: &[&'a str],
) -> Result<IndexMap<&'a str, NodeInfo>, GraphError> {
    let vmap = verdict_map(verdicts);
    let mut out = IndexMap::new();
    for uid in corpus.uploader_ids() {
        let safety = uploader_safety(&vmap, uid)?;
        let flagged = commenter_flags.contains(uid);
        out.insert(
            uid,
            NodeInfo {
                kind: NodeKind::Uploader,
                safety: Safety::from_bool(safety.is_unsafe() || flagged),
            },
        );
    }
    for &cid in commenters {
        out.entry(cid).or_insert(NodeInfo {
            kind: NodeKind::Commenter,
            safety: Safety::from_bool(commenter_flags.contains(cid)),
        });
    }
    Ok(out)
}

fn graph_from_seeds(seeds: &IndexMap<&str, NodeInfo>) -> LabeledGraph {
    let mut g = LabeledGraph::new();
    for (id, info) in seeds {
        g.add_node(id, info.kind, info.safety);
    }
    g
}

/// Undirected commenter–uploader engagement graph over all uploaders and the
/// commenters with at least `min_comments` comments.
pub fn build_commenter_graph(
    corpus: &Corpus,
    verdicts: &[UploaderVerdict],
    commenter_flags: &BTreeSet<String>,
    min_comments: usize,
) -> Result<LabeledGraph, GraphError> {
    if min_comments == 0 {
        return Err(GraphError::Param("min_comments must be positive".into()));
    }
    let mut counts: IndexMap<&str, usize> = IndexMap::new();
    for c in corpus.comments() {
        *counts.entry(c.author_id.as_str()).or_default() += 1;
    }
    let active: Vec<&str> = counts
        .iter()
        .filter(|&(_, &n)| n >= min_comments)
        .map(|(&id, _)| id)
        .collect();
    let seeds = seed_users(corpus, verdicts, commenter_flags, &active)?;
    let mut g = graph_from_seeds(&seeds);
    for c in corpus.comments() {
        if counts[c.author_id.as_str()] < min_comments {
            continue;
        }
        let Some(video) = corpus.video(&c.video_id) else {
            continue;
        };
        g.add_edge_by_id(&c.author_id, &video.uploader_id, Relation::Comment);
    }
    Ok(g)
}

/// Where one like/subscribe/playlist entry points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Target<'a> {
    SelfRef,
    Seed(&'a str),
    External,
}

/// Resolves every behavioral entry of every seed user, in node order.
pub(crate) fn behavior_entries<'a>(
    corpus: &'a Corpus,
    seeds: &IndexMap<&'a str, NodeInfo>,
    relation: Relation,
) -> Vec<(&'a str, Target<'a>)> {
    let mut out = Vec::new();
    for &actor in seeds.keys() {
        let Some(user) = corpus.user(actor) else {
            continue;
        };
        let refs: &[Reference] = match relation {
            Relation::Like => &user.liked_video_ids,
            Relation::Playlist => &user.playlist_video_ids,
            Relation::Subscribe => &user.subscribed_user_ids,
            Relation::Related | Relation::Comment => &[],
        };
        for r in refs {
            let target = match relation {
                Relation::Subscribe if r.external => None,
                Relation::Subscribe => Some(r.id.as_str()),
                _ => corpus.owner_of(r),
            };
            let t = match target {
                Some(t) if t == actor => Target::SelfRef,
                Some(t) => match seeds.get_key_value(t) {
                    Some((&k, _)) => Target::Seed(k),
                    None => Target::External,
                },
                None => Target::External,
            };
            out.push((actor, t));
        }
    }
    out
}

/// Seed uploaders then seed commenters with their combined safety.
pub(crate) fn behavior_seeds<'a>(
    corpus: &'a Corpus,
    verdicts: &[UploaderVerdict],
    commenter_flags: &BTreeSet<String>,
) -> Result<IndexMap<&'a str, NodeInfo>, GraphError> {
    let commenters = corpus.commenter_ids();
    seed_users(corpus, verdicts, commenter_flags, &commenters)
}

/// Combined behavior graph: directed actor → owner edges for the requested
/// relations between seed users. Self and external entries are tallied by
/// [`behavior_tallies`], not added.
pub fn build_behavior_graph(
    corpus: &Corpus,
    verdicts: &[UploaderVerdict],
    commenter_flags: &BTreeSet<String>,
    relations: &[Relation],
) -> Result<LabeledGraph, GraphError> {
    if relations.is_empty() {
        return Err(GraphError::Param(
            "at least one behavior relation is required".into(),
        ));
    }
    if let Some(r) = relations.iter().find(|r| !Relation::BEHAVIORS.contains(r)) {
        return Err(GraphError::Param(format!("{r} is not a behavior relation")));
    }
    let seeds = behavior_seeds(corpus, verdicts, commenter_flags)?;
    let mut g = graph_from_seeds(&seeds);
    for &rel in Relation::BEHAVIORS.iter().filter(|r| relations.contains(r)) {
        for (actor, t) in behavior_entries(corpus, &seeds, rel) {
            if let Target::Seed(dst) = t {
                g.add_edge_by_id(actor, dst, rel);
            }
        }
    }
    Ok(g)
}

/// Node, edge, community and transition summary of one graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub edges: usize,
    pub communities: usize,
    pub modularity: f64,
    pub transitions: TransitionMatrix,
}

pub const TRANSITION_ROWS: [&str; 4] = [
    "Safe to Safe Transition",
    "Safe to Unsafe Transition",
    "Unsafe to Safe Transition",
    "Unsafe to Unsafe Transition",
];

pub const COMMENTER_ROWS: [&str; 4] = [
    "Safe Commenter to Safe Uploader",
    "Unsafe Commenter to Safe Uploader",
    "Safe Commenter to Unsafe Uploader",
    "Unsafe Commenter to Unsafe Uploader",
];

/// Side-by-side summary table, one column per named graph.
pub fn transition_table(columns: &[(&str, GraphSummary)]) -> String {
    let mut out = String::from("Description");
    for (name, _) in columns {
        write!(out, "\t{name}").unwrap();
    }
    out.push('\n');
    let mut row = |label: &str, cell: &dyn Fn(&GraphSummary) -> String| {
        out.push_str(label);
        for (_, s) in columns {
            write!(out, "\t{}", cell(s)).unwrap();
        }
        out.push('\n');
    };
    row("Number of Nodes", &|s| s.nodes.to_string());
    row("Number of Edges", &|s| s.edges.to_string());
    row("Number of Communities", &|s| s.communities.to_string());
    row("Modularity", &|s| format!("{:.3}", s.modularity));
    row(TRANSITION_ROWS[0], &|s| s.transitions.ss.to_string());
    row(TRANSITION_ROWS[1], &|s| s.transitions.su.to_string());
    row(TRANSITION_ROWS[2], &|s| s.transitions.us.to_string());
    row(TRANSITION_ROWS[3], &|s| s.transitions.uu.to_string());
    out
}

/// Commenter → uploader transitions, commenter safety first.
pub fn commenter_table(t: &TransitionMatrix) -> String {
    let counts = [t.ss, t.us, t.su, t.uu];
    let mut out = String::from("Transition Type\tCount\n");
    for (label, n) in COMMENTER_ROWS.iter().zip(counts) {
        writeln!(out, "{label}\t{n}").unwrap();
    }
    out
}
