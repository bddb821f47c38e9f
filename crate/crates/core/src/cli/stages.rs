//! Stages shared by the subcommands. Each takes loaded inputs and writes its
//! artifacts through an [`ArtifactWriter`].

use super::artifacts::{sha256_hex, ArtifactWriter, InputEntry};
use crate::community::{community_composition, composition_table, louvain, Partition};
use crate::corpus::{load_lexicon, Corpus, CorpusError, Lexicon, Safety};
use crate::detect::{
    characterize, detect_unsafe_commenters, detect_unsafe_uploaders, grade_counts, verdict_table,
    DetectConfig, EcdfSummary, LabelOracle, UploaderVerdict, VideoClassifier,
};
use crate::error::{Error, Result};
use crate::features::{extract_batch, FeatureVector, FeatureView};
use crate::learn::{
    evaluate, split, Classifier, ClassifierKind, Dataset, EvalReport, LearnParams, Model,
};
use crate::netgraph::{
    build_behavior_graph, build_commenter_graph, build_uploader_graph, build_video_graph,
    edge_list, graphml, transitions, GraphSummary, LabeledGraph, Relation, TransitionMatrix,
};
use crate::seed::stage_seed;
use clap::ValueEnum;
use indexmap::IndexMap;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::Path;

/// Master seed plus every stage seed handed out so far, for the manifest.
#[derive(Debug, Clone)]
pub(crate) struct Seeds {
    pub master: u64,
    pub used: IndexMap<String, u64>,
}

impl Seeds {
    pub fn new(master: u64) -> Seeds {
        Seeds {
            master,
            used: IndexMap::new(),
        }
    }

    pub fn stage(&mut self, label: &str) -> u64 {
        let s = stage_seed(self.master, label);
        self.used.insert(label.to_string(), s);
        s
    }
}

fn read_input(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| {
        Error::from(CorpusError::Io {
            path: path.display().to_string(),
            source,
        })
    })
}

pub(crate) fn input_entry(role: &'static str, path: &Path, text: &str) -> InputEntry {
    InputEntry {
        role,
        path: path.display().to_string(),
        sha256: sha256_hex(text.as_bytes()),
    }
}

pub(crate) fn load_corpus_input(path: &Path, inputs: &mut Vec<InputEntry>) -> Result<Corpus> {
    let text = read_input(path)?;
    let corpus =
        Corpus::from_json_str(&text).map_err(|e| Error::in_file(path.display().to_string(), e))?;
    inputs.push(input_entry("corpus", path, &text));
    Ok(corpus)
}

pub(crate) fn load_lexicon_input(
    path: Option<&Path>,
    inputs: &mut Vec<InputEntry>,
) -> Result<Lexicon> {
    let Some(path) = path else {
        return Ok(Lexicon::builtin());
    };
    let lex = load_lexicon(path).map_err(|e| Error::in_file(path.display().to_string(), e))?;
    inputs.push(input_entry("lexicon", path, &read_input(path)?));
    Ok(lex)
}

pub(crate) fn load_model_input(path: &Path, inputs: &mut Vec<InputEntry>) -> Result<Model> {
    let text = read_input(path)?;
    let model =
        Model::from_json_str(&text).map_err(|e| Error::in_file(path.display().to_string(), e))?;
    inputs.push(input_entry("model", path, &text));
    Ok(model)
}

/// Features of every corpus video, in corpus order.
pub(crate) fn feature_rows(
    corpus: &Corpus,
    lex: &Lexicon,
    comment_cap: usize,
) -> Result<Vec<(String, FeatureVector)>> {
    if comment_cap == 0 {
        return Err(Error::Param("comment_cap must be positive".into()));
    }
    let ids: Vec<&str> = corpus.videos().keys().map(String::as_str).collect();
    Ok(extract_batch(&ids, corpus, lex, comment_cap)?)
}

/// Labeled videos only.
pub(crate) fn labeled_dataset(
    corpus: &Corpus,
    rows: &[(String, FeatureVector)],
    view: FeatureView,
) -> Result<Dataset> {
    let items = rows.iter().filter_map(|(id, f)| {
        corpus
            .video(id)
            .and_then(|v| v.label)
            .map(|l| (f.clone(), l))
    });
    Ok(Dataset::from_features(items, view)?)
}

/// Trains on the stratified 80% side and scores the held-out 20%, with the
/// same split and forest seeds as the evaluation grid.
pub(crate) fn train_model(
    data: &Dataset,
    kind: ClassifierKind,
    view: FeatureView,
    params: &LearnParams,
    seed: u64,
) -> Result<(Model, EvalReport)> {
    let (train, test) = split(data, 0.8, stage_seed(seed, "split"))?;
    let train = train.with_mask(view.indices())?;
    let test = test.with_mask(view.indices())?;
    let model = Model::train(kind, &train, params, stage_seed(seed, "forest"))?;
    let report = evaluate(&model, &test)?;
    Ok((model, report))
}

/// Source of video safety for scoring: a trained model, or the corpus
/// labels themselves.
pub(crate) enum Labeler {
    Oracle(LabelOracle),
    Model(Model),
}

impl Labeler {
    pub fn classifier(&self) -> &dyn VideoClassifier {
        match self {
            Labeler::Oracle(o) => o,
            Labeler::Model(m) => m,
        }
    }

    /// Predicted label per video; empty for the oracle, whose labels come
    /// from the corpus anyway.
    pub fn predictions(&self, rows: &[(String, FeatureVector)]) -> HashMap<String, Safety> {
        match self {
            Labeler::Oracle(_) => HashMap::new(),
            Labeler::Model(m) => rows
                .iter()
                .map(|(id, f)| (id.clone(), m.predict(f.values())))
                .collect(),
        }
    }
}

pub(crate) struct Detection {
    pub verdicts: Vec<UploaderVerdict>,
    pub flags: BTreeSet<String>,
}

pub(crate) fn detect(
    corpus: &Corpus,
    labeler: &Labeler,
    lex: &Lexicon,
    cfg: &DetectConfig,
) -> Result<Detection> {
    Ok(Detection {
        verdicts: detect_unsafe_uploaders(corpus, labeler.classifier(), lex, cfg)?,
        flags: detect_unsafe_commenters(corpus, lex),
    })
}

/// Verdicts, grade census, flagged commenters and the ECDF tables.
pub(crate) fn write_detection(
    w: &mut ArtifactWriter,
    corpus: &Corpus,
    det: &Detection,
    video_cap: usize,
) -> Result<()> {
    w.write("verdicts.tsv", &verdict_table(&det.verdicts))?;
    let mut grades = String::from("grade\tcount\n");
    for (g, n) in grade_counts(&det.verdicts) {
        writeln!(grades, "{g}\t{n}").unwrap();
    }
    w.write("grades.tsv", &grades)?;
    let mut flagged = String::new();
    for id in &det.flags {
        writeln!(flagged, "{id}").unwrap();
    }
    w.write("unsafe_commenters.txt", &flagged)?;
    let ratio = EcdfSummary::new("indecent_ratio", det.verdicts.iter().map(|v| v.ratio));
    w.write("ecdf/indecent_ratio.tsv", &ratio.to_tsv())?;
    for (metric, pair) in characterize(corpus, &det.verdicts, video_cap)? {
        w.write(&format!("ecdf/{metric}_safe.tsv"), &pair.safe.to_tsv())?;
        w.write(&format!("ecdf/{metric}_unsafe.tsv"), &pair.unsafe_.to_tsv())?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Video,
    Uploader,
    Commenter,
    Behavior,
}

impl GraphKind {
    pub const ALL: [GraphKind; 4] = [
        GraphKind::Video,
        GraphKind::Uploader,
        GraphKind::Commenter,
        GraphKind::Behavior,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GraphKind::Video => "video",
            GraphKind::Uploader => "uploader",
            GraphKind::Commenter => "commenter",
            GraphKind::Behavior => "behavior",
        }
    }

    /// Column heading in the transition summary.
    pub fn title(self) -> &'static str {
        match self {
            GraphKind::Video => "Video-Video",
            GraphKind::Uploader => "Uploader-Uploader",
            GraphKind::Commenter => "Commenter-Uploader",
            GraphKind::Behavior => "Behavior",
        }
    }

    /// Whether building needs uploader verdicts and commenter flags.
    pub fn needs_detection(self) -> bool {
        self != GraphKind::Video
    }
}

#[derive(Debug, Clone, Serialize)]
pub(crate) struct GraphParams {
    pub th: usize,
    pub min_comments: usize,
    pub relations: Vec<Relation>,
    pub keep_isolated: bool,
}

/// Builds one graph. Isolated nodes are dropped unless asked to keep them.
pub(crate) fn build_graph(
    kind: GraphKind,
    corpus: &Corpus,
    labels: &HashMap<String, Safety>,
    det: Option<&Detection>,
    params: &GraphParams,
) -> Result<LabeledGraph> {
    let need = || det.expect("detection computed for user graphs");
    let g = match kind {
        GraphKind::Video => build_video_graph(corpus, labels, params.th)?,
        GraphKind::Uploader => {
            let videos = build_video_graph(corpus, labels, params.th)?;
            build_uploader_graph(&videos, corpus, &need().verdicts)?
        }
        GraphKind::Commenter => {
            let d = need();
            build_commenter_graph(corpus, &d.verdicts, &d.flags, params.min_comments)?
        }
        GraphKind::Behavior => {
            let d = need();
            build_behavior_graph(corpus, &d.verdicts, &d.flags, &params.relations)?
        }
    };
    Ok(if params.keep_isolated {
        g
    } else {
        g.without_isolated()
    })
}

pub(crate) fn matrix_table(t: &TransitionMatrix) -> String {
    let mut out = String::from("from\tto\tcount\n");
    for from in [Safety::Safe, Safety::Unsafe] {
        for to in [Safety::Safe, Safety::Unsafe] {
            writeln!(out, "{from}\t{to}\t{}", t.get(from, to)).unwrap();
        }
    }
    out
}

/// Edge list, GraphML and transition matrix of one graph.
pub(crate) fn write_graph(
    w: &mut ArtifactWriter,
    kind: GraphKind,
    g: &LabeledGraph,
    partition: Option<&Partition>,
) -> Result<TransitionMatrix> {
    let k = kind.as_str();
    let t = transitions(g);
    w.write(&format!("graph_{k}.edges"), &edge_list(g))?;
    w.write(
        &format!("graph_{k}.graphml"),
        &graphml(g, partition.map(|p| p.assignment.as_slice())),
    )?;
    w.write(&format!("transitions_{k}.tsv"), &matrix_table(&t))?;
    Ok(t)
}

/// Louvain partition, or `None` for a graph with no nodes.
pub(crate) fn partition(
    g: &LabeledGraph,
    kind: GraphKind,
    seeds: &mut Seeds,
) -> Result<Option<Partition>> {
    let seed = seeds.stage(&format!("louvain/{}", kind.as_str()));
    if g.is_empty() {
        return Ok(None);
    }
    Ok(Some(louvain(g, seed)?))
}

pub(crate) fn write_partition(
    w: &mut ArtifactWriter,
    kind: GraphKind,
    g: &LabeledGraph,
    p: &Partition,
) -> Result<()> {
    let k = kind.as_str();
    w.write(&format!("partition_{k}.tsv"), &p.to_tsv(g))?;
    w.write(
        &format!("composition_{k}.tsv"),
        &composition_table(&community_composition(g, p)?),
    )?;
    Ok(())
}

pub(crate) fn summarize(g: &LabeledGraph, p: Option<&Partition>) -> GraphSummary {
    GraphSummary {
        nodes: g.node_count(),
        edges: g.edge_count(),
        communities: p.map_or(0, Partition::n_communities),
        modularity: p.map_or(0.0, |p| p.modularity),
        transitions: transitions(g),
    }
}
