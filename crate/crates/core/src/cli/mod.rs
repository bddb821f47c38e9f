//! Command-line driver.
//!
//! Every subcommand writes its artifacts into one output directory (`--out`,
//! or `PROMOSCAN_OUT_DIR`) and finishes with `manifest.json`, which records
//! the options, the master seed, every derived stage seed and the digests of
//! all inputs and outputs. Failures print a single
//! `error module=<m> code=<n> message="..."` line to stderr.

mod artifacts;
mod stages;

pub use artifacts::{ArtifactEntry, ArtifactWriter, InputEntry, Manifest, MANIFEST_NAME};
pub use stages::GraphKind;

use crate::community::Partition;
use crate::corpus::{Corpus, Lexicon};
use crate::detect::{DetectConfig, DetectError, GradeThresholds, LabelOracle, DEFAULT_VIDEO_CAP};
use crate::error::{Error, Result, EXIT_USAGE};
use crate::features::{feature_matrix_tsv, FeatureView, DEFAULT_COMMENT_CAP};
use crate::learn::{
    compare_feature_views, grid_report, ClassifierKind, ForestParams, GridRow, LearnError,
    LearnParams, TreeParams,
};
use crate::netgraph::{
    behavior_table, behavior_tallies, commenter_table, transition_table, video_labels, GraphError,
    Relation, DEFAULT_MIN_COMMENTS, DEFAULT_RELATED_TH,
};
use crate::synth::{generate, preset};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use stages::{Detection, GraphParams, Labeler, Seeds};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(
    name = "promoscan",
    version,
    about = "Detect and map unsafe-content promoters in video corpora"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output directory for artifacts.
    #[arg(
        long,
        global = true,
        env = "PROMOSCAN_OUT_DIR",
        default_value = "promoscan-out"
    )]
    pub out: PathBuf,
    /// Master seed; every stage derives its own seed from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Lexicon file replacing the built-in word lists.
    #[arg(long, global = true)]
    pub lexicon: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic corpus with its ground truth.
    Synth(SynthArgs),
    /// Write the 34-feature matrix of every video.
    Extract(ExtractArgs),
    /// Train one classifier and save it as a model file.
    Train(TrainArgs),
    /// Classifier × feature-view evaluation grid on a stratified split.
    Eval(EvalArgs),
    /// Score and grade uploaders, flag commenters, write ECDF tables.
    Detect(DetectArgs),
    /// Build one graph and write its exports and transition matrix.
    Graph(GraphArgs),
    /// Build one graph and partition it with Louvain.
    Communities(GraphArgs),
    /// Detection, all graphs, partitions and the summary tables.
    Report(ReportArgs),
    /// The whole chain from corpus to report tables.
    Pipeline(PipelineArgs),
}

fn parse_view(s: &str) -> std::result::Result<FeatureView, String> {
    FeatureView::parse(s)
        .ok_or_else(|| format!("unknown feature view {s:?} (video, user, comment, all)"))
}

fn parse_classifier(s: &str) -> std::result::Result<ClassifierKind, String> {
    ClassifierKind::parse(s).ok_or_else(|| format!("unknown classifier {s:?} (forest, knn, tree)"))
}

fn parse_relation(s: &str) -> std::result::Result<Relation, String> {
    Relation::parse(s)
        .filter(|r| Relation::BEHAVIORS.contains(r))
        .ok_or_else(|| format!("unknown behavior relation {s:?} (like, subscribe, playlist)"))
}

#[derive(Debug, Args, Serialize)]
pub struct SynthArgs {
    /// One of tiny, paper-scale, stress.
    #[arg(long, default_value = "tiny")]
    pub preset: String,
}

#[derive(Debug, Args, Serialize)]
pub struct CorpusArg {
    /// Corpus file.
    #[arg(long)]
    pub corpus: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct FeatureOpts {
    /// Comments per video used by comment-level features.
    #[arg(long, default_value_t = DEFAULT_COMMENT_CAP)]
    pub comment_cap: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct LearnOpts {
    /// Trees in the random forest.
    #[arg(long, default_value_t = 100)]
    pub trees: usize,
    /// Candidate features per forest split; defaults to ceil(sqrt(view size)).
    #[arg(long)]
    pub features_per_split: Option<usize>,
    /// Maximum tree depth for the tree and the forest.
    #[arg(long)]
    pub max_depth: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub min_leaf: usize,
    /// Train forest trees on the full training set instead of bootstraps.
    #[arg(long)]
    pub no_bootstrap: bool,
    /// Neighbors for k-nearest-neighbor.
    #[arg(long, default_value_t = 5)]
    pub k: usize,
}

impl LearnOpts {
    fn params(&self) -> Result<LearnParams> {
        for (name, v) in [
            ("trees", self.trees),
            ("min-leaf", self.min_leaf),
            ("k", self.k),
        ] {
            if v == 0 {
                return Err(LearnError::Param(format!("--{name} must be positive")).into());
            }
        }
        if self.features_per_split == Some(0) || self.max_depth == Some(0) {
            return Err(LearnError::Param(
                "--features-per-split and --max-depth must be positive".into(),
            )
            .into());
        }
        Ok(LearnParams {
            tree: TreeParams {
                max_depth: self.max_depth,
                min_leaf: self.min_leaf,
            },
            forest: ForestParams {
                n_trees: self.trees,
                features_per_split: self.features_per_split,
                max_depth: self.max_depth,
                min_leaf: self.min_leaf,
                bootstrap: !self.no_bootstrap,
            },
            k: self.k,
        })
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ModelChoice {
    /// Classifier to train: forest, knn or tree.
    #[arg(long, default_value = "forest", value_parser = parse_classifier)]
    pub classifier: ClassifierKind,
    /// Feature view the model sees: video, user, comment or all.
    #[arg(long = "features", default_value = "all", value_parser = parse_view)]
    pub view: FeatureView,
}

#[derive(Debug, Args, Serialize)]
pub struct DetectOpts {
    /// Videos scored per uploader, in upload order.
    #[arg(long, default_value_t = DEFAULT_VIDEO_CAP)]
    pub video_cap: usize,
    /// Lowest indecent ratio graded moderate.
    #[arg(long, default_value_t = 1.0 / 3.0)]
    pub moderate: f64,
    /// Lowest indecent ratio graded high.
    #[arg(long, default_value_t = 2.0 / 3.0)]
    pub high: f64,
    /// Lowest indecent ratio graded extreme.
    #[arg(long, default_value_t = 0.9)]
    pub extreme: f64,
}

impl DetectOpts {
    fn config(&self, features: &FeatureOpts) -> Result<DetectConfig> {
        let thresholds = GradeThresholds {
            moderate: self.moderate,
            high: self.high,
            extreme: self.extreme,
        };
        thresholds.validate()?;
        if self.video_cap == 0 {
            return Err(DetectError::Param("--video-cap must be positive".into()).into());
        }
        Ok(DetectConfig {
            video_cap: self.video_cap,
            comment_cap: features.comment_cap,
            thresholds,
        })
    }
}

#[derive(Debug, Args, Serialize)]
pub struct LabelOpts {
    /// Model file classifying videos; without it the corpus labels are used.
    #[arg(long)]
    pub model: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct GraphOpts {
    /// Leading related-video suggestions followed per video.
    #[arg(long, default_value_t = DEFAULT_RELATED_TH)]
    pub th: usize,
    /// Minimum comments for a commenter to join the commenter graph.
    #[arg(long, default_value_t = DEFAULT_MIN_COMMENTS)]
    pub min_comments: usize,
    /// Behavior relations in the behavior graph.
    #[arg(long, value_delimiter = ',', default_value = "like,subscribe,playlist", value_parser = parse_relation)]
    pub relations: Vec<Relation>,
    /// Keep nodes without edges in exports and partitions.
    #[arg(long)]
    pub keep_isolated: bool,
}

impl GraphOpts {
    fn params(&self) -> Result<GraphParams> {
        if self.th == 0 {
            return Err(GraphError::Param("--th must be positive".into()).into());
        }
        if self.min_comments == 0 {
            return Err(GraphError::Param("--min-comments must be positive".into()).into());
        }
        Ok(GraphParams {
            th: self.th,
            min_comments: self.min_comments,
            relations: self.relations.clone(),
            keep_isolated: self.keep_isolated,
        })
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ExtractArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: CorpusArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub features: FeatureOpts,
}

#[derive(Debug, Args, Serialize)]
pub struct TrainArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: CorpusArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub features: FeatureOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelChoice,
    #[command(flatten)]
    #[serde(flatten)]
    pub learn: LearnOpts,
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: CorpusArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub features: FeatureOpts,
    /// Feature views to evaluate, comma separated.
    #[arg(long = "features", value_delimiter = ',', default_value = "video,user,comment,all", value_parser = parse_view)]
    pub views: Vec<FeatureView>,
    /// Classifiers to evaluate, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "forest,knn,tree", value_parser = parse_classifier)]
    pub classifiers: Vec<ClassifierKind>,
    #[command(flatten)]
    #[serde(flatten)]
    pub learn: LearnOpts,
}

#[derive(Debug, Args, Serialize)]
pub struct DetectArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: CorpusArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub labels: LabelOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub features: FeatureOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub detect: DetectOpts,
}

#[derive(Debug, Args, Serialize)]
pub struct GraphArgs {
    /// Graph to build.
    #[arg(long, value_enum)]
    pub kind: GraphKind,
    #[command(flatten)]
    #[serde(flatten)]
    pub input: CorpusArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub labels: LabelOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub features: FeatureOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub detect: DetectOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphOpts,
}

#[derive(Debug, Args, Serialize)]
pub struct ReportArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: CorpusArg,
    #[command(flatten)]
    #[serde(flatten)]
    pub labels: LabelOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub features: FeatureOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub detect: DetectOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphOpts,
}

#[derive(Debug, Args, Serialize)]
pub struct PipelineArgs {
    /// Synthetic preset to generate; ignored when --corpus is given.
    #[arg(long, default_value = "tiny")]
    pub preset: String,
    /// Existing corpus file to run on instead of a synthetic one.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub features: FeatureOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelChoice,
    #[command(flatten)]
    #[serde(flatten)]
    pub learn: LearnOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub detect: DetectOpts,
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphOpts,
}

/// Artifacts written by a successful run plus its console summary.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub artifacts: Vec<ArtifactEntry>,
    pub summary: Vec<String>,
}

/// Parses `argv` (program name first), runs it, prints the summary or the
/// one-line error, and returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let err = Error::Usage(first.trim_start_matches("error: ").to_string());
            eprintln!("{}", err.to_line());
            return EXIT_USAGE;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            println!(
                "wrote {} artifacts to {}",
                outcome.artifacts.len(),
                outcome.out_dir.display()
            );
            0
        }
        Err(e) => {
            eprintln!("{}", e.to_line());
            e.exit_code()
        }
    }
}

/// State threaded through one subcommand.
struct Run {
    seeds: Seeds,
    inputs: Vec<InputEntry>,
    writer: ArtifactWriter,
    summary: Vec<String>,
    extra: serde_json::Map<String, serde_json::Value>,
}

impl Run {
    fn finish(self, command: &'static str, options: &impl Serialize) -> Result<RunOutcome> {
        let mut options = serde_json::to_value(options).expect("options serialize");
        if let serde_json::Value::Object(map) = &mut options {
            map.extend(self.extra);
        }
        let out_dir = self.writer.dir().to_path_buf();
        let manifest = Manifest {
            command,
            seed: self.seeds.master,
            stage_seeds: self.seeds.used,
            options,
            inputs: self.inputs,
        };
        let artifacts = self.writer.finish(manifest)?;
        Ok(RunOutcome {
            out_dir,
            artifacts,
            summary: self.summary,
        })
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<RunOutcome> {
    let mut run = Run {
        seeds: Seeds::new(cli.global.seed),
        inputs: Vec::new(),
        writer: ArtifactWriter::new(&cli.global.out)?,
        summary: Vec::new(),
        extra: serde_json::Map::new(),
    };
    let lex = stages::load_lexicon_input(cli.global.lexicon.as_deref(), &mut run.inputs)?;
    match &cli.command {
        Command::Synth(a) => {
            synth_stage(&mut run, &a.preset)?;
            run.finish("synth", a)
        }
        Command::Extract(a) => {
            let corpus = stages::load_corpus_input(&a.input.corpus, &mut run.inputs)?;
            let rows = stages::feature_rows(&corpus, &lex, a.features.comment_cap)?;
            run.writer
                .write("features.tsv", &feature_matrix_tsv(&rows, &corpus))?;
            run.summary
                .push(format!("extracted {} feature rows", rows.len()));
            run.finish("extract", a)
        }
        Command::Train(a) => {
            let corpus = stages::load_corpus_input(&a.input.corpus, &mut run.inputs)?;
            let rows = stages::feature_rows(&corpus, &lex, a.features.comment_cap)?;
            train_stage(&mut run, &corpus, &rows, &a.model, &a.learn)?;
            run.finish("train", a)
        }
        Command::Eval(a) => {
            let corpus = stages::load_corpus_input(&a.input.corpus, &mut run.inputs)?;
            let rows = stages::feature_rows(&corpus, &lex, a.features.comment_cap)?;
            eval_stage(&mut run, &corpus, &rows, &a.classifiers, &a.views, &a.learn)?;
            run.finish("eval", a)
        }
        Command::Detect(a) => {
            let corpus = stages::load_corpus_input(&a.input.corpus, &mut run.inputs)?;
            let cfg = a.detect.config(&a.features)?;
            let labeler = labeler(&mut run, &corpus, &a.labels)?;
            let det = stages::detect(&corpus, &labeler, &lex, &cfg)?;
            stages::write_detection(&mut run.writer, &corpus, &det, cfg.video_cap)?;
            summarize_detection(&mut run, &det);
            run.finish("detect", a)
        }
        Command::Graph(a) | Command::Communities(a) => {
            let communities = matches!(cli.command, Command::Communities(_));
            let corpus = stages::load_corpus_input(&a.input.corpus, &mut run.inputs)?;
            let cfg = a.detect.config(&a.features)?;
            let params = a.graph.params()?;
            let labeler = labeler(&mut run, &corpus, &a.labels)?;
            let rows = match labeler {
                Labeler::Model(_) => stages::feature_rows(&corpus, &lex, cfg.comment_cap)?,
                Labeler::Oracle(_) => Vec::new(),
            };
            let labels = video_labels(&corpus, &labeler.predictions(&rows));
            let det = if a.kind.needs_detection() {
                Some(stages::detect(&corpus, &labeler, &lex, &cfg)?)
            } else {
                None
            };
            let g = stages::build_graph(a.kind, &corpus, &labels, det.as_ref(), &params)?;
            let p = if communities {
                stages::partition(&g, a.kind, &mut run.seeds)?
            } else {
                None
            };
            let t = stages::write_graph(&mut run.writer, a.kind, &g, p.as_ref())?;
            run.summary.push(format!(
                "{} graph: {} nodes, {} edges",
                a.kind.as_str(),
                g.node_count(),
                g.edge_count()
            ));
            run.summary.push(format!(
                "transitions ss={} su={} us={} uu={}",
                t.ss, t.su, t.us, t.uu
            ));
            if let Some(p) = &p {
                stages::write_partition(&mut run.writer, a.kind, &g, p)?;
                run.summary.push(format!(
                    "communities: {} with modularity {:.6}",
                    p.n_communities(),
                    p.modularity
                ));
            }
            run.finish(if communities { "communities" } else { "graph" }, a)
        }
        Command::Report(a) => {
            let corpus = stages::load_corpus_input(&a.input.corpus, &mut run.inputs)?;
            let cfg = a.detect.config(&a.features)?;
            let params = a.graph.params()?;
            let labeler = labeler(&mut run, &corpus, &a.labels)?;
            let rows = match labeler {
                Labeler::Model(_) => stages::feature_rows(&corpus, &lex, cfg.comment_cap)?,
                Labeler::Oracle(_) => Vec::new(),
            };
            report_stage(&mut run, &corpus, &lex, &labeler, &rows, &cfg, &params)?;
            run.finish("report", a)
        }
        Command::Pipeline(a) => {
            let cfg = a.detect.config(&a.features)?;
            let params = a.graph.params()?;
            let learn = a.learn.params()?;
            let corpus = match &a.corpus {
                Some(path) => stages::load_corpus_input(path, &mut run.inputs)?,
                None => synth_stage(&mut run, &a.preset)?,
            };
            let rows = stages::feature_rows(&corpus, &lex, cfg.comment_cap)?;
            run.writer
                .write("features.tsv", &feature_matrix_tsv(&rows, &corpus))?;
            let data = stages::labeled_dataset(&corpus, &rows, FeatureView::All)?;
            let learn_seed = run.seeds.stage("learn");
            let grid = compare_feature_views(
                &data,
                &ClassifierKind::ALL,
                &FeatureView::ALL_VIEWS,
                &learn,
                learn_seed,
            )?;
            run.writer.write("eval_grid.tsv", &grid_report(&grid))?;
            let model = train_stage(&mut run, &corpus, &rows, &a.model, &a.learn)?;
            let labeler = Labeler::Model(model);
            report_stage(&mut run, &corpus, &lex, &labeler, &rows, &cfg, &params)?;
            run.finish("pipeline", a)
        }
    }
}

/// Generates a preset corpus, writes it with its truth, and returns it.
fn synth_stage(run: &mut Run, name: &str) -> Result<Corpus> {
    let cfg = preset(name, run.seeds.stage("synth"))?;
    let (corpus, truth) = generate(&cfg)?;
    run.writer.write("corpus.json", &corpus.to_json_string())?;
    run.writer.write("truth.json", &truth.to_json_string())?;
    run.extra.insert(
        "synth_config".into(),
        serde_json::to_value(&cfg).expect("config serializes"),
    );
    run.summary.push(format!(
        "synthesized {}: {} videos, {} users, {} comments",
        name,
        corpus.videos().len(),
        corpus.users().len(),
        corpus.comments().len()
    ));
    Ok(corpus)
}

fn train_stage(
    run: &mut Run,
    corpus: &Corpus,
    rows: &[(String, crate::features::FeatureVector)],
    choice: &ModelChoice,
    learn: &LearnOpts,
) -> Result<crate::learn::Model> {
    let params = learn.params()?;
    let data = stages::labeled_dataset(corpus, rows, FeatureView::All)?;
    let seed = run.seeds.stage("learn");
    let (model, report) =
        stages::train_model(&data, choice.classifier, choice.view, &params, seed)?;
    run.writer.write("model.json", &model.to_json_string())?;
    let row = GridRow {
        classifier: choice.classifier,
        view: choice.view,
        report,
    };
    run.writer.write("holdout.tsv", &grid_report(&[row]))?;
    run.summary.push(format!(
        "trained {} on {}: held-out accuracy {:.3}",
        choice.classifier.label(),
        choice.view.label(),
        report.accuracy
    ));
    Ok(model)
}

fn eval_stage(
    run: &mut Run,
    corpus: &Corpus,
    rows: &[(String, crate::features::FeatureVector)],
    classifiers: &[ClassifierKind],
    views: &[FeatureView],
    learn: &LearnOpts,
) -> Result<()> {
    let params = learn.params()?;
    let data = stages::labeled_dataset(corpus, rows, FeatureView::All)?;
    let seed = run.seeds.stage("learn");
    let grid = compare_feature_views(&data, classifiers, views, &params, seed)?;
    let table = grid_report(&grid);
    run.writer.write("eval_grid.tsv", &table)?;
    run.summary.extend(table.lines().map(str::to_string));
    Ok(())
}

fn labeler(run: &mut Run, corpus: &Corpus, opts: &LabelOpts) -> Result<Labeler> {
    Ok(match &opts.model {
        Some(path) => Labeler::Model(stages::load_model_input(path, &mut run.inputs)?),
        None => Labeler::Oracle(LabelOracle::from_corpus(corpus)),
    })
}

fn summarize_detection(run: &mut Run, det: &Detection) {
    let grades = crate::detect::grade_counts(&det.verdicts);
    let parts: Vec<String> = grades.iter().map(|(g, n)| format!("{g}={n}")).collect();
    run.summary.push(format!(
        "{} uploaders graded ({}); {} commenters flagged",
        det.verdicts.len(),
        parts.join(" "),
        det.flags.len()
    ));
}

/// Detection, every graph with its partition, and the summary tables.
fn report_stage(
    run: &mut Run,
    corpus: &Corpus,
    lex: &Lexicon,
    labeler: &Labeler,
    rows: &[(String, crate::features::FeatureVector)],
    cfg: &DetectConfig,
    params: &GraphParams,
) -> Result<()> {
    let det = stages::detect(corpus, labeler, lex, cfg)?;
    stages::write_detection(&mut run.writer, corpus, &det, cfg.video_cap)?;
    summarize_detection(run, &det);
    let labels = video_labels(corpus, &labeler.predictions(rows));
    let mut columns = Vec::with_capacity(GraphKind::ALL.len());
    let mut commenter_matrix = None;
    for kind in GraphKind::ALL {
        let g = stages::build_graph(kind, corpus, &labels, Some(&det), params)?;
        let p: Option<Partition> = stages::partition(&g, kind, &mut run.seeds)?;
        let t = stages::write_graph(&mut run.writer, kind, &g, p.as_ref())?;
        if let Some(p) = &p {
            stages::write_partition(&mut run.writer, kind, &g, p)?;
        }
        if kind == GraphKind::Commenter {
            commenter_matrix = Some(t);
        }
        columns.push((kind.title(), stages::summarize(&g, p.as_ref())));
    }
    let table = transition_table(&columns);
    run.writer.write("transitions.tsv", &table)?;
    run.summary.extend(table.lines().map(str::to_string));
    let commenter = commenter_matrix.expect("commenter graph built");
    run.writer
        .write("commenter_transitions.tsv", &commenter_table(&commenter))?;
    let tallies = behavior_tallies(corpus, &det.verdicts, &det.flags)?;
    for rel in Relation::BEHAVIORS {
        run.writer.write(
            &format!("behavior_{}.tsv", rel.as_str()),
            &behavior_table(&tallies, rel),
        )?;
    }
    Ok(())
}

/// Convenience for tests and scripts: runs with the output directory given
/// explicitly.
pub fn run_in(out: &Path, args: &[&str]) -> Result<RunOutcome> {
    let mut argv: Vec<OsString> = vec!["promoscan".into()];
    argv.extend(args.iter().map(OsString::from));
    argv.push("--out".into());
    argv.push(out.as_os_str().to_owned());
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        let text = e.to_string();
        Error::Usage(
            text.lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ")
                .to_string(),
        )
    })?;
    execute(&cli)
}
