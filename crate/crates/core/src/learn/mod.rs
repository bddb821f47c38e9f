//! From-scratch classifiers and evaluation.
//!
//! Three classifiers are provided: a Gini decision tree, a bootstrap random
//! forest over that tree, and a min/max-scaled k-nearest-neighbor model.
//! Metrics treat unsafe as the positive class.

mod dataset;
mod eval;
mod forest;
mod knn;
mod tree;

pub use dataset::{split, Dataset};
pub use eval::{evaluate, EvalReport};
pub use forest::{default_features_per_split, train_forest, ForestModel, ForestParams};
pub use knn::{train_knn, KnnModel};
pub use tree::{train_tree, Node, TreeModel, TreeParams};

use crate::corpus::Safety;
use crate::features::FeatureView;
use crate::seed::stage_seed;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("dataset is empty")]
    Empty,
    #[error("no {0} rows to stratify on")]
    Stratification(Safety),
    #[error("parameter error: {0}")]
    Param(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("model file {path}: {message}")]
    ModelFile { path: String, message: String },
}

/// Anything that labels a feature row.
pub trait Classifier: Send + Sync {
    fn predict(&self, x: &[f64]) -> Safety;
    /// Row dimensionality the model was trained on.
    fn n_features(&self) -> usize;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifierKind {
    RandomForest,
    KNearestNeighbor,
    DecisionTree,
}

impl ClassifierKind {
    /// Report order.
    pub const ALL: [ClassifierKind; 3] = [
        ClassifierKind::RandomForest,
        ClassifierKind::KNearestNeighbor,
        ClassifierKind::DecisionTree,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ClassifierKind::RandomForest => "Random Forest",
            ClassifierKind::KNearestNeighbor => "K-Nearest Neighbor",
            ClassifierKind::DecisionTree => "Decision Tree",
        }
    }

    pub fn parse(s: &str) -> Option<ClassifierKind> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "forest" | "random_forest" | "rf" => Some(ClassifierKind::RandomForest),
            "knn" | "k_nearest_neighbor" => Some(ClassifierKind::KNearestNeighbor),
            "tree" | "decision_tree" | "dt" => Some(ClassifierKind::DecisionTree),
            _ => None,
        }
    }
}

/// Hyperparameters for all three classifiers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LearnParams {
    pub tree: TreeParams,
    pub forest: ForestParams,
    pub k: usize,
}

impl Default for LearnParams {
    fn default() -> Self {
        LearnParams {
            tree: TreeParams::default(),
            forest: ForestParams::default(),
            k: 5,
        }
    }
}

/// A trained model of any kind; the unit of model files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    DecisionTree(TreeModel),
    RandomForest(ForestModel),
    KNearestNeighbor(KnnModel),
}

impl Model {
    pub fn train(
        kind: ClassifierKind,
        train: &Dataset,
        params: &LearnParams,
        seed: u64,
    ) -> Result<Model, LearnError> {
        if train.is_empty() {
            return Err(LearnError::Empty);
        }
        Ok(match kind {
            ClassifierKind::DecisionTree => Model::DecisionTree(train_tree(train, params.tree)),
            ClassifierKind::RandomForest => {
                Model::RandomForest(train_forest(train, params.forest, seed)?)
            }
            ClassifierKind::KNearestNeighbor => {
                Model::KNearestNeighbor(train_knn(train, params.k)?)
            }
        })
    }

    pub fn kind(&self) -> ClassifierKind {
        match self {
            Model::DecisionTree(_) => ClassifierKind::DecisionTree,
            Model::RandomForest(_) => ClassifierKind::RandomForest,
            Model::KNearestNeighbor(_) => ClassifierKind::KNearestNeighbor,
        }
    }

    fn inner(&self) -> &dyn Classifier {
        match self {
            Model::DecisionTree(m) => m,
            Model::RandomForest(m) => m,
            Model::KNearestNeighbor(m) => m,
        }
    }

    pub fn to_json_string(&self) -> String {
        let doc = ModelFile {
            format_version: MODEL_FORMAT_VERSION,
            model: self.clone(),
        };
        let mut s = serde_json::to_string(&doc).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json_str(text: &str) -> Result<Model, LearnError> {
        let doc: ModelFile = serde_json::from_str(text).map_err(|e| LearnError::ModelFile {
            path: "<text>".into(),
            message: e.to_string(),
        })?;
        if doc.format_version != MODEL_FORMAT_VERSION {
            return Err(LearnError::ModelFile {
                path: "<text>".into(),
                message: format!("unsupported format_version {}", doc.format_version),
            });
        }
        Ok(doc.model)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Model, LearnError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| LearnError::ModelFile {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Model::from_json_str(&text).map_err(|e| match e {
            LearnError::ModelFile { message, .. } => LearnError::ModelFile {
                path: path.display().to_string(),
                message,
            },
            other => other,
        })
    }
}

impl Classifier for Model {
    fn predict(&self, x: &[f64]) -> Safety {
        self.inner().predict(x)
    }

    fn n_features(&self) -> usize {
        self.inner().n_features()
    }
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    model: Model,
}

/// One row of the classifier × feature-view grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub classifier: ClassifierKind,
    pub view: FeatureView,
    pub report: EvalReport,
}

/// Trains and evaluates every classifier on every requested view using one
/// shared stratified 80:20 split.
pub fn compare_feature_views(
    data: &Dataset,
    classifiers: &[ClassifierKind],
    views: &[FeatureView],
    params: &LearnParams,
    seed: u64,
) -> Result<Vec<GridRow>, LearnError> {
    let (train, test) = split(data, 0.8, stage_seed(seed, "split"))?;
    let mut out = Vec::with_capacity(classifiers.len() * views.len());
    for &classifier in classifiers {
        for &view in views {
            let tr = train.with_mask(view.indices())?;
            let te = test.with_mask(view.indices())?;
            let model = Model::train(classifier, &tr, params, stage_seed(seed, "forest"))?;
            out.push(GridRow {
                classifier,
                view,
                report: evaluate(&model, &te)?,
            });
        }
    }
    Ok(out)
}

/// Tab-separated grid with percentages to one decimal, plus raw counts.
pub fn grid_report(rows: &[GridRow]) -> String {
    let mut out = String::from(
        "Classifier Name\tFeature List\tPrecision\tRecall\tAccuracy\ttp\tfp\tfn\ttn\n",
    );
    for r in rows {
        writeln!(
            out,
            "{}\t{}\t{:.1}\t{:.1}\t{:.1}\t{}\t{}\t{}\t{}",
            r.classifier.label(),
            r.view.label(),
            100.0 * r.report.precision,
            100.0 * r.report.recall,
            100.0 * r.report.accuracy,
            r.report.tp,
            r.report.fp,
            r.report.fn_,
            r.report.tn
        )
        .unwrap();
    }
    out
}
