//! Uploader scoring and grading, the unsafe-commenter rule, and ECDF
//! characterization of safe vs. unsafe uploaders.
//!
//! Each uploader's videos are scored in corpus order (newest first by
//! convention), capped at `video_cap`. The fraction predicted unsafe is the
//! uploader's indecent ratio, graded against three configurable cut points.

mod ecdf;

pub use ecdf::EcdfSummary;

use crate::corpus::{Corpus, Lexicon, Safety, VideoRecord};
use crate::features::{extract, FeatureError, FeatureVector, DEFAULT_COMMENT_CAP, N_FEATURES};
use crate::learn::Classifier;
use crate::lexical::{bad_word_count, tokenize};
use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use thiserror::Error;

pub const DEFAULT_VIDEO_CAP: usize = 50;

#[derive(Debug, Error)]
pub enum DetectError {
    #[error(
        "schema error: classifier expects {expected} features, extractor produces {N_FEATURES}"
    )]
    Schema { expected: usize },
    #[error("parameter error: {0}")]
    Param(String),
    #[error("no verdicts to characterize")]
    NoVerdicts,
    #[error(transparent)]
    Features(#[from] FeatureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grade {
    Safe,
    Moderate,
    High,
    Extreme,
}

impl Grade {
    pub const ALL: [Grade; 4] = [Grade::Safe, Grade::Moderate, Grade::High, Grade::Extreme];

    /// Binary reading: anything above `Safe` is unsafe.
    pub fn safety(self) -> Safety {
        Safety::from_bool(self != Grade::Safe)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Grade::Safe => "safe",
            Grade::Moderate => "moderate",
            Grade::High => "high",
            Grade::Extreme => "extreme",
        }
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Lower-inclusive cut points on the indecent ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradeThresholds {
    pub moderate: f64,
    pub high: f64,
    pub extreme: f64,
}

impl Default for GradeThresholds {
    fn default() -> Self {
        GradeThresholds {
            moderate: 1.0 / 3.0,
            high: 2.0 / 3.0,
            extreme: 0.9,
        }
    }
}

impl GradeThresholds {
    pub fn validate(&self) -> Result<(), DetectError> {
        let ok = 0.0 < self.moderate
            && self.moderate <= self.high
            && self.high <= self.extreme
            && self.extreme <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(DetectError::Param(format!(
                "grade thresholds must satisfy 0 < {} <= {} <= {} <= 1",
                self.moderate, self.high, self.extreme
            )))
        }
    }
}

pub fn grade(ratio: f64, thresholds: &GradeThresholds) -> Result<Grade, DetectError> {
    thresholds.validate()?;
    if !(0.0..=1.0).contains(&ratio) {
        return Err(DetectError::Param(format!("ratio {ratio} outside [0, 1]")));
    }
    Ok(if ratio < thresholds.moderate {
        Grade::Safe
    } else if ratio < thresholds.high {
        Grade::Moderate
    } else if ratio < thresholds.extreme {
        Grade::High
    } else {
        Grade::Extreme
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UploaderVerdict {
    pub user_id: String,
    pub n_scored: usize,
    pub n_unsafe: usize,
    pub ratio: f64,
    pub grade: Grade,
}

impl UploaderVerdict {
    pub fn safety(&self) -> Safety {
        self.grade.safety()
    }
}

/// Labels a video from its record and extracted features.
pub trait VideoClassifier: Sync {
    /// Feature dimensionality the classifier was built for.
    fn expected_features(&self) -> usize;
    fn classify(&self, video: &VideoRecord, features: &FeatureVector) -> Safety;
}

impl<C: Classifier> VideoClassifier for C {
    fn expected_features(&self) -> usize {
        self.n_features()
    }

    fn classify(&self, _video: &VideoRecord, features: &FeatureVector) -> Safety {
        self.predict(features.values())
    }
}

/// Classifier that answers from a fixed id → label table, for checking the
/// scoring pipeline against known labels. Unknown videos are safe.
#[derive(Debug, Clone, Default)]
pub struct LabelOracle {
    pub labels: HashMap<String, Safety>,
}

impl LabelOracle {
    pub fn new(labels: impl IntoIterator<Item = (String, Safety)>) -> Self {
        LabelOracle {
            labels: labels.into_iter().collect(),
        }
    }

    /// Oracle returning each corpus video's own label.
    pub fn from_corpus(corpus: &Corpus) -> Self {
        LabelOracle::new(
            corpus
                .videos()
                .values()
                .filter_map(|v| v.label.map(|l| (v.video_id.clone(), l))),
        )
    }
}

impl VideoClassifier for LabelOracle {
    fn expected_features(&self) -> usize {
        N_FEATURES
    }

    fn classify(&self, video: &VideoRecord, _features: &FeatureVector) -> Safety {
        self.labels
            .get(&video.video_id)
            .copied()
            .unwrap_or(Safety::Safe)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectConfig {
    pub video_cap: usize,
    pub comment_cap: usize,
    pub thresholds: GradeThresholds,
}

impl Default for DetectConfig {
    fn default() -> Self {
        DetectConfig {
            video_cap: DEFAULT_VIDEO_CAP,
            comment_cap: DEFAULT_COMMENT_CAP,
            thresholds: GradeThresholds::default(),
        }
    }
}

/// Scores every uploader with at least one video. Output is sorted by
/// `user_id`.
pub fn detect_unsafe_uploaders(
    corpus: &Corpus,
    classifier: &dyn VideoClassifier,
    lex: &Lexicon,
    cfg: &DetectConfig,
) -> Result<Vec<UploaderVerdict>, DetectError> {
    if classifier.expected_features() != N_FEATURES {
        return Err(DetectError::Schema {
            expected: classifier.expected_features(),
        });
    }
    if cfg.video_cap == 0 {
        return Err(DetectError::Param("video_cap must be positive".into()));
    }
    cfg.thresholds.validate()?;
    let uploaders: Vec<&str> = corpus.uploader_ids().collect();
    let mut verdicts = uploaders
        .par_iter()
        .map(|&uid| {
            let mut n_scored = 0;
            let mut n_unsafe = 0;
            for video in corpus.videos_of(uid).take(cfg.video_cap) {
                let features = extract(video, corpus, lex, cfg.comment_cap)?;
                n_scored += 1;
                if classifier.classify(video, &features).is_unsafe() {
                    n_unsafe += 1;
                }
            }
            let ratio = n_unsafe as f64 / n_scored as f64;
            Ok(UploaderVerdict {
                user_id: uid.to_string(),
                n_scored,
                n_unsafe,
                ratio,
                grade: grade(ratio, &cfg.thresholds)?,
            })
        })
        .collect::<Result<Vec<_>, DetectError>>()?;
    verdicts.sort_by(|a, b| a.user_id.cmp(&b.user_id));
    Ok(verdicts)
}

/// Authors of at least one comment containing a bad word.
pub fn detect_unsafe_commenters(corpus: &Corpus, lex: &Lexicon) -> BTreeSet<String> {
    corpus
        .comments()
        .iter()
        .filter(|c| bad_word_count(&tokenize(&c.text), lex) >= 1)
        .map(|c| c.author_id.clone())
        .collect()
}

/// Population of each grade, in grade order.
pub fn grade_counts(verdicts: &[UploaderVerdict]) -> BTreeMap<Grade, usize> {
    let mut out: BTreeMap<Grade, usize> = Grade::ALL.iter().map(|&g| (g, 0)).collect();
    for v in verdicts {
        *out.entry(v.grade).or_default() += 1;
    }
    out
}

pub fn verdict_table(verdicts: &[UploaderVerdict]) -> String {
    let mut out = String::from("user_id\tn_scored\tn_unsafe\tratio\tgrade\n");
    for v in verdicts {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            v.user_id, v.n_scored, v.n_unsafe, v.ratio, v.grade
        )
        .unwrap();
    }
    out
}

/// Popularity and engagement metrics, in report order.
pub const METRICS: [&str; 7] = [
    "subscriber_count",
    "total_views",
    "circled_by_count",
    "total_videos",
    "comments_per_video",
    "likes_per_video",
    "dislikes_per_video",
];

/// Safe-side and unsafe-side ECDFs for one metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcdfPair {
    pub safe: EcdfSummary,
    pub unsafe_: EcdfSummary,
}

/// Builds paired ECDFs over safe-graded vs. unsafe-graded uploaders.
///
/// Profile metrics come from the uploader's record (an absent
/// `circled_by_count` counts as 0). Per-video metrics average the record
/// counts over the uploader's first `video_cap` videos.
pub fn characterize(
    corpus: &Corpus,
    verdicts: &[UploaderVerdict],
    video_cap: usize,
) -> Result<IndexMap<&'static str, EcdfPair>, DetectError> {
    if verdicts.is_empty() {
        return Err(DetectError::NoVerdicts);
    }
    let mut samples: IndexMap<&'static str, [Vec<f64>; 2]> = METRICS
        .iter()
        .map(|&m| (m, [Vec::new(), Vec::new()]))
        .collect();
    for v in verdicts {
        let Some(user) = corpus.user(&v.user_id) else {
            continue;
        };
        let side = v.safety().as_index();
        let videos: Vec<&VideoRecord> = corpus
            .videos_of(&v.user_id)
            .take(video_cap.max(1))
            .collect();
        let per_video = |f: fn(&VideoRecord) -> u64| {
            if videos.is_empty() {
                0.0
            } else {
                videos.iter().map(|v| f(v) as f64).sum::<f64>() / videos.len() as f64
            }
        };
        let values = [
            user.subscriber_count as f64,
            user.total_views as f64,
            user.circled_by_count.unwrap_or(0) as f64,
            user.total_videos as f64,
            per_video(|v| v.comment_count),
            per_video(|v| v.like_count),
            per_video(|v| v.dislike_count),
        ];
        for (metric, value) in METRICS.iter().zip(values) {
            samples[metric][side].push(value);
        }
    }
    Ok(samples
        .into_iter()
        .map(|(m, [safe, uns])| {
            (
                m,
                EcdfPair {
                    safe: EcdfSummary::new(m, safe),
                    unsafe_: EcdfSummary::new(m, uns),
                },
            )
        })
        .collect())
}
