//! The 34-dimensional per-video feature vector.
//!
//! Features come in three views, in this fixed order:
//!
//! - video level (19): type, engagement counts and ratios, title/description
//!   text statistics;
//! - user level (9): the uploader's channel and social-profile statistics;
//! - comment level (6): aggregates over the first `comment_cap` comments of
//!   the video.
//!
//! Ratios use `max(denominator, 1)`; absent social-profile counters are 0.

use crate::corpus::{Corpus, Lexicon, Sentiment, VideoRecord};
use crate::lexical::{bad_word_count, common_words, count_marks, jaccard, sentiment, tokenize};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

pub const N_FEATURES: usize = 34;
pub const N_VIDEO: usize = 19;
pub const N_USER: usize = 9;
pub const N_COMMENT: usize = 6;

/// Default number of comments aggregated per video.
pub const DEFAULT_COMMENT_CAP: usize = 50;

pub const FEATURE_NAMES: [&str; N_FEATURES] = [
    // video level
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
    // user level
    "user_total_videos",
    "user_total_views",
    "user_total_comments",
    "user_subscribers",
    "channel_title_length",
    "channel_description_length",
    "user_days_since_registered",
    "circled_by_count",
    "plus_one_count",
    // comment level
    "comment_likes",
    "comment_replies",
    "comments_positive",
    "comments_negative",
    "comments_neutral",
    "comment_bad_words",
];

/// Named feature view; each maps to a set of indices into [`FEATURE_NAMES`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureView {
    Video,
    User,
    Comment,
    All,
}

impl FeatureView {
    pub const ALL_VIEWS: [FeatureView; 4] = [
        FeatureView::Video,
        FeatureView::User,
        FeatureView::Comment,
        FeatureView::All,
    ];

    pub fn indices(self) -> Vec<usize> {
        match self {
            FeatureView::Video => (0..N_VIDEO).collect(),
            FeatureView::User => (N_VIDEO..N_VIDEO + N_USER).collect(),
            FeatureView::Comment => (N_VIDEO + N_USER..N_FEATURES).collect(),
            FeatureView::All => (0..N_FEATURES).collect(),
        }
    }

    /// Row label used in evaluation reports.
    pub fn label(self) -> &'static str {
        match self {
            FeatureView::Video => "Video-Level",
            FeatureView::User => "User-Level",
            FeatureView::Comment => "Comment-Level",
            FeatureView::All => "All Features",
        }
    }

    pub fn parse(s: &str) -> Option<FeatureView> {
        match s.to_ascii_lowercase().as_str() {
            "video" | "video-level" => Some(FeatureView::Video),
            "user" | "user-level" => Some(FeatureView::User),
            "comment" | "comment-level" => Some(FeatureView::Comment),
            "all" | "all-features" => Some(FeatureView::All),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(pub [f64; N_FEATURES]);

impl FeatureVector {
    pub fn values(&self) -> &[f64; N_FEATURES] {
        &self.0
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        FEATURE_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| self.0[i])
    }
}

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("video {video:?}: uploader {uploader:?} does not resolve")]
    UnresolvedUploader { video: String, uploader: String },
    #[error("video {0:?} is not in the corpus")]
    UnknownVideo(String),
    #[error("batch item {index}: {source}")]
    Batch {
        index: usize,
        #[source]
        source: Box<FeatureError>,
    },
}

fn chars(s: &str) -> f64 {
    s.chars().count() as f64
}

pub fn extract(
    video: &VideoRecord,
    corpus: &Corpus,
    lex: &Lexicon,
    comment_cap: usize,
) -> Result<FeatureVector, FeatureError> {
    let user = corpus
        .user(&video.uploader_id)
        .ok_or_else(|| FeatureError::UnresolvedUploader {
            video: video.video_id.clone(),
            uploader: video.uploader_id.clone(),
        })?;

    let title = tokenize(&video.title);
    let desc = tokenize(&video.description);
    let marks = count_marks(&video.description);
    let title_len = chars(&video.title);
    let desc_len = chars(&video.description);

    let mut f = [0.0; N_FEATURES];
    f[0] = video.video_type as f64;
    f[1] = video.view_count as f64;
    f[2] = video.comment_count as f64;
    f[3] = video.dislike_count as f64;
    f[4] = video.like_count as f64;
    f[5] = video.like_count as f64 / video.dislike_count.max(1) as f64;
    f[6] = title_len;
    f[7] = desc_len;
    f[8] = desc_len / title_len.max(1.0);
    f[9] = video.duration_s as f64;
    f[10] = video.age_days as f64;
    f[11] = jaccard(&title, &desc);
    f[12] = bad_word_count(&title, lex) as f64;
    f[13] = bad_word_count(&desc, lex) as f64;
    f[14] = marks.question_marks as f64;
    f[15] = marks.hyperlinks as f64;
    f[16] = marks.emoticons as f64;
    f[17] = if video.title.contains("18") { 1.0 } else { 0.0 };
    f[18] = common_words(&title, &desc) as f64;

    f[19] = user.total_videos as f64;
    f[20] = user.total_views as f64;
    f[21] = user.total_comments as f64;
    f[22] = user.subscriber_count as f64;
    f[23] = chars(&user.channel_title);
    f[24] = chars(&user.channel_description);
    f[25] = user.age_days as f64;
    f[26] = user.circled_by_count.unwrap_or(0) as f64;
    f[27] = user.plus_one_count.unwrap_or(0) as f64;

    let (mut likes, mut replies, mut pos, mut neg, mut neu, mut bad) =
        (0u64, 0u64, 0u64, 0u64, 0u64, 0usize);
    for c in corpus.comments_of(&video.video_id).take(comment_cap) {
        likes += c.like_count;
        replies += c.reply_count;
        match c.sentiment.unwrap_or_else(|| sentiment(&c.text, lex)) {
            Sentiment::Positive => pos += 1,
            Sentiment::Negative => neg += 1,
            Sentiment::Neutral => neu += 1,
        }
        bad += bad_word_count(&tokenize(&c.text), lex);
    }
    f[28] = likes as f64;
    f[29] = replies as f64;
    f[30] = pos as f64;
    f[31] = neg as f64;
    f[32] = neu as f64;
    f[33] = bad as f64;

    Ok(FeatureVector(f))
}

/// Order-preserving parallel map of [`extract`] over video ids.
pub fn extract_batch(
    video_ids: &[&str],
    corpus: &Corpus,
    lex: &Lexicon,
    comment_cap: usize,
) -> Result<Vec<(String, FeatureVector)>, FeatureError> {
    video_ids
        .par_iter()
        .enumerate()
        .map(|(index, id)| {
            let wrap = |source| FeatureError::Batch {
                index,
                source: Box::new(source),
            };
            let video = corpus
                .video(id)
                .ok_or_else(|| wrap(FeatureError::UnknownVideo(id.to_string())))?;
            extract(video, corpus, lex, comment_cap)
                .map(|fv| (id.to_string(), fv))
                .map_err(wrap)
        })
        .collect()
}

/// Writes the feature matrix: tab-separated, header of the 34 names then
/// `video_id` and `label` (`safe`, `unsafe` or empty).
pub fn feature_matrix_tsv(rows: &[(String, FeatureVector)], corpus: &Corpus) -> String {
    let mut out = String::new();
    out.push_str(&FEATURE_NAMES.join("\t"));
    out.push_str("\tvideo_id\tlabel\n");
    for (id, fv) in rows {
        for v in fv.values() {
            write!(out, "{v}\t").unwrap();
        }
        let label = corpus
            .video(id)
            .and_then(|v| v.label)
            .map(|l| l.as_str())
            .unwrap_or("");
        writeln!(out, "{id}\t{label}").unwrap();
    }
    out
}
