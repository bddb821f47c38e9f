//! Deterministic synthetic corpora with planted ground truth.
//!
//! Every random choice flows from `SynthConfig::seed`, split into
//! independent per-phase streams so that, for example, changing the comment
//! volume leaves video and user records untouched.
//!
//! Feature signal is planted as Gaussian mean shifts in a latent space that is
//! then mapped onto record fields (log-normal counts, Poisson mark counts,
//! word-list text). Unsafe uploaders receive a planted indecent ratio of at
//! least the default moderate cut point; safe uploaders stay below it.

mod plant;
mod presets;
mod text;

pub use plant::{planted_partition_graph, CommunityPlan, PlantedGraph};
pub use presets::{preset, PRESET_NAMES};

use crate::corpus::{
    CommentRecord, Corpus, CorpusError, Lexicon, Reference, Role, Safety, UserRecord, VideoRecord,
};
use crate::detect::{grade, Grade, GradeThresholds};
use crate::netgraph::{BehaviorTallies, Relation, RelationTally};
use crate::seed::stage_seed;
use indexmap::IndexMap;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::{index, IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Poisson, StandardNormal};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::Path;
use text::{DescriptionSpec, TitleSpec, Tone, Vocab};
use thiserror::Error;

pub const TRUTH_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("generated corpus failed validation: {0}")]
    Corpus(#[from] CorpusError),
    #[error("ground truth {path}: {message}")]
    TruthFile { path: String, message: String },
}

/// Inclusive integer range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRange {
    pub min: usize,
    pub max: usize,
}

impl CountRange {
    pub const fn new(min: usize, max: usize) -> Self {
        CountRange { min, max }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        rng.random_range(self.min..=self.max)
    }
}

/// Latent mean shift, in standard deviations, applied to unsafe items in
/// each feature view.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalStrength {
    pub video: f64,
    pub user: f64,
    pub comment: f64,
}

impl Default for SignalStrength {
    fn default() -> Self {
        SignalStrength {
            video: 0.9,
            user: 1.2,
            comment: 0.7,
        }
    }
}

/// Exact bad-comment plant: this many comments, by exactly this many
/// distinct authors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadCommentPlant {
    pub comments: usize,
    pub authors: usize,
}

/// Related-video suggestion lists.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelatedPlan {
    pub per_video: usize,
    /// Chance that a suggestion is another corpus video.
    pub p_seed: f64,
    /// Chance that a corpus suggestion shares the source video's label.
    pub homophily: f64,
}

impl Default for RelatedPlan {
    fn default() -> Self {
        RelatedPlan {
            per_video: 15,
            p_seed: 0.15,
            homophily: 0.85,
        }
    }
}

/// Mean counts of non-edge behavioral entries per user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseRates {
    pub uploader_self_likes: f64,
    pub uploader_self_playlist: f64,
    pub uploader_external: f64,
    pub commenter_self: f64,
    pub commenter_external: f64,
}

impl Default for NoiseRates {
    fn default() -> Self {
        NoiseRates {
            uploader_self_likes: 0.7,
            uploader_self_playlist: 2.0,
            uploader_external: 3.0,
            commenter_self: 0.05,
            commenter_external: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_uploaders: usize,
    pub n_commenters: usize,
    pub videos_per_uploader: CountRange,
    /// Exact corpus video total; extra videos go to a random fifth of the
    /// uploaders.
    pub n_videos: Option<usize>,
    pub comments_per_video: CountRange,
    pub unsafe_uploader_fraction: f64,
    /// Fraction of comments carrying a bad word, used when no exact plant is
    /// given.
    pub unsafe_comment_rate: f64,
    pub bad_comment_plant: Option<BadCommentPlant>,
    pub signal: SignalStrength,
    /// Unsafe uploaders' subscriber, view and circle counts are drawn below
    /// matched safe quantiles.
    pub popularity_ordering: bool,
    pub community: Option<CommunityPlan>,
    pub related: RelatedPlan,
    pub noise: NoiseRates,
    pub video_cap: usize,
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        let cfg_err = |m: String| Err(SynthError::Config(m));
        if self.n_uploaders == 0 {
            return cfg_err("n_uploaders must be positive".into());
        }
        for (name, r) in [
            ("videos_per_uploader", self.videos_per_uploader),
            ("comments_per_video", self.comments_per_video),
        ] {
            if r.min > r.max {
                return cfg_err(format!("{name} range {}..={} is empty", r.min, r.max));
            }
        }
        if self.videos_per_uploader.min == 0 {
            return cfg_err("every uploader needs at least one video".into());
        }
        if self.video_cap == 0 || self.videos_per_uploader.max > self.video_cap {
            return cfg_err(format!(
                "videos_per_uploader max {} exceeds video_cap {}",
                self.videos_per_uploader.max, self.video_cap
            ));
        }
        if let Some(n) = self.n_videos {
            let (lo, hi) = (
                self.n_uploaders * self.videos_per_uploader.min,
                self.n_uploaders * self.videos_per_uploader.max,
            );
            if !(lo..=hi).contains(&n) {
                return cfg_err(format!("n_videos {n} outside feasible {lo}..={hi}"));
            }
        }
        for (name, p) in [
            ("unsafe_uploader_fraction", self.unsafe_uploader_fraction),
            ("unsafe_comment_rate", self.unsafe_comment_rate),
            ("related.p_seed", self.related.p_seed),
            ("related.homophily", self.related.homophily),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return cfg_err(format!("{name} = {p} is not in [0, 1]"));
            }
        }
        for s in [self.signal.video, self.signal.user, self.signal.comment] {
            if !s.is_finite() || s < 0.0 {
                return cfg_err(format!(
                    "signal strength {s} must be finite and nonnegative"
                ));
            }
        }
        let rates = [
            self.noise.uploader_self_likes,
            self.noise.uploader_self_playlist,
            self.noise.uploader_external,
            self.noise.commenter_self,
            self.noise.commenter_external,
        ];
        if rates.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return cfg_err("noise rates must be finite and nonnegative".into());
        }
        if let Some(p) = self.bad_comment_plant {
            if p.authors > p.comments
                || p.authors > self.n_commenters
                || (p.comments > 0 && p.authors == 0)
            {
                return cfg_err(format!(
                    "cannot plant {} bad comments by {} of {} commenters",
                    p.comments, p.authors, self.n_commenters
                ));
            }
        }
        if let Some(plan) = &self.community {
            plan.validate()?;
            let seeds = self.n_uploaders + self.n_commenters;
            if plan.n_nodes() > seeds {
                return cfg_err(format!(
                    "community sizes total {} but only {seeds} users exist",
                    plan.n_nodes()
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedVideo {
    pub video_id: String,
    pub label: Safety,
    pub shifted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedUploader {
    pub user_id: String,
    pub unsafe_: bool,
    pub n_scored: usize,
    pub n_unsafe: usize,
    pub ratio: f64,
    pub grade: Grade,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlantedEdge {
    pub src: String,
    pub dst: String,
    pub relation: Relation,
}

/// Everything the generator planted, as a sidecar to the corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub format_version: u32,
    pub seed: u64,
    pub videos: Vec<PlantedVideo>,
    pub uploaders: Vec<PlantedUploader>,
    pub bad_comment_ids: Vec<String>,
    pub unsafe_commenters: BTreeSet<String>,
    pub communities: Vec<Vec<String>>,
    pub behavior_edges: Vec<PlantedEdge>,
    pub tallies: BehaviorTallies,
}

impl GroundTruth {
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("ground truth serializes");
        s.push('\n');
        s
    }

    pub fn from_json_str(text: &str) -> Result<GroundTruth, SynthError> {
        let truth: GroundTruth = serde_json::from_str(text).map_err(|e| SynthError::TruthFile {
            path: "<text>".into(),
            message: e.to_string(),
        })?;
        if truth.format_version != TRUTH_FORMAT_VERSION {
            return Err(SynthError::TruthFile {
                path: "<text>".into(),
                message: format!("unsupported format_version {}", truth.format_version),
            });
        }
        Ok(truth)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<GroundTruth, SynthError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| SynthError::TruthFile {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        GroundTruth::from_json_str(&text)
    }

    /// Planted safety of each seed user: uploaders by planted grade,
    /// commenters by bad-comment authorship.
    pub fn user_safety(&self, user_id: &str) -> Safety {
        let uploader = self
            .uploaders
            .iter()
            .find(|u| u.user_id == user_id)
            .is_some_and(|u| u.grade != Grade::Safe);
        Safety::from_bool(uploader || self.unsafe_commenters.contains(user_id))
    }
}

fn stream(cfg: &SynthConfig, phase: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stage_seed(cfg.seed, phase))
}

fn z(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn log_normal(mu: f64, sigma: f64, latent: f64) -> u64 {
    (mu + sigma * latent).exp().round() as u64
}

fn poisson(lambda: f64, rng: &mut ChaCha8Rng) -> usize {
    if lambda <= 0.0 {
        return 0;
    }
    Poisson::new(lambda).expect("positive rate").sample(rng) as usize
}

fn clamp_round(x: f64, lo: usize, hi: usize) -> usize {
    (x.round().max(lo as f64) as usize).min(hi)
}

/// Per-uploader plan before any record is built.
struct UploaderPlan {
    id: String,
    unsafe_: bool,
    video_labels: Vec<bool>,
}

fn plan_uploaders(cfg: &SynthConfig, rng: &mut ChaCha8Rng) -> Vec<UploaderPlan> {
    let n = cfg.n_uploaders;
    let range = cfg.videos_per_uploader;
    let mut counts: Vec<usize> = match cfg.n_videos {
        None => (0..n).map(|_| range.sample(rng)).collect(),
        Some(total) => {
            let mut counts = vec![range.min; n];
            let mut extra = total - n * range.min;
            let mut active: Vec<usize> = (0..n).collect();
            active.shuffle(rng);
            active.truncate(n.div_ceil(5).max(1));
            while extra > 0 {
                active.retain(|&i| counts[i] < range.max);
                if active.is_empty() {
                    // the fifth is saturated; spill onto everyone else
                    active = (0..n).filter(|&i| counts[i] < range.max).collect();
                }
                let &i = active
                    .choose(rng)
                    .expect("feasible total checked by validate");
                counts[i] += 1;
                extra -= 1;
            }
            counts
        }
    };
    let n_unsafe = (cfg.unsafe_uploader_fraction * n as f64).round() as usize;
    let mut is_unsafe: Vec<bool> = (0..n).map(|i| i < n_unsafe).collect();
    is_unsafe.shuffle(rng);
    let width = n.to_string().len().max(4);
    (0..n)
        .map(|i| {
            let v = std::mem::take(&mut counts[i]);
            // ratio >= 1/3 iff 3j >= v
            let threshold = v.div_ceil(3);
            let j = if is_unsafe[i] {
                rng.random_range(threshold..=v)
            } else if threshold == 0 {
                0
            } else {
                rng.random_range(0..threshold)
            };
            let mut video_labels: Vec<bool> = (0..v).map(|k| k < j).collect();
            video_labels.shuffle(rng);
            UploaderPlan {
                id: format!("up{i:0width$}"),
                unsafe_: is_unsafe[i],
                video_labels,
            }
        })
        .collect()
}

/// Sign of each latent video shift for unsafe videos.
const VIDEO_SIGNS: [f64; 9] = [-1.0, -1.0, 1.0, -1.0, 1.0, -1.0, -1.0, -1.0, -1.0];

fn video_record(
    id: String,
    uploader: &str,
    unsafe_: bool,
    cfg: &SynthConfig,
    vocab: &Vocab,
    rng: &mut ChaCha8Rng,
) -> VideoRecord {
    let s = if unsafe_ { cfg.signal.video } else { 0.0 };
    let lat: Vec<f64> = VIDEO_SIGNS.iter().map(|sign| z(rng) + sign * s).collect();
    let views = log_normal(8.0, 1.5, lat[0]).max(1);
    let likes = (views as f64 * (-3.5 + 0.5 * lat[1]).exp()).round() as u64;
    let dislikes = (views as f64 * (-5.0 + 0.5 * lat[2]).exp()).round() as u64;
    let declared_comments = log_normal(3.5, 0.8, lat[3]);
    let duration = log_normal(5.5, 0.7, lat[4]).max(1);
    let age = log_normal(6.0, 0.8, lat[5]).max(1);
    let title_words = clamp_round(6.0 + 2.0 * lat[6], 1, 20);
    let desc_words = clamp_round(30.0 + 15.0 * lat[7], 0, 120);
    let shared = clamp_round(2.0 + 1.5 * lat[8], 0, title_words);
    let boost = s.exp();
    let title = text::title(
        &TitleSpec {
            words: title_words,
            bad_words: poisson(0.1 * boost, rng),
            adult_tag: rng.random_bool((0.03 * (1.5 * s).exp()).min(0.6)),
        },
        vocab,
        rng,
    );
    let description = text::description(
        &DescriptionSpec {
            words: desc_words,
            shared_with_title: shared,
            bad_words: poisson(0.1 * boost, rng),
            questions: poisson(0.8 * boost, rng),
            links: poisson(1.2 * boost, rng),
            emoticons: poisson(1.0 / boost, rng),
        },
        &title,
        vocab,
        rng,
    );
    VideoRecord {
        video_id: id,
        uploader_id: uploader.to_string(),
        title: title.join(" "),
        description,
        duration_s: duration,
        age_days: age,
        view_count: views,
        like_count: likes,
        dislike_count: dislikes,
        comment_count: declared_comments,
        video_type: rng.random_range(0..10),
        related_ids: Vec::new(),
        label: Some(Safety::from_bool(unsafe_)),
    }
}

/// Values below matched safe quantiles: unsafe value `k` (0-based) is at most
/// the safe order statistic of 0-based rank `floor(k·n_safe/n_unsafe)`, so the
/// unsafe ECDF dominates the safe one pointwise.
fn dominated(safe: &[u64], n_unsafe: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut sorted = safe.to_vec();
    sorted.sort_unstable();
    (0..n_unsafe)
        .map(|k| {
            let cap = if sorted.is_empty() {
                0
            } else {
                sorted[k * sorted.len() / n_unsafe]
            };
            (rng.random_range(0.2..1.0) * cap as f64).floor() as u64
        })
        .collect()
}

fn uploader_records(
    plans: &[UploaderPlan],
    cfg: &SynthConfig,
    rng: &mut ChaCha8Rng,
) -> Vec<UserRecord> {
    let mut records: Vec<UserRecord> = plans
        .iter()
        .map(|p| {
            let s = if p.unsafe_ { cfg.signal.user } else { 0.0 };
            let lat: Vec<f64> = (0..9).map(|_| z(rng)).collect();
            let shift = |k: usize| lat[k] - s;
            UserRecord {
                user_id: p.id.clone(),
                roles: vec![Role::Uploader],
                total_videos: p.video_labels.len() as u64 + log_normal(2.0, 1.0, shift(0)),
                total_views: log_normal(10.0, 1.8, lat[1]),
                total_comments: log_normal(5.0, 1.2, shift(2)),
                subscriber_count: log_normal(6.0, 1.5, lat[3]),
                channel_title: text::phrase(clamp_round(3.0 - 1.5 * shift(4), 1, 10), rng),
                channel_description: text::phrase(clamp_round(20.0 + 12.0 * shift(5), 0, 80), rng),
                age_days: log_normal(6.5, 0.7, shift(6)).max(1),
                circled_by_count: rng.random_bool(0.85).then(|| log_normal(3.0, 1.2, lat[7])),
                plus_one_count: rng
                    .random_bool(0.85)
                    .then(|| log_normal(2.0, 1.0, shift(8))),
                liked_video_ids: Vec::new(),
                playlist_video_ids: Vec::new(),
                subscribed_user_ids: Vec::new(),
            }
        })
        .collect();
    if cfg.popularity_ordering {
        let (unsafe_idx, safe_idx): (Vec<usize>, Vec<usize>) =
            (0..plans.len()).partition(|&i| plans[i].unsafe_);
        let metrics: [fn(&mut UserRecord) -> &mut u64; 2] =
            [|u| &mut u.subscriber_count, |u| &mut u.total_views];
        for get in metrics {
            let safe: Vec<u64> = safe_idx.iter().map(|&i| *get(&mut records[i])).collect();
            for (&i, v) in unsafe_idx
                .iter()
                .zip(dominated(&safe, unsafe_idx.len(), rng))
            {
                *get(&mut records[i]) = v;
            }
        }
        let safe: Vec<u64> = safe_idx
            .iter()
            .map(|&i| records[i].circled_by_count.unwrap_or(0))
            .collect();
        for (&i, v) in unsafe_idx
            .iter()
            .zip(dominated(&safe, unsafe_idx.len(), rng))
        {
            records[i].circled_by_count = Some(v);
        }
    }
    records
}

struct CommentPlan {
    video: usize,
    author: usize,
    bad: bool,
}

fn plan_comments(
    cfg: &SynthConfig,
    video_unsafe: &[bool],
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<CommentPlan>, BTreeSet<usize>), SynthError> {
    let mut slots: Vec<CommentPlan> = Vec::new();
    for (v, _) in video_unsafe.iter().enumerate() {
        for _ in 0..cfg.comments_per_video.sample(rng) {
            slots.push(CommentPlan {
                video: v,
                author: usize::MAX,
                bad: false,
            });
        }
    }
    let n_c = cfg.n_commenters;
    if slots.len() < n_c {
        return Err(SynthError::Config(format!(
            "{} comments cannot give each of {n_c} commenters one comment",
            slots.len()
        )));
    }
    if n_c == 0 && !slots.is_empty() {
        return Err(SynthError::Config(
            "comments need at least one commenter".into(),
        ));
    }
    let n_bad = match cfg.bad_comment_plant {
        Some(p) => p.comments,
        None => (cfg.unsafe_comment_rate * slots.len() as f64).round() as usize,
    };
    if n_bad > slots.len() {
        return Err(SynthError::Config(format!(
            "cannot plant {n_bad} bad comments among {} comments",
            slots.len()
        )));
    }
    let weight_unsafe = 1.0 + cfg.signal.comment;
    let bad_idx = index::sample_weighted(
        rng,
        slots.len(),
        |i| {
            if video_unsafe[slots[i].video] {
                weight_unsafe
            } else {
                1.0
            }
        },
        n_bad,
    )
    .map_err(|e| SynthError::Config(format!("bad comment sampling: {e}")))?;
    let mut bad_idx: Vec<usize> = bad_idx.into_vec();
    bad_idx.shuffle(rng);
    for &i in &bad_idx {
        slots[i].bad = true;
    }
    if n_c == 0 {
        return Ok((slots, BTreeSet::new()));
    }
    let heavy = WeightedIndex::new((0..n_c).map(|i| 1.0 / ((i + 1) as f64).powf(1.1)))
        .expect("positive weights");
    let mut order: Vec<usize> = (0..n_c).collect();
    order.shuffle(rng);
    let mut unsafe_authors = BTreeSet::new();
    let mut clean: Vec<usize> = (0..slots.len()).filter(|&i| !slots[i].bad).collect();
    clean.shuffle(rng);
    match cfg.bad_comment_plant {
        Some(p) => {
            let (bad_authors, good_authors) = order.split_at(p.authors);
            if clean.len() < good_authors.len() {
                return Err(SynthError::Config(format!(
                    "{} clean comments cannot cover {} clean commenters",
                    clean.len(),
                    good_authors.len()
                )));
            }
            for (k, &i) in bad_idx.iter().enumerate() {
                let a = bad_authors
                    .get(k)
                    .copied()
                    .unwrap_or_else(|| *bad_authors.choose(rng).expect("authors > 0"));
                slots[i].author = a;
                unsafe_authors.insert(a);
            }
            for (k, &i) in clean.iter().enumerate() {
                slots[i].author = match good_authors.get(k) {
                    Some(&a) => a,
                    None => heavy.sample(rng),
                };
            }
        }
        None => {
            let mut all: Vec<usize> = (0..slots.len()).collect();
            all.shuffle(rng);
            for (k, &i) in all.iter().enumerate() {
                slots[i].author = order.get(k).copied().unwrap_or_else(|| heavy.sample(rng));
                if slots[i].bad {
                    unsafe_authors.insert(slots[i].author);
                }
            }
        }
    }
    Ok((slots, unsafe_authors))
}

fn comment_record(
    id: String,
    video: &VideoRecord,
    author: &str,
    bad: bool,
    s: f64,
    vocab: &Vocab,
    rng: &mut ChaCha8Rng,
) -> CommentRecord {
    let p_neg = (0.15 + 0.12 * s).min(0.6);
    let p_pos = (0.45 - 0.12 * s).max(0.05);
    let u: f64 = rng.random();
    let tone = if u < p_neg {
        Tone::Negative
    } else if u < p_neg + p_pos {
        Tone::Positive
    } else {
        Tone::Neutral
    };
    CommentRecord {
        comment_id: id,
        video_id: video.video_id.clone(),
        author_id: author.to_string(),
        text: text::comment(tone, bad, vocab, rng),
        like_count: poisson((0.5 - 0.4 * s).exp(), rng) as u64,
        reply_count: poisson((-0.7 - 0.4 * s).exp(), rng) as u64,
        sentiment: None,
    }
}

fn wire_related(videos: &mut [VideoRecord], cfg: &SynthConfig, rng: &mut ChaCha8Rng) {
    let by_label: [Vec<usize>; 2] = [Safety::Safe, Safety::Unsafe].map(|l| {
        (0..videos.len())
            .filter(|&i| videos[i].label == Some(l))
            .collect()
    });
    let mut external = 0usize;
    for i in 0..videos.len() {
        let own = videos[i]
            .label
            .expect("synthetic videos are labeled")
            .as_index();
        let mut seen = BTreeSet::new();
        let mut refs = Vec::with_capacity(cfg.related.per_video);
        for _ in 0..cfg.related.per_video {
            let mut picked = None;
            if rng.random_bool(cfg.related.p_seed) {
                let side = if rng.random_bool(cfg.related.homophily) {
                    own
                } else {
                    1 - own
                };
                if let Some(&j) = by_label[side].choose(rng) {
                    if j != i && seen.insert(j) {
                        picked = Some(Reference::internal(videos[j].video_id.clone()));
                    }
                }
            }
            refs.push(picked.unwrap_or_else(|| {
                external += 1;
                Reference::external(format!("rel{external:07}"))
            }));
        }
        videos[i].related_ids = refs;
    }
}

/// Seed user roster shared by the behavior plant and the tallies.
struct Roster<'a> {
    ids: Vec<&'a str>,
    is_uploader: Vec<bool>,
    own_videos: Vec<Vec<&'a str>>,
}

fn empty_tallies(n_up: usize, n_cm: usize) -> BehaviorTallies {
    BehaviorTallies {
        seed_uploaders: n_up,
        seed_commenters: n_cm,
        tallies: [[RelationTally::default(); 2]; 3],
    }
}

fn slot(rel: Relation) -> usize {
    Relation::BEHAVIORS
        .iter()
        .position(|&r| r == rel)
        .expect("behavior relation")
}

struct BehaviorPlant {
    lists: Vec<[Vec<Reference>; 3]>,
    communities: Vec<Vec<String>>,
    edges: Vec<PlantedEdge>,
    tallies: BehaviorTallies,
}

fn plant_behavior(roster: &Roster, cfg: &SynthConfig, rng: &mut ChaCha8Rng) -> BehaviorPlant {
    let n = roster.ids.len();
    let n_up = roster.is_uploader.iter().filter(|&&u| u).count();
    let mut lists: Vec<[Vec<Reference>; 3]> = (0..n).map(|_| Default::default()).collect();
    let mut tallies = empty_tallies(n_up, n - n_up);
    let mut ext_counter = 0usize;
    let mut next_external = |rng: &mut ChaCha8Rng, video: bool| {
        ext_counter += 1;
        if video && rng.random_bool(0.5) {
            Reference::external_owned(
                format!("xv{ext_counter:08}"),
                format!("xu{:06}", rng.random_range(0..50_000)),
            )
        } else if video {
            Reference::external(format!("xv{ext_counter:08}"))
        } else {
            Reference::external(format!("xu{ext_counter:08}"))
        }
    };
    let mut owned_counter = vec![0usize; n];
    // a video of `owner` for a like/playlist entry; never repeats within a list
    let mut video_of =
        |owner: usize, used: &mut BTreeSet<String>, rng: &mut ChaCha8Rng| -> Option<Reference> {
            if roster.is_uploader[owner] {
                let free: Vec<&&str> = roster.own_videos[owner]
                    .iter()
                    .filter(|v| !used.contains(**v))
                    .collect();
                let &&v = free.choose(rng)?;
                used.insert(v.to_string());
                Some(Reference::internal(v))
            } else {
                owned_counter[owner] += 1;
                let id = format!("ov-{}-{}", roster.ids[owner], owned_counter[owner]);
                used.insert(id.clone());
                Some(Reference::external_owned(id, roster.ids[owner]))
            }
        };
    let mut used: Vec<[BTreeSet<String>; 3]> = (0..n).map(|_| Default::default()).collect();
    let mut communities = Vec::new();
    let mut edges = Vec::new();
    if let Some(plan) = &cfg.community {
        let members: Vec<usize> = index::sample(rng, n, plan.n_nodes()).into_vec();
        let mut at = 0;
        for &s in &plan.sizes {
            communities.push(
                members[at..at + s]
                    .iter()
                    .map(|&m| roster.ids[m].to_string())
                    .collect(),
            );
            at += s;
        }
        for (a, b) in plant::sample_pairs(plan, rng) {
            let (mut src, mut dst) = (members[a], members[b]);
            if rng.random_bool(0.5) {
                std::mem::swap(&mut src, &mut dst);
            }
            let mut rel = *Relation::BEHAVIORS.choose(rng).expect("nonempty");
            let entry = if rel == Relation::Subscribe {
                Some(Reference::internal(roster.ids[dst]))
            } else {
                let r = video_of(dst, &mut used[src][slot(rel)], rng);
                if r.is_none() {
                    // every video of dst is already listed; fall back to a subscription
                    rel = Relation::Subscribe;
                    Some(Reference::internal(roster.ids[dst]))
                } else {
                    r
                }
            };
            let entry = entry.expect("entry chosen");
            if rel == Relation::Subscribe && lists[src][slot(rel)].contains(&entry) {
                continue;
            }
            lists[src][slot(rel)].push(entry);
            let t = &mut tallies.tallies[slot(rel)][(!roster.is_uploader[src]) as usize];
            t.total += 1;
            if roster.is_uploader[dst] {
                t.to_uploaders += 1;
            } else {
                t.to_commenters += 1;
            }
            edges.push(PlantedEdge {
                src: roster.ids[src].to_string(),
                dst: roster.ids[dst].to_string(),
                relation: rel,
            });
        }
    }
    let nz = cfg.noise;
    for u in 0..n {
        let up = roster.is_uploader[u];
        let role = (!up) as usize;
        let self_rates = if up {
            [nz.uploader_self_likes, 0.0, nz.uploader_self_playlist]
        } else {
            [nz.commenter_self, 0.0, nz.commenter_self]
        };
        let ext_rate = if up {
            nz.uploader_external
        } else {
            nz.commenter_external
        };
        for rel in Relation::BEHAVIORS {
            let k = slot(rel);
            for _ in 0..poisson(self_rates[k], rng) {
                if let Some(r) = video_of(u, &mut used[u][k], rng) {
                    lists[u][k].push(r);
                    tallies.tallies[k][role].total += 1;
                    tallies.tallies[k][role].self_ += 1;
                }
            }
            for _ in 0..poisson(ext_rate, rng) {
                lists[u][k].push(next_external(rng, rel != Relation::Subscribe));
                tallies.tallies[k][role].total += 1;
                tallies.tallies[k][role].external += 1;
            }
        }
    }
    BehaviorPlant {
        lists,
        communities,
        edges,
        tallies,
    }
}

/// Builds a corpus and its ground truth from `cfg`.
pub fn generate(cfg: &SynthConfig) -> Result<(Corpus, GroundTruth), SynthError> {
    cfg.validate()?;
    let lex = Lexicon::builtin();
    let vocab = Vocab::from_lexicon(&lex);

    let mut rng = stream(cfg, "synth/uploaders");
    let plans = plan_uploaders(cfg, &mut rng);

    let mut rng = stream(cfg, "synth/videos");
    let n_videos: usize = plans.iter().map(|p| p.video_labels.len()).sum();
    let vwidth = n_videos.to_string().len().max(4);
    let mut videos = Vec::with_capacity(n_videos);
    for p in &plans {
        for &u in &p.video_labels {
            let id = format!("vid{:0vwidth$}", videos.len());
            videos.push(video_record(id, &p.id, u, cfg, &vocab, &mut rng));
        }
    }
    let mut rng = stream(cfg, "synth/related");
    wire_related(&mut videos, cfg, &mut rng);

    let mut rng = stream(cfg, "synth/comments");
    let video_unsafe: Vec<bool> = videos
        .iter()
        .map(|v| v.label == Some(Safety::Unsafe))
        .collect();
    let (slots, unsafe_authors) = plan_comments(cfg, &video_unsafe, &mut rng)?;
    let cwidth = cfg.n_commenters.to_string().len().max(5);
    let commenter_ids: Vec<String> = (0..cfg.n_commenters)
        .map(|i| format!("cm{i:0cwidth$}"))
        .collect();
    let mut comments = Vec::with_capacity(slots.len());
    let mut bad_comment_ids = Vec::new();
    let mut per_video = vec![0u64; videos.len()];
    let mut per_author = vec![0u64; cfg.n_commenters];
    let kwidth = slots.len().to_string().len().max(6);
    for (k, slot) in slots.iter().enumerate() {
        let id = format!("c{k:0kwidth$}");
        let s = if video_unsafe[slot.video] {
            cfg.signal.comment
        } else {
            0.0
        };
        let v = &videos[slot.video];
        if slot.bad {
            bad_comment_ids.push(id.clone());
        }
        per_video[slot.video] += 1;
        per_author[slot.author] += 1;
        comments.push(comment_record(
            id,
            v,
            &commenter_ids[slot.author],
            slot.bad,
            s,
            &vocab,
            &mut rng,
        ));
    }
    for (v, n) in videos.iter_mut().zip(&per_video) {
        v.comment_count = v.comment_count.max(*n);
    }

    let mut rng = stream(cfg, "synth/users");
    let mut users = uploader_records(&plans, cfg, &mut rng);
    for (i, id) in commenter_ids.iter().enumerate() {
        users.push(UserRecord {
            user_id: id.clone(),
            roles: vec![Role::Commenter],
            total_videos: 0,
            total_views: 0,
            total_comments: per_author[i],
            subscriber_count: log_normal(1.0, 1.5, z(&mut rng)),
            channel_title: String::new(),
            channel_description: String::new(),
            age_days: log_normal(6.0, 0.8, z(&mut rng)).max(1),
            circled_by_count: None,
            plus_one_count: None,
            liked_video_ids: Vec::new(),
            playlist_video_ids: Vec::new(),
            subscribed_user_ids: Vec::new(),
        });
    }

    let mut rng = stream(cfg, "synth/behavior");
    let mut own_videos: IndexMap<&str, Vec<&str>> = IndexMap::new();
    for v in &videos {
        own_videos
            .entry(v.uploader_id.as_str())
            .or_default()
            .push(v.video_id.as_str());
    }
    let roster = Roster {
        ids: users.iter().map(|u| u.user_id.as_str()).collect(),
        is_uploader: users.iter().map(|u| u.has_role(Role::Uploader)).collect(),
        own_videos: users
            .iter()
            .map(|u| {
                own_videos
                    .get(u.user_id.as_str())
                    .cloned()
                    .unwrap_or_default()
            })
            .collect(),
    };
    let plant = plant_behavior(&roster, cfg, &mut rng);
    drop(roster);
    for (u, [likes, subs, playlist]) in users.iter_mut().zip(plant.lists) {
        u.liked_video_ids = likes;
        u.subscribed_user_ids = subs;
        u.playlist_video_ids = playlist;
    }

    let thresholds = GradeThresholds::default();
    let uploaders = plans
        .iter()
        .map(|p| {
            let n_scored = p.video_labels.len().min(cfg.video_cap);
            let n_unsafe = p.video_labels[..n_scored].iter().filter(|&&u| u).count();
            let ratio = n_unsafe as f64 / n_scored as f64;
            PlantedUploader {
                user_id: p.id.clone(),
                unsafe_: p.unsafe_,
                n_scored,
                n_unsafe,
                ratio,
                grade: grade(ratio, &thresholds).expect("ratio in range"),
            }
        })
        .collect();
    let truth = GroundTruth {
        format_version: TRUTH_FORMAT_VERSION,
        seed: cfg.seed,
        videos: videos
            .iter()
            .map(|v| PlantedVideo {
                video_id: v.video_id.clone(),
                label: v.label.expect("labeled"),
                shifted: v.label == Some(Safety::Unsafe) && cfg.signal.video > 0.0,
            })
            .collect(),
        uploaders,
        bad_comment_ids,
        unsafe_commenters: unsafe_authors
            .iter()
            .map(|&a| commenter_ids[a].clone())
            .collect(),
        communities: plant.communities,
        behavior_edges: plant.edges,
        tallies: plant.tallies,
    };
    let corpus = Corpus::from_records(videos, users, comments)?;
    Ok((corpus, truth))
}

/// Seed-user safety per planted truth, in the order of `ids`.
pub fn planted_user_safety<'a>(
    truth: &GroundTruth,
    ids: impl IntoIterator<Item = &'a str>,
) -> Vec<Safety> {
    ids.into_iter().map(|id| truth.user_safety(id)).collect()
}
