use super::{
    BadCommentPlant, CommunityPlan, CountRange, NoiseRates, RelatedPlan, SignalStrength,
    SynthConfig, SynthError,
};
use crate::detect::DEFAULT_VIDEO_CAP;

pub const PRESET_NAMES: [&str; 3] = ["tiny", "paper-scale", "stress"];

/// Named configuration with the given seed.
///
/// - `tiny`: a dozen uploaders, for smoke runs.
/// - `paper-scale`: 408 videos by 275 uploaders, 19,099 commenters, about
///   21k comments, and 1,814 bad comments by 1,755 authors.
/// - `stress`: 10⁴ seed users joined by about 10⁵ planted behavior edges.
pub fn preset(name: &str, seed: u64) -> Result<SynthConfig, SynthError> {
    let base = SynthConfig {
        seed,
        n_uploaders: 12,
        n_commenters: 60,
        videos_per_uploader: CountRange::new(1, 3),
        n_videos: None,
        comments_per_video: CountRange::new(4, 10),
        unsafe_uploader_fraction: 0.35,
        unsafe_comment_rate: 0.05,
        bad_comment_plant: None,
        signal: SignalStrength::default(),
        popularity_ordering: true,
        community: Some(CommunityPlan {
            sizes: vec![8, 8, 8],
            p_in: 0.5,
            p_out: 0.02,
        }),
        related: RelatedPlan::default(),
        noise: NoiseRates::default(),
        video_cap: DEFAULT_VIDEO_CAP,
    };
    match name {
        "tiny" => Ok(base),
        "paper-scale" => Ok(SynthConfig {
            n_uploaders: 275,
            n_commenters: 19_099,
            videos_per_uploader: CountRange::new(1, 6),
            n_videos: Some(408),
            comments_per_video: CountRange::new(30, 74),
            unsafe_uploader_fraction: 0.3,
            bad_comment_plant: Some(BadCommentPlant {
                comments: 1814,
                authors: 1755,
            }),
            community: Some(CommunityPlan {
                sizes: vec![40; 10],
                p_in: 0.15,
                p_out: 0.002,
            }),
            ..base
        }),
        "stress" => Ok(SynthConfig {
            n_uploaders: 2_000,
            n_commenters: 8_000,
            videos_per_uploader: CountRange::new(1, 2),
            comments_per_video: CountRange::new(3, 6),
            community: Some(CommunityPlan {
                sizes: vec![100; 100],
                p_in: 0.18,
                p_out: 0.0002,
            }),
            related: RelatedPlan {
                per_video: 10,
                ..RelatedPlan::default()
            },
            noise: NoiseRates {
                uploader_external: 1.0,
                commenter_external: 0.3,
                ..NoiseRates::default()
            },
            ..base
        }),
        other => Err(SynthError::Config(format!(
            "unknown preset {other:?}; expected one of {}",
            PRESET_NAMES.join(", ")
        ))),
    }
}
