use super::records::{CommentRecord, Corpus, Reference, Role, UserRecord, VideoRecord};
use super::CorpusError;
use indexmap::{IndexMap, IndexSet};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Current corpus file format version.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CorpusFile {
    format_version: u32,
    videos: Vec<VideoRecord>,
    users: Vec<UserRecord>,
    #[serde(default)]
    comments: Vec<CommentRecord>,
}

impl Corpus {
    /// Builds a corpus from records, checking every invariant.
    pub fn from_records(
        videos: Vec<VideoRecord>,
        users: Vec<UserRecord>,
        comments: Vec<CommentRecord>,
    ) -> Result<Corpus, CorpusError> {
        let mut user_map = IndexMap::with_capacity(users.len());
        for (i, u) in users.into_iter().enumerate() {
            if u.user_id.is_empty() {
                return Err(CorpusError::integrity(
                    format!("users[{i}]"),
                    "empty user_id",
                ));
            }
            if user_map.contains_key(&u.user_id) {
                return Err(CorpusError::integrity(
                    u.user_id.clone(),
                    format!("duplicate user_id {:?}", u.user_id),
                ));
            }
            user_map.insert(u.user_id.clone(), u);
        }

        let mut video_map = IndexMap::with_capacity(videos.len());
        for (i, v) in videos.into_iter().enumerate() {
            if v.video_id.is_empty() {
                return Err(CorpusError::integrity(
                    format!("videos[{i}]"),
                    "empty video_id",
                ));
            }
            if video_map.contains_key(&v.video_id) {
                return Err(CorpusError::integrity(
                    v.video_id.clone(),
                    format!("duplicate video_id {:?}", v.video_id),
                ));
            }
            video_map.insert(v.video_id.clone(), v);
        }

        let mut videos_by_uploader: IndexMap<String, Vec<String>> = IndexMap::new();
        for v in video_map.values() {
            let Some(owner) = user_map.get(&v.uploader_id) else {
                return Err(CorpusError::integrity(
                    v.video_id.clone(),
                    format!(
                        "uploader {:?} of video {:?} does not resolve",
                        v.uploader_id, v.video_id
                    ),
                ));
            };
            if !owner.has_role(Role::Uploader) {
                return Err(CorpusError::integrity(
                    v.uploader_id.clone(),
                    format!(
                        "user {:?} uploads {:?} but lacks the uploader role",
                        v.uploader_id, v.video_id
                    ),
                ));
            }
            let mut seen = IndexSet::new();
            for r in &v.related_ids {
                if r.id == v.video_id {
                    return Err(CorpusError::integrity(
                        v.video_id.clone(),
                        format!("video {:?} lists itself as related", v.video_id),
                    ));
                }
                if !seen.insert(r.id.as_str()) {
                    return Err(CorpusError::integrity(
                        v.video_id.clone(),
                        format!("video {:?} lists related {:?} twice", v.video_id, r.id),
                    ));
                }
                check_video_ref(&video_map, &v.video_id, r)?;
            }
            videos_by_uploader
                .entry(v.uploader_id.clone())
                .or_default()
                .push(v.video_id.clone());
        }

        for u in user_map.values() {
            for r in u.liked_video_ids.iter().chain(&u.playlist_video_ids) {
                check_video_ref(&video_map, &u.user_id, r)?;
            }
            for r in &u.subscribed_user_ids {
                if r.id == u.user_id {
                    return Err(CorpusError::integrity(
                        u.user_id.clone(),
                        format!("user {:?} subscribes to itself", u.user_id),
                    ));
                }
                if !r.external && !user_map.contains_key(&r.id) {
                    return Err(CorpusError::integrity(
                        u.user_id.clone(),
                        format!(
                            "subscription {:?} of user {:?} does not resolve",
                            r.id, u.user_id
                        ),
                    ));
                }
            }
        }

        let mut comment_ids = IndexSet::with_capacity(comments.len());
        let mut comments_by_video: IndexMap<String, Vec<usize>> = IndexMap::new();
        for (i, c) in comments.iter().enumerate() {
            if c.comment_id.is_empty() {
                return Err(CorpusError::integrity(
                    format!("comments[{i}]"),
                    "empty comment_id",
                ));
            }
            if !comment_ids.insert(c.comment_id.as_str()) {
                return Err(CorpusError::integrity(
                    c.comment_id.clone(),
                    format!("duplicate comment_id {:?}", c.comment_id),
                ));
            }
            if !video_map.contains_key(&c.video_id) {
                return Err(CorpusError::integrity(
                    c.comment_id.clone(),
                    format!(
                        "video {:?} of comment {:?} does not resolve",
                        c.video_id, c.comment_id
                    ),
                ));
            }
            let Some(author) = user_map.get(&c.author_id) else {
                return Err(CorpusError::integrity(
                    c.comment_id.clone(),
                    format!(
                        "author {:?} of comment {:?} does not resolve",
                        c.author_id, c.comment_id
                    ),
                ));
            };
            if !author.has_role(Role::Commenter) {
                return Err(CorpusError::integrity(
                    c.author_id.clone(),
                    format!(
                        "user {:?} authors {:?} but lacks the commenter role",
                        c.author_id, c.comment_id
                    ),
                ));
            }
            comments_by_video
                .entry(c.video_id.clone())
                .or_default()
                .push(i);
        }

        Ok(Corpus {
            videos: video_map,
            users: user_map,
            comments,
            comments_by_video,
            videos_by_uploader,
        })
    }

    /// Parses a corpus document.
    pub fn from_json_str(text: &str) -> Result<Corpus, CorpusError> {
        let file: CorpusFile = serde_json::from_str(text).map_err(|e| CorpusError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if file.format_version != FORMAT_VERSION {
            return Err(CorpusError::Version(file.format_version));
        }
        Corpus::from_records(file.videos, file.users, file.comments)
    }

    /// Serializes to the corpus document format. Output is a pure function of
    /// the corpus contents.
    pub fn to_json_string(&self) -> String {
        let file = CorpusFile {
            format_version: FORMAT_VERSION,
            videos: self.videos.values().cloned().collect(),
            users: self.users.values().cloned().collect(),
            comments: self.comments.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("corpus serializes");
        s.push('\n');
        s
    }
}

fn check_video_ref(
    videos: &IndexMap<String, VideoRecord>,
    holder: &str,
    r: &Reference,
) -> Result<(), CorpusError> {
    if !r.external && !videos.contains_key(&r.id) {
        return Err(CorpusError::integrity(
            holder.to_string(),
            format!(
                "video reference {:?} held by {:?} does not resolve and is not tagged external",
                r.id, holder
            ),
        ));
    }
    Ok(())
}

/// Loads and validates a corpus file.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Corpus::from_json_str(&text)
}

pub fn write_corpus(corpus: &Corpus, path: impl AsRef<Path>) -> Result<(), CorpusError> {
    let path = path.as_ref();
    std::fs::write(path, corpus.to_json_string()).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })
}
