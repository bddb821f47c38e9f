use indexmap::IndexMap;
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Safe/unsafe tag shared by video labels, verdicts and graph nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Safety {
    Safe,
    Unsafe,
}

impl Safety {
    pub fn is_unsafe(self) -> bool {
        matches!(self, Safety::Unsafe)
    }

    /// 0 for safe, 1 for unsafe.
    pub fn as_index(self) -> usize {
        match self {
            Safety::Safe => 0,
            Safety::Unsafe => 1,
        }
    }

    pub fn from_bool(is_unsafe: bool) -> Self {
        if is_unsafe {
            Safety::Unsafe
        } else {
            Safety::Safe
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Safety::Safe => "safe",
            Safety::Unsafe => "unsafe",
        }
    }
}

impl fmt::Display for Safety {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Uploader,
    Commenter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sentiment {
    Positive,
    Neutral,
    Negative,
}

/// A reference to a video or user.
///
/// In files a resolvable reference is a bare string. References to entities
/// outside the corpus are written as objects carrying `"external": true`,
/// optionally with the `owner` of an external video so that behavioral
/// reverse lookups can still attribute it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Reference {
    pub id: String,
    pub owner: Option<String>,
    pub external: bool,
}

impl Reference {
    pub fn internal(id: impl Into<String>) -> Self {
        Reference {
            id: id.into(),
            owner: None,
            external: false,
        }
    }

    pub fn external(id: impl Into<String>) -> Self {
        Reference {
            id: id.into(),
            owner: None,
            external: true,
        }
    }

    pub fn external_owned(id: impl Into<String>, owner: impl Into<String>) -> Self {
        Reference {
            id: id.into(),
            owner: Some(owner.into()),
            external: true,
        }
    }
}

impl Serialize for Reference {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.external && self.owner.is_none() {
            return serializer.serialize_str(&self.id);
        }
        let len = 2 + usize::from(self.owner.is_some());
        let mut map = serializer.serialize_map(Some(len))?;
        map.serialize_entry("id", &self.id)?;
        if let Some(owner) = &self.owner {
            map.serialize_entry("owner", owner)?;
        }
        map.serialize_entry("external", &self.external)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for Reference {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RefVisitor;

        impl<'de> Visitor<'de> for RefVisitor {
            type Value = Reference;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an id string or an {id, owner?, external} object")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Reference, E> {
                Ok(Reference::internal(v))
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Reference, A::Error> {
                let mut id = None;
                let mut owner = None;
                let mut external = None;
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "id" => id = Some(map.next_value::<String>()?),
                        "owner" => owner = map.next_value::<Option<String>>()?,
                        "external" => external = Some(map.next_value::<bool>()?),
                        other => {
                            return Err(de::Error::unknown_field(
                                other,
                                &["id", "owner", "external"],
                            ))
                        }
                    }
                }
                Ok(Reference {
                    id: id.ok_or_else(|| de::Error::missing_field("id"))?,
                    owner,
                    external: external.unwrap_or(false),
                })
            }
        }

        deserializer.deserialize_any(RefVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VideoRecord {
    pub video_id: String,
    pub uploader_id: String,
    pub title: String,
    #[serde(default)]
    pub description: String,
    pub duration_s: u64,
    pub age_days: u64,
    pub view_count: u64,
    pub like_count: u64,
    pub dislike_count: u64,
    pub comment_count: u64,
    /// Categorical video type code; 0 when unknown.
    #[serde(default)]
    pub video_type: u32,
    /// Suggested videos in suggestion order.
    #[serde(default)]
    pub related_ids: Vec<Reference>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Safety>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserRecord {
    pub user_id: String,
    pub roles: Vec<Role>,
    pub total_videos: u64,
    pub total_views: u64,
    pub total_comments: u64,
    pub subscriber_count: u64,
    #[serde(default)]
    pub channel_title: String,
    #[serde(default)]
    pub channel_description: String,
    pub age_days: u64,
    /// Social-profile counters, absent when the channel has no linked profile.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circled_by_count: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plus_one_count: Option<u64>,
    #[serde(default)]
    pub liked_video_ids: Vec<Reference>,
    #[serde(default)]
    pub playlist_video_ids: Vec<Reference>,
    #[serde(default)]
    pub subscribed_user_ids: Vec<Reference>,
}

impl UserRecord {
    pub fn has_role(&self, role: Role) -> bool {
        self.roles.contains(&role)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommentRecord {
    pub comment_id: String,
    pub video_id: String,
    pub author_id: String,
    pub text: String,
    #[serde(default)]
    pub like_count: u64,
    #[serde(default)]
    pub reply_count: u64,
    /// Precomputed sentiment; overrides the lexicon polarity when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sentiment: Option<Sentiment>,
}

/// An immutable, validated collection of videos, users and comments.
///
/// Videos and users keep file order. Comment order is file order as well;
/// per-video comment caps take a prefix of it.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Corpus {
    pub(crate) videos: IndexMap<String, VideoRecord>,
    pub(crate) users: IndexMap<String, UserRecord>,
    pub(crate) comments: Vec<CommentRecord>,
    /// Comment indices per video, in corpus order.
    pub(crate) comments_by_video: IndexMap<String, Vec<usize>>,
    /// Video ids per uploader, in corpus order.
    pub(crate) videos_by_uploader: IndexMap<String, Vec<String>>,
}

impl Corpus {
    pub fn videos(&self) -> &IndexMap<String, VideoRecord> {
        &self.videos
    }

    pub fn users(&self) -> &IndexMap<String, UserRecord> {
        &self.users
    }

    pub fn comments(&self) -> &[CommentRecord] {
        &self.comments
    }

    pub fn video(&self, id: &str) -> Option<&VideoRecord> {
        self.videos.get(id)
    }

    pub fn user(&self, id: &str) -> Option<&UserRecord> {
        self.users.get(id)
    }

    /// Comments on `video_id`, in corpus order.
    pub fn comments_of<'a>(
        &'a self,
        video_id: &str,
    ) -> impl Iterator<Item = &'a CommentRecord> + 'a {
        self.comments_by_video
            .get(video_id)
            .into_iter()
            .flatten()
            .map(move |&i| &self.comments[i])
    }

    /// Videos uploaded by `user_id`, in corpus order (newest first by convention).
    pub fn videos_of<'a>(&'a self, user_id: &str) -> impl Iterator<Item = &'a VideoRecord> + 'a {
        self.videos_by_uploader
            .get(user_id)
            .into_iter()
            .flatten()
            .map(move |id| &self.videos[id.as_str()])
    }

    /// Users owning at least one corpus video, in first-upload order.
    pub fn uploader_ids(&self) -> impl Iterator<Item = &str> {
        self.videos_by_uploader.keys().map(String::as_str)
    }

    /// Distinct comment authors in first-comment order.
    pub fn commenter_ids(&self) -> Vec<&str> {
        let mut seen = indexmap::IndexSet::new();
        for c in &self.comments {
            seen.insert(c.author_id.as_str());
        }
        seen.into_iter().collect()
    }

    /// Owner of a video reference: the corpus uploader for resolvable
    /// references, the declared owner for external ones.
    pub fn owner_of<'a>(&'a self, r: &'a Reference) -> Option<&'a str> {
        if r.external {
            r.owner.as_deref()
        } else {
            self.videos.get(&r.id).map(|v| v.uploader_id.as_str())
        }
    }
}
