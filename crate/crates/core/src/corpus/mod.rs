//! Data model for videos, users and comments, plus corpus and lexicon files.
//!
//! A corpus file is a single JSON document:
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "videos":   [ { "video_id": "v1", "uploader_id": "u1", ... } ],
//!   "users":    [ { "user_id": "u1", "roles": ["uploader"], ... } ],
//!   "comments": [ { "comment_id": "c1", "video_id": "v1", "author_id": "u2", ... } ]
//! }
//! ```
//!
//! References to videos or users outside the corpus must be tagged
//! `{"id": ..., "external": true}`; untagged references must resolve. See
//! `docs/corpus-format.md` for the full field list.

mod io;
mod lexicon;
mod records;

pub use io::{load_corpus, write_corpus, FORMAT_VERSION};
pub use lexicon::{load_lexicon, Lexicon, DEFAULT_LEXICON};
pub use records::{
    CommentRecord, Corpus, Reference, Role, Safety, Sentiment, UserRecord, VideoRecord,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported corpus format_version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error("integrity error at {key:?}: {message}")]
    Integrity { key: String, message: String },
    #[error("configuration error: {0}")]
    Config(String),
}

impl CorpusError {
    pub(crate) fn integrity(key: impl Into<String>, message: impl Into<String>) -> Self {
        CorpusError::Integrity {
            key: key.into(),
            message: message.into(),
        }
    }
}
