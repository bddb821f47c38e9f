//! Crate-level error wrapping every module error with its module name.
//!
//! Exit codes: 2 usage, 3 data integrity, 4 numeric/parameter, 5 internal.

use crate::community::CommunityError;
use crate::corpus::CorpusError;
use crate::detect::DetectError;
use crate::features::FeatureError;
use crate::learn::LearnError;
use crate::netgraph::GraphError;
use crate::synth::SynthError;
use thiserror::Error;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_PARAM: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Features(#[from] FeatureError),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Community(#[from] CommunityError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("parameter error: {0}")]
    Param(String),
    /// Any error raised while reading a named input file.
    #[error("{path}: {source}")]
    InFile {
        path: String,
        #[source]
        source: Box<Error>,
    },
    #[error("cannot write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Name of the module that raised the error.
    pub fn module(&self) -> &'static str {
        match self {
            Error::Corpus(_) => "corpus",
            Error::Features(_) => "features",
            Error::Learn(_) => "learn",
            Error::Detect(DetectError::Features(_)) => "features",
            Error::Detect(_) => "detect",
            Error::Graph(_) => "netgraph",
            Error::Community(_) => "community",
            Error::Synth(_) => "synth",
            Error::InFile { source, .. } => source.module(),
            Error::Usage(_) | Error::Param(_) | Error::Output { .. } => "cli",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InFile { source, .. } => source.exit_code(),
            Error::Usage(_) => EXIT_USAGE,
            Error::Param(_) => EXIT_PARAM,
            Error::Output { .. } => EXIT_INTERNAL,
            Error::Corpus(CorpusError::Config(_)) => EXIT_PARAM,
            Error::Corpus(_) | Error::Features(_) => EXIT_DATA,
            Error::Learn(LearnError::Param(_) | LearnError::Dimension { .. }) => EXIT_PARAM,
            Error::Learn(_) => EXIT_DATA,
            Error::Detect(DetectError::Param(_)) => EXIT_PARAM,
            Error::Detect(_) => EXIT_DATA,
            Error::Graph(GraphError::Param(_)) => EXIT_PARAM,
            Error::Graph(_) => EXIT_DATA,
            Error::Community(CommunityError::EmptyGraph) => EXIT_DATA,
            // partitions are built internally; a coverage mismatch is a bug
            Error::Community(CommunityError::Coverage { .. }) => EXIT_INTERNAL,
            Error::Synth(SynthError::Config(_)) => EXIT_PARAM,
            Error::Synth(SynthError::TruthFile { .. }) => EXIT_DATA,
            Error::Synth(SynthError::Corpus(_)) => EXIT_INTERNAL,
        }
    }

    /// Single-line `error module=<m> code=<n> message="..."` form.
    pub fn to_line(&self) -> String {
        format!(
            "error module={} code={} message={:?}",
            self.module(),
            self.exit_code(),
            self.to_string()
        )
    }

    pub fn in_file(path: impl Into<String>, source: impl Into<Error>) -> Error {
        Error::InFile {
            path: path.into(),
            source: Box::new(source.into()),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_are_single_line_and_quoted() {
        let e = Error::from(CorpusError::Integrity {
            key: "videos[3].uploader_id".into(),
            message: "unknown user \"u9\"\nsecond line".into(),
        });
        let line = e.to_line();
        assert!(!line.contains('\n'));
        assert!(line.starts_with("error module=corpus code=3 message=\""));
        assert_eq!(Error::Usage("x".into()).exit_code(), EXIT_USAGE);
        assert_eq!(
            Error::from(GraphError::Param("th".into())).exit_code(),
            EXIT_PARAM
        );
    }
}
