use super::CorpusError;
use std::collections::BTreeSet;
use std::path::Path;

/// Word lists used for ground truth and sentiment.
///
/// All entries are lowercase single tokens; positive and negative lists are
/// disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lexicon {
    pub bad_words: BTreeSet<String>,
    pub positive_words: BTreeSet<String>,
    pub negative_words: BTreeSet<String>,
}

/// Small lexicon shipped with the crate; used by the synthetic generator and
/// as the CLI default.
pub const DEFAULT_LEXICON: &str = include_str!("../../data/default_lexicon.txt");

#[derive(Clone, Copy)]
enum Section {
    Bad,
    Positive,
    Negative,
}

impl Lexicon {
    /// Parses the plain-text lexicon format: one token per line, `#bad`,
    /// `#positive` and `#negative` section headers. Lines before any header
    /// belong to the bad-word list.
    pub fn parse(text: &str) -> Result<Lexicon, CorpusError> {
        let mut lex = Lexicon::default();
        let mut section = Section::Bad;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('#') {
                section = match header.trim().to_lowercase().as_str() {
                    "bad" => Section::Bad,
                    "positive" => Section::Positive,
                    "negative" => Section::Negative,
                    other => {
                        return Err(CorpusError::Config(format!(
                            "lexicon line {}: unknown section header #{other}",
                            lineno + 1
                        )))
                    }
                };
                continue;
            }
            if line.split_whitespace().nth(1).is_some() {
                return Err(CorpusError::Config(format!(
                    "lexicon line {}: entry {line:?} contains whitespace",
                    lineno + 1
                )));
            }
            let token = line.to_lowercase();
            match section {
                Section::Bad => lex.bad_words.insert(token),
                Section::Positive => lex.positive_words.insert(token),
                Section::Negative => lex.negative_words.insert(token),
            };
        }
        if lex.bad_words.is_empty() {
            return Err(CorpusError::Config(
                "lexicon has an empty bad-word list".into(),
            ));
        }
        if let Some(w) = lex.positive_words.intersection(&lex.negative_words).next() {
            return Err(CorpusError::Config(format!(
                "lexicon word {w:?} is both positive and negative"
            )));
        }
        Ok(lex)
    }

    pub fn builtin() -> Lexicon {
        Lexicon::parse(DEFAULT_LEXICON).expect("shipped lexicon is valid")
    }

    pub fn is_bad(&self, token: &str) -> bool {
        self.bad_words.contains(token)
    }

    /// Writes the lexicon back in the sectioned text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (header, words) in [
            ("#bad", &self.bad_words),
            ("#positive", &self.positive_words),
            ("#negative", &self.negative_words),
        ] {
            out.push_str(header);
            out.push('\n');
            for w in words {
                out.push_str(w);
                out.push('\n');
            }
        }
        out
    }
}

pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Lexicon, CorpusError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Lexicon::parse(&text)
}
