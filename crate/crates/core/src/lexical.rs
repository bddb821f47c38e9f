//! Text primitives: whitespace tokenization, bad-word counting, jaccard
//! similarity, mark counting and lexicon sentiment.
//!
//! Tokens are whitespace-separated and lowercased, nothing more. Before any
//! lexicon lookup a token loses its trailing `.,!?;:` characters, so
//! `"stupid!"` matches the entry `stupid` while `"stu-pid"` does not.

use crate::corpus::{Lexicon, Sentiment};
use std::collections::BTreeSet;
use std::sync::OnceLock;

/// Emoticon list shipped with the crate, one per line, `#` comments.
pub const EMOTICON_DATA: &str = include_str!("../data/emoticons.txt");

const LOOKUP_STRIP: &[char] = &['.', ',', '!', '?', ';', ':'];

/// Multiset of lowercase tokens, in text order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenBag {
    tokens: Vec<String>,
}

impl TokenBag {
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn distinct(&self) -> BTreeSet<&str> {
        self.tokens.iter().map(String::as_str).collect()
    }

    /// Number of times `token` occurs.
    pub fn count(&self, token: &str) -> usize {
        self.tokens.iter().filter(|t| *t == token).count()
    }
}

pub fn tokenize(text: &str) -> TokenBag {
    TokenBag {
        tokens: text.split_whitespace().map(str::to_lowercase).collect(),
    }
}

/// The form of a token used for lexicon lookups.
pub fn lookup_form(token: &str) -> &str {
    token.trim_end_matches(LOOKUP_STRIP)
}

pub fn bad_word_count(bag: &TokenBag, lex: &Lexicon) -> usize {
    bag.tokens
        .iter()
        .filter(|t| lex.is_bad(lookup_form(t)))
        .count()
}

/// Set jaccard similarity; 0 when both bags are empty.
pub fn jaccard(a: &TokenBag, b: &TokenBag) -> f64 {
    let sa = a.distinct();
    let sb = b.distinct();
    let union = sa.union(&sb).count();
    if union == 0 {
        return 0.0;
    }
    sa.intersection(&sb).count() as f64 / union as f64
}

/// Number of distinct tokens shared by both bags.
pub fn common_words(a: &TokenBag, b: &TokenBag) -> usize {
    a.distinct().intersection(&b.distinct()).count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MarkCounts {
    pub question_marks: usize,
    pub hyperlinks: usize,
    pub emoticons: usize,
}

/// The shipped emoticon list, longest first.
pub fn emoticons() -> &'static [String] {
    static LIST: OnceLock<Vec<String>> = OnceLock::new();
    LIST.get_or_init(|| {
        let mut list: Vec<String> = EMOTICON_DATA
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_string)
            .collect();
        list.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        list.dedup();
        list
    })
}

/// Counts `?` characters, hyperlinks and emoticons.
///
/// A hyperlink is a case-insensitive `http://` or `https://` (absorbing an
/// immediately following `www.`) or a bare `www.`; matches never overlap.
/// Emoticons are matched leftmost-longest against [`emoticons`], also
/// without overlap.
pub fn count_marks(text: &str) -> MarkCounts {
    MarkCounts {
        question_marks: text.matches('?').count(),
        hyperlinks: count_hyperlinks(text),
        emoticons: count_emoticons(text),
    }
}

fn count_hyperlinks(text: &str) -> usize {
    let lower = text.to_ascii_lowercase();
    let bytes = lower.as_bytes();
    let mut i = 0;
    let mut n = 0;
    while i < bytes.len() {
        let rest = &bytes[i..];
        let scheme = if rest.starts_with(b"https://") {
            Some(8)
        } else if rest.starts_with(b"http://") {
            Some(7)
        } else {
            None
        };
        if let Some(len) = scheme {
            n += 1;
            i += len;
            if bytes[i..].starts_with(b"www.") {
                i += 4;
            }
        } else if rest.starts_with(b"www.") {
            n += 1;
            i += 4;
        } else {
            i += 1;
        }
    }
    n
}

fn count_emoticons(text: &str) -> usize {
    let list = emoticons();
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut n = 0;
    while i < bytes.len() {
        match list.iter().find(|e| bytes[i..].starts_with(e.as_bytes())) {
            Some(e) => {
                n += 1;
                i += e.len();
            }
            None => i += 1,
        }
    }
    n
}

/// Lexicon polarity: positive hits vs. negative hits over the tokens.
pub fn sentiment(text: &str, lex: &Lexicon) -> Sentiment {
    let bag = tokenize(text);
    let (mut pos, mut neg) = (0usize, 0usize);
    for t in bag.tokens() {
        let key = lookup_form(t);
        if lex.positive_words.contains(key) {
            pos += 1;
        } else if lex.negative_words.contains(key) {
            neg += 1;
        }
    }
    match pos.cmp(&neg) {
        std::cmp::Ordering::Greater => Sentiment::Positive,
        std::cmp::Ordering::Less => Sentiment::Negative,
        std::cmp::Ordering::Equal => Sentiment::Neutral,
    }
}
