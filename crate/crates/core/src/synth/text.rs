//! Word-list text for synthetic titles, descriptions and comments. Filler
//! words are disjoint from every default lexicon list and never contain the
//! substring `18`.

use crate::corpus::Lexicon;
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub(crate) const FILLER: &[&str] = &[
    "cartoon",
    "episode",
    "kids",
    "song",
    "video",
    "new",
    "full",
    "part",
    "season",
    "show",
    "animation",
    "color",
    "learn",
    "toys",
    "family",
    "story",
    "school",
    "music",
    "dance",
    "rhymes",
    "nursery",
    "baby",
    "train",
    "car",
    "truck",
    "animal",
    "dinosaur",
    "puppet",
    "movie",
    "clip",
    "channel",
    "official",
    "hd",
    "compilation",
    "english",
    "abc",
    "numbers",
    "shapes",
    "colors",
    "world",
    "magic",
    "hero",
    "super",
    "adventure",
    "princess",
    "castle",
    "ocean",
    "space",
    "robot",
    "monster",
    "friends",
    "game",
    "play",
    "time",
    "day",
    "night",
    "summer",
    "winter",
    "birthday",
    "party",
    "the",
    "and",
    "with",
    "for",
];

const EMOTES: &[&str] = &[":)", ":D", "<3", ";)"];

pub(crate) struct Vocab {
    pub bad: Vec<String>,
    pub positive: Vec<String>,
    pub negative: Vec<String>,
}

impl Vocab {
    pub fn from_lexicon(lex: &Lexicon) -> Vocab {
        Vocab {
            bad: lex.bad_words.iter().cloned().collect(),
            positive: lex.positive_words.iter().cloned().collect(),
            negative: lex.negative_words.iter().cloned().collect(),
        }
    }
}

fn filler(rng: &mut ChaCha8Rng) -> &'static str {
    FILLER.choose(rng).expect("nonempty filler")
}

/// Inserts `word` at a random position of `words`.
fn insert(words: &mut Vec<String>, word: String, rng: &mut ChaCha8Rng) {
    let at = rng.random_range(0..=words.len());
    words.insert(at, word);
}

pub(crate) struct TitleSpec {
    pub words: usize,
    pub bad_words: usize,
    pub adult_tag: bool,
}

pub(crate) fn title(spec: &TitleSpec, vocab: &Vocab, rng: &mut ChaCha8Rng) -> Vec<String> {
    let mut words: Vec<String> = (0..spec.words).map(|_| filler(rng).to_string()).collect();
    for _ in 0..spec.bad_words {
        let w = vocab.bad.choose(rng).expect("nonempty bad list").clone();
        insert(&mut words, w, rng);
    }
    if spec.adult_tag {
        words.push("18+".into());
    }
    words
}

pub(crate) struct DescriptionSpec {
    pub words: usize,
    pub shared_with_title: usize,
    pub bad_words: usize,
    pub questions: usize,
    pub links: usize,
    pub emoticons: usize,
}

pub(crate) fn description(
    spec: &DescriptionSpec,
    title: &[String],
    vocab: &Vocab,
    rng: &mut ChaCha8Rng,
) -> String {
    let mut words: Vec<String> = (0..spec.words).map(|_| filler(rng).to_string()).collect();
    let shared: Vec<&String> = title
        .choose_multiple(rng, spec.shared_with_title.min(title.len()))
        .collect();
    for w in shared {
        insert(&mut words, w.clone(), rng);
    }
    for _ in 0..spec.bad_words {
        let w = vocab.bad.choose(rng).expect("nonempty bad list").clone();
        insert(&mut words, w, rng);
    }
    for _ in 0..spec.questions {
        insert(&mut words, "?".into(), rng);
    }
    for i in 0..spec.links {
        insert(&mut words, format!("https://example.com/w{i}"), rng);
    }
    for _ in 0..spec.emoticons {
        insert(
            &mut words,
            EMOTES.choose(rng).expect("nonempty").to_string(),
            rng,
        );
    }
    words.join(" ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Tone {
    Positive,
    Neutral,
    Negative,
}

/// Comment of a few filler words, one sentiment word for a non-neutral tone,
/// and one bad word when `bad`.
pub(crate) fn comment(tone: Tone, bad: bool, vocab: &Vocab, rng: &mut ChaCha8Rng) -> String {
    let n = rng.random_range(2..=8);
    let mut words: Vec<String> = (0..n).map(|_| filler(rng).to_string()).collect();
    let pick = match tone {
        Tone::Positive => vocab.positive.choose(rng),
        Tone::Negative => vocab.negative.choose(rng),
        Tone::Neutral => None,
    };
    if let Some(w) = pick {
        insert(&mut words, w.clone(), rng);
    }
    if bad {
        let w = vocab.bad.choose(rng).expect("nonempty bad list").clone();
        insert(&mut words, w, rng);
    }
    words.join(" ")
}

/// Short space-separated phrase of filler words.
pub(crate) fn phrase(words: usize, rng: &mut ChaCha8Rng) -> String {
    (0..words)
        .map(|_| filler(rng))
        .collect::<Vec<_>>()
        .join(" ")
}
