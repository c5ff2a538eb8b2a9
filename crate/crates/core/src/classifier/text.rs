//! Segment tokenization, a small lexicon-and-suffix POS tagger and special
//! token classes.

use std::sync::LazyLock;

use regex::Regex;
use serde::Serialize;

use crate::syntax::lexer::KEYWORDS;

static TOKEN: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"[A-Za-z_][A-Za-z0-9_]*|\d+(?:\.\d+)*|\S").unwrap());

/// Words, numbers and single punctuation characters.
pub fn tokenize(text: &str) -> Vec<&str> {
    TOKEN.find_iter(text).map(|m| m.as_str()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Tag {
    NOUN,
    VERB,
    ADJ,
    ADV,
    PRON,
    DET,
    ADP,
    NUM,
    CONJ,
    PART,
    PUNCT,
    X,
}

pub const TAGS: [Tag; 12] = [
    Tag::NOUN,
    Tag::VERB,
    Tag::ADJ,
    Tag::ADV,
    Tag::PRON,
    Tag::DET,
    Tag::ADP,
    Tag::NUM,
    Tag::CONJ,
    Tag::PART,
    Tag::PUNCT,
    Tag::X,
];

impl Tag {
    pub fn name(self) -> &'static str {
        match self {
            Tag::NOUN => "NOUN",
            Tag::VERB => "VERB",
            Tag::ADJ => "ADJ",
            Tag::ADV => "ADV",
            Tag::PRON => "PRON",
            Tag::DET => "DET",
            Tag::ADP => "ADP",
            Tag::NUM => "NUM",
            Tag::CONJ => "CONJ",
            Tag::PART => "PART",
            Tag::PUNCT => "PUNCT",
            Tag::X => "X",
        }
    }

    pub fn from_name(name: &str) -> Option<Tag> {
        TAGS.into_iter().find(|t| t.name() == name)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

const LEXICON: &[(Tag, &[&str])] = &[
    (
        Tag::DET,
        &[
            "a", "an", "the", "this", "that", "these", "those", "each", "every", "any", "some",
            "all", "no", "another", "both", "either", "neither",
        ],
    ),
    (
        Tag::PRON,
        &[
            "i", "me", "my", "we", "us", "our", "you", "your", "he", "him", "his", "she", "her",
            "it", "its", "they", "them", "their", "what", "which", "who", "whom", "whose",
            "something", "anything", "nothing", "one",
        ],
    ),
    (
        Tag::ADP,
        &[
            "in", "on", "at", "to", "for", "of", "with", "by", "from", "about", "into", "onto",
            "over", "after", "before", "under", "between", "through", "during", "without",
            "within", "via", "per", "than", "as", "like", "instead", "against", "across", "up",
            "down", "out", "off",
        ],
    ),
    (
        Tag::CONJ,
        &[
            "and", "or", "but", "nor", "so", "yet", "if", "when", "once", "because", "while",
            "although", "though", "unless", "until", "whether", "since", "whenever",
        ],
    ),
    (Tag::PART, &["not", "n't", "'s"]),
    (
        Tag::ADV,
        &[
            "then", "now", "here", "there", "also", "very", "more", "most", "less", "only",
            "just", "still", "ever", "never", "again", "soon", "later", "maybe", "perhaps",
            "too", "already", "always", "even", "else", "etc", "probably", "eventually",
        ],
    ),
    (
        Tag::VERB,
        &[
            "is", "are", "was", "were", "be", "been", "being", "am", "has", "have", "had", "do",
            "does", "did", "can", "could", "will", "would", "should", "may", "might", "must",
            "shall", "remove", "make", "use", "add", "change", "fix", "check", "try",
            "consider", "investigate", "swap", "delete", "replace", "update", "move", "refactor",
            "rename", "keep", "switch", "drop", "support", "implement", "enable", "disable",
            "get", "set", "call", "return", "work", "works", "become", "becomes", "allow",
            "need", "needs", "used", "go", "goes", "put", "take", "let", "run", "see",
        ],
    ),
    (
        Tag::ADJ,
        &[
            "public", "private", "protected", "static", "final", "available", "possible",
            "better", "new", "old", "deprecated", "complete", "min", "max", "unused", "same",
            "other", "good", "bad", "current", "backward", "ready",
        ],
    ),
    (Tag::NUM, &["two", "three", "four", "five", "ten"]),
];

fn lexicon(word: &str) -> Option<Tag> {
    let lower = word.to_lowercase();
    LEXICON
        .iter()
        .find(|(_, words)| words.contains(&lower.as_str()))
        .map(|(t, _)| *t)
}

fn is_number(tok: &str) -> bool {
    tok.starts_with(|c: char| c.is_ascii_digit())
        && tok.chars().all(|c| c.is_ascii_digit() || c == '.')
}

fn is_punct(tok: &str) -> bool {
    !tok.is_empty() && tok.chars().all(|c| !c.is_alphanumeric() && c != '_')
}

/// Lower-to-upper transition inside the word, as in `lazyStackTrace`.
pub fn is_camel_case(tok: &str) -> bool {
    let c: Vec<char> = tok.chars().collect();
    c.windows(2)
        .any(|w| w[0].is_lowercase() && w[1].is_uppercase())
}

/// At least two characters, no lowercase letters, at least one letter.
pub fn is_upper_case(tok: &str) -> bool {
    tok.chars().count() >= 2
        && tok.chars().any(char::is_alphabetic)
        && !tok.chars().any(char::is_lowercase)
        && tok.chars().all(|c| c.is_alphanumeric() || c == '_')
}

fn is_code_like(tok: &str) -> bool {
    is_camel_case(tok)
        || is_upper_case(tok)
        || tok.contains('_')
        || (tok.chars().any(|c| c.is_ascii_digit()) && tok.chars().any(char::is_alphabetic))
}

fn suffix_tag(tok: &str) -> Option<Tag> {
    if !tok.chars().all(char::is_alphabetic) {
        return None;
    }
    let lower = tok.to_lowercase();
    let rules: [(&str, Tag); 6] = [
        ("ing", Tag::VERB),
        ("ed", Tag::VERB),
        ("ize", Tag::VERB),
        ("ly", Tag::ADV),
        ("ous", Tag::ADJ),
        ("able", Tag::ADJ),
    ];
    rules
        .into_iter()
        .find(|(s, _)| lower.len() >= s.len() + 3 && lower.ends_with(s))
        .map(|(_, t)| t)
}

pub fn tag_token(tok: &str) -> Tag {
    if let Some(t) = lexicon(tok) {
        return t;
    }
    if let Some(t) = suffix_tag(tok) {
        return t;
    }
    if is_number(tok) {
        Tag::NUM
    } else if is_punct(tok) {
        Tag::PUNCT
    } else if is_code_like(tok) {
        Tag::X
    } else {
        Tag::NOUN
    }
}

pub fn tag_pos(tokens: &[&str]) -> Vec<Tag> {
    tokens.iter().map(|t| tag_token(t)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecialClass {
    Stopword,
    Punctuation,
    Number,
    JavaKeyword,
    JavaIdentifier,
    Other,
}

pub const SPECIAL_CLASSES: [SpecialClass; 5] = [
    SpecialClass::Stopword,
    SpecialClass::Punctuation,
    SpecialClass::Number,
    SpecialClass::JavaKeyword,
    SpecialClass::JavaIdentifier,
];

impl SpecialClass {
    pub fn name(self) -> &'static str {
        match self {
            SpecialClass::Stopword => "stopword",
            SpecialClass::Punctuation => "punctuation",
            SpecialClass::Number => "number",
            SpecialClass::JavaKeyword => "java-keyword",
            SpecialClass::JavaIdentifier => "java-identifier",
            SpecialClass::Other => "other",
        }
    }
}

pub const STOPWORDS: &[&str] = &[
    "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any", "are",
    "as", "at", "be", "because", "been", "before", "being", "below", "between", "both", "but",
    "by", "can", "could", "did", "do", "does", "doing", "down", "during", "each", "few", "for",
    "from", "further", "had", "has", "have", "having", "he", "her", "here", "hers", "herself",
    "him", "himself", "his", "how", "i", "if", "in", "into", "is", "it", "its", "itself",
    "just", "me", "more", "most", "my", "myself", "no", "nor", "not", "now", "of", "off", "on",
    "once", "only", "or", "other", "our", "ours", "ourselves", "out", "over", "own", "same",
    "she", "should", "so", "some", "such", "than", "that", "the", "their", "theirs", "them",
    "themselves", "then", "there", "these", "they", "this", "those", "through", "to", "too",
    "under", "until", "up", "very", "was", "we", "were", "what", "when", "where", "which",
    "while", "who", "whom", "why", "will", "with", "would", "you", "your", "yours", "yourself",
    "yourselves",
];

pub fn special_class(tok: &str) -> SpecialClass {
    if STOPWORDS.contains(&tok.to_lowercase().as_str()) {
        SpecialClass::Stopword
    } else if is_punct(tok) {
        SpecialClass::Punctuation
    } else if is_number(tok) {
        SpecialClass::Number
    } else if KEYWORDS.contains(&tok) {
        SpecialClass::JavaKeyword
    } else if is_camel_case(tok) || is_upper_case(tok) {
        SpecialClass::JavaIdentifier
    } else {
        SpecialClass::Other
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tagger_examples() {
        assert_eq!(tag_pos(&["remove", "this", "guard"]), [Tag::VERB, Tag::DET, Tag::NOUN]);
        assert_eq!(tag_pos(&["9", ".", ")"]), [Tag::NUM, Tag::PUNCT, Tag::PUNCT]);
        assert_eq!(tag_pos(&["lazyStackTrace"]), [Tag::X]);
        assert_eq!(
            tag_pos(&["switching", "merged", "quickly", "JDK", "expectedJDK15", "Java"]),
            [Tag::VERB, Tag::VERB, Tag::ADV, Tag::X, Tag::X, Tag::NOUN]
        );
    }

    #[test]
    fn tokens() {
        assert_eq!(
            tokenize("lazyStackTrace() works in Java 9."),
            ["lazyStackTrace", "(", ")", "works", "in", "Java", "9", "."]
        );
        assert_eq!(tokenize("Java 1.6, Long#compare"), ["Java", "1.6", ",", "Long", "#", "compare"]);
    }

    #[test]
    fn special_classes() {
        assert_eq!(special_class("the"), SpecialClass::Stopword);
        assert_eq!(special_class("public"), SpecialClass::JavaKeyword);
        assert_eq!(special_class("FieldMapper"), SpecialClass::JavaIdentifier);
        assert_eq!(special_class("ONCE_LIMIT"), SpecialClass::JavaIdentifier);
        assert_eq!(special_class(";"), SpecialClass::Punctuation);
        assert_eq!(special_class("1.7"), SpecialClass::Number);
        assert_eq!(special_class("Mapper"), SpecialClass::Other);
    }
}
