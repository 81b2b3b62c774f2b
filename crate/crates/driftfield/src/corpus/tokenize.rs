//! Deterministic lowercase tokenizer.

use super::Period;
use rayon::prelude::*;

/// The classic 33-word English stop list shipped with mainstream
/// inverted-index engines.
const DEFAULT_STOPWORDS: &[&str] = &[
    "a", "an", "and", "are", "as", "at", "be", "but", "by", "for", "if", "in", "into", "is", "it",
    "no", "not", "of", "on", "or", "such", "that", "the", "their", "then", "there", "these",
    "they", "this", "to", "was", "will", "with",
];

pub fn default_stopwords() -> impl Iterator<Item = &'static str> {
    DEFAULT_STOPWORDS.iter().copied()
}

/// Splits on any non-alphabetic character, lowercases, and keeps tokens of
/// length >= 2. Stopwords are not removed here; vocabulary construction
/// applies its own stop list.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphabetic())
        .filter(|s| !s.is_empty())
        .map(|s| s.to_lowercase())
        .filter(|s| s.chars().count() >= 2)
        .collect()
}

/// Tokenizes every document of a period, preserving document order.
pub fn tokenize_period(period: &Period) -> Vec<Vec<String>> {
    period
        .documents
        .par_iter()
        .map(|d| tokenize(&d.text))
        .collect()
}
