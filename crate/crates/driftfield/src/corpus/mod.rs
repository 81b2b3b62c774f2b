//! Corpus ingestion: timestamped review parsing, degenerate-timestamp
//! filtering, temporal period splits, and per-period TFIDF spaces.

mod tfidf;
mod tokenize;

pub use tfidf::{
    build_tfidf, build_tfidf_from_tokens, build_vocabulary, build_vocabulary_from_tokens,
    SparseTermMatrix, Vocabulary,
};
pub use tokenize::{default_stopwords, tokenize, tokenize_period};

use serde::Deserialize;
use std::collections::HashSet;
use std::io::BufRead;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("failed to read input: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot split {docs} documents into {n} periods")]
    InvalidSplit { n: usize, docs: usize },
    #[error("vocabulary is empty (min_df={min_df}); corpus too small or filters too strict")]
    EmptyVocabulary { min_df: u32 },
}

/// One timestamped review. Only the identifier, the Unix timestamp, and
/// the plain-text body are retained from the source record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub doc_id: String,
    pub timestamp: i64,
    pub text: String,
}

/// A consecutive block of documents in the temporal split.
#[derive(Debug, Clone)]
pub struct Period {
    pub index: u32,
    pub end_timestamp: i64,
    pub documents: Vec<Document>,
}

/// Input record encodings accepted by [`parse_reviews`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    /// One JSON object per line with fields `id`, `time`, `text`.
    Jsonl,
    /// `key: value` blocks separated by blank lines, carrying
    /// `product/productId`, `review/userId`, `review/time`, `review/text`.
    Snap,
}

/// How documents are assigned to periods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitMode {
    /// Disjoint consecutive blocks with sizes differing by at most one.
    #[default]
    Disjoint,
    /// Period `i` contains every document up to block `i`'s boundary, so
    /// later periods extend earlier ones. Required for cross-period drift
    /// comparison, where shared documents anchor the term spaces.
    Cumulative,
}

/// Result of parsing a review stream.
#[derive(Debug)]
pub struct ParseOutcome {
    pub documents: Vec<Document>,
    /// Records that were present but missing a required field or malformed.
    pub skipped: usize,
}

#[derive(Deserialize)]
struct JsonlRecord {
    id: String,
    time: i64,
    text: String,
}

/// Parses a review stream into documents, preserving record order.
/// Malformed records are counted and skipped; parsing applies no
/// timestamp filtering.
pub fn parse_reviews<R: BufRead>(
    reader: R,
    format: InputFormat,
) -> Result<ParseOutcome, CorpusError> {
    match format {
        InputFormat::Jsonl => parse_jsonl(reader),
        InputFormat::Snap => parse_snap(reader),
    }
}

fn parse_jsonl<R: BufRead>(reader: R) -> Result<ParseOutcome, CorpusError> {
    let mut documents = Vec::new();
    let mut skipped = 0usize;
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<JsonlRecord>(&line) {
            Ok(rec) if !rec.id.is_empty() => documents.push(Document {
                doc_id: rec.id,
                timestamp: rec.time,
                text: rec.text,
            }),
            _ => skipped += 1,
        }
    }
    Ok(ParseOutcome { documents, skipped })
}

fn parse_snap<R: BufRead>(reader: R) -> Result<ParseOutcome, CorpusError> {
    let mut documents = Vec::new();
    let mut skipped = 0usize;
    let mut block: Vec<(String, String)> = Vec::new();

    let mut flush = |block: &mut Vec<(String, String)>,
                     documents: &mut Vec<Document>,
                     skipped: &mut usize| {
        if block.is_empty() {
            return;
        }
        let get = |key: &str| block.iter().find(|(k, _)| k == key).map(|(_, v)| v.clone());
        let product = get("product/productId");
        let user = get("review/userId");
        let time = get("review/time").and_then(|t| t.trim().parse::<i64>().ok());
        let text = get("review/text");
        match (product, user, time, text) {
            (Some(p), Some(u), Some(t), Some(text)) if !p.is_empty() && !u.is_empty() => {
                documents.push(Document {
                    doc_id: format!("{p}-{u}-{t}"),
                    timestamp: t,
                    text,
                });
            }
            _ => *skipped += 1,
        }
        block.clear();
    };

    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            flush(&mut block, &mut documents, &mut skipped);
        } else if let Some((key, value)) = line.split_once(':') {
            block.push((key.trim().to_string(), value.trim().to_string()));
        }
        // lines without a colon are ignored; the block decides validity
    }
    flush(&mut block, &mut documents, &mut skipped);
    Ok(ParseOutcome { documents, skipped })
}

/// Drops documents whose timestamp is non-positive or later than `now`.
/// Returns the surviving documents and the number dropped.
pub fn filter_degenerate(docs: Vec<Document>, now: i64) -> (Vec<Document>, usize) {
    let before = docs.len();
    let kept: Vec<Document> = docs
        .into_iter()
        .filter(|d| d.timestamp > 0 && d.timestamp <= now)
        .collect();
    let dropped = before - kept.len();
    (kept, dropped)
}

/// Keeps the first occurrence of each `doc_id`, preserving order.
/// Returns the deduplicated documents and the number removed.
pub fn dedup_documents(docs: Vec<Document>) -> (Vec<Document>, usize) {
    let before = docs.len();
    let mut seen = HashSet::with_capacity(before);
    let kept: Vec<Document> = docs
        .into_iter()
        .filter(|d| seen.insert(d.doc_id.clone()))
        .collect();
    let removed = before - kept.len();
    (kept, removed)
}

/// Sorts documents by (timestamp, doc_id) and partitions them into `n`
/// consecutive periods. Disjoint blocks differ in size by at most one,
/// with the remainder going to the earliest periods; cumulative periods
/// extend each block back to the start of the corpus.
pub fn split_periods(
    mut docs: Vec<Document>,
    n: usize,
    mode: SplitMode,
) -> Result<Vec<Period>, CorpusError> {
    if n == 0 || docs.is_empty() || n > docs.len() {
        return Err(CorpusError::InvalidSplit { n, docs: docs.len() });
    }
    docs.sort_by(|a, b| {
        a.timestamp
            .cmp(&b.timestamp)
            .then_with(|| a.doc_id.cmp(&b.doc_id))
    });

    let base = docs.len() / n;
    let remainder = docs.len() % n;
    let mut periods = Vec::with_capacity(n);
    let mut start = 0usize;
    for i in 0..n {
        let size = base + usize::from(i < remainder);
        let end = start + size;
        let documents: Vec<Document> = match mode {
            SplitMode::Disjoint => docs[start..end].to_vec(),
            SplitMode::Cumulative => docs[..end].to_vec(),
        };
        periods.push(Period {
            index: i as u32,
            end_timestamp: documents.last().expect("non-empty block").timestamp,
            documents,
        });
        start = end;
    }
    Ok(periods)
}
