//! Per-period vocabulary and sparse TFIDF term-document matrix.

use super::{tokenize_period, CorpusError, Period};
use rayon::prelude::*;
use std::collections::{HashMap, HashSet};

/// The retained terms of one period, ordered lexicographically, with
/// their document frequencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    df: Vec<u32>,
    index: HashMap<String, u32>,
}

impl Vocabulary {
    pub fn from_parts(terms: Vec<String>, df: Vec<u32>) -> Self {
        assert_eq!(terms.len(), df.len());
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        Vocabulary { terms, df, index }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn df(&self, ordinal: u32) -> u32 {
        self.df[ordinal as usize]
    }

    pub fn ordinal(&self, term: &str) -> Option<u32> {
        self.index.get(term).copied()
    }

    pub fn term(&self, ordinal: u32) -> &str {
        &self.terms[ordinal as usize]
    }
}

/// Sparse term-by-document TFIDF weights in row (term) major order.
/// An entry is stored iff the term occurs in the document and its
/// document frequency is below the document count, so every stored
/// weight is strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseTermMatrix {
    n_docs: usize,
    doc_ids: Vec<String>,
    row_ptr: Vec<usize>,
    doc_ord: Vec<u32>,
    weight: Vec<f64>,
}

impl SparseTermMatrix {
    pub fn from_rows(doc_ids: Vec<String>, rows: Vec<Vec<(u32, f64)>>) -> Self {
        let n_docs = doc_ids.len();
        let nnz: usize = rows.iter().map(|r| r.len()).sum();
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        let mut doc_ord = Vec::with_capacity(nnz);
        let mut weight = Vec::with_capacity(nnz);
        row_ptr.push(0);
        for row in rows {
            for (d, w) in row {
                debug_assert!(w > 0.0);
                doc_ord.push(d);
                weight.push(w);
            }
            row_ptr.push(doc_ord.len());
        }
        SparseTermMatrix {
            n_docs,
            doc_ids,
            row_ptr,
            doc_ord,
            weight,
        }
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn n_terms(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn nnz(&self) -> usize {
        self.doc_ord.len()
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn doc_id(&self, ordinal: u32) -> &str {
        &self.doc_ids[ordinal as usize]
    }

    /// Entries of one term row, ascending by document ordinal.
    pub fn row(&self, term_ordinal: u32) -> impl Iterator<Item = (u32, f64)> + '_ {
        let lo = self.row_ptr[term_ordinal as usize];
        let hi = self.row_ptr[term_ordinal as usize + 1];
        self.doc_ord[lo..hi]
            .iter()
            .copied()
            .zip(self.weight[lo..hi].iter().copied())
    }

    pub fn density(&self) -> f64 {
        if self.n_docs == 0 || self.n_terms() == 0 {
            return 0.0;
        }
        self.nnz() as f64 / (self.n_docs as f64 * self.n_terms() as f64)
    }
}

/// Builds the vocabulary of a period: tokens with document frequency at
/// least `min_df` that are not stopwords, ordered lexicographically.
pub fn build_vocabulary(
    period: &Period,
    min_df: u32,
    stopwords: &HashSet<String>,
) -> Result<Vocabulary, CorpusError> {
    build_vocabulary_from_tokens(&tokenize_period(period), min_df, stopwords)
}

pub fn build_vocabulary_from_tokens(
    docs_tokens: &[Vec<String>],
    min_df: u32,
    stopwords: &HashSet<String>,
) -> Result<Vocabulary, CorpusError> {
    let min_df = min_df.max(1);
    let mut df: HashMap<&str, u32> = HashMap::new();
    for tokens in docs_tokens {
        let unique: HashSet<&str> = tokens.iter().map(|t| t.as_str()).collect();
        for t in unique {
            *df.entry(t).or_insert(0) += 1;
        }
    }
    let mut kept: Vec<(&str, u32)> = df
        .into_iter()
        .filter(|(t, c)| *c >= min_df && !stopwords.contains(*t))
        .collect();
    kept.sort_unstable_by(|a, b| a.0.cmp(b.0));
    if kept.is_empty() {
        return Err(CorpusError::EmptyVocabulary { min_df });
    }
    let (terms, df): (Vec<String>, Vec<u32>) =
        kept.into_iter().map(|(t, c)| (t.to_string(), c)).unzip();
    Ok(Vocabulary::from_parts(terms, df))
}

/// Builds the TFIDF matrix of a period over an existing vocabulary.
/// tf is the raw in-document count and idf = ln(N / df); terms present
/// in every document get no entries.
pub fn build_tfidf(period: &Period, vocab: &Vocabulary) -> SparseTermMatrix {
    let doc_ids: Vec<String> = period.documents.iter().map(|d| d.doc_id.clone()).collect();
    build_tfidf_from_tokens(&tokenize_period(period), doc_ids, vocab)
}

pub fn build_tfidf_from_tokens(
    docs_tokens: &[Vec<String>],
    doc_ids: Vec<String>,
    vocab: &Vocabulary,
) -> SparseTermMatrix {
    assert_eq!(docs_tokens.len(), doc_ids.len());
    let n = docs_tokens.len();
    let idf: Vec<f64> = (0..vocab.len() as u32)
        .map(|t| (n as f64 / vocab.df(t) as f64).ln())
        .collect();

    // per-document term counts, in vocabulary ordinals, sorted
    let per_doc: Vec<Vec<(u32, u32)>> = docs_tokens
        .par_iter()
        .map(|tokens| {
            let mut counts: HashMap<u32, u32> = HashMap::new();
            for t in tokens {
                if let Some(ord) = vocab.ordinal(t) {
                    *counts.entry(ord).or_insert(0) += 1;
                }
            }
            let mut counts: Vec<(u32, u32)> = counts.into_iter().collect();
            counts.sort_unstable_by_key(|(ord, _)| *ord);
            counts
        })
        .collect();

    let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new(); vocab.len()];
    for (doc, counts) in per_doc.into_iter().enumerate() {
        for (ord, tf) in counts {
            let w = tf as f64 * idf[ord as usize];
            if w > 0.0 {
                rows[ord as usize].push((doc as u32, w));
            }
        }
    }

    let matrix = SparseTermMatrix::from_rows(doc_ids, rows);
    log::info!(
        "tfidf matrix: {} terms x {} docs, {} nonzeros ({:.3}% dense)",
        matrix.n_terms(),
        matrix.n_docs(),
        matrix.nnz(),
        matrix.density() * 100.0
    );
    matrix
}
