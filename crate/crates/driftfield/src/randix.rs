//! Seeded random indexing: sparse ternary document index vectors and the
//! dense term context vectors accumulated from them.
//!
//! Index vectors are derived on demand from a stable 64-bit hash of
//! (global seed, document id), never stored. Spaces built from different
//! document sets under the same seed therefore assign identical index
//! vectors to shared documents, which is what makes term spaces of
//! consecutive periods comparable.

use crate::corpus::SparseTermMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RandixError {
    #[error("invalid sparsity: need d >= k >= 2 with k even (d={d}, k={k})")]
    InvalidSparsity { d: u32, k: u32 },
    #[error("cosine of a zero vector is undefined")]
    ZeroVector,
}

/// Sparse ternary vector assigned to one document: k/2 coordinates at +1,
/// k/2 at -1, the rest zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexVector {
    pub dimension: u32,
    pub positive: Vec<u32>,
    pub negative: Vec<u32>,
}

/// Dense d-dimensional context vector per vocabulary term, for one period.
#[derive(Debug, Clone, PartialEq)]
pub struct TermSpace {
    pub dimension: u32,
    pub nonzeros: u32,
    pub global_seed: u64,
    pub period_index: u32,
    terms: Vec<String>,
    vectors: Vec<f32>,
}

impl TermSpace {
    pub fn from_parts(
        dimension: u32,
        nonzeros: u32,
        global_seed: u64,
        period_index: u32,
        terms: Vec<String>,
        vectors: Vec<f32>,
    ) -> Self {
        assert_eq!(terms.len() * dimension as usize, vectors.len());
        TermSpace {
            dimension,
            nonzeros,
            global_seed,
            period_index,
            terms,
            vectors,
        }
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

    pub fn vector(&self, i: usize) -> &[f32] {
        let d = self.dimension as usize;
        &self.vectors[i * d..(i + 1) * d]
    }

    pub fn vector_of(&self, term: &str) -> Option<&[f32]> {
        self.terms
            .iter()
            .position(|t| t == term)
            .map(|i| self.vector(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f32])> {
        self.terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.as_str(), self.vector(i)))
    }

    /// Per-coordinate (min, max) over all term vectors.
    pub fn coordinate_ranges(&self) -> Vec<(f32, f32)> {
        let d = self.dimension as usize;
        let mut ranges = vec![(f32::INFINITY, f32::NEG_INFINITY); d];
        for i in 0..self.len() {
            for (r, &x) in ranges.iter_mut().zip(self.vector(i)) {
                r.0 = r.0.min(x);
                r.1 = r.1.max(x);
            }
        }
        ranges
    }
}

/// FNV-1a over the seed bytes followed by the document id bytes. Stable
/// across runs and platforms.
fn stable_hash(global_seed: u64, doc_id: &str) -> u64 {
    const OFFSET: u64 = 0xcbf29ce484222325;
    const PRIME: u64 = 0x100000001b3;
    let mut h = OFFSET;
    for b in global_seed.to_le_bytes().iter().chain(doc_id.as_bytes()) {
        h ^= u64::from(*b);
        h = h.wrapping_mul(PRIME);
    }
    h
}

/// Derives the index vector of a document. The first k/2 distinct draws
/// from the seeded stream become +1 positions, the next k/2 become -1.
pub fn index_vector(
    doc_id: &str,
    global_seed: u64,
    d: u32,
    k: u32,
) -> Result<IndexVector, RandixError> {
    if k < 2 || k % 2 != 0 || k > d {
        return Err(RandixError::InvalidSparsity { d, k });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(stable_hash(global_seed, doc_id));
    let mut taken = vec![false; d as usize];
    let mut draw = |rng: &mut ChaCha8Rng| loop {
        let p = rng.random_range(0..d);
        if !taken[p as usize] {
            taken[p as usize] = true;
            return p;
        }
    };
    let half = (k / 2) as usize;
    let positive: Vec<u32> = (0..half).map(|_| draw(&mut rng)).collect();
    let negative: Vec<u32> = (0..half).map(|_| draw(&mut rng)).collect();
    Ok(IndexVector {
        dimension: d,
        positive,
        negative,
    })
}

/// Accumulates each term's context vector as the TFIDF-weighted sum of
/// the index vectors of the documents containing it, summing in document
/// order. Terms whose accumulated vector is zero are dropped with a
/// warning.
pub fn build_term_space(
    matrix: &SparseTermMatrix,
    terms: &[String],
    global_seed: u64,
    period_index: u32,
    d: u32,
    k: u32,
) -> Result<TermSpace, RandixError> {
    assert_eq!(terms.len(), matrix.n_terms());
    if k < 2 || k % 2 != 0 || k > d {
        return Err(RandixError::InvalidSparsity { d, k });
    }

    // one derivation per document, reused across all of its terms
    let doc_vectors: Vec<IndexVector> = matrix
        .doc_ids()
        .par_iter()
        .map(|id| index_vector(id, global_seed, d, k).expect("validated sparsity"))
        .collect();

    let dd = d as usize;
    let accumulated: Vec<Option<Vec<f64>>> = (0..matrix.n_terms() as u32)
        .into_par_iter()
        .map(|t| {
            let mut v = vec![0.0f64; dd];
            let mut any = false;
            for (doc, w) in matrix.row(t) {
                any = true;
                let iv = &doc_vectors[doc as usize];
                for &p in &iv.positive {
                    v[p as usize] += w;
                }
                for &p in &iv.negative {
                    v[p as usize] -= w;
                }
            }
            if any && v.iter().any(|&x| x != 0.0) {
                Some(v)
            } else {
                None
            }
        })
        .collect();

    let mut kept_terms = Vec::new();
    let mut vectors = Vec::new();
    for (term, acc) in terms.iter().zip(accumulated) {
        match acc {
            Some(v) => {
                kept_terms.push(term.clone());
                vectors.extend(v.into_iter().map(|x| x as f32));
            }
            None => log::warn!("term '{term}' accumulated a zero vector; dropped from the space"),
        }
    }
    Ok(TermSpace::from_parts(
        d,
        k,
        global_seed,
        period_index,
        kept_terms,
        vectors,
    ))
}

/// Cosine similarity of two equal-length vectors, in [-1, 1].
pub fn cosine(u: &[f32], v: &[f32]) -> Result<f64, RandixError> {
    assert_eq!(u.len(), v.len());
    let mut dot = 0.0f64;
    let mut nu = 0.0f64;
    let mut nv = 0.0f64;
    for (&a, &b) in u.iter().zip(v) {
        let (a, b) = (a as f64, b as f64);
        dot += a * b;
        nu += a * a;
        nv += b * b;
    }
    if nu == 0.0 || nv == 0.0 {
        return Err(RandixError::ZeroVector);
    }
    Ok((dot / (nu.sqrt() * nv.sqrt())).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::SparseTermMatrix;

    #[test]
    fn index_vector_is_deterministic() {
        let a = index_vector("doc-7", 42, 500, 10).unwrap();
        let b = index_vector("doc-7", 42, 500, 10).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn index_vector_depends_on_seed_and_id() {
        let a = index_vector("doc-7", 42, 500, 10).unwrap();
        let b = index_vector("doc-7", 43, 500, 10).unwrap();
        let c = index_vector("doc-8", 42, 500, 10).unwrap();
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn index_vector_has_exact_cardinalities() {
        let iv = index_vector("x", 1, 500, 10).unwrap();
        assert_eq!(iv.positive.len(), 5);
        assert_eq!(iv.negative.len(), 5);
        let mut all: Vec<u32> = iv.positive.iter().chain(&iv.negative).copied().collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), 10, "positions must be distinct");
        assert!(all.iter().all(|&p| p < 500));
    }

    #[test]
    fn index_vector_rejects_bad_sparsity() {
        assert!(index_vector("x", 1, 8, 10).is_err());
        assert!(index_vector("x", 1, 500, 3).is_err());
        assert!(index_vector("x", 1, 500, 0).is_err());
    }

    #[test]
    fn mean_pairwise_dot_is_near_zero() {
        // Monte-Carlo oracle over the hash stream: 10,000 random pairs
        let d = 500;
        let k = 10;
        let n_pairs = 10_000;
        let dots: Vec<f64> = (0..n_pairs)
            .map(|i| {
                let a = index_vector(&format!("pair-a-{i}"), 7, d, k).unwrap();
                let b = index_vector(&format!("pair-b-{i}"), 7, d, k).unwrap();
                let mut dense = vec![0i32; d as usize];
                for &p in &a.positive {
                    dense[p as usize] += 1;
                }
                for &p in &a.negative {
                    dense[p as usize] -= 1;
                }
                let mut dot = 0i32;
                for &p in &b.positive {
                    dot += dense[p as usize];
                }
                for &p in &b.negative {
                    dot -= dense[p as usize];
                }
                f64::from(dot)
            })
            .collect();
        let mean = dots.iter().sum::<f64>() / n_pairs as f64;
        let var = dots.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n_pairs - 1) as f64;
        let se = (var / n_pairs as f64).sqrt();
        assert!(
            mean.abs() <= 3.0 * se,
            "mean dot {mean} exceeds 3 standard errors {se}"
        );
    }

    fn single_entry_matrix(doc_id: &str, weight: f64) -> (SparseTermMatrix, Vec<String>) {
        let m = SparseTermMatrix::from_rows(vec![doc_id.to_string()], vec![vec![(0, weight)]]);
        (m, vec!["only".to_string()])
    }

    #[test]
    fn single_summand_vector_is_scaled_index_vector() {
        let (m, terms) = single_entry_matrix("doc-a", 2.5);
        let space = build_term_space(&m, &terms, 13, 0, 100, 4).unwrap();
        let iv = index_vector("doc-a", 13, 100, 4).unwrap();
        let v = space.vector(0);
        for &p in &iv.positive {
            assert_eq!(v[p as usize], 2.5);
        }
        for &p in &iv.negative {
            assert_eq!(v[p as usize], -2.5);
        }
        let nonzero = v.iter().filter(|&&x| x != 0.0).count();
        assert_eq!(nonzero, 4);
    }

    #[test]
    fn identical_profiles_give_identical_vectors() {
        let docs = vec!["d0".to_string(), "d1".to_string()];
        let rows = vec![vec![(0, 1.5), (1, 0.5)], vec![(0, 1.5), (1, 0.5)]];
        let m = SparseTermMatrix::from_rows(docs, rows);
        let terms = vec!["a".to_string(), "b".to_string()];
        let space = build_term_space(&m, &terms, 99, 0, 200, 8).unwrap();
        assert_eq!(space.vector(0), space.vector(1));
    }

    #[test]
    fn cooccurring_terms_are_closer_than_disjoint_ones() {
        // A and B share 90% of their documents; C lives in disjoint ones.
        let n_docs = 100u32;
        let doc_ids: Vec<String> = (0..n_docs * 2).map(|i| format!("doc-{i}")).collect();
        let a_docs: Vec<u32> = (0..n_docs).collect();
        let b_docs: Vec<u32> = (0..90).chain(n_docs..n_docs + 10).collect();
        let c_docs: Vec<u32> = (n_docs + 10..n_docs + 10 + n_docs).collect();
        let row = |docs: &[u32]| docs.iter().map(|&d| (d, 1.0)).collect::<Vec<_>>();
        let m = SparseTermMatrix::from_rows(
            doc_ids,
            vec![row(&a_docs), row(&b_docs), row(&c_docs)],
        );
        let terms = vec!["a".into(), "b".into(), "c".into()];
        let space = build_term_space(&m, &terms, 5, 0, 500, 10).unwrap();
        let ab = cosine(space.vector(0), space.vector(1)).unwrap();
        let ac = cosine(space.vector(0), space.vector(2)).unwrap();
        assert!(ab > ac, "cos(A,B)={ab} should exceed cos(A,C)={ac}");
    }

    #[test]
    fn cosine_identity_antipodal_orthogonal() {
        let v = [1.0f32, 2.0, -3.0];
        let neg: Vec<f32> = v.iter().map(|x| -x).collect();
        assert!((cosine(&v, &v).unwrap() - 1.0).abs() < 1e-12);
        assert!((cosine(&v, &neg).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(cosine(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn cosine_rejects_zero_vectors() {
        assert!(matches!(
            cosine(&[0.0, 0.0], &[1.0, 0.0]),
            Err(RandixError::ZeroVector)
        ));
    }

    #[test]
    fn scale_equivariance_preserves_cosines() {
        let docs = vec!["d0".to_string(), "d1".to_string(), "d2".to_string()];
        let rows = vec![
            vec![(0, 1.0), (1, 2.0)],
            vec![(1, 1.0), (2, 3.0)],
            vec![(0, 3.0), (1, 6.0)], // term 2 = 3x term 0's profile
        ];
        let m = SparseTermMatrix::from_rows(docs, rows);
        let terms = vec!["a".into(), "b".into(), "c".into()];
        let space = build_term_space(&m, &terms, 11, 0, 300, 6).unwrap();
        let v_a = space.vector(0);
        let v_c = space.vector(2);
        for (x, y) in v_a.iter().zip(v_c) {
            assert!((3.0 * x - y).abs() < 1e-5);
        }
        let sim_ab = cosine(space.vector(0), space.vector(1)).unwrap();
        let sim_cb = cosine(space.vector(2), space.vector(1)).unwrap();
        assert!((sim_ab - sim_cb).abs() < 1e-9);
    }

    #[test]
    fn term_space_is_pure_function_of_inputs() {
        let docs = vec!["d0".to_string(), "d1".to_string()];
        let rows = vec![vec![(0, 1.0)], vec![(0, 2.0), (1, 1.0)]];
        let m = SparseTermMatrix::from_rows(docs, rows);
        let terms = vec!["a".into(), "b".into()];
        let s1 = build_term_space(&m, &terms, 3, 0, 128, 6).unwrap();
        let s2 = build_term_space(&m, &terms, 3, 0, 128, 6).unwrap();
        assert_eq!(s1, s2);
    }
}
