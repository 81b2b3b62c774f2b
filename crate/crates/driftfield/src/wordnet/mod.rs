//! WordNet 3.0 hypernym taxonomy and path-based term similarity.
//!
//! Loads the standard `index.pos` / `data.pos` database files for nouns
//! and verbs. The noun graph has a single root; the verb graph gets a
//! virtual root above its natural roots so that every same-pos synset
//! pair has a common subsumer.

mod parse;
mod similarity;

pub use similarity::{lcs_depth, mean_pairwise_similarity, wup_similarity, MeanSimilarity, SimilarityScore};

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WordnetError {
    #[error("wordnet file not found: {0}")]
    MissingFile(PathBuf),
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("corrupt wordnet file {file} line {line}: {msg}")]
    Parse {
        file: String,
        line: usize,
        msg: String,
    },
    #[error("invalid taxonomy: {0}")]
    InvalidTaxonomy(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PartOfSpeech {
    Noun,
    Verb,
}

impl PartOfSpeech {
    pub fn tag(self) -> char {
        match self {
            PartOfSpeech::Noun => 'n',
            PartOfSpeech::Verb => 'v',
        }
    }
}

/// A synset in one part-of-speech graph, identified by its database
/// offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SynsetId {
    pub pos: PartOfSpeech,
    pub offset: u32,
}

/// Input record for taxonomy construction: one synset with its member
/// lemmas and same-pos hypernym offsets.
#[derive(Debug, Clone)]
pub struct SynsetSpec {
    pub pos: PartOfSpeech,
    pub offset: u32,
    pub lemmas: Vec<String>,
    pub hypernyms: Vec<u32>,
}

/// Offset reserved for the virtual root inserted above the verb trees.
/// Real synset offsets are byte positions past the license header, so
/// zero never collides.
pub const VIRTUAL_ROOT_OFFSET: u32 = 0;

pub(crate) struct PosGraph {
    offsets: Vec<u32>,
    offset_index: HashMap<u32, u32>,
    hypernyms: Vec<Vec<u32>>, // dense indices
    depth: Vec<u32>,          // 1 + min edge count to the pos root
}

impl PosGraph {
    pub(crate) fn dense(&self, offset: u32) -> Option<u32> {
        self.offset_index.get(&offset).copied()
    }

    pub(crate) fn depth_of(&self, dense: u32) -> u32 {
        self.depth[dense as usize]
    }

    pub(crate) fn hypernyms_of(&self, dense: u32) -> &[u32] {
        &self.hypernyms[dense as usize]
    }

    fn len(&self) -> usize {
        self.offsets.len()
    }
}

/// The loaded hypernym taxonomy: noun and verb synset graphs with
/// per-synset depths, plus the lemma index used for term lookup.
pub struct Taxonomy {
    noun: PosGraph,
    verb: PosGraph,
    lemmas: HashMap<(String, PartOfSpeech), Vec<u32>>, // offsets
    lemma_display: HashMap<SynsetId, Vec<String>>,
}

impl Taxonomy {
    /// Builds a taxonomy from synset records. Nouns must form a single
    /// rooted acyclic graph; parentless verb synsets are attached to a
    /// virtual root. `lemma_entries` maps lowercase lemmas to synset
    /// offsets; pass None to derive the index from the synset lemmas.
    pub fn from_synsets(
        specs: Vec<SynsetSpec>,
        lemma_entries: Option<Vec<(String, PartOfSpeech, Vec<u32>)>>,
    ) -> Result<Taxonomy, WordnetError> {
        let mut noun_specs = Vec::new();
        let mut verb_specs = Vec::new();
        let mut lemma_display = HashMap::new();
        for spec in specs {
            lemma_display.insert(
                SynsetId {
                    pos: spec.pos,
                    offset: spec.offset,
                },
                spec.lemmas.clone(),
            );
            match spec.pos {
                PartOfSpeech::Noun => noun_specs.push(spec),
                PartOfSpeech::Verb => verb_specs.push(spec),
            }
        }

        let derived_lemmas = lemma_entries.is_none();
        let noun = build_graph(&noun_specs, false)?;
        let verb = build_graph(&verb_specs, true)?;

        let mut lemmas: HashMap<(String, PartOfSpeech), Vec<u32>> = HashMap::new();
        match lemma_entries {
            Some(entries) => {
                for (lemma, pos, offsets) in entries {
                    lemmas.entry((lemma, pos)).or_default().extend(offsets);
                }
            }
            None => {
                for (id, members) in &lemma_display {
                    for m in members {
                        lemmas
                            .entry((m.to_lowercase(), id.pos))
                            .or_default()
                            .push(id.offset);
                    }
                }
            }
        }
        for offsets in lemmas.values_mut() {
            offsets.sort_unstable();
            offsets.dedup();
        }

        let tax = Taxonomy {
            noun,
            verb,
            lemmas,
            lemma_display,
        };
        if derived_lemmas {
            return Ok(tax);
        }
        // lemma entries must reference loaded synsets
        for ((lemma, pos), offsets) in &tax.lemmas {
            for off in offsets {
                if tax.graph(*pos).dense(*off).is_none() {
                    return Err(WordnetError::InvalidTaxonomy(format!(
                        "lemma '{lemma}' references missing {pos:?} synset {off}"
                    )));
                }
            }
        }
        Ok(tax)
    }

    pub(crate) fn graph(&self, pos: PartOfSpeech) -> &PosGraph {
        match pos {
            PartOfSpeech::Noun => &self.noun,
            PartOfSpeech::Verb => &self.verb,
        }
    }

    pub fn synset_count(&self, pos: PartOfSpeech) -> usize {
        // the virtual verb root is an implementation detail, not a synset
        match pos {
            PartOfSpeech::Noun => self.noun.len(),
            PartOfSpeech::Verb => self.verb.len() - 1,
        }
    }

    /// Synset offsets of a lowercase lemma, in a given part of speech.
    pub fn synsets_of(&self, lemma: &str, pos: PartOfSpeech) -> &[u32] {
        self.lemmas
            .get(&(lemma.to_lowercase(), pos))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    /// True when the term has at least one noun or verb synset.
    pub fn resolves(&self, term: &str) -> bool {
        !self.synsets_of(term, PartOfSpeech::Noun).is_empty()
            || !self.synsets_of(term, PartOfSpeech::Verb).is_empty()
    }

    pub fn member_lemmas(&self, id: SynsetId) -> &[String] {
        self.lemma_display
            .get(&id)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    /// Depth of a synset: 1 + minimal hypernym path length to the
    /// part-of-speech root.
    pub fn depth(&self, id: SynsetId) -> Option<u32> {
        let g = self.graph(id.pos);
        g.dense(id.offset).map(|d| g.depth_of(d))
    }

    /// All lemmas of a part of speech, sorted.
    pub fn all_lemmas(&self, pos: PartOfSpeech) -> Vec<&str> {
        let mut out: Vec<&str> = self
            .lemmas
            .keys()
            .filter(|(_, p)| *p == pos)
            .map(|(l, _)| l.as_str())
            .collect();
        out.sort_unstable();
        out
    }
}

fn build_graph(specs: &[SynsetSpec], add_virtual_root: bool) -> Result<PosGraph, WordnetError> {
    let mut specs: Vec<&SynsetSpec> = specs.iter().collect();
    specs.sort_unstable_by_key(|s| s.offset);

    let mut offsets: Vec<u32> = Vec::with_capacity(specs.len() + 1);
    if add_virtual_root {
        offsets.push(VIRTUAL_ROOT_OFFSET);
    }
    offsets.extend(specs.iter().map(|s| s.offset));
    let offset_index: HashMap<u32, u32> = offsets
        .iter()
        .enumerate()
        .map(|(i, &off)| (off, i as u32))
        .collect();
    if offset_index.len() != offsets.len() {
        return Err(WordnetError::InvalidTaxonomy(
            "duplicate synset offsets".to_string(),
        ));
    }

    let mut hypernyms: Vec<Vec<u32>> = vec![Vec::new(); offsets.len()];
    for spec in &specs {
        let me = offset_index[&spec.offset];
        let mut parents = Vec::with_capacity(spec.hypernyms.len());
        for h in &spec.hypernyms {
            let p = *offset_index.get(h).ok_or_else(|| {
                WordnetError::InvalidTaxonomy(format!(
                    "synset {} names missing hypernym {h}",
                    spec.offset
                ))
            })?;
            parents.push(p);
        }
        if parents.is_empty() && add_virtual_root {
            parents.push(0); // the virtual root's dense index
        }
        parents.sort_unstable();
        parents.dedup();
        hypernyms[me as usize] = parents;
    }

    // children adjacency for the breadth-first depth sweep
    let mut children: Vec<Vec<u32>> = vec![Vec::new(); offsets.len()];
    for (me, parents) in hypernyms.iter().enumerate() {
        for &p in parents {
            children[p as usize].push(me as u32);
        }
    }

    let roots: Vec<u32> = hypernyms
        .iter()
        .enumerate()
        .filter(|(_, h)| h.is_empty())
        .map(|(i, _)| i as u32)
        .collect();
    if roots.len() != 1 {
        return Err(WordnetError::InvalidTaxonomy(format!(
            "expected a unique root, found {}",
            roots.len()
        )));
    }

    let mut depth = vec![0u32; offsets.len()];
    let mut queue = std::collections::VecDeque::new();
    depth[roots[0] as usize] = 1;
    queue.push_back(roots[0]);
    while let Some(node) = queue.pop_front() {
        for &c in &children[node as usize] {
            if depth[c as usize] == 0 {
                depth[c as usize] = depth[node as usize] + 1;
                queue.push_back(c);
            }
        }
    }
    if let Some(unreached) = depth.iter().position(|&d| d == 0) {
        return Err(WordnetError::InvalidTaxonomy(format!(
            "synset {} does not reach the root",
            offsets[unreached]
        )));
    }

    Ok(PosGraph {
        offsets,
        offset_index,
        hypernyms,
        depth,
    })
}

/// Loads the noun and verb databases from a WordNet 3.0 `dict`-style
/// directory.
pub fn load_taxonomy(dir: &Path) -> Result<Taxonomy, WordnetError> {
    let mut specs = Vec::new();
    let mut lemma_entries = Vec::new();
    for pos in [PartOfSpeech::Noun, PartOfSpeech::Verb] {
        let name = match pos {
            PartOfSpeech::Noun => "noun",
            PartOfSpeech::Verb => "verb",
        };
        specs.extend(parse::parse_data_file(&dir.join(format!("data.{name}")), pos)?);
        lemma_entries.extend(parse::parse_index_file(&dir.join(format!("index.{name}")), pos)?);
    }
    Taxonomy::from_synsets(specs, Some(lemma_entries))
}


#[cfg(test)]
mod tests {
    use super::fixtures::toy_taxonomy;
    use super::*;

    #[test]
    fn toy_depths_follow_root_convention() {
        let tax = toy_taxonomy();
        let depth = |off| {
            tax.depth(SynsetId {
                pos: PartOfSpeech::Noun,
                offset: off,
            })
            .unwrap()
        };
        assert_eq!(depth(10), 1);
        assert_eq!(depth(20), 2);
        assert_eq!(depth(40), 4);
        assert_eq!(depth(90), 3);
    }

    #[test]
    fn multiple_noun_roots_are_rejected() {
        let spec = |offset| SynsetSpec {
            pos: PartOfSpeech::Noun,
            offset,
            lemmas: vec![format!("s{offset}")],
            hypernyms: vec![],
        };
        let err = Taxonomy::from_synsets(vec![spec(10), spec(20)], None).unwrap_err();
        assert!(matches!(err, WordnetError::InvalidTaxonomy(_)));
    }

    #[test]
    fn parentless_verbs_attach_to_virtual_root() {
        let v = |offset: u32, lemma: &str, hypernyms: Vec<u32>| SynsetSpec {
            pos: PartOfSpeech::Verb,
            offset,
            lemmas: vec![lemma.to_string()],
            hypernyms,
        };
        let tax = Taxonomy::from_synsets(
            vec![v(100, "move", vec![]), v(200, "run", vec![100]), v(300, "exist", vec![])],
            None,
        )
        .unwrap();
        let depth = |off| {
            tax.depth(SynsetId {
                pos: PartOfSpeech::Verb,
                offset: off,
            })
            .unwrap()
        };
        // virtual root takes depth 1, so natural roots sit at depth 2
        assert_eq!(depth(100), 2);
        assert_eq!(depth(300), 2);
        assert_eq!(depth(200), 3);
        assert_eq!(tax.synset_count(PartOfSpeech::Verb), 3);
    }

    #[test]
    fn missing_hypernym_target_is_corrupt() {
        let err = Taxonomy::from_synsets(
            vec![SynsetSpec {
                pos: PartOfSpeech::Noun,
                offset: 10,
                lemmas: vec!["a".into()],
                hypernyms: vec![999],
            }],
            None,
        )
        .unwrap_err();
        assert!(matches!(err, WordnetError::InvalidTaxonomy(_)));
    }

    #[test]
    fn lemma_lookup_is_lowercase_exact() {
        let tax = toy_taxonomy();
        assert_eq!(tax.synsets_of("cat", PartOfSpeech::Noun), &[40]);
        assert_eq!(tax.synsets_of("CAT", PartOfSpeech::Noun), &[40]);
        assert!(tax.synsets_of("feline", PartOfSpeech::Noun).is_empty());
        assert!(!tax.resolves("feline"));
        assert!(tax.resolves("dog"));
    }
}
