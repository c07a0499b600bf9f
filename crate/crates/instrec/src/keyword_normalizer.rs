//! Two-layer keyword canonicalization: an embedding-similarity layer that
//! folds each keyword onto the most frequent member of its similarity group,
//! followed by a strip-'s' plural layer gated on edit distance 1.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Write;

use crate::corpus_ingest::InstitutionDataset;
use crate::embedding_store::EmbeddingTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    Similarity,
    Plural,
    Identity,
}

/// Total, idempotent mapping from raw keywords to canonical keywords.
/// Chains are path-compressed at construction.
#[derive(Debug, Clone, Default)]
pub struct CanonicalMap {
    entries: BTreeMap<String, (String, Layer)>,
}

impl CanonicalMap {
    pub fn apply<'a>(&'a self, keyword: &'a str) -> &'a str {
        self.entries
            .get(keyword)
            .map(|(c, _)| c.as_str())
            .unwrap_or(keyword)
    }

    pub fn layer(&self, keyword: &str) -> Layer {
        self.entries
            .get(keyword)
            .map(|(_, l)| *l)
            .unwrap_or(Layer::Identity)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, Layer)> {
        self.entries.iter().map(|(k, (c, l))| (k.as_str(), c.as_str(), *l))
    }

    fn from_raw(raw: HashMap<String, String>, layer: Layer) -> CanonicalMap {
        let mut entries = BTreeMap::new();
        for key in raw.keys() {
            // follow the chain to its end; on a cycle, settle on the
            // lexicographically smallest member so the result is total
            let mut seen = HashSet::new();
            let mut cur = key.as_str();
            while let Some(next) = raw.get(cur) {
                if next == cur || !seen.insert(cur) {
                    break;
                }
                cur = next;
            }
            let target = if seen.contains(cur) {
                seen.iter().min().unwrap()
            } else {
                cur
            };
            if target != key {
                entries.insert(key.clone(), (target.to_string(), layer));
            }
        }
        CanonicalMap { entries }
    }
}

/// Keywords that are numerals or single characters are artifacts and are
/// left untouched by both layers.
fn excluded(keyword: &str) -> bool {
    keyword.chars().count() == 1 || keyword.chars().all(|c| c.is_ascii_digit())
}

/// Standard unit-cost edit distance.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Layer 1: map each keyword to the most frequent member of
/// `{keyword} ∪ top_k_similar(keyword)`, with frequencies taken over the
/// corpus-global keyword multiset. Ties break by shorter string, then
/// lexicographically. Keywords without a vector map to themselves.
pub fn canonicalize_by_similarity(
    frequencies: &HashMap<String, u64>,
    table: &EmbeddingTable,
    k: usize,
) -> CanonicalMap {
    let candidates: Vec<String> = {
        let mut c: Vec<String> = frequencies
            .keys()
            .filter(|kw| !excluded(kw))
            .cloned()
            .collect();
        c.sort();
        c
    };
    let mut raw = HashMap::new();
    for keyword in &candidates {
        let group = match table.top_k_similar(keyword, k, &candidates) {
            Ok(similar) => {
                let mut group = vec![keyword.clone()];
                group.extend(similar.into_iter().map(|(kw, _)| kw));
                group
            }
            Err(_) => continue, // no vector: identity
        };
        let best = group
            .into_iter()
            .min_by(|a, b| {
                let fa = frequencies.get(a).copied().unwrap_or(0);
                let fb = frequencies.get(b).copied().unwrap_or(0);
                fb.cmp(&fa)
                    .then_with(|| a.chars().count().cmp(&b.chars().count()))
                    .then_with(|| a.cmp(b))
            })
            .unwrap();
        if best != *keyword {
            raw.insert(keyword.clone(), best);
        }
    }
    CanonicalMap::from_raw(raw, Layer::Similarity)
}

/// Layer 2: map `p` to `q` exactly when `p` ends in 's', stripping that 's'
/// yields `q`, and `q` is itself in the universe (edit distance is then 1 by
/// construction).
pub fn fold_plurals<'a, I>(universe: I) -> CanonicalMap
where
    I: IntoIterator<Item = &'a str>,
{
    let set: HashSet<&str> = universe.into_iter().collect();
    let mut raw = HashMap::new();
    for &p in &set {
        if excluded(p) {
            continue;
        }
        if let Some(q) = p.strip_suffix('s') {
            if !q.is_empty() && set.contains(q) {
                debug_assert_eq!(levenshtein(p, q), 1);
                raw.insert(p.to_string(), q.to_string());
            }
        }
    }
    CanonicalMap::from_raw(raw, Layer::Plural)
}

/// Apply `m2 ∘ m1` to every keyword of every record, re-collapsing
/// duplicates within a record. Empty records are retained.
pub fn normalize_dataset(
    dataset: &InstitutionDataset,
    m1: &CanonicalMap,
    m2: &CanonicalMap,
) -> InstitutionDataset {
    let mut out = dataset.clone();
    for record in &mut out.records {
        let mut seen = HashSet::new();
        let mut keywords = Vec::new();
        for kw in &record.author_keywords {
            let canonical = m2.apply(m1.apply(kw)).to_string();
            if seen.insert(canonical.clone()) {
                keywords.push(canonical);
            }
        }
        record.author_keywords = keywords;
    }
    out
}

/// Two-column audit dump "raw<TAB>canonical" over the universe, sorted by
/// raw keyword.
pub fn write_audit<'a, W, I>(w: &mut W, universe: I, m1: &CanonicalMap, m2: &CanonicalMap) -> std::io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a str>,
{
    let mut keywords: Vec<&str> = universe.into_iter().collect();
    keywords.sort_unstable();
    keywords.dedup();
    for kw in keywords {
        writeln!(w, "{kw}\t{}", m2.apply(m1.apply(kw)))?;
    }
    Ok(())
}
