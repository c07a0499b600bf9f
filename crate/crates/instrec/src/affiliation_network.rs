//! Bipartite works → keywords affiliation network with score injection on
//! links and weighted-indegree thematic strength computation.

use std::collections::BTreeMap;
use std::collections::HashMap;

use crate::corpus_ingest::InstitutionDataset;

/// Directed bipartite network: links run from works (first mode) to keywords
/// (second mode); each link carries a non-negative weight.
#[derive(Debug, Clone, PartialEq)]
pub struct AffiliationNetwork {
    pub institution_id: String,
    pub works: Vec<String>,
    pub keywords: Vec<String>,
    /// (work index, keyword index) pairs
    pub links: Vec<(usize, usize)>,
    /// parallel to `links`
    pub link_weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThematicProfile {
    pub institution_id: String,
    pub strength: BTreeMap<String, f64>,
}

/// Build the unweighted network: one first-mode vertex per record with at
/// least one keyword, one second-mode vertex per distinct keyword, every
/// link weight 1.
pub fn build_wka(dataset: &InstitutionDataset) -> AffiliationNetwork {
    let mut works = Vec::new();
    let mut keywords = Vec::new();
    let mut keyword_index: HashMap<&str, usize> = HashMap::new();
    let mut links = Vec::new();
    for record in &dataset.records {
        if record.author_keywords.is_empty() {
            continue;
        }
        let w = works.len();
        works.push(record.uid.clone());
        for kw in &record.author_keywords {
            let k = *keyword_index.entry(kw).or_insert_with(|| {
                keywords.push(kw.clone());
                keywords.len() - 1
            });
            links.push((w, k));
        }
    }
    let link_weights = vec![1.0; links.len()];
    AffiliationNetwork {
        institution_id: dataset.institution_id.clone(),
        works,
        keywords,
        links,
        link_weights,
    }
}

/// Injection: each link (w, k) takes the score of its first-mode work.
/// Works without a score get 0. Structure is unchanged.
pub fn inject_scores(net: &AffiliationNetwork, scores: &HashMap<String, f64>) -> AffiliationNetwork {
    let mut out = net.clone();
    for (link, weight) in out.links.iter().zip(out.link_weights.iter_mut()) {
        *weight = scores.get(&out.works[link.0]).copied().unwrap_or(0.0);
    }
    out
}

/// Per-work scores taken from the dataset's citation counts, the default
/// injection source.
pub fn citation_scores(dataset: &InstitutionDataset) -> HashMap<String, f64> {
    dataset
        .records
        .iter()
        .map(|r| (r.uid.clone(), r.citation_count as f64))
        .collect()
}

/// Thematic strength of every keyword: the sum of weights of its incoming
/// links.
pub fn weighted_indegree(net: &AffiliationNetwork) -> ThematicProfile {
    let mut totals = vec![0.0; net.keywords.len()];
    for (link, weight) in net.links.iter().zip(&net.link_weights) {
        totals[link.1] += weight;
    }
    ThematicProfile {
        institution_id: net.institution_id.clone(),
        strength: net
            .keywords
            .iter()
            .cloned()
            .zip(totals)
            .collect(),
    }
}
