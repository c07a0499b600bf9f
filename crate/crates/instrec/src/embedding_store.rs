//! Word vectors with cosine-similarity queries, either loaded from the
//! standard text format (`vocab dim` header, one `token v1 .. vd` line per
//! word) or trained in-repo with skip-gram negative sampling.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("malformed embedding header or entry count mismatch")]
    HeaderMismatch,
    #[error("vector dimension mismatch at line {0}")]
    DimensionMismatch(usize),
    #[error("duplicate token {0}")]
    DuplicateToken(String),
    #[error("no token of the training corpus reaches min_count")]
    EmptyVocabulary,
    #[error("no vector derivable for phrase {0:?}")]
    NoVector(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    pub dimension: usize,
    vectors: HashMap<String, Vec<f64>>,
    token_frequency: HashMap<String, u64>,
}

impl EmbeddingTable {
    pub fn vector(&self, token: &str) -> Option<&[f64]> {
        self.vectors.get(token).map(|v| v.as_slice())
    }

    pub fn frequency(&self, token: &str) -> u64 {
        self.token_frequency.get(token).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.vectors.keys().map(|s| s.as_str())
    }

    /// Mean of the vectors of in-vocabulary whitespace tokens; `None` when
    /// no token of the phrase is in vocabulary.
    pub fn phrase_vector(&self, phrase: &str) -> Option<Vec<f64>> {
        let mut sum = vec![0.0; self.dimension];
        let mut hits = 0usize;
        for token in phrase.split_whitespace() {
            if let Some(v) = self.vectors.get(token) {
                for (s, x) in sum.iter_mut().zip(v) {
                    *s += x;
                }
                hits += 1;
            }
        }
        if hits == 0 {
            return None;
        }
        for s in sum.iter_mut() {
            *s /= hits as f64;
        }
        Some(sum)
    }

    /// Candidate phrases ranked by descending cosine similarity to `phrase`,
    /// self excluded, ties broken lexicographically, at most `k` results.
    /// Candidates without a derivable vector are skipped.
    pub fn top_k_similar(
        &self,
        phrase: &str,
        k: usize,
        candidates: &[String],
    ) -> Result<Vec<(String, f64)>, EmbeddingError> {
        let query = self
            .phrase_vector(phrase)
            .ok_or_else(|| EmbeddingError::NoVector(phrase.to_string()))?;
        let mut scored: Vec<(String, f64)> = candidates
            .iter()
            .filter(|c| c.as_str() != phrase)
            .filter_map(|c| {
                self.phrase_vector(c)
                    .map(|v| (c.clone(), cosine(&query, &v)))
            })
            .collect();
        scored.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.0.cmp(&b.0))
        });
        scored.truncate(k);
        Ok(scored)
    }

    pub fn save<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.vectors.len(), self.dimension)?;
        let mut tokens: Vec<&String> = self.vectors.keys().collect();
        tokens.sort();
        for token in tokens {
            write!(w, "{token}")?;
            for x in &self.vectors[token] {
                write!(w, " {x:.6}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// Load vectors from the text format. Token frequencies default to 1.
pub fn load_embeddings<R: BufRead>(reader: R) -> Result<EmbeddingTable, EmbeddingError> {
    let mut lines = reader.lines();
    let header = lines.next().ok_or(EmbeddingError::HeaderMismatch)??;
    let mut parts = header.split_whitespace();
    let vocab_size: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or(EmbeddingError::HeaderMismatch)?;
    let dimension: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or(EmbeddingError::HeaderMismatch)?;
    if parts.next().is_some() {
        return Err(EmbeddingError::HeaderMismatch);
    }

    let mut vectors = HashMap::new();
    let mut token_frequency = HashMap::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let line_no = idx + 2;
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let token = parts.next().ok_or(EmbeddingError::DimensionMismatch(line_no))?;
        let vec: Vec<f64> = parts
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| EmbeddingError::DimensionMismatch(line_no))
            })
            .collect::<Result<_, _>>()?;
        if vec.len() != dimension || vec.iter().any(|x| !x.is_finite()) {
            return Err(EmbeddingError::DimensionMismatch(line_no));
        }
        if vectors.insert(token.to_string(), vec).is_some() {
            return Err(EmbeddingError::DuplicateToken(token.to_string()));
        }
        token_frequency.insert(token.to_string(), 1);
    }
    if vectors.len() != vocab_size {
        return Err(EmbeddingError::HeaderMismatch);
    }
    Ok(EmbeddingTable {
        dimension,
        vectors,
        token_frequency,
    })
}

#[derive(Debug, Clone)]
pub struct TrainParams {
    pub dimension: usize,
    pub window: usize,
    pub negative_samples: usize,
    pub epochs: usize,
    pub min_count: u64,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            dimension: 100,
            window: 5,
            negative_samples: 5,
            epochs: 5,
            min_count: 2,
            learning_rate: 0.025,
            seed: 42,
        }
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Skip-gram with negative sampling. Deterministic given the seed: random
/// draws come from counter-based generators keyed on (seed, position).
pub fn train_skipgram(
    corpus: &[Vec<String>],
    params: &TrainParams,
) -> Result<EmbeddingTable, EmbeddingError> {
    train_skipgram_with_losses(corpus, params).map(|(table, _)| table)
}

/// As [`train_skipgram`] but also returns the mean negative-sampling loss of
/// each epoch.
pub fn train_skipgram_with_losses(
    corpus: &[Vec<String>],
    params: &TrainParams,
) -> Result<(EmbeddingTable, Vec<f64>), EmbeddingError> {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for sentence in corpus {
        for token in sentence {
            *counts.entry(token).or_insert(0) += 1;
        }
    }
    let mut vocab: Vec<(&str, u64)> = counts
        .iter()
        .filter(|(_, &c)| c >= params.min_count)
        .map(|(&t, &c)| (t, c))
        .collect();
    vocab.sort();
    if vocab.is_empty() {
        return Err(EmbeddingError::EmptyVocabulary);
    }
    let index: HashMap<&str, usize> = vocab.iter().enumerate().map(|(i, (t, _))| (*t, i)).collect();

    // unigram^0.75 negative-sampling distribution as a cumulative table
    let pow: Vec<f64> = vocab.iter().map(|(_, c)| (*c as f64).powf(0.75)).collect();
    let total_pow: f64 = pow.iter().sum();
    let mut cumulative = Vec::with_capacity(pow.len());
    let mut acc = 0.0;
    for p in &pow {
        acc += p / total_pow;
        cumulative.push(acc);
    }
    let draw_negative = |rng: &mut ChaCha8Rng| -> usize {
        let u: f64 = rng.gen();
        cumulative.partition_point(|&c| c < u).min(vocab.len() - 1)
    };

    let dim = params.dimension;
    let mut init_rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut input: Vec<Vec<f64>> = (0..vocab.len())
        .map(|_| {
            (0..dim)
                .map(|_| (init_rng.gen::<f64>() - 0.5) / dim as f64)
                .collect()
        })
        .collect();
    let mut output: Vec<Vec<f64>> = vec![vec![0.0; dim]; vocab.len()];

    let sentences: Vec<Vec<usize>> = corpus
        .iter()
        .map(|s| s.iter().filter_map(|t| index.get(t.as_str()).copied()).collect())
        .collect();

    let mut epoch_losses = Vec::with_capacity(params.epochs);
    let mut position: u64 = 0;
    for epoch in 0..params.epochs {
        let mut loss_sum = 0.0;
        let mut loss_n = 0u64;
        // linear decay across epochs, never below 10% of the initial rate
        let lr = params.learning_rate
            * (1.0 - 0.9 * epoch as f64 / params.epochs.max(1) as f64);
        for sentence in &sentences {
            for (center_pos, &center) in sentence.iter().enumerate() {
                position += 1;
                let mut rng =
                    ChaCha8Rng::seed_from_u64(params.seed ^ position.wrapping_mul(0x9E3779B97F4A7C15));
                let span = rng.gen_range(1..=params.window);
                let lo = center_pos.saturating_sub(span);
                let hi = (center_pos + span).min(sentence.len() - 1);
                for (ctx_pos, &context) in sentence.iter().enumerate().take(hi + 1).skip(lo) {
                    if ctx_pos == center_pos {
                        continue;
                    }
                    let mut grad_center = vec![0.0; dim];
                    for sample in 0..=params.negative_samples {
                        let (target, label) = if sample == 0 {
                            (context, 1.0)
                        } else {
                            (draw_negative(&mut rng), 0.0)
                        };
                        let dot: f64 = input[center]
                            .iter()
                            .zip(&output[target])
                            .map(|(a, b)| a * b)
                            .sum();
                        let pred = sigmoid(dot);
                        loss_sum += if label == 1.0 {
                            -pred.max(1e-12).ln()
                        } else {
                            -(1.0 - pred).max(1e-12).ln()
                        };
                        let g = (pred - label) * lr;
                        for d in 0..dim {
                            grad_center[d] += g * output[target][d];
                            output[target][d] -= g * input[center][d];
                        }
                    }
                    loss_n += 1;
                    for d in 0..dim {
                        input[center][d] -= grad_center[d];
                    }
                }
            }
        }
        epoch_losses.push(if loss_n == 0 { 0.0 } else { loss_sum / loss_n as f64 });
    }

    let vectors = vocab
        .iter()
        .enumerate()
        .map(|(i, (t, _))| (t.to_string(), input[i].clone()))
        .collect();
    let token_frequency = vocab.iter().map(|(t, c)| (t.to_string(), *c)).collect();
    Ok((
        EmbeddingTable {
            dimension: dim,
            vectors,
            token_frequency,
        },
        epoch_losses,
    ))
}

/// Test-support constructor for hand-built vector fixtures.
pub fn table_from_vectors(
    dimension: usize,
    entries: &[(&str, Vec<f64>)],
    frequencies: &[(&str, u64)],
) -> EmbeddingTable {
    EmbeddingTable {
        dimension,
        vectors: entries
            .iter()
            .map(|(t, v)| (t.to_string(), v.clone()))
            .collect(),
        token_frequency: frequencies
            .iter()
            .map(|(t, c)| (t.to_string(), *c))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    #[test]
    fn loads_small_table() {
        let table = load_embeddings(Cursor::new("2 3\ncat 1 0 0\ndog 0 1 0\n")).unwrap();
        assert_eq!(table.len(), 2);
        assert_eq!(table.dimension, 3);
        assert_eq!(table.vector("cat").unwrap(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn short_vector_is_dimension_mismatch() {
        assert!(matches!(
            load_embeddings(Cursor::new("1 3\ncat 1 0\n")),
            Err(EmbeddingError::DimensionMismatch(2))
        ));
    }

    #[test]
    fn duplicate_token_is_rejected() {
        assert!(matches!(
            load_embeddings(Cursor::new("2 2\ncat 1 0\ncat 0 1\n")),
            Err(EmbeddingError::DuplicateToken(t)) if t == "cat"
        ));
    }

    #[test]
    fn entry_count_mismatch_is_header_error() {
        assert!(matches!(
            load_embeddings(Cursor::new("3 2\ncat 1 0\ndog 0 1\n")),
            Err(EmbeddingError::HeaderMismatch)
        ));
    }

    #[test]
    fn save_load_roundtrip_at_six_decimals() {
        let table = load_embeddings(Cursor::new("2 3\ncat 1 0 0\ndog 0 1 0\n")).unwrap();
        let mut buf = Vec::new();
        table.save(&mut buf).unwrap();
        let reloaded = load_embeddings(Cursor::new(buf.clone())).unwrap();
        let mut buf2 = Vec::new();
        reloaded.save(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn phrase_vector_is_componentwise_mean() {
        let table = load_embeddings(Cursor::new("2 3\ncat 1 0 0\ndog 0 1 0\n")).unwrap();
        assert_eq!(table.phrase_vector("cat").unwrap(), vec![1.0, 0.0, 0.0]);
        assert_eq!(table.phrase_vector("cat dog").unwrap(), vec![0.5, 0.5, 0.0]);
        assert_eq!(table.phrase_vector("bird fish"), None);
    }

    #[test]
    fn top_k_ranks_by_cosine() {
        let table = load_embeddings(Cursor::new(
            "3 2\naxis 1 0\nnear 1 0.1\nfar 0 1\n",
        ))
        .unwrap();
        let candidates: Vec<String> = ["axis", "near", "far"].iter().map(|s| s.to_string()).collect();
        let out = table.top_k_similar("axis", 5, &candidates).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].0, "near");
        assert_eq!(out[1].0, "far");
        // identical vector ranks first with cosine 1
        let out = table.top_k_similar("near", 1, &candidates).unwrap();
        assert!(out[0].1 <= 1.0 + 1e-9);
    }

    #[test]
    fn top_k_matches_brute_force_cosine() {
        let table = load_embeddings(Cursor::new(
            "4 3\nq 1 1 0\na 1 0 0\nb 0 1 0\nc 0 0 1\n",
        ))
        .unwrap();
        let candidates: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let out = table.top_k_similar("q", 3, &candidates).unwrap();
        let q = table.phrase_vector("q").unwrap();
        let mut expect: Vec<(String, f64)> = candidates
            .iter()
            .map(|c| (c.clone(), cosine(&q, &table.phrase_vector(c).unwrap())))
            .collect();
        expect.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        assert_eq!(out, expect);
    }

    #[test]
    fn oov_phrase_is_no_vector_error() {
        let table = load_embeddings(Cursor::new("1 2\ncat 1 0\n")).unwrap();
        assert!(matches!(
            table.top_k_similar("bird", 3, &["cat".to_string()]),
            Err(EmbeddingError::NoVector(_))
        ));
    }

    fn synthetic_corpus(seed: u64) -> Vec<Vec<String>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fillers = ["red", "blue", "green", "gray"];
        let mut corpus = Vec::new();
        for _ in 0..600 {
            let f = fillers[rng.gen_range(0..fillers.len())];
            corpus.push(vec!["alpha".into(), "beta".into(), f.into()]);
            let f = fillers[rng.gen_range(0..fillers.len())];
            corpus.push(vec!["gamma".into(), "delta".into(), f.into()]);
        }
        corpus
    }

    fn small_params(seed: u64) -> TrainParams {
        TrainParams {
            dimension: 16,
            window: 2,
            negative_samples: 5,
            epochs: 3,
            min_count: 2,
            learning_rate: 0.05,
            seed,
        }
    }

    #[test]
    fn cooccurring_tokens_end_up_closer() {
        let corpus = synthetic_corpus(7);
        let table = train_skipgram(&corpus, &small_params(1)).unwrap();
        let a = table.vector("alpha").unwrap();
        let b = table.vector("beta").unwrap();
        let g = table.vector("gamma").unwrap();
        assert!(cosine(a, b) > cosine(a, g));
    }

    #[test]
    fn min_count_above_all_counts_is_empty_vocabulary() {
        let corpus = vec![vec!["a".to_string(), "b".to_string()]];
        let params = TrainParams {
            min_count: 10,
            ..small_params(1)
        };
        assert!(matches!(
            train_skipgram(&corpus, &params),
            Err(EmbeddingError::EmptyVocabulary)
        ));
    }

    #[test]
    fn same_seed_gives_identical_tables() {
        let corpus = synthetic_corpus(3);
        let t1 = train_skipgram(&corpus, &small_params(9)).unwrap();
        let t2 = train_skipgram(&corpus, &small_params(9)).unwrap();
        for token in t1.tokens() {
            assert_eq!(t1.vector(token), t2.vector(token));
        }
    }

    #[test]
    fn loss_trends_down_across_epochs() {
        let corpus = synthetic_corpus(5);
        let params = TrainParams {
            epochs: 5,
            ..small_params(2)
        };
        let (_, losses) = train_skipgram_with_losses(&corpus, &params).unwrap();
        // monotone non-increasing within a 5% noise band
        for pair in losses.windows(2) {
            assert!(pair[1] <= pair[0] * 1.05, "losses: {losses:?}");
        }
        assert!(losses.last().unwrap() < losses.first().unwrap());
    }

    #[test]
    fn cosine_self_is_one() {
        let table = load_embeddings(Cursor::new("2 3\ncat 1 2 3\ndog 0 1 0\n")).unwrap();
        for t in ["cat", "dog"] {
            let v = table.vector(t).unwrap();
            assert!((cosine(v, v) - 1.0).abs() < 1e-9);
        }
    }
}
