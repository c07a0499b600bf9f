//! Recommendation-set evaluation: novelty (median frequency over target-set
//! size), intra-set coverage (Gini index), inter-set coverage (Jaccard
//! dissimilarity), diversity (Shannon entropy and equitability), x-index
//! grouping and the qualitative interpretation bands.

use std::collections::{BTreeMap, HashSet};
use std::io::BufRead;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvaluationError {
    #[error("empty frequency table")]
    EmptyFrequencyTable,
    #[error("all class frequencies are zero")]
    AllZero,
    #[error("entropy needs at least 2 classes, got {0}")]
    DegenerateClassCount(usize),
    #[error("metric value {0} outside [0, 1]")]
    OutOfRange(f64),
    #[error("malformed fixture line {0}")]
    MalformedFixture(usize),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// How often each institution appears in one recommendation output.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    pub counts: BTreeMap<String, u64>,
}

impl FrequencyTable {
    pub fn record(&mut self, institution: &str) {
        *self.counts.entry(institution.to_string()).or_insert(0) += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn unique(&self) -> usize {
        self.counts.len()
    }

    pub fn members(&self) -> HashSet<&str> {
        self.counts.keys().map(|s| s.as_str()).collect()
    }
}

fn median(sorted: &[u64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) as f64 / 2.0
    }
}

/// Median recommendation frequency over the number of institutions that
/// received at least one recommendation of this kind. Lower is more novel.
pub fn novelty_index(table: &FrequencyTable, n_target: usize) -> Result<f64, EvaluationError> {
    if table.counts.is_empty() {
        return Err(EvaluationError::EmptyFrequencyTable);
    }
    let mut freqs: Vec<u64> = table.counts.values().copied().collect();
    freqs.sort_unstable();
    Ok(median(&freqs) / n_target.max(1) as f64)
}

/// Gini index over ascending-sorted recommendation proportions:
/// (1/n) Σ (2i − n − 1) p_(i).
pub fn gini_index(table: &FrequencyTable) -> Result<f64, EvaluationError> {
    if table.counts.is_empty() {
        return Err(EvaluationError::EmptyFrequencyTable);
    }
    let total = table.total() as f64;
    let mut proportions: Vec<f64> = table.counts.values().map(|&f| f as f64 / total).collect();
    proportions.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = proportions.len() as f64;
    let sum: f64 = proportions
        .iter()
        .enumerate()
        .map(|(idx, p)| (2.0 * (idx + 1) as f64 - n - 1.0) * p)
        .sum();
    Ok(sum / n)
}

/// 1 − |A∩B| / |A∪B|; 0 when both sets are empty.
pub fn jaccard_dissimilarity<T: Eq + std::hash::Hash>(a: &HashSet<T>, b: &HashSet<T>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 0.0;
    }
    1.0 - a.intersection(b).count() as f64 / union as f64
}

/// Natural-log entropy over class proportions; zero-frequency classes are
/// excluded from the sum.
pub fn shannon_entropy(class_freqs: &[u64]) -> Result<f64, EvaluationError> {
    let total: u64 = class_freqs.iter().sum();
    if total == 0 {
        return Err(EvaluationError::AllZero);
    }
    let h: f64 = class_freqs
        .iter()
        .filter(|&&f| f > 0)
        .map(|&f| {
            let p = f as f64 / total as f64;
            -p * p.ln()
        })
        .sum();
    Ok(h + 0.0) // avoid negative zero when one class holds all mass
}

/// Shannon equitability E(H) = H / ln(K).
pub fn equitability(h: f64, k: usize) -> Result<f64, EvaluationError> {
    if k < 2 {
        return Err(EvaluationError::DegenerateClassCount(k));
    }
    Ok(h / (k as f64).ln())
}

/// Group labels by x-index: 1 for x > 80, 2 for 60 < x <= 80, 3 for
/// 40 < x <= 60, 4 otherwise.
pub fn assign_group(x: usize) -> u8 {
    if x > 80 {
        1
    } else if x > 60 {
        2
    } else if x > 40 {
        3
    } else {
        4
    }
}

pub fn assign_groups<'a, I>(x_values: I) -> BTreeMap<String, u8>
where
    I: IntoIterator<Item = (&'a str, usize)>,
{
    x_values
        .into_iter()
        .map(|(id, x)| (id.to_string(), assign_group(x)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Band {
    VeryHigh,
    High,
    Moderate,
    Low,
    VeryLow,
}

impl Band {
    pub fn as_str(&self) -> &'static str {
        match self {
            Band::VeryHigh => "VeryHigh",
            Band::High => "High",
            Band::Moderate => "Moderate",
            Band::Low => "Low",
            Band::VeryLow => "VeryLow",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    LowerBetter,
    HigherBetter,
}

/// Thumb-rule interpretation bands on [0, 1].
pub fn interpret_score(value: f64, orientation: Orientation) -> Result<Band, EvaluationError> {
    if !(0.0..=1.0).contains(&value) {
        return Err(EvaluationError::OutOfRange(value));
    }
    let band = if value <= 0.15 {
        0
    } else if value <= 0.35 {
        1
    } else if value <= 0.6 {
        2
    } else if value <= 0.85 {
        3
    } else {
        4
    };
    let lower_better = [Band::VeryHigh, Band::High, Band::Moderate, Band::Low, Band::VeryLow];
    let higher_better = [Band::VeryLow, Band::Low, Band::Moderate, Band::High, Band::VeryHigh];
    Ok(match orientation {
        Orientation::LowerBetter => lower_better[band],
        Orientation::HigherBetter => higher_better[band],
    })
}

/// One parsed fixture: per-institution frequency and group label,
/// TSV "institution<TAB>frequency<TAB>group".
#[derive(Debug, Clone, Default)]
pub struct Fixture {
    pub table: FrequencyTable,
    pub groups: BTreeMap<String, u8>,
}

impl Fixture {
    pub fn class_frequencies(&self, k: u8) -> Vec<u64> {
        let mut freqs = vec![0u64; k as usize];
        for (inst, &count) in &self.table.counts {
            if let Some(&g) = self.groups.get(inst) {
                if (1..=k).contains(&g) {
                    freqs[(g - 1) as usize] += count;
                }
            }
        }
        freqs
    }
}

pub fn read_fixture<R: BufRead>(reader: R) -> Result<Fixture, EvaluationError> {
    let mut fixture = Fixture::default();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split('\t');
        let (inst, freq, group) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
            (Some(i), Some(f), Some(g), None) => (i, f, g),
            _ => return Err(EvaluationError::MalformedFixture(idx + 1)),
        };
        let freq: u64 = freq
            .trim()
            .parse()
            .map_err(|_| EvaluationError::MalformedFixture(idx + 1))?;
        let group: u8 = group
            .trim()
            .parse()
            .map_err(|_| EvaluationError::MalformedFixture(idx + 1))?;
        fixture.table.counts.insert(inst.to_string(), freq);
        fixture.groups.insert(inst.to_string(), group);
    }
    Ok(fixture)
}

/// Evaluation of one recommendation set against K = 4 groups.
#[derive(Debug, Clone, Serialize)]
pub struct SetEvaluation {
    pub unique: usize,
    pub total: u64,
    pub novelty: f64,
    pub novelty_band: Band,
    pub gini: f64,
    pub gini_band: Band,
    pub entropy: f64,
    pub equitability: f64,
    pub equitability_band: Band,
}

pub const GROUP_COUNT: u8 = 4;

pub fn evaluate_set(
    table: &FrequencyTable,
    groups: &BTreeMap<String, u8>,
    n_target: usize,
) -> Result<SetEvaluation, EvaluationError> {
    let novelty = novelty_index(table, n_target)?;
    let gini = gini_index(table)?;
    let fixture = Fixture {
        table: table.clone(),
        groups: groups.clone(),
    };
    let entropy = shannon_entropy(&fixture.class_frequencies(GROUP_COUNT))?;
    let equit = equitability(entropy, GROUP_COUNT as usize)?;
    Ok(SetEvaluation {
        unique: table.unique(),
        total: table.total(),
        novelty,
        novelty_band: interpret_score(novelty.min(1.0), Orientation::LowerBetter)?,
        gini,
        gini_band: interpret_score(gini.clamp(0.0, 1.0), Orientation::LowerBetter)?,
        entropy,
        equitability: equit,
        equitability_band: interpret_score(equit.clamp(0.0, 1.0), Orientation::HigherBetter)?,
    })
}
