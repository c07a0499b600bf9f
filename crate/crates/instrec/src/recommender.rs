//! Strategy-1 (strengthen core competency areas) and Strategy-2 (complement
//! potential core competency areas) recommendation retrieval over the
//! thematic-area × institution matrices.

use thiserror::Error;

use crate::thematic_matrices::TIMatrices;

pub const DEFAULT_DELTA: f64 = 0.75;

#[derive(Debug, Error)]
pub enum RecommendError {
    #[error("unknown institution {0}")]
    UnknownInstitution(String),
    #[error("area {0:?} is not a core competency of {1}")]
    AreaNotCore(String, String),
    #[error("area {0:?} is not a potential core competency of {1}")]
    AreaNotPotential(String, String),
    #[error("delta {0} outside [0.5, 1]")]
    InvalidDelta(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RecommendationKind {
    Strategy1,
    HighPriority,
    LowPriority,
}

impl RecommendationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RecommendationKind::Strategy1 => "strategy1",
            RecommendationKind::HighPriority => "high_priority",
            RecommendationKind::LowPriority => "low_priority",
        }
    }
}

/// Recommendations for one (institution, area) query, ordered by descending
/// thematic strength with lexicographic tie-break. Never contains the
/// requesting institution.
#[derive(Debug, Clone, PartialEq)]
pub struct RecommendationSet {
    pub institution_id: String,
    pub area: String,
    pub kind: RecommendationKind,
    pub recommendations: Vec<(String, f64)>,
}

fn institution_index(m: &TIMatrices, id: &str) -> Result<usize, RecommendError> {
    m.institution_index(id)
        .ok_or_else(|| RecommendError::UnknownInstitution(id.to_string()))
}

fn rank_order(mut items: Vec<(String, f64)>) -> Vec<(String, f64)> {
    items.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.0.cmp(&b.0))
    });
    items
}

/// Q: areas where the institution's CRR is at least 1, in profile rank order
/// (strength descending, ties lexicographic).
pub fn strong_areas(institution: &str, m: &TIMatrices) -> Result<Vec<String>, RecommendError> {
    let i = institution_index(m, institution)?;
    let picked = m
        .areas
        .iter()
        .enumerate()
        .filter(|(t, _)| m.crr(*t, i) >= 1.0)
        .map(|(t, area)| (area.clone(), m.citation(t, i)))
        .collect();
    Ok(rank_order(picked).into_iter().map(|(a, _)| a).collect())
}

/// U: areas with CCSRR at least 1 that are not already strong, in profile
/// rank order.
pub fn potential_areas(institution: &str, m: &TIMatrices) -> Result<Vec<String>, RecommendError> {
    let i = institution_index(m, institution)?;
    let picked = m
        .areas
        .iter()
        .enumerate()
        .filter(|(t, _)| m.ccsrr(*t, i) >= 1.0 && m.crr(*t, i) < 1.0)
        .map(|(t, area)| (area.clone(), m.citation(t, i)))
        .collect();
    Ok(rank_order(picked).into_iter().map(|(a, _)| a).collect())
}

/// Strategy-1: among institutions with core competency in `area`, those whose
/// citation strength reaches delta times the requester's.
pub fn strategy1(
    institution: &str,
    area: &str,
    m: &TIMatrices,
    delta: f64,
) -> Result<RecommendationSet, RecommendError> {
    if !(0.5..=1.0).contains(&delta) {
        return Err(RecommendError::InvalidDelta(delta));
    }
    let i = institution_index(m, institution)?;
    let t = m
        .area_index(area)
        .filter(|&t| m.crr(t, i) >= 1.0)
        .ok_or_else(|| RecommendError::AreaNotCore(area.to_string(), institution.to_string()))?;
    let threshold = delta * m.citation(t, i);
    let recommendations = (0..m.institutions.len())
        .filter(|&j| j != i && m.crr(t, j) >= 1.0 && m.citation(t, j) >= threshold)
        .map(|j| (m.institutions[j].clone(), m.citation(t, j)))
        .collect();
    Ok(RecommendationSet {
        institution_id: institution.to_string(),
        area: area.to_string(),
        kind: RecommendationKind::Strategy1,
        recommendations: rank_order(recommendations),
    })
}

/// Strategy-2: high priority is every core-competent institution in `area`;
/// low priority is every potentially-competent one whose CCSRR reaches the
/// requester's.
pub fn strategy2(
    institution: &str,
    area: &str,
    m: &TIMatrices,
) -> Result<(RecommendationSet, RecommendationSet), RecommendError> {
    let i = institution_index(m, institution)?;
    let t = m
        .area_index(area)
        .filter(|&t| m.ccsrr(t, i) >= 1.0 && m.crr(t, i) < 1.0)
        .ok_or_else(|| {
            RecommendError::AreaNotPotential(area.to_string(), institution.to_string())
        })?;

    let high = (0..m.institutions.len())
        .filter(|&j| j != i && m.crr(t, j) >= 1.0)
        .map(|j| (m.institutions[j].clone(), m.citation(t, j)))
        .collect();
    let own_ccsrr = m.ccsrr(t, i);
    let low = (0..m.institutions.len())
        .filter(|&j| {
            j != i && m.crr(t, j) < 1.0 && m.ccsrr(t, j) >= 1.0 && m.ccsrr(t, j) >= own_ccsrr
        })
        .map(|j| (m.institutions[j].clone(), m.citation(t, j)))
        .collect();
    let set = |kind, recommendations| RecommendationSet {
        institution_id: institution.to_string(),
        area: area.to_string(),
        kind,
        recommendations: rank_order(recommendations),
    };
    Ok((
        set(RecommendationKind::HighPriority, high),
        set(RecommendationKind::LowPriority, low),
    ))
}

/// Strategy-1 over every strong area and strategy-2 over every potential
/// area, in profile rank order.
pub fn recommend_all(
    institution: &str,
    m: &TIMatrices,
    delta: f64,
) -> Result<Vec<RecommendationSet>, RecommendError> {
    let mut out = Vec::new();
    for area in strong_areas(institution, m)? {
        out.push(strategy1(institution, &area, m, delta)?);
    }
    for area in potential_areas(institution, m)? {
        let (high, low) = strategy2(institution, &area, m)?;
        out.push(high);
        out.push(low);
    }
    Ok(out)
}
