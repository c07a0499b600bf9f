//! Ranking of thematic strengths and the x / x(g) expertise indices with the
//! resulting core / potential-core competency split.
//!
//! For the profile sorted by descending strength, CRR at rank r is
//! strength_r / r and CCSRR is the cumulative strength through r divided by
//! r². x is the largest r with strength_r >= r; x(g) is the largest r (up to
//! the profile length) with cumulative strength >= r².

use std::io::Write;

use crate::affiliation_network::ThematicProfile;

#[derive(Debug, Clone, PartialEq)]
pub struct RankedEntry {
    pub keyword: String,
    pub strength: f64,
    pub crr: f64,
    pub ccsrr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedProfile {
    pub institution_id: String,
    pub entries: Vec<RankedEntry>,
    pub x: usize,
    pub xg: usize,
}

/// Sort by strength descending (ties lexicographic by keyword) and fill
/// CRR/CCSRR and both indices.
pub fn rank_profile(profile: &ThematicProfile) -> RankedProfile {
    let mut sorted: Vec<(&String, f64)> = profile
        .strength
        .iter()
        .map(|(k, &s)| (k, s))
        .collect();
    sorted.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.0.cmp(b.0))
    });

    let mut entries = Vec::with_capacity(sorted.len());
    let mut cumulative = 0.0;
    for (i, (keyword, strength)) in sorted.into_iter().enumerate() {
        let r = (i + 1) as f64;
        cumulative += strength;
        entries.push(RankedEntry {
            keyword: keyword.clone(),
            strength,
            crr: strength / r,
            ccsrr: cumulative / (r * r),
        });
    }
    let mut rp = RankedProfile {
        institution_id: profile.institution_id.clone(),
        entries,
        x: 0,
        xg: 0,
    };
    rp.x = x_index(&rp);
    rp.xg = xg_index(&rp);
    rp
}

/// Largest rank r with strength_r >= r, 0 if none.
pub fn x_index(rp: &RankedProfile) -> usize {
    rp.entries
        .iter()
        .enumerate()
        .rev()
        .find(|(i, e)| e.strength >= (i + 1) as f64)
        .map(|(i, _)| i + 1)
        .unwrap_or(0)
}

/// Largest rank r (capped at the profile length) with cumulative strength
/// through r >= r², 0 if none.
pub fn xg_index(rp: &RankedProfile) -> usize {
    let mut cumulative = 0.0;
    let mut best = 0;
    for (i, e) in rp.entries.iter().enumerate() {
        cumulative += e.strength;
        let r = i + 1;
        if cumulative >= (r * r) as f64 {
            best = r;
        }
    }
    best
}

/// Core competencies are the top x areas; potential core competencies the
/// areas ranked x+1 .. x(g).
pub fn competency_split(rp: &RankedProfile) -> (Vec<String>, Vec<String>) {
    let core = rp.entries[..rp.x].iter().map(|e| e.keyword.clone()).collect();
    let potential = rp.entries[rp.x..rp.xg]
        .iter()
        .map(|e| e.keyword.clone())
        .collect();
    (core, potential)
}

/// Per-institution profile dump: "rank keyword strength crr ccsrr" with
/// ratios at 4 decimals, preceded by the index values.
pub fn write_profile<W: Write>(w: &mut W, rp: &RankedProfile) -> std::io::Result<()> {
    writeln!(w, "# x\t{}", rp.x)?;
    writeln!(w, "# xg\t{}", rp.xg)?;
    for (i, e) in rp.entries.iter().enumerate() {
        writeln!(
            w,
            "{}\t{}\t{}\t{:.4}\t{:.4}",
            i + 1,
            e.keyword,
            e.strength,
            e.crr,
            e.ccsrr
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    pub fn profile_from(strengths: &[f64]) -> RankedProfile {
        let strength: BTreeMap<String, f64> = strengths
            .iter()
            .enumerate()
            .map(|(i, &s)| (format!("k{i:04}"), s))
            .collect();
        rank_profile(&ThematicProfile {
            institution_id: "i".into(),
            strength,
        })
    }

    /// Top-20 thematic strengths of the worked institutional example.
    pub const WORKED_TOP20: [f64; 20] = [
        54.0, 48.0, 45.0, 41.0, 37.0, 37.0, 37.0, 36.0, 30.0, 30.0, 28.0, 28.0, 25.0, 25.0, 18.0,
        18.0, 17.0, 17.0, 17.0, 17.0,
    ];

    #[test]
    fn worked_example_x_index_is_17() {
        let rp = profile_from(&WORKED_TOP20);
        assert_eq!(rp.x, 17);
    }

    #[test]
    fn worked_example_crr_values() {
        let rp = profile_from(&WORKED_TOP20);
        assert!((rp.entries[3].crr - 10.25).abs() < 1e-12);
        assert!((rp.entries[17].crr - 17.0 / 18.0).abs() < 1e-12);
    }

    #[test]
    fn ccsrr_is_cumulative_over_squared_rank() {
        let rp = profile_from(&WORKED_TOP20);
        assert!((rp.entries[1].ccsrr - (54.0 + 48.0) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn single_entry_profile() {
        let rp = profile_from(&[1.0]);
        assert_eq!(rp.entries[0].crr, 1.0);
        assert_eq!(rp.entries[0].ccsrr, 1.0);
        assert_eq!(rp.x, 1);
        assert_eq!(rp.xg, 1);
    }

    #[test]
    fn empty_profile_indices_are_zero() {
        let rp = profile_from(&[]);
        assert_eq!(rp.x, 0);
        assert_eq!(rp.xg, 0);
    }

    #[test]
    fn small_hand_traced_indices() {
        let rp = profile_from(&[6.0, 5.0, 4.0, 1.0]);
        assert_eq!(rp.x, 3);
        // cumulative through 4 is 16 >= 16
        assert_eq!(rp.xg, 4);
    }

    #[test]
    fn split_is_disjoint_and_sized() {
        let rp = profile_from(&[6.0, 5.0, 4.0, 1.0]);
        let (core, potential) = competency_split(&rp);
        assert_eq!(core.len(), 3);
        assert_eq!(potential.len(), 1);
        assert!(core.iter().all(|k| !potential.contains(k)));
    }

    #[test]
    fn split_empty_potential_when_x_equals_xg() {
        let rp = profile_from(&[1.0]);
        let (_, potential) = competency_split(&rp);
        assert!(potential.is_empty());
    }

    #[test]
    fn zero_strength_keyword_changes_neither_index() {
        let base = profile_from(&[6.0, 5.0, 4.0, 1.0]);
        let extended = profile_from(&[6.0, 5.0, 4.0, 1.0, 0.0]);
        assert_eq!(base.x, extended.x);
        assert_eq!(base.xg, extended.xg);
    }

    #[test]
    fn threshold_ratios_exceed_one_inside_the_cores() {
        let rp = profile_from(&WORKED_TOP20);
        assert!(rp.entries[rp.x - 1].crr >= 1.0);
        assert!(rp.entries[rp.xg - 1].ccsrr >= 1.0);
    }
}
