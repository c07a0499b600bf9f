//! Global keyword union and the aligned thematic-area × institution matrices
//! (citation / CRR / CCSRR weights), stored sparsely with zero rows
//! eliminated.

use std::collections::HashMap;
use std::io::Write;

use crate::expertise_profile::RankedProfile;

/// One nonzero matrix cell. A cell exists only where the institution has
/// strictly positive citation strength in the area, so the three weights are
/// positive together.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub institution: usize,
    pub citation: f64,
    pub crr: f64,
    pub ccsrr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TIMatrices {
    /// row labels, lexicographic
    pub areas: Vec<String>,
    /// column labels, input order
    pub institutions: Vec<String>,
    /// rows[t] holds the nonzero cells of area t ordered by institution index
    pub rows: Vec<Vec<Cell>>,
    area_index: HashMap<String, usize>,
    institution_index: HashMap<String, usize>,
}

impl TIMatrices {
    pub fn area_index(&self, area: &str) -> Option<usize> {
        self.area_index.get(area).copied()
    }

    pub fn institution_index(&self, institution: &str) -> Option<usize> {
        self.institution_index.get(institution).copied()
    }

    fn cell(&self, t: usize, i: usize) -> Option<&Cell> {
        let row = &self.rows[t];
        row.binary_search_by_key(&i, |c| c.institution)
            .ok()
            .map(|pos| &row[pos])
    }

    pub fn citation(&self, t: usize, i: usize) -> f64 {
        self.cell(t, i).map(|c| c.citation).unwrap_or(0.0)
    }

    pub fn crr(&self, t: usize, i: usize) -> f64 {
        self.cell(t, i).map(|c| c.crr).unwrap_or(0.0)
    }

    pub fn ccsrr(&self, t: usize, i: usize) -> f64 {
        self.cell(t, i).map(|c| c.ccsrr).unwrap_or(0.0)
    }
}

/// Sorted, deduplicated union of all institutions' keywords.
pub fn union_keywords(profiles: &[RankedProfile]) -> Vec<String> {
    let mut all: Vec<String> = profiles
        .iter()
        .flat_map(|p| p.entries.iter().map(|e| e.keyword.clone()))
        .collect();
    all.sort();
    all.dedup();
    all
}

/// Assemble the three aligned matrices. Entries with zero citation strength
/// are not stored, which also removes all-zero rows.
pub fn build_ti_matrices(profiles: &[RankedProfile]) -> TIMatrices {
    let union = union_keywords(profiles);
    let union_index: HashMap<&str, usize> = union
        .iter()
        .enumerate()
        .map(|(i, k)| (k.as_str(), i))
        .collect();

    let mut rows: Vec<Vec<Cell>> = vec![Vec::new(); union.len()];
    for (i, profile) in profiles.iter().enumerate() {
        for entry in &profile.entries {
            if entry.strength > 0.0 {
                rows[union_index[entry.keyword.as_str()]].push(Cell {
                    institution: i,
                    citation: entry.strength,
                    crr: entry.crr,
                    ccsrr: entry.ccsrr,
                });
            }
        }
    }

    // zero-row elimination
    let mut areas = Vec::new();
    let mut kept_rows = Vec::new();
    for (area, mut row) in union.into_iter().zip(rows) {
        if !row.is_empty() {
            row.sort_by_key(|c| c.institution);
            areas.push(area);
            kept_rows.push(row);
        }
    }

    let area_index = areas
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), i))
        .collect();
    let institutions: Vec<String> = profiles.iter().map(|p| p.institution_id.clone()).collect();
    let institution_index = institutions
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), i))
        .collect();
    TIMatrices {
        areas,
        institutions,
        rows: kept_rows,
        area_index,
        institution_index,
    }
}

/// Coordinate-format dump of nonzero entries:
/// "keyword<TAB>institution<TAB>citation<TAB>crr<TAB>ccsrr".
pub fn write_ti_matrices<W: Write>(w: &mut W, m: &TIMatrices) -> std::io::Result<()> {
    for (area, row) in m.areas.iter().zip(&m.rows) {
        for cell in row {
            writeln!(
                w,
                "{}\t{}\t{}\t{:.4}\t{:.4}",
                area, m.institutions[cell.institution], cell.citation, cell.crr, cell.ccsrr
            )?;
        }
    }
    Ok(())
}
