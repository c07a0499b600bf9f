//! Parsing of tab-delimited bibliographic exports into per-institution
//! publication datasets, plus the publication-count inclusion filter.
//!
//! The expected input is one UTF-8 TSV file per institution whose header row
//! holds two-letter field tags (`UT` record id, `DE` author keywords,
//! `Z9` total citations, optional `PY` year).

use std::collections::HashSet;
use std::io::{BufRead, Write};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("missing required column {0}")]
    MissingColumn(String),
    #[error("malformed row at line {0}: column count mismatches header")]
    MalformedRow(usize),
    #[error("non-numeric citation score at line {0}")]
    NonNumericScore(usize),
    #[error("duplicate record uid {0}")]
    DuplicateUid(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicationRecord {
    pub uid: String,
    pub author_keywords: Vec<String>,
    pub citation_count: u64,
    pub year: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstitutionDataset {
    pub institution_id: String,
    pub records: Vec<PublicationRecord>,
}

#[derive(Debug, Clone)]
pub struct CorpusConfig {
    pub min_publications: usize,
    pub year_range: (i32, i32),
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            min_publications: 25,
            year_range: (2010, 2019),
        }
    }
}

/// Split a raw `DE` field on ";", trim, lowercase, drop empties and collapse
/// duplicates to their first occurrence.
pub fn split_keyword_field(raw: &str) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for part in raw.split(';') {
        let kw = part.trim().to_lowercase();
        if !kw.is_empty() && seen.insert(kw.clone()) {
            out.push(kw);
        }
    }
    out
}

/// Parse one institution's export. The first line must be a tab-separated
/// header containing at least `UT` and `DE`; a missing `Z9` column is treated
/// as all scores zero.
pub fn parse_wos_export<R: BufRead>(
    reader: R,
    institution_id: &str,
) -> Result<InstitutionDataset, IngestError> {
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(line) => line?,
        None => return Err(IngestError::MissingColumn("UT".into())),
    };
    let tags: Vec<&str> = header.split('\t').collect();
    let col = |tag: &str| tags.iter().position(|t| *t == tag);
    let ut = col("UT").ok_or_else(|| IngestError::MissingColumn("UT".into()))?;
    let de = col("DE").ok_or_else(|| IngestError::MissingColumn("DE".into()))?;
    let z9 = col("Z9");
    let py = col("PY");

    let mut records = Vec::new();
    let mut uids = HashSet::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let line_no = idx + 2;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != tags.len() {
            return Err(IngestError::MalformedRow(line_no));
        }
        let uid = fields[ut].trim().to_string();
        if !uids.insert(uid.clone()) {
            return Err(IngestError::DuplicateUid(uid));
        }
        let citation_count = match z9.map(|i| fields[i].trim()) {
            None | Some("") => 0,
            Some(raw) => raw
                .parse::<u64>()
                .map_err(|_| IngestError::NonNumericScore(line_no))?,
        };
        let year = py
            .map(|i| fields[i].trim())
            .filter(|s| !s.is_empty())
            .and_then(|s| s.parse::<i32>().ok());
        records.push(PublicationRecord {
            uid,
            author_keywords: split_keyword_field(fields[de]),
            citation_count,
            year,
        });
    }
    Ok(InstitutionDataset {
        institution_id: institution_id.to_string(),
        records,
    })
}

/// Serialize a dataset back to the export format, inverse of
/// [`parse_wos_export`] on well-formed data.
pub fn write_wos_export<W: Write>(w: &mut W, ds: &InstitutionDataset) -> std::io::Result<()> {
    writeln!(w, "UT\tDE\tZ9\tPY")?;
    for rec in &ds.records {
        writeln!(
            w,
            "{}\t{}\t{}\t{}",
            rec.uid,
            rec.author_keywords.join("; "),
            rec.citation_count,
            rec.year.map(|y| y.to_string()).unwrap_or_default()
        )?;
    }
    Ok(())
}

/// Trim records to the configured year window (records without a year are
/// kept) and drop institutions below the publication threshold.
pub fn apply_inclusion_filter(
    datasets: Vec<InstitutionDataset>,
    cfg: &CorpusConfig,
) -> Vec<InstitutionDataset> {
    let (start, end) = cfg.year_range;
    datasets
        .into_iter()
        .filter_map(|mut ds| {
            ds.records
                .retain(|r| r.year.map(|y| y >= start && y <= end).unwrap_or(true));
            if ds.records.len() >= cfg.min_publications {
                Some(ds)
            } else {
                None
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn parse(text: &str) -> Result<InstitutionDataset, IngestError> {
        parse_wos_export(Cursor::new(text), "inst")
    }

    #[test]
    fn parses_basic_row() {
        let ds = parse("UT\tDE\tZ9\tPY\nW1\tCyber physical systems; SVM\t5\t2015\n").unwrap();
        assert_eq!(ds.records.len(), 1);
        let r = &ds.records[0];
        assert_eq!(r.uid, "W1");
        assert_eq!(r.author_keywords, vec!["cyber physical systems", "svm"]);
        assert_eq!(r.citation_count, 5);
        assert_eq!(r.year, Some(2015));
    }

    #[test]
    fn blank_score_defaults_to_zero() {
        let ds = parse("UT\tDE\tZ9\tPY\nW1\tsvm\t\t2015\n").unwrap();
        assert_eq!(ds.records[0].citation_count, 0);
    }

    #[test]
    fn empty_keyword_field_yields_empty_list() {
        let ds = parse("UT\tDE\tZ9\tPY\nW2\t\t3\t2014\n").unwrap();
        assert!(ds.records[0].author_keywords.is_empty());
    }

    #[test]
    fn missing_de_column_is_an_error() {
        assert!(matches!(
            parse("UT\tZ9\nW1\t3\n"),
            Err(IngestError::MissingColumn(tag)) if tag == "DE"
        ));
    }

    #[test]
    fn column_count_mismatch_is_an_error() {
        assert!(matches!(
            parse("UT\tDE\tZ9\nW1\tsvm\n"),
            Err(IngestError::MalformedRow(2))
        ));
    }

    #[test]
    fn non_numeric_score_is_an_error() {
        assert!(matches!(
            parse("UT\tDE\tZ9\nW1\tsvm\tfive\n"),
            Err(IngestError::NonNumericScore(2))
        ));
    }

    #[test]
    fn duplicate_uid_is_an_error() {
        assert!(matches!(
            parse("UT\tDE\tZ9\nW1\tsvm\t1\nW1\tcnn\t2\n"),
            Err(IngestError::DuplicateUid(uid)) if uid == "W1"
        ));
    }

    #[test]
    fn split_trims_lowercases_and_keeps_order() {
        assert_eq!(
            split_keyword_field("Cyber physical system (cps); SVM"),
            vec!["cyber physical system (cps)", "svm"]
        );
        assert_eq!(split_keyword_field(""), Vec::<String>::new());
        assert_eq!(split_keyword_field("a; a ;A"), vec!["a"]);
    }

    fn dataset_with(n: usize, year: i32) -> InstitutionDataset {
        InstitutionDataset {
            institution_id: format!("inst-{n}-{year}"),
            records: (0..n)
                .map(|i| PublicationRecord {
                    uid: format!("W{i}"),
                    author_keywords: vec!["svm".into()],
                    citation_count: 1,
                    year: Some(year),
                })
                .collect(),
        }
    }

    #[test]
    fn filter_drops_small_institutions() {
        let cfg = CorpusConfig::default();
        let out = apply_inclusion_filter(vec![dataset_with(24, 2015), dataset_with(25, 2015)], &cfg);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].records.len(), 25);
    }

    #[test]
    fn filter_with_zero_threshold_is_identity_after_year_trim() {
        let cfg = CorpusConfig {
            min_publications: 0,
            ..CorpusConfig::default()
        };
        let input = vec![dataset_with(3, 2015)];
        assert_eq!(apply_inclusion_filter(input.clone(), &cfg), input);
    }

    #[test]
    fn filter_removes_out_of_range_records_but_keeps_yearless() {
        let mut ds = dataset_with(25, 2005);
        ds.records[0].year = None;
        let out = apply_inclusion_filter(
            vec![ds],
            &CorpusConfig {
                min_publications: 1,
                ..CorpusConfig::default()
            },
        );
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].records.len(), 1);
        assert_eq!(out[0].records[0].year, None);
    }

    #[test]
    fn roundtrip_through_writer() {
        let ds = parse("UT\tDE\tZ9\tPY\nW1\tsvm; cnn\t5\t2015\nW2\t\t0\t\n").unwrap();
        let mut buf = Vec::new();
        write_wos_export(&mut buf, &ds).unwrap();
        let reparsed = parse_wos_export(Cursor::new(buf), "inst").unwrap();
        assert_eq!(reparsed, ds);
    }
}
