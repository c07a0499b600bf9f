//! End-to-end batch pipeline: ingest → normalize → network → expertise →
//! matrices → recommend → evaluate, driven by a flat key-value config file.
//!
//! Every stage reads its upstream artifacts from disk and writes plain
//! TSV/CSV artifacts, so a monolithic run and a stage-by-stage run produce
//! byte-identical outputs.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::affiliation_network::{
    build_wka, citation_scores, inject_scores, weighted_indegree, ThematicProfile,
};
use crate::corpus_ingest::{
    apply_inclusion_filter, parse_wos_export, write_wos_export, CorpusConfig, IngestError,
    InstitutionDataset,
};
use crate::embedding_store::{load_embeddings, train_skipgram, EmbeddingError, TrainParams};
use crate::evaluation::{
    evaluate_set, interpret_score, jaccard_dissimilarity, Band, EvaluationError, FrequencyTable,
    Orientation, SetEvaluation,
};
use crate::expertise_profile::{rank_profile, write_profile, RankedProfile};
use crate::keyword_normalizer::{
    canonicalize_by_similarity, fold_plurals, normalize_dataset, write_audit,
};
use crate::recommender::{recommend_all, RecommendError, RecommendationKind};
use crate::thematic_matrices::{build_ti_matrices, write_ti_matrices};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config error: {0}")]
    Config(String),
    #[error("no institution files in input directory")]
    NoInstitutionFiles,
    #[error("missing upstream outputs for stage {0}")]
    MissingUpstream(Stage),
    #[error("malformed intermediate file {0}")]
    MalformedIntermediate(PathBuf),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Recommend(#[from] RecommendError),
    #[error(transparent)]
    Evaluation(#[from] EvaluationError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbeddingsMode {
    Load,
    Train,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub input_dir: PathBuf,
    pub output_dir: PathBuf,
    pub embeddings_mode: EmbeddingsMode,
    pub embeddings_path: PathBuf,
    pub delta: f64,
    pub min_publications: usize,
    pub year_range: (i32, i32),
    pub top_k_similar: usize,
    pub selected_institutions: Vec<String>,
    pub score_file: Option<PathBuf>,
    pub seed: u64,
}

impl PipelineConfig {
    /// Parse a flat "key = value" file ('#' starts a comment line). Relative
    /// paths are resolved against the config file's directory.
    pub fn from_file(path: &Path) -> Result<PipelineConfig, PipelineError> {
        let text = fs::read_to_string(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let mut map = HashMap::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| PipelineError::Config(format!("bad config line {line:?}")))?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        let get = |key: &str| -> Result<&String, PipelineError> {
            map.get(key)
                .ok_or_else(|| PipelineError::Config(format!("missing key {key:?}")))
        };
        fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T, PipelineError> {
            value
                .parse()
                .map_err(|_| PipelineError::Config(format!("bad value for {key:?}: {value:?}")))
        }
        let resolve = |p: &str| {
            let p = Path::new(p);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base.join(p)
            }
        };

        let embeddings_mode = match get("embeddings_mode")?.as_str() {
            "load" => EmbeddingsMode::Load,
            "train" => EmbeddingsMode::Train,
            other => {
                return Err(PipelineError::Config(format!(
                    "embeddings_mode must be load or train, got {other:?}"
                )))
            }
        };
        let cfg = PipelineConfig {
            input_dir: resolve(get("input_dir")?),
            output_dir: resolve(get("output_dir")?),
            embeddings_mode,
            embeddings_path: resolve(get("embeddings_path")?),
            delta: map
                .get("delta")
                .map(|v| parse_num("delta", v))
                .transpose()?
                .unwrap_or(crate::recommender::DEFAULT_DELTA),
            min_publications: map
                .get("min_publications")
                .map(|v| parse_num("min_publications", v))
                .transpose()?
                .unwrap_or(25),
            year_range: (
                map.get("year_start")
                    .map(|v| parse_num("year_start", v))
                    .transpose()?
                    .unwrap_or(2010),
                map.get("year_end")
                    .map(|v| parse_num("year_end", v))
                    .transpose()?
                    .unwrap_or(2019),
            ),
            top_k_similar: map
                .get("top_k_similar")
                .map(|v| parse_num("top_k_similar", v))
                .transpose()?
                .unwrap_or(5),
            selected_institutions: map
                .get("selected_institutions")
                .map(|v| {
                    v.split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect()
                })
                .unwrap_or_default(),
            score_file: map.get("score_file").map(|v| resolve(v)),
            seed: map
                .get("seed")
                .map(|v| parse_num("seed", v))
                .transpose()?
                .unwrap_or(42),
        };
        if !(0.5..=1.0).contains(&cfg.delta) {
            return Err(PipelineError::Config(format!(
                "delta {} outside [0.5, 1]",
                cfg.delta
            )));
        }
        if cfg.top_k_similar < 1 {
            return Err(PipelineError::Config("top_k_similar must be >= 1".into()));
        }
        if cfg.year_range.0 > cfg.year_range.1 {
            return Err(PipelineError::Config("year_start > year_end".into()));
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Ingest,
    Normalize,
    Network,
    Expertise,
    Matrices,
    Recommend,
    Evaluate,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::Ingest,
        Stage::Normalize,
        Stage::Network,
        Stage::Expertise,
        Stage::Matrices,
        Stage::Recommend,
        Stage::Evaluate,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Normalize => "normalize",
            Stage::Network => "network",
            Stage::Expertise => "expertise",
            Stage::Matrices => "matrices",
            Stage::Recommend => "recommend",
            Stage::Evaluate => "evaluate",
        }
    }
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Stage {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Stage::ALL
            .into_iter()
            .find(|stage| stage.as_str() == s)
            .ok_or_else(|| format!("unknown stage {s:?}"))
    }
}

// artifact paths under the output directory
fn stage_dir(cfg: &PipelineConfig, name: &str) -> PathBuf {
    cfg.output_dir.join("stage").join(name)
}

fn profiles_dir(cfg: &PipelineConfig) -> PathBuf {
    cfg.output_dir.join("profiles")
}

fn canonical_map_path(cfg: &PipelineConfig) -> PathBuf {
    cfg.output_dir.join("canonical_map.tsv")
}

fn ti_matrix_path(cfg: &PipelineConfig) -> PathBuf {
    cfg.output_dir.join("ti_matrix.tsv")
}

fn recommendations_path(cfg: &PipelineConfig) -> PathBuf {
    cfg.output_dir.join("recommendations.csv")
}

/// A batch of artifacts that only reaches disk when the whole stage
/// succeeded; partially written files are removed again.
#[derive(Default)]
struct ArtifactBatch {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl ArtifactBatch {
    fn add(&mut self, path: PathBuf, bytes: Vec<u8>) {
        self.files.push((path, bytes));
    }

    fn persist(self) -> Result<(), PipelineError> {
        let mut written = Vec::new();
        for (path, bytes) in &self.files {
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent)?;
            }
            if let Err(e) = fs::write(path, bytes) {
                for p in written {
                    let _ = fs::remove_file(p);
                }
                return Err(e.into());
            }
            written.push(path.clone());
        }
        Ok(())
    }
}

fn list_tsv_files(dir: &Path) -> Result<Vec<PathBuf>, PipelineError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().map(|e| e == "tsv").unwrap_or(false))
        .collect();
    files.sort();
    Ok(files)
}

fn institution_id(path: &Path) -> String {
    path.file_stem().unwrap_or_default().to_string_lossy().into_owned()
}

fn read_datasets(dir: &Path, stage: Stage) -> Result<Vec<InstitutionDataset>, PipelineError> {
    if !dir.is_dir() {
        return Err(PipelineError::MissingUpstream(stage));
    }
    let files = list_tsv_files(dir)?;
    if files.is_empty() {
        return Err(PipelineError::MissingUpstream(stage));
    }
    files
        .iter()
        .map(|path| {
            let file = fs::File::open(path)?;
            Ok(parse_wos_export(BufReader::new(file), &institution_id(path))?)
        })
        .collect()
}

fn stage_ingest(cfg: &PipelineConfig) -> Result<(), PipelineError> {
    if !cfg.input_dir.is_dir() {
        return Err(PipelineError::NoInstitutionFiles);
    }
    let files = list_tsv_files(&cfg.input_dir)?;
    if files.is_empty() {
        return Err(PipelineError::NoInstitutionFiles);
    }
    let mut datasets = Vec::new();
    for path in &files {
        let file = fs::File::open(path)?;
        datasets.push(parse_wos_export(BufReader::new(file), &institution_id(path))?);
    }
    let corpus_cfg = CorpusConfig {
        min_publications: cfg.min_publications,
        year_range: cfg.year_range,
    };
    let surviving = apply_inclusion_filter(datasets, &corpus_cfg);

    let mut batch = ArtifactBatch::default();
    let dir = stage_dir(cfg, "ingest");
    for ds in &surviving {
        let mut buf = Vec::new();
        write_wos_export(&mut buf, ds)?;
        batch.add(dir.join(format!("{}.tsv", ds.institution_id)), buf);
    }
    // marker so an all-filtered corpus still counts as a completed stage
    batch.add(dir.join(".complete"), Vec::new());
    batch.persist()
}

fn load_embedding_table(cfg: &PipelineConfig) -> Result<crate::embedding_store::EmbeddingTable, PipelineError> {
    match cfg.embeddings_mode {
        EmbeddingsMode::Load => {
            let file = fs::File::open(&cfg.embeddings_path)?;
            Ok(load_embeddings(BufReader::new(file))?)
        }
        EmbeddingsMode::Train => {
            let text = fs::read_to_string(&cfg.embeddings_path)?;
            let corpus: Vec<Vec<String>> = text
                .lines()
                .map(|l| l.split_whitespace().map(|t| t.to_lowercase()).collect())
                .filter(|s: &Vec<String>| !s.is_empty())
                .collect();
            let params = TrainParams {
                seed: cfg.seed,
                ..TrainParams::default()
            };
            Ok(train_skipgram(&corpus, &params)?)
        }
    }
}

fn stage_normalize(cfg: &PipelineConfig) -> Result<(), PipelineError> {
    let ingest_dir = stage_dir(cfg, "ingest");
    if !ingest_dir.join(".complete").is_file() {
        return Err(PipelineError::MissingUpstream(Stage::Normalize));
    }
    let datasets = match read_datasets(&ingest_dir, Stage::Normalize) {
        Ok(ds) => ds,
        Err(PipelineError::MissingUpstream(_)) => Vec::new(),
        Err(e) => return Err(e),
    };
    let table = load_embedding_table(cfg)?;

    let mut frequencies: HashMap<String, u64> = HashMap::new();
    for ds in &datasets {
        for rec in &ds.records {
            for kw in &rec.author_keywords {
                *frequencies.entry(kw.clone()).or_insert(0) += 1;
            }
        }
    }
    let m1 = canonicalize_by_similarity(&frequencies, &table, cfg.top_k_similar);
    let image: HashSet<String> = frequencies
        .keys()
        .map(|kw| m1.apply(kw).to_string())
        .collect();
    let m2 = fold_plurals(image.iter().map(|s| s.as_str()));

    let mut batch = ArtifactBatch::default();
    let mut audit = Vec::new();
    write_audit(&mut audit, frequencies.keys().map(|s| s.as_str()), &m1, &m2)?;
    batch.add(canonical_map_path(cfg), audit);

    let dir = stage_dir(cfg, "normalize");
    for ds in &datasets {
        let normalized = normalize_dataset(ds, &m1, &m2);
        let mut buf = Vec::new();
        write_wos_export(&mut buf, &normalized)?;
        batch.add(dir.join(format!("{}.tsv", ds.institution_id)), buf);
    }
    batch.add(dir.join(".complete"), Vec::new());
    batch.persist()
}

fn read_score_overrides(path: &Path) -> Result<HashMap<String, f64>, PipelineError> {
    let mut scores = HashMap::new();
    for (idx, line) in fs::read_to_string(path)?.lines().enumerate() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parsed = line.split_once('\t').and_then(|(uid, score)| {
            score
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|s| *s >= 0.0)
                .map(|s| (uid.to_string(), s))
        });
        match parsed {
            Some((uid, score)) => {
                scores.insert(uid, score);
            }
            None => {
                return Err(PipelineError::MalformedIntermediate(
                    path.join(format!("line-{}", idx + 1)),
                ))
            }
        }
    }
    Ok(scores)
}

fn stage_network(cfg: &PipelineConfig) -> Result<(), PipelineError> {
    let normalize_dir = stage_dir(cfg, "normalize");
    if !normalize_dir.join(".complete").is_file() {
        return Err(PipelineError::MissingUpstream(Stage::Network));
    }
    let datasets = match read_datasets(&normalize_dir, Stage::Network) {
        Ok(ds) => ds,
        Err(PipelineError::MissingUpstream(_)) => Vec::new(),
        Err(e) => return Err(e),
    };
    let overrides = cfg
        .score_file
        .as_deref()
        .map(read_score_overrides)
        .transpose()?
        .unwrap_or_default();

    let mut batch = ArtifactBatch::default();
    let dir = stage_dir(cfg, "network");
    for ds in &datasets {
        let mut scores = citation_scores(ds);
        for (uid, score) in &overrides {
            if scores.contains_key(uid) {
                scores.insert(uid.clone(), *score);
            }
        }
        let profile = weighted_indegree(&inject_scores(&build_wka(ds), &scores));
        let mut buf = Vec::new();
        for (keyword, strength) in &profile.strength {
            writeln!(&mut buf, "{keyword}\t{strength}")?;
        }
        batch.add(dir.join(format!("{}.tsv", ds.institution_id)), buf);
    }
    batch.add(dir.join(".complete"), Vec::new());
    batch.persist()
}

fn read_profiles(cfg: &PipelineConfig, stage: Stage) -> Result<Vec<RankedProfile>, PipelineError> {
    let dir = stage_dir(cfg, "network");
    if !dir.join(".complete").is_file() {
        return Err(PipelineError::MissingUpstream(stage));
    }
    let mut profiles = Vec::new();
    for path in list_tsv_files(&dir)? {
        let mut strength = BTreeMap::new();
        for line in BufReader::new(fs::File::open(&path)?).lines() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let (keyword, value) = line
                .split_once('\t')
                .ok_or_else(|| PipelineError::MalformedIntermediate(path.clone()))?;
            let value: f64 = value
                .parse()
                .map_err(|_| PipelineError::MalformedIntermediate(path.clone()))?;
            strength.insert(keyword.to_string(), value);
        }
        profiles.push(rank_profile(&ThematicProfile {
            institution_id: institution_id(&path),
            strength,
        }));
    }
    Ok(profiles)
}

fn stage_expertise(cfg: &PipelineConfig) -> Result<(), PipelineError> {
    let profiles = read_profiles(cfg, Stage::Expertise)?;
    let mut batch = ArtifactBatch::default();
    let dir = profiles_dir(cfg);
    for rp in &profiles {
        let mut buf = Vec::new();
        write_profile(&mut buf, rp)?;
        batch.add(dir.join(format!("{}.tsv", rp.institution_id)), buf);
    }
    batch.add(dir.join(".complete"), Vec::new());
    batch.persist()
}

fn stage_matrices(cfg: &PipelineConfig) -> Result<(), PipelineError> {
    let profiles = read_profiles(cfg, Stage::Matrices)?;
    let matrices = build_ti_matrices(&profiles);
    let mut buf = Vec::new();
    write_ti_matrices(&mut buf, &matrices)?;
    let mut batch = ArtifactBatch::default();
    batch.add(ti_matrix_path(cfg), buf);
    batch.persist()
}

fn stage_recommend(cfg: &PipelineConfig) -> Result<(), PipelineError> {
    let profiles = read_profiles(cfg, Stage::Recommend)?;
    let matrices = build_ti_matrices(&profiles);
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["institution", "strategy", "area", "kind", "recommended", "strength"])
        .map_err(csv_io)?;
    for rp in &profiles {
        for set in recommend_all(&rp.institution_id, &matrices, cfg.delta)? {
            let strategy = match set.kind {
                RecommendationKind::Strategy1 => "1",
                _ => "2",
            };
            for (recommended, strength) in &set.recommendations {
                writer
                    .write_record([
                        set.institution_id.as_str(),
                        strategy,
                        set.area.as_str(),
                        set.kind.as_str(),
                        recommended.as_str(),
                        &strength.to_string(),
                    ])
                    .map_err(csv_io)?;
            }
        }
    }
    let bytes = writer.into_inner().map_err(|e| {
        PipelineError::Io(std::io::Error::other(e.to_string()))
    })?;
    let mut batch = ArtifactBatch::default();
    batch.add(recommendations_path(cfg), bytes);
    batch.persist()
}

fn csv_io(e: csv::Error) -> PipelineError {
    PipelineError::Io(std::io::Error::other(e.to_string()))
}

#[derive(Debug, Serialize)]
pub struct JaccardEntry {
    pub value: f64,
    pub band: Band,
}

#[derive(Debug, Serialize)]
pub struct EvaluationReport {
    pub strategy1: Option<SetEvaluation>,
    pub high_priority: Option<SetEvaluation>,
    pub low_priority: Option<SetEvaluation>,
    pub jaccard_r_h: Option<JaccardEntry>,
    pub jaccard_r_l: Option<JaccardEntry>,
    pub jaccard_h_l: Option<JaccardEntry>,
}

fn stage_evaluate(cfg: &PipelineConfig) -> Result<(), PipelineError> {
    if cfg.selected_institutions.is_empty() {
        return Ok(()); // evaluation is optional
    }
    let recs_path = recommendations_path(cfg);
    if !recs_path.is_file() {
        return Err(PipelineError::MissingUpstream(Stage::Evaluate));
    }
    let profiles = read_profiles(cfg, Stage::Evaluate)?;
    let groups: BTreeMap<String, u8> = profiles
        .iter()
        .map(|rp| (rp.institution_id.clone(), crate::evaluation::assign_group(rp.x)))
        .collect();

    let selected: HashSet<&str> = cfg.selected_institutions.iter().map(|s| s.as_str()).collect();
    let mut tables: HashMap<RecommendationKind, FrequencyTable> = HashMap::new();
    let mut communicated: HashMap<RecommendationKind, HashSet<String>> = HashMap::new();
    let mut reader = csv::Reader::from_path(&recs_path).map_err(csv_io)?;
    for record in reader.records() {
        let record = record.map_err(csv_io)?;
        let institution = &record[0];
        if !selected.contains(institution) {
            continue;
        }
        let kind = match &record[3] {
            "strategy1" => RecommendationKind::Strategy1,
            "high_priority" => RecommendationKind::HighPriority,
            "low_priority" => RecommendationKind::LowPriority,
            _ => return Err(PipelineError::MalformedIntermediate(recs_path.clone())),
        };
        tables.entry(kind).or_default().record(&record[4]);
        communicated
            .entry(kind)
            .or_default()
            .insert(institution.to_string());
    }

    let eval_of = |kind: RecommendationKind| -> Result<Option<SetEvaluation>, PipelineError> {
        match tables.get(&kind) {
            Some(table) => {
                let n_target = communicated.get(&kind).map(|s| s.len()).unwrap_or(0);
                Ok(Some(evaluate_set(table, &groups, n_target)?))
            }
            None => Ok(None),
        }
    };
    let strategy1 = eval_of(RecommendationKind::Strategy1)?;
    let high_priority = eval_of(RecommendationKind::HighPriority)?;
    let low_priority = eval_of(RecommendationKind::LowPriority)?;

    let members = |kind: RecommendationKind| -> Option<HashSet<&str>> {
        tables.get(&kind).map(|t| t.members())
    };
    let jaccard = |a: RecommendationKind, b: RecommendationKind| -> Result<Option<JaccardEntry>, PipelineError> {
        match (members(a), members(b)) {
            (Some(sa), Some(sb)) => {
                let value = jaccard_dissimilarity(&sa, &sb);
                Ok(Some(JaccardEntry {
                    value,
                    band: interpret_score(value, Orientation::HigherBetter)?,
                }))
            }
            _ => Ok(None),
        }
    };
    let report = EvaluationReport {
        jaccard_r_h: jaccard(RecommendationKind::Strategy1, RecommendationKind::HighPriority)?,
        jaccard_r_l: jaccard(RecommendationKind::Strategy1, RecommendationKind::LowPriority)?,
        jaccard_h_l: jaccard(RecommendationKind::HighPriority, RecommendationKind::LowPriority)?,
        strategy1,
        high_priority,
        low_priority,
    };

    let mut batch = ArtifactBatch::default();
    batch.add(
        cfg.output_dir.join("evaluation.txt"),
        render_report_text(&report).into_bytes(),
    );
    batch.add(
        cfg.output_dir.join("evaluation.json"),
        serde_json::to_vec_pretty(&report).expect("report serializes"),
    );
    batch.persist()
}

pub fn render_report_text(report: &EvaluationReport) -> String {
    let mut out = String::new();
    let mut set = |name: &str, eval: &Option<SetEvaluation>| {
        use std::fmt::Write;
        match eval {
            Some(e) => {
                let _ = writeln!(out, "{name}.unique\t{}", e.unique);
                let _ = writeln!(out, "{name}.total\t{}", e.total);
                let _ = writeln!(out, "{name}.novelty\t{:.4}\t{}", e.novelty, e.novelty_band.as_str());
                let _ = writeln!(out, "{name}.gini\t{:.4}\t{}", e.gini, e.gini_band.as_str());
                let _ = writeln!(out, "{name}.entropy\t{:.4}", e.entropy);
                let _ = writeln!(
                    out,
                    "{name}.equitability\t{:.4}\t{}",
                    e.equitability,
                    e.equitability_band.as_str()
                );
            }
            None => {
                let _ = writeln!(out, "{name}.empty\ttrue");
            }
        }
    };
    set("strategy1", &report.strategy1);
    set("high_priority", &report.high_priority);
    set("low_priority", &report.low_priority);
    let mut pair = |name: &str, entry: &Option<JaccardEntry>| {
        use std::fmt::Write;
        if let Some(e) = entry {
            let _ = writeln!(out, "jaccard.{name}\t{:.4}\t{}", e.value, e.band.as_str());
        }
    };
    pair("r_h", &report.jaccard_r_h);
    pair("r_l", &report.jaccard_r_l);
    pair("h_l", &report.jaccard_h_l);
    out
}

/// Run exactly one stage, reading upstream artifacts from disk.
pub fn run_stage(cfg: &PipelineConfig, stage: Stage) -> Result<(), PipelineError> {
    match stage {
        Stage::Ingest => stage_ingest(cfg),
        Stage::Normalize => stage_normalize(cfg),
        Stage::Network => stage_network(cfg),
        Stage::Expertise => stage_expertise(cfg),
        Stage::Matrices => stage_matrices(cfg),
        Stage::Recommend => stage_recommend(cfg),
        Stage::Evaluate => stage_evaluate(cfg),
    }
}

/// Run all stages in order.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<(), PipelineError> {
    for stage in Stage::ALL {
        run_stage(cfg, stage)?;
    }
    Ok(())
}
