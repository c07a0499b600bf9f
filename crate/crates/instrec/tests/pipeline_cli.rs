//! Behavior of the `pipeline` binary and the staged pipeline API.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use instrec::pipeline::{run_stage, PipelineConfig, PipelineError, Stage};

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn write_config(dir: &Path, input_dir: &Path, extra: &str) -> PathBuf {
    let path = dir.join("config.txt");
    fs::write(
        &path,
        format!(
            "input_dir = {}\n\
             output_dir = {}\n\
             embeddings_mode = load\n\
             embeddings_path = {}\n\
             min_publications = 3\n\
             selected_institutions = alpha, beta, gamma\n\
             {extra}",
            input_dir.display(),
            dir.join("out").display(),
            fixture_dir().join("embeddings.txt").display(),
        ),
    )
    .unwrap();
    path
}

fn pipeline_cmd() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pipeline"))
}

#[test]
fn run_produces_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &fixture_dir().join("corpus"), "");
    let status = pipeline_cmd().args(["run", "--config"]).arg(&config).output().unwrap().status;
    assert!(status.success());
    for rel in [
        "canonical_map.tsv",
        "profiles/alpha.tsv",
        "ti_matrix.tsv",
        "recommendations.csv",
        "evaluation.txt",
        "evaluation.json",
    ] {
        assert!(dir.path().join("out").join(rel).is_file(), "missing {rel}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let config = write_config(dir.path(), &fixture_dir().join("corpus"), "");
        assert!(pipeline_cmd().args(["run", "--config"]).arg(&config).output().unwrap().status.success());
    }
    for rel in ["canonical_map.tsv", "ti_matrix.tsv", "recommendations.csv", "evaluation.txt"] {
        assert_eq!(
            fs::read(a.path().join("out").join(rel)).unwrap(),
            fs::read(b.path().join("out").join(rel)).unwrap(),
            "{rel} differs between runs"
        );
    }
}

#[test]
fn empty_input_directory_fails() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let config = write_config(dir.path(), &empty, "");
    let output = pipeline_cmd().args(["run", "--config"]).arg(&config).output().unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("no institution files"), "stderr: {stderr}");
}

#[test]
fn stage_without_upstream_fails() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &fixture_dir().join("corpus"), "");
    let output = pipeline_cmd()
        .args(["stage", "network", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("missing upstream"), "stderr: {stderr}");
}

#[test]
fn missing_upstream_is_reported_per_stage() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = PipelineConfig {
        input_dir: fixture_dir().join("corpus"),
        output_dir: dir.path().join("out"),
        embeddings_mode: instrec::pipeline::EmbeddingsMode::Load,
        embeddings_path: fixture_dir().join("embeddings.txt"),
        delta: 0.75,
        min_publications: 3,
        year_range: (2010, 2019),
        top_k_similar: 5,
        selected_institutions: vec!["alpha".into()],
        score_file: None,
        seed: 42,
    };
    for stage in [Stage::Normalize, Stage::Network, Stage::Expertise, Stage::Matrices] {
        match run_stage(&cfg, stage) {
            Err(PipelineError::MissingUpstream(s)) => assert_eq!(s, stage),
            other => panic!("stage {stage}: expected missing upstream, got {other:?}"),
        }
    }
}

#[test]
fn delta_out_of_range_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &fixture_dir().join("corpus"), "delta = 0.3\n");
    let output = pipeline_cmd().args(["run", "--config"]).arg(&config).output().unwrap();
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("delta"));
}

#[test]
fn unknown_stage_name_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &fixture_dir().join("corpus"), "");
    let output = pipeline_cmd()
        .args(["stage", "nonsense", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert!(!output.status.success());
}

#[test]
fn evaluate_subcommand_scores_a_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let fixture = dir.path().join("freqs.tsv");
    // 24 singles, two 2s, one 3; groups spread over 1..=4
    let mut lines = String::new();
    for i in 0..24 {
        lines.push_str(&format!("one{i:02}\t1\t{}\n", i % 4 + 1));
    }
    lines.push_str("two0\t2\t1\ntwo1\t2\t2\nthree\t3\t3\n");
    fs::write(&fixture, lines).unwrap();

    let output = pipeline_cmd()
        .args(["evaluate", "--targets", "10", "--fixtures"])
        .arg(&fixture)
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("novelty\t0.1000"), "stdout: {stdout}");
    assert!(stdout.contains("gini\t0.117"), "stdout: {stdout}");
}

#[test]
fn score_file_overrides_citation_scores() {
    let base = tempfile::tempdir().unwrap();
    let overridden = tempfile::tempdir().unwrap();
    let corpus = fixture_dir().join("corpus");

    let config = write_config(base.path(), &corpus, "");
    assert!(pipeline_cmd().args(["run", "--config"]).arg(&config).output().unwrap().status.success());

    // boost one work of gamma and rerun
    let scores = overridden.path().join("scores.tsv");
    fs::write(&scores, "G1\t100\n").unwrap();
    let config = write_config(
        overridden.path(),
        &corpus,
        &format!("score_file = {}\n", scores.display()),
    );
    assert!(pipeline_cmd().args(["run", "--config"]).arg(&config).output().unwrap().status.success());

    let read = |dir: &tempfile::TempDir| {
        fs::read_to_string(dir.path().join("out/profiles/gamma.tsv")).unwrap()
    };
    assert!(read(&base).contains("robotics\t15\t"));
    assert!(read(&overridden).contains("robotics\t108\t"));
}
