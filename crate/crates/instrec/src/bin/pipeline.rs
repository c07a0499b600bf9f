use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use instrec::evaluation::{evaluate_set, read_fixture};
use instrec::pipeline::{run_pipeline, run_stage, PipelineConfig, Stage};

#[derive(Parser)]
#[command(name = "pipeline", about = "Institutional expertise profiling and collaboration recommendation", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every stage in order
    Run {
        /// Path to a key = value config file
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a single stage (ingest, normalize, network, expertise, matrices,
    /// recommend, evaluate), reading upstream artifacts from the output dir
    Stage {
        name: Stage,
        #[arg(long)]
        config: PathBuf,
    },
    /// Score a recommendation frequency fixture (TSV: institution, frequency,
    /// group) and print the diversity metrics
    Evaluate {
        /// Fixture file
        #[arg(long)]
        fixtures: PathBuf,
        /// Number of institutions the recommendations were produced for
        #[arg(long)]
        targets: usize,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Run { config } => {
            let cfg = PipelineConfig::from_file(&config).map_err(|e| e.to_string())?;
            run_pipeline(&cfg).map_err(|e| e.to_string())?;
            eprintln!("pipeline finished: outputs in {}", cfg.output_dir.display());
            Ok(())
        }
        Command::Stage { name, config } => {
            let cfg = PipelineConfig::from_file(&config).map_err(|e| e.to_string())?;
            run_stage(&cfg, name).map_err(|e| e.to_string())?;
            eprintln!("stage {name} finished");
            Ok(())
        }
        Command::Evaluate { fixtures, targets } => {
            let file = File::open(&fixtures)
                .map_err(|e| format!("cannot open {}: {e}", fixtures.display()))?;
            let fixture = read_fixture(BufReader::new(file)).map_err(|e| e.to_string())?;
            let eval =
                evaluate_set(&fixture.table, &fixture.groups, targets).map_err(|e| e.to_string())?;
            println!("unique\t{}", eval.unique);
            println!("total\t{}", eval.total);
            println!("novelty\t{:.4}\t{}", eval.novelty, eval.novelty_band.as_str());
            println!("gini\t{:.4}\t{}", eval.gini, eval.gini_band.as_str());
            println!("entropy\t{:.4}", eval.entropy);
            println!(
                "equitability\t{:.4}\t{}",
                eval.equitability,
                eval.equitability_band.as_str()
            );
            Ok(())
        }
    }
}
