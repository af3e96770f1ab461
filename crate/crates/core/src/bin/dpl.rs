use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use dpl_core::error::Result;
use dpl_core::experiment::{
    emit_plots, run_experiment, ExperimentOutcome, ExperimentSpec, PRESETS,
};

/// Overrides the default output root `out`.
const OUTPUT_ROOT_ENV: &str = "DPL_OUTPUT_ROOT";

#[derive(Parser)]
#[command(
    name = "dpl",
    version,
    about = "Dual-phase-lag heat conduction experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run experiments from config files, `preset:NAME`, or bare preset names.
    Run {
        #[arg(required = true)]
        specs: Vec<String>,
        /// Experiments run concurrently.
        #[arg(long, short, default_value_t = 1)]
        jobs: usize,
        /// Output root; each experiment writes to `<out>/<name>`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write gnuplot scripts for every report under a directory.
    Plots { dir: PathBuf },
    /// List the built-in presets, or write them as config files.
    Presets {
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

fn output_root(out: Option<PathBuf>) -> PathBuf {
    out.or_else(|| std::env::var_os(OUTPUT_ROOT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

/// A usage error anywhere gives 2; otherwise the worst outcome.
fn combine(codes: impl IntoIterator<Item = i32>) -> i32 {
    let codes: Vec<i32> = codes.into_iter().collect();
    if codes.contains(&2) {
        2
    } else {
        codes.into_iter().max().unwrap_or(0)
    }
}

fn report(source: &str, result: &Result<ExperimentOutcome>) -> i32 {
    match result {
        Ok(outcome) => {
            print!("{}", outcome.summary());
            if let Some(dir) = outcome.files.first().and_then(|f| f.parent()) {
                println!("artifacts: {}", dir.display());
            }
            println!();
            i32::from(!outcome.passed)
        }
        Err(e) => {
            eprintln!("error: {source}: {e}");
            e.exit_code()
        }
    }
}

fn run(specs: Vec<String>, jobs: usize, out: Option<PathBuf>) -> i32 {
    let root = output_root(out);
    let parsed: Vec<(String, Result<ExperimentSpec>)> = specs
        .into_iter()
        .map(|s| {
            let spec = ExperimentSpec::from_source(&s, &root);
            (s, spec)
        })
        .collect();
    let mut codes = Vec::new();
    let mut ready = Vec::new();
    for (source, spec) in parsed {
        match spec {
            Ok(spec) => ready.push((source, spec)),
            Err(e) => {
                eprintln!("error: {e}");
                codes.push(e.exit_code());
            }
        }
    }
    if !codes.is_empty() {
        return combine(codes);
    }
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start {jobs} jobs: {e}");
            return 2;
        }
    };
    let results: Vec<(String, Result<ExperimentOutcome>)> = pool.install(|| {
        ready
            .into_par_iter()
            .map(|(source, spec)| {
                let r = run_experiment(&spec);
                (source, r)
            })
            .collect()
    });
    combine(results.iter().map(|(s, r)| report(s, r)))
}

fn presets(write: Option<PathBuf>) -> Result<()> {
    match write {
        None => {
            for (name, _) in PRESETS {
                println!("{name}");
            }
        }
        Some(dir) => {
            std::fs::create_dir_all(&dir)?;
            for (name, text) in PRESETS {
                let path = dir.join(format!("{name}.cfg"));
                std::fs::write(&path, text)?;
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { 2 } else { 0 };
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Run { specs, jobs, out } => run(specs, jobs, out),
        Command::Plots { dir } => match emit_plots(&dir) {
            Ok(scripts) => {
                for s in scripts {
                    println!("{}", s.display());
                }
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Command::Presets { write } => match presets(write) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
    };
    ExitCode::from(code as u8)
}
