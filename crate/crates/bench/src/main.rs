use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use ltc_bench::certify::{self, Scale};
use ltc_bench::emit::{self, Format};
use ltc_bench::{run_experiment, ExperimentConfig};
use ltc_core::metrics::growth_exponent;

#[derive(Parser)]
#[command(name = "ltc-bench", version, about = "Online learning with long-term constraints: experiments and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write its results.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        reps: Option<usize>,
        /// Output directory; defaults to the config's `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Fit growth exponents of every metric column in a results CSV.
    Exponent {
        /// A results CSV written by `run`.
        csv: PathBuf,
        /// Write `exponents.csv` here instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the solver, invariant, and reproduction checks.
    Certify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        reps: usize,
    },
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { config, seed, reps, out, format } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(r) = reps {
                cfg.repetitions = r;
            }
            let dir = out.unwrap_or_else(|| PathBuf::from(&cfg.output_dir));
            let table = run_experiment(&cfg)?;
            let format = match format {
                FormatArg::Csv => Format::Csv,
                FormatArg::Svg => Format::Svg,
            };
            for path in emit::emit(&table, format, &dir)? {
                println!("{}", path.display());
            }
            Ok(true)
        }
        Command::Exponent { csv, out } => {
            let text = std::fs::read_to_string(&csv).with_context(|| format!("reading {}", csv.display()))?;
            let rows = emit::from_csv(&text)?;
            if rows.is_empty() {
                bail!("{} has no data rows", csv.display());
            }
            let table = ltc_bench::ResultTable { rows, repetitions: Vec::new() };
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["algorithm", "metric", "exponent", "floored"])?;
            for alg in table.algorithms() {
                for (metric, value) in emit::CHARTS {
                    let points: Vec<(f64, f64)> =
                        table.rows.iter().filter(|r| r.algorithm == alg).map(|r| (r.t as f64, value(r))).collect();
                    match growth_exponent(&points) {
                        Ok(fit) => w.write_record([
                            alg.to_string(),
                            metric.to_string(),
                            fit.exponent.to_string(),
                            fit.floored.to_string(),
                        ])?,
                        Err(e) => eprintln!("skipped {alg} {metric}: {e}"),
                    }
                }
            }
            let body = String::from_utf8(w.into_inner()?)?;
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    let path = dir.join("exponents.csv");
                    std::fs::write(&path, body)?;
                    println!("{}", path.display());
                }
                None => print!("{body}"),
            }
            Ok(true)
        }
        Command::Certify { seed, reps } => {
            let checks = certify::all(Scale { seed, repetitions: reps })?;
            for c in &checks {
                println!("{c}");
            }
            Ok(checks.iter().all(|c| c.passed))
        }
    }
}
