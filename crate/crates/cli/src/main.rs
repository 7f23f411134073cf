use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use oplab_cli::{emit, load_config, run, CliError, Format, RunManifest};
use oplab_core::harness::{ExperimentId, RunOptions};

/// Runs operator-function inequality experiments and writes their reports.
///
/// Exit status: 0 when every verdict passes, 1 when any verdict fails (the
/// reports are still written), 2 on usage or configuration errors.
#[derive(Debug, Parser)]
#[command(name = "oplab", version)]
struct Args {
    /// TOML file with one `[[experiment]]` table per run.
    #[arg(long, required_unless_present = "list_experiments")]
    config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, default_value = "oplab-out")]
    out: PathBuf,
    /// json, csv or both.
    #[arg(long, default_value_t = Format::Json)]
    format: Format,
    /// Seed for every experiment, overriding the file.
    #[arg(long)]
    seed: Option<u64>,
    /// Parallel trial workers; results do not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// Print the experiment ids and exit.
    #[arg(long)]
    list_experiments: bool,
}

fn print_summary(m: &RunManifest) {
    for r in &m.reports {
        let slope = match (r.slope, r.slope_target) {
            (Some(s), Some(t)) => format!(" slope {s:.4} (target {t})"),
            _ => String::new(),
        };
        println!(
            "{} {}{} const {:.4} skipped {}/{}",
            if r.passed { "PASS" } else { "FAIL" },
            r.experiment_id,
            slope,
            r.constant_estimate.value,
            r.skips.skipped,
            r.skips.total
        );
        for v in r.verdicts.iter().filter(|v| !v.passed) {
            println!("     failed {}: {}", v.name, v.detail);
        }
    }
}

fn execute(args: Args) -> Result<u8, CliError> {
    if args.list_experiments {
        for id in ExperimentId::ALL {
            println!("{:<24} {}", id.as_str(), id.description());
        }
        return Ok(0);
    }
    let path = args.config.expect("clap requires --config");
    let loaded = load_config(&path)?;
    let options = RunOptions { jobs: args.jobs.map(|j| j as usize) };
    let manifest = run(loaded.experiments, &loaded.digest, args.seed, options)?;
    print_summary(&manifest);
    for p in emit(&manifest, args.format, &args.out)? {
        println!("wrote {}", p.display());
    }
    Ok(manifest.exit_code())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match execute(args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
