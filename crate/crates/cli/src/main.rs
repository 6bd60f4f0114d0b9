use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use phasespace_cli::figures::emit_figures;
use phasespace_cli::{magnus_check, oracle_report, run_scenario, CliError, ScenarioConfig};
use phasespace_core::exec::uniform_times;

#[derive(Parser)]
#[command(name = "phasespace", version, about = "Gaussian phase-space dynamics of a driven oscillator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its CSV, SVG frames and JSON summary.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Write and run the built-in figure scenarios under OUT.
    Figures {
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the closed-form evolution with the truncated Fock oracle.
    CompareOracle {
        #[arg(long)]
        config: PathBuf,
    },
    /// Tabulate closed-form vs quadrature Magnus terms for a linear drive.
    MagnusCheck {
        #[arg(long)]
        config: PathBuf,
    },
}

fn base_dir(config: &Path) -> PathBuf {
    config.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn simulate(config: &Path) -> Result<bool, CliError> {
    let cfg = ScenarioConfig::load(config)?;
    let summary = run_scenario(&cfg, &base_dir(config))?;
    for c in &summary.checks {
        println!("{} {}: {:.3e} (tolerance {:.0e})", verdict(c.pass), c.name, c.value, c.tolerance);
    }
    if let Some(o) = summary.oracle.as_ref().and_then(|o| o.error.as_ref()) {
        println!("oracle error: {o}");
    }
    println!("{} samples, {} frames", summary.samples, summary.frames.len());
    Ok(summary.pass)
}

fn figures(out: &Path) -> Result<bool, CliError> {
    let runs = emit_figures(out)?;
    for (dir, s) in &runs {
        let failed: Vec<&str> = s.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        if failed.is_empty() {
            println!("PASS {dir}: {} frames", s.frames.len());
        } else {
            println!("FAIL {dir}: {}", failed.join(", "));
        }
    }
    Ok(runs.iter().all(|(_, s)| s.pass))
}

fn compare_oracle(config: &Path) -> Result<bool, CliError> {
    let cfg = ScenarioConfig::load(config)?;
    let s0 = cfg.initial_state()?;
    let times = uniform_times(cfg.time.t_max, cfg.time.samples);
    let report = oracle_report(&cfg, &s0, &times);
    println!("cutoff {} , {} midpoint steps over [0, {}]", report.cutoff, report.steps, cfg.time.t_max);
    println!("{:>14} {:>12} {:>12}", "t", "|d mean|", "|d cov|");
    for s in &report.samples {
        println!("{:>14.8} {:>12.3e} {:>12.3e}", s.t, s.mean_delta, s.cov_delta);
    }
    for c in &report.checkpoints {
        println!("wigner t = {:.8}: sup |d W| {:.3e}", c.t, c.sup_delta);
    }
    if let Some(e) = &report.error {
        println!("oracle error: {e}");
    }
    for c in report.checks() {
        println!("{} {}: {:.3e} (tolerance {:.0e})", verdict(c.pass), c.name, c.value, c.tolerance);
    }
    Ok(report.pass)
}

fn magnus(config: &Path) -> Result<bool, CliError> {
    let cfg = ScenarioConfig::load(config)?;
    let report = magnus_check(&cfg)?;
    print!("{}", report.table());
    println!("{}", verdict(report.pass));
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate { config } => simulate(config),
        Command::Figures { out } => figures(out),
        Command::CompareOracle { config } => compare_oracle(config),
        Command::MagnusCheck { config } => magnus(config),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
