//! Command-line driver: loads a scenario config, runs the selected
//! verification suites, prints a human summary, and writes one
//! machine-readable JSON report per run.
//!
//! Exit codes: 0 all selected checks pass, 1 a check failed, 2 config or
//! usage error, 3 series precision exhausted.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use gaudin_core::duality::Scenario;
use gaudin_core::error::AlgebraError;
use gaudin_core::report::{RunReport, SuiteReport};
use gaudin_core::scenario::{parse_window_flag, GaudinConfig};
use gaudin_core::suites;

#[derive(Parser)]
#[command(
    name = "gaudin-verify",
    about = "Exact verification suites for Gaudin-model dualities with irregular singularities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario config (JSON)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// RNG seed for randomized suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Trial count for randomized suites
    #[arg(long, global = true, default_value_t = 50)]
    trials: u32,

    /// Override the working window: "zmin,zmax,dmin,dmax"
    #[arg(long, global = true)]
    window: Option<String>,

    /// Report output path
    #[arg(long, global = true, default_value = "gaudin-report.json")]
    out: PathBuf,

    /// Worker threads for independent suites
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Quantum duality identity, image-equality evidence, generator
    /// commutativity
    VerifyDuality,
    /// Classical duality identity on a Laurent window
    VerifyClassical,
    /// Randomized Berezinian/Manin structure suite
    VerifyBerezinian,
    /// Bracket sweeps of all four maps over every basis pair
    VerifyHoms,
    /// Weight-space suite: commuting restrictions, cyclicity, simple
    /// spectrum
    Spectrum,
    /// Everything above
    All,
}

fn load_scenario(cli: &Cli) -> Result<(Scenario, Vec<String>), AlgebraError> {
    let path = cli.config.as_ref().ok_or_else(|| {
        AlgebraError::InvalidInput("this subcommand needs --config PATH".into())
    })?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| AlgebraError::InvalidInput(format!("cannot read {:?}: {}", path, e)))?;
    let mut cfg = GaudinConfig::parse_json(&text)?;
    if let Some(flag) = &cli.window {
        cfg.window = Some(parse_window_flag(flag)?);
    }
    let suites = cfg.suites.clone();
    Ok((cfg.to_scenario()?, suites))
}

type Job = Box<dyn Fn() -> Result<SuiteReport, AlgebraError> + Send + Sync>;

fn plan(cli: &Cli) -> Result<Vec<(String, Job)>, AlgebraError> {
    let mut jobs: Vec<(String, Job)> = Vec::new();
    let needs_scenario = !matches!(cli.command, Command::VerifyBerezinian);
    let loaded = if needs_scenario {
        Some(load_scenario(cli)?)
    } else {
        None
    };
    let seed = cli.seed;
    let trials = cli.trials;
    let push = |jobs: &mut Vec<(String, Job)>, name: &str| -> Result<(), AlgebraError> {
        let job: Job = match name {
            "duality" => {
                let sc = loaded.as_ref().unwrap().0.clone();
                Box::new(move || suites::run_duality_suite(&sc))
            }
            "classical" => {
                let sc = loaded.as_ref().unwrap().0.clone();
                Box::new(move || suites::run_classical_suite(&sc))
            }
            "homs" => {
                let sc = loaded.as_ref().unwrap().0.clone();
                Box::new(move || suites::run_homs_suite(&sc))
            }
            "spectrum" => {
                let sc = loaded.as_ref().unwrap().0.clone();
                Box::new(move || suites::run_spectrum_suite(&sc, seed))
            }
            "berezinian" => Box::new(move || suites::run_berezinian_suite(seed, trials)),
            other => {
                return Err(AlgebraError::InvalidInput(format!(
                    "unknown suite {:?} in config",
                    other
                )))
            }
        };
        jobs.push((name.to_string(), job));
        Ok(())
    };
    match cli.command {
        Command::VerifyDuality => push(&mut jobs, "duality")?,
        Command::VerifyClassical => push(&mut jobs, "classical")?,
        Command::VerifyBerezinian => push(&mut jobs, "berezinian")?,
        Command::VerifyHoms => push(&mut jobs, "homs")?,
        Command::Spectrum => push(&mut jobs, "spectrum")?,
        Command::All => {
            let listed = loaded.as_ref().unwrap().1.clone();
            if listed.is_empty() {
                for name in ["duality", "classical", "homs", "berezinian"] {
                    push(&mut jobs, name)?;
                }
            } else {
                for name in &listed {
                    push(&mut jobs, name)?;
                }
            }
        }
    }
    Ok(jobs)
}

fn execute(cli: &Cli) -> Result<RunReport, AlgebraError> {
    let jobs = plan(cli)?;
    let started = Instant::now();
    let results: Vec<(String, Result<SuiteReport, AlgebraError>, f64)> = if cli.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build()
            .map_err(|e| AlgebraError::InvalidInput(format!("thread pool: {}", e)))?;
        pool.install(|| {
            use rayon::prelude::*;
            jobs.par_iter()
                .map(|(name, job)| {
                    let t = Instant::now();
                    let r = job();
                    (name.clone(), r, t.elapsed().as_secs_f64())
                })
                .collect()
        })
    } else {
        jobs.iter()
            .map(|(name, job)| {
                let t = Instant::now();
                let r = job();
                (name.clone(), r, t.elapsed().as_secs_f64())
            })
            .collect()
    };
    let mut suites_out = Vec::new();
    for (name, result, secs) in results {
        {
            let report = result?;
            for check in &report.checks {
                let mark = if check.pass { "pass" } else { "FAIL" };
                println!("[{}] {} :: {} — {}", mark, name, check.name, check.details);
                if let Some(w) = &check.witness {
                    println!("       witness: {}", w);
                }
            }
            println!("suite {} finished in {:.2}s", name, secs);
            suites_out.push(report);
        }
    }
    println!("total {:.2}s", started.elapsed().as_secs_f64());
    Ok(RunReport::new(cli.seed, suites_out))
}

fn main() {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(report) => {
            let json = report.to_json();
            if let Err(e) = std::fs::write(&cli.out, &json) {
                eprintln!("cannot write report {:?}: {}", cli.out, e);
                std::process::exit(2);
            }
            println!(
                "report written to {:?}: {}",
                cli.out,
                if report.pass { "PASS" } else { "FAIL" }
            );
            std::process::exit(if report.pass { 0 } else { 1 });
        }
        Err(AlgebraError::WindowExhausted(msg)) => {
            eprintln!("precision exhausted: {}", msg);
            std::process::exit(3);
        }
        Err(e) => {
            eprintln!("error: {}", e);
            std::process::exit(2);
        }
    }
}
