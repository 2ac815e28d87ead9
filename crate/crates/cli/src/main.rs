use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use paraconvex::artifacts::Emitter;
use paraconvex::config::OUT_ENV;
use paraconvex::experiments::{self, Outcome};
use paraconvex::scene_file::SweepSpec;
use paraconvex::suite::{run_criteria, run_verification_suite, CriterionResult};
use paraconvex::{CliError, RunConfig, SceneFile};
use serde_json::json;

/// Paraconvexity measurements, retractions and the verification suite.
#[derive(Parser)]
#[command(name = "paraconvex", version)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, env = OUT_ENV)]
    out: Option<PathBuf>,
    /// Point count for the scene (overrides the scene file).
    #[arg(long, global = true)]
    density: Option<usize>,
    /// Relative stopping tolerance of the selection loop.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Nonconvexity profile of a scene.
    Analyze {
        /// Scene file or generator name.
        scene: String,
        /// Comma-separated radii instead of the default grid.
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
        /// Measure distances to P ∩ D instead of P.
        #[arg(long)]
        strong: bool,
        /// Also run the brute-force planar oracle at every radius.
        #[arg(long)]
        oracle: bool,
    },
    /// Build a retraction and draw its displacement field.
    Retract {
        scene: String,
        /// Contraction; defaults to the measured alpha plus the margin.
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Estimate the paraconvexity of the set of retractions.
    Space {
        scene: String,
        #[arg(long, default_value_t = 12)]
        ensemble: usize,
    },
    /// Retractions along a family of moved copies of a scene.
    Family {
        scene: String,
        /// kind:from:to:steps with kind one of rotation, translate_x,
        /// translate_y, scale. Defaults to the scene file's sweep, then
        /// rotation:0:0.5:50.
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Closed-form constants on an alpha grid.
    Constants {
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<f64>>,
    },
    /// Run the acceptance criteria.
    Verify {
        /// Run only these criteria (comma-separated); skips the determinism rerun.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<usize>>,
    },
}

fn config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    if cli.density.is_some() {
        cfg.density = cli.density;
    }
    if let Some(t) = cli.tol {
        cfg.tol = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write(
    cfg: &RunConfig,
    command: &str,
    files: &mut Emitter,
    result: serde_json::Value,
    started: Instant,
) -> Result<(), CliError> {
    let names: Vec<String> = files.names().map(String::from).collect();
    let summary = json!({
        "command": command,
        "config": cfg,
        "runtime_seconds": started.elapsed().as_secs_f64(),
        "files": names,
        "result": result,
    });
    files.text(
        "summary.json",
        serde_json::to_string_pretty(&summary).expect("json") + "\n",
    );
    files.write(&cfg.out)?;
    out(&serde_json::to_string_pretty(&result).expect("json"));
    eprintln!("wrote {} files to {}", names.len() + 1, cfg.out.display());
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let cfg = config(cli)?;
    let started = Instant::now();
    let scene = |arg: &str| SceneFile::resolve(arg, cfg.density);
    let (name, outcome): (&str, Outcome) = match &cli.command {
        Command::Analyze {
            scene: s,
            radii,
            strong,
            oracle,
        } => (
            "analyze",
            experiments::analyze(
                &scene(s)?.to_scene()?,
                &cfg,
                radii.clone(),
                *strong,
                *oracle,
            )?,
        ),
        Command::Retract { scene: s, beta } => {
            let beta = beta.or(cfg.beta);
            if beta.is_some_and(|b| !(b > 0.0 && b < 1.0)) {
                return Err(CliError::Input("beta must lie in (0, 1)".into()));
            }
            (
                "retract",
                experiments::retract(&scene(s)?.to_scene()?, &cfg, beta)?,
            )
        }
        Command::Space { scene: s, ensemble } => {
            if *ensemble < 2 {
                return Err(CliError::Input("ensemble must be at least 2".into()));
            }
            (
                "space",
                experiments::space(&scene(s)?.to_scene()?, &cfg, *ensemble)?,
            )
        }
        Command::Family { scene: s, sweep } => {
            let file = scene(s)?;
            let spec = match sweep {
                Some(text) => SweepSpec::parse(text)?,
                None => file
                    .family_sweep
                    .unwrap_or(SweepSpec::parse("rotation:0:0.5:50")?),
            };
            (
                "family",
                experiments::family(&file.to_scene()?, &spec.to_sweep(), &cfg)?,
            )
        }
        Command::Constants { alpha } => {
            let grid = alpha
                .clone()
                .unwrap_or_else(|| (0..10).map(|i| i as f64 / 10.0).collect());
            ("constants", experiments::constants(&grid)?)
        }
        Command::Verify { only } => return verify(&cfg, only.as_deref(), started),
    };
    let Outcome { mut files, summary } = outcome;
    write(&cfg, name, &mut files, summary, started)?;
    Ok(true)
}

fn verify(cfg: &RunConfig, only: Option<&[usize]>, started: Instant) -> Result<bool, CliError> {
    let mut print = |c: &CriterionResult| out(&c.line());
    let (criteria, mut files) = match only {
        Some(ids) => {
            if let Some(bad) = ids.iter().find(|i| !(1..=9).contains(*i)) {
                return Err(CliError::Input(format!(
                    "criterion {bad} cannot run alone; pick from 1 to 9"
                )));
            }
            run_criteria(cfg, ids, &mut print)
        }
        None => {
            let r = run_verification_suite(cfg, &mut print)?;
            (r.criteria, r.files)
        }
    };
    let rows: Vec<_> = criteria
        .iter()
        .map(|c| paraconvex::artifacts::CriterionRow {
            id: c.id,
            name: c.name.clone(),
            passed: c.passed(),
            detail: c.detail(),
        })
        .collect();
    files.csv("criteria.csv", &rows)?;
    let passed = criteria.iter().all(|c| c.passed());
    let result = json!({ "passed": passed, "criteria": criteria });
    let names: Vec<String> = files.names().map(String::from).collect();
    let summary = json!({
        "command": "verify",
        "config": cfg,
        "runtime_seconds": started.elapsed().as_secs_f64(),
        "files": names,
        "result": result,
    });
    files.text(
        "summary.json",
        serde_json::to_string_pretty(&summary).expect("json") + "\n",
    );
    files.write(&cfg.out)?;
    eprintln!("wrote {} files to {}", names.len() + 1, cfg.out.display());
    Ok(passed)
}

/// Prints a line, ignoring a closed pipe.
fn out(line: &str) {
    let _ = writeln!(std::io::stdout(), "{line}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
