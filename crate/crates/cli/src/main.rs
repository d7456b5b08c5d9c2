//! `tritwist`: twisted conjugacy decisions, class counts and experiment
//! reports from the command line.
//!
//! Exit codes: 0 when a question was answered (a witness and a certified
//! "distinct" are both answers), 1 when `verify` or `report` finds a check
//! whose computed value differs from the expected one, 2 on usage or input
//! errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tritwist::autos::{parse_aut, Signature};
use tritwist::matgroups::{FiniteGroup, TruncatedGroup, DEFAULT_ORACLE_CAP};
use tritwist::spectra::{read_config, run_experiment, write_report, ExperimentConfig, ExperimentReport, EXPERIMENTS};
use tritwist::twisted::{brute_force_reidemeister, count_classes, decide_text, ClassReport, Verdict};

#[derive(Parser)]
#[command(name = "tritwist", version, about = "Twisted conjugacy in triangular matrix groups")]
struct Cli {
    /// Seed for every sampled quantity.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON output to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named experiment and compare each check against its expected value.
    Verify(VerifyArgs),
    /// Count twisted classes of an additive map on a window of the ring.
    Classes {
        #[arg(long)]
        ring: String,
        /// An additive map (`ring:a=1,b=1`, `mul:2`, `phiP:P=X^2+X+1,a=1`, ...)
        /// or an automorphism of U2, which acts on the corner entry.
        #[arg(long)]
        aut: String,
        /// Degree bound D; over Laurent rings the window is [-D, D].
        #[arg(long)]
        window: Option<usize>,
    },
    /// Decide whether two elements are twisted conjugate.
    Twisted {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        aut: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        bprime: String,
        /// Group tag (U, B, PB, B+, PB+); implied by `sec6:` automorphisms.
        #[arg(long)]
        group: Option<String>,
    },
    /// Brute-force Reidemeister number on a finite truncated group such as `B2/fq:3/D1`.
    Oracle {
        #[arg(long)]
        group: String,
        #[arg(long)]
        aut: String,
        /// Random pairs on which the map is checked to be a homomorphism.
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Run the experiment described by a TOML config.
    Report {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// One of the registered experiments (see `--help` of `report`).
    experiment: String,
    /// Read parameters from a TOML config; flags given here win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<i64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    i_max: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
}

enum Outcome {
    Answered,
    Mismatch,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(Outcome::Answered) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Verify(args) => {
            let mut cfg = match &args.config {
                Some(path) => read_config(path)?,
                None => ExperimentConfig::new(&args.experiment),
            };
            cfg.name = args.experiment.clone();
            if !EXPERIMENTS.contains(&cfg.name.as_str()) {
                bail!("unknown experiment `{}`; known: {}", cfg.name, EXPERIMENTS.join(", "));
            }
            if cli.seed != 0 || args.config.is_none() {
                cfg.seed = cli.seed;
            }
            macro_rules! set {
                ($($f:ident),*) => { $(if args.$f.is_some() { cfg.$f = args.$f; })* };
            }
            set!(q, p, a, b, n, window, i_max, samples);
            experiment(cli, cfg)
        }
        Command::Report { config } => {
            let mut cfg = read_config(config)?;
            if cli.seed != 0 {
                cfg.seed = cli.seed;
            }
            experiment(cli, cfg)
        }
        Command::Classes { ring, aut, window } => {
            let start = Instant::now();
            let report = count_classes(ring, aut, *window)?;
            let input = json!({"ring": ring, "aut": aut, "window": window});
            answer(cli, "classes", input, &report, start)
        }
        Command::Twisted { ring, aut, b, bprime, group } => {
            let start = Instant::now();
            let report = decide_text(ring, aut, b, bprime, group.as_deref())?;
            let input = json!({"ring": ring, "aut": aut, "b": b, "bprime": bprime, "group": group});
            answer(cli, "twisted", input, &report, start)
        }
        Command::Oracle { group, aut, samples } => {
            let start = Instant::now();
            let g = TruncatedGroup::parse_spec(group, DEFAULT_ORACLE_CAP)?;
            let sig = Signature::new(g.n(), g.ring(), g.tag());
            let psi = parse_aut(aut, &sig)?;
            let perm = g.perm_from_map(|x| psi.apply(x), *samples, cli.seed)?;
            let bf = brute_force_reidemeister(&g, &perm, DEFAULT_ORACLE_CAP)?;
            let report = ClassReport::new(Verdict::Count(bf.count.into())).with_seed(cli.seed);
            let reps: Vec<String> = bf.reps.iter().map(|&r| g.to_elem(r).to_string()).collect();
            let input = json!({"group": g.spec(), "aut": aut, "order": g.order(), "representatives": reps});
            answer(cli, "oracle", input, &report, start)
        }
    }
}

fn experiment(cli: &Cli, cfg: ExperimentConfig) -> Result<Outcome> {
    let report = run_experiment(&cfg)?;
    if let Some(path) = cli.out.as_ref().or(report.config.out.as_ref().map(PathBuf::from).as_ref()) {
        write_report(&report, path)?;
    }
    if cli.json {
        say(&serde_json::to_string_pretty(&report.to_json())?);
    } else {
        say(&report.to_string());
    }
    Ok(outcome(&report))
}

fn outcome(report: &ExperimentReport) -> Outcome {
    if report.all_match() {
        Outcome::Answered
    } else {
        Outcome::Mismatch
    }
}

/// Prints a single determination. The digest covers everything except the
/// wall time.
fn answer(cli: &Cli, command: &str, input: Value, report: &ClassReport, start: Instant) -> Result<Outcome> {
    let body = json!({"schema_version": 1, "command": command, "input": input, "result": report.to_json()});
    let sha = tritwist::spectra::digest(&body);
    let doc = json!({"report": body, "sha256": sha, "wall_ms": start.elapsed().as_secs_f64() * 1e3});
    if let Some(path) = &cli.out {
        std::fs::write(path, serde_json::to_string_pretty(&doc)? + "\n").with_context(|| path.display().to_string())?;
    }
    if cli.json {
        say(&serde_json::to_string_pretty(&doc)?);
    } else {
        say(&report.to_string());
    }
    Ok(Outcome::Answered)
}

// a closed pipe (`tritwist ... | head`) is not an error worth a panic
fn say(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}
