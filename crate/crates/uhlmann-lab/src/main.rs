use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use uhlmann_lab::cli::{parse_param, run, CliError, Scenario, ScenarioConfig};

/// Seeded experiments on Uhlmann transformations. Writes a JSON report to
/// stdout (or --out) and a one-line-per-check summary to stderr.
///
/// Exit status: 0 when every check passes, 1 when a check fails, 2 on usage,
/// input or library errors.
#[derive(Parser)]
#[command(name = "uhlmann-lab", version)]
struct Args {
    /// uhlmann, szk, qip, amplify, commit, channel, compress, blackhole, interfere or entropy
    scenario: String,
    /// Instance files (or a state name for `entropy`)
    inputs: Vec<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Override the default tolerance of exact checks
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Scenario parameter, repeatable
    #[arg(long = "param", short = 'p', value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock time in the report (breaks byte-identical reruns)
    #[arg(long)]
    timing: bool,
}

fn main_inner(args: Args) -> Result<bool, CliError> {
    let mut cfg = ScenarioConfig::new(args.scenario.parse::<Scenario>()?);
    cfg.inputs = args.inputs;
    cfg.seed = args.seed;
    cfg.tol = args.tol;
    cfg.trials = args.trials;
    cfg.timing = args.timing;
    for p in &args.params {
        let (k, v) = parse_param(p)?;
        cfg.params.insert(k, v);
    }
    let report = run(&cfg)?;
    let text = serde_json::to_string_pretty(&report.to_json()).expect("report serializes") + "\n";
    match &args.out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    eprint!("{}", report.summary());
    Ok(report.pass())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match main_inner(args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("uhlmann-lab: {e}");
            ExitCode::from(2)
        }
    }
}
