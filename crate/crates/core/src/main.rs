use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use qloops::bits::BitString;
use qloops::error::{Error, Result};
use qloops::scenario::{run, Scenario, ScenarioConfig};
use qloops::timesym::Halving;

/// Scenario runner for time-symmetrized quantum processes.
#[derive(Parser, Debug)]
#[command(name = "qloops", disable_help_flag = false)]
struct Cli {
    /// One of: grover-ordinary, grover-alice, timesym-instance,
    /// reconstruction, query-report, bell, anthropic, timescale
    #[arg(long)]
    scenario: String,

    /// Problem-setting bits (N = 2^k drawers)
    #[arg(long)]
    k: Option<usize>,

    /// Drawer with the ball, as a k-bit string
    #[arg(long)]
    ball: Option<String>,

    /// Halving spec: `initial=<positions>;final=<positions>`, e.g. `initial=0;final=1`
    #[arg(long)]
    halving: Option<String>,

    /// Finally selected half-value, as a (k/2)-bit string
    #[arg(long, value_name = "BITS")]
    final_value: Option<String>,

    /// Life-compatible k-bit strings, comma separated
    #[arg(long, value_name = "BITS,...")]
    life_set: Option<String>,

    /// Quantum evolution time in years
    #[arg(long)]
    tq_years: Option<f64>,

    /// Steps (drawer openings) per second
    #[arg(long)]
    rate: Option<f64>,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Trial count for sampled scenarios
    #[arg(long, default_value_t = 10_000)]
    trials: usize,

    /// Output format: text | report
    #[arg(long, default_value = "text")]
    format: String,

    /// Write output to a file instead of stdout
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

fn parse_positions(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidConfig(format!("bad position `{p}` in --halving")))
        })
        .collect()
}

fn parse_halving(s: &str) -> Result<Halving> {
    let mut initial = None;
    let mut final_half = None;
    for part in s.split(';') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidConfig(format!("bad --halving segment `{part}`")))?;
        match key.trim() {
            "initial" => initial = Some(parse_positions(value)?),
            "final" => final_half = Some(parse_positions(value)?),
            other => {
                return Err(Error::InvalidConfig(format!("unknown --halving key `{other}`")))
            }
        }
    }
    match (initial, final_half) {
        (Some(i), Some(f)) => Halving::new(i, f),
        _ => Err(Error::InvalidConfig(
            "--halving needs both initial=... and final=...".into(),
        )),
    }
}

fn build_config(cli: &Cli) -> Result<ScenarioConfig> {
    let scenario: Scenario = cli.scenario.parse()?;
    let mut config = ScenarioConfig::new(scenario);
    config.k = cli.k;
    config.seed = cli.seed;
    config.trials = cli.trials;
    if let Some(ball) = &cli.ball {
        config.ball = Some(ball.parse()?);
    }
    if let Some(halving) = &cli.halving {
        config.halving = Some(parse_halving(halving)?);
    }
    if let Some(fv) = &cli.final_value {
        config.final_value = Some(fv.parse()?);
    }
    if let Some(life) = &cli.life_set {
        let set: Vec<BitString> = life
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse())
            .collect::<Result<_>>()?;
        config.life_set = Some(set);
    }
    config.tq_years = cli.tq_years;
    config.rate = cli.rate;
    Ok(config)
}

fn execute(cli: &Cli) -> Result<u8> {
    let config = build_config(cli)?;
    let output = run(&config)?;
    let rendered = match cli.format.as_str() {
        "text" => output.text.clone(),
        "report" => {
            let mut json = output.report.to_json();
            json.push('\n');
            json
        }
        other => return Err(Error::InvalidConfig(format!("unknown format `{other}`"))),
    };
    match &cli.out {
        Some(path) => {
            std::fs::write(path, rendered)
                .map_err(|e| Error::InvalidConfig(format!("cannot write {path:?}: {e}")))?;
        }
        None => {
            std::io::stdout()
                .write_all(rendered.as_bytes())
                .map_err(|e| Error::InvalidConfig(format!("stdout: {e}")))?;
        }
    }
    Ok(if output.checks_passed() { 0 } else { 3 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/usage text
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
