//! Command-line front end.
//!
//! Exit codes: 0 success, 2 configuration or usage problems (bad config
//! file, invalid physics parameters, bad flag combinations), 1 runtime
//! failures such as unreadable input files.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use spinport::analysis::{build_coincidences, classify_all, summarize, DetectorId};
use spinport::config::{parse_config, RunConfig};
use spinport::event_file::{read_events_file, write_events_file};
use spinport::quantum::ChannelSpec;
use spinport::report;
use spinport::sim::{
    detector_stream, run_bell_experiment, run_simulation, run_teleport_check, split_into_streams,
    summarize_events,
};

#[derive(Parser)]
#[command(
    name = "spinport",
    version,
    about = "Desk-scale simulator of a post-selected proton spin-teleportation bench"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the Monte Carlo beamline and write the event file.
    Simulate(SimulateArgs),
    /// Rebuild coincidences and the run summary from event files.
    Analyze(AnalyzeArgs),
    /// Sample the four-setting CHSH correlation experiment on the channel.
    Bell(BellArgs),
    /// Sweep teleportation over random inputs and check output fidelity.
    TeleportCheck(TeleportCheckArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Config file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override master_seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override n_events.
    #[arg(long)]
    events: Option<u64>,
    /// Override events_out.
    #[arg(long)]
    out: Option<String>,
    /// Count only causally separated events in the summary.
    #[arg(long)]
    causal_only: bool,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["events", "f1"])))]
struct AnalyzeArgs {
    /// Config file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Combined event file written by `simulate`.
    #[arg(long, conflicts_with_all = ["f1", "f2"])]
    events: Option<PathBuf>,
    /// Trigger-arm event file (same column layout as `simulate` output).
    #[arg(long, requires = "f2")]
    f1: Option<PathBuf>,
    /// Polarimeter-arm event file.
    #[arg(long, requires = "f1")]
    f2: Option<PathBuf>,
    /// Count only causally separated pairs in the summary.
    #[arg(long)]
    causal_only: bool,
}

#[derive(Args)]
struct BellArgs {
    /// Config file (supplies singlet_fraction, n_events, master_seed).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override master_seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override n_events.
    #[arg(long)]
    events: Option<u64>,
}

#[derive(Args)]
struct TeleportCheckArgs {
    /// Config file (supplies singlet_fraction, master_seed).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override master_seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random input states.
    #[arg(long, default_value_t = 20)]
    states: u64,
    /// Sampled teleportation attempts per state.
    #[arg(long, default_value_t = 1000)]
    attempts: u64,
}

type Failure = (u8, String);

fn load_config(path: &Option<PathBuf>) -> Result<RunConfig, Failure> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| (1, format!("cannot read config '{}': {e}", p.display())))?;
            parse_config(&text).map_err(|e| (2, format!("config '{}': {e}", p.display())))
        }
    }
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), Failure> {
    let mut cfg = load_config(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(events) = args.events {
        cfg.n_events = events;
    }
    if let Some(out) = &args.out {
        cfg.events_out = out.clone();
    }
    if args.causal_only {
        cfg.causal_only = true;
    }
    let params = cfg.to_params().map_err(|e| (2, format!("config: {e}")))?;
    let run = run_simulation(&params, cfg.n_events, cfg.master_seed)
        .map_err(|e| (2, format!("config: {e}")))?;
    write_events_file(&cfg.events_out, &run.events)
        .map_err(|e| (1, format!("cannot write '{}': {e}", cfg.events_out)))?;
    print!("{}", report::config_echo(&cfg));
    println!();
    println!("wrote {} events to {}", run.events.len(), cfg.events_out);
    println!();
    let summary = summarize_events(&run.events, cfg.causal_only, cfg.analyzing_power);
    print!("{}", report::run_summary_block(&summary));
    Ok(())
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), Failure> {
    let mut cfg = load_config(&args.config)?;
    if args.causal_only {
        cfg.causal_only = true;
    }
    let read = |p: &PathBuf| {
        read_events_file(p).map_err(|e| (1, format!("event file '{}': {e}", p.display())))
    };
    let (f1, f2, source_desc) = match (&args.events, &args.f1, &args.f2) {
        (Some(path), None, None) => {
            let events = read(path)?;
            let (f1, f2) = split_into_streams(&events);
            (f1, f2, format!("{}", path.display()))
        }
        (None, Some(p1), Some(p2)) => {
            let e1 = read(p1)?;
            let e2 = read(p2)?;
            (
                detector_stream(DetectorId::F1, &e1),
                detector_stream(DetectorId::F2, &e2),
                format!("{} + {}", p1.display(), p2.display()),
            )
        }
        // clap's argument group guarantees exactly one source form.
        _ => unreachable!("argument parsing enforces the input source"),
    };
    let mut pairs = build_coincidences(&f1, &f2, cfg.coincidence_window_s)
        .map_err(|e| (2, format!("analysis: {e}")))?;
    classify_all(&mut pairs, cfg.effective_separation_m())
        .map_err(|e| (2, format!("analysis: {e}")))?;
    println!("analysis inputs");
    println!("  source:                 {source_desc}");
    println!("  F-1 / F-2 records:      {} / {}", f1.len(), f2.len());
    println!("  matched pairs:          {}", pairs.len());
    println!(
        "  unmatched:              F-1 {}, F-2 {}",
        f1.len() - pairs.len(),
        f2.len() - pairs.len()
    );
    println!("  coincidence window:     {} s", cfg.coincidence_window_s);
    println!("  separation S:           {} m", cfg.effective_separation_m());
    println!("  causal-only summaries:  {}", cfg.causal_only);
    println!();
    let summary = summarize(&pairs, cfg.causal_only, cfg.analyzing_power);
    print!("{}", report::run_summary_block(&summary));
    Ok(())
}

fn cmd_bell(args: &BellArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.config)?;
    let n_events = args.events.unwrap_or(cfg.n_events);
    let seed = args.seed.unwrap_or(cfg.master_seed);
    let channel =
        ChannelSpec::new(cfg.singlet_fraction).map_err(|e| (2, format!("config: {e}")))?;
    let run = run_bell_experiment(channel, n_events, seed)
        .map_err(|e| (2, format!("config: {e}")))?;
    print!("{}", report::bell_report(&run));
    Ok(())
}

fn cmd_teleport_check(args: &TeleportCheckArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.config)?;
    let seed = args.seed.unwrap_or(cfg.master_seed);
    let channel =
        ChannelSpec::new(cfg.singlet_fraction).map_err(|e| (2, format!("config: {e}")))?;
    let check = run_teleport_check(channel, args.states, args.attempts, seed)
        .map_err(|e| (2, format!("config: {e}")))?;
    print!("{}", report::teleport_report(&check));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Bell(args) => cmd_bell(args),
        Command::TeleportCheck(args) => cmd_teleport_check(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
