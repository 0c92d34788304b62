use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use consensus_sim::engine::convergence_rate;
use consensus_sim::experiments::{
    apply_overrides, figure_preset, parse_config, run_sweep, write_csv, SweepResult, SweepRow, SweepSpec, PRESETS,
};
use consensus_sim::Error;

/// Convergence-rate simulator for FPC and Cellular Consensus.
#[derive(Parser)]
#[command(name = "consensus-sim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the convergence rate of a single parameter point.
    Run(RunArgs),
    /// Evaluate a whole grid from a spec file or a figure preset.
    Sweep(SweepArgs),
    /// List the figure presets.
    Presets,
    /// Check a spec file or preset without running it.
    Validate(Source),
}

#[derive(Args)]
struct Source {
    /// Spec file (`key = value` lines).
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Figure preset id (see `presets`).
    #[arg(long)]
    preset: Option<String>,
    /// Extra `key=value` setting, applied after the file or preset.
    #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_kv)]
    sets: Vec<(String, String)>,
}

#[derive(Args)]
struct Common {
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Runs per parameter point.
    #[arg(long)]
    runs: Option<usize>,
    /// Worker threads (0 = one per core).
    #[arg(long, env = "CONSENSUS_SIM_WORKERS", default_value_t = 0)]
    workers: usize,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    common: Common,
}

fn parse_kv(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected KEY=VALUE, got `{s}`"))
}

fn load(source: &Source, allow_empty: bool) -> Result<SweepSpec, Error> {
    let mut spec = match (&source.config, &source.preset) {
        (Some(path), _) => parse_config(&std::fs::read_to_string(path)?)?,
        (None, Some(id)) => figure_preset(id)?,
        (None, None) if allow_empty => parse_config("")?,
        (None, None) => return Err(Error::InvalidParameter("give --config FILE or --preset ID".into())),
    };
    apply_overrides(&mut spec, &source.sets)?;
    Ok(spec)
}

fn apply_common(spec: &mut SweepSpec, common: &Common) {
    if let Some(seed) = common.seed {
        spec.master_seed = seed;
    }
    if let Some(runs) = common.runs {
        spec.runs_per_point = runs;
    }
}

fn emit(result: &SweepResult, out: &Option<PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => write_csv(result, BufWriter::new(File::create(path)?)),
        None => write_csv(result, io::stdout().lock()),
    }
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Presets => {
            let mut stdout = io::stdout().lock();
            for (id, description) in PRESETS {
                let points = figure_preset(id)?.point_count();
                writeln!(stdout, "{id:<11} {points:>4} points  {description}")?;
            }
        }
        Command::Validate(source) => {
            let spec = load(&source, false)?;
            spec.validate()?;
            println!("{}: ok, {} points x {} runs", spec.name, spec.point_count(), spec.runs_per_point);
        }
        Command::Run(args) => {
            let mut spec = load(&args.source, true)?;
            apply_common(&mut spec, &args.common);
            if !spec.axes.is_empty() {
                return Err(Error::InvalidParameter("`run` takes a single point; use `sweep` for axes".into()));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(args.common.workers)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?;
            let estimate = pool.install(|| convergence_rate(&spec.base, spec.runs_per_point, spec.master_seed))?;
            eprintln!("{estimate}");
            let result = SweepResult { name: spec.name, rows: vec![SweepRow { spec: spec.base, estimate }] };
            emit(&result, &args.common.out)?;
        }
        Command::Sweep(args) => {
            let mut spec = load(&args.source, false)?;
            apply_common(&mut spec, &args.common);
            let result = run_sweep(&spec, args.common.workers)?;
            emit(&result, &args.common.out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_generation_failure() { 2 } else { 1 })
        }
    }
}
