use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser};

use magtrap_cli::manifest::{sha256_hex, write_atomic, ConfigRecord, RunManifest};
use magtrap_cli::presets;
use magtrap_cli::run::{exit, exit_code_for, run, ConfigError, Subcommand};

#[derive(Parser)]
#[command(name = "magtrap", version, about = "Magnetic Paul trap simulation and design")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Subcommand)]
enum Command {
    /// Integrate a trap scenario and write its trajectory.
    Simulate(Common),
    /// Sample the field of a set of sources on a grid.
    FieldMap(Common),
    /// Rotating-saddle stability over an (omega_r, Omega) grid.
    StabilityScan(Common),
    /// Axial pseudo-potential of a bar above the rotating platform.
    PseudoPotential(Common),
    /// Equilibrium height versus platform rotation rate.
    HeightScan(Common),
    /// Equilibrium height versus horizontal offset in a vertical tube.
    RadialScan(Common),
    /// Chip-trap design budgets.
    ChipDesign(Common),
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "input")]
struct Input {
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Bundled recipe name.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args)]
struct Common {
    #[command(flatten)]
    input: Input,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads for parallel scans.
    #[arg(long)]
    jobs: Option<usize>,
}

fn split(cmd: Command) -> (Subcommand, Common) {
    match cmd {
        Command::Simulate(c) => (Subcommand::Simulate, c),
        Command::FieldMap(c) => (Subcommand::FieldMap, c),
        Command::StabilityScan(c) => (Subcommand::StabilityScan, c),
        Command::PseudoPotential(c) => (Subcommand::PseudoPotential, c),
        Command::HeightScan(c) => (Subcommand::HeightScan, c),
        Command::RadialScan(c) => (Subcommand::RadialScan, c),
        Command::ChipDesign(c) => (Subcommand::ChipDesign, c),
    }
}

fn execute(cmd: Subcommand, args: &Common) -> Result<i32> {
    let start = Instant::now();
    if let Some(n) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .context("configuring the worker pool")?;
    }
    let (text, origin) = match (&args.input.config, &args.input.preset) {
        (Some(path), _) => (
            std::fs::read_to_string(path)
                .map_err(|e| ConfigError(format!("reading {}: {e}", path.display())))?,
            path.display().to_string(),
        ),
        (None, Some(name)) => presets::load(name).map_err(|e| ConfigError(format!("{e:#}")))?,
        (None, None) => unreachable!("clap requires an input"),
    };
    let result = run(cmd, &text)?;
    let outputs = result.artifacts.write_all(&args.out)?;
    let manifest = RunManifest {
        subcommand: cmd.name().to_string(),
        config: ConfigRecord { path: origin, sha256: sha256_hex(text.as_bytes()) },
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        outputs,
        exit_code: result.exit_code,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    write_atomic(&args.out.join("manifest.json"), json.as_bytes())?;
    Ok(result.exit_code)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (cmd, args) = split(cli.command);
    let code = match execute(cmd, &args) {
        Ok(code) => {
            if code == exit::INSTABILITY {
                eprintln!("magtrap {}: instability detected", cmd.name());
            }
            code
        }
        Err(e) => {
            eprintln!("magtrap {}: error: {e:#}", cmd.name());
            exit_code_for(&e)
        }
    };
    ExitCode::from(code as u8)
}
