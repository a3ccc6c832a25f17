use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use bpqm_cli::commands::{self, CircuitKind};
use bpqm_cli::config::{parse_seed, ModeKind, SweepConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bpqm", version, about = "Quantum joint-detection receiver sweeps and circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// First-bit and block decoder errors against classical and quantum bounds.
    SweepDecoder {
        #[command(flatten)]
        settings: Settings,
        #[command(flatten)]
        out: Output,
    },
    /// Single-symbol transduction receiver errors.
    SweepTransduction {
        #[command(flatten)]
        settings: Settings,
        #[command(flatten)]
        out: Output,
    },
    /// Received photon numbers and rates for the configured links.
    LinkBudget {
        #[command(flatten)]
        settings: Settings,
        #[command(flatten)]
        out: Output,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Write a decoder circuit as OpenQASM 2.0.
    EmitCircuit {
        #[arg(long, value_enum)]
        kind: CircuitKind,
        #[arg(long = "n", default_value_t = 0.01)]
        mean_photon: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-codeword errors of one decoder at one photon number.
    Simulate {
        #[arg(long, value_enum, default_value_t = CircuitKind::Full)]
        kind: CircuitKind,
        #[arg(long = "n", default_value_t = 0.01)]
        mean_photon: f64,
        #[command(flatten)]
        settings: Settings,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(Args)]
struct Settings {
    /// Configuration file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the effective configuration to this file.
    #[arg(long)]
    save_config: Option<PathBuf>,
    #[arg(long)]
    n_min: Option<f64>,
    #[arg(long)]
    n_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Logarithmic grid spacing (the default).
    #[arg(long, conflicts_with = "linear")]
    log: bool,
    /// Linear grid spacing.
    #[arg(long)]
    linear: bool,
    #[arg(long, value_enum)]
    mode: Option<ModeKind>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    #[arg(long)]
    prep_fail: Option<f64>,
    #[arg(long)]
    shots: Option<u64>,
    /// Decimal or 0x-prefixed hexadecimal.
    #[arg(long, value_parser = parse_seed)]
    seed: Option<u64>,
}

#[derive(Args)]
struct Output {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Settings {
    fn resolve(&self) -> Result<SweepConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                SweepConfig::parse(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => SweepConfig::default(),
        };
        if let Some(v) = self.n_min {
            cfg.grid.min = v;
        }
        if let Some(v) = self.n_max {
            cfg.grid.max = v;
        }
        if let Some(v) = self.points {
            cfg.grid.points = v;
        }
        if self.log {
            cfg.grid.log = true;
        }
        if self.linear {
            cfg.grid.log = false;
        }
        if let Some(v) = self.mode {
            cfg.mode = v;
        }
        if let Some(v) = self.p1 {
            cfg.p1 = v;
        }
        if let Some(v) = self.p2 {
            cfg.p2 = v;
        }
        if let Some(v) = self.prep_fail {
            cfg.prep_fail = v;
        }
        if let Some(v) = self.shots {
            cfg.shots = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        cfg.validate()?;
        if let Some(path) = &self.save_config {
            fs::write(path, cfg.to_text()).with_context(|| format!("writing {}", path.display()))?;
        }
        Ok(cfg)
    }
}

impl Output {
    fn write(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::SweepDecoder { settings, out } => out.write(&commands::sweep_decoder(&settings.resolve()?)?),
        Command::SweepTransduction { settings, out } => {
            out.write(&commands::sweep_transduction(&settings.resolve()?)?)
        }
        Command::LinkBudget { settings, out, format } => {
            let cfg = settings.resolve()?;
            out.write(&match format {
                Format::Table => commands::link_budget_pretty(&cfg)?,
                Format::Csv => commands::link_budget_csv(&cfg)?,
            })
        }
        Command::EmitCircuit { kind, mean_photon, out } => {
            let emitted = commands::emit_circuit(kind, mean_photon)?;
            fs::write(&out, &emitted.qasm).with_context(|| format!("writing {}", out.display()))?;
            println!("{}", emitted.summary);
            Ok(())
        }
        Command::Simulate { kind, mean_photon, settings, out } => {
            out.write(&commands::simulate(kind, mean_photon, &settings.resolve()?)?)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
