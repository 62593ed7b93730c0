use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ionvqe::cli::{self, Output, RunConfig};
use ionvqe::Result;

#[derive(Parser)]
#[command(name = "ionvqe", version, about = "Trapped-ion VQE toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Command {
    /// HF and FCI energies
    Fci,
    /// Compile the HF+N circuit and count gates
    Synth,
    /// Minimize the HF+N energy
    Vqe,
    /// Evaluate the energy on a parameter grid
    Scan,
}

#[derive(Args)]
struct Flags {
    /// key = value configuration file; flags override its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    fcidump: Option<String>,
    /// Comma-separated spatial orbitals to freeze
    #[arg(long, global = true)]
    freeze: Option<String>,
    /// Comma-separated spatial orbitals to drop
    #[arg(long, global = true)]
    drop: Option<String>,
    #[arg(long, global = true)]
    hfplus: Option<String>,
    #[arg(long, global = true)]
    trotter_order: Option<String>,
    #[arg(long, global = true)]
    trotter_steps: Option<String>,
    /// exact or sampled
    #[arg(long, global = true)]
    mode: Option<String>,
    #[arg(long, global = true)]
    shots: Option<String>,
    /// Readout flip probabilities e0,e1
    #[arg(long, global = true)]
    spam: Option<String>,
    #[arg(long, global = true)]
    bootstrap: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Directory for output files
    #[arg(long, global = true)]
    out: Option<String>,
    /// Scan axes separated by ';', each start:stop:count or v1,v2,...
    #[arg(long, global = true, allow_hyphen_values = true)]
    grid: Option<String>,
}

impl Flags {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        let overrides = [
            ("fcidump", &self.fcidump),
            ("freeze", &self.freeze),
            ("drop", &self.drop),
            ("hfplus", &self.hfplus),
            ("trotter_order", &self.trotter_order),
            ("trotter_steps", &self.trotter_steps),
            ("mode", &self.mode),
            ("shots", &self.shots),
            ("spam", &self.spam),
            ("bootstrap", &self.bootstrap),
            ("seed", &self.seed),
            ("out", &self.out),
            ("grid", &self.grid),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        Ok(cfg)
    }
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = cli.flags.config()?;
    let out: Output = match cli.command {
        Command::Fci => cli::cmd_fci(&cfg)?,
        Command::Synth => cli::cmd_synth(&cfg)?,
        Command::Vqe => cli::cmd_vqe(&cfg)?,
        Command::Scan => cli::cmd_scan(&cfg)?,
    };
    if let Some(dir) = &cfg.out {
        out.write_to(dir)?;
    }
    println!("{}", serde_json::to_string_pretty(&out.summary)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
