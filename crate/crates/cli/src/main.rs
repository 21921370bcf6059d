mod config;
mod output;
mod run;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use config::{Overrides, Preset, Resolved};
use output::{OutDir, RunManifest};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl From<firesale::Error> for CliError {
    fn from(e: firesale::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "firesale", version, about = "Fire-sale contagion on bipartite bank-asset networks")]
struct Cli {
    /// JSON file mapping experiment names to experiments; defaults to the built-in set.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides every experiment's master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides every experiment's trial count.
    #[arg(long, global = true)]
    runs: Option<u64>,
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Base parameters the experiments are patched onto.
    #[arg(long, global = true, value_enum, default_value_t = Preset::Desk)]
    preset: Preset,
    /// Run only the named experiment.
    #[arg(long, global = true)]
    experiment: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the network edge list of one trial.
    Generate {
        #[arg(long, default_value_t = 0)]
        trial: u64,
    },
    /// Run a single cascade and print its result as JSON.
    Cascade {
        #[arg(long, default_value_t = 0)]
        trial: u64,
    },
    /// Contagion probability against mean bank degree.
    Sweep,
    /// Contagion probability ratios between capital policies.
    Policy,
    /// Default-before-contagion profiles by degree or size.
    Profile,
    /// Contagion probability over leverage and mean degree.
    Phase,
    /// Check model invariants.
    Selftest,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Generate { .. } => "generate",
            Command::Cascade { .. } => "cascade",
            Command::Sweep => "sweep",
            Command::Policy => "policy",
            Command::Profile => "profile",
            Command::Phase => "phase",
            Command::Selftest => "selftest",
        }
    }

    /// Entry kind the command runs when no experiment is named.
    fn kind(&self) -> &'static str {
        match self {
            Command::Generate { .. } | Command::Cascade { .. } => "single",
            Command::Sweep => "sweep",
            Command::Policy => "ratio",
            Command::Profile => "profile",
            Command::Phase => "phase",
            Command::Selftest => "",
        }
    }
}

fn select(cli: &Cli, resolved: Vec<Resolved>) -> Result<Vec<Resolved>, CliError> {
    let kind = cli.command.kind();
    let single = matches!(cli.command, Command::Generate { .. } | Command::Cascade { .. });
    let chosen: Vec<Resolved> = match &cli.experiment {
        Some(name) => {
            let r = resolved
                .into_iter()
                .find(|r| &r.name == name)
                .ok_or_else(|| CliError::Config(format!("no experiment named {name}")))?;
            if !single && r.entry.kind() != kind {
                return Err(CliError::Config(format!(
                    "experiment {name} is a {} experiment; `{}` runs {kind} experiments",
                    r.entry.kind(),
                    cli.command.name()
                )));
            }
            vec![r]
        }
        None => resolved.into_iter().filter(|r| r.entry.kind() == kind).collect(),
    };
    if chosen.is_empty() {
        return Err(CliError::Config(format!("no {kind} experiments in config")));
    }
    Ok(chosen)
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let start = Instant::now();
    let file = match &cli.config {
        Some(path) => config::load(path)?,
        None => config::default_file(),
    };
    let overrides = Overrides { seed: cli.seed, runs: cli.runs };
    let chosen = select(cli, config::resolve(&file, cli.preset, overrides)?)?;

    let out = OutDir::create(&cli.out)?;
    let mut manifest = RunManifest {
        config_path: cli.config.as_ref().map(|p| p.display().to_string()),
        preset: format!("{:?}", cli.preset).to_lowercase(),
        command: cli.command.name().to_string(),
        config: config::echo(&chosen),
        master_seed: cli.seed.unwrap_or(chosen[0].config.master_seed),
        output_dir: cli.out.display().to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time: None,
    };
    out.write_manifest(&manifest)?;

    for r in &chosen {
        match cli.command {
            Command::Generate { trial } => print!("{}", run::generate(r, trial, &out)?),
            Command::Cascade { trial } => println!("{}", run::cascade(r, trial, &out)?),
            Command::Sweep => run::sweep(r, &out)?,
            Command::Policy => run::policy(r, &out)?,
            Command::Profile => run::profile(r, &out)?,
            Command::Phase => run::phase(r, &out)?,
            Command::Selftest => unreachable!("handled before config loading"),
        }
    }

    manifest.wall_time = Some(start.elapsed().as_secs_f64());
    out.write_manifest(&manifest)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    if let Command::Selftest = cli.command {
        return if selftest::run() { ExitCode::SUCCESS } else { ExitCode::from(2) };
    }
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ CliError::Config(_)) => {
            eprintln!("firesale: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("firesale: {e}");
            ExitCode::from(2)
        }
    }
}
