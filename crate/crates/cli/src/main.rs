use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mbqc_cli::config::{Command, CouplingArg, Family, Grid, Inputs, ModeArg, Scheme, Suite};
use mbqc_cli::output::emit;
use mbqc_cli::{figure, run, CliError, ExperimentConfig, FigureOptions};

#[derive(Parser)]
#[command(name = "mbqc", version, about = "Noisy cluster-state protocol simulator")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Information transfer along a linear chain.
    Transfer(Flags),
    /// Single-qubit Euler rotation.
    Rotate(Flags),
    /// CNOT layouts.
    Cnot(Flags),
    /// Effective operator of the bridge block.
    Bbb3(Flags),
    /// Stabilizer, staged-entangling and decoding self-checks.
    Verify(Flags),
    /// Sweep any protocol family (set --protocol).
    Sweep(Flags),
    /// Regenerate the data grid behind a named plot.
    Figure(FigureArgs),
    /// Run a config file that names its own command.
    Run {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FigureArgs {
    /// fig6a, fig6b, fig8a, fig8b, fig9a or fig9b.
    name: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo samples (fig8b).
    #[arg(long)]
    samples: Option<usize>,
    /// Bloch orders "polar,azimuth" (fig8b).
    #[arg(long, value_parser = parse_pair)]
    bloch: Option<[usize; 2]>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Default)]
struct Flags {
    /// TOML config; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    protocol: Option<Family>,
    /// Chain lengths.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Layout variants.
    #[arg(long, value_delimiter = ',')]
    variant: Vec<String>,
    /// Euler triple "zeta,nu,xi"; repeatable.
    #[arg(long, value_parser = parse_triple)]
    euler: Vec<[f64; 3]>,
    /// Common phase: value, list a,b,c or start:stop:step.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<Grid>,
    /// Gaussian width: value, list or start:stop:step.
    #[arg(long)]
    sigma: Option<Grid>,
    #[arg(long, value_enum)]
    inputs: Option<Inputs>,
    /// Bloch orders "polar,azimuth".
    #[arg(long, value_parser = parse_pair)]
    bloch: Option<[usize; 2]>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, value_enum)]
    coupling: Option<CouplingArg>,
    #[arg(long, value_enum)]
    scheme: Option<Scheme>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long)]
    outcome: Option<u8>,
    #[arg(long, value_enum)]
    suite: Option<Suite>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write the full report as TOML.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"))).collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "expected zeta,nu,xi".to_string())
}

fn parse_pair(s: &str) -> Result<[usize; 2], String> {
    let v: Vec<usize> = s.split(',').map(|x| x.trim().parse::<usize>().map_err(|e| format!("`{x}`: {e}"))).collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| "expected polar,azimuth".to_string())
}

impl Flags {
    fn into_config(self, command: Command) -> ExperimentConfig {
        ExperimentConfig {
            command: Some(command),
            protocol: self.protocol,
            n: self.n,
            variant: self.variant,
            euler: self.euler,
            theta: self.theta,
            sigma: self.sigma,
            inputs: self.inputs,
            bloch: self.bloch,
            a: self.a,
            c: self.c,
            mode: self.mode,
            coupling: self.coupling,
            scheme: self.scheme,
            order: self.order,
            samples: self.samples,
            seed: self.seed,
            budget: self.budget,
            alpha: self.alpha,
            outcome: self.outcome,
            suite: self.suite,
            output: self.output,
            report: self.report,
        }
    }
}

fn load(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    ExperimentConfig::from_toml(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn execute(cfg: ExperimentConfig) -> Result<(), CliError> {
    let out = run(&cfg)?;
    for line in &out.log {
        println!("{line}");
    }
    if let (Some(path), Some(report)) = (&cfg.report, &out.report) {
        let text = toml::to_string(report).map_err(|e| CliError::Config(format!("report: {e}")))?;
        mbqc_cli::output::write_atomic(path, text.as_bytes())?;
    }
    if out.log.is_empty() || cfg.output.is_some() {
        emit(cfg.output.as_deref(), &out.table.to_csv()?)?;
    }
    if out.failures > 0 {
        return Err(CliError::Verify(out.failures));
    }
    Ok(())
}

fn dispatch(cmd: Cmd) -> Result<(), CliError> {
    let (command, flags) = match cmd {
        Cmd::Figure(f) => {
            let o = FigureOptions { seed: f.seed, samples: f.samples, bloch: f.bloch, budget: f.budget };
            let t = figure(&f.name, &o)?;
            return emit(f.output.as_deref(), &t.to_csv()?);
        }
        Cmd::Run { file, output } => {
            let mut cfg = load(&file)?;
            if output.is_some() {
                cfg.output = output;
            }
            return execute(cfg);
        }
        Cmd::Transfer(f) => (Command::Transfer, f),
        Cmd::Rotate(f) => (Command::Rotate, f),
        Cmd::Cnot(f) => (Command::Cnot, f),
        Cmd::Bbb3(f) => (Command::Bbb3, f),
        Cmd::Verify(f) => (Command::Verify, f),
        Cmd::Sweep(f) => (Command::Sweep, f),
    };
    let base = match &flags.config {
        Some(p) => load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(c) = base.command {
        if c != command {
            return Err(CliError::Config(format!("field `command`: file says {c:?} but the subcommand is {command:?}")));
        }
    }
    execute(base.merge(&flags.into_config(command)))
}

fn threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("MBQC_THREADS") else { return Ok(()) };
    let n: usize =
        v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| CliError::Config(format!("MBQC_THREADS: `{v}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Config(format!("MBQC_THREADS: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match threads().and_then(|_| dispatch(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mbqc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
