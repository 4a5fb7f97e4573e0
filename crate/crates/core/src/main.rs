use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use qwalk::experiments::{output, run, ExperimentConfig, ExperimentKind, OutputFormat};
use qwalk::params::GridAxis;
use qwalk::state::ChannelKind;
use qwalk::Error;

#[derive(Parser, Debug)]
#[command(
    name = "qwalk",
    version,
    about = "Topological discrete-time quantum walk experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Position distribution and localization strengths after `steps` steps.
    Probdist,
    /// Negativity over a two-parameter grid.
    NegMap,
    /// Negativity against time, one series per noise strength.
    NegTime,
    /// Distributions under each noise channel at two checkpoints.
    NoiseCompare,
    /// Bulk quasienergy gaps at 0 and pi over a two-parameter grid.
    PhaseMap,
    /// Ring spectrum and interface modes.
    EdgeSpectrum,
    /// Chiral and particle-hole symmetry checks.
    Validate,
}

impl Command {
    fn kind(self) -> ExperimentKind {
        match self {
            Command::Probdist => ExperimentKind::Probdist,
            Command::NegMap => ExperimentKind::NegMap,
            Command::NegTime => ExperimentKind::NegTime,
            Command::NoiseCompare => ExperimentKind::NoiseCompare,
            Command::PhaseMap => ExperimentKind::PhaseMap,
            Command::EdgeSpectrum => ExperimentKind::EdgeSpectrum,
            Command::Validate => ExperimentKind::Validate,
        }
    }
}

#[derive(Args, Debug)]
struct Global {
    /// TOML experiment file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    format: Option<OutputFormat>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true)]
    steps: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta1: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta2: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta3: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta4: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta1_minus: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta1_plus: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta2_minus: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta2_plus: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta3_minus: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta3_plus: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta4_minus: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta4_plus: Option<String>,
    /// Walk variant: standard, split-step or double-split-step.
    #[arg(long, global = true)]
    variant: Option<String>,
    /// Set theta4 = theta2 (double split-step).
    #[arg(long, global = true)]
    tie_theta4: bool,
    /// none, bitflip, yflip, zflip or depolarizing.
    #[arg(long, global = true)]
    noise: Option<ChannelKind>,
    #[arg(long, global = true)]
    p: Option<f64>,
    /// `axis:min:max:points`, e.g. `theta2-:-2pi:2pi:101`; give twice for maps.
    #[arg(long, global = true, allow_hyphen_values = true)]
    grid: Vec<String>,
    /// Ring size for `edge-spectrum` and `validate`.
    #[arg(long, global = true)]
    ring_sites: Option<usize>,
    /// Print the resolved configuration as TOML and exit.
    #[arg(long, global = true)]
    print_config: bool,
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let g = &cli.global;
    let mut cfg = match &g.config {
        Some(path) => {
            let cfg = ExperimentConfig::load(path)?;
            if cfg.experiment != cli.command.kind() {
                eprintln!(
                    "note: config describes '{}', running '{}'",
                    cfg.experiment,
                    cli.command.kind()
                );
            }
            cfg
        }
        None => ExperimentConfig::new(cli.command.kind()),
    };
    cfg.experiment = cli.command.kind();
    if let Some(dir) = &g.out {
        cfg.output.dir = dir.clone();
    }
    if let Some(f) = g.format {
        cfg.output.format = f;
    }
    if let Some(s) = g.steps {
        cfg.steps = s;
    }
    if let Some(v) = &g.variant {
        cfg.walk.variant = v.parse()?;
    }
    if g.tie_theta4 {
        cfg.walk.tie_theta4 = true;
    }
    let angles = [
        ("theta1", &g.theta1),
        ("theta2", &g.theta2),
        ("theta3", &g.theta3),
        ("theta4", &g.theta4),
        ("theta1-minus", &g.theta1_minus),
        ("theta1-plus", &g.theta1_plus),
        ("theta2-minus", &g.theta2_minus),
        ("theta2-plus", &g.theta2_plus),
        ("theta3-minus", &g.theta3_minus),
        ("theta3-plus", &g.theta3_plus),
        ("theta4-minus", &g.theta4_minus),
        ("theta4-plus", &g.theta4_plus),
    ];
    for (name, value) in angles {
        if let Some(v) = value {
            cfg.set_angle(name, v)?;
        }
    }
    if let Some(kind) = g.noise {
        cfg.channel.kind = kind;
    }
    if let Some(p) = g.p {
        cfg.channel.p = p;
    }
    if !g.grid.is_empty() {
        cfg.grid = g
            .grid
            .iter()
            .map(|s| s.parse::<GridAxis>())
            .collect::<Result<_, _>>()?;
    }
    if let Some(n) = g.ring_sites {
        cfg.spectrum.ring_sites = n;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn exit_code(e: &Error) -> u8 {
    if e.is_numerical() {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if cli.global.print_config {
        print!("{}", cfg.to_toml());
        return ExitCode::SUCCESS;
    }
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(1);
        }
    }

    let start = Instant::now();
    let result = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let paths = match output::write(&cfg, &result) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    for p in &paths {
        eprintln!("wrote {}", p.display());
    }
    eprintln!(
        "{} finished in {:.3} s",
        cfg.experiment,
        start.elapsed().as_secs_f64()
    );
    if result.passed() {
        ExitCode::SUCCESS
    } else {
        eprintln!("validation failed");
        ExitCode::from(3)
    }
}
