use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spindyn_core::harness::{
    run_scenario, run_sweep, scan_from_config, verify_spot_values, Config, SweepGrid, VerifySettings,
};
use spindyn_core::Error;

/// Correlation dynamics of a two-qubit XY spin chain with DM coupling.
#[derive(Parser)]
#[command(name = "spindyn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one scenario and write its time series as CSV.
    Run(ConfigArgs),
    /// Evaluate C, QD, CC over a two-axis grid (`axis1`, `axis2` keys).
    Sweep(ConfigArgs),
    /// Run the spot-value regression suite.
    Verify(VerifyArgs),
    /// Minimum concurrence over one period of the closed system for each of `d_values`.
    MinOverPeriod(ConfigArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// key=value config file.
    config: PathBuf,
    #[command(flatten)]
    overrides: Overrides,
}

/// Flags mirror config keys and override file values.
#[derive(Args, Default)]
struct Overrides {
    #[arg(long)]
    p0: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    d: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    env: Option<String>,
    #[arg(long = "t_end")]
    t_end: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    stride: Option<String>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    axis1: Option<String>,
    #[arg(long)]
    axis2: Option<String>,
    #[arg(long = "d_values")]
    d_values: Option<String>,
}

impl Overrides {
    fn apply(&self, cfg: &mut Config) -> Result<(), Error> {
        let pairs = [
            ("p0", &self.p0),
            ("delta", &self.delta),
            ("d", &self.d),
            ("gamma", &self.gamma),
            ("env", &self.env),
            ("t_end", &self.t_end),
            ("dt", &self.dt),
            ("stride", &self.stride),
            ("mode", &self.mode),
            ("out", &self.out),
            ("axis1", &self.axis1),
            ("axis2", &self.axis2),
            ("d_values", &self.d_values),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                cfg.set(key, v.trim())
                    .map_err(|e| Error::Config(format!("--{key}: {e}")))?;
            }
        }
        Ok(())
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Decay rate for the t = 2 snapshot checks.
    #[arg(long, default_value_t = 0.5)]
    snapshot_gamma: f64,
    #[arg(long, default_value_t = spindyn_core::evolve::DEFAULT_DT)]
    dt: f64,
}

fn load(args: &ConfigArgs) -> Result<Config, Error> {
    let mut cfg = Config::load(&args.config)?;
    args.overrides.apply(&mut cfg)?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Run(args) => {
            let cfg = load(&args)?;
            let scenario = cfg.scenario()?;
            let table = run_scenario(&scenario, cfg.mode)?;
            table.write_to(scenario.output_path.as_deref())?;
        }
        Command::Sweep(args) => {
            let cfg = load(&args)?;
            let grid = SweepGrid::from_config(&cfg)?;
            run_sweep(&grid).write_to(cfg.out.as_deref())?;
        }
        Command::MinOverPeriod(args) => {
            let cfg = load(&args)?;
            let scan = scan_from_config(&cfg)?;
            scan.table().write_to(cfg.out.as_deref())?;
            match scan.critical_d {
                Some(d) => eprintln!("critical D ~ {d:.4} (p0 = {})", scan.p0),
                None => eprintln!("critical D not bracketed by d_values"),
            }
        }
        Command::Verify(args) => {
            if !(args.dt > 0.0 && args.dt <= spindyn_core::evolve::MAX_DT) {
                return Err(Error::Config(format!("--dt {} is outside (0, 0.01]", args.dt)));
            }
            if args.snapshot_gamma.is_nan() || args.snapshot_gamma < 0.0 {
                return Err(Error::Config("--snapshot-gamma must be >= 0".into()));
            }
            let report = verify_spot_values(&VerifySettings {
                snapshot_gamma: args.snapshot_gamma,
                dt: args.dt,
            });
            println!("{report}");
            return Ok(report.all_passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("spindyn: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 1 })
        }
    }
}
