use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use dispersive_wave::config::RunConfig;
use dispersive_wave::model::PdeParams;
use dispersive_wave::run::{cmd_bound_config, cmd_bound_data, cmd_simulate, cmd_soliton, cmd_sweep};
use dispersive_wave::Result;

#[derive(Parser)]
#[command(name = "dispwave", version, about = "Simulate and analyse gamma-family Camassa-Holm waves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a configured initial value problem
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (defaults to outputs.dir of the config)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a solitary-wave profile
    Soliton {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        omega: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long = "L", default_value_t = 40.0)]
        half_width: f64,
        #[arg(long = "N", default_value_t = 2048)]
        n_points: usize,
        #[arg(long, default_value = "output")]
        out: PathBuf,
    },
    /// Evaluate the blow-up criterion and existence-time lower bound
    Bound {
        #[arg(long, conflicts_with = "data", required_unless_present = "data")]
        config: Option<PathBuf>,
        /// x,u table; requires --gamma and --omega
        #[arg(long, requires_all = ["gamma", "omega"])]
        data: Option<PathBuf>,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        omega: Option<f64>,
    },
    /// Compare observed blow-up times with the bound across a family
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn out_dir(out: Option<PathBuf>, config: &RunConfig) -> PathBuf {
    out.unwrap_or_else(|| config.outputs.dir.clone())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { config, out } => {
            let cfg = RunConfig::load(&config)?;
            let dir = out_dir(out, &cfg);
            let s = cmd_simulate(&cfg, &dir)?;
            println!("stop_reason: {}", s.stop_reason.as_str());
            println!("t_stop: {}", s.t_stop);
            println!("energy drift: {:.3e}", s.energy_drift);
            if let Some(t) = s.t_star {
                println!("extrapolated blow-up time: {t}");
            }
            if s.bound.t_lower.is_finite() {
                println!("T_lower: {}", s.bound.t_lower);
            } else {
                println!("T_lower: infinite");
            }
            match (&s.verdict, &s.note) {
                (Some(v), _) => println!("blow-up criterion triggered: {}", v.triggered),
                (None, Some(note)) => println!("{note}"),
                _ => {}
            }
            if let Some(e) = s.shape_error {
                println!("shape error: {e:.3e}");
            }
            for w in &s.warnings {
                eprintln!("warning: {w}");
            }
            println!("artifacts: {}", dir.display());
        }
        Command::Soliton { c, omega, gamma, half_width, n_points, out } => {
            let params = PdeParams::new(gamma, omega)?;
            let (r, _) = cmd_soliton(c, params, half_width, n_points, &out)?;
            println!("a = {}", r.amplitude);
            println!("kappa = {} (measured {})", r.decay_rate, r.measured_decay_rate);
            println!("first-integral residual = {:.3e}", r.first_integral_residual);
            println!("profile: {}", r.profile_path.display());
        }
        Command::Bound { config, data, gamma, omega } => {
            let report = match (config, data) {
                (Some(path), _) => cmd_bound_config(&RunConfig::load(&path)?)?,
                (None, Some(path)) => {
                    let params = PdeParams::new(gamma.unwrap_or_default(), omega.unwrap_or_default())?;
                    cmd_bound_data(Path::new(&path), &params)?
                }
                (None, None) => unreachable!("clap requires one source"),
            };
            print_json(&report)?;
        }
        Command::Sweep { config, out, workers } => {
            let cfg = RunConfig::load(&config)?;
            let dir = out_dir(out, &cfg);
            let s = cmd_sweep(&cfg, &dir, workers)?;
            println!(
                "{}: {} members, {} censored, {} failed",
                s.family_id,
                s.rows.len(),
                s.censored,
                s.failed
            );
            println!("comparison: {}", dir.join("comparison.csv").display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
