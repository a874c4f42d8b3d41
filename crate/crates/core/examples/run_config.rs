//! Drives a full simulation from a JSON configuration, as the `simulate` command does.
//!
//! cargo run --release --example run_config -- configs/soliton.json output/soliton

use std::path::PathBuf;

use dispersive_wave::config::RunConfig;
use dispersive_wave::run::cmd_simulate;

fn main() -> dispersive_wave::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = PathBuf::from(args.next().unwrap_or_else(|| "configs/soliton.json".to_string()));
    let config = RunConfig::load(&path)?;
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| config.outputs.dir.clone());
    let summary = cmd_simulate(&config, &out)?;
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(())
}
