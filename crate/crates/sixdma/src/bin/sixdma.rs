//! Command-line front end: optimize one scene, sweep a parameter, or
//! validate a config file.
//!
//! `SIXDMA_WORKERS` sets the sweep worker-thread count (default 1).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sixdma::harness::{
    aggregate, load_config, run_single, run_sweep, write_csv, SweepParam, SweepSpec,
};
use sixdma::scenario::SchemeKind;

#[derive(Parser)]
#[command(name = "sixdma", version, about = "Movable-antenna secrecy-rate experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Optimize a single scene and print the outcome.
    Run {
        /// Config file (flat `key = value` lines).
        #[arg(long)]
        config: PathBuf,
        /// Scheme: proposed | fpa | circular | rotation_only.
        #[arg(long, default_value = "proposed", value_parser = parse_scheme)]
        scheme: SchemeKind,
        /// Also write the outcome as a one-row CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one scenario knob over a value list, averaging trials.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Knob to vary: power | users | eves.
        #[arg(long, value_parser = parse_param)]
        param: SweepParam,
        /// Comma-separated values for the knob.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        /// Random trials per value.
        #[arg(long)]
        trials: u64,
        /// Comma-separated scheme list.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "proposed,fpa,circular,rotation_only",
            value_parser = parse_scheme
        )]
        schemes: Vec<SchemeKind>,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Validate a config file: exit 0 if usable, 1 otherwise.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
}

fn parse_scheme(s: &str) -> Result<SchemeKind, String> {
    s.parse().map_err(|e: sixdma::Error| e.to_string())
}

fn parse_param(s: &str) -> Result<SweepParam, String> {
    s.parse().map_err(|e: sixdma::Error| e.to_string())
}

fn workers_from_env() -> Result<usize, String> {
    match std::env::var("SIXDMA_WORKERS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| format!("SIXDMA_WORKERS must be a positive integer, got `{v}`")),
        Err(_) => Ok(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Run { config, scheme, out } => {
            let cfg = load_config(&config).map_err(|e| e.to_string())?;
            let outcome =
                run_single(&cfg, scheme, 0, "none", 0.0).map_err(|e| e.to_string())?;
            let r = &outcome.record;
            let t = &outcome.trace;
            println!("scheme          {}", r.scheme);
            println!("users           {}", r.k_d);
            println!("eavesdroppers   {}", r.k_e);
            println!("initial ssr     {} b/s/Hz", t.initial_ssr);
            for (i, v) in t.outer_ssr.iter().enumerate() {
                println!("outer {:<9} {} b/s/Hz", i + 1, v);
            }
            println!("final ssr       {} b/s/Hz", r.ssr_bps_hz);
            println!("alpha           {}", r.alpha);
            println!("runtime         {} ms", r.runtime_ms);
            println!("status          {}", r.status);
            if let Some(path) = out {
                write_csv(&path, std::slice::from_ref(r)).map_err(|e| e.to_string())?;
                println!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Sweep { config, param, values, trials, schemes, out } => {
            let cfg = load_config(&config).map_err(|e| e.to_string())?;
            let workers = workers_from_env()?;
            let spec = SweepSpec { param, values, trials, schemes };
            let mut records = run_sweep(&cfg, &spec, workers).map_err(|e| e.to_string())?;
            let means = aggregate(&records);
            for m in &means {
                println!(
                    "{} {}={}: mean ssr {} b/s/Hz over {} trials",
                    m.scheme, m.swept_param, m.swept_value, m.ssr_bps_hz, spec.trials
                );
            }
            records.extend(means);
            write_csv(&out, &records).map_err(|e| e.to_string())?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Check { config } => match load_config(&config) {
            Ok(cfg) => match cfg.scenario.initial_poses() {
                Ok(_) => {
                    println!("ok");
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("invalid: {e}");
                    Ok(ExitCode::FAILURE)
                }
            },
            Err(e) => {
                eprintln!("invalid: {e}");
                Ok(ExitCode::FAILURE)
            }
        },
    }
}
