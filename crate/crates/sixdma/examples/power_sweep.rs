//! A small transmit-power sweep over two schemes, aggregated and
//! written to CSV, mirroring what the `sixdma sweep` subcommand does.
//!
//! Run with `cargo run --release --example power_sweep`.

use sixdma::harness::{aggregate, run_sweep, write_csv, HarnessConfig, SweepParam, SweepSpec};
use sixdma::psca::OptimizerConfig;
use sixdma::scenario::{ScenarioConfig, SchemeKind};

fn main() -> Result<(), sixdma::Error> {
    let cfg = HarnessConfig {
        scenario: ScenarioConfig::default(),
        optimizer: OptimizerConfig::default(),
    };
    let spec = SweepSpec {
        param: SweepParam::TransmitPower,
        values: vec![1.0, 10.0],
        trials: 3,
        schemes: vec![SchemeKind::Proposed, SchemeKind::Fpa],
    };

    // Trials reuse seeds across schemes and values, so rows pair up.
    let mut records = run_sweep(&cfg, &spec, 1)?;
    println!("{:<10} {:>7} {:>9} {:>6} {:>6}", "scheme", "power", "mean ssr", "k_d", "k_e");
    for row in aggregate(&records) {
        println!(
            "{:<10} {:>7} {:>9.4} {:>6.2} {:>6.2}",
            row.scheme.as_str(),
            row.swept_value,
            row.ssr_bps_hz,
            row.k_d,
            row.k_e,
        );
        records.push(row);
    }

    let path = std::env::temp_dir().join("sixdma_power_sweep.csv");
    write_csv(&path, &records)?;
    println!("\nwrote {} rows to {}", records.len(), path.display());
    Ok(())
}
