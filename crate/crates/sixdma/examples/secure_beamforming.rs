//! Rate anatomy of one scene: MMSE data beams plus null-space
//! artificial noise, before and after pose optimization.
//!
//! Prints per-user rates, the cooperative eavesdropper rate on each
//! stream, the chosen power split, and how the optimizer shifted the
//! balance. Run with `cargo run --release --example secure_beamforming`.

use sixdma::beamform::power_split_search;
use sixdma::harness::policy_for;
use sixdma::psca::{optimize_with_policy, OptimizerConfig};
use sixdma::scenario::{ScenarioConfig, SchemeKind};
use sixdma::secrecy::RateReport;

fn print_report(label: &str, report: &RateReport, alpha: f64) {
    println!("{label} (alpha = {alpha}):");
    println!("  user rates      {}", fmt_vec(&report.user_rates));
    println!("  eve stream rates {}", fmt_vec(&report.eve_rates));
    println!("  secrecy rates   {}", fmt_vec(&report.secrecy_rates));
    println!(
        "  sum user rate {:.3}, sum eve rate {:.3}, ssr {:.3} (raw {:.3})",
        report.user_rates.iter().sum::<f64>(),
        report.eve_rates.iter().sum::<f64>(),
        report.ssr,
        report.ssr_raw,
    );
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.2}")).collect();
    format!("[{}]", parts.join(", "))
}

fn main() -> Result<(), sixdma::Error> {
    let config = ScenarioConfig::default();
    let scene = config.scenario(0)?;
    let poses = config.initial_poses()?;
    println!(
        "scene: {} users, {} eavesdroppers, {} surfaces x {} antennas\n",
        scene.user_count(),
        scene.eve_count(),
        config.surfaces,
        config.antennas_per_surface,
    );

    // Beamforming alone at the initial ring layout.
    let opt = OptimizerConfig::default();
    let (h, h_eve) = scene.channels(&poses)?;
    let (beams, report) = power_split_search(
        &h,
        &h_eve,
        &scene.user_noise(),
        &scene.eve_noise(),
        scene.p_max,
        &opt.alpha_grid,
    )?;
    print_report("initial poses, best power split", &report, beams.alpha);

    // Full pose optimization on top.
    let trace = optimize_with_policy(&scene, &poses, &opt, policy_for(SchemeKind::Proposed))?;
    println!();
    print_report(
        "optimized poses",
        &trace.final_report,
        trace.final_beams.alpha,
    );
    println!(
        "\nrecorded ssr per outer iteration: {}",
        fmt_vec(&trace.outer_ssr)
    );
    let moved: Vec<String> = poses
        .iter()
        .zip(&trace.final_poses)
        .map(|(a, b)| format!("{:.3}", (a.position - b.position).norm()))
        .collect();
    println!("surface displacement, meters: [{}]", moved.join(", "));
    Ok(())
}
