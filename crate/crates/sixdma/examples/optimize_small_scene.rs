//! A full optimizer run on a small scene, with the solve trace opened
//! up: the beamformers-only baseline, per-iteration recorded values,
//! step acceptance statistics, and the final feasibility check.
//!
//! Run with `cargo run --release --example optimize_small_scene`.

use sixdma::psca::{optimize, OptimizerConfig, StepKind};
use sixdma::scenario::ScenarioConfig;

fn main() -> Result<(), sixdma::Error> {
    let config = ScenarioConfig {
        surfaces: 4,
        antennas_per_surface: 2,
        mean_users: 3.0,
        mean_eves: 1.0,
        region_radius_m: 0.5,
        distance_range_m: (15.0, 60.0),
        seed: 7,
        ..ScenarioConfig::default()
    };
    let scene = config.scenario(0)?;
    let poses = config.initial_poses()?;
    println!(
        "scene: {} users, {} eavesdroppers, {} surfaces x {} antennas",
        scene.user_count(),
        scene.eve_count(),
        config.surfaces,
        config.antennas_per_surface,
    );

    let opt = OptimizerConfig::default();
    let start = std::time::Instant::now();
    let trace = optimize(&scene, &poses, &opt)?;
    let elapsed = start.elapsed();

    println!("\nsilent start (no transmission): recorded ssr {:.4}", trace.initial_ssr);
    println!("beamformers-only baseline at the initial poses: {:.4}", trace.baseline_ssr);
    println!("recorded ssr per outer iteration:");
    for (i, (rec, raw)) in trace.outer_ssr.iter().zip(&trace.outer_ssr_raw).enumerate() {
        println!("  outer {:>2}: recorded {rec:.6}  raw {raw:.6}", i + 1);
    }

    // Step statistics: how often each block actually moved.
    let mut stats = [(0usize, 0usize); 2];
    let mut backtracks = 0usize;
    for s in &trace.steps {
        let slot = match s.kind {
            StepKind::Position => &mut stats[0],
            StepKind::Rotation | StepKind::Azimuth => &mut stats[1],
        };
        slot.1 += 1;
        if s.accepted {
            slot.0 += 1;
        }
        backtracks += s.backtracks;
    }
    println!(
        "\nsteps: positions {}/{} accepted, rotations {}/{} accepted, {} backtracks, {} reverts",
        stats[0].0, stats[0].1, stats[1].0, stats[1].1, backtracks, trace.reverts,
    );

    let report = scene.constraint_report(&trace.final_poses);
    println!(
        "\nfinal: ssr {:.6}, alpha {}, power used {:.6} of {} W, worst constraint violation {:.2e}",
        trace.final_ssr(),
        trace.final_beams.alpha,
        trace.final_beams.total_power(),
        scene.p_max,
        report.worst_violation(),
    );
    println!("solved {} outer iterations in {:.1} ms", trace.outer_iters(), elapsed.as_secs_f64() * 1e3);
    Ok(())
}
