//! Tour of the pose machinery: Euler rotations, surface normals, the
//! deployment region, and the placement constraint report.
//!
//! Run with `cargo run --release --example geometry_tour`.

use nalgebra::Vector3;
use sixdma::geometry::{
    check_constraints, linearize_min_distance, rotation_matrix, wrap_angle, DeploymentRegion,
    SurfacePose,
};
use sixdma::scenario::ScenarioConfig;

fn main() -> Result<(), sixdma::Error> {
    // A rotation is three Euler angles applied as Rz(gamma) Ry(beta) Rx(alpha).
    let u = Vector3::new(0.3, 1.2, 5.9);
    let r = rotation_matrix(&u);
    println!("rotation for u = ({}, {}, {}):", u.x, u.y, u.z);
    println!("{r:.4}");
    println!(
        "orthonormality |R^T R - I| = {:.2e}, det = {:.12}",
        (r.transpose() * r - nalgebra::Matrix3::identity()).norm(),
        r.determinant(),
    );

    // Angles live on [0, 2 pi); wrapping keeps optimizer iterates there.
    println!(
        "wrap_angle(-0.1) = {:.6}, wrap_angle(7.0) = {:.6}\n",
        wrap_angle(-0.1),
        wrap_angle(7.0),
    );

    // A pose carries a position and a rotation; the surface normal is
    // the array's rotated broadside axis, local +z.
    let local_normal = Vector3::z();
    let pose = SurfacePose::new(Vector3::new(0.5, 0.0, 0.2), Vector3::new(0.0, 0.4, 1.0));
    println!("pose at {:?} has normal {:?}\n", pose.position.as_slice(), {
        let n = pose.normal(&local_normal);
        [n.x, n.y, n.z].map(|x| (x * 1e4).round() / 1e4)
    });

    // The default ring layout satisfies every placement constraint.
    let cfg = ScenarioConfig::default();
    let poses = cfg.initial_poses()?;
    let region = DeploymentRegion::Ball { radius: cfg.region_radius_m };
    let report = check_constraints(&poses, &local_normal, &region, cfg.d_min_m);
    println!("default ring of {} surfaces:", poses.len());
    println!(
        "  region margins (m): min {:.3}",
        report.region_margin.iter().cloned().fold(f64::INFINITY, f64::min),
    );
    let min_pair = report
        .pair_distance
        .iter()
        .map(|&(_, _, m)| m)
        .fold(f64::INFINITY, f64::min);
    println!("  tightest pair slack (m^2 above d_min^2): {min_pair:.4}");
    println!(
        "  worst reflection dot: {:.4}  (<= 0 keeps surfaces out of each other's front)",
        report
            .reflection
            .iter()
            .map(|&(_, _, v)| v)
            .fold(f64::NEG_INFINITY, f64::max),
    );
    println!(
        "  blockage margins (n_b . q_b >= 0): min {:.4}",
        report.blockage.iter().cloned().fold(f64::INFINITY, f64::min),
    );
    println!("  feasible within 1e-9: {}\n", report.is_feasible(1e-9));

    // Push two surfaces together and the report flags the spacing row.
    let mut bad = poses.clone();
    bad[1].position = bad[0].position + Vector3::new(0.05, 0.0, 0.0);
    let bad_report = check_constraints(&bad, &local_normal, &region, cfg.d_min_m);
    println!(
        "after squeezing surfaces 0 and 1 to 5 cm apart: feasible = {}, worst violation = {:.4}",
        bad_report.is_feasible(1e-9),
        bad_report.worst_violation(),
    );

    // The linearized spacing constraint is an inner approximation: any
    // point satisfying the halfspace also satisfies the true constraint.
    let hs = linearize_min_distance(&poses[0].position, &poses[1].position, cfg.d_min_m)?;
    let probe = poses[0].position + Vector3::new(0.02, -0.01, 0.03);
    let true_gap = (probe - poses[1].position).norm() - cfg.d_min_m;
    println!(
        "\nlinearized spacing at a probe point: halfspace slack {:.4}, true distance gap {:.4} m",
        hs.slack(&probe),
        true_gap,
    );
    Ok(())
}
