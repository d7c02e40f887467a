//! One line-of-sight channel row taken apart term by term: direction,
//! local angles, element gain, path gain, bulk phase, and steering.
//!
//! Run with `cargo run --release --example channel_anatomy`.

use nalgebra::Vector3;
use sixdma::channel::{
    direction_to_terminal, element_gain, local_angles, path_gain, steering_vector,
    terminal_channel, Terminal, TerminalKind,
};
use sixdma::geometry::{ArraySpec, GainPattern, SurfacePose, TWO_PI};

fn main() -> Result<(), sixdma::Error> {
    let wavelength = 0.125;
    let array = ArraySpec::upa(4, wavelength, GainPattern::default_sector())?;
    let user = Terminal {
        position: Vector3::new(40.0, 25.0, -8.0),
        noise_power: 1e-12,
        kind: TerminalKind::User,
    };

    // Aim the surface broadside (local +z) straight at the user: pitch
    // by the polar angle of the departure direction, then yaw to its
    // azimuth.
    let position = Vector3::new(0.6, 0.3, 0.1);
    let (f0, _) = direction_to_terminal(&position, &user.position)?;
    let pitch = f0.z.acos();
    let yaw = f0.y.atan2(f0.x);
    let pose = SurfacePose::new(position, Vector3::new(0.0, pitch, yaw));

    // Unit departure direction and exact center distance.
    let (f, d) = direction_to_terminal(&pose.position, &user.position)?;
    println!("direction f = [{:.4}, {:.4}, {:.4}], distance d = {:.4} m", f.x, f.y, f.z, d);

    // The same direction expressed in the surface's local frame decides
    // the directional element gain.
    let (theta, phi) = local_angles(&f, &pose.rotation);
    let gain = element_gain(theta, phi, &array.pattern);
    println!(
        "local elevation {:.4} rad, local azimuth {:.4} rad -> element gain {:.2} dBi",
        theta,
        phi,
        10.0 * gain.log10(),
    );

    // Scalar path amplitude uses the distance from the origin, shared by
    // all surfaces of the station.
    let d_ref = user.position.norm();
    let v = path_gain(d_ref, wavelength)?;
    println!("path gain lambda/(4 pi d_ref) = {v:.3e} (d_ref = {d_ref:.3} m)");

    // Per-element steering phases come from the global element positions.
    let steer = steering_vector(&pose, &array, &f, wavelength);
    let phases: Vec<String> = steer.iter().map(|s| format!("{:.3}", s.arg())).collect();
    println!("steering phases (rad): [{}]", phases.join(", "));

    // The assembled row is bulk * steering with |entry| = v * sqrt(gain).
    let row = terminal_channel(&[pose], &array, &user, wavelength)?;
    let expected_amp = v * gain.sqrt();
    println!(
        "channel row magnitudes: first {:.4e}, expected v*sqrt(A) = {:.4e}",
        row[0].norm(),
        expected_amp,
    );
    let bulk_phase = (-TWO_PI * d / wavelength).rem_euclid(TWO_PI);
    let recovered = (row[0] / steer[0]).arg().rem_euclid(TWO_PI);
    println!("bulk phase -2 pi d / lambda: expected {bulk_phase:.4}, recovered {recovered:.4}");

    // Flip the broadside to point away from the user: the sector
    // pattern's front-to-back ratio collapses the amplitude.
    let away = SurfacePose::new(
        pose.position,
        Vector3::new(0.0, TWO_PI / 2.0 - pitch, yaw + TWO_PI / 2.0),
    );
    let row_away = terminal_channel(&[away], &array, &user, wavelength)?;
    println!(
        "\nfacing vs averted amplitude: {:.4e} vs {:.4e} ({:.1} dB front-to-back)",
        row[0].norm(),
        row_away[0].norm(),
        20.0 * (row[0].norm() / row_away[0].norm()).log10(),
    );
    Ok(())
}
