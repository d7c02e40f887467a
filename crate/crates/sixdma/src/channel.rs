//! Line-of-sight channel between the movable surfaces and the terminals.
//!
//! For a terminal at distance `d_b` from the center of surface `b`, the
//! channel block of that surface is
//!
//! `sqrt(g_b) * exp(-j 2 pi d_b / lambda) * a_b`
//!
//! where `a_b` holds per-element phases `exp(j 2 pi f_b . r_{b,n} /
//! lambda)` built from the unit direction `f_b` toward the terminal and
//! the global element positions `r_{b,n}`, and `g_b` is the element gain
//! for the departure direction seen in the surface-local frame. Blocks
//! are concatenated surface-major into a `1 x N*B` row and scaled by the
//! real positive path gain `lambda / (4 pi d_ref)` with `d_ref` the
//! terminal's distance to the reference origin.

use nalgebra::{DMatrix, DVector, RowDVector, Vector3};
use num_complex::Complex;

use crate::geometry::{ArraySpec, GainPattern, SurfacePose};
use crate::{Error, Result};

/// Complex sample type used throughout.
pub type Cx = Complex<f64>;

/// One channel row (`1 x N*B`), surface-major element order.
pub type ChannelVector = RowDVector<Cx>;

/// Stacked channel rows, one per terminal.
pub type ChannelMatrix = DMatrix<Cx>;

/// Role of a terminal in the scene.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalKind {
    User,
    Eavesdropper,
}

/// A single-antenna receiver at a fixed position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Terminal {
    pub position: Vector3<f64>,
    /// Receiver noise power in watts.
    pub noise_power: f64,
    pub kind: TerminalKind,
}

/// Unit direction-of-departure vector for azimuth `phi` and elevation
/// `theta`.
pub fn dod_vector(azimuth: f64, elevation: f64) -> Vector3<f64> {
    let (st, ct) = elevation.sin_cos();
    let (sp, cp) = azimuth.sin_cos();
    Vector3::new(ct * cp, ct * sp, st)
}

/// Unit direction and distance from `from` to `to`.
///
/// Errors when the two points coincide, where no direction exists.
pub fn direction_to_terminal(from: &Vector3<f64>, to: &Vector3<f64>) -> Result<(Vector3<f64>, f64)> {
    let delta = to - from;
    let d = delta.norm();
    if d == 0.0 {
        return Err(Error::ZeroDistance);
    }
    Ok((delta / d, d))
}

/// Departure direction expressed in the surface-local frame, as
/// elevation above the surface plane and azimuth in it.
pub fn local_angles(f: &Vector3<f64>, rotation: &Vector3<f64>) -> (f64, f64) {
    let f_local = crate::geometry::rotation_matrix(rotation).transpose() * f;
    let theta = f_local.z.clamp(-1.0, 1.0).asin();
    let phi = f_local.y.atan2(f_local.x);
    (theta, phi)
}

/// Element gain (linear power) for a departure direction given in
/// surface-local angles. Broadside is `theta = pi/2`.
pub fn element_gain(theta_local: f64, phi_local: f64, pattern: &GainPattern) -> f64 {
    match *pattern {
        GainPattern::Isotropic => 1.0,
        GainPattern::Sector {
            max_gain_dbi,
            front_to_back_db,
            vertical_3db_rad,
            horizontal_3db_rad,
        } => {
            let (st, ct) = theta_local.sin_cos();
            let (sp, cp) = phi_local.sin_cos();
            let dir = Vector3::new(ct * cp, ct * sp, st);
            // Principal-cut deviations from the local broadside +z.
            let dv = dir.y.atan2(dir.z);
            let dh = dir.x.atan2(dir.z);
            let roll_off = 12.0 * (dv / vertical_3db_rad).powi(2)
                + 12.0 * (dh / horizontal_3db_rad).powi(2);
            let a_dbi = max_gain_dbi - roll_off.min(front_to_back_db);
            10f64.powf(a_dbi / 10.0)
        }
    }
}

/// Steering vector of one surface toward direction `f`, using global
/// element positions `q_b + R(u_b) rho_n`.
pub fn steering_vector(
    pose: &SurfacePose,
    array: &ArraySpec,
    f: &Vector3<f64>,
    wavelength: f64,
) -> DVector<Cx> {
    let rot = pose.rotation_matrix();
    let k = crate::geometry::TWO_PI / wavelength;
    DVector::from_iterator(
        array.antenna_count(),
        array.element_positions.iter().map(|rho| {
            let r_global = pose.position + rot * rho;
            Cx::from_polar(1.0, k * f.dot(&r_global))
        }),
    )
}

/// Free-space path gain `lambda / (4 pi d_ref)`, a real positive scalar.
pub fn path_gain(d_ref: f64, wavelength: f64) -> Result<f64> {
    if !(d_ref > 0.0) || !d_ref.is_finite() {
        return Err(Error::ZeroDistance);
    }
    if !(wavelength > 0.0) || !wavelength.is_finite() {
        return Err(Error::param("wavelength_m", "must be positive and finite"));
    }
    Ok(wavelength / (4.0 * std::f64::consts::PI * d_ref))
}

/// Channel row from all surfaces to one terminal.
pub fn terminal_channel(
    poses: &[SurfacePose],
    array: &ArraySpec,
    terminal: &Terminal,
    wavelength: f64,
) -> Result<ChannelVector> {
    let n = array.antenna_count();
    let (_, d_ref) = direction_to_terminal(&Vector3::zeros(), &terminal.position)?;
    let v = path_gain(d_ref, wavelength)?;
    let k = crate::geometry::TWO_PI / wavelength;
    let mut row = RowDVector::zeros(n * poses.len());
    for (b, pose) in poses.iter().enumerate() {
        let (f, d_b) = direction_to_terminal(&pose.position, &terminal.position)?;
        let (theta, phi) = local_angles(&f, &pose.rotation);
        let amp = v * element_gain(theta, phi, &array.pattern).sqrt();
        let bulk = Cx::from_polar(amp, -k * d_b);
        let steer = steering_vector(pose, array, &f, wavelength);
        for (i, s) in steer.iter().enumerate() {
            row[b * n + i] = bulk * s;
        }
    }
    Ok(row)
}

/// Stacks channel rows for a mixed terminal list into the user matrix
/// `H` (`K_D x N*B`) and the eavesdropper matrix `H_eve` (`K_E x N*B`),
/// each in input order within its kind.
pub fn assemble_channels(
    poses: &[SurfacePose],
    array: &ArraySpec,
    terminals: &[Terminal],
    wavelength: f64,
) -> Result<(ChannelMatrix, ChannelMatrix)> {
    let nb = array.antenna_count() * poses.len();
    let mut users = Vec::new();
    let mut eves = Vec::new();
    for t in terminals {
        let row = terminal_channel(poses, array, t, wavelength)?;
        match t.kind {
            TerminalKind::User => users.push(row),
            TerminalKind::Eavesdropper => eves.push(row),
        }
    }
    let stack = |rows: Vec<ChannelVector>| {
        DMatrix::from_fn(rows.len(), nb, |i, j| rows[i][j])
    };
    Ok((stack(users), stack(eves)))
}
