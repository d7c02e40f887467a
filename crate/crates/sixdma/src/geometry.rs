//! Surface poses, rotations, deployment regions, and placement constraints.
//!
//! Each antenna surface is a small planar array with a 3D position and a
//! 3D rotation given by Euler angles `(alpha, beta, gamma)` applied
//! intrinsically about x, then y, then z: the rotation matrix is
//! `R_z(gamma) * R_y(beta) * R_x(alpha)`. Angles are stored wrapped to
//! `[0, 2*pi)`.
//!
//! The placement constraints on a set of surfaces are
//!
//! - region: every position stays inside the deployment region,
//! - spacing: pairwise center distances stay at or above `d_min`,
//! - reflection: no surface normal points toward another surface,
//!   `n_i . (q_j - q_i) <= 0`,
//! - blockage: every normal points away from the region center,
//!   `n_b . q_b >= 0`.
//!
//! The spacing constraint is reverse-convex; [`linearize_min_distance`]
//! replaces it by a halfspace that is an inner approximation, so points
//! satisfying the halfspace always satisfy the true constraint.

use nalgebra::{Matrix3, Vector3};

use crate::{Error, Result};

/// Full circle, used for angle wrapping.
pub const TWO_PI: f64 = std::f64::consts::TAU;

/// Wraps an angle to the representative in `[0, 2*pi)`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TWO_PI);
    // rem_euclid can return exactly TWO_PI when a is a tiny negative number.
    if r >= TWO_PI {
        0.0
    } else {
        r
    }
}

/// Position and orientation of one antenna surface.
///
/// `rotation` holds Euler angles `(alpha, beta, gamma)` in radians,
/// wrapped to `[0, 2*pi)` by the constructor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePose {
    pub position: Vector3<f64>,
    pub rotation: Vector3<f64>,
}

impl SurfacePose {
    /// Builds a pose, wrapping each Euler angle to `[0, 2*pi)`.
    pub fn new(position: Vector3<f64>, rotation: Vector3<f64>) -> Self {
        SurfacePose { position, rotation: rotation.map(wrap_angle) }
    }

    /// Rotation matrix `R_z(gamma) * R_y(beta) * R_x(alpha)` for this pose.
    pub fn rotation_matrix(&self) -> Matrix3<f64> {
        rotation_matrix(&self.rotation)
    }

    /// Outward normal of the surface: the rotated local normal.
    pub fn normal(&self, local_normal: &Vector3<f64>) -> Vector3<f64> {
        self.rotation_matrix() * local_normal
    }
}

/// Rotation about the x axis.
pub fn rotation_x(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

/// Rotation about the y axis.
pub fn rotation_y(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

/// Rotation about the z axis.
pub fn rotation_z(a: f64) -> Matrix3<f64> {
    let (s, c) = a.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Composed rotation `R_z(gamma) * R_y(beta) * R_x(alpha)` for Euler
/// angles `rotation = (alpha, beta, gamma)`.
pub fn rotation_matrix(rotation: &Vector3<f64>) -> Matrix3<f64> {
    rotation_z(rotation.z) * rotation_y(rotation.y) * rotation_x(rotation.x)
}

/// Jacobian of the rotated normal with respect to the Euler angles.
///
/// Column `k` is the partial derivative of `R(u) * local_normal` with
/// respect to angle `k` of `u = (alpha, beta, gamma)`.
pub fn normal_jacobian(rotation: &Vector3<f64>, local_normal: &Vector3<f64>) -> Matrix3<f64> {
    let (sa, ca) = rotation.x.sin_cos();
    let (sb, cb) = rotation.y.sin_cos();
    let (sg, cg) = rotation.z.sin_cos();
    let rx = rotation_x(rotation.x);
    let ry = rotation_y(rotation.y);
    let rz = rotation_z(rotation.z);
    let dx = Matrix3::new(0.0, 0.0, 0.0, 0.0, -sa, -ca, 0.0, ca, -sa);
    let dy = Matrix3::new(-sb, 0.0, cb, 0.0, 0.0, 0.0, -cb, 0.0, -sb);
    let dz = Matrix3::new(-sg, -cg, 0.0, cg, -sg, 0.0, 0.0, 0.0, 0.0);
    let c0 = rz * ry * dx * local_normal;
    let c1 = rz * dy * rx * local_normal;
    let c2 = dz * ry * rx * local_normal;
    Matrix3::from_columns(&[c0, c1, c2])
}

/// Directional gain pattern of a single antenna element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainPattern {
    /// Unit gain in every direction.
    Isotropic,
    /// Sectored pattern: `A(dir) = max_gain_dbi - min(12 (dv/v3db)^2 +
    /// 12 (dh/h3db)^2, front_to_back_db)` in dBi, where `dv` and `dh`
    /// are the principal-cut deviations from broadside.
    Sector {
        max_gain_dbi: f64,
        front_to_back_db: f64,
        vertical_3db_rad: f64,
        horizontal_3db_rad: f64,
    },
}

impl GainPattern {
    /// The sectored pattern with 8 dBi peak gain, 30 dB front-to-back
    /// ratio, and 65 degree half-power beamwidths in both cuts.
    pub fn default_sector() -> Self {
        let bw = 65.0_f64.to_radians();
        GainPattern::Sector {
            max_gain_dbi: 8.0,
            front_to_back_db: 30.0,
            vertical_3db_rad: bw,
            horizontal_3db_rad: bw,
        }
    }
}

/// Element layout shared by all surfaces.
///
/// Element positions are in the surface-local frame: in-plane (zero z)
/// and zero-mean, so the surface center is the phase reference. The
/// local normal is the broadside direction `+z`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArraySpec {
    pub element_positions: Vec<Vector3<f64>>,
    pub local_normal: Vector3<f64>,
    pub pattern: GainPattern,
}

impl ArraySpec {
    /// Uniform planar array of `n` elements at half-wavelength spacing.
    ///
    /// The grid is `nx * ny` with `ny` the largest divisor of `n` not
    /// exceeding `sqrt(n)`, laid out in the local x-y plane, x-major.
    pub fn upa(n: usize, wavelength: f64, pattern: GainPattern) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("antennas_per_surface", "must be at least 1"));
        }
        if !(wavelength > 0.0) || !wavelength.is_finite() {
            return Err(Error::param("wavelength_m", "must be positive and finite"));
        }
        let mut ny = (n as f64).sqrt().floor() as usize;
        while n % ny != 0 {
            ny -= 1;
        }
        let nx = n / ny;
        let s = wavelength / 2.0;
        let mut element_positions = Vec::with_capacity(n);
        for iy in 0..ny {
            for ix in 0..nx {
                let x = (ix as f64 - (nx as f64 - 1.0) / 2.0) * s;
                let y = (iy as f64 - (ny as f64 - 1.0) / 2.0) * s;
                element_positions.push(Vector3::new(x, y, 0.0));
            }
        }
        Ok(ArraySpec { element_positions, local_normal: Vector3::z(), pattern })
    }

    /// Number of elements per surface.
    pub fn antenna_count(&self) -> usize {
        self.element_positions.len()
    }
}

/// Region the surface centers must stay inside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeploymentRegion {
    /// Ball of the given radius centered at the origin.
    Ball { radius: f64 },
    /// Axis-aligned box `|p_i| <= half_widths_i` centered at the origin.
    Box { half_widths: Vector3<f64> },
}

impl DeploymentRegion {
    /// Signed margin to the boundary: nonnegative inside, negative outside.
    pub fn margin(&self, p: &Vector3<f64>) -> f64 {
        match self {
            DeploymentRegion::Ball { radius } => radius - p.norm(),
            DeploymentRegion::Box { half_widths } => {
                let mut m = f64::INFINITY;
                for i in 0..3 {
                    m = m.min(half_widths[i] - p[i].abs());
                }
                m
            }
        }
    }

    /// Whether `p` lies inside the region, allowing boundary slack `tol`.
    pub fn contains(&self, p: &Vector3<f64>, tol: f64) -> bool {
        self.margin(p) >= -tol
    }
}

/// Closed halfspace `normal . x <= offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Halfspace {
    pub normal: Vector3<f64>,
    pub offset: f64,
}

impl Halfspace {
    /// Constraint slack at `x`: nonnegative when `x` satisfies the halfspace.
    pub fn slack(&self, x: &Vector3<f64>) -> f64 {
        self.offset - self.normal.dot(x)
    }
}

/// Signed residuals of every placement constraint for a set of poses.
///
/// Sign conventions: `region_margin`, `pair_distance`, and `blockage`
/// are feasible when nonnegative; `reflection` is feasible when
/// nonpositive.
#[derive(Debug, Clone)]
pub struct ConstraintReport {
    /// Per surface: region boundary margin.
    pub region_margin: Vec<f64>,
    /// Per unordered pair `(i, j)`, `i < j`: `||q_i - q_j||^2 - d_min^2`.
    pub pair_distance: Vec<(usize, usize, f64)>,
    /// Per ordered pair `(i, j)`, `i != j`: `n_i . (q_j - q_i)`.
    pub reflection: Vec<(usize, usize, f64)>,
    /// Per surface: `n_b . q_b`.
    pub blockage: Vec<f64>,
}

impl ConstraintReport {
    /// Region membership flags derived from the margins.
    pub fn region_flags(&self) -> Vec<bool> {
        self.region_margin.iter().map(|&m| m >= 0.0).collect()
    }

    /// Largest constraint violation, zero when fully feasible.
    pub fn worst_violation(&self) -> f64 {
        let mut w = 0.0_f64;
        for &m in &self.region_margin {
            w = w.max(-m);
        }
        for &(_, _, m) in &self.pair_distance {
            w = w.max(-m);
        }
        for &(_, _, r) in &self.reflection {
            w = w.max(r);
        }
        for &m in &self.blockage {
            w = w.max(-m);
        }
        w
    }

    /// Whether every constraint holds within violation `tol`.
    pub fn is_feasible(&self, tol: f64) -> bool {
        self.worst_violation() <= tol
    }
}

/// Evaluates every placement constraint for the given poses.
pub fn check_constraints(
    poses: &[SurfacePose],
    local_normal: &Vector3<f64>,
    region: &DeploymentRegion,
    d_min: f64,
) -> ConstraintReport {
    let b = poses.len();
    let normals: Vec<Vector3<f64>> = poses.iter().map(|p| p.normal(local_normal)).collect();
    let mut report = ConstraintReport {
        region_margin: Vec::with_capacity(b),
        pair_distance: Vec::with_capacity(b * (b.saturating_sub(1)) / 2),
        reflection: Vec::with_capacity(b * b.saturating_sub(1)),
        blockage: Vec::with_capacity(b),
    };
    for (i, pose) in poses.iter().enumerate() {
        report.region_margin.push(region.margin(&pose.position));
        report.blockage.push(normals[i].dot(&pose.position));
    }
    for i in 0..b {
        for j in 0..b {
            if i == j {
                continue;
            }
            let d = poses[j].position - poses[i].position;
            if i < j {
                report.pair_distance.push((i, j, d.norm_squared() - d_min * d_min));
            }
            report.reflection.push((i, j, normals[i].dot(&d)));
        }
    }
    report
}

/// Inner linearization of the pairwise spacing constraint
/// `||q - q_other||^2 >= d_min^2` around `q_prev`.
///
/// The convex distance term is bounded below by its tangent at `q_prev`,
/// so every point in the returned halfspace satisfies the true
/// constraint. Errors when `q_prev` coincides with `q_other`, where no
/// tangent direction exists.
pub fn linearize_min_distance(
    q_prev: &Vector3<f64>,
    q_other: &Vector3<f64>,
    d_min: f64,
) -> Result<Halfspace> {
    let delta = q_prev - q_other;
    let n2 = delta.norm_squared();
    if n2 == 0.0 {
        return Err(Error::param("q_prev", "coincides with the other surface position"));
    }
    Ok(Halfspace {
        normal: -2.0 * delta,
        offset: n2 - 2.0 * delta.dot(q_prev) - d_min * d_min,
    })
}

/// Halfspaces in position space that keep surface `b` feasible while the
/// other surfaces stay put: linearized spacing rows plus the exact
/// reflection and blockage rows that involve `q_b`.
pub fn position_constraints(
    poses: &[SurfacePose],
    b: usize,
    local_normal: &Vector3<f64>,
    d_min: f64,
) -> Result<Vec<Halfspace>> {
    let q_b = poses[b].position;
    let n_b = poses[b].normal(local_normal);
    let mut rows = Vec::with_capacity(3 * poses.len());
    for (j, pose) in poses.iter().enumerate() {
        if j == b {
            continue;
        }
        rows.push(linearize_min_distance(&q_b, &pose.position, d_min)?);
        // Reflection seen from surface j: n_j . (q_b - q_j) <= 0.
        let n_j = pose.normal(local_normal);
        rows.push(Halfspace { normal: n_j, offset: n_j.dot(&pose.position) });
        // Reflection seen from surface b: n_b . (q_j - q_b) <= 0.
        rows.push(Halfspace { normal: -n_b, offset: -n_b.dot(&pose.position) });
    }
    // Blockage: n_b . q_b >= 0.
    rows.push(Halfspace { normal: -n_b, offset: 0.0 });
    Ok(rows)
}

/// Halfspaces in Euler-angle space that keep surface `b` feasible to
/// first order while every position and every other rotation stays put.
///
/// The rotated normal is linearized as `n(u) ~ n(u_prev) + J (u -
/// u_prev)`; the reflection rows of surface `b` and its blockage row
/// become halfspaces on `u`. Linearization error is handled by the
/// caller re-checking the true constraints.
pub fn linearize_rotation_constraints(
    u_prev: &Vector3<f64>,
    poses: &[SurfacePose],
    b: usize,
    local_normal: &Vector3<f64>,
) -> Vec<Halfspace> {
    let n0 = rotation_matrix(u_prev) * local_normal;
    let jac = normal_jacobian(u_prev, local_normal);
    let q_b = poses[b].position;
    let mut rows = Vec::with_capacity(poses.len());
    for (j, pose) in poses.iter().enumerate() {
        if j == b {
            continue;
        }
        // n(u) . d <= 0 with d = q_j - q_b.
        let d = pose.position - q_b;
        let row = jac.transpose() * d;
        rows.push(Halfspace { normal: row, offset: row.dot(u_prev) - n0.dot(&d) });
    }
    // n(u) . q_b >= 0.
    let row = jac.transpose() * q_b;
    rows.push(Halfspace { normal: -row, offset: n0.dot(&q_b) - row.dot(u_prev) });
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;

    #[test]
    fn axis_rotations_move_unit_vectors_as_expected() {
        let e = (rotation_z(FRAC_PI_2) * Vector3::x(), Vector3::y());
        assert_relative_eq!(e.0, e.1, epsilon = 1e-12);
        let e = (rotation_x(FRAC_PI_2) * Vector3::y(), Vector3::z());
        assert_relative_eq!(e.0, e.1, epsilon = 1e-12);
        let e = (rotation_y(FRAC_PI_2) * Vector3::z(), Vector3::x());
        assert_relative_eq!(e.0, e.1, epsilon = 1e-12);
    }

    #[test]
    fn composition_applies_x_then_y_then_z() {
        let u = Vector3::new(FRAC_PI_2, FRAC_PI_2, 0.0);
        // e_y -> R_x -> e_z -> R_y -> e_x.
        assert_relative_eq!(rotation_matrix(&u) * Vector3::y(), Vector3::x(), epsilon = 1e-12);
        let u = Vector3::new(0.4, -1.3, 2.2);
        let explicit = rotation_z(2.2) * rotation_y(-1.3) * rotation_x(0.4);
        assert_relative_eq!(rotation_matrix(&u), explicit, epsilon = 1e-14);
    }

    #[test]
    fn rotation_matrices_are_orthonormal_with_unit_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let u = Vector3::new(
                rng.random_range(0.0..TWO_PI),
                rng.random_range(0.0..TWO_PI),
                rng.random_range(0.0..TWO_PI),
            );
            let r = rotation_matrix(&u);
            assert_relative_eq!(r.transpose() * r, Matrix3::identity(), epsilon = 1e-12);
            assert_relative_eq!(r.determinant(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn pose_constructor_wraps_angles() {
        let p = SurfacePose::new(Vector3::zeros(), Vector3::new(-0.1, TWO_PI + 0.3, TWO_PI));
        assert_relative_eq!(p.rotation.x, TWO_PI - 0.1, epsilon = 1e-12);
        assert_relative_eq!(p.rotation.y, 0.3, epsilon = 1e-12);
        assert_relative_eq!(p.rotation.z, 0.0, epsilon = 1e-12);
        assert!(p.rotation.iter().all(|&a| (0.0..TWO_PI).contains(&a)));
        // A denormal-scale negative angle must still land inside the range.
        let p = SurfacePose::new(Vector3::zeros(), Vector3::new(-1e-300, 0.0, 0.0));
        assert!(p.rotation.iter().all(|&a| (0.0..TWO_PI).contains(&a)));
    }

    #[test]
    fn upa_grid_is_zero_mean_in_plane_at_half_wavelength_pitch() {
        let lambda = 0.125;
        let a = ArraySpec::upa(4, lambda, GainPattern::Isotropic).unwrap();
        assert_eq!(a.antenna_count(), 4);
        let mean: Vector3<f64> = a.element_positions.iter().sum::<Vector3<f64>>() / 4.0;
        assert!(mean.norm() < 1e-15);
        let q = lambda / 4.0;
        let expected = [(-q, -q), (q, -q), (-q, q), (q, q)];
        for (p, (x, y)) in a.element_positions.iter().zip(expected) {
            assert_relative_eq!(p.x, x, epsilon = 1e-15);
            assert_relative_eq!(p.y, y, epsilon = 1e-15);
            assert_eq!(p.z, 0.0);
        }
        // Non-square counts fall back to the widest near-square grid.
        let a = ArraySpec::upa(2, lambda, GainPattern::Isotropic).unwrap();
        assert_relative_eq!(a.element_positions[0].x, -q, epsilon = 1e-15);
        assert_relative_eq!(a.element_positions[1].x, q, epsilon = 1e-15);
        assert!(ArraySpec::upa(0, lambda, GainPattern::Isotropic).is_err());
    }

    #[test]
    fn region_margins_are_signed_distances_to_the_boundary() {
        let ball = DeploymentRegion::Ball { radius: 1.0 };
        assert_relative_eq!(ball.margin(&Vector3::new(0.6, 0.0, 0.0)), 0.4, epsilon = 1e-15);
        assert!(ball.contains(&Vector3::new(0.0, 1.0, 0.0), 1e-9));
        assert!(!ball.contains(&Vector3::new(0.0, 1.1, 0.0), 1e-9));
        let bx = DeploymentRegion::Box { half_widths: Vector3::new(1.0, 2.0, 0.5) };
        assert_relative_eq!(bx.margin(&Vector3::new(0.9, 0.0, 0.0)), 0.1, epsilon = 1e-12);
        assert_relative_eq!(bx.margin(&Vector3::new(0.0, 0.0, 0.7)), -0.2, epsilon = 1e-12);
    }

    #[test]
    fn constraint_report_flags_facing_surfaces() {
        let local_normal = Vector3::z();
        // Normals +x at q=(1,0,0) and -x at q=(-1,0,0): facing away, feasible.
        let away = vec![
            SurfacePose::new(Vector3::new(1.0, 0.0, 0.0), Vector3::new(0.0, FRAC_PI_2, 0.0)),
            SurfacePose::new(Vector3::new(-1.0, 0.0, 0.0), Vector3::new(0.0, -FRAC_PI_2, 0.0)),
        ];
        let region = DeploymentRegion::Ball { radius: 2.0 };
        let report = check_constraints(&away, &local_normal, &region, 0.5);
        assert!(report.is_feasible(1e-12));
        assert_eq!(report.reflection.len(), 2);
        for &(_, _, r) in &report.reflection {
            assert_relative_eq!(r, -2.0, epsilon = 1e-12);
        }
        assert_relative_eq!(report.pair_distance[0].2, 4.0 - 0.25, epsilon = 1e-12);
        for &bk in &report.blockage {
            assert_relative_eq!(bk, 1.0, epsilon = 1e-12);
        }

        // Swap the normals: the surfaces now face each other and block it.
        let facing = vec![
            SurfacePose::new(Vector3::new(1.0, 0.0, 0.0), Vector3::new(0.0, -FRAC_PI_2, 0.0)),
            SurfacePose::new(Vector3::new(-1.0, 0.0, 0.0), Vector3::new(0.0, FRAC_PI_2, 0.0)),
        ];
        let report = check_constraints(&facing, &local_normal, &region, 0.5);
        assert!(!report.is_feasible(1e-9));
        assert_relative_eq!(report.worst_violation(), 2.0, epsilon = 1e-12);
        for &(_, _, r) in &report.reflection {
            assert_relative_eq!(r, 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn spacing_linearization_matches_hand_example() {
        // q_prev = (1,0,0), other at origin, d_min = 1: halfspace q_x >= 1.
        let hs = linearize_min_distance(
            &Vector3::new(1.0, 0.0, 0.0),
            &Vector3::zeros(),
            1.0,
        )
        .unwrap();
        assert_relative_eq!(hs.normal, Vector3::new(-2.0, 0.0, 0.0), epsilon = 1e-15);
        assert_relative_eq!(hs.offset, -2.0, epsilon = 1e-15);
        assert!(hs.slack(&Vector3::new(1.0, 0.5, 0.0)) >= 0.0);
        assert!(hs.slack(&Vector3::new(0.9, 0.0, 0.0)) < 0.0);
        assert!(linearize_min_distance(&Vector3::x(), &Vector3::x(), 1.0).is_err());
    }

    #[test]
    fn spacing_linearization_is_an_inner_approximation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut inside = 0usize;
        for _ in 0..2000 {
            let rv = |rng: &mut ChaCha8Rng| {
                Vector3::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                )
            };
            let q_other = rv(&mut rng);
            let q_prev = q_other + rv(&mut rng) * 1.5 + Vector3::new(0.3, 0.0, 0.0);
            let d_min = rng.random_range(0.05..0.5);
            let hs = match linearize_min_distance(&q_prev, &q_other, d_min) {
                Ok(h) => h,
                Err(_) => continue,
            };
            let q = rv(&mut rng) * 2.0;
            if hs.slack(&q) >= 0.0 {
                inside += 1;
                assert!(
                    (q - q_other).norm_squared() >= d_min * d_min - 1e-12,
                    "halfspace point violates the true spacing constraint"
                );
            }
        }
        assert!(inside > 200, "sampler never landed in the halfspace");
    }

    #[test]
    fn normal_jacobian_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let local_normal = Vector3::z();
        for _ in 0..100 {
            let u = Vector3::new(
                rng.random_range(0.0..TWO_PI),
                rng.random_range(0.0..TWO_PI),
                rng.random_range(0.0..TWO_PI),
            );
            let jac = normal_jacobian(&u, &local_normal);
            let h = 1e-5;
            for k in 0..3 {
                let mut up = u;
                up[k] += h;
                let fd = (rotation_matrix(&up) * local_normal
                    - rotation_matrix(&u) * local_normal)
                    / h;
                assert!((fd - jac.column(k)).norm() < 1e-4, "column {k} off at u = {u:?}");
            }
        }
    }

    #[test]
    fn rotation_halfspaces_agree_with_true_residuals_at_the_expansion_point() {
        let poses = vec![
            SurfacePose::new(Vector3::new(0.5, 0.0, 0.1), Vector3::new(0.3, 1.2, 0.4)),
            SurfacePose::new(Vector3::new(-0.4, 0.3, 0.0), Vector3::new(0.0, 2.0, 1.0)),
            SurfacePose::new(Vector3::new(0.0, -0.5, 0.2), Vector3::new(1.0, 0.5, 0.0)),
        ];
        let local_normal = Vector3::z();
        let b = 1usize;
        let u_prev = poses[b].rotation;
        let rows = linearize_rotation_constraints(&u_prev, &poses, b, &local_normal);
        assert_eq!(rows.len(), 3);
        let n0 = rotation_matrix(&u_prev) * local_normal;
        let mut idx = 0;
        for (j, pose) in poses.iter().enumerate() {
            if j == b {
                continue;
            }
            let true_residual = n0.dot(&(pose.position - poses[b].position));
            assert_relative_eq!(rows[idx].slack(&u_prev), -true_residual, epsilon = 1e-12);
            idx += 1;
        }
        let true_blockage = n0.dot(&poses[b].position);
        assert_relative_eq!(rows[idx].slack(&u_prev), true_blockage, epsilon = 1e-12);
    }

    #[test]
    fn position_constraint_rows_preserve_feasibility_of_the_current_point() {
        // At a feasible pose set, the current position of the moving
        // surface satisfies every generated halfspace.
        let poses = vec![
            SurfacePose::new(Vector3::new(0.7, 0.0, 0.0), Vector3::new(0.0, FRAC_PI_2, 0.0)),
            SurfacePose::new(
                Vector3::new(-0.35, 0.6, 0.0),
                Vector3::new(0.0, FRAC_PI_2, 2.0944),
            ),
            SurfacePose::new(
                Vector3::new(-0.35, -0.6, 0.0),
                Vector3::new(0.0, FRAC_PI_2, 4.1888),
            ),
        ];
        let local_normal = Vector3::z();
        let region = DeploymentRegion::Ball { radius: 1.0 };
        let report = check_constraints(&poses, &local_normal, &region, 0.1);
        assert!(report.is_feasible(1e-3), "worst {}", report.worst_violation());
        for b in 0..poses.len() {
            let rows = position_constraints(&poses, b, &local_normal, 0.1).unwrap();
            assert_eq!(rows.len(), 3 * (poses.len() - 1) + 1);
            for row in rows {
                assert!(row.slack(&poses[b].position) >= -1e-9);
            }
        }
    }
}
