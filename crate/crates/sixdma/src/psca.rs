//! Alternating optimization of surface poses and beamformers.
//!
//! One outer iteration refreshes the data beamformers at the incumbent
//! power split, runs an inner loop of per-surface pose updates, then
//! re-searches the power split. Each pose update maximizes a proximal
//! model `g . (x - x0) - rho/2 ||x - x0||^2` of the raw sum secrecy
//! rate, with `g` a forward finite-difference gradient, subject to the
//! linearized placement constraints; the model maximizer is the
//! projection of `x0 + g/rho` onto those constraints. Every candidate
//! step is then re-checked against the true constraints and accepted
//! only if the raw objective does not decrease, backtracking toward the
//! current point otherwise.
//!
//! The recorded per-outer-iteration value is the clamped sum secrecy
//! rate. An outer iteration whose end value would fall below the
//! previous record is rolled back wholesale and the optimization stops,
//! so recorded sequences are nondecreasing by construction.
//!
//! The proximal subproblems are 3-dimensional convex QPs solved exactly
//! by enumerating active sets in increasing size and returning the first
//! candidate that passes a full KKT certificate; for a strictly convex
//! objective that candidate is the unique optimum, so the enumeration
//! order cannot change the answer, only the running time.

use nalgebra::{DMatrix, DVector, Vector3};

use crate::beamform::{allocate_user_powers, mmse_beamformer, power_split_search, AlphaGrid};
use crate::channel::ChannelMatrix;
use crate::geometry::{
    linearize_rotation_constraints, position_constraints, DeploymentRegion, Halfspace, SurfacePose,
};
use crate::scenario::Scenario;
use crate::secrecy::{sum_secrecy_rate, BeamformerSet, RateReport};
use crate::{Error, Result};

/// Which pose coordinates a scheme is allowed to move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoseUpdatePolicy {
    /// Positions and rotations both move.
    Full,
    /// Nothing moves; only beamformers adapt.
    Frozen,
    /// Each surface slides along its horizontal circle, the normal
    /// tracking the azimuth at fixed tilt.
    CircularAzimuth,
    /// Rotations move, positions stay.
    RotationOnly,
}

/// Tuning knobs of the optimizer.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Proximal weight for position updates.
    pub rho_pos: f64,
    /// Proximal weight for rotation updates.
    pub rho_rot: f64,
    /// Forward-difference step for position gradients, meters.
    pub fd_step_pos: f64,
    /// Forward-difference step for rotation gradients, radians.
    pub fd_step_rot: f64,
    /// Inner loop stops once one sweep gains less than this, bits/s/Hz.
    pub delta: f64,
    /// Outer iteration cap; zero skips optimization entirely.
    pub t1_max: usize,
    /// Inner iteration cap.
    pub t2_max: usize,
    pub alpha_grid: AlphaGrid,
    /// Geometric step shrink used when a candidate is rejected.
    pub backtrack_shrink: f64,
    /// Rejections tolerated per update before giving up on it.
    pub max_backtracks: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            rho_pos: 100.0,
            rho_rot: 10.0,
            fd_step_pos: 1e-5,
            fd_step_rot: 1e-5,
            delta: 1e-3,
            t1_max: 10,
            t2_max: 20,
            alpha_grid: AlphaGrid::default(),
            backtrack_shrink: 0.5,
            max_backtracks: 20,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho_pos > 0.0) {
            return Err(Error::param("rho_pos", "must be positive"));
        }
        if !(self.rho_rot > 0.0) {
            return Err(Error::param("rho_rot", "must be positive"));
        }
        if !(self.fd_step_pos > 0.0) {
            return Err(Error::param("fd_step_pos", "must be positive"));
        }
        if !(self.fd_step_rot > 0.0) {
            return Err(Error::param("fd_step_rot", "must be positive"));
        }
        if !(self.delta >= 0.0) {
            return Err(Error::param("delta", "must be nonnegative"));
        }
        if self.t2_max == 0 {
            return Err(Error::param("t2_max", "must be at least 1"));
        }
        AlphaGrid::new(self.alpha_grid.min, self.alpha_grid.step, self.alpha_grid.max)?;
        if !(self.backtrack_shrink > 0.0 && self.backtrack_shrink < 1.0) {
            return Err(Error::param("backtrack_shrink", "must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Forward finite-difference gradient of `f` at `x`.
pub fn finite_diff_gradient<F>(mut f: F, x: &Vector3<f64>, step: f64) -> Result<Vector3<f64>>
where
    F: FnMut(&Vector3<f64>) -> Result<f64>,
{
    if !(step > 0.0) {
        return Err(Error::param("fd_step", "must be positive"));
    }
    let f0 = f(x)?;
    if !f0.is_finite() {
        return Err(Error::NonFiniteObjective);
    }
    let mut g = Vector3::zeros();
    for i in 0..3 {
        let mut xp = *x;
        xp[i] += step;
        let fi = f(&xp)?;
        if !fi.is_finite() {
            return Err(Error::NonFiniteObjective);
        }
        g[i] = (fi - f0) / step;
    }
    Ok(g)
}

/// Feasible region of a proximal subproblem beyond its halfspaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QpRegion {
    Unbounded,
    Ball { radius: f64 },
    Box { half_widths: Vector3<f64> },
}

impl From<DeploymentRegion> for QpRegion {
    fn from(r: DeploymentRegion) -> Self {
        match r {
            DeploymentRegion::Ball { radius } => QpRegion::Ball { radius },
            DeploymentRegion::Box { half_widths } => QpRegion::Box { half_widths },
        }
    }
}

/// Maximize `gradient . (x - center) - rho/2 ||x - center||^2` subject
/// to halfspaces and the region.
#[derive(Debug, Clone)]
pub struct QpProblem {
    pub center: Vector3<f64>,
    pub gradient: Vector3<f64>,
    pub rho: f64,
    pub halfspaces: Vec<Halfspace>,
    pub region: QpRegion,
}

/// Exact solution of the proximal subproblem: the Euclidean projection
/// of `center + gradient/rho` onto the feasible set.
///
/// Active sets are enumerated small to large; the first candidate whose
/// KKT certificate holds is returned. [`Error::QpNoCertificate`] means
/// no candidate certified, which for a nonempty feasible set indicates a
/// degenerate constraint cluster; callers treat it as "do not move".
pub fn solve_proximal_qp(p: &QpProblem) -> Result<Vector3<f64>> {
    if !(p.rho > 0.0) {
        return Err(Error::param("rho", "must be positive"));
    }
    let y = p.center + p.gradient / p.rho;
    if !y.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFiniteObjective);
    }
    let mut rows: Vec<Halfspace> = Vec::with_capacity(p.halfspaces.len() + 6);
    for hs in &p.halfspaces {
        if hs.normal.norm() <= 1e-14 {
            if hs.offset >= -1e-12 {
                continue;
            }
            return Err(Error::QpInfeasible);
        }
        rows.push(*hs);
    }
    let mut ball = None;
    match p.region {
        QpRegion::Unbounded => {}
        QpRegion::Ball { radius } => {
            if !(radius > 0.0) {
                return Err(Error::param("region", "ball radius must be positive"));
            }
            ball = Some(radius);
        }
        QpRegion::Box { half_widths } => {
            for i in 0..3 {
                if !(half_widths[i] > 0.0) {
                    return Err(Error::param("region", "box half widths must be positive"));
                }
                let mut n = Vector3::zeros();
                n[i] = 1.0;
                rows.push(Halfspace { normal: n, offset: half_widths[i] });
                rows.push(Halfspace { normal: -n, offset: half_widths[i] });
            }
        }
    }
    let feasible = |x: &Vector3<f64>| -> bool {
        rows.iter().all(|r| {
            let scale = 1.0 + r.offset.abs() + r.normal.norm() * x.norm();
            r.normal.dot(x) - r.offset <= 1e-10 * scale
        }) && ball.is_none_or(|r| x.norm() <= r * (1.0 + 1e-10))
    };
    if feasible(&y) {
        return Ok(y);
    }
    let m = rows.len();
    // Candidates ordered by active-set size; ball-active variants come
    // right after the same-size plain variants.
    if let Some(x) = (0..m).find_map(|i| certify(&y, &rows, &[i], ball, false, &feasible)) {
        return Ok(x);
    }
    if ball.is_some() {
        if let Some(x) = certify(&y, &rows, &[], ball, true, &feasible) {
            return Ok(x);
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            if let Some(x) = certify(&y, &rows, &[i, j], ball, false, &feasible) {
                return Ok(x);
            }
        }
    }
    if ball.is_some() {
        if let Some(x) = (0..m).find_map(|i| certify(&y, &rows, &[i], ball, true, &feasible)) {
            return Ok(x);
        }
    }
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                if let Some(x) = certify(&y, &rows, &[i, j, k], ball, false, &feasible) {
                    return Ok(x);
                }
            }
        }
    }
    if ball.is_some() {
        for i in 0..m {
            for j in i + 1..m {
                if let Some(x) = certify(&y, &rows, &[i, j], ball, true, &feasible) {
                    return Ok(x);
                }
            }
        }
    }
    Err(Error::QpNoCertificate)
}

/// Projects `y` onto the affine set of the chosen active constraints
/// (optionally intersected with the ball boundary) and checks the full
/// KKT certificate. `None` means this active set is not the optimum.
fn certify(
    y: &Vector3<f64>,
    rows: &[Halfspace],
    active: &[usize],
    ball: Option<f64>,
    ball_active: bool,
    feasible: &dyn Fn(&Vector3<f64>) -> bool,
) -> Option<Vector3<f64>> {
    let k = active.len();
    let a: Vec<Vector3<f64>> = active.iter().map(|&i| rows[i].normal).collect();
    let b: Vec<f64> = active.iter().map(|&i| rows[i].offset).collect();
    let x;
    let lambda: Vec<f64>;
    let mut mu = 0.0;
    if !ball_active {
        let gram = DMatrix::from_fn(k, k, |i, j| a[i].dot(&a[j]));
        let rhs = DVector::from_fn(k, |i, _| a[i].dot(y) - b[i]);
        let lam = gram.clone().lu().solve(&rhs)?;
        if (gram * &lam - &rhs).norm() > 1e-9 * (1.0 + rhs.norm()) {
            return None;
        }
        let mut xx = *y;
        for i in 0..k {
            xx -= a[i] * lam[i];
        }
        x = xx;
        lambda = lam.iter().copied().collect();
    } else {
        let r = ball?;
        // Minimum-norm point of the active affine set and the projector
        // onto its direction space.
        let (x_bar, project) = affine_part(&a, &b)?;
        let s2 = r * r - x_bar.norm_squared();
        if s2 < -1e-12 {
            return None;
        }
        let s = s2.max(0.0).sqrt();
        let w = project(&(y - x_bar));
        let dir = if w.norm() > 1e-14 {
            w / w.norm()
        } else {
            // Degenerate: any feasible direction; the certificate still
            // decides whether this candidate stands.
            fallback_direction(&a, &project)?
        };
        x = x_bar + dir * s;
        // Stationarity: y - x = sum lambda_i a_i + mu x.
        let mut cols: Vec<Vector3<f64>> = a.clone();
        cols.push(x);
        let e = DMatrix::from_fn(3, k + 1, |i, j| cols[j][i]);
        let rhs = DVector::from_column_slice(&[(y - x).x, (y - x).y, (y - x).z]);
        let sol = e.clone().svd(true, true).solve(&rhs, 1e-12).ok()?;
        if (e * &sol - &rhs).norm() > 1e-9 * (1.0 + (y - x).norm()) {
            return None;
        }
        lambda = sol.iter().take(k).copied().collect();
        mu = sol[k];
    }
    let scale = 1.0 + lambda.iter().fold(0.0f64, |acc, l| acc.max(l.abs())) + mu.abs();
    if lambda.iter().any(|&l| l < -1e-9 * scale) {
        return None;
    }
    if ball_active && mu < -1e-9 * scale {
        return None;
    }
    if !feasible(&x) {
        return None;
    }
    Some(x)
}

/// Minimum-norm solution of `A x = b` for up to two independent rows,
/// plus the orthogonal projector onto `null(A)`.
#[allow(clippy::type_complexity)]
fn affine_part(
    a: &[Vector3<f64>],
    b: &[f64],
) -> Option<(Vector3<f64>, Box<dyn Fn(&Vector3<f64>) -> Vector3<f64>>)> {
    match a.len() {
        0 => Some((Vector3::zeros(), Box::new(|v: &Vector3<f64>| *v))),
        1 => {
            let a0 = a[0];
            let n2 = a0.norm_squared();
            if n2 <= 1e-28 {
                return None;
            }
            let x_bar = a0 * (b[0] / n2);
            Some((x_bar, Box::new(move |v: &Vector3<f64>| v - a0 * (a0.dot(v) / n2))))
        }
        2 => {
            let (a0, a1) = (a[0], a[1]);
            let g00 = a0.norm_squared();
            let g11 = a1.norm_squared();
            let g01 = a0.dot(&a1);
            let det = g00 * g11 - g01 * g01;
            if det <= 1e-12 * g00 * g11 {
                return None;
            }
            let c0 = (g11 * b[0] - g01 * b[1]) / det;
            let c1 = (g00 * b[1] - g01 * b[0]) / det;
            let x_bar = a0 * c0 + a1 * c1;
            let z = a0.cross(&a1);
            let zn2 = z.norm_squared();
            if zn2 <= 1e-28 {
                return None;
            }
            Some((x_bar, Box::new(move |v: &Vector3<f64>| z * (z.dot(v) / zn2))))
        }
        _ => None,
    }
}

/// Any unit vector in the projector's range, for the degenerate case
/// where the target sits exactly on the affine set.
fn fallback_direction(
    a: &[Vector3<f64>],
    project: &dyn Fn(&Vector3<f64>) -> Vector3<f64>,
) -> Option<Vector3<f64>> {
    let _ = a;
    for cand in [Vector3::x(), Vector3::y(), Vector3::z()] {
        let p = project(&cand);
        if p.norm() > 1e-10 {
            return Some(p / p.norm());
        }
    }
    None
}

/// What one pose update did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Position,
    Rotation,
    Azimuth,
}

/// Log entry for one per-surface update attempt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepEvent {
    pub outer: usize,
    pub inner: usize,
    pub surface: usize,
    pub kind: StepKind,
    pub accepted: bool,
    /// Backtracking halvings spent before acceptance (or giving up).
    pub backtracks: usize,
    pub value_before: f64,
    pub value_after: f64,
}

/// Everything a finished optimization reports.
#[derive(Debug, Clone)]
pub struct SolveTrace {
    /// Clamped sum secrecy rate of the silent initial state.
    pub initial_ssr: f64,
    pub initial_ssr_raw: f64,
    /// Beamformers-only value at the initial poses: the power-split
    /// search outcome before anything moves. The recorded sequence
    /// never drops below it, so every scheme's final value dominates
    /// the pose-frozen solution of the same scene.
    pub baseline_ssr: f64,
    /// Clamped sum secrecy rate after each outer iteration;
    /// nondecreasing by construction.
    pub outer_ssr: Vec<f64>,
    /// Raw counterpart of `outer_ssr`.
    pub outer_ssr_raw: Vec<f64>,
    /// Raw value after each inner sweep, per outer iteration.
    pub inner_ssr_raw: Vec<Vec<f64>>,
    pub steps: Vec<StepEvent>,
    /// Outer iterations rolled back by the monotonicity safeguard.
    pub reverts: usize,
    pub final_poses: Vec<SurfacePose>,
    pub final_beams: BeamformerSet,
    pub final_report: RateReport,
}

impl SolveTrace {
    pub fn outer_iters(&self) -> usize {
        self.outer_ssr.len()
    }

    pub fn final_ssr(&self) -> f64 {
        self.final_report.ssr
    }
}

struct EvalCtx<'a> {
    scene: &'a Scenario,
    user_noise: Vec<f64>,
    eve_noise: Vec<f64>,
    mmse_noise: f64,
}

impl<'a> EvalCtx<'a> {
    fn new(scene: &'a Scenario) -> Result<Self> {
        let user_noise = scene.user_noise();
        if user_noise.is_empty() {
            return Err(Error::DimensionMismatch("scene has no users".into()));
        }
        let mmse_noise = user_noise.iter().sum::<f64>() / user_noise.len() as f64;
        Ok(EvalCtx { scene, user_noise, eve_noise: scene.eve_noise(), mmse_noise })
    }

    fn channels(&self, poses: &[SurfacePose]) -> Result<(ChannelMatrix, ChannelMatrix)> {
        self.scene.channels(poses)
    }

    fn report(&self, poses: &[SurfacePose], beams: &BeamformerSet) -> Result<RateReport> {
        let (h, h_eve) = self.channels(poses)?;
        sum_secrecy_rate(&h, &h_eve, beams, &self.user_noise, &self.eve_noise)
    }

    fn raw(&self, poses: &[SurfacePose], beams: &BeamformerSet) -> Result<f64> {
        self.report(poses, beams).map(|r| r.ssr_raw)
    }
}

/// Jointly optimizes poses and beamformers with every degree of freedom
/// enabled. See [`optimize_with_policy`].
pub fn optimize(
    scene: &Scenario,
    initial_poses: &[SurfacePose],
    cfg: &OptimizerConfig,
) -> Result<SolveTrace> {
    optimize_with_policy(scene, initial_poses, cfg, PoseUpdatePolicy::Full)
}

/// Jointly optimizes poses and beamformers, moving only the coordinates
/// the policy allows.
///
/// Errors before any iteration if the initial poses violate a placement
/// constraint. The returned trace's `outer_ssr` sequence never
/// decreases and never drops below the beamformers-only baseline at the
/// initial poses, so the final value dominates the pose-frozen solution
/// of the same scene. Final poses satisfy every constraint within
/// `1e-9` and the final beamformers respect the power budget.
pub fn optimize_with_policy(
    scene: &Scenario,
    initial_poses: &[SurfacePose],
    cfg: &OptimizerConfig,
    policy: PoseUpdatePolicy,
) -> Result<SolveTrace> {
    cfg.validate()?;
    if initial_poses.is_empty() {
        return Err(Error::param("poses", "need at least one surface"));
    }
    let feas0 = scene.constraint_report(initial_poses);
    if !feas0.is_feasible(1e-9) {
        return Err(Error::InfeasibleInitialPoses(format!(
            "worst violation {:.3e}",
            feas0.worst_violation()
        )));
    }
    let ctx = EvalCtx::new(scene)?;
    let k_d = ctx.user_noise.len();
    let nb = scene.array.antenna_count() * initial_poses.len();

    let alpha0 = *cfg.alpha_grid.values().last().expect("validated grid is nonempty");
    let mut poses = initial_poses.to_vec();
    let mut beams = BeamformerSet::zero(nb, k_d, alpha0);
    let initial_report = ctx.report(&poses, &beams)?;
    let mut value_raw = initial_report.ssr_raw;

    // Beamformers-only solution at the initial poses: the floor the
    // recorded sequence must never drop below, and the state the first
    // iteration falls back to if it cannot beat doing nothing.
    let (h0, h0_eve) = ctx.channels(&poses)?;
    let (bar_beams, bar_report) = power_split_search(
        &h0,
        &h0_eve,
        &ctx.user_noise,
        &ctx.eve_noise,
        scene.p_max,
        &cfg.alpha_grid,
    )?;
    let mut last_clamped = bar_report.ssr;

    let mut trace = SolveTrace {
        initial_ssr: initial_report.ssr,
        initial_ssr_raw: initial_report.ssr_raw,
        baseline_ssr: bar_report.ssr,
        outer_ssr: Vec::new(),
        outer_ssr_raw: Vec::new(),
        inner_ssr_raw: Vec::new(),
        steps: Vec::new(),
        reverts: 0,
        final_poses: Vec::new(),
        final_beams: beams.clone(),
        final_report: initial_report,
    };

    for outer in 0..cfg.t1_max {
        let snap_poses = poses.clone();
        let snap_beams = beams.clone();
        let snap_raw = value_raw;

        // Refresh the data beamformers at the incumbent power split.
        let (h, _) = ctx.channels(&poses)?;
        let alloc = allocate_user_powers(&h, beams.alpha, scene.p_max)?;
        beams.transmit = mmse_beamformer(&h, &alloc, ctx.mmse_noise)?;
        value_raw = ctx.raw(&poses, &beams)?;

        // Inner loop: sweep per-surface pose updates until one sweep
        // stops paying.
        let mut inner_vals = Vec::new();
        for inner in 0..cfg.t2_max {
            let before = value_raw;
            match policy {
                PoseUpdatePolicy::Frozen => {}
                PoseUpdatePolicy::Full => {
                    for b in 0..poses.len() {
                        update_position(
                            &ctx, &mut poses, &beams, &mut value_raw, b, cfg, outer, inner,
                            &mut trace.steps,
                        )?;
                    }
                    for b in 0..poses.len() {
                        update_rotation(
                            &ctx, &mut poses, &beams, &mut value_raw, b, cfg, outer, inner,
                            &mut trace.steps,
                        )?;
                    }
                }
                PoseUpdatePolicy::RotationOnly => {
                    for b in 0..poses.len() {
                        update_rotation(
                            &ctx, &mut poses, &beams, &mut value_raw, b, cfg, outer, inner,
                            &mut trace.steps,
                        )?;
                    }
                }
                PoseUpdatePolicy::CircularAzimuth => {
                    for b in 0..poses.len() {
                        update_azimuth(
                            &ctx, &mut poses, &beams, &mut value_raw, b, cfg, outer, inner,
                            &mut trace.steps,
                        )?;
                    }
                }
            }
            inner_vals.push(value_raw);
            if value_raw - before < cfg.delta {
                break;
            }
        }
        trace.inner_ssr_raw.push(inner_vals);

        // Power-split refresh: the grid winner competes against the
        // incumbent beamformers; the incumbent survives ties.
        let (h, h_eve) = ctx.channels(&poses)?;
        let (grid_beams, grid_report) = power_split_search(
            &h,
            &h_eve,
            &ctx.user_noise,
            &ctx.eve_noise,
            scene.p_max,
            &cfg.alpha_grid,
        )?;
        let incumbent_report =
            sum_secrecy_rate(&h, &h_eve, &beams, &ctx.user_noise, &ctx.eve_noise)?;
        let (new_raw, new_clamped) = if grid_report.ssr_raw > incumbent_report.ssr_raw {
            beams = grid_beams;
            (grid_report.ssr_raw, grid_report.ssr)
        } else {
            (incumbent_report.ssr_raw, incumbent_report.ssr)
        };
        value_raw = new_raw;

        if new_clamped < last_clamped {
            // Roll the whole iteration back. The trajectory from this
            // state is deterministic, so repeating it cannot recover:
            // stop here. The first iteration starts from pre-search
            // beams, so its fallback is the beamformers-only solution
            // rather than its incoherent snapshot.
            let reverted_raw = if outer == 0 {
                poses = initial_poses.to_vec();
                beams = bar_beams.clone();
                bar_report.ssr_raw
            } else {
                poses = snap_poses;
                beams = snap_beams;
                snap_raw
            };
            trace.outer_ssr.push(last_clamped);
            trace.outer_ssr_raw.push(reverted_raw);
            trace.reverts += 1;
            break;
        }
        trace.outer_ssr.push(new_clamped);
        trace.outer_ssr_raw.push(new_raw);
        let stalled = new_clamped == last_clamped
            && poses == snap_poses
            && beams.alpha == snap_beams.alpha;
        last_clamped = new_clamped;
        if stalled {
            break;
        }
    }

    trace.final_report = ctx.report(&poses, &beams)?;
    trace.final_poses = poses;
    trace.final_beams = beams;
    Ok(trace)
}

/// Candidate acceptance shared by all update kinds: walk from the
/// current coordinate toward the candidate, shrinking geometrically,
/// until the true constraints hold and the raw objective does not
/// decrease.
#[allow(clippy::too_many_arguments)]
fn accept_with_backtracking<S>(
    ctx: &EvalCtx,
    poses: &mut [SurfacePose],
    beams: &BeamformerSet,
    value_raw: &mut f64,
    b: usize,
    candidate_step: Vector3<f64>,
    set_coord: S,
    cfg: &OptimizerConfig,
) -> Result<(bool, usize)>
where
    S: Fn(&mut SurfacePose, &Vector3<f64>),
{
    if candidate_step.norm() <= 1e-14 {
        return Ok((false, 0));
    }
    let base = poses.to_vec();
    let mut factor = 1.0;
    for bt in 0..=cfg.max_backtracks {
        let step = candidate_step * factor;
        let mut work = base.clone();
        set_coord(&mut work[b], &step);
        let feas = ctx.scene.constraint_report(&work);
        if feas.is_feasible(1e-9) {
            let val = ctx.raw(&work, beams)?;
            if val.is_finite() && val >= *value_raw {
                poses[b] = work[b];
                *value_raw = val;
                return Ok((true, bt));
            }
        }
        factor *= cfg.backtrack_shrink;
    }
    Ok((false, cfg.max_backtracks))
}

#[allow(clippy::too_many_arguments)]
fn update_position(
    ctx: &EvalCtx,
    poses: &mut Vec<SurfacePose>,
    beams: &BeamformerSet,
    value_raw: &mut f64,
    b: usize,
    cfg: &OptimizerConfig,
    outer: usize,
    inner: usize,
    steps: &mut Vec<StepEvent>,
) -> Result<()> {
    let before = *value_raw;
    let base = poses.clone();
    let q0 = base[b].position;
    let mut obj = |q: &Vector3<f64>| -> Result<f64> {
        let mut w = base.clone();
        w[b].position = *q;
        ctx.raw(&w, beams)
    };
    let g = finite_diff_gradient(&mut obj, &q0, cfg.fd_step_pos)?;
    let rows = position_constraints(&base, b, &ctx.scene.array.local_normal, ctx.scene.d_min)?;
    let qp = QpProblem {
        center: q0,
        gradient: g,
        rho: cfg.rho_pos,
        halfspaces: rows,
        region: ctx.scene.region.into(),
    };
    let (accepted, backtracks) = match solve_proximal_qp(&qp) {
        Ok(cand) => accept_with_backtracking(
            ctx,
            poses,
            beams,
            value_raw,
            b,
            cand - q0,
            |pose, step| pose.position = q0 + step,
            cfg,
        )?,
        Err(Error::QpNoCertificate) | Err(Error::QpInfeasible) => (false, 0),
        Err(e) => return Err(e),
    };
    steps.push(StepEvent {
        outer,
        inner,
        surface: b,
        kind: StepKind::Position,
        accepted,
        backtracks,
        value_before: before,
        value_after: *value_raw,
    });
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn update_rotation(
    ctx: &EvalCtx,
    poses: &mut Vec<SurfacePose>,
    beams: &BeamformerSet,
    value_raw: &mut f64,
    b: usize,
    cfg: &OptimizerConfig,
    outer: usize,
    inner: usize,
    steps: &mut Vec<StepEvent>,
) -> Result<()> {
    let before = *value_raw;
    let base = poses.clone();
    let u0 = base[b].rotation;
    let mut obj = |u: &Vector3<f64>| -> Result<f64> {
        let mut w = base.clone();
        // Rotation matrices are periodic; wrapping is deferred to the
        // final stored pose.
        w[b].rotation = *u;
        ctx.raw(&w, beams)
    };
    let g = finite_diff_gradient(&mut obj, &u0, cfg.fd_step_rot)?;
    let rows = linearize_rotation_constraints(&u0, &base, b, &ctx.scene.array.local_normal);
    let qp = QpProblem {
        center: u0,
        gradient: g,
        rho: cfg.rho_rot,
        halfspaces: rows,
        region: QpRegion::Unbounded,
    };
    let (accepted, backtracks) = match solve_proximal_qp(&qp) {
        Ok(cand) => accept_with_backtracking(
            ctx,
            poses,
            beams,
            value_raw,
            b,
            cand - u0,
            |pose, step| *pose = SurfacePose::new(pose.position, u0 + step),
            cfg,
        )?,
        Err(Error::QpNoCertificate) | Err(Error::QpInfeasible) => (false, 0),
        Err(e) => return Err(e),
    };
    steps.push(StepEvent {
        outer,
        inner,
        surface: b,
        kind: StepKind::Rotation,
        accepted,
        backtracks,
        value_before: before,
        value_after: *value_raw,
    });
    Ok(())
}

/// One-dimensional update along the surface's horizontal circle. The
/// proximal weight is `rho_pos` scaled by the squared ring radius, so a
/// unit of angle costs what the equivalent arc length would under the
/// position weight. No linearized rows are needed in one dimension; the
/// true-constraint re-check in the acceptance loop guards feasibility.
#[allow(clippy::too_many_arguments)]
fn update_azimuth(
    ctx: &EvalCtx,
    poses: &mut Vec<SurfacePose>,
    beams: &BeamformerSet,
    value_raw: &mut f64,
    b: usize,
    cfg: &OptimizerConfig,
    outer: usize,
    inner: usize,
    steps: &mut Vec<StepEvent>,
) -> Result<()> {
    let before = *value_raw;
    let base = poses.clone();
    let q0 = base[b].position;
    let ring = (q0.x * q0.x + q0.y * q0.y).sqrt();
    if ring <= 1e-12 {
        steps.push(StepEvent {
            outer,
            inner,
            surface: b,
            kind: StepKind::Azimuth,
            accepted: false,
            backtracks: 0,
            value_before: before,
            value_after: before,
        });
        return Ok(());
    }
    let height = q0.z;
    let tilt = base[b].rotation.y;
    let psi0 = q0.y.atan2(q0.x);
    let pose_of = |psi: f64| {
        SurfacePose::new(
            Vector3::new(ring * psi.cos(), ring * psi.sin(), height),
            Vector3::new(0.0, tilt, psi),
        )
    };
    let obj = |psi: f64| -> Result<f64> {
        let mut w = base.clone();
        w[b] = pose_of(psi);
        ctx.raw(&w, beams)
    };
    let f0 = obj(psi0)?;
    let f1 = obj(psi0 + cfg.fd_step_rot)?;
    if !f0.is_finite() || !f1.is_finite() {
        return Err(Error::NonFiniteObjective);
    }
    let g = (f1 - f0) / cfg.fd_step_rot;
    let target_step = g / (cfg.rho_pos * ring * ring);

    let mut accepted = false;
    let mut backtracks = 0;
    if target_step.abs() > 1e-14 {
        let mut factor = 1.0;
        for bt in 0..=cfg.max_backtracks {
            let psi = psi0 + factor * target_step;
            let mut work = base.clone();
            work[b] = pose_of(psi);
            let feas = ctx.scene.constraint_report(&work);
            if feas.is_feasible(1e-9) {
                let val = ctx.raw(&work, beams)?;
                if val.is_finite() && val >= *value_raw {
                    poses[b] = work[b];
                    *value_raw = val;
                    accepted = true;
                    backtracks = bt;
                    break;
                }
            }
            factor *= cfg.backtrack_shrink;
        }
        if !accepted {
            backtracks = cfg.max_backtracks;
        }
    }
    steps.push(StepEvent {
        outer,
        inner,
        surface: b,
        kind: StepKind::Azimuth,
        accepted,
        backtracks,
        value_before: before,
        value_after: *value_raw,
    });
    Ok(())
}
