//! Experiment orchestration: config files, single runs, parameter
//! sweeps, and CSV output.
//!
//! Config files are flat `key = value` lines with `#` comments. Every
//! scenario and optimizer knob has a key; unknown and duplicate keys
//! are errors so typos cannot silently fall back to defaults.
//!
//! Sweeps fan (scheme, value, trial) tasks over a fixed-size worker
//! pool. Rows come back in construction order regardless of the worker
//! count, so a sweep's CSV is reproducible byte for byte apart from the
//! runtime column.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use crate::beamform::AlphaGrid;
use crate::geometry::GainPattern;
use crate::psca::{optimize_with_policy, OptimizerConfig, PoseUpdatePolicy, SolveTrace};
use crate::scenario::{ScenarioConfig, SchemeKind};
use crate::{Error, Result};

/// Everything one experiment needs: the scene family and the solver
/// tuning.
#[derive(Debug, Clone, PartialEq)]
pub struct HarnessConfig {
    pub scenario: ScenarioConfig,
    pub optimizer: OptimizerConfig,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            scenario: ScenarioConfig::default(),
            optimizer: OptimizerConfig::default(),
        }
    }
}

impl HarnessConfig {
    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.optimizer.validate()
    }
}

const REQUIRED_KEYS: &[&str] = &[
    "p_max_w",
    "noise_dbm",
    "wavelength_m",
    "surfaces",
    "antennas_per_surface",
    "mean_users",
    "mean_eves",
    "d_min_m",
    "region_radius_m",
    "alpha_min",
    "alpha_step",
    "alpha_max",
    "delta",
    "t1_max",
    "t2_max",
    "rho_pos",
    "rho_rot",
    "fd_step_pos",
    "fd_step_rot",
    "pattern",
    "seed",
];

const OPTIONAL_KEYS: &[&str] =
    &["d_lo_m", "d_hi_m", "elev_min_rad", "elev_max_rad", "hotspot_weight"];

/// Parses the flat `key = value` config format.
pub fn parse_config(text: &str) -> Result<HarnessConfig> {
    let mut entries: HashMap<&str, &str> = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::config(
                format!("line {}", lineno + 1),
                format!("expected `key = value`, got `{line}`"),
            )
        })?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(Error::config(
                format!("line {}", lineno + 1),
                "empty key or value",
            ));
        }
        if !REQUIRED_KEYS.contains(&key) && !OPTIONAL_KEYS.contains(&key) {
            return Err(Error::config(key, "unknown key"));
        }
        if entries.insert(key, value).is_some() {
            return Err(Error::config(key, "duplicate key"));
        }
    }
    for key in REQUIRED_KEYS {
        if !entries.contains_key(key) {
            return Err(Error::config(*key, "missing required key"));
        }
    }

    let f = |key: &'static str| -> Result<f64> {
        entries[key]
            .parse::<f64>()
            .map_err(|_| Error::config(key, format!("not a number: `{}`", entries[key])))
    };
    let u = |key: &'static str| -> Result<u64> {
        entries[key]
            .parse::<u64>()
            .map_err(|_| Error::config(key, format!("not a nonnegative integer: `{}`", entries[key])))
    };
    let opt_f = |key: &'static str, fallback: f64| -> Result<f64> {
        match entries.get(key) {
            Some(v) => v
                .parse::<f64>()
                .map_err(|_| Error::config(key, format!("not a number: `{v}`"))),
            None => Ok(fallback),
        }
    };

    let pattern = match entries["pattern"] {
        "sector" => GainPattern::default_sector(),
        "isotropic" => GainPattern::Isotropic,
        other => {
            return Err(Error::config(
                "pattern",
                format!("expected `sector` or `isotropic`, got `{other}`"),
            ))
        }
    };

    let defaults = ScenarioConfig::default();
    let scenario = ScenarioConfig {
        p_max_w: f("p_max_w")?,
        noise_dbm: f("noise_dbm")?,
        wavelength_m: f("wavelength_m")?,
        surfaces: u("surfaces")? as usize,
        antennas_per_surface: u("antennas_per_surface")? as usize,
        mean_users: f("mean_users")?,
        mean_eves: f("mean_eves")?,
        d_min_m: f("d_min_m")?,
        region_radius_m: f("region_radius_m")?,
        pattern,
        seed: u("seed")?,
        distance_range_m: (
            opt_f("d_lo_m", defaults.distance_range_m.0)?,
            opt_f("d_hi_m", defaults.distance_range_m.1)?,
        ),
        elevation_range_rad: (
            opt_f("elev_min_rad", defaults.elevation_range_rad.0)?,
            opt_f("elev_max_rad", defaults.elevation_range_rad.1)?,
        ),
        hotspot_weight: opt_f("hotspot_weight", defaults.hotspot_weight)?,
    };

    let opt_defaults = OptimizerConfig::default();
    let optimizer = OptimizerConfig {
        rho_pos: f("rho_pos")?,
        rho_rot: f("rho_rot")?,
        fd_step_pos: f("fd_step_pos")?,
        fd_step_rot: f("fd_step_rot")?,
        delta: f("delta")?,
        t1_max: u("t1_max")? as usize,
        t2_max: u("t2_max")? as usize,
        alpha_grid: AlphaGrid::new(f("alpha_min")?, f("alpha_step")?, f("alpha_max")?)?,
        backtrack_shrink: opt_defaults.backtrack_shrink,
        max_backtracks: opt_defaults.max_backtracks,
    };

    let cfg = HarnessConfig { scenario, optimizer };
    cfg.validate()?;
    Ok(cfg)
}

/// Renders a config back into the flat file format; `parse_config` on
/// the result reproduces the config.
pub fn render_config(cfg: &HarnessConfig) -> String {
    let sc = &cfg.scenario;
    let op = &cfg.optimizer;
    let pattern = match sc.pattern {
        GainPattern::Isotropic => "isotropic",
        GainPattern::Sector { .. } => "sector",
    };
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(&v);
        out.push('\n');
    };
    kv("p_max_w", format!("{}", sc.p_max_w));
    kv("noise_dbm", format!("{}", sc.noise_dbm));
    kv("wavelength_m", format!("{}", sc.wavelength_m));
    kv("surfaces", format!("{}", sc.surfaces));
    kv("antennas_per_surface", format!("{}", sc.antennas_per_surface));
    kv("mean_users", format!("{}", sc.mean_users));
    kv("mean_eves", format!("{}", sc.mean_eves));
    kv("d_min_m", format!("{}", sc.d_min_m));
    kv("region_radius_m", format!("{}", sc.region_radius_m));
    kv("pattern", pattern.to_string());
    kv("seed", format!("{}", sc.seed));
    kv("d_lo_m", format!("{}", sc.distance_range_m.0));
    kv("d_hi_m", format!("{}", sc.distance_range_m.1));
    kv("elev_min_rad", format!("{}", sc.elevation_range_rad.0));
    kv("elev_max_rad", format!("{}", sc.elevation_range_rad.1));
    kv("hotspot_weight", format!("{}", sc.hotspot_weight));
    kv("alpha_min", format!("{}", op.alpha_grid.min));
    kv("alpha_step", format!("{}", op.alpha_grid.step));
    kv("alpha_max", format!("{}", op.alpha_grid.max));
    kv("delta", format!("{}", op.delta));
    kv("t1_max", format!("{}", op.t1_max));
    kv("t2_max", format!("{}", op.t2_max));
    kv("rho_pos", format!("{}", op.rho_pos));
    kv("rho_rot", format!("{}", op.rho_rot));
    kv("fd_step_pos", format!("{}", op.fd_step_pos));
    kv("fd_step_rot", format!("{}", op.fd_step_rot));
    out
}

/// Reads and parses a config file.
pub fn load_config(path: &Path) -> Result<HarnessConfig> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    parse_config(&text)
}

/// Scenario knob a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    TransmitPower,
    MeanUsers,
    MeanEves,
}

impl SweepParam {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParam::TransmitPower => "power",
            SweepParam::MeanUsers => "users",
            SweepParam::MeanEves => "eves",
        }
    }

    /// Returns a copy of `base` with this knob set to `value`.
    pub fn apply(&self, base: &ScenarioConfig, value: f64) -> Result<ScenarioConfig> {
        let mut sc = base.clone();
        match self {
            SweepParam::TransmitPower => sc.p_max_w = value,
            SweepParam::MeanUsers => sc.mean_users = value,
            SweepParam::MeanEves => sc.mean_eves = value,
        }
        sc.validate()?;
        Ok(sc)
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" => Ok(SweepParam::TransmitPower),
            "users" => Ok(SweepParam::MeanUsers),
            "eves" => Ok(SweepParam::MeanEves),
            other => Err(Error::config(
                "param",
                format!("expected `power`, `users`, or `eves`, got `{other}`"),
            )),
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Pose-update policy each scheme is allowed.
pub fn policy_for(scheme: SchemeKind) -> PoseUpdatePolicy {
    match scheme {
        SchemeKind::Proposed => PoseUpdatePolicy::Full,
        SchemeKind::Fpa => PoseUpdatePolicy::Frozen,
        SchemeKind::Circular => PoseUpdatePolicy::CircularAzimuth,
        SchemeKind::RotationOnly => PoseUpdatePolicy::RotationOnly,
    }
}

/// One CSV row. Count-like fields are `f64` so aggregate rows can carry
/// fractional means; per-trial rows hold exact integers.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub scheme: SchemeKind,
    pub swept_param: String,
    pub swept_value: f64,
    /// Trial index, or -1 for an aggregate row.
    pub trial: i64,
    pub seed: u64,
    pub k_d: f64,
    pub k_e: f64,
    pub ssr_bps_hz: f64,
    pub alpha: f64,
    pub outer_iters: f64,
    pub runtime_ms: u128,
    pub status: String,
}

pub const CSV_HEADER: &str =
    "scheme,swept_param,swept_value,trial,seed,k_d,k_e,ssr_bps_hz,alpha,outer_iters,runtime_ms,status";

/// Renders records as CSV, header included.
pub fn to_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.scheme.as_str(),
            r.swept_param,
            r.swept_value,
            r.trial,
            r.seed,
            r.k_d,
            r.k_e,
            r.ssr_bps_hz,
            r.alpha,
            r.outer_iters,
            r.runtime_ms,
            r.status,
        ));
    }
    out
}

pub fn write_csv(path: &Path, records: &[TrialRecord]) -> Result<()> {
    std::fs::write(path, to_csv(records))
        .map_err(|e| Error::io(path.display().to_string(), e))
}

/// A solved trial plus its full trace.
#[derive(Debug, Clone)]
pub struct SingleOutcome {
    pub record: TrialRecord,
    pub trace: SolveTrace,
}

/// Generates trial `trial` of the configured scene family, optimizes it
/// under `scheme`, and verifies the solution against the power budget
/// and the placement constraints (failures are flagged in `status`, not
/// panics; they indicate solver bugs, and downstream checks look for
/// them).
pub fn run_single(
    cfg: &HarnessConfig,
    scheme: SchemeKind,
    trial: u64,
    swept_param: &str,
    swept_value: f64,
) -> Result<SingleOutcome> {
    let start = Instant::now();
    let scene = cfg.scenario.scenario(trial)?;
    let poses = cfg.scenario.initial_poses()?;
    let trace = optimize_with_policy(&scene, &poses, &cfg.optimizer, policy_for(scheme))?;
    let runtime_ms = start.elapsed().as_millis();

    let mut status = "ok";
    if trace.final_beams.total_power() > scene.p_max + 1e-9 {
        status = "power_budget_violated";
    } else if !scene.constraint_report(&trace.final_poses).is_feasible(1e-9) {
        status = "infeasible_final_poses";
    }

    let record = TrialRecord {
        scheme,
        swept_param: swept_param.to_string(),
        swept_value,
        trial: trial as i64,
        seed: cfg.scenario.seed,
        k_d: scene.user_count() as f64,
        k_e: scene.eve_count() as f64,
        ssr_bps_hz: trace.final_report.ssr,
        alpha: trace.final_beams.alpha,
        outer_iters: trace.outer_iters() as f64,
        runtime_ms,
        status: status.to_string(),
    };
    Ok(SingleOutcome { record, trace })
}

/// A sweep request: which knob, which values, how many trials per
/// value, which schemes to compare.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Vec<f64>,
    pub trials: u64,
    pub schemes: Vec<SchemeKind>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::param("values", "sweep needs at least one value"));
        }
        if self.trials == 0 {
            return Err(Error::param("trials", "sweep needs at least one trial"));
        }
        if self.schemes.is_empty() {
            return Err(Error::param("schemes", "sweep needs at least one scheme"));
        }
        Ok(())
    }
}

/// Runs the sweep on `workers` threads. Row order is (scheme, value,
/// trial) nesting, independent of the worker count. Trial indices reuse
/// the same seeds across schemes and values, so comparisons are paired.
pub fn run_sweep(
    cfg: &HarnessConfig,
    spec: &SweepSpec,
    workers: usize,
) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    spec.validate()?;
    let mut tasks = Vec::new();
    for &scheme in &spec.schemes {
        for &value in &spec.values {
            let scenario = spec.param.apply(&cfg.scenario, value)?;
            let task_cfg = HarnessConfig { scenario, optimizer: cfg.optimizer.clone() };
            for trial in 0..spec.trials {
                tasks.push((task_cfg.clone(), scheme, trial, value));
            }
        }
    }
    let label = spec.param.as_str();
    let run_task = |t: &(HarnessConfig, SchemeKind, u64, f64)| -> Result<TrialRecord> {
        run_single(&t.0, t.1, t.2, label, t.3).map(|o| o.record)
    };

    let mut results: Vec<Option<TrialRecord>> = vec![None; tasks.len()];
    if workers <= 1 {
        for (slot, task) in results.iter_mut().zip(&tasks) {
            *slot = Some(run_task(task)?);
        }
    } else {
        let next = AtomicUsize::new(0);
        let chunks: Vec<Vec<(usize, Result<TrialRecord>)>> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers.min(tasks.len()))
                .map(|_| {
                    s.spawn(|| {
                        let mut local = Vec::new();
                        loop {
                            let i = next.fetch_add(1, Ordering::Relaxed);
                            if i >= tasks.len() {
                                break;
                            }
                            local.push((i, run_task(&tasks[i])));
                        }
                        local
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
        });
        for chunk in chunks {
            for (i, r) in chunk {
                results[i] = Some(r?);
            }
        }
    }
    Ok(results.into_iter().map(|r| r.expect("every task ran")).collect())
}

/// Appends one mean row per (scheme, swept value) group, in first-seen
/// order. Mean rows carry trial -1 and status `mean`; runtimes are
/// summed rather than averaged.
pub fn aggregate(records: &[TrialRecord]) -> Vec<TrialRecord> {
    let mut order: Vec<(SchemeKind, u64)> = Vec::new();
    let mut groups: HashMap<(SchemeKind, u64), Vec<&TrialRecord>> = HashMap::new();
    for r in records {
        if r.trial < 0 {
            continue;
        }
        let key = (r.scheme, r.swept_value.to_bits());
        if !groups.contains_key(&key) {
            order.push(key);
        }
        groups.entry(key).or_default().push(r);
    }
    let mut out = Vec::with_capacity(order.len());
    for key in order {
        let rows = &groups[&key];
        let n = rows.len() as f64;
        let mean = |f: &dyn Fn(&TrialRecord) -> f64| rows.iter().map(|r| f(r)).sum::<f64>() / n;
        let first = rows[0];
        out.push(TrialRecord {
            scheme: first.scheme,
            swept_param: first.swept_param.clone(),
            swept_value: first.swept_value,
            trial: -1,
            seed: first.seed,
            k_d: mean(&|r| r.k_d),
            k_e: mean(&|r| r.k_e),
            ssr_bps_hz: mean(&|r| r.ssr_bps_hz),
            alpha: mean(&|r| r.alpha),
            outer_iters: mean(&|r| r.outer_iters),
            runtime_ms: rows.iter().map(|r| r.runtime_ms).sum(),
            status: "mean".to_string(),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy_config() -> HarnessConfig {
        HarnessConfig {
            scenario: ScenarioConfig {
                surfaces: 2,
                antennas_per_surface: 2,
                mean_users: 1.5,
                mean_eves: 1.0,
                region_radius_m: 0.5,
                distance_range_m: (10.0, 30.0),
                ..Default::default()
            },
            optimizer: OptimizerConfig { t1_max: 2, t2_max: 3, ..Default::default() },
        }
    }

    #[test]
    fn config_round_trips_through_the_flat_format() {
        let cfg = HarnessConfig::default();
        let text = render_config(&cfg);
        let parsed = parse_config(&text).unwrap();
        assert_eq!(parsed, cfg);
        // Comments and blank lines are tolerated.
        let noisy = format!("# header\n\n{text}\n  # trailing\n");
        assert_eq!(parse_config(&noisy).unwrap(), cfg);
    }

    #[test]
    fn parser_errors_name_the_offending_key() {
        let base = render_config(&HarnessConfig::default());

        let missing = base.replace("t1_max = 10\n", "");
        let err = parse_config(&missing).unwrap_err().to_string();
        assert!(err.contains("t1_max"), "got: {err}");

        let unknown = format!("{base}mystery_knob = 3\n");
        let err = parse_config(&unknown).unwrap_err().to_string();
        assert!(err.contains("mystery_knob"), "got: {err}");

        let duplicate = format!("{base}seed = 1\n");
        let err = parse_config(&duplicate).unwrap_err().to_string();
        assert!(err.contains("seed") && err.contains("duplicate"), "got: {err}");

        let garbled = base.replace("rho_pos = 100", "rho_pos = fast");
        let err = parse_config(&garbled).unwrap_err().to_string();
        assert!(err.contains("rho_pos"), "got: {err}");

        let bad_pattern = base.replace("pattern = sector", "pattern = laser");
        let err = parse_config(&bad_pattern).unwrap_err().to_string();
        assert!(err.contains("pattern"), "got: {err}");

        let no_equals = format!("{base}just a line\n");
        let err = parse_config(&no_equals).unwrap_err().to_string();
        assert!(err.contains("key = value"), "got: {err}");
    }

    #[test]
    fn sweep_param_names_round_trip_and_apply_validates() {
        for (name, param) in [
            ("power", SweepParam::TransmitPower),
            ("users", SweepParam::MeanUsers),
            ("eves", SweepParam::MeanEves),
        ] {
            assert_eq!(name.parse::<SweepParam>().unwrap(), param);
            assert_eq!(param.as_str(), name);
        }
        assert!("watts".parse::<SweepParam>().is_err());

        let base = ScenarioConfig::default();
        let bumped = SweepParam::TransmitPower.apply(&base, 30.0).unwrap();
        assert_eq!(bumped.p_max_w, 30.0);
        assert!(SweepParam::TransmitPower.apply(&base, -1.0).is_err());
        // Zero eavesdroppers is a legal operating point.
        assert!(SweepParam::MeanEves.apply(&base, 0.0).is_ok());
    }

    #[test]
    fn single_run_produces_a_sane_record() {
        let cfg = toy_config();
        let out = run_single(&cfg, SchemeKind::Proposed, 0, "none", 0.0).unwrap();
        let r = &out.record;
        assert_eq!(r.status, "ok");
        assert!(r.k_d >= 1.0);
        assert!(r.ssr_bps_hz.is_finite() && r.ssr_bps_hz >= 0.0);
        assert!(r.alpha >= cfg.optimizer.alpha_grid.min - 1e-12);
        assert!(r.alpha <= cfg.optimizer.alpha_grid.max + 1e-12);
        assert_eq!(r.trial, 0);
        assert_eq!(out.trace.final_poses.len(), cfg.scenario.surfaces);
    }

    #[test]
    fn sweep_rows_are_ordered_and_worker_count_invariant() {
        let cfg = toy_config();
        let spec = SweepSpec {
            param: SweepParam::TransmitPower,
            values: vec![5.0, 10.0],
            trials: 2,
            schemes: vec![SchemeKind::Fpa, SchemeKind::Proposed],
        };
        let serial = run_sweep(&cfg, &spec, 1).unwrap();
        let threaded = run_sweep(&cfg, &spec, 3).unwrap();
        assert_eq!(serial.len(), 8);
        let mut i = 0;
        for scheme in [SchemeKind::Fpa, SchemeKind::Proposed] {
            for value in [5.0, 10.0] {
                for trial in 0..2 {
                    assert_eq!(serial[i].scheme, scheme);
                    assert_eq!(serial[i].swept_value, value);
                    assert_eq!(serial[i].trial, trial);
                    i += 1;
                }
            }
        }
        for (a, b) in serial.iter().zip(&threaded) {
            let mut b = b.clone();
            b.runtime_ms = a.runtime_ms;
            assert_eq!(*a, b);
        }
        // Same trial index means the same scene within a power sweep.
        assert_eq!(serial[0].k_d, serial[2].k_d);
        assert_eq!(serial[0].k_e, serial[2].k_e);
    }

    #[test]
    fn aggregate_rows_average_per_group_and_sum_runtime() {
        let mk = |scheme, value: f64, trial, ssr: f64, ms: u128| TrialRecord {
            scheme,
            swept_param: "power".into(),
            swept_value: value,
            trial,
            seed: 7,
            k_d: 3.0,
            k_e: 1.0,
            ssr_bps_hz: ssr,
            alpha: 0.8,
            outer_iters: 4.0,
            runtime_ms: ms,
            status: "ok".into(),
        };
        let rows = vec![
            mk(SchemeKind::Proposed, 10.0, 0, 2.0, 5),
            mk(SchemeKind::Proposed, 10.0, 1, 4.0, 7),
            mk(SchemeKind::Fpa, 10.0, 0, 1.0, 2),
        ];
        let means = aggregate(&rows);
        assert_eq!(means.len(), 2);
        assert_eq!(means[0].scheme, SchemeKind::Proposed);
        assert_eq!(means[0].ssr_bps_hz, 3.0);
        assert_eq!(means[0].runtime_ms, 12);
        assert_eq!(means[0].trial, -1);
        assert_eq!(means[0].status, "mean");
        assert_eq!(means[1].scheme, SchemeKind::Fpa);
        assert_eq!(means[1].ssr_bps_hz, 1.0);
    }

    #[test]
    fn csv_layout_is_fixed_and_floats_print_shortest() {
        let row = TrialRecord {
            scheme: SchemeKind::Circular,
            swept_param: "power".into(),
            swept_value: 10.0,
            trial: 3,
            seed: 42,
            k_d: 7.0,
            k_e: 1.0,
            ssr_bps_hz: 2.5,
            alpha: 0.85,
            outer_iters: 6.0,
            runtime_ms: 123,
            status: "ok".into(),
        };
        let csv = to_csv(&[row]);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        assert_eq!(lines.next().unwrap(), "circular,power,10,3,42,7,1,2.5,0.85,6,123,ok");
        assert!(lines.next().is_none());
    }
}
