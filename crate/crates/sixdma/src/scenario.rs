//! Random scene generation and the movement schemes under comparison.
//!
//! A scene draws Poisson-distributed user and eavesdropper counts (the
//! user count is redrawn until at least one user exists) and places each
//! terminal uniformly by volume inside a spherical annulus, optionally
//! biased in azimuth toward a hotspot direction. Users and eavesdroppers
//! consume independent, separately seeded random streams, so sweeping
//! one population's mean leaves the other population's draws untouched
//! and trials stay paired across sweep values.
//!
//! Surfaces start evenly spaced on a circle at 70% of the region radius,
//! normals pointing outward with a fixed downtilt. The same placement
//! serves as the frozen layout of the fixed-antenna baseline.

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::channel::{assemble_channels, ChannelMatrix, Terminal, TerminalKind};
use crate::geometry::{
    check_constraints, ArraySpec, ConstraintReport, DeploymentRegion, GainPattern, SurfacePose,
};
use crate::secrecy::{sum_secrecy_rate, BeamformerSet, RateReport};
use crate::{Error, Result};

/// Downtilt of the initial surface normals below the horizon.
pub const INITIAL_DOWNTILT: f64 = std::f64::consts::PI / 12.0;

/// Fraction of the region radius used for the initial placement circle.
pub const INITIAL_RING_FRACTION: f64 = 0.7;

/// Movement scheme whose secrecy performance is under comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    /// Positions and rotations both free (the full 6DMA).
    Proposed,
    /// Fixed position and fixed rotation.
    Fpa,
    /// Surfaces slide along a horizontal circle, normals tracking the
    /// azimuth.
    Circular,
    /// Fixed positions, free rotations.
    RotationOnly,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 4] =
        [SchemeKind::Proposed, SchemeKind::Fpa, SchemeKind::Circular, SchemeKind::RotationOnly];

    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeKind::Proposed => "proposed",
            SchemeKind::Fpa => "fpa",
            SchemeKind::Circular => "circular",
            SchemeKind::RotationOnly => "rotation_only",
        }
    }
}

impl std::str::FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "proposed" => Ok(SchemeKind::Proposed),
            "fpa" => Ok(SchemeKind::Fpa),
            "circular" => Ok(SchemeKind::Circular),
            "rotation_only" => Ok(SchemeKind::RotationOnly),
            other => Err(Error::config(
                "scheme",
                format!("unknown scheme '{other}' (expected proposed, fpa, circular, or rotation_only)"),
            )),
        }
    }
}

impl std::fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters that define the random scene family.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    /// Total transmit power budget, watts.
    pub p_max_w: f64,
    /// Receiver noise power, dBm (every terminal).
    pub noise_dbm: f64,
    pub wavelength_m: f64,
    pub surfaces: usize,
    pub antennas_per_surface: usize,
    /// Mean of the Poisson user count (conditioned on >= 1).
    pub mean_users: f64,
    /// Mean of the Poisson eavesdropper count (zero allowed).
    pub mean_eves: f64,
    /// Minimum center spacing between surfaces, meters.
    pub d_min_m: f64,
    /// Radius of the spherical deployment region, meters.
    pub region_radius_m: f64,
    pub pattern: GainPattern,
    pub seed: u64,
    /// Terminal distance range from the origin, meters.
    pub distance_range_m: (f64, f64),
    /// Terminal elevation range, radians.
    pub elevation_range_rad: (f64, f64),
    /// Azimuth bias strength in [0, 1): terminal azimuth density is
    /// proportional to `1 + w cos(phi)`. Zero means uniform.
    pub hotspot_weight: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let wavelength_m = 0.125;
        ScenarioConfig {
            p_max_w: 10.0,
            noise_dbm: -90.0,
            wavelength_m,
            surfaces: 8,
            antennas_per_surface: 4,
            mean_users: 7.0,
            mean_eves: 1.0,
            d_min_m: std::f64::consts::SQRT_2 / 2.0 * wavelength_m + wavelength_m / 4.0,
            region_radius_m: 1.0,
            pattern: GainPattern::default_sector(),
            seed: 0,
            distance_range_m: (20.0, 200.0),
            elevation_range_rad: (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
            hotspot_weight: 0.0,
        }
    }
}

impl ScenarioConfig {
    /// Receiver noise power in watts.
    pub fn noise_power_w(&self) -> f64 {
        10f64.powf((self.noise_dbm - 30.0) / 10.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_max_w > 0.0) {
            return Err(Error::param("p_max_w", "must be positive"));
        }
        if !(self.wavelength_m > 0.0) {
            return Err(Error::param("wavelength_m", "must be positive"));
        }
        if self.surfaces == 0 {
            return Err(Error::param("surfaces", "must be at least 1"));
        }
        if self.antennas_per_surface == 0 {
            return Err(Error::param("antennas_per_surface", "must be at least 1"));
        }
        if !(self.mean_users > 0.0) {
            return Err(Error::param("mean_users", "must be positive"));
        }
        if self.mean_eves < 0.0 {
            return Err(Error::param("mean_eves", "must be nonnegative"));
        }
        if !(self.d_min_m > 0.0) {
            return Err(Error::param("d_min_m", "must be positive"));
        }
        if !(self.region_radius_m > 0.0) {
            return Err(Error::param("region_radius_m", "must be positive"));
        }
        let (lo, hi) = self.distance_range_m;
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::param("distance_range_m", "need 0 < lo < hi"));
        }
        if lo <= self.region_radius_m {
            return Err(Error::param(
                "distance_range_m",
                "terminals must start beyond the deployment region",
            ));
        }
        let (elo, ehi) = self.elevation_range_rad;
        let quarter = std::f64::consts::FRAC_PI_2;
        if !(elo >= -quarter && ehi <= quarter && ehi >= elo) {
            return Err(Error::param("elevation_range_rad", "need -pi/2 <= lo <= hi <= pi/2"));
        }
        if !(0.0..1.0).contains(&self.hotspot_weight) {
            return Err(Error::param("hotspot_weight", "must lie in [0, 1)"));
        }
        // The initial ring must fit the spacing constraint.
        if self.surfaces > 1 {
            let ring = INITIAL_RING_FRACTION * self.region_radius_m;
            let gap = 2.0 * ring * (std::f64::consts::PI / self.surfaces as f64).sin();
            if gap < self.d_min_m {
                return Err(Error::param(
                    "surfaces",
                    format!(
                        "{} surfaces on a ring of {ring} m leave {gap:.4} m gaps, below d_min",
                        self.surfaces
                    ),
                ));
            }
        }
        Ok(())
    }

    /// Deterministic per-trial RNG; `stream` separates independent draws
    /// within one trial.
    fn trial_rng(&self, trial: u64, stream: u8) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&trial.to_le_bytes());
        key[16] = stream;
        ChaCha8Rng::from_seed(key)
    }

    fn sample_position(&self, rng: &mut ChaCha8Rng) -> Vector3<f64> {
        let (lo, hi) = self.distance_range_m;
        // Uniform by volume: d^3 uniform between the cube ends.
        let u: f64 = rng.random();
        let d = (lo.powi(3) + u * (hi.powi(3) - lo.powi(3))).cbrt();
        let (elo, ehi) = self.elevation_range_rad;
        let s: f64 = rng.random_range(elo.sin()..=ehi.sin());
        let theta = s.clamp(-1.0, 1.0).asin();
        let phi = if self.hotspot_weight > 0.0 {
            // Rejection sampling for density proportional to 1 + w cos(phi).
            let w = self.hotspot_weight;
            loop {
                let cand = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
                let accept: f64 = rng.random();
                if accept * (1.0 + w) <= 1.0 + w * cand.cos() {
                    break cand;
                }
            }
        } else {
            rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)
        };
        d * crate::channel::dod_vector(phi, theta)
    }

    /// Draws the terminal population of one trial: users first, then
    /// eavesdroppers, each from its own stream.
    pub fn generate_terminals(&self, trial: u64) -> Result<Vec<Terminal>> {
        self.validate()?;
        let noise = self.noise_power_w();
        let mut terminals = Vec::new();
        let mut rng = self.trial_rng(trial, 0);
        let poisson = Poisson::new(self.mean_users)
            .map_err(|e| Error::param("mean_users", e.to_string()))?;
        let mut k_d = 0usize;
        for _ in 0..10_000 {
            k_d = poisson.sample(&mut rng).round() as usize;
            if k_d >= 1 {
                break;
            }
        }
        if k_d == 0 {
            return Err(Error::param("mean_users", "failed to draw a nonzero user count"));
        }
        for _ in 0..k_d {
            terminals.push(Terminal {
                position: self.sample_position(&mut rng),
                noise_power: noise,
                kind: TerminalKind::User,
            });
        }
        let mut rng = self.trial_rng(trial, 1);
        let k_e = if self.mean_eves > 0.0 {
            let poisson = Poisson::new(self.mean_eves)
                .map_err(|e| Error::param("mean_eves", e.to_string()))?;
            poisson.sample(&mut rng).round() as usize
        } else {
            0
        };
        for _ in 0..k_e {
            terminals.push(Terminal {
                position: self.sample_position(&mut rng),
                noise_power: noise,
                kind: TerminalKind::Eavesdropper,
            });
        }
        Ok(terminals)
    }

    /// Builds the full scene of one trial.
    pub fn scenario(&self, trial: u64) -> Result<Scenario> {
        let terminals = self.generate_terminals(trial)?;
        Ok(Scenario {
            array: ArraySpec::upa(self.antennas_per_surface, self.wavelength_m, self.pattern)?,
            wavelength: self.wavelength_m,
            p_max: self.p_max_w,
            d_min: self.d_min_m,
            region: DeploymentRegion::Ball { radius: self.region_radius_m },
            terminals,
        })
    }

    /// Evenly spaced ring placement: surface `b` sits at azimuth
    /// `2 pi b / B` on a circle at 70% of the region radius, normal
    /// pointing outward with a fixed downtilt.
    pub fn initial_poses(&self) -> Result<Vec<SurfacePose>> {
        self.validate()?;
        let ring = INITIAL_RING_FRACTION * self.region_radius_m;
        let beta = std::f64::consts::FRAC_PI_2 + INITIAL_DOWNTILT;
        Ok((0..self.surfaces)
            .map(|b| {
                let psi = crate::geometry::TWO_PI * b as f64 / self.surfaces as f64;
                SurfacePose::new(
                    Vector3::new(ring * psi.cos(), ring * psi.sin(), 0.0),
                    Vector3::new(0.0, beta, psi),
                )
            })
            .collect())
    }
}

/// One concrete scene: array layout, physics constants, and terminals.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub array: ArraySpec,
    pub wavelength: f64,
    pub p_max: f64,
    pub d_min: f64,
    pub region: DeploymentRegion,
    pub terminals: Vec<Terminal>,
}

impl Scenario {
    pub fn user_count(&self) -> usize {
        self.terminals.iter().filter(|t| t.kind == TerminalKind::User).count()
    }

    pub fn eve_count(&self) -> usize {
        self.terminals.iter().filter(|t| t.kind == TerminalKind::Eavesdropper).count()
    }

    /// Noise powers of the users, in channel-row order.
    pub fn user_noise(&self) -> Vec<f64> {
        self.terminals
            .iter()
            .filter(|t| t.kind == TerminalKind::User)
            .map(|t| t.noise_power)
            .collect()
    }

    /// Noise powers of the eavesdroppers, in channel-row order.
    pub fn eve_noise(&self) -> Vec<f64> {
        self.terminals
            .iter()
            .filter(|t| t.kind == TerminalKind::Eavesdropper)
            .map(|t| t.noise_power)
            .collect()
    }

    /// User and eavesdropper channel matrices for the given poses.
    pub fn channels(&self, poses: &[SurfacePose]) -> Result<(ChannelMatrix, ChannelMatrix)> {
        assemble_channels(poses, &self.array, &self.terminals, self.wavelength)
    }

    /// Full rate report for the given poses and beamformers.
    pub fn evaluate(&self, poses: &[SurfacePose], beams: &BeamformerSet) -> Result<RateReport> {
        let (h, h_eve) = self.channels(poses)?;
        sum_secrecy_rate(&h, &h_eve, beams, &self.user_noise(), &self.eve_noise())
    }

    /// Placement constraint residuals for the given poses.
    pub fn constraint_report(&self, poses: &[SurfacePose]) -> ConstraintReport {
        check_constraints(poses, &self.array.local_normal, &self.region, self.d_min)
    }
}
