//! SINRs, achievable rates, and the sum secrecy rate.
//!
//! User `k` receives its own stream against multiuser interference, the
//! artificial-noise vector, and thermal noise. The eavesdroppers operate
//! cooperatively: for each user stream the per-eavesdropper SINRs add up
//! inside one log, which upper-bounds what any single eavesdropper could
//! decode alone. The secrecy rate of a stream is the user rate minus the
//! cooperative eavesdropper rate; reported per-stream values and their
//! sum are clamped at zero, while the raw (possibly negative) sum is kept
//! alongside for optimizers that need a smooth objective.

use nalgebra::{DMatrix, DVector};

use crate::channel::{ChannelMatrix, Cx};
use crate::{Error, Result};

/// Transmit-side configuration: data beamformers, artificial noise, and
/// the fraction `alpha` of the power budget spent on data.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformerSet {
    /// Columns are per-user beamformers, `N*B x K_D`.
    pub transmit: DMatrix<Cx>,
    /// Artificial-noise vector, length `N*B`.
    pub an_vector: DVector<Cx>,
    pub alpha: f64,
}

impl BeamformerSet {
    /// All-zero beamformers for a silent transmitter.
    pub fn zero(nb: usize, k_d: usize, alpha: f64) -> Self {
        BeamformerSet {
            transmit: DMatrix::zeros(nb, k_d),
            an_vector: DVector::zeros(nb),
            alpha,
        }
    }

    /// Total radiated power `||W||_F^2 + ||v||^2`.
    pub fn total_power(&self) -> f64 {
        self.transmit.norm_squared() + self.an_vector.norm_squared()
    }
}

/// Rates of one scene under fixed channels and beamformers.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    /// Per-user SINR (linear).
    pub sinrs: Vec<f64>,
    /// Per-user achievable rate, bits/s/Hz.
    pub user_rates: Vec<f64>,
    /// Per-stream cooperative eavesdropper rate, bits/s/Hz.
    pub eve_rates: Vec<f64>,
    /// Per-stream secrecy rate, clamped at zero.
    pub secrecy_rates: Vec<f64>,
    /// Sum of the clamped per-stream secrecy rates.
    pub ssr: f64,
    /// Sum of the unclamped differences; can be negative.
    pub ssr_raw: f64,
}

/// SINR of user `k` under the given beamformers.
pub fn user_sinr(h: &ChannelMatrix, beams: &BeamformerSet, k: usize, noise_power: f64) -> f64 {
    let row = h.row(k);
    let signal = (row * beams.transmit.column(k))[(0, 0)].norm_sqr();
    let mut denom = noise_power + (row * &beams.an_vector)[(0, 0)].norm_sqr();
    for i in 0..beams.transmit.ncols() {
        if i != k {
            denom += (row * beams.transmit.column(i))[(0, 0)].norm_sqr();
        }
    }
    signal / denom
}

/// Cooperative eavesdropper rate on stream `k`: per-eavesdropper SINRs
/// add before the log.
pub fn eve_stream_rate(
    h_eve: &ChannelMatrix,
    beams: &BeamformerSet,
    k: usize,
    eve_noise: &[f64],
) -> f64 {
    let mut total = 0.0;
    for (e, &sigma2) in eve_noise.iter().enumerate() {
        let row = h_eve.row(e);
        let signal = (row * beams.transmit.column(k))[(0, 0)].norm_sqr();
        let denom = sigma2 + (row * &beams.an_vector)[(0, 0)].norm_sqr();
        total += signal / denom;
    }
    (1.0 + total).log2()
}

/// Evaluates every rate in the scene.
///
/// `h` is `K_D x N*B`, `h_eve` is `K_E x N*B` (possibly zero rows), and
/// the noise slices carry one receiver noise power per row.
pub fn sum_secrecy_rate(
    h: &ChannelMatrix,
    h_eve: &ChannelMatrix,
    beams: &BeamformerSet,
    user_noise: &[f64],
    eve_noise: &[f64],
) -> Result<RateReport> {
    let k_d = h.nrows();
    if beams.transmit.ncols() != k_d {
        return Err(Error::DimensionMismatch(format!(
            "{} users but {} beamformer columns",
            k_d,
            beams.transmit.ncols()
        )));
    }
    if beams.transmit.nrows() != h.ncols() || beams.an_vector.len() != h.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "channel has {} antennas but beamformers have {}",
            h.ncols(),
            beams.transmit.nrows()
        )));
    }
    if user_noise.len() != k_d || eve_noise.len() != h_eve.nrows() {
        return Err(Error::DimensionMismatch(
            "noise entries do not match terminal counts".into(),
        ));
    }
    if h_eve.nrows() > 0 && h_eve.ncols() != h.ncols() {
        return Err(Error::DimensionMismatch(
            "user and eavesdropper channels disagree in antenna count".into(),
        ));
    }
    let mut report = RateReport {
        sinrs: Vec::with_capacity(k_d),
        user_rates: Vec::with_capacity(k_d),
        eve_rates: Vec::with_capacity(k_d),
        secrecy_rates: Vec::with_capacity(k_d),
        ssr: 0.0,
        ssr_raw: 0.0,
    };
    for k in 0..k_d {
        let sinr = user_sinr(h, beams, k, user_noise[k]);
        let rate = (1.0 + sinr).log2();
        let eve = eve_stream_rate(h_eve, beams, k, eve_noise);
        if !rate.is_finite() || !eve.is_finite() {
            return Err(Error::NonFiniteObjective);
        }
        report.sinrs.push(sinr);
        report.user_rates.push(rate);
        report.eve_rates.push(eve);
        report.secrecy_rates.push((rate - eve).max(0.0));
        report.ssr += (rate - eve).max(0.0);
        report.ssr_raw += rate - eve;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    #[test]
    fn single_user_sinr_is_signal_over_noise() {
        let h = DMatrix::from_row_slice(1, 2, &[cx(1.0, 0.0), cx(0.0, 0.0)]);
        let beams = BeamformerSet {
            transmit: DMatrix::from_column_slice(2, 1, &[cx(10f64.sqrt(), 0.0), cx(0.0, 0.0)]),
            an_vector: DVector::zeros(2),
            alpha: 1.0,
        };
        assert_relative_eq!(user_sinr(&h, &beams, 0, 1.0), 10.0, epsilon = 1e-12);
    }

    #[test]
    fn interference_and_noise_terms_enter_the_denominator() {
        // Orthogonal users; AN leaks only into user 0's channel.
        let h = DMatrix::from_row_slice(
            2,
            2,
            &[cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0)],
        );
        let beams = BeamformerSet {
            transmit: DMatrix::from_row_slice(
                2,
                2,
                &[cx(2.0, 0.0), cx(0.5, 0.0), cx(0.0, 0.0), cx(3.0, 0.0)],
            ),
            an_vector: DVector::from_column_slice(&[cx(0.0, 1.0), cx(0.0, 0.0)]),
            alpha: 0.8,
        };
        // User 0: |2|^2 / (|0.5|^2 + |i|^2 + 0.5).
        assert_relative_eq!(user_sinr(&h, &beams, 0, 0.5), 4.0 / 1.75, epsilon = 1e-12);
        // User 1: |3|^2 / (|0|^2 + 0 + 0.5).
        assert_relative_eq!(user_sinr(&h, &beams, 1, 0.5), 18.0, epsilon = 1e-12);
        assert_relative_eq!(beams.total_power(), 4.25 + 9.0 + 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cooperating_eavesdroppers_add_sinrs_inside_one_log() {
        let h_eve = DMatrix::from_row_slice(
            2,
            2,
            &[cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 1.0), cx(0.0, 0.0)],
        );
        let beams = BeamformerSet {
            transmit: DMatrix::from_column_slice(2, 1, &[cx(2.0, 0.0), cx(0.0, 0.0)]),
            an_vector: DVector::from_column_slice(&[cx(1.0, 0.0), cx(0.0, 0.0)]),
            alpha: 0.5,
        };
        // Each eavesdropper: |2|^2 / (|1|^2 + 1) = 2; cooperative: log2(1+4).
        let rate = eve_stream_rate(&h_eve, &beams, 0, &[1.0, 1.0]);
        assert_relative_eq!(rate, 5.0f64.log2(), epsilon = 1e-12);
        // No eavesdroppers: the stream leaks nothing.
        let empty = DMatrix::<Cx>::zeros(0, 2);
        assert_eq!(eve_stream_rate(&empty, &beams, 0, &[]), 0.0);
    }

    #[test]
    fn clamped_and_raw_sums_differ_exactly_by_the_negative_streams() {
        // User 0 outruns the eavesdropper, user 1 does not.
        let h = DMatrix::from_row_slice(
            2,
            2,
            &[cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(0.1, 0.0)],
        );
        let h_eve = DMatrix::from_row_slice(1, 2, &[cx(0.0, 0.0), cx(1.0, 0.0)]);
        let beams = BeamformerSet {
            transmit: DMatrix::from_row_slice(
                2,
                2,
                &[cx(3.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0), cx(3.0, 0.0)],
            ),
            an_vector: DVector::zeros(2),
            alpha: 1.0,
        };
        let report = sum_secrecy_rate(&h, &h_eve, &beams, &[1.0, 1.0], &[1.0]).unwrap();
        let r0 = 10.0f64.log2();
        let e0 = 1.0f64.log2();
        let r1 = 1.09f64.log2();
        let e1 = 10.0f64.log2();
        assert_relative_eq!(report.user_rates[0], r0, epsilon = 1e-12);
        assert_relative_eq!(report.eve_rates[1], e1, epsilon = 1e-12);
        assert_relative_eq!(report.secrecy_rates[0], r0 - e0, epsilon = 1e-12);
        assert_eq!(report.secrecy_rates[1], 0.0);
        assert_relative_eq!(report.ssr, r0 - e0, epsilon = 1e-12);
        assert_relative_eq!(report.ssr_raw, (r0 - e0) + (r1 - e1), epsilon = 1e-12);
        assert!(report.ssr_raw < report.ssr);
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let h = DMatrix::from_row_slice(1, 2, &[cx(1.0, 0.0), cx(0.0, 0.0)]);
        let empty_eve = DMatrix::<Cx>::zeros(0, 2);
        let beams = BeamformerSet::zero(2, 2, 1.0);
        assert!(sum_secrecy_rate(&h, &empty_eve, &beams, &[1.0], &[]).is_err());
        let beams = BeamformerSet::zero(3, 1, 1.0);
        assert!(sum_secrecy_rate(&h, &empty_eve, &beams, &[1.0], &[]).is_err());
        let beams = BeamformerSet::zero(2, 1, 1.0);
        assert!(sum_secrecy_rate(&h, &empty_eve, &beams, &[1.0, 1.0], &[]).is_err());
        assert!(sum_secrecy_rate(&h, &empty_eve, &beams, &[1.0], &[1.0]).is_err());
        assert!(sum_secrecy_rate(&h, &empty_eve, &beams, &[1.0], &[]).is_ok());
    }

    #[test]
    fn silent_transmitter_has_zero_rates_everywhere() {
        let h = DMatrix::from_row_slice(1, 2, &[cx(1.0, 0.0), cx(2.0, 0.0)]);
        let h_eve = DMatrix::from_row_slice(1, 2, &[cx(1.0, 1.0), cx(0.0, 0.0)]);
        let beams = BeamformerSet::zero(2, 1, 1.0);
        let report = sum_secrecy_rate(&h, &h_eve, &beams, &[1e-12], &[1e-12]).unwrap();
        assert_eq!(report.ssr, 0.0);
        assert_eq!(report.ssr_raw, 0.0);
        assert_eq!(beams.total_power(), 0.0);
    }
}
