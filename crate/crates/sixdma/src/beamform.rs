//! MMSE transmit beamforming, null-space artificial noise, and the
//! data/noise power split.
//!
//! The transmit beamformers are regularized channel inversions: `W0 =
//! (H^H P H + sigma^2 I)^-1 H^H`, with each column rescaled to its
//! allocated power. Powers follow channel strength: user `i` gets
//! `alpha * p_max * ||h_i||^2 / sum_l ||h_l||^2`.
//!
//! Artificial noise lives in the null space of the user channel matrix,
//! so users never hear it. Within that null space the direction is the
//! dominant eigenvector of the eavesdroppers' projected Gram matrix:
//! the noise is aimed where the eavesdroppers listen best.
//!
//! [`power_split_search`] tries every `alpha` on a grid and keeps the
//! pair of beamformers with the best raw sum secrecy rate.

use nalgebra::{DMatrix, DVector};

use crate::channel::{ChannelMatrix, Cx};
use crate::secrecy::{sum_secrecy_rate, BeamformerSet, RateReport};
use crate::{Error, Result};

/// Candidate values for the data-power fraction `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaGrid {
    pub min: f64,
    pub step: f64,
    pub max: f64,
}

impl AlphaGrid {
    pub fn new(min: f64, step: f64, max: f64) -> Result<Self> {
        if !(min > 0.0 && min <= 1.0) {
            return Err(Error::param("alpha_min", "must lie in (0, 1]"));
        }
        if !(max >= min && max <= 1.0) {
            return Err(Error::param("alpha_max", "must lie in [alpha_min, 1]"));
        }
        if !(step > 0.0) {
            return Err(Error::param("alpha_step", "must be positive"));
        }
        Ok(AlphaGrid { min, step, max })
    }

    /// Grid points `min, min + step, ...` up to `max` (inclusive within
    /// a small slack against accumulated rounding).
    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut i = 0u32;
        loop {
            let a = self.min + f64::from(i) * self.step;
            if a > self.max + 1e-12 {
                break;
            }
            out.push(a.min(1.0));
            i += 1;
        }
        out
    }
}

impl Default for AlphaGrid {
    fn default() -> Self {
        AlphaGrid { min: 0.5, step: 0.05, max: 0.95 }
    }
}

/// Power split across users plus the artificial-noise budget.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    pub alpha: f64,
    /// Per-user transmit power, summing to `alpha * p_max`.
    pub per_user: Vec<f64>,
    /// Remaining budget `(1 - alpha) * p_max` for artificial noise.
    pub an_power: f64,
}

/// Splits `alpha * p_max` across users proportionally to their channel
/// energies `||h_i||^2`.
pub fn allocate_user_powers(h: &ChannelMatrix, alpha: f64, p_max: f64) -> Result<PowerAllocation> {
    if h.nrows() == 0 {
        return Err(Error::DimensionMismatch("no user channels to allocate power to".into()));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::param("alpha", "must lie in [0, 1]"));
    }
    if !(p_max > 0.0) {
        return Err(Error::param("p_max_w", "must be positive"));
    }
    let energies: Vec<f64> = (0..h.nrows()).map(|i| h.row(i).norm_squared()).collect();
    let total: f64 = energies.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::param("h", "user channel energies must be positive and finite"));
    }
    let per_user = energies.iter().map(|e| alpha * p_max * e / total).collect();
    Ok(PowerAllocation { alpha, per_user, an_power: (1.0 - alpha) * p_max })
}

/// Regularized channel-inversion beamformers with per-column powers.
///
/// Columns of the result satisfy `||w_k||^2 = per_user[k]`; zero power
/// yields a zero column.
pub fn mmse_beamformer(
    h: &ChannelMatrix,
    alloc: &PowerAllocation,
    noise_power: f64,
) -> Result<DMatrix<Cx>> {
    let k_d = h.nrows();
    let nb = h.ncols();
    if alloc.per_user.len() != k_d {
        return Err(Error::DimensionMismatch(format!(
            "{} powers for {} users",
            alloc.per_user.len(),
            k_d
        )));
    }
    if !(noise_power > 0.0) {
        return Err(Error::param("noise_power", "must be positive"));
    }
    // H^H P H + sigma^2 I, built from power-scaled rows.
    let mut scaled = h.clone();
    for (i, &p) in alloc.per_user.iter().enumerate() {
        for j in 0..nb {
            scaled[(i, j)] *= Cx::new(p, 0.0);
        }
    }
    let mut a = h.adjoint() * scaled;
    for i in 0..nb {
        a[(i, i)] += Cx::new(noise_power, 0.0);
    }
    let w0 = a
        .lu()
        .solve(&h.adjoint())
        .ok_or_else(|| Error::SingularSystem("regularized Gram matrix did not invert".into()))?;
    let mut w = w0;
    for k in 0..k_d {
        let p = alloc.per_user[k];
        let norm = w.column(k).norm();
        if p <= 0.0 {
            w.column_mut(k).fill(Cx::new(0.0, 0.0));
        } else if norm == 0.0 {
            return Err(Error::SingularSystem(format!(
                "beamformer column {k} collapsed to zero"
            )));
        } else {
            let s = Cx::new(p.sqrt() / norm, 0.0);
            for e in w.column_mut(k).iter_mut() {
                *e *= s;
            }
        }
    }
    Ok(w)
}

/// Orthonormal basis of the null space of `h`, possibly with zero
/// columns when `h` has full column rank.
#[derive(Debug, Clone, PartialEq)]
pub struct NullSpaceBasis {
    /// `N*B x m` with orthonormal columns annihilated by `h`.
    pub columns: DMatrix<Cx>,
}

impl NullSpaceBasis {
    pub fn dim(&self) -> usize {
        self.columns.ncols()
    }
}

/// Null space of the user channel matrix via SVD rank detection plus a
/// deterministic orthogonal completion of the row space.
pub fn null_space_basis(h: &ChannelMatrix) -> Result<NullSpaceBasis> {
    let nb = h.ncols();
    if h.nrows() == 0 {
        return Ok(NullSpaceBasis { columns: DMatrix::identity(nb, nb) });
    }
    let svd = h.clone().svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::SingularSystem("SVD did not return right singular vectors".into()))?;
    let s_max = svd.singular_values.max();
    let tol = s_max * (nb.max(h.nrows()) as f64) * f64::EPSILON;
    let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();
    // Row-space directions to stay orthogonal to.
    let mut basis: Vec<DVector<Cx>> =
        (0..rank).map(|i| v_t.row(i).adjoint()).collect();
    let mut null_cols: Vec<DVector<Cx>> = Vec::with_capacity(nb - rank);
    let mut candidates: Vec<DVector<Cx>> = (0..nb)
        .map(|i| {
            let mut e = DVector::zeros(nb);
            e[i] = Cx::new(1.0, 0.0);
            e
        })
        .collect();
    while null_cols.len() < nb - rank {
        // Pick the candidate with the largest residual after projecting
        // out everything found so far; re-orthogonalize twice for
        // numerical hygiene.
        let mut best: Option<(usize, f64, DVector<Cx>)> = None;
        for (ci, cand) in candidates.iter().enumerate() {
            let mut r = cand.clone();
            for _ in 0..2 {
                for u in &basis {
                    let c = u.dotc(&r);
                    r -= u * c;
                }
            }
            let n = r.norm();
            if best.as_ref().map_or(true, |(_, bn, _)| n > *bn) {
                best = Some((ci, n, r));
            }
        }
        let (ci, n, r) = best.expect("candidate list cannot be empty before the basis is full");
        if n < 1e-7 {
            return Err(Error::SingularSystem(
                "null-space completion stalled on a degenerate channel".into(),
            ));
        }
        let unit = r / Cx::new(n, 0.0);
        basis.push(unit.clone());
        null_cols.push(unit);
        candidates.swap_remove(ci);
    }
    let columns = DMatrix::from_fn(nb, null_cols.len(), |i, j| null_cols[j][i]);
    Ok(NullSpaceBasis { columns })
}

/// Dominant eigenvector of a Hermitian positive semidefinite matrix by
/// power iteration. Deterministic: starts from the normalized all-ones
/// vector, fixes the phase of the largest entry each step, and falls
/// back to the first basis vector on a zero matrix.
pub fn dominant_eigenvector(m: &DMatrix<Cx>) -> DVector<Cx> {
    let n = m.nrows();
    if n == 0 {
        return DVector::zeros(0);
    }
    let mut e1 = DVector::zeros(n);
    e1[0] = Cx::new(1.0, 0.0);
    let mut x = DVector::from_element(n, Cx::new(1.0 / (n as f64).sqrt(), 0.0));
    for _ in 0..10_000 {
        let y = m * &x;
        let norm = y.norm();
        if norm <= 1e-300 {
            return e1;
        }
        let mut next = y / Cx::new(norm, 0.0);
        // Phase convention: largest-magnitude entry real positive.
        let imax = (0..n)
            .max_by(|&a, &b| next[a].norm().partial_cmp(&next[b].norm()).unwrap())
            .unwrap();
        let z = next[imax];
        if z.norm() > 0.0 {
            let phase = z.conj() / Cx::new(z.norm(), 0.0);
            next *= phase;
        }
        if (&next - &x).norm() < 1e-12 {
            return next;
        }
        x = next;
    }
    x
}

/// Artificial-noise beamformer and the null-space dimension it used.
#[derive(Debug, Clone, PartialEq)]
pub struct AnBeamformer {
    pub vector: DVector<Cx>,
    pub null_dim: usize,
}

/// Artificial noise of power `(1 - alpha) * p_max`, placed in the null
/// space of `h` along the direction the eavesdroppers hear loudest.
///
/// With no eavesdroppers or an empty null space the vector is zero.
pub fn an_beamformer(
    h: &ChannelMatrix,
    h_eve: &ChannelMatrix,
    alpha: f64,
    p_max: f64,
) -> Result<AnBeamformer> {
    let nb = h.ncols();
    let basis = null_space_basis(h)?;
    let m_dim = basis.dim();
    if m_dim == 0 || h_eve.nrows() == 0 {
        return Ok(AnBeamformer { vector: DVector::zeros(nb), null_dim: m_dim });
    }
    let projected = h_eve * &basis.columns;
    let gram = projected.adjoint() * &projected;
    let z = dominant_eigenvector(&gram);
    let scale = Cx::new(((1.0 - alpha) * p_max).max(0.0).sqrt(), 0.0);
    Ok(AnBeamformer { vector: &basis.columns * z * scale, null_dim: m_dim })
}

/// Grid search over the data-power fraction.
///
/// For each `alpha` the MMSE beamformers and the artificial noise are
/// rebuilt and the raw sum secrecy rate evaluated; the best grid point
/// wins, first encountered on ties. With no eavesdroppers only the top
/// of the grid is evaluated and no noise is transmitted: jamming nobody
/// is never worth data power.
pub fn power_split_search(
    h: &ChannelMatrix,
    h_eve: &ChannelMatrix,
    user_noise: &[f64],
    eve_noise: &[f64],
    p_max: f64,
    grid: &AlphaGrid,
) -> Result<(BeamformerSet, RateReport)> {
    if h.nrows() == 0 {
        return Err(Error::DimensionMismatch("no users to beamform toward".into()));
    }
    let mmse_noise = user_noise.iter().sum::<f64>() / user_noise.len() as f64;
    let mut alphas = grid.values();
    let no_eves = h_eve.nrows() == 0;
    if no_eves {
        alphas = vec![*alphas.last().expect("grid validation keeps at least one value")];
    }
    // The null-space direction does not depend on alpha; compute it once
    // at unit power and rescale per grid point.
    let an_unit = if no_eves {
        DVector::zeros(h.ncols())
    } else {
        an_beamformer(h, h_eve, 0.0, 1.0)?.vector
    };
    let mut best: Option<(BeamformerSet, RateReport)> = None;
    for &alpha in &alphas {
        let alloc = allocate_user_powers(h, alpha, p_max)?;
        let transmit = mmse_beamformer(h, &alloc, mmse_noise)?;
        let an_vector = &an_unit * Cx::new(alloc.an_power.sqrt(), 0.0);
        let beams = BeamformerSet { transmit, an_vector, alpha };
        let report = sum_secrecy_rate(h, h_eve, &beams, user_noise, eve_noise)?;
        if best.as_ref().map_or(true, |(_, b)| report.ssr_raw > b.ssr_raw) {
            best = Some((beams, report));
        }
    }
    Ok(best.expect("alpha grid is never empty"))
}
