//! Exact finite-system rates: optimal (log-det) mutual information, matched
//! filter and linear MMSE per-stream SINRs, and the water-filling baseline.
//!
//! Conventions: the transmit vector carries `k` unit-power streams scaled by
//! `1/sqrt(k)`, noise is white with variance `sigma_n^2 = 1/rho`, and every
//! rate is in nats per receive antenna.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::randmat::{hermitian_eigenvalues, ChannelMatrix};
use crate::{Error, Result};

/// Sum rate normalized per receive antenna, in nats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePerRxAntenna(pub f64);

impl RatePerRxAntenna {
    pub fn nats(&self) -> f64 {
        self.0
    }

    pub fn bits(&self) -> f64 {
        self.0 * crate::NATS_TO_BITS
    }
}

/// Linear receiver front-end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FilterKind {
    MatchedFilter,
    Mmse,
}

/// Per-stream SINRs produced by a linear filter bank.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamSinrs {
    pub per_stream: Vec<f64>,
    pub kind: FilterKind,
}

fn check_precoder(h: &ChannelMatrix, v: &DMatrix<Complex64>) -> Result<()> {
    if v.nrows() != h.n_t() {
        return Err(Error::InvalidDimensions(format!(
            "precoder rows {} do not match n_t {}",
            v.nrows(),
            h.n_t()
        )));
    }
    if v.ncols() == 0 || v.ncols() > v.nrows() {
        return Err(Error::InvalidDimensions(format!(
            "precoder rank {} out of range for n_t {}",
            v.ncols(),
            v.nrows()
        )));
    }
    if !h.is_finite() || v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("channel or precoder".into()));
    }
    for j in 0..v.ncols() {
        let n = v.column(j).norm();
        if n > 1.0 + 1e-6 {
            return Err(Error::InvalidArgument(format!(
                "precoder column {j} violates the unit power constraint (norm {n})"
            )));
        }
    }
    Ok(())
}

/// Mutual information of the optimal (joint) receiver:
/// `(1/n_r) ln det(I + (rho/k) H V V^H H^H)` in nats per receive antenna.
///
/// Evaluated through the spectrum of the `k x k` Gram matrix `(HV)^H (HV)`,
/// which is cheaper than the `n_r x n_r` form whenever `k < n_r` and equal
/// by Sylvester's identity.
pub fn mutual_info_optimal(
    h: &ChannelMatrix,
    v: &DMatrix<Complex64>,
    rho: f64,
) -> Result<RatePerRxAntenna> {
    check_precoder(h, v)?;
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidArgument(format!("rho must be positive, got {rho}")));
    }
    let k = v.ncols();
    let hv = h.matrix() * v;
    let gram = hv.adjoint() * &hv;
    let mut sum = 0.0;
    for lam in hermitian_eigenvalues(&gram)? {
        sum += (1.0 + rho / k as f64 * lam.max(0.0)).ln();
    }
    Ok(RatePerRxAntenna(sum / h.n_r() as f64))
}

/// Per-stream SINRs at the output of the chosen linear filter.
///
/// Matched filter: `c_k ∝ H v_k`; the SINR reduces to
/// `(v_k^H A v_k)^2 / (k sigma_n^2 v_k^H A v_k + sum_{i≠k} |v_k^H A v_i|^2)`
/// with `A = H^H H`.
///
/// MMSE: `gamma_k = b_k^H (sum_{i≠k} b_i b_i^H + k sigma_n^2 I)^{-1} b_k`
/// with `b_i = H v_i`. Computed from one Cholesky factorization of the full
/// covariance via the rank-one identity `gamma = s/(1-s)`,
/// `s = b_k^H M^{-1} b_k`, `M = sum_i b_i b_i^H + k sigma_n^2 I`.
pub fn linear_sinr(
    h: &ChannelMatrix,
    v: &DMatrix<Complex64>,
    sigma_n2: f64,
    kind: FilterKind,
) -> Result<StreamSinrs> {
    check_precoder(h, v)?;
    if !(sigma_n2 > 0.0 && sigma_n2.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "noise variance must be positive, got {sigma_n2}"
        )));
    }
    let k = v.ncols();
    let hv = h.matrix() * v;
    let per_stream = match kind {
        FilterKind::MatchedFilter => {
            let gram = hv.adjoint() * &hv;
            (0..k)
                .map(|s| {
                    let d = gram[(s, s)].re;
                    let mut interference = 0.0;
                    for i in 0..k {
                        if i != s {
                            interference += gram[(s, i)].norm_sqr();
                        }
                    }
                    let denom = k as f64 * sigma_n2 * d + interference;
                    if denom <= 0.0 {
                        0.0
                    } else {
                        d * d / denom
                    }
                })
                .collect()
        }
        FilterKind::Mmse => {
            let n_r = h.n_r();
            let mut cov = &hv * hv.adjoint();
            for i in 0..n_r {
                cov[(i, i)] += Complex64::new(k as f64 * sigma_n2, 0.0);
            }
            let chol = nalgebra::linalg::Cholesky::new(cov).ok_or_else(|| {
                Error::SolverFailure("interference-plus-noise covariance not positive definite".into())
            })?;
            (0..k)
                .map(|s| {
                    let b = DVector::from_column_slice(hv.column(s).as_slice());
                    let x = chol.solve(&b);
                    let sval = b.dotc(&x).re;
                    // s < 1 analytically; clamp shields rounding at huge SNR.
                    let sval = sval.clamp(0.0, 1.0 - 1e-15);
                    sval / (1.0 - sval)
                })
                .collect()
        }
    };
    Ok(StreamSinrs { per_stream, kind })
}

/// Sum mutual information of independently decoded streams,
/// `(1/n_r) sum_k ln(1 + gamma_k)`.
pub fn sum_rate(sinrs: &StreamSinrs, n_r: usize) -> RatePerRxAntenna {
    let sum: f64 = sinrs.per_stream.iter().map(|&g| (1.0 + g).ln()).sum();
    RatePerRxAntenna(sum / n_r as f64)
}

/// Water-filling power allocation over a fixed eigenvalue spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterFilling {
    /// Power share per eigenvalue (same order as the input), summing to one.
    pub powers: Vec<f64>,
    /// `(1/n) sum_i ln(1 + rho p_i lambda_i)`, with `n = eigenvalues.len()`.
    pub capacity: RatePerRxAntenna,
}

/// Optimal power allocation `p_i = max(0, mu - 1/(rho lambda_i))` with unit
/// total power. All-zero spectra yield zero capacity and an empty allocation.
pub fn water_filling(eigenvalues: &[f64], rho: f64) -> Result<WaterFilling> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidArgument(format!("rho must be positive, got {rho}")));
    }
    if eigenvalues.iter().any(|&l| !l.is_finite() || l < 0.0) {
        return Err(Error::InvalidArgument(
            "eigenvalues must be finite and non-negative".into(),
        ));
    }
    let n = eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigenvalues[j].partial_cmp(&eigenvalues[i]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| eigenvalues[i]).collect();
    let positive = sorted.iter().take_while(|&&l| l > 0.0).count();
    if positive == 0 {
        return Ok(WaterFilling {
            powers: vec![],
            capacity: RatePerRxAntenna(0.0),
        });
    }
    // Largest active set m for which the water level clears 1/(rho lambda_m).
    let mut inv_cumsum = 0.0;
    let mut level = 0.0;
    let mut active = 0;
    for m in 1..=positive {
        inv_cumsum += 1.0 / (rho * sorted[m - 1]);
        let mu = (1.0 + inv_cumsum) / m as f64;
        if mu > 1.0 / (rho * sorted[m - 1]) {
            level = mu;
            active = m;
        } else {
            break;
        }
    }
    let mut powers = vec![0.0; n];
    let mut capacity = 0.0;
    for m in 0..active {
        let p = level - 1.0 / (rho * sorted[m]);
        powers[order[m]] = p;
        capacity += (1.0 + rho * p * sorted[m]).ln();
    }
    Ok(WaterFilling {
        powers,
        capacity: RatePerRxAntenna(capacity / n as f64),
    })
}
