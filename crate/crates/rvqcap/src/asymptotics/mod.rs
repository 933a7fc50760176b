//! Large-system limits: quantities that depend only on the dimension ratios
//! `nr_bar = n_r/n_t`, `k_bar = k/n_t` and the normalized feedback
//! (`b_bar = b/n_t` for beamforming, `b_hat = b/n_r^2` for rank-k precoding).
//!
//! Submodules:
//! * [`mp`] — the Marchenko–Pastur spectral density and its quadrature;
//! * [`beamforming`] — rate-gap laws for quantized beamforming, including a
//!   quadrature-based fixed-point cross-check of the closed forms;
//! * [`capacity`] — zero/infinite-feedback capacities, rank optimization and
//!   the rate ratio;
//! * [`gaussian`] — Gaussian rate approximation for rank-k precoding with
//!   optimal, matched-filter and MMSE receivers.

pub mod beamforming;
pub mod capacity;
pub mod gaussian;
pub mod mp;

pub use beamforming::{
    b_star, beam_gamma, miso_rate_gap, phi, rho_star, theta, verify_beam_gamma, RateGap,
};
pub use capacity::{
    cap_full_feedback, cap_no_feedback, cap_no_feedback_any, eta_threshold, optimal_rank,
    rate_ratio,
};
pub use gaussian::{
    estimate_sigma, gaussian_rate, mf_mu, mmse_mu, mmse_sinr_limit, mu_j, sigma_lowsnr,
    GaussianRateModel, Provenance, ReceiverKind,
};
pub use mp::{MPDensity, SpectrumSide};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Asymptotic system parameters.
///
/// Exactly one of `b_bar` / `b_hat` is meaningful per use; the operations
/// state which one they read.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LargeSystemParams {
    pub nr_bar: f64,
    pub k_bar: f64,
    pub b_bar: f64,
    pub b_hat: f64,
    pub rho: f64,
}

impl LargeSystemParams {
    pub fn new(nr_bar: f64, k_bar: f64, b_bar: f64, b_hat: f64, rho: f64) -> Result<Self> {
        if !(nr_bar > 0.0 && nr_bar.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "nr_bar must be positive, got {nr_bar}"
            )));
        }
        if !(k_bar > 0.0 && k_bar <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "k_bar must be in (0, 1], got {k_bar}"
            )));
        }
        if b_bar < 0.0 || b_hat < 0.0 {
            return Err(Error::InvalidArgument(
                "normalized feedback must be non-negative".into(),
            ));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "rho must be positive, got {rho}"
            )));
        }
        Ok(LargeSystemParams {
            nr_bar,
            k_bar,
            b_bar,
            b_hat,
            rho,
        })
    }

    pub fn sigma_n2(&self) -> f64 {
        1.0 / self.rho
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validate_ranges() {
        assert!(LargeSystemParams::new(0.75, 0.5, 1.0, 0.2, 3.0).is_ok());
        assert!(LargeSystemParams::new(0.0, 0.5, 1.0, 0.2, 3.0).is_err());
        assert!(LargeSystemParams::new(0.75, 1.5, 1.0, 0.2, 3.0).is_err());
        assert!(LargeSystemParams::new(0.75, 0.5, -1.0, 0.2, 3.0).is_err());
        assert!(LargeSystemParams::new(0.75, 0.5, 1.0, 0.2, 0.0).is_err());
        let p = LargeSystemParams::new(1.0, 1.0, 0.0, 0.0, 4.0).unwrap();
        assert_eq!(p.sigma_n2(), 0.25);
    }
}
