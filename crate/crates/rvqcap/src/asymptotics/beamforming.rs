//! Large-system laws for quantized beamforming (rank-one precoding).
//!
//! With feedback scaled as `b_bar = b/n_t`, the gap between the selected-beam
//! rate and the `ln(rho n_t)` growth term converges to a constant. For a
//! single receive antenna the constant is `ln(1 - 2^{-b_bar})`. With
//! `n_r = nr_bar * n_t` receive antennas the limiting received power
//! `gamma` interpolates between the spectrum mean `nr_bar` (no feedback) and
//! the spectrum edge `(1 + sqrt(nr_bar))^2` (unlimited feedback): below a
//! threshold `b_star` it solves
//!
//! ```text
//! gamma^nr_bar * exp(-gamma) = 2^(-b_bar) * (nr_bar/e)^nr_bar
//! ```
//!
//! and above `b_star` it has an explicit closed form. [`verify_beam_gamma`]
//! re-derives `gamma` by an independent route — maximizing the Chernoff
//! exponent `phi(gamma, rho)` over the tilt `rho` and solving
//! `phi(gamma, rho_star(gamma)) = b_bar ln 2` with quadrature — and returns
//! the residual against the closed form.

use serde::{Deserialize, Serialize};

use super::mp::MPDensity;
use crate::numeric::bisect;
use crate::{Error, Result};

const LN2: f64 = std::f64::consts::LN_2;

/// Asymptotic rate gap; the zero-feedback gap is unbounded below and kept as
/// an explicit tag instead of a raw `-inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RateGap {
    /// Zero normalized feedback: the gap diverges.
    NegativeInfinite,
    /// Finite gap in nats.
    Nats(f64),
}

impl RateGap {
    pub fn nats(&self) -> Option<f64> {
        match self {
            RateGap::NegativeInfinite => None,
            RateGap::Nats(x) => Some(*x),
        }
    }
}

/// Single-receive-antenna limiting rate gap `ln(1 - 2^{-b_bar})`.
pub fn miso_rate_gap(b_bar: f64) -> Result<RateGap> {
    if b_bar.is_nan() || b_bar < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "b_bar must be non-negative, got {b_bar}"
        )));
    }
    if b_bar == 0.0 {
        return Ok(RateGap::NegativeInfinite);
    }
    Ok(RateGap::Nats((-(2f64.powf(-b_bar))).ln_1p()))
}

/// Feedback threshold separating the fixed-point branch from the closed-form
/// branch of [`beam_gamma`]:
/// `(nr_bar ln(sqrt(nr_bar)/(1+sqrt(nr_bar))) + sqrt(nr_bar)) / ln 2`.
pub fn b_star(nr_bar: f64) -> Result<f64> {
    check_ratio(nr_bar)?;
    let s = nr_bar.sqrt();
    Ok((nr_bar * (s / (1.0 + s)).ln() + s) / LN2)
}

/// Limiting received power of the selected beam, in `[nr_bar, (1+sqrt(nr_bar))^2]`.
pub fn beam_gamma(nr_bar: f64, b_bar: f64) -> Result<f64> {
    check_ratio(nr_bar)?;
    if b_bar.is_nan() || b_bar < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "b_bar must be non-negative, got {b_bar}"
        )));
    }
    let s = nr_bar.sqrt();
    let edge = (1.0 + s) * (1.0 + s);
    let threshold = b_star(nr_bar)?;
    let gamma = if b_bar <= threshold {
        // Solve psi - nr_bar ln(1 + psi/nr_bar) = b_bar ln2 on [0, sqrt(nr_bar)];
        // this is the log form of the defining equation and is monotone in psi.
        let target = b_bar * LN2;
        let f = |psi: f64| psi - nr_bar * (psi / nr_bar).ln_1p() - target;
        // At b_bar = b_star the root sits on the bracket top within rounding.
        let psi = if f(s) <= 0.0 { s } else { bisect(f, 0.0, s, 1e-12)? };
        nr_bar + psi
    } else {
        let exponent =
            0.5 * nr_bar * nr_bar.ln() - (nr_bar - 1.0) * (1.0 + s).ln() + s - b_bar * LN2;
        edge - exponent.exp()
    };
    debug_assert!(gamma >= nr_bar - 1e-9 && gamma <= edge + 1e-9);
    Ok(gamma.clamp(nr_bar, edge))
}

/// Chernoff exponent `phi(gamma, rho) = integral ln(1 + rho (gamma - lambda)) dG`
/// over the transmit-side spectrum (including its atom at zero).
///
/// Domain: `nr_bar <= gamma < (1+sqrt(nr_bar))^2` and
/// `0 < rho <= 1/(edge - gamma)`; at the upper boundary the integrand has an
/// integrable logarithmic edge.
pub fn phi(gamma: f64, rho: f64, nr_bar: f64) -> Result<f64> {
    let mp = MPDensity::transmit(nr_bar)?;
    if !(gamma >= nr_bar && gamma < mp.b) {
        return Err(Error::InvalidArgument(format!(
            "gamma must lie in [{nr_bar}, {}), got {gamma}",
            mp.b
        )));
    }
    let rho_max = 1.0 / (mp.b - gamma);
    if !(rho > 0.0 && rho <= rho_max * (1.0 + 1e-12)) {
        return Err(Error::InvalidArgument(format!(
            "tilt rho must lie in (0, {rho_max}], got {rho}"
        )));
    }
    mp.integrate(|lambda| {
        let arg = 1.0 + rho * (gamma - lambda);
        // The argument can only vanish at the upper edge, where the sin^2
        // quadrature weight already kills the contribution.
        arg.max(1e-300).ln()
    })
}

/// Maximizing tilt for [`phi`] at a given `gamma`:
/// `(gamma - nr_bar)/gamma` until `gamma = nr_bar + sqrt(nr_bar)`, then the
/// boundary value `1/((1+sqrt(nr_bar))^2 - gamma)`.
pub fn rho_star(gamma: f64, nr_bar: f64) -> Result<f64> {
    check_ratio(nr_bar)?;
    let s = nr_bar.sqrt();
    let edge = (1.0 + s) * (1.0 + s);
    if !(gamma >= nr_bar && gamma < edge) {
        return Err(Error::InvalidArgument(format!(
            "gamma must lie in [{nr_bar}, {edge}), got {gamma}"
        )));
    }
    if gamma <= nr_bar + s {
        Ok((gamma - nr_bar) / gamma)
    } else {
        Ok(1.0 / (edge - gamma))
    }
}

/// Log-potential of the transmit-side spectrum for `x >= (1+sqrt(nr_bar))^2`:
/// `theta(x) = integral ln(x - lambda) dG(lambda)` in closed form,
/// `theta = ln w(x) + sqrt(nr_bar) u(x) - (nr_bar - 1) ln(1 + u(x)/sqrt(nr_bar))`.
pub fn theta(x: f64, nr_bar: f64) -> Result<f64> {
    check_ratio(nr_bar)?;
    let s = nr_bar.sqrt();
    let edge = (1.0 + s) * (1.0 + s);
    if x.is_nan() || x < edge {
        return Err(Error::InvalidArgument(format!(
            "theta needs x >= {edge}, got {x}"
        )));
    }
    let t = x - 1.0 - nr_bar;
    let disc = (t * t - 4.0 * nr_bar).max(0.0).sqrt();
    let w = 0.5 * (t + disc);
    let u = 0.5 * (t - disc) / s;
    Ok(w.ln() + s * u - (nr_bar - 1.0) * (u / s).ln_1p())
}

/// Independent consistency check of the closed-form [`beam_gamma`].
///
/// Solves `phi(gamma, rho_star(gamma)) = b_bar ln 2` by bisection with
/// quadrature-based `phi` and returns the absolute difference against the
/// closed form. Should be below 1e-6 everywhere.
pub fn verify_beam_gamma(nr_bar: f64, b_bar: f64) -> Result<f64> {
    check_ratio(nr_bar)?;
    if b_bar.is_nan() || b_bar < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "b_bar must be non-negative, got {b_bar}"
        )));
    }
    let closed = beam_gamma(nr_bar, b_bar)?;
    if b_bar == 0.0 {
        // Both routes give the spectrum mean exactly.
        return Ok((closed - nr_bar).abs());
    }
    let s = nr_bar.sqrt();
    let edge = (1.0 + s) * (1.0 + s);
    let target = b_bar * LN2;
    let exponent = |gamma: f64| -> Result<f64> { phi(gamma, rho_star(gamma, nr_bar)?, nr_bar) };
    // phi(gamma, rho_star) grows from 0 (at gamma = nr_bar) to infinity (at
    // the edge); walk the upper bracket toward the edge until it clears the
    // target.
    let mut hi = edge - 1e-3 * (edge - nr_bar);
    let mut hi_val = exponent(hi)?;
    let mut shrink = 0;
    while hi_val < target && shrink < 60 {
        hi = edge - 0.5 * (edge - hi);
        hi_val = exponent(hi)?;
        shrink += 1;
    }
    if hi_val < target {
        return Err(Error::SolverFailure(
            "could not bracket the fixed point near the spectrum edge".into(),
        ));
    }
    let f = |gamma: f64| {
        if gamma <= nr_bar {
            return -target;
        }
        exponent(gamma).expect("phi evaluation inside verified bracket") - target
    };
    let gamma_quad = bisect(f, nr_bar, hi, 1e-10)?;
    Ok((gamma_quad - closed).abs())
}

fn check_ratio(nr_bar: f64) -> Result<()> {
    if !(nr_bar > 0.0 && nr_bar.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "nr_bar must be positive, got {nr_bar}"
        )));
    }
    Ok(())
}
