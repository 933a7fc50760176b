//! Large-system capacities per receive antenna with on-off power allocation:
//! equal power on all modes (no feedback), equal power on the strongest
//! modes selected by an eigenvalue threshold (unlimited feedback), the
//! capacity-maximizing normalized rank, and the feedback rate ratio.

use super::mp::MPDensity;
use crate::numeric::{bisect, golden_max};
use crate::{Error, Result};

fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "rho must be positive, got {rho}"
        )));
    }
    Ok(())
}

/// Equal-power capacity without transmitter channel knowledge, for
/// `nr_bar <= 1`, in nats per receive antenna:
///
/// ```text
/// ln(rho y) + ((1 - nr_bar)/nr_bar) ln(1/(1 - z)) - z/nr_bar
/// y, z = (1 + nr_bar + 1/rho +- sqrt((1 + nr_bar + 1/rho)^2 - 4 nr_bar)) / 2
/// ```
///
/// This is the closed form of `integral ln(1 + rho lambda) dG` over the
/// receive-side spectrum. Ratios above one are rejected; see
/// [`cap_no_feedback_any`] for the reciprocal-system route.
pub fn cap_no_feedback(nr_bar: f64, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    if !(nr_bar > 0.0 && nr_bar <= 1.0) {
        return Err(Error::UnsupportedRegime(format!(
            "closed form covers 0 < nr_bar <= 1 (got {nr_bar}); \
             use cap_no_feedback_any for the reciprocal-system transformation"
        )));
    }
    let t = 1.0 + nr_bar + 1.0 / rho;
    let disc = (t * t - 4.0 * nr_bar).max(0.0).sqrt();
    let y = 0.5 * (t + disc);
    let z = 0.5 * (t - disc);
    Ok((rho * y).ln() + (1.0 - nr_bar) / nr_bar * (1.0 / (1.0 - z)).ln() - z / nr_bar)
}

/// Equal-power capacity for any antenna ratio. For `nr_bar > 1` the roles of
/// the antenna sides are swapped: with `c = 1/nr_bar` and per-dimension SNR
/// `rho * nr_bar`, the per-receive-antenna capacity is
/// `(1/nr_bar) * cap_no_feedback(1/nr_bar, rho * nr_bar)`.
pub fn cap_no_feedback_any(nr_bar: f64, rho: f64) -> Result<f64> {
    if nr_bar <= 1.0 {
        cap_no_feedback(nr_bar, rho)
    } else {
        Ok(cap_no_feedback(1.0 / nr_bar, rho * nr_bar)? / nr_bar)
    }
}

/// Eigenvalue threshold `eta` activating the strongest modes: solves
/// `integral_eta^b dG = min(1, k_bar/nr_bar)` over the receive-side
/// spectrum. Saturated selections (`k_bar >= nr_bar`) give `eta = a` exactly.
pub fn eta_threshold(nr_bar: f64, k_bar: f64) -> Result<f64> {
    if !(k_bar > 0.0 && k_bar <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "k_bar must be in (0, 1], got {k_bar}"
        )));
    }
    let mp = MPDensity::receive(nr_bar)?;
    let target = (k_bar / nr_bar).min(1.0);
    if target >= 1.0 {
        return Ok(mp.a);
    }
    bisect(
        |eta| mp.tail_mass(eta).expect("tail mass inside support") - target,
        mp.a,
        mp.b,
        1e-12,
    )
}

/// Unlimited-feedback capacity at normalized rank `k_bar`, nats per receive
/// antenna: equal power over the modes above [`eta_threshold`],
/// `integral_eta^b ln(1 + (rho/k_bar) lambda) dG`.
pub fn cap_full_feedback(nr_bar: f64, k_bar: f64, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let eta = eta_threshold(nr_bar, k_bar)?;
    let mp = MPDensity::receive(nr_bar)?;
    mp.integrate_tail(eta, |lam| (1.0 + rho / k_bar * lam).ln())
}

/// Capacity-maximizing normalized rank and the capacity it attains.
///
/// Coarse grid bootstrap followed by golden-section refinement on the
/// bracketing interval.
pub fn optimal_rank(nr_bar: f64, rho: f64) -> Result<(f64, f64)> {
    check_rho(rho)?;
    // Lower limit avoids the degenerate zero-rank endpoint; the capacity
    // tends to a finite supremum as k_bar -> 0 at low SNR, so the grid floor
    // is part of the search contract.
    const K_MIN: f64 = 1e-4;
    let grid: Vec<f64> = (1..=40)
        .map(|i| K_MIN + (1.0 - K_MIN) * i as f64 / 40.0)
        .chain([K_MIN, 0.01, 0.02, 0.05])
        .collect();
    let mut best_k = 1.0;
    let mut best_v = f64::NEG_INFINITY;
    for &k in &grid {
        let v = cap_full_feedback(nr_bar, k, rho)?;
        if v > best_v {
            best_v = v;
            best_k = k;
        }
    }
    let lo = (best_k - 0.05).max(K_MIN);
    let hi = (best_k + 0.05).min(1.0);
    let (k_star, v_star) = golden_max(
        |k| cap_full_feedback(nr_bar, k, rho).expect("capacity on bracketed rank"),
        lo,
        hi,
        1e-8,
    );
    if v_star >= best_v {
        Ok((k_star, v_star))
    } else {
        Ok((best_k, best_v))
    }
}

/// Unlimited-over-zero-feedback rate ratio with the rank optimized.
pub fn rate_ratio(nr_bar: f64, rho: f64) -> Result<f64> {
    let (_, with_feedback) = optimal_rank(nr_bar, rho)?;
    Ok(with_feedback / cap_no_feedback(nr_bar, rho)?)
}
