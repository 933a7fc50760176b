//! Gaussian rate approximation for rank-k precoding.
//!
//! Conditioned on the channel, the rate of one random codebook entry is
//! approximately Gaussian for large systems. Selecting the best of `2^b`
//! entries then lands `sqrt(2 b_hat ln 2)` standard deviations above the
//! mean, which gives the approximate rate
//!
//! ```text
//! min{ mu + sigma sqrt(2 b_hat ln 2),  cap }
//! ```
//!
//! clamped at the unlimited-feedback capacity. `mu` has closed forms for the
//! optimal, matched-filter and MMSE receivers; `sigma^2` — the limit of
//! `n_r^2 * var(rate | channel)` over random precoders — comes from a
//! low-SNR expansion ([`sigma_lowsnr`]) or from simulation
//! ([`estimate_sigma`]).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::capacity::cap_no_feedback_any;
use crate::numeric::mean_variance;
use crate::randmat::{sample_channel, sample_semi_unitary, SeedPolicy, StreamLabel};
use crate::receivers::{linear_sinr, mutual_info_optimal, sum_rate, FilterKind};
use crate::{Error, Result};

const LN2: f64 = std::f64::consts::LN_2;

/// Receiver whose rate law is being modeled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReceiverKind {
    Optimal,
    MatchedFilter,
    Mmse,
}

/// Where a variance estimate came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Provenance {
    ClosedForm,
    MonteCarlo { seed: u64, n_t: usize, trials: u64 },
}

/// Mean/variance pair for the Gaussian rate law of one receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianRateModel {
    /// Asymptotic mean rate, nats per receive antenna.
    pub mu: f64,
    /// Asymptotic variance of `n_r^2 *` (rate per receive antenna), nats^2.
    pub sigma2: f64,
    /// Standard error of `sigma2` when simulated, else 0.
    pub sigma2_stderr: f64,
    pub receiver: ReceiverKind,
    pub provenance: Provenance,
}

fn check_params(nr_bar: f64, k_bar: f64) -> Result<()> {
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
    Ok(())
}

/// Asymptotic mean rate of a random semi-unitary precoder with the optimal
/// receiver, nats per receive antenna:
///
/// ```text
/// mu = r ln(1 + rho/r - (rho/r) v) + ln(1 + rho - (rho/r) v) - v
/// v  = 1/2 + r/2 + r/(2 rho) - (1/2) sqrt((1 + r + r/rho)^2 - 4r),   r = k_bar/nr_bar
/// ```
///
/// At `k_bar = 1` the precoder covariance is the identity and `mu` equals
/// the equal-power capacity.
pub fn mu_j(nr_bar: f64, k_bar: f64, rho: f64) -> Result<f64> {
    check_params(nr_bar, k_bar)?;
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "rho must be positive, got {rho}"
        )));
    }
    let r = k_bar / nr_bar;
    let t = 1.0 + r + r / rho;
    let v = 0.5 + 0.5 * r + 0.5 * r / rho - 0.5 * (t * t - 4.0 * r).max(0.0).sqrt();
    Ok(r * (1.0 + rho / r - rho / r * v).ln() + (1.0 + rho - rho / r * v).ln() - v)
}

/// Low-SNR variance approximation `rho^2 (1 - nr_bar)`, valid for
/// `k_bar = nr_bar <= 1` and roughly `rho <= -5 dB`. The returned flag marks
/// calls outside that regime.
pub fn sigma_lowsnr(nr_bar: f64, rho: f64) -> Result<(f64, bool)> {
    if !(nr_bar > 0.0 && nr_bar <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "low-SNR variance needs 0 < nr_bar <= 1, got {nr_bar}"
        )));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "rho must be positive, got {rho}"
        )));
    }
    let within = rho <= 10f64.powf(-0.5);
    Ok((rho * rho * (1.0 - nr_bar), within))
}

/// Asymptotic matched-filter mean rate
/// `(k_bar/nr_bar) ln(1 + nr_bar/(k_bar (1 + sigma_n^2)))`.
pub fn mf_mu(nr_bar: f64, k_bar: f64, sigma_n2: f64) -> Result<f64> {
    check_params(nr_bar, k_bar)?;
    check_sigma(sigma_n2)?;
    let r = k_bar / nr_bar;
    Ok(r * (1.0 + 1.0 / (r * (1.0 + sigma_n2))).ln())
}

/// Large-system MMSE output SINR.
///
/// Solution of the scalar fixed point `g = 1/(s + r/(1+g))` with load
/// `r = k_bar/nr_bar` and effective per-dimension noise
/// `s = r * sigma_n2` (each of the `k` streams carries power `1/k` and the
/// interference space has `n_r` dimensions). Closed form:
///
/// ```text
/// g = (1-r)/(2s) - 1/2 + sqrt((1-r)^2/(4s^2) + (1+r)/(2s) + 1/4)
/// ```
pub fn mmse_sinr_limit(nr_bar: f64, k_bar: f64, sigma_n2: f64) -> Result<f64> {
    check_params(nr_bar, k_bar)?;
    check_sigma(sigma_n2)?;
    let r = k_bar / nr_bar;
    let s = r * sigma_n2;
    let a = (1.0 - r) / (2.0 * s);
    Ok(a - 0.5 + (a * a + (1.0 + r) / (2.0 * s) + 0.25).sqrt())
}

/// Asymptotic MMSE mean rate `(k_bar/nr_bar) ln(1 + g)` with `g` from
/// [`mmse_sinr_limit`].
pub fn mmse_mu(nr_bar: f64, k_bar: f64, sigma_n2: f64) -> Result<f64> {
    let g = mmse_sinr_limit(nr_bar, k_bar, sigma_n2)?;
    Ok(k_bar / nr_bar * (1.0 + g).ln())
}

fn check_sigma(sigma_n2: f64) -> Result<()> {
    if !(sigma_n2 > 0.0 && sigma_n2.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "noise variance must be positive, got {sigma_n2}"
        )));
    }
    Ok(())
}

/// Number of precoder draws per channel in [`estimate_sigma`]. The variance
/// is conditional on the channel, so each channel contributes one unbiased
/// within-group sample variance.
const PRECODERS_PER_CHANNEL: u64 = 8;

/// Simulation-backed Gaussian rate model: `mu` from the matching closed form,
/// `sigma2` as `n_r^2 *` the channel-averaged conditional variance of the
/// rate over random precoders.
///
/// Finite sizes are `n_r = round(nr_bar n_t)`, `k = round(k_bar n_t)`.
/// Trials are grouped as `trials / 8` channels x 8 precoders; groups run in
/// parallel with per-group child seeds and reduce in index order, so the
/// estimate is independent of thread count.
pub fn estimate_sigma(
    receiver: ReceiverKind,
    nr_bar: f64,
    k_bar: f64,
    rho: f64,
    n_t: usize,
    trials: u64,
    seed: u64,
) -> Result<GaussianRateModel> {
    check_params(nr_bar, k_bar)?;
    if trials < 1000 {
        return Err(Error::InvalidArgument(format!(
            "need at least 1000 trials for a stable variance, got {trials}"
        )));
    }
    let n_r = (nr_bar * n_t as f64).round() as usize;
    let k = (k_bar * n_t as f64).round() as usize;
    if n_r == 0 || k == 0 || k > n_t {
        return Err(Error::InvalidDimensions(format!(
            "ratios {nr_bar}, {k_bar} do not yield a valid system at n_t = {n_t}"
        )));
    }
    let sigma_n2 = 1.0 / rho;
    let mu = match receiver {
        ReceiverKind::Optimal => mu_j(nr_bar, k_bar, rho)?,
        ReceiverKind::MatchedFilter => mf_mu(nr_bar, k_bar, sigma_n2)?,
        ReceiverKind::Mmse => mmse_mu(nr_bar, k_bar, sigma_n2)?,
    };
    let policy = SeedPolicy::new(seed);
    let groups = (trials / PRECODERS_PER_CHANNEL).max(2);
    let per_channel: Vec<f64> = (0..groups)
        .into_par_iter()
        .map(|g| {
            let mut ch_rng = policy.child_rng(g, StreamLabel::Channel);
            let h = sample_channel(n_r, n_t, &mut ch_rng);
            let rates: Vec<f64> = (0..PRECODERS_PER_CHANNEL)
                .map(|j| {
                    let mut pre_rng =
                        policy.child_rng(g * PRECODERS_PER_CHANNEL + j, StreamLabel::Precoder);
                    let v = sample_semi_unitary(n_t, k, &mut pre_rng)
                        .expect("validated dimensions");
                    match receiver {
                        ReceiverKind::Optimal => mutual_info_optimal(&h, v.matrix(), rho)
                            .expect("finite sampled inputs")
                            .nats(),
                        ReceiverKind::MatchedFilter => {
                            let s = linear_sinr(&h, v.matrix(), sigma_n2, FilterKind::MatchedFilter)
                                .expect("finite sampled inputs");
                            sum_rate(&s, n_r).nats()
                        }
                        ReceiverKind::Mmse => {
                            let s = linear_sinr(&h, v.matrix(), sigma_n2, FilterKind::Mmse)
                                .expect("finite sampled inputs");
                            sum_rate(&s, n_r).nats()
                        }
                    }
                })
                .collect();
            let (_, var) = mean_variance(&rates);
            var
        })
        .collect();
    let scale = (n_r * n_r) as f64;
    let (mean_var, var_of_var) = mean_variance(&per_channel);
    Ok(GaussianRateModel {
        mu,
        sigma2: scale * mean_var,
        sigma2_stderr: scale * (var_of_var / groups as f64).sqrt(),
        receiver,
        provenance: Provenance::MonteCarlo {
            seed,
            n_t,
            trials: groups * PRECODERS_PER_CHANNEL,
        },
    })
}

/// The approximate selected rate `min{mu + sigma sqrt(2 b_hat ln 2), cap}`.
pub fn gaussian_rate(model: &GaussianRateModel, b_hat: f64, cap: f64) -> Result<f64> {
    if b_hat.is_nan() || b_hat < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "b_hat must be non-negative, got {b_hat}"
        )));
    }
    if cap < model.mu - 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "cap {cap} below the zero-feedback mean {}",
            model.mu
        )));
    }
    let unclamped = model.mu + model.sigma2.max(0.0).sqrt() * (2.0 * b_hat * LN2).sqrt();
    Ok(unclamped.min(cap))
}

/// Convenience: the unlimited-feedback capacity used as the clamp for
/// [`gaussian_rate`] at the same `(nr_bar, k_bar, rho)`.
pub fn clamp_capacity(nr_bar: f64, k_bar: f64, rho: f64) -> Result<f64> {
    if nr_bar <= 1.0 {
        super::capacity::cap_full_feedback(nr_bar, k_bar, rho)
    } else {
        // Full-rank fallback through the reciprocal system.
        cap_no_feedback_any(nr_bar, rho)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::capacity::{cap_full_feedback, cap_no_feedback};

    #[test]
    fn mu_full_rank_equals_equal_power_capacity() {
        // identity precoder covariance at k_bar = 1 on a 5-point grid
        for &(nr, rho) in &[(0.25, 0.5), (0.5, 1.0), (0.75, 3.0), (1.0, 10.0), (0.9, 0.2)] {
            let a = mu_j(nr, 1.0, rho).unwrap();
            let b = cap_no_feedback(nr, rho).unwrap();
            assert!((a - b).abs() < 1e-9, "nr {nr} rho {rho}: {a} vs {b}");
        }
    }

    #[test]
    fn mu_reference_value_square_system() {
        let a = mu_j(1.0, 1.0, 10.0).unwrap();
        assert!((a - 1.8877).abs() < 1e-4, "{a}");
    }

    #[test]
    fn mu_matches_monte_carlo_mean() {
        // Monte Carlo over random precoders and channels at n_t = 64.
        let model = estimate_sigma(ReceiverKind::Optimal, 0.5, 0.5, 1.0, 64, 1000, 7).unwrap();
        let policy = SeedPolicy::new(8);
        let mut vals = Vec::new();
        for t in 0..600u64 {
            let mut rng = policy.child_rng(t, StreamLabel::Channel);
            let h = sample_channel(32, 64, &mut rng);
            let mut rng2 = policy.child_rng(t, StreamLabel::Precoder);
            let v = sample_semi_unitary(64, 32, &mut rng2).unwrap();
            vals.push(mutual_info_optimal(&h, v.matrix(), 1.0).unwrap().nats());
        }
        let mc = crate::stats::mean(&vals);
        assert!(
            (mc - model.mu).abs() < 0.01 * model.mu,
            "mc {mc} vs mu {}",
            model.mu
        );
    }

    #[test]
    fn lowsnr_variance_square_system_vanishes() {
        let (s2, ok) = sigma_lowsnr(1.0, 0.1).unwrap();
        assert_eq!(s2, 0.0);
        assert!(ok);
    }

    #[test]
    fn lowsnr_variance_quadratic_scaling() {
        let (a, _) = sigma_lowsnr(0.5, 0.1).unwrap();
        let (b, _) = sigma_lowsnr(0.5, 0.05).unwrap();
        assert!((a - 4.0 * b).abs() < 1e-15);
        assert!((a - 0.005).abs() < 1e-15);
        let (_, ok) = sigma_lowsnr(0.5, 1.0).unwrap();
        assert!(!ok);
    }

    #[test]
    fn simulated_sigma_approaches_lowsnr_form() {
        // The rho^2 (1 - nr_bar) law is a joint low-SNR / large-system limit.
        // The n_t = 64 Monte Carlo sits about 29% below it at rho = 0.1 and
        // closes in as the SNR drops; assert the trend and the deep-SNR match.
        let mut ratios = Vec::new();
        for &rho in &[0.1, 0.05, 0.025] {
            let model =
                estimate_sigma(ReceiverKind::Optimal, 0.5, 0.5, rho, 64, 2000, 11).unwrap();
            let (analytic, ok) = sigma_lowsnr(0.5, rho).unwrap();
            assert!(ok);
            ratios.push(model.sigma2 / analytic);
        }
        assert!(
            ratios[0] < ratios[1] && ratios[1] < ratios[2],
            "no convergence toward the low-SNR law: {ratios:?}"
        );
        assert!(
            (ratios[2] - 1.0).abs() < 0.15,
            "rho = 0.025 deviation {:.3} exceeds 15%",
            ratios[2]
        );
    }

    #[test]
    fn sigma_always_nonnegative_and_deterministic() {
        let a = estimate_sigma(ReceiverKind::Mmse, 0.75, 0.5, 1.0, 16, 1000, 3).unwrap();
        let b = estimate_sigma(ReceiverKind::Mmse, 0.75, 0.5, 1.0, 16, 1000, 3).unwrap();
        assert!(a.sigma2 >= 0.0);
        assert_eq!(a.sigma2, b.sigma2);
    }

    #[test]
    fn mf_mean_reference_point() {
        // k_bar = nr_bar, unit noise: ln(1.5)
        let m = mf_mu(0.5, 0.5, 1.0).unwrap();
        assert!((m - 1.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn mf_mean_self_consistent_with_simulation() {
        let model =
            estimate_sigma(ReceiverKind::MatchedFilter, 0.5, 0.5, 1.0, 64, 1000, 5).unwrap();
        let policy = SeedPolicy::new(6);
        let mut vals = Vec::new();
        for t in 0..400u64 {
            let mut rng = policy.child_rng(t, StreamLabel::Channel);
            let h = sample_channel(32, 64, &mut rng);
            let mut rng2 = policy.child_rng(t, StreamLabel::Precoder);
            let v = sample_semi_unitary(64, 32, &mut rng2).unwrap();
            let s = linear_sinr(&h, v.matrix(), 1.0, FilterKind::MatchedFilter).unwrap();
            vals.push(sum_rate(&s, 32).nats());
        }
        let sum = crate::stats::Summary::of(&vals);
        // the 1.5% slack covers the O(1/n_t) finite-size mean offset
        assert!(
            (sum.mean - model.mu).abs() < 3.0 * sum.stderr + 0.015 * model.mu,
            "mc {} vs mu {}",
            sum.mean,
            model.mu
        );
    }

    #[test]
    fn mmse_sinr_reference_point() {
        // k_bar = nr_bar, unit noise: (sqrt(5) - 1)/2
        let g = mmse_sinr_limit(0.5, 0.5, 1.0).unwrap();
        assert!((g - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-12, "{g}");
        // dominates the matched-filter limit 1/(1 + sigma) = 0.5
        assert!(g >= 0.5);
    }

    #[test]
    fn mmse_sinr_solves_fixed_point() {
        for &(nr, kb, s2) in &[(0.75, 0.5, 0.31623), (0.5, 0.25, 1.0), (1.0, 1.0, 0.1)] {
            let g = mmse_sinr_limit(nr, kb, s2).unwrap();
            let r = kb / nr;
            let s = r * s2;
            let resid = g - 1.0 / (s + r / (1.0 + g));
            assert!(resid.abs() < 1e-12, "({nr},{kb},{s2}): {resid}");
        }
    }

    #[test]
    fn means_vanish_with_noise() {
        assert!(mf_mu(0.5, 0.5, 1e9).unwrap() < 1e-8);
        assert!(mmse_mu(0.5, 0.5, 1e9).unwrap() < 1e-8);
    }

    #[test]
    fn mmse_mean_dominates_mf_on_grid() {
        for &nr in &[0.25, 0.5, 1.0, 2.0] {
            for &kb in &[0.1, 0.5, 1.0] {
                for &s2 in &[0.05, 0.3, 1.0, 5.0] {
                    let mf = mf_mu(nr, kb, s2).unwrap();
                    let mm = mmse_mu(nr, kb, s2).unwrap();
                    assert!(mm >= mf - 1e-12, "({nr},{kb},{s2}): {mm} < {mf}");
                }
            }
        }
    }

    #[test]
    fn gaussian_rate_endpoints_and_monotonicity() {
        let model = GaussianRateModel {
            mu: 1.0,
            sigma2: 0.25,
            sigma2_stderr: 0.0,
            receiver: ReceiverKind::Optimal,
            provenance: Provenance::ClosedForm,
        };
        let cap = 1.4;
        assert_eq!(gaussian_rate(&model, 0.0, cap).unwrap(), 1.0);
        assert_eq!(gaussian_rate(&model, 1e6, cap).unwrap(), cap);
        let mut last = 0.0;
        for i in 0..30 {
            let v = gaussian_rate(&model, i as f64 * 0.1, cap).unwrap();
            assert!(v >= last);
            last = v;
        }
        assert!(gaussian_rate(&model, 0.1, 0.5).is_err());
    }

    /// Finite-size diagnostic for the rank-one projection moment: reports the
    /// Monte Carlo value of E|u^H v|^2 next to the 1/n_t law and the
    /// (n_r+1)/(n_t+2) convention, without asserting either. Run with
    /// `cargo test -- --ignored` to print it.
    #[test]
    #[ignore]
    fn finite_size_moment_diagnostic() {
        use crate::randmat::{sample_isotropic_unit_vector, SeedPolicy, StreamLabel};
        use nalgebra::DVector;
        use num_complex::Complex64;
        for n_t in [3usize, 8, 24] {
            let policy = SeedPolicy::new(123);
            let mut rng = policy.child_rng(n_t as u64, StreamLabel::Codebook);
            let mut fixed = DVector::zeros(n_t);
            fixed[0] = Complex64::new(1.0, 0.0);
            let n = 200_000;
            let mc: f64 = (0..n)
                .map(|_| fixed.dotc(&sample_isotropic_unit_vector(n_t, &mut rng)).norm_sqr())
                .sum::<f64>()
                / n as f64;
            println!(
                "n_t = {n_t}: E|u^H v|^2 = {mc:.5}; 1/n_t = {:.5}; 2/(n_t+2) = {:.5}",
                1.0 / n_t as f64,
                2.0 / (n_t as f64 + 2.0)
            );
        }
    }

    #[test]
    fn clamp_capacity_matches_full_feedback() {
        let a = clamp_capacity(0.75, 0.5, 3.0).unwrap();
        let b = cap_full_feedback(0.75, 0.5, 3.0).unwrap();
        assert_eq!(a, b);
    }
}
