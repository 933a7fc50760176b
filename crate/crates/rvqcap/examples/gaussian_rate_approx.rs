//! The Gaussian rate approximation for selected random precoders versus an
//! exhaustive 8x4 simulation, across SNR.
//!
//! ```bash
//! cargo run --release --example gaussian_rate_approx
//! ```

use rayon::prelude::*;
use rvqcap::asymptotics::{
    cap_full_feedback, estimate_sigma, gaussian_rate, mu_j, sigma_lowsnr, GaussianRateModel,
    Provenance, ReceiverKind,
};
use rvqcap::harness::rvq_select_streamed;
use rvqcap::quantizer::SelectionMetric;
use rvqcap::randmat::{sample_channel, SeedPolicy, StreamLabel};
use rvqcap::stats::mean;
use rvqcap::db_to_linear;

fn main() {
    let (nr_bar, k_bar) = (0.5, 0.5);
    let (n_t, n_r, k) = (8usize, 4usize, 4usize);
    let policy = SeedPolicy::new(11);
    for rho_db in [-5.0, 0.0, 5.0] {
        let rho = db_to_linear(rho_db);
        let model = if rho_db < 0.0 {
            // deep-SNR closed form for the variance
            let (sigma2, _) = sigma_lowsnr(nr_bar, rho).unwrap();
            GaussianRateModel {
                mu: mu_j(nr_bar, k_bar, rho).unwrap(),
                sigma2,
                sigma2_stderr: 0.0,
                receiver: ReceiverKind::Optimal,
                provenance: Provenance::ClosedForm,
            }
        } else {
            estimate_sigma(ReceiverKind::Optimal, nr_bar, k_bar, rho, 64, 4000, 12).unwrap()
        };
        let cap = cap_full_feedback(nr_bar, k_bar, rho).unwrap();
        println!(
            "rho = {rho_db} dB: mu = {:.4}, sigma2 = {:.4}, cap = {:.4}",
            model.mu, model.sigma2, cap
        );
        println!("{:>8} {:>4} {:>10} {:>10} {:>8}", "b_hat", "b", "approx", "sim(8x4)", "rel%");
        for b in [0u32, 3, 6, 10, 13] {
            let b_hat = b as f64 / (n_r * n_r) as f64;
            let approx = gaussian_rate(&model, b_hat, cap).unwrap();
            let sims: Vec<f64> = (0..800u64)
                .into_par_iter()
                .map(|t| {
                    let mut ch = policy.child_rng(t, StreamLabel::Channel);
                    let h = sample_channel(n_r, n_t, &mut ch);
                    rvq_select_streamed(
                        &policy,
                        t << (b + 1),
                        &h,
                        k,
                        b,
                        rho,
                        SelectionMetric::Optimal,
                    )
                    .unwrap()
                    .1
                })
                .collect();
            let sim = mean(&sims);
            println!(
                "{b_hat:>8.4} {b:>4} {approx:>10.4} {sim:>10.4} {:>8.2}",
                (sim - approx).abs() / approx * 100.0
            );
        }
        println!();
    }
}
