//! Rate gap of quantized beamforming: simulation against the large-system
//! limits, for a single receive antenna and for a tall 1.5-ratio array.
//!
//! ```bash
//! cargo run --release --example beamforming_rate_gap
//! ```

use rayon::prelude::*;
use rvqcap::asymptotics::{beam_gamma, miso_rate_gap, RateGap};
use rvqcap::randmat::{sample_channel, sample_isotropic_unit_vector, SeedPolicy, StreamLabel};
use rvqcap::stats::Summary;
use rvqcap::db_to_linear;

fn simulate(seed: u64, n_t: usize, n_r: usize, b: u32, rho: f64, trials: u64) -> Summary {
    let policy = SeedPolicy::new(seed);
    let vals: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut ch = policy.child_rng(t, StreamLabel::Channel);
            let h = sample_channel(n_r, n_t, &mut ch);
            let mut cb = policy.child_rng(t, StreamLabel::Codebook);
            let mut best = f64::NEG_INFINITY;
            for _ in 0..(1u64 << b) {
                let v = sample_isotropic_unit_vector(n_t, &mut cb);
                best = best.max((h.matrix() * &v).norm_squared() / n_t as f64);
            }
            (1.0 / (rho * n_t as f64) + best).ln()
        })
        .collect();
    Summary::of(&vals)
}

fn main() {
    let rho = db_to_linear(10.0);

    println!("single receive antenna, n_t = 6, 10 dB, 4000 trials per point");
    println!("{:>6} {:>4} {:>12} {:>12} {:>8}", "b_bar", "b", "simulated", "limit", "|dev|");
    for b_bar in [0.5f64, 1.0, 1.5, 2.0] {
        let b = (b_bar * 6.0).round() as u32;
        let sim = simulate(1, 6, 1, b, rho, 4000);
        let RateGap::Nats(asym) = miso_rate_gap(b_bar).unwrap() else {
            unreachable!()
        };
        println!(
            "{b_bar:>6} {b:>4} {:>12.4} {asym:>12.4} {:>8.4}",
            sim.mean,
            (sim.mean - asym).abs()
        );
    }

    println!();
    println!("tall array 16x24 (ratio 1.5), 10 dB, 150 trials per point");
    println!("{:>6} {:>4} {:>12} {:>12} {:>8}", "b_bar", "b", "simulated", "ln(gamma)", "|dev|");
    for b_bar in [0.5f64, 1.0] {
        let b = (b_bar * 16.0).round() as u32;
        let sim = simulate(2, 16, 24, b, rho, 150);
        let asym = beam_gamma(1.5, b_bar).unwrap().ln();
        println!(
            "{b_bar:>6} {b:>4} {:>12.4} {asym:>12.4} {:>8.4}",
            sim.mean,
            (sim.mean - asym).abs()
        );
    }
}
