//! How much rate does transmitter channel knowledge buy? The ratio of the
//! unlimited-feedback capacity (rank optimized) to the equal-power capacity,
//! across SNR and antenna ratios.
//!
//! ```bash
//! cargo run --release --example capacity_ratio
//! ```

use rvqcap::asymptotics::{cap_no_feedback, optimal_rank, rate_ratio};
use rvqcap::db_to_linear;

fn main() {
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>10}",
        "snr(dB)", "ratio@0.2", "ratio@0.5", "ratio@1.0", "k*@0.2"
    );
    for i in 0..=10 {
        let rho_db = -20.0 + 5.0 * i as f64;
        let rho = db_to_linear(rho_db);
        let r02 = rate_ratio(0.2, rho).unwrap();
        let r05 = rate_ratio(0.5, rho).unwrap();
        let r10 = rate_ratio(1.0, rho).unwrap();
        let (k_star, _) = optimal_rank(0.2, rho).unwrap();
        println!("{rho_db:>8} {r02:>10.4} {r05:>10.4} {r10:>10.4} {k_star:>10.4}");
    }
    println!();
    println!("low-SNR ceiling (1 + 1/sqrt(ratio))^2:");
    for nr_bar in [0.2, 0.5, 1.0] {
        println!(
            "  ratio {nr_bar}: bound {:.4}, equal-power capacity at 0 dB = {:.4} nats/rx-antenna",
            (1.0 + 1.0 / f64::sqrt(nr_bar)).powi(2),
            cap_no_feedback(nr_bar, 1.0).unwrap()
        );
    }
}
