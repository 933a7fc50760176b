//! Feedback demands of matched-filter, MMSE and optimal receivers: where
//! each approximate rate curve reaches the unlimited-feedback capacity.
//!
//! ```bash
//! cargo run --release --example linear_receivers
//! ```

use rvqcap::asymptotics::{cap_full_feedback, estimate_sigma, gaussian_rate, ReceiverKind};
use rvqcap::db_to_linear;

const LN2: f64 = std::f64::consts::LN_2;

fn main() {
    let (nr_bar, k_bar) = (0.75, 0.5);
    let rho = db_to_linear(5.0);
    let cap = cap_full_feedback(nr_bar, k_bar, rho).unwrap();
    println!("ratio {nr_bar}, rank {k_bar}, 5 dB: unlimited-feedback capacity = {cap:.4} nats/rx-antenna\n");

    let receivers = [
        ("optimal", ReceiverKind::Optimal),
        ("mmse", ReceiverKind::Mmse),
        ("matched filter", ReceiverKind::MatchedFilter),
    ];
    println!(
        "{:>16} {:>8} {:>8} {:>20}",
        "receiver", "mu", "sigma2", "b_hat to reach cap"
    );
    for (name, kind) in receivers {
        let m = estimate_sigma(kind, nr_bar, k_bar, rho, 64, 4000, 5).unwrap();
        let crossing = ((cap - m.mu) / m.sigma2.sqrt()).powi(2) / (2.0 * LN2);
        println!("{name:>16} {:>8.4} {:>8.4} {crossing:>20.3}", m.mu, m.sigma2);
    }

    println!("\nrate curves (nats per receive antenna):");
    println!("{:>6} {:>10} {:>10} {:>10}", "b_hat", "mf", "mmse", "optimal");
    let m_mf = estimate_sigma(ReceiverKind::MatchedFilter, nr_bar, k_bar, rho, 64, 4000, 5).unwrap();
    let m_mm = estimate_sigma(ReceiverKind::Mmse, nr_bar, k_bar, rho, 64, 4000, 5).unwrap();
    let m_op = estimate_sigma(ReceiverKind::Optimal, nr_bar, k_bar, rho, 64, 4000, 5).unwrap();
    for i in 0..=10 {
        let b_hat = 0.3 * i as f64;
        println!(
            "{b_hat:>6.1} {:>10.4} {:>10.4} {:>10.4}",
            gaussian_rate(&m_mf, b_hat, cap).unwrap(),
            gaussian_rate(&m_mm, b_hat, cap).unwrap(),
            gaussian_rate(&m_op, b_hat, cap).unwrap()
        );
    }
}
