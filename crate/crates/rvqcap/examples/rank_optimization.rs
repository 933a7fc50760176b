//! Rate versus normalized rank for several feedback budgets at ratio 0.2,
//! 5 dB. More feedback pushes the best rank from full toward the antenna
//! ratio.
//!
//! ```bash
//! cargo run --release --example rank_optimization
//! ```

use rvqcap::asymptotics::{
    cap_full_feedback, estimate_sigma, gaussian_rate, mu_j, ReceiverKind,
};
use rvqcap::db_to_linear;

fn main() {
    let nr_bar = 0.2;
    let rho = db_to_linear(5.0);
    let grid: Vec<f64> = (1..=20).map(|i| 0.05 * i as f64).collect();
    println!("{:>6} {:>10} {:>10} {:>10}", "k_bar", "bhat=0", "bhat=0.5", "bhat=2");
    let mut best = [(0.0, f64::MIN); 3];
    for (ki, &k_bar) in grid.iter().enumerate() {
        let cap = cap_full_feedback(nr_bar, k_bar, rho).unwrap();
        let mut cells = Vec::new();
        for (bi, b_hat) in [0.0, 0.5, 2.0].into_iter().enumerate() {
            let rate = if b_hat == 0.0 {
                mu_j(nr_bar, k_bar, rho).unwrap().min(cap)
            } else {
                // variance simulated at n_t = 60 so each rank step is integral
                let model = estimate_sigma(
                    ReceiverKind::Optimal,
                    nr_bar,
                    k_bar,
                    rho,
                    60,
                    2000,
                    40 + ki as u64,
                )
                .unwrap();
                gaussian_rate(&model, b_hat, cap).unwrap()
            };
            if rate > best[bi].1 {
                best[bi] = (k_bar, rate);
            }
            cells.push(rate);
        }
        println!(
            "{k_bar:>6.2} {:>10.4} {:>10.4} {:>10.4}",
            cells[0], cells[1], cells[2]
        );
    }
    println!();
    for (bi, b_hat) in [0.0, 0.5, 2.0].into_iter().enumerate() {
        println!(
            "bhat = {b_hat}: best rank k_bar = {:.2} (rate {:.4} nats/rx-antenna)",
            best[bi].0, best[bi].1
        );
    }
}
