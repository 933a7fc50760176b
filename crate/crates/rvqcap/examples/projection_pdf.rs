//! Distribution of the best normalized beam projection
//! `max_j |h^H v_j|^2 / ||h||^2` as the array grows: the law tightens toward
//! a point mass, much faster with feedback than without.
//!
//! ```bash
//! cargo run --release --example projection_pdf
//! ```

use rvqcap::quantizer::projection_stats;
use rvqcap::randmat::{SeedPolicy, StreamLabel};

fn main() {
    let policy = SeedPolicy::new(7);
    for b_bar in [0.0, 2.0] {
        println!("== b_bar = {b_bar} ==");
        for (i, n_t) in [5usize, 10, 20].into_iter().enumerate() {
            let mut rng = policy.child_rng(i as u64, StreamLabel::Projection);
            let stats = projection_stats(n_t, b_bar, 40_000, &mut rng, 25).unwrap();
            println!(
                "n_t = {n_t:>2} (b = {:>2}): mean {:.4}, std {:.4}",
                stats.b_used,
                stats.mean,
                stats.variance.sqrt()
            );
            let density = stats.histogram.density();
            let peak = density.iter().map(|(_, d)| *d).fold(0.0, f64::max);
            for (center, d) in density.iter().step_by(2) {
                let bar = "#".repeat((40.0 * d / peak).round() as usize);
                println!("  {center:.2} |{bar}");
            }
        }
    }
    println!("limit of the mean with feedback: 1 - 2^(-b_bar)");
}
