//! Generalized Lloyd training of a beamforming codebook against the random
//! (isotropic) codebook baseline, scored by mean selected projection on a
//! held-out channel set.
//!
//! ```bash
//! cargo run --release --example lloyd_vs_rvq
//! ```

use nalgebra::DVector;
use num_complex::Complex64;
use rvqcap::quantizer::{generate_rvq_codebook, lloyd_train, PrecoderCodebook};
use rvqcap::randmat::{sample_channel, ChannelMatrix, SeedPolicy, StreamLabel};
use rvqcap::stats::mean;

fn main() {
    let (n_t, b) = (4usize, 4u32);
    let policy = SeedPolicy::new(3);
    let training: Vec<ChannelMatrix> = (0..8000u64)
        .map(|t| {
            let mut r = policy.child_rng(t, StreamLabel::Training);
            sample_channel(1, n_t, &mut r)
        })
        .collect();
    let mut rng = policy.child_rng(0, StreamLabel::Codebook);
    let outcome = lloyd_train(&training, n_t, b, 40, 1e-7, &mut rng, 3).unwrap();
    println!(
        "training objective trace ({} iterations): {:.4} -> {:.4}",
        outcome.objective_trace.len(),
        outcome.objective_trace.first().unwrap(),
        outcome.objective_trace.last().unwrap()
    );

    let eval: Vec<DVector<Complex64>> = (0..8000u64)
        .map(|t| {
            let mut r = policy.child_rng(t, StreamLabel::Aux(1));
            let h = sample_channel(1, n_t, &mut r);
            DVector::from_fn(n_t, |i, _| h.matrix()[(0, i)])
        })
        .collect();
    let score = |book: &PrecoderCodebook| -> f64 {
        let vals: Vec<f64> = eval
            .iter()
            .map(|h| {
                let p = h.norm_squared();
                book.entries()
                    .iter()
                    .map(|v| h.dotc(&v.column_vector()).norm_sqr() / p)
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        mean(&vals)
    };
    let trained = score(&outcome.codebook);
    let mut random_scores = Vec::new();
    for i in 0..20u64 {
        let mut r = policy.child_rng(i, StreamLabel::Aux(2));
        random_scores.push(score(&generate_rvq_codebook(n_t, 1, b, &mut r, i).unwrap()));
    }
    let random = mean(&random_scores);
    println!("held-out mean selected projection:");
    println!("  trained codebook:        {trained:.4}");
    println!("  random codebook average: {random:.4}  (over 20 codebooks)");
    println!("  trained/random - 1:      {:+.2}%", (trained / random - 1.0) * 100.0);
}
