//! Two independent routes to the limiting received beam power: the explicit
//! two-branch closed form versus solving the Chernoff-exponent fixed point
//! `phi(gamma, rho*(gamma)) = b_bar ln 2` with spectral quadrature.
//!
//! ```bash
//! cargo run --release --example fixed_point_crosscheck
//! ```

use rvqcap::asymptotics::{b_star, beam_gamma, verify_beam_gamma};

fn main() {
    println!(
        "{:>6} {:>8} {:>14} {:>12}",
        "ratio", "b_bar", "gamma(closed)", "residual"
    );
    for nr_bar in [0.25, 0.5, 1.0, 1.5] {
        let bs = b_star(nr_bar).unwrap();
        for b_bar in [0.1, bs / 2.0, bs, 2.0 * bs] {
            let gamma = beam_gamma(nr_bar, b_bar).unwrap();
            let residual = verify_beam_gamma(nr_bar, b_bar).unwrap();
            println!("{nr_bar:>6} {b_bar:>8.4} {gamma:>14.8} {residual:>12.2e}");
        }
    }
    println!("\nbranch threshold b_star and continuity across it:");
    for nr_bar in [0.25, 0.5, 1.0, 1.5] {
        let bs = b_star(nr_bar).unwrap();
        let below = beam_gamma(nr_bar, bs - 1e-9).unwrap();
        let above = beam_gamma(nr_bar, bs + 1e-9).unwrap();
        println!(
            "ratio {nr_bar}: b_star = {bs:.5}, gamma jump {:.2e}",
            (below - above).abs()
        );
    }
}
