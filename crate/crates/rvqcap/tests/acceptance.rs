//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them all). Criteria with
//! tolerances that desk-scale systems genuinely cannot meet are asserted
//! as stated anyway and fail honestly; the per-point printouts carry the
//! measured values.

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;

use rvqcap::asymptotics::{
    b_star, beam_gamma, cap_full_feedback, cap_no_feedback, estimate_sigma, gaussian_rate,
    miso_rate_gap, mu_j, rate_ratio, sigma_lowsnr, verify_beam_gamma, GaussianRateModel,
    Provenance, RateGap, ReceiverKind,
};
use rvqcap::harness::{compare, run_experiment, rvq_select_streamed, write_outputs};
use rvqcap::harness::{CustomConfig, ExperimentConfig, Preset};
use rvqcap::quantizer::{generate_rvq_codebook, lloyd_train, select_entry, SelectionMetric};
use rvqcap::randmat::{
    gram_eigenvalues, sample_channel, sample_isotropic_unit_vector, sample_semi_unitary,
    ChannelMatrix, GramSide, SeedPolicy, StreamLabel,
};
use rvqcap::receivers::{
    linear_sinr, mutual_info_optimal, sum_rate, water_filling, FilterKind,
};
use rvqcap::stats::{ks_test, Summary};
use rvqcap::{db_to_linear, Result};

const LN2: f64 = std::f64::consts::LN_2;

fn report(criterion: &str, pass: bool, detail: &str) -> bool {
    println!(
        "acceptance {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

/// Per-trial rate difference of the best beam out of a fresh random codebook.
fn beam_gap_trial(policy: &SeedPolicy, trial: u64, n_t: usize, n_r: usize, b: u32, rho: f64) -> f64 {
    let mut ch = policy.child_rng(trial, StreamLabel::Channel);
    let h = sample_channel(n_r, n_t, &mut ch);
    let mut cb = policy.child_rng(trial, StreamLabel::Codebook);
    let mut best = f64::NEG_INFINITY;
    for _ in 0..(1u64 << b) {
        let v = sample_isotropic_unit_vector(n_t, &mut cb);
        let gamma = (h.matrix() * &v).norm_squared() / n_t as f64;
        best = best.max(gamma);
    }
    (1.0 / (rho * n_t as f64) + best).ln()
}

fn beam_gap_mc(seed: u64, n_t: usize, n_r: usize, b: u32, rho: f64, trials: u64) -> Summary {
    let policy = SeedPolicy::new(seed);
    let vals: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| beam_gap_trial(&policy, t, n_t, n_r, b, rho))
        .collect();
    Summary::of(&vals)
}

#[test]
fn criterion_01_miso_rate_gap_vs_limit() {
    let (n_t, rho, trials) = (6usize, db_to_linear(10.0), 20_000u64);
    let mut all = true;
    for (i, b_bar) in [0.5, 1.0, 1.5, 2.0].into_iter().enumerate() {
        let b = (b_bar * n_t as f64).round() as u32;
        let sum = beam_gap_mc(101 + i as u64, n_t, 1, b, rho, trials);
        let asym = match miso_rate_gap(b_bar).unwrap() {
            RateGap::Nats(x) => x,
            RateGap::NegativeInfinite => unreachable!(),
        };
        let dev = (sum.mean - asym).abs();
        all &= report(
            "1 (single-rx rate gap)",
            dev <= 0.15,
            &format!(
                "b_bar={b_bar}: sim {:.4} (se {:.4}) vs limit {asym:.4}, |dev| = {dev:.4} (tol 0.15)",
                sum.mean, sum.stderr
            ),
        );
    }
    assert!(all, "at least one feedback point exceeded 0.15 nats");
}

#[test]
fn criterion_02_fixed_point_consistency() {
    let start = std::time::Instant::now();
    let mut worst = 0.0f64;
    for nr_bar in [0.25, 0.5, 1.0, 1.5] {
        let bs = b_star(nr_bar).unwrap();
        for b_bar in [0.1, bs / 2.0, bs, 2.0 * bs] {
            worst = worst.max(verify_beam_gamma(nr_bar, b_bar).unwrap());
        }
    }
    let grid_ok = worst < 1e-6;
    let mut jump = 0.0f64;
    for nr_bar in [0.25, 0.5, 1.0, 1.5] {
        let bs = b_star(nr_bar).unwrap();
        jump = jump.max(
            (beam_gamma(nr_bar, bs * (1.0 - 1e-9)).unwrap()
                - beam_gamma(nr_bar, bs * (1.0 + 1e-9)).unwrap())
            .abs(),
        );
    }
    let cont_ok = jump < 1e-8;
    let miso = (beam_gamma(1e-6, 1.0).unwrap() - 0.5).abs();
    let miso_ok = miso < 5e-3;
    let elapsed = start.elapsed().as_secs_f64();
    let pass = grid_ok && cont_ok && miso_ok && elapsed < 10.0;
    report(
        "2 (beamforming limit consistency)",
        pass,
        &format!(
            "max residual {worst:.2e} (tol 1e-6), branch jump {jump:.2e} (tol 1e-8), \
             single-rx limit dev {miso:.2e} (tol 5e-3), runtime {elapsed:.2}s (< 10s)"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_03_tall_mimo_rate_gap() {
    let start = std::time::Instant::now();
    let (n_t, n_r, rho) = (16usize, 24usize, db_to_linear(10.0));
    let mut all = true;
    for (b_bar, trials) in [(0.5, 400u64), (1.0, 250u64)] {
        let b = (b_bar * n_t as f64).round() as u32;
        let sum = beam_gap_mc(301, n_t, n_r, b, rho, trials);
        let asym = beam_gamma(1.5, b_bar).unwrap().ln();
        let dev = (sum.mean - asym).abs();
        all &= report(
            "3 (tall-system rate gap)",
            dev <= 0.15,
            &format!(
                "b_bar={b_bar}: sim {:.4} (se {:.4}, {trials} trials) vs ln(gamma) {asym:.4}, |dev| = {dev:.4} (tol 0.15)",
                sum.mean, sum.stderr
            ),
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!("acceptance 3 runtime: {elapsed:.1}s (< 600s target)");
    assert!(all && elapsed < 600.0);
}

#[test]
fn criterion_04_closed_form_capacity() {
    // quadrature-backed reference value
    let cap = cap_no_feedback(1.0, 10.0).unwrap();
    let ref_ok = (cap - 1.8877).abs() <= 1e-4;
    // Monte Carlo log-det at n = 64
    let policy = SeedPolicy::new(401);
    let vals: Vec<f64> = (0..400u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = policy.child_rng(t, StreamLabel::Channel);
            let h = sample_channel(64, 64, &mut rng);
            gram_eigenvalues(&h, GramSide::Receive)
                .unwrap()
                .iter()
                .map(|l| (1.0 + 10.0 * l).ln())
                .sum::<f64>()
                / 64.0
        })
        .collect();
    let mc = Summary::of(&vals);
    let mc_ok = (mc.mean - cap).abs() <= 0.01 * cap;
    // full-rank identity on a 5-point grid
    let mut iddev = 0.0f64;
    for (nr, rho) in [(0.25, 0.5), (0.5, 1.0), (0.75, 3.0), (1.0, 10.0), (0.9, 0.2)] {
        iddev = iddev.max((mu_j(nr, 1.0, rho).unwrap() - cap_no_feedback(nr, rho).unwrap()).abs());
    }
    let id_ok = iddev <= 1e-9;
    let pass = ref_ok && mc_ok && id_ok;
    report(
        "4 (closed-form capacities)",
        pass,
        &format!(
            "cap(1,10) = {cap:.5} (ref 1.8877 ± 1e-4), log-det MC {:.5} (within 1%), \
             full-rank identity dev {iddev:.2e} (tol 1e-9)",
            mc.mean
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_05_rate_ratio_limits() {
    let high = rate_ratio(1.0, db_to_linear(30.0)).unwrap();
    let high_ok = (high - 1.0).abs() <= 0.1;
    let mut low_ok = true;
    let mut lows = Vec::new();
    for nr in [0.2, 0.5, 1.0] {
        let r = rate_ratio(nr, db_to_linear(-20.0)).unwrap();
        let bound = (1.0 + 1.0 / nr.sqrt()).powi(2);
        low_ok &= r <= bound;
        lows.push(format!("nr_bar={nr}: {r:.3} <= {bound:.3}"));
    }
    let pass = high_ok && low_ok;
    report(
        "5 (rate-ratio limits)",
        pass,
        &format!("30 dB square ratio {high:.4} (within 10% of 1); -20 dB: {}", lows.join(", ")),
    );
    assert!(pass);
}

#[allow(clippy::too_many_arguments)]
fn max_rate_mc(
    seed: u64,
    n_t: usize,
    n_r: usize,
    k: usize,
    b: u32,
    rho: f64,
    metric: SelectionMetric,
    trials: u64,
) -> Summary {
    let policy = SeedPolicy::new(seed);
    let vals: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut ch = policy.child_rng(t, StreamLabel::Channel);
            let h = sample_channel(n_r, n_t, &mut ch);
            let base = t << (b + 1);
            rvq_select_streamed(&policy, base, &h, k, b, rho, metric)
                .unwrap()
                .1
        })
        .collect();
    Summary::of(&vals)
}

#[test]
fn criterion_06_gaussian_approximation_accuracy() {
    let start = std::time::Instant::now();
    let (nr_bar, k_bar) = (0.5, 0.5);
    let (n_t, n_r, k) = (8usize, 4usize, 4usize);
    let mut all = true;
    for rho_db in [-5.0, 0.0, 5.0] {
        let rho = db_to_linear(rho_db);
        let model = if rho_db < 0.0 {
            let (sigma2, _) = sigma_lowsnr(nr_bar, rho).unwrap();
            GaussianRateModel {
                mu: mu_j(nr_bar, k_bar, rho).unwrap(),
                sigma2,
                sigma2_stderr: 0.0,
                receiver: ReceiverKind::Optimal,
                provenance: Provenance::ClosedForm,
            }
        } else {
            estimate_sigma(ReceiverKind::Optimal, nr_bar, k_bar, rho, 64, 4000, 601).unwrap()
        };
        let cap = cap_full_feedback(nr_bar, k_bar, rho).unwrap();
        for b_hat in [0.2, 0.4] {
            let b = (b_hat * (n_r * n_r) as f64).round() as u32;
            let realized = b as f64 / (n_r * n_r) as f64;
            let approx = gaussian_rate(&model, realized, cap).unwrap();
            let sim = max_rate_mc(602, n_t, n_r, k, b, rho, SelectionMetric::Optimal, 1500);
            let rel = (sim.mean - approx).abs() / approx;
            all &= report(
                "6 (gaussian approximation)",
                rel <= 0.05,
                &format!(
                    "rho={rho_db}dB b_hat={realized:.4} (b={b}): sim {:.4} vs approx {approx:.4}, rel dev {:.1}% (tol 5%)",
                    sim.mean,
                    rel * 100.0
                ),
            );
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!("acceptance 6 runtime: {elapsed:.1}s (< 900s target)");
    assert!(all && elapsed < 900.0, "gaussian approximation outside 5%");
}

#[test]
fn criterion_07_rank_optimization() {
    let nr_bar = 0.2;
    let rho = db_to_linear(5.0);
    let k_grid: Vec<f64> = (1..=20).map(|i| 0.05 * i as f64).collect();
    let mut all = true;
    for (b_hat, expect, tol) in [(0.0, 1.0, 1e-9), (0.5, 0.30, 0.05), (2.0, 0.20, 0.05)] {
        let mut best = (0.0, f64::NEG_INFINITY);
        for (ki, &k_bar) in k_grid.iter().enumerate() {
            let cap = cap_full_feedback(nr_bar, k_bar, rho).unwrap();
            let value = if b_hat == 0.0 {
                mu_j(nr_bar, k_bar, rho).unwrap().min(cap)
            } else {
                let model = estimate_sigma(
                    ReceiverKind::Optimal,
                    nr_bar,
                    k_bar,
                    rho,
                    60,
                    4000,
                    701 + ki as u64,
                )
                .unwrap();
                gaussian_rate(&model, b_hat, cap).unwrap()
            };
            if value > best.1 {
                best = (k_bar, value);
            }
        }
        let dev = (best.0 - expect).abs();
        all &= report(
            "7 (rank optimization)",
            dev <= tol + 5e-3,
            &format!(
                "b_hat={b_hat}: argmax k_bar = {:.2} (rate {:.4}), expected {expect} ± {tol}",
                best.0, best.1
            ),
        );
    }
    assert!(all);
}

#[test]
fn criterion_08_linear_receiver_feedback_demands() {
    let start = std::time::Instant::now();
    let (nr_bar, k_bar) = (0.75, 0.5);
    let (n_t, n_r, k) = (12usize, 9usize, 6usize);
    let rho = db_to_linear(5.0);
    let cap = cap_full_feedback(nr_bar, k_bar, rho).unwrap();
    let crossing = |model: &GaussianRateModel| -> f64 {
        ((cap - model.mu) / model.sigma2.sqrt()).powi(2) / (2.0 * LN2)
    };
    let m_mf = estimate_sigma(ReceiverKind::MatchedFilter, nr_bar, k_bar, rho, 64, 4000, 801).unwrap();
    let m_mmse = estimate_sigma(ReceiverKind::Mmse, nr_bar, k_bar, rho, 64, 4000, 801).unwrap();
    let m_opt = estimate_sigma(ReceiverKind::Optimal, nr_bar, k_bar, rho, 64, 4000, 801).unwrap();
    let (x_mf, x_mmse, x_opt) = (crossing(&m_mf), crossing(&m_mmse), crossing(&m_opt));
    let mut all = report(
        "8 (feedback to reach capacity, matched filter)",
        (x_mf - 1.2).abs() <= 0.2,
        &format!("crossing b_hat = {x_mf:.3}, expected 1.2 ± 0.2 (mu {:.4}, sigma2 {:.4})", m_mf.mu, m_mf.sigma2),
    );
    all &= report(
        "8 (feedback to reach capacity, optimal)",
        (x_opt - 0.6).abs() <= 0.2,
        &format!("crossing b_hat = {x_opt:.3}, expected 0.6 ± 0.2"),
    );
    all &= report(
        "8 (mmse crossing strictly between)",
        x_opt < x_mmse && x_mmse < x_mf,
        &format!("{x_opt:.3} < {x_mmse:.3} < {x_mf:.3}"),
    );
    for (metric, model, name) in [
        (SelectionMetric::MatchedFilter, &m_mf, "mf"),
        (SelectionMetric::Mmse, &m_mmse, "mmse"),
    ] {
        for (b, trials) in [(0u32, 2000u64), (8, 400), (16, 120)] {
            let realized = b as f64 / (n_r * n_r) as f64;
            let sim = max_rate_mc(802, n_t, n_r, k, b, rho, metric, trials);
            let approx = gaussian_rate(model, realized, cap).unwrap();
            let rel = (sim.mean - approx).abs() / approx;
            all &= report(
                "8 (simulated points near approximation)",
                rel <= 0.05,
                &format!(
                    "{name} b_hat={realized:.4}: sim {:.4} vs approx {approx:.4}, rel dev {:.1}% (tol 5%)",
                    sim.mean,
                    rel * 100.0
                ),
            );
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!("acceptance 8 runtime: {elapsed:.1}s");
    assert!(all, "at least one linear-receiver sub-check failed");
}

#[test]
fn criterion_09_property_suites() {
    let mut all = true;

    // unitarity/norm invariants on 10^4 draws
    let policy = SeedPolicy::new(901);
    let mut rng = policy.child_rng(0, StreamLabel::Codebook);
    let mut worst: f64 = 0.0;
    for i in 0..10_000 {
        if i % 10 == 0 {
            let v = sample_semi_unitary(6, 2, &mut rng).unwrap();
            let gram = v.matrix().adjoint() * v.matrix();
            for a in 0..2 {
                for b in 0..2 {
                    let t = if a == b { 1.0 } else { 0.0 };
                    worst = worst.max((gram[(a, b)] - Complex64::new(t, 0.0)).norm());
                }
            }
        } else {
            let v = sample_isotropic_unit_vector(6, &mut rng);
            worst = worst.max((v.norm() - 1.0).abs());
        }
    }
    all &= report(
        "9 (unitarity/norm invariants)",
        worst < 1e-11,
        &format!("max deviation {worst:.2e} over 10^4 draws"),
    );

    // projection cdf at n_t in {2, 4, 8}
    for n_t in [2usize, 4, 8] {
        let mut rng = policy.child_rng(n_t as u64, StreamLabel::Projection);
        let mut fixed = DVector::zeros(n_t);
        fixed[0] = Complex64::new(1.0, 0.0);
        let xs: Vec<f64> = (0..10_000)
            .map(|_| {
                let v = sample_isotropic_unit_vector(n_t, &mut rng);
                fixed.dotc(&v).norm_sqr()
            })
            .collect();
        let p = ks_test(&xs, |y: f64| {
            1.0 - (1.0 - y.clamp(0.0, 1.0)).powi(n_t as i32 - 1)
        });
        all &= report(
            "9 (projection law)",
            p > 0.01,
            &format!("n_t = {n_t}: KS p = {p:.3}"),
        );
    }

    // receiver orderings on 10^3 random instances
    let mut ordering_ok = true;
    for t in 0..1000u64 {
        let mut r = policy.child_rng(t, StreamLabel::Channel);
        let h = sample_channel(4, 6, &mut r);
        let v = sample_semi_unitary(6, 3, &mut r).unwrap();
        let rho = 3.0;
        let mf = linear_sinr(&h, v.matrix(), 1.0 / rho, FilterKind::MatchedFilter).unwrap();
        let mm = linear_sinr(&h, v.matrix(), 1.0 / rho, FilterKind::Mmse).unwrap();
        ordering_ok &= mm
            .per_stream
            .iter()
            .zip(&mf.per_stream)
            .all(|(a, b)| a >= b);
        let lin = sum_rate(&mm, 4).nats();
        let opt = mutual_info_optimal(&h, v.matrix(), rho).unwrap().nats();
        ordering_ok &= lin <= opt + 1e-10;
    }
    all &= report(
        "9 (receiver orderings)",
        ordering_ok,
        "mmse >= mf per stream and linear sum rate <= optimal on 10^3 instances",
    );

    // water-filling dominance on 10^3 random spectra
    let mut wf_ok = true;
    for t in 0..1000u64 {
        let mut r = policy.child_rng(t, StreamLabel::Aux(2));
        let h = sample_channel(4, 4, &mut r);
        let eig = gram_eigenvalues(&h, GramSide::Receive).unwrap();
        let rho = 2.0;
        let wf = water_filling(&eig, rho).unwrap().capacity.nats();
        for k in 1..=4usize {
            let mut cap = 0.0;
            for &l in eig.iter().take(k) {
                cap += (1.0 + rho * l / k as f64).ln();
            }
            wf_ok &= wf >= cap / 4.0 - 1e-12;
        }
    }
    all &= report("9 (water-filling dominance)", wf_ok, "10^3 random spectra");

    // nested-codebook monotonicity on 10^2 instances
    let mut nest_ok = true;
    for t in 0..100u64 {
        let mut r = policy.child_rng(t, StreamLabel::Aux(3));
        let h = sample_channel(2, 4, &mut r);
        let small = generate_rvq_codebook(4, 1, 3, &mut r, t).unwrap();
        let mut large = small.clone();
        for _ in 0..8 {
            large.push(sample_semi_unitary(4, 1, &mut r).unwrap());
        }
        let a = select_entry(&h, &small, 1.0, SelectionMetric::Optimal).unwrap();
        let b = select_entry(&h, &large, 1.0, SelectionMetric::Optimal).unwrap();
        nest_ok &= b.metric_value >= a.metric_value;
    }
    all &= report("9 (nested-codebook monotonicity)", nest_ok, "10^2 instances");

    // reproducibility: byte-identical reruns, thread-count independence
    all &= report(
        "9 (reproducibility)",
        reproducibility_check().unwrap(),
        "byte-identical CSV reruns; 1-thread and default pools agree",
    );

    assert!(all);
}

fn reproducibility_check() -> Result<bool> {
    let config = ExperimentConfig {
        preset: Preset::Custom,
        custom: Some(CustomConfig {
            n_t: 4,
            n_r: 2,
            k: 2,
            rho_db: 5.0,
            b_grid: vec![0, 2, 4],
            metric: SelectionMetric::Optimal,
        }),
        trials: Some(50),
        master_seed: 99,
        bits: false,
    };
    let r1 = run_experiment(&config)?;
    let r2 = run_experiment(&config)?;
    let base = std::env::temp_dir().join(format!("rvqcap_accept_{}", std::process::id()));
    let d1 = base.join("a");
    let d2 = base.join("b");
    let p1 = write_outputs(&d1, &config, &r1)?;
    let p2 = write_outputs(&d2, &config, &r2)?;
    let mut ok = true;
    for (a, b) in p1.csv.iter().zip(&p2.csv) {
        ok &= std::fs::read(a)? == std::fs::read(b)?;
    }
    // JSON identical modulo the timestamp metadata field
    let mut j1: serde_json::Value = serde_json::from_slice(&std::fs::read(&p1.json)?)?;
    let mut j2: serde_json::Value = serde_json::from_slice(&std::fs::read(&p2.json)?)?;
    j1["metadata"]["timestamp_unix"] = 0.into();
    j2["metadata"]["timestamp_unix"] = 0.into();
    ok &= j1 == j2;
    std::fs::remove_dir_all(&base).ok();
    // thread-count independence
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("pool")
        .install(|| run_experiment(&config))?;
    for (sa, sb) in r1.series.iter().zip(&single.series) {
        for (ra, rb) in sa.rows.iter().zip(&sb.rows) {
            ok &= ra == rb;
        }
    }
    Ok(ok)
}

#[test]
fn criterion_10_trained_codebook_parity() {
    let (n_t, b) = (4usize, 4u32);
    let policy = SeedPolicy::new(1001);
    let training: Vec<ChannelMatrix> = (0..10_000u64)
        .map(|t| {
            let mut r = policy.child_rng(t, StreamLabel::Training);
            sample_channel(1, n_t, &mut r)
        })
        .collect();
    let mut lrng = policy.child_rng(0, StreamLabel::Codebook);
    let trained = lloyd_train(&training, n_t, b, 40, 1e-7, &mut lrng, 1001).unwrap();

    // independent evaluation set
    let eval: Vec<DVector<Complex64>> = (0..10_000u64)
        .map(|t| {
            let mut r = policy.child_rng(t, StreamLabel::Aux(4));
            let h = sample_channel(1, n_t, &mut r);
            DVector::from_fn(n_t, |i, _| h.matrix()[(0, i)])
        })
        .collect();
    let mean_proj = |book: &rvqcap::quantizer::PrecoderCodebook| -> f64 {
        let total: f64 = eval
            .par_iter()
            .map(|h| {
                let p = h.norm_squared();
                book.entries()
                    .iter()
                    .map(|v| h.dotc(&v.column_vector()).norm_sqr() / p)
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .sum();
        total / eval.len() as f64
    };
    let lloyd_val = mean_proj(&trained.codebook);
    let mut rvq_vals = Vec::new();
    for i in 0..20u64 {
        let mut r = policy.child_rng(i, StreamLabel::Aux(5));
        let book = generate_rvq_codebook(n_t, 1, b, &mut r, i).unwrap();
        rvq_vals.push(mean_proj(&book));
    }
    let rvq_avg = rvqcap::stats::mean(&rvq_vals);
    let rel = (lloyd_val / rvq_avg - 1.0).abs();
    let pass = report(
        "10 (trained-codebook parity)",
        rel <= 0.02,
        &format!(
            "trained mean projection {lloyd_val:.4} vs random-codebook average {rvq_avg:.4}, \
             rel diff {:.1}% (tol 2%)",
            rel * 100.0
        ),
    );
    assert!(pass, "trained codebook outside the 2% parity band");
}

/// fig5 compare rule exercised end-to-end (tolerance pinned in the harness).
#[test]
fn compare_gate_runs_on_gaussian_preset() {
    let mut config = ExperimentConfig::preset(Preset::Fig5, 42);
    config.trials = Some(400);
    let result = run_experiment(&config).unwrap();
    let reportx = compare(Preset::Fig5, &result);
    let checked = reportx.rows.iter().filter(|r| r.pass.is_some()).count();
    println!(
        "fig5 compare: {} toleranced rows, passed = {}",
        checked, reportx.passed
    );
    assert!(checked > 0, "compare must tolerate-check low-feedback rows");
}
