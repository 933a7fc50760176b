//! Sample statistics: histograms, Kolmogorov–Smirnov tests, and summary
//! accumulators used by the Monte Carlo harness and the test suites.

use serde::{Deserialize, Serialize};

use crate::numeric::{mean_variance, pairwise_sum};

/// Fixed-width histogram over `[lo, hi]`. Samples outside the range are
/// clamped into the edge bins.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Self {
        assert!(bins > 0 && hi > lo);
        Histogram {
            lo,
            hi,
            counts: vec![0; bins],
        }
    }

    pub fn add(&mut self, x: f64) {
        let bins = self.counts.len();
        let t = (x - self.lo) / (self.hi - self.lo);
        let idx = ((t * bins as f64) as isize).clamp(0, bins as isize - 1) as usize;
        self.counts[idx] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Bin centers paired with density values (normalized so the histogram
    /// integrates to one).
    pub fn density(&self) -> Vec<(f64, f64)> {
        let n = self.total().max(1) as f64;
        let w = (self.hi - self.lo) / self.counts.len() as f64;
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (self.lo + (i as f64 + 0.5) * w, c as f64 / (n * w)))
            .collect()
    }
}

/// Mean, standard error and count for one Monte Carlo cell.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub variance: f64,
    pub stderr: f64,
    pub n: usize,
}

impl Summary {
    /// Summarize a slice with pairwise accumulation (deterministic for a
    /// fixed sample order).
    pub fn of(xs: &[f64]) -> Self {
        let (mean, variance) = mean_variance(xs);
        let stderr = if xs.len() > 1 {
            (variance / xs.len() as f64).sqrt()
        } else {
            f64::NAN
        };
        Summary {
            mean,
            variance,
            stderr,
            n: xs.len(),
        }
    }
}

/// One-sample Kolmogorov–Smirnov statistic against a reference cdf.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("NaN sample in KS test"));
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x).clamp(0.0, 1.0);
        let lo = i as f64 / n;
        let hi = (i as f64 + 1.0) / n;
        d = d.max((f - lo).abs()).max((hi - f).abs());
    }
    d
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_statistic_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|p, q| p.partial_cmp(q).expect("NaN sample in KS test"));
    ys.sort_by(|p, q| p.partial_cmp(q).expect("NaN sample in KS test"));
    let (na, nb) = (xs.len(), ys.len());
    let mut i = 0;
    let mut j = 0;
    let mut d: f64 = 0.0;
    while i < na && j < nb {
        let x = xs[i].min(ys[j]);
        while i < na && xs[i] <= x {
            i += 1;
        }
        while j < nb && ys[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na as f64 - j as f64 / nb as f64).abs());
    }
    d
}

/// Asymptotic Kolmogorov p-value `P(D_n > d)` for effective sample size `n`.
pub fn ks_p_value(d: f64, n: f64) -> f64 {
    let t = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
    if t < 1e-3 {
        return 1.0;
    }
    let mut p = 0.0;
    for k in 1..=100 {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * (-2.0 * (k as f64) * (k as f64) * t * t).exp();
        p += term;
        if term.abs() < 1e-12 {
            break;
        }
    }
    (2.0 * p).clamp(0.0, 1.0)
}

/// One-sample KS p-value against a reference cdf.
pub fn ks_test<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    ks_p_value(ks_statistic(samples, cdf), samples.len() as f64)
}

/// Two-sample KS p-value.
pub fn ks_test_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let ne = (a.len() * b.len()) as f64 / (a.len() + b.len()) as f64;
    ks_p_value(ks_statistic_two_sample(a, b), ne)
}

/// Sample mean via pairwise summation.
pub fn mean(xs: &[f64]) -> f64 {
    pairwise_sum(xs) / xs.len().max(1) as f64
}
