//! Scalar numerics: bracketed root finding, adaptive quadrature, golden-section
//! search, and order-independent summation.

use crate::{Error, Result};

/// Bracketed bisection for a continuous function with `f(lo)` and `f(hi)` of
/// opposite sign (or zero). Converges unconditionally; tolerance is on the
/// unknown.
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::InvalidArgument(format!(
            "bad bracket [{lo}, {hi}]"
        )));
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::SolverFailure(format!(
            "no sign change on [{a}, {b}]: f(a)={fa}, f(b)={fb}"
        )));
    }
    // 200 halvings take any finite bracket below f64 resolution.
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if b - a <= tol || mid == a || mid == b {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Adaptive Simpson quadrature on `[a, b]` with an absolute tolerance.
///
/// Cells that still disagree after full refinement contribute their
/// Richardson-extrapolated value plus a residual estimate; the call fails
/// only if the summed residual exceeds the requested tolerance. This keeps
/// integrable endpoint weirdness (logarithmic softening, square-root edges)
/// from aborting the whole integral.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidArgument(format!(
            "bad integration range [{a}, {b}]"
        )));
    }
    let fa = f(a);
    let fm = f(0.5 * (a + b));
    let fb = f(b);
    let whole = simpson(a, b, fa, fm, fb);
    let mut acc = Accum::default();
    adaptive(&f, a, b, fa, fm, fb, whole, tol, 52, &mut acc);
    if acc.residual > tol {
        return Err(Error::QuadratureFailure);
    }
    Ok(acc.value)
}

#[derive(Default)]
struct Accum {
    value: f64,
    residual: f64,
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    acc: &mut Accum,
) {
    let m = 0.5 * (a + b);
    let lm = f(0.5 * (a + m));
    let rm = f(0.5 * (m + b));
    let left = simpson(a, m, fa, lm, fm);
    let right = simpson(m, b, fm, rm, fb);
    let err = left + right - whole;
    if err.abs() <= 15.0 * tol || depth == 0 || m == a || m == b {
        acc.value += left + right + err / 15.0;
        if err.abs() > 15.0 * tol {
            acc.residual += err.abs() / 15.0;
        }
        return;
    }
    adaptive(f, a, m, fa, lm, fm, left, 0.5 * tol, depth - 1, acc);
    adaptive(f, m, b, fm, rm, fb, right, 0.5 * tol, depth - 1, acc);
}

/// Golden-section maximization of a unimodal function on `[lo, hi]`.
/// Returns `(argmax, max)`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = lo;
    let mut b = hi;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Pairwise (cascade) summation: order-independent for a fixed slice order and
/// far more accurate than a running sum on long Monte Carlo arrays.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// Two-pass mean and unbiased sample variance with pairwise accumulation.
pub fn mean_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = pairwise_sum(xs) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let sq: Vec<f64> = xs.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n - 1) as f64;
    (mean, var)
}
