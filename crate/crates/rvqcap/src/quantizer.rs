//! Precoder codebooks and entry selection.
//!
//! A codebook holds `2^b` candidate semi-unitary precoders shared by
//! transmitter and receiver; the receiver evaluates all of them against the
//! current channel and feeds back the best index. Codebooks come from three
//! constructions: independent random (Haar) entries, generalized Lloyd
//! training on sample channels, and per-coefficient scalar quantization of a
//! given precoder.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::randmat::{sample_semi_unitary, ChannelMatrix, SemiUnitaryMatrix};
use crate::receivers::{linear_sinr, mutual_info_optimal, sum_rate, FilterKind};
use crate::stats::Histogram;
use crate::{Error, Result};

/// Hard cap on codebook exponents; `2^26` entries is already ~anything a
/// desk-scale sweep can evaluate exhaustively.
pub const DEFAULT_B_GUARD: u32 = 26;

/// How a codebook was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CodebookOrigin {
    Rvq,
    Lloyd,
    Scalar,
}

/// An ordered set of `2^b` candidate precoders.
#[derive(Debug, Clone)]
pub struct PrecoderCodebook {
    entries: Vec<SemiUnitaryMatrix>,
    pub origin: CodebookOrigin,
    pub seed: u64,
    pub b: u32,
}

impl PrecoderCodebook {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[SemiUnitaryMatrix] {
        &self.entries
    }

    pub fn entry(&self, idx: usize) -> &SemiUnitaryMatrix {
        &self.entries[idx]
    }

    pub fn n_t(&self) -> usize {
        self.entries[0].n_t()
    }

    pub fn k(&self) -> usize {
        self.entries[0].k()
    }

    fn from_entries(
        entries: Vec<SemiUnitaryMatrix>,
        origin: CodebookOrigin,
        seed: u64,
        b: u32,
    ) -> Self {
        debug_assert_eq!(entries.len(), 1usize << b);
        PrecoderCodebook {
            entries,
            origin,
            seed,
            b,
        }
    }

    /// Extend with additional independent entries (diagnostics; breaks the
    /// power-of-two length, so the result is not a `2^b` codebook).
    pub fn push(&mut self, entry: SemiUnitaryMatrix) {
        self.entries.push(entry);
    }

    /// Swap out one entry (tests and codebook surgery).
    pub fn replace_entry(&mut self, idx: usize, entry: SemiUnitaryMatrix) {
        self.entries[idx] = entry;
    }

    /// Serializable snapshot: entries as row-major interleaved re/im arrays.
    pub fn to_serialized(&self) -> SerializedCodebook {
        SerializedCodebook {
            n_t: self.n_t(),
            k: self.k(),
            b: self.b,
            origin: self.origin,
            seed: self.seed,
            entries: self
                .entries
                .iter()
                .map(|e| {
                    let m = e.matrix();
                    let mut flat = Vec::with_capacity(2 * m.len());
                    for i in 0..m.nrows() {
                        for j in 0..m.ncols() {
                            flat.push(m[(i, j)].re);
                            flat.push(m[(i, j)].im);
                        }
                    }
                    flat
                })
                .collect(),
        }
    }

    pub fn from_serialized(s: &SerializedCodebook) -> Result<Self> {
        if s.entries.len() != 1usize << s.b {
            return Err(Error::InvalidArgument(format!(
                "serialized codebook claims b={} but holds {} entries",
                s.b,
                s.entries.len()
            )));
        }
        let entries = s
            .entries
            .iter()
            .map(|flat| {
                if flat.len() != 2 * s.n_t * s.k {
                    return Err(Error::InvalidArgument("entry size mismatch".into()));
                }
                let m = DMatrix::from_fn(s.n_t, s.k, |i, j| {
                    let base = 2 * (i * s.k + j);
                    Complex64::new(flat[base], flat[base + 1])
                });
                SemiUnitaryMatrix::try_new(m)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PrecoderCodebook::from_entries(entries, s.origin, s.seed, s.b))
    }
}

/// On-disk codebook form: row-major interleaved re/im coefficient arrays
/// plus the generation provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SerializedCodebook {
    pub n_t: usize,
    pub k: usize,
    pub b: u32,
    pub origin: CodebookOrigin,
    pub seed: u64,
    pub entries: Vec<Vec<f64>>,
}

/// Generate a random codebook of `2^b` independent Haar entries.
pub fn generate_rvq_codebook<R: rand::Rng + ?Sized>(
    n_t: usize,
    k: usize,
    b: u32,
    rng: &mut R,
    seed_tag: u64,
) -> Result<PrecoderCodebook> {
    generate_rvq_codebook_guarded(n_t, k, b, rng, seed_tag, DEFAULT_B_GUARD)
}

/// As [`generate_rvq_codebook`] with an explicit capacity guard.
pub fn generate_rvq_codebook_guarded<R: rand::Rng + ?Sized>(
    n_t: usize,
    k: usize,
    b: u32,
    rng: &mut R,
    seed_tag: u64,
    guard: u32,
) -> Result<PrecoderCodebook> {
    if b > guard {
        return Err(Error::CapacityExceeded {
            requested: b,
            guard,
        });
    }
    let entries = (0..1usize << b)
        .map(|_| sample_semi_unitary(n_t, k, rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(PrecoderCodebook::from_entries(
        entries,
        CodebookOrigin::Rvq,
        seed_tag,
        b,
    ))
}

/// Selection metric. All metrics are exhaustively evaluated; no shortcut may
/// change the argmax.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SelectionMetric {
    /// `(1/n_r) ln det(I + (rho/k) H V V^H H^H)`.
    Optimal,
    /// Matched-filter per-stream sum rate.
    MatchedFilter,
    /// MMSE per-stream sum rate.
    Mmse,
    /// `||H v||^2 / n_t` (rank-one codebooks only; SNR-free).
    BeamPower,
}

/// Outcome of a codebook selection.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult {
    pub index: usize,
    pub metric_value: f64,
    /// Retained only by [`select_entry_detailed`].
    pub per_entry_metrics: Option<Vec<f64>>,
}

fn entry_metric(
    h: &ChannelMatrix,
    v: &SemiUnitaryMatrix,
    rho: f64,
    metric: SelectionMetric,
) -> Result<f64> {
    match metric {
        SelectionMetric::Optimal => Ok(mutual_info_optimal(h, v.matrix(), rho)?.nats()),
        SelectionMetric::MatchedFilter => {
            let s = linear_sinr(h, v.matrix(), 1.0 / rho, FilterKind::MatchedFilter)?;
            Ok(sum_rate(&s, h.n_r()).nats())
        }
        SelectionMetric::Mmse => {
            let s = linear_sinr(h, v.matrix(), 1.0 / rho, FilterKind::Mmse)?;
            Ok(sum_rate(&s, h.n_r()).nats())
        }
        SelectionMetric::BeamPower => {
            let hv = h.matrix() * v.matrix();
            Ok(hv.column(0).norm_squared() / h.n_t() as f64)
        }
    }
}

/// Exhaustively evaluate every codebook entry and return the argmax.
///
/// Ties break toward the lowest index. Entries are scored in parallel; the
/// reduction keys on (value, index), so the winner is identical to a
/// sequential scan regardless of thread count.
pub fn select_entry(
    h: &ChannelMatrix,
    codebook: &PrecoderCodebook,
    rho: f64,
    metric: SelectionMetric,
) -> Result<SelectionResult> {
    select_inner(h, codebook, rho, metric, false)
}

/// As [`select_entry`], retaining the full per-entry metric vector.
pub fn select_entry_detailed(
    h: &ChannelMatrix,
    codebook: &PrecoderCodebook,
    rho: f64,
    metric: SelectionMetric,
) -> Result<SelectionResult> {
    select_inner(h, codebook, rho, metric, true)
}

fn select_inner(
    h: &ChannelMatrix,
    codebook: &PrecoderCodebook,
    rho: f64,
    metric: SelectionMetric,
    keep: bool,
) -> Result<SelectionResult> {
    if codebook.is_empty() {
        return Err(Error::InvalidArgument("empty codebook".into()));
    }
    if codebook.n_t() != h.n_t() {
        return Err(Error::InvalidDimensions(format!(
            "codebook entries are {}x{} but the channel has n_t = {}",
            codebook.n_t(),
            codebook.k(),
            h.n_t()
        )));
    }
    if metric != SelectionMetric::BeamPower && !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "rho must be positive, got {rho}"
        )));
    }
    if metric == SelectionMetric::BeamPower && codebook.k() != 1 {
        return Err(Error::InvalidArgument(
            "beam-power selection needs a rank-one codebook".into(),
        ));
    }
    let scores = codebook
        .entries
        .par_iter()
        .map(|v| entry_metric(h, v, rho, metric))
        .collect::<Result<Vec<f64>>>()?;
    let (index, metric_value) = scores
        .iter()
        .copied()
        .enumerate()
        .fold((usize::MAX, f64::NEG_INFINITY), |(bi, bv), (i, v)| {
            if v > bv || (v == bv && i < bi) {
                (i, v)
            } else {
                (bi, bv)
            }
        });
    Ok(SelectionResult {
        index,
        metric_value,
        per_entry_metrics: keep.then_some(scores),
    })
}

/// Result of generalized Lloyd training.
#[derive(Debug, Clone)]
pub struct LloydOutcome {
    pub codebook: PrecoderCodebook,
    /// Mean selected normalized projection after each update; non-decreasing.
    pub objective_trace: Vec<f64>,
}

/// Train a rank-one codebook on sample channels by generalized Lloyd
/// iteration: assign each channel to the codeword with the largest
/// beam gain `v^H (H^H H) v`, then replace each codeword by the principal
/// eigenvector of its cell's average `H^H H`. Empty cells are reseeded by
/// splitting the most populated cell at its worst-served member. Both steps
/// are non-decreasing in the objective, so the trace is monotone.
///
/// Stops after `max_iters` updates or when the objective improves by less
/// than `tol`. Requires at least `2^(b+2)` training channels.
#[allow(clippy::too_many_arguments)]
pub fn lloyd_train<R: rand::Rng + ?Sized>(
    training: &[ChannelMatrix],
    n_t: usize,
    b: u32,
    max_iters: usize,
    tol: f64,
    rng: &mut R,
    seed_tag: u64,
) -> Result<LloydOutcome> {
    let size = 1usize << b;
    let needed = size << 2;
    if training.len() < needed {
        return Err(Error::InsufficientTraining {
            needed,
            got: training.len(),
        });
    }
    if max_iters == 0 {
        return Err(Error::InvalidArgument("max_iters must be at least 1".into()));
    }
    for h in training {
        if h.n_t() != n_t {
            return Err(Error::InvalidDimensions(format!(
                "training channel has n_t = {}, expected {n_t}",
                h.n_t()
            )));
        }
    }
    // Power-normalized per-sample Gram matrices: dividing each H^H H by its
    // trace makes the trained objective the mean selected projection itself,
    // so the descent property holds for the reported trace (the assignment
    // argmax is unchanged by per-sample scaling).
    let grams: Vec<DMatrix<Complex64>> = training
        .iter()
        .map(|h| {
            let g = h.matrix().adjoint() * h.matrix();
            let p = g.trace().re;
            if p > 0.0 {
                g / Complex64::new(p, 0.0)
            } else {
                g
            }
        })
        .collect();

    let mut codebook = generate_rvq_codebook(n_t, 1, b, rng, seed_tag)?;
    let mut objective_trace = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for _ in 0..max_iters {
        // assignment step
        let (assign, gains): (Vec<usize>, Vec<f64>) = grams
            .par_iter()
            .map(|g| {
                let mut best = (0usize, f64::NEG_INFINITY);
                for (j, v) in codebook.entries.iter().enumerate() {
                    let col = v.matrix().column(0);
                    let gain = (col.adjoint() * g * col)[(0, 0)].re;
                    if gain > best.1 {
                        best = (j, gain);
                    }
                }
                best
            })
            .unzip();
        // centroid step: principal eigenvector of the cell average of H^H H
        let mut cells: Vec<Vec<usize>> = vec![Vec::new(); size];
        for (s, &j) in assign.iter().enumerate() {
            cells[j].push(s);
        }
        let mut new_entries = codebook.entries.clone();
        for (j, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                continue;
            }
            let mut avg = DMatrix::<Complex64>::zeros(n_t, n_t);
            for &s in cell {
                avg += &grams[s];
            }
            avg /= Complex64::new(cell.len() as f64, 0.0);
            new_entries[j] = principal_eigenvector(&avg)?;
        }
        // reseed empty cells from the most populated one
        let empty: Vec<usize> = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_empty())
            .map(|(j, _)| j)
            .collect();
        for j in empty {
            let (big, _) = cells
                .iter()
                .enumerate()
                .max_by_key(|(_, c)| c.len())
                .expect("nonempty codebook");
            let worst = cells[big]
                .iter()
                .copied()
                .min_by(|&a, &b| gains[a].partial_cmp(&gains[b]).unwrap())
                .expect("populated cell");
            // normalized strongest direction of the worst-served member
            new_entries[j] = principal_eigenvector(&grams[worst])?;
        }
        codebook.entries = new_entries;
        codebook.origin = CodebookOrigin::Lloyd;
        // objective after the update
        let obj: f64 = grams
            .par_iter()
            .map(|g| {
                let mut best = f64::NEG_INFINITY;
                for v in &codebook.entries {
                    let col = v.matrix().column(0);
                    let gain = (col.adjoint() * g * col)[(0, 0)].re;
                    best = best.max(gain);
                }
                best
            })
            .sum::<f64>()
            / grams.len() as f64;
        objective_trace.push(obj);
        if obj - last < tol && last.is_finite() {
            break;
        }
        last = obj;
    }
    Ok(LloydOutcome {
        codebook,
        objective_trace,
    })
}

fn principal_eigenvector(m: &DMatrix<Complex64>) -> Result<SemiUnitaryMatrix> {
    let eig = m
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or_else(|| Error::SolverFailure("eigendecomposition failed".into()))?;
    let mut best = 0;
    for i in 1..eig.eigenvalues.len() {
        if eig.eigenvalues[i] > eig.eigenvalues[best] {
            best = i;
        }
    }
    let col = eig.eigenvectors.column(best);
    let norm = col.norm();
    let v = DMatrix::from_fn(m.nrows(), 1, |i, _| col[i] / Complex64::new(norm, 0.0));
    SemiUnitaryMatrix::try_new(v)
}

/// How the scalar quantizer spent its bit budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarQuantizerMeta {
    pub bits_total: u32,
    /// Coefficients actually quantized (the rest are set to one).
    pub coeffs_quantized: usize,
    /// Fraction of coefficients covered by the budget.
    pub fraction: f64,
    pub bits_re: u32,
    pub bits_im: u32,
    /// Per-axis clipping range of the uniform quantizer.
    pub clip: (f64, f64),
    /// Column norms before renormalization.
    pub column_norms: Vec<f64>,
}

/// A scalar-quantized precoder with its reconstruction metadata.
#[derive(Debug, Clone)]
pub struct ScalarQuantizedPrecoder {
    pub matrix: DMatrix<Complex64>,
    pub meta: ScalarQuantizerMeta,
}

/// Quantize each precoder coefficient independently with uniform mid-rise
/// quantizers on the real and imaginary axes over `[-1, 1]`.
///
/// The bit budget is spread evenly: with fewer than two bits per coefficient
/// available, the first `floor(b/2)` coefficients (column-major) get one bit
/// per axis and the remaining coefficients are set to one; with
/// `b >= 2 n_t k`, every coefficient gets `floor(b/(n_t k))` bits, split
/// evenly between the axes (real axis takes the odd bit). Columns are
/// renormalized to unit norm afterwards to respect the power constraint.
pub fn scalar_quantize_precoder(v: &SemiUnitaryMatrix, b: u32) -> ScalarQuantizedPrecoder {
    let (n_t, k) = (v.n_t(), v.k());
    let n_coeff = n_t * k;
    let (covered, bits_re, bits_im) = if (b as usize) >= 2 * n_coeff {
        let per = b / n_coeff as u32;
        (n_coeff, per - per / 2, per / 2)
    } else {
        ((b / 2) as usize, 1, 1)
    };
    let mut m = DMatrix::from_element(n_t, k, Complex64::new(1.0, 0.0));
    let mut idx = 0usize;
    'outer: for j in 0..k {
        for i in 0..n_t {
            if idx >= covered {
                break 'outer;
            }
            let z = v.matrix()[(i, j)];
            m[(i, j)] = Complex64::new(
                quantize_axis(z.re, bits_re),
                quantize_axis(z.im, bits_im),
            );
            idx += 1;
        }
    }
    let mut column_norms = Vec::with_capacity(k);
    for j in 0..k {
        let norm = m.column(j).norm();
        column_norms.push(norm);
        if norm > 0.0 {
            for i in 0..n_t {
                m[(i, j)] /= Complex64::new(norm, 0.0);
            }
        }
    }
    ScalarQuantizedPrecoder {
        matrix: m,
        meta: ScalarQuantizerMeta {
            bits_total: b,
            coeffs_quantized: covered,
            fraction: covered as f64 / n_coeff as f64,
            bits_re,
            bits_im,
            clip: (-1.0, 1.0),
            column_norms,
        },
    }
}

fn quantize_axis(x: f64, bits: u32) -> f64 {
    let levels = 1u64 << bits;
    let step = 2.0 / levels as f64;
    let cell = (((x + 1.0) / step) as i64).clamp(0, levels as i64 - 1);
    -1.0 + (cell as f64 + 0.5) * step
}

/// Empirical law of the best normalized beam projection
/// `max_j |h^H v_j|^2 / ||h||^2` over a random rank-one codebook.
#[derive(Debug, Clone)]
pub struct ProjectionStats {
    pub samples: Vec<f64>,
    pub histogram: Histogram,
    pub mean: f64,
    pub variance: f64,
    /// Feedback bits actually used: `round(b_bar * n_t)`.
    pub b_used: u32,
}

/// Sample the selected-projection law by inverse-cdf order statistics.
///
/// For an isotropic codebook the normalized projection of one entry has cdf
/// `F(y) = 1 - (1-y)^(n_t - 1)` independently of the channel, so the best of
/// `2^b` entries can be drawn exactly as `F^{-1}(U^(2^-b))` without
/// materializing the codebook. This is what makes large `b` (and the large
/// `n_t` sweeps) tractable; agreement with direct codebook simulation is
/// covered by a two-sample test.
pub fn projection_stats<R: rand::Rng + ?Sized>(
    n_t: usize,
    b_bar: f64,
    trials: usize,
    rng: &mut R,
    bins: usize,
) -> Result<ProjectionStats> {
    if n_t < 2 {
        return Err(Error::InvalidDimensions(
            "projection law needs n_t >= 2".into(),
        ));
    }
    if b_bar.is_nan() || b_bar < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "b_bar must be non-negative, got {b_bar}"
        )));
    }
    let b_used = (b_bar * n_t as f64).round() as u32;
    let exponent = 1.0 / (n_t as f64 - 1.0);
    let scale = 2f64.powi(-(b_used as i32));
    let mut samples = Vec::with_capacity(trials);
    let mut histogram = Histogram::new(0.0, 1.0, bins);
    for _ in 0..trials {
        let u: f64 = rng.random();
        // y = 1 - (1 - u^(2^-b))^(1/(n_t-1)), evaluated via logs to survive
        // the u^(2^-b) -> 1 regime at large b.
        let t = scale * u.ln();
        let one_minus = -t.exp_m1(); // 1 - u^(2^-b)
        let y = 1.0 - one_minus.powf(exponent);
        let y = y.clamp(0.0, 1.0);
        samples.push(y);
        histogram.add(y);
    }
    let (mean, variance) = crate::numeric::mean_variance(&samples);
    Ok(ProjectionStats {
        samples,
        histogram,
        mean,
        variance,
        b_used,
    })
}
