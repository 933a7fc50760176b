//! Seeded sampling of fading channels, isotropic unit vectors, and
//! Haar-distributed semi-unitary matrices, plus Gram-spectrum utilities.
//!
//! Everything here is deterministic given a [`SeedPolicy`]: each (trial,
//! stream-label) pair maps injectively to an independent ChaCha stream, so
//! parallel Monte Carlo reproduces bit-identically regardless of thread
//! count or platform.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Identifier of the pseudo-random core, recorded in experiment metadata.
pub const RNG_CORE: &str = "chacha8(rand_chacha-0.9)+ziggurat-normal(rand_distr-0.5)";

/// Unitarity / norm tolerance enforced on sampled matrices.
pub const UNITARY_TOL: f64 = 1e-12;

/// Finite-system sizes: `n_t` transmit antennas, `n_r` receive antennas,
/// `k` data streams (precoder rank), `b` feedback bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemDims {
    n_t: usize,
    n_r: usize,
    k: usize,
    b: u32,
}

impl SystemDims {
    pub fn new(n_t: usize, n_r: usize, k: usize, b: u32) -> Result<Self> {
        if n_t == 0 || n_r == 0 {
            return Err(Error::InvalidDimensions(format!(
                "antenna counts must be positive (n_t={n_t}, n_r={n_r})"
            )));
        }
        if k == 0 || k > n_t {
            return Err(Error::InvalidDimensions(format!(
                "rank must satisfy 1 <= k <= n_t (k={k}, n_t={n_t})"
            )));
        }
        Ok(SystemDims { n_t, n_r, k, b })
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    /// Receive-to-transmit antenna ratio `n_r / n_t`.
    pub fn nr_bar(&self) -> f64 {
        self.n_r as f64 / self.n_t as f64
    }

    /// Normalized rank `k / n_t`.
    pub fn k_bar(&self) -> f64 {
        self.k as f64 / self.n_t as f64
    }

    /// Feedback bits per transmit antenna (beamforming scaling).
    pub fn b_bar(&self) -> f64 {
        self.b as f64 / self.n_t as f64
    }

    /// Feedback bits per squared receive antenna count (precoding scaling).
    pub fn b_hat(&self) -> f64 {
        self.b as f64 / (self.n_r * self.n_r) as f64
    }
}

/// Stream labels keep draws for different purposes independent within one
/// trial. The numeric codes are part of the reproducibility contract; do not
/// reorder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StreamLabel {
    Channel,
    Codebook,
    Precoder,
    Training,
    Projection,
    Aux(u8),
}

impl StreamLabel {
    fn code(self) -> u64 {
        match self {
            StreamLabel::Channel => 1,
            StreamLabel::Codebook => 2,
            StreamLabel::Precoder => 3,
            StreamLabel::Training => 4,
            StreamLabel::Projection => 5,
            StreamLabel::Aux(x) => 0x100 + x as u64,
        }
    }
}

/// Derives per-trial child generators from one master seed.
///
/// The (trial, label) pair maps injectively into the ChaCha stream id
/// (`label << 48 | trial`), so child streams never collide as long as
/// `trial < 2^48`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedPolicy {
    pub master_seed: u64,
}

impl SeedPolicy {
    pub fn new(master_seed: u64) -> Self {
        SeedPolicy { master_seed }
    }

    /// Child generator for a given trial and stream label.
    pub fn child_rng(&self, trial: u64, label: StreamLabel) -> ChaCha8Rng {
        assert!(trial < 1 << 48, "trial index exceeds the 2^48 stream budget");
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream((label.code() << 48) | trial);
        rng
    }
}

/// One draw of a circularly symmetric complex Gaussian with unit variance
/// (`E|h|^2 = 1`, i.e. each quadrature has variance 1/2).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// An `n_r x n_t` matrix of i.i.d. unit-variance fading gains.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix(DMatrix<Complex64>);

impl ChannelMatrix {
    /// Wrap an existing matrix (used by tests constructing special channels).
    pub fn from_matrix(m: DMatrix<Complex64>) -> Self {
        ChannelMatrix(m)
    }

    pub fn n_r(&self) -> usize {
        self.0.nrows()
    }

    pub fn n_t(&self) -> usize {
        self.0.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Sample an i.i.d. Rayleigh-fading channel. Entries are drawn column by
/// column in a fixed order so a given generator state always yields the same
/// matrix.
pub fn sample_channel<R: Rng + ?Sized>(n_r: usize, n_t: usize, rng: &mut R) -> ChannelMatrix {
    let mut m = DMatrix::zeros(n_r, n_t);
    for j in 0..n_t {
        for i in 0..n_r {
            m[(i, j)] = complex_gaussian(rng);
        }
    }
    ChannelMatrix(m)
}

/// Sample a unit-norm vector uniformly distributed on the complex sphere.
pub fn sample_isotropic_unit_vector<R: Rng + ?Sized>(n_t: usize, rng: &mut R) -> DVector<Complex64> {
    loop {
        let mut v = DVector::from_fn(n_t, |_, _| complex_gaussian(rng));
        let norm = v.norm();
        // Zero-norm draws have probability zero; guarded anyway.
        if norm > 1e-150 {
            v /= Complex64::new(norm, 0.0);
            return v;
        }
    }
}

/// An `n_t x k` matrix with orthonormal columns (`V^H V = I_k` within
/// [`UNITARY_TOL`]).
#[derive(Debug, Clone, PartialEq)]
pub struct SemiUnitaryMatrix(DMatrix<Complex64>);

impl SemiUnitaryMatrix {
    /// Validate and wrap a candidate matrix.
    pub fn try_new(m: DMatrix<Complex64>) -> Result<Self> {
        let k = m.ncols();
        if m.nrows() < k || k == 0 {
            return Err(Error::InvalidDimensions(format!(
                "semi-unitary matrix needs nrows >= ncols >= 1, got {}x{}",
                m.nrows(),
                k
            )));
        }
        let gram = m.adjoint() * &m;
        for i in 0..k {
            for j in 0..k {
                let target = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                if (gram[(i, j)] - target).norm() > 1e-10 {
                    return Err(Error::InvalidArgument(format!(
                        "columns not orthonormal at ({i},{j}): {}",
                        gram[(i, j)]
                    )));
                }
            }
        }
        Ok(SemiUnitaryMatrix(m))
    }

    pub fn n_t(&self) -> usize {
        self.0.nrows()
    }

    pub fn k(&self) -> usize {
        self.0.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    /// First column as a beamforming vector (rank-one use).
    pub fn column_vector(&self) -> DVector<Complex64> {
        DVector::from_column_slice(self.0.column(0).as_slice())
    }
}

/// Sample a Haar-distributed point on the Stiefel manifold of `n_t x k`
/// semi-unitary matrices.
///
/// Modified Gram-Schmidt on an i.i.d. complex Gaussian matrix, with one
/// re-orthogonalization pass. MGS yields an R factor with positive real
/// diagonal by construction (each pivot is a norm), which is exactly the
/// normalization that makes the Q factor Haar.
pub fn sample_semi_unitary<R: Rng + ?Sized>(n_t: usize, k: usize, rng: &mut R) -> Result<SemiUnitaryMatrix> {
    if k == 0 || k > n_t {
        return Err(Error::InvalidDimensions(format!(
            "need 1 <= k <= n_t, got k={k}, n_t={n_t}"
        )));
    }
    let mut cols: Vec<DVector<Complex64>> = Vec::with_capacity(k);
    for _ in 0..k {
        let mut v = DVector::from_fn(n_t, |_, _| complex_gaussian(rng));
        // two orthogonalization passes ("twice is enough")
        for _ in 0..2 {
            for q in &cols {
                let coeff = q.dotc(&v);
                v.axpy(-coeff, q, Complex64::new(1.0, 0.0));
            }
        }
        let norm = v.norm();
        v /= Complex64::new(norm, 0.0);
        cols.push(v);
    }
    let mut m = DMatrix::zeros(n_t, k);
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    SemiUnitaryMatrix::try_new(m)
}

/// Which Gram matrix spectrum to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GramSide {
    /// Eigenvalues of `(1/n_t) H^H H` (length `n_t`).
    Transmit,
    /// Eigenvalues of `(1/n_t) H H^H` (length `n_r`).
    Receive,
}

/// Descending eigenvalues of the normalized Gram matrix on the chosen side.
/// Tiny negative values (above `-1e-12`) are clamped to zero; anything more
/// negative is treated as a failed decomposition.
pub fn gram_eigenvalues(h: &ChannelMatrix, side: GramSide) -> Result<Vec<f64>> {
    if !h.is_finite() {
        return Err(Error::NonFinite("channel matrix".into()));
    }
    let scale = Complex64::new(1.0 / h.n_t() as f64, 0.0);
    let gram = match side {
        GramSide::Transmit => (h.matrix().adjoint() * h.matrix()) * scale,
        GramSide::Receive => (h.matrix() * h.matrix().adjoint()) * scale,
    };
    let mut eig: Vec<f64> = hermitian_eigenvalues(&gram)?;
    for v in eig.iter_mut() {
        if *v < 0.0 {
            if *v < -1e-12 * (1.0 + h.n_r() as f64) {
                return Err(Error::SolverFailure(format!(
                    "Gram eigenvalue {v} below the PSD clamp threshold"
                )));
            }
            *v = 0.0;
        }
    }
    eig.sort_by(|a, b| b.partial_cmp(a).expect("non-finite eigenvalue"));
    Ok(eig)
}

/// Eigenvalues of a Hermitian matrix, unordered, as reals.
pub(crate) fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("matrix for eigendecomposition".into()));
    }
    let eig = m
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or_else(|| Error::SolverFailure("hermitian eigensolver did not converge".into()))?;
    Ok(eig.eigenvalues.iter().copied().collect())
}
