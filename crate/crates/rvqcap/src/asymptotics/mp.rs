//! The Marchenko–Pastur limiting spectral density of normalized channel Gram
//! matrices, with quadrature tuned for its square-root band edges.
//!
//! For an `n_r x n_t` i.i.d. unit-variance channel and ratio
//! `c = nr_bar = n_r/n_t`, the eigenvalues of `(1/n_t) H H^H` (receive side)
//! converge to a density supported on `[a, b]`, `a = (1-sqrt(c))^2`,
//! `b = (1+sqrt(c))^2`, while the transmit side `(1/n_t) H^H H` adds a point
//! mass `1 - c` at zero when `c < 1` (the nullspace share). Receive-side
//! construction is limited to `c <= 1`; taller systems are served through the
//! reciprocal-system transformation in [`super::capacity`].

use serde::{Deserialize, Serialize};

use crate::numeric::integrate;
use crate::{Error, Result};

/// Which normalized Gram matrix the density describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumSide {
    /// `(1/n_t) H^H H`, `n_t` eigenvalues; point mass at zero when `nr_bar < 1`.
    Transmit,
    /// `(1/n_t) H H^H`, `n_r` eigenvalues; requires `nr_bar <= 1`.
    Receive,
}

/// Default absolute quadrature tolerance.
pub const MP_TOL: f64 = 1e-9;

/// Limiting spectral density for one side of the Gram pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MPDensity {
    pub ratio: f64,
    pub side: SpectrumSide,
    /// Lower support edge `(1 - sqrt(ratio))^2`.
    pub a: f64,
    /// Upper support edge `(1 + sqrt(ratio))^2`.
    pub b: f64,
    /// Weight of the atom at zero (transmit side with `ratio < 1`, else 0).
    pub point_mass: f64,
}

impl MPDensity {
    pub fn transmit(ratio: f64) -> Result<Self> {
        Self::new(ratio, SpectrumSide::Transmit)
    }

    pub fn receive(ratio: f64) -> Result<Self> {
        Self::new(ratio, SpectrumSide::Receive)
    }

    fn new(ratio: f64, side: SpectrumSide) -> Result<Self> {
        if !(ratio > 0.0 && ratio.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "spectrum ratio must be positive, got {ratio}"
            )));
        }
        if side == SpectrumSide::Receive && ratio > 1.0 {
            return Err(Error::UnsupportedRegime(format!(
                "receive-side density needs nr_bar <= 1 (got {ratio}); \
                 swap the roles of the antenna sides and rescale the SNR instead"
            )));
        }
        let s = ratio.sqrt();
        let point_mass = match side {
            SpectrumSide::Transmit => (1.0 - ratio).max(0.0),
            SpectrumSide::Receive => 0.0,
        };
        Ok(MPDensity {
            ratio,
            side,
            a: (1.0 - s) * (1.0 - s),
            b: (1.0 + s) * (1.0 + s),
            point_mass,
        })
    }

    /// Continuous density value at `lambda` inside the support.
    pub fn density(&self, lambda: f64) -> f64 {
        if lambda <= self.a || lambda >= self.b {
            return 0.0;
        }
        let num = ((lambda - self.a) * (self.b - lambda)).sqrt();
        match self.side {
            SpectrumSide::Transmit => num / (2.0 * std::f64::consts::PI * lambda),
            SpectrumSide::Receive => num / (2.0 * std::f64::consts::PI * lambda * self.ratio),
        }
    }

    /// `integral f dG` including the point-mass term `point_mass * f(0)`.
    ///
    /// The continuous part uses the substitution
    /// `lambda = (a+b)/2 + ((b-a)/2) cos(theta)`, which turns the square-root
    /// edge factors into a smooth `sin^2` weight.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let atom = if self.point_mass > 0.0 {
            self.point_mass * f(0.0)
        } else {
            0.0
        };
        Ok(atom + self.integrate_tail_inner(self.a, &f)?)
    }

    /// Continuous-part mass of the upper tail `[eta, b]`.
    pub fn tail_mass(&self, eta: f64) -> Result<f64> {
        self.integrate_tail_inner(eta, &|_| 1.0)
    }

    /// `integral_eta^b f dG` over the continuous part only.
    pub fn integrate_tail<F: Fn(f64) -> f64>(&self, eta: f64, f: F) -> Result<f64> {
        self.integrate_tail_inner(eta, &f)
    }

    fn integrate_tail_inner<F: Fn(f64) -> f64>(&self, eta: f64, f: &F) -> Result<f64> {
        if !(eta.is_finite()) || eta > self.b + 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "tail start {eta} outside support [{}, {}]",
                self.a, self.b
            )));
        }
        let eta = eta.clamp(self.a, self.b);
        if eta >= self.b {
            return Ok(0.0);
        }
        let mid = 0.5 * (self.a + self.b);
        let half = 0.5 * (self.b - self.a);
        // theta in [0, theta_eta]: theta = 0 is the upper edge b.
        let theta_eta = ((eta - mid) / half).clamp(-1.0, 1.0).acos();
        let scale = match self.side {
            SpectrumSide::Transmit => half * half / (2.0 * std::f64::consts::PI),
            SpectrumSide::Receive => half * half / (2.0 * std::f64::consts::PI * self.ratio),
        };
        let degenerate_edge = self.a == 0.0; // ratio = 1: support touches zero
        integrate(
            |theta| {
                let c = theta.cos();
                let lambda = (mid + half * c).max(0.0);
                // sin^2(theta)/lambda in factored form; at a = 0 the exact
                // cancellation lambda = half (1 + cos) keeps the lower edge
                // finite: sin^2/lambda -> (1 - cos)/half.
                let weight = if degenerate_edge {
                    (1.0 - c) / half
                } else {
                    (1.0 - c) * (1.0 + c) / lambda
                };
                scale * f(lambda) * weight
            },
            0.0,
            theta_eta,
            MP_TOL,
        )
    }

    /// Mean of the full distribution (continuous part plus atom).
    pub fn mean(&self) -> Result<f64> {
        self.integrate(|x| x)
    }
}
