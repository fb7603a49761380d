//! Position-space eigenfunctions ψ_n and evaluation grids.
//!
//! Four bases cover the systems treated here:
//!
//! * SHO — ψ_n(x) = (ω/π)^{1/4} H̃_n(√ω·x) e^{−ωx²/2} via the normalized
//!   Hermite recurrence (no raw Hermite polynomials, which overflow).
//! * Box — ψ_n(x) = √(2/L) sin(nπx/L) on [0, L].
//! * Rotator — ψ_n(φ) = e^{inφ}/√(2π) on the circle, n any integer.
//! * Circular hydrogen — the l = m = n−1 states, evaluated in the log
//!   domain: their normalization carries Γ(n) ≈ 10^196 at n = 120, so
//!   magnitudes only ever exist as logarithms until a common offset is
//!   subtracted.
//!
//! Densities are sampled on rectilinear [`Axis`] grids; [`GridDensity`]
//! couples samples with their axes and supports trapezoid (or periodic
//! rectangle) integration.

use crate::error::{Error, Result};
use crate::special::ln_gamma;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// A uniformly spaced sampling axis: points start + i·step, i = 0..len.
///
/// A periodic axis covers one period [start, start + step·len) without
/// duplicating the wrap point (rectangle quadrature); a line axis includes
/// both endpoints (trapezoid quadrature).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    /// First sample position.
    pub start: f64,
    /// Sample spacing.
    pub step: f64,
    /// Number of samples.
    pub len: usize,
    /// Whether the axis wraps (quadrature weights are uniform).
    #[serde(default)]
    pub periodic: bool,
}

impl Axis {
    /// An inclusive line segment [a, b] sampled at `len` points.
    pub fn line(a: f64, b: f64, len: usize) -> Self {
        assert!(len >= 2, "a line axis needs at least two samples");
        Self {
            start: a,
            step: (b - a) / (len - 1) as f64,
            len,
            periodic: false,
        }
    }

    /// One period [a, a + period) sampled at `len` points, wrap excluded.
    pub fn periodic(a: f64, period: f64, len: usize) -> Self {
        assert!(len >= 1, "a periodic axis needs at least one sample");
        Self {
            start: a,
            step: period / len as f64,
            len,
            periodic: true,
        }
    }

    /// The i-th sample position.
    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    /// Iterates all sample positions.
    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |i| self.point(i))
    }

    /// Quadrature weight of the i-th sample: uniform `step` on periodic
    /// axes (rectangle rule over one period), trapezoid on line axes.
    pub fn quadrature_weight(&self, i: usize) -> f64 {
        if self.periodic || self.len == 1 {
            self.step
        } else if i == 0 || i == self.len - 1 {
            0.5 * self.step
        } else {
            self.step
        }
    }
}

/// A probability density |Ψ|² sampled on a rectilinear grid at one time.
///
/// `values` is stored in C order over `axes`: the last axis varies fastest,
/// i.e. for axes [a, b] the flat index of (i, j) is i·b.len + j.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDensity {
    /// The sampling axes (one per dimension).
    pub axes: Vec<Axis>,
    /// Density samples in C order.
    pub values: Vec<f64>,
    /// The evolution time of the snapshot (atomic units).
    pub time: f64,
    /// True when `values` is an absolutely normalized density (∫ = 1);
    /// false when it has been rescaled (e.g. circular slices scaled to a
    /// unit maximum).
    pub normalized: bool,
}

impl GridDensity {
    /// Total number of samples (product of axis lengths).
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.len).product()
    }

    /// True when the grid has no samples.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Integrates the density over the grid with the axes' product
    /// quadrature (trapezoid on line axes, rectangle on periodic ones).
    pub fn integrate(&self) -> f64 {
        match self.axes.len() {
            1 => {
                let ax = self.axes[0];
                self.values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v * ax.quadrature_weight(i))
                    .sum()
            }
            2 => {
                let (a, b) = (self.axes[0], self.axes[1]);
                let mut total = 0.0;
                for i in 0..a.len {
                    let wa = a.quadrature_weight(i);
                    for j in 0..b.len {
                        total += self.values[i * b.len + j] * wa * b.quadrature_weight(j);
                    }
                }
                total
            }
            d => panic!("integration over {d}-dimensional grids is not supported"),
        }
    }
}

/// The eigenbasis a packet lives in.
#[derive(Debug, Clone, PartialEq)]
pub enum EigenBasis {
    /// Harmonic oscillator of frequency ω on the line.
    Sho { omega: f64 },
    /// Infinite square well on [0, L].
    Box { length: f64 },
    /// Plane rotator on the circle [0, 2π).
    Rotator,
    /// Hydrogenic circular states l = m = n−1, evaluated on the θ = π/2
    /// equatorial plane.
    CircularHydrogen,
}

impl EigenBasis {
    /// Short kind name for diagnostics.
    pub fn kind_name(&self) -> &'static str {
        match self {
            EigenBasis::Sho { .. } => "sho",
            EigenBasis::Box { .. } => "box",
            EigenBasis::Rotator => "rotator",
            EigenBasis::CircularHydrogen => "circular-hydrogen",
        }
    }

    /// Smallest quantum number the basis can represent (None: unbounded).
    pub fn n_floor(&self) -> Option<i64> {
        match self {
            EigenBasis::Sho { .. } => Some(0),
            EigenBasis::Box { .. } | EigenBasis::CircularHydrogen => Some(1),
            EigenBasis::Rotator => None,
        }
    }

    /// The default sampling grid used for densities and overlaps. The SHO
    /// window [−12, 12] covers the n ≤ 26 turning points (±√(2·26.5) ≈ 7.3)
    /// plus several decay lengths; the circular patch spans the equatorial
    /// plane out to 1.3·n̄², beyond the outer lobe of every windowed state.
    pub fn default_grid(&self, n_bar: i64) -> Vec<Axis> {
        match self {
            EigenBasis::Sho { .. } => vec![Axis::line(-12.0, 12.0, 1200)],
            EigenBasis::Box { length } => vec![Axis::line(0.0, *length, 1000)],
            EigenBasis::Rotator => vec![Axis::periodic(0.0, TAU, 1024)],
            EigenBasis::CircularHydrogen => {
                let r_bar = (n_bar as f64) * (n_bar as f64);
                let half = 1.3 * r_bar;
                vec![Axis::line(-half, half, 256), Axis::line(-half, half, 256)]
            }
        }
    }
}

/// SHO eigenfunction ψ_n(x) for frequency ω (n ≥ 0).
///
/// Uses the normalized three-term recurrence in ξ = √ω·x,
///
/// ```text
///   ψ_0 = (ω/π)^{1/4} e^{−ξ²/2}
///   ψ_{n+1} = ξ·√(2/(n+1))·ψ_n − √(n/(n+1))·ψ_{n−1}
/// ```
///
/// which keeps every intermediate O(1) where Hermite polynomials and n!
/// would overflow separately.
pub fn eval_sho(n: u32, omega: f64, x: f64) -> f64 {
    *sho_column(n, omega, x).last().unwrap()
}

/// All SHO eigenfunctions ψ_0..=ψ_{n_hi} at one point (shared recurrence).
pub(crate) fn sho_column(n_hi: u32, omega: f64, x: f64) -> Vec<f64> {
    debug_assert!(omega > 0.0);
    let xi = omega.sqrt() * x;
    let mut values = Vec::with_capacity(n_hi as usize + 1);
    let psi0 = (omega / PI).powf(0.25) * (-xi * xi / 2.0).exp();
    values.push(psi0);
    if n_hi == 0 {
        return values;
    }
    values.push(xi * std::f64::consts::SQRT_2 * psi0);
    for n in 1..n_hi as usize {
        let np1 = (n + 1) as f64;
        let next = xi * (2.0 / np1).sqrt() * values[n] - (n as f64 / np1).sqrt() * values[n - 1];
        values.push(next);
    }
    values
}

/// Box eigenfunction ψ_n(x) = √(2/L)·sin(nπx/L) on [0, L] (n ≥ 1).
pub fn eval_box(n: u32, length: f64, x: f64) -> Result<f64> {
    assert!(n >= 1, "box quantum numbers start at 1");
    if !(0.0..=length).contains(&x) {
        return Err(Error::OutsideBox { x, length });
    }
    Ok((2.0 / length).sqrt() * (n as f64 * PI * x / length).sin())
}

/// Rotator eigenfunction ψ_n(φ) = e^{inφ}/√(2π) (any integer n, any φ).
pub fn eval_rotator(n: i64, phi: f64) -> Complex64 {
    let norm = 1.0 / TAU.sqrt();
    // n·φ stays small for the windows used here; no extended reduction needed.
    let (sin, cos) = (n as f64 * phi).sin_cos();
    Complex64::new(norm * cos, norm * sin)
}

/// A complex value carried as (log magnitude, phase) because the magnitude
/// under- or overflows f64 on its own.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    /// ln of the magnitude (−∞ encodes an exact zero).
    pub log_mag: f64,
    /// Phase in radians.
    pub phase: f64,
}

impl LogComplex {
    /// Exponentiates after subtracting a caller-supplied common log offset
    /// (typically the maximum log magnitude over a sum, so the largest term
    /// becomes O(1)).
    pub fn value_with_offset(&self, log_offset: f64) -> Complex64 {
        Complex64::from_polar((self.log_mag - log_offset).exp(), self.phase)
    }
}

/// Circular hydrogen state (n, l = m = n−1) at spherical (r, θ, φ), in the
/// log domain (n ≥ 1, r > 0, θ ∈ [0, π]).
///
/// ```text
///   ln|ψ_n| = 3/2·ln(2/n) − 1/2·ln(2n) − 1/2·ln(4π) − ln Γ(n)
///             + (n−1)·ln(r/n) − r/n + (n−1)·ln sin θ
///   arg ψ_n = (n−1)·(φ + π)
/// ```
///
/// The (φ + π) phase carries the Condon–Shortley (−1)^m of Y_l^l. At
/// n = 120 the separate factors span e^{±450}; only the combined logarithm
/// is representable, so callers exponentiate through
/// [`LogComplex::value_with_offset`] against a shared offset.
pub fn eval_circular_log(n: u32, r: f64, theta: f64, phi: f64) -> Result<LogComplex> {
    assert!(n >= 1, "circular states start at n = 1");
    if r.is_nan() || r <= 0.0 {
        return Err(Error::NonPositiveRadius { r });
    }
    let nf = n as f64;
    let base = 1.5 * (2.0 / nf).ln() - 0.5 * (2.0 * nf).ln() - 0.5 * (4.0 * PI).ln() - ln_gamma(nf);
    // (n−1)·ln sin θ, written to avoid 0·(−∞) = NaN for the s state.
    let angular = if n == 1 {
        0.0
    } else {
        (nf - 1.0) * theta.sin().ln()
    };
    let log_mag = base + (nf - 1.0) * (r / nf).ln() - r / nf + angular;
    let phase = (nf - 1.0) * (phi + PI);
    Ok(LogComplex { log_mag, phase })
}

/// The free-particle gaussian momentum distribution
/// |φ(p)|² = (2πσ²)^{−1/2} e^{−(p−p0)²/(2σ²)}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeParticleWeights {
    /// Mean momentum.
    pub p0: f64,
    /// Momentum-space width.
    pub sigma: f64,
}

impl FreeParticleWeights {
    /// A gaussian momentum density centered at p0 with width σ > 0.
    pub fn new(p0: f64, sigma: f64) -> Self {
        assert!(sigma > 0.0, "momentum width must be positive");
        Self { p0, sigma }
    }

    /// The momentum probability density |φ(p)|².
    pub fn pdf(&self, p: f64) -> f64 {
        let z = (p - self.p0) / self.sigma;
        (-0.5 * z * z).exp() / (TAU.sqrt() * self.sigma)
    }
}
