//! Weight distributions c_n over eigenstates.
//!
//! A localized packet is a superposition Ψ = Σ c_n ψ_n with Σ|c_n|² = 1,
//! strongly weighted around a mean quantum number n̄. Three constructors
//! cover the cases used here:
//!
//! * gaussian — |c_n|² = (2πσ²)^{−1/2} e^{−(n−n̄)²/(2σ²)}, the generic
//!   localized packet; the coefficients are taken real and positive, which
//!   fixes the packet's initial position (SHO at the right turning point,
//!   rotator at φ = 0).
//! * coherent — c_n = e^{−|α|²/2} αⁿ/√(n!), the harmonic-oscillator
//!   coherent state, Poisson-weighted around n̄ ≈ |α|².
//! * custom — explicit (n, c_n) pairs, normalized.
//!
//! Supports are truncated to a finite window chosen so the discarded
//! probability mass stays below a tolerance, then renormalized exactly.

use crate::error::{Error, Result};
use crate::special::{erfc, ln_factorial};
use num_complex::Complex64;

/// Default truncation tolerance: windows keep all but < 10⁻¹² of the mass.
pub const DEFAULT_MASS_TOL: f64 = 1e-12;

/// Which constructor produced a distribution (with its parameters).
#[derive(Debug, Clone, PartialEq)]
pub enum WeightKind {
    /// Gaussian around `n_bar` with width `sigma`.
    Gaussian { n_bar: i64, sigma: f64 },
    /// Coherent state with amplitude `alpha`.
    Coherent { alpha: Complex64 },
    /// Explicitly supplied coefficients.
    Custom,
}

/// A normalized weight distribution over a contiguous window of quantum
/// numbers [n_lo, n_hi]; coefficients outside the window are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightDistribution {
    kind: WeightKind,
    n_lo: i64,
    coeffs: Vec<Complex64>,
    n_bar: i64,
}

impl WeightDistribution {
    /// The constructor and parameters behind this distribution.
    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    /// Inclusive window (n_lo, n_hi) of retained quantum numbers.
    pub fn window(&self) -> (i64, i64) {
        (self.n_lo, self.n_lo + self.coeffs.len() as i64 - 1)
    }

    /// The mean quantum number the packet is built around.
    pub fn n_bar(&self) -> i64 {
        self.n_bar
    }

    /// Number of retained coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// True when the window is empty (never produced by the constructors).
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The coefficient c_n (zero outside the window).
    pub fn coeff(&self, n: i64) -> Complex64 {
        let idx = n - self.n_lo;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            Complex64::ZERO
        } else {
            self.coeffs[idx as usize]
        }
    }

    /// The probability |c_n|².
    pub fn prob(&self, n: i64) -> f64 {
        self.coeff(n).norm_sqr()
    }

    /// Iterates (n, c_n) across the window in ascending n.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.n_lo + i as i64, c))
    }

    /// Builds the final distribution: normalizes and records the window.
    fn normalized(kind: WeightKind, n_lo: i64, mut coeffs: Vec<Complex64>, n_bar: i64) -> Self {
        let total: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        let inv = 1.0 / total.sqrt();
        for c in &mut coeffs {
            *c *= inv;
        }
        Self {
            kind,
            n_lo,
            coeffs,
            n_bar,
        }
    }
}

/// Gaussian weights around n̄ with width σ.
///
/// The window half-width h is the smallest integer whose two-sided gaussian
/// tail mass erfc(h/(σ√2)) falls below `mass_tol`; the window is then
/// [max(n̄−h, n_min), n̄+h] and the retained coefficients are renormalized.
/// `n_min` is the spectrum floor (`None` for spectra unbounded below).
pub fn gaussian_weights(
    n_bar: i64,
    sigma: f64,
    n_min: Option<i64>,
    mass_tol: f64,
) -> Result<WeightDistribution> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::InvalidWeights(format!(
            "gaussian width must be positive, got {sigma}"
        )));
    }
    if !(mass_tol > 0.0 && mass_tol < 1.0) {
        return Err(Error::InvalidWeights(format!(
            "mass tolerance must lie in (0, 1), got {mass_tol}"
        )));
    }
    if let Some(n_min) = n_min {
        if n_bar < n_min {
            return Err(Error::WindowBelowFloor { n_bar, n_min });
        }
    }

    let mut h: i64 = 1;
    while erfc(h as f64 / (sigma * std::f64::consts::SQRT_2)) >= mass_tol {
        h += 1;
    }
    let n_lo = match n_min {
        Some(n_min) => (n_bar - h).max(n_min),
        None => n_bar - h,
    };
    let n_hi = n_bar + h;

    // (2πσ²)^{−1/4} e^{−(n−n̄)²/(4σ²)}, real and positive by convention.
    let norm = (std::f64::consts::TAU * sigma * sigma).powf(-0.25);
    let coeffs = (n_lo..=n_hi)
        .map(|n| {
            let k = (n - n_bar) as f64;
            Complex64::new(norm * (-k * k / (4.0 * sigma * sigma)).exp(), 0.0)
        })
        .collect();
    Ok(WeightDistribution::normalized(
        WeightKind::Gaussian { n_bar, sigma },
        n_lo,
        coeffs,
        n_bar,
    ))
}

/// Coherent-state weights c_n = e^{−|α|²/2} αⁿ/√(n!) on [0, n_cap].
///
/// Magnitudes are computed in the log domain (√(n!) overflows near n = 170)
/// and the phase of c_n is n·arg(α). The truncated Poisson mass beyond
/// n_cap must stay below 10⁻¹²; otherwise the error instructs raising the
/// cap. The distribution peaks near n̄ ≈ |α|².
pub fn coherent_weights(alpha: Complex64, n_cap: i64) -> Result<WeightDistribution> {
    if n_cap < 0 {
        return Err(Error::InvalidWeights(format!(
            "coherent cap must be nonnegative, got {n_cap}"
        )));
    }
    let lambda = alpha.norm_sqr();
    if lambda == 0.0 {
        // Vacuum state: the packet is the ground state exactly.
        let mut coeffs = vec![Complex64::ZERO; n_cap as usize + 1];
        coeffs[0] = Complex64::ONE;
        return Ok(WeightDistribution::normalized(
            WeightKind::Coherent { alpha },
            0,
            coeffs,
            0,
        ));
    }

    let ln_mag_sq = |n: i64| -lambda + n as f64 * lambda.ln() - ln_factorial(n as u64);
    let retained: f64 = (0..=n_cap).map(|n| ln_mag_sq(n).exp()).sum();
    let discarded = 1.0 - retained;
    if discarded >= DEFAULT_MASS_TOL {
        return Err(Error::CoherentCapTooSmall {
            n_cap,
            discarded,
            tol: DEFAULT_MASS_TOL,
        });
    }

    let theta = alpha.arg();
    let coeffs = (0..=n_cap)
        .map(|n| {
            let mag = (0.5 * ln_mag_sq(n)).exp();
            Complex64::from_polar(mag, n as f64 * theta)
        })
        .collect();
    Ok(WeightDistribution::normalized(
        WeightKind::Coherent { alpha },
        0,
        coeffs,
        lambda.round() as i64,
    ))
}

/// Custom weights from explicit (n, c_n) pairs (any order; quantum numbers
/// must be distinct, at least one coefficient nonzero). Gaps inside the
/// spanned window are filled with zeros and the result is normalized; n̄ is
/// the probability-weighted mean rounded to the nearest integer.
pub fn custom_weights(pairs: &[(i64, Complex64)]) -> Result<WeightDistribution> {
    if pairs.is_empty() || pairs.iter().all(|(_, c)| c.norm_sqr() == 0.0) {
        return Err(Error::AllWeightsZero);
    }
    let n_lo = pairs.iter().map(|&(n, _)| n).min().unwrap();
    let n_hi = pairs.iter().map(|&(n, _)| n).max().unwrap();
    let mut coeffs = vec![Complex64::ZERO; (n_hi - n_lo + 1) as usize];
    let mut seen = vec![false; coeffs.len()];
    for &(n, c) in pairs {
        let idx = (n - n_lo) as usize;
        if seen[idx] {
            return Err(Error::DuplicateQuantumNumber { n });
        }
        seen[idx] = true;
        coeffs[idx] = c;
    }
    let total: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let mean: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| (n_lo + i as i64) as f64 * c.norm_sqr() / total)
        .sum();
    Ok(WeightDistribution::normalized(
        WeightKind::Custom,
        n_lo,
        coeffs,
        mean.round() as i64,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn total_mass(dist: &WeightDistribution) -> f64 {
        dist.iter().map(|(_, c)| c.norm_sqr()).sum()
    }

    #[test]
    fn gaussian_window_tracks_the_tail_tolerance() {
        let dist = gaussian_weights(15, 1.5, Some(0), DEFAULT_MASS_TOL).unwrap();
        assert_eq!(dist.window(), (4, 26));
        assert_eq!(dist.n_bar(), 15);

        let dist = gaussian_weights(120, 2.5, Some(1), DEFAULT_MASS_TOL).unwrap();
        assert_eq!(dist.window(), (102, 138));

        // Without a floor the window is symmetric even near 0.
        let dist = gaussian_weights(0, 1.5, None, DEFAULT_MASS_TOL).unwrap();
        assert_eq!(dist.window(), (-11, 11));

        // A floor clamps the low edge and the rest renormalizes.
        let dist = gaussian_weights(2, 1.5, Some(0), DEFAULT_MASS_TOL).unwrap();
        assert_eq!(dist.window(), (0, 13));
        assert_abs_diff_eq!(total_mass(&dist), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn gaussian_peak_probability_matches_the_envelope() {
        // |c_n̄|² = (2πσ²)^{−1/2} ≈ 0.2660 at σ = 1.5; the window keeps all
        // but ~10⁻¹³ of the mass, so renormalization barely moves it.
        let dist = gaussian_weights(15, 1.5, Some(0), DEFAULT_MASS_TOL).unwrap();
        let envelope = 1.0 / (std::f64::consts::TAU * 2.25).sqrt();
        assert_relative_eq!(dist.prob(15), envelope, max_relative = 1e-10);
        assert_abs_diff_eq!(dist.prob(15), 0.2660, epsilon = 5e-5);
    }

    #[test]
    fn gaussian_weights_are_real_positive_and_symmetric() {
        let dist = gaussian_weights(15, 1.5, Some(0), DEFAULT_MASS_TOL).unwrap();
        for (_, c) in dist.iter() {
            assert!(c.im == 0.0 && c.re > 0.0);
        }
        for k in 1..=11 {
            // Bitwise symmetry: both sides evaluate the same exponential.
            assert_eq!(dist.coeff(15 + k), dist.coeff(15 - k));
        }
        assert_abs_diff_eq!(total_mass(&dist), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn gaussian_rejects_means_below_the_floor() {
        assert!(matches!(
            gaussian_weights(0, 1.5, Some(1), DEFAULT_MASS_TOL),
            Err(Error::WindowBelowFloor { n_bar: 0, n_min: 1 })
        ));
        assert!(gaussian_weights(15, -1.0, Some(0), DEFAULT_MASS_TOL).is_err());
        assert!(gaussian_weights(15, 1.5, Some(0), 0.0).is_err());
    }

    #[test]
    fn coherent_vacuum_is_the_ground_state() {
        let dist = coherent_weights(Complex64::ZERO, 5).unwrap();
        assert_relative_eq!(dist.prob(0), 1.0, max_relative = 1e-15);
        assert_eq!(dist.n_bar(), 0);
        for n in 1..=5 {
            assert_eq!(dist.prob(n), 0.0);
        }
    }

    #[test]
    fn coherent_weights_follow_the_poisson_law() {
        // λ = |α|² = 15: the Poisson mode is degenerate between n = 14 and
        // n = 15 (P(15)/P(14) = λ/15 = 1); accept either as argmax but
        // require the analytic near-tie and the mean Σ n|c_n|² = λ.
        let alpha = Complex64::new(15.0f64.sqrt(), 0.0);
        let dist = coherent_weights(alpha, 60).unwrap();

        let argmax = dist
            .iter()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .unwrap()
            .0;
        assert!(argmax == 14 || argmax == 15, "argmax = {argmax}");
        assert_relative_eq!(dist.prob(14), dist.prob(15), max_relative = 1e-12);
        assert!(dist.prob(15) > dist.prob(13));
        assert!(dist.prob(15) > dist.prob(16));

        let mean: f64 = dist.iter().map(|(n, c)| n as f64 * c.norm_sqr()).sum();
        assert_relative_eq!(mean, 15.0, max_relative = 1e-9);
        assert_eq!(dist.n_bar(), 15);
        assert_abs_diff_eq!(total_mass(&dist), 1.0, epsilon = 1e-14);

        // Against the direct Poisson mass while n! is still exact in f64.
        let mut factorial = 1.0f64;
        for n in 0..=20i64 {
            if n > 0 {
                factorial *= n as f64;
            }
            let poisson = (-15.0f64).exp() * 15.0f64.powi(n as i32) / factorial;
            assert_relative_eq!(dist.prob(n), poisson, max_relative = 1e-10);
        }
    }

    #[test]
    fn coherent_phases_advance_by_arg_alpha() {
        let alpha = Complex64::from_polar(2.0, 0.7);
        let dist = coherent_weights(alpha, 40).unwrap();
        for n in 0..=10i64 {
            let expected = Complex64::from_polar(dist.coeff(n).norm(), n as f64 * 0.7);
            assert_abs_diff_eq!((dist.coeff(n) - expected).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn coherent_cap_too_small_is_rejected_with_the_mass() {
        match coherent_weights(Complex64::new(15.0f64.sqrt(), 0.0), 10) {
            Err(Error::CoherentCapTooSmall {
                n_cap: 10,
                discarded,
                ..
            }) => {
                assert!(discarded > 0.8, "λ=15 keeps little mass below n=10");
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn custom_weights_normalize_and_fill_gaps() {
        let one = Complex64::ONE;
        let dist = custom_weights(&[(5, one)]).unwrap();
        assert_relative_eq!(dist.prob(5), 1.0);
        assert_eq!(dist.n_bar(), 5);

        let dist = custom_weights(&[(5, one), (6, one)]).unwrap();
        assert_relative_eq!(dist.prob(5), 0.5, max_relative = 1e-15);
        assert_relative_eq!(dist.prob(6), 0.5, max_relative = 1e-15);

        let dist = custom_weights(&[(5, Complex64::new(3.0, 0.0)), (6, Complex64::new(4.0, 0.0))])
            .unwrap();
        assert_relative_eq!(dist.prob(5), 9.0 / 25.0, max_relative = 1e-15);
        assert_relative_eq!(dist.prob(6), 16.0 / 25.0, max_relative = 1e-15);

        let dist = custom_weights(&[(6, one), (3, one)]).unwrap();
        assert_eq!(dist.window(), (3, 6));
        assert_eq!(dist.coeff(4), Complex64::ZERO);
        assert_eq!(dist.len(), 4);
    }

    #[test]
    fn custom_weights_reject_degenerate_input() {
        assert!(matches!(custom_weights(&[]), Err(Error::AllWeightsZero)));
        assert!(matches!(
            custom_weights(&[(3, Complex64::ZERO)]),
            Err(Error::AllWeightsZero)
        ));
        assert!(matches!(
            custom_weights(&[(3, Complex64::ONE), (3, Complex64::ONE)]),
            Err(Error::DuplicateQuantumNumber { n: 3 })
        ));
    }
}
