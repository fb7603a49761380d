//! Independent numerical oracles. Each test derives a quantity by a route
//! the library never takes — closed-form identities, hand-assembled
//! quadratures, naive phase arithmetic in regimes where it is still sound —
//! and requires the library to match. When a frozen constant appears
//! elsewhere in the test suite, this is where it was earned.

use approx::assert_relative_eq;
use num_complex::Complex64;
use revivals::eigenbasis::eval_circular_log;
use revivals::{
    autocorr_value, custom_weights, free_particle_autocorr, gaussian_weights, EigenBasis,
    FreeParticleWeights, Spectrum, Transform, WavePacket, DEFAULT_MASS_TOL,
};
use std::f64::consts::{PI, TAU};

/// ∫ |φ(p)|² e^{−ip²t/2} dp by dense trapezoid quadrature. The integrand
/// vanishes with all derivatives at both ends of the ±10σ span, where the
/// trapezoid rule converges exponentially.
fn momentum_quadrature(p0: f64, sigma: f64, t: f64) -> f64 {
    let lo = p0 - 10.0 * sigma;
    let hi = p0 + 10.0 * sigma;
    let n = 8000usize;
    let h = (hi - lo) / n as f64;
    let g = FreeParticleWeights::new(p0, sigma);
    let mut acc = Complex64::ZERO;
    for i in 0..=n {
        let p = lo + i as f64 * h;
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        let (sin, cos) = (0.5 * p * p * t).sin_cos();
        acc += w * g.pdf(p) * Complex64::new(cos, -sin);
    }
    (acc * h).norm_sqr()
}

/// ⟨r⟩ of a single circular state by direct radial quadrature. At fixed
/// θ = π/2 the density factorizes as |R(r)|² times an angular constant, so
/// the constant cancels in ⟨r⟩ = ∫r³|R|²dr / ∫r²|R|²dr, and Simpson on the
/// smooth single-lobe profile is accurate to far better than 10⁻⁸. The
/// closed form says n(2n + 1)/2.
#[test]
fn expectation_radius_matches_the_radial_quadrature() {
    let n = 20u32;
    let r_peak = (n * n) as f64;
    // A common log offset keeps every exponentiated sample O(1); it
    // cancels in the ratio of integrals.
    let offset = eval_circular_log(n, r_peak, PI / 2.0, 0.0).unwrap().log_mag;
    let density = |r: f64| -> f64 {
        eval_circular_log(n, r, PI / 2.0, 0.0)
            .unwrap()
            .value_with_offset(offset)
            .norm_sqr()
    };

    let steps = 4000usize;
    let h = 6.0 * r_peak / steps as f64;
    let mut second_moment = 0.0f64;
    let mut third_moment = 0.0f64;
    for i in 0..=steps {
        let r = i as f64 * h;
        let w = if i == 0 || i == steps {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        // The r = 0 endpoint is an exact zero of r²|R|² (the state rises
        // as r^{n−1}); the evaluator itself requires r > 0.
        let g = if i == 0 { 0.0 } else { density(r) };
        second_moment += w * r * r * g;
        third_moment += w * r * r * r * g;
    }
    let quadrature = third_moment / second_moment;
    assert_relative_eq!(quadrature, 410.0, max_relative = 1e-8);

    let packet = WavePacket::new(
        Spectrum::hydrogen(),
        EigenBasis::CircularHydrogen,
        custom_weights(&[(20, Complex64::ONE)]).unwrap(),
    )
    .unwrap();
    assert_relative_eq!(
        packet.expectation_radius(0.0).unwrap(),
        quadrature,
        max_relative = 1e-8
    );
}

/// The packet-level ⟨r⟩ is the probability-weighted average of the
/// single-state radii — rebuilt here from scratch, gaussian probabilities
/// included. The symmetric window makes the first moment vanish, so the
/// result sits ⟨k²⟩ ≈ σ² above the central state's 14460 a.u.
#[test]
fn packet_radius_matches_a_hand_built_average() {
    let (n_bar, sigma) = (120i64, 2.5f64);
    let spectrum = Spectrum::hydrogen();
    let weights = gaussian_weights(n_bar, sigma, spectrum.n_min(), DEFAULT_MASS_TOL).unwrap();
    let (lo, hi) = weights.window();
    assert_eq!((lo, hi), (102, 138));

    let mut probs: Vec<f64> = (lo..=hi)
        .map(|n| {
            let k = (n - n_bar) as f64;
            (-k * k / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    let by_hand: f64 = (lo..=hi)
        .zip(&probs)
        .map(|(n, p)| p * 0.5 * (n * (2 * n + 1)) as f64)
        .sum();

    let packet = WavePacket::new(spectrum, EigenBasis::CircularHydrogen, weights).unwrap();
    let library = packet.expectation_radius(0.0).unwrap();
    assert_relative_eq!(library, by_hand, max_relative = 1e-12);
    // The discrete truncated second moment differs from σ² only by
    // theta-function corrections of order e^{−2π²σ²} ≈ e^{−123}.
    assert_relative_eq!(by_hand, 14460.0 + sigma * sigma, max_relative = 1e-9);
}

/// The closed-form free-particle |A(t)|² against the defining momentum
/// integral, across spreading-only, slow, and fast packets.
#[test]
fn free_particle_closed_form_matches_momentum_quadrature() {
    for (p0, sigma) in [(5.0, 1.0), (0.0, 2.0), (10.0, 0.5)] {
        for t in [0.01, 0.1, 1.0] {
            let quadrature = momentum_quadrature(p0, sigma, t);
            let closed = free_particle_autocorr(p0, sigma, t);
            assert!(
                (quadrature - closed).abs() <= 1e-10,
                "p0 = {p0}, σ = {sigma}, t = {t}: quadrature {quadrature} vs closed {closed}"
            );
        }
    }
}

/// |A(t)|² for the box packet assembled from scratch: √2·sin(nπx) states
/// on a 2000-point trapezoid grid and naive phase reduction (E·t stays
/// below ~3×10³ rad here, so the naive remainder is still good to
/// ~10⁻¹² rad). Both the spectral sum and the spatial cross-correlation
/// must land on it.
#[test]
fn box_autocorrelation_matches_a_hand_built_overlap() {
    let spectrum = Spectrum::infinite_well(1.0).unwrap();
    let weights = gaussian_weights(15, 1.5, spectrum.n_min(), DEFAULT_MASS_TOL).unwrap();
    let packet = WavePacket::new(
        spectrum.clone(),
        EigenBasis::Box { length: 1.0 },
        weights.clone(),
    )
    .unwrap();

    let pts = 2000usize;
    for t in [0.1, 0.35, 0.9] {
        let mut overlap = Complex64::ZERO;
        for i in 0..=pts {
            let x = i as f64 / pts as f64;
            let w = if i == 0 || i == pts { 0.5 } else { 1.0 } / pts as f64;
            let mut psi_0 = Complex64::ZERO;
            let mut psi_t = Complex64::ZERO;
            for (n, c) in weights.iter() {
                let state = 2f64.sqrt() * (n as f64 * PI * x).sin();
                let energy = (n * n) as f64 * PI * PI / 2.0;
                let theta = (energy * t).rem_euclid(TAU);
                psi_0 += c * state;
                psi_t += c * state * Complex64::new(theta.cos(), -theta.sin());
            }
            overlap += psi_0.conj() * psi_t * w;
        }
        let by_hand = overlap.norm_sqr();

        let spectral = autocorr_value(&weights, &spectrum, t).unwrap();
        let spatial = packet.cross_correlate(t, &Transform::Identity).unwrap();
        assert!(
            (by_hand - spectral).abs() <= 1e-9,
            "t = {t}: hand overlap {by_hand} vs spectral {spectral}"
        );
        assert!(
            (by_hand - spatial).abs() <= 1e-9,
            "t = {t}: hand overlap {by_hand} vs spatial {spatial}"
        );
    }
}

/// The rotator counterpart: e^{inφ}/√(2π) states on a 2048-point rectangle
/// grid over one period.
#[test]
fn rotator_autocorrelation_matches_a_hand_built_overlap() {
    let spectrum = Spectrum::rigid_rotator(1.0).unwrap();
    let weights = gaussian_weights(15, 1.5, spectrum.n_min(), DEFAULT_MASS_TOL).unwrap();
    let packet = WavePacket::new(spectrum.clone(), EigenBasis::Rotator, weights.clone()).unwrap();

    let pts = 2048usize;
    let norm = 1.0 / TAU.sqrt();
    for t in [1.0, 4.18, 7.7] {
        let mut overlap = Complex64::ZERO;
        for i in 0..pts {
            let phi = i as f64 / pts as f64 * TAU;
            let mut psi_0 = Complex64::ZERO;
            let mut psi_t = Complex64::ZERO;
            for (n, c) in weights.iter() {
                let state = norm * Complex64::new(0.0, n as f64 * phi).exp();
                let energy = (n * n) as f64 / 2.0;
                let theta = (energy * t).rem_euclid(TAU);
                psi_0 += c * state;
                psi_t += c * state * Complex64::new(theta.cos(), -theta.sin());
            }
            overlap += psi_0.conj() * psi_t * (TAU / pts as f64);
        }
        let by_hand = overlap.norm_sqr();

        let spectral = autocorr_value(&weights, &spectrum, t).unwrap();
        let spatial = packet.cross_correlate(t, &Transform::Identity).unwrap();
        assert!(
            (by_hand - spectral).abs() <= 1e-9,
            "t = {t}: hand overlap {by_hand} vs spectral {spectral}"
        );
        assert!(
            (by_hand - spatial).abs() <= 1e-9,
            "t = {t}: hand overlap {by_hand} vs spatial {spatial}"
        );
    }
}

/// Signed rotator quantum numbers, complex coefficients, and a packet
/// whose mean level is zero (unbounded classical period) all flow through
/// the same bridge: spectral sum, spatial quadrature, and the hand overlap
/// agree.
#[test]
fn rotator_overlap_handles_signed_quantum_numbers() {
    let c = Complex64::new;
    let pairs = [
        (-3i64, c(0.5, 0.1)),
        (-1, c(-0.3, 0.4)),
        (0, c(0.2, 0.0)),
        (2, c(0.1, -0.6)),
    ];
    let weights = custom_weights(&pairs).unwrap();
    let spectrum = Spectrum::rigid_rotator(1.0).unwrap();
    let packet = WavePacket::new(spectrum.clone(), EigenBasis::Rotator, weights.clone()).unwrap();
    assert!(packet.scales().classical.is_unbounded());

    let pts = 2048usize;
    let norm = 1.0 / TAU.sqrt();
    let t = 2.6;
    let mut overlap = Complex64::ZERO;
    for i in 0..pts {
        let phi = i as f64 / pts as f64 * TAU;
        let mut psi_0 = Complex64::ZERO;
        let mut psi_t = Complex64::ZERO;
        for (n, coeff) in weights.iter() {
            let state = norm * Complex64::new(0.0, n as f64 * phi).exp();
            let theta = ((n * n) as f64 / 2.0 * t).rem_euclid(TAU);
            psi_0 += coeff * state;
            psi_t += coeff * state * Complex64::new(theta.cos(), -theta.sin());
        }
        overlap += psi_0.conj() * psi_t * (TAU / pts as f64);
    }
    let by_hand = overlap.norm_sqr();

    let spectral = autocorr_value(&weights, &spectrum, t).unwrap();
    let spatial = packet.cross_correlate(t, &Transform::Identity).unwrap();
    assert!((by_hand - spectral).abs() <= 1e-10);
    assert!((by_hand - spatial).abs() <= 1e-10);
}
