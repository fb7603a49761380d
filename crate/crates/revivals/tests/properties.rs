//! Property-based invariants. Where the unit tests pin specific frozen
//! values, these pin the *laws*: distributions stay normalized under any
//! admissible parameters, finite differences recover polynomial
//! coefficients, the phase reducer agrees with exact rational arithmetic,
//! and the peak detector reports exactly the structure a direct scan sees.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use revivals::phase::reduce_phase;
use revivals::{
    autocorr_value, coherent_weights, detect_peaks, free_particle_series, gaussian_weights,
    AutocorrSeries, PeakOptions, RevivalClass, Spectrum, DEFAULT_MASS_TOL,
};
use std::f64::consts::TAU;
use std::sync::OnceLock;

/// π to 100 decimal digits, as the integer numerator over 10¹⁰⁰. More than
/// twice f64 precision: the oracle's own error is far below every
/// tolerance used against it.
const PI_DIGITS: &str = "3141592653589793238462643383279502884197169399375105820974944592307816406286208998628034825342117067\
9";

fn two_pi_exact() -> &'static BigRational {
    static TWO_PI: OnceLock<BigRational> = OnceLock::new();
    TWO_PI.get_or_init(|| {
        let numer = BigInt::parse_bytes(PI_DIGITS.as_bytes(), 10).unwrap();
        let denom = BigInt::from(10u8).pow(100);
        BigRational::new(numer * 2, denom)
    })
}

/// Reduces e·t modulo 2π in exact rational arithmetic, taking the f64
/// inputs at their exact binary values.
fn reduce_phase_exact(e: f64, t: f64) -> f64 {
    let x = BigRational::from_float(e).unwrap() * BigRational::from_float(t).unwrap();
    let two_pi = two_pi_exact();
    let r = &x - two_pi * (&x / two_pi).floor();
    r.to_f64().unwrap()
}

/// Distance between two angles on the circle.
fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

proptest! {
    /// Gaussian weights are a probability distribution over the window and
    /// keep the real-positive coefficient convention.
    #[test]
    fn gaussian_weights_are_normalized(n_bar in 0i64..200, sigma in 0.3f64..6.0) {
        let w = gaussian_weights(n_bar, sigma, Some(0), DEFAULT_MASS_TOL).unwrap();
        let total: f64 = w.iter().map(|(_, c)| c.norm_sqr()).sum();
        prop_assert!((total - 1.0).abs() <= 1e-9, "total probability {total}");
        let (lo, hi) = w.window();
        prop_assert!(lo <= n_bar && n_bar <= hi);
        prop_assert!(lo >= 0);
        for (_, c) in w.iter() {
            prop_assert!(c.im == 0.0 && c.re >= 0.0);
        }
    }

    /// The window floor clips only the lower edge; the upper half-width
    /// never shrinks below the lower one.
    #[test]
    fn gaussian_window_respects_the_floor(
        n_bar in 0i64..100,
        sigma in 0.3f64..5.0,
        floor in 0i64..100,
    ) {
        prop_assume!(floor <= n_bar);
        let w = gaussian_weights(n_bar, sigma, Some(floor), DEFAULT_MASS_TOL).unwrap();
        let (lo, hi) = w.window();
        prop_assert!(lo >= floor);
        prop_assert!(hi - n_bar >= n_bar - lo, "upper half-width clipped: [{lo}, {hi}]");
    }

    /// A wider gaussian keeps more states: the window half-width is
    /// monotone in σ.
    #[test]
    fn gaussian_window_grows_with_sigma(
        n_bar in 0i64..100,
        sigma in 0.3f64..5.0,
        broaden in 1.01f64..4.0,
    ) {
        let narrow = gaussian_weights(n_bar, sigma, None, DEFAULT_MASS_TOL).unwrap();
        let wide = gaussian_weights(n_bar, sigma * broaden, None, DEFAULT_MASS_TOL).unwrap();
        let half = |w: &revivals::WeightDistribution| w.window().1 - w.n_bar();
        prop_assert!(half(&wide) >= half(&narrow));
    }

    /// Without a floor to clip against, the gaussian is exactly symmetric
    /// about n̄ — bitwise, since both wings evaluate the same expression.
    #[test]
    fn gaussian_weights_are_symmetric_without_clipping(
        n_bar in -50i64..50,
        sigma in 0.3f64..5.0,
    ) {
        let w = gaussian_weights(n_bar, sigma, None, DEFAULT_MASS_TOL).unwrap();
        let (lo, hi) = w.window();
        for k in 0..=(hi - n_bar) {
            prop_assert_eq!(w.prob(n_bar + k), w.prob(n_bar - k));
        }
        prop_assert_eq!(n_bar - lo, hi - n_bar);
    }

    /// Coherent-state probabilities obey the Poisson recurrence
    /// p(n+1)/p(n) = λ/(n+1) with λ = |α|², and the packet centers on the
    /// rounded mean.
    #[test]
    fn coherent_probabilities_follow_the_poisson_ratio(
        re in -3.5f64..3.5,
        im in -3.5f64..3.5,
    ) {
        let alpha = num_complex::Complex64::new(re, im);
        let lambda = alpha.norm_sqr();
        prop_assume!(lambda >= 0.25);
        let w = coherent_weights(alpha, 160).unwrap();
        prop_assert_eq!(w.n_bar(), lambda.round() as i64);
        for n in 0..160i64 {
            let p = w.prob(n);
            if p < 1e-14 {
                continue;
            }
            let ratio = w.prob(n + 1) / p;
            let expected = lambda / (n + 1) as f64;
            prop_assert!(
                (ratio / expected - 1.0).abs() <= 1e-9,
                "p({})/p({n}) = {ratio}, Poisson says {expected}",
                n + 1
            );
        }
    }

    /// Central finite differences on a table sampled from a quadratic
    /// E_n = a + b·n + c·n² recover b + 2c·n̄ and 2c to rounding, leave no
    /// spurious third derivative, and classify as perfect revivals.
    #[test]
    fn quadratic_table_differences_recover_the_coefficients(
        a in -5.0f64..5.0,
        b in 0.1f64..10.0,
        c in 0.05f64..10.0,
        n_bar in 3i64..=40,
    ) {
        let table: Vec<(i64, f64)> = (n_bar - 2..=n_bar + 2)
            .map(|n| (n, a + b * n as f64 + c * (n * n) as f64))
            .collect();
        let e_scale = table.iter().map(|(_, e)| e.abs()).fold(1.0f64, f64::max);
        let spectrum = Spectrum::tabulated(table).unwrap();
        let d = spectrum.derivatives(n_bar).unwrap();

        // Differencing cancels digits, so the tolerance scales with the
        // table's magnitude, not the derivative's.
        let tol = 1e-10 * e_scale;
        prop_assert!((d.first - (b + 2.0 * c * n_bar as f64)).abs() <= tol);
        prop_assert!((d.second - 2.0 * c).abs() <= tol);
        prop_assert!(d.third.abs() <= tol);

        let scales = spectrum.time_scales(n_bar).unwrap();
        prop_assert_eq!(revivals::classify(&scales), RevivalClass::PerfectRevivals);
        let t_rev = scales.revival.finite().unwrap();
        prop_assert!((t_rev / (2.0 * TAU / (2.0 * c)) - 1.0).abs() <= 1e-6);
    }

    /// A five-point table sampled from the hydrogen spectrum reproduces the
    /// closed-form derivatives to the stencil's truncation order: the
    /// next Taylor term is two powers of n̄ down, so the agreement
    /// tightens as n̄ grows.
    #[test]
    fn hydrogen_table_stencil_tracks_the_closed_form(n_bar in 60i64..300) {
        let table: Vec<(i64, f64)> = (n_bar - 2..=n_bar + 2)
            .map(|n| (n, -0.5 / (n * n) as f64))
            .collect();
        let tabulated = Spectrum::tabulated(table).unwrap();
        let fd = tabulated.derivatives(n_bar).unwrap();
        let exact = Spectrum::hydrogen().derivatives(n_bar).unwrap();

        prop_assert!((fd.first / exact.first - 1.0).abs() <= 1e-3);
        prop_assert!((fd.second / exact.second - 1.0).abs() <= 1e-3);
        prop_assert!((fd.third / exact.third - 1.0).abs() <= 1e-2);
    }

    /// |A(t)|² is a squared overlap of unit vectors: it lives in [0, 1]
    /// for any packet at any time.
    #[test]
    fn autocorrelation_stays_in_the_unit_interval(
        n_bar in 5i64..80,
        sigma in 0.5f64..3.0,
        t in 0.0f64..200.0,
    ) {
        let spectrum = Spectrum::infinite_well(1.0).unwrap();
        let weights = gaussian_weights(n_bar, sigma, spectrum.n_min(), DEFAULT_MASS_TOL).unwrap();
        let v = autocorr_value(&weights, &spectrum, t).unwrap();
        prop_assert!((0.0..=1.0 + 1e-9).contains(&v), "|A|² = {v}");
    }

    /// Box evolution is exactly periodic in t_rev (every phase advances by
    /// a multiple of 2π) and time-symmetric about zero because the weights
    /// are real: |A(t_rev − t)|² = |A(−t)|² = |A(t)|².
    #[test]
    fn box_autocorrelation_is_periodic_and_time_symmetric(
        n_bar in 5i64..40,
        sigma in 0.5f64..2.5,
        fraction in 0.0f64..1.0,
    ) {
        let spectrum = Spectrum::infinite_well(1.0).unwrap();
        let weights = gaussian_weights(n_bar, sigma, spectrum.n_min(), DEFAULT_MASS_TOL).unwrap();
        let t_rev = spectrum
            .time_scales(n_bar)
            .unwrap()
            .revival
            .finite()
            .unwrap();
        let t = fraction * t_rev;
        let here = autocorr_value(&weights, &spectrum, t).unwrap();
        let next_cycle = autocorr_value(&weights, &spectrum, t + t_rev).unwrap();
        let mirrored = autocorr_value(&weights, &spectrum, t_rev - t).unwrap();
        prop_assert!((next_cycle - here).abs() <= 1e-10);
        prop_assert!((mirrored - here).abs() <= 1e-10);
    }

    /// The free-particle series starts at 1 and never rises again, for any
    /// packet parameters.
    #[test]
    fn free_particle_series_is_monotone(
        p0 in 0.0f64..10.0,
        sigma in 0.2f64..4.0,
        t_max in 0.5f64..5.0,
    ) {
        let series = free_particle_series(p0, sigma, t_max, t_max / 400.0).unwrap();
        prop_assert_eq!(series.values[0], 1.0);
        for w in series.values.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
    }

    /// The peak detector agrees with a direct scan: same peak count with
    /// suppression off, every interior peak within half a sample of a true
    /// local maximum, strictly ascending times, everything above the
    /// height threshold, and suppression radii honored when switched on.
    #[test]
    fn detected_peaks_match_a_direct_scan(
        values in prop::collection::vec(0.0f64..1.0, 12..240),
        dt in 1e-3f64..2.0,
        min_height in 0.0f64..0.8,
        separation_steps in 1usize..10,
    ) {
        let times: Vec<f64> = (0..values.len()).map(|i| i as f64 * dt).collect();
        let series = AutocorrSeries { times: times.clone(), values: values.clone() };

        let options = PeakOptions { min_height, min_separation: 0.0 };
        let peaks = detect_peaks(&series, &options);

        // Direct scan: the boundary rule plus the interior rule.
        let n = values.len();
        let mut raw: Vec<usize> = Vec::new();
        if values[0] > values[1] && values[0] > min_height {
            raw.push(0);
        }
        for i in 1..n - 1 {
            if values[i] > values[i - 1] && values[i] >= values[i + 1] && values[i] > min_height {
                raw.push(i);
            }
        }
        if values[n - 1] > values[n - 2] && values[n - 1] > min_height {
            raw.push(n - 1);
        }

        prop_assert_eq!(peaks.len(), raw.len());
        for (peak, &i) in peaks.iter().zip(&raw) {
            prop_assert!((peak.time - times[i]).abs() <= 0.5001 * dt);
            prop_assert!(peak.height > min_height);
        }
        for w in peaks.windows(2) {
            prop_assert!(w[1].time > w[0].time);
        }

        // With suppression on, survivors keep their distance and still sit
        // on true maxima.
        let min_separation = separation_steps as f64 * dt;
        let suppressed = detect_peaks(
            &series,
            &PeakOptions { min_height, min_separation },
        );
        prop_assert!(suppressed.len() <= peaks.len());
        for w in suppressed.windows(2) {
            prop_assert!(w[1].time - w[0].time >= min_separation);
        }
        for peak in &suppressed {
            prop_assert!(raw
                .iter()
                .any(|&i| (peak.time - times[i]).abs() <= 0.5001 * dt));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The extended-precision phase reducer agrees with exact rational
    /// arithmetic (π to 100 digits) for products E·t up to ~10⁸ radians,
    /// where a naive `(e * t) % TAU` has already lost eight digits.
    #[test]
    fn reduce_phase_agrees_with_exact_rational_arithmetic(
        e_millis in 1i64..2_000_000,
        t_centis in 1i64..5_000_000,
    ) {
        let e = e_millis as f64 / 1000.0;
        let t = t_centis as f64 / 100.0;
        let reduced = reduce_phase(e, t);
        let exact = reduce_phase_exact(e, t);
        prop_assert!((0.0..TAU).contains(&reduced));
        let distance = circular_distance(reduced, exact);
        prop_assert!(
            distance <= 1e-9,
            "reduce_phase({e}, {t}) = {reduced}, exact {exact}, off by {distance:.3e}"
        );
    }
}
