//! Autocorrelation series, peak detection, local-period estimation, and the
//! revival report.
//!
//! The autocorrelation function needs no spatial grid at all: with the
//! packet expanded over energy eigenstates, the overlap with its initial
//! self collapses to a pure spectral sum,
//!
//! ```text
//!   |A(t)|² = |Σ_n |c_n|² e^{−iE_n t}|²,
//! ```
//!
//! so a half-million-sample series over thousands of classical periods is
//! just a weighted trigonometric sum per sample. Peaks of |A(t)|² mark the
//! times the packet returns to (or near) its initial shape; the revival
//! report matches them against the predictions of the time-scale hierarchy.

use crate::error::{Error, Result};
use crate::phase::reduce_phase;
use crate::spectra::{classify, RevivalClass, Scale, Spectrum, TimeScales};
use crate::weights::WeightDistribution;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

/// A sampled |A(t)|² series on a uniform time grid.
#[derive(Debug, Clone)]
pub struct AutocorrSeries {
    /// Sample times, uniformly spaced from zero.
    pub times: Vec<f64>,
    /// |A(t)|² at each sample.
    pub values: Vec<f64>,
}

impl AutocorrSeries {
    /// Number of samples.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    /// Whether the series is empty.
    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// The sample spacing, if the series has at least two samples.
    pub fn dt(&self) -> Option<f64> {
        (self.times.len() >= 2).then(|| self.times[1] - self.times[0])
    }
}

/// |A(t)|² at a single time, from the spectral sum Σ|c_n|²e^{−iE_n t}
/// with extended-precision phase reduction.
pub fn autocorr_value(weights: &WeightDistribution, spectrum: &Spectrum, t: f64) -> Result<f64> {
    let mut acc = Complex64::ZERO;
    for (n, c) in weights.iter() {
        let p = c.norm_sqr();
        if p == 0.0 {
            continue;
        }
        let (sin, cos) = reduce_phase(spectrum.energy(n)?, t).sin_cos();
        acc += p * Complex64::new(cos, -sin);
    }
    Ok(acc.norm_sqr())
}

/// The fastest beat period 2π / max_n |E_n − E_n̄| over the weight window:
/// the shortest oscillation the series can contain. (The common phase
/// e^{−iE_n̄ t} cancels inside |A(t)|², so only detunings from the packet
/// center beat.)
pub fn fastest_beat_period(weights: &WeightDistribution, spectrum: &Spectrum) -> Result<f64> {
    let e_bar = spectrum.energy(weights.n_bar())?;
    let (lo, hi) = weights.window();
    let mut max_detuning = 0.0f64;
    for n in lo..=hi {
        max_detuning = max_detuning.max((spectrum.energy(n)? - e_bar).abs());
    }
    if max_detuning == 0.0 {
        return Err(Error::InvalidSpectrum(
            "all window energies are degenerate; the autocorrelation is constant".into(),
        ));
    }
    Ok(TAU / max_detuning)
}

/// Default sample spacing: one sixteenth of the fastest beat period,
/// comfortably inside the Nyquist guard.
pub fn default_time_step(weights: &WeightDistribution, spectrum: &Spectrum) -> Result<f64> {
    Ok(fastest_beat_period(weights, spectrum)? / 16.0)
}

/// Samples |A(t)|² at t = 0, dt, 2·dt, … up to `t_max`.
///
/// Rejects spacings coarser than an eighth of the fastest beat period: an
/// undersampled series aliases the classical oscillation and every
/// downstream peak picker would report fiction.
pub fn autocorr_series(
    weights: &WeightDistribution,
    spectrum: &Spectrum,
    t_max: f64,
    dt: f64,
) -> Result<AutocorrSeries> {
    check_sampling(t_max, dt)?;
    let required = fastest_beat_period(weights, spectrum)? / 8.0;
    if dt > required {
        return Err(Error::TimeStepTooCoarse { dt, required });
    }
    // The +1e-9 absorbs a one-ulp droop in t_max/dt when t_max is an exact
    // multiple of dt, so the endpoint sample is not lost to rounding.
    let steps = (t_max / dt + 1e-9).floor() as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut values = Vec::with_capacity(steps + 1);
    for i in 0..=steps {
        let t = i as f64 * dt;
        times.push(t);
        values.push(autocorr_value(weights, spectrum, t)?);
    }
    Ok(AutocorrSeries { times, values })
}

/// The free-particle Gaussian autocorrelation in closed form,
///
/// ```text
///   |A(t)|² = (1 + σ⁴t²)^{−1/2} · exp[−p₀²σ²t² / (1 + σ⁴t²)],
/// ```
///
/// the continuum benchmark that decays monotonically and never revives.
pub fn free_particle_autocorr(p0: f64, sigma: f64, t: f64) -> f64 {
    let s2 = sigma * sigma;
    let denom = 1.0 + s2 * s2 * t * t;
    (-p0 * p0 * s2 * t * t / denom).exp() / denom.sqrt()
}

/// Uniform sampling of the free-particle autocorrelation. The decay is
/// monotone, so no Nyquist guard applies.
pub fn free_particle_series(p0: f64, sigma: f64, t_max: f64, dt: f64) -> Result<AutocorrSeries> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::InvalidSampling(format!(
            "free-particle sigma must be positive, got {sigma}"
        )));
    }
    check_sampling(t_max, dt)?;
    let steps = (t_max / dt + 1e-9).floor() as usize;
    let times: Vec<f64> = (0..=steps).map(|i| i as f64 * dt).collect();
    let values = times
        .iter()
        .map(|&t| free_particle_autocorr(p0, sigma, t))
        .collect();
    Ok(AutocorrSeries { times, values })
}

fn check_sampling(t_max: f64, dt: f64) -> Result<()> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidSampling(format!(
            "t_max must be positive and finite, got {t_max}"
        )));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidSampling(format!(
            "dt must be positive and finite, got {dt}"
        )));
    }
    if t_max / dt > 5e8 {
        return Err(Error::InvalidSampling(format!(
            "t_max/dt = {:.3e} samples would exhaust memory",
            t_max / dt
        )));
    }
    Ok(())
}

/// A detected |A(t)|² peak.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    /// Peak time (parabolically refined for interior samples).
    pub time: f64,
    /// Peak height.
    pub height: f64,
}

/// Peak-detection controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakOptions {
    /// Samples at or below this height are never peaks.
    pub min_height: f64,
    /// Greedy suppression radius: of two peaks closer than this, only the
    /// taller survives. Zero disables suppression.
    pub min_separation: f64,
}

impl Default for PeakOptions {
    fn default() -> Self {
        Self {
            min_height: 0.1,
            min_separation: 0.0,
        }
    }
}

/// Local maxima of the series above `min_height`, in ascending time order.
///
/// Interior maxima satisfy v[i−1] < v[i] ≥ v[i+1] (the asymmetric ties
/// break plateaus toward their first sample) and are refined by fitting a
/// parabola through the three bracketing samples. Boundary samples that
/// exceed their single neighbor count as unrefined peaks, so a revival
/// sitting exactly at t = 0 or t = t_max is not silently dropped.
pub fn detect_peaks(series: &AutocorrSeries, options: &PeakOptions) -> Vec<Peak> {
    let v = &series.values;
    let t = &series.times;
    let n = v.len();
    let mut peaks: Vec<Peak> = Vec::new();

    if n >= 2 && v[0] > v[1] && v[0] > options.min_height {
        peaks.push(Peak {
            time: t[0],
            height: v[0],
        });
    }
    for i in 1..n.saturating_sub(1) {
        if v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] > options.min_height {
            let denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
            let (time, height) = if denom < 0.0 {
                let delta = (0.5 * (v[i - 1] - v[i + 1]) / denom).clamp(-0.5, 0.5);
                (
                    t[i] + delta * (t[i] - t[i - 1]),
                    v[i] - 0.25 * (v[i - 1] - v[i + 1]) * delta,
                )
            } else {
                (t[i], v[i])
            };
            peaks.push(Peak { time, height });
        }
    }
    if n >= 2 && v[n - 1] > v[n - 2] && v[n - 1] > options.min_height {
        peaks.push(Peak {
            time: t[n - 1],
            height: v[n - 1],
        });
    }

    if options.min_separation > 0.0 {
        // Keep peaks tallest-first, discarding any within the suppression
        // radius of an already-kept peak.
        let mut by_height: Vec<Peak> = peaks.clone();
        by_height.sort_by(|a, b| b.height.total_cmp(&a.height));
        let mut kept: Vec<Peak> = Vec::new();
        for p in by_height {
            if kept
                .iter()
                .all(|q| (p.time - q.time).abs() >= options.min_separation)
            {
                kept.push(p);
            }
        }
        kept.sort_by(|a, b| a.time.total_cmp(&b.time));
        return kept;
    }
    peaks
}

/// Median spacing of the default-detected peaks inside
/// [center − window/2, center + window/2], or `None` when fewer than three
/// peaks land there.
pub fn local_period(series: &AutocorrSeries, center: f64, window: f64) -> Option<f64> {
    local_period_with(series, center, window, &PeakOptions::default())
}

/// [`local_period`] with explicit peak-detection controls; the revival
/// report lowers `min_height` to half the matched peak so the shorter
/// sub-packet recurrences around a fractional revival still register.
pub fn local_period_with(
    series: &AutocorrSeries,
    center: f64,
    window: f64,
    options: &PeakOptions,
) -> Option<f64> {
    let lo = center - window / 2.0;
    let hi = center + window / 2.0;
    let inside: Vec<Peak> = detect_peaks(series, options)
        .into_iter()
        .filter(|p| p.time >= lo && p.time <= hi)
        .collect();
    if inside.len() < 3 {
        return None;
    }
    let mut gaps: Vec<f64> = inside.windows(2).map(|w| w[1].time - w[0].time).collect();
    gaps.sort_by(f64::total_cmp);
    let m = gaps.len();
    Some(if m % 2 == 1 {
        gaps[m / 2]
    } else {
        0.5 * (gaps[m / 2 - 1] + gaps[m / 2])
    })
}

/// One predicted recurrence and what the series showed there.
#[derive(Debug, Clone, Serialize)]
pub struct IdentifiedRevival {
    /// Human-readable tag: "3 T_cl", "2/3 t_rev", "1/12 t_sr".
    pub label: String,
    /// Predicted time from the scale hierarchy.
    pub predicted: f64,
    /// Expected local oscillation period at this feature (sub-packet rule).
    pub expected_period: f64,
    /// Whether any detected peak landed within the matching tolerance.
    pub found: bool,
    /// Tallest matched peak time (refined), if found.
    pub detected: Option<f64>,
    /// Matched peak height, if found.
    pub height: Option<f64>,
    /// Measured local period around the matched peak, when at least three
    /// peaks fit in the ±1.5-period window.
    pub local_period: Option<f64>,
}

/// The full revival report for one series.
#[derive(Debug, Clone, Serialize)]
pub struct RevivalReport {
    /// The scale hierarchy the predictions came from.
    pub scales: TimeScales,
    /// Qualitative class implied by the hierarchy.
    pub class: RevivalClass,
    /// Predicted recurrences within the series span, in time order.
    pub revivals: Vec<IdentifiedRevival>,
}

/// Number of sub-packets at the fractional revival p/q·t_rev (gcd(p,q)=1):
/// q for odd q, q/2 for even. Each sub-packet retraces the classical orbit,
/// so the local period there is T_cl divided by this count.
fn subpacket_count(q: u64) -> u64 {
    if q % 2 == 1 {
        q
    } else {
        q / 2
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Matches the scale hierarchy's predicted recurrences against the peaks
/// of a sampled series.
///
/// Predictions are drawn from three families, each skipped when its scale
/// is unbounded:
///
/// * `m T_cl` for m = 1..=10 — classical returns;
/// * `p/q t_rev` for q ∈ {1, 2, 3, 4}, p/q ≤ 1 in lowest terms — full and
///   fractional revivals;
/// * `1/q t_sr` for q ∈ {18, 12, 6} — fractional superrevivals, where the
///   packet reassembles with local period (3/q)·t_rev.
///
/// A prediction is `found` when a default-detected peak lies within
/// max(2·dt, expected_period/2) of it; the half-period slack is necessary,
/// not generous — at a half revival the reassembled packet is a mirror
/// image half a classical period out of phase, so its peaks straddle the
/// nominal time at ±T_cl/2 exactly.
pub fn revival_report(series: &AutocorrSeries, scales: &TimeScales) -> Result<RevivalReport> {
    let Some(dt) = series.dt() else {
        return Err(Error::InvalidSampling(
            "revival report needs at least two samples".into(),
        ));
    };
    let t_max = *series.times.last().expect("dt() implies non-empty");

    // (label, predicted, expected local period)
    let mut predictions: Vec<(String, f64, f64)> = Vec::new();
    if let Scale::Finite(t_cl) = scales.classical {
        for m in 1..=10u64 {
            let predicted = m as f64 * t_cl;
            if predicted > t_max {
                break;
            }
            predictions.push((format!("{m} T_cl"), predicted, t_cl));
        }
        if let Scale::Finite(t_rev) = scales.revival {
            for q in 1..=4u64 {
                for p in 1..=q {
                    if gcd(p, q) != 1 {
                        continue;
                    }
                    let predicted = p as f64 / q as f64 * t_rev;
                    if predicted > t_max {
                        continue;
                    }
                    let label = if q == 1 {
                        format!("{p} t_rev")
                    } else {
                        format!("{p}/{q} t_rev")
                    };
                    predictions.push((label, predicted, t_cl / subpacket_count(q) as f64));
                }
            }
            if let Scale::Finite(t_sr) = scales.superrevival {
                for q in [18u64, 12, 6] {
                    let predicted = t_sr / q as f64;
                    if predicted > t_max {
                        continue;
                    }
                    predictions.push((format!("1/{q} t_sr"), predicted, 3.0 / q as f64 * t_rev));
                }
            }
        }
    }
    predictions.sort_by(|a, b| a.1.total_cmp(&b.1));

    let peaks = detect_peaks(series, &PeakOptions::default());
    let revivals = predictions
        .into_iter()
        .map(|(label, predicted, expected_period)| {
            let tol = (2.0 * dt).max(expected_period / 2.0);
            let found = peaks
                .iter()
                .filter(|p| (p.time - predicted).abs() <= tol)
                .max_by(|a, b| a.height.total_cmp(&b.height));
            match found {
                Some(peak) => {
                    let options = PeakOptions {
                        min_height: peak.height / 2.0,
                        min_separation: expected_period / 2.0,
                    };
                    let local =
                        local_period_with(series, peak.time, 3.0 * expected_period, &options);
                    IdentifiedRevival {
                        label,
                        predicted,
                        expected_period,
                        found: true,
                        detected: Some(peak.time),
                        height: Some(peak.height),
                        local_period: local,
                    }
                }
                None => IdentifiedRevival {
                    label,
                    predicted,
                    expected_period,
                    found: false,
                    detected: None,
                    height: None,
                    local_period: None,
                },
            }
        })
        .collect();

    Ok(RevivalReport {
        scales: *scales,
        class: classify(scales),
        revivals,
    })
}
