//! Energy spectra E_n and the revival time-scale hierarchy.
//!
//! A packet Ψ(r,t) = Σ c_n ψ_n(r) e^{−iE_n t} built from a narrow band of
//! eigenstates around n̄ evolves on time scales fixed by the Taylor
//! expansion of the spectrum about n̄ (writing k = n − n̄):
//!
//! ```text
//!   E_n ≈ E_n̄ + E′·k + E″·k²/2 + E‴·k³/6
//! ```
//!
//! Each derivative order defines a scale:
//!
//! ```text
//!   T_cl  = 2π / |E′|        classical period
//!   t_rev = 2π / (|E″|/2)    revival time
//!   t_sr  = 2π / (|E‴|/6)    superrevival time
//! ```
//!
//! A vanishing derivative pushes its scale to infinity, so the polynomial
//! degree of E_n in n determines the qualitative motion: linear spectra are
//! perfectly periodic, quadratic spectra have perfect revivals, and
//! higher-degree (e.g. hydrogenic) spectra add a superrevival cycle on top.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize, Serializer};

/// Relative zero tolerance below which a spectral derivative is treated as
/// exactly zero and its time scale as unbounded: |E⁽ᵏ⁾| < 10⁻¹²·max(1, |E_n̄|).
/// Distinguishes true degeneracies (the SHO's E″ = 0) from rounding residue.
pub const DERIVATIVE_ZERO_TOL: f64 = 1e-12;

/// The closed-form systems plus numeric escapes (quadratic polynomial and
/// tabulated levels) that share the same derivative/time-scale machinery.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumKind {
    /// Harmonic oscillator in `dim` spatial dimensions:
    /// E_n = (n + dim/2)·ω, n ≥ 0.
    HarmonicOscillator { omega: f64, dim: u32 },
    /// Infinite square well of width L: E_n = n²π²/(2L²), n ≥ 1.
    InfiniteWell { length: f64 },
    /// Rigid rotator with moment of inertia I: E_n = n²/(2I), any integer n.
    RigidRotator { inertia: f64 },
    /// Hydrogen bound states: E_n = −1/(2n²), n ≥ 1.
    Hydrogen,
    /// Quadratic model spectrum E_n = a + b·n + c·n², n ≥ 0.
    Polynomial { a: f64, b: f64, c: f64 },
    /// Consecutive tabulated levels E_{n0}, E_{n0+1}, ...
    Tabulated { n0: i64, energies: Vec<f64> },
}

/// An energy spectrum: eigenenergies indexed by an integer quantum number,
/// with analytic or finite-difference derivatives about a chosen n̄.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    kind: SpectrumKind,
}

/// First three derivatives of E_n with respect to n at n̄, signs included.
/// The time scales use only the magnitudes; snapshot orientations (via the
/// third-order evolver) need the signs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    /// dE/dn at n̄.
    pub first: f64,
    /// d²E/dn² at n̄.
    pub second: f64,
    /// d³E/dn³ at n̄.
    pub third: f64,
}

/// A time scale that is either finite or pushed to infinity by a vanishing
/// spectral derivative. Serializes as the number itself or the string
/// `"unbounded"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scale {
    /// A positive, finite time in atomic units.
    Finite(f64),
    /// The corresponding derivative is zero: the scale never arrives.
    Unbounded,
}

impl Scale {
    /// The finite value, if any.
    pub fn finite(self) -> Option<f64> {
        match self {
            Scale::Finite(t) => Some(t),
            Scale::Unbounded => None,
        }
    }

    /// True when the scale is unbounded (its derivative vanished).
    pub fn is_unbounded(self) -> bool {
        matches!(self, Scale::Unbounded)
    }

    /// The value with unbounded mapped to +∞, for ordering comparisons.
    pub fn as_f64(self) -> f64 {
        match self {
            Scale::Finite(t) => t,
            Scale::Unbounded => f64::INFINITY,
        }
    }
}

impl Serialize for Scale {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scale::Finite(t) => serializer.serialize_f64(*t),
            Scale::Unbounded => serializer.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for Scale {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Word(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(t) => Ok(Scale::Finite(t)),
            Raw::Word(w) if w == "unbounded" => Ok(Scale::Unbounded),
            Raw::Word(w) => Err(serde::de::Error::custom(format!(
                "expected a number or \"unbounded\", got \"{w}\""
            ))),
        }
    }
}

/// The classical/revival/superrevival hierarchy of a packet centered at n̄.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeScales {
    /// The packet center the expansion was taken around.
    pub n_bar: i64,
    /// T_cl = 2π/|E′|.
    pub classical: Scale,
    /// t_rev = 4π/|E″|.
    pub revival: Scale,
    /// t_sr = 12π/|E‴|.
    pub superrevival: Scale,
}

/// Qualitative revival behavior, fixed by which scales are finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RevivalClass {
    /// E_n linear in n: every scale beyond T_cl is unbounded and the packet
    /// repeats exactly with period T_cl.
    PerfectlyPeriodic,
    /// E_n quadratic in n: finite t_rev, unbounded t_sr; the full revival
    /// at t_rev is a perfect replica of the initial packet.
    PerfectRevivals,
    /// E‴ ≠ 0 (hydrogenic and general spectra): revivals are imperfect and
    /// a superrevival cycle appears at t_sr.
    Superrevivals,
}

/// Classifies a scale hierarchy per the taxonomy above.
pub fn classify(scales: &TimeScales) -> RevivalClass {
    if !scales.superrevival.is_unbounded() {
        RevivalClass::Superrevivals
    } else if !scales.revival.is_unbounded() {
        RevivalClass::PerfectRevivals
    } else {
        RevivalClass::PerfectlyPeriodic
    }
}

impl Spectrum {
    /// Harmonic oscillator, E_n = (n + dim/2)·ω.
    pub fn harmonic_oscillator(omega: f64, dim: u32) -> Result<Self> {
        if omega.is_nan() || omega <= 0.0 {
            return Err(Error::InvalidSpectrum(format!(
                "oscillator frequency must be positive, got {omega}"
            )));
        }
        if dim == 0 {
            return Err(Error::InvalidSpectrum(
                "oscillator dimension must be at least 1".into(),
            ));
        }
        Ok(Self {
            kind: SpectrumKind::HarmonicOscillator { omega, dim },
        })
    }

    /// Infinite square well of width L, E_n = n²π²/(2L²).
    pub fn infinite_well(length: f64) -> Result<Self> {
        if length.is_nan() || length <= 0.0 {
            return Err(Error::InvalidSpectrum(format!(
                "well width must be positive, got {length}"
            )));
        }
        Ok(Self {
            kind: SpectrumKind::InfiniteWell { length },
        })
    }

    /// Rigid rotator with moment of inertia I, E_n = n²/(2I).
    pub fn rigid_rotator(inertia: f64) -> Result<Self> {
        if inertia.is_nan() || inertia <= 0.0 {
            return Err(Error::InvalidSpectrum(format!(
                "moment of inertia must be positive, got {inertia}"
            )));
        }
        Ok(Self {
            kind: SpectrumKind::RigidRotator { inertia },
        })
    }

    /// Hydrogen bound states, E_n = −1/(2n²).
    pub fn hydrogen() -> Self {
        Self {
            kind: SpectrumKind::Hydrogen,
        }
    }

    /// Quadratic model spectrum E_n = a + b·n + c·n².
    pub fn polynomial(a: f64, b: f64, c: f64) -> Self {
        Self {
            kind: SpectrumKind::Polynomial { a, b, c },
        }
    }

    /// Tabulated spectrum from (n, E_n) pairs; the quantum numbers must be
    /// consecutive integers (any order of supply, at least one level).
    pub fn tabulated(mut pairs: Vec<(i64, f64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidSpectrum(
                "tabulated spectrum needs at least one level".into(),
            ));
        }
        pairs.sort_by_key(|&(n, _)| n);
        let n0 = pairs[0].0;
        for (i, &(n, _)) in pairs.iter().enumerate() {
            if n != n0 + i as i64 {
                return Err(Error::InvalidSpectrum(format!(
                    "tabulated quantum numbers must be consecutive; gap or duplicate near n = {n}"
                )));
            }
        }
        let energies = pairs.into_iter().map(|(_, e)| e).collect();
        Ok(Self {
            kind: SpectrumKind::Tabulated { n0, energies },
        })
    }

    /// Tabulated spectrum from two-column CSV text (`n,energy` per line;
    /// blank lines and `#` comments ignored; an optional non-numeric header
    /// line is skipped).
    pub fn tabulated_from_csv<R: std::io::BufRead>(reader: R) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut cols = trimmed.split(',').map(str::trim);
            let parsed = (|| {
                let n: i64 = cols.next()?.parse().ok()?;
                let e: f64 = cols.next()?.parse().ok()?;
                Some((n, e))
            })();
            match parsed {
                Some(pair) => pairs.push(pair),
                // Tolerate header rows before the first data row.
                None if pairs.is_empty() => continue,
                None => {
                    return Err(Error::InvalidSpectrum(format!(
                        "CSV line {} is not `n,energy`: {trimmed:?}",
                        lineno + 1
                    )))
                }
            }
        }
        Self::tabulated(pairs)
    }

    /// The underlying kind.
    pub fn kind(&self) -> &SpectrumKind {
        &self.kind
    }

    /// Short kind name for diagnostics.
    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            SpectrumKind::HarmonicOscillator { .. } => "harmonic-oscillator",
            SpectrumKind::InfiniteWell { .. } => "infinite-well",
            SpectrumKind::RigidRotator { .. } => "rigid-rotator",
            SpectrumKind::Hydrogen => "hydrogen",
            SpectrumKind::Polynomial { .. } => "polynomial",
            SpectrumKind::Tabulated { .. } => "tabulated",
        }
    }

    /// Smallest admissible quantum number, or `None` when the spectrum is
    /// unbounded below (the rotator, where n runs over all integers).
    pub fn n_min(&self) -> Option<i64> {
        match &self.kind {
            SpectrumKind::HarmonicOscillator { .. } | SpectrumKind::Polynomial { .. } => Some(0),
            SpectrumKind::InfiniteWell { .. } | SpectrumKind::Hydrogen => Some(1),
            SpectrumKind::RigidRotator { .. } => None,
            SpectrumKind::Tabulated { n0, .. } => Some(*n0),
        }
    }

    /// Largest admissible quantum number (tabulated spectra only).
    pub fn n_max(&self) -> Option<i64> {
        match &self.kind {
            SpectrumKind::Tabulated { n0, energies } => Some(n0 + energies.len() as i64 - 1),
            _ => None,
        }
    }

    /// The eigenenergy E_n in atomic units.
    pub fn energy(&self, n: i64) -> Result<f64> {
        self.check_range(n)?;
        Ok(match &self.kind {
            SpectrumKind::HarmonicOscillator { omega, dim } => {
                (n as f64 + *dim as f64 / 2.0) * omega
            }
            SpectrumKind::InfiniteWell { length } => {
                let n = n as f64;
                n * n * std::f64::consts::PI.powi(2) / (2.0 * length * length)
            }
            SpectrumKind::RigidRotator { inertia } => {
                let n = n as f64;
                n * n / (2.0 * inertia)
            }
            SpectrumKind::Hydrogen => {
                let n = n as f64;
                -0.5 / (n * n)
            }
            SpectrumKind::Polynomial { a, b, c } => {
                let n = n as f64;
                a + b * n + c * n * n
            }
            SpectrumKind::Tabulated { n0, energies } => energies[(n - n0) as usize],
        })
    }

    /// First three derivatives of E_n with respect to n at n̄.
    ///
    /// Closed forms for the analytic kinds; central finite differences at
    /// unit spacing for tabulated spectra, which therefore need every level
    /// in [n̄−2, n̄+2]:
    ///
    /// ```text
    ///   E′ ≈ (E₊₁ − E₋₁)/2
    ///   E″ ≈ E₊₁ − 2E₀ + E₋₁
    ///   E‴ ≈ (E₊₂ − 2E₊₁ + 2E₋₁ − E₋₂)/2
    /// ```
    pub fn derivatives(&self, n_bar: i64) -> Result<Derivatives> {
        self.check_range(n_bar)?;
        let nb = n_bar as f64;
        Ok(match &self.kind {
            SpectrumKind::HarmonicOscillator { omega, .. } => Derivatives {
                first: *omega,
                second: 0.0,
                third: 0.0,
            },
            SpectrumKind::InfiniteWell { length } => {
                let pi2_over_l2 = std::f64::consts::PI.powi(2) / (length * length);
                Derivatives {
                    first: nb * pi2_over_l2,
                    second: pi2_over_l2,
                    third: 0.0,
                }
            }
            SpectrumKind::RigidRotator { inertia } => Derivatives {
                first: nb / inertia,
                second: 1.0 / inertia,
                third: 0.0,
            },
            // E = −n⁻²/2 ⇒ E⁽ᵏ⁾ = −(−1)ᵏ (k+1)!/2 · n^{−(k+2)}
            SpectrumKind::Hydrogen => Derivatives {
                first: nb.powi(-3),
                second: -3.0 * nb.powi(-4),
                third: 12.0 * nb.powi(-5),
            },
            SpectrumKind::Polynomial { b, c, .. } => Derivatives {
                first: b + 2.0 * c * nb,
                second: 2.0 * c,
                third: 0.0,
            },
            SpectrumKind::Tabulated { n0, energies } => {
                let lo = n_bar - 2;
                let hi = n_bar + 2;
                if lo < *n0 || hi > n0 + energies.len() as i64 - 1 {
                    return Err(Error::StencilOutsideTable { n_bar, lo, hi });
                }
                let e = |k: i64| energies[(n_bar + k - n0) as usize];
                Derivatives {
                    first: (e(1) - e(-1)) / 2.0,
                    second: e(1) - 2.0 * e(0) + e(-1),
                    third: (e(2) - 2.0 * e(1) + 2.0 * e(-1) - e(-2)) / 2.0,
                }
            }
        })
    }

    /// Derivatives with sub-tolerance components snapped to exactly zero,
    /// consistently with [`Spectrum::time_scales`]: a derivative below
    /// 10⁻¹²·max(1, |E_n̄|) contributes no phase and no finite scale.
    pub fn effective_derivatives(&self, n_bar: i64) -> Result<Derivatives> {
        let d = self.derivatives(n_bar)?;
        let tol = DERIVATIVE_ZERO_TOL * self.energy(n_bar)?.abs().max(1.0);
        let snap = |x: f64| if x.abs() < tol { 0.0 } else { x };
        Ok(Derivatives {
            first: snap(d.first),
            second: snap(d.second),
            third: snap(d.third),
        })
    }

    /// The classical/revival/superrevival hierarchy at n̄:
    /// T_cl = 2π/|E′|, t_rev = 4π/|E″|, t_sr = 12π/|E‴|, with a scale
    /// unbounded whenever its derivative magnitude falls below the zero
    /// tolerance.
    pub fn time_scales(&self, n_bar: i64) -> Result<TimeScales> {
        let d = self.effective_derivatives(n_bar)?;
        let scale = |deriv: f64, order_factor: f64| {
            if deriv == 0.0 {
                Scale::Unbounded
            } else {
                Scale::Finite(order_factor * std::f64::consts::TAU / deriv.abs())
            }
        };
        Ok(TimeScales {
            n_bar,
            classical: scale(d.first, 1.0),
            revival: scale(d.second, 2.0),
            superrevival: scale(d.third, 6.0),
        })
    }

    fn check_range(&self, n: i64) -> Result<()> {
        if let Some(n_min) = self.n_min() {
            if n < n_min {
                return match &self.kind {
                    SpectrumKind::Tabulated { .. } => Err(Error::QuantumNumberOutsideTable {
                        n,
                        lo: n_min,
                        hi: self.n_max().unwrap(),
                    }),
                    _ => Err(Error::QuantumNumberBelowFloor { n, n_min }),
                };
            }
        }
        if let Some(n_max) = self.n_max() {
            if n > n_max {
                return Err(Error::QuantumNumberOutsideTable {
                    n,
                    lo: self.n_min().unwrap(),
                    hi: n_max,
                });
            }
        }
        Ok(())
    }
}
