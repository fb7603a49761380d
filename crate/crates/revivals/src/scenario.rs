//! Scenario files: the JSON descriptions that bind a spectrum, a weight
//! distribution, snapshot times, and sampling choices into one reproducible
//! computation.
//!
//! A scenario is deliberately declarative — everything downstream (density
//! grids, autocorrelation series, revival reports) is a pure function of
//! it, so the canonical serialization doubles as an identity: artifacts are
//! filed under the first sixteen hex digits of the SHA-256 of the canonical
//! JSON.
//!
//! Snapshot times may be absolute ("0.125") or symbolic in the grammar
//! `<rational> [<scale>] [mod <scale>]` with scales `T_cl`, `t_rev`,
//! `t_sr` — e.g. "1/4 t_rev" or "1/6 t_sr". The optional `mod <scale>`
//! suffix displaces the time by one period of that scale, encoding
//! snapshot labels like "t = 0 mod t_rev" (the first nontrivial
//! recurrence of the t = 0 frame). Symbolic times resolve against the
//! scenario's own time-scale hierarchy; referencing an unbounded scale is
//! a validation error naming the scale.

use crate::autocorr;
use crate::eigenbasis::{Axis, EigenBasis};
use crate::error::{Error, Result};
use crate::spectra::{Scale, Spectrum, TimeScales};
use crate::weights::{
    coherent_weights, custom_weights, gaussian_weights, WeightDistribution, DEFAULT_MASS_TOL,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

/// A parsed scenario file. Field order is the canonical serialization
/// order; reformatting a scenario on disk does not change its hash, but
/// any semantic change does.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Physical system: spectrum plus (where one exists) its eigenbasis.
    pub system: SystemSpec,
    /// Weight distribution over the system's levels. Required for every
    /// discrete system; the free particle's distribution is fixed by its
    /// own `p0`/`sigma`, so it takes none.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightSpec>,
    /// Density snapshot times, absolute or symbolic.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub times: Vec<String>,
    /// Spatial grid for density snapshots.
    #[serde(default)]
    pub grid: GridSpec,
    /// Autocorrelation sampling (required by the autocorr/report artifacts).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub autocorr: Option<AutocorrSpec>,
    /// Optional artifact filename overrides.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<OutputSpec>,
}

/// System selector. The closed-form systems imply their basis; the
/// `polynomial` and `table` dispersion models take an optional explicit
/// basis (without one they support spectral artifacts only); `free` is the
/// continuum benchmark, which has neither discrete levels nor time scales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SystemSpec {
    /// Harmonic oscillator: E_n = (n + dim/2)·ω.
    Sho {
        omega: f64,
        #[serde(default = "default_dim")]
        dim: u32,
    },
    /// Infinite square well of width `length`.
    Well { length: f64 },
    /// Rigid rotator with moment of inertia `inertia`.
    Rotator { inertia: f64 },
    /// Hydrogen Rydberg levels with the circular-state basis.
    Hydrogen {},
    /// Quadratic model spectrum E_n = a + b·n + c·n².
    Polynomial {
        a: f64,
        b: f64,
        c: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        basis: Option<BasisSpec>,
    },
    /// Tabulated levels, inline or from a two-column CSV (n, E_n).
    Table {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n0: Option<i64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        energies: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        csv: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        basis: Option<BasisSpec>,
    },
    /// Free Gaussian packet (autocorrelation only).
    Free { p0: f64, sigma: f64 },
}

fn default_dim() -> u32 {
    1
}

/// Explicit basis for the model spectra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum BasisSpec {
    Sho { omega: f64 },
    Box { length: f64 },
    Rotator {},
}

/// Weight selector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum WeightSpec {
    /// Real Gaussian weights centered on `n_bar` with width `sigma`.
    Gaussian {
        n_bar: i64,
        sigma: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mass_tol: Option<f64>,
    },
    /// Coherent-state weights with Poissonian |c_n|².
    Coherent { alpha: AlphaSpec, n_cap: i64 },
    /// Explicit coefficients, inline `[n, re, im]` rows or a CSV file with
    /// columns (n, re, im).
    Custom {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        states: Option<Vec<(i64, f64, f64)>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        csv: Option<String>,
    },
}

/// Coherent amplitude: a plain number (real α) or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    Real(f64),
    Complex([f64; 2]),
}

impl AlphaSpec {
    fn value(self) -> Complex64 {
        match self {
            AlphaSpec::Real(re) => Complex64::new(re, 0.0),
            AlphaSpec::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

/// Grid selector: the string "default" or explicit axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Named(String),
    Axes(Vec<AxisSpec>),
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::Named("default".into())
    }
}

/// One axis: `len` points from `start` to `stop`. A periodic axis treats
/// `stop` as identified with `start` (the endpoint sample is excluded).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub start: f64,
    pub stop: f64,
    pub len: usize,
    #[serde(default)]
    pub periodic: bool,
}

/// Autocorrelation sampling. `t_max` (and optionally `dt`) may be symbolic,
/// e.g. `"1.1 t_rev"`; `dt` defaults to one sixteenth of the fastest beat
/// period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutocorrSpec {
    pub t_max: TimeValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<TimeValue>,
}

/// A number in atomic units or a symbolic time expression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TimeValue {
    Number(f64),
    Expr(String),
}

/// Artifact filename overrides (relative to the scenario's hash directory).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Stem prefix for density files (default "density").
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<String>,
    /// Autocorrelation CSV filename (default "autocorr.csv").
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub autocorr: Option<String>,
    /// Report JSON filename (default "report.json").
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<String>,
}

/// A snapshot time with its original label.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedTime {
    /// The scenario's time string, verbatim.
    pub label: String,
    /// Absolute time in atomic units.
    pub time: f64,
}

/// A compiled scenario: specs resolved into live objects, symbolic times
/// resolved into atomic units.
#[derive(Debug, Clone)]
pub struct Compiled {
    /// First sixteen hex digits of the canonical-JSON SHA-256.
    pub hash: String,
    /// Resolved snapshot times, in scenario order.
    pub times: Vec<ResolvedTime>,
    /// The physical content.
    pub content: CompiledSystem,
}

/// The physical half of a compiled scenario.
#[derive(Debug, Clone)]
pub enum CompiledSystem {
    /// A discrete system: spectrum, weights, scales, and (when the system
    /// has a position representation) the basis and snapshot grid.
    Bound {
        spectrum: Spectrum,
        weights: WeightDistribution,
        scales: TimeScales,
        basis: Option<EigenBasis>,
        grid: Option<Vec<Axis>>,
        autocorr: Option<(f64, f64)>,
    },
    /// The free Gaussian benchmark (autocorrelation only).
    Free {
        p0: f64,
        sigma: f64,
        autocorr: Option<(f64, f64)>,
    },
}

impl Scenario {
    /// Parses a scenario from JSON text.
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads and parses a scenario file, returning it with its directory
    /// (the base for relative CSV paths).
    pub fn from_path(path: &Path) -> Result<(Self, PathBuf)> {
        let text = fs::read_to_string(path)?;
        let scenario = Self::from_json(&text)?;
        let base = path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."));
        Ok((scenario, base))
    }

    /// The canonical serialization: compact JSON in declaration field
    /// order. Two scenarios with equal canonical JSON are the same
    /// computation.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("scenario serialization cannot fail")
    }

    /// First sixteen hex digits of the SHA-256 of the canonical JSON.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        let mut hex = String::with_capacity(16);
        for byte in &digest[..8] {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }

    /// Resolves the scenario against live objects. Relative CSV paths are
    /// taken against `base_dir`. Gaussian windows are floored at the
    /// stricter of the spectrum's and the basis's lowest admissible level.
    /// The spectrum must support derivative evaluation at the packet
    /// center — a tabulated spectrum needs the five-point stencil inside
    /// the table — because every scenario resolves its time scales.
    pub fn compile(&self, base_dir: &Path) -> Result<Compiled> {
        let hash = self.hash();

        if let SystemSpec::Free { p0, sigma } = self.system {
            if self.weights.is_some() {
                return Err(Error::ScenarioInvalid {
                    field: "weights".into(),
                    message: "the free particle's momentum distribution is set by p0 and \
                              sigma; omit `weights`"
                        .into(),
                });
            }
            if !(sigma > 0.0 && sigma.is_finite()) {
                return Err(Error::ScenarioInvalid {
                    field: "system.sigma".into(),
                    message: format!("free-particle sigma must be positive, got {sigma}"),
                });
            }
            if !p0.is_finite() {
                return Err(Error::ScenarioInvalid {
                    field: "system.p0".into(),
                    message: "free-particle p0 must be finite".into(),
                });
            }
            let times = self
                .times
                .iter()
                .map(|expr| {
                    Ok(ResolvedTime {
                        label: expr.clone(),
                        time: parse_time_expr(expr, None)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let autocorr = match &self.autocorr {
                Some(spec) => {
                    let t_max = resolve_time_value(&spec.t_max, None, "autocorr.t_max")?;
                    let dt = match &spec.dt {
                        Some(v) => resolve_time_value(v, None, "autocorr.dt")?,
                        None => {
                            return Err(Error::ScenarioInvalid {
                                field: "autocorr.dt".into(),
                                message: "the free particle has no beat period; dt must be \
                                          given explicitly"
                                    .into(),
                            })
                        }
                    };
                    Some((t_max, dt))
                }
                None => None,
            };
            return Ok(Compiled {
                hash,
                times,
                content: CompiledSystem::Free {
                    p0,
                    sigma,
                    autocorr,
                },
            });
        }

        let (spectrum, basis) = self.build_system(base_dir)?;
        let weight_spec = self
            .weights
            .as_ref()
            .ok_or_else(|| Error::ScenarioInvalid {
                field: "weights".into(),
                message: "a discrete system needs a weight distribution".into(),
            })?;
        let weights = build_weights(weight_spec, base_dir, &spectrum, basis.as_ref())?;
        let scales = spectrum.time_scales(weights.n_bar())?;

        let times = self
            .times
            .iter()
            .map(|expr| {
                Ok(ResolvedTime {
                    label: expr.clone(),
                    time: parse_time_expr(expr, Some(&scales))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let grid = match (&self.grid, &basis) {
            (_, None) => None,
            (GridSpec::Named(name), Some(basis)) => {
                if name != "default" {
                    return Err(Error::ScenarioInvalid {
                        field: "grid".into(),
                        message: format!("unknown grid name {name:?}; expected \"default\""),
                    });
                }
                Some(basis.default_grid(weights.n_bar()))
            }
            (GridSpec::Axes(specs), Some(basis)) => {
                let expected = match basis {
                    EigenBasis::CircularHydrogen => 2,
                    _ => 1,
                };
                if specs.len() != expected {
                    return Err(Error::ScenarioInvalid {
                        field: "grid".into(),
                        message: format!(
                            "the {} basis needs {expected} axis(es), got {}",
                            basis.kind_name(),
                            specs.len()
                        ),
                    });
                }
                Some(specs.iter().map(build_axis).collect::<Result<Vec<_>>>()?)
            }
        };

        let autocorr = match &self.autocorr {
            Some(spec) => {
                let t_max = resolve_time_value(&spec.t_max, Some(&scales), "autocorr.t_max")?;
                let dt = match &spec.dt {
                    Some(v) => resolve_time_value(v, Some(&scales), "autocorr.dt")?,
                    None => autocorr::default_time_step(&weights, &spectrum)?,
                };
                Some((t_max, dt))
            }
            None => None,
        };

        Ok(Compiled {
            hash,
            times,
            content: CompiledSystem::Bound {
                spectrum,
                weights,
                scales,
                basis,
                grid,
                autocorr,
            },
        })
    }

    fn build_system(&self, base_dir: &Path) -> Result<(Spectrum, Option<EigenBasis>)> {
        match &self.system {
            SystemSpec::Sho { omega, dim } => Ok((
                Spectrum::harmonic_oscillator(*omega, *dim)?,
                Some(EigenBasis::Sho { omega: *omega }),
            )),
            SystemSpec::Well { length } => Ok((
                Spectrum::infinite_well(*length)?,
                Some(EigenBasis::Box { length: *length }),
            )),
            SystemSpec::Rotator { inertia } => Ok((
                Spectrum::rigid_rotator(*inertia)?,
                Some(EigenBasis::Rotator),
            )),
            SystemSpec::Hydrogen {} => {
                Ok((Spectrum::hydrogen(), Some(EigenBasis::CircularHydrogen)))
            }
            SystemSpec::Polynomial { a, b, c, basis } => Ok((
                Spectrum::polynomial(*a, *b, *c),
                build_basis(basis.as_ref()),
            )),
            SystemSpec::Table {
                n0,
                energies,
                csv,
                basis,
            } => {
                let spectrum = match (energies, csv) {
                    (Some(values), None) => {
                        let n0 = n0.unwrap_or(0);
                        let pairs: Vec<(i64, f64)> = values
                            .iter()
                            .enumerate()
                            .map(|(i, &e)| (n0 + i as i64, e))
                            .collect();
                        Spectrum::tabulated(pairs)?
                    }
                    (None, Some(rel)) => {
                        let file = fs::File::open(base_dir.join(rel))?;
                        Spectrum::tabulated_from_csv(BufReader::new(file))?
                    }
                    _ => {
                        return Err(Error::ScenarioInvalid {
                            field: "system".into(),
                            message: "a table system needs exactly one of `energies` or `csv`"
                                .into(),
                        })
                    }
                };
                Ok((spectrum, build_basis(basis.as_ref())))
            }
            SystemSpec::Free { .. } => unreachable!("free systems are compiled separately"),
        }
    }
}

fn build_weights(
    spec: &WeightSpec,
    base_dir: &Path,
    spectrum: &Spectrum,
    basis: Option<&EigenBasis>,
) -> Result<WeightDistribution> {
    let floor = match (spectrum.n_min(), basis.and_then(EigenBasis::n_floor)) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    };
    match spec {
        WeightSpec::Gaussian {
            n_bar,
            sigma,
            mass_tol,
        } => gaussian_weights(*n_bar, *sigma, floor, mass_tol.unwrap_or(DEFAULT_MASS_TOL)),
        WeightSpec::Coherent { alpha, n_cap } => coherent_weights(alpha.value(), *n_cap),
        WeightSpec::Custom { states, csv } => {
            let rows: Vec<(i64, Complex64)> = match (states, csv) {
                (Some(states), None) => states
                    .iter()
                    .map(|&(n, re, im)| (n, Complex64::new(re, im)))
                    .collect(),
                (None, Some(rel)) => read_custom_csv(&base_dir.join(rel))?,
                _ => {
                    return Err(Error::ScenarioInvalid {
                        field: "weights".into(),
                        message: "custom weights need exactly one of `states` or `csv`".into(),
                    })
                }
            };
            custom_weights(&rows)
        }
    }
}

fn build_basis(spec: Option<&BasisSpec>) -> Option<EigenBasis> {
    spec.map(|b| match b {
        BasisSpec::Sho { omega } => EigenBasis::Sho { omega: *omega },
        BasisSpec::Box { length } => EigenBasis::Box { length: *length },
        BasisSpec::Rotator {} => EigenBasis::Rotator,
    })
}

fn build_axis(spec: &AxisSpec) -> Result<Axis> {
    if spec.len < 2 {
        return Err(Error::ScenarioInvalid {
            field: "grid".into(),
            message: format!("an axis needs at least 2 points, got {}", spec.len),
        });
    }
    let span = spec.stop - spec.start;
    if span.is_nan() || span <= 0.0 {
        return Err(Error::ScenarioInvalid {
            field: "grid".into(),
            message: format!("axis stop {} must exceed start {}", spec.stop, spec.start),
        });
    }
    Ok(if spec.periodic {
        Axis::periodic(spec.start, spec.stop - spec.start, spec.len)
    } else {
        Axis::line(spec.start, spec.stop, spec.len)
    })
}

/// Weight CSV reader: columns (n, re, im), `#` comments, an optional
/// non-numeric header row.
fn read_custom_csv(path: &Path) -> Result<Vec<(i64, Complex64)>> {
    let text = fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::ScenarioInvalid {
                field: "weights.csv".into(),
                message: format!(
                    "line {}: expected 3 columns, got {}",
                    lineno + 1,
                    fields.len()
                ),
            });
        }
        let parsed = (
            fields[0].parse::<i64>(),
            fields[1].parse::<f64>(),
            fields[2].parse::<f64>(),
        );
        match parsed {
            (Ok(n), Ok(re), Ok(im)) => rows.push((n, Complex64::new(re, im))),
            _ if rows.is_empty() => continue, // header row
            _ => {
                return Err(Error::ScenarioInvalid {
                    field: "weights.csv".into(),
                    message: format!("line {}: malformed numeric row {line:?}", lineno + 1),
                })
            }
        }
    }
    Ok(rows)
}

fn resolve_time_value(value: &TimeValue, scales: Option<&TimeScales>, field: &str) -> Result<f64> {
    let t = match value {
        TimeValue::Number(t) => *t,
        TimeValue::Expr(expr) => parse_time_expr(expr, scales)?,
    };
    if !(t.is_finite()) {
        return Err(Error::ScenarioInvalid {
            field: field.into(),
            message: format!("time must be finite, got {t}"),
        });
    }
    Ok(t)
}

/// Parses one symbolic time expression against a scale hierarchy.
///
/// Grammar: `<rational> [<scale>] [mod <scale>]` where `<rational>` is a
/// decimal literal or `p/q`, and `<scale>` is one of `T_cl`, `t_rev`,
/// `t_sr`. Examples: `"0.125"`, `"1/4 t_rev"`, `"0 mod t_rev"`,
/// `"1/2 T_cl mod t_rev"`.
pub fn parse_time_expr(expr: &str, scales: Option<&TimeScales>) -> Result<f64> {
    let invalid = |message: String| Error::ScenarioInvalid {
        field: "times".into(),
        message: format!("{expr:?}: {message}"),
    };

    let tokens: Vec<&str> = expr.split_whitespace().collect();
    let (value_tokens, mod_scale) = match tokens.iter().position(|&t| t == "mod") {
        Some(i) => {
            if i + 2 != tokens.len() {
                return Err(invalid("expected exactly one scale after `mod`".into()));
            }
            (&tokens[..i], Some(tokens[i + 1]))
        }
        None => (&tokens[..], None),
    };

    let (rational, scale_name) = match value_tokens {
        [r] => (*r, None),
        [r, s] => (*r, Some(*s)),
        [] => return Err(invalid("empty time expression".into())),
        _ => return Err(invalid("expected `<rational> [scale] [mod scale]`".into())),
    };

    let r = parse_rational(rational)
        .ok_or_else(|| invalid(format!("{rational:?} is not a decimal or p/q rational")))?;

    let mut t = match scale_name {
        Some(name) => r * lookup_scale(expr, name, scales)?,
        None => r,
    };
    if let Some(name) = mod_scale {
        t += lookup_scale(expr, name, scales)?;
    }
    if !t.is_finite() {
        return Err(invalid(format!("resolves to a non-finite time {t}")));
    }
    Ok(t)
}

fn parse_rational(token: &str) -> Option<f64> {
    if let Some((p, q)) = token.split_once('/') {
        let p: i64 = p.parse().ok()?;
        let q: i64 = q.parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(p as f64 / q as f64);
    }
    token.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn lookup_scale(expr: &str, name: &str, scales: Option<&TimeScales>) -> Result<f64> {
    let Some(scales) = scales else {
        return Err(Error::ScenarioInvalid {
            field: "times".into(),
            message: format!(
                "{expr:?}: the free particle has no time scales; only absolute times apply"
            ),
        });
    };
    let scale = match name {
        "T_cl" => scales.classical,
        "t_rev" => scales.revival,
        "t_sr" => scales.superrevival,
        _ => {
            return Err(Error::ScenarioInvalid {
                field: "times".into(),
                message: format!(
                    "{expr:?}: unknown scale {name:?} (expected T_cl, t_rev, or t_sr)"
                ),
            })
        }
    };
    match scale {
        Scale::Finite(v) => Ok(v),
        Scale::Unbounded => Err(Error::UnboundedScaleFraction {
            field: expr.to_string(),
            scale: name.to_string(),
        }),
    }
}
