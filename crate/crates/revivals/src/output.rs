//! Artifact serialization: autocorrelation CSV, density grids (CSV and a
//! binary format for large 2-D grids), revival-report JSON, and the
//! per-scenario artifact index.
//!
//! Every artifact embeds the scenario hash it was computed from, so a
//! directory of outputs stays self-describing. All floating-point text is
//! written in shortest round-trip decimal form — re-parsing an artifact
//! reproduces the exact bit pattern, which is what makes byte-identical
//! reruns a meaningful determinism check.

use crate::autocorr::{AutocorrSeries, IdentifiedRevival, RevivalReport};
use crate::eigenbasis::{Axis, GridDensity};
use crate::error::{Error, Result};
use crate::spectra::{Scale, TimeScales};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{BufRead, Read, Write};

/// One atomic unit of time in seconds, as printed in the source material
/// (two significant figures, kept exact so golden files reproduce the
/// quoted nanosecond values; CODATA gives 2.4188843265857×10⁻¹⁷ s).
pub const AU_SECONDS: f64 = 2.42e-17;

/// Time units for artifact output. Spatial axes are always atomic units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    /// Atomic units (ħ = m = 1), the native scale of every computation.
    Au,
    /// Nanoseconds via [`AU_SECONDS`].
    Ns,
}

impl Units {
    /// Header label: "au" or "ns".
    pub fn label(self) -> &'static str {
        match self {
            Units::Au => "au",
            Units::Ns => "ns",
        }
    }

    /// Multiplier taking a time in atomic units to this unit.
    pub fn time_factor(self) -> f64 {
        match self {
            Units::Au => 1.0,
            Units::Ns => AU_SECONDS / 1e-9,
        }
    }

    /// Parses a unit label.
    pub fn parse(label: &str) -> Option<Self> {
        match label {
            "au" => Some(Units::Au),
            "ns" => Some(Units::Ns),
            _ => None,
        }
    }
}

/// Writes an autocorrelation series as CSV: hash/units header comments,
/// then `t,autocorr` rows with times in the requested unit.
pub fn write_autocorr_csv<W: Write>(
    mut w: W,
    series: &AutocorrSeries,
    scenario_hash: &str,
    units: Units,
) -> Result<()> {
    let factor = units.time_factor();
    writeln!(w, "# scenario: {scenario_hash}")?;
    writeln!(w, "# units: {}", units.label())?;
    writeln!(w, "t,autocorr")?;
    for (t, v) in series.times.iter().zip(&series.values) {
        writeln!(w, "{},{}", t * factor, v)?;
    }
    Ok(())
}

/// Writes a density grid as CSV: one column per axis plus the density,
/// points in row-major (last axis fastest) order. Axes are atomic units;
/// the snapshot time rides in the header.
pub fn write_density_csv<W: Write>(
    mut w: W,
    density: &GridDensity,
    scenario_hash: &str,
) -> Result<()> {
    writeln!(w, "# scenario: {scenario_hash}")?;
    writeln!(w, "# time: {}", density.time)?;
    writeln!(w, "# normalized: {}", density.normalized)?;
    match density.axes.len() {
        1 => {
            writeln!(w, "x,density")?;
            let axis = density.axes[0];
            for (i, v) in density.values.iter().enumerate() {
                writeln!(w, "{},{}", axis.point(i), v)?;
            }
        }
        2 => {
            writeln!(w, "x,y,density")?;
            let (ax, ay) = (density.axes[0], density.axes[1]);
            for ix in 0..ax.len {
                let x = ax.point(ix);
                for iy in 0..ay.len {
                    writeln!(
                        w,
                        "{},{},{}",
                        x,
                        ay.point(iy),
                        density.values[ix * ay.len + iy]
                    )?;
                }
            }
        }
        d => {
            return Err(Error::GridOutsideDomain(format!(
                "CSV density output supports 1 or 2 axes, got {d}"
            )))
        }
    }
    Ok(())
}

/// Header line of the binary density format.
#[derive(Debug, Serialize, Deserialize)]
struct BinaryHeader {
    scenario: String,
    time: f64,
    normalized: bool,
    axes: Vec<Axis>,
    count: usize,
}

/// Writes a density grid in the binary format: one JSON header line, then
/// `count` little-endian f64 values in row-major order. Suited to the
/// 256×256 circular-state snapshots, where CSV would be needlessly large.
pub fn write_density_binary<W: Write>(
    mut w: W,
    density: &GridDensity,
    scenario_hash: &str,
) -> Result<()> {
    let header = BinaryHeader {
        scenario: scenario_hash.to_string(),
        time: density.time,
        normalized: density.normalized,
        axes: density.axes.clone(),
        count: density.values.len(),
    };
    serde_json::to_writer(&mut w, &header)?;
    w.write_all(b"\n")?;
    for v in &density.values {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Reads a binary density file back, returning the grid and the scenario
/// hash it was computed from.
pub fn read_density_binary<R: Read>(r: R) -> Result<(GridDensity, String)> {
    let mut reader = std::io::BufReader::new(r);
    let mut header_line = String::new();
    reader.read_line(&mut header_line)?;
    let header: BinaryHeader = serde_json::from_str(header_line.trim_end())?;

    let expected: usize = header.axes.iter().map(|a| a.len).product();
    if expected != header.count {
        return Err(Error::GridOutsideDomain(format!(
            "binary header count {} does not match axes product {expected}",
            header.count
        )));
    }
    let mut payload = Vec::new();
    reader.read_to_end(&mut payload)?;
    if payload.len() != header.count * 8 {
        return Err(Error::GridOutsideDomain(format!(
            "binary payload holds {} bytes, expected {}",
            payload.len(),
            header.count * 8
        )));
    }
    let values = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunks_exact yields 8 bytes")))
        .collect();
    Ok((
        GridDensity {
            axes: header.axes,
            values,
            time: header.time,
            normalized: header.normalized,
        },
        header.scenario,
    ))
}

/// Report JSON document: the revival report stamped with scenario hash and
/// units, all times converted.
#[derive(Debug, Serialize)]
struct ReportDocument<'a> {
    scenario: &'a str,
    units: &'a str,
    #[serde(flatten)]
    report: RevivalReport,
}

fn convert_scale(scale: Scale, factor: f64) -> Scale {
    match scale {
        Scale::Finite(v) => Scale::Finite(v * factor),
        Scale::Unbounded => Scale::Unbounded,
    }
}

fn convert_report(report: &RevivalReport, factor: f64) -> RevivalReport {
    RevivalReport {
        scales: TimeScales {
            n_bar: report.scales.n_bar,
            classical: convert_scale(report.scales.classical, factor),
            revival: convert_scale(report.scales.revival, factor),
            superrevival: convert_scale(report.scales.superrevival, factor),
        },
        class: report.class,
        revivals: report
            .revivals
            .iter()
            .map(|r| IdentifiedRevival {
                label: r.label.clone(),
                predicted: r.predicted * factor,
                expected_period: r.expected_period * factor,
                found: r.found,
                detected: r.detected.map(|t| t * factor),
                height: r.height,
                local_period: r.local_period.map(|p| p * factor),
            })
            .collect(),
    }
}

/// Writes a revival report as pretty-printed JSON with times in the
/// requested unit.
pub fn write_report_json<W: Write>(
    mut w: W,
    report: &RevivalReport,
    scenario_hash: &str,
    units: Units,
) -> Result<()> {
    let doc = ReportDocument {
        scenario: scenario_hash,
        units: units.label(),
        report: convert_report(report, units.time_factor()),
    };
    serde_json::to_writer_pretty(&mut w, &doc)?;
    w.write_all(b"\n")?;
    Ok(())
}

/// Writes the per-scenario artifact index: a sorted label → filename map.
pub fn write_index_json<W: Write>(
    mut w: W,
    scenario_hash: &str,
    artifacts: &BTreeMap<String, String>,
) -> Result<()> {
    #[derive(Serialize)]
    struct Index<'a> {
        scenario: &'a str,
        artifacts: &'a BTreeMap<String, String>,
    }
    serde_json::to_writer_pretty(
        &mut w,
        &Index {
            scenario: scenario_hash,
            artifacts,
        },
    )?;
    w.write_all(b"\n")?;
    Ok(())
}
