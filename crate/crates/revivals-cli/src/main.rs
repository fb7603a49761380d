//! Command-line driver: binds a JSON scenario to the computation modules
//! and emits densities, autocorrelation traces, and revival reports as
//! deterministic, hash-addressed files.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use revivals::eigenbasis::GridDensity;
use revivals::output::{
    write_autocorr_csv, write_density_binary, write_density_csv, write_index_json,
    write_report_json,
};
use revivals::scenario::{CompiledSystem, ResolvedTime, Scenario};
use revivals::{
    autocorr_series, free_particle_series, revival_report, AutocorrSeries, Evolver,
    IdentifiedRevival, RevivalReport, Scale, TimeScales, Units, WavePacket,
};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "revivals",
    version,
    about = "Wave-packet revival toolkit: densities, autocorrelations, revival reports"
)]
struct Cli {
    /// Scenario JSON file.
    #[arg(long, value_name = "PATH")]
    scenario: PathBuf,

    /// Output directory; artifacts land in <OUT>/<scenario-hash>/.
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    /// Time units for artifact files and printed scales.
    #[arg(long, value_enum, default_value_t = UnitsArg::Au)]
    units: UnitsArg,

    /// Phase model for density snapshots.
    #[arg(long, value_enum, default_value_t = EvolverArg::Exact)]
    evolver: EvolverArg,

    /// Echo the canonical scenario JSON to stdout and exit.
    #[arg(long)]
    print_config: bool,

    /// Suppress file-writing notices on stderr.
    #[arg(long)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum UnitsArg {
    Au,
    Ns,
}

impl From<UnitsArg> for Units {
    fn from(u: UnitsArg) -> Units {
        match u {
            UnitsArg::Au => Units::Au,
            UnitsArg::Ns => Units::Ns,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum EvolverArg {
    Exact,
    #[value(name = "third-order")]
    ThirdOrder,
}

impl From<EvolverArg> for Evolver {
    fn from(e: EvolverArg) -> Evolver {
        match e {
            EvolverArg::Exact => Evolver::Exact,
            EvolverArg::ThirdOrder => Evolver::ThirdOrder,
        }
    }
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Evolve |Ψ|² at the scenario's times and write grid files.
    Density,
    /// Sample the autocorrelation series and write it as CSV.
    Autocorr,
    /// Match detected peaks against predicted revivals (JSON + table).
    Report,
    /// Print the time-scale hierarchy and revival class.
    Scales,
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    let (scenario, base_dir) = Scenario::from_path(&cli.scenario)
        .with_context(|| format!("reading scenario {}", cli.scenario.display()))?;

    if cli.print_config {
        let value: serde_json::Value = serde_json::from_str(&scenario.canonical_json())?;
        println!("{}", serde_json::to_string_pretty(&value)?);
        return Ok(());
    }

    let compiled = scenario.compile(&base_dir).context("validating scenario")?;
    let units: Units = cli.units.into();

    match cli.command {
        Command::Scales => cmd_scales(&compiled.content, &compiled.hash, units),
        Command::Density => {
            let dir = artifact_dir(&cli.out, &compiled.hash)?;
            cmd_density(
                &scenario,
                &compiled.content,
                &compiled.times,
                &compiled.hash,
                &dir,
                cli.evolver.into(),
                cli.quiet,
            )
        }
        Command::Autocorr => {
            let dir = artifact_dir(&cli.out, &compiled.hash)?;
            cmd_autocorr(
                &scenario,
                &compiled.content,
                &compiled.hash,
                &dir,
                units,
                cli.quiet,
            )
        }
        Command::Report => {
            let dir = artifact_dir(&cli.out, &compiled.hash)?;
            cmd_report(
                &scenario,
                &compiled.content,
                &compiled.hash,
                &dir,
                units,
                cli.quiet,
            )
        }
    }
}

fn artifact_dir(out: &Path, hash: &str) -> Result<PathBuf> {
    let dir = out.join(hash);
    fs::create_dir_all(&dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    Ok(dir)
}

fn scale_line(name: &str, scale: Scale, units: Units) -> String {
    match scale {
        Scale::Finite(t) => format!(
            "{name} = {} {}",
            t * units.time_factor(),
            unit_suffix(units)
        ),
        Scale::Unbounded => format!("{name} = unbounded"),
    }
}

fn unit_suffix(units: Units) -> &'static str {
    match units {
        Units::Au => "a.u.",
        Units::Ns => "ns",
    }
}

fn bound_scales(content: &CompiledSystem) -> Result<&TimeScales> {
    match content {
        CompiledSystem::Bound { scales, .. } => Ok(scales),
        CompiledSystem::Free { .. } => Err(anyhow!(
            "the free particle has no time-scale hierarchy; only `autocorr` applies"
        )),
    }
}

fn cmd_scales(content: &CompiledSystem, hash: &str, units: Units) -> Result<()> {
    let scales = bound_scales(content)?;
    println!("scenario {hash}");
    println!("n_bar = {}", scales.n_bar);
    println!("{}", scale_line("T_cl", scales.classical, units));
    println!("{}", scale_line("t_rev", scales.revival, units));
    println!("{}", scale_line("t_sr", scales.superrevival, units));
    println!("class = {:?}", revivals::classify(scales));
    Ok(())
}

/// Filenames derived from time labels: position index plus a slug, so
/// distinct times never collide and reruns name files identically.
fn density_file_name(prefix: &str, index: usize, label: &str, binary: bool) -> String {
    let slug: String = label
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect();
    let ext = if binary { "bin" } else { "csv" };
    format!("{prefix}_{index}_{slug}.{ext}")
}

fn cmd_density(
    scenario: &Scenario,
    content: &CompiledSystem,
    times: &[ResolvedTime],
    hash: &str,
    dir: &Path,
    evolver: Evolver,
    quiet: bool,
) -> Result<()> {
    let CompiledSystem::Bound {
        spectrum,
        weights,
        basis,
        grid,
        ..
    } = content
    else {
        bail!("the free particle has no spatial eigenbasis; only `autocorr` applies");
    };
    let Some(basis) = basis else {
        bail!("this scenario's spectrum has no spatial eigenbasis; add a `basis` block");
    };
    if times.is_empty() {
        bail!("the scenario lists no `times` to evolve");
    }
    let grid = grid.as_ref().expect("a basis always resolves a grid");
    let packet = WavePacket::new(spectrum.clone(), basis.clone(), weights.clone())?;

    let prefix = scenario
        .outputs
        .as_ref()
        .and_then(|o| o.density.as_deref())
        .unwrap_or("density");
    let mut index = BTreeMap::new();
    for (i, rt) in times.iter().enumerate() {
        let density: GridDensity = packet.evolve(rt.time, grid, evolver)?;
        let binary = density.axes.len() == 2;
        let name = density_file_name(prefix, i, &rt.label, binary);
        let path = dir.join(&name);
        let file =
            fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let writer = std::io::BufWriter::new(file);
        if binary {
            write_density_binary(writer, &density, hash)?;
        } else {
            write_density_csv(writer, &density, hash)?;
        }
        if !quiet {
            eprintln!("wrote {}", path.display());
        }
        index.insert(rt.label.clone(), name);
    }
    write_index(dir, hash, &index, quiet)
}

fn build_series(content: &CompiledSystem) -> Result<AutocorrSeries> {
    match content {
        CompiledSystem::Bound {
            spectrum,
            weights,
            autocorr,
            ..
        } => {
            let (t_max, dt) =
                autocorr.ok_or_else(|| anyhow!("the scenario has no `autocorr` sampling block"))?;
            Ok(autocorr_series(weights, spectrum, t_max, dt)?)
        }
        CompiledSystem::Free {
            p0,
            sigma,
            autocorr,
        } => {
            let (t_max, dt) =
                autocorr.ok_or_else(|| anyhow!("the scenario has no `autocorr` sampling block"))?;
            Ok(free_particle_series(*p0, *sigma, t_max, dt)?)
        }
    }
}

fn cmd_autocorr(
    scenario: &Scenario,
    content: &CompiledSystem,
    hash: &str,
    dir: &Path,
    units: Units,
    quiet: bool,
) -> Result<()> {
    let series = build_series(content)?;
    let name = scenario
        .outputs
        .as_ref()
        .and_then(|o| o.autocorr.as_deref())
        .unwrap_or("autocorr.csv");
    let path = dir.join(name);
    let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    write_autocorr_csv(std::io::BufWriter::new(file), &series, hash, units)?;
    if !quiet {
        eprintln!("wrote {} ({} samples)", path.display(), series.len());
    }
    let mut index = BTreeMap::new();
    index.insert("autocorr".to_string(), name.to_string());
    write_index(dir, hash, &index, quiet)
}

fn cmd_report(
    scenario: &Scenario,
    content: &CompiledSystem,
    hash: &str,
    dir: &Path,
    units: Units,
    quiet: bool,
) -> Result<()> {
    let scales = bound_scales(content)?;
    let series = build_series(content)?;
    let report = revival_report(&series, scales)?;

    let name = scenario
        .outputs
        .as_ref()
        .and_then(|o| o.report.as_deref())
        .unwrap_or("report.json");
    let path = dir.join(name);
    let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    write_report_json(std::io::BufWriter::new(file), &report, hash, units)?;
    if !quiet {
        eprintln!("wrote {}", path.display());
    }

    print_report_table(&report, units);

    let mut index = BTreeMap::new();
    index.insert("report".to_string(), name.to_string());
    write_index(dir, hash, &index, quiet)
}

fn print_report_table(report: &RevivalReport, units: Units) {
    let f = units.time_factor();
    let suffix = unit_suffix(units);
    println!("scales: n_bar = {}", report.scales.n_bar);
    println!("  {}", scale_line("T_cl", report.scales.classical, units));
    println!("  {}", scale_line("t_rev", report.scales.revival, units));
    println!(
        "  {}",
        scale_line("t_sr", report.scales.superrevival, units)
    );
    println!("class: {:?}", report.class);
    println!();
    println!(
        "{:<12} {:<24} {:<24} {:<12} {:<24} times in {suffix}",
        "label", "predicted", "detected", "height", "local period"
    );
    for r in &report.revivals {
        println!(
            "{:<12} {:<24} {:<24} {:<12} {:<24}",
            r.label,
            fmt_time(Some(r.predicted), f),
            fmt_time(r.detected, f),
            fmt_height(r),
            fmt_time(r.local_period, f),
        );
    }
}

fn fmt_time(t: Option<f64>, factor: f64) -> String {
    match t {
        Some(t) => format!("{}", t * factor),
        None => "-".to_string(),
    }
}

fn fmt_height(r: &IdentifiedRevival) -> String {
    match r.height {
        Some(h) => format!("{h:.4}"),
        None => "absent".to_string(),
    }
}

/// Merges this run's artifacts into the scenario's index file, keeping
/// entries from earlier subcommand runs against the same scenario.
fn write_index(
    dir: &Path,
    hash: &str,
    new_entries: &BTreeMap<String, String>,
    quiet: bool,
) -> Result<()> {
    let path = dir.join("index.json");
    let mut entries: BTreeMap<String, String> = match fs::read_to_string(&path) {
        Ok(text) => serde_json::from_str::<serde_json::Value>(&text)
            .ok()
            .and_then(|v| serde_json::from_value(v.get("artifacts")?.clone()).ok())
            .unwrap_or_default(),
        Err(_) => BTreeMap::new(),
    };
    entries.extend(new_entries.clone());
    let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    write_index_json(std::io::BufWriter::new(file), hash, &entries)?;
    if !quiet {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}
