//! Numerical toolkit for the long-time evolution and revival structure of
//! localized quantum wave packets.
//!
//! A packet built as a superposition of energy eigenstates,
//! Ψ(r, t) = Σ_n c_n ψ_n(r) e^{−iE_n t}, does not simply disperse: whenever
//! the spectrum E_n is smooth in the quantum number, the packet's history
//! is organized by a hierarchy of time scales obtained from the Taylor
//! expansion of E_n about the packet center n̄ —
//!
//! * **T_cl = 2π/|E′(n̄)|** — the classical orbit period,
//! * **t_rev = 4π/|E″(n̄)|** — the revival time at which the dephased
//!   packet reassembles,
//! * **t_sr = 12π/|E‴(n̄)|** — the superrevival time governing the slower
//!   cycle of fractional superrevivals.
//!
//! At intermediate rational fractions (p/q)·t_rev the packet splits into a
//! ring of sub-packets retracing the classical motion with a shortened
//! period — the fractional revivals — all of it visible in the
//! autocorrelation |A(t)|² = |Σ_n |c_n|² e^{−iE_n t}|² without ever
//! touching a spatial grid.
//!
//! The crate provides:
//!
//! * [`spectra`] — closed-form, polynomial, and tabulated energy spectra
//!   with exact or finite-difference derivatives and the
//!   [`TimeScales`](spectra::TimeScales) hierarchy;
//! * [`weights`] — Gaussian, coherent-state, and custom weight
//!   distributions over levels;
//! * [`eigenbasis`] — stable eigenfunction evaluation (harmonic
//!   oscillator, box, rotator, circular Rydberg states) and density grids;
//! * [`evolution`] — exact and third-order packet evolution,
//!   cross-correlation against transformed frames, and ⟨r⟩ tracking;
//! * [`autocorr`] — autocorrelation series, peak detection, local-period
//!   estimation, and the revival report that matches predictions against
//!   detections;
//! * [`scenario`] / [`output`] — reproducible JSON scenario descriptions
//!   and deterministic, hash-stamped artifacts;
//! * [`phase`] / [`special`] — extended-precision phase reduction for
//!   E·t arguments of order 10¹¹ and overflow-safe special functions.
//!
//! Everything is in atomic units (ħ = m = 1) unless converted explicitly
//! at the output layer.

pub mod autocorr;
pub mod eigenbasis;
pub mod error;
pub mod evolution;
pub mod output;
pub mod phase;
pub mod scenario;
pub mod special;
pub mod spectra;
pub mod weights;

pub use autocorr::{
    autocorr_series, autocorr_value, default_time_step, detect_peaks, fastest_beat_period,
    free_particle_autocorr, free_particle_series, local_period, local_period_with, revival_report,
    AutocorrSeries, IdentifiedRevival, Peak, PeakOptions, RevivalReport,
};
pub use eigenbasis::{Axis, EigenBasis, FreeParticleWeights, GridDensity};
pub use error::{Error, Result};
pub use evolution::{Evolver, Transform, WavePacket};
pub use output::{Units, AU_SECONDS};
pub use scenario::{Compiled, CompiledSystem, Scenario};
pub use spectra::{classify, Derivatives, RevivalClass, Scale, Spectrum, SpectrumKind, TimeScales};
pub use weights::{
    coherent_weights, custom_weights, gaussian_weights, WeightDistribution, DEFAULT_MASS_TOL,
};
