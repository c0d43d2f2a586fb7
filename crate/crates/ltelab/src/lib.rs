//! Desk-scale LTE interference laboratory.
//!
//! This crate models the FD-LTE resource grid with per-RE channel labels,
//! derives protocol-aware interference footprints (full-band, partial-band,
//! control-channel and synchronization-signal targeting), computes the
//! ISR_RE / ISR_F interference metrics, estimates throughput degradation
//! through a configurable link abstraction, synthesizes baseband IQ for the
//! modeled waveforms, and classifies interference from performance-measurement
//! counters with a k-NN detector.
//!
//! Modules:
//! - [`grid`]: resource grids, channel maps, and PHY sequences (Zadoff-Chu
//!   PSS, interleaved m-sequence SSS, Gold-sequence CRS).
//! - [`interference`]: scenarios, footprints, ISR metrics, sync alignment,
//!   and IQ synthesis.
//! - [`linkmodel`]: per-RE SINR, control-channel decode gates, and DL/UL
//!   throughput estimation.
//! - [`detector`]: k-NN classification over synthesized PM counters.
//! - [`harness`]: scenario catalog, ISR sweeps, and CSV/JSON/plot-data export.

pub mod detector;
pub mod grid;
pub mod harness;
pub mod interference;
pub mod linkmodel;

pub use grid::{build_dl_grid, build_ul_grid, CellConfig, ChannelKind, Direction, ReIndex, ResourceGrid};
pub use interference::{
    footprint_for_scenario, isr_f, isr_re_for_target, Footprint, InterferenceScenario, IsrMetrics,
    ScenarioKind, SyncState,
};
pub use linkmodel::{estimate_throughput, LinkConfig, ThroughputReport};
