//! Experiment orchestration: the scenario catalog, ISR sweeps, and export.
//!
//! `run_scenario` composes grid -> footprint -> interference map -> link
//! model for one (scenario, ISR_RE) point and attaches the ISR metrics of
//! the actual footprint. `sweep` evaluates the scenario catalog over a list
//! of ISR points (concurrently, with deterministic output ordering) and the
//! exporters emit CSV, full-fidelity JSON, and per-figure plot data.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

use crate::grid::{build_dl_grid, build_ul_grid, CellConfig, Direction, GridError, ResourceGrid};
use crate::interference::{
    apply_interference, footprint_for_scenario, sync_align, InterferenceError,
    InterferenceScenario, IsrMetrics, ScenarioKind, SyncState,
};
use crate::linkmodel::{estimate_throughput, LinkConfig, LinkError, ThroughputReport};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Interference(#[from] InterferenceError),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown scenario id {0}; the catalog has rows 0..=6")]
    UnknownScenario(usize),
    #[error("I/O error writing {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

/// The built-in interference test cases (catalog rows 0..=6) at a default
/// ISR_RE of 0 dB.
pub fn scenario_catalog() -> Vec<InterferenceScenario> {
    [
        ScenarioKind::None,
        ScenarioKind::FullBand,
        ScenarioKind::HalfBand,
        ScenarioKind::PucchTarget,
        ScenarioKind::PuschTarget,
        ScenarioKind::PssSssSpoof,
        ScenarioKind::PssSssInterference,
    ]
    .into_iter()
    .map(|kind| InterferenceScenario::new(kind, 0.0))
    .collect()
}

/// Full configuration of one experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub cell: CellConfig,
    pub link: LinkConfig,
    pub scenarios: Vec<InterferenceScenario>,
    /// ISR_RE evaluation points in dB.
    pub isr_re_sweep_db: Vec<f64>,
    pub seed: u64,
    /// Directory for exported files (CLI use).
    pub output_dir: Option<PathBuf>,
    /// Stamp outputs with wall-clock time. Off by default so identical
    /// configurations produce byte-identical outputs.
    pub emit_timestamps: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cell: CellConfig::default(),
            link: LinkConfig::default(),
            scenarios: scenario_catalog(),
            isr_re_sweep_db: vec![0.0, 5.0],
            seed: 7,
            output_dir: None,
            emit_timestamps: false,
        }
    }
}

impl RunConfig {
    /// Dense 21-point sweep from -10 to +10 dB for monotonicity studies.
    pub fn dense_sweep() -> Self {
        RunConfig {
            isr_re_sweep_db: (0..=20).map(|i| -10.0 + f64::from(i)).collect(),
            ..RunConfig::default()
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        self.cell.validate()?;
        self.link.validate()?;
        if self.scenarios.is_empty() {
            return Err(HarnessError::InvalidConfig("scenario list is empty".into()));
        }
        for scenario in &self.scenarios {
            scenario.validate()?;
        }
        if self.isr_re_sweep_db.is_empty() || self.isr_re_sweep_db.iter().any(|v| !v.is_finite()) {
            return Err(HarnessError::InvalidConfig(
                "isr_re_sweep_db must be non-empty and finite".into(),
            ));
        }
        Ok(())
    }

    /// Catalog scenario by row id.
    pub fn scenario_by_id(&self, id: usize) -> Result<InterferenceScenario, HarnessError> {
        let kind = ScenarioKind::from_id(id).ok_or(HarnessError::UnknownScenario(id))?;
        Ok(self
            .scenarios
            .iter()
            .find(|s| s.kind == kind)
            .cloned()
            .unwrap_or_else(|| InterferenceScenario::new(kind, 0.0)))
    }
}

/// One (scenario, ISR point) evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    /// Scenario echo, including the evaluated ISR_RE.
    pub scenario: InterferenceScenario,
    /// Metrics of the actual footprint; absent for the quiet baseline.
    pub metrics: Option<IsrMetrics>,
    pub report: ThroughputReport,
}

/// A complete sweep: config echo plus one record per evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub tool_version: String,
    /// Milliseconds since the Unix epoch, when timestamping is enabled.
    pub timestamp_ms: Option<u64>,
    pub config: RunConfig,
    pub records: Vec<ExperimentRecord>,
}

/// Effective per-RE interference level: the duty cycle of an asynchronous
/// interferer scales its average power.
fn effective_isr_re_db(scenario: &InterferenceScenario) -> f64 {
    if scenario.synchronous || scenario.duty_cycle >= 1.0 {
        scenario.isr_re_db
    } else {
        scenario.isr_re_db + 10.0 * scenario.duty_cycle.log10()
    }
}

fn evaluate_direction(
    grid: &ResourceGrid,
    scenario: &InterferenceScenario,
    config: &RunConfig,
) -> Result<(ThroughputReport, IsrMetrics), HarnessError> {
    let mut footprint = footprint_for_scenario(scenario, grid)?;
    if scenario.synchronous {
        let timing = sync_align(scenario, &SyncState::perfect(config.cell.cell_id), &config.cell)?;
        if timing.symbol_shift != 0 {
            footprint = footprint.shift_symbols(timing.symbol_shift);
        }
    }
    let metrics = IsrMetrics::for_footprint(scenario.isr_re_db, &footprint)?;
    let map = apply_interference(grid, &footprint, effective_isr_re_db(scenario))?;
    let report = estimate_throughput(grid, &map, &config.link)?;
    Ok((report, metrics))
}

/// Evaluates one scenario at one ISR_RE point.
///
/// Builds the grids the scenario targets, derives and (for synchronous
/// scenarios) aligns the footprint, applies the interference map, and runs
/// the link model; DL and UL evaluations merge into a single report.
pub fn run_scenario(
    config: &RunConfig,
    scenario: &InterferenceScenario,
    isr_re_db: f64,
) -> Result<(ThroughputReport, Option<IsrMetrics>), HarnessError> {
    config.cell.validate()?;
    config.link.validate()?;
    let scenario = scenario.with_isr(isr_re_db);
    scenario.validate()?;

    if scenario.kind == ScenarioKind::None {
        let mut report = ThroughputReport::nominal(&config.link);
        report.scenario = Some(scenario);
        return Ok((report, None));
    }

    let dl = scenario
        .direction
        .covers(Direction::Downlink)
        .then(|| build_dl_grid(&config.cell))
        .transpose()?;
    let ul = scenario
        .direction
        .covers(Direction::Uplink)
        .then(|| build_ul_grid(&config.cell))
        .transpose()?;

    let mut merged = ThroughputReport::nominal(&config.link);
    let mut metrics = None;
    if let Some(grid) = &dl {
        let (report, m) = evaluate_direction(grid, &scenario, config)?;
        merged.dl_mbps = report.dl_mbps;
        merged.gates_tripped.pcfich = report.gates_tripped.pcfich;
        merged.gates_tripped.pdcch = report.gates_tripped.pdcch;
        merged.gates_tripped.pbch = report.gates_tripped.pbch;
        merged.sync_lost = report.sync_lost;
        merged.sync_quality_db = report.sync_quality_db;
        metrics = Some(m);
    }
    if let Some(grid) = &ul {
        let (report, m) = evaluate_direction(grid, &scenario, config)?;
        merged.ul_mbps = report.ul_mbps;
        merged.gates_tripped.pucch = report.gates_tripped.pucch;
        // Identical fractions on both directions; keep the DL metrics when
        // the scenario spans both.
        metrics.get_or_insert(m);
    }
    merged.degradation_fraction = merged
        .dl_degradation(&config.link)
        .max(merged.ul_degradation(&config.link));
    merged.scenario = Some(scenario);
    Ok((merged, metrics))
}

/// Runs the configured scenarios over the ISR sweep points.
///
/// The quiet baseline runs once; every other scenario runs at each sweep
/// point. Scenario evaluations proceed on worker threads, and the record
/// order is fixed by the configuration regardless of scheduling.
pub fn sweep(config: &RunConfig) -> Result<SweepResult, HarnessError> {
    config.validate()?;

    type Slot = Result<Vec<ExperimentRecord>, HarnessError>;
    let mut slots: Vec<Slot> = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = config
            .scenarios
            .iter()
            .map(|scenario| {
                scope.spawn(move || -> Slot {
                    let points: &[f64] = if scenario.kind == ScenarioKind::None {
                        &config.isr_re_sweep_db[..1]
                    } else {
                        &config.isr_re_sweep_db
                    };
                    let mut records = Vec::with_capacity(points.len());
                    for &isr in points {
                        let isr = if scenario.kind == ScenarioKind::None { 0.0 } else { isr };
                        let (report, metrics) = run_scenario(config, scenario, isr)?;
                        records.push(ExperimentRecord {
                            scenario: scenario.with_isr(isr),
                            metrics,
                            report,
                        });
                    }
                    Ok(records)
                })
            })
            .collect();
        for handle in handles {
            slots.push(handle.join().expect("sweep worker panicked"));
        }
    });

    let mut records = Vec::new();
    for slot in slots {
        records.extend(slot?);
    }
    Ok(SweepResult {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp_ms: config.emit_timestamps.then(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_millis() as u64)
                .unwrap_or(0)
        }),
        config: config.clone(),
        records,
    })
}

/// One row of the footprint-fraction table: occupancy fraction and the
/// resulting ISR_F / ISR_RE ratio in dB, per non-quiet catalog scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionTableRow {
    pub scenario: String,
    pub fraction: f64,
    pub isr_f_over_isr_re_db: f64,
}

/// Reconstructs the footprint-fraction table from the actual footprints.
pub fn fraction_table(config: &RunConfig) -> Result<Vec<FractionTableRow>, HarnessError> {
    config.cell.validate()?;
    let dl = build_dl_grid(&config.cell)?;
    let ul = build_ul_grid(&config.cell)?;
    let mut rows = Vec::new();
    for scenario in scenario_catalog() {
        if scenario.kind == ScenarioKind::None {
            continue;
        }
        let grid = if scenario.direction.covers(Direction::Downlink) {
            &dl
        } else {
            &ul
        };
        let footprint = footprint_for_scenario(&scenario, grid)?;
        let fraction = footprint.fraction();
        rows.push(FractionTableRow {
            scenario: scenario.kind.name().to_string(),
            fraction,
            isr_f_over_isr_re_db: 10.0 * fraction.log10(),
        });
    }
    Ok(rows)
}

/// Export formats for sweep results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
    PlotData,
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Csv => "csv",
            ExportFormat::Json => "json",
            ExportFormat::PlotData => "plot.json",
        }
    }
}

/// CSV view: one row per record.
pub fn to_csv(result: &SweepResult) -> String {
    let mut out = String::from(
        "scenario,direction,isr_re_db,isr_f_db,dl_mbps,ul_mbps,degradation,sync_lost\n",
    );
    for record in &result.records {
        let scenario = &record.scenario;
        let (isr_re, isr_f) = match &record.metrics {
            Some(m) => (format!("{:.6}", m.isr_re_db), format!("{:.6}", m.isr_f_db)),
            None => (String::new(), String::new()),
        };
        out.push_str(&format!(
            "{},{},{},{},{:.6},{:.6},{:.6},{}\n",
            scenario.kind.name(),
            scenario.direction.label(),
            isr_re,
            isr_f,
            record.report.dl_mbps,
            record.report.ul_mbps,
            record.report.degradation_fraction,
            record.report.sync_lost,
        ));
    }
    out
}

/// Full-fidelity JSON view.
pub fn to_json(result: &SweepResult) -> Result<String, HarnessError> {
    Ok(serde_json::to_string_pretty(result)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct PlotSeriesEntry {
    scenario: String,
    dl_mbps: f64,
    ul_mbps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct PlotFigure {
    isr_re_db: f64,
    series: Vec<PlotSeriesEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct PlotData {
    tool_version: String,
    figures: Vec<PlotFigure>,
}

/// Per-figure bar-chart series: one figure per ISR point, DL/UL throughput
/// per scenario, with the quiet baseline repeated in every figure.
pub fn to_plotdata(result: &SweepResult) -> Result<String, HarnessError> {
    let mut figures = Vec::new();
    for &isr in &result.config.isr_re_sweep_db {
        let mut series = Vec::new();
        for record in &result.records {
            let include = record.scenario.kind == ScenarioKind::None
                || record.scenario.isr_re_db == isr;
            if include {
                series.push(PlotSeriesEntry {
                    scenario: record.scenario.kind.name().to_string(),
                    dl_mbps: record.report.dl_mbps,
                    ul_mbps: record.report.ul_mbps,
                });
            }
        }
        figures.push(PlotFigure { isr_re_db: isr, series });
    }
    Ok(serde_json::to_string_pretty(&PlotData {
        tool_version: result.tool_version.clone(),
        figures,
    })?)
}

/// Writes a sweep result in the given format; returns the written path.
pub fn export(
    result: &SweepResult,
    format: ExportFormat,
    path: &Path,
) -> Result<PathBuf, HarnessError> {
    let body = match format {
        ExportFormat::Csv => to_csv(result),
        ExportFormat::Json => to_json(result)?,
        ExportFormat::PlotData => to_plotdata(result)?,
    };
    std::fs::write(path, body).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(path.to_path_buf())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_matches_the_published_rows() {
        let catalog = scenario_catalog();
        assert_eq!(catalog.len(), 7);
        let expected: [(usize, &str, &str, bool); 7] = [
            (0, "No interference", "-", false),
            (1, "Full-band interference", "UL/DL", false),
            (2, "Half-band interference", "UL/DL", false),
            (3, "PUCCH interference", "UL", false),
            (4, "PUSCH interference", "UL", false),
            (5, "PSS/SSS spoofing", "DL", false),
            (6, "PSS/SSS interference", "DL", true),
        ];
        for (scenario, (id, name, direction, synchronous)) in catalog.iter().zip(expected) {
            assert_eq!(scenario.kind.id(), id);
            assert_eq!(scenario.kind.name(), name);
            assert_eq!(scenario.direction.label(), direction);
            assert_eq!(scenario.synchronous, synchronous);
        }
    }

    #[test]
    fn quiet_scenario_reports_nominal() {
        let config = RunConfig::default();
        let quiet = config.scenario_by_id(0).unwrap();
        let (report, metrics) = run_scenario(&config, &quiet, 0.0).unwrap();
        assert_eq!(report.dl_mbps, 12.0);
        assert_eq!(report.ul_mbps, 8.0);
        assert!(metrics.is_none());
    }

    #[test]
    fn uplink_only_scenario_keeps_downlink_nominal() {
        let config = RunConfig::default();
        let pucch = config.scenario_by_id(3).unwrap();
        for isr in [-5.0, 0.0, 5.0] {
            let (report, metrics) = run_scenario(&config, &pucch, isr).unwrap();
            assert_eq!(report.dl_mbps, 12.0, "isr {isr}");
            let metrics = metrics.unwrap();
            assert!((metrics.fraction - 0.25).abs() < 1e-12);
            assert!((metrics.isr_f_db - (isr - 6.0206)).abs() < 1e-3);
        }
    }

    #[test]
    fn sync_scenario_degrades_dl_without_losing_sync() {
        let config = RunConfig::default();
        let sync = config.scenario_by_id(6).unwrap();
        let (report, _) = run_scenario(&config, &sync, 5.0).unwrap();
        assert!(report.dl_mbps < 12.0);
        assert!(!report.sync_lost);
        assert_eq!(report.ul_mbps, 8.0);
    }

    #[test]
    fn default_sweep_writes_13_records() {
        let result = sweep(&RunConfig::default()).unwrap();
        assert_eq!(result.records.len(), 13);
        let quiet_records = result
            .records
            .iter()
            .filter(|r| r.scenario.kind == ScenarioKind::None)
            .count();
        assert_eq!(quiet_records, 1);
        // Metrics satisfy the frame-metric identity against the fraction.
        for record in &result.records {
            if let Some(m) = &record.metrics {
                let expected = m.isr_re_db + 10.0 * m.fraction.log10();
                assert!((m.isr_f_db - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fraction_table_reproduces_published_ratios() {
        let rows = fraction_table(&RunConfig::default()).unwrap();
        let expected = [
            ("Full-band interference", 0.0),
            ("Half-band interference", -3.01),
            ("PUCCH interference", -6.02),
            ("PUSCH interference", -1.25),
            ("PSS/SSS spoofing", -19.1),
            ("PSS/SSS interference", -19.1),
        ];
        assert_eq!(rows.len(), 6);
        for (row, (name, ratio)) in rows.iter().zip(expected) {
            assert_eq!(row.scenario, name);
            assert!(
                (row.isr_f_over_isr_re_db - ratio).abs() < 0.02,
                "{name}: {} vs {ratio}",
                row.isr_f_over_isr_re_db
            );
        }
    }

    #[test]
    fn outputs_are_reproducible_for_identical_configs() {
        let config = RunConfig::default();
        let a = sweep(&config).unwrap();
        let b = sweep(&config).unwrap();
        assert_eq!(to_csv(&a), to_csv(&b));
        assert_eq!(to_json(&a).unwrap(), to_json(&b).unwrap());
        assert_eq!(to_plotdata(&a).unwrap(), to_plotdata(&b).unwrap());
    }

    #[test]
    fn json_round_trips() {
        let result = sweep(&RunConfig::default()).unwrap();
        let json = to_json(&result).unwrap();
        let parsed: SweepResult = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, result);
    }

    #[test]
    fn csv_row_count_and_header() {
        let result = sweep(&RunConfig::default()).unwrap();
        let csv = to_csv(&result);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), result.records.len() + 1);
        assert_eq!(
            lines[0],
            "scenario,direction,isr_re_db,isr_f_db,dl_mbps,ul_mbps,degradation,sync_lost"
        );
        // Quiet baseline leaves the ISR cells empty.
        assert!(lines[1].starts_with("No interference,-,,,"));
    }

    #[test]
    fn plotdata_groups_by_isr_point() {
        let result = sweep(&RunConfig::default()).unwrap();
        let plot: serde_json::Value = serde_json::from_str(&to_plotdata(&result).unwrap()).unwrap();
        let figures = plot["figures"].as_array().unwrap();
        assert_eq!(figures.len(), 2);
        for figure in figures {
            // All 7 catalog scenarios appear in each figure.
            assert_eq!(figure["series"].as_array().unwrap().len(), 7);
        }
    }

    #[test]
    fn export_writes_files() {
        let dir = tempfile::tempdir().unwrap();
        let result = sweep(&RunConfig::default()).unwrap();
        for format in [ExportFormat::Csv, ExportFormat::Json, ExportFormat::PlotData] {
            let path = dir.path().join(format!("out.{}", format.extension()));
            export(&result, format, &path).unwrap();
            assert!(path.exists());
        }
    }

    #[test]
    fn reports_stay_bounded_over_the_dense_sweep() {
        let result = sweep(&RunConfig::dense_sweep()).unwrap();
        let link = &result.config.link;
        for record in &result.records {
            let report = &record.report;
            assert!(report.dl_mbps >= 0.0 && report.dl_mbps <= link.nominal_dl_mbps);
            assert!(report.ul_mbps >= 0.0 && report.ul_mbps <= link.nominal_ul_mbps);
            assert!((0.0..=1.0).contains(&report.degradation_fraction));
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut config = RunConfig::default();
        config.scenarios.clear();
        assert!(matches!(sweep(&config), Err(HarnessError::InvalidConfig(_))));
        let mut config = RunConfig::default();
        config.isr_re_sweep_db = vec![f64::NAN];
        assert!(sweep(&config).is_err());
        assert!(RunConfig::default().scenario_by_id(9).is_err());
    }

    #[test]
    fn duty_cycle_scales_average_interference() {
        let config = RunConfig::default();
        let mut scenario = config.scenario_by_id(2).unwrap();
        let (full_duty, _) = run_scenario(&config, &scenario, 5.0).unwrap();
        scenario.duty_cycle = 0.1;
        let (low_duty, _) = run_scenario(&config, &scenario, 5.0).unwrap();
        assert!(low_duty.dl_mbps >= full_duty.dl_mbps);
        assert!(low_duty.ul_mbps >= full_duty.ul_mbps);
    }
}
