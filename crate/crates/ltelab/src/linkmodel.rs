//! Link abstraction: per-RE SINR, control-channel decode gates, and DL/UL
//! throughput estimation.
//!
//! The model maps a grid plus an interference power map to per-RE SINR,
//! gates each subframe on its control channels' mean SINR, counts the data
//! REs above a decodability threshold, and applies a continuous sync-quality
//! penalty on the downlink. Nominal rates are calibration constants; the
//! gates and thresholds reproduce the qualitative degradation structure of
//! the modeled attacks rather than bit-level coding performance.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{
    ChannelKind, Direction, ReIndex, ResourceGrid, SUBCARRIERS_PER_RB, SUBFRAMES_PER_FRAME,
};
use crate::interference::{InterferenceError, InterferenceMap, InterferenceScenario, ScenarioKind};

#[derive(Debug, Error)]
pub enum LinkError {
    #[error(transparent)]
    Interference(#[from] InterferenceError),
    /// Interference map shaped for a different grid.
    #[error("interference map covers {map} REs, grid has {grid}")]
    DimensionMismatch { map: usize, grid: usize },
    /// Operation restricted to one link direction.
    #[error("{operation} requires a {expected:?} grid")]
    WrongDirection {
        operation: &'static str,
        expected: Direction,
    },
    #[error("invalid link configuration: {0}")]
    InvalidConfig(String),
    /// Cell-search evaluation handed a non-spoof scenario.
    #[error("cell search expects a PSS/SSS spoofing scenario, got {0:?}")]
    NotASpoof(ScenarioKind),
}

/// Link-model thresholds, gains, and calibration constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LinkConfig {
    /// Per-RE noise power relative to unit signal power, dB.
    pub noise_floor_db: f64,
    /// Minimum per-RE SINR for a data RE to count as decodable, dB.
    pub data_sinr_threshold_db: f64,
    /// Mean-SINR decode threshold for the PCFICH, dB.
    pub pcfich_sinr_threshold_db: f64,
    /// Mean-SINR decode threshold for the PDCCH, dB.
    pub pdcch_sinr_threshold_db: f64,
    /// Mean-SINR decode threshold for the PBCH (attach modeling only), dB.
    pub pbch_sinr_threshold_db: f64,
    /// Mean-SINR threshold for the uplink control region, dB.
    pub pucch_sinr_threshold_db: f64,
    /// Couples reference-signal corruption into effective data SINR.
    pub crs_penalty_gain: f64,
    /// Slope of the residual throughput penalty in sync quality.
    pub sync_penalty_gain: f64,
    /// Sync quality above which no penalty applies, dB.
    pub sync_penalty_knee_db: f64,
    /// Normalization span of the penalty slope, dB.
    pub sync_penalty_range_db: f64,
    /// Penalty floor while synchronization is maintained.
    pub min_sync_penalty: f64,
    /// Sync quality below which the cell is considered lost, dB.
    pub sync_loss_floor_db: f64,
    /// Spoof-over-signal margin that captures a searching UE, dB.
    pub spoof_capture_threshold_db: f64,
    /// Interference-free downlink throughput, Mbps.
    pub nominal_dl_mbps: f64,
    /// Interference-free uplink throughput, Mbps.
    pub nominal_ul_mbps: f64,
}

impl Default for LinkConfig {
    fn default() -> Self {
        LinkConfig {
            noise_floor_db: -20.0,
            data_sinr_threshold_db: 3.0,
            pcfich_sinr_threshold_db: 0.0,
            pdcch_sinr_threshold_db: 0.0,
            pbch_sinr_threshold_db: 0.0,
            pucch_sinr_threshold_db: 0.0,
            crs_penalty_gain: 1.0,
            sync_penalty_gain: 1.0,
            sync_penalty_knee_db: 10.0,
            sync_penalty_range_db: 40.0,
            min_sync_penalty: 0.05,
            sync_loss_floor_db: -10.5,
            spoof_capture_threshold_db: 3.0,
            nominal_dl_mbps: 12.0,
            nominal_ul_mbps: 8.0,
        }
    }
}

impl LinkConfig {
    pub fn validate(&self) -> Result<(), LinkError> {
        let thresholds = [
            self.noise_floor_db,
            self.data_sinr_threshold_db,
            self.pcfich_sinr_threshold_db,
            self.pdcch_sinr_threshold_db,
            self.pbch_sinr_threshold_db,
            self.pucch_sinr_threshold_db,
            self.sync_penalty_knee_db,
            self.sync_loss_floor_db,
            self.spoof_capture_threshold_db,
        ];
        if thresholds.iter().any(|t| !t.is_finite()) {
            return Err(LinkError::InvalidConfig("thresholds must be finite".into()));
        }
        if self.crs_penalty_gain < 0.0 || self.sync_penalty_gain < 0.0 {
            return Err(LinkError::InvalidConfig("gains must be >= 0".into()));
        }
        if self.nominal_dl_mbps <= 0.0 || self.nominal_ul_mbps <= 0.0 {
            return Err(LinkError::InvalidConfig("nominal rates must be > 0".into()));
        }
        if self.sync_penalty_range_db <= 0.0 {
            return Err(LinkError::InvalidConfig(
                "sync_penalty_range_db must be > 0".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.min_sync_penalty) {
            return Err(LinkError::InvalidConfig(
                "min_sync_penalty must be in [0, 1]".into(),
            ));
        }
        Ok(())
    }

    pub fn noise_linear(&self) -> f64 {
        10f64.powf(self.noise_floor_db / 10.0)
    }
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Per-RE linear SINR over one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrMap {
    n_subcarriers: usize,
    linear: Vec<f64>,
}

impl SinrMap {
    pub fn at(&self, re: ReIndex) -> f64 {
        self.linear[usize::from(re.symbol) * self.n_subcarriers + usize::from(re.subcarrier)]
    }

    pub fn values(&self) -> &[f64] {
        &self.linear
    }
}

/// `SINR(re) = signal / (noise + interference)` per RE.
pub fn per_re_sinr(
    grid: &ResourceGrid,
    interference: &InterferenceMap,
    config: &LinkConfig,
) -> Result<SinrMap, LinkError> {
    config.validate()?;
    if interference.powers().len() != grid.n_res() {
        return Err(LinkError::DimensionMismatch {
            map: interference.powers().len(),
            grid: grid.n_res(),
        });
    }
    let noise = config.noise_linear();
    let linear = grid
        .powers()
        .iter()
        .zip(interference.powers())
        .map(|(&signal, &inter)| signal / (noise + inter))
        .collect();
    Ok(SinrMap {
        n_subcarriers: grid.n_subcarriers(),
        linear,
    })
}

/// Per-subframe control-channel decision inputs and verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubframeControl {
    pub subframe: u8,
    pub pcfich_mean_sinr_db: f64,
    pub pdcch_mean_sinr_db: f64,
    /// Only subframe 0 carries the PBCH.
    pub pbch_mean_sinr_db: Option<f64>,
    /// PCFICH and PDCCH both above threshold. The PBCH gates cell attach,
    /// not steady-state throughput.
    pub control_ok: bool,
    pub pbch_ok: Option<bool>,
}

/// Evaluates the downlink control gates for every subframe.
pub fn control_gate(
    grid: &ResourceGrid,
    sinr: &SinrMap,
    config: &LinkConfig,
) -> Result<Vec<SubframeControl>, LinkError> {
    if grid.direction() != Direction::Downlink {
        return Err(LinkError::WrongDirection {
            operation: "control_gate",
            expected: Direction::Downlink,
        });
    }
    let mut acc: Vec<[(f64, usize); 3]> = vec![[(0.0, 0); 3]; SUBFRAMES_PER_FRAME];
    for (i, &kind) in grid.labels().iter().enumerate() {
        let slot = match kind {
            ChannelKind::Pcfich => 0,
            ChannelKind::Pdcch => 1,
            ChannelKind::Pbch => 2,
            _ => continue,
        };
        let re = grid.re_at(i);
        let entry = &mut acc[usize::from(re.subframe())][slot];
        entry.0 += sinr.at(re);
        entry.1 += 1;
    }

    let mean_db = |(sum, count): (f64, usize)| {
        if count == 0 {
            f64::INFINITY
        } else {
            linear_to_db(sum / count as f64)
        }
    };
    Ok(acc
        .into_iter()
        .enumerate()
        .map(|(sf, [pcfich, pdcch, pbch])| {
            let pcfich_db = mean_db(pcfich);
            let pdcch_db = mean_db(pdcch);
            let pbch_db = (pbch.1 > 0).then(|| mean_db(pbch));
            SubframeControl {
                subframe: sf as u8,
                pcfich_mean_sinr_db: pcfich_db,
                pdcch_mean_sinr_db: pdcch_db,
                pbch_mean_sinr_db: pbch_db,
                control_ok: pcfich_db >= config.pcfich_sinr_threshold_db
                    && pdcch_db >= config.pdcch_sinr_threshold_db,
                pbch_ok: pbch_db.map(|db| db >= config.pbch_sinr_threshold_db),
            }
        })
        .collect())
}

/// Sync-signal tracking verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyncTracking {
    pub sync_lost: bool,
    /// Mean SINR over the PSS/SSS REs, linear.
    pub quality_linear: f64,
    pub quality_db: f64,
}

/// Mean SINR over the sync-signal REs, with the hard loss floor applied.
pub fn sync_tracking(
    grid: &ResourceGrid,
    interference: &InterferenceMap,
    config: &LinkConfig,
) -> Result<SyncTracking, LinkError> {
    if grid.direction() != Direction::Downlink {
        return Err(LinkError::WrongDirection {
            operation: "sync_tracking",
            expected: Direction::Downlink,
        });
    }
    let sinr = per_re_sinr(grid, interference, config)?;
    let mut sum = 0.0;
    let mut count = 0usize;
    for kind in [ChannelKind::Pss, ChannelKind::Sss] {
        for re in grid.res_with_label(kind) {
            sum += sinr.at(re);
            count += 1;
        }
    }
    let quality_linear = sum / count as f64;
    let quality_db = linear_to_db(quality_linear);
    Ok(SyncTracking {
        sync_lost: quality_db < config.sync_loss_floor_db,
        quality_linear,
        quality_db,
    })
}

/// Residual throughput multiplier from sync quality: unity above the knee,
/// sloping down to a floor that is only left once the cell itself is lost.
fn sync_penalty(quality_db: f64, lost: bool, config: &LinkConfig) -> f64 {
    if lost {
        return 0.0;
    }
    let shortfall = (config.sync_penalty_knee_db - quality_db).max(0.0);
    (1.0 - config.sync_penalty_gain * shortfall / config.sync_penalty_range_db)
        .clamp(config.min_sync_penalty, 1.0)
}

/// Per-subframe outcome feeding the throughput estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubframeOutcome {
    pub subframe_index: u8,
    pub control_ok: bool,
    /// Fraction of the subframe's data REs above the decode threshold.
    pub decodable_fraction: f64,
    /// Mean sync-signal SINR for subframes carrying PSS/SSS, dB.
    pub sync_quality_db: Option<f64>,
}

/// Per-channel counts of gated subframes in one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GateCounts {
    pub pcfich: u8,
    pub pdcch: u8,
    pub pbch: u8,
    pub pucch: u8,
}

/// Throughput estimate for one scenario evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThroughputReport {
    /// Scenario echo, attached by the experiment harness.
    pub scenario: Option<InterferenceScenario>,
    pub dl_mbps: f64,
    pub ul_mbps: f64,
    /// Worst-direction degradation, `1 - achieved / nominal`.
    pub degradation_fraction: f64,
    pub gates_tripped: GateCounts,
    pub sync_lost: bool,
    pub sync_quality_db: Option<f64>,
}

impl ThroughputReport {
    /// Interference-free baseline.
    pub fn nominal(config: &LinkConfig) -> Self {
        ThroughputReport {
            scenario: None,
            dl_mbps: config.nominal_dl_mbps,
            ul_mbps: config.nominal_ul_mbps,
            degradation_fraction: 0.0,
            gates_tripped: GateCounts::default(),
            sync_lost: false,
            sync_quality_db: Some(-config.noise_floor_db),
        }
    }

    pub fn dl_degradation(&self, config: &LinkConfig) -> f64 {
        (1.0 - self.dl_mbps / config.nominal_dl_mbps).clamp(0.0, 1.0)
    }

    pub fn ul_degradation(&self, config: &LinkConfig) -> f64 {
        (1.0 - self.ul_mbps / config.nominal_ul_mbps).clamp(0.0, 1.0)
    }
}

/// Mean interference power on the CRS REs of each (resource-block,
/// subframe) cell; zero where a block-subframe carries no reference REs.
fn crs_interference_by_block(
    grid: &ResourceGrid,
    interference: &InterferenceMap,
) -> Vec<Vec<f64>> {
    let n_blocks = grid.n_subcarriers() / SUBCARRIERS_PER_RB;
    let mut sums = vec![vec![(0.0f64, 0usize); SUBFRAMES_PER_FRAME]; n_blocks];
    for re in grid.res_with_label(ChannelKind::Crs) {
        let block = usize::from(re.subcarrier) / SUBCARRIERS_PER_RB;
        let entry = &mut sums[block][usize::from(re.subframe())];
        entry.0 += interference.power_at(re);
        entry.1 += 1;
    }
    sums.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|(sum, count)| if count == 0 { 0.0 } else { sum / count as f64 })
                .collect()
        })
        .collect()
}

/// Per-subframe control verdicts, decodability, and sync quality.
pub fn subframe_outcomes(
    grid: &ResourceGrid,
    interference: &InterferenceMap,
    config: &LinkConfig,
) -> Result<Vec<SubframeOutcome>, LinkError> {
    let evaluation = evaluate(grid, interference, config)?;
    Ok(evaluation.subframes)
}

struct Evaluation {
    subframes: Vec<SubframeOutcome>,
    report: ThroughputReport,
}

fn evaluate(
    grid: &ResourceGrid,
    interference: &InterferenceMap,
    config: &LinkConfig,
) -> Result<Evaluation, LinkError> {
    let sinr = per_re_sinr(grid, interference, config)?;
    let noise = config.noise_linear();
    let data_threshold = db_to_linear(config.data_sinr_threshold_db);

    match grid.direction() {
        Direction::Downlink => {
            let controls = control_gate(grid, &sinr, config)?;
            let tracking = sync_tracking(grid, interference, config)?;
            let penalty = sync_penalty(tracking.quality_db, tracking.sync_lost, config);
            let crs_noise = crs_interference_by_block(grid, interference);

            // Decodable fraction over PDSCH REs: interference on the RE
            // itself plus the channel-estimation error induced by reference
            // signal corruption within the same resource block.
            let mut decodable = vec![(0usize, 0usize); SUBFRAMES_PER_FRAME];
            for re in grid.res_with_label(ChannelKind::Pdsch) {
                let sf = usize::from(re.subframe());
                let block = usize::from(re.subcarrier) / SUBCARRIERS_PER_RB;
                let extra = config.crs_penalty_gain * crs_noise[block][sf];
                let eff = grid.power(re) / (noise + interference.power_at(re) + extra);
                let entry = &mut decodable[sf];
                entry.1 += 1;
                if eff >= data_threshold {
                    entry.0 += 1;
                }
            }

            let mut gates = GateCounts::default();
            let mut subframes = Vec::with_capacity(SUBFRAMES_PER_FRAME);
            let mut sum = 0.0;
            for (sf, control) in controls.iter().enumerate() {
                if !control.control_ok {
                    if control.pcfich_mean_sinr_db < config.pcfich_sinr_threshold_db {
                        gates.pcfich += 1;
                    }
                    if control.pdcch_mean_sinr_db < config.pdcch_sinr_threshold_db {
                        gates.pdcch += 1;
                    }
                }
                if control.pbch_ok == Some(false) {
                    gates.pbch += 1;
                }
                let (ok_count, total) = decodable[sf];
                let fraction = ok_count as f64 / total as f64;
                let carries_sync = sf == 0 || sf == 5;
                subframes.push(SubframeOutcome {
                    subframe_index: sf as u8,
                    control_ok: control.control_ok,
                    decodable_fraction: fraction,
                    sync_quality_db: carries_sync.then_some(tracking.quality_db),
                });
                if control.control_ok {
                    sum += fraction * penalty;
                }
            }
            let dl_mbps = config.nominal_dl_mbps * sum / SUBFRAMES_PER_FRAME as f64;
            let report = ThroughputReport {
                scenario: None,
                dl_mbps,
                ul_mbps: config.nominal_ul_mbps,
                degradation_fraction: (1.0 - dl_mbps / config.nominal_dl_mbps).clamp(0.0, 1.0),
                gates_tripped: gates,
                sync_lost: tracking.sync_lost,
                sync_quality_db: Some(tracking.quality_db),
            };
            Ok(Evaluation { subframes, report })
        }
        Direction::Uplink => {
            // Uplink gate: the control region must stay decodable for
            // grants and acknowledgements to flow.
            let pucch_threshold = config.pucch_sinr_threshold_db;
            let mut pucch_acc = vec![(0.0f64, 0usize); SUBFRAMES_PER_FRAME];
            for re in grid.res_with_label(ChannelKind::Pucch) {
                let entry = &mut pucch_acc[usize::from(re.subframe())];
                entry.0 += sinr.at(re);
                entry.1 += 1;
            }
            let mut decodable = vec![(0usize, 0usize); SUBFRAMES_PER_FRAME];
            for re in grid.res_with_label(ChannelKind::Pusch) {
                let entry = &mut decodable[usize::from(re.subframe())];
                entry.1 += 1;
                if sinr.at(re) >= data_threshold {
                    entry.0 += 1;
                }
            }

            let mut gates = GateCounts::default();
            let mut subframes = Vec::with_capacity(SUBFRAMES_PER_FRAME);
            let mut sum = 0.0;
            for sf in 0..SUBFRAMES_PER_FRAME {
                let (s, c) = pucch_acc[sf];
                let pucch_db = linear_to_db(s / c as f64);
                let control_ok = pucch_db >= pucch_threshold;
                if !control_ok {
                    gates.pucch += 1;
                }
                let (ok_count, total) = decodable[sf];
                let fraction = ok_count as f64 / total as f64;
                subframes.push(SubframeOutcome {
                    subframe_index: sf as u8,
                    control_ok,
                    decodable_fraction: fraction,
                    sync_quality_db: None,
                });
                if control_ok {
                    sum += fraction;
                }
            }
            let ul_mbps = config.nominal_ul_mbps * sum / SUBFRAMES_PER_FRAME as f64;
            let report = ThroughputReport {
                scenario: None,
                dl_mbps: config.nominal_dl_mbps,
                ul_mbps,
                degradation_fraction: (1.0 - ul_mbps / config.nominal_ul_mbps).clamp(0.0, 1.0),
                gates_tripped: gates,
                sync_lost: false,
                sync_quality_db: None,
            };
            Ok(Evaluation { subframes, report })
        }
    }
}

/// Estimates throughput for one direction's grid under an interference map.
///
/// The achieved rate is the nominal rate scaled by the per-subframe mean of
/// `control_ok * decodable_fraction * sync_penalty`; the unevaluated
/// direction is reported at its nominal rate.
pub fn estimate_throughput(
    grid: &ResourceGrid,
    interference: &InterferenceMap,
    config: &LinkConfig,
) -> Result<ThroughputReport, LinkError> {
    Ok(evaluate(grid, interference, config)?.report)
}

/// Initial cell-selection outcome in the presence of a spoofer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellSearchOutcome {
    /// The UE camps on the genuine cell.
    AttachLegit,
    /// The UE would camp on a spoofed cell that carried valid system
    /// information; not produced by the bundled spoof model, which carries
    /// sync signals only.
    AttachFake,
    /// The UE locks to the spoofed sync signals but finds no valid SIB1 and
    /// fails to attach.
    NoAttach,
}

/// Decides the cell-search outcome from the spoofer's relative PSS power.
///
/// A spoofer whose per-RE power margin reaches the capture threshold wins
/// the search, and — carrying no valid system information — denies
/// attachment. No spoofer, or a weak one, leaves the genuine cell selected.
pub fn cell_search_outcome(
    grid: &ResourceGrid,
    spoof: Option<&InterferenceScenario>,
    config: &LinkConfig,
) -> Result<CellSearchOutcome, LinkError> {
    config.validate()?;
    if grid.direction() != Direction::Downlink {
        return Err(LinkError::WrongDirection {
            operation: "cell_search_outcome",
            expected: Direction::Downlink,
        });
    }
    let Some(scenario) = spoof else {
        return Ok(CellSearchOutcome::AttachLegit);
    };
    if scenario.kind != ScenarioKind::PssSssSpoof {
        return Err(LinkError::NotASpoof(scenario.kind));
    }
    scenario.validate()?;
    if scenario.isr_re_db >= config.spoof_capture_threshold_db {
        Ok(CellSearchOutcome::NoAttach)
    } else {
        Ok(CellSearchOutcome::AttachLegit)
    }
}
