//! Interference scenarios, RE footprints, and ISR metrics.
//!
//! A scenario (one row of the built-in test-case catalog) is turned into a
//! [`Footprint`] — the set of resource elements it targets within one frame —
//! on a concrete grid. Footprints drive both the ISR metric bookkeeping
//! (`ISR_F = ISR_RE * N_T,F / N_tot,F`, handled in dB here) and the per-RE
//! interference power map consumed by the link model.

pub mod iq;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grid::{
    CellConfig, ChannelKind, Direction, GridError, ReIndex, ResourceGrid, CENTRAL_BAND_SUBCARRIERS,
    SYMBOLS_PER_FRAME, SYMBOLS_PER_SLOT, SYNC_SUBCARRIERS,
};

/// Errors raised while deriving footprints, metrics, or alignment.
#[derive(Debug, Error)]
pub enum InterferenceError {
    #[error(transparent)]
    Grid(#[from] GridError),
    /// Scenario fields inconsistent with the catalog row for its kind.
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    /// Scenario does not affect the grid's link direction.
    #[error("scenario {kind:?} does not target the {direction:?} grid")]
    DirectionMismatch {
        kind: ScenarioKind,
        direction: Direction,
    },
    /// The no-interference scenario has no footprint.
    #[error("the no-interference scenario has no footprint")]
    EmptyScenario,
    /// Footprint was derived from a differently shaped grid.
    #[error("footprint shape {footprint} does not match grid shape {grid}")]
    FootprintMismatch { footprint: usize, grid: usize },
    /// Fraction argument outside (0, 1].
    #[error("targeted fraction must be in (0, 1], got {0}")]
    InvalidFraction(f64),
    /// Synchronous alignment requested without a locked sync state.
    #[error("interferer has not acquired the cell: sync state is unlocked")]
    Unlocked,
    /// Alignment requested for an asynchronous scenario.
    #[error("scenario {0:?} is asynchronous; its footprint timing is free-running")]
    NotSynchronous(ScenarioKind),
    /// IQ synthesis parameter mismatch.
    #[error("unsupported sample rate {sample_rate} for {n_subcarriers} subcarriers")]
    UnsupportedSampleRate { sample_rate: f64, n_subcarriers: usize },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

/// Link direction(s) a scenario targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Affects {
    /// No direction (no-interference row).
    Neither,
    Downlink,
    Uplink,
    /// Both link directions.
    Both,
}

impl Affects {
    pub fn covers(self, direction: Direction) -> bool {
        matches!(
            (self, direction),
            (Affects::Both, _)
                | (Affects::Downlink, Direction::Downlink)
                | (Affects::Uplink, Direction::Uplink)
        )
    }

    /// Display label matching the catalog's direction column.
    pub fn label(self) -> &'static str {
        match self {
            Affects::Neither => "-",
            Affects::Downlink => "DL",
            Affects::Uplink => "UL",
            Affects::Both => "UL/DL",
        }
    }
}

/// Interference scenario kinds (catalog rows 0..=6).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioKind {
    None,
    FullBand,
    HalfBand,
    PucchTarget,
    PuschTarget,
    PssSssSpoof,
    PssSssInterference,
}

impl ScenarioKind {
    /// Catalog row index.
    pub fn id(self) -> usize {
        match self {
            ScenarioKind::None => 0,
            ScenarioKind::FullBand => 1,
            ScenarioKind::HalfBand => 2,
            ScenarioKind::PucchTarget => 3,
            ScenarioKind::PuschTarget => 4,
            ScenarioKind::PssSssSpoof => 5,
            ScenarioKind::PssSssInterference => 6,
        }
    }

    pub fn from_id(id: usize) -> Option<Self> {
        Some(match id {
            0 => ScenarioKind::None,
            1 => ScenarioKind::FullBand,
            2 => ScenarioKind::HalfBand,
            3 => ScenarioKind::PucchTarget,
            4 => ScenarioKind::PuschTarget,
            5 => ScenarioKind::PssSssSpoof,
            6 => ScenarioKind::PssSssInterference,
            _ => return None,
        })
    }

    /// Catalog display name.
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::None => "No interference",
            ScenarioKind::FullBand => "Full-band interference",
            ScenarioKind::HalfBand => "Half-band interference",
            ScenarioKind::PucchTarget => "PUCCH interference",
            ScenarioKind::PuschTarget => "PUSCH interference",
            ScenarioKind::PssSssSpoof => "PSS/SSS spoofing",
            ScenarioKind::PssSssInterference => "PSS/SSS interference",
        }
    }

    /// Direction column of the catalog row.
    pub fn affects(self) -> Affects {
        match self {
            ScenarioKind::None => Affects::Neither,
            ScenarioKind::FullBand | ScenarioKind::HalfBand => Affects::Both,
            ScenarioKind::PucchTarget | ScenarioKind::PuschTarget => Affects::Uplink,
            ScenarioKind::PssSssSpoof | ScenarioKind::PssSssInterference => Affects::Downlink,
        }
    }

    /// Synchronous column of the catalog row.
    pub fn synchronous(self) -> bool {
        matches!(self, ScenarioKind::PssSssInterference)
    }
}

/// How the synchronization-signal footprints size themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FootprintMode {
    /// Force the published occupancy fraction (default 1.23%) by widening
    /// the time window over the central band.
    PaperFraction,
    /// Use the grid-exact RE sets: the central 72 subcarriers on the four
    /// sync symbols (interference), or the 62-subcarrier burst REs (spoof).
    GridExact,
}

/// One interference test case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct InterferenceScenario {
    pub kind: ScenarioKind,
    /// Targeted link direction(s); must match the catalog row for `kind`.
    pub direction: Affects,
    /// Whether the interferer frame-aligns to the victim cell.
    pub synchronous: bool,
    /// Interference-to-signal ratio per targeted resource element, dB.
    pub isr_re_db: f64,
    /// Additional transmit timing offset in samples (synchronous scenarios).
    pub timing_offset_samples: i64,
    /// On-air fraction for asynchronous scenarios (average-power scaling).
    pub duty_cycle: f64,
    /// Sizing rule for the PSS/SSS footprints.
    pub footprint_mode: FootprintMode,
    /// Occupancy fraction forced in paper-fraction mode.
    pub paper_sync_fraction: f64,
}

impl Default for InterferenceScenario {
    fn default() -> Self {
        InterferenceScenario::new(ScenarioKind::None, 0.0)
    }
}

impl InterferenceScenario {
    /// Canonical scenario for a catalog row at the given ISR_RE.
    pub fn new(kind: ScenarioKind, isr_re_db: f64) -> Self {
        InterferenceScenario {
            kind,
            direction: kind.affects(),
            synchronous: kind.synchronous(),
            isr_re_db,
            timing_offset_samples: 0,
            duty_cycle: 1.0,
            footprint_mode: FootprintMode::PaperFraction,
            paper_sync_fraction: 0.0123,
        }
    }

    /// Same scenario at a different ISR_RE.
    pub fn with_isr(&self, isr_re_db: f64) -> Self {
        InterferenceScenario {
            isr_re_db,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), InterferenceError> {
        if self.direction != self.kind.affects() {
            return Err(InterferenceError::InvalidScenario(format!(
                "{:?} targets {:?}, not {:?}",
                self.kind,
                self.kind.affects(),
                self.direction
            )));
        }
        if self.synchronous != self.kind.synchronous() {
            return Err(InterferenceError::InvalidScenario(format!(
                "{:?} must have synchronous = {}",
                self.kind,
                self.kind.synchronous()
            )));
        }
        if !self.isr_re_db.is_finite() {
            return Err(InterferenceError::InvalidScenario(
                "isr_re_db must be finite".into(),
            ));
        }
        if !self.synchronous && self.timing_offset_samples != 0 {
            return Err(InterferenceError::InvalidScenario(
                "timing_offset_samples applies to synchronous scenarios only".into(),
            ));
        }
        if !(self.duty_cycle > 0.0 && self.duty_cycle <= 1.0) {
            return Err(InterferenceError::InvalidScenario(format!(
                "duty_cycle must be in (0, 1], got {}",
                self.duty_cycle
            )));
        }
        if !(self.paper_sync_fraction > 0.0 && self.paper_sync_fraction <= 1.0) {
            return Err(InterferenceError::InvalidScenario(format!(
                "paper_sync_fraction must be in (0, 1], got {}",
                self.paper_sync_fraction
            )));
        }
        Ok(())
    }
}

/// Set of targeted resource elements within one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Footprint {
    n_subcarriers: usize,
    mask: Vec<bool>,
    n_target: usize,
}

impl Footprint {
    fn empty(n_subcarriers: usize) -> Self {
        Footprint {
            n_subcarriers,
            mask: vec![false; n_subcarriers * SYMBOLS_PER_FRAME],
            n_target: 0,
        }
    }

    /// Footprint targeting nothing, shaped for the given grid.
    pub fn none(grid: &ResourceGrid) -> Self {
        Footprint::empty(grid.n_subcarriers())
    }

    fn set(&mut self, sc: usize, sym: usize) {
        let idx = sym * self.n_subcarriers + sc;
        if !self.mask[idx] {
            self.mask[idx] = true;
            self.n_target += 1;
        }
    }

    pub fn n_subcarriers(&self) -> usize {
        self.n_subcarriers
    }

    /// Number of targeted REs per frame (N_T,F).
    pub fn n_target(&self) -> usize {
        self.n_target
    }

    /// Total REs per frame (N_tot,F).
    pub fn n_total(&self) -> usize {
        self.mask.len()
    }

    /// Targeted fraction of the frame.
    pub fn fraction(&self) -> f64 {
        self.n_target as f64 / self.n_total() as f64
    }

    pub fn contains(&self, re: ReIndex) -> bool {
        self.mask[usize::from(re.symbol) * self.n_subcarriers + usize::from(re.subcarrier)]
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// Targeted REs in linear-index order.
    pub fn targeted_res(&self) -> impl Iterator<Item = ReIndex> + '_ {
        self.mask.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| {
            ReIndex::new(
                (i % self.n_subcarriers) as u16,
                (i / self.n_subcarriers) as u8,
            )
        })
    }

    /// How many of the given REs this footprint covers.
    pub fn intersection_count(&self, res: impl Iterator<Item = ReIndex>) -> usize {
        res.filter(|&re| self.contains(re)).count()
    }

    /// Footprint with every targeted symbol index shifted cyclically.
    pub fn shift_symbols(&self, delta: i32) -> Footprint {
        let n_sym = SYMBOLS_PER_FRAME as i64;
        let delta = i64::from(delta).rem_euclid(n_sym) as usize;
        let mut out = Footprint::empty(self.n_subcarriers);
        for re in self.targeted_res() {
            let sym = (usize::from(re.symbol) + delta) % SYMBOLS_PER_FRAME;
            out.set(usize::from(re.subcarrier), sym);
        }
        out
    }
}

/// ISR bookkeeping for one footprint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsrMetrics {
    /// Interference-to-signal ratio per targeted RE, dB.
    pub isr_re_db: f64,
    /// Frame-averaged interference-to-signal ratio, dB.
    pub isr_f_db: f64,
    /// Targeted fraction of the frame's REs.
    pub fraction: f64,
}

impl IsrMetrics {
    pub fn for_footprint(isr_re_db: f64, footprint: &Footprint) -> Result<Self, InterferenceError> {
        let fraction = footprint.fraction();
        Ok(IsrMetrics {
            isr_re_db,
            isr_f_db: isr_f(isr_re_db, fraction)?,
            fraction,
        })
    }
}

/// Frame-averaged ISR from the per-RE ISR and the targeted fraction:
/// `ISR_F = ISR_RE + 10 log10(fraction)` in dB.
pub fn isr_f(isr_re_db: f64, fraction: f64) -> Result<f64, InterferenceError> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(InterferenceError::InvalidFraction(fraction));
    }
    Ok(isr_re_db + 10.0 * fraction.log10())
}

/// Per-RE ISR needed to reach a frame-averaged ISR over the targeted
/// fraction; exact inverse of [`isr_f`].
pub fn isr_re_for_target(isr_f_db: f64, fraction: f64) -> Result<f64, InterferenceError> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(InterferenceError::InvalidFraction(fraction));
    }
    Ok(isr_f_db - 10.0 * fraction.log10())
}

/// Per-RE interference power over one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceMap {
    n_subcarriers: usize,
    power: Vec<f64>,
}

impl InterferenceMap {
    /// All-zero map shaped like the grid.
    pub fn silent(grid: &ResourceGrid) -> Self {
        InterferenceMap {
            n_subcarriers: grid.n_subcarriers(),
            power: vec![0.0; grid.n_res()],
        }
    }

    pub fn n_subcarriers(&self) -> usize {
        self.n_subcarriers
    }

    pub fn powers(&self) -> &[f64] {
        &self.power
    }

    pub fn power_at(&self, re: ReIndex) -> f64 {
        self.power[usize::from(re.symbol) * self.n_subcarriers + usize::from(re.subcarrier)]
    }

    /// Summed interference power over the frame.
    pub fn total_energy(&self) -> f64 {
        self.power.iter().sum()
    }
}

/// Interference power map: `10^(isr_re_db/10)` times the signal power on
/// every targeted RE, zero elsewhere.
pub fn apply_interference(
    grid: &ResourceGrid,
    footprint: &Footprint,
    isr_re_db: f64,
) -> Result<InterferenceMap, InterferenceError> {
    if footprint.n_total() != grid.n_res() || footprint.n_subcarriers() != grid.n_subcarriers() {
        return Err(InterferenceError::FootprintMismatch {
            footprint: footprint.n_total(),
            grid: grid.n_res(),
        });
    }
    let ratio = 10f64.powf(isr_re_db / 10.0);
    let power = footprint
        .mask()
        .iter()
        .zip(grid.powers())
        .map(|(&hit, &signal)| if hit { ratio * signal } else { 0.0 })
        .collect();
    Ok(InterferenceMap {
        n_subcarriers: grid.n_subcarriers(),
        power,
    })
}

/// Derives the RE footprint of a scenario on a concrete grid.
pub fn footprint_for_scenario(
    scenario: &InterferenceScenario,
    grid: &ResourceGrid,
) -> Result<Footprint, InterferenceError> {
    scenario.validate()?;
    if scenario.kind == ScenarioKind::None {
        return Err(InterferenceError::EmptyScenario);
    }
    if !scenario.direction.covers(grid.direction()) {
        return Err(InterferenceError::DirectionMismatch {
            kind: scenario.kind,
            direction: grid.direction(),
        });
    }

    let n_sc = grid.n_subcarriers();
    let mut fp = Footprint::empty(n_sc);
    match scenario.kind {
        ScenarioKind::None => unreachable!(),
        ScenarioKind::FullBand => {
            for sym in 0..SYMBOLS_PER_FRAME {
                for sc in 0..n_sc {
                    fp.set(sc, sym);
                }
            }
        }
        ScenarioKind::HalfBand => {
            // The lower contiguous half of the band, all symbols.
            for sym in 0..SYMBOLS_PER_FRAME {
                for sc in 0..n_sc / 2 {
                    fp.set(sc, sym);
                }
            }
        }
        ScenarioKind::PucchTarget | ScenarioKind::PuschTarget => {
            let kind = if scenario.kind == ScenarioKind::PucchTarget {
                ChannelKind::Pucch
            } else {
                ChannelKind::Pusch
            };
            for re in grid.res_with_label(kind) {
                fp.set(usize::from(re.subcarrier), usize::from(re.symbol));
            }
        }
        ScenarioKind::PssSssInterference => {
            fill_sync_interference(&mut fp, grid, scenario)?;
        }
        ScenarioKind::PssSssSpoof => {
            fill_spoof(&mut fp, grid, scenario)?;
        }
    }
    Ok(fp)
}

/// Symbols carrying SSS then PSS, per sync occasion (slots 0 and 10).
pub fn sync_symbol_pairs() -> [(usize, usize); 2] {
    let s0 = SYMBOLS_PER_SLOT - 2;
    let p0 = SYMBOLS_PER_SLOT - 1;
    [(s0, p0), (10 * SYMBOLS_PER_SLOT + s0, 10 * SYMBOLS_PER_SLOT + p0)]
}

/// Column growth order for the paper-fraction sync window: the four sync
/// symbols first, then symbols added alternately after/before each occasion.
fn sync_window_symbols() -> Vec<usize> {
    let [(s0, p0), (s1, p1)] = sync_symbol_pairs();
    let mut order = vec![s0, p0, s1, p1];
    for k in 1..SYMBOLS_PER_FRAME {
        for candidate in [
            p0 as i64 + k as i64,
            p1 as i64 + k as i64,
            s0 as i64 - k as i64,
            s1 as i64 - k as i64,
        ] {
            if (0..SYMBOLS_PER_FRAME as i64).contains(&candidate) {
                let candidate = candidate as usize;
                if !order.contains(&candidate) {
                    order.push(candidate);
                }
            }
        }
        if order.len() >= SYMBOLS_PER_FRAME {
            break;
        }
    }
    order
}

fn fill_sync_interference(
    fp: &mut Footprint,
    grid: &ResourceGrid,
    scenario: &InterferenceScenario,
) -> Result<(), InterferenceError> {
    let central = grid.config().central_band_start();
    match scenario.footprint_mode {
        FootprintMode::GridExact => {
            let [(s0, p0), (s1, p1)] = sync_symbol_pairs();
            for sym in [s0, p0, s1, p1] {
                for sc in central..central + CENTRAL_BAND_SUBCARRIERS {
                    fp.set(sc, sym);
                }
            }
        }
        FootprintMode::PaperFraction => {
            let target =
                (scenario.paper_sync_fraction * grid.n_res() as f64).round() as usize;
            fill_central_columns(fp, central, &sync_window_symbols(), target);
        }
    }
    Ok(())
}

/// Marks central-band columns in the given symbol order until `target` REs
/// are covered; the last column may be partial (lowest subcarriers first).
fn fill_central_columns(fp: &mut Footprint, central: usize, symbols: &[usize], target: usize) {
    let mut remaining = target;
    for &sym in symbols {
        if remaining == 0 {
            break;
        }
        let width = remaining.min(CENTRAL_BAND_SUBCARRIERS);
        for sc in central..central + width {
            fp.set(sc, sym);
        }
        remaining -= width;
    }
}

/// Symbols whose central band is pure shared-channel payload: no reference
/// signals, no control region, no broadcast, no sync.
fn clean_central_symbols(grid: &ResourceGrid) -> Vec<usize> {
    let central = grid.config().central_band_start();
    (0..SYMBOLS_PER_FRAME)
        .filter(|&sym| {
            (central..central + CENTRAL_BAND_SUBCARRIERS).all(|sc| {
                grid.label(ReIndex::new(sc as u16, sym as u8)) == ChannelKind::Pdsch
            })
        })
        .collect()
}

/// Spoof burst anchor symbols: the first adjacent pair of clean symbols
/// after each genuine sync occasion, mimicking the 5 ms sync cadence at
/// off-raster timing.
pub fn spoof_burst_pairs(grid: &ResourceGrid) -> Vec<(usize, usize)> {
    let clean = clean_central_symbols(grid);
    let [(_, pss0), (_, pss1)] = sync_symbol_pairs();
    let mut pairs = Vec::new();
    for anchor in [pss0, pss1] {
        if let Some(pair) = clean
            .windows(2)
            .map(|w| (w[0], w[1]))
            .find(|&(a, b)| b == a + 1 && a > anchor)
        {
            pairs.push(pair);
        }
    }
    pairs
}

fn fill_spoof(
    fp: &mut Footprint,
    grid: &ResourceGrid,
    scenario: &InterferenceScenario,
) -> Result<(), InterferenceError> {
    match scenario.footprint_mode {
        FootprintMode::GridExact => {
            // The spoofer's actual burst REs: fake SSS + PSS on the 62 sync
            // subcarriers, at off-raster timing.
            let sync_start = grid.config().sync_band_start();
            for (sss_sym, pss_sym) in spoof_burst_pairs(grid) {
                for sym in [sss_sym, pss_sym] {
                    for sc in sync_start..sync_start + SYNC_SUBCARRIERS {
                        fp.set(sc, sym);
                    }
                }
            }
        }
        FootprintMode::PaperFraction => {
            // Average asynchronous-burst occupancy, forced to the published
            // fraction, spread over payload-only central columns.
            let target =
                (scenario.paper_sync_fraction * grid.n_res() as f64).round() as usize;
            let central = grid.config().central_band_start();
            let symbols = clean_central_symbols(grid);
            fill_central_columns(fp, central, &symbols, target);
        }
    }
    Ok(())
}

/// Interferer-side synchronization state from the cell-search step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyncState {
    /// Detected N_ID(2) from PSS correlation.
    pub detected_n_id_2: u8,
    /// Detected physical cell identity.
    pub detected_cell_id: u16,
    /// Estimated frame-start error in samples relative to the true boundary.
    pub frame_timing: i64,
    /// Whether the correlation peak cleared the detection threshold.
    pub locked: bool,
    /// Normalized correlation metric of the winning peak.
    pub peak_metric: f64,
}

impl SyncState {
    /// Deterministic perfect-synchronization shortcut.
    pub fn perfect(cell_id: u16) -> Self {
        SyncState {
            detected_n_id_2: (cell_id % 3) as u8,
            detected_cell_id: cell_id,
            frame_timing: 0,
            locked: true,
            peak_metric: 1.0,
        }
    }
}

/// Net footprint timing after frame alignment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlignedTiming {
    /// Whole-symbol shift to apply to the footprint, `-70..=69`.
    pub symbol_shift: i32,
    /// Sub-symbol residue of the alignment, in samples.
    pub residual_samples: f64,
}

/// Aligns a synchronous scenario's footprint timing to the victim frame.
///
/// The returned symbol shift folds together the interferer's frame-timing
/// error and the scenario's configured transmit offset; zero offset with a
/// perfectly locked state leaves the footprint exactly on the sync symbols.
/// Unlocked states are refused, as are asynchronous scenarios.
pub fn sync_align(
    scenario: &InterferenceScenario,
    sync: &SyncState,
    cell: &CellConfig,
) -> Result<AlignedTiming, InterferenceError> {
    scenario.validate()?;
    if !scenario.synchronous {
        return Err(InterferenceError::NotSynchronous(scenario.kind));
    }
    if !sync.locked {
        return Err(InterferenceError::Unlocked);
    }
    let params = iq::SampleParams::for_bandwidth(cell.bandwidth_rb)?;
    let samples_per_symbol = params.frame_samples() as f64 / SYMBOLS_PER_FRAME as f64;
    let total = (sync.frame_timing + scenario.timing_offset_samples) as f64;
    let shift = (total / samples_per_symbol).round();
    let residual = total - shift * samples_per_symbol;
    let wrapped = (shift as i64).rem_euclid(SYMBOLS_PER_FRAME as i64);
    let symbol_shift = if wrapped >= SYMBOLS_PER_FRAME as i64 / 2 {
        (wrapped - SYMBOLS_PER_FRAME as i64) as i32
    } else {
        wrapped as i32
    };
    Ok(AlignedTiming {
        symbol_shift,
        residual_samples: residual,
    })
}

/// Fraction of PSS/SSS REs covered by the burst column that targets them,
/// after shifting the synchronous footprint by `symbol_shift` symbols.
///
/// Each column of the sync-interference burst targets one victim symbol;
/// a shifted column no longer counts toward the signal it was aimed at, so
/// any whole-symbol misalignment drives this measure to zero even though
/// adjacent sync symbols may still be (mis)covered.
pub fn aligned_sync_coverage(grid: &ResourceGrid, symbol_shift: i32) -> f64 {
    let central = grid.config().central_band_start();
    let shift = i64::from(symbol_shift).rem_euclid(SYMBOLS_PER_FRAME as i64) as usize;
    let mut covered = 0usize;
    let mut total = 0usize;
    for kind in [ChannelKind::Pss, ChannelKind::Sss] {
        for re in grid.res_with_label(kind) {
            total += 1;
            let sym = usize::from(re.symbol);
            let sc = usize::from(re.subcarrier);
            let landed = (sym + shift) % SYMBOLS_PER_FRAME;
            let in_band = sc >= central && sc < central + CENTRAL_BAND_SUBCARRIERS;
            if landed == sym && in_band {
                covered += 1;
            }
        }
    }
    if total == 0 {
        0.0
    } else {
        covered as f64 / total as f64
    }
}
