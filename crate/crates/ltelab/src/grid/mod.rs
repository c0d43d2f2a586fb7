//! FD-LTE resource grids with per-RE channel labels.
//!
//! One frame is 10 subframes of 14 OFDM symbols (normal cyclic prefix,
//! FDD), over `12 * bandwidth_rb` subcarriers. Every resource element of a
//! built grid carries exactly one [`ChannelKind`] label; reference signals
//! take precedence where regions overlap and the shared data channel is the
//! residual. All REs are modeled at the same unit transmit power.

pub mod sequences;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// OFDM symbols per slot, normal cyclic prefix.
pub const SYMBOLS_PER_SLOT: usize = 7;
/// Slots per 10 ms frame.
pub const SLOTS_PER_FRAME: usize = 20;
/// OFDM symbols per subframe.
pub const SYMBOLS_PER_SUBFRAME: usize = 2 * SYMBOLS_PER_SLOT;
/// Subframes per frame.
pub const SUBFRAMES_PER_FRAME: usize = 10;
/// OFDM symbols per frame.
pub const SYMBOLS_PER_FRAME: usize = SYMBOLS_PER_SLOT * SLOTS_PER_FRAME;
/// Subcarriers per resource block.
pub const SUBCARRIERS_PER_RB: usize = 12;
/// Width of the central band used by PBCH and the sync raster.
pub const CENTRAL_BAND_SUBCARRIERS: usize = 72;
/// Active subcarriers of PSS and SSS inside the central band.
pub const SYNC_SUBCARRIERS: usize = 62;
/// Supported channel bandwidths in resource blocks.
pub const SUPPORTED_BANDWIDTHS_RB: [usize; 6] = [6, 15, 25, 50, 75, 100];

/// Errors raised by grid construction and queries.
#[derive(Debug, Error)]
pub enum GridError {
    /// Configuration field outside its allowed range.
    #[error("invalid cell configuration: {0}")]
    InvalidConfig(String),
    /// Sequence identity argument outside its allowed range.
    #[error("invalid sequence identity: {0}")]
    InvalidIdentity(String),
    /// Channel kind queried on a grid of the wrong link direction.
    #[error("channel {kind:?} is not carried on the {direction:?} grid")]
    DirectionMismatch {
        kind: ChannelKind,
        direction: Direction,
    },
}

/// Link direction of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Downlink,
    Uplink,
}

/// Physical channel or signal occupying a resource element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelKind {
    /// Primary synchronization signal.
    Pss,
    /// Secondary synchronization signal.
    Sss,
    /// Physical broadcast channel (MIB).
    Pbch,
    /// Control format indicator channel.
    Pcfich,
    /// Downlink control channel.
    Pdcch,
    /// Cell-specific reference signals.
    Crs,
    /// Downlink shared (data) channel; the DL residual.
    Pdsch,
    /// Uplink control channel (band edges).
    Pucch,
    /// Uplink shared (data) channel.
    Pusch,
}

impl ChannelKind {
    /// Channel kinds carried on the downlink grid.
    pub const DOWNLINK: [ChannelKind; 7] = [
        ChannelKind::Pss,
        ChannelKind::Sss,
        ChannelKind::Pbch,
        ChannelKind::Pcfich,
        ChannelKind::Pdcch,
        ChannelKind::Crs,
        ChannelKind::Pdsch,
    ];
    /// Channel kinds carried on the uplink grid.
    pub const UPLINK: [ChannelKind; 2] = [ChannelKind::Pucch, ChannelKind::Pusch];

    /// Direction this channel belongs to.
    pub fn direction(self) -> Direction {
        match self {
            ChannelKind::Pucch | ChannelKind::Pusch => Direction::Uplink,
            _ => Direction::Downlink,
        }
    }

    /// Short display name.
    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::Pss => "PSS",
            ChannelKind::Sss => "SSS",
            ChannelKind::Pbch => "PBCH",
            ChannelKind::Pcfich => "PCFICH",
            ChannelKind::Pdcch => "PDCCH",
            ChannelKind::Crs => "CRS",
            ChannelKind::Pdsch => "PDSCH",
            ChannelKind::Pucch => "PUCCH",
            ChannelKind::Pusch => "PUSCH",
        }
    }
}

/// Position of one resource element within a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReIndex {
    /// Subcarrier index, `0..12*bandwidth_rb`.
    pub subcarrier: u16,
    /// OFDM symbol index within the frame, `0..140`.
    pub symbol: u8,
}

impl ReIndex {
    pub fn new(subcarrier: u16, symbol: u8) -> Self {
        ReIndex { subcarrier, symbol }
    }

    /// Slot this RE falls in.
    pub fn slot(self) -> u8 {
        self.symbol / SYMBOLS_PER_SLOT as u8
    }

    /// Subframe this RE falls in.
    pub fn subframe(self) -> u8 {
        self.symbol / SYMBOLS_PER_SUBFRAME as u8
    }
}

/// Static cell parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CellConfig {
    /// Channel bandwidth in resource blocks (50 for 10 MHz).
    pub bandwidth_rb: usize,
    /// Physical cell identity, 0..=503.
    pub cell_id: u16,
    /// Control format indicator: PDCCH spans symbols `0..cfi` per subframe.
    pub cfi: u8,
    /// Fraction of uplink subcarriers reserved for PUCCH (split across the
    /// two band edges).
    pub pucch_fraction: f64,
}

impl Default for CellConfig {
    fn default() -> Self {
        CellConfig {
            bandwidth_rb: 50,
            cell_id: 1,
            cfi: 1,
            pucch_fraction: 0.25,
        }
    }
}

impl CellConfig {
    pub fn validate(&self) -> Result<(), GridError> {
        if !SUPPORTED_BANDWIDTHS_RB.contains(&self.bandwidth_rb) {
            return Err(GridError::InvalidConfig(format!(
                "bandwidth_rb must be one of {SUPPORTED_BANDWIDTHS_RB:?}, got {}",
                self.bandwidth_rb
            )));
        }
        if self.cell_id > 503 {
            return Err(GridError::InvalidConfig(format!(
                "cell_id must be 0..=503, got {}",
                self.cell_id
            )));
        }
        if !(1..=3).contains(&self.cfi) {
            return Err(GridError::InvalidConfig(format!(
                "cfi must be 1..=3, got {}",
                self.cfi
            )));
        }
        if !(self.pucch_fraction > 0.0 && self.pucch_fraction < 1.0) {
            return Err(GridError::InvalidConfig(format!(
                "pucch_fraction must be in (0, 1), got {}",
                self.pucch_fraction
            )));
        }
        Ok(())
    }

    /// Total subcarriers across the channel bandwidth.
    pub fn n_subcarriers(&self) -> usize {
        self.bandwidth_rb * SUBCARRIERS_PER_RB
    }

    /// Resource elements per frame.
    pub fn res_per_frame(&self) -> usize {
        self.n_subcarriers() * SYMBOLS_PER_FRAME
    }

    /// CRS frequency shift.
    pub fn v_shift(&self) -> usize {
        usize::from(self.cell_id) % 6
    }

    /// N_ID(1) component of the cell identity.
    pub fn n_id_1(&self) -> u16 {
        self.cell_id / 3
    }

    /// N_ID(2) component of the cell identity.
    pub fn n_id_2(&self) -> u8 {
        (self.cell_id % 3) as u8
    }

    /// First subcarrier of the central 72-subcarrier band.
    pub fn central_band_start(&self) -> usize {
        self.n_subcarriers() / 2 - CENTRAL_BAND_SUBCARRIERS / 2
    }

    /// First subcarrier of the 62 sync-signal subcarriers.
    pub fn sync_band_start(&self) -> usize {
        self.n_subcarriers() / 2 - SYNC_SUBCARRIERS / 2
    }
}

/// A built frame lattice: per-RE channel labels and per-RE signal power.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceGrid {
    config: CellConfig,
    direction: Direction,
    labels: Vec<ChannelKind>,
    power: Vec<f64>,
}

impl ResourceGrid {
    pub fn config(&self) -> &CellConfig {
        &self.config
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn n_subcarriers(&self) -> usize {
        self.config.n_subcarriers()
    }

    pub fn n_res(&self) -> usize {
        self.labels.len()
    }

    /// Linear index of an RE: symbol-major layout.
    pub fn linear_index(&self, re: ReIndex) -> usize {
        usize::from(re.symbol) * self.n_subcarriers() + usize::from(re.subcarrier)
    }

    /// RE position for a linear index.
    pub fn re_at(&self, index: usize) -> ReIndex {
        let n_sc = self.n_subcarriers();
        ReIndex::new((index % n_sc) as u16, (index / n_sc) as u8)
    }

    pub fn label(&self, re: ReIndex) -> ChannelKind {
        self.labels[self.linear_index(re)]
    }

    pub fn labels(&self) -> &[ChannelKind] {
        &self.labels
    }

    /// Per-RE signal power (linear, unit-normalized).
    pub fn power(&self, re: ReIndex) -> f64 {
        self.power[self.linear_index(re)]
    }

    pub fn powers(&self) -> &[f64] {
        &self.power
    }

    /// All REs carrying the given channel, in linear-index order.
    pub fn res_with_label(&self, kind: ChannelKind) -> impl Iterator<Item = ReIndex> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter(move |(_, &k)| k == kind)
            .map(|(i, _)| self.re_at(i))
    }

    /// Number of REs carrying the given channel.
    pub fn count(&self, kind: ChannelKind) -> usize {
        self.labels.iter().filter(|&&k| k == kind).count()
    }

    /// Fraction of the frame's REs occupied by the given channel.
    pub fn channel_occupancy(&self, kind: ChannelKind) -> Result<f64, GridError> {
        if kind.direction() != self.direction {
            return Err(GridError::DirectionMismatch {
                kind,
                direction: self.direction,
            });
        }
        Ok(self.count(kind) as f64 / self.n_res() as f64)
    }

    /// Channel kinds present in this grid's direction.
    pub fn kinds(&self) -> &'static [ChannelKind] {
        match self.direction {
            Direction::Downlink => &ChannelKind::DOWNLINK,
            Direction::Uplink => &ChannelKind::UPLINK,
        }
    }

    /// Stable JSON form: config echo plus a run-length-encoded label map.
    pub fn to_json(&self) -> String {
        let mut runs: Vec<LabelRun> = Vec::new();
        for &kind in &self.labels {
            match runs.last_mut() {
                Some(run) if run.kind == kind => run.len += 1,
                _ => runs.push(LabelRun { kind, len: 1 }),
            }
        }
        let doc = GridJson {
            config: self.config.clone(),
            direction: self.direction,
            labels_rle: runs,
        };
        serde_json::to_string(&doc).expect("grid serialization cannot fail")
    }

    /// Rebuilds a grid from its JSON form.
    pub fn from_json(text: &str) -> Result<Self, GridError> {
        let doc: GridJson = serde_json::from_str(text)
            .map_err(|e| GridError::InvalidConfig(format!("grid JSON: {e}")))?;
        doc.config.validate()?;
        let total = doc.config.res_per_frame();
        let mut labels = Vec::with_capacity(total);
        for run in &doc.labels_rle {
            labels.resize(labels.len() + run.len, run.kind);
        }
        if labels.len() != total {
            return Err(GridError::InvalidConfig(format!(
                "label map covers {} REs, expected {total}",
                labels.len()
            )));
        }
        Ok(ResourceGrid {
            power: vec![1.0; total],
            config: doc.config,
            direction: doc.direction,
            labels,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct GridJson {
    config: CellConfig,
    direction: Direction,
    labels_rle: Vec<LabelRun>,
}

#[derive(Serialize, Deserialize)]
struct LabelRun {
    kind: ChannelKind,
    len: usize,
}

/// CRS subcarrier offset for a slot symbol that carries reference signals
/// (port 0: slot symbols 0 and 4).
fn crs_shift(config: &CellConfig, slot_symbol: usize) -> Option<usize> {
    let v = match slot_symbol {
        0 => 0,
        4 => 3,
        _ => return None,
    };
    Some((v + config.v_shift()) % 6)
}

/// Builds the downlink grid for one frame.
///
/// PSS/SSS occupy the last two symbols of slots 0 and 10 on the central 62
/// subcarriers, PBCH the first four symbols of slot 1 on the central 72,
/// PCFICH 16 REs in four groups on the first symbol of each subframe, PDCCH
/// the remaining control-region REs, CRS the port-0 reference lattice, and
/// PDSCH is the residual. CRS takes precedence where regions overlap.
pub fn build_dl_grid(config: &CellConfig) -> Result<ResourceGrid, GridError> {
    config.validate()?;
    let n_sc = config.n_subcarriers();
    let total = config.res_per_frame();
    let mut labels = vec![ChannelKind::Pdsch; total];
    let at = |sc: usize, sym: usize| sym * n_sc + sc;

    // Control region: symbols 0..cfi of every subframe.
    for sf in 0..SUBFRAMES_PER_FRAME {
        for l in 0..usize::from(config.cfi) {
            let sym = sf * SYMBOLS_PER_SUBFRAME + l;
            for sc in 0..n_sc {
                labels[at(sc, sym)] = ChannelKind::Pdcch;
            }
        }
        // PCFICH: four groups of four REs on the first control symbol,
        // evenly spaced with a cell-dependent rotation, skipping the CRS
        // lattice positions.
        let sym = sf * SYMBOLS_PER_SUBFRAME;
        let crs0 = crs_shift(config, 0).expect("slot symbol 0 carries CRS");
        let rotation = usize::from(config.cell_id) % SUBCARRIERS_PER_RB;
        for group in 0..4 {
            let base = (group * n_sc / 4 + rotation) % n_sc;
            let mut placed = 0;
            let mut offset = 0;
            while placed < 4 {
                let sc = (base + offset) % n_sc;
                offset += 1;
                if sc % 6 == crs0 {
                    continue;
                }
                labels[at(sc, sym)] = ChannelKind::Pcfich;
                placed += 1;
            }
        }
    }

    // PBCH: first four symbols of slot 1, central 72 subcarriers.
    let central = config.central_band_start();
    for sym in SYMBOLS_PER_SLOT..SYMBOLS_PER_SLOT + 4 {
        for sc in central..central + CENTRAL_BAND_SUBCARRIERS {
            labels[at(sc, sym)] = ChannelKind::Pbch;
        }
    }

    // SSS then PSS on the last two symbols of slots 0 and 10, central 62
    // subcarriers. The five guard subcarriers on each side stay PDSCH.
    let sync_start = config.sync_band_start();
    for slot in [0usize, 10] {
        let sss_sym = slot * SYMBOLS_PER_SLOT + SYMBOLS_PER_SLOT - 2;
        let pss_sym = slot * SYMBOLS_PER_SLOT + SYMBOLS_PER_SLOT - 1;
        for sc in sync_start..sync_start + SYNC_SUBCARRIERS {
            labels[at(sc, sss_sym)] = ChannelKind::Sss;
            labels[at(sc, pss_sym)] = ChannelKind::Pss;
        }
    }

    // CRS last: the reference lattice punctures every overlapping region.
    for slot in 0..SLOTS_PER_FRAME {
        for slot_symbol in [0usize, 4] {
            let shift = crs_shift(config, slot_symbol).expect("reference symbol");
            let sym = slot * SYMBOLS_PER_SLOT + slot_symbol;
            let mut sc = shift;
            while sc < n_sc {
                labels[at(sc, sym)] = ChannelKind::Crs;
                sc += 6;
            }
        }
    }

    Ok(ResourceGrid {
        config: config.clone(),
        direction: Direction::Downlink,
        power: vec![1.0; total],
        labels,
    })
}

/// Builds the uplink grid for one frame: PUCCH on the band-edge regions,
/// PUSCH on the interior. The PUCCH width follows `config.pucch_fraction`,
/// split evenly between the two edges.
pub fn build_ul_grid(config: &CellConfig) -> Result<ResourceGrid, GridError> {
    config.validate()?;
    let n_sc = config.n_subcarriers();
    let total = config.res_per_frame();
    let per_edge = (n_sc as f64 * config.pucch_fraction / 2.0).round() as usize;
    if per_edge == 0 || 2 * per_edge >= n_sc {
        return Err(GridError::InvalidConfig(format!(
            "pucch_fraction {} leaves no room for PUSCH at {} subcarriers",
            config.pucch_fraction, n_sc
        )));
    }

    let mut labels = vec![ChannelKind::Pusch; total];
    for sym in 0..SYMBOLS_PER_FRAME {
        for sc in (0..per_edge).chain(n_sc - per_edge..n_sc) {
            labels[sym * n_sc + sc] = ChannelKind::Pucch;
        }
    }

    Ok(ResourceGrid {
        config: config.clone(),
        direction: Direction::Uplink,
        power: vec![1.0; total],
        labels,
    })
}
