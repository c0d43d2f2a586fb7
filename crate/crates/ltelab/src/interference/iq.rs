//! Baseband IQ synthesis and the raw sample-file format.
//!
//! Waveforms are built one OFDM symbol at a time: the occupied subcarriers
//! of a spectral column go through a unitary inverse DFT and a normal
//! cyclic prefix is prepended. Sample files are raw interleaved 32-bit
//! little-endian float pairs (I then Q) with a JSON sidecar describing the
//! recording; the format is bit-exact across runs.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use super::{
    footprint_for_scenario, spoof_burst_pairs, Footprint, InterferenceError, InterferenceScenario,
    ScenarioKind, SyncState,
};
use crate::grid::sequences::{pss_sequence, sss_sequence, GoldSequence, SYNC_SEQUENCE_LEN};
use crate::grid::{
    ChannelKind, ReIndex, ResourceGrid, SUBCARRIERS_PER_RB, SYMBOLS_PER_FRAME, SYMBOLS_PER_SLOT,
};

/// Transform size and cyclic-prefix lengths for one bandwidth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleParams {
    pub fft_size: usize,
    pub sample_rate: f64,
    /// Cyclic prefix of the first symbol in each slot.
    pub cp_first: usize,
    /// Cyclic prefix of the remaining six symbols in each slot.
    pub cp_rest: usize,
}

impl SampleParams {
    /// Standard pairing for the supported bandwidths (e.g. 50 RB ->
    /// 1024-point transform at 15.36 Msps, prefixes 80/72).
    pub fn for_bandwidth(bandwidth_rb: usize) -> Result<Self, InterferenceError> {
        let fft_size = match bandwidth_rb {
            6 => 128,
            15 => 256,
            25 => 512,
            50 => 1024,
            75 => 1536,
            100 => 2048,
            other => {
                return Err(InterferenceError::UnsupportedSampleRate {
                    sample_rate: 0.0,
                    n_subcarriers: other * SUBCARRIERS_PER_RB,
                })
            }
        };
        Ok(SampleParams {
            fft_size,
            sample_rate: fft_size as f64 * 15_000.0,
            cp_first: fft_size * 10 / 128,
            cp_rest: fft_size * 9 / 128,
        })
    }

    /// Samples in one 0.5 ms slot.
    pub fn slot_samples(&self) -> usize {
        self.cp_first + self.cp_rest * (SYMBOLS_PER_SLOT - 1) + SYMBOLS_PER_SLOT * self.fft_size
    }

    /// Samples in one 10 ms frame.
    pub fn frame_samples(&self) -> usize {
        20 * self.slot_samples()
    }

    fn cp_len(&self, slot_symbol: usize) -> usize {
        if slot_symbol == 0 {
            self.cp_first
        } else {
            self.cp_rest
        }
    }

    /// Sample offset of the useful (post-prefix) part of a frame symbol.
    pub fn useful_part_offset(&self, symbol: usize) -> usize {
        let slot = symbol / SYMBOLS_PER_SLOT;
        let mut offset = slot * self.slot_samples();
        for l in 0..symbol % SYMBOLS_PER_SLOT {
            offset += self.cp_len(l) + self.fft_size;
        }
        offset + self.cp_len(symbol % SYMBOLS_PER_SLOT)
    }
}

/// One frame of complex subcarrier values (the modulation-domain source for
/// IQ synthesis), 140 symbols by `n_subcarriers`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    n_subcarriers: usize,
    values: Vec<Complex64>,
}

impl SpectralGrid {
    pub fn zeros(n_subcarriers: usize) -> Self {
        SpectralGrid {
            n_subcarriers,
            values: vec![Complex64::ZERO; n_subcarriers * SYMBOLS_PER_FRAME],
        }
    }

    pub fn n_subcarriers(&self) -> usize {
        self.n_subcarriers
    }

    pub fn value(&self, re: ReIndex) -> Complex64 {
        self.values[usize::from(re.symbol) * self.n_subcarriers + usize::from(re.subcarrier)]
    }

    fn set(&mut self, sc: usize, sym: usize, value: Complex64) {
        self.values[sym * self.n_subcarriers + sc] = value;
    }

    /// Column of subcarrier values for one symbol.
    pub fn symbol_column(&self, symbol: usize) -> &[Complex64] {
        let start = symbol * self.n_subcarriers;
        &self.values[start..start + self.n_subcarriers]
    }

    /// Total spectral energy of the frame.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// Spectral content of a built resource grid: true sequences on the
    /// sync and reference signals, deterministic unit-power QPSK fill on
    /// the coded channels.
    pub fn from_grid(grid: &ResourceGrid) -> Result<Self, InterferenceError> {
        let config = grid.config();
        let n_sc = grid.n_subcarriers();
        let mut spectral = SpectralGrid::zeros(n_sc);

        let pss = pss_sequence(config.n_id_2())?;
        let sync_start = config.sync_band_start();
        for re in grid.res_with_label(ChannelKind::Pss) {
            let k = usize::from(re.subcarrier) - sync_start;
            spectral.set(usize::from(re.subcarrier), usize::from(re.symbol), pss[k]);
        }
        for subframe_half in 0..2u8 {
            let sss = sss_sequence(config.n_id_1(), config.n_id_2(), subframe_half * 5)?;
            let sym = if subframe_half == 0 {
                SYMBOLS_PER_SLOT - 2
            } else {
                10 * SYMBOLS_PER_SLOT + SYMBOLS_PER_SLOT - 2
            };
            for (k, &value) in sss.iter().enumerate() {
                spectral.set(sync_start + k, sym, Complex64::new(f64::from(value), 0.0));
            }
        }

        // CRS: Gold-initialized QPSK, indexed along frequency per symbol.
        for slot in 0..20u8 {
            for slot_symbol in [0u8, 4] {
                let sym = usize::from(slot) * SYMBOLS_PER_SLOT + usize::from(slot_symbol);
                let positions: Vec<usize> = (0..n_sc)
                    .filter(|&sc| {
                        grid.label(ReIndex::new(sc as u16, sym as u8)) == ChannelKind::Crs
                    })
                    .collect();
                let values = crate::grid::sequences::crs_symbol_values(
                    config.cell_id,
                    slot,
                    slot_symbol,
                    positions.len(),
                )?;
                for (sc, value) in positions.into_iter().zip(values) {
                    spectral.set(sc, sym, value);
                }
            }
        }

        // Remaining channels: deterministic QPSK fill keyed by channel and
        // cell so repeated synthesis is byte-identical.
        for (kind_code, kind) in [
            (1u32, ChannelKind::Pbch),
            (2, ChannelKind::Pcfich),
            (3, ChannelKind::Pdcch),
            (4, ChannelKind::Pdsch),
            (5, ChannelKind::Pucch),
            (6, ChannelKind::Pusch),
        ] {
            if kind.direction() != grid.direction() {
                continue;
            }
            let c_init = (kind_code << 16) | u32::from(config.cell_id);
            let mut gen = GoldSequence::new(c_init)?;
            for re in grid.res_with_label(kind) {
                let amplitude = grid.power(re).sqrt();
                spectral.set(
                    usize::from(re.subcarrier),
                    usize::from(re.symbol),
                    gen.next_qpsk(amplitude),
                );
            }
        }
        Ok(spectral)
    }

    /// Noise-like content on a footprint: deterministic QPSK at the given
    /// amplitude on every targeted RE.
    pub fn from_footprint(
        footprint: &Footprint,
        amplitude: f64,
        fill_seed: u32,
    ) -> Result<Self, InterferenceError> {
        let mut spectral = SpectralGrid::zeros(footprint.n_subcarriers());
        let mut gen = GoldSequence::new(fill_seed & 0x7FFF_FFFF)?;
        for re in footprint.targeted_res() {
            spectral.set(
                usize::from(re.subcarrier),
                usize::from(re.symbol),
                gen.next_qpsk(amplitude),
            );
        }
        Ok(spectral)
    }

    /// Interference waveform content for a scenario on a grid.
    ///
    /// The spoofing scenario transmits genuine-looking PSS/SSS bursts at
    /// off-raster symbols; every other scenario transmits noise-like QPSK
    /// over its footprint at the scenario's per-RE interference amplitude.
    /// The no-interference scenario yields an all-zero frame.
    pub fn for_scenario(
        scenario: &InterferenceScenario,
        grid: &ResourceGrid,
    ) -> Result<Self, InterferenceError> {
        scenario.validate()?;
        let amplitude = 10f64.powf(scenario.isr_re_db / 20.0);
        match scenario.kind {
            ScenarioKind::None => Ok(SpectralGrid::zeros(grid.n_subcarriers())),
            ScenarioKind::PssSssSpoof => {
                let config = grid.config();
                let mut spectral = SpectralGrid::zeros(grid.n_subcarriers());
                let pss = pss_sequence(config.n_id_2())?;
                let sync_start = config.sync_band_start();
                for (occasion, (sss_sym, pss_sym)) in
                    spoof_burst_pairs(grid).into_iter().enumerate()
                {
                    let sss = sss_sequence(config.n_id_1(), config.n_id_2(), occasion as u8 * 5)?;
                    for k in 0..SYNC_SEQUENCE_LEN {
                        spectral.set(
                            sync_start + k,
                            sss_sym,
                            Complex64::new(amplitude * f64::from(sss[k]), 0.0),
                        );
                        spectral.set(sync_start + k, pss_sym, amplitude * pss[k]);
                    }
                }
                Ok(spectral)
            }
            _ => {
                let footprint = footprint_for_scenario(scenario, grid)?;
                SpectralGrid::from_footprint(&footprint, amplitude, scenario.kind.id() as u32)
            }
        }
    }
}

/// Synthesizes `frames` frames of baseband samples from a spectral frame.
///
/// Each symbol is the unitary inverse DFT of its subcarrier column with the
/// cyclic prefix prepended, so the useful-part time energy equals the
/// spectral energy. The stream length is `frames * 10 ms * sample_rate`.
pub fn synthesize_iq(
    spectral: &SpectralGrid,
    frames: usize,
    sample_rate: f64,
) -> Result<Vec<Complex64>, InterferenceError> {
    let n_sc = spectral.n_subcarriers();
    let params = SampleParams::for_bandwidth(n_sc / SUBCARRIERS_PER_RB)?;
    if !n_sc.is_multiple_of(SUBCARRIERS_PER_RB) || params.sample_rate != sample_rate {
        return Err(InterferenceError::UnsupportedSampleRate {
            sample_rate,
            n_subcarriers: n_sc,
        });
    }

    let fft_size = params.fft_size;
    let ifft = FftPlanner::new().plan_fft_inverse(fft_size);
    let scale = 1.0 / (fft_size as f64).sqrt();
    let mut frame = Vec::with_capacity(params.frame_samples());
    let mut bins = vec![Complex64::ZERO; fft_size];

    for symbol in 0..SYMBOLS_PER_FRAME {
        bins.fill(Complex64::ZERO);
        let column = spectral.symbol_column(symbol);
        for (sc, &value) in column.iter().enumerate() {
            // Centered mapping: subcarrier n_sc/2 sits on DC (bin 0).
            let offset = sc as i64 - n_sc as i64 / 2;
            let bin = offset.rem_euclid(fft_size as i64) as usize;
            bins[bin] = value;
        }
        ifft.process(&mut bins);
        let cp = params.cp_len(symbol % SYMBOLS_PER_SLOT);
        frame.extend(bins[fft_size - cp..].iter().map(|v| v * scale));
        frame.extend(bins.iter().map(|v| v * scale));
    }
    debug_assert_eq!(frame.len(), params.frame_samples());

    let mut stream = Vec::with_capacity(frames * frame.len());
    for _ in 0..frames {
        stream.extend_from_slice(&frame);
    }
    Ok(stream)
}

/// Writes samples as raw interleaved f32 little-endian I/Q pairs.
pub fn write_iq_file(path: &Path, samples: &[Complex64]) -> Result<(), InterferenceError> {
    let mut writer = BufWriter::new(std::fs::File::create(path)?);
    for s in samples {
        writer.write_all(&(s.re as f32).to_le_bytes())?;
        writer.write_all(&(s.im as f32).to_le_bytes())?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads a raw f32 little-endian I/Q pair file.
pub fn read_iq_file(path: &Path) -> Result<Vec<Complex64>, InterferenceError> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    let mut samples = Vec::with_capacity(bytes.len() / 8);
    for chunk in bytes.chunks_exact(8) {
        let re = f32::from_le_bytes(chunk[0..4].try_into().expect("4-byte chunk"));
        let im = f32::from_le_bytes(chunk[4..8].try_into().expect("4-byte chunk"));
        samples.push(Complex64::new(f64::from(re), f64::from(im)));
    }
    Ok(samples)
}

/// Companion metadata stored next to an IQ recording.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IqSidecar {
    pub sample_rate: f64,
    pub frames: usize,
    /// What was synthesized: a scenario echo, or a grid description.
    pub source: String,
    pub scenario: Option<InterferenceScenario>,
    pub isr_re_db: Option<f64>,
}

impl IqSidecar {
    /// Sidecar path for an IQ file: the same name with `.json` appended.
    pub fn path_for(iq_path: &Path) -> PathBuf {
        let mut os = iq_path.as_os_str().to_os_string();
        os.push(".json");
        PathBuf::from(os)
    }

    pub fn write(&self, iq_path: &Path) -> Result<PathBuf, InterferenceError> {
        let path = Self::path_for(iq_path);
        let json = serde_json::to_string_pretty(self).expect("sidecar serialization");
        std::fs::write(&path, json)?;
        Ok(path)
    }
}

/// PSS correlation threshold on the normalized metric. The sync symbol also
/// carries payload subcarriers, which caps the achievable metric near the
/// PSS share of the symbol energy (62 of n_sc subcarriers).
const LOCK_THRESHOLD: f64 = 0.05;

/// Acquires cell identity and frame timing from a baseband stream.
///
/// Simplified cell search: time-domain correlation against the three PSS
/// templates (coarse stride then exhaustive refinement), followed by a
/// frequency-domain SSS match over all identity/subframe hypotheses to pin
/// the frame boundary and the full cell identity.
pub fn acquire_sync(samples: &[Complex64], bandwidth_rb: usize) -> Result<SyncState, InterferenceError> {
    let params = SampleParams::for_bandwidth(bandwidth_rb)?;
    let n = params.fft_size;
    let n_sc = bandwidth_rb * SUBCARRIERS_PER_RB;
    if samples.len() < params.frame_samples() + n {
        return Err(InterferenceError::InvalidScenario(format!(
            "need at least one frame plus one symbol of samples, got {}",
            samples.len()
        )));
    }

    // Time-domain PSS templates via the same unitary transform.
    let ifft = FftPlanner::new().plan_fft_inverse(n);
    let scale = 1.0 / (n as f64).sqrt();
    let sync_band_start = n_sc / 2 - SYNC_SEQUENCE_LEN / 2;
    let mut templates = Vec::with_capacity(3);
    for n_id_2 in 0..3u8 {
        let pss = pss_sequence(n_id_2)?;
        let mut bins = vec![Complex64::ZERO; n];
        for (k, &v) in pss.iter().enumerate() {
            let offset = (sync_band_start + k) as i64 - n_sc as i64 / 2;
            bins[offset.rem_euclid(n as i64) as usize] = v;
        }
        ifft.process(&mut bins);
        let template: Vec<Complex64> = bins.iter().map(|v| v * scale).collect();
        let energy: f64 = template.iter().map(|v| v.norm_sqr()).sum();
        templates.push((template, energy));
    }

    let search_len = params.frame_samples().min(samples.len() - n);
    let metric_at = |pos: usize, n_id_2: usize| -> f64 {
        let (template, t_energy) = &templates[n_id_2];
        let window = &samples[pos..pos + n];
        let mut corr = Complex64::ZERO;
        let mut w_energy = 0.0;
        for (w, t) in window.iter().zip(template) {
            corr += w * t.conj();
            w_energy += w.norm_sqr();
        }
        if w_energy <= 0.0 {
            return 0.0;
        }
        corr.norm_sqr() / (w_energy * t_energy)
    };

    // Coarse scan: the PSS occupies a narrow band, so its correlation lobe
    // is wide enough to survive a 16-sample stride.
    let mut best = (0.0f64, 0usize, 0usize);
    for pos in (0..search_len).step_by(16) {
        for n_id_2 in 0..3 {
            let m = metric_at(pos, n_id_2);
            if m > best.0 {
                best = (m, pos, n_id_2);
            }
        }
    }
    // Exhaustive refinement around the coarse winner.
    let lo = best.1.saturating_sub(24);
    let hi = (best.1 + 24).min(search_len.saturating_sub(1));
    for pos in lo..=hi {
        for n_id_2 in 0..3 {
            let m = metric_at(pos, n_id_2);
            if m > best.0 {
                best = (m, pos, n_id_2);
            }
        }
    }
    let (peak_metric, pss_pos, n_id_2) = best;

    if peak_metric < LOCK_THRESHOLD {
        return Ok(SyncState {
            detected_n_id_2: n_id_2 as u8,
            detected_cell_id: 0,
            frame_timing: 0,
            locked: false,
            peak_metric,
        });
    }

    // SSS sits one symbol before the PSS (same cyclic prefix length).
    let sss_bins = if pss_pos >= n + params.cp_rest {
        let start = pss_pos - n - params.cp_rest;
        let fft = FftPlanner::new().plan_fft_forward(n);
        let mut buf: Vec<Complex64> = samples[start..start + n].to_vec();
        fft.process(&mut buf);
        let fwd_scale = 1.0 / (n as f64).sqrt();
        let mut central = Vec::with_capacity(SYNC_SEQUENCE_LEN);
        for k in 0..SYNC_SEQUENCE_LEN {
            let offset = (sync_band_start + k) as i64 - n_sc as i64 / 2;
            central.push(buf[offset.rem_euclid(n as i64) as usize] * fwd_scale);
        }
        Some(central)
    } else {
        None
    };

    let (n_id_1, half) = match &sss_bins {
        Some(bins) => {
            let mut best = (0.0f64, 0u16, 0u8);
            for cand_id_1 in 0..168u16 {
                for half in 0..2u8 {
                    let seq = sss_sequence(cand_id_1, n_id_2 as u8, half * 5)?;
                    let corr: Complex64 = bins
                        .iter()
                        .zip(&seq)
                        .map(|(b, &s)| b * f64::from(s))
                        .sum();
                    let m = corr.norm_sqr();
                    if m > best.0 {
                        best = (m, cand_id_1, half);
                    }
                }
            }
            (best.1, best.2)
        }
        None => (0, 0),
    };

    // Frame boundary from the PSS position: subframe 0 or 5 by SSS half.
    let pss_symbol = if half == 0 {
        SYMBOLS_PER_SLOT - 1
    } else {
        10 * SYMBOLS_PER_SLOT + SYMBOLS_PER_SLOT - 1
    };
    let boundary = pss_pos as i64 - params.useful_part_offset(pss_symbol) as i64;
    let frame = params.frame_samples() as i64;
    let mut frame_timing = boundary.rem_euclid(frame);
    if frame_timing > frame / 2 {
        frame_timing -= frame;
    }

    Ok(SyncState {
        detected_n_id_2: n_id_2 as u8,
        detected_cell_id: 3 * n_id_1 + n_id_2 as u16,
        frame_timing,
        locked: true,
        peak_metric,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_dl_grid, CellConfig};

    #[test]
    fn sample_params_standard_pairings() {
        let p = SampleParams::for_bandwidth(50).unwrap();
        assert_eq!(p.fft_size, 1024);
        assert_eq!(p.sample_rate, 15_360_000.0);
        assert_eq!(p.cp_first, 80);
        assert_eq!(p.cp_rest, 72);
        assert_eq!(p.slot_samples(), 7680);
        assert_eq!(p.frame_samples(), 153_600);
        for rb in [6usize, 15, 25, 75, 100] {
            let p = SampleParams::for_bandwidth(rb).unwrap();
            assert_eq!(
                p.frame_samples() as f64,
                p.sample_rate * 0.01,
                "{rb} RB frame length"
            );
        }
        assert!(SampleParams::for_bandwidth(20).is_err());
    }

    #[test]
    fn empty_grid_yields_all_zero_frame() {
        let spectral = SpectralGrid::zeros(600);
        let samples = synthesize_iq(&spectral, 1, 15_360_000.0).unwrap();
        assert_eq!(samples.len(), 153_600);
        assert!(samples.iter().all(|s| s.norm() == 0.0));
    }

    #[test]
    fn single_tone_has_constant_modulus() {
        // One occupied subcarrier in one symbol: the inverse DFT of a single
        // bin is a complex exponential, so every useful-part sample has
        // modulus 1/sqrt(N) (closed form).
        let mut spectral = SpectralGrid::zeros(600);
        spectral.set(42, 3, Complex64::new(1.0, 0.0));
        let params = SampleParams::for_bandwidth(50).unwrap();
        let samples = synthesize_iq(&spectral, 1, params.sample_rate).unwrap();
        let start = params.useful_part_offset(3);
        let expected = 1.0 / (params.fft_size as f64).sqrt();
        for i in 0..params.fft_size {
            assert!((samples[start + i].norm() - expected).abs() < 1e-12);
        }
        // Other symbols stay silent.
        assert!(samples[..params.useful_part_offset(3) - params.cp_rest]
            .iter()
            .all(|s| s.norm() == 0.0));
    }

    #[test]
    fn parseval_energy_matches_for_full_grid() {
        let grid = build_dl_grid(&CellConfig::default()).unwrap();
        let spectral = SpectralGrid::from_grid(&grid).unwrap();
        assert!((spectral.energy() - 84_000.0).abs() < 1e-6);
        let params = SampleParams::for_bandwidth(50).unwrap();
        let samples = synthesize_iq(&spectral, 1, params.sample_rate).unwrap();
        // Sum the useful parts only; the cyclic prefixes repeat tail samples
        // outside the transform's Parseval relation.
        let mut time_energy = 0.0;
        for sym in 0..SYMBOLS_PER_FRAME {
            let start = params.useful_part_offset(sym);
            time_energy += samples[start..start + params.fft_size]
                .iter()
                .map(|s| s.norm_sqr())
                .sum::<f64>();
        }
        let ratio = time_energy / spectral.energy();
        assert!((ratio - 1.0).abs() < 1e-6, "energy ratio {ratio}");
    }

    #[test]
    fn synthesis_is_deterministic() {
        let grid = build_dl_grid(&CellConfig::default()).unwrap();
        let spectral = SpectralGrid::from_grid(&grid).unwrap();
        let a = synthesize_iq(&spectral, 2, 15_360_000.0).unwrap();
        let b = synthesize_iq(&SpectralGrid::from_grid(&grid).unwrap(), 2, 15_360_000.0).unwrap();
        assert_eq!(a.len(), 2 * 153_600);
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_wrong_sample_rate() {
        let spectral = SpectralGrid::zeros(600);
        assert!(matches!(
            synthesize_iq(&spectral, 1, 10e6),
            Err(InterferenceError::UnsupportedSampleRate { .. })
        ));
    }

    #[test]
    fn iq_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("burst.iq");
        let samples = vec![
            Complex64::new(0.5, -0.25),
            Complex64::new(-1.0, 1.0),
            Complex64::new(0.0, 0.125),
        ];
        write_iq_file(&path, &samples).unwrap();
        assert_eq!(std::fs::metadata(&path).unwrap().len(), 3 * 8);
        let back = read_iq_file(&path).unwrap();
        assert_eq!(back, samples);

        let sidecar = IqSidecar {
            sample_rate: 15_360_000.0,
            frames: 1,
            source: "test".into(),
            scenario: None,
            isr_re_db: None,
        };
        let sidecar_path = sidecar.write(&path).unwrap();
        assert_eq!(sidecar_path, dir.path().join("burst.iq.json"));
        let parsed: IqSidecar =
            serde_json::from_str(&std::fs::read_to_string(sidecar_path).unwrap()).unwrap();
        assert_eq!(parsed, sidecar);
    }

    #[test]
    fn acquisition_recovers_cell_identity_and_timing() {
        let config = CellConfig {
            cell_id: 151, // n_id_1 = 50, n_id_2 = 1
            ..CellConfig::default()
        };
        let grid = build_dl_grid(&config).unwrap();
        let spectral = SpectralGrid::from_grid(&grid).unwrap();
        let samples = synthesize_iq(&spectral, 2, 15_360_000.0).unwrap();
        let sync = acquire_sync(&samples, 50).unwrap();
        assert!(sync.locked, "metric {}", sync.peak_metric);
        assert_eq!(sync.detected_n_id_2, 1);
        assert_eq!(sync.detected_cell_id, 151);
        assert_eq!(sync.frame_timing, 0);
    }

    #[test]
    fn acquisition_reports_unlocked_on_silence() {
        let silent = vec![Complex64::ZERO; 2 * 153_600];
        let sync = acquire_sync(&silent, 50).unwrap();
        assert!(!sync.locked);
    }

    #[test]
    fn scenario_waveforms_zero_for_none_and_bursty_for_spoof() {
        let grid = build_dl_grid(&CellConfig::default()).unwrap();
        let none = SpectralGrid::for_scenario(
            &InterferenceScenario::new(ScenarioKind::None, 0.0),
            &grid,
        )
        .unwrap();
        assert_eq!(none.energy(), 0.0);

        let spoof = SpectralGrid::for_scenario(
            &InterferenceScenario::new(ScenarioKind::PssSssSpoof, 0.0),
            &grid,
        )
        .unwrap();
        // Four 62-subcarrier burst columns at unit amplitude.
        assert!((spoof.energy() - 4.0 * 62.0).abs() < 1e-9);
    }
}
