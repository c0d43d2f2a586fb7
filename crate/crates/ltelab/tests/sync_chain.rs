//! End-to-end interferer chain: synthesize the victim downlink, acquire
//! cell identity and frame timing from the samples, align the synchronous
//! footprint, and check the overlay — plus an independent naive-DFT check
//! of the synthesis transform and a file-level round trip.

use num_complex::Complex64;
use std::f64::consts::PI;

use ltelab::grid::{build_dl_grid, CellConfig, ChannelKind, ReIndex};
use ltelab::interference::iq::{
    acquire_sync, read_iq_file, synthesize_iq, write_iq_file, IqSidecar, SampleParams,
    SpectralGrid,
};
use ltelab::interference::{
    aligned_sync_coverage, footprint_for_scenario, sync_align, FootprintMode,
    InterferenceScenario, ScenarioKind,
};

#[test]
fn interferer_acquires_and_aligns_to_the_victim_frame() {
    let cell = CellConfig {
        cell_id: 389, // n_id_1 = 129, n_id_2 = 2
        ..CellConfig::default()
    };
    let grid = build_dl_grid(&cell).unwrap();
    let params = SampleParams::for_bandwidth(cell.bandwidth_rb).unwrap();

    // The interferer listens to the victim downlink.
    let spectral = SpectralGrid::from_grid(&grid).unwrap();
    let samples = synthesize_iq(&spectral, 2, params.sample_rate).unwrap();
    let sync = acquire_sync(&samples, cell.bandwidth_rb).unwrap();
    assert!(sync.locked);
    assert_eq!(sync.detected_cell_id, 389);
    assert_eq!(sync.detected_n_id_2, 2);
    assert_eq!(sync.frame_timing, 0);

    // Zero transmit offset: the aligned footprint covers every sync RE.
    let mut scenario = InterferenceScenario::new(ScenarioKind::PssSssInterference, 5.0);
    scenario.footprint_mode = FootprintMode::GridExact;
    let timing = sync_align(&scenario, &sync, &cell).unwrap();
    assert_eq!(timing.symbol_shift, 0);
    let footprint = footprint_for_scenario(&scenario, &grid)
        .unwrap()
        .shift_symbols(timing.symbol_shift);
    let sync_res: Vec<ReIndex> = grid
        .res_with_label(ChannelKind::Pss)
        .chain(grid.res_with_label(ChannelKind::Sss))
        .collect();
    assert_eq!(
        footprint.intersection_count(sync_res.iter().copied()),
        sync_res.len()
    );
    assert!((aligned_sync_coverage(&grid, timing.symbol_shift) - 1.0).abs() < 1e-15);

    // A deliberate one-symbol transmit offset de-aligns every burst column.
    scenario.timing_offset_samples = (params.frame_samples() / 140) as i64 + 1;
    let timing = sync_align(&scenario, &sync, &cell).unwrap();
    assert_eq!(timing.symbol_shift, 1);
    assert_eq!(aligned_sync_coverage(&grid, timing.symbol_shift), 0.0);
}

#[test]
fn acquisition_tracks_a_delayed_stream() {
    let cell = CellConfig::default();
    let grid = build_dl_grid(&cell).unwrap();
    let params = SampleParams::for_bandwidth(cell.bandwidth_rb).unwrap();
    let spectral = SpectralGrid::from_grid(&grid).unwrap();
    let frame = synthesize_iq(&spectral, 2, params.sample_rate).unwrap();

    // Prepend silence: the frame boundary moves by the delay.
    let delay = 5000usize;
    let mut delayed = vec![Complex64::ZERO; delay];
    delayed.extend_from_slice(&frame);
    let sync = acquire_sync(&delayed, cell.bandwidth_rb).unwrap();
    assert!(sync.locked);
    assert_eq!(sync.detected_cell_id, cell.cell_id);
    assert_eq!(sync.frame_timing, delay as i64);
}

#[test]
fn synthesis_matches_a_naive_inverse_dft() {
    // Independent oracle for the transform path: direct O(N^2) inverse DFT
    // of one symbol's subcarrier column.
    let cell = CellConfig {
        bandwidth_rb: 6,
        ..CellConfig::default()
    };
    let grid = build_dl_grid(&cell).unwrap();
    let spectral = SpectralGrid::from_grid(&grid).unwrap();
    let params = SampleParams::for_bandwidth(6).unwrap();
    let samples = synthesize_iq(&spectral, 1, params.sample_rate).unwrap();

    let n = params.fft_size;
    let n_sc = grid.n_subcarriers();
    let symbol = 6; // PSS symbol
    let column = spectral.symbol_column(symbol);
    let start = params.useful_part_offset(symbol);
    for t in 0..n {
        let mut acc = Complex64::ZERO;
        for (sc, &value) in column.iter().enumerate() {
            let bin = (sc as i64 - n_sc as i64 / 2).rem_euclid(n as i64) as usize;
            let phase = 2.0 * PI * (bin as f64) * (t as f64) / (n as f64);
            acc += value * Complex64::new(phase.cos(), phase.sin());
        }
        acc /= (n as f64).sqrt();
        let got = samples[start + t];
        assert!(
            (got - acc).norm() < 1e-9,
            "sample {t}: {got} vs naive {acc}"
        );
    }

    // The cyclic prefix replays the symbol tail.
    let cp = params.cp_rest;
    for i in 0..cp {
        let prefix = samples[start - cp + i];
        let tail = samples[start + n - cp + i];
        assert_eq!(prefix, tail);
    }
}

#[test]
fn iq_recording_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let cell = CellConfig::default();
    let grid = build_dl_grid(&cell).unwrap();
    let scenario = InterferenceScenario::new(ScenarioKind::PssSssInterference, 5.0);
    let spectral = SpectralGrid::for_scenario(&scenario, &grid).unwrap();
    let samples = synthesize_iq(&spectral, 1, 15_360_000.0).unwrap();

    let path = dir.path().join("sync_interference.iq");
    write_iq_file(&path, &samples).unwrap();
    let sidecar = IqSidecar {
        sample_rate: 15_360_000.0,
        frames: 1,
        source: scenario.kind.name().to_string(),
        isr_re_db: Some(scenario.isr_re_db),
        scenario: Some(scenario),
    };
    sidecar.write(&path).unwrap();

    // Raw format: interleaved f32 little-endian pairs, 8 bytes per sample.
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(bytes.len(), samples.len() * 8);
    let restored = read_iq_file(&path).unwrap();
    assert_eq!(restored.len(), samples.len());
    for (a, b) in restored.iter().zip(&samples) {
        assert_eq!(a.re as f32, b.re as f32);
        assert_eq!(a.im as f32, b.im as f32);
    }

    let meta: IqSidecar = serde_json::from_str(
        &std::fs::read_to_string(IqSidecar::path_for(&path)).unwrap(),
    )
    .unwrap();
    assert_eq!(meta.sample_rate, 15_360_000.0);
    assert_eq!(meta.scenario.unwrap().kind, ScenarioKind::PssSssInterference);

    // Repeated synthesis writes byte-identical files.
    let again_path = dir.path().join("sync_interference_repeat.iq");
    let scenario = InterferenceScenario::new(ScenarioKind::PssSssInterference, 5.0);
    let again = synthesize_iq(
        &SpectralGrid::for_scenario(&scenario, &grid).unwrap(),
        1,
        15_360_000.0,
    )
    .unwrap();
    write_iq_file(&again_path, &again).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again_path).unwrap());
}

#[test]
fn spoof_waveform_detectable_by_cell_search_but_off_raster() {
    // A strong spoofer's burst alone is a valid sync target for a searching
    // UE: acquisition locks to it, at the spoofer's (off-raster) timing.
    let cell = CellConfig::default();
    let grid = build_dl_grid(&cell).unwrap();
    let spoof = InterferenceScenario::new(ScenarioKind::PssSssSpoof, 0.0);
    let spectral = SpectralGrid::for_scenario(&spoof, &grid).unwrap();
    let samples = synthesize_iq(&spectral, 2, 15_360_000.0).unwrap();
    let sync = acquire_sync(&samples, cell.bandwidth_rb).unwrap();
    assert!(sync.locked, "metric {}", sync.peak_metric);
    assert_eq!(sync.detected_n_id_2, cell.n_id_2());
    // The burst sits on payload symbols, so the inferred frame boundary is
    // displaced from the true one.
    assert_ne!(sync.frame_timing, 0);
}
