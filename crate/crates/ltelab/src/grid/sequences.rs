//! Deterministic physical-layer sequences.
//!
//! Zadoff-Chu PSS, a simplified interleaved m-sequence SSS, and the
//! length-31 Gold sequence generator used for CRS and pseudo-random
//! payload fill.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::GridError;

/// Zadoff-Chu root indices for the three primary-synchronization identities.
pub const PSS_ROOTS: [u32; 3] = [25, 29, 34];

/// Number of active subcarriers carried by PSS and SSS.
pub const SYNC_SEQUENCE_LEN: usize = 62;

/// Gold-sequence warm-up discard.
const GOLD_SKIP: usize = 1600;

/// Length-62 Zadoff-Chu primary synchronization sequence.
///
/// `d(n) = exp(-j pi u n(n+1)/63)` for `n = 0..=30` and
/// `d(n) = exp(-j pi u (n+1)(n+2)/63)` for `n = 31..=61`, with the root `u`
/// selected by `n_id_2`.
pub fn pss_sequence(n_id_2: u8) -> Result<Vec<Complex64>, GridError> {
    if n_id_2 > 2 {
        return Err(GridError::InvalidIdentity(format!(
            "n_id_2 must be 0..=2, got {n_id_2}"
        )));
    }
    let u = f64::from(PSS_ROOTS[n_id_2 as usize]);
    let seq = (0..SYNC_SEQUENCE_LEN)
        .map(|n| {
            let n = n as f64;
            let phase = if n <= 30.0 {
                -PI * u * n * (n + 1.0) / 63.0
            } else {
                -PI * u * (n + 1.0) * (n + 2.0) / 63.0
            };
            Complex64::new(phase.cos(), phase.sin())
        })
        .collect();
    Ok(seq)
}

/// Two-register Gold sequence generator (length-31 LFSRs).
///
/// `x1` is seeded with a single leading one, `x2` with the 31 bits of
/// `c_init`. The first 1600 output positions are discarded.
#[derive(Debug, Clone)]
pub struct GoldSequence {
    x1: u32,
    x2: u32,
}

impl GoldSequence {
    /// Creates a generator for the given initialization value.
    pub fn new(c_init: u32) -> Result<Self, GridError> {
        if c_init >= (1 << 31) {
            return Err(GridError::InvalidIdentity(format!(
                "c_init must fit in 31 bits, got {c_init:#x}"
            )));
        }
        let mut gen = GoldSequence { x1: 1, x2: c_init };
        for _ in 0..GOLD_SKIP {
            gen.step();
        }
        Ok(gen)
    }

    /// Current output bit; bit i of each register holds x(n+i).
    fn output(&self) -> u8 {
        ((self.x1 ^ self.x2) & 1) as u8
    }

    fn step(&mut self) {
        // x1(n+31) = x1(n+3) + x1(n), x2(n+31) = x2(n+3) + x2(n+2) + x2(n+1) + x2(n)
        let f1 = ((self.x1 >> 3) ^ self.x1) & 1;
        let f2 = ((self.x2 >> 3) ^ (self.x2 >> 2) ^ (self.x2 >> 1) ^ self.x2) & 1;
        self.x1 = (self.x1 >> 1) | (f1 << 30);
        self.x2 = (self.x2 >> 1) | (f2 << 30);
    }

    /// Next scrambling bit.
    pub fn next_bit(&mut self) -> u8 {
        let bit = self.output();
        self.step();
        bit
    }

    /// Next QPSK symbol from two consecutive bits, with the given amplitude.
    pub fn next_qpsk(&mut self, amplitude: f64) -> Complex64 {
        let b0 = self.next_bit();
        let b1 = self.next_bit();
        let a = amplitude / std::f64::consts::SQRT_2;
        Complex64::new(
            a * (1.0 - 2.0 * f64::from(b0)),
            a * (1.0 - 2.0 * f64::from(b1)),
        )
    }
}

impl Iterator for GoldSequence {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        Some(self.next_bit())
    }
}

/// First `length` bits of the Gold sequence for `c_init`.
pub fn gold_sequence(c_init: u32, length: usize) -> Result<Vec<u8>, GridError> {
    if length == 0 {
        return Err(GridError::InvalidIdentity(
            "gold sequence length must be >= 1".into(),
        ));
    }
    let gen = GoldSequence::new(c_init)?;
    Ok(gen.take(length).collect())
}

/// Binary ±1 m-sequence of period 31 from polynomial x^5 + x^2 + 1.
fn m_sequence_s() -> [i8; 31] {
    m_sequence(|x: &[u8]| x[2] ^ x[0])
}

/// Binary ±1 m-sequence of period 31 from polynomial x^5 + x^3 + 1.
fn m_sequence_c() -> [i8; 31] {
    m_sequence(|x: &[u8]| x[3] ^ x[0])
}

fn m_sequence(feedback: impl Fn(&[u8]) -> u8) -> [i8; 31] {
    let mut x = [0u8; 36];
    x[4] = 1;
    for i in 0..31 {
        x[i + 5] = feedback(&x[i..]);
    }
    let mut out = [0i8; 31];
    for (i, v) in out.iter_mut().enumerate() {
        *v = 1 - 2 * x[i] as i8;
    }
    out
}

/// Length-62 secondary synchronization sequence.
///
/// Simplified interleaved m-sequence: even samples carry a cyclic shift of
/// one period-31 m-sequence, odd samples another, both overlaid with a
/// second m-sequence whose shift folds in `n_id_2` and the subframe half.
/// Every `(n_id_1, n_id_2, subframe)` triple yields a distinct sequence.
pub fn sss_sequence(n_id_1: u16, n_id_2: u8, subframe: u8) -> Result<Vec<i8>, GridError> {
    if n_id_1 > 167 {
        return Err(GridError::InvalidIdentity(format!(
            "n_id_1 must be 0..=167, got {n_id_1}"
        )));
    }
    if n_id_2 > 2 {
        return Err(GridError::InvalidIdentity(format!(
            "n_id_2 must be 0..=2, got {n_id_2}"
        )));
    }
    if subframe != 0 && subframe != 5 {
        return Err(GridError::InvalidIdentity(format!(
            "SSS subframe must be 0 or 5, got {subframe}"
        )));
    }

    let s = m_sequence_s();
    let c = m_sequence_c();

    let m0 = usize::from(n_id_1) % 31;
    let m1 = (m0 + usize::from(n_id_1) / 31 + 1) % 31;
    let half = usize::from(subframe == 5);
    // Subframe 5 swaps the even/odd shifts, mirroring the standard's frame
    // half alternation.
    let (m_even, m_odd) = if half == 0 { (m0, m1) } else { (m1, m0) };
    let mc = usize::from(n_id_2) + 3 * half;

    let mut d = vec![0i8; SYNC_SEQUENCE_LEN];
    for n in 0..31 {
        d[2 * n] = s[(n + m_even) % 31] * c[(n + mc) % 31];
        d[2 * n + 1] = s[(n + m_odd) % 31] * c[(n + mc + 7) % 31];
    }
    Ok(d)
}

/// CRS initialization value for a given cell, slot and slot symbol
/// (normal cyclic prefix).
pub fn crs_c_init(cell_id: u16, slot: u8, slot_symbol: u8) -> u32 {
    let ns = u32::from(slot);
    let l = u32::from(slot_symbol);
    let id = u32::from(cell_id);
    (1 << 10) * (7 * (ns + 1) + l + 1) * (2 * id + 1) + 2 * id + 1
}

/// Unit-power QPSK CRS values for one reference symbol.
pub fn crs_symbol_values(
    cell_id: u16,
    slot: u8,
    slot_symbol: u8,
    count: usize,
) -> Result<Vec<Complex64>, GridError> {
    let mut gen = GoldSequence::new(crs_c_init(cell_id, slot, slot_symbol))?;
    Ok((0..count).map(|_| gen.next_qpsk(1.0)).collect())
}
