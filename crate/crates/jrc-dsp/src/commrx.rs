//! Self-coherent communication receiver.
//!
//! The two transmitted bands beat against each other in a square-law
//! envelope detector: the shared chirp cancels exactly and the difference
//! product at f2 - f1 carries phase 4*pi*h*m(t) (twice the transmit PMI).
//! Demodulation is then bandpass -> analytic -> carrier removal -> phase
//! unwrap -> scale, followed by ordinary CP-synchronized OFDM demodulation
//! with one-tap pilot equalization.

use alloc::format;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{DspError, Result};
use crate::fft::Fft;
use crate::filter;
use crate::measure::unwrap_phase;
use crate::signal::{lowpass_resample, SignalBuffer};
use crate::waveform::{qam_demap, JrcWaveformConfig, OfdmConfig, OfdmFrameRecord, OfdmGrid};

/// Bit-error measurement of one or more captures.
#[derive(Debug, Clone, PartialEq)]
pub struct BerReport {
    pub bits_total: usize,
    pub bits_error: usize,
    pub ber: f64,
    /// RMS error-vector magnitude of the equalized constellation (0 when
    /// not measured).
    pub evm_rms: f64,
    pub per_frame_ber: Vec<f64>,
}

/// Exact bit-error count between equal-length streams.
pub fn compute_ber(tx_bits: &[u8], rx_bits: &[u8]) -> Result<BerReport> {
    if tx_bits.len() != rx_bits.len() {
        return Err(DspError::LengthMismatch { left: tx_bits.len(), right: rx_bits.len() });
    }
    if tx_bits.is_empty() {
        return Err(DspError::EmptyInput("compute_ber"));
    }
    let bits_error = tx_bits.iter().zip(rx_bits).filter(|(a, b)| a != b).count();
    Ok(BerReport {
        bits_total: tx_bits.len(),
        bits_error,
        ber: bits_error as f64 / tx_bits.len() as f64,
        evm_rms: 0.0,
        per_frame_ber: Vec::new(),
    })
}

impl BerReport {
    /// Split the error count into per-frame BERs.
    pub fn with_frames(mut self, tx_bits: &[u8], rx_bits: &[u8], bits_per_frame: usize) -> Self {
        if bits_per_frame > 0 && tx_bits.len() % bits_per_frame == 0 {
            self.per_frame_ber = tx_bits
                .chunks(bits_per_frame)
                .zip(rx_bits.chunks(bits_per_frame))
                .map(|(a, b)| {
                    a.iter().zip(b).filter(|(x, y)| x != y).count() as f64 / bits_per_frame as f64
                })
                .collect();
        }
        self
    }

    /// Attach an EVM measured from equalized symbols against their
    /// references.
    pub fn with_evm(mut self, equalized: &[Vec<Complex64>], reference: &[Vec<Complex64>]) -> Self {
        let mut num = 0.0;
        let mut den = 0.0;
        for (eq, re) in equalized.iter().zip(reference) {
            for (e, r) in eq.iter().zip(re) {
                num += (e - r).norm_sqr();
                den += r.norm_sqr();
            }
        }
        if den > 0.0 {
            self.evm_rms = libm::sqrt(num / den);
        }
        self
    }
}

/// Square-law envelope detection: |analytic(rx)|^2.
///
/// Real passband input is converted to its analytic form first; complex
/// input is taken as already analytic. The output is real and contains the
/// baseband self-term plus the cross term at f2 - f1.
pub fn envelope_detect(rx: &SignalBuffer) -> Result<SignalBuffer> {
    if rx.is_empty() {
        return Err(DspError::EmptyInput("envelope_detect"));
    }
    let analytic;
    let a = if rx.is_real() {
        analytic = filter::analytic(rx)?;
        &analytic
    } else {
        rx
    };
    let samples: Vec<f64> = a.samples().iter().map(|s| s.norm_sqr()).collect();
    let (v0, v1) = a.valid_range();
    Ok(SignalBuffer::from_real(samples, a.sample_rate())?
        .with_start_time(a.start_time())
        .with_valid(v0, v1))
}

/// Demodulation health indicators. Sync and unwrap trouble are reported
/// here rather than as hard errors so noise-floor sweeps still produce a
/// (garbage) bit stream to count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemodDiagnostics {
    /// Fraction of phase-difference samples near the +/- pi wrap threshold.
    pub wrap_jump_fraction: f64,
    /// False when jump statistics indicate excessive noise or a wrong PMI.
    pub unwrap_reliable: bool,
}

/// Recover m(t) from the envelope-detector output.
///
/// Band-passes around f_IF = f2 - f1, forms the analytic signal, removes
/// the IF carrier, unwraps the phase and divides by the doubled modulation
/// index 4*pi*h. The phase mean is removed: the subcarrier grid starts
/// above DC, so m(t) carries no information there.
pub fn demod_ce_ofdm(
    ed_out: &SignalBuffer,
    cfg: &JrcWaveformConfig,
) -> Result<(SignalBuffer, DemodDiagnostics)> {
    if ed_out.is_empty() {
        return Err(DspError::EmptyInput("demod_ce_ofdm"));
    }
    if !ed_out.is_real() {
        return Err(DspError::NotReal("demod_ce_ofdm"));
    }
    let f_if = cfg.cross_if();
    let half = f_if / 2.0;
    let nyq = ed_out.sample_rate() / 2.0;
    if f_if + half > nyq {
        return Err(DspError::InvalidBand { f_lo: f_if - half, f_hi: f_if + half, nyquist: nyq });
    }
    // Deep stopband so the large DC self-term stays out; transitions kept
    // wide so the filter rings around OFDM frame-boundary phase steps stay
    // short enough for the receiver's CP margin to absorb.
    let spec = filter::FirSpec {
        stopband_db: 130.0,
        transition_hz: 0.15 * f_if,
    };
    let band = filter::bandpass_with(ed_out, f_if - half, f_if + half, spec)?;
    let a = filter::analytic_with(&band, 0.02 * band.sample_rate())?;

    let fs = a.sample_rate();
    let t0 = a.start_time();
    let two_pi = 2.0 * core::f64::consts::PI;
    let wrapped: Vec<f64> = a
        .samples()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let t = t0 + i as f64 / fs;
            // Reduce the carrier cycles before forming the residual phase.
            let cycles = f_if * t;
            let frac = cycles - libm::floor(cycles);
            (s * Complex64::from_polar(1.0, -two_pi * frac)).arg()
        })
        .collect();
    let (unwrapped, jumps) = unwrap_phase(&wrapped);
    let jump_fraction = jumps as f64 / unwrapped.len().max(1) as f64;

    // Remove the constant and any slow linear drift over the valid span:
    // transmitter and receiver share one clock (no CFO by construction)
    // and the subcarrier grid starts above DC, so neither component
    // carries information.
    let (v0, v1) = a.valid_range();
    let span = &unwrapped[v0.min(unwrapped.len())..v1.min(unwrapped.len())];
    let (mean, slope) = linear_fit(span);
    let scale = -1.0 / (4.0 * core::f64::consts::PI * cfg.pmi);
    let mid = (span.len() as f64 - 1.0) / 2.0;
    let m_hat: Vec<f64> = unwrapped
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let x = i as f64 - v0 as f64 - mid;
            (p - mean - slope * x) * scale
        })
        .collect();

    let diag = DemodDiagnostics {
        wrap_jump_fraction: jump_fraction,
        // At the demodulator grid rates the residual phase moves a small
        // fraction of a cycle per sample; frequent near-pi steps mean the
        // phase is noise-driven.
        unwrap_reliable: jump_fraction < 0.02,
    };
    let out = SignalBuffer::from_real(m_hat, fs)?.with_start_time(t0).with_valid(v0, v1);
    Ok((out, diag))
}

/// Least-squares line over a slice, parameterized around its midpoint:
/// returns (mean, slope per sample).
fn linear_fit(y: &[f64]) -> (f64, f64) {
    let n = y.len();
    if n < 2 {
        return (y.first().copied().unwrap_or(0.0), 0.0);
    }
    let mid = (n as f64 - 1.0) / 2.0;
    let mut sy = 0.0;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (i, &v) in y.iter().enumerate() {
        let x = i as f64 - mid;
        sy += v;
        sxy += x * v;
        sxx += x * x;
    }
    (sy / n as f64, sxy / sxx)
}

/// Result of OFDM demodulation of a recovered baseband.
#[derive(Debug, Clone)]
pub struct OfdmRxResult {
    pub rx_bits: Vec<u8>,
    /// Equalized data symbols per demodulated frame.
    pub equalized: Vec<Vec<Complex64>>,
    /// Refined timing offset in demod-grid samples (nominal clock is 0).
    pub sync_offset: isize,
    /// Normalized CP-correlation peak in [0, 1].
    pub sync_metric: f64,
    /// False when the CP correlation never rose above the confidence
    /// threshold and the nominal shared-clock timing was used instead.
    pub sync_reliable: bool,
    /// Pilot-position channel estimates from the first demodulated frame.
    pub channel_estimate: Vec<Complex64>,
    pub frames_used: usize,
}

/// CP-correlation threshold below which timing falls back to the nominal
/// clock.
const SYNC_METRIC_THRESHOLD: f64 = 0.3;

/// Demodulate the recovered baseband: frame sync via cyclic-prefix
/// autocorrelation, per-subcarrier one-tap equalization from pilots, hard
/// QAM decisions.
pub fn ofdm_demodulate(
    m_hat: &SignalBuffer,
    record: &OfdmFrameRecord,
    cfg: &OfdmConfig,
) -> Result<OfdmRxResult> {
    if m_hat.is_empty() {
        return Err(DspError::EmptyInput("ofdm_demodulate"));
    }
    // Work on a compact grid: the smallest power-of-two FFT holding the
    // occupied subcarriers.
    let delta_f = cfg.occupied_bandwidth / cfg.n_subcarriers as f64;
    let k_top = libm::ceil(cfg.guard_band / delta_f).max(1.0) as usize + cfg.n_subcarriers;
    let n_fft = (2 * k_top + 2).next_power_of_two();
    let fs_d = delta_f * n_fft as f64;
    // Cutoff kept well above the top subcarrier so truncating the
    // occupied bins' leakage skirts does not bias the edge estimates.
    let cutoff = (1.5 * k_top as f64 * delta_f).min(0.45 * fs_d);
    let down = if (m_hat.sample_rate() - fs_d).abs() < 1e-6 {
        m_hat.clone()
    } else {
        lowpass_resample(m_hat, fs_d, cutoff)?
    };
    let grid = OfdmGrid::resolve(cfg, fs_d)?;
    debug_assert_eq!(grid.n_use, n_fft);
    let l = grid.frame_len();
    if down.len() < l {
        return Err(DspError::InvalidParameter {
            what: "capture length",
            detail: format!("{} samples < one frame ({l})", down.len()),
        });
    }

    let x = down.samples();
    let frames_avail = down.len() / l;
    let sync_frames = ((down.len() - l) / l).max(1).min(frames_avail);
    // Resampling transients ring near the buffer's first samples; start the
    // correlation at frame 1 whenever more than one frame is usable.
    let f_first = if sync_frames > 1 { 1 } else { 0 };

    // CP autocorrelation accumulated over all usable frames.
    let o_max = l.min(down.len() - sync_frames * l + 1).max(1);
    let mut best = (0usize, 0.0f64);
    for o in 0..o_max {
        let mut corr = 0.0;
        let mut energy = 0.0;
        for f in f_first..sync_frames {
            let base = o + f * l;
            for n in 0..grid.cp_len {
                let a = x[base + n].re;
                let b = x[base + n + grid.n_use].re;
                corr += a * b;
                energy += 0.5 * (a * a + b * b);
            }
        }
        let metric = if energy > 0.0 { libm::fabs(corr) / energy } else { 0.0 };
        if metric > best.1 {
            best = (o, metric);
        }
    }
    let (o_star, sync_metric) = best;
    let sync_reliable = sync_metric >= SYNC_METRIC_THRESHOLD;
    let sync_offset: isize = if !sync_reliable {
        0 // shared simulation clock fallback
    } else if o_star > l / 2 {
        o_star as isize - l as isize
    } else {
        o_star as isize
    };

    let pilot_ref = &record.pilot_symbols;
    if pilot_ref.len() != record.pilot_positions.len() {
        return Err(DspError::LengthMismatch {
            left: pilot_ref.len(),
            right: record.pilot_positions.len(),
        });
    }

    let plan = Fft::new(grid.n_use);
    // Advance each FFT window half a CP into the prefix: transition rings
    // around the frame-boundary phase steps then fall outside every
    // window. The known circular shift is derotated per bin.
    let advance = grid.cp_len / 2;
    let two_pi = 2.0 * core::f64::consts::PI;

    // FFT one frame's occupied subcarriers at a given timing offset.
    let demod_frame = |f: usize, offset: isize| -> Option<Vec<Complex64>> {
        let start = offset + (f * l + grid.cp_len - advance) as isize;
        if start < 0 || (start as usize + grid.n_use) > down.len() {
            return None;
        }
        let start = start as usize;
        let mut buf: Vec<Complex64> = x[start..start + grid.n_use].to_vec();
        plan.forward(&mut buf);
        Some(
            (0..cfg.n_subcarriers)
                .map(|i| {
                    let k = grid.k0 + i;
                    let rot = two_pi * k as f64 * advance as f64 / grid.n_use as f64;
                    buf[k] * Complex64::from_polar(1.0, rot)
                })
                .collect(),
        )
    };
    let pilot_estimates = |occupied: &[Complex64]| -> Vec<Complex64> {
        record
            .pilot_positions
            .iter()
            .zip(pilot_ref)
            .map(|(&pos, &sym)| occupied[pos] / sym)
            .collect()
    };

    // The CP correlation plateau of a band-limited signal is flat to
    // within a sample; refine the integer timing from the pilot phase
    // slope of the first demodulated frame.
    let mut sync_offset = sync_offset;
    for f in 0..frames_avail.min(record.tx_symbols.len()) {
        if let Some(occupied) = demod_frame(f, sync_offset) {
            let h_p = pilot_estimates(&occupied);
            let mut acc = Complex64::new(0.0, 0.0);
            for pair in h_p.windows(2) {
                acc += pair[1] * pair[0].conj();
            }
            let positions = &record.pilot_positions;
            let spacing = if positions.len() > 1 {
                (positions[positions.len() - 1] - positions[0]) as f64
                    / (positions.len() - 1) as f64
            } else {
                1.0
            };
            let slope = acc.arg() / spacing; // rad per subcarrier
            let delta = libm::round(-slope * grid.n_use as f64 / two_pi) as isize;
            if delta != 0 && delta.unsigned_abs() <= grid.cp_len / 4 {
                sync_offset += delta;
            }
            break;
        }
    }

    let mut rx_bits = Vec::new();
    let mut equalized = Vec::new();
    let mut channel_estimate = Vec::new();
    let mut frames_used = 0usize;
    for f in 0..frames_avail.min(record.tx_symbols.len()) {
        let occupied = match demod_frame(f, sync_offset) {
            Some(o) => o,
            None => continue,
        };
        // Pilot-based one-tap equalizer, linear interpolation between
        // pilots, edge extension beyond the outermost pilots.
        let h_p = pilot_estimates(&occupied);
        let interp = |idx: usize| -> Complex64 {
            let positions = &record.pilot_positions;
            match positions.binary_search(&idx) {
                Ok(p) => h_p[p],
                Err(ins) => {
                    if ins == 0 {
                        h_p[0]
                    } else if ins >= positions.len() {
                        h_p[positions.len() - 1]
                    } else {
                        let (p0, p1) = (positions[ins - 1], positions[ins]);
                        let w = (idx - p0) as f64 / (p1 - p0) as f64;
                        h_p[ins - 1] * (1.0 - w) + h_p[ins] * w
                    }
                }
            }
        };

        let mut frame_eq = Vec::with_capacity(record.data_positions.len());
        for &pos in &record.data_positions {
            let h = interp(pos);
            let eq = if h.norm_sqr() > 0.0 { occupied[pos] / h } else { occupied[pos] };
            rx_bits.extend(qam_demap(eq, cfg.qam_order));
            frame_eq.push(eq);
        }
        equalized.push(frame_eq);
        if channel_estimate.is_empty() {
            channel_estimate = h_p;
        }
        frames_used += 1;
    }
    if frames_used == 0 {
        return Err(DspError::InvalidParameter {
            what: "capture length",
            detail: format!("no complete frame after timing offset {sync_offset}"),
        });
    }

    Ok(OfdmRxResult {
        rx_bits,
        equalized,
        sync_offset,
        sync_metric,
        sync_reliable,
        channel_estimate,
        frames_used,
    })
}
