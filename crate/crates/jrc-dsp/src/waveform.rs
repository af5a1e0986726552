//! Transmit-side waveform generation: real OFDM baseband, dual-band
//! constant-envelope LFM-OFDM synthesis, and MMW up-conversion.
//!
//! The IF waveform is
//!
//! ```text
//! s(t) = A * { exp(j[2*pi*f1*t + pi*k*t^2 + 2*pi*h*m(t)])
//!            + exp(j[2*pi*f2*t + pi*k*t^2 - 2*pi*h*m(t)]) }
//! ```
//!
//! over one pulse t in [0, Tc): two up-chirps sharing the slope k = B/Tc,
//! phase-modulated by the same OFDM baseband with opposite modulation
//! indexes. Up-conversion translates both bands by `mmw_shift`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{DspError, Result};
use crate::fft::Fft;
use crate::rng::Rng;
use crate::signal::{fft, SignalBuffer};

/// Fixed substream key for the pilot sequence, shared by TX and RX.
const PILOT_STREAM: u64 = 0x50_49_4c_4f_54; // "PILOT"

/// Sub-band selector. `Lower` is the f1 chirp carrying +h, `Upper` the f2
/// chirp carrying -h.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Band {
    Lower,
    Upper,
}

impl Band {
    pub fn pmi_sign(self) -> f64 {
        match self {
            Band::Lower => 1.0,
            Band::Upper => -1.0,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Band::Lower => 1,
            Band::Upper => 2,
        }
    }
}

/// OFDM baseband parameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OfdmConfig {
    /// Occupied subcarriers (pilots + data), mapped Hermitian for a real
    /// baseband.
    pub n_subcarriers: usize,
    /// Square QAM order: 4, 16 or 64.
    pub qam_order: u32,
    /// Bandwidth spanned by the occupied subcarriers (Hz).
    pub occupied_bandwidth: f64,
    /// Cyclic prefix length as a fraction of the useful symbol.
    pub cp_fraction: f64,
    /// Every `pilot_spacing`-th subcarrier is a pilot.
    pub pilot_spacing: usize,
    /// OFDM frames generated per call.
    pub frame_count: usize,
    /// Offset of the first subcarrier from DC (Hz). Keeps the comm band
    /// away from the radar beat region near DC.
    pub guard_band: f64,
    /// RMS the generated baseband is normalized to. Kept well below one so
    /// the phase modulation leaves each sub-band spectrally confined over
    /// the whole PMI operating range: per-band phase deviation is
    /// 2*pi*h*baseband_rms, and first-order PM sidebands sit near
    /// (2*pi*h*baseband_rms)^2 relative to the band, -33 dB at the default
    /// 0.005 with h = 0.7.
    pub baseband_rms: f64,
}

impl OfdmConfig {
    fn validate(&self) -> Result<()> {
        if !matches!(self.qam_order, 4 | 16 | 64) {
            return Err(DspError::InvalidParameter {
                what: "qam_order",
                detail: format!("{} (must be 4, 16 or 64)", self.qam_order),
            });
        }
        if self.pilot_spacing < 2 {
            return Err(DspError::InvalidParameter {
                what: "pilot_spacing",
                detail: format!("{} (must be >= 2)", self.pilot_spacing),
            });
        }
        if self.n_subcarriers == 0 || self.frame_count == 0 {
            return Err(DspError::InvalidParameter {
                what: "ofdm config",
                detail: format!(
                    "n_subcarriers {} / frame_count {}",
                    self.n_subcarriers, self.frame_count
                ),
            });
        }
        if !(self.occupied_bandwidth > 0.0)
            || !(self.cp_fraction >= 0.0)
            || !(self.guard_band >= 0.0)
            || !(self.baseband_rms > 0.0)
        {
            return Err(DspError::InvalidParameter {
                what: "ofdm config",
                detail: format!("non-positive bandwidth/cp/guard/rms"),
            });
        }
        Ok(())
    }

    pub fn bits_per_symbol(&self) -> usize {
        match self.qam_order {
            4 => 2,
            16 => 4,
            _ => 6,
        }
    }
}

/// Full waveform parameter set; the single source of truth for a scenario.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct JrcWaveformConfig {
    /// Start frequency of the lower LFM carrier at IF (Hz).
    pub f1: f64,
    /// Start frequency of the upper LFM carrier at IF (Hz).
    pub f2: f64,
    /// Swept bandwidth B of each chirp (Hz).
    pub chirp_bandwidth: f64,
    /// Pulse width Tc (s).
    pub pulse_width: f64,
    /// Phase modulation index h.
    pub pmi: f64,
    /// Per-band amplitude A.
    pub amplitude: f64,
    /// MMW translation 2*f_RF (Hz).
    pub mmw_shift: f64,
    /// Synthesis grid rate (Sa/s).
    pub sample_rate: f64,
    pub ofdm: OfdmConfig,
}

impl JrcWaveformConfig {
    /// Chirp slope k = B / Tc (Hz/s); derived, never stored.
    pub fn chirp_slope(&self) -> f64 {
        self.chirp_bandwidth / self.pulse_width
    }

    /// Start frequency of a band at IF.
    pub fn band_start_if(&self, band: Band) -> f64 {
        match band {
            Band::Lower => self.f1,
            Band::Upper => self.f2,
        }
    }

    /// Start frequency of a band after MMW up-conversion.
    pub fn band_start_mmw(&self, band: Band) -> f64 {
        self.band_start_if(band) + self.mmw_shift
    }

    /// Band center reported alongside the start-frequency convention.
    pub fn band_center_mmw(&self, band: Band) -> f64 {
        self.band_start_mmw(band) + self.chirp_bandwidth / 2.0
    }

    /// Self-coherent IF product frequency f2 - f1.
    pub fn cross_if(&self) -> f64 {
        self.f2 - self.f1
    }

    /// Samples in one pulse on the synthesis grid.
    pub fn pulse_samples(&self) -> usize {
        libm::round(self.pulse_width * self.sample_rate) as usize
    }

    pub fn validate(&self) -> Result<()> {
        self.ofdm.validate()?;
        if !(self.chirp_bandwidth > 0.0) || !(self.pulse_width > 0.0) {
            return Err(DspError::InvalidParameter {
                what: "chirp",
                detail: format!("B {} Hz, Tc {} s", self.chirp_bandwidth, self.pulse_width),
            });
        }
        // Non-overlapping sub-bands keep the difference-frequency ED
        // product clean.
        if self.f1 + self.chirp_bandwidth > self.f2 {
            return Err(DspError::InvalidParameter {
                what: "band plan",
                detail: format!(
                    "f1 + B = {} Hz overlaps f2 = {} Hz",
                    self.f1 + self.chirp_bandwidth,
                    self.f2
                ),
            });
        }
        // h > 0 is the operating regime; the sign-flipped variant is
        // accepted so the opposite-PMI symmetry can be exercised directly.
        if self.pmi == 0.0 || !self.pmi.is_finite() {
            return Err(DspError::InvalidParameter {
                what: "pmi",
                detail: format!("{}", self.pmi),
            });
        }
        if !(self.sample_rate > 0.0) {
            return Err(DspError::InvalidParameter {
                what: "sample_rate",
                detail: format!("{}", self.sample_rate),
            });
        }
        Ok(())
    }

    /// Full-scale parameters from the experiments: bands starting at 54 and
    /// 61 GHz after the 50 GHz shift, 2 GHz chirps over 5 us, 64-QAM OFDM
    /// of 1 GHz, h = 0.7.
    pub fn preset_paper() -> Self {
        Self {
            f1: 4e9,
            f2: 11e9,
            chirp_bandwidth: 2e9,
            pulse_width: 5e-6,
            pmi: 0.7,
            amplitude: 1.0,
            mmw_shift: 50e9,
            sample_rate: 160e9,
            ofdm: OfdmConfig {
                n_subcarriers: 1024,
                qam_order: 64,
                occupied_bandwidth: 1e9,
                cp_fraction: 0.125,
                pilot_spacing: 8,
                frame_count: 5,
                guard_band: 50e6,
                baseband_rms: 0.005,
            },
        }
    }

    /// All frequencies divided by ten, times multiplied by ten: bands at
    /// 5.4/6.1 GHz, B = 200 MHz, Tc = 50 us. Same sample count per pulse.
    pub fn preset_desk() -> Self {
        Self {
            f1: 4e8,
            f2: 1.1e9,
            chirp_bandwidth: 2e8,
            pulse_width: 5e-5,
            pmi: 0.7,
            amplitude: 1.0,
            mmw_shift: 5e9,
            sample_rate: 16e9,
            ofdm: OfdmConfig {
                n_subcarriers: 1024,
                qam_order: 64,
                occupied_bandwidth: 1e8,
                cp_fraction: 0.125,
                pilot_spacing: 8,
                frame_count: 5,
                guard_band: 5e6,
                baseband_rms: 0.005,
            },
        }
    }

    /// Reduced subcarrier count and short pulse for fast tests and smoke
    /// runs (~6x fewer samples than the paper grid).
    pub fn preset_mini() -> Self {
        Self {
            f1: 4e8,
            f2: 1.1e9,
            chirp_bandwidth: 2e8,
            pulse_width: 8e-6,
            pmi: 0.7,
            amplitude: 1.0,
            mmw_shift: 5e9,
            sample_rate: 16e9,
            ofdm: OfdmConfig {
                n_subcarriers: 128,
                qam_order: 64,
                occupied_bandwidth: 1e8,
                cp_fraction: 0.125,
                pilot_spacing: 8,
                frame_count: 6,
                guard_band: 5e6,
                baseband_rms: 0.005,
            },
        }
    }
}

/// Subcarrier grid resolved against a concrete sample rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OfdmGrid {
    /// Subcarrier spacing (Hz).
    pub delta_f: f64,
    /// Useful symbol length in samples (= fs / delta_f).
    pub n_use: usize,
    /// Cyclic prefix length in samples.
    pub cp_len: usize,
    /// Index of the first occupied subcarrier.
    pub k0: usize,
    pub sample_rate: f64,
}

impl OfdmGrid {
    pub fn resolve(cfg: &OfdmConfig, sample_rate: f64) -> Result<Self> {
        cfg.validate()?;
        if sample_rate < 2.0 * cfg.occupied_bandwidth {
            return Err(DspError::InvalidParameter {
                what: "sample_rate",
                detail: format!(
                    "{} Sa/s < 2 x occupied bandwidth {} Hz",
                    sample_rate, cfg.occupied_bandwidth
                ),
            });
        }
        let delta_f = cfg.occupied_bandwidth / cfg.n_subcarriers as f64;
        let n_use_f = sample_rate / delta_f;
        let n_use = libm::round(n_use_f) as usize;
        if n_use == 0 || (n_use_f - n_use as f64).abs() > 1e-6 {
            return Err(DspError::InvalidParameter {
                what: "subcarrier grid",
                detail: format!("fs / delta_f = {n_use_f} is not an integer symbol length"),
            });
        }
        let k0 = libm::ceil(cfg.guard_band / delta_f).max(1.0) as usize;
        if k0 + cfg.n_subcarriers >= n_use / 2 {
            return Err(DspError::InvalidParameter {
                what: "subcarrier grid",
                detail: format!(
                    "{} subcarriers from bin {k0} exceed the Hermitian half-grid {}",
                    cfg.n_subcarriers,
                    n_use / 2
                ),
            });
        }
        let cp_len = libm::round(cfg.cp_fraction * n_use as f64) as usize;
        Ok(Self { delta_f, n_use, cp_len, k0, sample_rate })
    }

    /// Samples per frame (CP + useful part).
    pub fn frame_len(&self) -> usize {
        self.n_use + self.cp_len
    }
}

/// Everything the receiver needs to score a capture: the transmitted bits,
/// the per-frame data symbols, and the pilot layout.
#[derive(Debug, Clone, PartialEq)]
pub struct OfdmFrameRecord {
    /// All transmitted bits, frame-major.
    pub tx_bits: Vec<u8>,
    /// Data symbols per frame (data positions only).
    pub tx_symbols: Vec<Vec<Complex64>>,
    /// Pilot positions among the occupied subcarriers.
    pub pilot_positions: Vec<usize>,
    /// Pilot symbols (common to all frames).
    pub pilot_symbols: Vec<Complex64>,
    /// Data positions among the occupied subcarriers.
    pub data_positions: Vec<usize>,
    pub bits_per_frame: usize,
}

/// Deterministic pilot sequence shared by modulator and demodulator.
pub fn pilot_sequence(count: usize) -> Vec<Complex64> {
    let mut rng = Rng::substream(PILOT_STREAM, 0);
    let s = core::f64::consts::FRAC_1_SQRT_2;
    (0..count)
        .map(|_| {
            let re = if rng.bit() == 1 { s } else { -s };
            let im = if rng.bit() == 1 { s } else { -s };
            Complex64::new(re, im)
        })
        .collect()
}

/// Pilot/data split of the occupied subcarriers.
pub fn subcarrier_layout(cfg: &OfdmConfig) -> (Vec<usize>, Vec<usize>) {
    let mut pilots = Vec::new();
    let mut data = Vec::new();
    for i in 0..cfg.n_subcarriers {
        if i % cfg.pilot_spacing == 0 {
            pilots.push(i);
        } else {
            data.push(i);
        }
    }
    (pilots, data)
}

/// Gray-coded square-QAM mapper (unit average symbol power).
pub fn qam_map(bits: &[u8], order: u32) -> Complex64 {
    let m_axis = match order {
        4 => 1,
        16 => 2,
        _ => 3,
    };
    debug_assert_eq!(bits.len(), 2 * m_axis);
    let axis = |b: &[u8]| -> f64 {
        let mut gray = 0usize;
        for &bit in b {
            gray = (gray << 1) | bit as usize;
        }
        // Gray label -> level index (prefix xor).
        let mut idx = gray;
        let mut g = gray >> 1;
        while g > 0 {
            idx ^= g;
            g >>= 1;
        }
        let levels = 1usize << b.len();
        (2.0 * idx as f64) - (levels as f64 - 1.0)
    };
    let scale = match order {
        4 => core::f64::consts::FRAC_1_SQRT_2,
        16 => 1.0 / libm::sqrt(10.0),
        _ => 1.0 / libm::sqrt(42.0),
    };
    Complex64::new(axis(&bits[..m_axis]), axis(&bits[m_axis..])) * scale
}

/// Hard-decision Gray demapper; inverse of [`qam_map`].
pub fn qam_demap(sym: Complex64, order: u32) -> Vec<u8> {
    let m_axis = match order {
        4 => 1usize,
        16 => 2,
        _ => 3,
    };
    let levels = 1isize << m_axis;
    let scale = match order {
        4 => core::f64::consts::FRAC_1_SQRT_2,
        16 => 1.0 / libm::sqrt(10.0),
        _ => 1.0 / libm::sqrt(42.0),
    };
    let slice = |v: f64| -> usize {
        let idx = libm::round((v / scale + (levels as f64 - 1.0)) / 2.0) as isize;
        idx.clamp(0, levels - 1) as usize
    };
    let mut out = Vec::with_capacity(2 * m_axis);
    for v in [sym.re, sym.im] {
        let idx = slice(v);
        let gray = idx ^ (idx >> 1);
        for bit in (0..m_axis).rev() {
            out.push(((gray >> bit) & 1) as u8);
        }
    }
    out
}

/// Modulate explicit per-frame subcarrier symbol vectors (length
/// `n_subcarriers` each) onto the real baseband grid. No normalization is
/// applied; [`generate_ofdm_baseband`] wraps this with bit mapping and RMS
/// scaling.
pub fn modulate_ofdm_frames(
    cfg: &OfdmConfig,
    grid: &OfdmGrid,
    frames: &[Vec<Complex64>],
) -> Result<SignalBuffer> {
    let n_use = grid.n_use;
    let plan = Fft::new(n_use);
    let mut out: Vec<f64> = Vec::with_capacity(frames.len() * grid.frame_len());
    for frame in frames {
        if frame.len() != cfg.n_subcarriers {
            return Err(DspError::LengthMismatch {
                left: frame.len(),
                right: cfg.n_subcarriers,
            });
        }
        let mut spectrum = vec![Complex64::new(0.0, 0.0); n_use];
        for (i, &sym) in frame.iter().enumerate() {
            let k = grid.k0 + i;
            spectrum[k] = sym;
            spectrum[n_use - k] = sym.conj(); // Hermitian image -> real m(t)
        }
        plan.inverse(&mut spectrum);
        let scale = 1.0 / n_use as f64;
        let symbol: Vec<f64> = spectrum.iter().map(|s| s.re * scale).collect();
        out.extend_from_slice(&symbol[n_use - grid.cp_len..]);
        out.extend_from_slice(&symbol);
    }
    SignalBuffer::from_real(out, grid.sample_rate)
}

/// Generate the real OFDM baseband m(t) and its frame record.
///
/// Deterministic in `seed`. The output is normalized to
/// `cfg.baseband_rms` RMS rather than unit RMS: with per-band phase
/// 2*pi*h*m(t) and h up to 1.2, a unit-RMS baseband would swing the
/// instantaneous frequency by several gigahertz, spreading each sub-band
/// across the whole band plan and wiping out the de-chirped beat line; the
/// small fixed RMS keeps every sub-band confined while h alone still sets
/// the phase deviation.
pub fn generate_ofdm_baseband(
    cfg: &OfdmConfig,
    seed: u64,
    sample_rate: f64,
) -> Result<(SignalBuffer, OfdmFrameRecord)> {
    let grid = OfdmGrid::resolve(cfg, sample_rate)?;
    let (pilot_positions, data_positions) = subcarrier_layout(cfg);
    let pilot_symbols = pilot_sequence(pilot_positions.len());
    let bits_per_frame = data_positions.len() * cfg.bits_per_symbol();

    let mut rng = Rng::new(seed);
    let tx_bits = rng.bits(cfg.frame_count * bits_per_frame);

    let mut frames = Vec::with_capacity(cfg.frame_count);
    let mut tx_symbols = Vec::with_capacity(cfg.frame_count);
    let bps = cfg.bits_per_symbol();
    for f in 0..cfg.frame_count {
        let mut subcarriers = vec![Complex64::new(0.0, 0.0); cfg.n_subcarriers];
        for (p, &pos) in pilot_positions.iter().enumerate() {
            subcarriers[pos] = pilot_symbols[p];
        }
        let frame_bits = &tx_bits[f * bits_per_frame..(f + 1) * bits_per_frame];
        let mut frame_syms = Vec::with_capacity(data_positions.len());
        for (d, &pos) in data_positions.iter().enumerate() {
            let sym = qam_map(&frame_bits[d * bps..(d + 1) * bps], cfg.qam_order);
            subcarriers[pos] = sym;
            frame_syms.push(sym);
        }
        frames.push(subcarriers);
        tx_symbols.push(frame_syms);
    }

    let mut m = modulate_ofdm_frames(cfg, &grid, &frames)?;
    let rms = m.rms();
    if rms > 0.0 {
        let scale = cfg.baseband_rms / rms;
        for s in m.samples_mut() {
            s.re *= scale;
        }
    }

    let record = OfdmFrameRecord {
        tx_bits,
        tx_symbols,
        pilot_positions,
        pilot_symbols,
        data_positions,
        bits_per_frame,
    };
    Ok((m, record))
}

/// One band of the dual-band waveform at IF over t in [0, Tc).
pub fn synthesize_band(
    cfg: &JrcWaveformConfig,
    m: &SignalBuffer,
    band: Band,
) -> Result<SignalBuffer> {
    cfg.validate()?;
    if !m.is_real() {
        return Err(DspError::NotReal("synthesize_if_jrc"));
    }
    if (m.sample_rate() - cfg.sample_rate).abs() > 1e-6 {
        return Err(DspError::SampleRateMismatch {
            left: m.sample_rate(),
            right: cfg.sample_rate,
        });
    }
    let n = cfg.pulse_samples();
    if m.len() < n {
        return Err(DspError::InvalidParameter {
            what: "baseband duration",
            detail: format!("{} samples < pulse width {} samples", m.len(), n),
        });
    }
    let fs = cfg.sample_rate;
    let k = cfg.chirp_slope();
    let f0 = cfg.band_start_if(band);
    let h_signed = cfg.pmi * band.pmi_sign();
    let two_pi = 2.0 * core::f64::consts::PI;
    let samples: Vec<Complex64> = (0..n)
        .map(|i| {
            let t = i as f64 / fs;
            let phase = two_pi * f0 * t
                + core::f64::consts::PI * k * t * t
                + two_pi * h_signed * m.samples()[i].re;
            Complex64::from_polar(cfg.amplitude, phase)
        })
        .collect();
    SignalBuffer::from_complex(samples, fs).map(|s| s.with_start_time(m.start_time()))
}

/// Full dual-band IF JRC waveform: sum of the two opposite-PMI bands.
pub fn synthesize_if_jrc(cfg: &JrcWaveformConfig, m: &SignalBuffer) -> Result<SignalBuffer> {
    let lower = synthesize_band(cfg, m, Band::Lower)?;
    let upper = synthesize_band(cfg, m, Band::Upper)?;
    let samples: Vec<Complex64> = lower
        .samples()
        .iter()
        .zip(upper.samples())
        .map(|(a, b)| a + b)
        .collect();
    SignalBuffer::from_complex(samples, cfg.sample_rate)
        .map(|s| s.with_start_time(m.start_time()))
}

/// Translate an analytic IF signal up by `mmw_shift` (ideal heterodyne).
///
/// When `output_rate` exceeds the input rate the signal is spectrally
/// upsampled first. Errors if the shifted occupied band would violate the
/// output Nyquist rate.
pub fn upconvert_to_mmw(
    if_sig: &SignalBuffer,
    mmw_shift: f64,
    output_rate: f64,
) -> Result<SignalBuffer> {
    if if_sig.is_empty() {
        return Err(DspError::EmptyInput("upconvert_to_mmw"));
    }
    if output_rate < if_sig.sample_rate() {
        return Err(DspError::InvalidParameter {
            what: "output_rate",
            detail: format!(
                "{} Sa/s below input rate {}",
                output_rate,
                if_sig.sample_rate()
            ),
        });
    }
    // Occupied-band top: highest |f| below which all but -60 dB of the
    // energy lives (pulse-edge skirts below that level are ignored).
    let spec = fft(if_sig)?;
    let total: f64 = spec.energy();
    let mut by_freq: Vec<(f64, f64)> = spec
        .bins()
        .iter()
        .enumerate()
        .map(|(i, b)| (spec.frequency_at(i).abs(), b.norm_sqr()))
        .collect();
    by_freq.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut tail = 0.0;
    let mut f_top = 0.0;
    for (f, p) in by_freq {
        tail += p;
        if tail > 1e-6 * total {
            f_top = f;
            break;
        }
    }
    if f_top + mmw_shift > output_rate / 2.0 {
        return Err(DspError::InvalidBand {
            f_lo: mmw_shift,
            f_hi: f_top + mmw_shift,
            nyquist: output_rate / 2.0,
        });
    }
    let base = if output_rate > if_sig.sample_rate() {
        crate::signal::resample(if_sig, output_rate)?
    } else {
        if_sig.clone()
    };
    let fs = base.sample_rate();
    let two_pi = 2.0 * core::f64::consts::PI;
    let t0 = base.start_time();
    let samples: Vec<Complex64> = base
        .samples()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let t = t0 + i as f64 / fs;
            s * Complex64::from_polar(1.0, two_pi * mmw_shift * t)
        })
        .collect();
    let (v0, v1) = base.valid_range();
    Ok(SignalBuffer::from_complex(samples, fs)?
        .with_start_time(t0)
        .with_valid(v0, v1))
}

/// Real passband waveform (drops the analytic imaginary part), e.g. for
/// feeding a channel model that works on real signals.
pub fn real_passband(sig: &SignalBuffer) -> SignalBuffer {
    let samples: Vec<f64> = sig.samples().iter().map(|s| s.re).collect();
    let (v0, v1) = sig.valid_range();
    SignalBuffer::from_real(samples, sig.sample_rate())
        .expect("real part finite")
        .with_start_time(sig.start_time())
        .with_valid(v0, v1)
}
