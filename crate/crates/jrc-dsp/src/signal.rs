//! Sampled-signal and spectrum types plus the transform/resampling
//! operations every other module builds on.
//!
//! Conventions:
//! - [`fft`]/[`ifft`] are a unitary pair (1/sqrt(N) each way) so energy
//!   checks read the same in either domain.
//! - Buffers carry a validity interval instead of trimming filter warm-up:
//!   downstream operations can exclude edge samples explicitly.
//! - Operations are pure; mismatched sample grids are an error, never an
//!   implicit resample.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{DspError, Result};
use crate::fft::Fft;

/// Domain tag for a sampled buffer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Time,
    Frequency,
}

/// Uniformly sampled waveform: complex (or flagged-real) amplitudes on a
/// fixed grid. The universal carrier of every signal in the chain.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalBuffer {
    samples: Vec<Complex64>,
    sample_rate: f64,
    start_time: f64,
    domain: Domain,
    real: bool,
    /// Half-open index range of samples unaffected by filter warm-up.
    valid: (usize, usize),
}

impl SignalBuffer {
    /// Complex buffer from raw samples.
    pub fn from_complex(samples: Vec<Complex64>, sample_rate: f64) -> Result<Self> {
        Self::build(samples, sample_rate, false)
    }

    /// Real buffer; imaginary parts are guaranteed zero.
    pub fn from_real(samples: Vec<f64>, sample_rate: f64) -> Result<Self> {
        let complex = samples.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        Self::build(complex, sample_rate, true)
    }

    fn build(samples: Vec<Complex64>, sample_rate: f64, real: bool) -> Result<Self> {
        if !(sample_rate > 0.0) || !sample_rate.is_finite() {
            return Err(DspError::InvalidParameter {
                what: "sample_rate",
                detail: format!("{sample_rate} Sa/s"),
            });
        }
        if samples.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(DspError::InvalidParameter {
                what: "samples",
                detail: format!("non-finite sample present"),
            });
        }
        let n = samples.len();
        Ok(Self {
            samples,
            sample_rate,
            start_time: 0.0,
            domain: Domain::Time,
            real,
            valid: (0, n),
        })
    }

    pub fn with_start_time(mut self, t0: f64) -> Self {
        self.start_time = t0;
        self
    }

    pub(crate) fn with_valid(mut self, start: usize, end: usize) -> Self {
        self.valid = (start.min(self.samples.len()), end.min(self.samples.len()));
        self
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn start_time(&self) -> f64 {
        self.start_time
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// Half-open sample range unaffected by filter edges.
    pub fn valid_range(&self) -> (usize, usize) {
        self.valid
    }

    pub fn valid_slice(&self) -> &[Complex64] {
        &self.samples[self.valid.0..self.valid.1]
    }

    /// Time of sample `i`.
    pub fn time_at(&self, i: usize) -> f64 {
        self.start_time + i as f64 / self.sample_rate
    }

    /// Real parts (regardless of the real flag).
    pub fn real_part(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.re).collect()
    }

    /// Mean power over the valid interval.
    pub fn power(&self) -> f64 {
        let v = self.valid_slice();
        if v.is_empty() {
            return 0.0;
        }
        v.iter().map(|s| s.norm_sqr()).sum::<f64>() / v.len() as f64
    }

    pub fn rms(&self) -> f64 {
        libm::sqrt(self.power())
    }

    pub(crate) fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub(crate) fn set_real(&mut self, real: bool) {
        self.real = real;
        if real {
            for s in &mut self.samples {
                s.im = 0.0;
            }
        }
    }

    pub(crate) fn same_grid(&self, other: &Self) -> Result<()> {
        if self.sample_rate != other.sample_rate {
            return Err(DspError::SampleRateMismatch {
                left: self.sample_rate,
                right: other.sample_rate,
            });
        }
        Ok(())
    }
}

/// Frequency-domain counterpart of [`SignalBuffer`], bins in ascending
/// frequency order starting at `start_frequency` (DC-centered layout).
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    bins: Vec<Complex64>,
    bin_spacing: f64,
    start_frequency: f64,
    // Carried through so the inverse transform restores the buffer exactly.
    origin_time: f64,
    real_hint: bool,
}

impl Spectrum {
    pub fn bins(&self) -> &[Complex64] {
        &self.bins
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn bin_spacing(&self) -> f64 {
        self.bin_spacing
    }

    pub fn start_frequency(&self) -> f64 {
        self.start_frequency
    }

    /// Frequency of bin `i`.
    pub fn frequency_at(&self, i: usize) -> f64 {
        self.start_frequency + i as f64 * self.bin_spacing
    }

    /// Total |X|^2 over bins (with the unitary convention this equals the
    /// time-domain energy).
    pub fn energy(&self) -> f64 {
        self.bins.iter().map(|b| b.norm_sqr()).sum()
    }

    /// Energy restricted to [f_lo, f_hi].
    pub fn band_energy(&self, f_lo: f64, f_hi: f64) -> f64 {
        self.bins
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let f = self.frequency_at(*i);
                f >= f_lo && f <= f_hi
            })
            .map(|(_, b)| b.norm_sqr())
            .sum()
    }
}

/// Unitary FFT of a time-domain buffer.
pub fn fft(sig: &SignalBuffer) -> Result<Spectrum> {
    if sig.is_empty() {
        return Err(DspError::EmptyInput("fft"));
    }
    let n = sig.len();
    let mut data = sig.samples.clone();
    Fft::new(n).forward(&mut data);
    let scale = 1.0 / libm::sqrt(n as f64);
    for v in &mut data {
        *v *= scale;
    }
    // Rotate to DC-centered order: negative frequencies first.
    let half = n / 2;
    data.rotate_right(half);
    let df = sig.sample_rate / n as f64;
    Ok(Spectrum {
        bins: data,
        bin_spacing: df,
        start_frequency: -(half as f64) * df,
        origin_time: sig.start_time,
        real_hint: sig.real,
    })
}

/// Unitary inverse FFT; exact round-trip partner of [`fft`].
pub fn ifft(spec: &Spectrum) -> Result<SignalBuffer> {
    if spec.is_empty() {
        return Err(DspError::EmptyInput("ifft"));
    }
    let n = spec.len();
    let mut data = spec.bins.clone();
    let half = n / 2;
    data.rotate_left(half);
    Fft::new(n).inverse(&mut data);
    let scale = 1.0 / libm::sqrt(n as f64);
    for v in &mut data {
        *v *= scale;
    }
    let rate = spec.bin_spacing * n as f64;
    let mut out = SignalBuffer::from_complex(data, rate)?.with_start_time(spec.origin_time);
    if spec.real_hint {
        out.set_real(true);
    }
    Ok(out)
}

/// Relative energy threshold for the decimation aliasing guard (-60 dB).
pub const ALIAS_GUARD_REL_POWER: f64 = 1e-6;

/// Exact spectral resampling to `new_rate`.
///
/// Implemented by Fourier-domain truncation/zero-padding, so in-band content
/// passes untouched and the duration is preserved to the sample. Decimation
/// that would fold more than [`ALIAS_GUARD_REL_POWER`] of the signal energy
/// above the new Nyquist is rejected rather than silently aliased.
pub fn resample(sig: &SignalBuffer, new_rate: f64) -> Result<SignalBuffer> {
    resample_inner(sig, new_rate, None, true)
}

/// Low-pass plus resample in one step: spectrum is hard-limited to
/// `cutoff_hz` before the rate change. Deliberate band-limiting, so the
/// aliasing guard does not apply.
pub fn lowpass_resample(sig: &SignalBuffer, new_rate: f64, cutoff_hz: f64) -> Result<SignalBuffer> {
    resample_inner(sig, new_rate, Some(cutoff_hz), false)
}

fn resample_inner(
    sig: &SignalBuffer,
    new_rate: f64,
    cutoff: Option<f64>,
    guard: bool,
) -> Result<SignalBuffer> {
    if sig.is_empty() {
        return Err(DspError::EmptyInput("resample"));
    }
    if !(new_rate > 0.0) || !new_rate.is_finite() {
        return Err(DspError::InvalidParameter {
            what: "new_rate",
            detail: format!("{new_rate} Sa/s"),
        });
    }
    let n = sig.len();
    let ratio = new_rate / sig.sample_rate;
    let m_f = n as f64 * ratio;
    let m = libm::round(m_f) as usize;
    if m == 0 || (m_f - m as f64).abs() > 1e-6 {
        return Err(DspError::InvalidParameter {
            what: "resample ratio",
            detail: format!("{n} samples x {ratio} is not an integer length"),
        });
    }
    if m == n && cutoff.is_none() {
        return Ok(sig.clone());
    }

    let mut x = sig.samples.clone();
    Fft::new(n).forward(&mut x);

    // Natural FFT order here: bin k holds frequency k*df for k <= n/2,
    // (k-n)*df above.
    let df = sig.sample_rate / n as f64;
    let freq_of = |k: usize| -> f64 {
        if k <= n / 2 {
            k as f64 * df
        } else {
            (k as f64 - n as f64) * df
        }
    };

    if let Some(fc) = cutoff {
        for k in 0..n {
            if libm::fabs(freq_of(k)) > fc {
                x[k] = Complex64::new(0.0, 0.0);
            }
        }
    }

    let mut y = vec![Complex64::new(0.0, 0.0); m];
    if m >= n {
        // Zero-pad the spectrum.
        let half = n / 2;
        y[..=half.min(n - 1)].copy_from_slice(&x[..=half.min(n - 1)]);
        for k in 1..n - half {
            y[m - k] = x[n - k];
        }
        if n % 2 == 0 && m > n {
            // Split the old Nyquist bin symmetrically.
            let v = x[half] * 0.5;
            y[half] = v;
            y[m - half] = v;
        }
    } else {
        if guard {
            let total: f64 = x.iter().map(|v| v.norm_sqr()).sum();
            let new_nyq = new_rate / 2.0;
            let dropped: f64 = (0..n)
                .filter(|&k| libm::fabs(freq_of(k)) > new_nyq)
                .map(|k| x[k].norm_sqr())
                .sum();
            if total > 0.0 && dropped / total > ALIAS_GUARD_REL_POWER {
                return Err(DspError::AliasingGuard { new_rate, rel_power: dropped / total });
            }
        }
        let half = m / 2;
        y[..half].copy_from_slice(&x[..half]);
        for k in 1..=(m - 1) / 2 {
            y[m - k] = x[n - k];
        }
        if m % 2 == 0 {
            // Fold the pair of bins that land on the new Nyquist frequency.
            y[half] = x[half] + x[n - half];
        }
    }

    Fft::new(m).inverse(&mut y);
    let scale = 1.0 / n as f64;
    for v in &mut y {
        *v *= scale;
    }
    let mut out = SignalBuffer::from_complex(y, new_rate)?.with_start_time(sig.start_time);
    if sig.real {
        out.set_real(true);
    }
    let (v0, v1) = sig.valid;
    out.valid = (
        libm::ceil(v0 as f64 * ratio) as usize,
        (libm::floor(v1 as f64 * ratio) as usize).min(m),
    );
    Ok(out)
}
