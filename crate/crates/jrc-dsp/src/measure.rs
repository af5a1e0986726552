//! Measurement utilities shared by tests and experiment drivers: band
//! power, dominant-component search, STFT ridge extraction, phase
//! unwrapping.

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{DspError, Result};
use crate::fft::Fft;
use crate::signal::{fft, SignalBuffer};
use crate::window::WindowKind;

/// Energy of spectral content with |f| in [f_lo, f_hi], from the valid
/// portion of the buffer.
pub fn band_power(sig: &SignalBuffer, f_lo: f64, f_hi: f64) -> Result<f64> {
    let trimmed = SignalBuffer::from_complex(sig.valid_slice().to_vec(), sig.sample_rate())?;
    let spec = fft(&trimmed)?;
    Ok(spec.band_energy(f_lo, f_hi) + spec.band_energy(-f_hi, -f_lo))
}

/// Strongest spectral component with frequency in [f_min, f_max], returned
/// as (frequency, bin power) with quadratic sub-bin interpolation.
pub fn dominant_frequency(sig: &SignalBuffer, f_min: f64, f_max: f64) -> Result<(f64, f64)> {
    let trimmed = SignalBuffer::from_complex(sig.valid_slice().to_vec(), sig.sample_rate())?;
    let spec = fft(&trimmed)?;
    let mut best: Option<(usize, f64)> = None;
    for (i, b) in spec.bins().iter().enumerate() {
        let f = spec.frequency_at(i);
        if f >= f_min && f <= f_max {
            let p = b.norm_sqr();
            if best.map_or(true, |(_, bp)| p > bp) {
                best = Some((i, p));
            }
        }
    }
    let (i, p) = best.ok_or(DspError::NoPeak("dominant_frequency"))?;
    let delta = if i > 0 && i + 1 < spec.len() {
        quadratic_peak_offset(
            spec.bins()[i - 1].norm(),
            spec.bins()[i].norm(),
            spec.bins()[i + 1].norm(),
        )
    } else {
        0.0
    };
    Ok((spec.frequency_at(i) + delta * spec.bin_spacing(), p))
}

/// Sub-bin offset of a sampled peak from a three-point quadratic fit on the
/// log-magnitudes; result in (-0.5, 0.5).
pub fn quadratic_peak_offset(y_m1: f64, y0: f64, y_p1: f64) -> f64 {
    let floor = y0.max(y_m1).max(y_p1) * 1e-12 + f64::MIN_POSITIVE;
    let (a, b, c) = (
        libm::log(y_m1.max(floor)),
        libm::log(y0.max(floor)),
        libm::log(y_p1.max(floor)),
    );
    let denom = a - 2.0 * b + c;
    if denom.abs() < 1e-300 {
        return 0.0;
    }
    let d = 0.5 * (a - c) / denom;
    d.clamp(-0.5, 0.5)
}

/// Successive-difference phase unwrap with a +/- pi threshold. Returns the
/// unwrapped phases and the count of corrected jumps.
pub fn unwrap_phase(wrapped: &[f64]) -> (Vec<f64>, usize) {
    let mut out = Vec::with_capacity(wrapped.len());
    let mut jumps = 0usize;
    let mut offset = 0.0;
    let mut prev = match wrapped.first() {
        Some(&p) => {
            out.push(p);
            p
        }
        None => return (out, 0),
    };
    for &p in &wrapped[1..] {
        let mut d = p - prev;
        if d > core::f64::consts::PI {
            d -= 2.0 * core::f64::consts::PI;
            offset -= 2.0 * core::f64::consts::PI;
            jumps += 1;
        } else if d < -core::f64::consts::PI {
            d += 2.0 * core::f64::consts::PI;
            offset += 2.0 * core::f64::consts::PI;
            jumps += 1;
        }
        let _ = d;
        out.push(p + offset);
        prev = p;
    }
    (out, jumps)
}

/// Short-time Fourier transform magnitudes.
pub struct Stft {
    /// mags[slice][bin], bins in DC-centered ascending order.
    pub mags: Vec<Vec<f64>>,
    /// Center time of each slice (s).
    pub times: Vec<f64>,
    /// Frequency axis (Hz), common to all slices.
    pub freqs: Vec<f64>,
}

/// STFT with the given window length and hop (both in samples).
pub fn stft(sig: &SignalBuffer, win_len: usize, hop: usize, window: WindowKind) -> Result<Stft> {
    if sig.len() < win_len || win_len == 0 || hop == 0 {
        return Err(DspError::InvalidParameter {
            what: "stft window",
            detail: alloc::format!("win_len {win_len}, hop {hop}, len {}", sig.len()),
        });
    }
    let w = window.samples(win_len);
    let plan = Fft::new(win_len);
    let df = sig.sample_rate() / win_len as f64;
    let half = win_len / 2;
    let freqs: Vec<f64> = (0..win_len).map(|i| (i as f64 - half as f64) * df).collect();
    let mut mags = Vec::new();
    let mut times = Vec::new();
    let mut start = 0usize;
    while start + win_len <= sig.len() {
        let mut buf: Vec<Complex64> = sig.samples()[start..start + win_len]
            .iter()
            .zip(w.iter())
            .map(|(s, &wi)| s * wi)
            .collect();
        plan.forward(&mut buf);
        buf.rotate_right(half);
        mags.push(buf.iter().map(|b| b.norm()).collect());
        times.push(sig.time_at(start + half));
        start += hop;
    }
    Ok(Stft { mags, times, freqs })
}

impl Stft {
    /// Per-slice ridge frequency (argmax restricted to [f_lo, f_hi]) with
    /// quadratic interpolation.
    pub fn ridge(&self, f_lo: f64, f_hi: f64) -> Vec<f64> {
        self.mags
            .iter()
            .map(|row| {
                let mut best = (0usize, -1.0f64);
                for (i, &m) in row.iter().enumerate() {
                    if self.freqs[i] >= f_lo && self.freqs[i] <= f_hi && m > best.1 {
                        best = (i, m);
                    }
                }
                let i = best.0;
                let delta = if i > 0 && i + 1 < row.len() {
                    quadratic_peak_offset(row[i - 1], row[i], row[i + 1])
                } else {
                    0.0
                };
                self.freqs[i] + delta * (self.freqs[1] - self.freqs[0])
            })
            .collect()
    }

    /// Robust (Theil-Sen) slope of a ridge in Hz/s.
    pub fn ridge_slope(&self, f_lo: f64, f_hi: f64) -> f64 {
        let ridge = self.ridge(f_lo, f_hi);
        let n = ridge.len();
        if n < 2 {
            return 0.0;
        }
        let mut slopes = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                let dt = self.times[j] - self.times[i];
                if dt != 0.0 {
                    slopes.push((ridge[j] - ridge[i]) / dt);
                }
            }
        }
        slopes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        slopes[slopes.len() / 2]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn unwrap_recovers_linear_phase() {
        let truth: Vec<f64> = (0..200).map(|i| 0.37 * i as f64).collect();
        let wrapped: Vec<f64> = truth
            .iter()
            .map(|&p| {
                let mut x = p % (2.0 * PI);
                if x > PI {
                    x -= 2.0 * PI;
                }
                x
            })
            .collect();
        let (un, _) = unwrap_phase(&wrapped);
        for (a, b) in un.iter().zip(truth.iter()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn stft_ridge_tracks_chirp() {
        let rate = 1e6;
        let n = 100_000;
        let k = 4e6; // Hz/s; sweep 50 kHz -> 450 kHz over the buffer
        let samples: Vec<Complex64> = (0..n)
            .map(|i| {
                let t = i as f64 / rate;
                Complex64::from_polar(1.0, PI * k * t * t + 2.0 * PI * 50e3 * t)
            })
            .collect();
        let sig = SignalBuffer::from_complex(samples, rate).unwrap();
        let s = stft(&sig, 4096, 4096, WindowKind::Hann).unwrap();
        let slope = s.ridge_slope(0.0, 500e3);
        assert!(
            ((slope - k) / k).abs() < 0.05,
            "ridge slope {slope} vs true {k}"
        );
    }

    #[test]
    fn dominant_frequency_interpolates() {
        let rate = 1000.0;
        let f = 123.37; // off-bin on purpose
        let n = 1000;
        let samples: Vec<Complex64> = (0..n)
            .map(|i| Complex64::from_polar(1.0, 2.0 * PI * f * i as f64 / rate))
            .collect();
        let sig = SignalBuffer::from_complex(samples, rate).unwrap();
        let (fhat, _) = dominant_frequency(&sig, 0.0, 500.0).unwrap();
        assert!((fhat - f).abs() < 0.2, "estimated {fhat}");
    }
}
