//! Wireless channel models: multi-target radar reflection and in-band AWGN
//! for the communication link.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{DspError, Result};
use crate::fft::{next_fast_len, Fft};
use crate::rng::Rng;
use crate::signal::SignalBuffer;
use crate::SPEED_OF_LIGHT;

/// A point reflector.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Target {
    /// One-way range in meters.
    pub range: f64,
    /// Amplitude scaling of the echo (no path-loss law; this is the single
    /// amplitude knob).
    pub reflectivity: f64,
}

/// Point-target scene driving the radar channel.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TargetScene {
    pub targets: Vec<Target>,
    /// Propagation speed (m/s).
    pub propagation_speed: f64,
}

impl TargetScene {
    pub fn new(targets: Vec<Target>) -> Self {
        Self { targets, propagation_speed: SPEED_OF_LIGHT }
    }

    /// Round-trip delay of a target: tau = 2 * range / c.
    pub fn delay_of(&self, t: &Target) -> f64 {
        2.0 * t.range / self.propagation_speed
    }

    pub fn max_delay(&self) -> f64 {
        self.targets
            .iter()
            .map(|t| self.delay_of(t))
            .fold(0.0, f64::max)
    }

    fn validate(&self) -> Result<()> {
        for t in &self.targets {
            if !(t.range > 0.0) || !t.range.is_finite() {
                return Err(DspError::InvalidParameter {
                    what: "target range",
                    detail: format!("{} m", t.range),
                });
            }
            if t.reflectivity < 0.0 || !t.reflectivity.is_finite() {
                return Err(DspError::InvalidParameter {
                    what: "reflectivity",
                    detail: format!("{}", t.reflectivity),
                });
            }
        }
        if !(self.propagation_speed > 0.0) {
            return Err(DspError::InvalidParameter {
                what: "propagation_speed",
                detail: format!("{}", self.propagation_speed),
            });
        }
        Ok(())
    }
}

/// Additive-noise configuration for the communication link. The SNR is
/// electrical, measured in the configured band.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinkNoiseConfig {
    /// In-band SNR in dB. `+inf` disables noise; `-inf` replaces the signal
    /// with noise of equal in-band power (noise-only sentinel).
    pub snr_db: f64,
    pub seed: u64,
}

/// Superimpose delayed echoes: out(t) = sum_i rho_i * tx(t - tau_i).
///
/// Delays are applied as frequency-domain phase ramps on a zero-padded
/// grid, which is exact for band-limited content and sub-sample accurate;
/// the padding prevents circular wrap-around. Output keeps the input's
/// length and grid; the first ceil(max tau * fs) samples (before the first
/// echo arrives) are marked invalid.
pub fn apply_target_scene(tx: &SignalBuffer, scene: &TargetScene) -> Result<SignalBuffer> {
    if tx.is_empty() {
        return Err(DspError::EmptyInput("apply_target_scene"));
    }
    scene.validate()?;
    let fs = tx.sample_rate();
    let max_tau = scene.max_delay();
    if max_tau >= tx.duration() {
        return Err(DspError::DelayExceedsBuffer { tau: max_tau, duration: tx.duration() });
    }
    let n = tx.len();
    let pad = libm::ceil(max_tau * fs) as usize + 16;
    let l = next_fast_len(n + pad);
    let plan = Fft::new(l);
    let mut spec = vec![Complex64::new(0.0, 0.0); l];
    spec[..n].copy_from_slice(tx.samples());
    plan.forward(&mut spec);

    // One combined multiplier over all targets.
    let two_pi = 2.0 * core::f64::consts::PI;
    let df = fs / l as f64;
    for (k, bin) in spec.iter_mut().enumerate() {
        let f = if k <= l / 2 { k as f64 * df } else { (k as f64 - l as f64) * df };
        let mut mult = Complex64::new(0.0, 0.0);
        for t in &scene.targets {
            let tau = scene.delay_of(t);
            // Reduce f*tau modulo 1 cycle before sincos for accuracy at
            // MMW frequencies.
            let cycles = f * tau;
            let frac = cycles - libm::floor(cycles);
            mult += Complex64::from_polar(t.reflectivity, -two_pi * frac);
        }
        *bin *= mult;
    }
    plan.inverse(&mut spec);
    let scale = 1.0 / l as f64;
    let samples: Vec<Complex64> = spec[..n].iter().map(|s| s * scale).collect();
    let mut out = SignalBuffer::from_complex(samples, fs)?.with_start_time(tx.start_time());
    if tx.is_real() {
        out.set_real(true);
    }
    let (v0, v1) = tx.valid_range();
    let arrive = libm::ceil(max_tau * fs) as usize;
    Ok(out.with_valid(v0.max(arrive), v1))
}

/// Add white Gaussian noise band-limited to `band`, scaled so the measured
/// in-band SNR equals `noise.snr_db` exactly. Deterministic per seed.
pub fn add_awgn(sig: &SignalBuffer, noise: &LinkNoiseConfig, band: (f64, f64)) -> Result<SignalBuffer> {
    if sig.is_empty() {
        return Err(DspError::EmptyInput("add_awgn"));
    }
    let (f_lo, f_hi) = band;
    let nyq = sig.sample_rate() / 2.0;
    if !(0.0 <= f_lo && f_lo < f_hi && f_hi <= nyq) {
        return Err(DspError::InvalidBand { f_lo, f_hi, nyquist: nyq });
    }
    if noise.snr_db.is_nan() {
        return Err(DspError::InvalidParameter {
            what: "snr_db",
            detail: format!("NaN"),
        });
    }
    if noise.snr_db == f64::INFINITY {
        return Ok(sig.clone());
    }

    let n = sig.len();
    let plan = Fft::new(n);

    // In-band signal power.
    let mut sig_spec: Vec<Complex64> = sig.samples().to_vec();
    plan.forward(&mut sig_spec);
    let df = sig.sample_rate() / n as f64;
    let in_band = |k: usize| -> bool {
        let f = if k <= n / 2 { k as f64 * df } else { (k as f64 - n as f64) * df };
        let fa = libm::fabs(f);
        fa >= f_lo && fa <= f_hi
    };
    let p_signal: f64 =
        (0..n).filter(|&k| in_band(k)).map(|k| sig_spec[k].norm_sqr()).sum::<f64>() / (n * n) as f64;
    if p_signal <= 0.0 {
        return Err(DspError::InvalidParameter {
            what: "signal power",
            detail: format!("no in-band signal energy to reference the SNR against"),
        });
    }

    // White noise, then brickwall-limit to the band.
    let mut rng = Rng::new(noise.seed);
    let mut noise_spec: Vec<Complex64> = if sig.is_real() {
        (0..n).map(|_| Complex64::new(rng.gaussian_pair().0, 0.0)).collect()
    } else {
        (0..n)
            .map(|_| {
                let (a, b) = rng.gaussian_pair();
                Complex64::new(a, b)
            })
            .collect()
    };
    plan.forward(&mut noise_spec);
    for k in 0..n {
        if !in_band(k) {
            noise_spec[k] = Complex64::new(0.0, 0.0);
        }
    }
    let p_noise_raw: f64 = noise_spec.iter().map(|v| v.norm_sqr()).sum::<f64>() / (n * n) as f64;
    if p_noise_raw <= 0.0 {
        return Err(DspError::InvalidParameter {
            what: "noise band",
            detail: format!("band [{f_lo}, {f_hi}] Hz contains no noise bins"),
        });
    }

    let noise_only = noise.snr_db == f64::NEG_INFINITY;
    // Noise-only sentinel: noise at the signal's in-band power, signal dropped.
    let target_noise_power =
        if noise_only { p_signal } else { p_signal / libm::pow(10.0, noise.snr_db / 10.0) };
    let gain = libm::sqrt(target_noise_power / p_noise_raw);

    let mut out_spec = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let s = if noise_only { Complex64::new(0.0, 0.0) } else { sig_spec[k] };
        out_spec[k] = s + noise_spec[k] * gain;
    }
    plan.inverse(&mut out_spec);
    let scale = 1.0 / n as f64;
    let samples: Vec<Complex64> = out_spec.iter().map(|v| v * scale).collect();
    let mut out = SignalBuffer::from_complex(samples, sig.sample_rate())?
        .with_start_time(sig.start_time());
    if sig.is_real() {
        out.set_real(true);
    }
    let (v0, v1) = sig.valid_range();
    Ok(out.with_valid(v0, v1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn chirp(rate: f64, n: usize, f0: f64, k: f64) -> SignalBuffer {
        let samples: Vec<Complex64> = (0..n)
            .map(|i| {
                let t = i as f64 / rate;
                Complex64::from_polar(1.0, 2.0 * PI * f0 * t + PI * k * t * t)
            })
            .collect();
        SignalBuffer::from_complex(samples, rate).unwrap()
    }

    /// Matched-filter delay estimate with quadratic interpolation.
    fn xcorr_delay(rx: &SignalBuffer, tx: &SignalBuffer) -> f64 {
        let n = tx.len();
        let l = next_fast_len(2 * n);
        let plan = Fft::new(l);
        let mut a = vec![Complex64::new(0.0, 0.0); l];
        a[..n].copy_from_slice(rx.samples());
        let mut b = vec![Complex64::new(0.0, 0.0); l];
        b[..n].copy_from_slice(tx.samples());
        plan.forward(&mut a);
        plan.forward(&mut b);
        for (x, y) in a.iter_mut().zip(b.iter()) {
            *x *= y.conj();
        }
        plan.inverse(&mut a);
        let mags: Vec<f64> = a.iter().map(|v| v.norm()).collect();
        let (imax, _) = mags
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.partial_cmp(y.1).unwrap())
            .unwrap();
        let d = crate::measure::quadratic_peak_offset(
            mags[(imax + l - 1) % l],
            mags[imax],
            mags[(imax + 1) % l],
        );
        (imax as f64 + d) / rx.sample_rate()
    }

    #[test]
    fn zero_range_limit_is_identity() {
        let tx = chirp(1e9, 8192, 1e6, 1e12);
        let scene = TargetScene::new(vec![Target { range: 1e-12, reflectivity: 1.0 }]);
        let rx = apply_target_scene(&tx, &scene).unwrap();
        let err: f64 = tx
            .samples()
            .iter()
            .zip(rx.samples())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            / tx.len() as f64;
        assert!(err.sqrt() < 1e-9);
    }

    #[test]
    fn single_target_delay_matches_2r_over_c() {
        let rate = 10e9;
        let tx = chirp(rate, 65536, 100e6, 2e14);
        let scene = TargetScene::new(vec![Target { range: 2.6, reflectivity: 1.0 }]);
        let rx = apply_target_scene(&tx, &scene).unwrap();
        let tau_true = 2.0 * 2.6 / scene.propagation_speed; // 17.34 ns
        let tau_est = xcorr_delay(&rx, &tx);
        // Matched-filter accuracy target: a tenth of 1/B.
        let b = 2e14 * (65536.0 / rate);
        assert!(
            (tau_est - tau_true).abs() < 0.1 / b,
            "tau {tau_est} vs {tau_true}"
        );
    }

    #[test]
    fn two_close_targets_differ_by_half_nanosecond() {
        let rate = 10e9;
        let tx = chirp(rate, 65536, 100e6, 2e14);
        let mk = |r| TargetScene::new(vec![Target { range: r, reflectivity: 1.0 }]);
        let rx_a = apply_target_scene(&tx, &mk(2.60)).unwrap();
        let rx_b = apply_target_scene(&tx, &mk(2.675)).unwrap();
        let dt = xcorr_delay(&rx_b, &tx) - xcorr_delay(&rx_a, &tx);
        let expected = 2.0 * 0.075 / SPEED_OF_LIGHT; // 0.5003 ns
        assert!(
            (dt - expected).abs() < 0.05e-9,
            "delta tau {dt} vs {expected}"
        );
    }

    #[test]
    fn scene_is_linear() {
        let rate = 1e9;
        let x = chirp(rate, 4096, 5e6, 1e12);
        let y = chirp(rate, 4096, 12e6, -8e11);
        let scene = TargetScene::new(vec![
            Target { range: 1.3, reflectivity: 0.8 },
            Target { range: 2.9, reflectivity: 0.5 },
        ]);
        let (a, b) = (0.7, -1.3);
        let combo: Vec<Complex64> = x
            .samples()
            .iter()
            .zip(y.samples())
            .map(|(xa, ya)| xa * a + ya * b)
            .collect();
        let combo = SignalBuffer::from_complex(combo, rate).unwrap();
        let lhs = apply_target_scene(&combo, &scene).unwrap();
        let rx = apply_target_scene(&x, &scene).unwrap();
        let ry = apply_target_scene(&y, &scene).unwrap();
        let mut err = 0.0;
        let mut norm = 0.0;
        for i in 0..lhs.len() {
            let rhs = rx.samples()[i] * a + ry.samples()[i] * b;
            err += (lhs.samples()[i] - rhs).norm_sqr();
            norm += rhs.norm_sqr();
        }
        assert!((err / norm).sqrt() < 1e-9);
    }

    #[test]
    fn delay_beyond_buffer_is_error() {
        let tx = chirp(1e9, 1000, 1e6, 0.0); // 1 us buffer
        let scene = TargetScene::new(vec![Target { range: 300.0, reflectivity: 1.0 }]); // 2 us delay
        assert!(matches!(
            apply_target_scene(&tx, &scene),
            Err(DspError::DelayExceedsBuffer { .. })
        ));
    }

    #[test]
    fn negative_reflectivity_is_error() {
        let tx = chirp(1e9, 1000, 1e6, 0.0);
        let scene = TargetScene::new(vec![Target { range: 1.0, reflectivity: -0.5 }]);
        assert!(apply_target_scene(&tx, &scene).is_err());
    }

    #[test]
    fn infinite_snr_is_identity() {
        let sig = chirp(1e9, 4096, 50e6, 0.0);
        let out = add_awgn(
            &sig,
            &LinkNoiseConfig { snr_db: f64::INFINITY, seed: 1 },
            (1e6, 400e6),
        )
        .unwrap();
        assert_eq!(out.samples(), sig.samples());
    }

    #[test]
    fn zero_db_snr_gives_equal_powers() {
        let rate = 1e9;
        let n = 65536;
        let samples: Vec<f64> =
            (0..n).map(|i| (2.0 * PI * 100e6 * i as f64 / rate).cos()).collect();
        let sig = SignalBuffer::from_real(samples, rate).unwrap();
        let band = (90e6, 110e6);
        let noisy = add_awgn(&sig, &LinkNoiseConfig { snr_db: 0.0, seed: 7 }, band).unwrap();
        // Noise power in band = difference power.
        let diff: Vec<Complex64> = noisy
            .samples()
            .iter()
            .zip(sig.samples())
            .map(|(a, b)| a - b)
            .collect();
        let diff = SignalBuffer::from_complex(diff, rate).unwrap();
        let p_noise = crate::measure::band_power(&diff, band.0, band.1).unwrap();
        let p_sig = crate::measure::band_power(&sig, band.0, band.1).unwrap();
        let ratio = p_noise / p_sig;
        assert!((ratio - 1.0).abs() < 0.05, "in-band noise/signal {ratio}");
    }

    #[test]
    fn awgn_is_deterministic_per_seed() {
        let sig = chirp(1e9, 4096, 50e6, 0.0);
        let cfg = LinkNoiseConfig { snr_db: 10.0, seed: 99 };
        let a = add_awgn(&sig, &cfg, (1e6, 400e6)).unwrap();
        let b = add_awgn(&sig, &cfg, (1e6, 400e6)).unwrap();
        assert_eq!(a.samples(), b.samples());
        let c = add_awgn(&sig, &LinkNoiseConfig { seed: 100, ..cfg }, (1e6, 400e6)).unwrap();
        assert_ne!(a.samples(), c.samples());
    }

    #[test]
    fn noise_only_sentinel_drops_signal() {
        let sig = chirp(1e9, 8192, 50e6, 0.0);
        let out = add_awgn(
            &sig,
            &LinkNoiseConfig { snr_db: f64::NEG_INFINITY, seed: 3 },
            (10e6, 90e6),
        )
        .unwrap();
        // No coherent signal left: residual correlation is at the level a
        // band-limited noise draw projects onto one tone (~sqrt(bins)/N).
        let mut corr = Complex64::new(0.0, 0.0);
        let mut p = 0.0;
        for (a, b) in out.samples().iter().zip(sig.samples()) {
            corr += a * b.conj();
            p += b.norm_sqr();
        }
        assert!(corr.norm() / p < 0.15);
    }
}
