//! Linear-phase FIR filtering: band selection and analytic-signal
//! construction.
//!
//! Filters are Kaiser-windowed sinc designs with a configurable transition
//! width and a 60 dB default stopband. Group delay is an integer sample
//! count (odd lengths only) and is compensated on the output, so
//! `start_time` semantics hold; the warm-up edges are flagged through the
//! buffer's validity interval instead of being trimmed.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{DspError, Result};
use crate::fft::{next_fast_len, Fft};
use crate::signal::SignalBuffer;
use crate::window::{kaiser, kaiser_beta, kaiser_len};

/// FIR design parameters.
#[derive(Debug, Clone, Copy)]
pub struct FirSpec {
    /// Stopband attenuation in dB.
    pub stopband_db: f64,
    /// Transition width in Hz (passband edge to stopband edge).
    pub transition_hz: f64,
}

impl FirSpec {
    /// Default design for a band of the given width: transition 10% of the
    /// band (floored at 1e-4 of the sample rate), designed at 80 dB so the
    /// >= 60 dB out-of-band contract holds with margin.
    pub fn for_band(band_width: f64, sample_rate: f64) -> Self {
        Self {
            stopband_db: 80.0,
            transition_hz: (0.1 * band_width).max(1e-4 * sample_rate),
        }
    }
}

/// Band-pass filter keeping [f_lo, f_hi] with the default design.
pub fn bandpass(sig: &SignalBuffer, f_lo: f64, f_hi: f64) -> Result<SignalBuffer> {
    let spec = FirSpec::for_band(f_hi - f_lo, sig.sample_rate());
    bandpass_with(sig, f_lo, f_hi, spec)
}

/// Band-pass filter with an explicit design.
pub fn bandpass_with(
    sig: &SignalBuffer,
    f_lo: f64,
    f_hi: f64,
    spec: FirSpec,
) -> Result<SignalBuffer> {
    if sig.is_empty() {
        return Err(DspError::EmptyInput("bandpass"));
    }
    let nyq = sig.sample_rate() / 2.0;
    if !(0.0 <= f_lo && f_lo < f_hi && f_hi <= nyq) {
        return Err(DspError::InvalidBand { f_lo, f_hi, nyquist: nyq });
    }
    let taps = design_bandpass(
        f_lo / sig.sample_rate(),
        f_hi / sig.sample_rate(),
        spec.transition_hz / sig.sample_rate(),
        spec.stopband_db,
    );
    Ok(apply_fir_real(sig, &taps))
}

/// Analytic signal of a real buffer via an FIR Hilbert transformer with the
/// default transition (1% of the sample rate around DC/Nyquist).
pub fn analytic(sig: &SignalBuffer) -> Result<SignalBuffer> {
    analytic_with(sig, 0.01 * sig.sample_rate())
}

/// Analytic signal with an explicit Hilbert transition width.
///
/// The real part of the output equals the input exactly; the imaginary part
/// is the Hilbert transform, so negative-frequency content is suppressed by
/// the design's stopband (60 dB) outside +/- transition/2 of DC and Nyquist.
pub fn analytic_with(sig: &SignalBuffer, transition_hz: f64) -> Result<SignalBuffer> {
    if sig.is_empty() {
        return Err(DspError::EmptyInput("analytic"));
    }
    if !sig.is_real() {
        return Err(DspError::NotReal("analytic"));
    }
    if !(transition_hz > 0.0) || transition_hz >= sig.sample_rate() {
        return Err(DspError::InvalidParameter {
            what: "hilbert transition",
            detail: format!("{transition_hz} Hz at {} Sa/s", sig.sample_rate()),
        });
    }
    // Deep design attenuation: the residual ripple bounds how exactly
    // cos -> exp, and the demodulators lean on that.
    let taps = design_hilbert(transition_hz / sig.sample_rate(), 140.0);
    let m = (taps.len() - 1) / 2;
    let hilb = convolve_delay_compensated(sig.samples(), &taps, m);
    let samples: Vec<Complex64> = sig
        .samples()
        .iter()
        .zip(hilb.iter())
        .map(|(x, h)| Complex64::new(x.re, h.re))
        .collect();
    let (v0, v1) = sig.valid_range();
    let out = SignalBuffer::from_complex(samples, sig.sample_rate())?
        .with_start_time(sig.start_time())
        .with_valid(v0.saturating_add(m), v1.saturating_sub(m));
    Ok(out)
}

/// Windowed-sinc band-pass prototype (frequencies as fractions of fs).
fn design_bandpass(f_lo: f64, f_hi: f64, transition: f64, atten_db: f64) -> Vec<f64> {
    let len = kaiser_len(atten_db, transition);
    let beta = kaiser_beta(atten_db);
    let w = kaiser(len, beta);
    let m = (len - 1) as f64 / 2.0;
    let sinc = |x: f64| {
        if x == 0.0 {
            1.0
        } else {
            libm::sin(core::f64::consts::PI * x) / (core::f64::consts::PI * x)
        }
    };
    (0..len)
        .map(|i| {
            let k = i as f64 - m;
            let hi = 2.0 * f_hi * sinc(2.0 * f_hi * k);
            let lo = 2.0 * f_lo * sinc(2.0 * f_lo * k);
            (hi - lo) * w[i]
        })
        .collect()
}

/// Type-III FIR Hilbert transformer (odd length, zero taps at even offsets).
fn design_hilbert(transition: f64, atten_db: f64) -> Vec<f64> {
    let len = kaiser_len(atten_db, transition);
    let beta = kaiser_beta(atten_db);
    let w = kaiser(len, beta);
    let m = (len - 1) / 2;
    (0..len)
        .map(|i| {
            let k = i as isize - m as isize;
            if k % 2 == 0 {
                0.0
            } else {
                2.0 / (core::f64::consts::PI * k as f64) * w[i]
            }
        })
        .collect()
}

/// Real-tap FIR applied with group-delay compensation; preserves length,
/// start time and the real flag, shrinking the validity interval.
fn apply_fir_real(sig: &SignalBuffer, taps: &[f64]) -> SignalBuffer {
    let m = (taps.len() - 1) / 2;
    let filtered = convolve_delay_compensated(sig.samples(), taps, m);
    let (v0, v1) = sig.valid_range();
    let mut out = SignalBuffer::from_complex(filtered, sig.sample_rate())
        .expect("filtered samples finite")
        .with_start_time(sig.start_time())
        .with_valid(v0.saturating_add(m), v1.saturating_sub(m));
    if sig.is_real() {
        out.set_real(true);
    }
    out
}

/// Linear convolution via FFT, sliced so output[i] = (x * h)[i + delay].
fn convolve_delay_compensated(x: &[Complex64], taps: &[f64], delay: usize) -> Vec<Complex64> {
    let n = x.len();
    let l = next_fast_len(n + taps.len() - 1);
    let plan = Fft::new(l);
    let mut xs = vec![Complex64::new(0.0, 0.0); l];
    xs[..n].copy_from_slice(x);
    let mut hs = vec![Complex64::new(0.0, 0.0); l];
    for (h, &t) in hs.iter_mut().zip(taps.iter()) {
        *h = Complex64::new(t, 0.0);
    }
    plan.forward(&mut xs);
    plan.forward(&mut hs);
    for (a, b) in xs.iter_mut().zip(hs.iter()) {
        *a *= b;
    }
    plan.inverse(&mut xs);
    let scale = 1.0 / l as f64;
    (0..n).map(|i| xs[i + delay] * scale).collect()
}
