//! Analysis windows and the Kaiser design helpers used by the FIR filters.

use alloc::vec::Vec;
use core::f64::consts::PI;

/// Window selection for spectral analysis (range profiles, STFT).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum WindowKind {
    /// No taper; narrowest mainlobe, matches the theoretical resolution.
    Rectangular,
    /// Hann taper; -31.5 dB sidelobes, default for profiles.
    Hann,
}

impl WindowKind {
    /// Window samples of the given length (periodic-symmetric form).
    pub fn samples(self, len: usize) -> Vec<f64> {
        match self {
            Self::Rectangular => (0..len).map(|_| 1.0).collect(),
            Self::Hann => {
                if len == 1 {
                    return alloc::vec![1.0];
                }
                (0..len)
                    .map(|i| {
                        let x = PI * i as f64 / (len - 1) as f64;
                        let s = libm::sin(x);
                        s * s
                    })
                    .collect()
            }
        }
    }
}

/// Zeroth-order modified Bessel function of the first kind (series form).
pub fn bessel_i0(x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..64 {
        term *= (half / k as f64) * (half / k as f64);
        sum += term;
        if term < sum * 1e-18 {
            break;
        }
    }
    sum
}

/// Kaiser shape parameter for a target stopband attenuation in dB.
pub fn kaiser_beta(atten_db: f64) -> f64 {
    if atten_db > 50.0 {
        0.1102 * (atten_db - 8.7)
    } else if atten_db >= 21.0 {
        0.5842 * libm::pow(atten_db - 21.0, 0.4) + 0.07886 * (atten_db - 21.0)
    } else {
        0.0
    }
}

/// Kaiser length estimate for the given attenuation and normalized
/// transition width (fraction of the sample rate). Returned length is odd so
/// the filter has an integer group delay.
pub fn kaiser_len(atten_db: f64, transition_norm: f64) -> usize {
    let d_omega = 2.0 * PI * transition_norm;
    let n = libm::ceil((atten_db - 7.95) / (2.285 * d_omega)) as usize + 1;
    n | 1
}

/// Kaiser window of length `len` with shape `beta`.
pub fn kaiser(len: usize, beta: f64) -> Vec<f64> {
    let denom = bessel_i0(beta);
    let m = (len - 1) as f64;
    (0..len)
        .map(|i| {
            let r = 2.0 * i as f64 / m - 1.0;
            bessel_i0(beta * libm::sqrt((1.0 - r * r).max(0.0))) / denom
        })
        .collect()
}
