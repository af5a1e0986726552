//! Error type shared by every operation in the crate.

use alloc::string::String;
use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, DspError>;

/// Errors produced by signal-chain operations.
///
/// Every variant carries enough context to name the offending quantity;
/// operations never panic on bad numeric input.
#[derive(Debug, Clone, PartialEq)]
pub enum DspError {
    /// Operation received an empty buffer.
    EmptyInput(&'static str),
    /// A numeric precondition failed (value out of range, NaN, ...).
    InvalidParameter { what: &'static str, detail: String },
    /// Frequency band edges are inverted or violate Nyquist.
    InvalidBand { f_lo: f64, f_hi: f64, nyquist: f64 },
    /// Two buffers that must share a sample grid do not.
    SampleRateMismatch { left: f64, right: f64 },
    /// Decimation would alias in-band energy above the new Nyquist rate.
    AliasingGuard { new_rate: f64, rel_power: f64 },
    /// A buffer expected to be real-valued carries complex content.
    NotReal(&'static str),
    /// Target delay exceeds the buffer duration.
    DelayExceedsBuffer { tau: f64, duration: f64 },
    /// De-chirp reference band not present in the echo spectrum.
    BandMismatch { band_index: u8, rel_power: f64 },
    /// Bit streams of unequal length were compared.
    LengthMismatch { left: usize, right: usize },
    /// Linear-prediction or sparse-model fit failed.
    FitFailed(&'static str),
    /// Model order violates its guard bound.
    ModelOrderGuard { order: usize, bound: usize },
    /// Frequency grids that must align do not.
    GridMismatch(String),
    /// No coarse peak found where one is required (RVP anchor, SNR probe).
    NoPeak(&'static str),
}

impl fmt::Display for DspError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyInput(op) => write!(f, "{op}: empty input buffer"),
            Self::InvalidParameter { what, detail } => write!(f, "invalid {what}: {detail}"),
            Self::InvalidBand { f_lo, f_hi, nyquist } => {
                write!(f, "invalid band [{f_lo}, {f_hi}] Hz for Nyquist {nyquist} Hz")
            }
            Self::SampleRateMismatch { left, right } => {
                write!(f, "sample rate mismatch: {left} vs {right} Sa/s")
            }
            Self::AliasingGuard { new_rate, rel_power } => write!(
                f,
                "resample to {new_rate} Sa/s would alias {rel_power:.2e} of signal power"
            ),
            Self::NotReal(op) => write!(f, "{op}: input must be real-valued"),
            Self::DelayExceedsBuffer { tau, duration } => {
                write!(f, "delay {tau} s exceeds buffer duration {duration} s")
            }
            Self::BandMismatch { band_index, rel_power } => write!(
                f,
                "sub-band {band_index} reference absent from echo (beat power ratio {rel_power:.2e})"
            ),
            Self::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Self::FitFailed(what) => write!(f, "model fit failed: {what}"),
            Self::ModelOrderGuard { order, bound } => {
                write!(f, "model order {order} exceeds guard bound {bound}")
            }
            Self::GridMismatch(detail) => write!(f, "frequency grid mismatch: {detail}"),
            Self::NoPeak(what) => write!(f, "no detectable peak: {what}"),
        }
    }
}

impl core::error::Error for DspError {}
