//! Signal-processing core for a dual-band constant-envelope LFM-OFDM joint
//! radar-communication (JRC) simulator.
//!
//! The crate models the full desk-scale signal chain:
//!
//! ```text
//! OFDM baseband m(t) ──► dual-band CE-LFM-OFDM IF signal ──► MMW up-conversion
//!      │                                                          │
//!      │                            ┌─────────────────────────────┤
//!      │                            ▼                             ▼
//!      │                  multi-target radar channel      AWGN comm channel
//!      │                            │                             │
//!      │                   dual sub-band de-chirp        square-law envelope
//!      │                            │                     detection + CE-OFDM
//!      │                            ▼                      phase demodulation
//!      │                  coherent fusion (gap fill)              │
//!      │                            │                             ▼
//!      └────────── truth ──► range profiles / SNR          bits / BER / EVM
//! ```
//!
//! Everything here is pure computation over immutable buffers: no IO, no
//! clocks, no global state. File formats, scenario configs and the CLI live
//! in the companion `jrc-cli` crate. The crate is `no_std` (with `alloc`) so
//! the DSP core stays free of platform dependencies.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod channel;
pub mod commrx;
pub mod error;
pub mod fft;
pub mod filter;
pub mod fusion;
pub mod measure;
pub mod radarrx;
pub mod rng;
pub mod signal;
pub mod waveform;
pub mod window;

mod lstsq;

pub use error::{DspError, Result};
pub use num_complex::Complex64;
pub use signal::{Domain, SignalBuffer, Spectrum};

/// Default propagation speed in m/s (vacuum speed of light).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;
