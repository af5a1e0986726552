//! Coherent fusion of the two sparse sub-bands into one wideband target
//! response.
//!
//! The beat time axis of a de-chirped capture is a scan of the target
//! frequency response: t maps to f = f_start + k*t, so each sub-band
//! yields uniform samples of H(f) = sum_i rho_i * exp(-j 4 pi f r_i / c)
//! after residual-video-phase correction. The gap between the sub-bands is
//! filled by forward-backward linear prediction, and the inverse transform
//! of the full grid gives a range profile at the synthesized-bandwidth
//! resolution c / (2 * (B1 + B2 + B3)).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{DspError, Result};
use crate::fft::Fft;
use crate::lstsq::lstsq;
use crate::measure::quadratic_peak_offset;
use crate::radarrx::{detect_peaks, range_profile, DechirpedSubband, Peak, RangeProfile};
use crate::window::WindowKind;

/// Uniform samples of the target frequency response over one sub-band.
#[derive(Debug, Clone, PartialEq)]
pub struct BandSamples {
    pub values: Vec<Complex64>,
    /// Frequency of values[0] (Hz).
    pub f_start: f64,
    /// Grid spacing (Hz), identical across bands and gap.
    pub f_step: f64,
}

impl BandSamples {
    pub fn frequency_at(&self, i: usize) -> f64 {
        self.f_start + i as f64 * self.f_step
    }

    /// One past the last grid point.
    pub fn f_end(&self) -> f64 {
        self.f_start + self.values.len() as f64 * self.f_step
    }
}

/// Gap-filling configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FusionConfig {
    /// All-pole model order; `None` selects detected coarse peaks + 2.
    pub model_order: Option<usize>,
    /// Apply the cross-band gain/slope alignment. Off by default: the two
    /// bands share one transceiver, so their coherence is structural.
    pub coherence_correction: bool,
}

impl Default for FusionConfig {
    fn default() -> Self {
        Self { model_order: None, coherence_correction: false }
    }
}

/// Per-bin origin tag of the fused spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    MeasuredBand1,
    MeasuredBand2,
    Interpolated,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::MeasuredBand1 => "measured-band1",
            Self::MeasuredBand2 => "measured-band2",
            Self::Interpolated => "interpolated",
        }
    }
}

/// The full synthesized-band spectrum: measured bins pass through
/// untouched, gap bins are model predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct FusedSpectrum {
    pub values: Vec<Complex64>,
    pub f_start: f64,
    pub f_step: f64,
    pub provenance: Vec<Provenance>,
}

impl FusedSpectrum {
    /// Total synthesized bandwidth (Hz).
    pub fn total_bandwidth(&self) -> f64 {
        self.values.len() as f64 * self.f_step
    }

    pub fn frequency_at(&self, i: usize) -> f64 {
        self.f_start + i as f64 * self.f_step
    }
}

/// Map a de-chirped capture to frequency-response samples.
///
/// The residual video phase exp(-j pi k tau^2) is corrected using the
/// coarse single-band range estimate of the strongest return inside
/// `scene_window` (meters). Samples ahead of the window's round-trip delay
/// (where the echo has not yet arrived) and the filter-edge samples are
/// trimmed; callers fusing two bands must pass the same window so both
/// grids stay aligned.
pub fn to_frequency_samples(
    d: &DechirpedSubband,
    scene_window: (f64, f64),
    propagation_speed: f64,
) -> Result<BandSamples> {
    let (w_lo, w_hi) = scene_window;
    if !(0.0 <= w_lo && w_lo < w_hi) {
        return Err(DspError::InvalidParameter {
            what: "scene_window",
            detail: format!("[{w_lo}, {w_hi}] m"),
        });
    }
    let fs = d.beat.sample_rate();
    let k = d.descriptor.chirp_slope;
    let f_step = k / fs;

    // Deterministic trim from the window: drop samples before the last
    // possible echo arrival plus a guard, and a tail guard.
    let tau_hi = 2.0 * w_hi / propagation_speed;
    let head = libm::ceil(tau_hi * fs) as usize + 2;
    let (v0, v1) = d.beat.valid_range();
    let lo = head.max(v0);
    let hi = v1.min(d.beat.len()).saturating_sub(2);
    if lo >= hi {
        return Err(DspError::EmptyInput("to_frequency_samples (window exceeds capture)"));
    }

    // All-zero capture (zero-reflectivity scene): pass zeros through.
    let power = d.beat.power();
    if power == 0.0 {
        return Ok(BandSamples {
            values: vec![Complex64::new(0.0, 0.0); hi - lo],
            f_start: d.descriptor.start_frequency + k * lo as f64 / fs,
            f_step,
        });
    }

    // RVP anchor: strongest coarse return inside the window.
    let coarse = range_profile(d, WindowKind::Hann, 8, propagation_speed)?;
    let anchor = coarse
        .peaks
        .iter()
        .find(|p| p.range >= w_lo && p.range <= w_hi)
        .ok_or(DspError::NoPeak("to_frequency_samples (no return in scene window)"))?;
    let tau_hat = 2.0 * anchor.range / propagation_speed;
    let rvp = Complex64::from_polar(1.0, -core::f64::consts::PI * k * tau_hat * tau_hat);

    let values: Vec<Complex64> =
        (lo..hi).map(|n| d.beat.samples()[n].conj() * rvp).collect();
    Ok(BandSamples {
        values,
        f_start: d.descriptor.start_frequency + k * lo as f64 / fs,
        f_step,
    })
}

/// Estimated band-2 correction from the cross-band sparse-target fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceCorrection {
    /// Complex gain applied to band 2 relative to the band-1 model.
    pub gain: Complex64,
    /// Linear phase-slope mismatch as an equivalent delay (s).
    pub delay_slope: f64,
}

impl CoherenceCorrection {
    pub fn identity() -> Self {
        Self { gain: Complex64::new(1.0, 0.0), delay_slope: 0.0 }
    }
}

/// Estimate and remove a complex-gain / linear-phase-slope mismatch of
/// band 2 against a sparse-target model fitted to band 1.
///
/// With `coherence_correction` off, band 2 is returned bit-identically
/// (the shared-transceiver case where coherence is guaranteed).
pub fn align_coherence(
    b1: &BandSamples,
    b2: &BandSamples,
    cfg: &FusionConfig,
) -> Result<(BandSamples, CoherenceCorrection)> {
    if !cfg.coherence_correction {
        return Ok((b2.clone(), CoherenceCorrection::identity()));
    }
    check_grids(b1, b2)?;
    let taus = coarse_delays(b1, 8)?;
    if taus.is_empty() {
        return Err(DspError::FitFailed("align_coherence: no coarse returns in band 1"));
    }
    // Complex amplitudes per exponential, least squares on band 1.
    let n = b1.values.len();
    let p = taus.len();
    let mut a = Vec::with_capacity(n * p);
    for i in 0..n {
        let f = b1.frequency_at(i);
        for &tau in &taus {
            let cycles = f * tau;
            let frac = cycles - libm::floor(cycles);
            a.push(Complex64::from_polar(1.0, -2.0 * core::f64::consts::PI * frac));
        }
    }
    let amps = lstsq(&a, n, p, &b1.values, 1e-9)?;

    // Model over band 2's grid.
    let model: Vec<Complex64> = (0..b2.values.len())
        .map(|i| {
            let f = b2.frequency_at(i);
            taus.iter()
                .zip(&amps)
                .map(|(&tau, &c)| {
                    let cycles = f * tau;
                    let frac = cycles - libm::floor(cycles);
                    c * Complex64::from_polar(1.0, -2.0 * core::f64::consts::PI * frac)
                })
                .sum()
        })
        .collect();
    let model_power: f64 = model.iter().map(|m| m.norm_sqr()).sum();
    if model_power < 1e-12 * b2.values.iter().map(|v| v.norm_sqr()).sum::<f64>() {
        return Err(DspError::FitFailed("align_coherence: band-1 model vanishes over band 2"));
    }

    // Slope from the lag-one product of b2 against the model, then gain.
    let ratio: Vec<Complex64> = b2.values.iter().zip(&model).map(|(v, m)| v * m.conj()).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for w in ratio.windows(2) {
        acc += w[1] * w[0].conj();
    }
    let slope_rad_per_bin = acc.arg();
    let delay_slope = slope_rad_per_bin / (2.0 * core::f64::consts::PI * b2.f_step);
    let f_ref = b2.f_start;
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for (i, (v, m)) in b2.values.iter().zip(&model).enumerate() {
        let ramp = Complex64::from_polar(
            1.0,
            slope_rad_per_bin * i as f64 + 2.0 * core::f64::consts::PI * 0.0 * f_ref,
        );
        num += v * (m * ramp).conj();
        den += m.norm_sqr();
    }
    let gain = num / den;
    if !gain.re.is_finite() || !gain.im.is_finite() || gain.norm() < 1e-9 {
        return Err(DspError::FitFailed("align_coherence: degenerate gain"));
    }

    let corrected: Vec<Complex64> = b2
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let ramp = Complex64::from_polar(1.0, -slope_rad_per_bin * i as f64);
            v * ramp / gain
        })
        .collect();
    Ok((
        BandSamples { values: corrected, f_start: b2.f_start, f_step: b2.f_step },
        CoherenceCorrection { gain, delay_slope },
    ))
}

/// Fill the spectrum gap between two aligned sub-bands by forward-backward
/// linear prediction: one all-pole model is fitted to both measured
/// segments, the gap is predicted forward from band 1 and backward from
/// band 2, and the two predictions are blended with a linear cross-fade.
/// Measured bins pass through untouched.
pub fn fill_gap(b1: &BandSamples, b2: &BandSamples, cfg: &FusionConfig) -> Result<FusedSpectrum> {
    check_grids(b1, b2)?;
    let df = b1.f_step;
    let gap_f = (b2.f_start - b1.f_end()) / df;
    let gap = libm::round(gap_f) as isize;
    if gap < 0 || (gap_f - gap as f64).abs() > 1e-6 {
        return Err(DspError::GridMismatch(format!(
            "gap of {gap_f} bins between band edges is not a whole number of bins"
        )));
    }
    let gap = gap as usize;

    let n1 = b1.values.len();
    let n2 = b2.values.len();
    let order_bound = n1.min(n2) / 2;
    let order = match cfg.model_order {
        Some(p) => {
            if p == 0 || p >= order_bound {
                return Err(DspError::ModelOrderGuard { order: p, bound: order_bound });
            }
            p
        }
        None => {
            let peaks = coarse_delays(b1, 8).map(|t| t.len()).unwrap_or(1);
            (peaks + 2).min(order_bound.saturating_sub(1)).max(2)
        }
    };

    let mut values = Vec::with_capacity(n1 + gap + n2);
    let mut provenance = Vec::with_capacity(n1 + gap + n2);
    values.extend_from_slice(&b1.values);
    provenance.extend(core::iter::repeat(Provenance::MeasuredBand1).take(n1));

    if gap > 0 {
        // Spurious model poles off the unit circle blow up over a long
        // extrapolation; retry at decreasing order until the predictions
        // stay bounded by the measured envelope.
        let envelope = b1
            .values
            .iter()
            .chain(b2.values.iter())
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        let bound = 4.0 * envelope;
        let chosen: (Vec<Complex64>, Vec<Complex64>);
        let mut p = order;
        loop {
            let coeffs = fblp_coefficients(&[&b1.values, &b2.values], p)?;
            let forward = predict_forward(&b1.values, &coeffs, gap);
            let backward = predict_backward(&b2.values, &coeffs, gap);
            let peak = forward
                .iter()
                .chain(backward.iter())
                .map(|v| v.norm())
                .fold(0.0, f64::max);
            if peak <= bound || p == 2 {
                chosen = (forward, backward);
                break;
            }
            p -= 1;
        }
        let (forward, backward) = chosen;
        // Linear cross-fade across the gap.
        for g in 0..gap {
            let w = (g + 1) as f64 / (gap + 1) as f64;
            values.push(forward[g] * (1.0 - w) + backward[g] * w);
            provenance.push(Provenance::Interpolated);
        }
    }

    values.extend_from_slice(&b2.values);
    provenance.extend(core::iter::repeat(Provenance::MeasuredBand2).take(n2));

    Ok(FusedSpectrum { values, f_start: b1.f_start, f_step: df, provenance })
}

/// Inverse transform of the fused spectrum: magnitude versus range with
/// resolution c / (2 * total bandwidth).
pub fn fused_range_profile(
    fused: &FusedSpectrum,
    window: WindowKind,
    zero_pad_factor: usize,
    propagation_speed: f64,
) -> Result<RangeProfile> {
    if fused.values.is_empty() {
        return Err(DspError::EmptyInput("fused_range_profile"));
    }
    let n = fused.values.len();
    let w = window.samples(n);
    let n_fft = (n * zero_pad_factor.max(1)).next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); n_fft];
    for (b, (v, wi)) in buf.iter_mut().zip(fused.values.iter().zip(w.iter())) {
        *b = v * wi;
    }
    // H(f) = sum rho exp(-j 2 pi f tau): the inverse transform puts a
    // target at bin tau * (N * df).
    Fft::new(n_fft).inverse(&mut buf);
    let df = fused.f_step;
    let range_step = propagation_speed / (2.0 * df * n_fft as f64);
    let mags: Vec<f64> = buf.iter().map(|b| b.norm()).collect();
    let peak_mag = mags.iter().cloned().fold(f64::MIN_POSITIVE, f64::max);
    let magnitude_db: Vec<f64> =
        mags.iter().map(|m| 20.0 * libm::log10((m / peak_mag).max(1e-300))).collect();
    let mut profile = RangeProfile {
        range_start: 0.0,
        range_step,
        magnitude_db,
        resolution_nominal: propagation_speed / (2.0 * fused.total_bandwidth()),
        peaks: Vec::new(),
    };
    profile.peaks = detect_peaks(&profile, 6.0);
    Ok(profile)
}

fn check_grids(b1: &BandSamples, b2: &BandSamples) -> Result<()> {
    if b1.values.is_empty() || b2.values.is_empty() {
        return Err(DspError::EmptyInput("fusion bands"));
    }
    if (b1.f_step - b2.f_step).abs() > 1e-6 * b1.f_step {
        return Err(DspError::GridMismatch(format!(
            "band spacings differ: {} vs {} Hz",
            b1.f_step, b2.f_step
        )));
    }
    if b2.f_start < b1.f_end() {
        return Err(DspError::GridMismatch(format!(
            "band 2 starts at {} Hz inside band 1 (ends {} Hz)",
            b2.f_start,
            b1.f_end()
        )));
    }
    Ok(())
}

/// Sub-bin delays of the coarse returns in one band, from its own inverse
/// transform.
fn coarse_delays(b: &BandSamples, max_count: usize) -> Result<Vec<f64>> {
    let n = b.values.len();
    let n_fft = (n * 8).next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); n_fft];
    let w = WindowKind::Hann.samples(n);
    for (dst, (v, wi)) in buf.iter_mut().zip(b.values.iter().zip(w.iter())) {
        *dst = v * wi;
    }
    Fft::new(n_fft).inverse(&mut buf);
    let mags: Vec<f64> = buf.iter().map(|v| v.norm()).collect();
    let peak = mags.iter().cloned().fold(0.0, f64::max);
    if peak <= 0.0 {
        return Ok(Vec::new());
    }
    let floor_db = 6.0;
    let mut taus = Vec::new();
    for i in 1..n_fft - 1 {
        if mags[i] >= mags[i - 1]
            && mags[i] > mags[i + 1]
            && mags[i] > peak * libm::pow(10.0, -floor_db / 20.0)
        {
            let delta = quadratic_peak_offset(mags[i - 1], mags[i], mags[i + 1]);
            let tau = (i as f64 + delta) / (n_fft as f64 * b.f_step);
            taus.push(tau);
            if taus.len() >= max_count {
                break;
            }
        }
    }
    Ok(taus)
}

/// Run the AR recursion forward from the tail of `seed`.
fn predict_forward(seed: &[Complex64], coeffs: &[Complex64], count: usize) -> Vec<Complex64> {
    let order = coeffs.len();
    let mut hist: Vec<Complex64> = seed[seed.len() - order..].to_vec();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let next: Complex64 = coeffs
            .iter()
            .enumerate()
            .map(|(p, a)| a * hist[hist.len() - 1 - p])
            .sum();
        out.push(next);
        hist.push(next);
        if hist.len() > 2 * order {
            hist.drain(..order);
        }
    }
    out
}

/// Run the conjugate recursion backward from the head of `seed`:
/// x[n] = sum_p conj(a_p) x[n+p].
fn predict_backward(seed: &[Complex64], coeffs: &[Complex64], count: usize) -> Vec<Complex64> {
    let order = coeffs.len();
    let mut future: Vec<Complex64> = seed[..order].to_vec();
    let mut out = vec![Complex64::new(0.0, 0.0); count];
    for g in (0..count).rev() {
        let next: Complex64 =
            coeffs.iter().enumerate().map(|(p, a)| a.conj() * future[p]).sum();
        out[g] = next;
        future.insert(0, next);
        future.truncate(order);
    }
    out
}

/// Forward-backward linear-prediction coefficients a_1..a_P fitted jointly
/// to the measured segments: x[n] ~ sum_p a_p x[n-p].
fn fblp_coefficients(segments: &[&[Complex64]], order: usize) -> Result<Vec<Complex64>> {
    let mut rows: Vec<Complex64> = Vec::new();
    let mut rhs: Vec<Complex64> = Vec::new();
    let mut m = 0usize;
    for seg in segments {
        if seg.len() <= order {
            continue;
        }
        // Forward rows.
        for n in order..seg.len() {
            for p in 1..=order {
                rows.push(seg[n - p]);
            }
            rhs.push(seg[n]);
            m += 1;
        }
        // Backward rows (conjugate prediction).
        for n in 0..seg.len() - order {
            for p in 1..=order {
                rows.push(seg[n + p].conj());
            }
            rhs.push(seg[n].conj());
            m += 1;
        }
    }
    if m < order {
        return Err(DspError::FitFailed("not enough samples for the requested model order"));
    }
    lstsq(&rows, m, order, &rhs, 1e-12)
}

/// Peaks of a profile restricted to a range window, strongest first.
pub fn peaks_in_window(profile: &RangeProfile, w_lo: f64, w_hi: f64) -> Vec<Peak> {
    profile
        .peaks
        .iter()
        .filter(|p| p.range >= w_lo && p.range <= w_hi)
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::SPEED_OF_LIGHT;

    /// Closed-form band samples of ideal point targets.
    fn synthetic_band(
        f_start: f64,
        f_step: f64,
        bins: usize,
        targets: &[(f64, f64)], // (range m, reflectivity)
    ) -> BandSamples {
        let values = (0..bins)
            .map(|i| {
                let f = f_start + i as f64 * f_step;
                targets
                    .iter()
                    .map(|&(r, rho)| {
                        let tau = 2.0 * r / SPEED_OF_LIGHT;
                        let cycles = f * tau;
                        let frac = cycles - libm::floor(cycles);
                        Complex64::from_polar(rho, -2.0 * core::f64::consts::PI * frac)
                    })
                    .sum()
            })
            .collect();
        BandSamples { values, f_start, f_step }
    }

    /// Paper-scale grid: 2 GHz bands at 54/61 GHz, 1.6 MHz spacing.
    fn paper_bands(targets: &[(f64, f64)]) -> (BandSamples, BandSamples) {
        let df = 1.6e6;
        let bins = 1250;
        (
            synthetic_band(54e9, df, bins, targets),
            synthetic_band(61e9, df, bins, targets),
        )
    }

    #[test]
    fn single_target_gap_fill_matches_closed_form() {
        let targets = [(2.6, 1.0)];
        let (b1, b2) = paper_bands(&targets);
        let fused = fill_gap(&b1, &b2, &FusionConfig::default()).unwrap();
        let truth = synthetic_band(54e9, 1.6e6, fused.values.len(), &targets);
        let mut err = 0.0;
        let mut norm = 0.0;
        for (i, prov) in fused.provenance.iter().enumerate() {
            if *prov == Provenance::Interpolated {
                err += (fused.values[i] - truth.values[i]).norm_sqr();
                norm += truth.values[i].norm_sqr();
            }
        }
        let rel = libm::sqrt(err / norm);
        assert!(rel < 0.05, "gap rms error {rel}");
    }

    #[test]
    fn two_close_targets_gap_fill_within_ten_percent() {
        // Two ideal targets one fused-resolution cell apart (1.67 cm at
        // the 9 GHz synthesized band).
        let targets = [(2.6, 1.0), (2.6 + 0.0167, 1.0)];
        let (b1, b2) = paper_bands(&targets);
        let fused = fill_gap(&b1, &b2, &FusionConfig::default()).unwrap();
        let truth = synthetic_band(54e9, 1.6e6, fused.values.len(), &targets);
        let mut err = 0.0;
        let mut norm = 0.0;
        for (i, prov) in fused.provenance.iter().enumerate() {
            if *prov == Provenance::Interpolated {
                err += (fused.values[i] - truth.values[i]).norm_sqr();
                norm += truth.values[i].norm_sqr();
            }
        }
        let rel = libm::sqrt(err / norm);
        assert!(rel < 0.10, "two-target gap rms error {rel}");
    }

    #[test]
    fn zero_gap_is_pure_concatenation() {
        let targets = [(3.0, 1.0)];
        let df = 1.6e6;
        let b1 = synthetic_band(54e9, df, 1250, &targets);
        let b2 = synthetic_band(54e9 + 1250.0 * df, df, 1250, &targets);
        let fused = fill_gap(&b1, &b2, &FusionConfig::default()).unwrap();
        assert_eq!(fused.values.len(), 2500);
        assert!(fused.provenance.iter().all(|p| *p != Provenance::Interpolated));
        assert_eq!(&fused.values[..1250], b1.values.as_slice());
        assert_eq!(&fused.values[1250..], b2.values.as_slice());
    }

    #[test]
    fn measured_bins_pass_through_untouched() {
        let targets = [(2.6, 1.0), (4.1, 0.5)];
        let (b1, b2) = paper_bands(&targets);
        let fused = fill_gap(&b1, &b2, &FusionConfig::default()).unwrap();
        assert_eq!(&fused.values[..1250], b1.values.as_slice());
        let n = fused.values.len();
        assert_eq!(&fused.values[n - 1250..], b2.values.as_slice());
        assert_eq!(fused.provenance[0], Provenance::MeasuredBand1);
        assert_eq!(fused.provenance[n - 1], Provenance::MeasuredBand2);
        // 1250 measured + 3125 gap + 1250 measured
        assert_eq!(fused.values.len(), 5625);
    }

    #[test]
    fn model_order_guard() {
        let (b1, b2) = paper_bands(&[(2.6, 1.0)]);
        let cfg = FusionConfig { model_order: Some(700), coherence_correction: false };
        assert!(matches!(
            fill_gap(&b1, &b2, &cfg),
            Err(DspError::ModelOrderGuard { .. })
        ));
    }

    #[test]
    fn mismatched_grids_rejected() {
        let b1 = synthetic_band(54e9, 1.6e6, 100, &[(2.6, 1.0)]);
        let mut b2 = synthetic_band(61e9, 1.6e6, 100, &[(2.6, 1.0)]);
        b2.f_step *= 1.01;
        assert!(matches!(fill_gap(&b1, &b2, &FusionConfig::default()), Err(DspError::GridMismatch(_))));
        let b3 = BandSamples { values: b1.values.clone(), f_start: 61e9 + 0.4e6, f_step: 1.6e6 };
        assert!(matches!(fill_gap(&b1, &b3, &FusionConfig::default()), Err(DspError::GridMismatch(_))));
    }

    #[test]
    fn coherence_off_is_bit_identical() {
        let (b1, b2) = paper_bands(&[(2.6, 1.0)]);
        let (out, corr) = align_coherence(&b1, &b2, &FusionConfig::default()).unwrap();
        assert_eq!(out, b2);
        assert_eq!(corr, CoherenceCorrection::identity());
    }

    #[test]
    fn coherence_identity_estimates_unity() {
        let (b1, b2) = paper_bands(&[(2.6, 1.0), (3.4, 0.7)]);
        let cfg = FusionConfig { model_order: None, coherence_correction: true };
        let (out, corr) = align_coherence(&b1, &b2, &cfg).unwrap();
        assert!(
            (corr.gain - Complex64::new(1.0, 0.0)).norm() < 1e-3,
            "gain {:?}",
            corr.gain
        );
        assert!(corr.delay_slope.abs() < 1e-12, "slope {}", corr.delay_slope);
        let max_dev = out
            .values
            .iter()
            .zip(&b2.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(max_dev < 1e-2);
    }

    #[test]
    fn coherence_recovers_injected_phase_offset() {
        let (b1, b2) = paper_bands(&[(2.6, 1.0)]);
        let theta = 0.6;
        let rotated = BandSamples {
            values: b2.values.iter().map(|v| v * Complex64::from_polar(1.0, theta)).collect(),
            ..b2.clone()
        };
        let cfg = FusionConfig { model_order: None, coherence_correction: true };
        let (out, corr) = align_coherence(&b1, &rotated, &cfg).unwrap();
        assert!(
            (corr.gain.arg() - theta).abs() < 1e-3,
            "recovered phase {} vs {theta}",
            corr.gain.arg()
        );
        // Corrected band matches the unrotated original.
        let max_dev = out
            .values
            .iter()
            .zip(&b2.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(max_dev < 1e-2, "residual after correction {max_dev}");
    }

    #[test]
    fn fused_resolution_law() {
        // 9 GHz synthesized band: nominal resolution c / (2 * 9e9).
        let (b1, b2) = paper_bands(&[(2.6, 1.0)]);
        let fused = fill_gap(&b1, &b2, &FusionConfig::default()).unwrap();
        let p = fused_range_profile(&fused, WindowKind::Rectangular, 8, SPEED_OF_LIGHT).unwrap();
        let expected = SPEED_OF_LIGHT / (2.0 * fused.total_bandwidth());
        assert!((p.resolution_nominal - expected).abs() < 1e-6 * expected);
        assert!((fused.total_bandwidth() - 9e9).abs() < 2e6);
        // Single target lands where it should.
        let top = p.peaks.first().unwrap();
        assert!((top.range - 2.6).abs() < 0.5 * p.resolution_nominal);
    }

    #[test]
    fn fused_profile_resolves_what_single_band_cannot() {
        // Spacing of one fused cell near quadrature of the fused center
        // frequency, far below the single-band cell.
        let c = SPEED_OF_LIGHT;
        let f_center = 58.5e9;
        let cell = c / (2.0 * 9e9);
        let cycles = 2.0 * f_center * cell / c;
        let dr = (libm::round(cycles - 0.25) + 0.25) * c / (2.0 * f_center);
        let targets = [(2.6, 1.0), (2.6 + dr, 1.0)];
        let (b1, b2) = paper_bands(&targets);

        // Single band: merged.
        let single = {
            let n_fft = (1250 * 8usize).next_power_of_two();
            let mut buf = vec![Complex64::new(0.0, 0.0); n_fft];
            for (dst, v) in buf.iter_mut().zip(b1.values.iter()) {
                *dst = *v;
            }
            Fft::new(n_fft).inverse(&mut buf);
            let mags: Vec<f64> = buf.iter().map(|v| v.norm()).collect();
            let peak = mags.iter().cloned().fold(0.0, f64::max);
            let db: Vec<f64> =
                mags.iter().map(|m| 20.0 * libm::log10((m / peak).max(1e-300))).collect();
            let profile = RangeProfile {
                range_start: 0.0,
                range_step: c / (2.0 * b1.f_step * n_fft as f64),
                magnitude_db: db,
                resolution_nominal: c / (2.0 * 2e9),
                peaks: Vec::new(),
            };
            detect_peaks(&profile, 6.0)
                .into_iter()
                .filter(|p| p.range > 2.0 && p.range < 3.2)
                .count()
        };
        assert_eq!(single, 1, "single band should merge the pair");

        let fused = fill_gap(&b1, &b2, &FusionConfig::default()).unwrap();
        let p = fused_range_profile(&fused, WindowKind::Rectangular, 8, c).unwrap();
        let peaks = peaks_in_window(&p, 2.0, 3.2);
        assert!(peaks.len() >= 2, "fused profile should resolve the pair: {peaks:?}");
        let mut ranges: Vec<f64> = peaks.iter().take(2).map(|p| p.range).collect();
        ranges.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let spacing = ranges[1] - ranges[0];
        assert!(
            (spacing - dr).abs() < 0.35 * cell,
            "fused spacing {spacing} vs true {dr}"
        );
    }
}
