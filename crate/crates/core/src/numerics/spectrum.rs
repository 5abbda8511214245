//! Spectral peak finding for uniformly sampled signals.
//!
//! Signals are mean-subtracted, Hann-windowed and zero-padded before the FFT.
//! Candidate peaks are located by log-parabolic interpolation of the discrete
//! spectrum and then refined by golden-section search on the windowed DTFT
//! magnitude, which removes the residual interpolation bias.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::optimize::golden_section_max;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    /// Signed for complex input (negative = clockwise), otherwise non-negative. Hz.
    pub frequency_hz: f64,
    /// Window-normalised amplitude.
    pub amplitude: f64,
}

impl Peak {
    pub fn angular(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.frequency_hz
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PeakOptions {
    /// Peaks below this fraction of the strongest are dropped.
    pub rel_threshold: f64,
    pub max_peaks: usize,
    /// Zero-padding factor applied on top of the next power of two.
    pub padding: usize,
    pub refine: bool,
}

impl Default for PeakOptions {
    fn default() -> Self {
        Self { rel_threshold: 1e-3, max_peaks: 16, padding: 4, refine: true }
    }
}

fn hann(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / (n - 1) as f64).cos())
        .collect()
}

/// Peaks of a real signal sampled every `dt` seconds, strongest first.
pub fn real_peaks(signal: &[f64], dt: f64, opts: &PeakOptions) -> Result<Vec<Peak>> {
    let z: Vec<Complex64> = signal.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut peaks = complex_spectrum_peaks(&z, dt, opts, false)?;
    for p in &mut peaks {
        p.frequency_hz = p.frequency_hz.abs();
    }
    Ok(peaks)
}

/// Peaks of a complex signal `x + i y`; positive frequencies are counter-clockwise.
pub fn complex_peaks(re: &[f64], im: &[f64], dt: f64, opts: &PeakOptions) -> Result<Vec<Peak>> {
    if re.len() != im.len() {
        return Err(Error::InvalidInput("component lengths differ".into()));
    }
    let z: Vec<Complex64> = re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect();
    complex_spectrum_peaks(&z, dt, opts, true)
}

fn complex_spectrum_peaks(
    z: &[Complex64],
    dt: f64,
    opts: &PeakOptions,
    two_sided: bool,
) -> Result<Vec<Peak>> {
    let n = z.len();
    if n < 16 {
        return Err(Error::InvalidInput(format!("need at least 16 samples, got {n}")));
    }
    crate::error::ensure_positive("sample interval", dt)?;
    let mean = z.iter().sum::<Complex64>() / n as f64;
    let w = hann(n);
    let wsum: f64 = w.iter().sum();
    let data: Vec<Complex64> = z.iter().zip(&w).map(|(v, wi)| (v - mean) * *wi).collect();

    let nfft = n.next_power_of_two() * opts.padding.max(1);
    let mut buf = vec![Complex64::new(0.0, 0.0); nfft];
    buf[..n].copy_from_slice(&data);
    FftPlanner::new().plan_fft_forward(nfft).process(&mut buf);
    let mag: Vec<f64> = buf.iter().map(|c| c.norm() / wsum).collect();

    let max = mag.iter().cloned().fold(0.0, f64::max);
    let signal_scale = z.iter().map(|v| (v - mean).norm()).fold(0.0, f64::max);
    if !(max > 0.0) || max <= 1e-12 * signal_scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NoOscillation);
    }

    // Bins to examine: for real input only the non-negative half.
    let bins: Vec<usize> = if two_sided { (0..nfft).collect() } else { (0..=nfft / 2).collect() };
    let df = 1.0 / (nfft as f64 * dt);
    let mut peaks = Vec::new();
    for &k in &bins {
        let l = mag[(k + nfft - 1) % nfft];
        let c = mag[k];
        let r = mag[(k + 1) % nfft];
        if c < opts.rel_threshold * max || c < l || c <= r {
            continue;
        }
        // Skip the DC bin, which only carries window leakage after mean removal.
        if k == 0 {
            continue;
        }
        let (la, ca, ra) = (l.max(1e-300).ln(), c.ln(), r.max(1e-300).ln());
        let denom = la - 2.0 * ca + ra;
        let delta = if denom.abs() > 0.0 { 0.5 * (la - ra) / denom } else { 0.0 };
        let kk = k as f64 + delta.clamp(-0.5, 0.5);
        let signed_bin = if two_sided && kk > nfft as f64 / 2.0 { kk - nfft as f64 } else { kk };
        peaks.push(Peak { frequency_hz: signed_bin * df, amplitude: c });
    }
    peaks.sort_by(|a, b| b.amplitude.total_cmp(&a.amplitude));
    peaks.truncate(opts.max_peaks);
    if opts.refine {
        for p in &mut peaks {
            let f0 = p.frequency_hz;
            let (f, a) = golden_section_max(
                |f| dtft_magnitude(&data, dt, f) / wsum,
                f0 - df,
                f0 + df,
                1e-7 * df,
            );
            p.frequency_hz = f;
            p.amplitude = a;
        }
        peaks.sort_by(|a, b| b.amplitude.total_cmp(&a.amplitude));
    }
    Ok(peaks)
}

fn dtft_magnitude(data: &[Complex64], dt: f64, f: f64) -> f64 {
    // Rotating phasor recurrence; exact enough for the lengths used here.
    let step = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * f * dt);
    let mut phase = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, v) in data.iter().enumerate() {
        if i % 1024 == 0 {
            phase = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * f * dt * i as f64);
        }
        acc += v * phase;
        phase *= step;
    }
    acc.norm()
}
