//! Spectral measurement of oscillation frequencies along a trajectory.

use super::integrate::{Coordinate, Trajectory};
use crate::error::{Error, Result};
use crate::numerics::spectrum::{real_peaks, Peak, PeakOptions};

/// Dominant frequencies of `coordinate`, strongest first.
///
/// The trajectory must be uniformly sampled; a shorter final interval (when
/// the run length is not a multiple of the output interval) is dropped.
pub fn measure_frequencies(traj: &Trajectory, coordinate: Coordinate, opts: &PeakOptions) -> Result<Vec<Peak>> {
    let (n, dt) = uniform_prefix(&traj.times)?;
    let signal: Vec<f64> = (0..n).map(|k| traj.value(k, coordinate)).collect();
    real_peaks(&signal, dt, opts)
}

/// Same as [`measure_frequencies`] for an arbitrary sampled series.
pub fn measure_series(times: &[f64], values: &[f64], opts: &PeakOptions) -> Result<Vec<Peak>> {
    if times.len() != values.len() {
        return Err(Error::InvalidInput("times and values differ in length".into()));
    }
    let (n, dt) = uniform_prefix(times)?;
    real_peaks(&values[..n], dt, opts)
}

fn uniform_prefix(times: &[f64]) -> Result<(usize, f64)> {
    if times.len() < 4 {
        return Err(Error::InvalidInput("at least four samples are needed".into()));
    }
    let dt = times[1] - times[0];
    let tol = 1e-6 * dt;
    let mut n = times.len();
    if ((times[n - 1] - times[n - 2]) - dt).abs() > tol {
        n -= 1;
    }
    for k in 1..n {
        if ((times[k] - times[k - 1]) - dt).abs() > tol {
            return Err(Error::InvalidInput(format!("trajectory is not uniformly sampled at sample {k}")));
        }
    }
    Ok((n, dt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn synthetic_cosine() {
        let dt = 1e-3;
        let t: Vec<f64> = (0..10_000).map(|k| k as f64 * dt).collect();
        let v: Vec<f64> = t.iter().map(|t| (2.0 * PI * 7.3 * t).cos()).collect();
        let p = measure_series(&t, &v, &PeakOptions::default()).unwrap();
        assert!((p[0].frequency_hz - 7.3).abs() < 0.05);
        // Resolution better than 1/(2·duration).
        assert!((p[0].frequency_hz - 7.3).abs() < 1.0 / (2.0 * 10.0));
    }

    #[test]
    fn short_tail_is_dropped_but_gaps_are_rejected() {
        let mut t: Vec<f64> = (0..100).map(|k| k as f64 * 0.01).collect();
        t.push(0.995);
        let v: Vec<f64> = t.iter().map(|t| (2.0 * PI * 5.0 * t).sin()).collect();
        assert!(measure_series(&t, &v, &PeakOptions::default()).is_ok());
        t[50] += 0.003;
        assert!(measure_series(&t, &v, &PeakOptions::default()).is_err());
    }

    #[test]
    fn flat_signal_has_no_oscillation() {
        let t: Vec<f64> = (0..256).map(|k| k as f64).collect();
        let v = vec![1.0; 256];
        assert!(matches!(measure_series(&t, &v, &PeakOptions::default()), Err(Error::NoOscillation)));
    }
}
