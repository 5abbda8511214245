//! On-axis curvature profile, the window-averaged curvature `F(z)` and its
//! second-order Taylor fit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::fields::{extract_saddle_curvature, CurvatureOptions, FieldSource};
use crate::numerics::fit::{polyfit, CubicSpline};
use crate::numerics::quadrature::adaptive_simpson;

/// Relative tolerance of the `F(z)` quadrature.
pub const F_TOL: f64 = 1e-6;
/// Taylor-fit residuals above this fraction of the quadratic term are flagged.
pub const TAYLOR_POOR_FIT: f64 = 0.05;

/// Uniform grid along the symmetry axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisGrid {
    pub z_min: f64,
    pub z_max: f64,
    pub step: f64,
}

impl AxisGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        ensure_positive("grid step", self.step)?;
        if !(self.z_max > self.z_min) {
            return Err(Error::InvalidInput(format!("empty grid [{}, {}]", self.z_min, self.z_max)));
        }
        let n = ((self.z_max - self.z_min) / self.step + 1e-9).floor() as usize;
        Ok((0..=n).map(|k| self.z_min + k as f64 * self.step).collect())
    }
}

impl Default for AxisGrid {
    /// ±27.5 mm at 0.5 mm: covers heights up to 25 mm plus half a 5 mm body.
    fn default() -> Self {
        Self { z_min: -27.5e-3, z_max: 27.5e-3, step: 0.5e-3 }
    }
}

/// Saddle curvature `B″(z)` on the symmetry axis, splined.
#[derive(Clone, Debug)]
pub struct CurvatureProfile {
    pub z: Vec<f64>,
    pub b_pp: Vec<f64>,
    spline: CubicSpline,
}

impl CurvatureProfile {
    pub fn from_samples(z: Vec<f64>, b_pp: Vec<f64>) -> Result<Self> {
        let spline = CubicSpline::new(&z, &b_pp)?;
        Ok(Self { z, b_pp, spline })
    }

    /// Extracts the curvature at each grid height (in parallel) with a
    /// parabola fit of halfwidth `halfwidth`.
    pub fn build(sources: &[FieldSource], grid: &AxisGrid, halfwidth: f64, time: f64) -> Result<Self> {
        let z = grid.points()?;
        let opts = CurvatureOptions { time, ..Default::default() };
        let b_pp = z
            .par_iter()
            .map(|&zi| extract_saddle_curvature(sources, zi, halfwidth, &opts).map(|f| f.b_pp))
            .collect::<Result<Vec<_>>>()?;
        Self::from_samples(z, b_pp)
    }

    pub fn domain(&self) -> (f64, f64) {
        self.spline.domain()
    }

    pub fn eval(&self, z: f64) -> Result<f64> {
        self.spline.eval(z)
    }

    fn check_window(&self, z: f64, h: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        let eps = 1e-12 * (hi - lo);
        if z - 0.5 * h < lo - eps || z + 0.5 * h > hi + eps {
            return Err(Error::Range(format!(
                "window [{:.4e}, {:.4e}] m outside profile [{lo:.4e}, {hi:.4e}] m",
                z - 0.5 * h,
                z + 0.5 * h
            )));
        }
        Ok(())
    }

    /// `F(z) = ∫_{z−h/2}^{z+h/2} B″(z′)/(2h) dz′`.
    pub fn f_of_z(&self, h: f64, z: f64) -> Result<f64> {
        ensure_positive("h", h)?;
        self.check_window(z, h)?;
        let (lo, hi) = self.domain();
        let a = (z - 0.5 * h).max(lo);
        let b = (z + 0.5 * h).min(hi);
        Ok(adaptive_simpson(|s| self.spline.eval(s), a, b, F_TOL)? / (2.0 * h))
    }

    /// `dF/dz = (B″(z + h/2) − B″(z − h/2))/(2h)`, exact for the spline.
    pub fn f_prime(&self, h: f64, z: f64) -> Result<f64> {
        ensure_positive("h", h)?;
        self.check_window(z, h)?;
        let (lo, hi) = self.domain();
        let up = self.spline.eval((z + 0.5 * h).min(hi))?;
        let down = self.spline.eval((z - 0.5 * h).max(lo))?;
        Ok((up - down) / (2.0 * h))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorFit {
    /// `F` at the symmetry point, T/m².
    pub a0: f64,
    /// Second-derivative coefficient, T/m⁴.
    pub a2: f64,
    /// Halfwidth of the fitted window, m.
    pub fit_window: f64,
    /// RMS residual relative to the quadratic term at the window edge.
    pub residual: f64,
    /// Odd (linear) coefficient relative to the quadratic term at the window edge.
    pub odd_ratio: f64,
    pub poor_fit: bool,
}

/// Least-squares fit of `F(z) ≈ a0 + b z + a2 z²/2` on samples centred on
/// `center`; the odd coefficient measures the asymmetry of the samples.
pub fn taylor_fit_f(z: &[f64], f: &[f64], center: f64) -> Result<TaylorFit> {
    if z.len() < 9 {
        return Err(Error::InvalidInput(format!("need at least 9 samples, got {}", z.len())));
    }
    let fit = polyfit(z, f, 2, center)?;
    let w = z.iter().map(|v| (v - center).abs()).fold(0.0, f64::max);
    let quad = (0.5 * fit.coeffs[2]).abs() * w * w;
    let (residual, odd_ratio) = if quad > 0.0 {
        (fit.rms_residual / quad, fit.coeffs[1].abs() * w / quad)
    } else {
        (if fit.rms_residual == 0.0 { 0.0 } else { f64::INFINITY }, if fit.coeffs[1] == 0.0 { 0.0 } else { f64::INFINITY })
    };
    let poor_fit = residual > TAYLOR_POOR_FIT;
    if poor_fit {
        log::warn!("F(z) is not quadratic on ±{w:.3e} m: residual {:.1}% of the quadratic term", 100.0 * residual);
    }
    Ok(TaylorFit { a0: fit.coeffs[0], a2: 2.0 * fit.coeffs[2], fit_window: w, residual, odd_ratio, poor_fit })
}

/// Samples `F` on `n` points of `[center − w, center + w]` and fits it.
pub fn taylor_fit_profile(profile: &CurvatureProfile, h: f64, center: f64, w: f64, n: usize) -> Result<TaylorFit> {
    ensure_positive("fit window", w)?;
    if n < 2 {
        return Err(Error::InvalidInput("need at least 2 samples".into()));
    }
    let z: Vec<f64> = (0..n).map(|k| center - w + 2.0 * w * k as f64 / (n - 1) as f64).collect();
    let f = z.iter().map(|&zi| profile.f_of_z(h, zi)).collect::<Result<Vec<_>>>()?;
    taylor_fit_f(&z, &f, center)
}

/// `ω_r = √(2B_sat a0/(μ0ρ_m))`, rad/s.
pub fn omega_r(a0: f64, b_sat: f64, rho_m: f64, mu0: f64) -> Result<f64> {
    ensure_positive("rho_m", rho_m)?;
    ensure_positive("b_sat", b_sat)?;
    Ok((2.0 * b_sat * a0.abs() / (mu0 * rho_m)).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxialDrive {
    /// rad/s; zero when there is no harmonic drive.
    pub omega_z: f64,
    /// `a2(l² − h²) > 0`.
    pub harmonic: bool,
}

/// `ω_z = √(B_sat a2 (l² − h²)/(12μ0ρ_m))`, zero and flagged when the
/// radicand is not positive.
pub fn omega_z(a2: f64, l: f64, h: f64, b_sat: f64, rho_m: f64, mu0: f64) -> Result<AxialDrive> {
    ensure_positive("rho_m", rho_m)?;
    ensure_positive("b_sat", b_sat)?;
    ensure_positive("h", h)?;
    if l < h {
        return Err(Error::InvalidInput(format!("need l ≥ h, got l = {l}, h = {h}")));
    }
    let k = b_sat * a2 * (l * l - h * h) / (12.0 * mu0 * rho_m);
    if k > 0.0 {
        Ok(AxialDrive { omega_z: k.sqrt(), harmonic: true })
    } else {
        log::info!("no harmonic z-drive: a2(l² − h²) = {:.3e}", a2 * (l * l - h * h));
        Ok(AxialDrive { omega_z: 0.0, harmonic: false })
    }
}
