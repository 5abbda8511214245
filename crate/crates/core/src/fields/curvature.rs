//! Saddle-curvature extraction by least-squares parabola fits.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::{field_value, FieldSource};
use crate::error::{Error, Result};
use crate::numerics::fit::polyfit;

/// Fit residuals above this fraction of the quadratic term are flagged.
pub const POOR_FIT_THRESHOLD: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FitAxis {
    X,
    #[default]
    Y,
    Z,
}

impl FitAxis {
    fn unit(self) -> Vector3<f64> {
        match self {
            FitAxis::X => Vector3::x(),
            FitAxis::Y => Vector3::y(),
            FitAxis::Z => Vector3::z(),
        }
    }

    /// With `B_z ≈ ½B″(x² − y²)` the y-parabola has the opposite sign.
    fn sign(self) -> f64 {
        match self {
            FitAxis::Y => -1.0,
            _ => 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CurvatureOptions {
    pub axis: FitAxis,
    pub n_points: usize,
    /// Transverse offset of the fit line; its component along `axis` is ignored.
    pub center_xy: (f64, f64),
    pub time: f64,
}

impl Default for CurvatureOptions {
    fn default() -> Self {
        Self { axis: FitAxis::Y, n_points: 21, center_xy: (0.0, 0.0), time: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureFit {
    /// Saddle curvature B″, T/m².
    pub b_pp: f64,
    /// RMS residual divided by the quadratic term's size at the window edge.
    pub relative_residual: f64,
    pub poor_fit: bool,
}

/// Default fit halfwidth: a tenth of the magnet pair separation.
pub fn default_halfwidth(pair_separation: f64) -> f64 {
    0.1 * pair_separation
}

/// Curvature of `B_z` along a line through `(x0, y0, z)`.
pub fn extract_saddle_curvature(
    sources: &[FieldSource],
    z: f64,
    halfwidth: f64,
    opts: &CurvatureOptions,
) -> Result<CurvatureFit> {
    if opts.n_points < 9 {
        return Err(Error::InvalidInput(format!("need at least 9 fit points, got {}", opts.n_points)));
    }
    crate::error::ensure_positive("fit halfwidth", halfwidth)?;
    let center = Vector3::new(opts.center_xy.0, opts.center_xy.1, z);
    let dir = opts.axis.unit();
    let n = opts.n_points;
    let mut s = Vec::with_capacity(n);
    let mut bz = Vec::with_capacity(n);
    for i in 0..n {
        let si = -halfwidth + 2.0 * halfwidth * i as f64 / (n - 1) as f64;
        let p = center + si * dir;
        s.push(si);
        bz.push(field_value(&p, opts.time, sources)?.z);
    }
    let fit = polyfit(&s, &bz, 2, 0.0)?;
    let quad = fit.coeffs[2].abs() * halfwidth * halfwidth;
    let relative_residual = if quad > 0.0 {
        fit.rms_residual / quad
    } else if fit.rms_residual == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    let poor_fit = relative_residual > POOR_FIT_THRESHOLD;
    if poor_fit {
        log::warn!("poor parabola fit at z = {z:e}: residual {relative_residual:.3} of quadratic term");
    }
    Ok(CurvatureFit { b_pp: opts.axis.sign() * 2.0 * fit.coeffs[2], relative_residual, poor_fit })
}
