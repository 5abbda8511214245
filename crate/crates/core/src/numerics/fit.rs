//! Least-squares polynomial fits and natural cubic splines.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct PolyFit {
    /// Coefficients in increasing power of `(x - center)`.
    pub coeffs: Vec<f64>,
    pub center: f64,
    /// Root-mean-square residual.
    pub rms_residual: f64,
}

impl PolyFit {
    pub fn eval(&self, x: f64) -> f64 {
        let s = x - self.center;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c)
    }
}

/// Fits a polynomial of `degree` in `(x - center)` by QR least squares.
pub fn polyfit(x: &[f64], y: &[f64], degree: usize, center: f64) -> Result<PolyFit> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput("x and y lengths differ".into()));
    }
    if x.len() <= degree {
        return Err(Error::InvalidInput(format!(
            "{} points cannot determine a degree-{degree} fit",
            x.len()
        )));
    }
    // Scale the abscissa to [-1, 1] for conditioning.
    let scale = x.iter().map(|v| (v - center).abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::InvalidInput("all abscissae coincide".into()));
    }
    let n = x.len();
    let a = DMatrix::from_fn(n, degree + 1, |i, j| ((x[i] - center) / scale).powi(j as i32));
    let b = DVector::from_column_slice(y);
    let svd = a.clone().svd(true, true);
    let c = svd
        .solve(&b, 1e-14)
        .map_err(|e| Error::InvalidInput(format!("least-squares solve failed: {e}")))?;
    let resid = &a * &c - &b;
    let rms = (resid.norm_squared() / n as f64).sqrt();
    let coeffs = c.iter().enumerate().map(|(j, v)| v / scale.powi(j as i32)).collect();
    Ok(PolyFit { coeffs, center, rms_residual: rms })
}

/// Natural cubic spline through strictly increasing knots.
#[derive(Clone, Debug)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        let n = x.len();
        if n != y.len() || n < 3 {
            return Err(Error::InvalidInput("spline needs at least 3 matching points".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("spline knots must be strictly increasing".into()));
        }
        // Tridiagonal system for second derivatives, natural end conditions.
        let mut m = vec![0.0; n];
        let mut c_prime = vec![0.0; n];
        let mut d_prime = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let a = h0;
            let b = 2.0 * (h0 + h1);
            let c = h1;
            let d = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            let denom = b - a * c_prime[i - 1];
            c_prime[i] = c / denom;
            d_prime[i] = (d - a * d_prime[i - 1]) / denom;
        }
        for i in (1..n - 1).rev() {
            m[i] = d_prime[i] - c_prime[i] * m[i + 1];
        }
        Ok(Self { x: x.to_vec(), y: y.to_vec(), m })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    fn segment(&self, t: f64) -> Result<usize> {
        let (lo, hi) = self.domain();
        let tol = 1e-12 * (hi - lo);
        if t < lo - tol || t > hi + tol || !t.is_finite() {
            return Err(Error::Range(format!("{t:e} outside spline domain [{lo:e}, {hi:e}]")));
        }
        let i = self.x.partition_point(|&v| v <= t);
        Ok(i.clamp(1, self.x.len() - 1) - 1)
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let i = self.segment(t)?;
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        Ok(a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0)
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        let i = self.segment(t)?;
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        Ok((self.y[i + 1] - self.y[i]) / h
            - (3.0 * a * a - 1.0) / 6.0 * h * self.m[i]
            + (3.0 * b * b - 1.0) / 6.0 * h * self.m[i + 1])
    }
}
