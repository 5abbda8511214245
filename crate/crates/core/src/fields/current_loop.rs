//! Thin circular current loop.
//!
//! Off axis the field follows from complete elliptic integrals; within
//! `ρ < 1e-3·√(a²+z²)` of the axis the elliptic form loses precision and a
//! Taylor expansion of the on-axis field is used instead.

use nalgebra::{UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::MU0;
use crate::numerics::elliptic::ellip_ke;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Drive {
    /// Drive angular frequency, rad/s.
    pub omega: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircularLoop {
    pub radius: f64,
    #[serde(default)]
    pub center: Vector3<f64>,
    #[serde(default = "Vector3::z")]
    pub normal: Vector3<f64>,
    /// Current amplitude, A.
    pub current: f64,
    #[serde(default)]
    pub drive: Option<Drive>,
}

impl CircularLoop {
    pub fn new(radius: f64, center: Vector3<f64>, current: f64) -> Self {
        Self { radius, center, normal: Vector3::z(), current, drive: None }
    }

    pub fn driven(mut self, omega: f64, phase: f64) -> Self {
        self.drive = Some(Drive { omega, phase });
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::InvalidGeometry(format!("loop radius must be positive, got {}", self.radius)));
        }
        if !(self.normal.norm() > 0.0) || !self.current.is_finite() {
            return Err(Error::InvalidGeometry("loop normal must be non-zero and current finite".into()));
        }
        if let Some(d) = self.drive {
            if !(d.omega >= 0.0) {
                return Err(Error::InvalidInput("drive frequency must be non-negative".into()));
            }
        }
        Ok(())
    }

    fn frame(&self) -> UnitQuaternion<f64> {
        let n = self.normal.normalize();
        UnitQuaternion::rotation_between(&Vector3::z(), &n)
            .unwrap_or_else(|| UnitQuaternion::from_axis_angle(&Vector3::x_axis(), std::f64::consts::PI))
    }

    /// Drive modulation factor `cos(Ωt + φ)`, or 1 for a static loop.
    pub fn modulation(&self, t: f64) -> f64 {
        self.drive.map_or(1.0, |d| (d.omega * t + d.phase).cos())
    }

    /// Field at a lab point and time; `None` on the wire itself.
    pub fn field(&self, p: &Vector3<f64>, t: f64) -> Option<Vector3<f64>> {
        let frame = self.frame();
        let local = frame.inverse() * (p - self.center);
        let rho = local.x.hypot(local.y);
        let (b_rho, b_z) = loop_field_cylindrical(self.radius, self.current, rho, local.z)?;
        let b_local = if rho > 0.0 {
            Vector3::new(b_rho * local.x / rho, b_rho * local.y / rho, b_z)
        } else {
            Vector3::new(0.0, 0.0, b_z)
        };
        Some(frame * b_local * self.modulation(t))
    }
}

/// `(B_ρ, B_z)` of a loop of radius `a` in the plane `z = 0` centred on the axis.
pub fn loop_field_cylindrical(a: f64, current: f64, rho: f64, z: f64) -> Option<(f64, f64)> {
    let u = a * a + z * z;
    if rho < 1e-3 * u.sqrt() {
        // f = u^{-3/2} and its z-derivatives; B0 = μ0 I a² f / 2.
        let c = 0.5 * MU0 * current * a * a;
        let f = u.powf(-1.5);
        let f1 = -3.0 * z * u.powf(-2.5);
        let f2 = 3.0 * (4.0 * z * z - a * a) * u.powf(-3.5);
        let f3 = 15.0 * z * (3.0 * a * a - 4.0 * z * z) * u.powf(-4.5);
        let b_rho = c * (-0.5 * rho * f1 + rho.powi(3) / 16.0 * f3);
        let b_z = c * (f - 0.25 * rho * rho * f2);
        return Some((b_rho, b_z));
    }
    let r2 = a * a + rho * rho + z * z;
    let alpha2 = r2 - 2.0 * a * rho;
    if alpha2 <= (1e-12 * a).powi(2) {
        return None;
    }
    let beta2 = r2 + 2.0 * a * rho;
    let beta = beta2.sqrt();
    let m = 1.0 - alpha2 / beta2;
    let (k, e) = ellip_ke(m);
    let c = MU0 * current / std::f64::consts::PI;
    let b_rho = c * z / (2.0 * alpha2 * beta * rho) * (r2 * e - alpha2 * k);
    let b_z = c / (2.0 * alpha2 * beta) * ((a * a - rho * rho - z * z) * e + alpha2 * k);
    Some((b_rho, b_z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::adaptive_simpson;
    use approx::assert_relative_eq;

    /// Biot–Savart line integral around the loop, component by component.
    fn biot_savart(a: f64, current: f64, p: Vector3<f64>) -> Vector3<f64> {
        let integrand = |phi: f64, k: usize| {
            let src = Vector3::new(a * phi.cos(), a * phi.sin(), 0.0);
            let dl = Vector3::new(-a * phi.sin(), a * phi.cos(), 0.0);
            let r = p - src;
            dl.cross(&r)[k] / r.norm().powi(3)
        };
        let mut b = Vector3::zeros();
        for k in 0..3 {
            // Split the circle so the adaptive rule sees the near-wire peak at φ=0.
            let halves = [(-std::f64::consts::PI, 0.0), (0.0, std::f64::consts::PI)];
            b[k] = halves
                .iter()
                .map(|&(lo, hi)| adaptive_simpson(|phi| Ok(integrand(phi, k)), lo, hi, 1e-13).unwrap())
                .sum::<f64>();
        }
        b * MU0 * current / (4.0 * std::f64::consts::PI)
    }

    #[test]
    fn centre_field() {
        let l = CircularLoop::new(1.0, Vector3::zeros(), 1.0);
        let b = l.field(&Vector3::zeros(), 0.0).unwrap();
        assert_relative_eq!(b.z, MU0 / 2.0, max_relative = 1e-15);
        assert_relative_eq!(b.z, 6.283e-7, max_relative = 1e-3);
    }

    #[test]
    fn on_axis_one_radius_up() {
        let l = CircularLoop::new(0.3, Vector3::zeros(), 2.0);
        let b = l.field(&Vector3::new(0.0, 0.0, 0.3), 0.0).unwrap();
        assert_relative_eq!(b.z, MU0 * 2.0 / (2.0 * 0.3) * 2f64.powf(-1.5), max_relative = 1e-14);
    }

    #[test]
    fn off_axis_matches_biot_savart() {
        let a = 1.0;
        let pts = [
            Vector3::new(0.5, 0.0, 0.2),
            Vector3::new(0.3, 0.4, -0.7),
            Vector3::new(1.2, -0.9, 0.05),
            Vector3::new(2.5, 0.0, 1.5),
            Vector3::new(0.0, 0.02, 0.1),
            Vector3::new(0.9, 0.0, 0.1),
        ];
        for p in pts {
            let got = CircularLoop::new(a, Vector3::zeros(), 1.0).field(&p, 0.0).unwrap();
            let want = biot_savart(a, 1.0, p);
            assert!((got - want).norm() <= 1e-8 * want.norm(), "{p:?}: {got:?} vs {want:?}");
        }
    }

    #[test]
    fn series_and_elliptic_agree_at_switch() {
        let (a, z): (f64, f64) = (1.0, 0.4);
        let rho_switch = 1e-3 * (a * a + z * z).sqrt();
        let below = loop_field_cylindrical(a, 1.0, rho_switch * (1.0 - 1e-9), z).unwrap();
        let above = loop_field_cylindrical(a, 1.0, rho_switch * (1.0 + 1e-9), z).unwrap();
        assert_relative_eq!(below.0, above.0, max_relative = 1e-8);
        assert_relative_eq!(below.1, above.1, max_relative = 1e-12);
    }

    #[test]
    fn wire_is_singular() {
        let l = CircularLoop::new(1.0, Vector3::zeros(), 1.0);
        assert!(l.field(&Vector3::new(0.0, 1.0, 0.0), 0.0).is_none());
    }

    #[test]
    fn tilted_and_driven_loop() {
        let normal = Vector3::new(1.0, 0.0, 0.0);
        let l = CircularLoop { normal, ..CircularLoop::new(0.5, Vector3::new(0.1, 0.0, 0.0), 1.0) }.driven(10.0, 0.3);
        let t = 0.2;
        let b = l.field(&Vector3::new(0.6, 0.0, 0.0), t).unwrap();
        let on_axis = MU0 * 0.25 / (2.0 * (0.25f64 + 0.25).powf(1.5));
        assert_relative_eq!(b.x, on_axis * (10.0 * t + 0.3).cos(), max_relative = 1e-12);
        assert!(b.y.abs() < 1e-20 && b.z.abs() < 1e-20);
    }
}
