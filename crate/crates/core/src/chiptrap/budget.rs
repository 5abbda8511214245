//! Closed-form design budgets of the double-loop chip trap.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::fields::{field_value, CircularLoop, FieldSource};
use crate::model::PhysicalConstants;

/// Largest current density a gold micro-wire carries without excessive
/// heating, A/cm² (inclusive).
pub const MAX_CURRENT_DENSITY: f64 = 1e5;
/// Rounded value sometimes quoted for the compensation gradient, T/m.
pub const B2_PRIME_ROUNDED: f64 = 8.0e-2;
/// Closed-form and numerical curvatures must agree to this fraction.
pub const CURVATURE_AGREEMENT: f64 = 5e-3;
/// Currents satisfy `i1/i2 = −r1/r2` to this relative tolerance.
pub const NULL_RATIO_TOL: f64 = 1e-6;

/// `i1/i2 = −r1/r2`: the two loop fields cancel at the centre.
pub fn null_ratio_holds(r1: f64, r2: f64, i1: f64, i2: f64) -> bool {
    i2 != 0.0 && ((i1 / i2) + r1 / r2).abs() <= NULL_RATIO_TOL * (r1 / r2)
}

/// `−(9/16)μ0 i1/r1³`.
pub fn double_loop_closed_form(i1: f64, r1: f64, mu0: f64) -> f64 {
    -9.0 / 16.0 * mu0 * i1 / r1.powi(3)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoubleLoopCurvature {
    /// `−(9/16)μ0 i1/r1³`, T/m².
    pub closed_form: f64,
    /// `∂²B_z/∂z²` of the two coplanar loops at their centre, T/m².
    pub numeric: f64,
    /// `numeric/closed_form`.
    pub ratio: f64,
    /// The two agree within `CURVATURE_AGREEMENT`.
    pub agrees: bool,
    pub null_ratio: bool,
    /// `|B_z|` at the centre, T.
    pub center_field: f64,
}

fn loops(r1: f64, r2: f64, i1: f64, i2: f64) -> [FieldSource; 2] {
    [
        FieldSource::CircularLoop(CircularLoop::new(r1, Vector3::zeros(), i1)),
        FieldSource::CircularLoop(CircularLoop::new(r2, Vector3::zeros(), i2)),
    ]
}

/// Curvature of two coplanar concentric loops in the plane z = 0.
pub fn double_loop_curvature(r1: f64, r2: f64, i1: f64, i2: f64, mu0: f64) -> Result<DoubleLoopCurvature> {
    ensure_positive("r1", r1)?;
    if !(r2 > r1) {
        return Err(Error::InvalidGeometry(format!("need r2 > r1, got r1 = {r1}, r2 = {r2}")));
    }
    let src = loops(r1, r2, i1, i2);
    let bz = |z: f64| field_value(&Vector3::new(0.0, 0.0, z), 0.0, &src).map(|b| b.z);
    let d = 0.005 * r1;
    let numeric = (-bz(2.0 * d)? + 16.0 * bz(d)? - 30.0 * bz(0.0)? + 16.0 * bz(-d)? - bz(-2.0 * d)?) / (12.0 * d * d);
    let null_ratio = null_ratio_holds(r1, r2, i1, i2);
    let closed_form = double_loop_closed_form(i1, r1, mu0);
    if !null_ratio {
        log::warn!("currents violate i1/i2 = −r1/r2; the closed-form curvature does not apply");
    }
    let ratio = numeric / closed_form;
    Ok(DoubleLoopCurvature {
        closed_form,
        numeric,
        ratio,
        agrees: (ratio - 1.0).abs() <= CURVATURE_AGREEMENT,
        null_ratio,
        center_field: bz(0.0)?.abs(),
    })
}

/// `B2′ = μ0ρ_m g/B_sat`, independent of the body size.
pub fn gravity_compensation(c: &PhysicalConstants) -> Result<f64> {
    c.validate()?;
    Ok(c.mu0 * c.rho_m * c.g / c.b_sat)
}

/// Mean offset `−g/ω̃_z²` of an uncompensated trap.
pub fn gravity_sag(secular_z: f64, g: f64) -> Result<f64> {
    if secular_z == 0.0 {
        return Err(Error::DivisionByZero("axial secular frequency"));
    }
    Ok(-g / (secular_z * secular_z))
}

/// Coupling between libration and centre-of-mass modes is negligible when
/// the coupling stiffness is an order of magnitude below the geometric mean
/// of the coupled mode stiffnesses, `10 ω_c² < ω̃_x ω_β̃` (strict).
pub fn coupling_check(secular_x: f64, omega_beta_tilde: f64, omega_c: f64) -> bool {
    10.0 * omega_c * omega_c < secular_x * omega_beta_tilde
}

/// Amplitude `μ0σSΩ/4` of the current induced in one loop by the other,
/// relative to the driven current.
pub fn induced_current_ratio(sigma: f64, slice_area: f64, omega: f64, mu0: f64) -> f64 {
    mu0 * sigma * slice_area * omega / 4.0
}

/// Eddy-current heating `Ω²σa⁹B1″²` of a levitated sphere of radius `a`.
pub fn eddy_heating_power(omega: f64, sigma: f64, radius: f64, b1_pp: f64) -> f64 {
    omega * omega * sigma * radius.powi(9) * b1_pp * b1_pp
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurrentDensity {
    /// A/cm².
    pub j: f64,
    pub feasible: bool,
}

pub fn current_density_check(current: f64, width: f64, thickness: f64) -> Result<CurrentDensity> {
    ensure_positive("wire width", width)?;
    ensure_positive("wire thickness", thickness)?;
    let j = current.abs() / (width * thickness) * 1e-4;
    // Tolerate rounding at the inclusive bound.
    Ok(CurrentDensity { j, feasible: j <= MAX_CURRENT_DENSITY * (1.0 + 1e-12) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MU0;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn closed_form_value_and_linearity() {
        let c = double_loop_curvature(100e-6, 200e-6, 0.1, -0.2, MU0).unwrap();
        assert!((c.closed_form.abs() - 7.07e4).abs() < 0.01e4, "{}", c.closed_form);
        assert!(c.null_ratio);
        let d = double_loop_curvature(100e-6, 200e-6, 0.2, -0.4, MU0).unwrap();
        assert_relative_eq!(d.closed_form, 2.0 * c.closed_form, max_relative = 1e-14);
        assert_relative_eq!(d.numeric, 2.0 * c.numeric, max_relative = 1e-9);
    }

    #[test]
    fn numeric_curvature_matches_on_axis_formula() {
        // On-axis loop field μ0 i r²/(2(r²+z²)^{3/2}) has ∂²B_z/∂z² = −3μ0 i/(2r³) at z = 0.
        let c = double_loop_curvature(100e-6, 200e-6, 0.1, -0.2, MU0).unwrap();
        let expect = -1.5 * MU0 * (0.1 / 1e-12 - 0.2 / 8e-12);
        assert_relative_eq!(c.numeric, expect, max_relative = 1e-7);
        assert_relative_eq!(c.ratio, 2.0, max_relative = 1e-7);
        assert!(!c.agrees);
    }

    #[test]
    fn null_ratio_cancels_center_field() {
        let c = double_loop_curvature(100e-6, 200e-6, 0.1, -0.2, MU0).unwrap();
        let single = MU0 * 0.1 / (2.0 * 100e-6);
        assert!(c.center_field < 1e-9 * single);
        let off = double_loop_curvature(100e-6, 200e-6, 0.1, -0.15, MU0).unwrap();
        assert!(!off.null_ratio && off.center_field > 0.1 * single);
    }

    #[test]
    fn geometry_errors() {
        assert!(matches!(double_loop_curvature(1e-4, 1e-4, 0.1, -0.1, MU0), Err(Error::InvalidGeometry(_))));
        assert!(matches!(double_loop_curvature(2e-4, 1e-4, 0.1, -0.1, MU0), Err(Error::InvalidGeometry(_))));
    }

    #[test]
    fn compensation_gradient() {
        let c = PhysicalConstants::default();
        let b = gravity_compensation(&c).unwrap();
        assert!((b - 8.6e-2).abs() < 0.05e-2, "{b}");
        assert!((b - B2_PRIME_ROUNDED).abs() / b > 0.05);
        let c2 = PhysicalConstants { b_sat: 2.0, ..c };
        assert_relative_eq!(gravity_compensation(&c2).unwrap(), 0.5 * b, max_relative = 1e-14);
    }

    #[test]
    fn sag_values() {
        let w = 2.0 * PI * 100.0;
        let z0 = gravity_sag(w, 9.8).unwrap();
        assert!((z0 + 2.48e-5).abs() < 0.01e-5, "{z0}");
        assert_relative_eq!(gravity_sag(2.0 * w, 9.8).unwrap(), z0 / 4.0, max_relative = 1e-14);
        assert!(matches!(gravity_sag(0.0, 9.8), Err(Error::DivisionByZero(_))));
    }

    #[test]
    fn coupling_examples() {
        let tp = 2.0 * PI;
        assert!(coupling_check(tp * 35.0, tp * 2.7e5, tp * 6.3e2));
        // No coupling at all is trivially negligible.
        assert!(coupling_check(tp * 35.0, tp * 2.7e5, 0.0));
        assert!(!coupling_check(tp * 35.0, tp * 2.7e5, tp * 1.0e3));
        assert!(!coupling_check(10.0, 1.0, 1.0));
    }

    #[test]
    fn induced_and_eddy() {
        let r = induced_current_ratio(4.4e7, 100e-12, 2.0 * PI * 2000.0, MU0);
        assert!((r - 1.737e-5).abs() < 0.001e-5, "{r}");
        assert_eq!(induced_current_ratio(4.4e7, 0.0, 1.0, MU0), 0.0);
        assert_relative_eq!(
            induced_current_ratio(4.4e7, 1e-10, 20.0, MU0),
            10.0 * induced_current_ratio(4.4e7, 1e-10, 2.0, MU0),
            max_relative = 1e-14
        );
        let p = eddy_heating_power(2.0 * PI * 2000.0, 4.4e7, 1e-6, 1e5);
        assert!((p - 6.95e-29).abs() < 0.01e-29, "{p}");
        assert_relative_eq!(eddy_heating_power(2.0 * PI * 2000.0, 4.4e7, 0.5e-6, 1e5), p / 512.0, max_relative = 1e-12);
        assert_eq!(eddy_heating_power(1.0, 1.0, 1.0, 0.0), 0.0);
    }

    #[test]
    fn current_density_bounds() {
        let j = current_density_check(0.1, 50e-6, 2e-6).unwrap();
        assert_relative_eq!(j.j, 1e5, max_relative = 1e-12);
        assert!(j.feasible);
        assert!(!current_density_check(0.2, 50e-6, 2e-6).unwrap().feasible);
        let z = current_density_check(0.0, 50e-6, 2e-6).unwrap();
        assert!(z.j == 0.0 && z.feasible);
        assert!(current_density_check(0.1, 0.0, 2e-6).is_err());
    }
}
