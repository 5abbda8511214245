//! Closed-form secular frequencies and drive parameters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Validity bound of the harmonic secular approximation.
pub const Q_VALIDITY: f64 = 0.4;
/// Validity bound of the small-`ω_r/Ω` saddle expansion.
pub const SADDLE_RATIO_VALIDITY: f64 = 0.3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QParameters {
    pub q_x: f64,
    pub q_y: f64,
    pub q_z: f64,
    /// `|q_z|` within the harmonic-secular validity bound.
    pub valid: bool,
}

/// `q = 2k/Ω²` for an equation `z̈ = k cos(Ωt) z`.
pub fn q_from_coefficient(k: f64, omega: f64) -> f64 {
    2.0 * k / (omega * omega)
}

/// `q_z = 2B1″B_sat/(μ0ρ_mΩ²)`, `q_x = q_y = −q_z/2`.
pub fn q_parameters(b1_pp: f64, b_sat: f64, rho_m: f64, mu0: f64, omega: f64) -> Result<QParameters> {
    if !(omega > 0.0) {
        return Err(Error::DivisionByZero("drive frequency"));
    }
    let q_z = q_from_coefficient(b1_pp * b_sat / (mu0 * rho_m), omega);
    let valid = q_z.abs() <= Q_VALIDITY;
    if !valid {
        log::warn!("|q_z| = {:.3} exceeds {Q_VALIDITY}; harmonic secular frequencies are unreliable", q_z.abs());
    }
    Ok(QParameters { q_x: -0.5 * q_z, q_y: -0.5 * q_z, q_z, valid })
}

/// Lowest-order secular frequency of the `a = 0` Mathieu equation, `(Ω/2)|q|/√2`.
pub fn mathieu_secular_z(q_z: f64, omega: f64) -> f64 {
    0.5 * omega * q_z.abs() / std::f64::consts::SQRT_2
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChipSecular {
    pub omega_gamma: f64,
    pub omega_beta_tilde: f64,
    pub secular_x: f64,
    pub secular_y: f64,
    pub secular_z: f64,
}

/// Libration and secular frequencies of a spherical magnet in the chip trap:
/// `ω_γ = ω_β̃ = √(5B0B_sat/(2μ0ρ_m a²))`, `ω̃_z = 2ω̃_x = 2ω̃_y = (Ω/2)|q_z|/√2`.
pub fn chip_secular_frequencies(
    b0: f64,
    radius: f64,
    rho_m: f64,
    b_sat: f64,
    mu0: f64,
    q_z: f64,
    omega: f64,
) -> Result<ChipSecular> {
    crate::error::ensure_positive("radius", radius)?;
    if q_z.abs() > Q_VALIDITY {
        log::warn!("|q_z| = {:.3} exceeds {Q_VALIDITY}", q_z.abs());
    }
    let lib = (2.5 * b0.abs() * b_sat / (mu0 * rho_m * radius * radius)).sqrt();
    let wz = mathieu_secular_z(q_z, omega);
    Ok(ChipSecular { omega_gamma: lib, omega_beta_tilde: lib, secular_x: 0.5 * wz, secular_y: 0.5 * wz, secular_z: wz })
}

/// Macromotion frequency of a rotating saddle, `ω̃ = ω_r²/(2Ω)`.
pub fn secular_frequency_saddle(omega_r: f64, omega: f64) -> Result<f64> {
    if omega == 0.0 {
        return Err(Error::DivisionByZero("saddle rotation rate"));
    }
    if omega_r / omega > SADDLE_RATIO_VALIDITY {
        log::warn!("ω_r/Ω = {:.3} exceeds {SADDLE_RATIO_VALIDITY}", omega_r / omega);
    }
    Ok(omega_r * omega_r / (2.0 * omega))
}

/// Precession rate of the guiding-centre orbit, `ω_r⁴/(4Ω³)`.
pub fn precession_frequency_saddle(omega_r: f64, omega: f64) -> Result<f64> {
    if omega == 0.0 {
        return Err(Error::DivisionByZero("saddle rotation rate"));
    }
    Ok(omega_r.powi(4) / (4.0 * omega.powi(3)))
}

/// `ω_r = √(2B_sat a0/(μ0ρ_m))` from the saddle coefficient `a0` (T/m²).
pub fn saddle_omega_r(a0: f64, b_sat: f64, rho_m: f64, mu0: f64) -> f64 {
    (2.0 * b_sat * a0.abs() / (mu0 * rho_m)).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MainlineSecular {
    /// `ω = 2π·B_sat|B″|/(μ0πρ_mΩ)`, rad/s.
    pub mainline: f64,
    /// `ω_r²/(2Ω)` with `ω_r² = 2B_sat a0/(μ0ρ_m)` and `a0 = |B″|/2`, rad/s.
    pub saddle_route: f64,
    /// `mainline / saddle_route`, NaN when both vanish.
    pub ratio: f64,
}

/// Both secular-frequency expressions for the rotating platform, for a
/// point-like body (`a0 = B″/2`). They differ by a constant factor, which
/// is returned rather than hidden.
pub fn mainline_secular_xy(b_sat: f64, b_zpp: f64, rho_m: f64, mu0: f64, omega: f64) -> Result<MainlineSecular> {
    if !(omega > 0.0) {
        return Err(Error::DivisionByZero("platform rotation rate"));
    }
    let mainline = 2.0 * std::f64::consts::PI * b_sat * b_zpp.abs() / (mu0 * std::f64::consts::PI * rho_m * omega);
    let wr = saddle_omega_r(0.5 * b_zpp, b_sat, rho_m, mu0);
    let saddle_route = wr * wr / (2.0 * omega);
    Ok(MainlineSecular { mainline, saddle_route, ratio: mainline / saddle_route })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MU0;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn q_parameter_values() {
        let q = q_parameters(1e5, 1.0, 7e3, MU0, 2.0 * PI * 2000.0).unwrap();
        assert_relative_eq!(q.q_z, 2.0 * 1e5 / (MU0 * 7e3 * (2.0 * PI * 2000.0f64).powi(2)), max_relative = 1e-14);
        assert!((q.q_z - 0.144).abs() < 0.001, "q_z = {}", q.q_z);
        assert_eq!(q.q_x, -0.5 * q.q_z);
        let zero = q_parameters(0.0, 1.0, 7e3, MU0, 1.0).unwrap();
        assert_eq!((zero.q_x, zero.q_z), (0.0, 0.0));
        let q2 = q_parameters(1e5, 1.0, 7e3, MU0, 4.0 * PI * 2000.0).unwrap();
        assert_relative_eq!(q2.q_z, q.q_z / 4.0, max_relative = 1e-14);
        assert!(!q_parameters(1e5, 1.0, 7e3, MU0, 2.0 * PI * 500.0).unwrap().valid);
    }

    #[test]
    fn chip_libration_value() {
        let s = chip_secular_frequencies(0.01, 1e-6, 7e3, 1.0, MU0, 0.144, 2.0 * PI * 2000.0).unwrap();
        let hz = s.omega_gamma / (2.0 * PI);
        assert!((hz - 2.7e5).abs() / 2.7e5 < 0.02, "{hz}");
        let s4 = chip_secular_frequencies(0.04, 1e-6, 7e3, 1.0, MU0, 0.144, 2.0 * PI * 2000.0).unwrap();
        assert_relative_eq!(s4.omega_gamma, 2.0 * s.omega_gamma, max_relative = 1e-14);
        assert_relative_eq!(s.secular_z, 2.0 * s.secular_x, max_relative = 1e-15);
    }

    #[test]
    fn chip_secular_z_with_formula_q() {
        let omega = 2.0 * PI * 2000.0;
        let q = q_parameters(1e5, 1.0, 7e3, MU0, omega).unwrap();
        let s = chip_secular_frequencies(0.01, 1e-6, 7e3, 1.0, MU0, q.q_z, omega).unwrap();
        let hz = s.secular_z / (2.0 * PI);
        assert!((hz - 101.9).abs() < 0.5, "{hz}");
    }

    #[test]
    fn saddle_formulas() {
        let wr = 2.0 * PI * 10.0;
        let w = 2.0 * PI * 100.0;
        assert_relative_eq!(secular_frequency_saddle(wr, w).unwrap(), 2.0 * PI * 0.5, max_relative = 1e-14);
        assert_relative_eq!(precession_frequency_saddle(wr, w).unwrap(), 2.0 * PI * 0.0025, max_relative = 1e-14);
        assert_eq!(secular_frequency_saddle(0.0, w).unwrap(), 0.0);
        assert_eq!(precession_frequency_saddle(0.0, w).unwrap(), 0.0);
        assert_relative_eq!(
            secular_frequency_saddle(2.0 * wr, 4.0 * w).unwrap(),
            secular_frequency_saddle(wr, w).unwrap(),
            max_relative = 1e-14
        );
        let ratio = precession_frequency_saddle(wr, w).unwrap() / secular_frequency_saddle(wr, w).unwrap();
        assert_relative_eq!(ratio, 0.5 * (wr / w).powi(2), max_relative = 1e-14);
        assert!(matches!(secular_frequency_saddle(wr, 0.0), Err(Error::DivisionByZero(_))));
        assert!(matches!(precession_frequency_saddle(wr, 0.0), Err(Error::DivisionByZero(_))));
    }

    #[test]
    fn mainline_routes_differ_by_constant_factor() {
        let w = 2.0 * PI * 100.0;
        let mut ratios = Vec::new();
        for b in [10.0, 100.0, 1000.0, 1e4] {
            let m = mainline_secular_xy(1.0, b, 7e3, MU0, w).unwrap();
            ratios.push(m.ratio);
        }
        for r in &ratios {
            assert_relative_eq!(*r, 4.0, max_relative = 1e-12);
        }
        let z = mainline_secular_xy(1.0, 0.0, 7e3, MU0, w).unwrap();
        assert_eq!(z.mainline, 0.0);
        assert_eq!(z.saddle_route, 0.0);
    }
}
