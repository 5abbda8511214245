//! Time-averaged axial potential of a bar magnet above the rotating
//! platform, its equilibrium height and its dependence on the drive.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::profile::CurvatureProfile;
use crate::error::{ensure_positive, Error, Result};
use crate::model::PhysicalConstants;
use crate::numerics::optimize::golden_section_min;

/// Abscissa tolerance of the equilibrium refinement, m.
pub const EQUILIBRIUM_TOL: f64 = 10e-6;

/// Bar of length `l` along y and square section `h × h`, magnetised along z,
/// centred on the platform axis.
#[derive(Clone, Debug)]
pub struct AxialPotential {
    pub profile: CurvatureProfile,
    pub l: f64,
    pub h: f64,
    /// Platform rotation rate, rad/s.
    pub omega: f64,
    pub constants: PhysicalConstants,
    /// Gravity along −z when true, along +z (apparatus upside down) otherwise.
    pub gravity_down: bool,
    /// Report energies per unit volume.
    pub volume_normalized: bool,
}

impl AxialPotential {
    pub fn new(profile: CurvatureProfile, l: f64, h: f64, omega: f64, constants: PhysicalConstants) -> Result<Self> {
        ensure_positive("h", h)?;
        if l < h {
            return Err(Error::InvalidInput(format!("need l ≥ h, got l = {l}, h = {h}")));
        }
        if omega == 0.0 {
            return Err(Error::DivisionByZero("platform rotation rate"));
        }
        constants.validate()?;
        Ok(Self { profile, l, h, omega, constants, gravity_down: true, volume_normalized: false })
    }

    pub fn volume(&self) -> f64 {
        self.l * self.h * self.h
    }

    pub fn mass(&self) -> f64 {
        self.constants.rho_m * self.volume()
    }

    fn scale(&self) -> f64 {
        if self.volume_normalized { 1.0 / self.volume() } else { 1.0 }
    }

    /// Amplitude of the oscillating axial energy, `MV F(z)(l² − h²)/12`, J.
    pub fn drive_energy(&self, z: f64) -> Result<f64> {
        let mv = self.constants.b_sat * self.volume() / self.constants.mu0;
        Ok(mv * self.profile.f_of_z(self.h, z)? * (self.l * self.l - self.h * self.h) / 12.0)
    }

    fn drive_gradient(&self, z: f64) -> Result<f64> {
        let mv = self.constants.b_sat * self.volume() / self.constants.mu0;
        Ok(mv * self.profile.f_prime(self.h, z)? * (self.l * self.l - self.h * self.h) / 12.0)
    }

    /// `Ψ = |∂_z E|²/(4mΩ²)`.
    pub fn psi(&self, z: f64) -> Result<f64> {
        let g = self.drive_gradient(z)?;
        Ok(g * g / (4.0 * self.mass() * self.omega * self.omega) * self.scale())
    }

    pub fn gravity(&self, z: f64) -> f64 {
        let sign = if self.gravity_down { 1.0 } else { -1.0 };
        sign * self.mass() * self.constants.g * z * self.scale()
    }

    pub fn total(&self, z: f64) -> Result<f64> {
        Ok(self.psi(z)? + self.gravity(z))
    }

    /// Samples the potential (in parallel) and locates the equilibrium.
    pub fn sample(&self, z: &[f64]) -> Result<PseudoPotentialProfile> {
        let psi = z.par_iter().map(|&zi| self.psi(zi)).collect::<Result<Vec<_>>>()?;
        let gravity: Vec<f64> = z.iter().map(|&zi| self.gravity(zi)).collect();
        let total: Vec<f64> = psi.iter().zip(&gravity).map(|(a, b)| a + b).collect();
        let equilibrium_z = match equilibrium_height(|zi| self.total(zi), z, &total) {
            Ok(v) => Some(v),
            Err(Error::NoTrap(msg)) => {
                log::info!("{msg}");
                None
            }
            Err(e) => return Err(e),
        };
        Ok(PseudoPotentialProfile {
            z: z.to_vec(),
            psi,
            gravity,
            total,
            equilibrium_z,
            volume_normalized: self.volume_normalized,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PseudoPotentialProfile {
    pub z: Vec<f64>,
    /// J, or J/m³ when volume-normalised.
    pub psi: Vec<f64>,
    pub gravity: Vec<f64>,
    pub total: Vec<f64>,
    pub equilibrium_z: Option<f64>,
    pub volume_normalized: bool,
}

/// Lowest strict interior minimum of the sampled `total`, refined on `f` by
/// golden-section search to `EQUILIBRIUM_TOL`.
pub fn equilibrium_height<F>(f: F, z: &[f64], total: &[f64]) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if z.len() != total.len() || z.len() < 3 {
        return Err(Error::InvalidInput("need at least 3 matching samples".into()));
    }
    let best = (1..z.len() - 1)
        .filter(|&k| total[k] < total[k - 1] && total[k] < total[k + 1])
        .min_by(|&a, &b| total[a].total_cmp(&total[b]))
        .ok_or_else(|| {
            Error::NoTrap(format!("total potential has no interior minimum on [{:.4e}, {:.4e}] m", z[0], z[z.len() - 1]))
        })?;
    let mut err = None;
    let (zm, _) = golden_section_min(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                f64::INFINITY
            }
        },
        z[best - 1],
        z[best + 1],
        EQUILIBRIUM_TOL,
    );
    match err {
        Some(e) => Err(e),
        None => Ok(zm),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Increasing,
    Decreasing,
    NonMonotone,
    /// Fewer than two trapped points.
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightRow {
    /// rad/s.
    pub omega: f64,
    /// `None` where nothing is trapped.
    pub z_eq: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightScan {
    pub rows: Vec<HeightRow>,
    pub trend: Trend,
    /// The trend agrees with a height that increases with the drive.
    pub matches_observed_increase: bool,
}

/// Equilibrium height versus rotation rate, with the direction reported.
pub fn height_vs_drive(base: &AxialPotential, omegas: &[f64], z: &[f64]) -> Result<HeightScan> {
    let rows = omegas
        .par_iter()
        .map(|&w| {
            let mut p = base.clone();
            if w == 0.0 {
                return Err(Error::DivisionByZero("platform rotation rate"));
            }
            p.omega = w;
            Ok(HeightRow { omega: w, z_eq: p.sample(z)?.equilibrium_z })
        })
        .collect::<Result<Vec<_>>>()?;
    let trend = trend_of(&rows);
    if trend != Trend::Increasing && trend != Trend::Undetermined {
        log::warn!("equilibrium height trend is {trend:?}, not increasing with the drive");
    }
    Ok(HeightScan { trend, matches_observed_increase: trend == Trend::Increasing, rows })
}

fn trend_of(rows: &[HeightRow]) -> Trend {
    let mut pts: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.z_eq.map(|z| (r.omega, z))).collect();
    if pts.len() < 2 {
        return Trend::Undetermined;
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let d: Vec<f64> = pts.windows(2).map(|w| w[1].1 - w[0].1).collect();
    if d.iter().all(|&v| v > 0.0) {
        Trend::Increasing
    } else if d.iter().all(|&v| v < 0.0) {
        Trend::Decreasing
    } else {
        Trend::NonMonotone
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FieldSource, RotatingPlatform};
    use crate::pseudopotential::profile::AxisGrid;
    use approx::assert_relative_eq;

    fn platform_potential(omega: f64) -> AxialPotential {
        let src = [FieldSource::RotatingPlatform(RotatingPlatform::standard(5e-3, 5e-3, 20e-3, 1.0, 0.0))];
        let profile = CurvatureProfile::build(&src, &AxisGrid::default(), 2e-3, 0.0).unwrap();
        AxialPotential::new(profile, 10e-3, 4e-3, omega, PhysicalConstants::default()).unwrap()
    }

    fn grid() -> Vec<f64> {
        (0..=46).map(|k| 2e-3 + 0.5e-3 * k as f64).collect()
    }

    #[test]
    fn quadratic_synthetic_minimum() {
        let (k, mg) = (3.0, 0.7);
        let f = |z: f64| Ok(0.5 * k * z * z + mg * z);
        let z: Vec<f64> = (0..101).map(|i| -1.0 + 0.02 * i as f64).collect();
        let t: Vec<f64> = z.iter().map(|&v| f(v).unwrap()).collect();
        let zm = equilibrium_height(f, &z, &t).unwrap();
        assert!((zm + mg / k).abs() < EQUILIBRIUM_TOL);
        let mono: Vec<f64> = z.iter().map(|v| 2.0 * v).collect();
        assert!(matches!(equilibrium_height(|v| Ok(2.0 * v), &z, &mono), Err(Error::NoTrap(_))));
    }

    #[test]
    fn psi_properties() {
        let p = platform_potential(2.0 * std::f64::consts::PI * 80.0);
        assert!(p.psi(0.0).unwrap() < 1e-20 * p.psi(6e-3).unwrap().max(1e-300));
        for z in grid() {
            assert!(p.psi(z).unwrap() >= 0.0);
        }
        let mut q = p.clone();
        q.omega *= 2.0;
        assert_relative_eq!(q.psi(8e-3).unwrap(), 0.25 * p.psi(8e-3).unwrap(), max_relative = 1e-12);
        assert!(matches!(
            AxialPotential::new(p.profile.clone(), 10e-3, 4e-3, 0.0, PhysicalConstants::default()),
            Err(Error::DivisionByZero(_))
        ));
        let mut v = p.clone();
        v.volume_normalized = true;
        assert_relative_eq!(v.total(9e-3).unwrap() * p.volume(), p.total(9e-3).unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn profile_invariants_and_inverted_gravity() {
        let p = platform_potential(2.0 * std::f64::consts::PI * 80.0);
        let s = p.sample(&grid()).unwrap();
        for k in 0..s.z.len() {
            assert_eq!(s.total[k], s.psi[k] + s.gravity[k]);
        }
        let zm = s.equilibrium_z.expect("trapped");
        let t = |z: f64| p.total(z).unwrap();
        assert!(t(zm) < t(zm - 0.2e-3) && t(zm) < t(zm + 0.2e-3));
        let mut up = p.clone();
        up.gravity_down = false;
        assert_eq!(up.sample(&grid()).unwrap().equilibrium_z, None);
    }

    #[test]
    fn trend_classification() {
        let row = |w: f64, z: Option<f64>| HeightRow { omega: w, z_eq: z };
        assert_eq!(trend_of(&[row(1.0, Some(1.0)), row(2.0, Some(2.0))]), Trend::Increasing);
        assert_eq!(trend_of(&[row(2.0, Some(1.0)), row(1.0, Some(2.0))]), Trend::Decreasing);
        assert_eq!(trend_of(&[row(1.0, Some(1.0)), row(2.0, Some(2.0)), row(3.0, Some(0.5))]), Trend::NonMonotone);
        assert_eq!(trend_of(&[row(1.0, Some(1.0)), row(2.0, None)]), Trend::Undetermined);
    }

    #[test]
    fn single_point_scan_makes_no_claim() {
        let p = platform_potential(2.0 * std::f64::consts::PI * 80.0);
        let s = height_vs_drive(&p, &[p.omega], &grid()).unwrap();
        assert_eq!(s.rows.len(), 1);
        assert_eq!(s.trend, Trend::Undetermined);
    }
}
