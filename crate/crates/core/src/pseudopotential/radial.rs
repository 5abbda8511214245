//! Vertical equilibrium of a small upright dipole confined to a vertical
//! line (a tube) at a horizontal offset from the platform axis.

use nalgebra::Vector3;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::fields::{field_value, FieldSource};
use crate::model::PhysicalConstants;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RadialScanOptions {
    /// Rotation rate, rad/s; overrides the rate stored in the sources.
    pub omega: f64,
    /// Lowest allowed height (tube floor), m.
    pub floor: f64,
    /// Highest height searched, m.
    pub z_max: f64,
    /// Search step above the floor, m.
    pub z_step: f64,
    /// Largest |x| covered by the field model, m.
    pub coverage: f64,
    /// Samples per platform revolution.
    pub n_time: usize,
}

impl Default for RadialScanOptions {
    fn default() -> Self {
        Self {
            omega: 2.0 * std::f64::consts::PI * 80.0,
            floor: 3e-3,
            z_max: 40e-3,
            z_step: 0.25e-3,
            coverage: 40e-3,
            n_time: 32,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Resting on the floor.
    Floor,
    Lifted,
    /// Pushed beyond the searched range.
    Escaped,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialRow {
    pub x: f64,
    pub z_eq: f64,
    pub regime: Regime,
}

/// Time-averaged axial force on a moment `μ` (along +z) of mass `m`:
/// the mean force minus the ponderomotive gradient and gravity.
struct LineModel<'a> {
    sources: Vec<FieldSource>,
    mu_over_m: f64,
    g: f64,
    opts: &'a RadialScanOptions,
}

impl LineModel<'_> {
    fn dbz_dz(&self, p: &Vector3<f64>, t: f64) -> Result<f64> {
        let d = 10e-6;
        let bz = |dz: f64| field_value(&(p + Vector3::new(0.0, 0.0, dz)), t, &self.sources).map(|b| b.z);
        Ok((-bz(2.0 * d)? + 8.0 * bz(d)? - 8.0 * bz(-d)? + bz(-2.0 * d)?) / (12.0 * d))
    }

    /// Mean specific force and `Ψ/m` at `(x, 0, z)`. Each harmonic at `ω_k`
    /// contributes `|A_k|²/(m ω_k²)`, i.e. `|A|²/(4mΩ²)` for the fundamental
    /// at `2Ω`.
    fn averaged(&self, x: f64, z: f64) -> Result<(f64, f64)> {
        let n = self.opts.n_time;
        let w = self.opts.omega;
        let period = 2.0 * std::f64::consts::PI / w;
        let p = Vector3::new(x, 0.0, z);
        let f: Vec<f64> = (0..n)
            .map(|j| self.dbz_dz(&p, j as f64 * period / n as f64).map(|v| self.mu_over_m * v))
            .collect::<Result<_>>()?;
        let mut mean = 0.0;
        let mut psi = 0.0;
        for k in 0..n / 2 {
            let c: Complex64 = f
                .iter()
                .enumerate()
                .map(|(j, &v)| v * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (k * j) as f64 / n as f64))
                .sum::<Complex64>()
                / n as f64;
            if k == 0 {
                mean = c.re;
            } else {
                let a = 2.0 * c.norm();
                psi += a * a / (k as f64 * w).powi(2);
            }
        }
        Ok((mean, psi))
    }

    /// Net upward specific force, with the ponderomotive gradient taken by
    /// central differences of step `d`.
    fn force(&self, x: f64, z: f64, d: f64) -> Result<f64> {
        let (mean, _) = self.averaged(x, z)?;
        let (_, up) = self.averaged(x, z + d)?;
        let (_, down) = self.averaged(x, z - d)?;
        Ok(mean - (up - down) / (2.0 * d) - self.g)
    }

    /// Stays on the floor if pushed down there; otherwise rises to the
    /// first height where the net force turns downward.
    fn equilibrium(&self, x: f64) -> Result<RadialRow> {
        let o = self.opts;
        let d = o.z_step;
        // Sliding window of (mean, Ψ/m) at z − d, z, z + d.
        let mut prev = self.averaged(x, o.floor - d)?;
        let mut cur = self.averaged(x, o.floor)?;
        let mut next = self.averaged(x, o.floor + d)?;
        let grid_force = |p: (f64, f64), c: (f64, f64), n: (f64, f64)| c.0 - (n.1 - p.1) / (2.0 * d) - self.g;
        let mut z0 = o.floor;
        let mut f0 = grid_force(prev, cur, next);
        if f0 <= 0.0 {
            return Ok(RadialRow { x, z_eq: o.floor, regime: Regime::Floor });
        }
        while z0 + d <= o.z_max {
            let z1 = z0 + d;
            prev = cur;
            cur = next;
            next = self.averaged(x, z1 + d)?;
            let f1 = grid_force(prev, cur, next);
            if f1 <= 0.0 {
                let (mut a, mut b) = (z0, z1);
                let h = 0.1 * d;
                while b - a > super::EQUILIBRIUM_TOL {
                    let m = 0.5 * (a + b);
                    if self.force(x, m, h)? > 0.0 {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                return Ok(RadialRow { x, z_eq: 0.5 * (a + b), regime: Regime::Lifted });
            }
            z0 = z1;
            f0 = f1;
        }
        log::warn!("x = {x:.4e} m: net force still upward ({f0:.3e} m/s²) at z = {z0:.4e} m");
        Ok(RadialRow { x, z_eq: z0, regime: Regime::Escaped })
    }
}

/// Equilibrium height along the vertical line through each offset `x` (on
/// the lab x axis) for an upright point dipole with the given constants.
pub fn radial_displacement_scan(
    sources: &[FieldSource],
    constants: &PhysicalConstants,
    offsets: &[f64],
    opts: &RadialScanOptions,
) -> Result<Vec<RadialRow>> {
    constants.validate()?;
    ensure_positive("omega", opts.omega)?;
    ensure_positive("z step", opts.z_step)?;
    if !(opts.z_max > opts.floor) {
        return Err(Error::InvalidInput("z_max must exceed the floor".into()));
    }
    if opts.n_time < 8 {
        return Err(Error::InvalidInput("need at least 8 time samples per revolution".into()));
    }
    if let Some(x) = offsets.iter().find(|x| !(x.abs() <= opts.coverage)) {
        return Err(Error::Range(format!("offset {x:.4e} m outside coverage ±{:.4e} m", opts.coverage)));
    }
    let sources = sources
        .iter()
        .map(|s| match s {
            FieldSource::RotatingPlatform(p) => {
                let mut p = p.clone();
                p.omega = opts.omega;
                FieldSource::RotatingPlatform(p)
            }
            other => other.clone(),
        })
        .collect();
    let model = LineModel {
        sources,
        mu_over_m: constants.b_sat / (constants.mu0 * constants.rho_m),
        g: constants.g,
        opts,
    };
    offsets.par_iter().map(|&x| model.equilibrium(x)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialStructure {
    /// Largest |x| up to which every scanned offset rests on the floor.
    pub flat_halfwidth: f64,
    pub peak_offset: f64,
    pub peak_height: f64,
    /// Rises from the floor to the peak and comes down again beyond it.
    pub flat_rise_fall: bool,
    /// Largest `|z(x) − z(−x)|/z(x)` over mirrored offset pairs.
    pub mirror_asymmetry: f64,
}

pub fn radial_structure(rows: &[RadialRow]) -> Result<RadialStructure> {
    if rows.is_empty() {
        return Err(Error::InvalidInput("empty radial scan".into()));
    }
    let mut sorted = rows.to_vec();
    sorted.sort_by(|a, b| a.x.abs().total_cmp(&b.x.abs()));
    let floor = sorted.iter().map(|r| r.z_eq).fold(f64::INFINITY, f64::min);
    let flat_halfwidth = sorted.iter().take_while(|r| r.regime == Regime::Floor).map(|r| r.x.abs()).fold(0.0, f64::max);
    let peak = sorted.iter().copied().max_by(|a, b| a.z_eq.total_cmp(&b.z_eq)).unwrap();
    let beyond: Vec<&RadialRow> = sorted.iter().filter(|r| r.x.abs() > peak.x.abs()).collect();
    let starts_flat = sorted[0].regime == Regime::Floor;
    let falls = beyond.iter().any(|r| r.z_eq < peak.z_eq - 0.25 * (peak.z_eq - floor));
    let flat_rise_fall = starts_flat && peak.regime == Regime::Lifted && falls;
    let mut mirror_asymmetry: f64 = 0.0;
    for r in rows.iter().filter(|r| r.x > 0.0) {
        if let Some(m) = rows.iter().find(|m| (m.x + r.x).abs() <= 1e-12 * r.x) {
            mirror_asymmetry = mirror_asymmetry.max((r.z_eq - m.z_eq).abs() / r.z_eq.abs());
        }
    }
    Ok(RadialStructure {
        flat_halfwidth,
        peak_offset: peak.x.abs(),
        peak_height: peak.z_eq,
        flat_rise_fall,
        mirror_asymmetry,
    })
}
