//! Tabular artifacts: every CSV has a header row and numbers written in
//! scientific notation with 17 significant digits, so doubles round-trip.

use std::fmt::Write as _;

use serde::Serialize;

use crate::chiptrap::DesignReport;
use crate::dynamics::{Coordinate, Trajectory};
use crate::fields::MapSample;
use crate::pseudopotential::{HeightScan, PseudoPotentialProfile, RadialRow, Regime};
use crate::stability::ScanRow;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Flag(bool),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
    }
}

pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match c {
                    Cell::Num(v) => out.push_str(&format_number(*v)),
                    Cell::Flag(b) => out.push_str(if *b { "true" } else { "false" }),
                    Cell::Text(s) => {
                        let _ = write!(out, "{s}");
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> crate::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn trajectory_table(traj: &Trajectory) -> Table {
    let mut header = vec!["t"];
    header.extend(Coordinate::ALL.iter().map(|c| c.name()));
    let mut t = Table::new(&header);
    for k in 0..traj.len() {
        let mut row = vec![Cell::Num(traj.times[k])];
        row.extend(traj.row(k).iter().map(|&v| Cell::Num(v)));
        t.push(row);
    }
    t
}

/// Points inside source material are written as NaN.
pub fn field_map_table(samples: &[MapSample]) -> Table {
    let mut t = Table::new(&["x", "y", "z", "t", "Bx", "By", "Bz"]);
    for s in samples {
        let b = s.b.map_or([f64::NAN; 3], |b| [b.x, b.y, b.z]);
        let p = s.position;
        t.push([p.x, p.y, p.z, s.time, b[0], b[1], b[2]].map(Cell::Num).to_vec());
    }
    t
}

pub fn stability_table(rows: &[ScanRow]) -> Table {
    let mut t =
        Table::new(&["omega_r", "Omega", "max_real_eig", "analytic_stable", "max_multiplier", "floquet_stable", "stable"]);
    for r in rows {
        t.push(vec![
            r.omega_r.into(),
            r.omega.into(),
            r.max_real_eig.into(),
            r.analytic_stable.into(),
            r.max_multiplier.into(),
            r.floquet_stable.into(),
            (r.analytic_stable && r.floquet_stable).into(),
        ]);
    }
    t
}

pub fn pseudo_potential_table(p: &PseudoPotentialProfile) -> Table {
    let mut t = Table::new(&["z", "psi_z", "gravity_term", "total"]);
    for k in 0..p.z.len() {
        t.push(vec![p.z[k].into(), p.psi[k].into(), p.gravity[k].into(), p.total[k].into()]);
    }
    t
}

/// Untrapped drive values have an empty `z_eq` and `trapped = false`.
pub fn height_table(scan: &HeightScan) -> Table {
    let mut t = Table::new(&["Omega", "z_eq", "trapped"]);
    let mut rows = scan.rows.clone();
    rows.sort_by(|a, b| a.omega.total_cmp(&b.omega));
    for r in rows {
        let z = r.z_eq.map_or(Cell::Text(String::new()), Cell::Num);
        t.push(vec![r.omega.into(), z, r.z_eq.is_some().into()]);
    }
    t
}

pub fn radial_table(rows: &[RadialRow]) -> Table {
    let mut t = Table::new(&["x_offset", "z_eq", "regime"]);
    let mut rows = rows.to_vec();
    rows.sort_by(|a, b| a.x.total_cmp(&b.x));
    for r in rows {
        let regime = match r.regime {
            Regime::Floor => "floor",
            Regime::Lifted => "lifted",
            Regime::Escaped => "escaped",
        };
        t.push(vec![r.x.into(), r.z_eq.into(), Cell::Text(regime.into())]);
    }
    t
}

pub fn design_sweep_table(omegas: &[f64], reports: &[DesignReport]) -> Table {
    let mut t = Table::new(&[
        "Omega",
        "b1_pp",
        "q_z",
        "secular_x",
        "secular_z",
        "omega_beta_tilde",
        "omega_c",
        "gravity_sag",
        "induced_current_ratio",
        "eddy_power",
        "secular_valid",
        "coupling_negligible",
        "currents_feasible",
    ]);
    for (w, r) in omegas.iter().zip(reports) {
        t.push(vec![
            (*w).into(),
            r.b1_pp.into(),
            r.q.q_z.into(),
            r.secular[0].into(),
            r.secular[2].into(),
            r.omega_beta_tilde.into(),
            r.omega_c.into(),
            r.gravity_sag.into(),
            r.induced_current_ratio.into(),
            r.eddy_power.into(),
            r.q.valid.into(),
            r.coupling_negligible.into(),
            r.currents_feasible.into(),
        ]);
    }
    t
}
