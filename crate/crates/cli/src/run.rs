//! Subcommand implementations: configuration in, artifacts and a summary out.

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde_json::json;

use magtrap::chiptrap::{design_report, design_sweep};
use magtrap::dynamics::{integrate, Termination};
use magtrap::fields::{field_map, FieldSource};
use magtrap::model::TrapScenario;
use magtrap::output::{
    design_sweep_table, field_map_table, height_table, pseudo_potential_table, radial_table, stability_table, to_json,
    trajectory_table,
};
use magtrap::pseudopotential::{
    height_vs_drive, omega_r, omega_z, radial_displacement_scan, radial_structure, taylor_fit_profile, AxialPotential,
    CurvatureProfile,
};
use magtrap::stability::stability_scan;

use crate::config::{
    pair_separation, AxialConfig, ChipDesignConfig, FieldMapConfig, HeightScanConfig, PseudoPotentialConfig,
    RadialScanConfig, StabilityScanConfig,
};
use crate::manifest::Artifacts;

/// Process exit status.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const INSTABILITY: i32 = 3;
    pub const INTEGRATION: i32 = 4;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    Simulate,
    FieldMap,
    StabilityScan,
    PseudoPotential,
    HeightScan,
    RadialScan,
    ChipDesign,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Simulate => "simulate",
            Subcommand::FieldMap => "field-map",
            Subcommand::StabilityScan => "stability-scan",
            Subcommand::PseudoPotential => "pseudo-potential",
            Subcommand::HeightScan => "height-scan",
            Subcommand::RadialScan => "radial-scan",
            Subcommand::ChipDesign => "chip-design",
        }
    }
}

/// Finished run: artifacts to write and the status to exit with.
pub struct RunResult {
    pub artifacts: Artifacts,
    pub exit_code: i32,
}

/// Marks an error as a configuration problem.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Maps an error chain to an exit status.
pub fn exit_code_for(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.is::<ConfigError>() || cause.is::<serde_json::Error>() {
            return exit::CONFIG;
        }
        if let Some(e) = cause.downcast_ref::<magtrap::Error>() {
            return match e {
                magtrap::Error::InvalidGeometry(_)
                | magtrap::Error::InvalidInput(_)
                | magtrap::Error::Range(_)
                | magtrap::Error::DivisionByZero(_)
                | magtrap::Error::Overlap { .. }
                | magtrap::Error::Json(_) => exit::CONFIG,
                magtrap::Error::NonFinite { .. } | magtrap::Error::Stiffness { .. } | magtrap::Error::SingularField { .. } => {
                    exit::INTEGRATION
                }
                _ => exit::FAILURE,
            };
        }
    }
    exit::FAILURE
}

fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| anyhow::Error::new(ConfigError(format!("invalid configuration: {e}"))))
}

fn config_err(e: magtrap::Error) -> anyhow::Error {
    anyhow::Error::new(e).context("invalid configuration")
}

pub fn run(cmd: Subcommand, config: &str) -> Result<RunResult> {
    match cmd {
        Subcommand::Simulate => simulate(config),
        Subcommand::FieldMap => field_map_cmd(config),
        Subcommand::StabilityScan => stability_cmd(config),
        Subcommand::PseudoPotential => pseudo_cmd(config),
        Subcommand::HeightScan => height_cmd(config),
        Subcommand::RadialScan => radial_cmd(config),
        Subcommand::ChipDesign => chip_cmd(config),
    }
}

fn ok(artifacts: Artifacts) -> Result<RunResult> {
    Ok(RunResult { artifacts, exit_code: exit::OK })
}

fn simulate(config: &str) -> Result<RunResult> {
    let sc: TrapScenario = parse(config)?;
    sc.validate().map_err(config_err)?;
    let initial = sc.initial_state().map_err(config_err)?;
    let traj = integrate(&sc, &initial).context("dynamics")?;
    let mut a = Artifacts::default();
    a.add("trajectory.csv", trajectory_table(&traj).to_csv());
    let escaped = matches!(traj.termination, Termination::Escaped { .. });
    let summary = json!({
        "termination": traj.termination,
        "bounded": !escaped,
        "points": traj.len(),
        "max_radius": traj.max_radius(),
        "energy_drift": traj.energy_drift(),
    });
    a.add("summary.json", to_json(&summary)?);
    if let Termination::Escaped { t, radius } = traj.termination {
        log::warn!("instability detected: |r| = {radius:.3e} m at t = {t:.6e} s");
    }
    Ok(RunResult { artifacts: a, exit_code: if escaped { exit::INSTABILITY } else { exit::OK } })
}

fn field_map_cmd(config: &str) -> Result<RunResult> {
    let c: FieldMapConfig = parse(config)?;
    magtrap::fields::validate_sources(&c.sources).map_err(config_err)?;
    let samples = field_map(&c.grid, c.time, &c.sources).map_err(config_err).context("fields")?;
    let mut a = Artifacts::default();
    a.add("field_map.csv", field_map_table(&samples).to_csv());
    ok(a)
}

fn stability_cmd(config: &str) -> Result<RunResult> {
    let c: StabilityScanConfig = parse(config)?;
    let rows = stability_scan(&c.omega_r.values(), &c.omega.values()).context("stability")?;
    let mut a = Artifacts::default();
    a.add("stability_scan.csv", stability_table(&rows).to_csv());
    let disagreements = rows.iter().filter(|r| r.analytic_stable != r.floquet_stable).count();
    a.add("summary.json", to_json(&json!({ "points": rows.len(), "verdict_disagreements": disagreements }))?);
    ok(a)
}

fn axial_model(c: &AxialConfig, omega: f64) -> Result<AxialPotential> {
    c.platform.validate().map_err(config_err)?;
    let mut platform = c.platform.clone();
    platform.omega = 0.0;
    let sources = [FieldSource::RotatingPlatform(platform)];
    let halfwidth = c.fit_halfwidth.unwrap_or(0.1 * pair_separation(&c.platform));
    let profile = CurvatureProfile::build(&sources, &c.profile_grid, halfwidth, 0.0).context("curvature profile")?;
    let mut p = AxialPotential::new(profile, c.bar.l, c.bar.h, omega, c.constants).map_err(config_err)?;
    p.gravity_down = c.gravity_down;
    p.volume_normalized = c.volume_normalized;
    Ok(p)
}

fn pseudo_cmd(config: &str) -> Result<RunResult> {
    let c: PseudoPotentialConfig = parse(config)?;
    let p = axial_model(&c.axial, c.omega)?;
    let profile = p.sample(&c.axial.z.values()).context("pseudopotential")?;
    let window = c.axial.taylor_window.unwrap_or(2e-3);
    let fit = taylor_fit_profile(&p.profile, c.axial.bar.h, 0.0, window, 21).context("Taylor fit")?;
    let k = &c.axial.constants;
    let summary = json!({
        "equilibrium_z": profile.equilibrium_z,
        "trapped": profile.equilibrium_z.is_some(),
        "taylor_fit": fit,
        "omega_r": omega_r(fit.a0, k.b_sat, k.rho_m, k.mu0)?,
        "axial_drive": omega_z(fit.a2, c.axial.bar.l, c.axial.bar.h, k.b_sat, k.rho_m, k.mu0)?,
        "volume_normalized": profile.volume_normalized,
    });
    let mut a = Artifacts::default();
    a.add("pseudo_potential.csv", pseudo_potential_table(&profile).to_csv());
    a.add("summary.json", to_json(&summary)?);
    ok(a)
}

fn height_cmd(config: &str) -> Result<RunResult> {
    let c: HeightScanConfig = parse(config)?;
    let omegas = c.omegas.values();
    let p = axial_model(&c.axial, omegas[0])?;
    let scan = height_vs_drive(&p, &omegas, &c.axial.z.values()).context("pseudopotential")?;
    let mut a = Artifacts::default();
    a.add("height_scan.csv", height_table(&scan).to_csv());
    a.add(
        "summary.json",
        to_json(&json!({ "trend": scan.trend, "matches_observed_increase": scan.matches_observed_increase }))?,
    );
    ok(a)
}

fn radial_cmd(config: &str) -> Result<RunResult> {
    let c: RadialScanConfig = parse(config)?;
    c.platform.validate().map_err(config_err)?;
    let sources = [FieldSource::RotatingPlatform(c.platform.clone())];
    let rows = radial_displacement_scan(&sources, &c.constants, &c.offsets.values(), &c.options)
        .map_err(config_err)
        .context("pseudopotential")?;
    let mut a = Artifacts::default();
    a.add("radial_scan.csv", radial_table(&rows).to_csv());
    a.add("summary.json", to_json(&radial_structure(&rows)?)?);
    ok(a)
}

fn chip_cmd(config: &str) -> Result<RunResult> {
    let c: ChipDesignConfig = parse(config)?;
    let report = design_report(&c.design).map_err(config_err).context("chiptrap")?;
    let mut a = Artifacts::default();
    a.add("design_report.json", to_json(&report)?);
    if let Some(axis) = c.sweep_omega {
        let w = axis.values();
        let rows = design_sweep(&c.design, &w).context("chiptrap")?;
        a.add("design_sweep.csv", design_sweep_table(&w, &rows).to_csv());
    }
    ok(a)
}
