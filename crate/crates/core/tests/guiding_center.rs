use std::f64::consts::PI;

use magtrap::dynamics::{guiding_center, integrate, Termination, Trajectory};
use magtrap::model::{EulerZyz, RigidState};
use magtrap::numerics::spectrum::{real_peaks, PeakOptions};
use magtrap::stability::scan::saddle_scenario;
use nalgebra::{Vector2, Vector3};

struct Run {
    traj: Trajectory,
    mass: f64,
    omega_r: f64,
    omega: f64,
    output: f64,
}

fn run(ratio: f64, drive_periods: f64) -> Run {
    let omega_r = 2.0 * PI * 10.0;
    let omega = omega_r / ratio;
    let drive = 2.0 * PI / omega;
    let output = drive / 8.0;
    let sc = saddle_scenario(omega_r, omega, drive_periods * drive, drive / 96.0, output).unwrap();
    let mass = sc.properties().unwrap().mass;
    let traj = integrate(&sc, &RigidState::at_rest(Vector3::new(1e-6, 0.0, 0.0), EulerZyz::default())).unwrap();
    assert_eq!(traj.termination, Termination::Completed);
    Run { traj, mass, omega_r, omega, output }
}

fn guiding(r: &Run) -> Vec<Vector2<f64>> {
    r.traj
        .states
        .iter()
        .zip(&r.traj.times)
        .map(|(s, &t)| {
            let v = Vector2::new(s.position.x, s.position.y);
            let vd = Vector2::new(s.momentum.x, s.momentum.y) / r.mass;
            guiding_center(v, vd, r.omega_r, r.omega, t)
        })
        .collect()
}

/// Largest spectral amplitude above the drive frequency.
fn micromotion(signal: &[f64], dt: f64, omega: f64) -> f64 {
    let opts = PeakOptions { rel_threshold: 1e-8, max_peaks: 64, ..Default::default() };
    real_peaks(signal, dt, &opts)
        .unwrap()
        .iter()
        .filter(|p| p.angular() > omega)
        .map(|p| p.amplitude)
        .fold(0.0, f64::max)
}

#[test]
fn guiding_center_suppresses_micromotion() {
    let r = run(0.2, 400.0);
    let n = r.traj.len() - 1;
    let raw: Vec<f64> = r.traj.states[..n].iter().map(|s| s.position.x).collect();
    let w: Vec<f64> = guiding(&r)[..n].iter().map(|w| w.x).collect();
    let before = micromotion(&raw, r.output, r.omega);
    let after = micromotion(&w, r.output, r.omega);
    assert!(before > 0.0);
    assert!(before >= 10.0 * after, "micromotion {before:.3e} -> {after:.3e}");
}

#[test]
fn released_orbit_is_a_steady_circle() {
    // From rest the guiding centre runs a single circular mode.
    let r = run(0.1, 1000.0);
    let w = guiding(&r);
    let per_block = (100.0 * 8.0) as usize;
    let radii: Vec<f64> = w
        .chunks(per_block)
        .filter(|c| c.len() == per_block)
        .map(|c| c.iter().map(|v| v.norm()).sum::<f64>() / c.len() as f64)
        .collect();
    assert!(radii.len() >= 9);
    for pair in radii.windows(2) {
        assert!((pair[1] - pair[0]).abs() < 0.01 * pair[0], "radius drift {pair:?}");
    }
    let spread = w.iter().map(|v| v.norm()).fold((f64::INFINITY, 0.0f64), |(lo, hi), x| (lo.min(x), hi.max(x)));
    assert!(spread.1 - spread.0 < 0.05 * spread.1, "not circular: {spread:?}");
}
