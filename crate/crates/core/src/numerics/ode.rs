//! Explicit Runge–Kutta integrators for first-order systems.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub trait OdeSystem {
    fn dim(&self) -> usize;

    fn rhs(&self, t: f64, y: &[f64], dydt: &mut [f64]) -> Result<()>;

    /// Called after every accepted step, e.g. to renormalise a quaternion.
    fn project(&self, _y: &mut [f64]) {}
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Method {
    /// Classical fixed-step fourth-order Runge–Kutta.
    Rk4 { dt: f64 },
    /// Adaptive Dormand–Prince 5(4).
    Rk45 {
        #[serde(default = "default_rtol")]
        rtol: f64,
        #[serde(default = "default_atol")]
        atol: f64,
        #[serde(default)]
        h_max: Option<f64>,
    },
}

fn default_rtol() -> f64 {
    1e-9
}

fn default_atol() -> f64 {
    1e-12
}

impl Method {
    pub fn rk45_default() -> Self {
        Method::Rk45 { rtol: default_rtol(), atol: default_atol(), h_max: None }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Method::Rk4 { dt } => crate::error::ensure_positive("dt", dt),
            Method::Rk45 { rtol, atol, h_max } => {
                crate::error::ensure_positive("rtol", rtol)?;
                crate::error::ensure_positive("atol", atol)?;
                if let Some(h) = h_max {
                    crate::error::ensure_positive("h_max", h)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub t: f64,
    pub y: Vec<f64>,
    pub steps: usize,
    pub stopped: bool,
}

/// Integrates from `t0` to `t_end`, calling `observe` at `t0`, every
/// `output_dt` (or every step when `None`) and at `t_end`.
///
/// Returning [`Flow::Stop`] from the observer ends the run early.
pub fn solve<S, F>(
    sys: &S,
    method: &Method,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    output_dt: Option<f64>,
    mut observe: F,
) -> Result<Outcome>
where
    S: OdeSystem + ?Sized,
    F: FnMut(f64, &[f64]) -> Flow,
{
    method.validate()?;
    if y0.len() != sys.dim() {
        return Err(Error::InvalidInput(format!(
            "initial state has {} components, system expects {}",
            y0.len(),
            sys.dim()
        )));
    }
    if !(t_end > t0) {
        return Err(Error::InvalidInput(format!("t_end ({t_end}) must exceed t0 ({t0})")));
    }
    if let Some(dt) = output_dt {
        crate::error::ensure_positive("output interval", dt)?;
    }
    let mut y = y0.to_vec();
    sys.project(&mut y);
    if observe(t0, &y) == Flow::Stop {
        return Ok(Outcome { t: t0, y, steps: 0, stopped: true });
    }
    match *method {
        Method::Rk4 { dt } => solve_rk4(sys, dt, t0, y, t_end, output_dt, observe),
        Method::Rk45 { rtol, atol, h_max } => {
            solve_rk45(sys, rtol, atol, h_max, t0, y, t_end, output_dt, observe)
        }
    }
}

fn check_finite(t: f64, y: &[f64], previous: &[f64]) -> Result<()> {
    if y.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { t, last_state: previous.to_vec() })
    }
}

pub struct Rk4Work {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4Work {
    pub fn new(n: usize) -> Self {
        Self { k1: vec![0.0; n], k2: vec![0.0; n], k3: vec![0.0; n], k4: vec![0.0; n], tmp: vec![0.0; n] }
    }
}

/// One classical RK4 step in place.
pub fn rk4_step<S: OdeSystem + ?Sized>(
    sys: &S,
    t: f64,
    y: &mut [f64],
    h: f64,
    w: &mut Rk4Work,
) -> Result<()> {
    let n = y.len();
    sys.rhs(t, y, &mut w.k1)?;
    for i in 0..n {
        w.tmp[i] = y[i] + 0.5 * h * w.k1[i];
    }
    sys.rhs(t + 0.5 * h, &w.tmp, &mut w.k2)?;
    for i in 0..n {
        w.tmp[i] = y[i] + 0.5 * h * w.k2[i];
    }
    sys.rhs(t + 0.5 * h, &w.tmp, &mut w.k3)?;
    for i in 0..n {
        w.tmp[i] = y[i] + h * w.k3[i];
    }
    sys.rhs(t + h, &w.tmp, &mut w.k4)?;
    for i in 0..n {
        y[i] += h / 6.0 * (w.k1[i] + 2.0 * w.k2[i] + 2.0 * w.k3[i] + w.k4[i]);
    }
    sys.project(y);
    Ok(())
}

fn solve_rk4<S, F>(
    sys: &S,
    dt: f64,
    t0: f64,
    mut y: Vec<f64>,
    t_end: f64,
    output_dt: Option<f64>,
    mut observe: F,
) -> Result<Outcome>
where
    S: OdeSystem + ?Sized,
    F: FnMut(f64, &[f64]) -> Flow,
{
    let span = t_end - t0;
    let n_steps = (span / dt - 1e-9).ceil().max(1.0) as usize;
    let h = span / n_steps as f64;
    let every = match output_dt {
        Some(o) => ((o / h).round() as usize).max(1),
        None => 1,
    };
    let mut work = Rk4Work::new(y.len());
    let mut previous = y.clone();
    for i in 1..=n_steps {
        let t = t0 + (i - 1) as f64 * h;
        previous.copy_from_slice(&y);
        rk4_step(sys, t, &mut y, h, &mut work)?;
        let t_new = if i == n_steps { t_end } else { t0 + i as f64 * h };
        check_finite(t_new, &y, &previous)?;
        if (i % every == 0 || i == n_steps) && observe(t_new, &y) == Flow::Stop {
            return Ok(Outcome { t: t_new, y, steps: i, stopped: true });
        }
    }
    Ok(Outcome { t: t_end, y, steps: n_steps, stopped: false })
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[allow(clippy::too_many_arguments)]
fn solve_rk45<S, F>(
    sys: &S,
    rtol: f64,
    atol: f64,
    h_max: Option<f64>,
    t0: f64,
    mut y: Vec<f64>,
    t_end: f64,
    output_dt: Option<f64>,
    mut observe: F,
) -> Result<Outcome>
where
    S: OdeSystem + ?Sized,
    F: FnMut(f64, &[f64]) -> Flow,
{
    let n = y.len();
    let span = t_end - t0;
    let h_max = h_max.unwrap_or(span).min(span);
    let mut k: Vec<Vec<f64>> = (0..7).map(|_| vec![0.0; n]).collect();
    let mut tmp = vec![0.0; n];
    let mut y_new = vec![0.0; n];

    let mut t = t0;
    sys.rhs(t, &y, &mut k[0])?;
    // Initial step from the local scale of the derivative.
    let d0 = rms_scaled(&y, &y, atol, rtol);
    let d1 = rms_scaled(&k[0], &y, atol, rtol);
    let mut h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 * span } else { 0.01 * d0 / d1 };
    h = h.min(h_max).max(1e-12 * span);

    let mut next_output = output_dt.map(|o| t0 + o);
    let mut output_index = 1usize;
    let mut steps = 0usize;
    let h_floor = 1e-14 * (t0.abs().max(t_end.abs())).max(span);

    while t < t_end {
        let mut h_try = h.min(t_end - t);
        let mut hits_output = false;
        if let Some(to) = next_output {
            if to < t_end && t + h_try >= to {
                h_try = to - t;
                hits_output = true;
            }
        }
        if h_try < h_floor {
            if hits_output {
                // Landed on an output time within roundoff.
                h_try = h_try.max(0.0);
            } else {
                return Err(Error::Stiffness { t });
            }
        }
        let hh = h_try;
        for i in 0..n {
            tmp[i] = y[i] + hh * A21 * k[0][i];
        }
        sys.rhs(t + C2 * hh, &tmp, &mut k[1])?;
        for i in 0..n {
            tmp[i] = y[i] + hh * (A31 * k[0][i] + A32 * k[1][i]);
        }
        sys.rhs(t + C3 * hh, &tmp, &mut k[2])?;
        for i in 0..n {
            tmp[i] = y[i] + hh * (A41 * k[0][i] + A42 * k[1][i] + A43 * k[2][i]);
        }
        sys.rhs(t + C4 * hh, &tmp, &mut k[3])?;
        for i in 0..n {
            tmp[i] = y[i] + hh * (A51 * k[0][i] + A52 * k[1][i] + A53 * k[2][i] + A54 * k[3][i]);
        }
        sys.rhs(t + C5 * hh, &tmp, &mut k[4])?;
        for i in 0..n {
            tmp[i] = y[i]
                + hh * (A61 * k[0][i] + A62 * k[1][i] + A63 * k[2][i] + A64 * k[3][i] + A65 * k[4][i]);
        }
        sys.rhs(t + hh, &tmp, &mut k[5])?;
        for i in 0..n {
            y_new[i] = y[i]
                + hh * (B1 * k[0][i] + B3 * k[2][i] + B4 * k[3][i] + B5 * k[4][i] + B6 * k[5][i]);
        }
        sys.rhs(t + hh, &y_new, &mut k[6])?;
        let mut err = 0.0;
        for i in 0..n {
            let e = hh
                * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i]
                    + E7 * k[6][i]);
            let sc = atol + rtol * y[i].abs().max(y_new[i].abs());
            err += (e / sc) * (e / sc);
        }
        let err = (err / n as f64).sqrt();
        if !err.is_finite() {
            if !y_new.iter().all(|v| v.is_finite()) && hh <= h_floor * 10.0 {
                return Err(Error::NonFinite { t, last_state: y.clone() });
            }
            h = 0.1 * hh;
            if h < h_floor {
                return Err(Error::NonFinite { t, last_state: y.clone() });
            }
            continue;
        }
        if err <= 1.0 {
            t = if hits_output { next_output.unwrap() } else { t + hh };
            if t_end - t < h_floor {
                t = t_end;
            }
            std::mem::swap(&mut y, &mut y_new);
            sys.project(&mut y);
            check_finite(t, &y, &y_new)?;
            steps += 1;
            // FSAL: the last stage is the first stage of the next step, unless projected.
            sys.rhs(t, &y, &mut k[0])?;
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if !hits_output || hh >= h {
                h = (hh * fac).min(h_max);
            }
            let emit = match next_output {
                None => true,
                Some(_) if hits_output => {
                    output_index += 1;
                    next_output = output_dt.map(|o| t0 + o * output_index as f64);
                    true
                }
                Some(_) => t >= t_end,
            };
            if emit && observe(t, &y) == Flow::Stop {
                return Ok(Outcome { t, y, steps, stopped: true });
            }
        } else {
            h = hh * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            if h < h_floor {
                return Err(Error::Stiffness { t });
            }
        }
    }
    Ok(Outcome { t: t_end, y, steps, stopped: false })
}

fn rms_scaled(v: &[f64], y: &[f64], atol: f64, rtol: f64) -> f64 {
    let s: f64 = v
        .iter()
        .zip(y)
        .map(|(vi, yi)| {
            let sc = atol + rtol * yi.abs();
            (vi / sc).powi(2)
        })
        .sum();
    (s / v.len() as f64).sqrt()
}
