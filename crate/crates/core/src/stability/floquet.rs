//! Floquet analysis of linear periodic systems `ẋ = A(t) x`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{SpectrumKind, StabilityReport};
use crate::dynamics::guiding_center::saddle_matrix_s;
use crate::error::{Error, Result};
use crate::numerics::{solve, Flow, Method, OdeSystem};

/// Multipliers up to `1 + MULTIPLIER_TOL` in modulus count as stable.
pub const MULTIPLIER_TOL: f64 = 1e-6;

/// A linear system with `T`-periodic coefficients.
pub trait PeriodicLinear: Sync {
    fn dim(&self) -> usize;
    fn period(&self) -> f64;
    fn matrix(&self, t: f64) -> DMatrix<f64>;
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloquetResult {
    pub monodromy: DMatrix<f64>,
    pub multipliers: Vec<Complex64>,
    pub max_modulus: f64,
    pub stable: bool,
}

impl FloquetResult {
    pub fn report(&self) -> StabilityReport {
        StabilityReport {
            kind: SpectrumKind::FloquetMultipliers,
            values: self.multipliers.clone(),
            stable: self.stable,
            margin: 1.0 - self.max_modulus,
            secular_frequencies: Vec::new(),
            q_parameters: None,
        }
    }
}

struct Fundamental<'a, P: PeriodicLinear + ?Sized>(&'a P);

impl<P: PeriodicLinear + ?Sized> OdeSystem for Fundamental<'_, P> {
    fn dim(&self) -> usize {
        self.0.dim() * self.0.dim()
    }

    fn rhs(&self, t: f64, y: &[f64], dydt: &mut [f64]) -> Result<()> {
        let n = self.0.dim();
        let phi = DMatrix::from_column_slice(n, n, y);
        let d = self.0.matrix(t) * phi;
        dydt.copy_from_slice(d.as_slice());
        Ok(())
    }
}

/// Tolerances used for reproducible multipliers.
pub fn monodromy_method() -> Method {
    Method::Rk45 { rtol: 1e-10, atol: 1e-12, h_max: None }
}

/// Fundamental matrix over one period, started from the identity.
pub fn floquet_monodromy<P: PeriodicLinear + ?Sized>(system: &P) -> Result<FloquetResult> {
    floquet_monodromy_with(system, &monodromy_method())
}

pub fn floquet_monodromy_with<P: PeriodicLinear + ?Sized>(system: &P, method: &Method) -> Result<FloquetResult> {
    let n = system.dim();
    let period = system.period();
    crate::error::ensure_positive("period", period)?;
    let id = DMatrix::<f64>::identity(n, n);
    let out = solve(&Fundamental(system), method, 0.0, id.as_slice(), period, Some(period), |_, _| Flow::Continue)?;
    let monodromy = DMatrix::from_column_slice(n, n, &out.y);
    if monodromy.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { t: period, last_state: out.y });
    }
    let multipliers: Vec<Complex64> = monodromy.complex_eigenvalues().iter().copied().collect();
    let max_modulus = multipliers.iter().map(|m| m.norm()).fold(0.0, f64::max);
    Ok(FloquetResult { monodromy, multipliers, max_modulus, stable: max_modulus <= 1.0 + MULTIPLIER_TOL })
}

/// Characteristic exponents `ln(μ)/T`; the imaginary parts are only defined
/// modulo `2π/T`.
pub fn floquet_exponents(result: &FloquetResult, period: f64) -> Vec<Complex64> {
    result.multipliers.iter().map(|m| m.ln() / period).collect()
}

/// Constant-coefficient system, mainly a test of the machinery.
pub struct Autonomous {
    pub a: DMatrix<f64>,
    pub period: f64,
}

impl PeriodicLinear for Autonomous {
    fn dim(&self) -> usize {
        self.a.nrows()
    }
    fn period(&self) -> f64 {
        self.period
    }
    fn matrix(&self, _t: f64) -> DMatrix<f64> {
        self.a.clone()
    }
}

/// Lab-frame rotating saddle `V̈ = −ω_r² S(Ωt) V`, period `π/Ω`.
pub struct LabSaddle {
    pub omega_r: f64,
    pub omega: f64,
}

impl PeriodicLinear for LabSaddle {
    fn dim(&self) -> usize {
        4
    }
    fn period(&self) -> f64 {
        std::f64::consts::PI / self.omega
    }
    fn matrix(&self, t: f64) -> DMatrix<f64> {
        let s = saddle_matrix_s(self.omega, t) * (-self.omega_r * self.omega_r);
        let mut a = DMatrix::zeros(4, 4);
        a[(0, 2)] = 1.0;
        a[(1, 3)] = 1.0;
        a.view_mut((2, 0), (2, 2)).copy_from(&s);
        a
    }
}

/// Mathieu equation `x″ + (a − 2q cos 2τ) x = 0` in the scaled time `τ`,
/// period `π`.
pub struct Mathieu {
    pub a: f64,
    pub q: f64,
}

impl PeriodicLinear for Mathieu {
    fn dim(&self) -> usize {
        2
    }
    fn period(&self) -> f64 {
        std::f64::consts::PI
    }
    fn matrix(&self, t: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -(self.a - 2.0 * self.q * (2.0 * t).cos()), 0.0])
    }
}

/// Characteristic exponent `β` of a stable Mathieu solution, from the
/// monodromy trace `2cos(πβ)`, in `[0, 1]`.
pub fn mathieu_beta(a: f64, q: f64) -> Result<f64> {
    let r = floquet_monodromy(&Mathieu { a, q })?;
    let half_trace = 0.5 * r.monodromy.trace();
    if half_trace.abs() > 1.0 {
        return Err(Error::Range(format!("Mathieu (a={a}, q={q}) is unstable")));
    }
    Ok(half_trace.acos() / std::f64::consts::PI)
}

/// Exact secular frequency of `z̈ = k cos(Ωt) z`, the chip-trap axial
/// equation, via its Mathieu form with `a = 0`, `q = 2k/Ω²`.
pub fn exact_secular_z(q_z: f64, omega: f64) -> Result<f64> {
    Ok(0.5 * omega * mathieu_beta(0.0, q_z)?)
}

/// Direct solution of a state-space system for testing.
pub fn propagate<P: PeriodicLinear + ?Sized>(system: &P, x0: &DVector<f64>, t_end: f64) -> Result<DVector<f64>> {
    struct Sys<'a, P: ?Sized>(&'a P);
    impl<P: PeriodicLinear + ?Sized> OdeSystem for Sys<'_, P> {
        fn dim(&self) -> usize {
            self.0.dim()
        }
        fn rhs(&self, t: f64, y: &[f64], d: &mut [f64]) -> Result<()> {
            let v = self.0.matrix(t) * DVector::from_column_slice(y);
            d.copy_from_slice(v.as_slice());
            Ok(())
        }
    }
    let out = solve(&Sys(system), &monodromy_method(), 0.0, x0.as_slice(), t_end, Some(t_end), |_, _| Flow::Continue)?;
    Ok(DVector::from_vec(out.y))
}
