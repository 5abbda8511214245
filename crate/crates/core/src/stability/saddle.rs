//! Rotating-saddle stability in the co-rotating frame.

use nalgebra::Matrix4;
use num_complex::Complex64;

use super::{SpectrumKind, StabilityReport};
use crate::error::Result;
use crate::stability::formulas::{precession_frequency_saddle, secular_frequency_saddle};

/// `U̇ = A U` for `U = (X, Y, Ẋ, Ẏ)` in the frame rotating at `Ω`.
pub fn saddle_stability_matrix(omega_r: f64, omega: f64) -> Matrix4<f64> {
    let (wr2, w2) = (omega_r * omega_r, omega * omega);
    Matrix4::new(
        0.0, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        w2 - wr2, 0.0, 0.0, 2.0 * omega, //
        0.0, wr2 + w2, -2.0 * omega, 0.0,
    )
}

/// Eigenvalues from the closed-form roots `λ² = ±ω_r² − Ω²`.
pub fn saddle_eigenvalues(omega_r: f64, omega: f64) -> [Complex64; 4] {
    let (wr2, w2) = (omega_r * omega_r, omega * omega);
    let a = Complex64::new(wr2 - w2, 0.0).sqrt();
    let b = Complex64::new(-wr2 - w2, 0.0).sqrt();
    [a, -a, b, -b]
}

/// `Ω > ω_r`; the boundary itself counts as unstable.
pub fn is_stable_saddle(omega_r: f64, omega: f64) -> bool {
    omega > omega_r
}

/// Signed margin, continuous across the boundary: `+√(Ω² − ω_r²)` (the
/// slowest rotating-frame oscillation) when stable, `−√(ω_r² − Ω²)` (minus
/// the growth rate) otherwise.
pub fn saddle_margin(omega_r: f64, omega: f64) -> f64 {
    let d = omega * omega - omega_r * omega_r;
    if d == 0.0 {
        0.0
    } else {
        d.signum() * d.abs().sqrt()
    }
}

pub fn saddle_report(omega_r: f64, omega: f64) -> Result<StabilityReport> {
    let stable = is_stable_saddle(omega_r, omega);
    let secular = if omega > 0.0 {
        vec![secular_frequency_saddle(omega_r, omega)?, precession_frequency_saddle(omega_r, omega)?]
    } else {
        Vec::new()
    };
    Ok(StabilityReport {
        kind: SpectrumKind::Eigenvalues,
        values: saddle_eigenvalues(omega_r, omega).to_vec(),
        stable,
        margin: saddle_margin(omega_r, omega),
        secular_frequencies: secular,
        q_parameters: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_parameters_leave_kinematics() {
        let a = saddle_stability_matrix(0.0, 0.0);
        let mut expect = Matrix4::zeros();
        expect[(0, 2)] = 1.0;
        expect[(1, 3)] = 1.0;
        assert_eq!(a, expect);
    }

    fn char_poly_at(a: &Matrix4<f64>, lambda: Complex64) -> Complex64 {
        let m = a.map(|v| Complex64::new(v, 0.0)) - nalgebra::Matrix4::<Complex64>::identity() * lambda;
        m.determinant()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn characteristic_polynomial(wr in 0.0f64..10.0, w in 0.0f64..10.0) {
            let a = saddle_stability_matrix(wr, w);
            // det(A − λ) = λ⁴ + 2Ω²λ² + Ω⁴ − ω_r⁴ at several probe points.
            for l in [Complex64::new(0.3, 0.0), Complex64::new(-1.1, 0.7), Complex64::new(0.0, 2.0)] {
                let expect = l.powi(4) + 2.0 * w * w * l * l + w.powi(4) - wr.powi(4);
                let got = char_poly_at(&a, l);
                prop_assert!((got - expect).norm() <= 1e-9 * (1.0 + expect.norm()));
            }
        }

        #[test]
        fn eigenvalues_match_general_solver(wr in 0.01f64..10.0, w in 0.01f64..10.0) {
            let mut general: Vec<Complex64> = saddle_stability_matrix(wr, w).complex_eigenvalues().iter().copied().collect();
            let closed = saddle_eigenvalues(wr, w);
            let scale = wr.max(w);
            for l in closed {
                let sq = l * l;
                prop_assert!((sq - Complex64::new(wr * wr - w * w, 0.0)).norm() < 1e-10 * scale * scale
                    || (sq - Complex64::new(-wr * wr - w * w, 0.0)).norm() < 1e-10 * scale * scale);
                let k = general.iter().enumerate()
                    .min_by(|a, b| (a.1 - l).norm().partial_cmp(&(b.1 - l).norm()).unwrap()).unwrap().0;
                prop_assert!((general[k] - l).norm() < 1e-6 * scale);
                general.remove(k);
            }
        }
    }

    #[test]
    fn stability_examples() {
        assert!(!is_stable_saddle(1.0, 0.9));
        assert!(is_stable_saddle(1.0, 1.1));
        assert!(saddle_eigenvalues(1.0, 1.1).iter().all(|l| l.re <= 0.0));
        let general = saddle_stability_matrix(1.0, 1.1).complex_eigenvalues();
        assert!(general.iter().all(|l| l.re <= 1e-9));
        let marginal = saddle_report(1.0, 1.0).unwrap();
        assert!(!marginal.stable);
        assert_eq!(marginal.margin, 0.0);
    }

    #[test]
    fn margin_is_continuous_and_signed() {
        let mut prev = saddle_margin(1.0, 0.5);
        assert!(prev < 0.0);
        for k in 1..=200 {
            let w = 0.5 + k as f64 * 0.005;
            let m = saddle_margin(1.0, w);
            assert!(m >= prev);
            assert!((m - prev).abs() < 0.11);
            prev = m;
        }
        assert!(prev > 0.0);
    }
}
