//! Guiding-centre transform of the lab-frame rotating saddle
//! `V̈ + ω_r² S(Ωt) V = 0`.

use nalgebra::{Matrix2, Vector2};

/// `S(Ωt) = [[cos 2Ωt, sin 2Ωt], [sin 2Ωt, −cos 2Ωt]]`.
pub fn saddle_matrix_s(omega: f64, t: f64) -> Matrix2<f64> {
    let (s, c) = (2.0 * omega * t).sin_cos();
    Matrix2::new(c, s, s, -c)
}

/// `W = V − ¼(ω_r/Ω)² S(Ωt)(V − J V̇/Ω)` with `J = [[0, −1], [1, 0]]`.
pub fn guiding_center(v: Vector2<f64>, v_dot: Vector2<f64>, omega_r: f64, omega: f64, t: f64) -> Vector2<f64> {
    let j = Matrix2::new(0.0, -1.0, 1.0, 0.0);
    let k = 0.25 * (omega_r / omega).powi(2);
    v - k * saddle_matrix_s(omega, t) * (v - j * v_dot / omega)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_saddle_is_identity() {
        let v = Vector2::new(0.3, -0.2);
        let w = guiding_center(v, Vector2::new(1.0, 2.0), 0.0, 5.0, 0.7);
        assert_eq!(w, v);
    }

    #[test]
    fn s_is_symmetric_traceless_involution() {
        let s = saddle_matrix_s(3.0, 0.41);
        assert!((s - s.transpose()).norm() < 1e-15);
        assert!(s.trace().abs() < 1e-15);
        assert!((s * s - Matrix2::identity()).norm() < 1e-15);
    }
}
