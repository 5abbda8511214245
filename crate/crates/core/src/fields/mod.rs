//! Magnetic field sources, superposition and derived quantities.

pub mod cuboid;
pub mod current_loop;
pub mod curvature;
pub mod map;
pub mod source;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

pub use cuboid::CuboidMagnet;
pub use current_loop::{CircularLoop, Drive};
pub use curvature::{extract_saddle_curvature, CurvatureFit, CurvatureOptions, FitAxis};
pub use map::{field_map, GridAxis, GridSpec, MapSample};
pub use source::{FieldSource, RotatingPlatform};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub position: Vector3<f64>,
    pub time: f64,
    pub b: Vector3<f64>,
    /// `grad[i][j] = ∂B_i/∂x_j`.
    pub grad: Option<Matrix3<f64>>,
}

fn singular(index: usize, p: &Vector3<f64>) -> Error {
    Error::SingularField { index, point: [p.x, p.y, p.z] }
}

/// Total field without the gradient.
pub fn field_value(p: &Vector3<f64>, t: f64, sources: &[FieldSource]) -> Result<Vector3<f64>> {
    let mut b = Vector3::zeros();
    for (i, s) in sources.iter().enumerate() {
        b += s.field(p, t).ok_or_else(|| singular(i, p))?;
    }
    Ok(b)
}

/// Total field and gradient by superposition.
pub fn field_total(p: &Vector3<f64>, t: f64, sources: &[FieldSource]) -> Result<FieldSample> {
    let mut b = Vector3::zeros();
    let mut grad = Matrix3::zeros();
    for (i, s) in sources.iter().enumerate() {
        b += s.field(p, t).ok_or_else(|| singular(i, p))?;
        grad += s.gradient(p, t).ok_or_else(|| singular(i, p))?;
    }
    Ok(FieldSample { position: *p, time: t, b, grad: Some(grad) })
}

pub fn validate_sources(sources: &[FieldSource]) -> Result<()> {
    sources.iter().try_for_each(FieldSource::validate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn empty_list_is_zero() {
        let s = field_total(&Vector3::new(1.0, 2.0, 3.0), 0.0, &[]).unwrap();
        assert_eq!(s.b, Vector3::zeros());
        assert_eq!(s.grad, Some(Matrix3::zeros()));
    }

    #[test]
    fn bias_plus_gradient_at_origin() {
        let src = [
            FieldSource::Homogeneous { b0: 0.01, direction: Vector3::z() },
            FieldSource::Gradient { b2_prime: 0.0862 },
        ];
        let s = field_total(&Vector3::zeros(), 0.0, &src).unwrap();
        assert_eq!(s.b, Vector3::new(0.0, 0.0, 0.01));
    }

    #[test]
    fn superposition_is_linear() {
        let a = FieldSource::CircularLoop(CircularLoop::new(1e-4, Vector3::zeros(), 0.1));
        let b = FieldSource::CuboidMagnet(CuboidMagnet::cube(Vector3::new(0.0, 0.0, -1e-3), 5e-4, 1.0, Vector3::x()));
        let p = Vector3::new(3e-5, -2e-5, 4e-5);
        let both = field_total(&p, 0.0, &[a.clone(), b.clone()]).unwrap();
        let sa = field_total(&p, 0.0, &[a]).unwrap();
        let sb = field_total(&p, 0.0, &[b]).unwrap();
        assert_eq!(both.b, sa.b + sb.b);
        assert_relative_eq!(both.grad.unwrap(), sa.grad.unwrap() + sb.grad.unwrap(), max_relative = 1e-15);
    }

    #[test]
    fn singular_points_report_source_index() {
        let src = [
            FieldSource::Homogeneous { b0: 1.0, direction: Vector3::z() },
            FieldSource::CircularLoop(CircularLoop::new(1.0, Vector3::zeros(), 1.0)),
        ];
        match field_total(&Vector3::new(1.0, 0.0, 0.0), 0.0, &src) {
            Err(Error::SingularField { index, .. }) => assert_eq!(index, 1),
            other => panic!("{other:?}"),
        }
    }
}
