//! Homogeneously magnetised cuboid, closed-form surface-charge solution.
//!
//! Observers are first mapped into the octant `x ≥ 0, y ≤ 0, z ≤ 0` where the
//! expressions are free of indeterminate forms; the result is mapped back by
//! per-component sign flips.

use nalgebra::{UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const FLIP_X: [[f64; 3]; 3] = [[1.0, -1.0, -1.0], [-1.0, 1.0, 1.0], [-1.0, 1.0, 1.0]];
const FLIP_Y: [[f64; 3]; 3] = [[1.0, -1.0, 1.0], [-1.0, 1.0, -1.0], [1.0, -1.0, 1.0]];
const FLIP_Z: [[f64; 3]; 3] = [[1.0, 1.0, -1.0], [1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];

/// B-field of a cuboid with edge lengths `dims`, centred at the origin and
/// aligned with the axes, carrying uniform polarization `pol` (T).
///
/// Valid inside and outside the body. Returns non-finite components on edges.
pub fn cuboid_field_local(p: &Vector3<f64>, dims: &Vector3<f64>, pol: &Vector3<f64>) -> Vector3<f64> {
    let (a, b, c) = (0.5 * dims.x, 0.5 * dims.y, 0.5 * dims.z);
    let (mut x, mut y, mut z) = (p.x, p.y, p.z);
    let mut qs = [[1.0f64; 3]; 3];
    let mut apply = |flip: &[[f64; 3]; 3]| {
        for j in 0..3 {
            for k in 0..3 {
                qs[j][k] *= flip[j][k];
            }
        }
    };
    if x < 0.0 {
        x = -x;
        apply(&FLIP_X);
    }
    if y > 0.0 {
        y = -y;
        apply(&FLIP_Y);
    }
    if z > 0.0 {
        z = -z;
        apply(&FLIP_Z);
    }

    let (xma, xpa) = (x - a, x + a);
    let (ymb, ypb) = (y - b, y + b);
    let (zmc, zpc) = (z - c, z + c);
    let (xma2, xpa2) = (xma * xma, xpa * xpa);
    let (ymb2, ypb2) = (ymb * ymb, ypb * ypb);
    let (zmc2, zpc2) = (zmc * zmc, zpc * zpc);

    let mmm = (xma2 + ymb2 + zmc2).sqrt();
    let pmp = (xpa2 + ymb2 + zpc2).sqrt();
    let pmm = (xpa2 + ymb2 + zmc2).sqrt();
    let mmp = (xma2 + ymb2 + zpc2).sqrt();
    let mpm = (xma2 + ypb2 + zmc2).sqrt();
    let ppp = (xpa2 + ypb2 + zpc2).sqrt();
    let ppm = (xpa2 + ypb2 + zmc2).sqrt();
    let mpp = (xma2 + ypb2 + zpc2).sqrt();

    let ff2x = ((xma + mmm) * (xpa + ppm) * (xpa + pmp) * (xma + mpp)).ln()
        - ((xpa + pmm) * (xma + mpm) * (xma + mmp) * (xpa + ppp)).ln();
    let ff2y = ((-ymb + mmm) * (-ypb + ppm) * (-ymb + pmp) * (-ypb + mpp)).ln()
        - ((-ymb + pmm) * (-ypb + mpm) * (ymb - mmp) * (ypb - ppp)).ln();
    let ff2z = ((-zmc + mmm) * (-zmc + ppm) * (-zpc + pmp) * (-zpc + mpp)).ln()
        - ((-zmc + pmm) * (zmc - mpm) * (-zpc + mmp) * (zpc - ppp)).ln();

    let ff1x = (ymb * zmc).atan2(xma * mmm) - (ymb * zmc).atan2(xpa * pmm) - (ypb * zmc).atan2(xma * mpm)
        + (ypb * zmc).atan2(xpa * ppm)
        - (ymb * zpc).atan2(xma * mmp)
        + (ymb * zpc).atan2(xpa * pmp)
        + (ypb * zpc).atan2(xma * mpp)
        - (ypb * zpc).atan2(xpa * ppp);
    let ff1y = (xma * zmc).atan2(ymb * mmm) - (xpa * zmc).atan2(ymb * pmm) - (xma * zmc).atan2(ypb * mpm)
        + (xpa * zmc).atan2(ypb * ppm)
        - (xma * zpc).atan2(ymb * mmp)
        + (xpa * zpc).atan2(ymb * pmp)
        + (xma * zpc).atan2(ypb * mpp)
        - (xpa * zpc).atan2(ypb * ppp);
    let ff1z = (xma * ymb).atan2(zmc * mmm) - (xpa * ymb).atan2(zmc * pmm) - (xma * ypb).atan2(zmc * mpm)
        + (xpa * ypb).atan2(zmc * ppm)
        - (xma * ymb).atan2(zpc * mmp)
        + (xpa * ymb).atan2(zpc * pmp)
        + (xma * ypb).atan2(zpc * mpp)
        - (xpa * ypb).atan2(zpc * ppp);

    // Skip absent polarization components: their log terms may be infinite on
    // edges that carry no charge for this magnetization, and 0·∞ is NaN.
    let mut bv = Vector3::zeros();
    if pol.x != 0.0 {
        bv += pol.x * Vector3::new(ff1x * qs[0][0], ff2z * qs[0][1], ff2y * qs[0][2]);
    }
    if pol.y != 0.0 {
        bv += pol.y * Vector3::new(ff2z * qs[1][0], ff1y * qs[1][1], -ff2x * qs[1][2]);
    }
    if pol.z != 0.0 {
        bv += pol.z * Vector3::new(ff2y * qs[2][0], -ff2x * qs[2][1], ff1z * qs[2][2]);
    }
    bv / (4.0 * std::f64::consts::PI)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuboidMagnet {
    pub center: Vector3<f64>,
    /// Magnet-to-lab rotation, serialised as `[w, x, y, z]`.
    #[serde(default = "UnitQuaternion::identity", with = "crate::model::serde_quat")]
    pub orientation: UnitQuaternion<f64>,
    /// Edge lengths along the magnet's own axes, m.
    pub dims: Vector3<f64>,
    /// Remanent polarization magnitude, T.
    pub b_sat: f64,
    /// Magnetization direction in the magnet frame.
    #[serde(default = "default_axis")]
    pub axis: Vector3<f64>,
}

fn default_axis() -> Vector3<f64> {
    Vector3::z()
}

impl CuboidMagnet {
    pub fn cube(center: Vector3<f64>, side: f64, b_sat: f64, axis: Vector3<f64>) -> Self {
        Self { center, orientation: UnitQuaternion::identity(), dims: Vector3::repeat(side), b_sat, axis }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
            return Err(Error::InvalidGeometry(format!("cuboid dims must be positive: {:?}", self.dims)));
        }
        if !self.b_sat.is_finite() {
            return Err(Error::InvalidInput("cuboid b_sat must be finite".into()));
        }
        if (self.axis.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidGeometry("cuboid magnetization axis must be a unit vector".into()));
        }
        Ok(())
    }

    pub fn characteristic_length(&self) -> f64 {
        self.dims.max()
    }

    pub fn polarization_local(&self) -> Vector3<f64> {
        self.b_sat * self.axis
    }

    /// Field at a lab point; edge points are nudged by `1e-9·size`.
    pub fn field(&self, p: &Vector3<f64>) -> Option<Vector3<f64>> {
        let local = self.orientation.inverse() * (p - self.center);
        let pol = self.polarization_local();
        let mut b = cuboid_field_local(&local, &self.dims, &pol);
        if !b.iter().all(|v| v.is_finite()) {
            let nudge = Vector3::repeat(1e-9 * self.characteristic_length() / 3f64.sqrt());
            b = cuboid_field_local(&(local + nudge), &self.dims, &pol);
        }
        b.iter().all(|v| v.is_finite()).then(|| self.orientation * b)
    }

    pub fn contains(&self, p: &Vector3<f64>) -> bool {
        let local = self.orientation.inverse() * (p - self.center);
        (0..3).all(|k| local[k].abs() < 0.5 * self.dims[k])
    }

    /// Magnet rigidly rotated by `rot` about the origin.
    pub fn rotated(&self, rot: &UnitQuaternion<f64>) -> Self {
        Self { center: rot * self.center, orientation: rot * self.orientation, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::gauss_legendre_on;
    use approx::assert_relative_eq;

    fn dipole(m_times_mu0: Vector3<f64>, r: Vector3<f64>) -> Vector3<f64> {
        // μ0 m / 4π · (3 r̂ (r̂·m) − m) / r³
        let d = r.norm();
        let u = r / d;
        (3.0 * u * u.dot(&m_times_mu0) - m_times_mu0) / (4.0 * std::f64::consts::PI * d.powi(3))
    }

    #[test]
    fn cube_centre_is_two_thirds_polarization() {
        for axis in [Vector3::x(), Vector3::y(), Vector3::z()] {
            let b = cuboid_field_local(&Vector3::zeros(), &Vector3::repeat(2e-3), &(1.3 * axis));
            assert_relative_eq!(b, 1.3 * 2.0 / 3.0 * axis, epsilon = 1e-14);
        }
    }

    #[test]
    fn on_axis_far_field_matches_dipole() {
        let side: f64 = 5e-3;
        let m = Vector3::new(0.0, 0.0, f64::powi(side, 3));
        for dir in [Vector3::x(), Vector3::z(), Vector3::new(-1.0, 2.0, 0.5).normalize()] {
            let r = 10.0 * side * dir;
            let b = cuboid_field_local(&r, &Vector3::repeat(side), &Vector3::z());
            let bd = dipole(m, r);
            assert!((b - bd).norm() / bd.norm() < 1e-2);
        }
    }

    #[test]
    fn dipole_error_scales_quadratically() {
        let side = 1.0;
        let dims = Vector3::new(side, 0.7 * side, 1.3 * side);
        let pol = Vector3::new(0.2, -0.5, 1.0);
        let m = pol * dims.x * dims.y * dims.z;
        let dir = Vector3::new(0.3, -0.8, 0.52).normalize();
        let errs: Vec<f64> = [5.0, 10.0, 20.0]
            .iter()
            .map(|&d| {
                let r = d * side * dir;
                let b = cuboid_field_local(&r, &dims, &pol);
                (b - dipole(m, r)).norm() / dipole(m, r).norm()
            })
            .collect();
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((ratio - 4.0).abs() < 0.4, "ratio {ratio}, errors {errs:?}");
        }
    }

    #[test]
    fn matches_volume_integral_of_dipoles() {
        // Oracle: superpose point dipoles over a fine Gauss grid of the body.
        let dims = Vector3::new(2.0, 1.0, 1.5);
        let pol = Vector3::new(0.3, 0.4, -1.0);
        let rule: Vec<_> = (0..3).map(|k| gauss_legendre_on(12, -0.5 * dims[k], 0.5 * dims[k])).collect();
        for p in [Vector3::new(2.5, 0.3, -0.2), Vector3::new(-0.4, -1.9, 1.7), Vector3::new(0.1, 0.2, 3.0)] {
            let mut b = Vector3::zeros();
            for &(x, wx) in &rule[0] {
                for &(y, wy) in &rule[1] {
                    for &(z, wz) in &rule[2] {
                        b += dipole(pol * wx * wy * wz, p - Vector3::new(x, y, z));
                    }
                }
            }
            let got = cuboid_field_local(&p, &dims, &pol);
            assert_relative_eq!(got, b, max_relative = 1e-6, epsilon = 1e-9);
        }
    }

    #[test]
    fn reference_values() {
        // Values frozen from an independent implementation (magpylib 5.1).
        let dims = Vector3::new(1.0, 2.0, 3.0);
        let cases = [
            ([1.0, 2.0, 3.0], [0.1, 0.2, 0.3], [0.002_596_336_389_151_697_7, 0.004_530_333_940_271_133, 0.005_840_059_171_458_931]),
            ([-0.7, 0.2, -1.1], [-0.5, 0.8, 0.3], [-0.111_384_573_656_878_97, -0.098_107_597_735_535_58, -0.109_629_682_444_317_28]),
            ([0.1, -0.2, 0.3], [0.0, 0.0, 1.0], [0.003_505_106_215_224_121, -0.004_347_663_091_825_268, 0.881_570_546_919_353_7]),
        ];
        for (p, pol, expected) in cases {
            let b = cuboid_field_local(&Vector3::from(p), &dims, &Vector3::from(pol));
            assert_relative_eq!(b, Vector3::from(expected), max_relative = 1e-12);
        }
    }

    #[test]
    fn edge_points_are_nudged() {
        let m = CuboidMagnet::cube(Vector3::zeros(), 1.0, 1.0, Vector3::z());
        let b = m.field(&Vector3::new(0.5, 0.5, 0.0));
        assert!(b.is_some());
        let b = m.field(&Vector3::new(0.5, 0.5, 0.5));
        assert!(b.is_none_or(|v| v.iter().all(|c| c.is_finite())));
    }

    #[test]
    fn rotated_magnet_matches_rotated_field() {
        let m = CuboidMagnet {
            center: Vector3::new(0.01, 0.0, 0.0),
            orientation: UnitQuaternion::identity(),
            dims: Vector3::new(5e-3, 4e-3, 3e-3),
            b_sat: 1.0,
            axis: Vector3::z(),
        };
        let rot = UnitQuaternion::from_axis_angle(&Vector3::z_axis(), 0.7);
        let p = Vector3::new(0.003, -0.002, 0.01);
        let direct = m.rotated(&rot).field(&(rot * p)).unwrap();
        assert_relative_eq!(direct, rot * m.field(&p).unwrap(), max_relative = 1e-12);
    }
}
