use nalgebra::{Matrix3, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};

use super::cuboid::CuboidMagnet;
use super::current_loop::CircularLoop;
use crate::error::{Error, Result};

/// Relative step of the fourth-order central-difference gradient.
pub const GRADIENT_STEP: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FieldSource {
    /// Uniform bias `B0·n̂`.
    Homogeneous { b0: f64, direction: Vector3<f64> },
    /// Quadrupole `B2′(−x/2, −y/2, z)`.
    Gradient { b2_prime: f64 },
    CuboidMagnet(CuboidMagnet),
    CircularLoop(CircularLoop),
    RotatingPlatform(RotatingPlatform),
    /// Oscillating parabolic field
    /// `(B1″/2)cos(Ωt+φ)[(z² − (x²+y²)/2)e_z − xz e_x − yz e_y]`.
    HarmonicChipField {
        b1_pp: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    /// Ideal rotating saddle: in the frame co-rotating at Ω the field is
    /// `b(ZX, −ZY, (X²−Y²)/2)`, so that `B_z = (b/2)[(x²−y²)cos2Ωt + 2xy sin2Ωt]`.
    RotatingSaddle { b_pp: f64, omega: f64 },
}

impl FieldSource {
    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!("{name} must be finite")))
            }
        };
        let rate = |v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!("angular frequency must be non-negative, got {v}")))
            }
        };
        match self {
            FieldSource::Homogeneous { b0, direction } => {
                finite("b0", *b0)?;
                if !(direction.norm() > 0.0) {
                    return Err(Error::InvalidInput("homogeneous field direction must be non-zero".into()));
                }
                Ok(())
            }
            FieldSource::Gradient { b2_prime } => finite("b2_prime", *b2_prime),
            FieldSource::CuboidMagnet(m) => m.validate(),
            FieldSource::CircularLoop(l) => l.validate(),
            FieldSource::RotatingPlatform(p) => p.validate(),
            FieldSource::HarmonicChipField { b1_pp, omega, phase } => {
                finite("b1_pp", *b1_pp)?;
                finite("phase", *phase)?;
                rate(*omega)
            }
            FieldSource::RotatingSaddle { b_pp, omega } => {
                finite("b_pp", *b_pp)?;
                rate(*omega)
            }
        }
    }

    /// Length scale for finite-difference gradients; `None` for analytic sources.
    pub fn characteristic_length(&self) -> Option<f64> {
        match self {
            FieldSource::CuboidMagnet(m) => Some(m.characteristic_length()),
            FieldSource::CircularLoop(l) => Some(l.radius),
            FieldSource::RotatingPlatform(p) => Some(p.characteristic_length()),
            _ => None,
        }
    }

    /// Field at `p` and `t`; `None` where the source is singular.
    pub fn field(&self, p: &Vector3<f64>, t: f64) -> Option<Vector3<f64>> {
        match self {
            FieldSource::Homogeneous { b0, direction } => Some(*b0 * direction.normalize()),
            FieldSource::Gradient { b2_prime } => Some(*b2_prime * Vector3::new(-0.5 * p.x, -0.5 * p.y, p.z)),
            FieldSource::CuboidMagnet(m) => m.field(p),
            FieldSource::CircularLoop(l) => l.field(p, t),
            FieldSource::RotatingPlatform(pl) => pl.field(p, t),
            FieldSource::HarmonicChipField { b1_pp, omega, phase } => {
                let c = 0.5 * b1_pp * (omega * t + phase).cos();
                Some(c * Vector3::new(-p.x * p.z, -p.y * p.z, p.z * p.z - 0.5 * (p.x * p.x + p.y * p.y)))
            }
            FieldSource::RotatingSaddle { b_pp, omega } => {
                let rot = UnitQuaternion::from_axis_angle(&Vector3::z_axis(), omega * t);
                let q = rot.inverse() * p;
                let b = *b_pp * Vector3::new(q.z * q.x, -q.z * q.y, 0.5 * (q.x * q.x - q.y * q.y));
                Some(rot * b)
            }
        }
    }

    /// Gradient `G[i][j] = ∂B_i/∂x_j`.
    pub fn gradient(&self, p: &Vector3<f64>, t: f64) -> Option<Matrix3<f64>> {
        match self {
            FieldSource::Homogeneous { .. } => Some(Matrix3::zeros()),
            FieldSource::Gradient { b2_prime } => {
                Some(Matrix3::from_diagonal(&Vector3::new(-0.5, -0.5, 1.0)) * *b2_prime)
            }
            FieldSource::HarmonicChipField { b1_pp, omega, phase } => {
                let c = 0.5 * b1_pp * (omega * t + phase).cos();
                Some(
                    c * Matrix3::new(
                        -p.z, 0.0, -p.x, //
                        0.0, -p.z, -p.y, //
                        -p.x, -p.y, 2.0 * p.z,
                    ),
                )
            }
            FieldSource::RotatingSaddle { b_pp, omega } => {
                let rot = UnitQuaternion::from_axis_angle(&Vector3::z_axis(), omega * t);
                let q = rot.inverse() * p;
                let g = *b_pp
                    * Matrix3::new(
                        q.z, 0.0, q.x, //
                        0.0, -q.z, -q.y, //
                        q.x, -q.y, 0.0,
                    );
                let r = rot.to_rotation_matrix();
                Some(r.matrix() * g * r.matrix().transpose())
            }
            _ => {
                let h = GRADIENT_STEP * self.characteristic_length().unwrap_or(1.0);
                numeric_gradient(|x| self.field(x, t), p, h)
            }
        }
    }

    /// Whether `p` lies inside source material at time `t`.
    pub fn contains(&self, p: &Vector3<f64>, t: f64) -> bool {
        match self {
            FieldSource::CuboidMagnet(m) => m.contains(p),
            FieldSource::RotatingPlatform(pl) => pl.magnets_at(t).iter().any(|m| m.contains(p)),
            _ => false,
        }
    }
}

/// Fourth-order central differences of a vector field.
pub fn numeric_gradient<F>(f: F, p: &Vector3<f64>, h: f64) -> Option<Matrix3<f64>>
where
    F: Fn(&Vector3<f64>) -> Option<Vector3<f64>>,
{
    let mut g = Matrix3::zeros();
    for j in 0..3 {
        let mut e = Vector3::zeros();
        e[j] = h;
        let d = (-f(&(p + 2.0 * e))? + 8.0 * f(&(p + e))? - 8.0 * f(&(p - e))? + f(&(p - 2.0 * e))?) / (12.0 * h);
        g.set_column(j, &d);
    }
    Some(g)
}

/// Four cuboid magnets spinning rigidly about the lab z axis at Ω.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PlatformConfig")]
pub struct RotatingPlatform {
    pub magnets: Vec<CuboidMagnet>,
    /// Rotation rate, rad/s.
    pub omega: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PlatformConfig {
    Explicit { magnets: Vec<CuboidMagnet>, omega: f64 },
    Standard {
        side: f64,
        #[serde(default)]
        thickness: Option<f64>,
        separation: f64,
        #[serde(default = "one")]
        b_sat: f64,
        omega: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl TryFrom<PlatformConfig> for RotatingPlatform {
    type Error = Error;

    fn try_from(c: PlatformConfig) -> Result<Self> {
        let p = match c {
            PlatformConfig::Explicit { magnets, omega } => RotatingPlatform { magnets, omega },
            PlatformConfig::Standard { side, thickness, separation, b_sat, omega } => {
                RotatingPlatform::standard(side, thickness.unwrap_or(side), separation, b_sat, omega)
            }
        };
        p.validate()?;
        Ok(p)
    }
}

impl RotatingPlatform {
    /// Square-section magnets (`side × side × thickness`) centred in the plane
    /// z = 0 at distance `separation/2` from the axis: the pair on the x axis
    /// magnetised +z, the pair on the y axis −z.
    pub fn standard(side: f64, thickness: f64, separation: f64, b_sat: f64, omega: f64) -> Self {
        let r = 0.5 * separation;
        let dims = Vector3::new(side, side, thickness);
        let make = |x: f64, y: f64, sign: f64| CuboidMagnet {
            center: Vector3::new(x, y, 0.0),
            orientation: UnitQuaternion::identity(),
            dims,
            b_sat,
            axis: sign * Vector3::z(),
        };
        Self {
            magnets: vec![make(r, 0.0, 1.0), make(-r, 0.0, 1.0), make(0.0, r, -1.0), make(0.0, -r, -1.0)],
            omega,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.magnets.is_empty() {
            return Err(Error::InvalidGeometry("platform needs at least one magnet".into()));
        }
        if !(self.omega >= 0.0 && self.omega.is_finite()) {
            return Err(Error::InvalidInput("platform omega must be non-negative".into()));
        }
        for m in &self.magnets {
            m.validate()?;
            // Opposite pairs must be co-oriented.
            let partner = self.magnets.iter().any(|o| {
                let mirrored = Vector3::new(-m.center.x, -m.center.y, m.center.z);
                (o.center - mirrored).norm() <= 1e-12 * (1.0 + m.center.norm())
                    && (o.polarization_local() - m.polarization_local()).norm() <= 1e-12 * m.b_sat.abs().max(1.0)
                    && o.dims == m.dims
            });
            if !partner {
                return Err(Error::InvalidGeometry(
                    "platform magnets must come in co-oriented opposite pairs".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn characteristic_length(&self) -> f64 {
        self.magnets.iter().map(|m| m.characteristic_length()).fold(0.0, f64::max)
    }

    pub fn rotation(&self, t: f64) -> UnitQuaternion<f64> {
        UnitQuaternion::from_axis_angle(&Vector3::z_axis(), self.omega * t)
    }

    pub fn magnets_at(&self, t: f64) -> Vec<CuboidMagnet> {
        let rot = self.rotation(t);
        self.magnets.iter().map(|m| m.rotated(&rot)).collect()
    }

    /// Rigid-rotation form `B(p, t) = R(Ωt) B_static(R(−Ωt) p)`.
    pub fn field(&self, p: &Vector3<f64>, t: f64) -> Option<Vector3<f64>> {
        let rot = self.rotation(t);
        let q = rot.inverse() * p;
        let mut b = Vector3::zeros();
        for m in &self.magnets {
            b += m.field(&q)?;
        }
        Some(rot * b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn curl_div(src: &FieldSource, p: &Vector3<f64>, t: f64, h: f64) -> (Vector3<f64>, f64, f64) {
        let g = numeric_gradient(|x| src.field(x, t), p, h).unwrap();
        let curl = Vector3::new(g[(2, 1)] - g[(1, 2)], g[(0, 2)] - g[(2, 0)], g[(1, 0)] - g[(0, 1)]);
        (curl, g.trace(), g.norm())
    }

    #[test]
    fn analytic_gradients_match_differences() {
        let sources = [
            FieldSource::Gradient { b2_prime: 0.08 },
            FieldSource::HarmonicChipField { b1_pp: 1e5, omega: 1e4, phase: 0.2 },
            FieldSource::RotatingSaddle { b_pp: -50.0, omega: 30.0 },
        ];
        let p = Vector3::new(1e-3, -2e-3, 0.5e-3);
        for s in &sources {
            let a = s.gradient(&p, 0.013).unwrap();
            let n = numeric_gradient(|x| s.field(x, 0.013), &p, 1e-5).unwrap();
            assert_relative_eq!(a, n, max_relative = 1e-8, epsilon = 1e-12);
            let (curl, div, scale) = curl_div(s, &p, 0.013, 1e-5);
            assert!(curl.norm() < 1e-9 * scale && div.abs() < 1e-9 * scale);
        }
    }

    #[test]
    fn rotating_saddle_lab_form() {
        let (b, w, t) = (-40.0, 7.0, 0.31);
        let s = FieldSource::RotatingSaddle { b_pp: b, omega: w };
        let (x, y) = (2e-3, -1e-3);
        let bz = s.field(&Vector3::new(x, y, 0.0), t).unwrap().z;
        let th = 2.0 * w * t;
        assert_relative_eq!(bz, 0.5 * b * ((x * x - y * y) * th.cos() + 2.0 * x * y * th.sin()), max_relative = 1e-12);
    }

    #[test]
    fn cuboid_and_platform_are_divergence_and_curl_free() {
        let platform = FieldSource::RotatingPlatform(RotatingPlatform::standard(5e-3, 5e-3, 20e-3, 1.0, 100.0));
        let magnet = FieldSource::CuboidMagnet(CuboidMagnet {
            center: Vector3::new(0.0, 0.0, 0.0),
            orientation: UnitQuaternion::from_euler_angles(0.2, -0.4, 0.9),
            dims: Vector3::new(3e-3, 2e-3, 4e-3),
            b_sat: 1.2,
            axis: Vector3::new(0.6, 0.0, 0.8),
        });
        let mut state = 12345u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let mut checked = 0;
        while checked < 100 {
            let p = Vector3::new(rnd(), rnd(), rnd()) * 12e-3;
            // Keep the difference stencil clear of magnet material.
            let near = |src: &FieldSource| {
                (0..27).any(|k| {
                    let o = Vector3::new((k % 3) as f64 - 1.0, ((k / 3) % 3) as f64 - 1.0, (k / 9) as f64 - 1.0);
                    src.contains(&(p + 1e-4 * o), 0.01)
                })
            };
            if near(&platform) || near(&magnet) {
                continue;
            }
            for s in [&platform, &magnet] {
                let (curl, div, scale) = curl_div(s, &p, 0.01, 1e-5);
                assert!(div.abs() < 1e-6 * scale, "div {div} scale {scale} at {p:?}");
                assert!(curl.norm() < 1e-6 * scale, "curl {curl:?} scale {scale} at {p:?}");
            }
            checked += 1;
        }
    }

    #[test]
    fn platform_rotation_identity_and_period() {
        let pl = RotatingPlatform::standard(5e-3, 5e-3, 20e-3, 1.0, 2.0 * std::f64::consts::PI * 80.0);
        let period = 2.0 * std::f64::consts::PI / pl.omega;
        for k in 0..50 {
            let kf = k as f64;
            let p = Vector3::new(3e-3 * (0.3 * kf).sin(), 4e-3 * (0.7 * kf).cos(), 6e-3 + 1e-4 * kf);
            let t = 1e-4 * kf;
            let b = pl.field(&p, t).unwrap();
            let back = pl.rotation(t).inverse() * p;
            let b0 = pl.field(&back, 0.0).unwrap();
            assert_relative_eq!(b.z, b0.z, max_relative = 1e-12);
            let later = pl.field(&p, t + period).unwrap();
            assert_relative_eq!(later, b, max_relative = 1e-12, epsilon = 1e-15);
            let rotated_magnets: Vector3<f64> =
                pl.magnets_at(t).iter().map(|m| m.field(&p).unwrap()).sum();
            assert_relative_eq!(rotated_magnets, b, max_relative = 1e-10, epsilon = 1e-14);
        }
    }

    #[test]
    fn platform_config_forms() {
        let json = r#"{"type":"rotating_platform","side":0.005,"separation":0.02,"omega":100.0}"#;
        let s: FieldSource = serde_json::from_str(json).unwrap();
        let FieldSource::RotatingPlatform(p) = &s else { panic!() };
        assert_eq!(p.magnets.len(), 4);
        let round: FieldSource = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(round, s);
        let mut bad = p.clone();
        bad.magnets[1].axis = -bad.magnets[1].axis;
        assert!(bad.validate().is_err());
    }
}
