use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::numerics::quadrature::gauss_legendre_on;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Shape {
    /// Edge lengths along the body x, y, z axes.
    Cuboid { lx: f64, ly: f64, lz: f64 },
    Sphere { radius: f64 },
    /// Symmetry axis along body z.
    Cylinder { radius: f64, length: f64 },
}

impl Shape {
    fn dims(&self) -> Vec<f64> {
        match *self {
            Shape::Cuboid { lx, ly, lz } => vec![lx, ly, lz],
            Shape::Sphere { radius } => vec![radius],
            Shape::Cylinder { radius, length } => vec![radius, length],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for d in self.dims() {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::InvalidGeometry(format!("dimension must be positive, got {d}")));
            }
        }
        Ok(())
    }

    pub fn volume(&self) -> f64 {
        match *self {
            Shape::Cuboid { lx, ly, lz } => lx * ly * lz,
            Shape::Sphere { radius } => 4.0 / 3.0 * std::f64::consts::PI * radius.powi(3),
            Shape::Cylinder { radius, length } => std::f64::consts::PI * radius * radius * length,
        }
    }

    /// Principal moments of inertia about the body axes for unit mass.
    fn unit_mass_inertia(&self) -> Vector3<f64> {
        match *self {
            Shape::Cuboid { lx, ly, lz } => {
                Vector3::new(ly * ly + lz * lz, lx * lx + lz * lz, lx * lx + ly * ly) / 12.0
            }
            Shape::Sphere { radius } => Vector3::repeat(0.4 * radius * radius),
            Shape::Cylinder { radius, length } => {
                let perp = (3.0 * radius * radius + length * length) / 12.0;
                Vector3::new(perp, perp, 0.5 * radius * radius)
            }
        }
    }

    /// Largest distance from the centre to the surface.
    pub fn bounding_radius(&self) -> f64 {
        match *self {
            Shape::Cuboid { lx, ly, lz } => 0.5 * (lx * lx + ly * ly + lz * lz).sqrt(),
            Shape::Sphere { radius } => radius,
            Shape::Cylinder { radius, length } => (radius * radius + 0.25 * length * length).sqrt(),
        }
    }

    /// Tensor-product Gauss rule over the body: `(body-frame point, volume weight)`.
    ///
    /// Cuboids use `order` points per axis; spheres and cylinders use Gauss rules
    /// in the radial and axial directions and `2·order` equispaced azimuths.
    pub fn quadrature(&self, order: usize) -> Vec<(Vector3<f64>, f64)> {
        let mut pts = Vec::new();
        let n_phi = 2 * order;
        let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
        match *self {
            Shape::Cuboid { lx, ly, lz } => {
                let gx = gauss_legendre_on(order, -0.5 * lx, 0.5 * lx);
                let gy = gauss_legendre_on(order, -0.5 * ly, 0.5 * ly);
                let gz = gauss_legendre_on(order, -0.5 * lz, 0.5 * lz);
                for &(x, wx) in &gx {
                    for &(y, wy) in &gy {
                        for &(z, wz) in &gz {
                            pts.push((Vector3::new(x, y, z), wx * wy * wz));
                        }
                    }
                }
            }
            Shape::Sphere { radius } => {
                let gr = gauss_legendre_on(order, 0.0, radius);
                let gc = gauss_legendre_on(order, -1.0, 1.0);
                for &(r, wr) in &gr {
                    for &(c, wc) in &gc {
                        let s = (1.0 - c * c).sqrt();
                        for k in 0..n_phi {
                            let phi = (k as f64 + 0.5) * dphi;
                            let p = Vector3::new(r * s * phi.cos(), r * s * phi.sin(), r * c);
                            pts.push((p, wr * r * r * wc * dphi));
                        }
                    }
                }
            }
            Shape::Cylinder { radius, length } => {
                let gr = gauss_legendre_on(order, 0.0, radius);
                let gz = gauss_legendre_on(order, -0.5 * length, 0.5 * length);
                for &(r, wr) in &gr {
                    for &(z, wz) in &gz {
                        for k in 0..n_phi {
                            let phi = (k as f64 + 0.5) * dphi;
                            pts.push((Vector3::new(r * phi.cos(), r * phi.sin(), z), wr * r * wz * dphi));
                        }
                    }
                }
            }
        }
        pts
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MagnetBody {
    pub shape: Shape,
    /// Density, kg/m³; defaults to the physical constants when absent.
    #[serde(default)]
    pub rho_m: Option<f64>,
    /// Saturation magnetization, T; defaults to the physical constants when absent.
    #[serde(default)]
    pub b_sat: Option<f64>,
    #[serde(default = "default_moment_dir")]
    pub moment_dir_body: Vector3<f64>,
}

fn default_moment_dir() -> Vector3<f64> {
    -Vector3::x()
}

impl MagnetBody {
    pub fn new(shape: Shape) -> Self {
        Self { shape, rho_m: None, b_sat: None, moment_dir_body: default_moment_dir() }
    }

    pub fn sphere(radius: f64) -> Self {
        Self::new(Shape::Sphere { radius })
    }

    pub fn cuboid(lx: f64, ly: f64, lz: f64) -> Self {
        Self::new(Shape::Cuboid { lx, ly, lz })
    }

    /// Square-section bar: length `l` along body y, section `h × h`, moment along body z.
    pub fn bar(l: f64, h: f64) -> Self {
        Self {
            moment_dir_body: Vector3::z(),
            ..Self::new(Shape::Cuboid { lx: h, ly: l, lz: h })
        }
    }

    pub fn with_moment_dir(mut self, dir: Vector3<f64>) -> Self {
        self.moment_dir_body = dir;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.shape.validate()?;
        for (name, v) in [("rho_m", self.rho_m), ("b_sat", self.b_sat)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::InvalidGeometry(format!("{name} must be positive, got {v}")));
                }
            }
        }
        let n = self.moment_dir_body.norm();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidGeometry(format!("moment_dir_body must be a unit vector (norm {n})")));
        }
        Ok(())
    }

    pub fn density(&self, c: &PhysicalConstants) -> f64 {
        self.rho_m.unwrap_or(c.rho_m)
    }

    pub fn saturation(&self, c: &PhysicalConstants) -> f64 {
        self.b_sat.unwrap_or(c.b_sat)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BodyProperties {
    pub volume: f64,
    pub mass: f64,
    /// Moment magnitude μ = B_sat·V/μ0, A·m².
    pub moment: f64,
    /// Principal inertia tensor in the body frame, kg·m².
    pub inertia: Matrix3<f64>,
    pub moment_dir_body: Vector3<f64>,
}

impl BodyProperties {
    pub fn moment_body(&self) -> Vector3<f64> {
        self.moment * self.moment_dir_body
    }
}

pub fn derive_body_properties(body: &MagnetBody, c: &PhysicalConstants) -> Result<BodyProperties> {
    body.validate()?;
    c.validate()?;
    let volume = body.shape.volume();
    let mass = body.density(c) * volume;
    let moment = body.saturation(c) * volume / c.mu0;
    let inertia = Matrix3::from_diagonal(&(body.shape.unit_mass_inertia() * mass));
    Ok(BodyProperties { volume, mass, moment, inertia, moment_dir_body: body.moment_dir_body })
}
