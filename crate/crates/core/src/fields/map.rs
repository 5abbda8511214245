//! Field maps on rectangular grids.

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{field_value, FieldSource};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl GridAxis {
    pub fn fixed(v: f64) -> Self {
        Self { min: v, max: v, n: 1 }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.min];
        }
        (0..self.n)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (self.n - 1) as f64)
            .collect()
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.n == 0 || !self.min.is_finite() || !self.max.is_finite() || self.max < self.min {
            return Err(Error::InvalidInput(format!("bad grid axis {name}: {self:?}")));
        }
        if self.n > 1 && self.max == self.min {
            return Err(Error::InvalidInput(format!("grid axis {name} has zero extent with n > 1")));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x: GridAxis,
    pub y: GridAxis,
    pub z: GridAxis,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        self.x.validate("x")?;
        self.y.validate("y")?;
        self.z.validate("z")
    }

    pub fn len(&self) -> usize {
        self.x.n * self.y.n * self.z.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in row-major order: z slowest, then y, x fastest.
    pub fn points(&self) -> Vec<Vector3<f64>> {
        let (xs, ys, zs) = (self.x.values(), self.y.values(), self.z.values());
        let mut out = Vec::with_capacity(self.len());
        for &z in &zs {
            for &y in &ys {
                for &x in &xs {
                    out.push(Vector3::new(x, y, z));
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapSample {
    pub position: Vector3<f64>,
    pub time: f64,
    /// `None` marks a point inside source material or on a singular line.
    pub b: Option<Vector3<f64>>,
}

/// Samples the total field on `grid` at time `t`, in parallel.
pub fn field_map(grid: &GridSpec, t: f64, sources: &[FieldSource]) -> Result<Vec<MapSample>> {
    grid.validate()?;
    Ok(grid
        .points()
        .into_par_iter()
        .map(|p| {
            let inside = sources.iter().any(|s| s.contains(&p, t));
            let b = if inside { None } else { field_value(&p, t, sources).ok() };
            MapSample { position: p, time: t, b }
        })
        .collect())
}
