//! Meshes on `[0, 1]` and piecewise-linear grid functions.

use crate::error::{Error, Result};

/// `n` equispaced points from 0 to 1 inclusive.
pub fn uniform_mesh(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => {
            let last = (n - 1) as f64;
            (0..n).map(|k| k as f64 / last).collect()
        }
    }
}

/// Points of `mesh` strictly inside `(0, 1)`.
pub fn interior(mesh: &[f64]) -> Vec<f64> {
    mesh.iter()
        .copied()
        .filter(|&t| t > 0.0 && t < 1.0)
        .collect()
}

/// `n` equispaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    uniform_mesh(n)
        .into_iter()
        .map(|u| lo + (hi - lo) * u)
        .collect()
}

/// Samples on an increasing mesh, linearly interpolated in between.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub mesh: Vec<f64>,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn new(mesh: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if mesh.len() != values.len() || mesh.is_empty() {
            return Err(Error::Argument(format!(
                "mesh of {} points with {} values",
                mesh.len(),
                values.len()
            )));
        }
        if mesh.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Argument("mesh must be strictly increasing".into()));
        }
        Ok(Self { mesh, values })
    }

    pub fn sample(mesh: &[f64], f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(mesh.to_vec(), mesh.iter().map(|&t| f(t)).collect())
    }

    pub fn len(&self) -> usize {
        self.mesh.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mesh.is_empty()
    }

    /// Linear interpolation, constant extrapolation outside the mesh.
    pub fn eval(&self, t: f64) -> f64 {
        let m = &self.mesh;
        if t <= m[0] {
            return self.values[0];
        }
        let last = m.len() - 1;
        if t >= m[last] {
            return self.values[last];
        }
        let k = m.partition_point(|&x| x <= t) - 1;
        let w = (t - m[k]) / (m[k + 1] - m[k]);
        self.values[k] + w * (self.values[k + 1] - self.values[k])
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
    }

    /// Largest pointwise difference; NaN if either side is NaN.
    pub fn sup_distance(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, |acc: f64, d| {
                if d.is_nan() || acc.is_nan() {
                    f64::NAN
                } else {
                    acc.max(d)
                }
            })
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.mesh.iter().copied().zip(self.values.iter().copied())
    }
}
