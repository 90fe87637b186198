//! Small dense vector and orthogonal-matrix helpers for points in ℝ^N, N ≤ 3.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Result};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// An orthogonal `n × n` matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Orthogonal {
    n: usize,
    data: Vec<f64>,
    label: String,
}

impl Orthogonal {
    /// Validates `AᵀA = I` to 1e-12.
    pub fn new(n: usize, data: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if data.len() != n * n || n == 0 {
            return invalid(format!("expected {} entries for a {n}x{n} matrix", n * n));
        }
        let m = Self { n, data, label: label.into() };
        for i in 0..n {
            for j in 0..n {
                let s: f64 = (0..n).map(|k| m.at(k, i) * m.at(k, j)).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if (s - want).abs() > 1e-12 {
                    return invalid(format!("matrix '{}' is not orthogonal", m.label));
                }
            }
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self { n, data, label: "identity".into() }
    }

    /// Rotation by `angle` in the plane of coordinates `(i, j)`.
    pub fn plane_rotation(n: usize, i: usize, j: usize, angle: f64, label: impl Into<String>) -> Self {
        let mut m = Self::identity(n);
        let (s, c) = angle.sin_cos();
        m.data[i * n + i] = c;
        m.data[j * n + j] = c;
        m.data[i * n + j] = -s;
        m.data[j * n + i] = s;
        m.label = label.into();
        m
    }

    /// A rotation (determinant +1) drawn from Gaussian matrices by
    /// Gram–Schmidt with one reorthogonalization pass, reproducible for a fixed seed.
    pub fn seeded(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
        while cols.len() < n {
            let mut v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
            for _ in 0..2 {
                for c in &cols {
                    let p = dot(&v, c);
                    v.iter_mut().zip(c).for_each(|(x, y)| *x -= p * y);
                }
            }
            let len = norm(&v);
            if len > 1e-6 {
                cols.push(v.into_iter().map(|x| x / len).collect());
            }
        }
        let mut data = vec![0.0; n * n];
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                data[i * n + j] = c[i];
            }
        }
        let mut m = Self { n, data, label: format!("seeded-{seed}") };
        if m.determinant() < 0.0 {
            for i in 0..n {
                m.data[i * n] = -m.data[i * n];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| dot(&self.data[i * self.n..(i + 1) * self.n], x))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self { label: self.label.clone(), ..Self::identity(self.n) }
    }

    fn determinant(&self) -> f64 {
        match self.n {
            1 => self.data[0],
            2 => self.at(0, 0) * self.at(1, 1) - self.at(0, 1) * self.at(1, 0),
            3 => {
                let a = |i, j| self.at(i, j);
                a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
                    - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                    + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
            }
            _ => unimplemented!("determinant only needed for n ≤ 3"),
        }
    }
}

/// The fixed rotation test set in ℝ³: three 90°/180° coordinate rotations
/// plus three seeded rotations.
pub fn rotation_catalog(seed: u64) -> Vec<Orthogonal> {
    use std::f64::consts::{FRAC_PI_2, PI};
    vec![
        Orthogonal::plane_rotation(3, 0, 1, FRAC_PI_2, "rot90-e3"),
        Orthogonal::plane_rotation(3, 0, 1, PI, "rot180-e3"),
        Orthogonal::plane_rotation(3, 1, 2, FRAC_PI_2, "rot90-e1"),
        Orthogonal::seeded(3, seed),
        Orthogonal::seeded(3, seed.wrapping_add(1)),
        Orthogonal::seeded(3, seed.wrapping_add(2)),
    ]
}
