//! Dense symmetric matrices for Gram blocks.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A dense symmetric matrix. Serialized as its upper triangle, row by row:
/// `[[a00, a01, a02], [a11, a12], [a22]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix(DMatrix<f64>);

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, v) in d.iter().enumerate() {
            m.0[(i, i)] = *v;
        }
        m
    }

    /// Symmetrizes `(a + aᵀ) / 2`.
    pub fn from_matrix(a: &DMatrix<f64>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Parameter(format!(
                "expected a square matrix, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        Ok(SymMatrix((a + a.transpose()) * 0.5))
    }

    pub fn from_upper(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n - i {
                return Err(Error::Parse(format!(
                    "upper-triangle row {i} has {} entries, expected {}",
                    row.len(),
                    n - i
                )));
            }
            for (k, v) in row.iter().enumerate() {
                m.set(i, i + k, *v);
            }
        }
        Ok(m)
    }

    pub fn upper(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n).map(|i| (i..n).map(|j| self.0[(i, j)]).collect()).collect()
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// Sets entries `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.0[(i, j)] = v;
        self.0[(j, i)] = v;
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        SymMatrix(&self.0 + &other.0)
    }

    pub fn scale(&self, c: f64) -> SymMatrix {
        SymMatrix(&self.0 * c)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        if self.dim() == 0 {
            return Vec::new();
        }
        let mut ev: Vec<f64> = SymmetricEigen::new(self.0.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Smallest eigenvalue; `+inf` for the empty matrix.
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(f64::INFINITY)
    }

    /// `vᵀ A v`.
    pub fn quad_form(&self, v: &[f64]) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += v[i] * self.0[(i, j)] * v[j];
            }
        }
        acc
    }
}

impl Serialize for SymMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.upper().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        SymMatrix::from_upper(&rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upper_round_trip() {
        let mut m = SymMatrix::zeros(3);
        m.set(0, 2, 1.5);
        m.set(1, 1, -2.0);
        assert_eq!(m.get(2, 0), 1.5);
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, "[[0.0,0.0,1.5],[-2.0,0.0],[0.0]]");
        let back: SymMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<SymMatrix>("[[1.0],[2.0]]").is_err());
    }

    #[test]
    fn spectrum() {
        let m = SymMatrix::from_diagonal(&[2.0, 4.0, 2.0]);
        assert_eq!(m.min_eigenvalue(), 2.0);
        let mut k = SymMatrix::identity(2);
        k.set(0, 1, 2.0);
        let ev = k.eigenvalues();
        assert!((ev[0] + 1.0).abs() < 1e-12 && (ev[1] - 3.0).abs() < 1e-12);
        assert_eq!(SymMatrix::zeros(0).min_eigenvalue(), f64::INFINITY);
    }
}
