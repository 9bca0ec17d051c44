//! Finite-support real vectors over the index set of the naturals.
//!
//! One type models both the plane examples and truncated sequence-space
//! examples: only nonzero coordinates are stored, sorted by index.

use crate::error::{LabError, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Absolute tolerance for comparisons against zero.
pub const ZERO_TOL: f64 = 1e-12;

/// Sparse vector with strictly increasing indices and no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawVector", into = "RawVector")]
pub struct Vector {
    idx: Vec<usize>,
    val: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawVector {
    idx: Vec<usize>,
    val: Vec<f64>,
}

impl TryFrom<RawVector> for Vector {
    type Error = LabError;

    fn try_from(raw: RawVector) -> Result<Self> {
        Vector::from_parts(raw.idx, raw.val)
    }
}

impl From<Vector> for RawVector {
    fn from(v: Vector) -> Self {
        RawVector {
            idx: v.idx,
            val: v.val,
        }
    }
}

impl Vector {
    pub fn zero() -> Self {
        Vector::default()
    }

    /// Standard basis vector `e_i`.
    pub fn basis(i: usize) -> Self {
        Vector {
            idx: vec![i],
            val: vec![1.0],
        }
    }

    /// Unit vector at angle `theta` in the plane spanned by `e_0, e_1`.
    pub fn from_angle(theta: f64) -> Self {
        Vector::from_dense(&[theta.cos(), theta.sin()])
    }

    pub fn plane(x: f64, y: f64) -> Self {
        Vector::from_dense(&[x, y])
    }

    pub fn from_dense(values: &[f64]) -> Self {
        let mut v = Vector::zero();
        for (i, &x) in values.iter().enumerate() {
            if x != 0.0 {
                v.idx.push(i);
                v.val.push(x);
            }
        }
        v
    }

    /// Builds a vector from parallel index/value lists.
    ///
    /// Indices must be strictly increasing and values finite; explicit zeros are dropped.
    pub fn from_parts(idx: Vec<usize>, val: Vec<f64>) -> Result<Self> {
        if idx.len() != val.len() {
            return Err(LabError::InvalidVector(format!(
                "{} indices but {} values",
                idx.len(),
                val.len()
            )));
        }
        if idx.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LabError::InvalidVector(
                "indices must be strictly increasing".into(),
            ));
        }
        if val.iter().any(|x| !x.is_finite()) {
            return Err(LabError::InvalidVector("values must be finite".into()));
        }
        let (idx, val) = idx.into_iter().zip(val).filter(|&(_, x)| x != 0.0).unzip();
        Ok(Vector { idx, val })
    }

    /// Builds a vector from unsorted pairs, summing duplicates.
    pub fn from_pairs(mut pairs: Vec<(usize, f64)>) -> Self {
        pairs.sort_by_key(|p| p.0);
        let mut v = Vector::zero();
        for (i, x) in pairs {
            if v.idx.last() == Some(&i) {
                *v.val.last_mut().unwrap() += x;
            } else {
                v.idx.push(i);
                v.val.push(x);
            }
        }
        v.prune();
        v
    }

    fn prune(&mut self) {
        let mut k = 0;
        for j in 0..self.idx.len() {
            if self.val[j] != 0.0 {
                self.idx[k] = self.idx[j];
                self.val[k] = self.val[j];
                k += 1;
            }
        }
        self.idx.truncate(k);
        self.val.truncate(k);
    }

    pub fn indices(&self) -> &[usize] {
        &self.idx
    }

    pub fn values(&self) -> &[f64] {
        &self.val
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.idx.iter().copied().zip(self.val.iter().copied())
    }

    pub fn nnz(&self) -> usize {
        self.idx.len()
    }

    pub fn is_zero(&self) -> bool {
        self.idx.is_empty()
    }

    /// Largest index with a nonzero coordinate.
    pub fn max_index(&self) -> Option<usize> {
        self.idx.last().copied()
    }

    /// Number of leading coordinates needed to hold every nonzero entry.
    pub fn width(&self) -> usize {
        self.max_index().map_or(0, |i| i + 1)
    }

    pub fn get(&self, i: usize) -> f64 {
        match self.idx.binary_search(&i) {
            Ok(k) => self.val[k],
            Err(_) => 0.0,
        }
    }

    /// Dense prefix of length `width`; coordinates past the prefix are dropped.
    pub fn to_dense(&self, width: usize) -> Vec<f64> {
        let mut out = vec![0.0; width];
        for (i, x) in self.entries() {
            if i < width {
                out[i] = x;
            }
        }
        out
    }

    /// Keeps only coordinates with index below `width`.
    pub fn truncate(&self, width: usize) -> Vector {
        let k = self.idx.partition_point(|&i| i < width);
        Vector {
            idx: self.idx[..k].to_vec(),
            val: self.val[..k].to_vec(),
        }
    }

    pub fn inner(&self, other: &Vector) -> f64 {
        let (mut a, mut b, mut s) = (0, 0, 0.0);
        while a < self.idx.len() && b < other.idx.len() {
            match self.idx[a].cmp(&other.idx[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    s += self.val[a] * other.val[b];
                    a += 1;
                    b += 1;
                }
            }
        }
        s
    }

    pub fn norm_sq(&self) -> f64 {
        self.val.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        let scale = self.val.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        scale
            * self
                .val
                .iter()
                .map(|x| (x / scale) * (x / scale))
                .sum::<f64>()
                .sqrt()
    }

    pub fn dist(&self, other: &Vector) -> f64 {
        self.sub(other).norm()
    }

    /// `alpha * u + beta * v`.
    pub fn scale_add(alpha: f64, u: &Vector, beta: f64, v: &Vector) -> Vector {
        let mut out = Vector {
            idx: Vec::with_capacity(u.nnz() + v.nnz()),
            val: Vec::with_capacity(u.nnz() + v.nnz()),
        };
        let (mut a, mut b) = (0, 0);
        while a < u.idx.len() || b < v.idx.len() {
            let ia = u.idx.get(a).copied().unwrap_or(usize::MAX);
            let ib = v.idx.get(b).copied().unwrap_or(usize::MAX);
            let (i, x) = if ia < ib {
                a += 1;
                (ia, alpha * u.val[a - 1])
            } else if ib < ia {
                b += 1;
                (ib, beta * v.val[b - 1])
            } else {
                a += 1;
                b += 1;
                (ia, alpha * u.val[a - 1] + beta * v.val[b - 1])
            };
            if x != 0.0 {
                out.idx.push(i);
                out.val.push(x);
            }
        }
        out
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector::scale_add(1.0, self, 1.0, other)
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector::scale_add(1.0, self, -1.0, other)
    }

    pub fn scale(&self, alpha: f64) -> Vector {
        let mut out = Vector {
            idx: self.idx.clone(),
            val: self.val.iter().map(|x| alpha * x).collect(),
        };
        out.prune();
        out
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &Vector) -> Vector {
        Vector::scale_add(1.0, self, alpha, other)
    }

    pub fn unit(&self) -> Result<Vector> {
        let n = self.norm();
        if n == 0.0 {
            return Err(LabError::ZeroVector);
        }
        Ok(self.scale(1.0 / n))
    }

    /// Largest absolute coordinate difference.
    pub fn max_abs_diff(&self, other: &Vector) -> f64 {
        self.sub(other)
            .val
            .iter()
            .fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn approx_eq(&self, other: &Vector, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Polar angle of the first two coordinates.
    pub fn angle(&self) -> f64 {
        self.get(1).atan2(self.get(0))
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.entries().map(|(i, x)| format!("{x}·e{i}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> Vector {
        Vector::basis(i)
    }

    #[test]
    fn inner_of_overlapping_basis_sums() {
        assert_eq!(e(0).add(&e(1)).inner(&e(1).add(&e(2))), 1.0);
        assert_eq!(e(0).add(&e(1)).inner(&Vector::zero()), 0.0);
        assert_eq!(e(0).add(&e(1)).inner(&e(0).add(&e(1))), 2.0);
    }

    #[test]
    fn norms_and_units() {
        assert!((e(0).dist(&e(1)) - 2f64.sqrt()).abs() < 1e-15);
        let u = Vector::plane(3.0, 4.0).unit().unwrap();
        assert!(u.approx_eq(&Vector::plane(0.6, 0.8), 1e-15));
        let x = e(0).add(&e(1).scale(3.0));
        assert!((x.norm() - 10f64.sqrt()).abs() < 1e-15);
        assert_eq!(Vector::zero().unit(), Err(LabError::ZeroVector));
    }

    #[test]
    fn cancellation_drops_entries() {
        let v = e(3).sub(&e(3));
        assert!(v.is_zero());
        assert_eq!(v.nnz(), 0);
        let w = Vector::from_pairs(vec![(2, 1.0), (0, 1.0), (2, -1.0)]);
        assert_eq!(w, e(0));
    }

    #[test]
    fn json_form() {
        let v = Vector::from_parts(vec![0, 4], vec![1.5, -2.0]).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"idx":[0,4],"val":[1.5,-2.0]}"#);
        let back: Vector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<Vector>(r#"{"idx":[2,1],"val":[1,1]}"#).is_err());
        let z: Vector = serde_json::from_str(r#"{"idx":[1,2],"val":[0,3]}"#).unwrap();
        assert_eq!(z.indices(), &[2]);
    }

    #[test]
    fn dense_prefix_and_truncation() {
        let v = Vector::from_parts(vec![1, 5], vec![2.0, 3.0]).unwrap();
        assert_eq!(v.to_dense(3), vec![0.0, 2.0, 0.0]);
        assert_eq!(
            v.truncate(5),
            Vector::from_parts(vec![1], vec![2.0]).unwrap()
        );
        assert_eq!(v.width(), 6);
    }
}
