//! Finitely generated cones, their polars, and the Moreau decomposition.

use super::simplex;
use crate::error::{LabError, Result};
use crate::hilbert::Vector;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Largest ambient dimension handled by cone routines.
pub const MAX_CONE_DIM: usize = 16;

const MOREAU_SLACK: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum ConeForm {
    /// Closed conic hull of the listed generators.
    Generated { generators: Vec<Vector> },
    /// `{u : ⟨d, u⟩ ≤ 0}` for every listed normal `d`.
    Halfspaces { normals: Vec<Vector> },
}

/// Polyhedral cone in the leading `dim` coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinCone {
    pub dim: usize,
    pub form: ConeForm,
}

impl FinCone {
    pub fn generated(dim: usize, generators: Vec<Vector>) -> Result<FinCone> {
        check_members(dim, &generators)?;
        Ok(FinCone {
            dim,
            form: ConeForm::Generated { generators },
        })
    }

    pub fn halfspaces(dim: usize, normals: Vec<Vector>) -> Result<FinCone> {
        check_members(dim, &normals)?;
        Ok(FinCone {
            dim,
            form: ConeForm::Halfspaces { normals },
        })
    }

    /// `ℝ₊·e([lo, hi])` for an arc of width at most π.
    pub fn angular(lo: f64, hi: f64) -> Result<FinCone> {
        let width = hi - lo;
        if !(width > 0.0 && width <= std::f64::consts::PI + 1e-15) {
            return Err(LabError::UnsupportedSet("angular cone wider than π".into()));
        }
        FinCone::generated(2, vec![Vector::from_angle(lo), Vector::from_angle(hi)])
    }

    /// The whole space, as the cone generated by `±e_i`.
    pub fn all_space(dim: usize) -> Result<FinCone> {
        let mut g = Vec::new();
        for i in 0..dim {
            g.push(Vector::basis(i));
            g.push(Vector::basis(i).scale(-1.0));
        }
        FinCone::generated(dim, g)
    }

    pub fn generators(&self) -> Option<&[Vector]> {
        match &self.form {
            ConeForm::Generated { generators } => Some(generators),
            ConeForm::Halfspaces { .. } => None,
        }
    }

    pub fn normals(&self) -> Option<&[Vector]> {
        match &self.form {
            ConeForm::Halfspaces { normals } => Some(normals),
            ConeForm::Generated { .. } => None,
        }
    }

    fn check_dim(&self) -> Result<()> {
        if self.dim > MAX_CONE_DIM {
            return Err(LabError::DimensionTooLarge {
                dim: self.dim,
                max: MAX_CONE_DIM,
            });
        }
        Ok(())
    }

    /// Nearest point of the cone.
    pub fn project(&self, x: &Vector) -> Result<Vector> {
        self.check_dim()?;
        match &self.form {
            ConeForm::Generated { generators } => Ok(project_onto_hull(self.dim, generators, x)),
            ConeForm::Halfspaces { normals } => {
                let inside = x.truncate(self.dim);
                let p = project_onto_hull(self.dim, normals, &inside);
                Ok(inside.sub(&p))
            }
        }
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        if x.width() > self.dim {
            return false;
        }
        match &self.form {
            ConeForm::Halfspaces { normals } => {
                normals.iter().all(|d| d.inner(x) <= tol * d.norm())
            }
            ConeForm::Generated { generators } => {
                if self.dim > MAX_CONE_DIM {
                    return false;
                }
                project_onto_hull(self.dim, generators, x).dist(x) <= tol * (1.0 + x.norm())
            }
        }
    }

    pub fn distance(&self, x: &Vector) -> Result<f64> {
        Ok(self.project(x)?.dist(x))
    }

    /// Polar cone `{u : ⟨g, u⟩ ≤ 0 ∀ g ∈ K}`.
    pub fn polar(&self) -> Result<FinCone> {
        self.check_dim()?;
        Ok(match &self.form {
            ConeForm::Generated { generators } => FinCone {
                dim: self.dim,
                form: ConeForm::Halfspaces {
                    normals: generators.clone(),
                },
            },
            ConeForm::Halfspaces { normals } => FinCone {
                dim: self.dim,
                form: ConeForm::Generated {
                    generators: normals.clone(),
                },
            },
        })
    }

    /// Generator form of a planar cone given by halfspaces.
    pub fn to_generated(&self) -> Result<FinCone> {
        match &self.form {
            ConeForm::Generated { .. } => Ok(self.clone()),
            ConeForm::Halfspaces { normals } => {
                if self.dim > 2 {
                    return Err(LabError::UnsupportedSet(
                        "generator form of a halfspace cone needs dimension ≤ 2".into(),
                    ));
                }
                let mut candidates: Vec<Vector> = Vec::new();
                for i in 0..self.dim {
                    candidates.push(Vector::basis(i));
                    candidates.push(Vector::basis(i).scale(-1.0));
                }
                for d in normals {
                    let Ok(u) = d.unit() else { continue };
                    candidates.push(u.scale(-1.0));
                    if self.dim == 2 {
                        let perp = Vector::plane(-u.get(1), u.get(0));
                        candidates.push(perp.scale(-1.0));
                        candidates.push(perp);
                    }
                }
                let generators = candidates
                    .into_iter()
                    .filter(|c| self.contains(c, 1e-12))
                    .collect();
                FinCone::generated(self.dim, generators)
            }
        }
    }

    /// `K ∩ (−K) = {0}`.
    pub fn is_pointed(&self) -> Result<bool> {
        self.check_dim()?;
        match &self.form {
            ConeForm::Generated { generators } => Ok(!zero_in_hull_of_units(self.dim, generators)?),
            ConeForm::Halfspaces { normals } => Ok(rank(self.dim, normals) == self.dim),
        }
    }

    /// Nonempty interior.
    pub fn is_solid(&self) -> Result<bool> {
        self.check_dim()?;
        match &self.form {
            ConeForm::Generated { generators } => Ok(rank(self.dim, generators) == self.dim),
            ConeForm::Halfspaces { normals } => Ok(!zero_in_hull_of_units(self.dim, normals)?),
        }
    }
}

fn check_members(dim: usize, vs: &[Vector]) -> Result<()> {
    if let Some(v) = vs.iter().find(|v| v.width() > dim) {
        return Err(LabError::InvalidArgument(format!(
            "cone member {v} lies outside the first {dim} coordinates"
        )));
    }
    Ok(())
}

fn columns(dim: usize, vs: &[Vector]) -> DMatrix<f64> {
    DMatrix::from_fn(dim, vs.len(), |i, j| vs[j].get(i))
}

fn rank(dim: usize, vs: &[Vector]) -> usize {
    if vs.is_empty() || dim == 0 {
        return 0;
    }
    columns(dim, vs).rank(1e-10)
}

fn zero_in_hull_of_units(dim: usize, vs: &[Vector]) -> Result<bool> {
    let units: Vec<Vector> = vs.iter().filter_map(|v| v.unit().ok()).collect();
    if units.is_empty() {
        return Ok(false);
    }
    let mut a: Vec<Vec<f64>> = (0..dim)
        .map(|i| units.iter().map(|u| u.get(i)).collect())
        .collect();
    a.push(vec![1.0; units.len()]);
    let mut b = vec![0.0; dim];
    b.push(1.0);
    Ok(simplex::find_feasible(&a, &b)?.is_some())
}

/// Projection onto `cone(generators)` by Lawson–Hanson nonnegative least squares.
fn project_onto_hull(dim: usize, generators: &[Vector], x: &Vector) -> Vector {
    let units: Vec<Vector> = generators.iter().filter_map(|g| g.unit().ok()).collect();
    if units.is_empty() || dim == 0 {
        return Vector::zero();
    }
    let a = columns(dim, &units);
    let b = DVector::from_vec(x.to_dense(dim));
    let lambda = nnls(&a, &b);
    let mut p = Vector::zero();
    for (j, u) in units.iter().enumerate() {
        if lambda[j] > 0.0 {
            p = p.axpy(lambda[j], u);
        }
    }
    p
}

/// Lawson–Hanson active-set solver for `min ‖Aλ − b‖, λ ≥ 0`.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let k = a.ncols();
    let mut x = DVector::zeros(k);
    let mut passive = vec![false; k];
    let tol = 1e-13 * (1.0 + b.norm()) * (1.0 + a.norm());
    for _ in 0..(3 * k + 10) {
        let w = a.transpose() * (b - a * &x);
        let candidate = (0..k)
            .filter(|&j| !passive[j] && w[j] > tol)
            .max_by(|&i, &j| w[i].total_cmp(&w[j]));
        let Some(t) = candidate else { break };
        passive[t] = true;
        for _ in 0..(3 * k + 10) {
            let s = solve_passive(a, b, &passive);
            let blocking: Vec<usize> = (0..k).filter(|&j| passive[j] && s[j] <= 0.0).collect();
            if blocking.is_empty() {
                x = s;
                break;
            }
            let alpha = blocking
                .iter()
                .map(|&j| x[j] / (x[j] - s[j]))
                .fold(f64::INFINITY, f64::min);
            x = &x + (&s - &x) * alpha;
            for j in 0..k {
                if passive[j] && x[j] <= 1e-15 {
                    passive[j] = false;
                    x[j] = 0.0;
                }
            }
        }
    }
    x
}

fn solve_passive(a: &DMatrix<f64>, b: &DVector<f64>, passive: &[bool]) -> DVector<f64> {
    let cols: Vec<usize> = (0..passive.len()).filter(|&j| passive[j]).collect();
    let mut out = DVector::zeros(passive.len());
    if cols.is_empty() {
        return out;
    }
    let sub = a.select_columns(&cols);
    let svd = sub.svd(true, true);
    if let Ok(sol) = svd.solve(b, 1e-12) {
        for (k, &j) in cols.iter().enumerate() {
            out[j] = sol[k];
        }
    }
    out
}

/// Splits `x` into its projections onto the cone and onto its polar.
pub fn moreau_split(k: &FinCone, x: &Vector) -> Result<(Vector, Vector)> {
    let p = k.project(x)?;
    let q = x.sub(&p);
    let polar = k.polar()?;
    let q_in_polar = polar.contains(&q, MOREAU_SLACK * (1.0 + x.norm()));
    let orth = p.inner(&q).abs();
    if !q_in_polar || orth > MOREAU_SLACK * (1.0 + x.norm_sq()) {
        return Err(LabError::NumericalCheck(format!(
            "Moreau split failed: residual in polar = {q_in_polar}, |⟨p,q⟩| = {orth:e}"
        )));
    }
    Ok((p, q))
}

/// `min_g ⟨g/‖g‖, u⟩`; positive exactly when `u` is interior to the dual cone.
pub fn is_solid_dual(k: &FinCone, u: &Vector) -> Result<f64> {
    let g = k.to_generated()?;
    let gens = g.generators().unwrap_or(&[]);
    Ok(gens
        .iter()
        .filter_map(|g| g.unit().ok())
        .map(|g| g.inner(u))
        .fold(f64::INFINITY, f64::min))
}

/// One row of the finite-truncation demo.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationRow {
    pub dim: usize,
    pub min_conv_norm: f64,
    /// Pointedness of `cone{e_0, …, e_{d−1}}`, when the dimension is small enough to decide.
    pub pointed: Option<bool>,
}

/// Norm of the barycenter of `e_0..e_{d-1}` for each `d`, which is the minimum norm over their hull.
pub fn krein_rutman_truncation_demo(dims: &[usize]) -> Result<Vec<TruncationRow>> {
    if dims.windows(2).any(|w| w[0] >= w[1]) {
        return Err(LabError::InvalidArgument("dims must be increasing".into()));
    }
    let mut rows = Vec::new();
    for &d in dims {
        if d == 0 || d > 64 {
            return Err(LabError::DimensionTooLarge { dim: d, max: 64 });
        }
        let mean = (0..d).fold(Vector::zero(), |acc, i| {
            acc.axpy(1.0 / d as f64, &Vector::basis(i))
        });
        let pointed = if d <= MAX_CONE_DIM {
            Some(FinCone::generated(d, (0..d).map(Vector::basis).collect())?.is_pointed()?)
        } else {
            None
        };
        rows.push(TruncationRow {
            dim: d,
            min_conv_norm: mean.norm(),
            pointed,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    fn close(a: &Vector, b: &Vector) -> bool {
        a.approx_eq(b, 1e-12)
    }

    #[test]
    fn orthant_split() {
        let k = FinCone::generated(2, vec![Vector::basis(0), Vector::basis(1)]).unwrap();
        let (p, q) = moreau_split(&k, &Vector::plane(1.0, -2.0)).unwrap();
        assert!(close(&p, &Vector::plane(1.0, 0.0)));
        assert!(close(&q, &Vector::plane(0.0, -2.0)));
    }

    #[test]
    fn ray_split() {
        let k = FinCone::generated(2, vec![Vector::plane(1.0, 1.0)]).unwrap();
        let (p, q) = moreau_split(&k, &Vector::plane(1.0, 0.0)).unwrap();
        assert!(close(&p, &Vector::plane(0.5, 0.5)));
        assert!(close(&q, &Vector::plane(0.5, -0.5)));
        assert!(p.inner(&q).abs() < 1e-15);
    }

    #[test]
    fn member_of_quarter_plane_is_fixed() {
        let k = FinCone::angular(0.0, FRAC_PI_2).unwrap();
        let x = Vector::from_angle(PI / 4.0).scale(3.0);
        let (p, q) = moreau_split(&k, &x).unwrap();
        assert!(close(&p, &x));
        assert!(q.norm() < 1e-12);
    }

    #[test]
    fn polar_examples() {
        let all = FinCone::all_space(3).unwrap().polar().unwrap();
        assert!(all.contains(&Vector::zero(), 1e-12));
        assert!(!all.contains(&Vector::basis(2).scale(1e-3), 1e-12));
        let ray = FinCone::generated(2, vec![Vector::basis(0)])
            .unwrap()
            .polar()
            .unwrap();
        assert!(ray.contains(&Vector::plane(-1.0, 5.0), 1e-12));
        assert!(!ray.contains(&Vector::plane(0.1, 5.0), 1e-12));
        let big = FinCone {
            dim: 17,
            form: ConeForm::Generated { generators: vec![] },
        };
        assert_eq!(
            big.polar(),
            Err(LabError::DimensionTooLarge { dim: 17, max: 16 })
        );
    }

    #[test]
    fn pointedness() {
        let quad = FinCone::generated(2, vec![Vector::basis(0), Vector::basis(1)]).unwrap();
        assert!(quad.is_pointed().unwrap());
        let half = FinCone::generated(
            2,
            vec![
                Vector::from_angle(0.0),
                Vector::from_angle(FRAC_PI_2),
                Vector::from_angle(PI),
            ],
        )
        .unwrap();
        assert!(!half.is_pointed().unwrap());
        let wedge = FinCone::generated(
            2,
            vec![
                Vector::plane(0.0, -1.0),
                Vector::plane(3f64.sqrt() / 2.0, -0.5),
            ],
        )
        .unwrap();
        assert!(wedge.is_pointed().unwrap());
    }

    #[test]
    fn dual_margins() {
        let quad = FinCone::generated(2, vec![Vector::basis(0), Vector::basis(1)]).unwrap();
        let u = Vector::plane(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
        assert!((is_solid_dual(&quad, &u).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
        let line =
            FinCone::generated(2, vec![Vector::basis(0), Vector::basis(0).scale(-1.0)]).unwrap();
        for u in [Vector::plane(1.0, 0.0), Vector::plane(0.3, -0.7)] {
            assert!(is_solid_dual(&line, &u).unwrap() <= 0.0);
        }
        let ray = FinCone::generated(2, vec![Vector::basis(0)]).unwrap();
        assert_eq!(is_solid_dual(&ray, &Vector::basis(0)).unwrap(), 1.0);
    }

    #[test]
    fn halfspace_cone_generators_in_plane() {
        let line = FinCone::halfspaces(2, vec![Vector::plane(0.0, 1.0), Vector::plane(0.0, -1.0)])
            .unwrap();
        let g = line.to_generated().unwrap();
        assert!(!g.is_pointed().unwrap());
        assert!(!line.is_solid().unwrap());
        assert!(g.contains(&Vector::plane(-4.0, 0.0), 1e-12));
        assert!(!g.contains(&Vector::plane(0.0, 0.1), 1e-12));
    }

    #[test]
    fn truncation_demo_values() {
        let rows = krein_rutman_truncation_demo(&[1, 4, 16, 64]).unwrap();
        let got: Vec<f64> = rows.iter().map(|r| r.min_conv_norm).collect();
        assert_eq!(got, vec![1.0, 0.5, 0.25, 0.125]);
        assert_eq!(rows[2].pointed, Some(true));
        assert_eq!(rows[3].pointed, None);
    }
}
