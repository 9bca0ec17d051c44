//! Compositional set descriptions with exact open/closed membership.

use crate::error::{LabError, Result};
use crate::hilbert::{Vector, ZERO_TOL};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Closed,
    Open,
}

/// Where a point sits relative to a region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    In,
    Out,
    Boundary,
}

/// Closed affine flat `anchor + span(basis)`, or `anchor + span(basis)^⊥` when `complement` is set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineFlat {
    pub anchor: Vector,
    pub basis: Vec<Vector>,
    #[serde(default)]
    pub complement: bool,
}

impl AffineFlat {
    /// `anchor + span(basis)`; the basis is orthonormalized.
    pub fn span(anchor: Vector, directions: &[Vector]) -> Result<Self> {
        Ok(AffineFlat {
            anchor,
            basis: gram_schmidt(directions, 1e-10),
            complement: false,
        })
    }

    /// `anchor + span(normals)^⊥`; the normals are orthonormalized.
    pub fn orthogonal(anchor: Vector, normals: &[Vector]) -> Result<Self> {
        Ok(AffineFlat {
            anchor,
            basis: gram_schmidt(normals, 1e-10),
            complement: true,
        })
    }

    pub fn validate(&self) -> Result<()> {
        for (i, b) in self.basis.iter().enumerate() {
            for (j, c) in self.basis.iter().enumerate().skip(i) {
                let want = if i == j { 1.0 } else { 0.0 };
                if (b.inner(c) - want).abs() > 1e-12 {
                    return Err(LabError::InvalidRegion(
                        "flat basis is not orthonormal".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn component_along_basis(&self, w: &Vector) -> Vector {
        self.basis
            .iter()
            .fold(Vector::zero(), |acc, b| acc.axpy(w.inner(b), b))
    }

    pub fn project(&self, y: &Vector) -> Vector {
        let w = y.sub(&self.anchor);
        let along = self.component_along_basis(&w);
        if self.complement {
            y.sub(&along)
        } else {
            self.anchor.add(&along)
        }
    }

    pub fn distance(&self, y: &Vector) -> f64 {
        let w = y.sub(&self.anchor);
        let along = self.component_along_basis(&w);
        if self.complement {
            along.norm()
        } else {
            w.sub(&along).norm()
        }
    }

    /// Projection of `y` onto the direction space (the flat translated to the origin).
    pub fn project_direction(&self, y: &Vector) -> Vector {
        let along = self.component_along_basis(y);
        if self.complement {
            y.sub(&along)
        } else {
            along
        }
    }
}

/// Gram–Schmidt with reorthogonalization; directions below `tol` after reduction are dropped.
pub fn gram_schmidt(vectors: &[Vector], tol: f64) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                w = w.axpy(-w.inner(b), b);
            }
        }
        let n = w.norm();
        if n > tol * v.norm().max(1.0) {
            basis.push(w.scale(1.0 / n));
        }
    }
    basis
}

/// Set description; membership is exact up to a tolerance on each defining functional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Region {
    /// `{y : ⟨normal, y⟩ ≥ offset}` (closed) or `> offset` (open).
    Halfspace {
        normal: Vector,
        offset: f64,
        boundary: Boundary,
    },
    /// Closed ball.
    Ball {
        center: Vector,
        radius: f64,
    },
    AffineFlat(AffineFlat),
    /// `apex + ℝ₊·e([theta_lo, theta_hi])` in the plane, with per-ray inclusion flags.
    AngularCone2d {
        apex: Vector,
        theta_lo: f64,
        theta_hi: f64,
        include_lo: bool,
        include_hi: bool,
    },
    Union {
        children: Vec<Region>,
    },
    Intersection {
        children: Vec<Region>,
    },
    Translate {
        child: Box<Region>,
        shift: Vector,
    },
    AllSpace,
    Singleton {
        point: Vector,
    },
    Empty,
}

impl Region {
    pub fn halfspace(normal: Vector, offset: f64, boundary: Boundary) -> Region {
        Region::Halfspace {
            normal,
            offset,
            boundary,
        }
    }

    pub fn closed_halfspace(normal: Vector, offset: f64) -> Region {
        Region::halfspace(normal, offset, Boundary::Closed)
    }

    pub fn open_halfspace(normal: Vector, offset: f64) -> Region {
        Region::halfspace(normal, offset, Boundary::Open)
    }

    pub fn angular_cone(
        apex: Vector,
        theta_lo: f64,
        theta_hi: f64,
        include_lo: bool,
        include_hi: bool,
    ) -> Region {
        Region::AngularCone2d {
            apex,
            theta_lo,
            theta_hi,
            include_lo,
            include_hi,
        }
    }

    pub fn intersection(children: Vec<Region>) -> Region {
        Region::Intersection { children }
    }

    pub fn union(children: Vec<Region>) -> Region {
        Region::Union { children }
    }

    pub fn translate(child: Region, shift: Vector) -> Region {
        Region::Translate {
            child: Box::new(child),
            shift,
        }
    }

    /// Checks the structural invariants of every node.
    pub fn validate(&self) -> Result<()> {
        match self {
            Region::Halfspace { normal, offset, .. } => {
                if normal.is_zero() {
                    return Err(LabError::InvalidRegion(
                        "halfspace normal must be nonzero".into(),
                    ));
                }
                if !offset.is_finite() {
                    return Err(LabError::InvalidRegion(
                        "halfspace offset must be finite".into(),
                    ));
                }
            }
            Region::Ball { radius, .. } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(LabError::InvalidRegion(
                        "ball radius must be positive".into(),
                    ));
                }
            }
            Region::AffineFlat(flat) => flat.validate()?,
            Region::AngularCone2d {
                apex,
                theta_lo,
                theta_hi,
                ..
            } => {
                let width = theta_hi - theta_lo;
                if !(width > 0.0 && width <= TAU + 1e-15) {
                    return Err(LabError::InvalidRegion(
                        "angular cone needs 0 < hi - lo ≤ 2π".into(),
                    ));
                }
                if apex.width() > 2 {
                    return Err(LabError::InvalidRegion(
                        "angular cone apex must be planar".into(),
                    ));
                }
            }
            Region::Union { children } | Region::Intersection { children } => {
                for c in children {
                    c.validate()?;
                }
            }
            Region::Translate { child, .. } => child.validate()?,
            Region::AllSpace | Region::Singleton { .. } | Region::Empty => {}
        }
        Ok(())
    }

    /// Parses and validates the JSON form.
    pub fn from_json(text: &str) -> Result<Region> {
        let r: Region =
            serde_json::from_str(text).map_err(|e| LabError::InvalidRegion(e.to_string()))?;
        r.validate()?;
        Ok(r)
    }

    pub fn contains(&self, y: &Vector) -> bool {
        self.contains_tol(y, ZERO_TOL)
    }

    pub fn contains_tol(&self, y: &Vector, tol: f64) -> bool {
        match self {
            Region::Halfspace {
                normal,
                offset,
                boundary,
            } => {
                let s = (normal.inner(y) - offset) / normal.norm();
                match boundary {
                    Boundary::Closed => s >= -tol,
                    Boundary::Open => s > tol,
                }
            }
            Region::Ball { center, radius } => y.dist(center) <= radius + tol,
            Region::AffineFlat(flat) => flat.distance(y) <= tol,
            Region::AngularCone2d {
                apex,
                theta_lo,
                theta_hi,
                include_lo,
                include_hi,
            } => match cone_location(apex, *theta_lo, *theta_hi, y, tol) {
                ConePos::Apex => true,
                ConePos::Inside => true,
                ConePos::OnLo => *include_lo,
                ConePos::OnHi => *include_hi,
                ConePos::Outside => false,
            },
            Region::Union { children } => children.iter().any(|c| c.contains_tol(y, tol)),
            Region::Intersection { children } => children.iter().all(|c| c.contains_tol(y, tol)),
            Region::Translate { child, shift } => child.contains_tol(&y.sub(shift), tol),
            Region::AllSpace => true,
            Region::Singleton { point } => y.dist(point) <= tol,
            Region::Empty => false,
        }
    }

    /// Three-way location used by grid emitters.
    pub fn locate(&self, y: &Vector, tol: f64) -> Location {
        match self {
            Region::Halfspace { normal, offset, .. } => {
                let s = (normal.inner(y) - offset) / normal.norm();
                if s.abs() <= tol {
                    Location::Boundary
                } else if s > 0.0 {
                    Location::In
                } else {
                    Location::Out
                }
            }
            Region::Ball { center, radius } => {
                let s = radius - y.dist(center);
                if s.abs() <= tol {
                    Location::Boundary
                } else if s > 0.0 {
                    Location::In
                } else {
                    Location::Out
                }
            }
            Region::AngularCone2d {
                apex,
                theta_lo,
                theta_hi,
                ..
            } => match cone_location(apex, *theta_lo, *theta_hi, y, tol) {
                ConePos::Inside => Location::In,
                ConePos::Outside => Location::Out,
                ConePos::Apex | ConePos::OnLo | ConePos::OnHi => Location::Boundary,
            },
            Region::Union { children } => {
                let locs: Vec<Location> = children.iter().map(|c| c.locate(y, tol)).collect();
                if locs.contains(&Location::In) {
                    Location::In
                } else if locs.contains(&Location::Boundary) {
                    Location::Boundary
                } else {
                    Location::Out
                }
            }
            Region::Intersection { children } => {
                let locs: Vec<Location> = children.iter().map(|c| c.locate(y, tol)).collect();
                if locs.contains(&Location::Out) {
                    Location::Out
                } else if locs.contains(&Location::Boundary) {
                    Location::Boundary
                } else {
                    Location::In
                }
            }
            Region::Translate { child, shift } => child.locate(&y.sub(shift), tol),
            other => {
                if other.contains_tol(y, tol) {
                    Location::In
                } else {
                    Location::Out
                }
            }
        }
    }
}

enum ConePos {
    Apex,
    Inside,
    OnLo,
    OnHi,
    Outside,
}

fn ray_distance(w: (f64, f64), theta: f64) -> f64 {
    let (c, s) = (theta.cos(), theta.sin());
    let along = w.0 * c + w.1 * s;
    if along >= 0.0 {
        (w.0 * s - w.1 * c).abs()
    } else {
        w.0.hypot(w.1)
    }
}

fn cone_location(apex: &Vector, lo: f64, hi: f64, y: &Vector, tol: f64) -> ConePos {
    let w = y.sub(apex);
    if w.entries().any(|(i, x)| i >= 2 && x.abs() > tol) {
        return ConePos::Outside;
    }
    let w = (w.get(0), w.get(1));
    if w.0.hypot(w.1) <= tol {
        return ConePos::Apex;
    }
    let on_lo = ray_distance(w, lo) <= tol;
    let on_hi = ray_distance(w, hi) <= tol;
    let width = hi - lo;
    if on_lo && on_hi {
        return if width >= PI {
            ConePos::OnLo
        } else {
            ConePos::Apex
        };
    }
    if on_lo {
        return ConePos::OnLo;
    }
    if on_hi {
        return ConePos::OnHi;
    }
    let phi = (w.1.atan2(w.0) - lo).rem_euclid(TAU);
    if phi > 0.0 && phi < width {
        ConePos::Inside
    } else {
        ConePos::Outside
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_and_closed_halfspaces_differ_on_boundary() {
        let closed = Region::closed_halfspace(Vector::basis(1), 0.0);
        let open = Region::open_halfspace(Vector::basis(1), 0.0);
        let p = Vector::plane(3.0, 0.0);
        assert!(closed.contains(&p));
        assert!(!open.contains(&p));
        assert_eq!(closed.locate(&p, ZERO_TOL), Location::Boundary);
    }

    #[test]
    fn half_open_angular_cone() {
        let k = Region::angular_cone(Vector::zero(), 0.0, PI, true, false);
        assert!(k.contains(&Vector::plane(0.0, 1.0)));
        assert!(k.contains(&Vector::plane(2.0, 0.0)));
        assert!(k.contains(&Vector::zero()));
        assert!(!k.contains(&Vector::plane(-1.0, 0.0)));
        assert!(!k.contains(&Vector::plane(1.0, -1e-3)));
        assert!(k.contains(&Vector::plane(-1.0, 1e-3)));
    }

    #[test]
    fn translate_is_exact_shift() {
        let child = Region::Ball {
            center: Vector::zero(),
            radius: 1.0,
        };
        let s = Vector::plane(2.0, -1.0);
        let t = Region::translate(child.clone(), s.clone());
        for y in [
            Vector::plane(2.5, -1.0),
            Vector::plane(0.0, 0.0),
            Vector::plane(3.0, -1.0),
        ] {
            assert_eq!(t.contains(&y), child.contains(&y.sub(&s)));
        }
    }

    #[test]
    fn complement_flat_is_hyperplane() {
        let y = AffineFlat::orthogonal(Vector::zero(), &[Vector::basis(0)]).unwrap();
        let r = Region::AffineFlat(y.clone());
        assert!(r.contains(&Vector::basis(1).add(&Vector::basis(7))));
        assert!(!r.contains(&Vector::basis(0)));
        assert_eq!(
            y.project(&Vector::basis(0).add(&Vector::basis(1))),
            Vector::basis(1)
        );
    }

    #[test]
    fn json_round_trip() {
        let r = Region::intersection(vec![
            Region::closed_halfspace(Vector::plane(1.0, 0.0), -1.0),
            Region::translate(Region::AllSpace, Vector::plane(0.0, 1.0)),
            Region::AffineFlat(AffineFlat::span(Vector::zero(), &[Vector::basis(0)]).unwrap()),
        ]);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(Region::from_json(&s).unwrap(), r);
        let direct = Region::from_json(
            r#"{"type":"halfspace","normal":{"idx":[1],"val":[1.0]},"offset":0.0,"boundary":"open"}"#,
        )
        .unwrap();
        assert_eq!(direct, Region::open_halfspace(Vector::basis(1), 0.0));
        assert!(
            Region::from_json(r#"{"type":"ball","center":{"idx":[],"val":[]},"radius":-1}"#)
                .is_err()
        );
    }
}
