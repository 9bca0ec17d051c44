//! Closed convex sets with closed-form metric projections.

use super::cone::FinCone;
use super::region::{AffineFlat, Boundary, Region};
use crate::error::{LabError, Result};
use crate::hilbert::Vector;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClosedConvexSet {
    /// `{y : ⟨normal, y⟩ ≥ offset}`.
    Halfspace {
        normal: Vector,
        offset: f64,
    },
    Ball {
        center: Vector,
        radius: f64,
    },
    Flat(AffineFlat),
    /// Closed planar cone `apex + ℝ₊·e([theta_lo, theta_hi])` of width at most π.
    AngularCone2d {
        apex: Vector,
        theta_lo: f64,
        theta_hi: f64,
    },
    Cone(FinCone),
    Segment {
        from: Vector,
        to: Vector,
    },
    /// A ball intersected with a flat through its center.
    BallInFlat {
        center: Vector,
        radius: f64,
        flat: AffineFlat,
    },
    Singleton {
        point: Vector,
    },
    AllSpace,
    Translate {
        child: Box<ClosedConvexSet>,
        shift: Vector,
    },
}

impl ClosedConvexSet {
    pub fn translate(child: ClosedConvexSet, shift: Vector) -> Self {
        ClosedConvexSet::Translate {
            child: Box::new(child),
            shift,
        }
    }

    /// Recognizes regions that are closed convex primitives.
    pub fn from_region(region: &Region) -> Result<Self> {
        region.validate()?;
        Ok(match region {
            Region::Halfspace {
                normal,
                offset,
                boundary: Boundary::Closed,
            } => ClosedConvexSet::Halfspace {
                normal: normal.clone(),
                offset: *offset,
            },
            Region::Ball { center, radius } => ClosedConvexSet::Ball {
                center: center.clone(),
                radius: *radius,
            },
            Region::AffineFlat(flat) => ClosedConvexSet::Flat(flat.clone()),
            Region::AngularCone2d {
                apex,
                theta_lo,
                theta_hi,
                include_lo: true,
                include_hi: true,
            } => {
                if theta_hi - theta_lo > PI + 1e-15 {
                    return Err(LabError::UnsupportedSet("angular cone wider than π".into()));
                }
                ClosedConvexSet::AngularCone2d {
                    apex: apex.clone(),
                    theta_lo: *theta_lo,
                    theta_hi: *theta_hi,
                }
            }
            Region::Singleton { point } => ClosedConvexSet::Singleton {
                point: point.clone(),
            },
            Region::AllSpace => ClosedConvexSet::AllSpace,
            Region::Translate { child, shift } => {
                ClosedConvexSet::translate(ClosedConvexSet::from_region(child)?, shift.clone())
            }
            Region::Intersection { children } => match children.as_slice() {
                [only] => ClosedConvexSet::from_region(only)?,
                [Region::Ball { center, radius }, Region::AffineFlat(flat)]
                | [Region::AffineFlat(flat), Region::Ball { center, radius }] => {
                    if flat.distance(center) > 1e-12 {
                        return Err(LabError::UnsupportedSet(
                            "ball ∩ flat needs the center on the flat".into(),
                        ));
                    }
                    ClosedConvexSet::BallInFlat {
                        center: center.clone(),
                        radius: *radius,
                        flat: flat.clone(),
                    }
                }
                _ => return Err(LabError::UnsupportedSet("general intersection".into())),
            },
            Region::Halfspace {
                boundary: Boundary::Open,
                ..
            } => {
                return Err(LabError::UnsupportedSet(
                    "open halfspace is not closed".into(),
                ))
            }
            Region::AngularCone2d { .. } => {
                return Err(LabError::UnsupportedSet(
                    "angular cone with an excluded ray is not closed".into(),
                ))
            }
            Region::Union { .. } => return Err(LabError::UnsupportedSet("union".into())),
            Region::Empty => return Err(LabError::UnsupportedSet("empty set".into())),
        })
    }

    /// Membership description as a region.
    pub fn to_region(&self) -> Result<Region> {
        Ok(match self {
            ClosedConvexSet::Halfspace { normal, offset } => {
                Region::closed_halfspace(normal.clone(), *offset)
            }
            ClosedConvexSet::Ball { center, radius } => Region::Ball {
                center: center.clone(),
                radius: *radius,
            },
            ClosedConvexSet::Flat(f) => Region::AffineFlat(f.clone()),
            ClosedConvexSet::AngularCone2d {
                apex,
                theta_lo,
                theta_hi,
            } => Region::angular_cone(apex.clone(), *theta_lo, *theta_hi, true, true),
            ClosedConvexSet::Segment { from, to } => {
                let flat = AffineFlat::span(from.clone(), &[to.sub(from)])?;
                let d = to.sub(from);
                Region::intersection(vec![
                    Region::AffineFlat(flat),
                    Region::closed_halfspace(d.clone(), d.inner(from)),
                    Region::closed_halfspace(d.scale(-1.0), -d.inner(to)),
                ])
            }
            ClosedConvexSet::BallInFlat {
                center,
                radius,
                flat,
            } => Region::intersection(vec![
                Region::Ball {
                    center: center.clone(),
                    radius: *radius,
                },
                Region::AffineFlat(flat.clone()),
            ]),
            ClosedConvexSet::Singleton { point } => Region::Singleton {
                point: point.clone(),
            },
            ClosedConvexSet::AllSpace => Region::AllSpace,
            ClosedConvexSet::Translate { child, shift } => {
                Region::translate(child.to_region()?, shift.clone())
            }
            ClosedConvexSet::Cone(_) => {
                return Err(LabError::UnsupportedSet(
                    "cone membership goes through FinCone::contains".into(),
                ))
            }
        })
    }

    pub fn contains(&self, y: &Vector, tol: f64) -> Result<bool> {
        match self {
            ClosedConvexSet::Cone(k) => Ok(k.contains(y, tol)),
            ClosedConvexSet::Translate { child, shift } => child.contains(&y.sub(shift), tol),
            other => Ok(other.to_region()?.contains_tol(y, tol)),
        }
    }

    /// Metric projection.
    pub fn project(&self, y: &Vector) -> Result<Vector> {
        Ok(match self {
            ClosedConvexSet::Halfspace { normal, offset } => {
                let gap = offset - normal.inner(y);
                if gap > 0.0 {
                    y.axpy(gap / normal.norm_sq(), normal)
                } else {
                    y.clone()
                }
            }
            ClosedConvexSet::Ball { center, radius } => project_ball(center, *radius, y),
            ClosedConvexSet::Flat(flat) => flat.project(y),
            ClosedConvexSet::AngularCone2d {
                apex,
                theta_lo,
                theta_hi,
            } => {
                if theta_hi - theta_lo > PI + 1e-15 || theta_hi <= theta_lo {
                    return Err(LabError::UnsupportedSet("angular cone wider than π".into()));
                }
                let w = y.sub(apex);
                let planar = project_angular(w.get(0), w.get(1), *theta_lo, *theta_hi);
                apex.add(&Vector::plane(planar.0, planar.1))
            }
            ClosedConvexSet::Cone(k) => k.project(y)?,
            ClosedConvexSet::Segment { from, to } => {
                let d = to.sub(from);
                let len2 = d.norm_sq();
                if len2 == 0.0 {
                    from.clone()
                } else {
                    let t = (y.sub(from).inner(&d) / len2).clamp(0.0, 1.0);
                    from.axpy(t, &d)
                }
            }
            ClosedConvexSet::BallInFlat {
                center,
                radius,
                flat,
            } => project_ball(center, *radius, &flat.project(y)),
            ClosedConvexSet::Singleton { point } => point.clone(),
            ClosedConvexSet::AllSpace => y.clone(),
            ClosedConvexSet::Translate { child, shift } => child.project(&y.sub(shift))?.add(shift),
        })
    }

    pub fn distance(&self, y: &Vector) -> Result<f64> {
        Ok(self.project(y)?.dist(y))
    }
}

fn project_ball(center: &Vector, radius: f64, y: &Vector) -> Vector {
    let w = y.sub(center);
    let n = w.norm();
    if n <= radius {
        y.clone()
    } else {
        center.axpy(radius / n, &w)
    }
}

/// Angle clamping onto a closed arc of width ≤ π; exact antipodal ties go to `lo`.
fn project_angular(x: f64, y: f64, lo: f64, hi: f64) -> (f64, f64) {
    if x == 0.0 && y == 0.0 {
        return (0.0, 0.0);
    }
    let width = hi - lo;
    let phi = (y.atan2(x) - lo).rem_euclid(TAU);
    if phi <= width {
        return (x, y);
    }
    let past_hi = phi - width;
    let before_lo = TAU - phi;
    let theta = if before_lo <= past_hi { lo } else { hi };
    let (c, s) = (theta.cos(), theta.sin());
    let t = (x * c + y * s).max(0.0);
    (t * c, t * s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn halfspace_drops_negative_part() {
        let h = ClosedConvexSet::Halfspace {
            normal: Vector::plane(0.0, 1.0),
            offset: 0.0,
        };
        assert_eq!(
            h.project(&Vector::plane(2.0, -3.0)).unwrap(),
            Vector::plane(2.0, 0.0)
        );
    }

    #[test]
    fn sequence_space_shadows() {
        let y = ClosedConvexSet::Flat(
            AffineFlat::orthogonal(Vector::zero(), &[Vector::basis(0)]).unwrap(),
        );
        let x = Vector::basis(0).add(&Vector::basis(1));
        assert_eq!(y.project(&x).unwrap(), Vector::basis(1));
        let c = ClosedConvexSet::from_region(&Region::intersection(vec![
            Region::Ball {
                center: Vector::zero(),
                radius: 1.0,
            },
            Region::AffineFlat(
                AffineFlat::orthogonal(Vector::zero(), &[Vector::basis(0)]).unwrap(),
            ),
        ]))
        .unwrap();
        let p = c.project(&Vector::basis(1).add(&Vector::basis(2))).unwrap();
        let want = Vector::basis(1).add(&Vector::basis(2)).scale(FRAC_1_SQRT_2);
        assert!(p.approx_eq(&want, 1e-15));
    }

    #[test]
    fn open_sets_are_rejected() {
        let r = Region::open_halfspace(Vector::basis(0), 0.0);
        assert!(matches!(
            ClosedConvexSet::from_region(&r),
            Err(LabError::UnsupportedSet(_))
        ));
        let k = Region::angular_cone(Vector::zero(), 0.0, PI, true, false);
        assert!(matches!(
            ClosedConvexSet::from_region(&k),
            Err(LabError::UnsupportedSet(_))
        ));
    }

    #[test]
    fn angular_clamp_and_tie() {
        let k = ClosedConvexSet::AngularCone2d {
            apex: Vector::zero(),
            theta_lo: 0.0,
            theta_hi: PI / 2.0,
        };
        assert_eq!(
            k.project(&Vector::plane(2.0, -1.0)).unwrap(),
            Vector::plane(2.0, 0.0)
        );
        assert!(k.project(&Vector::plane(-1.0, -1.0)).unwrap().is_zero());
        let half = ClosedConvexSet::AngularCone2d {
            apex: Vector::zero(),
            theta_lo: 0.0,
            theta_hi: PI,
        };
        let p = half.project(&Vector::plane(0.0, -1.0)).unwrap();
        assert!(p.norm() < 1e-15);
        let q = half.project(&Vector::plane(1.0, -1.0)).unwrap();
        assert!(q.approx_eq(&Vector::plane(1.0, 0.0), 1e-15));
    }

    #[test]
    fn segment_and_translate() {
        let s = ClosedConvexSet::Segment {
            from: Vector::plane(-1.0, 0.0),
            to: Vector::plane(1.0, 0.0),
        };
        assert_eq!(
            s.project(&Vector::plane(3.0, 2.0)).unwrap(),
            Vector::plane(1.0, 0.0)
        );
        let t = ClosedConvexSet::translate(
            ClosedConvexSet::Ball {
                center: Vector::zero(),
                radius: 1.0,
            },
            Vector::plane(5.0, 0.0),
        );
        assert!(t
            .project(&Vector::plane(8.0, 0.0))
            .unwrap()
            .approx_eq(&Vector::plane(6.0, 0.0), 1e-15));
    }
}
