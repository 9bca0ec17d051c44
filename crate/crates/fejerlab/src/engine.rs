//! Step halfspaces, the limit-inferior membership oracle, and planar snapshots.

use crate::error::{LabError, Result};
use crate::hilbert::{Vector, ZERO_TOL};
use crate::sets::{Location, Region};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Read access to the terms of a sequence.
pub trait Sequence: Send + Sync {
    fn term(&self, n: usize) -> Vector;

    /// `x_{n+1} − x_n`; generators override this with a cancellation-free formula when they have one.
    fn step(&self, n: usize) -> Vector {
        self.term(n + 1).sub(&self.term(n))
    }

    /// The set of points at least as close to `x_{n+1}` as to `x_n`.
    fn halfspace(&self, n: usize) -> StepHalfspace {
        StepHalfspace::from_step(&self.term(n), &self.step(n))
    }
}

/// A sequence given by an explicit list of terms, frozen at its last term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermList(pub Vec<Vector>);

impl Sequence for TermList {
    fn term(&self, n: usize) -> Vector {
        match self.0.get(n) {
            Some(v) => v.clone(),
            None => self.0.last().cloned().unwrap_or_default(),
        }
    }
}

impl<S: Sequence + ?Sized> Sequence for std::sync::Arc<S> {
    fn term(&self, n: usize) -> Vector {
        (**self).term(n)
    }
    fn step(&self, n: usize) -> Vector {
        (**self).step(n)
    }
    fn halfspace(&self, n: usize) -> StepHalfspace {
        (**self).halfspace(n)
    }
}

/// `C(x, x₊) = {y : ⟨y, x₊ − x⟩ ≥ (‖x₊‖² − ‖x‖²)/2}`, or the whole space when `x = x₊`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum StepHalfspace {
    Proper {
        normal: Vector,
        offset: f64,
        midpoint: Vector,
    },
    AllSpace,
}

impl StepHalfspace {
    pub fn new(x: &Vector, x_next: &Vector) -> Self {
        StepHalfspace::from_step(x, &x_next.sub(x))
    }

    pub fn from_step(x: &Vector, step: &Vector) -> Self {
        if step.is_zero() {
            return StepHalfspace::AllSpace;
        }
        let midpoint = x.axpy(0.5, step);
        let offset = midpoint.inner(step);
        StepHalfspace::Proper {
            normal: step.clone(),
            offset,
            midpoint,
        }
    }

    /// Signed distance of `y` to the boundary, positive inside.
    pub fn signed_distance(&self, y: &Vector) -> Option<f64> {
        match self {
            StepHalfspace::Proper {
                normal, midpoint, ..
            } => Some(y.sub(midpoint).inner(normal) / normal.norm()),
            StepHalfspace::AllSpace => None,
        }
    }

    /// Membership with slack `tol·(1 + ‖y‖)` on the signed distance.
    pub fn contains_tol(&self, y: &Vector, tol: f64) -> bool {
        match self.signed_distance(y) {
            Some(s) => s >= -tol * (1.0 + y.norm()),
            None => true,
        }
    }

    pub fn contains(&self, y: &Vector) -> bool {
        self.contains_tol(y, ZERO_TOL)
    }

    /// Closed halfspace with unit normal, or the whole space.
    pub fn to_region(&self) -> Region {
        match self {
            StepHalfspace::Proper {
                normal, midpoint, ..
            } => {
                let u = normal.scale(1.0 / normal.norm());
                Region::closed_halfspace(u.clone(), midpoint.inner(&u))
            }
            StepHalfspace::AllSpace => Region::AllSpace,
        }
    }
}

/// `step_halfspace(x, x₊)`.
pub fn step_halfspace(x: &Vector, x_next: &Vector) -> StepHalfspace {
    StepHalfspace::new(x, x_next)
}

/// Analytic tail behavior of a point relative to the step halfspaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "claim")]
pub enum TailClaim {
    /// `y ∈ C_n` for every `n ≥ from`.
    EventuallyIn {
        from: usize,
    },
    InfinitelyOftenOut,
    /// The rule does not decide this point.
    Unknown,
}

/// Per-example analytic membership rule for the limit inferior of the step halfspaces.
pub trait TailCertificate: Send + Sync {
    fn claim(&self, y: &Vector) -> TailClaim;
}

impl<F> TailCertificate for F
where
    F: Fn(&Vector) -> TailClaim + Send + Sync,
{
    fn claim(&self, y: &Vector) -> TailClaim {
        self(y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum LiminfVerdict {
    InTail {
        #[serde(rename = "N")]
        n: usize,
    },
    Excluded {
        violations: Vec<usize>,
        certified: bool,
    },
    Inconclusive {
        horizon: usize,
    },
}

impl LiminfVerdict {
    pub fn is_in_tail(&self) -> bool {
        matches!(self, LiminfVerdict::InTail { .. })
    }

    pub fn is_excluded(&self) -> bool {
        matches!(self, LiminfVerdict::Excluded { .. })
    }
}

/// Knobs for the membership oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanOptions {
    pub tol: f64,
    /// A clean tail starting at or before `clean_fraction · horizon` counts as InTail without a certificate.
    pub clean_fraction: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            tol: ZERO_TOL,
            clean_fraction: 0.5,
        }
    }
}

/// Indices `n < horizon` with `y ∉ C_n`.
pub fn violations(seq: &dyn Sequence, y: &Vector, horizon: usize, tol: f64) -> Vec<usize> {
    (0..horizon)
        .filter(|&n| !seq.halfspace(n).contains_tol(y, tol))
        .collect()
}

/// Decides whether `y` lies in `∪_N ∩_{n≥N} C_n` from a finite scan plus an optional certificate.
pub fn liminf_membership(
    seq: &dyn Sequence,
    y: &Vector,
    horizon: usize,
    cert: Option<&dyn TailCertificate>,
) -> LiminfVerdict {
    liminf_membership_with(seq, y, horizon, cert, ScanOptions::default())
}

pub fn liminf_membership_with(
    seq: &dyn Sequence,
    y: &Vector,
    horizon: usize,
    cert: Option<&dyn TailCertificate>,
    opts: ScanOptions,
) -> LiminfVerdict {
    let bad = violations(seq, y, horizon, opts.tol);
    verdict_from_scan(bad, horizon, cert.map(|c| c.claim(y)), opts)
}

fn verdict_from_scan(
    bad: Vec<usize>,
    horizon: usize,
    claim: Option<TailClaim>,
    opts: ScanOptions,
) -> LiminfVerdict {
    let clean_from = bad.last().map_or(0, |&n| n + 1);
    match claim {
        Some(TailClaim::InfinitelyOftenOut) => LiminfVerdict::Excluded {
            violations: bad,
            certified: true,
        },
        Some(TailClaim::EventuallyIn { from }) => {
            if clean_from < horizon {
                LiminfVerdict::InTail { n: clean_from }
            } else {
                LiminfVerdict::InTail {
                    n: from.max(clean_from),
                }
            }
        }
        Some(TailClaim::Unknown) | None => {
            if clean_from >= horizon {
                LiminfVerdict::Excluded {
                    violations: bad,
                    certified: false,
                }
            } else if clean_from as f64 <= opts.clean_fraction * horizon as f64 {
                LiminfVerdict::InTail { n: clean_from }
            } else {
                LiminfVerdict::Inconclusive { horizon }
            }
        }
    }
}

/// Intersection of the step halfplanes `C_n`, `n ∈ [start, horizon)`, of a planar sequence.
pub fn maximal_set_2d(seq: &dyn Sequence, start: usize, horizon: usize) -> Result<Region> {
    let mut children = Vec::with_capacity(horizon.saturating_sub(start));
    for n in start..horizon {
        if seq.term(n).width() > 2 {
            return Err(LabError::InvalidArgument(format!("term {n} is not planar")));
        }
        match seq.halfspace(n) {
            StepHalfspace::AllSpace => return Err(LabError::DegenerateStep { n }),
            h => children.push(h.to_region()),
        }
    }
    Ok(Region::intersection(children))
}

/// One cell of a planar grid snapshot.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub x: f64,
    pub y: f64,
    pub location: Location,
}

/// Points of the square `[-extent, extent]²` on a `grid × grid` lattice, row-major from the bottom.
pub fn grid_points(extent: f64, grid: usize) -> Vec<(f64, f64)> {
    let step = 2.0 * extent / (grid - 1) as f64;
    let coord = |i: usize| {
        let v = -extent + step * i as f64;
        if v.abs() < 1e-12 {
            0.0
        } else {
            v
        }
    };
    (0..grid)
        .flat_map(|j| (0..grid).map(move |i| (coord(i), coord(j))))
        .collect()
}

/// Locates each grid point relative to `region`, evaluated in parallel and kept in grid order.
pub fn grid_snapshot(region: &Region, extent: f64, grid: usize, tol: f64) -> Vec<GridCell> {
    grid_points(extent, grid)
        .into_par_iter()
        .map(|(x, y)| GridCell {
            x,
            y,
            location: region.locate(&Vector::plane(x, y), tol),
        })
        .collect()
}

/// Vertices of the region's halfplanes clipped to the box `[-extent, extent]²`.
pub fn clipped_polygon(region: &Region, extent: f64) -> Vec<(f64, f64)> {
    let mut poly = vec![
        (-extent, -extent),
        (extent, -extent),
        (extent, extent),
        (-extent, extent),
    ];
    let mut halfplanes = Vec::new();
    collect_halfplanes(region, &mut halfplanes);
    for (a, b, c) in halfplanes {
        poly = clip(&poly, a, b, c);
        if poly.is_empty() {
            break;
        }
    }
    poly
}

fn collect_halfplanes(region: &Region, out: &mut Vec<(f64, f64, f64)>) {
    match region {
        Region::Halfspace { normal, offset, .. } => {
            out.push((normal.get(0), normal.get(1), *offset))
        }
        Region::Intersection { children } => {
            for c in children {
                collect_halfplanes(c, out);
            }
        }
        _ => {}
    }
}

/// Sutherland–Hodgman step keeping `a·x + b·y ≥ c`.
fn clip(poly: &[(f64, f64)], a: f64, b: f64, c: f64) -> Vec<(f64, f64)> {
    let f = |p: (f64, f64)| a * p.0 + b * p.1 - c;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        let (fp, fq) = (f(p), f(q));
        if fp >= 0.0 {
            out.push(p);
        }
        if (fp >= 0.0) != (fq >= 0.0) {
            let t = fp / (fp - fq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn equidistant_origin_is_on_boundary() {
        let h = step_halfspace(&Vector::plane(1.0, 0.0), &Vector::plane(0.0, 1.0));
        match &h {
            StepHalfspace::Proper { normal, offset, .. } => {
                assert_eq!(normal, &Vector::plane(-1.0, 1.0));
                assert_eq!(*offset, 0.0);
            }
            StepHalfspace::AllSpace => panic!("expected a proper halfspace"),
        }
        assert_eq!(h.signed_distance(&Vector::zero()), Some(0.0));
        assert!(h.contains(&Vector::zero()));
    }

    #[test]
    fn repeated_term_gives_all_space() {
        let e0 = Vector::basis(0);
        assert_eq!(step_halfspace(&e0, &e0), StepHalfspace::AllSpace);
    }

    #[test]
    fn midpoint_lies_on_boundary() {
        let x = Vector::from_dense(&[0.3, -1.2, 2.0]);
        let xp = Vector::from_dense(&[1.1, 0.4, -0.5]);
        if let StepHalfspace::Proper { normal, offset, .. } = step_halfspace(&x, &xp) {
            let mid = x.add(&xp).scale(0.5);
            assert!((mid.inner(&normal) - offset).abs() < 1e-12);
            assert!((offset - (xp.norm_sq() - x.norm_sq()) / 2.0).abs() < 1e-12);
        } else {
            panic!("expected a proper halfspace");
        }
    }

    #[test]
    fn chord_halfplane_is_angular_cone() {
        let (a, b) = (-0.9, -0.2);
        let beta = (a + b) / 2.0;
        let h = step_halfspace(&Vector::from_angle(a), &Vector::from_angle(b));
        let cone = Region::angular_cone(Vector::zero(), beta, beta + PI, true, true);
        for k in 0..720 {
            let t = k as f64 * PI / 360.0 + 0.001;
            let u = Vector::from_angle(t);
            assert_eq!(h.contains(&u), cone.contains(&u), "direction {t}");
        }
    }

    #[test]
    fn left_wedge_from_two_steps() {
        let seq = TermList(vec![
            Vector::plane(1.0, 0.0),
            Vector::plane(0.0, 1.0),
            Vector::plane(-1.0, 0.0),
        ]);
        let r = maximal_set_2d(&seq, 0, 2).unwrap();
        assert!(r.contains(&Vector::plane(-1.0, 0.0)));
        assert!(r.contains(&Vector::plane(-2.0, 1.0)));
        assert!(!r.contains(&Vector::plane(1.0, 0.0)));
        assert!(!r.contains(&Vector::plane(0.0, 1.0)));
        assert!(!r.contains(&Vector::plane(-1.0, 2.0)));
        let seq = TermList(vec![Vector::plane(1.0, 0.0), Vector::plane(1.0, 0.0)]);
        assert_eq!(
            maximal_set_2d(&seq, 0, 1),
            Err(LabError::DegenerateStep { n: 0 })
        );
    }

    #[test]
    fn verdict_rules() {
        let o = ScanOptions::default();
        assert_eq!(
            verdict_from_scan(vec![], 10, None, o),
            LiminfVerdict::InTail { n: 0 }
        );
        assert_eq!(
            verdict_from_scan(vec![3], 10, None, o),
            LiminfVerdict::InTail { n: 4 }
        );
        assert_eq!(
            verdict_from_scan(vec![6], 10, None, o),
            LiminfVerdict::Inconclusive { horizon: 10 }
        );
        assert_eq!(
            verdict_from_scan(vec![9], 10, None, o),
            LiminfVerdict::Excluded {
                violations: vec![9],
                certified: false
            }
        );
        assert_eq!(
            verdict_from_scan(vec![6], 10, Some(TailClaim::InfinitelyOftenOut), o),
            LiminfVerdict::Excluded {
                violations: vec![6],
                certified: true
            }
        );
        assert_eq!(
            verdict_from_scan(vec![6], 10, Some(TailClaim::EventuallyIn { from: 7 }), o),
            LiminfVerdict::InTail { n: 7 }
        );
    }

    #[test]
    fn verdict_json() {
        let s = serde_json::to_string(&LiminfVerdict::InTail { n: 3 }).unwrap();
        assert_eq!(s, r#"{"verdict":"InTail","N":3}"#);
    }

    #[test]
    fn polygon_clip() {
        let r = Region::intersection(vec![Region::closed_halfspace(Vector::plane(1.0, 0.0), 0.0)]);
        let poly = clipped_polygon(&r, 1.0);
        assert_eq!(poly.len(), 4);
        assert!(poly.iter().all(|p| p.0 >= 0.0));
    }
}
