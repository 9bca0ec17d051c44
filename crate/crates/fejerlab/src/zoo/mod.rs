//! The example sequences, their parameters and their analytic records.

mod catalog;
pub mod closed_form;
pub mod recursive;

pub use catalog::{authors_cone_angles, authors_limit, log_bumps_entry_block};

use crate::engine::{Sequence, TailCertificate};
use crate::error::{LabError, Result};
use crate::hilbert::Vector;
use crate::sets::{AffineFlat, ClosedConvexSet, Region};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExampleId {
    AngularClosure,
    AffineCounter,
    IncreasingDistance,
    L2ShadowFail,
    L2IntNonempty,
    L2NoIneq,
    SegmentLimit,
    AuthorsExample,
    Type1Counter,
    QuasiIndCounter,
}

impl ExampleId {
    pub const ALL: [ExampleId; 10] = [
        ExampleId::AngularClosure,
        ExampleId::AffineCounter,
        ExampleId::IncreasingDistance,
        ExampleId::L2ShadowFail,
        ExampleId::L2IntNonempty,
        ExampleId::L2NoIneq,
        ExampleId::SegmentLimit,
        ExampleId::AuthorsExample,
        ExampleId::Type1Counter,
        ExampleId::QuasiIndCounter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExampleId::AngularClosure => "AngularClosure",
            ExampleId::AffineCounter => "AffineCounter",
            ExampleId::IncreasingDistance => "IncreasingDistance",
            ExampleId::L2ShadowFail => "L2ShadowFail",
            ExampleId::L2IntNonempty => "L2IntNonempty",
            ExampleId::L2NoIneq => "L2NoIneq",
            ExampleId::SegmentLimit => "SegmentLimit",
            ExampleId::AuthorsExample => "AuthorsExample",
            ExampleId::Type1Counter => "Type1Counter",
            ExampleId::QuasiIndCounter => "QuasiIndCounter",
        }
    }

    /// Whether the example lives in the plane.
    pub fn is_planar(self) -> bool {
        !matches!(
            self,
            ExampleId::L2ShadowFail
                | ExampleId::L2IntNonempty
                | ExampleId::L2NoIneq
                | ExampleId::QuasiIndCounter
        )
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExampleId {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        ExampleId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| LabError::UnknownExample(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesVerdict {
    Summable,
    Divergent,
    Inconclusive,
}

/// An analytic statement about a tolerance series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparator {
    pub verdict: SeriesVerdict,
    pub statement: &'static str,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct QuasiComparators {
    pub type1: Option<Comparator>,
    pub type2: Option<Comparator>,
    pub type3: Option<Comparator>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NamedClaim {
    pub id: &'static str,
    pub statement: &'static str,
}

/// Points of the target set where the tolerance at step `n` attains its supremum.
pub type SupRule = Arc<dyn Fn(usize) -> Vec<Vector> + Send + Sync>;

/// What is known about an example in closed form.
#[derive(Clone)]
pub struct AnalyticFacts {
    /// The limit, when it has a closed form.
    pub limit: Option<Vector>,
    /// The sequence converges in norm.
    pub convergent: bool,
    pub maximal_set: Region,
    pub claims: Vec<NamedClaim>,
    pub certificate: Arc<dyn TailCertificate>,
    /// Closed affine hull of the target set.
    pub affine_hull: AffineFlat,
    /// `conē(M̄ − z)`, based at the origin.
    pub limit_cone: Option<ClosedConvexSet>,
    /// The maximal Opial set, when it is a flat.
    pub opial_flat: Option<AffineFlat>,
    pub sup_rule: Option<SupRule>,
    pub comparators: QuasiComparators,
}

impl fmt::Debug for AnalyticFacts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticFacts")
            .field("limit", &self.limit)
            .field("convergent", &self.convergent)
            .field("maximal_set", &self.maximal_set)
            .field("claims", &self.claims)
            .finish_non_exhaustive()
    }
}

/// A named example: generator, target set and analytic record.
#[derive(Clone)]
pub struct ExampleSpec {
    pub id: ExampleId,
    pub params: serde_json::Value,
    pub generator: Arc<dyn Sequence>,
    /// The target set `M`.
    pub target: Region,
    pub target_closure: Option<ClosedConvexSet>,
    pub relative_interior: Region,
    pub analytic: AnalyticFacts,
}

impl fmt::Debug for ExampleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExampleSpec")
            .field("id", &self.id)
            .field("params", &self.params)
            .field("target", &self.target)
            .finish_non_exhaustive()
    }
}

impl ExampleSpec {
    pub fn new(id: ExampleId) -> ExampleSpec {
        catalog::build(id)
    }

    pub fn term(&self, n: usize) -> Vector {
        self.generator.term(n)
    }

    pub fn terms(&self, horizon: usize) -> Vec<Vector> {
        (0..horizon).map(|n| self.generator.term(n)).collect()
    }

    /// Largest coordinate index touched by the first `horizon` terms, plus one.
    pub fn width(&self, horizon: usize) -> usize {
        match self.id {
            ExampleId::L2ShadowFail | ExampleId::QuasiIndCounter => (horizon / 2 + 1).max(2),
            ExampleId::L2IntNonempty | ExampleId::L2NoIneq => horizon.max(1),
            _ => 2,
        }
    }

    /// Grid points of `[−extent, extent]²` lying in `M̄`; empty for non-planar examples.
    pub fn closure_samples(&self, extent: f64, grid: usize) -> Vec<Vector> {
        let Some(closure) = self.target_closure.as_ref().filter(|_| self.id.is_planar()) else {
            return Vec::new();
        };
        crate::engine::grid_points(extent, grid)
            .into_iter()
            .map(|(a, b)| Vector::plane(a, b))
            .filter(|y| closure.contains(y, 1e-12).unwrap_or(false))
            .collect()
    }

    /// The analytic limit, or `x_horizon` for convergent examples without one.
    pub fn limit_or_estimate(&self, horizon: usize) -> Option<(Vector, bool)> {
        match &self.analytic.limit {
            Some(z) => Some((z.clone(), true)),
            None if self.analytic.convergent => Some((self.generator.term(horizon), false)),
            None => None,
        }
    }
}

/// `generate(id, n)`.
pub fn generate(id: ExampleId, n: usize) -> Vector {
    ExampleSpec::new(id).term(n)
}

/// `analytic_facts(id)` by name.
pub fn analytic_facts(name: &str) -> Result<AnalyticFacts> {
    Ok(ExampleSpec::new(name.parse()?).analytic)
}

/// Indices of the distinct-consecutive-terms subsequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinctRun {
    pub indices: Vec<usize>,
    pub eventually_constant: bool,
}

/// `n₀ = 0`, then each next index is the first term that differs from the current one.
pub fn distinct_subsequence(seq: &dyn Sequence, horizon: usize) -> DistinctRun {
    let mut indices = vec![0];
    let mut current = seq.term(0);
    for n in 1..horizon {
        let x = seq.term(n);
        if x != current {
            indices.push(n);
            current = x;
        }
    }
    let last = *indices.last().unwrap_or(&0);
    DistinctRun {
        eventually_constant: last + 1 < horizon,
        indices,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::TermList;

    #[test]
    fn ids_round_trip() {
        for id in ExampleId::ALL {
            assert_eq!(id.name().parse::<ExampleId>().unwrap(), id);
        }
        assert!(matches!(
            "Nope".parse::<ExampleId>(),
            Err(LabError::UnknownExample(_))
        ));
    }

    #[test]
    fn distinct_runs() {
        let a = Vector::basis(0);
        let b = Vector::basis(1);
        let c = Vector::basis(2);
        let seq = TermList(vec![a.clone(), a.clone(), b.clone(), b, c]);
        assert_eq!(
            distinct_subsequence(&seq, 5),
            DistinctRun {
                indices: vec![0, 2, 4],
                eventually_constant: false
            }
        );
        let constant = TermList(vec![a.clone(); 6]);
        assert_eq!(
            distinct_subsequence(&constant, 6),
            DistinctRun {
                indices: vec![0],
                eventually_constant: true
            }
        );
        let moving = TermList((0..5).map(Vector::basis).collect());
        assert_eq!(
            distinct_subsequence(&moving, 5).indices,
            vec![0, 1, 2, 3, 4]
        );
    }

    #[test]
    fn authors_prefix() {
        let s = ExampleSpec::new(ExampleId::AuthorsExample);
        assert_eq!(s.term(0), Vector::plane(0.0, 2.0));
        assert_eq!(s.term(1), Vector::plane(1.0, 2.0));
        assert!(s.term(2).approx_eq(&Vector::plane(0.0, 3f64.sqrt()), 1e-15));
        assert!(s.term(3).approx_eq(&Vector::plane(0.5, 3f64.sqrt()), 1e-15));
    }
}
