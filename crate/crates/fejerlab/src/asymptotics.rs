//! Directional asymptotics: normalized differences, their cluster directions, the cone
//! they generate, and the checks built from it. Also the maximal Opial flat.
//!
//! Cluster points are strong cluster points of finite truncations, standing in for
//! weak cluster points.

use crate::config::LabConfig;
use crate::engine::{grid_points, maximal_set_2d, Sequence};
use crate::error::{LabError, Result};
use crate::hilbert::Vector;
use crate::lab::{offsets, opial_at, OpialVerdict};
use crate::sets::{
    gram_schmidt, is_solid_dual, nnls, AffineFlat, ClosedConvexSet, FinCone, Region,
};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Tolerance used when `z` is an estimate rather than the analytic limit.
pub const ESTIMATED_Z_TOL: f64 = 1e-4;

/// `vₙ = (xₙ − xₙ₊₁)/‖xₙ − xₙ₊₁‖`, or zero on repeats, for `n < horizon`.
pub fn normalized_diffs(seq: &dyn Sequence, horizon: usize) -> Vec<Vector> {
    (0..horizon)
        .map(|n| {
            seq.step(n)
                .scale(-1.0)
                .unit()
                .unwrap_or_else(|_| Vector::zero())
        })
        .collect()
}

/// The normalized differences over the tail `[horizon/2, horizon)`.
pub fn tail_diffs(seq: &dyn Sequence, horizon: usize) -> Vec<Vector> {
    normalized_diffs(seq, horizon).split_off(horizon / 2)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionClusterSet {
    pub representatives: Vec<Vector>,
    pub counts: Vec<usize>,
    pub epsilon: f64,
}

impl DirectionClusterSet {
    /// `σ_𝒟(x) = max_d ⟨d, x⟩`.
    pub fn support(&self, x: &Vector) -> f64 {
        self.representatives
            .iter()
            .map(|d| d.inner(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.representatives
            .iter()
            .map(Vector::width)
            .max()
            .unwrap_or(0)
    }
}

struct Bucket {
    sum: Vector,
    count: usize,
    rep: Vector,
}

impl Bucket {
    fn absorb(&mut self, sum: &Vector, count: usize) {
        self.sum = self.sum.add(sum);
        self.count += count;
        self.rep = self.sum.unit().unwrap_or_else(|_| self.rep.clone());
    }
}

/// Greedy `ε`-ball clustering of unit vectors in input order, then merging of
/// representatives closer than `ε`; clusters with fewer than `min_count` members are dropped.
pub fn cluster_directions(vs: &[Vector], epsilon: f64, min_count: usize) -> DirectionClusterSet {
    let buckets = greedy(vs.iter().filter(|v| !v.is_zero()), epsilon, |b, v| {
        b.rep.dist(v)
    });
    finish(buckets, epsilon, min_count, true)
}

fn greedy<'a>(
    items: impl Iterator<Item = &'a Vector>,
    epsilon: f64,
    dist: impl Fn(&Bucket, &Vector) -> f64,
) -> Vec<Bucket> {
    let mut buckets: Vec<Bucket> = Vec::new();
    for v in items {
        match buckets.iter_mut().find(|b| dist(b, v) <= epsilon) {
            Some(b) => b.absorb(v, 1),
            None => buckets.push(Bucket {
                sum: v.clone(),
                count: 1,
                rep: v.clone(),
            }),
        }
    }
    buckets
}

fn finish(
    mut buckets: Vec<Bucket>,
    epsilon: f64,
    min_count: usize,
    normalize: bool,
) -> DirectionClusterSet {
    loop {
        let pair = (0..buckets.len())
            .flat_map(|i| (i + 1..buckets.len()).map(move |j| (i, j)))
            .find(|&(i, j)| buckets[i].rep.dist(&buckets[j].rep) <= epsilon);
        let Some((i, j)) = pair else { break };
        let b = buckets.remove(j);
        buckets[i].absorb(&b.sum, b.count);
        if !normalize {
            buckets[i].rep = buckets[i].sum.scale(1.0 / buckets[i].count as f64);
        }
    }
    buckets.retain(|b| b.count >= min_count);
    DirectionClusterSet {
        representatives: buckets.iter().map(|b| b.rep.clone()).collect(),
        counts: buckets.iter().map(|b| b.count).collect(),
        epsilon,
    }
}

/// Clusters of points (not directions): representatives are plain means.
pub fn cluster_points(xs: &[Vector], epsilon: f64, min_count: usize) -> DirectionClusterSet {
    let mut buckets: Vec<Bucket> = Vec::new();
    for x in xs {
        match buckets.iter_mut().find(|b| b.rep.dist(x) <= epsilon) {
            Some(b) => {
                b.sum = b.sum.add(x);
                b.count += 1;
                b.rep = b.sum.scale(1.0 / b.count as f64);
            }
            None => buckets.push(Bucket {
                sum: x.clone(),
                count: 1,
                rep: x.clone(),
            }),
        }
    }
    finish(buckets, epsilon, min_count, false)
}

/// `𝒦 = (conē 𝒟)^⊖ = {u : ⟨d, u⟩ ≤ 0 for all d ∈ 𝒟}`.
pub fn cone_from_clusters(clusters: &DirectionClusterSet) -> Result<FinCone> {
    if clusters.is_empty() {
        return Err(LabError::NoClusters);
    }
    FinCone::halfspaces(clusters.dim().max(1), clusters.representatives.clone())
}

/// Probes where `x ∈ 𝒦` and `σ_𝒟(x) ≤ tol` disagree.
pub fn support_mismatches(
    clusters: &DirectionClusterSet,
    cone: &FinCone,
    probes: &[Vector],
    tol: f64,
) -> Vec<usize> {
    probes
        .iter()
        .enumerate()
        .filter(|(_, x)| cone.contains(x, tol) != (clusters.support(x) <= tol))
        .map(|(i, _)| i)
        .collect()
}

/// `max_n ⟨x, vₙ⟩` over the given tail, the finite stand-in for `limsup ⟨x, vₙ⟩`.
pub fn tail_support(tail: &[Vector], x: &Vector) -> f64 {
    tail.iter()
        .filter(|v| !v.is_zero())
        .map(|v| v.inner(x))
        .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub direction_clusters: DirectionClusterSet,
    pub offset_clusters: DirectionClusterSet,
    /// `max ⟨w, y − z⟩` over direction clusters `w` and samples `y`.
    pub direction_pairing: f64,
    pub offset_pairing: f64,
    pub tolerance: f64,
    pub z: Vector,
    pub z_is_analytic: bool,
    pub passed: bool,
}

fn pairing(clusters: &DirectionClusterSet, samples: &[Vector], z: &Vector) -> f64 {
    clusters
        .representatives
        .iter()
        .flat_map(|w| samples.iter().map(move |y| w.inner(&y.sub(z))))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Both parts of the direct inclusion: every cluster `w` of `(vₙ)` and of `((xₙ − z)/‖xₙ − z‖)`
/// pairs nonpositively with `M̄ − z` on the samples.
pub fn direct_inclusion_check(
    seq: &dyn Sequence,
    z: Option<&Vector>,
    samples: &[Vector],
    horizon: usize,
    tol: f64,
    cfg: &LabConfig,
) -> Result<InclusionReport> {
    if samples.is_empty() {
        return Err(LabError::EmptySample);
    }
    let tail = horizon / 2;
    let direction_clusters =
        cluster_directions(&tail_diffs(seq, horizon), cfg.cluster_eps, cfg.min_count);
    let off = offsets(seq, z, horizon, 2 * horizon);
    let units = off[tail..]
        .iter()
        .enumerate()
        .map(|(i, o)| o.unit().map_err(|_| LabError::DivideByZero { n: tail + i }))
        .collect::<Result<Vec<_>>>()?;
    let offset_clusters = cluster_directions(&units, cfg.cluster_eps, cfg.min_count);
    let z_val = match z {
        Some(z) => z.clone(),
        None => seq.term(2 * horizon),
    };
    let tolerance = if z.is_some() {
        tol
    } else {
        tol.max(ESTIMATED_Z_TOL)
    };
    let direction_pairing = pairing(&direction_clusters, samples, &z_val);
    let offset_pairing = pairing(&offset_clusters, samples, &z_val);
    Ok(InclusionReport {
        passed: direction_pairing <= tolerance && offset_pairing <= tolerance,
        direction_clusters,
        offset_clusters,
        direction_pairing,
        offset_pairing,
        tolerance,
        z: z_val,
        z_is_analytic: z.is_some(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioProfile {
    /// `d_K(xₙ − z)/‖xₙ − z‖` for `n < horizon`.
    pub ratios: Vec<f64>,
    pub liminf_est: f64,
    pub limit_one: bool,
    pub gamma_est: f64,
    pub z_is_analytic: bool,
}

/// Width of the tail window behind `limit_one`.
pub const RATIO_WINDOW: usize = 20;

pub fn ratio_profile(
    seq: &dyn Sequence,
    cone: &ClosedConvexSet,
    z: Option<&Vector>,
    horizon: usize,
) -> Result<RatioProfile> {
    let off = offsets(seq, z, horizon, 2 * horizon);
    let ratios = off
        .iter()
        .enumerate()
        .map(|(n, o)| {
            let r = o.norm();
            if r == 0.0 {
                return Err(LabError::DivideByZero { n });
            }
            Ok(cone.distance(o)? / r)
        })
        .collect::<Result<Vec<f64>>>()?;
    let liminf_est = ratios[horizon / 2..]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let window = &ratios[horizon.saturating_sub(RATIO_WINDOW)..];
    let limit_one = window.iter().all(|r| (r - 1.0).abs() <= 1e-3);
    let gamma_est = if liminf_est > 0.0 {
        1.0 / liminf_est
    } else {
        f64::INFINITY
    };
    Ok(RatioProfile {
        ratios,
        liminf_est,
        limit_one,
        gamma_est,
        z_is_analytic: z.is_some(),
    })
}

/// Pairs `(n, i)` over the tail `[horizon/2, horizon)` with `‖z − yᵢ‖ > (Γ+2)‖xₙ − yᵢ‖`.
pub fn gamma_bound_check(
    seq: &dyn Sequence,
    z: &Vector,
    samples: &[Vector],
    gamma: f64,
    horizon: usize,
) -> Vec<(usize, usize)> {
    (horizon / 2..horizon)
        .flat_map(|n| {
            let x = seq.term(n);
            samples
                .iter()
                .enumerate()
                .filter(move |(_, y)| z.dist(y) > (gamma + 2.0) * x.dist(y) + 1e-12)
                .map(move |(i, _)| (n, i))
                .collect::<Vec<_>>()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeIdentityReport {
    pub clusters: DirectionClusterSet,
    pub cone: FinCone,
    pub z: Vector,
    pub start: usize,
    pub cells: usize,
    pub band_cells: usize,
    pub closure_mismatches: usize,
    pub interior_mismatches: usize,
    pub closure_match: bool,
    pub interior_match: bool,
}

/// Distance from the origin to the convex hull of `units`, and the nearest hull point.
/// `𝒦 = (cone 𝒟)^⊖` is solid exactly when this is positive; directions are only resolved
/// up to the clustering radius, so callers compare it against that radius.
pub fn hull_gap(units: &[Vector], dim: usize) -> (f64, Vector) {
    if units.is_empty() {
        return (0.0, Vector::zero());
    }
    const WEIGHT: f64 = 1e4;
    let a = DMatrix::from_fn(dim + 1, units.len(), |i, j| {
        if i < dim {
            units[j].get(i)
        } else {
            WEIGHT
        }
    });
    let mut b = DVector::zeros(dim + 1);
    b[dim] = WEIGHT;
    let lambda = nnls(&a, &b);
    let total: f64 = lambda.iter().sum();
    if total <= 0.0 {
        return (0.0, Vector::zero());
    }
    let nearest = units
        .iter()
        .zip(lambda.iter())
        .fold(Vector::zero(), |acc, (u, l)| acc.axpy(l / total, u));
    (nearest.norm(), nearest)
}

/// Compares the engine's `⋂_{N ≤ n < horizon} Cₙ` with `𝒦 + z` on the config grid, skipping a
/// boundary band of two cell widths.
pub fn cone_identity_2d(
    seq: &dyn Sequence,
    z: &Vector,
    horizon: usize,
    cfg: &LabConfig,
) -> Result<ConeIdentityReport> {
    let clusters = cluster_directions(&tail_diffs(seq, horizon), cfg.cluster_eps, cfg.min_count);
    let mut failed = Vec::new();
    let bounded = (0..=horizon).all(|n| seq.term(n).norm() < 1e6);
    if !bounded {
        failed.push("bounded".to_string());
    }
    let distinct = (0..horizon).all(|n| !seq.step(n).is_zero());
    if !distinct || clusters.is_empty() {
        failed.push("0∉𝒟".to_string());
    }
    let cone = cone_from_clusters(&clusters)
        .and_then(|k| FinCone::halfspaces(2, k.normals().unwrap_or(&[]).to_vec()));
    let solid = match &cone {
        Ok(_) => {
            let (gap, nearest) = hull_gap(&clusters.representatives, 2);
            let generated = FinCone::generated(2, clusters.representatives.clone())?;
            gap > cfg.cluster_eps && is_solid_dual(&generated, &nearest)? > 0.0
        }
        Err(_) => false,
    };
    if !solid {
        failed.push("solid".to_string());
    }
    if !failed.is_empty() {
        return Err(LabError::PreconditionFailed { failed });
    }
    let cone = cone?;
    let start = horizon / 2;
    let engine = maximal_set_2d(seq, start, horizon)?;
    let spacing = 2.0 * cfg.extent / (cfg.grid - 1) as f64;
    let band = 2.0 * spacing;
    let normals: Vec<Vector> = cone
        .normals()
        .unwrap_or(&[])
        .iter()
        .filter_map(|d| d.unit().ok())
        .collect();
    let results: Vec<Option<(bool, bool)>> = grid_points(cfg.extent, cfg.grid)
        .into_par_iter()
        .map(|(a, b)| {
            let p = Vector::plane(a, b);
            let u = p.sub(z);
            let depth = normals
                .iter()
                .map(|d| d.inner(&u))
                .fold(f64::NEG_INFINITY, f64::max);
            if depth.abs() <= band {
                return None;
            }
            Some((depth < 0.0, engine.contains(&p)))
        })
        .collect();
    let kept: Vec<(bool, bool)> = results.iter().flatten().copied().collect();
    let closure_mismatches = kept.iter().filter(|(inside, e)| inside != e).count();
    let interior_mismatches = kept.iter().filter(|(inside, e)| *inside && !e).count();
    Ok(ConeIdentityReport {
        clusters,
        cone,
        z: z.clone(),
        start,
        cells: results.len(),
        band_cells: results.len() - kept.len(),
        closure_mismatches,
        interior_mismatches,
        closure_match: closure_mismatches == 0,
        interior_match: interior_mismatches == 0,
    })
}

/// The engine's window intersection `⋂_{start ≤ n < horizon} Cₙ` as a region.
pub fn window_region(seq: &dyn Sequence, start: usize, horizon: usize) -> Result<Region> {
    maximal_set_2d(seq, start, horizon)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpialFlat {
    #[serde(rename = "basisL")]
    pub basis_l: Vec<Vector>,
    pub z: Vector,
    pub flat: AffineFlat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpialProbe {
    pub y: Vector,
    pub on_flat: bool,
    pub verdict: OpialVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpialFlatReport {
    pub flat: OpialFlat,
    pub clusters: DirectionClusterSet,
    /// Limits of `‖xₙ‖²` along each cluster.
    pub norm_limits: Vec<f64>,
    pub truncation_width: usize,
    /// `‖z − (P_O(0) + P_{aff 𝒲}(0))‖`.
    pub z_error: f64,
    pub probes: Vec<OpialProbe>,
    pub validated: bool,
    pub note: &'static str,
}

const TRUNCATION_NOTE: &str =
    "cluster points are strong cluster points of terms truncated to the coordinates used by the first quarter of the horizon";

/// Least-squares solve of `A c = b` through the normal equations.
fn solve_small(a: &[Vec<f64>], b: &[f64], cols: usize) -> Vec<f64> {
    if cols == 0 {
        return Vec::new();
    }
    let m = DMatrix::from_fn(a.len(), cols, |i, j| a[i][j]);
    let rhs = DVector::from_column_slice(b);
    m.svd(true, true)
        .solve(&rhs, 1e-12)
        .map(|c| c.iter().copied().collect())
        .unwrap_or_else(|_| vec![0.0; cols])
}

/// The maximal Opial set `O = 𝓛^⊥ + z` from cluster points of the tail `[horizon/2, horizon)`.
pub fn maximal_opial_flat(
    seq: &dyn Sequence,
    horizon: usize,
    cluster_eps: f64,
    cfg: &LabConfig,
) -> Result<OpialFlatReport> {
    let width = (0..(horizon / 4).max(1))
        .map(|n| seq.term(n).width())
        .max()
        .unwrap_or(0)
        .max(1);
    let tail: Vec<Vector> = (horizon / 2..horizon).map(|n| seq.term(n)).collect();
    let truncated: Vec<Vector> = tail.iter().map(|x| x.truncate(width)).collect();
    let clusters = cluster_points(&truncated, cluster_eps, cfg.min_count);
    if clusters.is_empty() {
        return Err(LabError::NoClusters);
    }
    let norm_limits: Vec<f64> = clusters
        .representatives
        .iter()
        .map(|w| {
            let members: Vec<f64> = truncated
                .iter()
                .zip(&tail)
                .filter(|(t, _)| t.dist(w) <= cluster_eps)
                .map(|(_, x)| x.norm_sq())
                .collect();
            members.iter().sum::<f64>() / members.len().max(1) as f64
        })
        .collect();
    let w = &clusters.representatives;
    let diffs: Vec<Vector> = w[1..].iter().map(|wi| wi.sub(&w[0])).collect();
    let basis_l = gram_schmidt(&diffs, 1e-9);

    // Point of O closest to the origin: p ∈ 𝓛 with 2⟨wᵢ − w₀, p⟩ = sᵢ − s₀.
    let rows: Vec<Vec<f64>> = diffs
        .iter()
        .map(|d| basis_l.iter().map(|b| 2.0 * d.inner(b)).collect())
        .collect();
    let rhs: Vec<f64> = norm_limits[1..]
        .iter()
        .map(|s| s - norm_limits[0])
        .collect();
    let coef = solve_small(&rows, &rhs, basis_l.len());
    let p_o = basis_l
        .iter()
        .zip(&coef)
        .fold(Vector::zero(), |acc, (b, c)| acc.axpy(*c, b));
    // Point of aff 𝒲 closest to the origin.
    let p_aff = w[0].sub(
        &basis_l
            .iter()
            .fold(Vector::zero(), |acc, b| acc.axpy(b.inner(&w[0]), b)),
    );
    let z = p_o.add(&p_aff);

    // Independent reconstruction: the point w₀ + l, l ∈ 𝓛, satisfying the equations.
    let shifted: Vec<f64> = rhs
        .iter()
        .zip(&diffs)
        .map(|(r, d)| r - 2.0 * d.inner(&w[0]))
        .collect();
    let coef2 = solve_small(&rows, &shifted, basis_l.len());
    let direct = basis_l
        .iter()
        .zip(&coef2)
        .fold(w[0].clone(), |acc, (b, c)| acc.axpy(*c, b));
    let z_error = direct.dist(&z);

    let flat = AffineFlat {
        anchor: z.clone(),
        basis: basis_l.clone(),
        complement: true,
    };
    let mut probe_points: Vec<(Vector, bool)> = vec![(z.clone(), true)];
    for j in 0..width.min(8) {
        let e = flat.project_direction(&Vector::basis(j));
        if e.norm() > 1e-9 {
            probe_points.push((z.add(&e.scale(0.5)), true));
        }
    }
    for b in &basis_l {
        probe_points.push((z.add(&b.scale(0.5)), false));
        probe_points.push((z.sub(&b.scale(0.5)), false));
    }
    let probes: Vec<OpialProbe> = probe_points
        .into_par_iter()
        .map(|(y, on_flat)| OpialProbe {
            verdict: opial_at(seq, &y, horizon, cfg),
            y,
            on_flat,
        })
        .collect();
    let validated = probes.iter().all(|p| {
        if p.on_flat {
            p.verdict.converges()
        } else {
            p.verdict.oscillates()
        }
    });
    Ok(OpialFlatReport {
        flat: OpialFlat { basis_l, z, flat },
        clusters,
        norm_limits,
        truncation_width: width,
        z_error,
        probes,
        validated,
        note: TRUNCATION_NOTE,
    })
}
