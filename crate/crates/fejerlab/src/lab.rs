//! Tolerance functions, monotonicity classifiers and the inequality checks built on them.

use crate::config::LabConfig;
use crate::engine::{
    liminf_membership_with, LiminfVerdict, ScanOptions, Sequence, TailCertificate,
};
use crate::error::{LabError, Result};
use crate::hilbert::Vector;
use crate::sets::{AffineFlat, ClosedConvexSet};
use crate::zoo::{QuasiComparators, SeriesVerdict, SupRule};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// `‖x_{n+1} − y‖² − ‖x_n − y‖²`, evaluated as `⟨s, 2(x_n − y) + s⟩` with `s` the step.
pub fn sq_dist_increment(seq: &dyn Sequence, n: usize, y: &Vector) -> f64 {
    let s = seq.step(n);
    if s.is_zero() {
        return 0.0;
    }
    let w = seq.term(n).sub(y);
    s.inner(&w.scale(2.0).add(&s))
}

/// `ε⁽²⁾ₙ(y) = max{0, ‖x_{n+1} − y‖² − ‖x_n − y‖²}`.
pub fn eps2(seq: &dyn Sequence, n: usize, y: &Vector) -> f64 {
    sq_dist_increment(seq, n, y).max(0.0)
}

/// `ε⁽¹⁾ₙ(y) = max{0, ‖x_{n+1} − y‖ − ‖x_n − y‖}`.
pub fn eps1(seq: &dyn Sequence, n: usize, y: &Vector) -> f64 {
    let d = sq_dist_increment(seq, n, y);
    if d <= 0.0 {
        return 0.0;
    }
    let x = seq.term(n);
    let near = x.dist(y);
    let far = x.add(&seq.step(n)).dist(y);
    d / (near + far)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceSample {
    pub n: usize,
    pub y: Vector,
    pub eps1: f64,
    pub eps2: f64,
}

pub fn tolerance_sample(seq: &dyn Sequence, n: usize, y: &Vector) -> ToleranceSample {
    ToleranceSample {
        n,
        y: y.clone(),
        eps1: eps1(seq, n, y),
        eps2: eps2(seq, n, y),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum OpialVerdict {
    Converges { limit: f64, residual: f64 },
    Oscillates { lo: f64, hi: f64 },
    Inconclusive,
}

impl OpialVerdict {
    pub fn converges(&self) -> bool {
        matches!(self, OpialVerdict::Converges { .. })
    }

    pub fn oscillates(&self) -> bool {
        matches!(self, OpialVerdict::Oscillates { .. })
    }
}

/// Tail-window test for the existence of `lim values[n]`.
pub fn detect_limit(values: &[f64], window: usize, tol: f64, separation: f64) -> OpialVerdict {
    if values.len() < window.max(4) {
        return OpialVerdict::Inconclusive;
    }
    let tail = &values[values.len() - window..];
    let spread = |it: &mut dyn Iterator<Item = f64>| {
        it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
    };
    let (lo, hi) = spread(&mut tail.iter().copied());
    if hi - lo <= tol {
        return OpialVerdict::Converges {
            limit: *tail.last().unwrap_or(&lo),
            residual: hi - lo,
        };
    }
    let (elo, ehi) = spread(&mut tail.iter().copied().step_by(2));
    let (olo, ohi) = spread(&mut tail.iter().copied().skip(1).step_by(2));
    let cauchy = ehi - elo <= tol && ohi - olo <= tol;
    let apart = (elo - ohi).max(olo - ehi) >= separation;
    if cauchy && apart {
        OpialVerdict::Oscillates { lo, hi }
    } else {
        OpialVerdict::Inconclusive
    }
}

/// Opial test at `y` on `‖x_n − y‖`, `n < horizon`.
pub fn opial_at(seq: &dyn Sequence, y: &Vector, horizon: usize, cfg: &LabConfig) -> OpialVerdict {
    let d: Vec<f64> = (0..horizon).map(|n| seq.term(n).dist(y)).collect();
    detect_limit(&d, cfg.opial_window, cfg.opial_tol, cfg.opial_separation)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesReport {
    pub partial_sums: Vec<f64>,
    pub verdict: SeriesVerdict,
    pub rationale: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuasiReport {
    pub type1: SeriesReport,
    pub type2: SeriesReport,
    pub type3: SeriesReport,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointReport {
    pub y: Vector,
    pub fejer: bool,
    pub fejer_star: LiminfVerdict,
    pub opial: OpialVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub horizon: usize,
    pub points: Vec<PointReport>,
    pub quasi: QuasiReport,
}

/// Analytic side information for [`classify`].
#[derive(Clone, Default)]
pub struct ClassifyHints<'a> {
    pub certificate: Option<&'a dyn TailCertificate>,
    pub sup_rule: Option<SupRule>,
    pub comparators: QuasiComparators,
}

fn partial_sums(terms: impl Iterator<Item = f64>) -> Vec<f64> {
    terms
        .scan(0.0, |acc, t| {
            *acc += t;
            Some(*acc)
        })
        .collect()
}

fn series_verdict(
    sums: Vec<f64>,
    comparator: Option<&crate::zoo::Comparator>,
    needs_sup_rule: bool,
    has_sup_rule: bool,
    bound: f64,
) -> SeriesReport {
    let last = sums.last().copied().unwrap_or(0.0);
    let (verdict, rationale) = match comparator {
        None => (
            SeriesVerdict::Inconclusive,
            "no analytic comparator; partial sums alone decide nothing".to_string(),
        ),
        Some(c) if c.verdict == SeriesVerdict::Divergent && needs_sup_rule && !has_sup_rule => (
            SeriesVerdict::Inconclusive,
            "divergence needs an analytic sup rule; the sample maximum is only a lower bound"
                .to_string(),
        ),
        Some(c) if c.verdict == SeriesVerdict::Divergent => {
            let seen = if last > bound {
                "partial sums exceed the bound; "
            } else {
                ""
            };
            (
                SeriesVerdict::Divergent,
                format!("{seen}comparator: {}", c.statement),
            )
        }
        Some(c) => (c.verdict, format!("comparator: {}", c.statement)),
    };
    SeriesReport {
        partial_sums: sums,
        verdict,
        rationale,
    }
}

/// Fejér, Fejér*, Opial and quasi-Fejér classification against sample points of the target set.
pub fn classify(
    seq: &dyn Sequence,
    samples: &[Vector],
    horizon: usize,
    hints: &ClassifyHints<'_>,
    cfg: &LabConfig,
) -> Result<ClassificationReport> {
    if samples.is_empty() {
        return Err(LabError::EmptySample);
    }
    let opts = ScanOptions {
        tol: cfg.zero_tol,
        clean_fraction: cfg.clean_fraction,
    };
    let points: Vec<PointReport> = samples
        .par_iter()
        .map(|y| {
            let fejer = (0..horizon).all(|n| seq.halfspace(n).contains_tol(y, cfg.zero_tol));
            PointReport {
                y: y.clone(),
                fejer,
                fejer_star: liminf_membership_with(seq, y, horizon, hints.certificate, opts),
                opial: opial_at(seq, y, horizon, cfg),
            }
        })
        .collect();

    let sup_points = |n: usize| -> Vec<Vector> {
        let mut pts = samples.to_vec();
        if let Some(rule) = &hints.sup_rule {
            pts.extend(rule(n));
        }
        pts
    };
    let sup1 = (0..horizon).map(|n| {
        sup_points(n)
            .iter()
            .map(|y| eps1(seq, n, y))
            .fold(0.0, f64::max)
    });
    let sup2 = (0..horizon).map(|n| {
        sup_points(n)
            .iter()
            .map(|y| eps2(seq, n, y))
            .fold(0.0, f64::max)
    });
    let has_rule = hints.sup_rule.is_some();
    let bound = cfg.divergence_bound;
    let type1 = series_verdict(
        partial_sums(sup1),
        hints.comparators.type1.as_ref(),
        true,
        has_rule,
        bound,
    );
    let type2 = series_verdict(
        partial_sums(sup2),
        hints.comparators.type2.as_ref(),
        true,
        has_rule,
        bound,
    );
    let worst = samples
        .iter()
        .map(|y| partial_sums((0..horizon).map(|n| eps2(seq, n, y))))
        .max_by(|a, b| a.last().unwrap_or(&0.0).total_cmp(b.last().unwrap_or(&0.0)))
        .unwrap_or_default();
    let type3 = series_verdict(
        worst,
        hints.comparators.type3.as_ref(),
        false,
        has_rule,
        bound,
    );
    Ok(ClassificationReport {
        horizon,
        points,
        quasi: QuasiReport {
            type1,
            type2,
            type3,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RaikViolation {
    pub n: usize,
    pub m: usize,
    /// 1 for the energy inequality, 2 for the triangle inequality on shadows.
    pub link: u8,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RaikCheck {
    pub y: Vector,
    pub rho: f64,
    #[serde(rename = "N")]
    pub n_start: usize,
    pub horizon: usize,
    pub violation_count: usize,
    /// The first violations found, capped.
    pub violations: Vec<RaikViolation>,
}

impl RaikCheck {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

const RAIK_SLACK: f64 = 1e-9;
const MAX_RECORDED: usize = 64;

/// Per-step data for the Raik chain at `y`.
struct RaikData {
    /// `‖x_k − y‖² − ‖x_{k+1} − y‖²`.
    drop: Vec<f64>,
    /// `‖P_A(x_{k+1}) − P_A(x_k)‖`.
    shadow_len: Vec<f64>,
    shadows: Vec<Vector>,
}

fn raik_data(seq: &dyn Sequence, y: &Vector, horizon: usize, flat: &AffineFlat) -> RaikData {
    let drop = (0..horizon)
        .map(|k| -sq_dist_increment(seq, k, y))
        .collect();
    let shadow_len = (0..horizon)
        .map(|k| flat.project_direction(&seq.step(k)).norm())
        .collect();
    let shadows = (0..=horizon).map(|k| flat.project(&seq.term(k))).collect();
    RaikData {
        drop,
        shadow_len,
        shadows,
    }
}

fn raik_scan(data: &RaikData, y: &Vector, n_start: usize, rho: f64, horizon: usize) -> RaikCheck {
    let mut violations = Vec::new();
    let mut count = 0usize;
    for n in n_start..horizon {
        let (mut lhs, mut path) = (0.0, 0.0);
        for m in 0..horizon - n {
            let k = n + m;
            lhs += data.drop[k];
            path += data.shadow_len[k];
            let mid = 2.0 * rho * path;
            let chord = data.shadows[k + 1].dist(&data.shadows[n]);
            let scale = 1.0 + lhs.abs() + mid;
            for (link, gap) in [(1u8, lhs - mid), (2u8, path - chord)] {
                if gap < -RAIK_SLACK * scale {
                    count += 1;
                    if violations.len() < MAX_RECORDED {
                        violations.push(RaikViolation { n, m, link, gap });
                    }
                }
            }
        }
    }
    RaikCheck {
        y: y.clone(),
        rho,
        n_start,
        horizon,
        violation_count: count,
        violations,
    }
}

/// Checks both links of the Raik chain for `n ∈ [N, horizon)`, `m ∈ [0, horizon − n)`.
pub fn raik_verify(
    seq: &dyn Sequence,
    y: &Vector,
    n_start: usize,
    rho: f64,
    horizon: usize,
    flat: &AffineFlat,
) -> RaikCheck {
    raik_scan(&raik_data(seq, y, horizon, flat), y, n_start, rho, horizon)
}

/// Searches `N ∈ {0..=64}`, then `ρ ∈ {2^0, …, 2^{−20}}`; returns the first pass.
pub fn raik_search(
    seq: &dyn Sequence,
    y: &Vector,
    horizon: usize,
    flat: &AffineFlat,
) -> Option<RaikCheck> {
    let data = raik_data(seq, y, horizon, flat);
    (0..=64usize.min(horizon.saturating_sub(1))).find_map(|n_start| {
        (0..=20).find_map(|j| {
            let check = raik_scan(&data, y, n_start, (-(j as f64)).exp2(), horizon);
            check.passed().then_some(check)
        })
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShadowProfile {
    pub shadows: Vec<Vector>,
    pub step_norms: Vec<f64>,
    pub partial_lengths: Vec<f64>,
}

pub fn shadow_profile(
    seq: &dyn Sequence,
    set: &ClosedConvexSet,
    horizon: usize,
) -> Result<ShadowProfile> {
    let shadows = (0..horizon)
        .map(|n| set.project(&seq.term(n)))
        .collect::<Result<Vec<_>>>()?;
    let step_norms: Vec<f64> = shadows.windows(2).map(|w| w[1].dist(&w[0])).collect();
    let partial_lengths = partial_sums(step_norms.iter().copied());
    Ok(ShadowProfile {
        shadows,
        step_norms,
        partial_lengths,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceProfile {
    pub distances: Vec<f64>,
    /// Smallest `N ≤ horizon/2` after which the distances never increase.
    pub eventually_decreasing_from: Option<usize>,
}

pub fn distance_profile(
    seq: &dyn Sequence,
    set: &ClosedConvexSet,
    horizon: usize,
) -> Result<DistanceProfile> {
    let distances = (0..horizon)
        .map(|n| set.distance(&seq.term(n)))
        .collect::<Result<Vec<_>>>()?;
    let last_rise = distances.windows(2).rposition(|w| w[1] > w[0]);
    let from = last_rise.map_or(0, |i| i + 1);
    let eventually_decreasing_from = (from <= horizon / 2).then_some(from);
    Ok(DistanceProfile {
        distances,
        eventually_decreasing_from,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EqualPattern {
    EventuallyEmpty,
    FullTail,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DichotomyReport {
    pub cutoff: usize,
    pub z_in_affine_hull: bool,
    pub equal_z_pattern: EqualPattern,
    pub equal_z: Vec<usize>,
    /// Indices `n ≥ cutoff` with `xₙ ∈ z + 𝒦`.
    pub in_cone_tail: Vec<usize>,
    /// Indices `n ≥ cutoff` with `xₙ ∈ M̄`.
    pub in_closure_tail: Vec<usize>,
    /// Indices `n < horizon` with `xₙ ∈ M̄`.
    pub in_closure: Vec<usize>,
}

/// Dichotomy and exclusion scan; `cone_at_z` is `z + conē(M̄ − z)` and membership uses `tol`.
#[allow(clippy::too_many_arguments)]
pub fn dichotomy_exclusion(
    seq: &dyn Sequence,
    z: &Vector,
    hull: &AffineFlat,
    cone_at_z: &ClosedConvexSet,
    closure: &ClosedConvexSet,
    horizon: usize,
    tol: f64,
) -> Result<DichotomyReport> {
    let cutoff = horizon / 2;
    let mut equal_z = Vec::new();
    let mut in_cone_tail = Vec::new();
    let mut in_closure_tail = Vec::new();
    let mut in_closure = Vec::new();
    for n in 0..horizon {
        let x = seq.term(n);
        if x.dist(z) <= tol {
            equal_z.push(n);
        }
        if closure.contains(&x, tol)? {
            in_closure.push(n);
            if n >= cutoff {
                in_closure_tail.push(n);
            }
        }
        if n >= cutoff && cone_at_z.contains(&x, tol)? {
            in_cone_tail.push(n);
        }
    }
    let tail_hits = equal_z.iter().filter(|&&n| n >= cutoff).count();
    let equal_z_pattern = if tail_hits == 0 {
        EqualPattern::EventuallyEmpty
    } else if tail_hits == horizon - cutoff {
        EqualPattern::FullTail
    } else {
        EqualPattern::Mixed
    };
    Ok(DichotomyReport {
        cutoff,
        z_in_affine_hull: hull.distance(z) <= 1e-9,
        equal_z_pattern,
        equal_z,
        in_cone_tail,
        in_closure_tail,
        in_closure,
    })
}

/// `xₙ − z` for `n < horizon`: direct differences for a known `z`, otherwise
/// `−Σ_{m=n}^{H−1} step_m` against the estimate `z ≈ x_H`.
pub fn offsets(
    seq: &dyn Sequence,
    z: Option<&Vector>,
    horizon: usize,
    estimate_horizon: usize,
) -> Vec<Vector> {
    match z {
        Some(z) => (0..horizon).map(|n| seq.term(n).sub(z)).collect(),
        None => {
            let h = estimate_horizon.max(horizon);
            let mut acc = Vector::zero();
            let mut out = vec![Vector::zero(); h];
            for n in (0..h).rev() {
                acc = acc.sub(&seq.step(n));
                out[n] = acc.clone();
            }
            out.truncate(horizon);
            out
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearConvReport {
    pub r: f64,
    pub stride: usize,
    pub r_ok: bool,
    /// Block starts `n` with `d(x_{n+stride}) > r·d(x_n)`.
    pub premise_violations: Vec<usize>,
    pub gamma_est: f64,
    pub z_est: Vector,
    pub z_is_analytic: bool,
}

/// Contraction premise `d(x_{n+s}) ≤ r d(x_n)` on blocks of `stride`, and the fit of
/// the smallest `Γ` with `‖xₙ − z‖ ≤ Γ r^{n/s} d(x₀)` over the tail `[H/2, H)`.
pub fn linear_conv_check(
    seq: &dyn Sequence,
    closure: &ClosedConvexSet,
    r: f64,
    horizon: usize,
    z: Option<&Vector>,
    stride: usize,
) -> Result<LinearConvReport> {
    if !(0.0..1.0).contains(&r) || stride == 0 {
        return Err(LabError::InvalidArgument(
            "need 0 ≤ r < 1 and a positive stride".into(),
        ));
    }
    let d = (0..=horizon)
        .map(|n| closure.distance(&seq.term(n)))
        .collect::<Result<Vec<_>>>()?;
    let premise_violations: Vec<usize> = (0..horizon)
        .step_by(stride)
        .filter(|&n| n + stride <= horizon && d[n + stride] > r * d[n] + 1e-15)
        .collect();
    let off = offsets(seq, z, horizon, 2 * horizon);
    let gamma_est = (horizon / 2..horizon)
        .map(|n| off[n].norm() / (r.powf(n as f64 / stride as f64) * d[0]))
        .fold(0.0, f64::max);
    let z_est = match z {
        Some(z) => z.clone(),
        None => seq.term(2 * horizon),
    };
    Ok(LinearConvReport {
        r,
        stride,
        r_ok: premise_violations.is_empty(),
        premise_violations,
        gamma_est,
        z_est,
        z_is_analytic: z.is_some(),
    })
}

/// Smallest `N` such that every point stays in `C_n` for `n ∈ [N, horizon)`.
pub fn eventual_fejer_start(
    seq: &dyn Sequence,
    points: &[Vector],
    horizon: usize,
    tol: f64,
) -> usize {
    (0..horizon)
        .rev()
        .find(|&n| {
            let h = seq.halfspace(n);
            points.iter().any(|y| !h.contains_tol(y, tol))
        })
        .map_or(0, |n| n + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::TermList;

    fn halving() -> TermList {
        TermList(
            (0..80)
                .map(|n| Vector::plane((-(n as f64)).exp2(), 0.0))
                .collect(),
        )
    }

    #[test]
    fn eps_vanish_inside_step_halfspace() {
        let seq = halving();
        let y = Vector::plane(-1.0, 3.0);
        assert_eq!(eps1(&seq, 3, &y), 0.0);
        assert_eq!(eps2(&seq, 3, &y), 0.0);
        let far = Vector::plane(0.3, 0.0);
        assert!(eps2(&seq, 0, &far) == 0.0 && eps2(&seq, 3, &far) > 0.0);
        assert!(eps1(&seq, 3, &far) > 0.0);
    }

    #[test]
    fn limit_detector() {
        let flat = vec![1.0; 40];
        assert!(detect_limit(&flat, 32, 1e-8, 1e-3).converges());
        let alt: Vec<f64> = (0..40)
            .map(|n| if n % 2 == 0 { 1.0 } else { 3f64.sqrt() })
            .collect();
        assert_eq!(
            detect_limit(&alt, 32, 1e-8, 1e-3),
            OpialVerdict::Oscillates {
                lo: 1.0,
                hi: 3f64.sqrt()
            }
        );
        let drift: Vec<f64> = (0..40).map(|n| n as f64).collect();
        assert_eq!(
            detect_limit(&drift, 32, 1e-8, 1e-3),
            OpialVerdict::Inconclusive
        );
    }

    #[test]
    fn raik_holds_from_start_for_fejer_toy() {
        let seq = halving();
        let line = AffineFlat {
            anchor: Vector::zero(),
            basis: vec![Vector::basis(0)],
            complement: false,
        };
        let found = raik_search(&seq, &Vector::plane(-1.0, 0.0), 60, &line).unwrap();
        assert_eq!(found.n_start, 0);
        assert_eq!(found.rho, 1.0);
    }

    #[test]
    fn toy_linear_convergence() {
        let seq = halving();
        let origin = ClosedConvexSet::Singleton {
            point: Vector::zero(),
        };
        let rep = linear_conv_check(&seq, &origin, 0.5, 40, Some(&Vector::zero()), 1).unwrap();
        assert!(rep.r_ok);
        assert!((rep.gamma_est - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constant_tail_dichotomy() {
        let z = Vector::plane(0.0, 0.0);
        let mut terms = vec![Vector::plane(2.0, 1.0), Vector::plane(1.0, 1.0)];
        terms.extend(std::iter::repeat_n(z.clone(), 10));
        let seq = TermList(terms);
        let all = AffineFlat {
            anchor: Vector::zero(),
            basis: Vec::new(),
            complement: true,
        };
        let pt = ClosedConvexSet::Singleton { point: z.clone() };
        let rep = dichotomy_exclusion(&seq, &z, &all, &pt, &pt, 12, 0.0).unwrap();
        assert_eq!(rep.equal_z_pattern, EqualPattern::FullTail);
    }

    #[test]
    fn tail_offsets_match_differences() {
        let seq = halving();
        let off = offsets(&seq, None, 10, 70);
        for (n, o) in off.iter().enumerate() {
            assert!(o.approx_eq(&seq.term(n).sub(&seq.term(70)), 1e-15));
        }
    }
}
