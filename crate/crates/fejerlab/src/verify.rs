//! Registry of numerically checkable claims per example, and the report they produce.

use crate::asymptotics::{
    cluster_directions, cone_from_clusters, cone_identity_2d, direct_inclusion_check,
    gamma_bound_check, maximal_opial_flat, ratio_profile, tail_diffs,
};
use crate::config::LabConfig;
use crate::engine::{grid_points, liminf_membership, maximal_set_2d};
use crate::error::{LabError, Result};
use crate::hilbert::Vector;
use crate::lab::{
    classify, dichotomy_exclusion, distance_profile, eps1, eps2, linear_conv_check, raik_search,
    shadow_profile, sq_dist_increment, ClassifyHints, EqualPattern,
};
use crate::sets::{AffineFlat, ClosedConvexSet};
use crate::zoo::closed_form::{LogBumps, TiltedBasis};
use crate::zoo::recursive::ArcsAndReflections;
use crate::zoo::{authors_cone_angles, ExampleId, ExampleSpec, SeriesVerdict};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClaimStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimResult {
    pub claim_id: &'static str,
    pub anchor: &'static str,
    pub status: ClaimStatus,
    pub measured: Value,
    pub expected: Value,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub example: ExampleId,
    pub claims: Vec<ClaimResult>,
    pub wall_time: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.status != ClaimStatus::Fail)
    }
}

/// Raw outcome of one check.
pub struct Measured {
    pub pass: bool,
    pub measured: Value,
    pub expected: Value,
    pub tolerance: f64,
}

fn measured(pass: bool, measured: Value, expected: Value, tolerance: f64) -> Result<Measured> {
    Ok(Measured {
        pass,
        measured,
        expected,
        tolerance,
    })
}

type Check = fn(&ExampleSpec, &LabConfig) -> Result<Measured>;

/// A registered claim: id, a short description of where the statement comes from, and its check.
#[derive(Clone, Copy)]
pub struct Claim {
    pub id: &'static str,
    pub anchor: &'static str,
    pub check: Check,
}

const fn claim(id: &'static str, anchor: &'static str, check: Check) -> Claim {
    Claim { id, anchor, check }
}

pub fn claims_for(id: ExampleId) -> Vec<Claim> {
    match id {
        ExampleId::AngularClosure => vec![
            claim(
                "angular.maximal_set_grid",
                "maximal set K([0,π)) of the closure example",
                angular_grid,
            ),
            claim(
                "angular.cone_identity",
                "𝒦 = {y ≥ 0} and the cone identity for the closure example",
                angular_identity,
            ),
            claim(
                "angular.direct_inclusion",
                "direct inclusion (M̄ − z)^⊖ ⊇ cluster directions",
                angular_inclusion,
            ),
        ],
        ExampleId::AffineCounter => vec![
            claim(
                "affine.shadows_increase",
                "P_M(xₙ) strictly increasing in M",
                affine_shadows,
            ),
            claim("affine.distance_rate", "d_M(xₙ) ≤ 2^{−n/2}", affine_rate),
            claim(
                "affine.raik",
                "Raik inequality chain at y = (0,0)",
                affine_raik,
            ),
            claim(
                "affine.dichotomy_exclusion",
                "xₙ ≠ z and xₙ ∉ M̄ for all n",
                affine_dichotomy,
            ),
            claim(
                "affine.linear_rate",
                "d_M(xₙ₊₁) ≤ 2^{−1/2} d_M(xₙ)",
                affine_linear,
            ),
            claim(
                "affine.gamma_bound",
                "‖z − y‖ ≤ (Γ+2)‖xₙ − y‖ on M̄ samples",
                affine_gamma,
            ),
            claim(
                "affine.finite_shadow_length",
                "finite-length shadow trajectory",
                affine_shadow_length,
            ),
        ],
        ExampleId::IncreasingDistance => vec![claim(
            "increasing.distance_increases",
            "d_M̄(xₙ) = ‖xₙ‖ strictly increasing",
            increasing_distance,
        )],
        ExampleId::L2ShadowFail => vec![
            claim("shadow.shadows_y", "listed prefix of P_Y(xₙ)", shadow_y),
            claim("shadow.distances_y", "listed prefix of d_Y(xₙ)", distance_y),
            claim(
                "shadow.shadows_c",
                "listed prefix of P_C(xₙ), C = B[0,1]∩Y",
                shadow_c,
            ),
            claim("shadow.distances_c", "listed prefix of d_C(xₙ)", distance_c),
            claim(
                "shadow.opial_flat",
                "Y = {e₀}^⊥ is the maximal Opial set",
                shadow_opial,
            ),
            claim(
                "shadow.raik_negative",
                "no Raik pair when ri(M) = ∅",
                shadow_raik,
            ),
        ],
        ExampleId::L2IntNonempty => vec![
            claim(
                "interior.norm_identity",
                "‖xₙ‖ = √(1+γ²) d_M̄(xₙ) for n ≥ 1",
                interior_identity,
            ),
            claim(
                "interior.witness_rise",
                "not eventually Fejér w.r.t. B[−2e₀, 1]",
                interior_witness,
            ),
            claim("interior.ratio", "Γ = √(1+γ²) depends on γ", interior_ratio),
        ],
        ExampleId::L2NoIneq => vec![
            claim("noineq.in_target", "xₙ ∈ M for all n", noineq_in_target),
            claim(
                "noineq.ratio_zero",
                "ratio d_K(xₙ − z)/‖xₙ − z‖ vanishes when ri(M) = ∅",
                noineq_ratio,
            ),
        ],
        ExampleId::SegmentLimit => vec![
            claim(
                "segment.maximal_set_grid",
                "maximal set [−1,1]×{0}, not a cone",
                segment_grid,
            ),
            claim(
                "segment.ratio_limit",
                "lim d_𝒦(xₙ − z)/‖xₙ − z‖ = 1",
                segment_ratio,
            ),
            claim(
                "segment.identity_not_solid",
                "𝒦 = ℝ×{0} has empty interior",
                segment_identity,
            ),
            claim("segment.repeat", "x_{3n+1} = x_{3n+3}", segment_repeat),
            claim(
                "segment.axis_points",
                "1 − √2 ≤ b_{2k} < b_{2k+2} < b_{2k+3} < b_{2k+1} < 0",
                segment_axis,
            ),
            claim(
                "segment.block_rate",
                "d_M(x_{3n+3}) ≤ 2^{−1/2} d_M(x_{3n})",
                segment_linear,
            ),
        ],
        ExampleId::AuthorsExample => vec![
            claim("authors.limit", "xₙ → (0, 2/√3)", authors_limit_claim),
            claim(
                "authors.verdicts",
                "the limit is excluded from the maximal set",
                authors_verdicts,
            ),
            claim("authors.cone", "𝒦 = {x ≥ 0, y ≤ −(2/√3)x}", authors_cone),
            claim(
                "authors.cone_identity",
                "int of the maximal set = int(𝒦) + z",
                authors_identity,
            ),
            claim(
                "authors.exclusion",
                "xₙ ∉ z + 𝒦 for large n",
                authors_exclusion,
            ),
        ],
        ExampleId::Type1Counter => vec![
            claim(
                "type1.growth",
                "sup eps1 at block k ∼ 1/(k ln k)",
                type1_growth,
            ),
            claim(
                "type1.classify",
                "not quasi-Fejér of Type I",
                type1_classify,
            ),
        ],
        ExampleId::QuasiIndCounter => vec![
            claim(
                "quasi.max_eps2",
                "max of eps2 over B[0,1]∩M equals 2 for every n",
                quasi_max_all,
            ),
            claim(
                "quasi.max_eps2_from_3",
                "max of eps2 over B[0,1]∩M equals 2 for n ≥ 3",
                quasi_max_tail,
            ),
            claim(
                "quasi.classify",
                "neither Type I nor Type II",
                quasi_classify,
            ),
        ],
    }
}

fn run_claim(spec: &ExampleSpec, cfg: &LabConfig, c: &Claim) -> ClaimResult {
    let (status, measured, expected, tolerance) = match (c.check)(spec, cfg) {
        Ok(m) => (
            if m.pass {
                ClaimStatus::Pass
            } else {
                ClaimStatus::Fail
            },
            m.measured,
            m.expected,
            m.tolerance,
        ),
        Err(LabError::NumericalCheck(msg)) => {
            (ClaimStatus::Inconclusive, json!(msg), Value::Null, 0.0)
        }
        Err(e) => (ClaimStatus::Fail, json!(e.to_string()), Value::Null, 0.0),
    };
    ClaimResult {
        claim_id: c.id,
        anchor: c.anchor,
        status,
        measured,
        expected,
        tolerance,
    }
}

pub fn verify_example(id: ExampleId, cfg: &LabConfig) -> VerifyReport {
    let start = Instant::now();
    let spec = ExampleSpec::new(id);
    let claims = claims_for(id)
        .iter()
        .map(|c| run_claim(&spec, cfg, c))
        .collect();
    VerifyReport {
        example: id,
        claims,
        wall_time: start.elapsed().as_secs_f64(),
    }
}

/// Runs every example on a pool of `cfg.jobs` threads; reports come back in declaration order.
pub fn verify_all(cfg: &LabConfig) -> Result<Vec<VerifyReport>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| LabError::Config(e.to_string()))?;
    Ok(pool.install(|| {
        ExampleId::ALL
            .par_iter()
            .map(|&id| verify_example(id, cfg))
            .collect()
    }))
}

fn closure(spec: &ExampleSpec) -> Result<ClosedConvexSet> {
    spec.target_closure
        .clone()
        .ok_or_else(|| LabError::UnsupportedSet("no closure registered".into()))
}

fn planar_grid_agreement(spec: &ExampleSpec, cfg: &LabConfig, skip_axis: bool) -> (usize, usize) {
    let cert = Some(spec.analytic.certificate.as_ref());
    let mut agree = 0;
    let mut total = 0;
    for (a, b) in grid_points(cfg.extent, cfg.grid) {
        if skip_axis && b == 0.0 {
            continue;
        }
        let y = Vector::plane(a, b);
        let verdict = liminf_membership(spec.generator.as_ref(), &y, cfg.horizon, cert);
        total += 1;
        agree += usize::from(verdict.is_in_tail() == spec.analytic.maximal_set.contains(&y));
    }
    (agree, total)
}

fn angular_grid(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let (agree, total) = planar_grid_agreement(spec, cfg, false);
    measured(
        agree == total,
        json!({ "agree": agree, "cells": total }),
        json!({ "agree": total }),
        0.0,
    )
}

fn angular_identity(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let z = spec.analytic.limit.clone().unwrap_or_default();
    let rep = cone_identity_2d(spec.generator.as_ref(), &z, cfg.horizon, cfg)?;
    measured(
        rep.closure_match && rep.interior_match,
        json!({ "closure_mismatches": rep.closure_mismatches, "interior_mismatches": rep.interior_mismatches, "normals": rep.cone.normals() }),
        json!({ "closure_mismatches": 0, "interior_mismatches": 0 }),
        0.0,
    )
}

fn angular_inclusion(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let samples = spec.closure_samples(cfg.extent, cfg.grid);
    let z = spec.analytic.limit.clone();
    let rep = direct_inclusion_check(
        spec.generator.as_ref(),
        z.as_ref(),
        &samples,
        cfg.horizon,
        1e-6,
        cfg,
    )?;
    measured(
        rep.passed,
        json!({ "direction_pairing": rep.direction_pairing, "offset_pairing": rep.offset_pairing }),
        json!({ "max_pairing": 0.0 }),
        rep.tolerance,
    )
}

/// Strict increase certified by positive stable increments and non-decreasing stored values.
pub fn certified_increasing(values: &[f64], increments: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] >= w[0]) && increments.iter().all(|d| *d > 0.0)
}

fn affine_shadows(spec: &ExampleSpec, _: &LabConfig) -> Result<Measured> {
    let seq = spec.generator.as_ref();
    let firsts: Vec<f64> = (0..=60).map(|n| seq.term(n).get(0)).collect();
    let moves: Vec<f64> = (0..60).map(|n| seq.step(n).get(0)).collect();
    let ok = certified_increasing(&firsts, &moves);
    let min_move = moves.iter().copied().fold(f64::INFINITY, f64::min);
    measured(
        ok,
        json!({ "min_increment": min_move, "last": firsts[60] }),
        json!("strictly increasing"),
        0.0,
    )
}

fn affine_rate(spec: &ExampleSpec, _: &LabConfig) -> Result<Measured> {
    let worst = (0..=60)
        .map(|n| spec.term(n).get(1).abs() / (-(n as f64) / 2.0).exp2())
        .fold(0.0, f64::max);
    measured(
        worst <= 1.0,
        json!({ "max_ratio": worst }),
        json!({ "max_ratio": 1.0 }),
        0.0,
    )
}

fn affine_raik(spec: &ExampleSpec, _: &LabConfig) -> Result<Measured> {
    let found = raik_search(
        spec.generator.as_ref(),
        &Vector::zero(),
        200,
        &spec.analytic.affine_hull,
    );
    let ok = found
        .as_ref()
        .is_some_and(|r| r.n_start <= 32 && r.violation_count == 0);
    let m = found.map_or(
        Value::Null,
        |r| json!({ "N": r.n_start, "rho": r.rho, "violations": r.violation_count }),
    );
    measured(
        ok,
        m,
        json!({ "N_max": 32, "rho_min": (-20f64).exp2() }),
        1e-9,
    )
}

fn affine_dichotomy(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let h = 2 * cfg.horizon;
    let z = spec.term(4 * cfg.horizon);
    let hull = &spec.analytic.affine_hull;
    let cone = ClosedConvexSet::translate(
        spec.analytic
            .limit_cone
            .clone()
            .unwrap_or(ClosedConvexSet::AllSpace),
        z.clone(),
    );
    let rep = dichotomy_exclusion(
        spec.generator.as_ref(),
        &z,
        hull,
        &cone,
        &closure(spec)?,
        h,
        0.0,
    )?;
    measured(
        rep.equal_z_pattern == EqualPattern::EventuallyEmpty && rep.in_closure.is_empty(),
        json!({ "equal_z": rep.equal_z, "in_closure": rep.in_closure.len() }),
        json!({ "equal_z": [], "in_closure": 0 }),
        0.0,
    )
}

fn affine_linear(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let rep = linear_conv_check(
        spec.generator.as_ref(),
        &closure(spec)?,
        0.5f64.sqrt(),
        cfg.horizon,
        None,
        1,
    )?;
    measured(
        rep.r_ok,
        json!({ "violations": rep.premise_violations, "gamma_est": rep.gamma_est }),
        json!({ "violations": [] }),
        1e-15,
    )
}

fn affine_gamma(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let seq = spec.generator.as_ref();
    let cone = spec
        .analytic
        .limit_cone
        .clone()
        .unwrap_or(ClosedConvexSet::AllSpace);
    let ratio = ratio_profile(seq, &cone, None, cfg.horizon)?;
    let gamma = ratio.gamma_est + 0.1;
    let z = seq.term(2 * cfg.horizon);
    let samples: Vec<Vector> = (-8..=8)
        .map(|i| Vector::plane(i as f64 / 4.0, 0.0))
        .collect();
    let bad = gamma_bound_check(seq, &z, &samples, gamma, cfg.horizon);
    measured(
        bad.is_empty(),
        json!({ "gamma": gamma, "violations": bad.len() }),
        json!({ "violations": 0 }),
        1e-12,
    )
}

fn affine_shadow_length(spec: &ExampleSpec, _: &LabConfig) -> Result<Measured> {
    let prof = shadow_profile(spec.generator.as_ref(), &closure(spec)?, 200)?;
    let lengths = &prof.partial_lengths;
    let tail_change = lengths[lengths.len() - 1] - lengths[lengths.len() / 2];
    measured(
        tail_change <= 1e-6,
        json!({ "total": lengths.last(), "tail_change": tail_change }),
        json!({ "tail_change": 0.0 }),
        1e-6,
    )
}

fn increasing_distance(spec: &ExampleSpec, _: &LabConfig) -> Result<Measured> {
    let prof = distance_profile(spec.generator.as_ref(), &closure(spec)?, 41)?;
    let worst = prof
        .distances
        .iter()
        .enumerate()
        .map(|(n, d)| (d - spec.term(n).norm()).abs())
        .fold(0.0, f64::max);
    let incs: Vec<f64> = (0..40)
        .map(|n| sq_dist_increment(spec.generator.as_ref(), n, &Vector::zero()))
        .collect();
    let rising = certified_increasing(&prof.distances, &incs);
    measured(
        worst <= 1e-12 && rising,
        json!({ "max_gap": worst, "increasing": rising }),
        json!({ "max_gap": 0.0, "increasing": true }),
        1e-12,
    )
}

fn e0_perp() -> AffineFlat {
    AffineFlat {
        anchor: Vector::zero(),
        basis: vec![Vector::basis(0)],
        complement: true,
    }
}

fn unit_ball_of_y() -> ClosedConvexSet {
    ClosedConvexSet::BallInFlat {
        center: Vector::zero(),
        radius: 1.0,
        flat: e0_perp(),
    }
}

fn prefix_shadows(spec: &ExampleSpec, set: &ClosedConvexSet, want: &[Vector]) -> Result<Measured> {
    let prof = shadow_profile(spec.generator.as_ref(), set, want.len())?;
    let worst = prof
        .shadows
        .iter()
        .zip(want)
        .map(|(a, b)| a.dist(b))
        .fold(0.0, f64::max);
    let got: Vec<String> = prof.shadows.iter().map(|v| v.to_string()).collect();
    let exp: Vec<String> = want.iter().map(|v| v.to_string()).collect();
    measured(worst <= 1e-12, json!(got), json!(exp), 1e-12)
}

fn prefix_distances(spec: &ExampleSpec, set: &ClosedConvexSet, want: &[f64]) -> Result<Measured> {
    let prof = distance_profile(spec.generator.as_ref(), set, want.len())?;
    let worst = prof
        .distances
        .iter()
        .zip(want)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    measured(worst <= 1e-12, json!(prof.distances), json!(want), 1e-12)
}

fn shadow_y(spec: &ExampleSpec, _: &LabConfig) -> Result<Measured> {
    let e = Vector::basis;
    let want = [
        e(1),
        e(1),
        e(1).scale(2.0),
        e(1),
        e(1).add(&e(2)),
        e(1),
        e(1).add(&e(3)),
    ];
    prefix_shadows(spec, &ClosedConvexSet::Flat(e0_perp()), &want)
}

fn distance_y(spec: &ExampleSpec, _: &LabConfig) -> Result<Measured> {
    prefix_distances(
        spec,
        &ClosedConvexSet::Flat(e0_perp()),
        &[1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 0.0],
    )
}

fn shadow_c(spec: &ExampleSpec, _: &LabConfig) -> Result<Measured> {
    let e = Vector::basis;
    let want = [e(1), e(1), e(1), e(1), e(1).add(&e(2)).scale(0.5f64.sqrt())];
    prefix_shadows(spec, &unit_ball_of_y(), &want)
}

fn distance_c(spec: &ExampleSpec, _: &LabConfig) -> Result<Measured> {
    let r = 2f64.sqrt() - 1.0;
    prefix_distances(spec, &unit_ball_of_y(), &[1.0, 1.0, 1.0, 1.0, r, 1.0, r])
}

fn shadow_opial(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let rep = maximal_opial_flat(spec.generator.as_ref(), cfg.horizon, cfg.cluster_eps, cfg)?;
    let basis_ok =
        rep.flat.basis_l.len() == 1 && (rep.flat.basis_l[0].get(0).abs() - 1.0).abs() <= 1e-12;
    measured(
        basis_ok && rep.validated && rep.z_error <= 1e-10,
        json!({ "basisL": rep.flat.basis_l.iter().map(|v| v.to_string()).collect::<Vec<_>>(), "validated": rep.validated, "z_error": rep.z_error }),
        json!({ "basisL": ["e0"], "validated": true }),
        1e-10,
    )
}

fn shadow_raik(spec: &ExampleSpec, _: &LabConfig) -> Result<Measured> {
    let y = Vector::basis(1);
    let found = raik_search(spec.generator.as_ref(), &y, 40, &e0_perp());
    let m = found
        .as_ref()
        .map_or(Value::Null, |r| json!({ "N": r.n_start, "rho": r.rho }));
    measured(found.is_none(), m, Value::Null, 1e-9)
}

fn interior_identity(spec: &ExampleSpec, _: &LabConfig) -> Result<Measured> {
    let set = closure(spec)?;
    let mut worst = 0.0f64;
    for n in 1..=40 {
        let x = spec.term(n);
        worst = worst.max((x.norm() - 10f64.sqrt() * set.distance(&x)?).abs());
    }
    measured(
        worst <= 1e-12,
        json!({ "max_error": worst }),
        json!({ "max_error": 0.0 }),
        1e-12,
    )
}

fn interior_witness(spec: &ExampleSpec, _: &LabConfig) -> Result<Measured> {
    let from = TiltedBasis::witness_rise_from(3.0)
        .ok_or_else(|| LabError::InvalidArgument("γ ≤ 2".into()))?;
    let d: Vec<f64> = (from..=40)
        .map(|n| spec.term(n).dist(&TiltedBasis::witness(n)))
        .collect();
    let ok = d.windows(2).all(|w| w[1] > w[0]);
    measured(
        ok,
        json!({ "from": from, "increasing": ok }),
        json!({ "increasing": true }),
        0.0,
    )
}

fn interior_ratio(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let cone = spec
        .analytic
        .limit_cone
        .clone()
        .unwrap_or(ClosedConvexSet::AllSpace);
    let z = spec.analytic.limit.clone();
    let rep = ratio_profile(spec.generator.as_ref(), &cone, z.as_ref(), 41)?;
    let worst = rep.ratios[1..]
        .iter()
        .map(|r| (r * 10f64.sqrt() - 1.0).abs())
        .fold(0.0, f64::max);
    let _ = cfg;
    measured(
        worst <= 1e-12,
        json!({ "gamma_est": rep.gamma_est, "max_error": worst }),
        json!({ "gamma": 10f64.sqrt() }),
        1e-12,
    )
}

fn noineq_in_target(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let z = Vector::zero();
    let all = ClosedConvexSet::AllSpace;
    let rep = dichotomy_exclusion(
        spec.generator.as_ref(),
        &z,
        &spec.analytic.affine_hull,
        &all,
        &all,
        cfg.horizon,
        0.0,
    )?;
    let distinct = (0..cfg.horizon).all(|n| !spec.generator.step(n).is_zero());
    measured(
        rep.in_closure.len() == cfg.horizon && distinct,
        json!({ "in_target": rep.in_closure.len(), "distinct": distinct }),
        json!({ "in_target": cfg.horizon, "distinct": true }),
        0.0,
    )
}

fn noineq_ratio(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let cone = spec
        .analytic
        .limit_cone
        .clone()
        .unwrap_or(ClosedConvexSet::AllSpace);
    let rep = ratio_profile(
        spec.generator.as_ref(),
        &cone,
        spec.analytic.limit.as_ref(),
        cfg.horizon,
    )?;
    let worst = rep.ratios.iter().copied().fold(0.0, f64::max);
    measured(
        worst == 0.0,
        json!({ "max_ratio": worst }),
        json!({ "max_ratio": 0.0 }),
        0.0,
    )
}

fn segment_grid(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let engine = maximal_set_2d(spec.generator.as_ref(), 0, cfg.horizon)?;
    let bad = grid_points(cfg.extent, cfg.grid)
        .into_iter()
        .filter(|&(a, b)| {
            engine.contains_tol(&Vector::plane(a, b), 1e-9) != (b == 0.0 && a.abs() <= 1.0)
        })
        .count();
    measured(
        bad == 0,
        json!({ "mismatches": bad }),
        json!({ "mismatches": 0 }),
        1e-9,
    )
}

fn segment_ratio(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let cone = spec
        .analytic
        .limit_cone
        .clone()
        .unwrap_or(ClosedConvexSet::AllSpace);
    let rep = ratio_profile(spec.generator.as_ref(), &cone, None, cfg.horizon)?;
    let tail = &rep.ratios[rep.ratios.len().saturating_sub(20)..];
    let worst = tail.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max);
    measured(
        rep.limit_one,
        json!({ "max_deviation": worst }),
        json!({ "limit": 1.0 }),
        1e-3,
    )
}

fn segment_identity(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let seq = spec.generator.as_ref();
    let out = cone_identity_2d(seq, &seq.term(2 * cfg.horizon), cfg.horizon, cfg);
    let failed = match &out {
        Err(LabError::PreconditionFailed { failed }) => failed.clone(),
        _ => Vec::new(),
    };
    measured(
        failed == ["solid"],
        json!({ "failed": failed }),
        json!({ "failed": ["solid"] }),
        0.0,
    )
}

fn segment_repeat(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let bad: Vec<usize> = (0..cfg.horizon / 3)
        .filter(|&n| spec.term(3 * n + 1) != spec.term(3 * n + 3))
        .collect();
    measured(
        bad.is_empty(),
        json!({ "mismatches": bad }),
        json!({ "mismatches": [] }),
        0.0,
    )
}

fn segment_axis(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let b: Vec<f64> = (0..cfg.horizon / 3)
        .map(|m| ArcsAndReflections::axis_point(m, &spec.term(3 * m)))
        .collect();
    let floor = 1.0 - 2f64.sqrt();
    let mut ok = b.iter().all(|v| *v >= floor - 1e-15 && *v < 0.0);
    for k in 0..b.len().saturating_sub(3) / 2 {
        let (e0, o0, e1, o1) = (b[2 * k], b[2 * k + 1], b[2 * k + 2], b[2 * k + 3]);
        ok &= e0 < e1 && e1 < o1 && o1 < o0;
    }
    measured(ok, json!(b), json!({ "range": [floor, 0.0] }), 1e-15)
}

fn segment_linear(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let set = ClosedConvexSet::Flat(spec.analytic.affine_hull.clone());
    let rep = linear_conv_check(
        spec.generator.as_ref(),
        &set,
        0.5f64.sqrt(),
        cfg.horizon,
        None,
        3,
    )?;
    measured(
        rep.r_ok,
        json!({ "violations": rep.premise_violations, "gamma_est": rep.gamma_est }),
        json!({ "violations": [] }),
        1e-15,
    )
}

fn authors_limit_claim(spec: &ExampleSpec, _: &LabConfig) -> Result<Measured> {
    let z = spec.analytic.limit.clone().unwrap_or_default();
    let gap = spec.term(60).dist(&z);
    measured(
        gap <= 1e-6,
        json!({ "gap_at_60": gap }),
        json!({ "limit": [0.0, 2.0 / 3f64.sqrt()] }),
        1e-6,
    )
}

fn authors_verdicts(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let z = spec.analytic.limit.clone().unwrap_or_default();
    let cert = Some(spec.analytic.certificate.as_ref());
    let at_z = liminf_membership(spec.generator.as_ref(), &z, cfg.horizon, cert);
    let at_half = liminf_membership(
        spec.generator.as_ref(),
        &Vector::plane(0.5, 0.0),
        cfg.horizon,
        cert,
    );
    measured(
        at_z.is_excluded() && at_half.is_in_tail(),
        json!({ "z": at_z.is_excluded(), "half": at_half.is_in_tail() }),
        json!({ "z": "Excluded", "half": "InTail" }),
        0.0,
    )
}

fn authors_cone(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let clusters = cluster_directions(
        &tail_diffs(spec.generator.as_ref(), 60),
        cfg.cluster_eps,
        cfg.min_count,
    );
    let cone = cone_from_clusters(&clusters)?;
    let (lo, hi) = authors_cone_angles();
    let analytic = ClosedConvexSet::AngularCone2d {
        apex: Vector::zero(),
        theta_lo: lo,
        theta_hi: hi,
    };
    let mut disagree = 0;
    for deg in 0..360 {
        let u = Vector::from_angle((deg as f64).to_radians());
        disagree += usize::from(cone.contains(&u, 1e-6) != analytic.contains(&u, 1e-6)?);
    }
    measured(
        disagree == 0,
        json!({ "clusters": clusters.representatives.iter().map(|v| v.to_string()).collect::<Vec<_>>(), "disagree": disagree }),
        json!({ "disagree": 0 }),
        1e-6,
    )
}

fn authors_identity(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let z = spec.analytic.limit.clone().unwrap_or_default();
    let rep = cone_identity_2d(spec.generator.as_ref(), &z, cfg.horizon, cfg)?;
    measured(
        rep.interior_match,
        json!({ "interior_mismatches": rep.interior_mismatches, "closure_mismatches": rep.closure_mismatches, "band": rep.band_cells }),
        json!({ "interior_mismatches": 0 }),
        0.0,
    )
}

fn authors_exclusion(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let z = spec.analytic.limit.clone().unwrap_or_default();
    let cone = ClosedConvexSet::translate(
        spec.analytic
            .limit_cone
            .clone()
            .unwrap_or(ClosedConvexSet::AllSpace),
        z.clone(),
    );
    let rep = dichotomy_exclusion(
        spec.generator.as_ref(),
        &z,
        &spec.analytic.affine_hull,
        &cone,
        &closure(spec)?,
        cfg.horizon,
        0.0,
    )?;
    measured(
        rep.in_cone_tail.is_empty(),
        json!({ "in_cone_tail": rep.in_cone_tail }),
        json!({ "in_cone_tail": [] }),
        0.0,
    )
}

fn type1_growth(_: &ExampleSpec, _: &LabConfig) -> Result<Measured> {
    let origin = Vector::zero();
    let block = |k: usize| eps1(&LogBumps, 2 * k, &origin) + eps1(&LogBumps, 2 * k + 1, &origin);
    let (mut lo, mut hi, mut small, mut big) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0.0);
    for k in 0..=100_000usize {
        let v = block(k);
        big += v;
        if k <= 100 {
            small += v;
        }
        if k >= 1000 {
            let s = v * k as f64 * (k as f64).ln();
            lo = lo.min(s);
            hi = hi.max(s);
        }
    }
    measured(
        lo >= 0.5 && hi <= 2.0 && big / small >= 1.4,
        json!({ "scaled_range": [lo, hi], "factor": big / small }),
        json!({ "scaled_range": [0.5, 2.0], "factor_min": 1.4 }),
        0.0,
    )
}

fn type1_classify(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let samples: Vec<Vector> = [-2.0, -1.0, -0.5, -0.1]
        .iter()
        .map(|&x| Vector::plane(x, 0.0))
        .collect();
    let hints = ClassifyHints {
        certificate: Some(spec.analytic.certificate.as_ref()),
        sup_rule: spec.analytic.sup_rule.clone(),
        comparators: spec.analytic.comparators.clone(),
    };
    let rep = classify(spec.generator.as_ref(), &samples, cfg.horizon, &hints, cfg)?;
    measured(
        rep.quasi.type1.verdict == SeriesVerdict::Divergent,
        json!({ "type1": rep.quasi.type1.verdict, "type2": rep.quasi.type2.verdict, "type3": rep.quasi.type3.verdict }),
        json!({ "type1": "Divergent" }),
        0.0,
    )
}

fn quasi_max(spec: &ExampleSpec, ns: impl Iterator<Item = usize>) -> Result<Measured> {
    let candidates: Vec<Vector> = (1..=51)
        .flat_map(|j| [Vector::basis(j), Vector::basis(j).scale(-1.0)])
        .collect();
    let mut off = Vec::new();
    for n in ns {
        let m = candidates
            .iter()
            .map(|y| eps2(spec.generator.as_ref(), n, y))
            .fold(0.0, f64::max);
        if (m - 2.0).abs() > 1e-12 {
            off.push(json!({ "n": n, "max": m }));
        }
    }
    measured(
        off.is_empty(),
        json!({ "off": off }),
        json!({ "max": 2.0 }),
        1e-12,
    )
}

fn quasi_max_all(spec: &ExampleSpec, _: &LabConfig) -> Result<Measured> {
    quasi_max(spec, 0..=101)
}

fn quasi_max_tail(spec: &ExampleSpec, _: &LabConfig) -> Result<Measured> {
    quasi_max(spec, 3..=101)
}

fn quasi_classify(spec: &ExampleSpec, cfg: &LabConfig) -> Result<Measured> {
    let samples: Vec<Vector> = (1..=6).map(Vector::basis).collect();
    let hints = ClassifyHints {
        certificate: Some(spec.analytic.certificate.as_ref()),
        sup_rule: spec.analytic.sup_rule.clone(),
        comparators: spec.analytic.comparators.clone(),
    };
    let rep = classify(spec.generator.as_ref(), &samples, cfg.horizon, &hints, cfg)?;
    let (t1, t2) = (rep.quasi.type1.verdict, rep.quasi.type2.verdict);
    measured(
        t1 == SeriesVerdict::Divergent && t2 == SeriesVerdict::Divergent,
        json!({ "type1": t1, "type2": t2 }),
        json!({ "type1": "Divergent", "type2": "Divergent" }),
        0.0,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claim_ids_are_unique() {
        let mut ids: Vec<&str> = ExampleId::ALL
            .iter()
            .flat_map(|&id| claims_for(id))
            .map(|c| c.id)
            .collect();
        let n = ids.len();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }

    #[test]
    fn increasing_distance_verifies() {
        let rep = verify_example(ExampleId::IncreasingDistance, &LabConfig::default());
        assert!(rep.passed(), "{rep:?}");
    }
}
