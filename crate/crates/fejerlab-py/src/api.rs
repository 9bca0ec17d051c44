//! Plain-Rust layer behind the Python module: dense lists in, JSON values out.

use fejerlab::engine::{grid_snapshot, liminf_membership, maximal_set_2d};
use fejerlab::lab::{classify, eps1, eps2, ClassifyHints};
use fejerlab::sets::{moreau_split, ClosedConvexSet, FinCone, Region};
use fejerlab::verify::{verify_all, verify_example};
use fejerlab::zoo::{ExampleId, ExampleSpec};
use fejerlab::{LabConfig, LabError, Result, Vector};
use serde::Serialize;
use serde_json::{json, Value};

fn to_json(v: impl Serialize) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| LabError::InvalidArgument(e.to_string()))
}

pub fn example(name: &str) -> Result<ExampleSpec> {
    Ok(ExampleSpec::new(name.parse::<ExampleId>()?))
}

pub fn dense(values: &[f64]) -> Result<Vector> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(LabError::InvalidVector("non-finite entry".into()));
    }
    Ok(Vector::from_dense(values))
}

pub fn to_dense(v: &Vector) -> Vec<f64> {
    v.to_dense(v.width())
}

/// A closed convex set from Region JSON.
pub fn closed_set(region_json: &str) -> Result<ClosedConvexSet> {
    ClosedConvexSet::from_region(&Region::from_json(region_json)?)
}

pub fn project(region_json: &str, point: &[f64]) -> Result<Vec<f64>> {
    Ok(to_dense(&closed_set(region_json)?.project(&dense(point)?)?))
}

pub fn distance(region_json: &str, point: &[f64]) -> Result<f64> {
    closed_set(region_json)?.distance(&dense(point)?)
}

pub fn moreau(generators: &[Vec<f64>], point: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let gens = generators
        .iter()
        .map(|g| dense(g))
        .collect::<Result<Vec<_>>>()?;
    let dim = generators
        .iter()
        .map(Vec::len)
        .chain([point.len()])
        .max()
        .unwrap_or(0);
    let cone = FinCone::generated(dim, gens)?;
    let (p, q) = moreau_split(&cone, &dense(point)?)?;
    Ok((to_dense(&p), to_dense(&q)))
}

pub fn tolerances(name: &str, n: usize, y: &[f64]) -> Result<(f64, f64)> {
    let spec = example(name)?;
    let y = dense(y)?;
    Ok((
        eps1(spec.generator.as_ref(), n, &y),
        eps2(spec.generator.as_ref(), n, &y),
    ))
}

pub fn membership(name: &str, y: &[f64], horizon: usize) -> Result<Value> {
    let spec = example(name)?;
    let cert = Some(spec.analytic.certificate.as_ref());
    to_json(liminf_membership(
        spec.generator.as_ref(),
        &dense(y)?,
        horizon,
        cert,
    ))
}

pub fn classify_points(
    name: &str,
    points: &[Vec<f64>],
    horizon: usize,
    cfg: &LabConfig,
) -> Result<Value> {
    let spec = example(name)?;
    let samples = points
        .iter()
        .map(|p| dense(p))
        .collect::<Result<Vec<_>>>()?;
    let hints = ClassifyHints {
        certificate: Some(spec.analytic.certificate.as_ref()),
        sup_rule: spec.analytic.sup_rule.clone(),
        comparators: spec.analytic.comparators.clone(),
    };
    to_json(classify(
        spec.generator.as_ref(),
        &samples,
        horizon,
        &hints,
        cfg,
    )?)
}

pub fn maximal_set_grid(
    name: &str,
    start: usize,
    horizon: usize,
    cfg: &LabConfig,
) -> Result<Value> {
    let spec = example(name)?;
    let region = maximal_set_2d(spec.generator.as_ref(), start, horizon)?;
    let cells = grid_snapshot(&region, cfg.extent, cfg.grid, cfg.zero_tol);
    Ok(json!({ "example": spec.id.name(), "start": start, "horizon": horizon, "cells": cells }))
}

pub fn verify(target: &str, cfg: &LabConfig) -> Result<Value> {
    if target == "all" {
        to_json(verify_all(cfg)?)
    } else {
        to_json(verify_example(target.parse()?, cfg))
    }
}
