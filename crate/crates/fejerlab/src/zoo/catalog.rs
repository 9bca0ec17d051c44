use super::closed_form::{DyadicArc, LogBumps, ShrinkingBasis, TiltedBasis, WanderingBasis};
use super::recursive::{
    ArcsAndReflections, DriftingArcs, Recurrence, ShiftAndSwing, WideningCircles,
};
use super::{
    AnalyticFacts, Comparator, ExampleId, ExampleSpec, NamedClaim, QuasiComparators, SeriesVerdict,
    SupRule,
};
use crate::engine::{Sequence, TailCertificate, TailClaim};
use crate::hilbert::Vector;
use crate::sets::{AffineFlat, ClosedConvexSet, FinCone, Region};
use serde_json::json;
use std::f64::consts::PI;
use std::sync::Arc;

const GEOM_TOL: f64 = 1e-9;

pub(super) fn build(id: ExampleId) -> ExampleSpec {
    match id {
        ExampleId::AngularClosure => angular_closure(),
        ExampleId::AffineCounter => affine_counter(),
        ExampleId::IncreasingDistance => increasing_distance(),
        ExampleId::L2ShadowFail => shadow_fail(false),
        ExampleId::QuasiIndCounter => shadow_fail(true),
        ExampleId::L2IntNonempty => int_nonempty(),
        ExampleId::L2NoIneq => no_ineq(),
        ExampleId::SegmentLimit => segment_limit(),
        ExampleId::AuthorsExample => authors_example(),
        ExampleId::Type1Counter => type1_counter(),
    }
}

fn cert(f: impl Fn(&Vector) -> TailClaim + Send + Sync + 'static) -> Arc<dyn TailCertificate> {
    Arc::new(f)
}

fn claim(id: &'static str, statement: &'static str) -> NamedClaim {
    NamedClaim { id, statement }
}

fn summable(statement: &'static str) -> Option<Comparator> {
    Some(Comparator {
        verdict: SeriesVerdict::Summable,
        statement,
    })
}

fn divergent(statement: &'static str) -> Option<Comparator> {
    Some(Comparator {
        verdict: SeriesVerdict::Divergent,
        statement,
    })
}

const FEJER_STAR_TYPE3: &str =
    "Fejér* monotone sequences are quasi-Fejér of Type III: eps2(y) vanishes eventually";
const INTERIOR_TYPE1: &str =
    "Fejér* with respect to a set with nonempty interior gives quasi-Fejér Type I";

fn whole_space() -> AffineFlat {
    AffineFlat {
        anchor: Vector::zero(),
        basis: Vec::new(),
        complement: true,
    }
}

fn x_axis() -> AffineFlat {
    AffineFlat {
        anchor: Vector::zero(),
        basis: vec![Vector::basis(0)],
        complement: false,
    }
}

fn y_axis() -> AffineFlat {
    AffineFlat {
        anchor: Vector::zero(),
        basis: vec![Vector::basis(1)],
        complement: false,
    }
}

/// `{e₀}^⊥`.
fn e0_perp() -> AffineFlat {
    AffineFlat {
        anchor: Vector::zero(),
        basis: vec![Vector::basis(0)],
        complement: true,
    }
}

fn angular_closure() -> ExampleSpec {
    let up = Vector::plane(0.0, 1.0);
    let target = Region::angular_cone(Vector::zero(), 0.0, PI, true, false);
    let certificate = cert(|y: &Vector| {
        let (a, b) = (y.get(0), y.get(1));
        if b.abs() <= 1e-12 {
            return if a >= -1e-12 {
                TailClaim::EventuallyIn { from: 0 }
            } else {
                TailClaim::InfinitelyOftenOut
            };
        }
        if b < 0.0 {
            return TailClaim::InfinitelyOftenOut;
        }
        let theta = b.atan2(a);
        (0..2048)
            .find(|&n| DyadicArc::mid_angle(n) + PI >= theta)
            .map_or(TailClaim::Unknown, |from| TailClaim::EventuallyIn { from })
    });
    ExampleSpec {
        id: ExampleId::AngularClosure,
        params: json!({ "alpha_n": "-pi * 2^-(n+2)", "alpha_0": -PI / 4.0 }),
        generator: Arc::new(DyadicArc),
        target: target.clone(),
        target_closure: Some(ClosedConvexSet::Halfspace {
            normal: up.clone(),
            offset: 0.0,
        }),
        relative_interior: Region::open_halfspace(up.clone(), 0.0),
        analytic: AnalyticFacts {
            limit: Some(Vector::plane(1.0, 0.0)),
            convergent: true,
            maximal_set: target,
            claims: vec![
                claim(
                    "maximal_set",
                    "maximal set K([0,π)) = (ℝ×ℝ₊₊) ∪ (ℝ₊×{0}), which is not closed",
                ),
                claim(
                    "halfplanes",
                    "C(e(α), e(α₊)) = K([β, β+π]) with β = (α+α₊)/2",
                ),
                claim(
                    "limit",
                    "xₙ → (1,0), and the limit belongs to the maximal set",
                ),
                claim(
                    "cone",
                    "𝒦 = {(x,y) : y ≥ 0}, the closure of the maximal set minus (1,0)",
                ),
            ],
            certificate,
            affine_hull: whole_space(),
            limit_cone: Some(ClosedConvexSet::Halfspace {
                normal: up,
                offset: 0.0,
            }),
            opial_flat: Some(whole_space()),
            sup_rule: None,
            comparators: QuasiComparators {
                type1: summable(INTERIOR_TYPE1),
                type2: None,
                type3: summable(FEJER_STAR_TYPE3),
            },
        },
    }
}

fn affine_counter() -> ExampleSpec {
    let certificate = cert(|y: &Vector| {
        let (a, b) = (y.get(0), y.get(1));
        if b <= 0.0 {
            TailClaim::EventuallyIn {
                from: (-a).ceil().max(0.0) as usize,
            }
        } else {
            TailClaim::InfinitelyOftenOut
        }
    });
    ExampleSpec {
        id: ExampleId::AffineCounter,
        params: json!({ "x0": [0.0, 1.0], "centers": "(-n, 0)", "target_point": "rightmost" }),
        generator: Arc::new(Recurrence::new(DriftingArcs, Vector::plane(0.0, 1.0))),
        target: Region::AffineFlat(x_axis()),
        target_closure: Some(ClosedConvexSet::Flat(x_axis())),
        relative_interior: Region::AffineFlat(x_axis()),
        analytic: AnalyticFacts {
            limit: None,
            convergent: true,
            maximal_set: Region::closed_halfspace(Vector::plane(0.0, -1.0), 0.0),
            claims: vec![
                claim(
                    "shadows_increase",
                    "P_M(xₙ) is strictly increasing in M = ℝ×{0}",
                ),
                claim("limit", "xₙ → z = (ζ,0) with ζ > 0"),
                claim("maximal_set", "maximal set ℝ×ℝ₋"),
                claim(
                    "distance_rate",
                    "d_M(xₙ) ≤ 2^{−n/2}, and d_M(xₙ₊₁) ≤ 2^{−1/2} d_M(xₙ)",
                ),
                claim(
                    "raik",
                    "the Raik inequality chain holds at y = (0,0) for some N and ρ",
                ),
            ],
            certificate,
            affine_hull: x_axis(),
            limit_cone: Some(ClosedConvexSet::Flat(x_axis())),
            opial_flat: Some(whole_space()),
            sup_rule: None,
            comparators: QuasiComparators {
                type1: None,
                type2: None,
                type3: summable(FEJER_STAR_TYPE3),
            },
        },
    }
}

fn increasing_distance() -> ExampleSpec {
    let generator = Arc::new(Recurrence::new(WideningCircles, Vector::plane(1.0, 1.0)));
    let z_norm = generator.term(96).norm();
    let left = Region::open_halfspace(Vector::plane(-1.0, 0.0), 0.0);
    let target = Region::intersection(vec![
        left.clone(),
        Region::open_halfspace(Vector::plane(0.0, -1.0), 0.0),
    ]);
    let quadrant = ClosedConvexSet::AngularCone2d {
        apex: Vector::zero(),
        theta_lo: PI,
        theta_hi: 1.5 * PI,
    };
    let certificate = cert(|y: &Vector| {
        if y.get(0) > GEOM_TOL {
            TailClaim::InfinitelyOftenOut
        } else {
            TailClaim::Unknown
        }
    });
    ExampleSpec {
        id: ExampleId::IncreasingDistance,
        params: json!({ "a_n": "2^-n", "x0": [1.0, 1.0] }),
        generator,
        target: target.clone(),
        target_closure: Some(quadrant.clone()),
        relative_interior: target,
        analytic: AnalyticFacts {
            limit: None,
            convergent: true,
            maximal_set: Region::union(vec![
                left,
                Region::intersection(vec![
                    Region::AffineFlat(y_axis()),
                    Region::closed_halfspace(Vector::plane(0.0, 1.0), z_norm),
                ]),
            ]),
            claims: vec![
                claim(
                    "distance_increases",
                    "d_M̄(xₙ) = ‖xₙ‖ is strictly increasing towards ‖z‖",
                ),
                claim("limit", "xₙ → z ∈ {0}×ℝ₊₊"),
                claim("maximal_set", "maximal set (ℝ₋₋×ℝ) ∪ ({0}×[‖z‖,∞))"),
            ],
            certificate,
            affine_hull: whole_space(),
            limit_cone: Some(quadrant),
            opial_flat: Some(whole_space()),
            sup_rule: None,
            comparators: QuasiComparators {
                type1: summable(INTERIOR_TYPE1),
                type2: None,
                type3: summable(FEJER_STAR_TYPE3),
            },
        },
    }
}

fn wandering_certificate() -> Arc<dyn TailCertificate> {
    cert(|y: &Vector| {
        if y.get(0).abs() > 1e-12 {
            return TailClaim::InfinitelyOftenOut;
        }
        let s = y.max_index().unwrap_or(0);
        TailClaim::EventuallyIn {
            from: (2 * s + 1).max(3),
        }
    })
}

fn shadow_fail(quasi: bool) -> ExampleSpec {
    let y = e0_perp();
    let (id, target, closure) = if quasi {
        let ball = Region::Ball {
            center: Vector::zero(),
            radius: 1.0,
        };
        (
            ExampleId::QuasiIndCounter,
            Region::intersection(vec![ball, Region::AffineFlat(y.clone())]),
            ClosedConvexSet::BallInFlat {
                center: Vector::zero(),
                radius: 1.0,
                flat: y.clone(),
            },
        )
    } else {
        (
            ExampleId::L2ShadowFail,
            Region::AffineFlat(y.clone()),
            ClosedConvexSet::Flat(y.clone()),
        )
    };
    let mut claims = vec![
        claim(
            "maximal_set",
            "M = span{e₁, e₂, …} equals the maximal Fejér* set",
        ),
        claim("opial", "Y = {e₀}^⊥ = M̄ is the maximal Opial set"),
    ];
    let comparators = if quasi {
        claims.push(claim(
            "tolerance_max",
            "max of eps2 over B[0,1]∩M equals 2, attained at e_k (n = 2k) and −e_{k+1} (n = 2k+1)",
        ));
        QuasiComparators {
            type1: divergent("sup eps1 over B[0,1]∩M is bounded below by a positive constant"),
            type2: divergent("sup eps2 over B[0,1]∩M equals 2 at every step"),
            type3: summable(FEJER_STAR_TYPE3),
        }
    } else {
        claims.push(claim(
            "shadows_y",
            "P_Y(xₙ) = (e₁, e₁, 2e₁, e₁, e₁+e₂, e₁, e₁+e₃, …)",
        ));
        claims.push(claim(
            "distances_y",
            "d_Y(xₙ) = (1,1,1,1,0,1,0,…) is not convergent",
        ));
        claims.push(claim(
            "shadows_c",
            "P_C(xₙ) = (e₁, e₁, e₁, e₁, 2^{−1/2}(e₁+e₂), …) for C = B[0,1]∩Y",
        ));
        claims.push(claim("distances_c", "d_C(xₙ) = (1,1,1,1,√2−1,1,√2−1,…)"));
        QuasiComparators {
            type1: None,
            type2: None,
            type3: summable(FEJER_STAR_TYPE3),
        }
    };
    let sup_rule: Option<SupRule> = if quasi {
        Some(Arc::new(|n: usize| {
            let k = n / 2;
            if n.is_multiple_of(2) {
                if k >= 1 {
                    vec![Vector::basis(k)]
                } else {
                    Vec::new()
                }
            } else {
                vec![Vector::basis(k + 1).scale(-1.0)]
            }
        }))
    } else {
        None
    };
    ExampleSpec {
        id,
        params: json!({ "even": "e1 + e_{n/2}", "odd": "e0 + e1" }),
        generator: Arc::new(WanderingBasis),
        target,
        target_closure: Some(closure),
        relative_interior: Region::Empty,
        analytic: AnalyticFacts {
            limit: None,
            convergent: false,
            maximal_set: Region::AffineFlat(y.clone()),
            claims,
            certificate: wandering_certificate(),
            affine_hull: y.clone(),
            limit_cone: None,
            opial_flat: Some(y),
            sup_rule,
            comparators,
        },
    }
}

fn int_nonempty() -> ExampleSpec {
    let gamma = 3.0;
    let inward = Vector::basis(0).scale(-1.0);
    let certificate = cert(|y: &Vector| {
        if y.get(0) > 1e-12 {
            TailClaim::InfinitelyOftenOut
        } else {
            TailClaim::EventuallyIn {
                from: y.max_index().map_or(1, |s| s + 1),
            }
        }
    });
    ExampleSpec {
        id: ExampleId::L2IntNonempty,
        params: json!({ "alpha_n": "2^-n", "gamma": gamma }),
        generator: Arc::new(TiltedBasis { gamma }),
        target: Region::open_halfspace(inward.clone(), 0.0),
        target_closure: Some(ClosedConvexSet::Halfspace {
            normal: inward.clone(),
            offset: 0.0,
        }),
        relative_interior: Region::open_halfspace(inward.clone(), 0.0),
        analytic: AnalyticFacts {
            limit: Some(Vector::zero()),
            convergent: true,
            maximal_set: Region::closed_halfspace(inward.clone(), 0.0),
            claims: vec![
                claim("norm_identity", "‖xₙ‖ = αₙ√(1+γ²) = √(1+γ²) d_M̄(xₙ)"),
                claim(
                    "not_eventually_fejer",
                    "not eventually Fejér monotone with respect to B[−2e₀, 1]",
                ),
                claim(
                    "fejer_star",
                    "Fejér* monotone with respect to M = {y : ⟨y, e₀⟩ < 0}",
                ),
            ],
            certificate,
            affine_hull: whole_space(),
            limit_cone: Some(ClosedConvexSet::Halfspace {
                normal: inward,
                offset: 0.0,
            }),
            opial_flat: Some(whole_space()),
            sup_rule: None,
            comparators: QuasiComparators {
                type1: summable(INTERIOR_TYPE1),
                type2: None,
                type3: summable(FEJER_STAR_TYPE3),
            },
        },
    }
}

fn no_ineq() -> ExampleSpec {
    let certificate = cert(|y: &Vector| TailClaim::EventuallyIn {
        from: y.max_index().map_or(0, |s| s + 1),
    });
    ExampleSpec {
        id: ExampleId::L2NoIneq,
        params: json!({ "alpha_n": "1/(n+1)" }),
        generator: Arc::new(ShrinkingBasis),
        target: Region::AllSpace,
        target_closure: Some(ClosedConvexSet::AllSpace),
        relative_interior: Region::Empty,
        analytic: AnalyticFacts {
            limit: Some(Vector::zero()),
            convergent: true,
            maximal_set: Region::AllSpace,
            claims: vec![
                claim(
                    "in_target",
                    "xₙ ∈ M for all n, with distinct consecutive terms and xₙ → 0",
                ),
                claim(
                    "exclusion_fails",
                    "with ri(M) = ∅ the exclusion properties may fail",
                ),
            ],
            certificate,
            affine_hull: whole_space(),
            limit_cone: Some(ClosedConvexSet::AllSpace),
            opial_flat: Some(whole_space()),
            sup_rule: None,
            comparators: QuasiComparators {
                type1: None,
                type2: None,
                type3: summable(FEJER_STAR_TYPE3),
            },
        },
    }
}

fn unit_segment() -> Region {
    Region::intersection(vec![
        Region::AffineFlat(x_axis()),
        Region::closed_halfspace(Vector::basis(0), -1.0),
        Region::closed_halfspace(Vector::basis(0).scale(-1.0), -1.0),
    ])
}

fn segment_limit() -> ExampleSpec {
    let certificate = cert(|y: &Vector| {
        if y.get(1).abs() <= GEOM_TOL && y.get(0).abs() <= 1.0 + GEOM_TOL {
            TailClaim::EventuallyIn { from: 0 }
        } else {
            TailClaim::InfinitelyOftenOut
        }
    });
    ExampleSpec {
        id: ExampleId::SegmentLimit,
        params: json!({ "x0": [0.0, 1.0], "centers": "((-1)^n, 0) at n ≡ 0 mod 3", "otherwise": "reflection across the x-axis" }),
        generator: Arc::new(Recurrence::new(ArcsAndReflections, Vector::plane(0.0, 1.0))),
        target: unit_segment(),
        target_closure: Some(ClosedConvexSet::Segment {
            from: Vector::plane(-1.0, 0.0),
            to: Vector::plane(1.0, 0.0),
        }),
        relative_interior: Region::intersection(vec![
            Region::AffineFlat(x_axis()),
            Region::open_halfspace(Vector::basis(0), -1.0),
            Region::open_halfspace(Vector::basis(0).scale(-1.0), -1.0),
        ]),
        analytic: AnalyticFacts {
            limit: None,
            convergent: true,
            maximal_set: unit_segment(),
            claims: vec![
                claim("maximal_set", "maximal set = ⋂ Cₙ = [−1,1]×{0}, not a cone"),
                claim("cone", "𝒦 = ℝ×{0}, so int(𝒦) = ∅"),
                claim("limit", "xₙ → z in the relative interior of the segment"),
                claim("repeat", "x_{3n+1} = x_{3n+3}"),
            ],
            certificate,
            affine_hull: x_axis(),
            limit_cone: Some(ClosedConvexSet::Flat(x_axis())),
            opial_flat: Some(whole_space()),
            sup_rule: None,
            comparators: QuasiComparators {
                type1: None,
                type2: None,
                type3: summable(FEJER_STAR_TYPE3),
            },
        },
    }
}

/// Limit point `(0, 2/√3)` of the horizontal-shift example.
pub fn authors_limit() -> Vector {
    Vector::plane(0.0, 2.0 / 3f64.sqrt())
}

/// Angular range of `𝒦 = {x ≥ 0, y ≤ −2x/√3}`.
pub fn authors_cone_angles() -> (f64, f64) {
    (-PI / 2.0, (-2.0f64).atan2(3f64.sqrt()))
}

fn authors_example() -> ExampleSpec {
    let z = authors_limit();
    let (lo, hi) = authors_cone_angles();
    let end = Vector::plane(1.0, 0.0);
    let d = end.sub(&z);
    let slope_normal = Vector::plane(-2.0 / 3f64.sqrt(), -1.0);
    let interior = Region::intersection(vec![
        Region::open_halfspace(Vector::basis(0), 0.0),
        Region::open_halfspace(slope_normal.clone(), slope_normal.inner(&z)),
    ]);
    let segment = Region::intersection(vec![
        Region::AffineFlat(AffineFlat {
            anchor: z.clone(),
            basis: vec![d.unit().unwrap_or_default()],
            complement: false,
        }),
        Region::open_halfspace(d.clone(), d.inner(&z)),
        Region::closed_halfspace(d.scale(-1.0), -d.inner(&end)),
    ]);
    let maximal = Region::union(vec![interior.clone(), segment]);
    let closure = ClosedConvexSet::AngularCone2d {
        apex: z.clone(),
        theta_lo: lo,
        theta_hi: hi,
    };
    let cert_closure = closure.clone();
    let cz = z.clone();
    let certificate = cert(move |y: &Vector| {
        let w = y.sub(&cz);
        let outside = cert_closure
            .distance(y)
            .map_or(true, |dist| dist > GEOM_TOL);
        if outside || w.norm() <= GEOM_TOL || w.get(0).abs() <= GEOM_TOL {
            return TailClaim::InfinitelyOftenOut;
        }
        let along = w.inner(&d) / d.norm_sq();
        let off_ray = w.sub(&d.scale(along)).norm();
        if off_ray <= GEOM_TOL && along > 1.0 + GEOM_TOL {
            return TailClaim::InfinitelyOftenOut;
        }
        TailClaim::Unknown
    });
    ExampleSpec {
        id: ExampleId::AuthorsExample,
        params: json!({ "x0": [0.0, 2.0], "shift": "2^-l", "arc_center": [1.0, 0.0] }),
        generator: Arc::new(Recurrence::new(ShiftAndSwing, Vector::plane(0.0, 2.0))),
        target: maximal.clone(),
        target_closure: Some(closure),
        relative_interior: interior,
        analytic: AnalyticFacts {
            limit: Some(z),
            convergent: true,
            maximal_set: maximal,
            claims: vec![
                claim("limit", "xₙ → (0, 2/√3)"),
                claim(
                    "limit_excluded",
                    "the limit does not belong to the maximal Fejér* set",
                ),
                claim(
                    "maximal_set",
                    "maximal set {(0,2/√3) + int(𝒦)} ∪ ((0,2/√3), (1,0)]",
                ),
                claim("cone", "𝒦 = {(x,y) : x ≥ 0, y ≤ −(2/√3)x}"),
            ],
            certificate,
            affine_hull: whole_space(),
            limit_cone: Some(ClosedConvexSet::AngularCone2d {
                apex: Vector::zero(),
                theta_lo: lo,
                theta_hi: hi,
            }),
            opial_flat: Some(whole_space()),
            sup_rule: None,
            comparators: QuasiComparators {
                type1: summable(INTERIOR_TYPE1),
                type2: None,
                type3: summable(FEJER_STAR_TYPE3),
            },
        },
    }
}

/// First block `k` after which `(x, 0)` stays in every even step halfplane.
pub fn log_bumps_entry_block(x: f64) -> Option<usize> {
    if x >= 0.0 || 1.0 / -x > 700.0 {
        return None;
    }
    let fits = |k: usize| LogBumps::block_gap(k) + x <= 0.0;
    let mut hi = 1usize;
    while !fits(hi) {
        hi = hi.checked_mul(2)?;
    }
    let mut lo = 1usize;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(lo)
}

fn type1_counter() -> ExampleSpec {
    let left = Region::intersection(vec![
        Region::AffineFlat(x_axis()),
        Region::open_halfspace(Vector::plane(-1.0, 0.0), 0.0),
    ]);
    let ray = FinCone::generated(2, vec![Vector::plane(-1.0, 0.0)]).expect("planar ray");
    let certificate = cert(|y: &Vector| {
        let (a, b) = (y.get(0), y.get(1));
        if b.abs() > 1e-12 || a >= 0.0 {
            return TailClaim::InfinitelyOftenOut;
        }
        log_bumps_entry_block(a).map_or(TailClaim::Unknown, |k| TailClaim::EventuallyIn {
            from: 2 * k,
        })
    });
    ExampleSpec {
        id: ExampleId::Type1Counter,
        params: json!({ "even": "(1/(k+1), 0)", "odd": "(1/(k+2), sqrt(2/((k+1)(k+2) ln(k+1))))", "log_at_k0": "ln 2" }),
        generator: Arc::new(LogBumps),
        target: left.clone(),
        target_closure: Some(ClosedConvexSet::Cone(ray.clone())),
        relative_interior: left.clone(),
        analytic: AnalyticFacts {
            limit: Some(Vector::zero()),
            convergent: true,
            maximal_set: left,
            claims: vec![
                claim("maximal_set", "M = ℝ₋₋×{0} equals the maximal Fejér* set, with empty interior"),
                claim("not_type1", "sup eps1 at block k ∼ 1/(k ln k), so the sequence is not quasi-Fejér of Type I"),
                claim("type2", "sup eps2 at block k ∼ 2/(k² ln k) is summable"),
            ],
            certificate,
            affine_hull: x_axis(),
            limit_cone: Some(ClosedConvexSet::Cone(ray)),
            opial_flat: Some(whole_space()),
            sup_rule: Some(Arc::new(|_| vec![Vector::zero()])),
            comparators: QuasiComparators {
                type1: divergent("sup eps1 at block k ∼ 1/(k ln k) and Σ 1/(k ln k) = ∞"),
                type2: summable("sup eps2 at block k ∼ 2/(k² ln k)"),
                type3: summable(FEJER_STAR_TYPE3),
            },
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entry_block_is_minimal() {
        for x in [-2.0, -1.0, -0.5, -0.3] {
            let k = log_bumps_entry_block(x).unwrap();
            assert!(LogBumps::block_gap(k) + x <= 0.0);
            assert!(k == 1 || LogBumps::block_gap(k - 1) + x > 0.0);
        }
        assert_eq!(log_bumps_entry_block(0.5), None);
    }

    #[test]
    fn regions_validate() {
        for id in ExampleId::ALL {
            let s = build(id);
            s.target.validate().unwrap();
            s.relative_interior.validate().unwrap();
            s.analytic.maximal_set.validate().unwrap();
        }
    }

    #[test]
    fn generators_are_deterministic() {
        for id in ExampleId::ALL {
            let (a, b) = (build(id), build(id));
            for n in 0..50 {
                assert_eq!(a.term(n), b.term(n), "{id} term {n}");
            }
        }
    }
}
