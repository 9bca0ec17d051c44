use fejerlab::engine::{liminf_membership, Sequence, TermList};
use fejerlab::sets::{AffineFlat, ClosedConvexSet};
use fejerlab::zoo::closed_form::TiltedBasis;
use fejerlab::zoo::recursive::ArcsAndReflections;
use fejerlab::zoo::{analytic_facts, distinct_subsequence, generate, ExampleId, ExampleSpec};
use fejerlab::{LabError, Vector};

fn e0_perp() -> AffineFlat {
    AffineFlat {
        anchor: Vector::zero(),
        basis: vec![Vector::basis(0)],
        complement: true,
    }
}

#[test]
fn every_example_builds_and_validates() {
    for &id in ExampleId::ALL.iter() {
        let spec = ExampleSpec::new(id);
        assert_eq!(spec.id, id);
        spec.target.validate().unwrap();
        spec.analytic.maximal_set.validate().unwrap();
        assert!(!spec.analytic.claims.is_empty(), "{id:?}");
        assert_eq!(id.name().parse::<ExampleId>().unwrap(), id);
    }
    assert_eq!(ExampleId::ALL.len(), 10);
}

#[test]
fn unknown_example_is_an_error() {
    assert!(matches!(
        analytic_facts("NoSuchExample"),
        Err(LabError::UnknownExample(_))
    ));
}

#[test]
fn authors_prefix_from_recurrence() {
    let want = [
        (0.0, 2.0),
        (1.0, 2.0),
        (0.0, 3f64.sqrt()),
        (0.5, 3f64.sqrt()),
    ];
    for (n, (a, b)) in want.into_iter().enumerate() {
        assert!(
            generate(ExampleId::AuthorsExample, n).approx_eq(&Vector::plane(a, b), 1e-12),
            "n = {n}"
        );
    }
}

#[test]
fn authors_terms_alternate_and_even_distances_shrink() {
    let spec = ExampleSpec::new(ExampleId::AuthorsExample);
    let anchor = Vector::plane(1.0, 0.0);
    let mut last = f64::INFINITY;
    for l in 0..30 {
        let even = spec.term(2 * l);
        let odd = spec.term(2 * l + 1);
        assert!(even.get(0).abs() < 1e-12);
        assert!(odd.get(0) > 0.0);
        let d = even.dist(&anchor);
        assert!(d < last);
        last = d;
    }
}

#[test]
fn affine_counter_terms_stay_in_open_upper_quadrant() {
    let spec = ExampleSpec::new(ExampleId::AffineCounter);
    for n in 0..=80 {
        let x = spec.term(n);
        assert!(x.get(0) >= 0.0 && x.get(1) > 0.0, "n = {n}: {x}");
        assert!(x.get(1) <= (-(n as f64) / 2.0).exp2());
    }
    let (z, analytic) = spec.limit_or_estimate(200).unwrap();
    assert!(!analytic);
    assert!(z.get(0) > 0.0);
}

#[test]
fn shadows_onto_y_and_c_match_listed_prefixes() {
    let spec = ExampleSpec::new(ExampleId::L2ShadowFail);
    let e = Vector::basis;
    let y = ClosedConvexSet::Flat(e0_perp());
    let shadows = [
        e(1),
        e(1),
        e(1).scale(2.0),
        e(1),
        e(1).add(&e(2)),
        e(1),
        e(1).add(&e(3)),
    ];
    for (n, want) in shadows.iter().enumerate() {
        assert!(
            y.project(&spec.term(n)).unwrap().approx_eq(want, 1e-12),
            "n = {n}"
        );
    }
    let c = ClosedConvexSet::BallInFlat {
        center: Vector::zero(),
        radius: 1.0,
        flat: e0_perp(),
    };
    let r = 2f64.sqrt() - 1.0;
    for (n, want) in [1.0, 1.0, 1.0, 1.0, r, 1.0, r].into_iter().enumerate() {
        assert!(
            (c.distance(&spec.term(n)).unwrap() - want).abs() <= 1e-12,
            "n = {n}"
        );
    }
}

#[test]
fn shadow_distances_to_y_match_except_the_doubled_term() {
    let spec = ExampleSpec::new(ExampleId::L2ShadowFail);
    let y = ClosedConvexSet::Flat(e0_perp());
    let got: Vec<f64> = (0..7).map(|n| y.distance(&spec.term(n)).unwrap()).collect();
    // x2 = 2e1 already lies in Y, so its distance is 0 rather than the listed 1.
    assert_eq!(got, vec![1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
}

#[test]
fn shadow_terms_have_norm_sq_two_off_the_doubled_term() {
    let spec = ExampleSpec::new(ExampleId::L2ShadowFail);
    for n in (0..60).filter(|&n| n != 2) {
        assert!((spec.term(n).norm_sq() - 2.0).abs() < 1e-12, "n = {n}");
    }
}

#[test]
fn interior_example_norm_identity() {
    let spec = ExampleSpec::new(ExampleId::L2IntNonempty);
    let closure = spec.target_closure.clone().unwrap();
    for n in 1..=40 {
        let x = spec.term(n);
        assert!((x.norm() - 10f64.sqrt() * closure.distance(&x).unwrap()).abs() <= 1e-12);
    }
    assert_eq!(spec.term(0), Vector::basis(0).scale(4.0));
}

#[test]
fn witness_distances_rise_past_the_computed_index() {
    let spec = ExampleSpec::new(ExampleId::L2IntNonempty);
    let from = TiltedBasis::witness_rise_from(3.0).unwrap();
    assert_eq!(from, 4);
    let d: Vec<f64> = (from..=40)
        .map(|n| spec.term(n).dist(&TiltedBasis::witness(n)))
        .collect();
    assert!(d.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(TiltedBasis::witness_rise_from(2.0), None);
}

#[test]
fn no_interior_example_stays_in_target() {
    let spec = ExampleSpec::new(ExampleId::L2NoIneq);
    let closure = spec.target_closure.clone().unwrap();
    for n in 0..64 {
        assert!(closure.contains(&spec.term(n), 1e-12).unwrap(), "n = {n}");
        assert_ne!(spec.term(n), spec.term(n + 1));
    }
}

#[test]
fn segment_repeats_and_axis_points() {
    let spec = ExampleSpec::new(ExampleId::SegmentLimit);
    for n in 0..30 {
        assert_eq!(spec.term(3 * n + 1), spec.term(3 * n + 3));
    }
    let b: Vec<f64> = (0..24)
        .map(|m| ArcsAndReflections::axis_point(m, &spec.term(3 * m)))
        .collect();
    let floor = 1.0 - 2f64.sqrt();
    assert!((b[0] - floor).abs() < 1e-15);
    assert!(b.iter().all(|v| *v >= floor - 1e-15 && *v < 0.0));
    for k in 0..10 {
        assert!(b[2 * k] < b[2 * k + 2]);
        assert!(b[2 * k + 2] < b[2 * k + 3]);
        assert!(b[2 * k + 3] < b[2 * k + 1]);
    }
}

#[test]
fn closure_example_verdicts() {
    let spec = ExampleSpec::new(ExampleId::AngularClosure);
    let cert = Some(spec.analytic.certificate.as_ref());
    let seq = spec.generator.as_ref();
    assert!(liminf_membership(seq, &Vector::plane(0.0, 1.0), 64, cert).is_in_tail());
    assert!(liminf_membership(seq, &Vector::plane(-1.0, 0.0), 64, cert).is_excluded());
}

#[test]
fn authors_limit_is_excluded() {
    let spec = ExampleSpec::new(ExampleId::AuthorsExample);
    let cert = Some(spec.analytic.certificate.as_ref());
    let z = Vector::plane(0.0, 2.0 / 3f64.sqrt());
    assert!(liminf_membership(spec.generator.as_ref(), &z, 64, cert).is_excluded());
    assert!(spec.term(60).dist(&z) <= 1e-6);
}

#[test]
fn distinct_subsequence_examples() {
    let a = Vector::plane(1.0, 0.0);
    let b = Vector::plane(0.0, 1.0);
    let c = Vector::plane(1.0, 1.0);
    let run = distinct_subsequence(&TermList(vec![a.clone(), a, b.clone(), b, c]), 5);
    assert_eq!(run.indices, vec![0, 2, 4]);
    let constant = distinct_subsequence(&TermList(vec![Vector::basis(0)]), 10);
    assert_eq!(constant.indices, vec![0]);
    assert!(constant.eventually_constant);
    let seg = ExampleSpec::new(ExampleId::SegmentLimit);
    let run = distinct_subsequence(seg.generator.as_ref(), 30);
    assert!(run
        .indices
        .windows(2)
        .all(|w| seg.term(w[0]) != seg.term(w[1])));
}

#[test]
fn generators_are_stable_under_repeated_calls() {
    for &id in ExampleId::ALL.iter() {
        let spec = ExampleSpec::new(id);
        let first: Vec<Vector> = (0..40).map(|n| spec.generator.term(n)).collect();
        let again: Vec<Vector> = (0..40).rev().map(|n| spec.generator.term(n)).collect();
        assert!(first.iter().eq(again.iter().rev()), "{id:?}");
    }
}
