use fejerlab::LabConfig;
use fejerlab_py::api;

const Y_FLAT: &str = r#"{"type":"affine_flat","anchor":{"idx":[],"val":[]},"basis":[{"idx":[0],"val":[1.0]}],"complement":true}"#;

#[test]
fn projection_onto_the_complement_of_e0() {
    assert_eq!(api::project(Y_FLAT, &[1.0, 1.0]).unwrap(), vec![0.0, 1.0]);
    assert_eq!(api::distance(Y_FLAT, &[1.0, 1.0]).unwrap(), 1.0);
}

#[test]
fn open_regions_have_no_projection() {
    let open =
        r#"{"type":"halfspace","normal":{"idx":[1],"val":[1.0]},"offset":0.0,"boundary":"open"}"#;
    assert!(api::project(open, &[0.0, -1.0]).is_err());
}

#[test]
fn moreau_split_of_a_ray() {
    let (p, q) = api::moreau(&[vec![1.0, 1.0]], &[1.0, 0.0]).unwrap();
    assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
    assert!((q[0] - 0.5).abs() < 1e-12 && (q[1] + 0.5).abs() < 1e-12);
}

#[test]
fn non_finite_input_is_rejected() {
    assert!(api::dense(&[1.0, f64::NAN]).is_err());
    assert!(api::example("Nope").is_err());
}

#[test]
fn membership_and_verify_as_json() {
    let v = api::membership("AngularClosure", &[-1.0, 0.0], 64).unwrap();
    assert_eq!(v["verdict"], "Excluded");
    let rep = api::verify("IncreasingDistance", &LabConfig::default()).unwrap();
    assert_eq!(rep["claims"][0]["status"], "Pass");
}

#[test]
fn tolerances_of_the_quasi_counter() {
    let (_, e2) = api::tolerances("QuasiIndCounter", 8, &[0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
    assert!((e2 - 2.0).abs() <= 1e-12);
}
