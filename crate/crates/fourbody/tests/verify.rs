use fourbody::verify::{criterion, random_poly, select, Status, VerifyConfig};
use fourbody_core::catalog::build;
use fourbody_core::geometry::pairs;
use fourbody_core::pushforward::CartesianOracle;
use fourbody_core::{q, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn suite_selection() {
    assert_eq!(select("all").unwrap().len(), 10);
    assert_eq!(select("7"), Some(vec![7]));
    assert_eq!(select("gauge"), Some(vec![5]));
    assert_eq!(select("11"), None);
    assert_eq!(select("x"), None);
}

#[test]
fn random_polynomials_have_degree_at_most_three() {
    let reg = build("delta-radial-rho").unwrap().op.registry().clone();
    let mut r = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let p = random_poly(&reg, &mut r);
        assert!(!p.is_zero());
        assert!(p.var_degree().unwrap() <= 3);
    }
}

#[test]
fn oracle_catches_a_wrong_mass() {
    let op = build("delta-radial-rho").unwrap().op;
    let oracle = CartesianOracle::new(4, 3, vec![Rational::one(), q(2, 1), Rational::one(), Rational::one()], pairs(4));
    let mut r = ChaCha8Rng::seed_from_u64(2);
    let caught = (0..5).any(|_| {
        let f = random_poly(op.registry(), &mut r);
        !oracle.residual(&op, &f).unwrap().is_zero()
    });
    assert!(caught);
}

#[test]
fn oracle_and_reductions_pass() {
    let cfg = VerifyConfig {
        oracle_polys: 5,
        ..VerifyConfig::default()
    };
    for k in [1, 6, 10] {
        let c = criterion(k, &cfg);
        assert!(c.passed, "criterion {k}: {:?}", c.checks);
        assert!(c.checks.iter().all(|x| x.witness.is_none()));
    }
}

#[test]
fn determinant_sign_is_reported_not_failed() {
    let c = criterion(2, &VerifyConfig::default());
    assert!(c.passed);
    let sign = c.checks.iter().find(|x| x.name == "delta-radial-rho determinant constant").unwrap();
    assert_eq!(sign.status, Status::Reported);
    assert!(sign.detail.starts_with("computed -36864, published 36864"));
}

#[test]
fn published_symmetry_fails_and_derived_holds() {
    let c = criterion(3, &VerifyConfig::default());
    assert!(!c.passed);
    let status = |name: &str| c.checks.iter().find(|x| x.name == name).unwrap().status;
    assert_eq!(status("published second-order symmetry"), Status::Fail);
    assert_eq!(status("derived second-order symmetry"), Status::Pass);
    assert_eq!(status("D1 basis commutes"), Status::Pass);
}
