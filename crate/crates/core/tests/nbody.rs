use std::collections::BTreeMap;

use fourbody_core::geometry::pairs;
use fourbody_core::nbody::*;
use fourbody_core::parse::parse_poly;
use fourbody_core::pushforward::CartesianOracle;
use fourbody_core::*;

fn ones(n: usize) -> Vec<Rational> {
    vec![Rational::one(); n]
}

#[test]
fn four_body_radial_matches_catalog() {
    let op = nbody_radial(4, &ones(4)).unwrap();
    assert!(op.equals(&catalog::build("delta-radial-rho").unwrap().op));

    let ms = [q(1, 1), q(2, 1), q(3, 1), q(5, 1)];
    let op = nbody_radial(4, &ms).unwrap();
    let mass = catalog::build("delta-radial-rho-mass").unwrap().op;
    let spec = mass
        .specialize(&[("m1", ms[0].clone()), ("m2", ms[1].clone()), ("m3", ms[2].clone()), ("m4", ms[3].clone())])
        .unwrap();
    assert!(op.equals(&spec.embed(op.registry()).unwrap()));
}

#[test]
fn radial_operators_match_cartesian_kinetic_energy() {
    for (n, ms) in [(3, vec![q(1, 1), q(2, 3), q(7, 2)]), (5, ones(5))] {
        let op = nbody_radial(n, &ms).unwrap();
        let oracle = CartesianOracle::new(n, 2, ms.clone(), pairs(n));
        let reg = op.registry();
        let f = if n == 3 {
            parse_poly(reg, "rho12^2*rho13 - 3*rho23*rho13 + rho12^3 + 5*rho23").unwrap()
        } else {
            parse_poly(reg, "rho12*rho34*rho45 - rho15^2 + 2*rho23*rho35").unwrap()
        };
        assert!(oracle.residual(&op, &f).unwrap().is_zero(), "n = {n}");
    }
}

fn frozen(entries: &[(Slot, Rational)]) -> BTreeMap<Slot, Rational> {
    entries.iter().cloned().collect()
}

#[test]
fn three_body_coefficients() {
    let r = derive_coefficients(3, 3).unwrap();
    assert!(r.certificate.all_zero());
    assert!(r.known_agree());
    use Slot::*;
    let want = frozen(&[(A(2), q(1, 2)), (B(2), q(6, 1)), (B(3), q(24, 1)), (E(0), q(6, 1)), (E(1), q(1, 4))]);
    assert_eq!(r.values, want);
}

#[test]
fn four_body_coefficients_reproduce_volume_operator() {
    let r = derive_coefficients(4, 3).unwrap();
    assert!(r.certificate.all_zero());
    assert!(r.known_agree());
    use Slot::*;
    let want = frozen(&[
        (A(2), q(2, 1)),
        (A(3), q(2, 9)),
        (B(2), q(8, 1)),
        (B(3), q(32, 1)),
        (B(4), q(48, 1)),
        (E(0), q(12, 1)),
        (E(1), q(1, 2)),
        (E(2), q(1, 9)),
        (C(1, 1), q(54, 1)),
        (F(1, 1), q(1, 2)),
    ]);
    assert_eq!(r.values, want);

    // second route: the catalog's (V, S, P) operator, with V2 = P, V3 = S, V4 = V
    let dg = catalog::build("delta-g").unwrap().op;
    let rebuilt = template_operator_in(dg.registry(), 4, &[2, 1, 0], &r.values).unwrap();
    assert!(rebuilt.equals(&dg));
}

#[test]
fn five_body_coefficients() {
    let r = derive_coefficients(5, 3).unwrap();
    assert!(r.certificate.all_zero());
    assert_eq!(r.certificate.checked, 35);
    assert!(r.known_agree());
    use Slot::*;
    let want = frozen(&[
        (A(2), q(3, 1)),
        (A(3), q(8, 9)),
        (A(4), q(1, 8)),
        (B(2), q(10, 1)),
        (B(3), q(40, 1)),
        (B(4), q(60, 1)),
        (B(5), q(80, 1)),
        (E(0), q(20, 1)),
        (E(1), q(3, 4)),
        (E(2), q(2, 9)),
        (E(3), q(1, 16)),
        (C(1, 1), q(8, 3)),
        (C(1, 2), q(320, 1)),
        (C(2, 2), q(135, 2)),
        (F(1, 1), q(2, 9)),
        (F(1, 2), q(2, 1)),
        (F(2, 2), q(1, 2)),
    ]);
    assert_eq!(r.values, want);
}

#[test]
fn wrong_slot_value_breaks_certificate() {
    let mut r = derive_coefficients(4, 2).unwrap();
    r.values.insert(Slot::A(3), q(2, 3));
    let op = template_operator(4, &r.values);
    let radial = nbody_radial(4, &ones(4)).unwrap();
    let images = volume_images(radial.registry(), 4).unwrap();
    let phi: Vec<(&str, Poly)> = images.iter().map(|(s, p)| (s.as_str(), p.clone())).collect();
    let rep = pushforward::pushforward_check(&radial, &phi, &op, 2).unwrap();
    assert!(!rep.all_zero());
}

#[test]
fn out_of_range_sizes() {
    assert!(derive_coefficients(2, 1).is_err());
    assert!(derive_coefficients(6, 1).is_err());
    assert!(nbody_radial(3, &ones(2)).is_err());
}
