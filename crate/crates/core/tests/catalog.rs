use fourbody_core::catalog::*;
use fourbody_core::geometry::{pairs, relabel_images, rho_registry};
use fourbody_core::identities::*;
use fourbody_core::pushforward::pushforward_check;
use fourbody_core::*;

#[test]
fn all_pushforwards_are_exact() {
    for name in PUSHFORWARDS {
        let p = pushforward(name).unwrap();
        let rep = p.check().unwrap();
        assert!(rep.checked > 0);
        assert!(rep.all_zero(), "{name}: {} failing monomials", rep.failures.len());
    }
}

#[test]
fn perturbed_target_is_caught() {
    let mut p = pushforward("rho-to-volume").unwrap();
    let reg = p.target.registry().clone();
    p.target.add_first(2, RatFunc::constant(&reg, q(1, 1)));
    assert!(!p.check().unwrap().all_zero());
}

#[test]
fn chain_rule_images() {
    for c in chain_rules().unwrap() {
        assert!(c.holds(), "{}", c.name);
    }
}

#[test]
fn degenerate_loci_and_equal_masses() {
    for d in degenerations().unwrap() {
        assert!(d.holds(), "{}", d.name);
    }
}

#[test]
fn restriction_refuses_non_tangent_locus() {
    // S = 0 alone with d = 3 leaves the (d-1)P/2 drift in S
    let g = build("delta-g").unwrap().op;
    let target = Registry::new(&["V", "P"], &[]);
    let r = g.restrict(&[("S", Rational::zero()), ("d", q(3, 1))], &target);
    assert!(matches!(r, Err(Error::NotTangent(_))));
}

#[test]
fn radial_operator_is_relabeling_invariant() {
    let op = build("delta-radial-rho").unwrap().op;
    let reg = rho_registry(&["d"]);
    for perm in [[1, 0, 2, 3], [1, 2, 3, 0], [3, 2, 1, 0]] {
        let phi = relabel_images(&reg, 4, &perm);
        let phi: Vec<(&str, Poly)> = phi.iter().map(|(s, p)| (s.as_str(), p.clone())).collect();
        assert!(pushforward_check(&op, &phi, &op, 2).unwrap().all_zero());
    }
    assert_eq!(pairs(4).len(), 6);
}

#[test]
fn determinant_factorizations() {
    let expect = [
        ("delta-radial-rho", q(-36864, 1), false),
        ("delta-g", q(1, 1), true),
        ("delta-g-d2", q(4, 1), false),
        ("delta-u", q(32, 1), true),
        ("delta-g-mass", q(1, 1), true),
        ("delta-radial-rho-mass", q(9216, 1), true),
    ];
    for (id, c, printed) in expect {
        let r = certify_determinant(id).unwrap().unwrap();
        assert_eq!(r.found, Some(c), "{id}");
        assert_eq!(r.matches_printed(), printed, "{id}");
    }
    assert!(certify_determinant("delta-p").unwrap().is_none());
}

#[test]
fn gauge_claims() {
    // (entry, printed claim holds)
    for (id, holds) in [
        ("delta-g", true),
        ("delta-u", true),
        ("delta-p", true),
        ("delta-g-d2", false),
        ("delta-g-mass", false),
        ("delta-radial-rho", false),
    ] {
        let e = build(id).unwrap();
        let r = check_gauge_claim(&e.op, e.gauge.as_ref().unwrap()).unwrap();
        assert!(r.derivatives_match, "{id}");
        assert_eq!(r.holds(), holds, "{id}");
    }
}

#[test]
fn corrected_potentials() {
    let e = build("delta-radial-rho").unwrap();
    let reg = e.registry().clone();
    let r = check_gauge_claim(&e.op, e.gauge.as_ref().unwrap()).unwrap();
    let flipped = in_rho(&reg, "(3*P^2 + 112*S)/(32*(P*S - 36*V)) + (d-5)*(d-3)*S/(72*V)").unwrap();
    assert!(r.actual_potential.equals(&flipped));

    let e = build("delta-g-d2").unwrap();
    let r = check_gauge_claim(&e.op, e.gauge.as_ref().unwrap()).unwrap();
    let negated = parse::parse_ratfunc(e.registry(), "-P^3/(32*S*(P^2 - 64*S))").unwrap();
    assert!(r.actual_potential.equals(&negated));

    let e = build("delta-g-mass").unwrap();
    let mut claim = e.gauge.clone().unwrap();
    let m = "(m1*m2*m3*m4)";
    let mm = "(m1+m2+m3+m4)";
    claim.potential = parse::parse_ratfunc(
        e.registry(),
        &format!("-(P^2 - 12*{m}*{mm}*S)*(81*{mm}*V - P*S)/(8*(2187*{m}*{mm}^2*V^2 + {m}*S^2*(16*{m}*{mm}*S - P^2) + 9*P*V*(P^2 - 18*{m}*{mm}*S))) + (d-5)*(d-3)*S/(72*V)"),
    )
    .unwrap();
    assert!(check_gauge_claim(&e.op, &claim).unwrap().holds());
}

#[test]
fn lie_words() {
    let rr = build("delta-radial-rho").unwrap();
    let lie = build("delta-radial-lie").unwrap();
    let half = rr.op.scale_rational(&q(1, 2)).embed(lie.registry()).unwrap();
    assert!(lie.op.equals(&half));
    let printed = radial_lie_word(lie.registry(), q(-2, 1)).expand().unwrap();
    assert!(!printed.equals(&half));
    assert!(build("delta-lb-xi").unwrap().op.equals(&build("delta-lb-xi-lie").unwrap().op));
}

#[test]
fn golden_serialization_is_stable() {
    let a = build("delta-radial-rho").unwrap().op.to_canonical_string();
    let b = build("delta-radial-rho").unwrap().op.to_canonical_string();
    assert_eq!(a, b);
    let golden = include_str!("../../../golden/delta-radial-rho.txt");
    assert_eq!(a, golden);
}
