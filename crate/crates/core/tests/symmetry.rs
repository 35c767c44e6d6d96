use fourbody_core::scalar::Surd;
use fourbody_core::symmetry::*;
use fourbody_core::{catalog, linalg, q, RatFunc, Rational};

#[test]
fn l_family_commutes_with_formal_parameters() {
    let lap = catalog::build("delta-radial-rho").unwrap().op;
    let l = l_formal();
    let lap = lap.embed(l.registry()).unwrap();
    assert!(lap.commutator(&l).unwrap().is_zero());
}

#[test]
fn so3_relations_and_independence() {
    let [j1, j2, j3] = so3_basis();
    assert!(j1.commutator(&j2).unwrap().equals(&j3));
    assert!(j2.commutator(&j3).unwrap().equals(&j1));
    assert!(j3.commutator(&j1).unwrap().equals(&j2));
    let lap = radial_surd().unwrap();
    for j in [&j1, &j2, &j3] {
        assert!(lap.commutator(j).unwrap().is_zero());
    }
    // coefficient rows over the first-order slots
    let rows: Vec<Vec<Surd>> = [&j1, &j2, &j3]
        .iter()
        .map(|j| {
            (0..6)
                .flat_map(|s| {
                    let p = j.first_coeff(s).to_poly().unwrap();
                    (0..6).map(move |k| p.coeff(&fourbody_core::Monomial::var(k)))
                })
                .collect()
        })
        .collect();
    assert_eq!(linalg::rank(&rows), 3);
}

#[test]
fn printed_second_order_operator_is_not_a_symmetry() {
    let lap = radial_surd().unwrap();
    let f = printed_f22().unwrap();
    assert!(!lap.commutator(&f).unwrap().is_zero());
}

#[test]
fn d1_space_has_dimension_six() {
    assert_eq!(d1_space().unwrap().len(), 6);
}

#[test]
fn derived_multiplet() {
    let lap = radial_surd().unwrap();
    let f = derived_f22().unwrap();
    assert!(lap.commutator(&f).unwrap().is_zero());
    assert_eq!(weight(&f).unwrap(), Some(2));
    let m = ladder(&f, 2).unwrap();
    assert_eq!(m.len(), 5);
    for (k, g) in m.iter().enumerate() {
        assert!(lap.commutator(g).unwrap().is_zero());
        assert_eq!(weight(g).unwrap(), Some(2 - k as i64));
    }
    // J⁺ f_1 = 2 f_2 closes the multiplet from below
    let [_, jp, _] = sl2_basis().unwrap();
    let reg = f.registry().clone();
    let back = jp.commutator(&m[1]).unwrap();
    assert!(back.equals(&f.scale(&RatFunc::constant(&reg, Surd::rational(q(2, 1))))));
}

#[test]
fn ladder_rejects_non_eigenvector() {
    let [j1, _, _] = so3_basis();
    let lap = radial_surd().unwrap();
    let mixed = lap.checked_add(&j1).unwrap();
    assert!(ladder(&mixed, 2).is_err());
    assert_eq!(ladder(&lap, 0).unwrap().len(), 1);
}

#[test]
fn d1_basis_commutes_and_is_independent() {
    let b = d1_basis().unwrap();
    assert_eq!(b.len(), 6);
    for i in 0..6 {
        for j in i + 1..6 {
            assert!(b[i].commutator(&b[j]).unwrap().is_zero(), "pair {} {}", i, j);
        }
    }
    let rho: Vec<Surd> = [3, 4, 5, 4, 5, 6].iter().map(|&x| Surd::rational(Rational::from_int(x))).collect();
    let p: Vec<Surd> = [1, -2, 3, 5, -7, 11].iter().map(|&x| Surd::rational(Rational::from_int(x))).collect();
    assert_eq!(symbol_rank(&b, &rho, &p).unwrap(), 6);
}
