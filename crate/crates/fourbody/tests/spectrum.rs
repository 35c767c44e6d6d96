use fourbody::orthogonality::{orthogonality, OrthoConfig, Sampler};
use fourbody::spectrum::{spectrum, write_csv};
use fourbody_core::qes::QesParams;
use fourbody_core::{q, Rational};

fn params(n: u32, a: Rational) -> QesParams {
    QesParams {
        gamma: Rational::zero(),
        omega: Rational::one(),
        a,
        n,
    }
}

#[test]
fn exactly_solvable_levels() {
    let r = spectrum(&params(3, Rational::zero()), 53).unwrap();
    let mult: Vec<usize> = r.levels.iter().map(|l| l.multiplicity).collect();
    assert_eq!(mult, [1, 6, 21, 56]);
    assert_eq!(r.basis_dimension, 84);
    assert_eq!(r.ground_energy, "36");
    let ev: Vec<&str> = r.levels.iter().map(|l| l.eigenvalue_exact.as_str()).collect();
    assert_eq!(ev, ["0", "16", "32", "48"]);
    assert_eq!(r.measured_spacing.as_deref(), Some("16"));
    assert_eq!(r.published_spacing, "12");
    assert_eq!(r.spacing_matches_published, Some(false));
    assert!(r.float_cross_check.unwrap() < 1e-6);
}

#[test]
fn quasi_exact_levels_are_real() {
    for n in 1..=3 {
        let r = spectrum(&params(n, q(1, 10)), 100).unwrap();
        let count: usize = r.levels.iter().map(|l| l.multiplicity).sum();
        assert_eq!(r.non_real, 0);
        assert_eq!(count, r.basis_dimension);
        assert!(r.float_cross_check.unwrap() < 1e-9, "N={n}: {:?}", r.float_cross_check);
        assert!(r.float_max_imaginary.unwrap() < 1e-9);
        // relabelings of the bodies force degenerate multiplets
        assert!(r.levels.iter().any(|l| l.multiplicity == 5));
    }
}

#[test]
fn quasi_exact_intervals_meet_the_requested_precision() {
    let r = spectrum(&params(1, q(1, 3)), 120).unwrap();
    for l in &r.levels {
        if let Some(body) = l.eigenvalue_exact.strip_prefix('[') {
            let (lo, hi) = body.trim_end_matches(']').split_once(", ").unwrap();
            let lo: Rational = lo.parse().unwrap();
            let hi: Rational = hi.parse().unwrap();
            assert!(&hi - &lo <= Rational::one() / &Rational::from_int(2).pow(120));
        }
    }
}

#[test]
fn at_zero_order_the_only_level_is_zero() {
    let r = spectrum(&params(0, q(1, 2)), 64).unwrap();
    assert_eq!(r.levels.len(), 1);
    assert_eq!(r.levels[0].eigenvalue_exact, "0");
}

#[test]
fn spectrum_csv_columns() {
    let r = spectrum(&params(2, Rational::zero()), 53).unwrap();
    let mut buf = Vec::new();
    write_csv(&r, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("level,degree,eigenvalue,energy,multiplicity"));
    assert_eq!(lines.count(), 3);
}

fn ortho(sampler: Sampler, weight: Option<(Rational, Rational)>) -> fourbody::orthogonality::OrthoReport {
    orthogonality(&OrthoConfig {
        gamma: q(1, 2),
        omega: Rational::one(),
        n: 2,
        samples: 1_000_000,
        seed: 11,
        sampler,
        weight,
    })
    .unwrap()
}

#[test]
fn eigenpolynomials_are_orthogonal_across_levels() {
    for sampler in [Sampler::Gaussian, Sampler::Rejection] {
        let r = ortho(sampler, None);
        assert_eq!(r.polys.len(), 28);
        assert!(r.max_cross_level < 3e-3, "{sampler:?}: {}", r.max_cross_level);
        // within a level the monomial-led eigenpolynomials overlap
        assert!(r.max_within_level > 0.1);
        for i in 0..28 {
            assert!((r.ratios[i][i] - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn a_mismatched_weight_is_detected() {
    let r = ortho(Sampler::Gaussian, Some((q(1, 2), q(3, 2))));
    assert!(r.max_cross_level > 0.05, "{}", r.max_cross_level);
    let r = ortho(Sampler::Gaussian, Some((q(3, 2), Rational::one())));
    assert!(r.max_cross_level > 0.05, "{}", r.max_cross_level);
}

#[test]
fn gaussian_sampler_needs_half_integer_gamma() {
    let err = orthogonality(&OrthoConfig {
        gamma: q(1, 3),
        omega: Rational::one(),
        n: 1,
        samples: 10,
        seed: 1,
        sampler: Sampler::Gaussian,
        weight: None,
    });
    assert!(err.is_err());
}
