use fourbody::dynamics::*;
use fourbody::model::{Model, Potential, Space};
use fourbody_core::geometry::volume_vars_at;
use fourbody_core::{q, Rational};

const REGULAR: [f64; 6] = [1.0; 6];
const MOMENTA: [f64; 6] = [0.05, -0.03, 0.02, 0.04, -0.01, 0.03];

/// Harmonic confinement with the effective potential, which keeps the
/// motion away from flat and collinear configurations.
fn confined() -> ClassicalSystem {
    Model {
        omega: q(1, 2),
        potential: Potential::Harmonic,
        effective: true,
        d: Rational::from_int(6),
        ..Model::default()
    }
    .system()
    .unwrap()
}

fn cfg(dt: f64, steps: usize, method: Method) -> IntegrateConfig {
    IntegrateConfig {
        dt,
        steps,
        method,
        max_step_drift: None,
        record_every: 100,
    }
}

#[test]
fn harmonic_potential_at_unit_edges() {
    let sys = Model::default().system().unwrap();
    assert_eq!(sys.potential(&REGULAR), 48.0);
    assert!(sys.det(&REGULAR) > 0.0);
}

#[test]
fn rk4_conserves_energy() {
    let sys = confined();
    let t = integrate(&sys, &REGULAR, &MOMENTA, &cfg(1e-3, 10_000, Method::Rk4));
    eprintln!("rk4 drift {:e}, stop {:?}", t.max_rel_drift, t.stop);
    assert_eq!(t.stop, Stop::Completed);
    assert!(t.max_rel_drift < 1e-8);
}

#[test]
fn rk4_is_fourth_order() {
    let sys = confined();
    let (drifts, order) = drift_order(&sys, &REGULAR, &MOMENTA, 2e-2, 2.0, Method::Rk4);
    eprintln!("rk4 drifts {drifts:?} order {order}");
    assert!(order >= 3.5);
}

#[test]
fn verlet_is_second_order_and_bounded() {
    let sys = confined();
    let (drifts, order) = drift_order(&sys, &REGULAR, &MOMENTA, 2e-2, 2.0, Method::StormerVerlet);
    eprintln!("verlet drifts {drifts:?} order {order}");
    assert!((1.7..2.5).contains(&order));
    // no secular growth: a run ten times longer drifts about as much
    let short = integrate(&sys, &REGULAR, &MOMENTA, &cfg(5e-3, 2_000, Method::StormerVerlet));
    let long = integrate(&sys, &REGULAR, &MOMENTA, &cfg(5e-3, 20_000, Method::StormerVerlet));
    eprintln!("verlet drift {:e} short, {:e} long", short.max_rel_drift, long.max_rel_drift);
    assert_eq!(long.stop, Stop::Completed);
    assert!(long.max_rel_drift < 2.0 * short.max_rel_drift);
}

#[test]
fn forces_match_finite_differences() {
    let sys = confined();
    let x = [1.1, 0.9, 1.05, 0.95, 1.0, 1.2];
    let h = 1e-6;
    let grad = sys.force_gradient(&x, &MOMENTA);
    for mu in 0..6 {
        let mut xp = x;
        let mut xm = x;
        xp[mu] += h;
        xm[mu] -= h;
        let fd = (sys.energy(&xp, &MOMENTA) - sys.energy(&xm, &MOMENTA)) / (2.0 * h);
        let rel = (fd - grad[mu]).abs() / grad[mu].abs().max(1.0);
        assert!(rel < 1e-5, "component {mu}: {fd} vs {}", grad[mu]);
    }
    let v = sys.velocity(&x, &MOMENTA);
    for a in 0..6 {
        let mut pp = MOMENTA;
        let mut pm = MOMENTA;
        pp[a] += h;
        pm[a] -= h;
        let fd = (sys.energy(&x, &pp) - sys.energy(&x, &pm)) / (2.0 * h);
        assert!((fd - v[a]).abs() < 1e-5 * v[a].abs().max(1.0));
    }
}

#[test]
fn trajectories_reverse() {
    let sys = confined();
    for method in [Method::Rk4, Method::StormerVerlet] {
        let c = cfg(1e-3, 2_000, method);
        let fwd = integrate(&sys, &REGULAR, &MOMENTA, &c);
        let end = fwd.last();
        let flipped: Vec<f64> = end.p.iter().map(|p| -p).collect();
        let back = integrate(&sys, &end.x, &flipped, &c);
        let err = back
            .last()
            .x
            .iter()
            .zip(REGULAR)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "{method:?}: {err:e}");
    }
}

#[test]
fn zero_momentum_at_a_critical_point_stays_put() {
    // the harmonic force alone pushes every edge inward; at zero momentum
    // the state changes only through the potential gradient
    let sys = Model::default().system().unwrap();
    let zero = [0.0; 6];
    let dx = sys.velocity(&REGULAR, &zero);
    assert!(dx.iter().all(|v| *v == 0.0));
    let grad = sys.force_gradient(&REGULAR, &zero);
    assert!(grad.iter().all(|g| (g - 8.0).abs() < 1e-12));
}

#[test]
fn collapse_stops_at_the_boundary() {
    // without the effective potential nothing keeps the tetrahedron from
    // flattening
    let sys = Model::default().system().unwrap();
    let inward = [-1.0; 6];
    let t = integrate(&sys, &REGULAR, &inward, &cfg(1e-3, 100_000, Method::Rk4));
    eprintln!("collapse stop {:?} det {}", t.stop, t.last().det);
    assert!(matches!(t.stop, Stop::Boundary { .. }));
    assert!(sys.in_domain(&t.last().x));
    assert!(t.max_rel_drift < 0.1);
    assert!(t.last().x.iter().all(|v| v.is_finite()));
}

#[test]
fn volume_space_system_builds() {
    let sys = Model {
        space: Space::Volume,
        effective: true,
        d: Rational::from_int(6),
        ..Model::default()
    }
    .system()
    .unwrap();
    assert_eq!(sys.dim(), 3);
    // the regular tetrahedron is a critical point of the volume map, so
    // the metric degenerates there
    assert!(!sys.in_domain(&[1.0 / 72.0, 0.75, 6.0]));
    let rho = [(11, 10), (9, 10), (21, 20), (19, 20), (1, 1), (6, 5)].map(|(a, b)| q(a, b));
    let (v, s, p) = volume_vars_at(&rho);
    let x = [v.to_f64(), s.to_f64(), p.to_f64()];
    assert!(sys.in_domain(&x));
    let plain = Model { space: Space::Volume, ..Model::default() }.system().unwrap();
    assert!((plain.potential(&x) - 8.0 * x[2]).abs() < 1e-12);
}
