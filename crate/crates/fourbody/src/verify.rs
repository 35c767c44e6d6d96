//! The identity suite behind `fourbody verify` and the acceptance target.
//!
//! Each criterion is a list of checks. A check either passes, fails, or only
//! reports a measured number next to a published one. Published forms are
//! evaluated as printed; where they fail, the corrected form is checked
//! alongside so the report shows both.

use std::time::Instant;

use fourbody_core::catalog::{self, build, certify_determinant, check_gauge_claim, in_rho};
use fourbody_core::geometry::pairs;
use fourbody_core::identities::{chain_rules, degenerations, pushforward};
use fourbody_core::nbody::{derive_coefficients, template_operator_in};
use fourbody_core::pushforward::CartesianOracle;
use fourbody_core::qes::{self, QesParams};
use fourbody_core::{parse, q, symmetry, Monomial, Poly, Rational, Registry, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{drift_order, integrate, IntegrateConfig, Method, Stop};
use crate::model::{Model, Potential};
use crate::orthogonality::{orthogonality, OrthoConfig, Sampler};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A measurement shown next to a published value; never fails.
    Reported,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
    /// Serialized counterexample for a failed check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
            witness: None,
        }
    }

    fn reported(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Reported,
            detail: detail.into(),
            witness: None,
        }
    }

    fn witness(mut self, w: impl Into<String>) -> Self {
        if self.status == Status::Fail {
            self.witness = Some(w.into());
        }
        self
    }

    /// A check whose evaluation itself errored counts as failed.
    fn from_result(name: &str, r: Result<Check>) -> Check {
        r.unwrap_or_else(|e| Check::new(name, false, format!("error: {e}")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub number: u32,
    pub suite: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Monte Carlo samples per orthogonality run.
    pub mc_samples: u64,
    /// Random polynomials per dimension for the Cartesian oracle.
    pub oracle_polys: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 7,
            mc_samples: 10_000_000,
            oracle_polys: 20,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub seed: u64,
    pub mc_samples: u64,
    pub oracle_polys: usize,
    pub criteria: Vec<CriterionResult>,
    pub all_pass: bool,
}

/// Suite name and title of each criterion, numbered from 1.
pub const CRITERIA: [(&str, &str); 10] = [
    ("oracle", "Cartesian oracle equivalence"),
    ("determinants", "metric determinant factorizations"),
    ("symmetry", "symmetries of the radial Laplacian"),
    ("lie", "Lie-algebraic forms"),
    ("gauge", "gauge rotations to Laplace-Beltrami form"),
    ("reductions", "volume, u and P reductions"),
    ("qes", "quasi-exactly-solvable sector"),
    ("classical", "classical dynamics"),
    ("nbody", "n-body volume-variable operators"),
    ("degenerations", "degenerate configurations and equal masses"),
];

/// Criterion numbers selected by a suite name: `all`, a number, or a suite name.
pub fn select(suite: &str) -> Option<Vec<u32>> {
    if suite == "all" {
        return Some((1..=10).collect());
    }
    if let Ok(k) = suite.parse::<u32>() {
        return (1..=10).contains(&k).then(|| vec![k]);
    }
    CRITERIA.iter().position(|(s, _)| *s == suite).map(|i| vec![i as u32 + 1])
}

pub fn criterion(k: u32, cfg: &VerifyConfig) -> CriterionResult {
    let start = Instant::now();
    let checks = match k {
        1 => oracle(cfg),
        2 => determinants(),
        3 => symmetries(),
        4 => lie_forms(),
        5 => gauge(),
        6 => reductions(),
        7 => qes_sector(cfg),
        8 => classical(),
        9 => nbody(),
        10 => degenerate(),
        _ => vec![Check::new("criterion", false, format!("no criterion {k}"))],
    };
    let (suite, title) = CRITERIA.get(k as usize - 1).copied().unwrap_or(("?", "?"));
    CriterionResult {
        number: k,
        suite,
        title,
        passed: checks.iter().all(|c| c.status != Status::Fail),
        checks,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs the selected criteria in parallel; results come back in order.
pub fn run(numbers: &[u32], cfg: &VerifyConfig) -> VerifyReport {
    let criteria: Vec<CriterionResult> = numbers.par_iter().map(|&k| criterion(k, cfg)).collect();
    VerifyReport {
        schema_version: SCHEMA_VERSION,
        seed: cfg.seed,
        mc_samples: cfg.mc_samples,
        oracle_polys: cfg.oracle_polys,
        all_pass: criteria.iter().all(|c| c.passed),
        criteria,
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn small_rational(r: &mut ChaCha8Rng) -> Rational {
    let mut n = 0;
    while n == 0 {
        n = r.random_range(-9..=9);
    }
    q(n, r.random_range(1..=5))
}

/// A random polynomial of total degree `≤ 3` in the variables of `reg`.
pub fn random_poly(reg: &Registry, r: &mut ChaCha8Rng) -> Poly {
    let nv = reg.n_vars();
    let mut p = Poly::zero(reg);
    for _ in 0..r.random_range(1..=6) {
        let mut exps = vec![0u32; reg.len()];
        for _ in 0..r.random_range(0..=3) {
            exps[r.random_range(0..nv)] += 1;
        }
        p.add_term(Monomial::from_exponents(&exps), small_rational(r));
    }
    if p.is_zero() {
        p = Poly::var(reg, 0);
    }
    p
}

fn oracle(cfg: &VerifyConfig) -> Vec<Check> {
    let mut checks = Vec::new();
    let eval = |id: &str, dim: usize, masses: Vec<Rational>, stream: u64| -> Result<(usize, Option<String>)> {
        let op = build(id)?.op;
        let oracle = CartesianOracle::new(4, dim, masses, pairs(4));
        let mut r = rng(cfg.seed, stream);
        let polys: Vec<Poly> = (0..cfg.oracle_polys).map(|_| random_poly(op.registry(), &mut r)).collect();
        let residuals: Vec<Result<bool>> = polys
            .par_iter()
            .map(|f| Ok(oracle.residual(&op, f)?.is_zero()))
            .collect();
        let mut ok = 0;
        for (f, res) in polys.iter().zip(residuals) {
            if res? {
                ok += 1;
            } else {
                return Ok((ok, Some(f.to_string())));
            }
        }
        Ok((ok, None))
    };
    let ones = vec![Rational::one(); 4];
    for dim in [3usize, 4, 5] {
        let name = format!("equal masses, d = {dim}");
        let c = eval("delta-radial-rho", dim, ones.clone(), dim as u64).map(|(ok, w)| {
            let c = Check::new(&name, w.is_none(), format!("{ok}/{} random polynomials of degree <= 3 exact", cfg.oracle_polys));
            c.witness(w.unwrap_or_default())
        });
        checks.push(Check::from_result(&name, c));
    }
    let mut r = rng(cfg.seed, 100);
    for k in 0..3u64 {
        let masses: Vec<Rational> = (0..4).map(|_| q(r.random_range(1..=7), r.random_range(1..=4))).collect();
        let shown: Vec<String> = masses.iter().map(|m| m.to_string()).collect();
        let name = format!("masses ({}), d = 3", shown.join(", "));
        let c = eval("delta-radial-rho-mass", 3, masses, 101 + k).map(|(ok, w)| {
            let c = Check::new(&name, w.is_none(), format!("{ok}/{} random polynomials of degree <= 3 exact", cfg.oracle_polys));
            c.witness(w.unwrap_or_default())
        });
        checks.push(Check::from_result(&name, c));
    }
    checks
}

fn determinants() -> Vec<Check> {
    let ids = [
        "delta-radial-rho",
        "delta-g",
        "delta-u",
        "delta-radial-rho-mass",
        "delta-g-mass",
        "delta-g-d2",
    ];
    let results: Vec<_> = ids.par_iter().map(|id| (*id, certify_determinant(id))).collect();
    let mut checks = Vec::new();
    for (id, r) in results {
        let name = format!("{id} determinant");
        let r = match r {
            Ok(Some(r)) => r,
            Ok(None) => {
                checks.push(Check::new(name, false, "no stated factorization"));
                continue;
            }
            Err(e) => {
                checks.push(Check::new(name, false, format!("error: {e}")));
                continue;
            }
        };
        let found = r.found.as_ref().map(|c| c.to_string()).unwrap_or_else(|| "not constant".into());
        match id {
            // only the quotient being constant is asserted; its value is
            // shown against the published one
            "delta-radial-rho" => {
                checks.push(Check::new(
                    format!("{name} / (F1 F2) is constant"),
                    r.factorizes(),
                    format!("quotient {found}"),
                ));
                checks.push(Check::reported(
                    format!("{name} constant"),
                    format!(
                        "computed {found}, published {}{}",
                        r.printed_constant,
                        if r.matches_printed() { "" } else { "; agrees only with F2 written as PS - 36V" }
                    ),
                ));
            }
            // the planar factorization is outside the criterion
            "delta-g-d2" => checks.push(Check::reported(
                name,
                format!("computed constant {found}, published {}", r.printed_constant),
            )),
            _ => checks.push(Check::new(
                name,
                r.matches_printed(),
                format!("computed constant {found}, published {}", r.printed_constant),
            )),
        }
    }
    checks
}

fn symmetries() -> Vec<Check> {
    let mut checks = Vec::new();
    checks.push(Check::from_result(
        "[radial, L(a,b,c)] = 0 with formal a, b, c",
        (|| {
            let l = symmetry::l_formal();
            let lap = build("delta-radial-rho")?.op.embed(l.registry())?;
            Ok(Check::new("[radial, L(a,b,c)] = 0 with formal a, b, c", lap.commutator(&l)?.is_zero(), "exact"))
        })(),
    ));
    checks.push(Check::from_result(
        "so(3) relations",
        (|| {
            let [j1, j2, j3] = symmetry::so3_basis();
            let ok = j1.commutator(&j2)?.equals(&j3) && j2.commutator(&j3)?.equals(&j1) && j3.commutator(&j1)?.equals(&j2);
            let lap = symmetry::radial_surd()?;
            let mut commute = true;
            for j in [&j1, &j2, &j3] {
                commute &= lap.commutator(j)?.is_zero();
            }
            Ok(Check::new(
                "so(3) relations",
                ok && commute,
                format!("[J1,J2]=J3 cyclic: {ok}; each J commutes with the radial Laplacian: {commute}"),
            ))
        })(),
    ));
    let lap = symmetry::radial_surd();
    checks.push(Check::from_result(
        "published second-order symmetry",
        (|| {
            let lap = lap.clone()?;
            let c = lap.commutator(&symmetry::printed_f22()?)?;
            let ok = c.is_zero();
            Ok(Check::new(
                "published second-order symmetry",
                ok,
                if ok { "commutes" } else { "commutator is nonzero; the operator is outside the commutant" },
            )
            .witness(c.to_string()))
        })(),
    ));
    checks.push(Check::from_result(
        "derived second-order symmetry",
        (|| {
            let lap = lap.clone()?;
            let f = symmetry::derived_f22()?;
            let mut ok = lap.commutator(&f)?.is_zero();
            let multiplet = symmetry::ladder(&f, 2)?;
            for g in &multiplet {
                ok &= lap.commutator(g)?.is_zero();
            }
            Ok(Check::new(
                "derived second-order symmetry",
                ok,
                format!("computed in Q(sqrt(-6)); weight {:?}, multiplet of {} commuting operators", symmetry::weight(&f)?, multiplet.len()),
            ))
        })(),
    ));
    checks.push(Check::from_result(
        "D1 basis commutes",
        (|| {
            let b = symmetry::d1_basis()?;
            let mut ok = true;
            for i in 0..b.len() {
                for j in i + 1..b.len() {
                    ok &= b[i].commutator(&b[j])?.is_zero();
                }
            }
            Ok(Check::new("D1 basis commutes", ok, format!("{} operators pairwise", b.len())))
        })(),
    ));
    checks
}

fn lie_forms() -> Vec<Check> {
    let mut checks = Vec::new();
    let radial: Result<(Registry, fourbody_core::DiffOp)> = (|| {
        let rr = build("delta-radial-rho")?;
        let lie = build("delta-radial-lie")?;
        let half = rr.op.scale_rational(&q(1, 2)).embed(lie.registry())?;
        Ok((lie.registry().clone(), half))
    })();
    for (cross, label) in [(q(-2, 1), "published"), (q(-1, 1), "corrected")] {
        let name = format!("{label} sl(7) word equals half the radial Laplacian");
        let c = radial.as_ref().map_err(|e| e.clone()).and_then(|(reg, half)| {
            let w = catalog::radial_lie_word(reg, cross.clone()).expand()?;
            let diff = w.checked_sub(half)?;
            Ok(Check::new(&name, diff.is_zero(), format!("third-edge coefficient {cross}")).witness(diff.to_string()))
        });
        checks.push(Check::from_result(&name, c));
    }
    for (cross, label) in [(q(2, 1), "published"), (q(1, 1), "corrected")] {
        let name = format!("{label} sl(7) form of h equals the algebraic form");
        let c = (|| {
            let reg = qes::qes_registry();
            let h = qes::h_qes(&reg)?;
            let w = qes::half_h_qes_word(&reg, cross.clone())?.expand()?.scale_rational(&q(2, 1));
            let diff = w.checked_sub(&h)?;
            Ok(Check::new(&name, diff.is_zero(), format!("cross coefficient {cross}")).witness(diff.to_string()))
        })();
        checks.push(Check::from_result(&name, c));
    }
    let name = "xi-variable operator";
    let c = (|| {
        let p = pushforward("relative-to-xi")?;
        let rep = p.check()?;
        let lie = build("delta-lb-xi")?.op.equals(&build("delta-lb-xi-lie")?.op);
        Ok(Check::new(
            name,
            rep.all_zero() && lie,
            format!(
                "pushforward exact on {} monomials through degree {}; sl(4) word expands to it: {lie}",
                rep.checked, p.degree
            ),
        )
        .witness(rep.failures.first().map(|w| format!("{}: {}", w.monomial, w.residual)).unwrap_or_default()))
    })();
    checks.push(Check::from_result(name, c));
    checks
}

fn gauge() -> Vec<Check> {
    let jobs: Vec<&str> = vec![
        "delta-radial-rho",
        "delta-g",
        "delta-g-d2",
        "delta-u",
        "delta-p",
        "mass-literal",
        "delta-radial-rho-mass",
        "delta-g-mass",
    ];
    let mut checks: Vec<Vec<Check>> = jobs.par_iter().map(|id| gauge_job(id)).collect();
    checks.iter_mut().flat_map(std::mem::take).collect()
}

fn gauge_job(id: &str) -> Vec<Check> {
    let name = format!("{id} published gauge and potential");
    let r: Result<(catalog::CatalogEntry, catalog::GaugeReport)> = (|| {
        if id == "mass-literal" {
            let e = build("delta-radial-rho-mass")?;
            let claim = catalog::mass_radial_gauge_claim(e.registry(), false)?;
            let r = check_gauge_claim(&e.op, &claim)?;
            return Ok((e, r));
        }
        let e = build(id)?;
        let claim = e.gauge.clone().ok_or_else(|| fourbody_core::Error::UnknownEntry(id.into()))?;
        let r = check_gauge_claim(&e.op, &claim)?;
        Ok((e, r))
    })();
    let (e, r) = match r {
        Ok(x) => x,
        Err(e) => return vec![Check::new(name, false, format!("error: {e}"))],
    };
    let status = |r: &catalog::GaugeReport| {
        format!(
            "derivative parts match: {}; potential residual {}",
            r.derivatives_match,
            if r.potential_residual.is_zero() { "zero" } else { "nonzero" }
        )
    };
    let mut out = Vec::new();
    match id {
        "mass-literal" => out.push(
            Check::new(
                "unequal-mass radial gauge, volume factor read as a power of the volume",
                r.holds(),
                status(&r),
            )
            .witness(r.potential_residual.to_string()),
        ),
        // the catalog carries the squared-volume reading
        "delta-radial-rho-mass" => out.push(
            Check::new(
                "unequal-mass radial gauge, volume factor read as a power of the squared volume",
                r.holds(),
                status(&r),
            )
            .witness(r.potential_residual.to_string()),
        ),
        _ => out.push(Check::new(&name, r.holds(), status(&r)).witness(r.potential_residual.to_string())),
    }
    let corrected = |expr: Result<fourbody_core::RatFunc>, what: &str| {
        let label = format!("{id} corrected potential ({what})");
        Check::from_result(
            &label,
            expr.map(|v| Check::new(&label, r.derivatives_match && r.actual_potential.equals(&v), "exact")),
        )
    };
    let reg = e.registry().clone();
    match id {
        "delta-radial-rho" => out.push(corrected(
            in_rho(&reg, "(3*P^2 + 112*S)/(32*(P*S - 36*V)) + (d-5)*(d-3)*S/(72*V)"),
            "F2 written as PS - 36V",
        )),
        "delta-g-d2" => out.push(corrected(
            parse::parse_ratfunc(&reg, "-P^3/(32*S*(P^2 - 64*S))"),
            "overall sign reversed",
        )),
        "delta-g-mass" => {
            let m = "(m1*m2*m3*m4)";
            let mm = "(m1+m2+m3+m4)";
            out.push(corrected(
                parse::parse_ratfunc(
                    &reg,
                    &format!(
                        "-(P^2 - 12*{m}*{mm}*S)*(81*{mm}*V - P*S)/(8*(2187*{m}*{mm}^2*V^2 + {m}*S^2*(16*{m}*{mm}*S - P^2) + 9*P*V*(P^2 - 18*{m}*{mm}*S))) + (d-5)*(d-3)*S/(72*V)"
                    ),
                ),
                "first term negated",
            ))
        }
        _ => {}
    }
    out
}

fn reductions() -> Vec<Check> {
    let mut checks = Vec::new();
    match chain_rules() {
        Ok(rules) => {
            for c in rules {
                checks.push(
                    Check::new(format!("radial Laplacian of {}", c.name), c.holds(), "equals the stated image")
                        .witness(format!("computed {}, stated {}", c.image, c.stated)),
                );
            }
        }
        Err(e) => checks.push(Check::new("chain rules", false, format!("error: {e}"))),
    }
    let names = ["rho-to-volume", "rho-to-u", "rho-to-p"];
    let reps: Vec<Check> = names
        .par_iter()
        .map(|name| {
            Check::from_result(
                name,
                (|| {
                    let p = pushforward(name)?;
                    let rep = p.check()?;
                    Ok(Check::new(
                        format!("{name} pushforward"),
                        rep.all_zero(),
                        format!("{} monomials through degree {}, {} nonzero residuals", rep.checked, p.degree, rep.failures.len()),
                    )
                    .witness(rep.failures.first().map(|w| format!("{}: {}", w.monomial, w.residual)).unwrap_or_default()))
                })(),
            )
        })
        .collect();
    checks.extend(reps);
    checks
}

fn qes_sector(cfg: &VerifyConfig) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut r = rng(cfg.seed, 200);
    let positive = |r: &mut ChaCha8Rng| q(r.random_range(1..=9), r.random_range(1..=4));
    let draws: Vec<QesParams> = (0..=8u32)
        .map(|n| QesParams {
            gamma: positive(&mut r),
            omega: positive(&mut r),
            a: small_rational(&mut r),
            n,
        })
        .collect();
    let invariance: Vec<Result<bool>> = draws
        .par_iter()
        .map(|p| Ok(qes::qes_matrix(p)?.dim() == qes::qes_dimension(p.n)))
        .collect();
    let mut failed = None;
    for (p, ok) in draws.iter().zip(&invariance) {
        match ok {
            Ok(true) => {}
            Ok(false) => failed = Some(format!("N = {}: wrong basis size", p.n)),
            Err(e) => failed = Some(format!("N = {}, gamma {}, omega {}, A {}: {e}", p.n, p.gamma, p.omega, p.a)),
        }
    }
    checks.push(
        Check::new(
            "h preserves polynomials of degree <= N",
            failed.is_none(),
            "N = 0..8 at random rational gamma, omega, A",
        )
        .witness(failed.unwrap_or_default()),
    );

    let name = "A = 0 triangular with C(k+5,5) multiplicities";
    let c = (|| {
        let mut ok = true;
        for n in 1..=4 {
            let m = qes::qes_matrix(&QesParams {
                gamma: positive(&mut r),
                omega: positive(&mut r),
                a: Rational::zero(),
                n,
            })?;
            ok &= m.is_degree_lowering_or_preserving() && m.is_diagonal_within_degree();
            let levels = qes::es_levels(&m)?;
            ok &= levels.iter().enumerate().all(|(k, l)| l.multiplicity == qes::level_multiplicity(k as u32));
        }
        let m = qes::qes_matrix(&QesParams {
            gamma: Rational::zero(),
            omega: Rational::one(),
            a: Rational::zero(),
            n: 3,
        })?;
        let mult: Vec<usize> = qes::es_levels(&m)?.iter().map(|l| l.multiplicity).collect();
        ok &= mult == [1, 6, 21, 56];
        Ok(Check::new(name, ok, format!("N = 3, omega = 1, gamma = 0: multiplicities {mult:?}")))
    })();
    checks.push(Check::from_result(name, c));

    let name = "ground energy 12 omega (3 + 2 gamma)";
    let c = (|| {
        let reg = qes::qes_registry();
        let symbolic = qes::ground_energy(&reg)?.checked_sub(&parse::parse_ratfunc(&reg, "12*omega*(3 + 2*gamma)")?)?;
        let e0 = QesParams {
            gamma: Rational::zero(),
            omega: Rational::one(),
            a: Rational::zero(),
            n: 0,
        }
        .ground_energy();
        Ok(Check::new(name, symbolic.is_zero() && e0 == Rational::from_int(36), format!("omega = 1, gamma = 0: {e0}")))
    })();
    checks.push(Check::from_result(name, c));

    let name = "level spacing";
    let c = (|| {
        let mut shown = Vec::new();
        for omega in [Rational::one(), q(3, 7)] {
            let m = qes::qes_matrix(&QesParams {
                gamma: q(1, 2),
                omega: omega.clone(),
                a: Rational::zero(),
                n: 2,
            })?;
            let levels = qes::es_levels(&m)?;
            let gap = &levels[1].eigenvalue - &levels[0].eigenvalue;
            shown.push(format!("omega = {omega}: measured {gap} = {} omega, published {}", &gap / &omega, &Rational::from_int(12) * &omega));
        }
        Ok(Check::reported(name, shown.join("; ")))
    })();
    checks.push(Check::from_result(name, c));

    for (sampler, label) in [(Sampler::Gaussian, "gaussian"), (Sampler::Rejection, "rejection")] {
        let name = format!("Gram off-diagonals across levels, {label} sampler");
        let c = orthogonality(&OrthoConfig {
            gamma: q(1, 2),
            omega: Rational::one(),
            n: 2,
            samples: cfg.mc_samples,
            seed: cfg.seed,
            sampler,
            weight: None,
        })
        .map(|rep| {
            Check::new(
                &name,
                rep.max_cross_level < 1e-3,
                format!(
                    "N <= 2, gamma = 1/2, omega = 1, {} samples: max normalized off-diagonal {:.2e} (bound 1e-3)",
                    rep.samples, rep.max_cross_level
                ),
            )
            .witness(format!("{:?}", rep.worst_pair))
        });
        checks.push(Check::from_result(&name, c));
    }
    checks
}

const START: [f64; 6] = [1.0; 6];
const MOMENTA: [f64; 6] = [0.05, -0.03, 0.02, 0.04, -0.01, 0.03];

fn confined(omega: Rational) -> Result<crate::dynamics::ClassicalSystem> {
    Model {
        omega,
        potential: Potential::Harmonic,
        effective: true,
        d: Rational::from_int(6),
        ..Model::default()
    }
    .system()
}

fn classical() -> Vec<Check> {
    let mut checks = Vec::new();
    let cfg = IntegrateConfig {
        dt: 1e-3,
        steps: 10_000,
        method: Method::Rk4,
        max_step_drift: None,
        record_every: usize::MAX,
    };
    let name = "RK4 energy drift over 1e4 steps at dt = 1e-3";
    let c = confined(q(1, 2)).map(|sys| {
        let t = integrate(&sys, &START, &MOMENTA, &cfg);
        Check::new(
            name,
            t.stop == Stop::Completed && t.max_rel_drift < 1e-8,
            format!("omega = 1/2: relative drift {:.2e} (bound 1e-8), stop {:?}", t.max_rel_drift, t.stop),
        )
    });
    checks.push(Check::from_result(name, c));
    let name = "RK4 energy drift at omega = 1";
    let c = confined(Rational::one()).map(|sys| {
        let t = integrate(&sys, &START, &MOMENTA, &cfg);
        Check::reported(name, format!("relative drift {:.2e}; the time scale shrinks as omega grows", t.max_rel_drift))
    });
    checks.push(Check::from_result(name, c));

    let sys = match confined(q(1, 2)) {
        Ok(s) => s,
        Err(e) => {
            checks.push(Check::new("classical system", false, format!("error: {e}")));
            return checks;
        }
    };
    let (drifts, order) = drift_order(&sys, &START, &MOMENTA, 2e-2, 2.0, Method::Rk4);
    checks.push(Check::new(
        "RK4 convergence order under dt halving",
        order >= 3.5,
        format!(
            "order {order:.2} (bound 3.5); drifts {}",
            drifts.iter().map(|d| format!("{d:.2e}")).collect::<Vec<_>>().join(", ")
        ),
    ));

    let x = [1.1, 0.9, 1.05, 0.95, 1.0, 1.2];
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    let grad = sys.force_gradient(&x, &MOMENTA);
    let vel = sys.velocity(&x, &MOMENTA);
    for mu in 0..6 {
        let (mut xp, mut xm) = (x, x);
        xp[mu] += h;
        xm[mu] -= h;
        let fd = (sys.energy(&xp, &MOMENTA) - sys.energy(&xm, &MOMENTA)) / (2.0 * h);
        worst = worst.max((fd - grad[mu]).abs() / grad[mu].abs().max(1.0));
        let (mut pp, mut pm) = (MOMENTA, MOMENTA);
        pp[mu] += h;
        pm[mu] -= h;
        let fd = (sys.energy(&x, &pp) - sys.energy(&x, &pm)) / (2.0 * h);
        worst = worst.max((fd - vel[mu]).abs() / vel[mu].abs().max(1.0));
    }
    checks.push(Check::new(
        "analytic forces against central differences",
        worst < 1e-5,
        format!("max relative difference {worst:.2e} (bound 1e-5)"),
    ));
    checks
}

fn nbody() -> Vec<Check> {
    let runs: Vec<(usize, Result<fourbody_core::nbody::NBodyDerivation>)> =
        [3usize, 4, 5].par_iter().map(|&n| (n, derive_coefficients(n, 3))).collect();
    let mut checks = Vec::new();
    for (n, r) in runs {
        let name = format!("n = {n}");
        let c = r.and_then(|r| {
            let values: Vec<String> = r.values.iter().map(|(s, v)| format!("{s} = {v}")).collect();
            let mut ok = r.certificate.all_zero() && r.known_agree();
            let mut extra = String::new();
            if n == 4 {
                let dg = build("delta-g")?.op;
                let same = template_operator_in(dg.registry(), 4, &[2, 1, 0], &r.values)?.equals(&dg);
                ok &= same;
                extra = format!("; rebuilt operator equals the (V, S, P) operator: {same}");
            }
            Ok(Check::new(
                &name,
                ok,
                format!(
                    "known slots agree: {}; certificate zero on {} monomials through degree {}{extra}; {}",
                    r.known_agree(),
                    r.certificate.checked,
                    r.certificate_degree,
                    values.join(", ")
                ),
            )
            .witness(
                r.certificate
                    .failures
                    .first()
                    .map(|w| format!("{}: {}", w.monomial, w.residual))
                    .unwrap_or_default(),
            ))
        });
        checks.push(Check::from_result(&name, c));
    }
    checks
}

fn degenerate() -> Vec<Check> {
    match degenerations() {
        Ok(ds) => ds
            .into_iter()
            .map(|d| {
                let detail = match &d.restricted {
                    Ok(_) => String::from("exact"),
                    Err(e) => format!("restriction failed: {e}"),
                };
                let w = d.restricted.as_ref().map(|op| op.to_string()).unwrap_or_default();
                Check::new(d.name, d.holds(), detail).witness(w)
            })
            .collect(),
        Err(e) => vec![Check::new("degenerations", false, format!("error: {e}"))],
    }
}
