//! Named reduced operators of the four-body problem, transcribed term by term,
//! together with the gauge factor and effective potential each one is claimed
//! to carry.
//!
//! Pair variables are ordered `rho12, rho13, rho14, rho23, rho24, rho34`.
//! A mixed term `c ∂_a ∂_b` is stored with its full coefficient `c`; the
//! metric entry is `c/2`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::gauge::GaugeFactor;
use crate::generators::{Gen, GeneratorExpr};
use crate::geometry::{edges_p, f1, f2, faces_s, mass_edges_p, rho_registry, volume_sq};
use crate::parse::{parse_poly, parse_ratfunc};
use crate::poly::Poly;
use crate::rational::Rational;
use crate::ratfunc::RatFunc;
use crate::registry::Registry;
use crate::scalar::Coeff;

/// Gauge factor `Γ` and potential `V` with `Γ⁻¹ L Γ = Δ_LB − V`, where
/// `Δ_LB` is built from the metric of `L`.
#[derive(Clone, Debug)]
pub struct GaugeClaim {
    pub gauge: GaugeFactor,
    pub potential: RatFunc,
}

/// Outcome of checking a [`GaugeClaim`] against an operator.
#[derive(Clone, Debug)]
pub struct GaugeReport {
    /// Second- and first-order parts of `Γ⁻¹ L Γ` agree with `Δ_LB`.
    pub derivatives_match: bool,
    /// `(Γ⁻¹ L Γ − Δ_LB)|₀ + V`, zero when the claimed potential is right.
    pub potential_residual: RatFunc,
    /// The potential the gauge factor actually produces.
    pub actual_potential: RatFunc,
}

impl GaugeReport {
    pub fn holds(&self) -> bool {
        self.derivatives_match && self.potential_residual.is_zero()
    }
}

/// Conjugates `op` by the claimed gauge and compares with the
/// Laplace–Beltrami operator of its own metric.
pub fn check_gauge_claim(op: &DiffOp, claim: &GaugeClaim) -> Result<GaugeReport> {
    let conj = crate::gauge::gauge_conjugate(op, &claim.gauge)?;
    let lb = crate::metric::laplace_beltrami(&crate::metric::MetricBundle::of(op)?)?;
    let diff = conj.checked_sub(&lb)?;
    let derivatives_match = diff.homogeneous_part(1).is_zero() && diff.homogeneous_part(2).is_zero();
    let mut actual = -diff.zeroth_coeff();
    actual.reduce();
    let mut residual = claim.potential.checked_sub(&actual)?;
    residual.reduce();
    Ok(GaugeReport {
        derivatives_match,
        potential_residual: residual,
        actual_potential: actual,
    })
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub description: &'static str,
    pub op: DiffOp,
    /// Generator word whose expansion is `op`, when the entry is Lie-algebraic
    /// by construction.
    pub generators: Option<GeneratorExpr>,
    pub gauge: Option<GaugeClaim>,
    /// Names of the verification suites that cover this entry.
    pub identities: &'static [&'static str],
}

impl CatalogEntry {
    pub fn registry(&self) -> &Registry {
        self.op.registry()
    }
}

/// Identifier and one-line description of every entry.
pub const ENTRIES: &[(&str, &str)] = &[
    ("delta-radial-rho", "four-body radial Laplacian in squared distances"),
    ("delta-radial-r", "four-body radial Laplacian in distances"),
    ("delta-radial-rho-mass", "radial Laplacian for four unequal masses in squared distances"),
    ("delta-radial-lie", "half radial Laplacian as a word in the affine generators of sl(7)"),
    ("delta-g", "radial Laplacian restricted to functions of (V, S, P)"),
    ("delta-g-d2", "volume-variable operator on the plane, V = 0"),
    ("delta-g-d1", "volume-variable operator on the line, V = S = 0"),
    ("delta-radial-d1", "radial Laplacian for bodies on a line in (P, q1, q2)"),
    ("delta-u", "radial Laplacian restricted to sums of opposite edges"),
    ("delta-p", "radial Laplacian restricted to the perimeter-type variable P"),
    ("delta-g-mass", "volume-variable operator for unequal masses"),
    ("delta-tau-d1", "kinetic operator on the line in elementary symmetric variables"),
    ("delta-rel-d1", "relative Laplacian on the line in x12, x13, x14"),
    ("delta-lb-xi", "relative Laplacian on the line in symmetric variables of x1j"),
    ("delta-lb-xi-lie", "the same operator as a word in the affine generators of sl(4)"),
];

pub fn list() -> impl Iterator<Item = (&'static str, &'static str)> {
    ENTRIES.iter().copied()
}

pub fn build(id: &str) -> Result<CatalogEntry> {
    let description = ENTRIES
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, d)| *d)
        .ok_or_else(|| Error::UnknownEntry(String::from(id)))?;
    let mut e = match id {
        "delta-radial-rho" => radial_rho()?,
        "delta-radial-r" => radial_r()?,
        "delta-radial-rho-mass" => radial_rho_mass()?,
        "delta-radial-lie" => radial_lie()?,
        "delta-g" => delta_g()?,
        "delta-g-d2" => delta_g_d2()?,
        "delta-g-d1" => delta_g_d1()?,
        "delta-radial-d1" => radial_d1()?,
        "delta-u" => delta_u()?,
        "delta-p" => delta_p()?,
        "delta-g-mass" => delta_g_mass()?,
        "delta-tau-d1" => tau_d1()?,
        "delta-rel-d1" => rel_d1()?,
        "delta-lb-xi" => lb_xi()?,
        "delta-lb-xi-lie" => lb_xi_lie()?,
        _ => return Err(Error::UnknownEntry(String::from(id))),
    };
    e.description = description;
    Ok(e)
}

fn entry(id: &'static str, op: DiffOp, identities: &'static [&'static str]) -> CatalogEntry {
    CatalogEntry {
        id,
        description: "",
        op,
        generators: None,
        gauge: None,
        identities,
    }
}

/// Builds an operator from `(derivative, coefficient)` pairs. The derivative
/// is empty for a multiplication term, one name for `∂_a`, or `a,b` for
/// `∂_a ∂_b` (with `a = b` allowed).
pub fn op_from_table(reg: &Registry, table: &[(&str, &str)]) -> Result<DiffOp> {
    op_from_table_over(reg, table)
}

/// [`op_from_table`] over any coefficient field (coefficients may use
/// `sqrt(n)` and `I`).
pub fn op_from_table_over<C: Coeff>(reg: &Registry, table: &[(&str, &str)]) -> Result<DiffOp<C>> {
    let mut op = DiffOp::zero(reg);
    for (deriv, coeff) in table {
        let c: RatFunc<C> = parse_ratfunc(reg, coeff)?;
        let idx: Vec<usize> = if deriv.is_empty() {
            Vec::new()
        } else {
            deriv.split(',').map(|s| reg.require(s.trim())).collect::<Result<_>>()?
        };
        for &i in &idx {
            if i >= reg.n_vars() {
                return Err(Error::UnknownIndeterminate(String::from(reg.name(i))));
            }
        }
        match idx.as_slice() {
            [] => op.add_term(crate::poly::Monomial::one(), c),
            [i] => op.add_first(*i, c),
            [i, j] => op.add_pair(*i, *j, c),
            _ => return Err(Error::Parse(format!("derivative `{}` has order above two", deriv))),
        }
    }
    op.reduce();
    Ok(op)
}

/// Rewrites an expression in `(V, S, P)` and the given parameters as a
/// rational function of squared distances.
pub fn in_rho(rho_reg: &Registry, expr: &str) -> Result<RatFunc> {
    let params: Vec<&str> = rho_reg.param_names().iter().map(|s| s.as_str()).collect();
    let vsp = Registry::new(&["V", "S", "P"], &params);
    let f: RatFunc = parse_ratfunc(&vsp, expr)?;
    let mut images = alloc::vec![volume_sq(rho_reg), faces_s(rho_reg), edges_p(rho_reg)];
    for p in &params {
        images.push(Poly::named(rho_reg, p));
    }
    f.compose(&images)
}

fn ratfunc(reg: &Registry, s: &str) -> Result<RatFunc> {
    parse_ratfunc(reg, s)
}

fn poly(reg: &Registry, s: &str) -> Result<Poly> {
    parse_poly(reg, s)
}

/// Adjacent edge pairs `(a, b, c)`: edges `a` and `b` share a vertex and `c`
/// closes the triangle, grouped by the shared vertex.
pub const ADJACENT: [(&str, &str, &str); 12] = [
    ("rho12", "rho13", "rho23"),
    ("rho12", "rho14", "rho24"),
    ("rho13", "rho14", "rho34"),
    ("rho12", "rho23", "rho13"),
    ("rho12", "rho24", "rho14"),
    ("rho23", "rho24", "rho34"),
    ("rho13", "rho23", "rho12"),
    ("rho13", "rho34", "rho14"),
    ("rho23", "rho34", "rho24"),
    ("rho14", "rho24", "rho12"),
    ("rho14", "rho34", "rho13"),
    ("rho24", "rho34", "rho23"),
];

const NAMES: [&str; 6] = ["rho12", "rho13", "rho14", "rho23", "rho24", "rho34"];

/// Gauge factor `F1^((3-d)/4) F2^(-1/4)` and effective potential of the
/// radial Laplacian.
pub fn radial_gauge_claim(reg: &Registry) -> Result<GaugeClaim> {
    let gauge = GaugeFactor::power(f1(reg), ratfunc(reg, "(3-d)/4")?).with_power(f2(reg), ratfunc(reg, "-1/4")?);
    let potential = in_rho(
        reg,
        "(3*P^2 + 112*S)/(32*(36*V - P*S)) + (d-5)*(d-3)*S/(72*V)",
    )?;
    Ok(GaugeClaim { gauge, potential })
}

fn radial_rho() -> Result<CatalogEntry> {
    let reg = rho_registry(&["d"]);
    let op = op_from_table(
        &reg,
        &[
            ("rho12,rho12", "4*rho12"),
            ("rho13,rho13", "4*rho13"),
            ("rho14,rho14", "4*rho14"),
            ("rho23,rho23", "4*rho23"),
            ("rho24,rho24", "4*rho24"),
            ("rho34,rho34", "4*rho34"),
            ("rho12,rho13", "2*(rho12 + rho13 - rho23)"),
            ("rho12,rho14", "2*(rho12 + rho14 - rho24)"),
            ("rho13,rho14", "2*(rho13 + rho14 - rho34)"),
            ("rho12,rho23", "2*(rho12 + rho23 - rho13)"),
            ("rho12,rho24", "2*(rho12 + rho24 - rho14)"),
            ("rho23,rho24", "2*(rho23 + rho24 - rho34)"),
            ("rho13,rho23", "2*(rho13 + rho23 - rho12)"),
            ("rho13,rho34", "2*(rho13 + rho34 - rho14)"),
            ("rho23,rho34", "2*(rho23 + rho34 - rho24)"),
            ("rho14,rho24", "2*(rho14 + rho24 - rho12)"),
            ("rho14,rho34", "2*(rho14 + rho34 - rho13)"),
            ("rho24,rho34", "2*(rho24 + rho34 - rho23)"),
            ("rho12", "2*d"),
            ("rho13", "2*d"),
            ("rho14", "2*d"),
            ("rho23", "2*d"),
            ("rho24", "2*d"),
            ("rho34", "2*d"),
        ],
    )?;
    let mut e = entry(
        "delta-radial-rho",
        op,
        &["cartesian-oracle", "metric-determinant", "gauge-potential", "s4-invariance", "symmetry"],
    );
    e.gauge = Some(radial_gauge_claim(&reg)?);
    Ok(e)
}

fn radial_r() -> Result<CatalogEntry> {
    let names = ["r12", "r13", "r14", "r23", "r24", "r34"];
    let reg = Registry::new(&names, &["d"]);
    let mut table: Vec<(String, String)> = Vec::new();
    for r in names {
        table.push((format!("{r},{r}"), String::from("1")));
        table.push((String::from(r), format!("(d-1)/{r}")));
    }
    for (a, b, c) in ADJACENT {
        let (a, b, c) = (a.replace("rho", "r"), b.replace("rho", "r"), c.replace("rho", "r"));
        table.push((format!("{a},{b}"), format!("({a}^2 + {b}^2 - {c}^2)/(2*{a}*{b})")));
    }
    let t: Vec<(&str, &str)> = table.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    Ok(entry("delta-radial-r", op_from_table(&reg, &t)?, &["pushforward-r-to-rho", "cartesian-oracle"]))
}

const MASS_PARAMS: [&str; 5] = ["d", "m1", "m2", "m3", "m4"];

fn radial_rho_mass() -> Result<CatalogEntry> {
    let reg = rho_registry(&MASS_PARAMS);
    let inv_mu = |i: usize, j: usize| format!("(m{i} + m{j})/(m{i}*m{j})");
    let mut table: Vec<(String, String)> = Vec::new();
    for (k, (i, j)) in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)].into_iter().enumerate() {
        let v = NAMES[k];
        table.push((format!("{v},{v}"), format!("2*{}*{v}", inv_mu(i, j))));
        table.push((String::from(v), format!("d*{}", inv_mu(i, j))));
    }
    // Each group of three shares the vertex named by the prefactor.
    let groups: [(usize, &[(&str, &str, &str)]); 4] = [
        (1, &ADJACENT[0..3]),
        (2, &ADJACENT[3..6]),
        (3, &ADJACENT[6..9]),
        (4, &ADJACENT[9..12]),
    ];
    for (m, triples) in groups {
        for (a, b, c) in triples {
            table.push((format!("{a},{b}"), format!("(2/m{m})*({a} + {b} - {c})")));
        }
    }
    let t: Vec<(&str, &str)> = table.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let op = op_from_table(&reg, &t)?;
    let mut e = entry(
        "delta-radial-rho-mass",
        op,
        &["cartesian-oracle", "equal-mass-reduction", "metric-determinant", "gauge-potential"],
    );
    e.gauge = Some(mass_radial_gauge_claim(&reg, true)?);
    Ok(e)
}

/// `Σ_i (Π_{j≠i} m_j)·(squared area of the face opposite i)`, i.e. `m·S̃`.
fn mass_faces_times_m(reg: &Registry) -> Result<Poly> {
    let mut acc = Poly::zero(reg);
    for v in 0..4 {
        let mut w = Poly::one(reg);
        for j in 0..4 {
            if j != v {
                w = &w * &Poly::named(reg, &format!("m{}", j + 1));
            }
        }
        acc = &acc + &(&w * &crate::geometry::face_area_sq(reg, v));
    }
    Ok(acc)
}

/// Gauge data for unequal masses. The determinant is
/// `9216 c_m V [P̃ S̃ − 9 M V]` with `V` the squared volume; the volume factor
/// of the gauge is read as `V^(1−d/4)` when `squared_volume` is set and as
/// `V^((1−d/4)/2)` otherwise.
pub fn mass_radial_gauge_claim(reg: &Registry, squared_volume: bool) -> Result<GaugeClaim> {
    let v = volume_sq(reg);
    let pt = mass_edges_p(reg)?;
    let mst = mass_faces_times_m(reg)?;
    let m = poly(reg, "m1*m2*m3*m4")?;
    let big_m = poly(reg, "m1+m2+m3+m4")?;
    // m·(P̃ S̃ − 9 M V) is a polynomial.
    let k = &(&pt * &mst) - &(&(&m * &big_m) * &v).scale_rational(&Rational::from_int(9));
    let vexp = if squared_volume { "-1/4 + 1 - d/4" } else { "-1/4 + (1 - d/4)/2" };
    let gauge = GaugeFactor::power(v.clone(), ratfunc(reg, vexp)?).with_power(k.clone(), ratfunc(reg, "-1/4")?);
    let st = RatFunc::new(mst.clone(), m.clone())?;
    // [3 P̃² + 28 M m S̃] / (32 m (P̃ S̃ − 9 M V)), with m(P̃S̃ − 9MV) = k.
    let num = &pt.pow(2).scale_rational(&Rational::from_int(3)) + &(&big_m * &mst).scale_rational(&Rational::from_int(28));
    let first = RatFunc::new(num, k.scale_rational(&Rational::from_int(32)))?;
    let second = st
        .checked_mul(&ratfunc(reg, "(d-5)*(d-3)/72")?)?
        .checked_div(&RatFunc::from_poly(v))?;
    Ok(GaugeClaim {
        gauge,
        potential: first.checked_add(&second)?,
    })
}

/// For each pair variable, the four pair variables sharing a body with it.
pub const LIE_ADJACENT: [(usize, [usize; 4]); 6] = [
    (0, [1, 2, 3, 4]),
    (1, [0, 2, 3, 5]),
    (2, [0, 1, 4, 5]),
    (3, [0, 1, 4, 5]),
    (4, [0, 2, 3, 5]),
    (5, [1, 2, 3, 4]),
];

/// 1-based triples `(k, l, m)` for the words `J⁰_kl J⁻_m` that carry the
/// third edge of each triangle.
pub const LIE_THIRD: [(usize, usize, usize); 12] = [
    (1, 2, 4),
    (1, 3, 5),
    (2, 1, 4),
    (2, 3, 6),
    (3, 1, 5),
    (3, 2, 6),
    (4, 1, 2),
    (4, 5, 6),
    (5, 4, 6),
    (6, 2, 3),
    (6, 4, 5),
    (5, 1, 3),
];

/// The sl(7) word for `½Δ_radial(ρ)`. `cross` multiplies the twelve terms
/// carrying the third edge of each triangle; `−1` reproduces the operator.
pub fn radial_lie_word(reg: &Registry, cross: Rational) -> GeneratorExpr {
    use Gen::*;
    let mut e = GeneratorExpr::new(reg);
    let two = Rational::from_int(2);
    for i in 0..6 {
        e.push_rational(two.clone(), &[Zero(i, i), Lower(i)]);
    }
    let d = RatFunc::from_poly(Poly::named(reg, "d"));
    for i in 0..6 {
        e.push(d.clone(), &[Lower(i)]);
    }
    for (i, js) in LIE_ADJACENT {
        for j in js {
            e.push_rational(Rational::one(), &[Zero(i, i), Lower(j)]);
        }
    }
    for (k, l, m) in LIE_THIRD {
        e.push_rational(cross.clone(), &[Zero(k - 1, l - 1), Lower(m - 1)]);
    }
    e
}

fn radial_lie() -> Result<CatalogEntry> {
    let reg = rho_registry(&["d", "N"]);
    let g = radial_lie_word(&reg, -Rational::one());
    let op = g.expand()?;
    let mut e = entry("delta-radial-lie", op, &["generator-expansion"]);
    e.generators = Some(g);
    Ok(e)
}

fn vsp_registry(params: &[&str]) -> Registry {
    Registry::new(&["V", "S", "P"], params)
}

fn delta_g() -> Result<CatalogEntry> {
    let reg = vsp_registry(&["d"]);
    let op = op_from_table(
        &reg,
        &[
            ("V,V", "2/9*V*S"),
            ("S,S", "54*V + S*P/2"),
            ("P,P", "8*P"),
            ("S,P", "32*S"),
            ("V,S", "2*V*P"),
            ("V,P", "48*V"),
            ("V", "(d-2)*S/9"),
            ("S", "(d-1)*P/2"),
            ("P", "12*d"),
        ],
    )?;
    let g1 = poly(&reg, "8*V/9")?;
    let g2 = poly(&reg, "S^2*(P^2 - 64*S) - 9*P*V*(P^2 - 72*S) - 34992*V^2")?;
    let gauge = GaugeFactor::power(g1, ratfunc(&reg, "(3-d)/4")?).with_power(g2, ratfunc(&reg, "-1/4")?);
    let potential = ratfunc(
        &reg,
        "(d-5)*(d-3)*S/(81*(8*V/9)) + (P^2 - 48*S)*(324*V - P*S)/(8*(S^2*(P^2 - 64*S) - 9*P*V*(P^2 - 72*S) - 34992*V^2))",
    )?;
    let mut e = entry(
        "delta-g",
        op,
        &["pushforward-volume", "metric-determinant", "gauge-potential", "degeneration"],
    );
    e.gauge = Some(GaugeClaim { gauge, potential });
    Ok(e)
}

fn delta_g_d2() -> Result<CatalogEntry> {
    let reg = Registry::new(&["S", "P"], &[]);
    let op = op_from_table(
        &reg,
        &[("S,S", "S*P/2"), ("P,P", "8*P"), ("S,P", "32*S"), ("S", "P/2"), ("P", "24")],
    )?;
    let gauge = GaugeFactor::power(poly(&reg, "S*(P^2 - 64*S)")?, ratfunc(&reg, "-1/4")?);
    let potential = ratfunc(&reg, "P^3/(32*S*(P^2 - 64*S))")?;
    let mut e = entry("delta-g-d2", op, &["degeneration", "gauge-potential", "metric-determinant"]);
    e.gauge = Some(GaugeClaim { gauge, potential });
    Ok(e)
}

fn delta_g_d1() -> Result<CatalogEntry> {
    let reg = Registry::new(&["P"], &[]);
    let op = op_from_table(&reg, &[("P,P", "8*P"), ("P", "12")])?;
    Ok(entry("delta-g-d1", op, &["degeneration"]))
}

fn radial_d1() -> Result<CatalogEntry> {
    // sq1, sq2 stand for the square roots of q1, q2 (positive for ordered bodies).
    let reg = Registry::new(&["P", "q1", "q2"], &["sq1", "sq2"]);
    let op = op_from_table(
        &reg,
        &[
            ("P,P", "8*P"),
            ("P", "12"),
            ("q1,q1", "4*q1"),
            ("q2,q2", "4*q2"),
            ("q1,q2", "-4*sq1*sq2"),
            ("q1", "2"),
            ("q2", "2"),
            ("P,q1", "16*q1"),
            ("P,q2", "16*q2"),
        ],
    )?;
    Ok(entry("delta-radial-d1", op, &["pushforward-line"]))
}

fn delta_u() -> Result<CatalogEntry> {
    let reg = Registry::new(&["u1", "u2", "u3"], &["d"]);
    // Twice the printed half operator.
    let op = op_from_table(
        &reg,
        &[
            ("u1,u1", "4*u1"),
            ("u2,u2", "4*u2"),
            ("u3,u3", "4*u3"),
            ("u1,u2", "4*(u1 + u2 - u3)"),
            ("u1,u3", "4*(u1 + u3 - u2)"),
            ("u2,u3", "4*(u2 + u3 - u1)"),
            ("u1", "4*d"),
            ("u2", "4*d"),
            ("u3", "4*d"),
        ],
    )?;
    let dpoly = poly(&reg, "32*(u1 + u2 - u3)*(u1 + u3 - u2)*(u2 + u3 - u1)")?;
    let gauge = GaugeFactor::power(dpoly, ratfunc(&reg, "(1-d)/4")?);
    let potential = ratfunc(
        &reg,
        "(d-1)*(d-3)*(u1^2 + u2^2 + u3^2 - 2*(u1*u2 + u1*u3 + u2*u3))/(2*(u1 - u2 - u3)*(u1 + u2 - u3)*(u1 - u2 + u3))",
    )?;
    let mut e = entry("delta-u", op, &["pushforward-u", "metric-determinant", "gauge-potential"]);
    e.gauge = Some(GaugeClaim { gauge, potential });
    Ok(e)
}

fn delta_p() -> Result<CatalogEntry> {
    let reg = Registry::new(&["P"], &["d"]);
    let op = op_from_table(&reg, &[("P,P", "8*P"), ("P", "12*d")])?;
    let gauge = GaugeFactor::power(poly(&reg, "P")?, ratfunc(&reg, "(1-3*d)/4")?);
    let potential = ratfunc(&reg, "3*(d-1)*(3*d-1)/(2*P)")?;
    let mut e = entry("delta-p", op, &["pushforward-p", "gauge-potential"]);
    e.gauge = Some(GaugeClaim { gauge, potential });
    Ok(e)
}

/// `Σ m_i`, `Π m_i` as literal fragments.
const BIG_M: &str = "(m1+m2+m3+m4)";
const SMALL_M: &str = "(m1*m2*m3*m4)";

fn delta_g_mass() -> Result<CatalogEntry> {
    let reg = vsp_registry(&MASS_PARAMS);
    let (mm, m) = (BIG_M, SMALL_M);
    let table: Vec<(String, String)> = alloc::vec![
        (String::from("V,V"), String::from("2/9*V*S")),
        (String::from("S,S"), format!("27*{mm}/(2*{m})*V + S*P/(2*{m})")),
        (String::from("P,P"), format!("2*{mm}*P")),
        (String::from("S,P"), format!("8*{mm}*S")),
        (String::from("V,S"), format!("2*V*P/{m}")),
        (String::from("V,P"), format!("12*{mm}*V")),
        (String::from("V"), String::from("(d-2)*S/9")),
        (String::from("S"), format!("(d-1)*P/(2*{m})")),
        (String::from("P"), format!("3*{mm}*d")),
    ];
    let t: Vec<(&str, &str)> = table.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let op = op_from_table(&reg, &t)?;
    let mut e = entry(
        "delta-g-mass",
        op,
        &["pushforward-volume", "equal-mass-reduction", "metric-determinant", "gauge-potential"],
    );
    e.gauge = Some(mass_volume_gauge_claim(&reg)?);
    Ok(e)
}

/// Polynomial part of the unequal-mass volume-variable determinant:
/// `m(162 M P S V − 2187 M² V² + P² S²) − 16 m² M S³ − 9 P³ V`.
pub fn mass_volume_det_factor(reg: &Registry) -> Result<Poly> {
    let (mm, m) = (BIG_M, SMALL_M);
    poly(
        reg,
        &format!("{m}*(162*{mm}*P*S*V - 2187*{mm}^2*V^2 + P^2*S^2) - 16*{m}^2*{mm}*S^3 - 9*P^3*V"),
    )
}

pub fn mass_volume_gauge_claim(reg: &Registry) -> Result<GaugeClaim> {
    let (mm, m) = (BIG_M, SMALL_M);
    let v = poly(reg, "V")?;
    let gauge = GaugeFactor::power(v, ratfunc(reg, "-1/4 + 1 - d/4")?)
        .with_power(mass_volume_det_factor(reg)?, ratfunc(reg, "-1/4")?);
    let potential = ratfunc(
        reg,
        &format!(
            "(P^2 - 12*{m}*{mm}*S)*(81*{mm}*V - P*S)/(8*(2187*{m}*{mm}^2*V^2 + {m}*S^2*(16*{m}*{mm}*S - P^2) + 9*P*V*(P^2 - 18*{m}*{mm}*S))) + (d-5)*(d-3)*S/(72*V)"
        ),
    )?;
    Ok(GaugeClaim { gauge, potential })
}

fn tau_d1() -> Result<CatalogEntry> {
    let reg = Registry::new(&["Y", "t2", "t3", "t4"], &[]);
    let op = op_from_table(
        &reg,
        &[
            ("Y,Y", "-2"),
            ("t2,t2", "t2"),
            ("t3,t3", "2*t4 - t2^2/2"),
            ("t4,t4", "t2*t4 - 3/8*t3^2"),
            ("t2,t3", "3*t3"),
            ("t2,t4", "4*t4"),
            ("t3,t4", "-t2*t3/2"),
            ("t2", "3/2"),
            ("t4", "t2/4"),
        ],
    )?;
    Ok(entry("delta-tau-d1", op, &["pushforward-line"]))
}

fn rel_d1() -> Result<CatalogEntry> {
    let reg = Registry::new(&["x12", "x13", "x14"], &[]);
    let op = op_from_table(
        &reg,
        &[
            ("x12,x12", "2"),
            ("x13,x13", "2"),
            ("x14,x14", "2"),
            ("x12,x13", "2"),
            ("x12,x14", "2"),
            ("x13,x14", "2"),
        ],
    )?;
    Ok(entry("delta-rel-d1", op, &["pushforward-line"]))
}

fn xi_registry() -> Registry {
    Registry::new(&["xi1", "xi2", "xi3"], &["N"])
}

fn lb_xi() -> Result<CatalogEntry> {
    let reg = xi_registry();
    let op = op_from_table(
        &reg,
        &[
            ("xi1,xi1", "6"),
            ("xi2,xi2", "3*xi1^2 - xi2"),
            ("xi3,xi3", "xi2^2 - xi1*xi3"),
            ("xi1,xi2", "8*xi1"),
            ("xi1,xi3", "4*xi2"),
            ("xi2,xi3", "3*(xi1*xi2 - xi3)"),
            ("xi2", "3"),
            ("xi3", "xi1"),
        ],
    )?;
    Ok(entry("delta-lb-xi", op, &["pushforward-line", "generator-expansion"]))
}

/// The sl(4) word for the symmetric-variable operator on the line.
pub fn xi_lie_word(reg: &Registry) -> GeneratorExpr {
    use Gen::*;
    let mut e = GeneratorExpr::new(reg);
    let words: [(i64, &[Gen]); 11] = [
        (6, &[Lower(0), Lower(0)]),
        (3, &[Zero(0, 1), Zero(0, 1)]),
        (-1, &[Zero(1, 1), Lower(1)]),
        (1, &[Zero(1, 2), Zero(1, 2)]),
        (-1, &[Zero(2, 2), Zero(0, 2)]),
        (8, &[Zero(0, 0), Lower(1)]),
        (4, &[Zero(1, 0), Lower(2)]),
        (3, &[Zero(1, 2), Zero(0, 1)]),
        (-3, &[Zero(2, 1), Lower(2)]),
        (3, &[Lower(1)]),
        (1, &[Zero(0, 2)]),
    ];
    for (c, w) in words {
        e.push_rational(Rational::from_int(c), w);
    }
    e
}

fn lb_xi_lie() -> Result<CatalogEntry> {
    let reg = xi_registry();
    let g = xi_lie_word(&reg);
    let mut e = entry("delta-lb-xi-lie", g.expand()?, &["generator-expansion"]);
    e.generators = Some(g);
    Ok(e)
}

/// Claimed factorization `det g = constant · product` of a metric determinant.
#[derive(Clone, Debug)]
pub struct DeterminantClaim {
    pub product: RatFunc,
    pub printed_constant: Rational,
}

#[derive(Clone, Debug)]
pub struct DeterminantReport {
    pub printed_constant: Rational,
    /// `det / product`, when that ratio is a constant.
    pub found: Option<Rational>,
}

impl DeterminantReport {
    /// The determinant is a constant multiple of the claimed product.
    pub fn factorizes(&self) -> bool {
        self.found.is_some()
    }

    pub fn matches_printed(&self) -> bool {
        self.found.as_ref() == Some(&self.printed_constant)
    }
}

/// Determinant factorization stated for an entry, if any.
pub fn determinant_claim(id: &str) -> Result<Option<DeterminantClaim>> {
    let e = build(id)?;
    let reg = e.registry().clone();
    let claim = |product: RatFunc, c: i64| {
        Ok(Some(DeterminantClaim {
            product,
            printed_constant: Rational::from_int(c),
        }))
    };
    match id {
        "delta-radial-rho" => claim(RatFunc::from_poly(&f1(&reg) * &f2(&reg)), 36864),
        "delta-g" => claim(
            ratfunc(&reg, "(8*V/9)*(S^2*(P^2 - 64*S) - 9*P*V*(P^2 - 72*S) - 34992*V^2)")?,
            1,
        ),
        "delta-g-d2" => claim(ratfunc(&reg, "S*(P^2 - 64*S)")?, 1),
        "delta-u" => claim(ratfunc(&reg, "(u1 + u2 - u3)*(u1 + u3 - u2)*(u2 + u3 - u1)")?, 32),
        "delta-radial-rho-mass" => {
            // c_m V [P̃ S̃ − 9 M V] with c_m = M/m², S̃ = (m S̃)/m
            let m = poly(&reg, SMALL_M)?;
            let big_m = poly(&reg, BIG_M)?;
            let v = volume_sq(&reg);
            let bracket = &(&mass_edges_p(&reg)? * &mass_faces_times_m(&reg)?)
                - &(&(&m * &big_m) * &v).scale_rational(&Rational::from_int(9));
            let num = &(&big_m * &v) * &bracket;
            claim(RatFunc::new(num, m.pow(3))?, 9216)
        }
        "delta-g-mass" => {
            let num = &poly(&reg, &format!("2*{BIG_M}*V/9"))? * &mass_volume_det_factor(&reg)?;
            claim(RatFunc::new(num, poly(&reg, SMALL_M)?.pow(2))?, 1)
        }
        _ => Ok(None),
    }
}

/// Generic rational sample points for a registry.
fn sample_points(reg: &Registry) -> Vec<Vec<Rational>> {
    (0..3i64)
        .map(|s| {
            (0..reg.len() as i64)
                .map(|i| Rational::new(7 + 3 * i + 11 * s, 5 + 2 * i + s))
                .collect()
        })
        .collect()
}

/// Computes the metric determinant of an entry and compares it with the
/// stated factorization.
pub fn certify_determinant(id: &str) -> Result<Option<DeterminantReport>> {
    let Some(claim) = determinant_claim(id)? else {
        return Ok(None);
    };
    let e = build(id)?;
    let mb = crate::metric::MetricBundle::of(&e.op)?;
    let cert = crate::metric::certify_ratio(&mb.det, &claim.product, &sample_points(e.registry()))?;
    Ok(Some(DeterminantReport {
        printed_constant: claim.printed_constant,
        found: if cert.holds { cert.constant } else { None },
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_builds() {
        for (id, _) in list() {
            let e = build(id).unwrap();
            assert_eq!(e.id, id);
            assert!(!e.op.is_zero());
        }
        assert!(matches!(build("nope"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn no_opposite_cross_terms() {
        let e = build("delta-radial-rho").unwrap();
        for (a, b) in [(0, 5), (1, 4), (2, 3)] {
            assert!(e.op.pair_coeff(a, b).is_zero());
        }
    }

    #[test]
    fn du_on_u1() {
        let e = build("delta-u").unwrap();
        let u1 = Poly::named(e.registry(), "u1");
        assert_eq!(e.op.apply_poly(&u1).unwrap(), ratfunc(e.registry(), "4*d").unwrap());
    }
}
