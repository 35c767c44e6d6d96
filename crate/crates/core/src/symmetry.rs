//! First- and second-order symmetries of the four-body radial Laplacian:
//! the three-parameter family `L(a,b,c)`, its `so(3)` basis, ladder
//! multiplets and the data needed for rank and eigenform tests.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::catalog::op_from_table_over;
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::geometry::rho_registry;
use crate::linalg;
use crate::poly::{Monomial, Poly};
use crate::rational::{q, Rational};
use crate::ratfunc::RatFunc;
use crate::registry::Registry;
use crate::scalar::{Coeff, Surd};

/// Coefficient of `ρ_k` in each `∂` slot as a linear form in `(a, b, c)`.
/// Slots and `ρ` indices follow `rho12, rho13, rho14, rho23, rho24, rho34`.
type LinearForm = (usize, [Rational; 3]);

fn l_table() -> [(usize, Vec<LinearForm>); 6] {
    let f = |a: (i64, i64), b: (i64, i64), c: (i64, i64)| [q(a.0, a.1), q(b.0, b.1), q(c.0, c.1)];
    let neg = |x: [Rational; 3]| x.map(|v| -v);
    let d13a = f((3, 2), (7, 2), (3, 1));
    let d13b = f((3, 2), (3, 2), (1, 1));
    let d23a = f((1, 2), (-1, 2), (-1, 1));
    let d23b = f((3, 2), (5, 2), (3, 1));
    let d14 = f((1, 1), (3, 1), (3, 1));
    let d14c = f((0, 1), (0, 1), (1, 1));
    let d24a = f((1, 1), (2, 1), (1, 1));
    let d24b = f((2, 1), (3, 1), (3, 1));
    let d34a = f((1, 2), (5, 2), (2, 1));
    let d34b = f((3, 2), (3, 2), (2, 1));
    [
        (
            0,
            alloc::vec![
                (1, f((1, 1), (0, 1), (0, 1))),
                (2, f((0, 1), (1, 1), (0, 1))),
                (3, f((-1, 1), (0, 1), (0, 1))),
                (4, f((0, 1), (-1, 1), (0, 1))),
            ],
        ),
        (1, alloc::vec![(2, d13a.clone()), (0, neg(d13b.clone())), (3, d13b), (5, neg(d13a))]),
        (3, alloc::vec![(0, d23a.clone()), (1, neg(d23a)), (4, d23b.clone()), (5, neg(d23b))]),
        (2, alloc::vec![(0, d14c.clone()), (1, neg(d14.clone())), (4, neg(d14c)), (5, d14)]),
        (4, alloc::vec![(0, d24a.clone()), (2, neg(d24a)), (3, neg(d24b.clone())), (5, d24b)]),
        (5, alloc::vec![(1, d34a.clone()), (2, neg(d34a)), (3, d34b.clone()), (4, neg(d34b))]),
    ]
}

/// The first-order operator `L(a,b,c)` on a registry whose first six
/// variables are the squared distances; `a, b, c` may be constants or
/// parameter polynomials of that registry.
pub fn l_operator<C: Coeff>(reg: &Registry, a: &Poly<C>, b: &Poly<C>, c: &Poly<C>) -> DiffOp<C> {
    let mut op = DiffOp::zero(reg);
    for (slot, forms) in l_table() {
        let mut coeff = Poly::zero(reg);
        for (k, w) in forms {
            let lin = &(&a.scale(&C::from_rational(w[0].clone())) + &b.scale(&C::from_rational(w[1].clone())))
                + &c.scale(&C::from_rational(w[2].clone()));
            coeff = &coeff + &(&lin * &Poly::var(reg, k));
        }
        op.add_first(slot, RatFunc::from_poly(coeff));
    }
    op.reduce();
    op
}

/// `L(a,b,c)` with formal parameters on the registry `rho.. ; d, a, b, c`.
pub fn l_formal() -> DiffOp {
    let reg = rho_registry(&["d", "a", "b", "c"]);
    let p = |n: &str| Poly::named(&reg, n);
    l_operator(&reg, &p("a"), &p("b"), &p("c"))
}

/// Registry of the radial Laplacian and its symmetries.
pub fn radial_registry() -> Registry {
    rho_registry(&["d"])
}

fn surd_const(reg: &Registry, c: Rational, radicand: i64) -> Poly<Surd> {
    Poly::constant(reg, Surd::sqrt_times(c, radicand))
}

/// `J1, J2, J3` with `[J1,J2] = J3` and cyclic.
pub fn so3_basis() -> [DiffOp<Surd>; 3] {
    let reg = radial_registry();
    let s = |c: Rational, r: i64| surd_const(&reg, c, r);
    let j1 = l_operator(&reg, &s(q(2, 35), 35), &s(q(0, 1), 35), &s(q(-3, 35), 35));
    let j2 = l_operator(&reg, &s(q(-17, 420), 210), &s(q(35, 420), 210), &s(q(-27, 420), 210));
    let j3 = l_operator(&reg, &s(q(5, 12), 6), &s(q(1, 12), 6), &s(q(-1, 4), 6));
    [j1, j2, j3]
}

/// `(J⁰, J⁺, J⁻) = (iJ3, −J2 + iJ1, J2 + iJ1)`.
pub fn sl2_basis() -> Result<[DiffOp<Surd>; 3]> {
    let [j1, j2, j3] = so3_basis();
    let reg = j1.registry().clone();
    let i = RatFunc::constant(&reg, Surd::i());
    let j0 = j3.scale(&i);
    let ij1 = j1.scale(&i);
    let jp = ij1.checked_sub(&j2)?;
    let jm = ij1.checked_add(&j2)?;
    Ok([j0, jp, jm])
}

/// Radial Laplacian with coefficients in the radical extension.
pub fn radial_surd() -> Result<DiffOp<Surd>> {
    let e = crate::catalog::build("delta-radial-rho")?;
    Ok(surd_op(&e.op))
}

/// The published `ℓ = 2`, `m = 2` second-order operator, transcribed with
/// full coefficients on mixed derivatives. It does not commute with the
/// radial Laplacian (under either mixed-derivative convention); see
/// [`derived_f22`] for the element that does.
pub fn printed_f22() -> Result<DiffOp<Surd>> {
    let reg = radial_registry();
    let s6 = "sqrt(6)";
    let table: Vec<(&str, alloc::string::String)> = alloc::vec![
        ("rho13,rho13", format!("-2*rho13")),
        ("rho34,rho13", format!("rho13 + rho34 - rho14")),
        ("rho23,rho23", format!("-(63 + 46*I*{s6})/33*rho23")),
        ("rho12", format!("-(3 - 2*I*{s6})/6*d")),
        ("rho13,rho12", format!("(5 + 4*I*{s6})/11*(rho13 + rho12 - rho23)")),
        ("rho14,rho14", format!("-(13 + 6*I*{s6})/11*rho14")),
        ("rho34,rho12", format!("(5 + 4*I*{s6})/11*(rho13 - rho14 - rho23 + rho24)")),
        ("rho24,rho14", format!("(13 + 6*I*{s6})/11*(rho12 - rho14 - rho24)")),
        ("rho23,rho14", format!("rho12 - rho13 - rho24 + rho34")),
        ("rho14,rho13", format!("-(rho13 + rho14 - rho34)")),
        ("rho23", format!("-(63 + 46*I*{s6})/66*d")),
        ("rho24,rho13", format!("(4 + I*{s6})/3*(rho12 - rho14 - rho23 + rho34)")),
        ("rho12,rho12", format!("(3 - 2*I*{s6})/3*rho12")),
        ("rho13", format!("-d")),
        ("rho34,rho24", format!("-(3 - 2*I*{s6})/11*(rho23 - rho34 - rho24)")),
        ("rho23,rho13", format!("(27 + 4*I*{s6})/11*(rho12 - rho13 - rho23)")),
        ("rho24,rho23", format!("-(15 + 34*I*{s6})/33*(rho23 + rho24 - rho34)")),
        ("rho34,rho34", format!("-(13 + 6*I*{s6})/11*rho34")),
        ("rho34,rho14", format!("2*(1 + 3*I*{s6})/11*(rho13 - rho14 - rho34)")),
        ("rho24,rho12", format!("(3 - 2*I*{s6})/3*(rho12 - rho14 + rho24)")),
        ("rho24", format!("-(3 + 20*I*{s6})/33*d")),
        ("rho34,rho23", format!("-4*(4 + I*{s6})/11*(rho23 + rho34 - rho24)")),
        ("rho34", format!("-(13 + 6*I*{s6})/22*d")),
        ("rho24,rho24", format!("-2*(3 + 20*I*{s6})/33*rho24")),
        ("rho23,rho12", format!("2*(9 - 17*I*{s6})/33*(rho12 - rho13 + rho23)")),
        ("rho14", format!("(13 + 6*I*{s6})/22*d")),
    ];
    let t: Vec<(&str, &str)> = table.iter().map(|(a, b)| (*a, b.as_str())).collect();
    op_from_table_over(&reg, &t)
}

/// Multiplet `f_ℓ, f_{ℓ-1}, …, f_{-ℓ}` generated from a highest-weight seed by
/// `J⁻ f_m = √((ℓ+m)(ℓ−m+1)) f_{m−1}` under the adjoint action.
pub fn ladder(seed: &DiffOp<Surd>, ell: u32) -> Result<Vec<DiffOp<Surd>>> {
    let [j0, _, jm] = sl2_basis()?;
    let reg = seed.registry().clone();
    let ell_c = RatFunc::constant(&reg, Surd::rational(Rational::from_int(ell as i64)));
    if !j0.commutator(seed)?.equals(&seed.scale(&ell_c)) {
        return Err(Error::NotAnEigenvector(format!("seed is not of weight {}", ell)));
    }
    let mut out = alloc::vec![seed.clone()];
    let l = ell as i64;
    for m in (-l + 1..=l).rev() {
        let cur = out.last().expect("seed pushed");
        let factor = (l + m) * (l - m + 1);
        let inv = Surd::sqrt(factor).try_inv().expect("nonzero factor");
        let next = jm.commutator(cur)?.scale(&RatFunc::constant(&reg, inv));
        out.push(next);
    }
    Ok(out)
}

/// Weight of `f` under `ad J⁰`, if it is an eigenvector with integer weight
/// in `-8..=8`.
pub fn weight(f: &DiffOp<Surd>) -> Result<Option<i64>> {
    let [j0, _, _] = sl2_basis()?;
    let c = j0.commutator(f)?;
    let reg = f.registry().clone();
    for m in -8..=8 {
        let s = f.scale(&RatFunc::constant(&reg, Surd::rational(Rational::from_int(m))));
        if c.equals(&s) {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

fn surd_op(op: &DiffOp) -> DiffOp<Surd> {
    op.map_coeffs(|c: &Rational| Surd::rational(c.clone()))
}

/// Coefficient vector of a polynomial-coefficient operator, indexed by
/// `(derivative, monomial)` keys shared across calls.
fn flatten<C: Coeff>(op: &DiffOp<C>, keys: &mut BTreeMap<(Monomial, Monomial), usize>) -> Result<Vec<(usize, C)>> {
    let mut out = Vec::new();
    for (m, c) in op.terms() {
        let p = c
            .to_poly()
            .ok_or_else(|| Error::Inconsistent(String::from("expected polynomial coefficients")))?;
        for (pm, pc) in p.terms() {
            let n = keys.len();
            let idx = *keys.entry((m.clone(), pm.clone())).or_insert(n);
            out.push((idx, pc.clone()));
        }
    }
    Ok(out)
}

/// Basis of `{x : Σ x_k T(b_k) = 0}` for a linear map `T` on operators.
fn kernel<C: Coeff>(basis: &[DiffOp<C>], t: impl Fn(&DiffOp<C>) -> Result<DiffOp<C>>) -> Result<Vec<Vec<C>>> {
    let mut keys = BTreeMap::new();
    let cols: Vec<_> = basis.iter().map(|b| flatten(&t(b)?, &mut keys)).collect::<Result<_>>()?;
    let mut m = alloc::vec![alloc::vec![C::zero(); basis.len()]; keys.len()];
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col {
            m[*i][j] = m[*i][j].add(c);
        }
    }
    Ok(linalg::nullspace(&m))
}

fn combine<C: Coeff>(reg: &Registry, basis: &[DiffOp<C>], x: &[C]) -> Result<DiffOp<C>> {
    let mut acc = DiffOp::zero(reg);
    for (b, c) in basis.iter().zip(x) {
        if !c.is_zero() {
            acc = acc.checked_add(&b.scale(&RatFunc::constant(reg, c.clone())))?;
        }
    }
    acc.reduce();
    Ok(acc)
}

/// All symmetries of the radial Laplacian whose second-order coefficients
/// are linear in `ρ` and whose first-order coefficients are affine in `d`,
/// found by solving the commutator equations exactly.
pub fn d1_space() -> Result<Vec<DiffOp>> {
    let lap = crate::catalog::build("delta-radial-rho")?.op;
    let reg = lap.registry().clone();
    let n = reg.n_vars();
    let mut ansatz = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                let mut e = DiffOp::zero(&reg);
                e.add_pair(i, j, RatFunc::var(&reg, k));
                ansatz.push(e);
            }
        }
    }
    for i in 0..n {
        for c in [RatFunc::named(&reg, "d"), RatFunc::one(&reg)] {
            let mut e = DiffOp::zero(&reg);
            e.add_first(i, c);
            ansatz.push(e);
        }
    }
    kernel(&ansatz, |b| lap.commutator(b))?
        .iter()
        .map(|x| combine(&reg, &ansatz, x))
        .collect()
}

/// The weight-2 element of the symmetry space [`d1_space`], normalized so the
/// coefficient of `d ∂_{ρ13}` is `−1` (as in the published display).
pub fn derived_f22() -> Result<DiffOp<Surd>> {
    let space: Vec<DiffOp<Surd>> = d1_space()?.iter().map(surd_op).collect();
    let reg = radial_registry();
    let [j0, _, _] = sl2_basis()?;
    let two = RatFunc::constant(&reg, Surd::rational(q(2, 1)));
    let w = kernel(&space, |b| j0.commutator(b)?.checked_sub(&b.scale(&two)))?;
    if w.len() != 1 {
        return Err(Error::Inconsistent(format!("weight-2 space has dimension {}", w.len())));
    }
    let f = combine(&reg, &space, &w[0])?;
    let d = reg.require("d")?;
    let c13 = f.first_coeff(1).to_poly().map(|p| p.coeff(&Monomial::var(d))).unwrap_or_else(Surd::zero);
    let s = c13
        .neg()
        .try_inv()
        .ok_or_else(|| Error::Inconsistent(String::from("weight-2 element has no d ∂13 term")))?;
    Ok(f.scale(&RatFunc::constant(&reg, s)))
}

/// The six elements `Δ_radial, f_2, …, f_{-2}` spanning the symmetries whose
/// second-order part is linear in `ρ`, with the multiplet generated from
/// [`derived_f22`].
pub fn d1_basis() -> Result<Vec<DiffOp<Surd>>> {
    let mut v = alloc::vec![radial_surd()?];
    v.extend(ladder(&derived_f22()?, 2)?);
    Ok(v)
}

/// Principal symbol `Σ g^{ij}(ρ) p_i p_j` gradient with respect to `(ρ, p)`
/// at a point, for the rank test of algebraic independence.
pub fn symbol_gradient(op: &DiffOp<Surd>, rho: &[Surd], p: &[Surd]) -> Result<Vec<Surd>> {
    let reg = op.registry();
    let n = reg.n_vars();
    let g = op.metric();
    let mut point: Vec<Surd> = rho.to_vec();
    point.resize(reg.len(), Surd::zero());
    let mut grad = Vec::with_capacity(2 * n);
    for l in 0..n {
        let mut acc = Surd::zero();
        for i in 0..n {
            for j in 0..n {
                let v = g[i][j].derivative(l).eval(&point)?;
                acc = acc.add(&v.mul(&p[i]).mul(&p[j]));
            }
        }
        grad.push(acc);
    }
    for l in 0..n {
        let mut acc = Surd::zero();
        for j in 0..n {
            let v = g[l][j].eval(&point)?;
            acc = acc.add(&v.mul(&p[j]));
        }
        grad.push(acc.add(&acc));
    }
    Ok(grad)
}

/// Rank of the symbol gradients of `ops` at one point.
pub fn symbol_rank(ops: &[DiffOp<Surd>], rho: &[Surd], p: &[Surd]) -> Result<usize> {
    let rows: Vec<Vec<Surd>> = ops.iter().map(|o| symbol_gradient(o, rho, p)).collect::<Result<_>>()?;
    Ok(linalg::rank(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_is_linear_and_vanishes_at_zero() {
        let reg = radial_registry();
        let z = Poly::<Rational>::zero(&reg);
        assert!(l_operator(&reg, &z, &z, &z).is_zero());
        let c = |x: i64| Poly::<Rational>::from_int(&reg, x);
        let lhs = l_operator(&reg, &c(3), &c(1), &c(2));
        let rhs = l_operator(&reg, &c(1), &c(1), &c(2)).checked_add(&l_operator(&reg, &c(2), &z, &z)).unwrap();
        assert!(lhs.equals(&rhs));
    }

    #[test]
    fn casimir_commutes() {
        let [j1, j2, j3] = so3_basis();
        let cas = j1
            .compose(&j1)
            .checked_add(&j2.compose(&j2))
            .unwrap()
            .checked_add(&j3.compose(&j3))
            .unwrap();
        for j in [&j1, &j2, &j3] {
            assert!(cas.commutator(j).unwrap().is_zero());
        }
    }
}
