//! `n`-body radial operators on squared distances and their restriction to
//! the volume variables `V_k` (sum of squared contents of all faces with `k`
//! vertices, `k = 2..n`).
//!
//! The restricted operator is sought in the form
//!
//! ```text
//! Δ_{n,g} = V_n Σ_{i=2}^{n-1} a_i V_i ∂_{i+1}∂_n + Σ_{i=2}^{n} b_i V_i ∂_i∂_2
//!         + Σ_{i=0}^{n-2} e_i (d-i) V_{i+1} ∂_{i+2}
//!         + Σ_{j=1}^{n-3} Σ_{i=1}^{j} (c_ij V_{n+1-i} V_{n-j-2} + f_ij V_{n-i} V_{n-j-1}) ∂_{n-i}∂_{n-j}
//! ```
//!
//! with `V_0 = 0`, `V_1 = 1`, and its constants are solved for exactly.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::geometry::{content_sum, pairs, rho_registry_n};
use crate::linalg;
use crate::poly::{Monomial, Poly};
use crate::pushforward::{pushforward_check, PushforwardReport};
use crate::rational::{q, Rational};
use crate::ratfunc::RatFunc;
use crate::registry::Registry;

/// `Σ_i (1/(2 m_i)) Δ_{x_i}` acting on functions of the `n(n-1)/2` squared
/// distances, for `2 ≤ n ≤ 6`.
pub fn nbody_radial(n: usize, masses: &[Rational]) -> Result<DiffOp> {
    if !(2..=6).contains(&n) {
        return Err(Error::OutOfRange(format!("{} bodies", n)));
    }
    if masses.len() != n || masses.iter().any(|m| m.is_zero()) {
        return Err(Error::OutOfRange(String::from("need one nonzero mass per body")));
    }
    let reg = rho_registry_n(n, &["d"]);
    let pr = pairs(n);
    let idx = |a: usize, b: usize| crate::geometry::pair_index(n, a, b);
    let var = |k: usize| Poly::var(&reg, k);
    let d = Poly::named(&reg, "d");
    let inv: Vec<Rational> = masses.iter().map(|m| m.recip()).collect();
    let mut op = DiffOp::zero(&reg);
    for (k, &(i, j)) in pr.iter().enumerate() {
        let w = &inv[i] + &inv[j];
        op.add_pair(k, k, RatFunc::from_poly(var(k).scale_rational(&(q(2, 1) * &w))));
        op.add_first(k, RatFunc::from_poly(d.scale_rational(&w)));
    }
    // pairs of edges sharing body `v`
    for v in 0..n {
        let others: Vec<usize> = (0..n).filter(|&u| u != v).collect();
        for (x, &a) in others.iter().enumerate() {
            for &b in &others[x + 1..] {
                let (ka, kb, kc) = (idx(v, a), idx(v, b), idx(a, b));
                let c = &(&var(ka) + &var(kb)) - &var(kc);
                op.add_pair(ka, kb, RatFunc::from_poly(c.scale_rational(&(q(2, 1) * &inv[v]))));
            }
        }
    }
    op.reduce();
    Ok(op)
}

/// Registry `V2..Vn ; d`.
pub fn volume_registry(n: usize) -> Registry {
    let vars: Vec<String> = (2..=n).map(|k| format!("V{}", k)).collect();
    Registry::from_names(vars, alloc::vec![String::from("d")])
}

/// `V_k` as polynomials in squared distances, paired with their names.
pub fn volume_images(rho_reg: &Registry, n: usize) -> Result<Vec<(String, Poly)>> {
    (2..=n).map(|k| Ok((format!("V{}", k), content_sum(rho_reg, n, k)?))).collect()
}

/// A constant of the volume-variable template.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slot {
    A(usize),
    B(usize),
    E(usize),
    C(usize, usize),
    F(usize, usize),
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::A(i) => write!(f, "a_{}", i),
            Slot::B(i) => write!(f, "b_{}", i),
            Slot::E(i) => write!(f, "e_{}", i),
            Slot::C(i, j) => write!(f, "c_{},{}", i, j),
            Slot::F(i, j) => write!(f, "f_{},{}", i, j),
        }
    }
}

/// Where a slot's term sits: `(k, l)` for `∂_k∂_l` or `(k, 0)` for `∂_k`
/// (1-based volume indices, `k ≥ 2`), and the coefficient it multiplies.
struct TemplateTerm {
    slot: Slot,
    deriv: (usize, usize),
    coeff: Poly,
}

/// `vars[k - 2]` is the registry index holding `V_k`.
fn template_terms_in(reg: &Registry, n: usize, vars: &[usize]) -> Vec<TemplateTerm> {
    let v = |k: usize| match k {
        0 => Poly::zero(reg),
        1 => Poly::one(reg),
        _ => Poly::var(reg, vars[k - 2]),
    };
    let d = Poly::named(reg, "d");
    let mut out = Vec::new();
    for i in 2..n {
        out.push(TemplateTerm {
            slot: Slot::A(i),
            deriv: (i + 1, n),
            coeff: &v(n) * &v(i),
        });
    }
    for i in 2..=n {
        out.push(TemplateTerm {
            slot: Slot::B(i),
            deriv: (i, 2),
            coeff: v(i),
        });
    }
    for i in 0..=n - 2 {
        let shift = &d - &Poly::from_int(reg, i as i64);
        out.push(TemplateTerm {
            slot: Slot::E(i),
            deriv: (i + 2, 0),
            coeff: &shift * &v(i + 1),
        });
    }
    for j in 1..=n.saturating_sub(3) {
        for i in 1..=j {
            out.push(TemplateTerm {
                slot: Slot::C(i, j),
                deriv: (n - i, n - j),
                coeff: &v(n + 1 - i) * &v(n - j - 2),
            });
            out.push(TemplateTerm {
                slot: Slot::F(i, j),
                deriv: (n - i, n - j),
                coeff: &v(n - i) * &v(n - j - 1),
            });
        }
    }
    out
}

fn template_terms(n: usize) -> Vec<TemplateTerm> {
    let vars: Vec<usize> = (0..n - 1).collect();
    template_terms_in(&volume_registry(n), n, &vars)
}

/// Slot values stated in closed form for every `n`:
/// `a_{n-1} = 2/(n-1)²`, `b_2 = 2n`, `e_0 = n(n-1)`, `e_{j-2} = (n-j+1)/(j-1)²`.
pub fn known_slots(n: usize) -> Vec<(Slot, Rational)> {
    let n_i = n as i64;
    let mut v = alloc::vec![
        (Slot::A(n - 1), q(2, (n_i - 1) * (n_i - 1))),
        (Slot::B(2), q(2 * n_i, 1)),
        (Slot::E(0), q(n_i * (n_i - 1), 1)),
    ];
    for j in 3..=n_i {
        v.push((Slot::E((j - 2) as usize), q(n_i - j + 1, (j - 1) * (j - 1))));
    }
    v
}

/// Assembles the template operator from slot values.
pub fn template_operator(n: usize, values: &BTreeMap<Slot, Rational>) -> DiffOp {
    let vars: Vec<usize> = (0..n - 1).collect();
    template_operator_in(&volume_registry(n), n, &vars, values).expect("volume registry carries d")
}

/// Same as [`template_operator`] on any registry with a parameter `d`, where
/// `vars[k - 2]` is the variable playing `V_k`.
pub fn template_operator_in(
    reg: &Registry,
    n: usize,
    vars: &[usize],
    values: &BTreeMap<Slot, Rational>,
) -> Result<DiffOp> {
    reg.require("d")?;
    if vars.len() != n - 1 || vars.iter().any(|&i| i >= reg.n_vars()) {
        return Err(Error::OutOfRange(String::from("volume variable map")));
    }
    let mut op = DiffOp::zero(reg);
    for t in template_terms_in(reg, n, vars) {
        let c = values.get(&t.slot).cloned().unwrap_or_else(Rational::zero);
        if c.is_zero() {
            continue;
        }
        let coeff = RatFunc::from_poly(t.coeff.scale_rational(&c));
        match t.deriv {
            (k, 0) => op.add_first(vars[k - 2], coeff),
            (k, l) => op.add_pair(vars[k - 2], vars[l - 2], coeff),
        }
    }
    op.reduce();
    Ok(op)
}

#[derive(Clone, Debug)]
pub struct NBodyDerivation {
    pub n: usize,
    pub values: BTreeMap<Slot, Rational>,
    /// Closed-form slot values next to the derived ones.
    pub known: Vec<(Slot, Rational, Rational)>,
    pub op: DiffOp,
    pub certificate: PushforwardReport,
    pub certificate_degree: u32,
}

impl NBodyDerivation {
    pub fn known_agree(&self) -> bool {
        self.known.iter().all(|(_, a, b)| a == b)
    }
}

/// Target coefficients of the restricted operator, as polynomials in squared
/// distances: `Δ V_k` for `∂_k` and `Γ(V_k, V_l)` (doubled off the diagonal)
/// for `∂_k∂_l`, where `Γ(f, g) = ½(Δ(fg) − fΔg − gΔf)`.
fn targets(radial: &DiffOp, images: &[Poly]) -> Result<BTreeMap<(usize, usize), Poly>> {
    let apply = |p: &Poly| -> Result<Poly> {
        radial
            .apply_poly(p)?
            .to_poly()
            .ok_or_else(|| Error::Inconsistent(String::from("non-polynomial image")))
    };
    let lap: Vec<Poly> = images.iter().map(apply).collect::<Result<_>>()?;
    let mut out = BTreeMap::new();
    let m = images.len();
    for k in 0..m {
        out.insert((k + 2, 0), lap[k].clone());
        for l in k..m {
            let prod = apply(&(&images[k] * &images[l]))?;
            let g = &(&prod - &(&images[k] * &lap[l])) - &(&images[l] * &lap[k]);
            let g = if k == l { g.scale_rational(&q(1, 2)) } else { g };
            out.insert((l + 2, k + 2), g);
        }
    }
    Ok(out)
}

fn key(deriv: (usize, usize)) -> (usize, usize) {
    match deriv {
        (k, 0) => (k, 0),
        (k, l) if k >= l => (k, l),
        (k, l) => (l, k),
    }
}

/// Solves for every template constant by matching the restricted operator
/// against the radial operator coefficient by coefficient, then certifies the
/// result on all volume monomials up to `certificate_degree`.
pub fn derive_coefficients(n: usize, certificate_degree: u32) -> Result<NBodyDerivation> {
    if !(3..=5).contains(&n) {
        return Err(Error::OutOfRange(format!("{} bodies", n)));
    }
    let ones = alloc::vec![Rational::one(); n];
    let radial = nbody_radial(n, &ones)?;
    let rreg = radial.registry().clone();
    let named = volume_images(&rreg, n)?;
    let images: Vec<Poly> = named.iter().map(|(_, p)| p.clone()).collect();
    let mut full_images = images.clone();
    full_images.push(Poly::named(&rreg, "d"));
    let target = targets(&radial, &images)?;
    let terms = template_terms(n);

    let mut values = BTreeMap::new();
    for (entry, goal) in &target {
        let local: Vec<&TemplateTerm> = terms.iter().filter(|t| key(t.deriv) == *entry).collect();
        let cols: Vec<Poly> = local
            .iter()
            .map(|t| t.coeff.compose(&full_images))
            .collect::<Result<_>>()?;
        let mut rows: BTreeMap<Monomial, Vec<Rational>> = BTreeMap::new();
        let width = cols.len() + 1;
        for (c, col) in cols.iter().enumerate() {
            for (m, v) in col.terms() {
                rows.entry(*m).or_insert_with(|| alloc::vec![Rational::zero(); width])[c] = v.clone();
            }
        }
        for (m, v) in goal.terms() {
            rows.entry(*m).or_insert_with(|| alloc::vec![Rational::zero(); width])[width - 1] = v.clone();
        }
        let a: Vec<Vec<Rational>> = rows.values().map(|r| r[..width - 1].to_vec()).collect();
        let b: Vec<Rational> = rows.values().map(|r| r[width - 1].clone()).collect();
        let x = linalg::solve(&a, &b).map_err(|_| {
            Error::Inconsistent(format!("no template coefficients reproduce the ∂{:?} entry for n = {}", entry, n))
        })?;
        for (t, xv) in local.iter().zip(x) {
            values.insert(t.slot, xv);
        }
    }
    let op = template_operator(n, &values);
    let phi: Vec<(&str, Poly)> = named.iter().map(|(s, p)| (s.as_str(), p.clone())).collect();
    let certificate = pushforward_check(&radial, &phi, &op, certificate_degree)?;
    let known = known_slots(n)
        .into_iter()
        .map(|(s, v)| {
            let got = values.get(&s).cloned().unwrap_or_else(Rational::zero);
            (s, v, got)
        })
        .collect();
    Ok(NBodyDerivation {
        n,
        values,
        known,
        op,
        certificate,
        certificate_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_bodies() {
        let op = nbody_radial(2, &[Rational::one(), Rational::one()]).unwrap();
        let reg = op.registry().clone();
        let mut expect = DiffOp::zero(&reg);
        expect.add_pair(0, 0, crate::parse::parse_ratfunc(&reg, "4*rho12").unwrap());
        expect.add_first(0, crate::parse::parse_ratfunc(&reg, "2*d").unwrap());
        assert!(op.equals(&expect));
        assert!(nbody_radial(7, &alloc::vec![Rational::one(); 7]).is_err());
    }

    #[test]
    fn template_slot_counts() {
        assert_eq!(template_terms(3).len(), 1 + 2 + 2);
        assert_eq!(template_terms(4).len(), 2 + 3 + 3 + 2);
        assert_eq!(template_terms(5).len(), 3 + 4 + 4 + 6);
    }
}
