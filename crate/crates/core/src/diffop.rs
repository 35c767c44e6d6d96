//! Linear differential operators with rational-function coefficients.
//!
//! An operator is a finite sum `Σ_α c_α ∂^α` over multi-indices `α` in the
//! registry variables (parameters are never differentiated). Coefficients act
//! by multiplication on the left of the derivative.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::rational::Rational;
use crate::ratfunc::RatFunc;
use crate::registry::Registry;
use crate::scalar::Coeff;

#[derive(Clone)]
pub struct DiffOp<C: Coeff = Rational> {
    reg: Registry,
    terms: BTreeMap<Monomial, RatFunc<C>>,
}

fn binom(n: u32, k: u32) -> i64 {
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) as i64 / (i + 1) as i64;
    }
    r
}

/// Multi-index of a pair derivative `∂_i ∂_j` (`i == j` allowed).
pub fn pair_index(n: usize, i: usize, j: usize) -> Monomial {
    let mut e = alloc::vec![0u32; n];
    e[i] += 1;
    e[j] += 1;
    Monomial::from_exponents(&e)
}

impl<C: Coeff> DiffOp<C> {
    pub fn zero(reg: &Registry) -> Self {
        DiffOp {
            reg: reg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(reg: &Registry) -> Self {
        Self::multiplication(RatFunc::one(reg))
    }

    /// The operator of multiplication by `f`.
    pub fn multiplication(f: RatFunc<C>) -> Self {
        let mut op = Self::zero(f.registry());
        op.add_term(Monomial::one(), f);
        op
    }

    pub fn partial(reg: &Registry, i: usize) -> Self {
        assert!(i < reg.n_vars(), "cannot differentiate a parameter");
        let mut op = Self::zero(reg);
        op.add_term(Monomial::var(i), RatFunc::one(reg));
        op
    }

    /// `c · ∂^α`.
    pub fn term(alpha: Monomial, c: RatFunc<C>) -> Self {
        let mut op = Self::zero(c.registry());
        op.add_term(alpha, c);
        op
    }

    pub fn registry(&self) -> &Registry {
        &self.reg
    }

    pub fn add_term(&mut self, alpha: Monomial, c: RatFunc<C>) {
        debug_assert!(alpha.degree_in_first(self.reg.n_vars()) == alpha.degree());
        if c.is_zero() {
            return;
        }
        let next = match self.terms.remove(&alpha) {
            Some(old) => &old + &c,
            None => c,
        };
        if !next.is_zero() {
            self.terms.insert(alpha, next);
        }
    }

    /// Adds `c · ∂_i ∂_j` (the full coefficient of that multi-index).
    pub fn add_pair(&mut self, i: usize, j: usize, c: RatFunc<C>) {
        self.add_term(pair_index(self.reg.n_vars(), i, j), c);
    }

    pub fn add_first(&mut self, i: usize, c: RatFunc<C>) {
        self.add_term(Monomial::var(i), c);
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &RatFunc<C>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &Monomial) -> RatFunc<C> {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(|| RatFunc::zero(&self.reg))
    }

    /// Coefficient of `∂_i ∂_j` as stored (not halved for `i ≠ j`).
    pub fn pair_coeff(&self, i: usize, j: usize) -> RatFunc<C> {
        self.coeff(&pair_index(self.reg.n_vars(), i, j))
    }

    pub fn first_coeff(&self, i: usize) -> RatFunc<C> {
        self.coeff(&Monomial::var(i))
    }

    pub fn zeroth_coeff(&self) -> RatFunc<C> {
        self.coeff(&Monomial::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Terms of exactly the given order.
    pub fn homogeneous_part(&self, k: u32) -> Self {
        DiffOp {
            reg: self.reg.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| a.degree() == k)
                .map(|(a, c)| (*a, c.clone()))
                .collect(),
        }
    }

    pub fn reduce(&mut self) {
        for c in self.terms.values_mut() {
            c.reduce();
        }
    }

    pub fn reduced(&self) -> Self {
        let mut r = self.clone();
        r.reduce();
        r
    }

    pub fn apply_poly(&self, f: &Poly<C>) -> Result<RatFunc<C>> {
        self.reg.ensure_same(f.registry())?;
        let n = self.reg.n_vars();
        let mut acc = RatFunc::zero(&self.reg);
        for (a, c) in &self.terms {
            let df = f.derivative_multi(&a.exponents(n));
            if !df.is_zero() {
                acc = &acc + &c.mul_poly(&df);
            }
        }
        Ok(acc)
    }

    pub fn apply(&self, f: &RatFunc<C>) -> Result<RatFunc<C>> {
        self.reg.ensure_same(f.registry())?;
        if f.is_polynomial() {
            return self.apply_poly(f.numerator());
        }
        let n = self.reg.n_vars();
        let mut acc = RatFunc::zero(&self.reg);
        for (a, c) in &self.terms {
            let mut df = f.clone();
            for (i, k) in a.exponents(n).into_iter().enumerate() {
                for _ in 0..k {
                    df = df.derivative(i);
                }
            }
            acc = &acc + &(c * &df);
        }
        Ok(acc)
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.reg.ensure_same(&o.reg)?;
        let mut r = self.clone();
        for (a, c) in &o.terms {
            r.add_term(*a, c.clone());
        }
        Ok(r)
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.reg.ensure_same(&o.reg)?;
        let mut r = self.clone();
        for (a, c) in &o.terms {
            r.add_term(*a, -c);
        }
        Ok(r)
    }

    /// Left multiplication of every coefficient by `f`.
    pub fn scale(&self, f: &RatFunc<C>) -> Self {
        let mut r = Self::zero(&self.reg);
        for (a, c) in &self.terms {
            r.add_term(*a, c * f);
        }
        r
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        let mut r = Self::zero(&self.reg);
        for (a, c) in &self.terms {
            r.add_term(*a, c.scale_rational(q));
        }
        r
    }

    /// The composite `self ∘ o`, expanded by the Leibniz rule.
    pub fn checked_compose(&self, o: &Self) -> Result<Self> {
        self.reg.ensure_same(&o.reg)?;
        let n = self.reg.n_vars();
        let mut out = Self::zero(&self.reg);
        for (a, ca) in &self.terms {
            let ea = a.exponents(n);
            // Enumerate γ ≤ α.
            let mut gamma = alloc::vec![0u32; n];
            'gammas: loop {
                let mut mult: i64 = 1;
                for i in 0..n {
                    mult *= binom(ea[i], gamma[i]);
                }
                let rest: Vec<u32> = (0..n).map(|i| ea[i] - gamma[i]).collect();
                let rest_m = Monomial::from_exponents(&rest);
                for (b, cb) in &o.terms {
                    let mut dcb = cb.clone();
                    for (i, &k) in gamma.iter().enumerate() {
                        for _ in 0..k {
                            dcb = dcb.derivative(i);
                        }
                    }
                    if dcb.is_zero() {
                        continue;
                    }
                    let coef = (ca * &dcb).scale_rational(&Rational::from_int(mult));
                    out.add_term(rest_m.mul(b), coef);
                }
                // next γ
                let mut k = 0;
                loop {
                    if k == n {
                        break 'gammas;
                    }
                    if gamma[k] < ea[k] {
                        gamma[k] += 1;
                        break;
                    }
                    gamma[k] = 0;
                    k += 1;
                }
            }
        }
        Ok(out)
    }

    pub fn compose(&self, o: &Self) -> Self {
        self.checked_compose(o).expect("registry mismatch")
    }

    pub fn commutator(&self, o: &Self) -> Result<Self> {
        let ab = self.checked_compose(o)?;
        let ba = o.checked_compose(self)?;
        ab.checked_sub(&ba)
    }

    /// Coefficient-wise equality (cross-multiplied).
    pub fn equals(&self, o: &Self) -> bool {
        self.checked_sub(o).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// Maps every coefficient through `f` (e.g. parameter specialization).
    pub fn try_map(&self, f: impl Fn(&RatFunc<C>) -> Result<RatFunc<C>>) -> Result<Self> {
        let mut first: Option<Registry> = None;
        let mut pairs = Vec::new();
        for (a, c) in &self.terms {
            let c2 = f(c)?;
            if first.is_none() {
                first = Some(c2.registry().clone());
            }
            pairs.push((*a, c2));
        }
        let reg = first.unwrap_or_else(|| self.reg.clone());
        let mut r = DiffOp::zero(&reg);
        for (a, c) in pairs {
            r.reg.ensure_same(c.registry())?;
            r.add_term(a, c);
        }
        Ok(r)
    }

    /// Substitutes named parameters by rational values in every coefficient.
    pub fn specialize(&self, subs: &[(&str, Rational)]) -> Result<Self> {
        for (n, _) in subs {
            let i = self.reg.require(n)?;
            if i < self.reg.n_vars() {
                return Err(Error::UnknownIndeterminate(String::from(*n)));
            }
        }
        self.try_map(|c| c.specialize(subs))
    }

    /// Restriction to the locus where the named indeterminates take the given
    /// values, acting on functions of the remaining variables of `target`.
    ///
    /// Every term that differentiates a fixed variable must vanish on the
    /// locus, otherwise the operator does not preserve it and
    /// [`Error::NotTangent`] names the offending variable.
    pub fn restrict(&self, fixed: &[(&str, Rational)], target: &Registry) -> Result<Self> {
        let mut r = DiffOp::zero(target);
        for (a, c) in &self.terms {
            let c = c.specialize(fixed)?.reduced();
            let moved: Vec<usize> = (0..self.reg.n_vars()).filter(|&i| a.exp(i) > 0).collect();
            if let Some(&i) = moved.iter().find(|&&i| target.index_of(self.reg.name(i)).is_none()) {
                if !c.is_zero() {
                    return Err(Error::NotTangent(String::from(self.reg.name(i))));
                }
                continue;
            }
            let mut e = alloc::vec![0u32; target.n_vars()];
            for &i in &moved {
                let j = target.index_of(self.reg.name(i)).filter(|&j| j < target.n_vars());
                let j = j.ok_or_else(|| Error::UnknownIndeterminate(String::from(self.reg.name(i))))?;
                e[j] += a.exp(i);
            }
            r.add_term(Monomial::from_exponents(&e), c.embed(target)?);
        }
        r.reduce();
        Ok(r)
    }

    /// Substitutes indeterminates by polynomials over the same registry in
    /// every coefficient (derivatives are left untouched).
    pub fn substitute_coeffs(&self, subs: &[(&str, Poly<C>)]) -> Result<Self> {
        self.try_map(|c| c.substitute(subs))
    }

    /// Moves the operator to a registry with the same variables in the same
    /// order (parameters may differ).
    pub fn embed(&self, target: &Registry) -> Result<Self> {
        if target.var_names() != self.reg.var_names() {
            return Err(Error::RegistryMismatch);
        }
        let mut r = DiffOp::zero(target);
        for (a, c) in &self.terms {
            r.add_term(*a, c.embed(target)?);
        }
        Ok(r)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D + Copy) -> DiffOp<D> {
        let mut r = DiffOp::<D>::zero(&self.reg);
        for (a, c) in &self.terms {
            r.add_term(*a, c.map_coeffs(f));
        }
        r
    }

    /// Symmetric matrix of second-order coefficients `g^{ij}` with the
    /// convention `Σ_{i,j} g^{ij} ∂_i ∂_j`, so off-diagonal entries are half
    /// the stored mixed coefficient.
    pub fn metric(&self) -> Vec<Vec<RatFunc<C>>> {
        let n = self.reg.n_vars();
        let half = Rational::new(1, 2);
        let mut g = alloc::vec![alloc::vec![RatFunc::zero(&self.reg); n]; n];
        for i in 0..n {
            for j in i..n {
                let c = self.pair_coeff(i, j);
                if i == j {
                    g[i][i] = c;
                } else {
                    let h = c.scale_rational(&half);
                    g[i][j] = h.clone();
                    g[j][i] = h;
                }
            }
        }
        g
    }

    /// First-order coefficients `b^i`.
    pub fn drift(&self) -> Vec<RatFunc<C>> {
        (0..self.reg.n_vars()).map(|i| self.first_coeff(i)).collect()
    }

    /// Builds `Σ g^{ij} ∂_i∂_j + Σ b^i ∂_i + v` from its parts.
    pub fn from_parts(reg: &Registry, g: &[Vec<RatFunc<C>>], b: &[RatFunc<C>], v: RatFunc<C>) -> Self {
        let n = reg.n_vars();
        let mut op = Self::zero(reg);
        for i in 0..n {
            op.add_pair(i, i, g[i][i].clone());
            for j in (i + 1)..n {
                op.add_pair(i, j, &g[i][j] + &g[j][i]);
            }
            op.add_first(i, b[i].clone());
        }
        op.add_term(Monomial::one(), v);
        op
    }

    /// Canonical listing: one `D(<multi-index>): <coefficient>` line per term,
    /// highest multi-index first in graded-lex order.
    pub fn to_canonical_string(&self) -> String {
        alloc::format!("{}", self)
    }
}

fn write_alpha(f: &mut fmt::Formatter<'_>, reg: &Registry, a: &Monomial) -> fmt::Result {
    if a.degree() == 0 {
        return write!(f, "1");
    }
    let mut first = true;
    for i in 0..reg.n_vars() {
        let k = a.exp(i);
        if k == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if k == 1 {
            write!(f, "{}", reg.name(i))?;
        } else {
            write!(f, "{}^{}", reg.name(i), k)?;
        }
    }
    Ok(())
}

impl<C: Coeff> fmt::Display for DiffOp<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for (a, c) in self.terms.iter().rev() {
            write!(f, "D(")?;
            write_alpha(f, &self.reg, a)?;
            writeln!(f, "): {}", c)?;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for DiffOp<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<C: Coeff> PartialEq for DiffOp<C> {
    fn eq(&self, o: &Self) -> bool {
        self.equals(o)
    }
}

impl<'a, C: Coeff> Add<&'a DiffOp<C>> for &'a DiffOp<C> {
    type Output = DiffOp<C>;
    fn add(self, o: &DiffOp<C>) -> DiffOp<C> {
        self.checked_add(o).expect("registry mismatch")
    }
}

impl<'a, C: Coeff> Sub<&'a DiffOp<C>> for &'a DiffOp<C> {
    type Output = DiffOp<C>;
    fn sub(self, o: &DiffOp<C>) -> DiffOp<C> {
        self.checked_sub(o).expect("registry mismatch")
    }
}

impl<'a, C: Coeff> Mul<&'a DiffOp<C>> for &'a DiffOp<C> {
    type Output = DiffOp<C>;
    fn mul(self, o: &DiffOp<C>) -> DiffOp<C> {
        self.compose(o)
    }
}

impl<C: Coeff> Neg for &DiffOp<C> {
    type Output = DiffOp<C>;
    fn neg(self) -> DiffOp<C> {
        self.scale_rational(&Rational::from_int(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    #[test]
    fn heisenberg() {
        let r = Registry::new(&["x", "y"], &[]);
        let dx = DiffOp::<Rational>::partial(&r, 0);
        let x = DiffOp::multiplication(RatFunc::var(&r, 0));
        assert!(dx.commutator(&x).unwrap().equals(&DiffOp::identity(&r)));
    }

    #[test]
    fn compose_matches_nested_apply() {
        let r = Registry::new(&["x", "y"], &[]);
        let mut a = DiffOp::<Rational>::zero(&r);
        a.add_pair(0, 1, RatFunc::from_poly(parse_poly(&r, "x^2 + y").unwrap()));
        a.add_first(0, RatFunc::from_poly(parse_poly(&r, "3*y").unwrap()));
        let mut b = DiffOp::<Rational>::zero(&r);
        b.add_pair(0, 0, RatFunc::from_poly(parse_poly(&r, "x*y").unwrap()));
        b.add_term(Monomial::one(), RatFunc::from_poly(parse_poly(&r, "x - 1").unwrap()));
        let f = parse_poly(&r, "x^3*y^2 + 2*x*y - y^3").unwrap();
        let lhs = a.compose(&b).apply_poly(&f).unwrap();
        let rhs = a.apply(&b.apply_poly(&f).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn metric_halves_mixed_terms() {
        let r = Registry::new(&["x", "y"], &[]);
        let mut a = DiffOp::<Rational>::zero(&r);
        a.add_pair(0, 1, RatFunc::from_rational(&r, Rational::from_int(6)));
        let g = a.metric();
        assert_eq!(g[0][1], RatFunc::from_rational(&r, Rational::from_int(3)));
        let back = DiffOp::from_parts(&r, &g, &a.drift(), RatFunc::zero(&r));
        assert!(back.equals(&a));
    }
}
