//! Sparse multivariate polynomials over a [`Registry`].

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::registry::{Registry, MAX_INDETERMINATES};
use crate::scalar::Coeff;

/// Exponent vector. The derived order is graded lexicographic with the first
/// registry entry most significant.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    deg: u16,
    e: [u8; MAX_INDETERMINATES],
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            deg: 0,
            e: [0; MAX_INDETERMINATES],
        }
    }

    pub fn var(i: usize) -> Self {
        let mut m = Self::one();
        m.e[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        let mut m = Self::one();
        for (i, &k) in exps.iter().enumerate() {
            m.e[i] = u8::try_from(k).expect("exponent too large");
            m.deg += k as u16;
        }
        m
    }

    pub fn degree(&self) -> u32 {
        self.deg as u32
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.e[i] as u32
    }

    pub fn exponents(&self, n: usize) -> Vec<u32> {
        self.e[..n].iter().map(|&x| x as u32).collect()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut m = *self;
        for i in 0..MAX_INDETERMINATES {
            m.e[i] = m.e[i].checked_add(o.e[i]).expect("exponent overflow");
        }
        m.deg += o.deg;
        m
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.deg <= o.deg && (0..MAX_INDETERMINATES).all(|i| self.e[i] <= o.e[i])
    }

    /// `o / self`, assuming `self` divides `o`.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        let mut m = *o;
        for i in 0..MAX_INDETERMINATES {
            m.e[i] -= self.e[i];
        }
        m.deg -= self.deg;
        m
    }

    /// Degree restricted to the first `n` indeterminates.
    pub fn degree_in_first(&self, n: usize) -> u32 {
        self.e[..n].iter().map(|&x| x as u32).sum()
    }

    fn with_exp(&self, i: usize, k: u32) -> Monomial {
        let mut m = *self;
        m.deg = m.deg - m.e[i] as u16 + k as u16;
        m.e[i] = k as u8;
        m
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.e.iter().rposition(|&x| x != 0).map(|p| p + 1).unwrap_or(0);
        write!(f, "{:?}", &self.e[..last])
    }
}

/// A polynomial with coefficients in `C`; no stored coefficient is zero.
#[derive(Clone)]
pub struct Poly<C: Coeff = Rational> {
    reg: Registry,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> PartialEq for Poly<C> {
    fn eq(&self, other: &Self) -> bool {
        self.reg == other.reg && self.terms == other.terms
    }
}

impl<C: Coeff> Eq for Poly<C> {}

impl<C: Coeff> Poly<C> {
    pub fn zero(reg: &Registry) -> Self {
        Poly {
            reg: reg.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(reg: &Registry, c: C) -> Self {
        let mut p = Self::zero(reg);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one(reg: &Registry) -> Self {
        Self::constant(reg, C::one())
    }

    pub fn from_int(reg: &Registry, n: i64) -> Self {
        Self::constant(reg, C::from_rational(Rational::from_int(n)))
    }

    pub fn from_rational(reg: &Registry, r: Rational) -> Self {
        Self::constant(reg, C::from_rational(r))
    }

    pub fn var(reg: &Registry, i: usize) -> Self {
        assert!(i < reg.len());
        Self::monomial(reg, Monomial::var(i), C::one())
    }

    /// The indeterminate called `name`; panics when it is not registered.
    pub fn named(reg: &Registry, name: &str) -> Self {
        let i = reg
            .index_of(name)
            .unwrap_or_else(|| panic!("unknown indeterminate `{}`", name));
        Self::var(reg, i)
    }

    pub fn monomial(reg: &Registry, m: Monomial, c: C) -> Self {
        let mut p = Self::zero(reg);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(reg: &Registry, it: I) -> Self {
        let mut p = Self::zero(reg);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn registry(&self) -> &Registry {
        &self.reg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Total degree in the differentiable variables only.
    pub fn var_degree(&self) -> Option<u32> {
        let n = self.reg.n_vars();
        self.terms.keys().map(|m| m.degree_in_first(n)).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(i)).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn as_constant(&self) -> Option<C> {
        if self.is_constant() {
            Some(self.coeff(&Monomial::one()))
        } else {
            None
        }
    }

    /// True when no differentiable variable occurs.
    pub fn is_var_free(&self) -> bool {
        let n = self.reg.n_vars();
        self.terms.keys().all(|m| m.degree_in_first(n) == 0)
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.reg.ensure_same(&o.reg)?;
        let (big, small) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        let mut r = big.clone();
        for (m, c) in &small.terms {
            r.add_term(*m, c.clone());
        }
        Ok(r)
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.reg.ensure_same(&o.reg)?;
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c.neg());
        }
        Ok(r)
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.reg.ensure_same(&o.reg)?;
        let mut r = Self::zero(&self.reg);
        if self.is_zero() || o.is_zero() {
            return Ok(r);
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.reg);
        }
        Poly {
            reg: self.reg.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (*m, x.mul(c)))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&C::from_rational(r.clone()))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Poly {
            reg: self.reg.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.reg);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut r = Self::zero(&self.reg);
        for (m, c) in &self.terms {
            let k = m.exp(i);
            if k > 0 {
                let c2 = c.mul(&C::from_rational(Rational::from_int(k as i64)));
                r.add_term(m.with_exp(i, k - 1), c2);
            }
        }
        r
    }

    /// Mixed partial derivative for a multi-index over the variables.
    pub fn derivative_multi(&self, alpha: &[u32]) -> Self {
        let mut r = self.clone();
        for (i, &k) in alpha.iter().enumerate() {
            for _ in 0..k {
                if r.is_zero() {
                    return r;
                }
                r = r.derivative(i);
            }
        }
        r
    }

    /// Substitutes every indeterminate by a polynomial over a (possibly different)
    /// registry. `images.len()` must equal the registry length.
    pub fn compose(&self, images: &[Poly<C>]) -> Result<Poly<C>> {
        if images.len() != self.reg.len() {
            return Err(Error::RegistryMismatch);
        }
        let target = images
            .first()
            .map(|p| p.reg.clone())
            .unwrap_or_else(|| self.reg.clone());
        for im in images {
            target.ensure_same(&im.reg)?;
        }
        let mut cache: Vec<Vec<Poly<C>>> = vec![Vec::new(); images.len()];
        let mut out = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (i, im) in images.iter().enumerate() {
                let k = m.exp(i) as usize;
                if k == 0 {
                    continue;
                }
                let pw = &mut cache[i];
                if pw.is_empty() {
                    pw.push(Poly::one(&target));
                }
                while pw.len() <= k {
                    let next = &pw[pw.len() - 1] * im;
                    pw.push(next);
                }
                t = &t * &pw[k];
            }
            for (mm, cc) in t.terms {
                out.add_term(mm, cc);
            }
        }
        Ok(out)
    }

    /// Replaces the named indeterminates and keeps the registry.
    pub fn substitute(&self, subs: &[(&str, Poly<C>)]) -> Result<Poly<C>> {
        let mut images: Vec<Poly<C>> = (0..self.reg.len()).map(|i| Poly::var(&self.reg, i)).collect();
        for (name, p) in subs {
            let i = self.reg.require(name)?;
            self.reg.ensure_same(&p.reg)?;
            images[i] = p.clone();
        }
        self.compose(&images)
    }

    /// Re-expresses the polynomial over `target`, matching indeterminates by name.
    pub fn embed(&self, target: &Registry) -> Result<Poly<C>> {
        let mut map = Vec::with_capacity(self.reg.len());
        for n in self.reg.names() {
            map.push(target.index_of(n));
        }
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.len()];
            for i in 0..self.reg.len() {
                let k = m.exp(i);
                if k > 0 {
                    match map[i] {
                        Some(j) => exps[j] += k,
                        None => {
                            return Err(Error::UnknownIndeterminate(self.reg.name(i).into()))
                        }
                    }
                }
            }
            out.add_term(Monomial::from_exponents(&exps), c.clone());
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.reg.len());
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in point.iter().enumerate() {
                for _ in 0..m.exp(i) {
                    t = t.mul(x);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.reg.len());
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64();
            for (i, x) in point.iter().enumerate() {
                let k = m.exp(i);
                if k > 0 {
                    let mut p = 1.0;
                    for _ in 0..k {
                        p *= x;
                    }
                    t *= p;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut out = Poly::<D>::zero(&self.reg);
        for (m, c) in &self.terms {
            out.add_term(*m, f(c));
        }
        out
    }

    /// Multivariate division by `d` in graded-lex order: returns `(q, r)` with
    /// `self = q·d + r` and no term of `r` divisible by the leading monomial of `d`.
    pub fn div_rem(&self, d: &Poly<C>) -> Result<(Poly<C>, Poly<C>)> {
        self.reg.ensure_same(&d.reg)?;
        let (lm, lc) = match d.leading() {
            Some((m, c)) => (*m, c.clone()),
            None => return Err(Error::ZeroDenominator),
        };
        let inv = lc.try_inv().ok_or_else(|| {
            Error::Parse(alloc::string::String::from("non-invertible leading coefficient"))
        })?;
        let mut p = self.clone();
        let mut q = Poly::zero(&self.reg);
        let mut r = Poly::zero(&self.reg);
        while let Some((m, c)) = p.terms.iter().next_back().map(|(m, c)| (*m, c.clone())) {
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = c.mul(&inv);
                q.add_term(qm, qc.clone());
                for (dm, dc) in &d.terms {
                    p.add_term(dm.mul(&qm), dc.mul(&qc).neg());
                }
            } else {
                p.terms.remove(&m);
                r.add_term(m, c);
            }
        }
        Ok((q, r))
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly<C>) -> Option<Poly<C>> {
        let (lm, lc) = d.leading().map(|(m, c)| (*m, c.clone()))?;
        if self.reg != d.reg {
            return None;
        }
        let inv = lc.try_inv()?;
        let mut p = self.clone();
        let mut q = Poly::zero(&self.reg);
        while let Some((m, c)) = p.terms.iter().next_back().map(|(m, c)| (*m, c.clone())) {
            if !lm.divides(&m) {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = c.mul(&inv);
            for (dm, dc) in &d.terms {
                p.add_term(dm.mul(&qm), dc.mul(&qc).neg());
            }
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Scales so the leading coefficient is one (when invertible).
    pub fn monic(&self) -> (Poly<C>, C) {
        match self.leading() {
            Some((_, c)) => match c.try_inv() {
                Some(inv) => (self.scale(&inv), c.clone()),
                None => (self.clone(), C::one()),
            },
            None => (self.clone(), C::one()),
        }
    }

    /// Homogeneous component of the given total degree in the variables.
    pub fn var_degree_part(&self, k: u32) -> Poly<C> {
        let n = self.reg.n_vars();
        Poly {
            reg: self.reg.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree_in_first(n) == k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Canonical text form: terms in descending graded-lex order.
    pub fn to_canonical_string(&self) -> alloc::string::String {
        alloc::format!("{}", self)
    }
}

impl Poly<Rational> {
    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> num_bigint::BigInt {
        use num_integer::Integer;
        let mut l = num_bigint::BigInt::from(1);
        for c in self.terms.values() {
            l = l.lcm(&c.denom());
        }
        l
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, reg: &Registry, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for i in 0..reg.len() {
        let k = m.exp(i);
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

impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = match c.as_rational() {
                Some(r) if r.signum() < 0 => (true, C::from_rational(-r)),
                _ => (false, c.clone()),
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let is_unit = m.degree() == 0;
            if is_unit {
                if mag.is_compound() {
                    write!(f, "({})", mag)?;
                } else {
                    write!(f, "{}", mag)?;
                }
            } else {
                if !mag.is_one() {
                    if mag.is_compound() {
                        write!(f, "({})*", mag)?;
                    } else {
                        write!(f, "{}*", mag)?;
                    }
                }
                write_monomial(f, &self.reg, m)?;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<'a, C: Coeff> Add<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn add(self, o: &Poly<C>) -> Poly<C> {
        self.checked_add(o).expect("registry mismatch")
    }
}

impl<'a, C: Coeff> Sub<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn sub(self, o: &Poly<C>) -> Poly<C> {
        self.checked_sub(o).expect("registry mismatch")
    }
}

impl<'a, C: Coeff> Mul<&'a Poly<C>> for &'a Poly<C> {
    type Output = Poly<C>;
    fn mul(self, o: &Poly<C>) -> Poly<C> {
        self.checked_mul(o).expect("registry mismatch")
    }
}

impl<C: Coeff> Add for Poly<C> {
    type Output = Poly<C>;
    fn add(self, o: Poly<C>) -> Poly<C> {
        &self + &o
    }
}

impl<C: Coeff> Sub for Poly<C> {
    type Output = Poly<C>;
    fn sub(self, o: Poly<C>) -> Poly<C> {
        &self - &o
    }
}

impl<C: Coeff> Mul for Poly<C> {
    type Output = Poly<C>;
    fn mul(self, o: Poly<C>) -> Poly<C> {
        &self * &o
    }
}

impl<C: Coeff> Neg for Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        self.scale(&C::one().neg())
    }
}

impl<C: Coeff> Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        self.scale(&C::one().neg())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn reg() -> Registry {
        Registry::new(&["x", "y", "z"], &["d"])
    }

    #[test]
    fn difference_of_squares() {
        let r = reg();
        let x = Poly::<Rational>::var(&r, 0);
        let y = Poly::<Rational>::var(&r, 1);
        let p = &(&x + &y) * &(&x - &y);
        assert_eq!(p, &x.pow(2) - &y.pow(2));
        assert_eq!(alloc::format!("{}", p), "x^2 - y^2");
    }

    #[test]
    fn display_order_is_grlex_descending() {
        let r = reg();
        let x = Poly::<Rational>::var(&r, 0);
        let z = Poly::<Rational>::var(&r, 2);
        let d = Poly::<Rational>::named(&r, "d");
        let p = &(&(&z.pow(2) + &x) + &d.scale_rational(&q(-3, 4))) + &Poly::from_int(&r, 5);
        assert_eq!(alloc::format!("{}", p), "z^2 + x - 3/4*d + 5");
    }

    #[test]
    fn exact_division() {
        let r = reg();
        let x = Poly::<Rational>::var(&r, 0);
        let y = Poly::<Rational>::var(&r, 1);
        let a = &x + &y.scale_rational(&q(2, 1));
        let b = &(&x * &y) - &Poly::from_int(&r, 3);
        let p = &a * &b;
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert!(p.div_exact(&(&x + &Poly::one(&r))).is_none());
        let (qq, rr) = (&p + &y).div_rem(&a).unwrap();
        assert_eq!(&(&qq * &a) + &rr, &p + &y);
    }

    #[test]
    fn compose_and_derivative() {
        let r = reg();
        let x = Poly::<Rational>::var(&r, 0);
        let y = Poly::<Rational>::var(&r, 1);
        let p = &x.pow(3) * &y;
        let s = p.substitute(&[("x", &y + &Poly::one(&r))]).unwrap();
        assert_eq!(s, &(&y + &Poly::one(&r)).pow(3) * &y);
        assert_eq!(p.derivative(0), (&x.pow(2) * &y).scale_rational(&q(3, 1)));
    }

    #[test]
    fn registry_mismatch_is_an_error() {
        let a = Poly::<Rational>::var(&reg(), 0);
        let b = Poly::<Rational>::var(&Registry::new(&["x"], &[]), 0);
        assert_eq!(a.checked_add(&b), Err(Error::RegistryMismatch));
    }
}
