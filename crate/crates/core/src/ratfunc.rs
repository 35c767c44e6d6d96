//! Rational functions with a factored denominator.
//!
//! The denominator is kept as a product of monic polynomial factors with
//! multiplicities. No multivariate gcd is ever computed: sums use the lcm of
//! the factor lists, equality is decided by cross-multiplication, and
//! [`RatFunc::reduce`] only cancels whole known factors by exact division.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::Rational;
use crate::registry::Registry;
use crate::scalar::Coeff;

#[derive(Clone)]
pub struct RatFunc<C: Coeff = Rational> {
    num: Poly<C>,
    /// Monic, non-constant, pairwise distinct factors with positive exponents.
    den: Vec<(Poly<C>, u32)>,
}

impl<C: Coeff> RatFunc<C> {
    pub fn zero(reg: &Registry) -> Self {
        Self::from_poly(Poly::zero(reg))
    }

    pub fn one(reg: &Registry) -> Self {
        Self::from_poly(Poly::one(reg))
    }

    pub fn constant(reg: &Registry, c: C) -> Self {
        Self::from_poly(Poly::constant(reg, c))
    }

    pub fn from_rational(reg: &Registry, r: Rational) -> Self {
        Self::from_poly(Poly::from_rational(reg, r))
    }

    pub fn from_poly(p: Poly<C>) -> Self {
        RatFunc {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn var(reg: &Registry, i: usize) -> Self {
        Self::from_poly(Poly::var(reg, i))
    }

    pub fn named(reg: &Registry, name: &str) -> Self {
        Self::from_poly(Poly::named(reg, name))
    }

    /// `num / den`; fails when `den` is the zero polynomial.
    pub fn new(num: Poly<C>, den: Poly<C>) -> Result<Self> {
        num.registry().ensure_same(den.registry())?;
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut r = Self::from_poly(num);
        r.push_factor(den, 1);
        Ok(r)
    }

    /// `num / Π f^e`.
    pub fn from_factors(num: Poly<C>, factors: &[(Poly<C>, u32)]) -> Result<Self> {
        let mut r = Self::from_poly(num);
        for (f, e) in factors {
            r.num.registry().ensure_same(f.registry())?;
            if f.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            r.push_factor(f.clone(), *e);
        }
        Ok(r)
    }

    /// Multiplies the denominator by `f^e`, normalizing `f`.
    fn push_factor(&mut self, f: Poly<C>, e: u32) {
        if e == 0 {
            return;
        }
        if let Some(c) = f.as_constant() {
            let inv = c.try_inv().expect("constant denominator must be invertible");
            let mut s = C::one();
            for _ in 0..e {
                s = s.mul(&inv);
            }
            self.num = self.num.scale(&s);
            return;
        }
        let (m, lc) = f.monic();
        if !lc.is_one() {
            if let Some(inv) = lc.try_inv() {
                let mut s = C::one();
                for _ in 0..e {
                    s = s.mul(&inv);
                }
                self.num = self.num.scale(&s);
            }
        }
        for (g, k) in self.den.iter_mut() {
            if *g == m {
                *k += e;
                return;
            }
        }
        self.den.push((m, e));
    }

    pub fn registry(&self) -> &Registry {
        self.num.registry()
    }

    /// The numerator over the stored factored denominator.
    pub fn numerator(&self) -> &Poly<C> {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[(Poly<C>, u32)] {
        &self.den
    }

    /// The expanded denominator polynomial.
    pub fn denominator(&self) -> Poly<C> {
        let mut d = Poly::one(self.registry());
        for (f, e) in &self.den {
            d = &d * &f.pow(*e);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// The polynomial value after cancelling known factors, if there is one.
    pub fn to_poly(&self) -> Option<Poly<C>> {
        let r = self.reduced();
        if r.den.is_empty() {
            Some(r.num)
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<C> {
        self.to_poly().and_then(|p| p.as_constant())
    }

    /// True when no differentiable variable occurs in numerator or denominator.
    pub fn is_var_free(&self) -> bool {
        self.num.is_var_free() && self.den.iter().all(|(f, _)| f.is_var_free())
    }

    /// Cancels denominator factors that divide the numerator.
    pub fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let mut i = 0;
        while i < self.den.len() {
            while self.den[i].1 > 0 {
                match self.num.div_exact(&self.den[i].0) {
                    Some(q) => {
                        self.num = q;
                        self.den[i].1 -= 1;
                    }
                    None => break,
                }
            }
            if self.den[i].1 == 0 {
                self.den.remove(i);
            } else {
                i += 1;
            }
        }
    }

    pub fn reduced(&self) -> Self {
        let mut r = self.clone();
        r.reduce();
        r
    }

    /// Lcm of two factor lists and the cofactors that bring each side to it.
    fn common(a: &[(Poly<C>, u32)], b: &[(Poly<C>, u32)], reg: &Registry) -> (Vec<(Poly<C>, u32)>, Poly<C>, Poly<C>) {
        let mut l: Vec<(Poly<C>, u32)> = a.to_vec();
        for (f, e) in b {
            match l.iter_mut().find(|(g, _)| g == f) {
                Some((_, k)) => *k = (*k).max(*e),
                None => l.push((f.clone(), *e)),
            }
        }
        let cof = |side: &[(Poly<C>, u32)]| {
            let mut c = Poly::one(reg);
            for (f, e) in &l {
                let have = side.iter().find(|(g, _)| g == f).map(|x| x.1).unwrap_or(0);
                if *e > have {
                    c = &c * &f.pow(*e - have);
                }
            }
            c
        };
        let ca = cof(a);
        let cb = cof(b);
        (l, ca, cb)
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        self.registry().ensure_same(o.registry())?;
        if o.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(o.clone());
        }
        let (l, ca, cb) = Self::common(&self.den, &o.den, self.registry());
        let num = &(&self.num * &ca) + &(&o.num * &cb);
        let mut r = RatFunc { num, den: l };
        if r.num.is_zero() {
            r.den.clear();
        }
        Ok(r)
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.checked_add(&o.neg_ref())
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        self.registry().ensure_same(o.registry())?;
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero(self.registry()));
        }
        let mut r = RatFunc {
            num: &self.num * &o.num,
            den: self.den.clone(),
        };
        for (f, e) in &o.den {
            match r.den.iter_mut().find(|(g, _)| g == f) {
                Some((_, k)) => *k += *e,
                None => r.den.push((f.clone(), *e)),
            }
        }
        Ok(r)
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        self.registry().ensure_same(o.registry())?;
        if o.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut r = RatFunc {
            num: self.num.clone(),
            den: self.den.clone(),
        };
        for (f, e) in &o.den {
            r.num = &r.num * &f.pow(*e);
        }
        r.push_factor(o.num.clone(), 1);
        Ok(r)
    }

    fn neg_ref(&self) -> Self {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut r = self.clone();
        r.num = r.num.scale(c);
        if r.num.is_zero() {
            r.den.clear();
        }
        r
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.scale(&C::from_rational(c.clone()))
    }

    pub fn mul_poly(&self, p: &Poly<C>) -> Self {
        let mut r = self.clone();
        r.num = &r.num * p;
        if r.num.is_zero() {
            r.den.clear();
        }
        r
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut r = RatFunc {
            num: self.num.pow(e),
            den: self.den.iter().map(|(f, k)| (f.clone(), k * e)).collect(),
        };
        if e == 0 {
            r.den.clear();
        }
        r
    }

    pub fn derivative(&self, i: usize) -> Self {
        let reg = self.registry();
        let dn = self.num.derivative(i);
        let live: Vec<(usize, Poly<C>)> = self
            .den
            .iter()
            .enumerate()
            .map(|(k, (f, _))| (k, f.derivative(i)))
            .filter(|(_, df)| !df.is_zero())
            .collect();
        if live.is_empty() {
            return RatFunc {
                num: dn,
                den: if self.num.is_zero() { Vec::new() } else { self.den.clone() },
            }
            .cleaned();
        }
        // d/dx (n / Π f^e) = (n' Πg - n Σ e f' Π_{g≠f} g) / (Π f^e · Πg), g over live factors.
        let mut prod_all = Poly::one(reg);
        for (k, _) in &live {
            prod_all = &prod_all * &self.den[*k].0;
        }
        let mut num = &dn * &prod_all;
        for (k, df) in &live {
            let mut others = Poly::one(reg);
            for (j, _) in &live {
                if j != k {
                    others = &others * &self.den[*j].0;
                }
            }
            let e = C::from_rational(Rational::from_int(self.den[*k].1 as i64));
            num = &num - &(&(&self.num * df) * &others).scale(&e);
        }
        let mut den = self.den.clone();
        for (k, _) in &live {
            den[*k].1 += 1;
        }
        RatFunc { num, den }.cleaned()
    }

    fn cleaned(mut self) -> Self {
        if self.num.is_zero() {
            self.den.clear();
        }
        self
    }

    /// Substitutes every indeterminate by a polynomial (see [`Poly::compose`]).
    pub fn compose(&self, images: &[Poly<C>]) -> Result<Self> {
        let num = self.num.compose(images)?;
        let mut r = Self::from_poly(num);
        for (f, e) in &self.den {
            let g = f.compose(images)?;
            if g.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            r.push_factor(g, *e);
        }
        Ok(r.cleaned())
    }

    pub fn substitute(&self, subs: &[(&str, Poly<C>)]) -> Result<Self> {
        let reg = self.registry();
        let mut images: Vec<Poly<C>> = (0..reg.len()).map(|i| Poly::var(reg, i)).collect();
        for (name, p) in subs {
            let i = reg.require(name)?;
            images[i] = p.clone();
        }
        self.compose(&images)
    }

    /// Substitutes named indeterminates by rational constants.
    pub fn specialize(&self, subs: &[(&str, Rational)]) -> Result<Self> {
        let reg = self.registry().clone();
        let s: Vec<(&str, Poly<C>)> = subs
            .iter()
            .map(|(n, v)| (*n, Poly::from_rational(&reg, v.clone())))
            .collect();
        self.substitute(&s)
    }

    pub fn embed(&self, target: &Registry) -> Result<Self> {
        let mut r = Self::from_poly(self.num.embed(target)?);
        for (f, e) in &self.den {
            r.push_factor(f.embed(target)?, *e);
        }
        Ok(r)
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D + Copy) -> RatFunc<D> {
        let mut r = RatFunc::from_poly(self.num.map_coeffs(f));
        for (g, e) in &self.den {
            r.push_factor(g.map_coeffs(f), *e);
        }
        r
    }

    /// Exact value at a point; errors when the denominator vanishes there.
    pub fn eval(&self, point: &[C]) -> Result<C> {
        let mut d = C::one();
        for (f, e) in &self.den {
            let v = f.eval(point);
            if v.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            for _ in 0..*e {
                d = d.mul(&v);
            }
        }
        let inv = d.try_inv().ok_or(Error::ZeroDenominator)?;
        Ok(self.num.eval(point).mul(&inv))
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let mut d = 1.0;
        for (f, e) in &self.den {
            let v = f.eval_f64(point);
            for _ in 0..*e {
                d *= v;
            }
        }
        self.num.eval_f64(point) / d
    }

    /// Cross-multiplication equality.
    pub fn equals(&self, o: &Self) -> bool {
        if self.registry() != o.registry() {
            return false;
        }
        let (_, ca, cb) = Self::common(&self.den, &o.den, self.registry());
        &self.num * &ca == &o.num * &cb
    }

    pub fn to_canonical_string(&self) -> String {
        alloc::format!("{}", self)
    }
}

impl<C: Coeff> PartialEq for RatFunc<C> {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl<C: Coeff> From<Poly<C>> for RatFunc<C> {
    fn from(p: Poly<C>) -> Self {
        RatFunc::from_poly(p)
    }
}

impl<C: Coeff> fmt::Display for RatFunc<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        write!(f, "/(")?;
        for (k, (g, e)) in self.den.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            let wrap = g.len() > 1 || self.den.len() > 1 || *e > 1;
            if wrap && g.len() > 1 {
                write!(f, "({})", g)?;
            } else {
                write!(f, "{}", g)?;
            }
            if *e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        write!(f, ")")
    }
}

impl<C: Coeff> fmt::Debug for RatFunc<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a, C: Coeff> $tr<&'a RatFunc<C>> for &'a RatFunc<C> {
            type Output = RatFunc<C>;
            fn $m(self, o: &RatFunc<C>) -> RatFunc<C> {
                self.$checked(o).expect("rational function arithmetic")
            }
        }
        impl<C: Coeff> $tr for RatFunc<C> {
            type Output = RatFunc<C>;
            fn $m(self, o: RatFunc<C>) -> RatFunc<C> {
                self.$checked(&o).expect("rational function arithmetic")
            }
        }
    };
}
binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl<C: Coeff> Neg for RatFunc<C> {
    type Output = RatFunc<C>;
    fn neg(self) -> RatFunc<C> {
        self.neg_ref()
    }
}

impl<C: Coeff> Neg for &RatFunc<C> {
    type Output = RatFunc<C>;
    fn neg(self) -> RatFunc<C> {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn reg() -> Registry {
        Registry::new(&["a", "b"], &[])
    }

    #[test]
    fn common_factor_equality() {
        let r = reg();
        let a = Poly::<Rational>::var(&r, 0);
        let b = Poly::<Rational>::var(&r, 1);
        let f = RatFunc::new(Poly::one(&r), a.clone()).unwrap();
        let g = RatFunc::new(b.clone(), &a * &b).unwrap();
        assert_eq!(f, g);
        let h = RatFunc::from_poly(&a + &Poly::one(&r));
        assert_ne!(h, RatFunc::from_poly(a));
    }

    #[test]
    fn quotient_rule() {
        let r = reg();
        let a = Poly::<Rational>::var(&r, 0);
        let b = Poly::<Rational>::var(&r, 1);
        // d/da (b / (a^2 + b)) = -2ab / (a^2+b)^2
        let den = &a.pow(2) + &b;
        let f = RatFunc::new(b.clone(), den.clone()).unwrap();
        let expect = RatFunc::from_factors((&a * &b).scale_rational(&q(-2, 1)), &[(den, 2)]).unwrap();
        assert_eq!(f.derivative(0), expect);
    }

    #[test]
    fn reduce_cancels_known_factors() {
        let r = reg();
        let a = Poly::<Rational>::var(&r, 0);
        let b = Poly::<Rational>::var(&r, 1);
        let s = &a + &b;
        let f = RatFunc::new(&s * &(&a - &b), s.scale_rational(&q(2, 1))).unwrap();
        let p = f.to_poly().unwrap();
        assert_eq!(p, (&a - &b).scale_rational(&q(1, 2)));
    }

    #[test]
    fn eval_reports_pole() {
        let r = reg();
        let a = Poly::<Rational>::var(&r, 0);
        let f = RatFunc::new(Poly::one(&r), a).unwrap();
        assert_eq!(f.eval(&[q(0, 1), q(1, 1)]), Err(Error::ZeroDenominator));
        assert_eq!(f.eval(&[q(2, 1), q(1, 1)]).unwrap(), q(1, 2));
    }
}
