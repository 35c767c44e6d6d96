//! Coefficient fields: the rationals and a multi-quadratic extension of them.

use alloc::vec::Vec;
use core::fmt;
use core::hash::Hash;

use crate::rational::Rational;

/// Operations a polynomial coefficient ring has to provide.
pub trait Coeff: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(r: Rational) -> Self;
    /// Multiplicative inverse when it can be formed inside the ring.
    fn try_inv(&self) -> Option<Self>;
    /// The value as a rational, when it is one.
    fn as_rational(&self) -> Option<Rational>;
    /// True when printing needs parentheses inside a product.
    fn is_compound(&self) -> bool;
    /// `√n` inside the ring, when it exists there.
    fn sqrt_of(n: i64) -> Option<Self>;
    /// Real part as a float.
    fn to_f64(&self) -> f64;
}

impl Coeff for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Rational::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn try_inv(&self) -> Option<Self> {
        if Rational::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn is_compound(&self) -> bool {
        false
    }
    fn sqrt_of(n: i64) -> Option<Self> {
        if n < 0 {
            return None;
        }
        if n == 0 {
            return Some(Rational::zero());
        }
        let (s, r) = squarefree_split(n);
        (r == 1).then(|| Rational::from_int(s))
    }
    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }
}

/// Splits `n` into `(s, r)` with `n = s^2 * r` and `r` squarefree (sign kept on `r`).
pub fn squarefree_split(n: i64) -> (i64, i64) {
    assert!(n != 0);
    let sign = n.signum();
    let mut m = n.unsigned_abs();
    let mut s: u64 = 1;
    let mut r: u64 = 1;
    let mut p: u64 = 2;
    while p * p <= m {
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        s *= p.pow(k / 2);
        if k % 2 == 1 {
            r *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    r *= m;
    (s as i64, sign * r as i64)
}

/// Element of ℚ(i, √2, √3, √5, …): a finite sum `Σ c_r √r` over squarefree
/// signed radicands `r`, with `√(-k) = i√k` and `√1 = 1`.
///
/// Terms are kept sorted by radicand with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    terms: Vec<(i64, Rational)>,
}

impl Surd {
    pub fn rational(r: Rational) -> Self {
        let mut s = Surd { terms: Vec::new() };
        if !r.is_zero() {
            s.terms.push((1, r));
        }
        s
    }

    /// `c · √n` for any nonzero integer `n`; square factors are pulled out.
    pub fn sqrt_times(c: Rational, n: i64) -> Self {
        if c.is_zero() {
            return Surd::default();
        }
        let (s, r) = squarefree_split(n);
        Surd {
            terms: alloc::vec![(r, c * Rational::from_int(s))],
        }
    }

    pub fn sqrt(n: i64) -> Self {
        Self::sqrt_times(Rational::one(), n)
    }

    pub fn i() -> Self {
        Self::sqrt(-1)
    }

    pub fn terms(&self) -> &[(i64, Rational)] {
        &self.terms
    }

    fn push_term(acc: &mut Vec<(i64, Rational)>, r: i64, c: Rational) {
        match acc.binary_search_by_key(&r, |t| t.0) {
            Ok(pos) => {
                let v = &acc[pos].1 + &c;
                if v.is_zero() {
                    acc.remove(pos);
                } else {
                    acc[pos].1 = v;
                }
            }
            Err(pos) => {
                if !c.is_zero() {
                    acc.insert(pos, (r, c));
                }
            }
        }
    }

    /// Real part (terms with positive radicand).
    pub fn re(&self) -> Surd {
        Surd {
            terms: self.terms.iter().filter(|t| t.0 > 0).cloned().collect(),
        }
    }

    /// Imaginary part as a real surd.
    pub fn im(&self) -> Surd {
        Surd {
            terms: self
                .terms
                .iter()
                .filter(|t| t.0 < 0)
                .map(|(r, c)| (-r, c.clone()))
                .collect(),
        }
    }

    pub fn conj(&self) -> Surd {
        Surd {
            terms: self
                .terms
                .iter()
                .map(|(r, c)| (*r, if *r < 0 { -c } else { c.clone() }))
                .collect(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.0 > 0)
    }

    /// Numerical value as `(re, im)`.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (r, c) in &self.terms {
            let v = c.to_f64() * libm_sqrt(r.unsigned_abs() as f64);
            if *r > 0 {
                re += v;
            } else {
                im += v;
            }
        }
        (re, im)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_complex_f64().0
    }

    /// A prime (or `-1`) dividing some non-rational radicand.
    fn some_generator(&self) -> i64 {
        for (r, _) in &self.terms {
            if *r < 0 {
                return -1;
            }
        }
        for (r, _) in &self.terms {
            if *r > 1 {
                let mut p = 2;
                while r % p != 0 {
                    p += 1;
                }
                return p;
            }
        }
        1
    }

    /// The conjugate sending `√g` to `−√g` for a prime `g` (or `i` to `−i`).
    fn flip(&self, g: i64) -> Surd {
        let hit = |r: i64| if g == -1 { r < 0 } else { r % g == 0 };
        Surd {
            terms: self
                .terms
                .iter()
                .map(|(r, c)| (*r, if hit(*r) { -c } else { c.clone() }))
                .collect(),
        }
    }
}

/// Square root without depending on `std`: Newton iteration from a bit-level guess.
fn libm_sqrt(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let mut y = f64::from_bits((x.to_bits() >> 1) + (1023u64 << 51));
    for _ in 0..6 {
        y = 0.5 * (y + x / y);
    }
    y
}

impl Coeff for Surd {
    fn zero() -> Self {
        Surd::default()
    }
    fn one() -> Self {
        Surd::rational(Rational::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 1 && self.terms[0].1.is_one()
    }
    fn add(&self, o: &Self) -> Self {
        let mut acc = self.terms.clone();
        for (r, c) in &o.terms {
            Surd::push_term(&mut acc, *r, c.clone());
        }
        Surd { terms: acc }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        let mut acc = Vec::new();
        for (r1, c1) in &self.terms {
            for (r2, c2) in &o.terms {
                let sign = if *r1 < 0 && *r2 < 0 { -1 } else { 1 };
                let prod = r1.checked_mul(*r2).expect("radicand overflow");
                let (s, r) = squarefree_split(prod.abs() * if (*r1 < 0) ^ (*r2 < 0) { -1 } else { 1 });
                let c = c1 * c2 * Rational::from_int(s * sign);
                Surd::push_term(&mut acc, r, c);
            }
        }
        Surd { terms: acc }
    }
    fn neg(&self) -> Self {
        Surd {
            terms: self.terms.iter().map(|(r, c)| (*r, -c)).collect(),
        }
    }
    fn from_rational(r: Rational) -> Self {
        Surd::rational(r)
    }
    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // Multiply by Galois conjugates until the product is rational.
        let mut num = Surd::rational(Rational::one());
        let mut den = self.clone();
        while den.as_rational().is_none() {
            let g = den.some_generator();
            let c = den.flip(g);
            num = num.mul(&c);
            den = den.mul(&c);
        }
        let r = den.as_rational()?;
        Some(num.mul(&Surd::rational(r.recip())))
    }
    fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(1, c)] => Some(c.clone()),
            _ => None,
        }
    }
    fn is_compound(&self) -> bool {
        self.terms.len() > 1
            || self.terms.first().map(|t| t.0 != 1).unwrap_or(false)
    }
    fn sqrt_of(n: i64) -> Option<Self> {
        Some(if n == 0 { Surd::default() } else { Surd::sqrt(n) })
    }
    fn to_f64(&self) -> f64 {
        self.to_complex_f64().0
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (r, c)) in self.terms.iter().enumerate() {
            let neg = c.signum() < 0;
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            match *r {
                1 => write!(f, "{}", a)?,
                -1 if a.is_one() => write!(f, "I")?,
                -1 => write!(f, "{}*I", a)?,
                r if r > 0 && a.is_one() => write!(f, "sqrt({})", r)?,
                r if r > 0 => write!(f, "{}*sqrt({})", a, r)?,
                r if a.is_one() => write!(f, "I*sqrt({})", -r)?,
                r => write!(f, "{}*I*sqrt({})", a, -r)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn split() {
        assert_eq!(squarefree_split(72), (6, 2));
        assert_eq!(squarefree_split(-24), (2, -6));
        assert_eq!(squarefree_split(210), (1, 210));
    }

    #[test]
    fn radical_products() {
        let i = Surd::i();
        assert_eq!(i.mul(&i), Surd::rational(q(-1, 1)));
        let s6 = Surd::sqrt(6);
        assert_eq!(s6.mul(&s6), Surd::rational(q(6, 1)));
        assert_eq!(Surd::sqrt(35).mul(&Surd::sqrt(6)), Surd::sqrt(210));
        assert_eq!(Surd::sqrt(-6).mul(&Surd::sqrt(-6)), Surd::rational(q(-6, 1)));
        assert_eq!(Surd::sqrt(-6), i.mul(&s6));
        let x = Surd::sqrt_times(q(3, 7), -35);
        assert!(x.mul(&x.try_inv().unwrap()).is_one());
        let y = Surd::rational(q(1, 3)).add(&Surd::sqrt(35)).add(&Surd::sqrt_times(q(2, 1), -6)).add(&Surd::sqrt(210));
        assert!(y.mul(&y.try_inv().unwrap()).is_one());
    }

    #[test]
    fn parts() {
        let z = Surd::rational(q(1, 2)).add(&Surd::sqrt_times(q(2, 1), -6));
        assert_eq!(z.re(), Surd::rational(q(1, 2)));
        assert_eq!(z.im(), Surd::sqrt_times(q(2, 1), 6));
        let (re, im) = z.to_complex_f64();
        assert!((re - 0.5).abs() < 1e-15 && (im - 2.0 * 6f64.sqrt()).abs() < 1e-14);
        assert_eq!(alloc::format!("{}", z), "2*I*sqrt(6) + 1/2");
    }
}
