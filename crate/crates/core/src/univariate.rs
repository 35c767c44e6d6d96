//! Univariate polynomials over ℚ: characteristic polynomials of rational
//! matrices, square-free splitting and real-root isolation by Sturm
//! sequences to any requested precision.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::rational::Rational;

/// Coefficients from the constant term up; never carries a zero leading
/// coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct UPoly {
    c: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(Rational::is_zero) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    pub fn constant(a: Rational) -> Self {
        UPoly::new(vec![a])
    }

    /// `x − a`.
    pub fn linear(a: &Rational) -> Self {
        UPoly::new(vec![-a, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.c.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * x) + a;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * &Rational::from_int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rational) -> Self {
        UPoly::new(self.c.iter().map(|a| a * s).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let z = Rational::zero();
        UPoly::new(
            (0..n)
                .map(|i| self.c.get(i).unwrap_or(&z) + o.c.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Rational::from_int(-1)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += &(a * b);
            }
        }
        UPoly::new(c)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.c.clone();
        let dl = d.lead().recip();
        let dd = d.degree();
        if r.len() < d.c.len() {
            return (UPoly::zero(), self.clone());
        }
        let mut qc = vec![Rational::zero(); r.len() - dd];
        for k in (0..qc.len()).rev() {
            let f = &r[k + dd] * &dl;
            if f.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                let t = b * &f;
                r[k + j] -= &t;
            }
            qc[k] = f;
        }
        (UPoly::new(qc), UPoly::new(r))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Yun's square-free decomposition: monic `(factor, multiplicity)` pairs
    /// with pairwise coprime square-free factors whose product, with
    /// multiplicities, is `self` up to its leading coefficient.
    pub fn square_free(&self) -> Vec<(UPoly, usize)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut k = 1;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((a.clone(), k));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            k += 1;
        }
        out
    }

    /// Sturm sequence `p, p', −rem(p, p'), …`. Each remainder is divided by
    /// the absolute value of its leading coefficient, which keeps signs.
    pub fn sturm(&self) -> Vec<UPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            let s = r.lead().abs().recip();
            seq.push(r.scale(&-s));
        }
        seq
    }

    /// Cauchy bound: every root lies in `(−B, B)`.
    pub fn root_bound(&self) -> Rational {
        let l = self.lead().abs();
        let mut m = Rational::zero();
        for a in &self.c[..self.c.len().saturating_sub(1)] {
            let r = &a.abs() / &l;
            if r > m {
                m = r;
            }
        }
        &m + &Rational::one()
    }

    /// Isolating intervals `[lo, hi]` of width at most `2^−bits` for the
    /// distinct real roots, in increasing order. `lo == hi` marks an exact
    /// rational root.
    pub fn real_roots(&self, bits: u32) -> Vec<(Rational, Rational)> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let sf = self.square_free().into_iter().fold(UPoly::constant(Rational::one()), |acc, (f, _)| acc.mul(&f));
        let seq = sf.sturm();
        let b = sf.root_bound();
        let width = Rational::one() / &Rational::from_int(2).pow(bits);
        let mut out = Vec::new();
        isolate(&sf, &seq, -&b, b, &width, &mut out);
        out
    }
}

fn sign_changes(seq: &[UPoly], x: &Rational) -> usize {
    let mut n = 0;
    let mut prev = 0;
    for p in seq {
        let s = p.eval(x).signum();
        if s != 0 {
            if prev != 0 && s != prev {
                n += 1;
            }
            prev = s;
        }
    }
    n
}

/// Roots in `(lo, hi]`.
fn isolate(p: &UPoly, seq: &[UPoly], lo: Rational, hi: Rational, width: &Rational, out: &mut Vec<(Rational, Rational)>) {
    let count = sign_changes(seq, &lo) - sign_changes(seq, &hi);
    if count == 0 {
        return;
    }
    if count == 1 {
        out.push(refine(p, lo, hi, width));
        return;
    }
    let mid = &(&lo + &hi) / &Rational::from_int(2);
    isolate(p, seq, lo, mid.clone(), width, out);
    isolate(p, seq, mid, hi, width, out);
}

/// Bisection on a single simple root in `(lo, hi]`.
fn refine(p: &UPoly, mut lo: Rational, mut hi: Rational, width: &Rational) -> (Rational, Rational) {
    let two = Rational::from_int(2);
    let sh = p.eval(&hi).signum();
    if sh == 0 {
        return (hi.clone(), hi);
    }
    while &(&hi - &lo) > width {
        let mid = &(&lo + &hi) / &two;
        match p.eval(&mid).signum() {
            0 => return (mid.clone(), mid),
            s if s == sh => hi = mid,
            _ => lo = mid,
        }
    }
    (lo, hi)
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", a)?,
                1 => write!(f, "{}*x", a)?,
                _ => write!(f, "{}*x^{}", a, k)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `det(x·I − M)` by similarity reduction to upper Hessenberg form and the
/// Hessenberg determinant recurrence, all in exact arithmetic.
pub fn charpoly(m: &[Vec<Rational>]) -> UPoly {
    let n = m.len();
    let mut a = m.to_vec();
    for k in 0..n.saturating_sub(2) {
        let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
            continue;
        };
        if p != k + 1 {
            a.swap(p, k + 1);
            for row in a.iter_mut() {
                row.swap(p, k + 1);
            }
        }
        let inv = a[k + 1][k].recip();
        for i in k + 2..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] * &inv;
            // row_i −= f·row_{k+1}, then col_{k+1} += f·col_i
            for j in 0..n {
                let t = &a[k + 1][j] * &f;
                a[i][j] -= &t;
            }
            for row in a.iter_mut() {
                let t = &row[i] * &f;
                row[k + 1] += &t;
            }
        }
    }
    // p_m = (x − h_mm) p_{m−1} − Σ_{i<m} h_im (Π_{j=i+1..m} h_{j,j−1}) p_{i−1}
    let mut ps: Vec<UPoly> = vec![UPoly::constant(Rational::one())];
    for mi in 0..n {
        let mut next = UPoly::linear(&a[mi][mi]).mul(&ps[mi]);
        let mut prod = Rational::one();
        for i in (0..mi).rev() {
            prod = &prod * &a[i + 1][i];
            if prod.is_zero() {
                break;
            }
            let c = &a[i][mi] * &prod;
            if !c.is_zero() {
                next = next.sub(&ps[i].scale(&c));
            }
        }
        ps.push(next);
    }
    ps.pop().expect("recurrence starts from 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::det;
    use crate::rational::q;

    fn up(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&x| Rational::from_int(x)).collect())
    }

    #[test]
    fn charpoly_matches_determinant_at_points() {
        let m: Vec<Vec<Rational>> = [[2, -1, 0, 3], [1, 0, 4, -2], [0, 5, 1, 1], [-3, 2, 2, 0]]
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
            .collect();
        let p = charpoly(&m);
        assert_eq!(p.degree(), 4);
        for t in [-3, -1, 0, 2, 7] {
            let x = Rational::from_int(t);
            let shifted: Vec<Vec<Rational>> = (0..4)
                .map(|i| (0..4).map(|j| if i == j { &x - &m[i][j] } else { -&m[i][j] }).collect())
                .collect();
            assert_eq!(p.eval(&x), det(&shifted));
        }
    }

    #[test]
    fn square_free_splits_multiplicities() {
        // (x−1)^3 (x+2)^2 (x^2+1)
        let p = up(&[-1, 1]).mul(&up(&[-1, 1])).mul(&up(&[-1, 1]));
        let p = p.mul(&up(&[2, 1])).mul(&up(&[2, 1])).mul(&up(&[1, 0, 1]));
        let sf = p.square_free();
        assert_eq!(sf, vec![(up(&[1, 0, 1]), 1), (up(&[2, 1]), 2), (up(&[-1, 1]), 3)]);
    }

    #[test]
    fn real_roots_of_a_cubic() {
        // x^3 − 2x has roots −√2, 0, √2
        let p = up(&[0, -2, 0, 1]);
        let r = p.real_roots(40);
        assert_eq!(r.len(), 3);
        assert_eq!(r[1], (Rational::zero(), Rational::zero()));
        let s2 = core::f64::consts::SQRT_2;
        assert!((r[2].0.to_f64() - s2).abs() < 1e-11);
        assert!((r[0].1.to_f64() + s2).abs() < 1e-11);
        assert!(&r[2].1 - &r[2].0 <= q(1, 1 << 40));
        assert!(up(&[1, 0, 1]).real_roots(10).is_empty());
    }
}
