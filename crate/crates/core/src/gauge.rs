//! Gauge factors `Γ = Π b_k^{e_k} · e^q` and conjugation `Γ⁻¹ L Γ`.

use alloc::vec::Vec;

use crate::diffop::DiffOp;
use crate::error::Result;
use crate::poly::{Monomial, Poly};
use crate::rational::Rational;
use crate::ratfunc::RatFunc;
use crate::registry::Registry;
use crate::scalar::Coeff;

/// Product of powers of polynomials times an exponential of a polynomial.
///
/// Exponents may depend on parameters (e.g. `(3-d)/4`) but not on the
/// variables, so logarithmic derivatives stay rational.
#[derive(Clone, Debug)]
pub struct GaugeFactor<C: Coeff = Rational> {
    pub reg: Registry,
    pub factors: Vec<(Poly<C>, RatFunc<C>)>,
    pub exp_part: Poly<C>,
}

impl<C: Coeff> GaugeFactor<C> {
    pub fn trivial(reg: &Registry) -> Self {
        GaugeFactor {
            reg: reg.clone(),
            factors: Vec::new(),
            exp_part: Poly::zero(reg),
        }
    }

    pub fn power(base: Poly<C>, exponent: RatFunc<C>) -> Self {
        let mut g = Self::trivial(base.registry());
        g.factors.push((base, exponent));
        g
    }

    pub fn exponential(q: Poly<C>) -> Self {
        let mut g = Self::trivial(q.registry());
        g.exp_part = q;
        g
    }

    pub fn with_power(mut self, base: Poly<C>, exponent: RatFunc<C>) -> Self {
        self.factors.push((base, exponent));
        self
    }

    pub fn with_exp(mut self, q: Poly<C>) -> Self {
        self.exp_part = &self.exp_part + &q;
        self
    }

    pub fn product(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.factors.extend(o.factors.iter().cloned());
        r.exp_part = &r.exp_part + &o.exp_part;
        r
    }

    pub fn inverse(&self) -> Self {
        GaugeFactor {
            reg: self.reg.clone(),
            factors: self.factors.iter().map(|(b, e)| (b.clone(), -e)).collect(),
            exp_part: -&self.exp_part,
        }
    }

    /// `∂_i log Γ = Σ e_k ∂_i b_k / b_k + ∂_i q`.
    pub fn log_derivative(&self, i: usize) -> Result<RatFunc<C>> {
        let mut w = RatFunc::from_poly(self.exp_part.derivative(i));
        for (b, e) in &self.factors {
            let db = b.derivative(i);
            if db.is_zero() || e.is_zero() {
                continue;
            }
            let t = RatFunc::new(db, b.clone())?;
            w = &w + &(&t * e);
        }
        Ok(w)
    }
}

/// `Γ⁻¹ ∘ L ∘ Γ`, obtained by replacing each `∂_i` with `∂_i + ∂_i log Γ`.
pub fn gauge_conjugate<C: Coeff>(op: &DiffOp<C>, gauge: &GaugeFactor<C>) -> Result<DiffOp<C>> {
    let reg = op.registry().clone();
    reg.ensure_same(&gauge.reg)?;
    let n = reg.n_vars();
    let mut shifted: Vec<DiffOp<C>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut d = DiffOp::partial(&reg, i);
        d.add_term(Monomial::one(), gauge.log_derivative(i)?);
        shifted.push(d);
    }
    let mut out = DiffOp::zero(&reg);
    for (alpha, c) in op.terms() {
        let mut word = DiffOp::identity(&reg);
        for (i, s) in shifted.iter().enumerate() {
            for _ in 0..alpha.exp(i) {
                word = word.checked_compose(s)?;
            }
        }
        out = out.checked_add(&word.scale(c))?;
    }
    out.reduce();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    #[test]
    fn exponential_shift() {
        let r = Registry::new(&["p"], &["w"]);
        let g = GaugeFactor::exponential(parse_poly::<Rational>(&r, "-w*p").unwrap());
        let out = gauge_conjugate(&DiffOp::partial(&r, 0), &g).unwrap();
        let mut expect = DiffOp::partial(&r, 0);
        expect.add_term(Monomial::one(), RatFunc::from_poly(parse_poly(&r, "-w").unwrap()));
        assert!(out.equals(&expect));
    }

    #[test]
    fn round_trip() {
        let r = Registry::new(&["x", "y"], &["d"]);
        let mut op = DiffOp::<Rational>::zero(&r);
        op.add_pair(0, 0, RatFunc::from_poly(parse_poly(&r, "x*y").unwrap()));
        op.add_pair(0, 1, RatFunc::from_poly(parse_poly(&r, "x + 2").unwrap()));
        op.add_first(1, RatFunc::from_poly(parse_poly(&r, "d").unwrap()));
        let e = crate::parse::parse_ratfunc(&r, "(1-d)/4").unwrap();
        let g = GaugeFactor::power(parse_poly(&r, "x^2 + y").unwrap(), e)
            .with_exp(parse_poly(&r, "x*y").unwrap());
        let there = gauge_conjugate(&op, &g).unwrap();
        let back = gauge_conjugate(&there, &g.inverse()).unwrap();
        assert!(back.equals(&op));
    }
}
