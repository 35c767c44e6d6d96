//! Words in the generators of the affine subalgebra of `sl(n+1)` realized by
//! first-order operators on `n` variables:
//!
//! ```text
//! J⁻_i = ∂_i,   J⁰_ij = x_i ∂_j,   J⁰(N) = Σ x_k ∂_k − N,   J⁺_i(N) = x_i J⁰(N)
//! ```
//!
//! `N` is the registry parameter named `N`.

use alloc::vec::Vec;

use crate::diffop::DiffOp;
use crate::error::Result;
use crate::poly::{Monomial, Poly};
use crate::ratfunc::RatFunc;
use crate::registry::Registry;
use crate::scalar::Coeff;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gen {
    Lower(usize),
    Zero(usize, usize),
    Euler,
    Raise(usize),
}

/// A linear combination of generator words. A word `[a, b]` stands for the
/// operator product `J_a J_b` (so `J_b` acts first).
#[derive(Clone, Debug)]
pub struct GeneratorExpr<C: Coeff = crate::rational::Rational> {
    pub reg: Registry,
    pub terms: Vec<(RatFunc<C>, Vec<Gen>)>,
}

impl<C: Coeff> GeneratorExpr<C> {
    pub fn new(reg: &Registry) -> Self {
        GeneratorExpr {
            reg: reg.clone(),
            terms: Vec::new(),
        }
    }

    pub fn push(&mut self, coeff: RatFunc<C>, word: &[Gen]) {
        self.terms.push((coeff, word.to_vec()));
    }

    /// Adds `c` times the word, with a rational coefficient.
    pub fn push_rational(&mut self, c: crate::rational::Rational, word: &[Gen]) {
        let coeff = RatFunc::constant(&self.reg, C::from_rational(c));
        self.push(coeff, word);
    }

    /// True when no raising generator or `J⁰(N)` occurs, so the operator
    /// preserves every space of polynomials of bounded degree.
    pub fn is_affine_lowering(&self) -> bool {
        self.terms
            .iter()
            .all(|(_, w)| w.iter().all(|g| matches!(g, Gen::Lower(_) | Gen::Zero(_, _))))
    }

    /// Substitutes the realization of every generator and multiplies out.
    pub fn expand(&self) -> Result<DiffOp<C>> {
        let mut out = DiffOp::zero(&self.reg);
        for (c, word) in &self.terms {
            let mut acc = DiffOp::identity(&self.reg);
            for g in word {
                acc = acc.checked_compose(&realize(&self.reg, *g)?)?;
            }
            out = out.checked_add(&acc.scale(c))?;
        }
        out.reduce();
        Ok(out)
    }
}

/// The first-order operator realizing a single generator.
pub fn realize<C: Coeff>(reg: &Registry, g: Gen) -> Result<DiffOp<C>> {
    let n = reg.n_vars();
    let x = |i: usize| RatFunc::from_poly(Poly::var(reg, i));
    Ok(match g {
        Gen::Lower(i) => DiffOp::partial(reg, i),
        Gen::Zero(i, j) => DiffOp::term(Monomial::var(j), x(i)),
        Gen::Euler => euler(reg, n)?,
        Gen::Raise(i) => {
            let e = euler(reg, n)?;
            DiffOp::multiplication(x(i)).checked_compose(&e)?
        }
    })
}

fn euler<C: Coeff>(reg: &Registry, n: usize) -> Result<DiffOp<C>> {
    let nn = reg.require("N")?;
    let mut op = DiffOp::zero(reg);
    for k in 0..n {
        op.add_first(k, RatFunc::from_poly(Poly::var(reg, k)));
    }
    op.add_term(Monomial::one(), -RatFunc::from_poly(Poly::var(reg, nn)));
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ratfunc;
    use crate::rational::Rational;

    #[test]
    fn diagonal_times_lowering() {
        let r = Registry::new(&["x", "y"], &["N"]);
        let mut e = GeneratorExpr::<Rational>::new(&r);
        e.push_rational(Rational::one(), &[Gen::Zero(0, 0), Gen::Lower(0)]);
        let mut expect = DiffOp::zero(&r);
        expect.add_pair(0, 0, parse_ratfunc(&r, "x").unwrap());
        assert!(e.expand().unwrap().equals(&expect));
    }

    #[test]
    fn raising_kills_top_degree() {
        let r = Registry::new(&["x", "y"], &["N"]);
        let op: DiffOp = realize(&r, Gen::Raise(1)).unwrap();
        let f = crate::parse::parse_poly(&r, "x^2 + x*y").unwrap();
        let out = op.specialize(&[("N", Rational::from_int(2))]).unwrap().apply_poly(&f).unwrap();
        assert!(out.is_zero());
    }
}
