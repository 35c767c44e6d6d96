//! Floating-point evaluation of exact polynomials and rational functions.
//!
//! Exact objects are differentiated symbolically first and only then
//! flattened to `f64` term lists, so gradients carry no finite-difference
//! error.

use fourbody_core::{Poly, RatFunc, Rational, Result};

/// A polynomial as a flat list of `(exponents, coefficient)` in the
/// variables of its registry, with parameters already specialized.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    n: usize,
    terms: Vec<(Vec<u32>, f64)>,
}

impl CompiledPoly {
    /// Requires every parameter of `p` to be specialized away.
    pub fn new(p: &Poly) -> Self {
        let n = p.registry().n_vars();
        let len = p.registry().len();
        let terms = p
            .terms()
            .map(|(m, c)| {
                let e = m.exponents(len);
                debug_assert!(e[n..].iter().all(|&x| x == 0), "unspecialized parameter");
                (e[..n].to_vec(), c.to_f64())
            })
            .collect();
        CompiledPoly { n, terms }
    }

    pub fn n_vars(&self) -> usize {
        self.n
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (xi, &k) in x.iter().zip(e) {
                t *= xi.powi(k as i32);
            }
            acc += t;
        }
        acc
    }
}

/// `num / den` with symbolic partial derivatives of both.
#[derive(Clone, Debug)]
pub struct CompiledRatFunc {
    num: CompiledPoly,
    den: CompiledPoly,
    dnum: Vec<CompiledPoly>,
    dden: Vec<CompiledPoly>,
}

impl CompiledRatFunc {
    pub fn new(f: &RatFunc) -> Self {
        let num = f.numerator().clone();
        let den = f.denominator();
        let n = num.registry().n_vars();
        CompiledRatFunc {
            num: CompiledPoly::new(&num),
            den: CompiledPoly::new(&den),
            dnum: (0..n).map(|i| CompiledPoly::new(&num.derivative(i))).collect(),
            dden: (0..n).map(|i| CompiledPoly::new(&den.derivative(i))).collect(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.num.eval(x) / self.den.eval(x)
    }

    /// Value and gradient by the quotient rule.
    pub fn eval_grad(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let n = self.num.eval(x);
        let d = self.den.eval(x);
        let g = self
            .dnum
            .iter()
            .zip(&self.dden)
            .map(|(dn, dd)| (dn.eval(x) * d - n * dd.eval(x)) / (d * d))
            .collect();
        (n / d, g)
    }
}

/// Specializes every parameter of `f` and compiles it.
pub fn compile_specialized(f: &RatFunc, params: &[(&str, Rational)]) -> Result<CompiledRatFunc> {
    let mut g = f.specialize(params)?;
    g.reduce();
    Ok(CompiledRatFunc::new(&g))
}
