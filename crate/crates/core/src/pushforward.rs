//! Change-of-variables certification and the flat Cartesian oracle.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::rational::Rational;
use crate::ratfunc::RatFunc;
use crate::registry::Registry;
use crate::scalar::Coeff;

/// All exponent vectors over `n` variables with total degree `<= max_deg`,
/// in ascending graded order.
pub fn monomials_up_to(n: usize, max_deg: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for deg in 0..=max_deg {
        let mut cur = alloc::vec![0u32; n];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            let n = cur.len();
            if i == n - 1 {
                cur[i] = left;
                out.push(cur.clone());
                cur[i] = 0;
                return;
            }
            for k in (0..=left).rev() {
                cur[i] = k;
                rec(i + 1, left - k, cur, out);
            }
            cur[i] = 0;
        }
        if n == 0 {
            if deg == 0 {
                out.push(Vec::new());
            }
            continue;
        }
        rec(0, deg, &mut cur, &mut out);
    }
    out
}

/// One monomial whose residual did not vanish.
#[derive(Clone, Debug)]
pub struct ResidualWitness {
    pub monomial: String,
    pub residual: String,
}

#[derive(Clone, Debug)]
pub struct PushforwardReport {
    pub checked: usize,
    pub failures: Vec<ResidualWitness>,
}

impl PushforwardReport {
    pub fn all_zero(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Images of every target indeterminate in the source registry: explicit
/// entries of `phi` first, otherwise a source indeterminate of the same name.
pub fn target_images<C: Coeff>(
    src: &Registry,
    tgt: &Registry,
    phi: &[(&str, Poly<C>)],
) -> Result<Vec<Poly<C>>> {
    let mut images = Vec::with_capacity(tgt.len());
    for name in tgt.names() {
        if let Some((_, p)) = phi.iter().find(|(n, _)| *n == name.as_str()) {
            src.ensure_same(p.registry())?;
            images.push(p.clone());
        } else if let Some(i) = src.index_of(name) {
            images.push(Poly::var(src, i));
        } else {
            return Err(Error::UnknownIndeterminate(name.clone()));
        }
    }
    Ok(images)
}

/// For every target monomial `m` of degree `<= degree_bound` in the target
/// variables, checks `src(m∘φ) = (tgt m)∘φ` exactly.
pub fn pushforward_check<C: Coeff>(
    src: &DiffOp<C>,
    phi: &[(&str, Poly<C>)],
    tgt: &DiffOp<C>,
    degree_bound: u32,
) -> Result<PushforwardReport> {
    let sreg = src.registry().clone();
    let treg = tgt.registry().clone();
    let images = target_images(&sreg, &treg, phi)?;
    let nt = treg.n_vars();
    let mut failures = Vec::new();
    let mut checked = 0;
    for e in monomials_up_to(nt, degree_bound) {
        let m = Poly::monomial(&treg, Monomial::from_exponents(&e), C::one());
        let composed = m.compose(&images)?;
        let lhs = src.apply_poly(&composed)?;
        let rhs = tgt.apply_poly(&m)?.compose(&images)?;
        let res = lhs.checked_sub(&rhs)?;
        checked += 1;
        if !res.is_zero() {
            failures.push(ResidualWitness {
                monomial: format!("{}", m),
                residual: format!("{}", res.reduced()),
            });
        }
    }
    Ok(PushforwardReport { checked, failures })
}

/// Setup for comparing an operator on pairwise squared distances against the
/// mass-weighted flat Laplacian of point coordinates.
pub struct CartesianOracle {
    pub n_bodies: usize,
    pub dim: usize,
    pub masses: Vec<Rational>,
    /// Body pair `(i, j)` (0-based) for each operator variable, in registry order.
    pub pairs: Vec<(usize, usize)>,
    coords: Registry,
}

impl CartesianOracle {
    pub fn new(n_bodies: usize, dim: usize, masses: Vec<Rational>, pairs: Vec<(usize, usize)>) -> Self {
        assert_eq!(masses.len(), n_bodies);
        let names: Vec<String> = (0..n_bodies)
            .flat_map(|i| (0..dim).map(move |a| format!("x{}_{}", i + 1, a + 1)))
            .collect();
        let coords = Registry::from_names(names, Vec::new());
        CartesianOracle {
            n_bodies,
            dim,
            masses,
            pairs,
            coords,
        }
    }

    pub fn coordinate_registry(&self) -> &Registry {
        &self.coords
    }

    fn coord(&self, i: usize, a: usize) -> Poly<Rational> {
        Poly::var(&self.coords, i * self.dim + a)
    }

    /// Squared distance between bodies `i` and `j` as a coordinate polynomial.
    pub fn rho(&self, i: usize, j: usize) -> Poly<Rational> {
        let mut acc = Poly::zero(&self.coords);
        for a in 0..self.dim {
            let t = &self.coord(i, a) - &self.coord(j, a);
            acc = &acc + &(&t * &t);
        }
        acc
    }

    /// Images of the operator registry: pair variables become squared
    /// distances, `d` the dimension and `m1..` the masses.
    pub fn images(&self, reg: &Registry) -> Result<Vec<Poly<Rational>>> {
        let mut images = Vec::with_capacity(reg.len());
        for (k, name) in reg.names().iter().enumerate() {
            if k < reg.n_vars() {
                let (i, j) = *self
                    .pairs
                    .get(k)
                    .ok_or_else(|| Error::OutOfRange(format!("no pair for variable {}", name)))?;
                images.push(self.rho(i, j));
            } else if name == "d" {
                images.push(Poly::from_int(&self.coords, self.dim as i64));
            } else if let Some(idx) = name.strip_prefix('m').and_then(|s| s.parse::<usize>().ok()) {
                let m = self
                    .masses
                    .get(idx.wrapping_sub(1))
                    .ok_or_else(|| Error::UnknownIndeterminate(name.clone()))?;
                images.push(Poly::from_rational(&self.coords, m.clone()));
            } else {
                return Err(Error::UnknownIndeterminate(name.clone()));
            }
        }
        Ok(images)
    }

    /// `Σ_i (1/(2 m_i)) Δ_{x_i} F`.
    pub fn flat_kinetic(&self, f: &Poly<Rational>) -> Poly<Rational> {
        let mut acc = Poly::zero(&self.coords);
        for i in 0..self.n_bodies {
            let w = Rational::new(1, 2) / &self.masses[i];
            let mut lap = Poly::zero(&self.coords);
            for a in 0..self.dim {
                let v = i * self.dim + a;
                lap = &lap + &f.derivative(v).derivative(v);
            }
            acc = &acc + &lap.scale(&w);
        }
        acc
    }

    /// Residual `Σ (1/2m_i) Δ_i (f∘ρ) − (op f)∘ρ`; zero means the operator
    /// reproduces the flat kinetic operator on `f`.
    pub fn residual(&self, op: &DiffOp<Rational>, f: &Poly<Rational>) -> Result<RatFunc<Rational>> {
        let images = self.images(op.registry())?;
        let lifted = f.compose(&images)?;
        let lhs = RatFunc::from_poly(self.flat_kinetic(&lifted));
        let rhs = op.apply_poly(f)?.compose(&images)?;
        lhs.checked_sub(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ratfunc;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_up_to(3, 2).len(), 10);
        assert_eq!(monomials_up_to(6, 3).len(), 84);
    }

    #[test]
    fn two_body_radial_operator() {
        // A single squared distance: (1/μ)(2ρ ∂² + d ∂) with 1/μ = 1/m1 + 1/m2.
        let r = Registry::new(&["r12"], &["d", "m1", "m2"]);
        let mut op = DiffOp::zero(&r);
        op.add_pair(0, 0, parse_ratfunc(&r, "2*r12*(1/m1 + 1/m2)").unwrap());
        op.add_first(0, parse_ratfunc(&r, "d*(1/m1 + 1/m2)").unwrap());
        let oracle = CartesianOracle::new(2, 3, alloc::vec![Rational::new(2, 1), Rational::new(1, 3)], alloc::vec![(0, 1)]);
        let f = crate::parse::parse_poly(&r, "r12^3 - 2*r12 + 1").unwrap();
        assert!(oracle.residual(&op, &f).unwrap().is_zero());
    }
}
