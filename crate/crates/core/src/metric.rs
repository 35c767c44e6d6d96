//! Metric data of second-order operators: symbolic determinants, factorization
//! certificates and the Laplace–Beltrami construction.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::Rational;
use crate::ratfunc::RatFunc;
use crate::registry::Registry;
use crate::scalar::Coeff;

/// Determinant of a square polynomial matrix by cofactor expansion along rows,
/// memoized over the set of remaining columns.
pub fn det_poly<C: Coeff>(m: &[Vec<Poly<C>>]) -> Poly<C> {
    let n = m.len();
    assert!(n <= 20, "matrix too large for subset expansion");
    if n == 0 {
        panic!("empty matrix");
    }
    let reg = m[0][0].registry().clone();
    let mut memo: BTreeMap<u32, Poly<C>> = BTreeMap::new();
    fn rec<C: Coeff>(
        m: &[Vec<Poly<C>>],
        row: usize,
        cols: u32,
        reg: &Registry,
        memo: &mut BTreeMap<u32, Poly<C>>,
    ) -> Poly<C> {
        let n = m.len();
        if row == n {
            return Poly::one(reg);
        }
        if let Some(p) = memo.get(&cols) {
            return p.clone();
        }
        let mut acc = Poly::zero(reg);
        let mut pos = 0;
        for j in 0..n {
            if cols & (1 << j) == 0 {
                continue;
            }
            if !m[row][j].is_zero() {
                let minor = rec(m, row + 1, cols & !(1 << j), reg, memo);
                let t = &m[row][j] * &minor;
                acc = if pos % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            pos += 1;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    rec(m, 0, (1u32 << n) - 1, &reg, &mut memo)
}

/// Determinant of a rational-function matrix: each row is brought to a common
/// denominator, the polynomial determinant is taken, and the row
/// denominators are divided back out.
pub fn det_ratfunc<C: Coeff>(m: &[Vec<RatFunc<C>>]) -> Result<RatFunc<C>> {
    let reg = m[0][0].registry().clone();
    let mut rows: Vec<Vec<Poly<C>>> = Vec::with_capacity(m.len());
    let mut dens: Vec<(Poly<C>, u32)> = Vec::new();
    for row in m {
        // Common denominator of the row: lcm of factor lists.
        let mut l: Vec<(Poly<C>, u32)> = Vec::new();
        for e in row {
            for (f, k) in e.denominator_factors() {
                match l.iter_mut().find(|(g, _)| g == f) {
                    Some((_, kk)) => *kk = (*kk).max(*k),
                    None => l.push((f.clone(), *k)),
                }
            }
        }
        let mut prow = Vec::with_capacity(row.len());
        for e in row {
            let mut cof = Poly::one(&reg);
            for (f, k) in &l {
                let have = e
                    .denominator_factors()
                    .iter()
                    .find(|(g, _)| g == f)
                    .map(|x| x.1)
                    .unwrap_or(0);
                cof = &cof * &f.pow(*k - have);
            }
            prow.push(e.numerator() * &cof);
        }
        rows.push(prow);
        dens.extend(l);
    }
    let d = det_poly(&rows);
    let mut r = RatFunc::from_factors(d, &dens)?;
    r.reduce();
    Ok(r)
}

/// Outcome of dividing a determinant by a proposed product of factors.
#[derive(Clone, Debug)]
pub struct FactorCertificate<C: Coeff = Rational> {
    pub factors: Vec<Poly<C>>,
    pub quotient: Poly<C>,
    /// Remainder of the final division step (zero when every factor divides).
    pub remainder: Poly<C>,
    /// Index of the first factor that failed to divide, if any.
    pub failed_at: Option<usize>,
}

impl<C: Coeff> FactorCertificate<C> {
    /// True when all factors divide and the quotient is a constant.
    pub fn is_constant_multiple(&self) -> bool {
        self.failed_at.is_none() && self.quotient.is_constant()
    }

    pub fn constant(&self) -> Option<C> {
        if self.failed_at.is_none() {
            self.quotient.as_constant()
        } else {
            None
        }
    }

    /// True when all factors divide and the quotient contains no variable
    /// (it may still depend on parameters).
    pub fn is_param_multiple(&self) -> bool {
        self.failed_at.is_none() && self.quotient.is_var_free()
    }
}

/// Divides `d` successively by each factor, recording the quotient.
pub fn certify_factorization<C: Coeff>(d: &Poly<C>, factors: &[Poly<C>]) -> Result<FactorCertificate<C>> {
    let mut cur = d.clone();
    for (k, f) in factors.iter().enumerate() {
        let (q, r) = cur.div_rem(f)?;
        if !r.is_zero() {
            return Ok(FactorCertificate {
                factors: factors.to_vec(),
                quotient: q,
                remainder: r,
                failed_at: Some(k),
            });
        }
        cur = q;
    }
    Ok(FactorCertificate {
        factors: factors.to_vec(),
        quotient: cur,
        remainder: Poly::zero(d.registry()),
        failed_at: None,
    })
}

/// `det = c · claim` as rational functions, with `c` read off at a sample
/// point and the identity then checked exactly.
#[derive(Clone, Debug)]
pub struct RatioCertificate {
    pub constant: Option<Rational>,
    pub holds: bool,
}

/// Certifies that `det / claim` is a constant. Sample points are tried in
/// order until `claim` is nonzero at one of them.
pub fn certify_ratio(det: &RatFunc, claim: &RatFunc, samples: &[Vec<Rational>]) -> Result<RatioCertificate> {
    det.registry().ensure_same(claim.registry())?;
    for pt in samples {
        let (Ok(a), Ok(b)) = (det.eval(pt), claim.eval(pt)) else {
            continue;
        };
        if b.is_zero() {
            continue;
        }
        let c = a / b;
        let holds = det.equals(&claim.scale(&c));
        return Ok(RatioCertificate {
            constant: Some(c),
            holds,
        });
    }
    Ok(RatioCertificate {
        constant: None,
        holds: false,
    })
}

/// A contravariant metric together with the drift of its operator and determinant.
#[derive(Clone, Debug)]
pub struct MetricBundle<C: Coeff = Rational> {
    pub reg: Registry,
    pub g: Vec<Vec<RatFunc<C>>>,
    pub drift: Vec<RatFunc<C>>,
    pub det: RatFunc<C>,
}

impl<C: Coeff> MetricBundle<C> {
    /// Reads the metric and drift off a second-order operator.
    pub fn of(op: &DiffOp<C>) -> Result<Self> {
        let g = op.metric();
        let det = det_ratfunc(&g)?;
        Ok(MetricBundle {
            reg: op.registry().clone(),
            g,
            drift: op.drift(),
            det,
        })
    }

    pub fn from_matrix(reg: &Registry, g: Vec<Vec<RatFunc<C>>>) -> Result<Self> {
        let det = det_ratfunc(&g)?;
        Ok(MetricBundle {
            reg: reg.clone(),
            drift: (0..reg.n_vars()).map(|_| RatFunc::zero(reg)).collect(),
            g,
            det,
        })
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.g.len();
        (0..n).all(|i| (0..i).all(|j| self.g[i][j] == self.g[j][i]))
    }

    /// Drift `b^ν = Σ_μ ∂_μ g^{μν} − ½ Σ_μ g^{μν} ∂_μ D / D` of the
    /// Laplace–Beltrami operator built from this metric.
    pub fn lb_drift(&self) -> Result<Vec<RatFunc<C>>> {
        if self.det.is_zero() {
            return Err(Error::DegenerateMetric);
        }
        let n = self.reg.n_vars();
        let half = Rational::new(1, 2);
        let dlog: Vec<RatFunc<C>> = (0..n)
            .map(|mu| self.det.derivative(mu).checked_div(&self.det))
            .collect::<Result<_>>()?;
        let mut b = Vec::with_capacity(n);
        for nu in 0..n {
            let mut acc = RatFunc::zero(&self.reg);
            for mu in 0..n {
                acc = &acc + &self.g[mu][nu].derivative(mu);
                acc = &acc - &(&self.g[mu][nu] * &dlog[mu]).scale_rational(&half);
            }
            acc.reduce();
            b.push(acc);
        }
        Ok(b)
    }
}

/// `√D ∂_μ (1/√D) g^{μν} ∂_ν` with `D` the determinant of the contravariant
/// matrix, expanded into second- and first-order terms.
pub fn laplace_beltrami<C: Coeff>(metric: &MetricBundle<C>) -> Result<DiffOp<C>> {
    let b = metric.lb_drift()?;
    Ok(DiffOp::from_parts(
        &metric.reg,
        &metric.g,
        &b,
        RatFunc::zero(&metric.reg),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_poly, parse_ratfunc};

    #[test]
    fn one_dimensional_lb() {
        let r = Registry::new(&["P"], &[]);
        let g = alloc::vec![alloc::vec![parse_ratfunc::<Rational>(&r, "8*P").unwrap()]];
        let lb = laplace_beltrami(&MetricBundle::from_matrix(&r, g).unwrap()).unwrap();
        let mut expect = DiffOp::zero(&r);
        expect.add_pair(0, 0, parse_ratfunc(&r, "8*P").unwrap());
        expect.add_first(0, parse_ratfunc(&r, "4").unwrap());
        assert!(lb.equals(&expect));
    }

    #[test]
    fn constant_metric_has_no_drift() {
        let r = Registry::new(&["x", "y"], &[]);
        let c = |s: &str| parse_ratfunc::<Rational>(&r, s).unwrap();
        let g = alloc::vec![alloc::vec![c("2"), c("1")], alloc::vec![c("1"), c("3")]];
        let lb = laplace_beltrami(&MetricBundle::from_matrix(&r, g).unwrap()).unwrap();
        assert_eq!(lb.order(), 2);
        assert!(lb.first_coeff(0).is_zero() && lb.first_coeff(1).is_zero());
    }

    #[test]
    fn determinant_and_certificate() {
        let r = Registry::new(&["x", "y"], &[]);
        let p = |s: &str| parse_poly::<Rational>(&r, s).unwrap();
        let m = alloc::vec![alloc::vec![p("x"), p("y")], alloc::vec![p("y"), p("x")]];
        let d = det_poly(&m);
        assert_eq!(d, p("x^2 - y^2"));
        let cert = certify_factorization(&d, &[p("x+y"), p("x-y")]).unwrap();
        assert_eq!(cert.constant(), Some(Rational::one()));
        let bad = certify_factorization(&d, &[p("x+2*y")]).unwrap();
        assert_eq!(bad.failed_at, Some(0));
    }
}
