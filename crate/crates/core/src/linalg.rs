//! Exact dense linear algebra over a coefficient field.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::Coeff;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<C: Coeff>(m: &mut [Vec<C>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].try_inv().expect("nonzero pivot must be invertible in a field");
        for v in m[r].iter_mut() {
            *v = v.mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = m[r][j].mul(&f);
                    m[i][j] = m[i][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<C: Coeff>(m: &[Vec<C>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// A solution of `a x = b` with free variables set to zero.
pub fn solve<C: Coeff>(a: &[Vec<C>], b: &[C]) -> Result<Vec<C>> {
    let n = a.first().map(|r| r.len()).unwrap_or(0);
    let mut aug: Vec<Vec<C>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.last() == Some(&n) {
        return Err(Error::Inconsistent(format!("{} equations in {} unknowns", a.len(), n)));
    }
    let mut x = alloc::vec![C::zero(); n];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = aug[r][n].clone();
    }
    Ok(x)
}

/// Basis of `{x : a x = 0}`.
pub fn nullspace<C: Coeff>(a: &[Vec<C>]) -> Vec<Vec<C>> {
    let n = a.first().map(|r| r.len()).unwrap_or(0);
    let mut m = a.to_vec();
    let piv = rref(&mut m);
    let mut out = Vec::new();
    for free in (0..n).filter(|c| !piv.contains(c)) {
        let mut v = alloc::vec![C::zero(); n];
        v[free] = C::one();
        for (r, &c) in piv.iter().enumerate() {
            v[c] = m[r][free].neg();
        }
        out.push(v);
    }
    out
}

pub fn det<C: Coeff>(m: &[Vec<C>]) -> C {
    let n = m.len();
    let mut a = m.to_vec();
    let mut acc = C::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return C::zero();
        };
        if p != c {
            a.swap(p, c);
            acc = acc.neg();
        }
        acc = acc.mul(&a[c][c]);
        let inv = a[c][c].try_inv().expect("field element");
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].mul(&inv);
            for j in c..n {
                let t = a[c][j].mul(&f);
                a[i][j] = a[i][j].sub(&t);
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, Rational};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| Rational::from_int(x)).collect()).collect()
    }

    #[test]
    fn rank_solve_null() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 1);
        for row in &a {
            let s = row.iter().zip(&ns[0]).fold(Rational::zero(), |acc, (x, y)| acc + x * y);
            assert!(s.is_zero());
        }
        let x = solve(&a, &[q(6, 1), q(12, 1), q(2, 1)]).unwrap();
        assert_eq!(x.len(), 3);
        assert!(solve(&a, &[q(1, 1), q(0, 1), q(0, 1)]).is_err());
        assert_eq!(det(&m(&[&[2, 1], &[7, 4]])), q(1, 1));
    }
}
