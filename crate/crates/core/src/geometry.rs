//! Geometry of the simplex spanned by the bodies: squared contents from
//! pairwise squared distances, the tetrahedron invariants and the
//! configuration-space predicate.
//!
//! Pair variables are named `rho{i}{j}` with 1-based body labels and `i < j`,
//! ordered lexicographically (`rho12, rho13, rho14, rho23, rho24, rho34` for
//! four bodies).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::metric::det_poly;
use crate::parse::parse_poly;
use crate::poly::Poly;
use crate::rational::Rational;
use crate::ratfunc::RatFunc;
use crate::registry::Registry;

/// Body pairs `(i, j)`, 0-based, in the canonical variable order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

pub fn pair_name(i: usize, j: usize) -> String {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    format!("rho{}{}", a + 1, b + 1)
}

pub fn pair_names(n: usize) -> Vec<String> {
    pairs(n).into_iter().map(|(i, j)| pair_name(i, j)).collect()
}

/// Registry of the `n(n-1)/2` pair variables followed by `params`.
pub fn rho_registry_n(n: usize, params: &[&str]) -> Registry {
    Registry::from_names(pair_names(n), params.iter().map(|s| String::from(*s)).collect())
}

/// Four-body pair registry.
pub fn rho_registry(params: &[&str]) -> Registry {
    rho_registry_n(4, params)
}

/// Index of pair `(i, j)` (0-based bodies, any order) among `n` bodies.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    assert!(a != b && b < n);
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

fn rho(reg: &Registry, i: usize, j: usize) -> Poly {
    Poly::named(reg, &pair_name(i, j))
}

/// Squared content of the simplex on `vertices` from the Cayley–Menger
/// determinant: `(-1)^{k+1} / (2^k (k!)^2) · det CM` for a `k`-simplex.
pub fn simplex_content_sq(reg: &Registry, vertices: &[usize]) -> Poly {
    let m = vertices.len();
    assert!(m >= 2);
    let k = m - 1;
    let size = m + 1;
    let mut cm = vec![vec![Poly::zero(reg); size]; size];
    for a in 1..size {
        cm[0][a] = Poly::one(reg);
        cm[a][0] = Poly::one(reg);
    }
    for a in 0..m {
        for b in 0..m {
            if a != b {
                cm[a + 1][b + 1] = rho(reg, vertices[a], vertices[b]);
            }
        }
    }
    let det = det_poly(&cm);
    det.scale_rational(&cm_normalization(k))
}

/// `(-1)^{k+1} / (2^k (k!)^2)`.
pub fn cm_normalization(k: usize) -> Rational {
    let mut fact = 1i64;
    for t in 2..=k as i64 {
        fact *= t;
    }
    let den = (1i64 << k) * fact * fact;
    let sign = if (k + 1) % 2 == 0 { 1 } else { -1 };
    Rational::new(sign, den)
}

/// All `size`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}

/// Sum of squared contents of all faces with `k` vertices among `n` bodies
/// (`k = 2` edges, `k = 3` triangles, ...). This is the volume variable
/// `V_k` of the `n`-body problem.
pub fn content_sum(reg: &Registry, n: usize, k: usize) -> Result<Poly> {
    if !(2..=n).contains(&k) || n > 9 {
        return Err(Error::OutOfRange(format!("faces with {} vertices among {} bodies", k, n)));
    }
    let mut acc = Poly::zero(reg);
    for s in subsets(n, k) {
        acc = &acc + &simplex_content_sq(reg, &s);
    }
    Ok(acc)
}

/// Heron quadratic `(2(ab+ac+bc) - (a²+b²+c²))/16`: squared area of a
/// triangle with squared sides `a, b, c`.
pub fn heron<T>(a: &T, b: &T, c: &T) -> T
where
    T: Clone + HeronArith,
{
    T::heron(a, b, c)
}

/// Arithmetic needed by [`heron`]; implemented for exact scalars and polynomials.
pub trait HeronArith: Sized {
    fn heron(a: &Self, b: &Self, c: &Self) -> Self;
}

impl HeronArith for Rational {
    fn heron(a: &Self, b: &Self, c: &Self) -> Self {
        let two = Rational::from_int(2);
        let cross = &(&(a * b) + &(a * c)) + &(b * c);
        let sq = &(&(a * a) + &(b * b)) + &(c * c);
        &(&(&two * &cross) - &sq) / &Rational::from_int(16)
    }
}

impl HeronArith for Poly {
    fn heron(a: &Self, b: &Self, c: &Self) -> Self {
        let cross = &(&(a * b) + &(a * c)) + &(b * c);
        let sq = &(&(a * a) + &(b * b)) + &(c * c);
        (&cross.scale_rational(&Rational::from_int(2)) - &sq).scale_rational(&Rational::new(1, 16))
    }
}

/// Face of the tetrahedron opposite each vertex, as its three edges.
pub const OPPOSITE_FACES: [[(usize, usize); 3]; 4] = [
    [(1, 2), (1, 3), (2, 3)],
    [(0, 2), (0, 3), (2, 3)],
    [(0, 1), (0, 3), (1, 3)],
    [(0, 1), (0, 2), (1, 2)],
];

/// Squared volume of the tetrahedron as the explicit cubic with prefactor 1/144.
pub fn volume_sq(reg: &Registry) -> Poly {
    parse_poly(
        reg,
        "(((rho13 + rho14 + rho23 + rho24)*rho34 - (rho13 - rho14)*(rho23 - rho24) - rho34^2)*rho12 \
         - rho13^2*rho24 - rho34*rho12^2 \
         + rho23*((rho14 - rho24)*rho34 - rho14*(rho14 + rho23 - rho24)) \
         + rho13*(rho14*(rho23 + rho24 - rho34) + rho24*(rho23 - rho24 + rho34)))/144",
    )
    .expect("volume polynomial parses over a four-body registry")
}

/// Squared area of the face opposite vertex `v`.
pub fn face_area_sq(reg: &Registry, v: usize) -> Poly {
    let f = OPPOSITE_FACES[v];
    heron(&rho(reg, f[0].0, f[0].1), &rho(reg, f[1].0, f[1].1), &rho(reg, f[2].0, f[2].1))
}

/// Sum of the four squared face areas.
pub fn faces_s(reg: &Registry) -> Poly {
    let mut acc = Poly::zero(reg);
    for v in 0..4 {
        acc = &acc + &face_area_sq(reg, v);
    }
    acc
}

/// Sum of the six squared edges.
pub fn edges_p(reg: &Registry) -> Poly {
    let mut acc = Poly::zero(reg);
    for (i, j) in pairs(4) {
        acc = &acc + &rho(reg, i, j);
    }
    acc
}

pub fn f1(reg: &Registry) -> Poly {
    volume_sq(reg)
}

/// `36·V − P·S`.
pub fn f2(reg: &Registry) -> Poly {
    &volume_sq(reg).scale_rational(&Rational::from_int(36)) - &(&edges_p(reg) * &faces_s(reg))
}

/// Sums of opposite edges `(rho12+rho34, rho13+rho24, rho23+rho14)`.
pub fn u_vars(reg: &Registry) -> [Poly; 3] {
    [
        &rho(reg, 0, 1) + &rho(reg, 2, 3),
        &rho(reg, 0, 2) + &rho(reg, 1, 3),
        &rho(reg, 1, 2) + &rho(reg, 0, 3),
    ]
}

/// Mass-weighted edge sum `Σ m_i m_j rho_ij`; masses are the registry
/// parameters `m1..m4`.
pub fn mass_edges_p(reg: &Registry) -> Result<Poly> {
    let mut acc = Poly::zero(reg);
    for (i, j) in pairs(4) {
        let mi = Poly::var(reg, reg.require(&format!("m{}", i + 1))?);
        let mj = Poly::var(reg, reg.require(&format!("m{}", j + 1))?);
        acc = &acc + &(&(&mi * &mj) * &rho(reg, i, j));
    }
    Ok(acc)
}

/// Mass-weighted face sum `Σ (1/m_i)·(squared area of the face opposite i)`.
pub fn mass_faces_s(reg: &Registry) -> Result<RatFunc> {
    let mut acc = RatFunc::zero(reg);
    for v in 0..4 {
        let m = Poly::var(reg, reg.require(&format!("m{}", v + 1))?);
        let t = RatFunc::new(face_area_sq(reg, v), m)?;
        acc = acc.checked_add(&t)?;
    }
    Ok(acc)
}

/// Numeric squared distances for four bodies in canonical order.
pub type RhoPoint = [Rational; 6];

/// Canonical ordering of a symmetric distance matrix.
pub fn rho_from_matrix(n: usize, m: &[Vec<Rational>]) -> Vec<Rational> {
    pairs(n).into_iter().map(|(i, j)| m[i][j].clone()).collect()
}

/// Squared distances of points given by rational coordinates.
pub fn rho_from_coords(points: &[Vec<Rational>]) -> Vec<Rational> {
    pairs(points.len())
        .into_iter()
        .map(|(i, j)| {
            let mut s = Rational::zero();
            for (a, b) in points[i].iter().zip(&points[j]) {
                let t = a - b;
                s += &(&t * &t);
            }
            s
        })
        .collect()
}

/// Determinant of a rational matrix by Gaussian elimination.
pub fn rational_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = &det * &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] = &a[r][c] - &t;
            }
        }
    }
    det
}

/// Squared content of a simplex from its squared-distance matrix via
/// Cayley–Menger (exact).
pub fn cayley_menger_content_sq(dist_sq: &[Vec<Rational>]) -> Rational {
    let m = dist_sq.len();
    let size = m + 1;
    let mut cm = vec![vec![Rational::zero(); size]; size];
    for a in 1..size {
        cm[0][a] = Rational::one();
        cm[a][0] = Rational::one();
        for b in 1..size {
            cm[a][b] = dist_sq[a - 1][b - 1].clone();
        }
    }
    &rational_det(&cm) * &cm_normalization(m - 1)
}

/// Squared content of a simplex from vertex coordinates via the Gram
/// determinant of edge vectors: `det G / (k!)^2`.
pub fn gram_content_sq(points: &[Vec<Rational>]) -> Rational {
    let k = points.len() - 1;
    let edges: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&points[0]).map(|(a, b)| a - b).collect())
        .collect();
    let mut g = vec![vec![Rational::zero(); k]; k];
    for a in 0..k {
        for b in 0..k {
            let mut s = Rational::zero();
            for (x, y) in edges[a].iter().zip(&edges[b]) {
                s += &(x * y);
            }
            g[a][b] = s;
        }
    }
    let mut fact = Rational::one();
    for t in 2..=k as i64 {
        fact = &fact * &Rational::from_int(t);
    }
    &rational_det(&g) / &(&fact * &fact)
}

/// Sum of squared contents of all faces with `k` vertices, from a numeric
/// squared-distance matrix of `n` points.
pub fn nbody_contents(dist_sq: &[Vec<Rational>], k: usize) -> Result<Rational> {
    let n = dist_sq.len();
    if !(2..=6).contains(&n) || !(2..=n).contains(&k) {
        return Err(Error::OutOfRange(format!("{}-vertex faces of {} points", k, n)));
    }
    let mut acc = Rational::zero();
    for s in subsets(n, k) {
        let sub: Vec<Vec<Rational>> = s.iter().map(|&a| s.iter().map(|&b| dist_sq[a][b].clone()).collect()).collect();
        acc += &cayley_menger_content_sq(&sub);
    }
    Ok(acc)
}

/// Full symmetric matrix from canonical pair values.
pub fn matrix_from_rho(n: usize, rho: &[Rational]) -> Vec<Vec<Rational>> {
    let mut m = vec![vec![Rational::zero(); n]; n];
    for (k, (i, j)) in pairs(n).into_iter().enumerate() {
        m[i][j] = rho[k].clone();
        m[j][i] = rho[k].clone();
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    Interior,
    Boundary,
    Outside,
}

/// Classification of a four-body point with the values that decided it.
#[derive(Clone, Debug)]
pub struct ConfigReport {
    pub region: Region,
    /// Squared face areas, opposite vertex 1..4.
    pub faces: [Rational; 4],
    pub volume_sq: Rational,
    pub notes: Vec<String>,
}

/// Exact membership test: every squared distance and every face Heron value
/// nonnegative and the squared volume nonnegative. Any exact zero among
/// them places the point on the boundary.
pub fn config_space_test(rho: &RhoPoint) -> ConfigReport {
    let m = matrix_from_rho(4, rho);
    let faces: [Rational; 4] = core::array::from_fn(|v| {
        let f = OPPOSITE_FACES[v];
        heron(&m[f[0].0][f[0].1], &m[f[1].0][f[1].1], &m[f[2].0][f[2].1])
    });
    let vol = volume_at(rho);
    let mut notes = Vec::new();
    let mut outside = false;
    let mut boundary = false;
    for (k, r) in rho.iter().enumerate() {
        match r.signum() {
            -1 => {
                outside = true;
                notes.push(format!("negative squared distance at pair {}", k + 1));
            }
            0 => {
                boundary = true;
                notes.push(format!("coincident bodies at pair {}", k + 1));
            }
            _ => {}
        }
    }
    for (v, a) in faces.iter().enumerate() {
        match a.signum() {
            -1 => {
                outside = true;
                notes.push(format!("triangle inequality violated on face opposite {}", v + 1));
            }
            0 => {
                boundary = true;
                notes.push(format!("degenerate face opposite {}", v + 1));
            }
            _ => {}
        }
    }
    match vol.signum() {
        -1 => {
            outside = true;
            notes.push(String::from("negative squared volume"));
        }
        0 => {
            boundary = true;
            notes.push(String::from("flat tetrahedron"));
        }
        _ => {}
    }
    let region = if outside {
        Region::Outside
    } else if boundary {
        Region::Boundary
    } else {
        Region::Interior
    };
    ConfigReport {
        region,
        faces,
        volume_sq: vol,
        notes,
    }
}

fn volume_at(rho: &RhoPoint) -> Rational {
    cayley_menger_content_sq(&matrix_from_rho(4, rho))
}

/// Numeric volume variables `(V, S, P)`.
pub fn volume_vars_at(rho: &RhoPoint) -> (Rational, Rational, Rational) {
    let m = matrix_from_rho(4, rho);
    let mut s = Rational::zero();
    for f in OPPOSITE_FACES {
        s += &heron(&m[f[0].0][f[0].1], &m[f[1].0][f[1].1], &m[f[2].0][f[2].1]);
    }
    let mut p = Rational::zero();
    for r in rho {
        p += r;
    }
    (volume_at(rho), s, p)
}

/// Numeric mass-weighted volume variables `(V, S~, P~)`.
pub fn mass_volume_vars_at(rho: &RhoPoint, masses: &[Rational; 4]) -> (Rational, Rational, Rational) {
    let m = matrix_from_rho(4, rho);
    let mut s = Rational::zero();
    for (v, f) in OPPOSITE_FACES.iter().enumerate() {
        let a = heron(&m[f[0].0][f[0].1], &m[f[1].0][f[1].1], &m[f[2].0][f[2].1]);
        s += &(&a / &masses[v]);
    }
    let mut p = Rational::zero();
    for (k, (i, j)) in pairs(4).into_iter().enumerate() {
        p += &(&(&masses[i] * &masses[j]) * &rho[k]);
    }
    (volume_at(rho), s, p)
}

/// Images of the pair variables under a relabeling of the bodies: the
/// variable for pair `(i, j)` is sent to the one for `(perm[i], perm[j])`.
pub fn relabel_images(reg: &Registry, n: usize, perm: &[usize]) -> Vec<(String, Poly)> {
    pairs(n)
        .into_iter()
        .map(|(i, j)| (pair_name(i, j), rho(reg, perm[i], perm[j])))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones() -> RhoPoint {
        core::array::from_fn(|_| Rational::one())
    }

    #[test]
    fn regular_tetrahedron_values() {
        let r = rho_registry(&[]);
        let pt: Vec<Rational> = ones().to_vec();
        assert_eq!(volume_sq(&r).eval(&pt), Rational::new(1, 72));
        assert_eq!(faces_s(&r).eval(&pt), Rational::new(3, 4));
        assert_eq!(edges_p(&r).eval(&pt), Rational::from_int(6));
        assert_eq!(volume_vars_at(&ones()).0, Rational::new(1, 72));
    }

    #[test]
    fn explicit_volume_matches_cayley_menger() {
        let r = rho_registry(&[]);
        assert_eq!(volume_sq(&r), simplex_content_sq(&r, &[0, 1, 2, 3]));
        assert_eq!(faces_s(&r), content_sum(&r, 4, 3).unwrap());
        assert_eq!(edges_p(&r), content_sum(&r, 4, 2).unwrap());
    }

    #[test]
    fn pair_indexing() {
        for n in 2..7 {
            for (k, (i, j)) in pairs(n).into_iter().enumerate() {
                assert_eq!(pair_index(n, i, j), k);
                assert_eq!(pair_index(n, j, i), k);
            }
        }
    }

    #[test]
    fn gram_and_cayley_menger_agree() {
        let pts = vec![
            vec![Rational::zero(), Rational::zero(), Rational::zero()],
            vec![Rational::from_int(2), Rational::zero(), Rational::new(1, 3)],
            vec![Rational::new(1, 2), Rational::from_int(3), Rational::zero()],
            vec![Rational::from_int(-1), Rational::new(2, 5), Rational::from_int(4)],
        ];
        let rho = rho_from_coords(&pts);
        let m = matrix_from_rho(4, &rho);
        assert_eq!(cayley_menger_content_sq(&m), gram_content_sq(&pts));
    }

    #[test]
    fn classification() {
        assert_eq!(config_space_test(&ones()).region, Region::Interior);
        // Unit square: planar, all faces proper.
        let mut flat = ones();
        flat[2] = Rational::from_int(2);
        flat[3] = Rational::from_int(2);
        assert_eq!(config_space_test(&flat).region, Region::Boundary);
        let mut far = ones();
        far[0] = Rational::from_int(100);
        assert_eq!(config_space_test(&far).region, Region::Outside);
    }
}
