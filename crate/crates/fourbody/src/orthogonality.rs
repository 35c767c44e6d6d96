//! Monte Carlo Gram matrices of the `A = 0` eigenpolynomials.
//!
//! The weight is the Riemannian density of the radial metric times the
//! squared ground state, `D^{−1/2} Ψ₀² ∝ F₁^{γ−1/2} e^{−2ωP}` on the
//! configuration space.
//!
//! Two samplers are available. `Gaussian` draws four independent points in
//! `ℝ^k`, `k = 2γ + 3`, with per-coordinate variance `1/(16ω)`. The induced
//! law of the squared distances is `F₁^{(k−4)/2} e^{−2ωP}`, which is the
//! weight itself, so no sample is wasted or weighted. It needs `2γ` to be a
//! nonnegative integer. `Rejection` draws the six squared distances from
//! `Exp(2ω)`, keeps those that form a tetrahedron and weights them by
//! `F₁^{γ−1/2}`; it works for any `γ > −1/2`.
//!
//! The weight factorizes into scale and shape: with `ρ = P ρ̂`, `P` is
//! independent of `ρ̂` and follows `Gamma(9/2 + 3γ, 2ω)`, since `F₁` is cubic
//! and `dρ = P⁵ dP dρ̂`. Only the shape is sampled; a monomial of degree
//! `k` contributes `m(ρ̂)` times the exact moment `E[P^k]`. This removes the
//! scale fluctuations, which dominate the error between levels of
//! different degree.
//!
//! The weight is also invariant under the 24 relabelings of the bodies, so
//! the accumulated moments are averaged over that group.
//!
//! Moments of all monomials of degree `≤ 2N` are accumulated once; the Gram
//! matrix of any polynomials of degree `≤ N` is then `C M Cᵀ`.

use fourbody_core::geometry::{config_space_test, Region};
use fourbody_core::qes::{self, es_eigenpolynomial};
use fourbody_core::{Error, Rational, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampler {
    Gaussian,
    Rejection,
}

#[derive(Clone, Debug)]
pub struct OrthoConfig {
    pub gamma: Rational,
    pub omega: Rational,
    /// Highest level included.
    pub n: u32,
    pub samples: u64,
    pub seed: u64,
    pub sampler: Sampler,
    /// `(γ, ω)` of the sampled weight when it should differ from those of
    /// the polynomials, for negative controls.
    pub weight: Option<(Rational, Rational)>,
}

const CHUNK: u64 = 100_000;

/// Exponent vectors of all monomials of degree `≤ n` in six variables.
fn exponents(n: u32) -> Vec<[u32; 6]> {
    let mut out = Vec::new();
    let mut e = [0u32; 6];
    fn rec(i: usize, left: u32, e: &mut [u32; 6], out: &mut Vec<[u32; 6]>) {
        if i == 6 {
            out.push(*e);
            return;
        }
        for k in 0..=left {
            e[i] = k;
            rec(i + 1, left - k, e, out);
        }
        e[i] = 0;
    }
    rec(0, n, &mut e, &mut out);
    out.sort_by_key(|e| (e.iter().sum::<u32>(), std::cmp::Reverse(*e)));
    out
}

fn monomial_values(basis: &[[u32; 6]], rho: &[f64; 6], out: &mut [f64]) {
    for (v, e) in out.iter_mut().zip(basis) {
        let mut t = 1.0;
        for (x, &k) in rho.iter().zip(e) {
            t *= x.powi(k as i32);
        }
        *v = t;
    }
}

/// Weighted second moments `Σ w m_a m_b` and `Σ w`, `Σ w²`.
#[derive(Clone, Debug)]
struct Moments {
    m: Vec<f64>,
    w: f64,
    w2: f64,
    drawn: u64,
    kept: u64,
}

impl Moments {
    fn new(k: usize) -> Self {
        Moments {
            m: vec![0.0; k * k],
            w: 0.0,
            w2: 0.0,
            drawn: 0,
            kept: 0,
        }
    }

    fn add(&mut self, vals: &[f64], w: f64) {
        let k = vals.len();
        for a in 0..k {
            let wa = w * vals[a];
            let row = &mut self.m[a * k..a * k + k];
            for b in a..k {
                row[b] += wa * vals[b];
            }
        }
        self.w += w;
        self.w2 += w * w;
        self.kept += 1;
    }

    fn merge(mut self, o: Moments) -> Self {
        for (x, y) in self.m.iter_mut().zip(o.m) {
            *x += y;
        }
        self.w += o.w;
        self.w2 += o.w2;
        self.drawn += o.drawn;
        self.kept += o.kept;
        self
    }
}

fn gaussian_chunk(basis: &[[u32; 6]], dim: usize, sigma: f64, count: u64, rng: &mut ChaCha8Rng) -> Moments {
    let mut mom = Moments::new(basis.len());
    let mut vals = vec![0.0; basis.len()];
    let mut x = vec![[0.0f64; 4]; dim];
    for _ in 0..count {
        for c in x.iter_mut() {
            for v in c.iter_mut() {
                let z: f64 = StandardNormal.sample(rng);
                *v = sigma * z;
            }
        }
        let mut rho = [0.0; 6];
        let mut k = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                rho[k] = x.iter().map(|c| (c[i] - c[j]).powi(2)).sum();
                k += 1;
            }
        }
        let p: f64 = rho.iter().sum();
        let shape = rho.map(|r| r / p);
        monomial_values(basis, &shape, &mut vals);
        mom.add(&vals, 1.0);
    }
    mom.drawn = count;
    mom
}

/// Squared volume from squared distances (Cayley–Menger, scaled by 1/288).
fn volume_sq(r: &[f64; 6]) -> f64 {
    let [a, b, c, d, e, f] = *r; // 12 13 14 23 24 34
    let cm = [
        [0.0, 1.0, 1.0, 1.0, 1.0],
        [1.0, 0.0, a, b, c],
        [1.0, a, 0.0, d, e],
        [1.0, b, d, 0.0, f],
        [1.0, c, e, f, 0.0],
    ];
    nalgebra::Matrix5::from_fn(|i, j| cm[i][j]).determinant() / 288.0
}

fn heron(a: f64, b: f64, c: f64) -> f64 {
    (2.0 * (a * b + b * c + c * a) - a * a - b * b - c * c) / 16.0
}

fn in_configuration_space(r: &[f64; 6]) -> bool {
    let [a, b, c, d, e, f] = *r;
    heron(d, e, f) > 0.0 && heron(b, c, f) > 0.0 && heron(a, c, e) > 0.0 && heron(a, b, d) > 0.0 && volume_sq(r) > 0.0
}

fn rejection_chunk(basis: &[[u32; 6]], rate: f64, power: f64, count: u64, rng: &mut ChaCha8Rng) -> Moments {
    let mut mom = Moments::new(basis.len());
    let mut vals = vec![0.0; basis.len()];
    let exp = Exp::new(rate).expect("positive rate");
    for _ in 0..count {
        let rho: [f64; 6] = std::array::from_fn(|_| exp.sample(rng));
        if !in_configuration_space(&rho) {
            continue;
        }
        let p: f64 = rho.iter().sum();
        let shape = rho.map(|r| r / p);
        let w = volume_sq(&shape).powf(power);
        monomial_values(basis, &shape, &mut vals);
        mom.add(&vals, w);
    }
    mom.drawn = count;
    mom
}

/// Index maps of the monomial basis under the permutations of the bodies.
fn relabelings(basis: &[[u32; 6]]) -> Vec<Vec<usize>> {
    let pair = |i: usize, j: usize| {
        let (i, j) = (i.min(j), i.max(j));
        match (i, j) {
            (0, 1) => 0,
            (0, 2) => 1,
            (0, 3) => 2,
            (1, 2) => 3,
            (1, 3) => 4,
            _ => 5,
        }
    };
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let perm = [a, b, c, d];
                    if (0..4).any(|i| (i + 1..4).any(|j| perm[i] == perm[j])) {
                        continue;
                    }
                    let image: Vec<usize> = basis
                        .iter()
                        .map(|e| {
                            let mut f = [0u32; 6];
                            for (k, &(i, j)) in pairs.iter().enumerate() {
                                f[pair(perm[i], perm[j])] = e[k];
                            }
                            basis.iter().position(|g| *g == f).expect("basis closed under relabeling")
                        })
                        .collect();
                    out.push(image);
                }
            }
        }
    }
    out
}

fn symmetrize(m: &[Vec<f64>], basis: &[[u32; 6]]) -> Vec<Vec<f64>> {
    let k = basis.len();
    let perms = relabelings(basis);
    let mut out = vec![vec![0.0; k]; k];
    for p in &perms {
        for a in 0..k {
            for b in 0..k {
                out[a][b] += m[p[a]][p[b]];
            }
        }
    }
    let n = perms.len() as f64;
    out.iter_mut().flatten().for_each(|x| *x /= n);
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenPoly {
    pub leading: [u32; 6],
    pub level: u32,
    pub eigenvalue: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrthoReport {
    pub gamma: String,
    pub omega: String,
    pub n: u32,
    pub sampler: Sampler,
    pub seed: u64,
    pub samples: u64,
    pub kept: u64,
    /// Kish effective sample size `(Σw)²/Σw²`.
    pub effective_samples: f64,
    pub polys: Vec<EigenPoly>,
    /// `|G_ij| / √(G_ii G_jj)`.
    pub ratios: Vec<Vec<f64>>,
    /// Largest ratio between polynomials of different levels.
    pub max_cross_level: f64,
    pub worst_pair: Option<(usize, usize)>,
    /// Largest ratio within one level; these are not expected to vanish.
    pub max_within_level: f64,
}

/// Exact coefficients of each eigenpolynomial on the monomial basis.
fn eigen_table(cfg: &OrthoConfig, basis: &[[u32; 6]]) -> Result<(Vec<EigenPoly>, Vec<Vec<f64>>)> {
    let mut polys = Vec::new();
    let mut coeffs = Vec::new();
    let len = qes::qes_registry().len();
    for alpha in basis {
        let (p, lambda) = es_eigenpolynomial(&cfg.gamma, &cfg.omega, alpha)?;
        let mut row = vec![0.0; basis.len()];
        for (m, c) in p.terms() {
            let e = m.exponents(len);
            let key: [u32; 6] = std::array::from_fn(|i| e[i]);
            let idx = basis
                .iter()
                .position(|b| *b == key)
                .ok_or_else(|| Error::Inconsistent(format!("eigenpolynomial term {key:?} above the level")))?;
            row[idx] = c.to_f64();
        }
        polys.push(EigenPoly {
            leading: *alpha,
            level: alpha.iter().sum(),
            eigenvalue: lambda.to_string(),
        });
        coeffs.push(row);
    }
    Ok((polys, coeffs))
}

pub fn orthogonality(cfg: &OrthoConfig) -> Result<OrthoReport> {
    let (w_gamma, w_omega) = cfg.weight.clone().unwrap_or_else(|| (cfg.gamma.clone(), cfg.omega.clone()));
    let omega = w_omega.to_f64();
    if omega <= 0.0 {
        return Err(Error::OutOfRange(String::from("omega must be positive")));
    }
    let gamma = w_gamma.to_f64();
    let basis_n = exponents(cfg.n);
    let (polys, coeffs) = eigen_table(cfg, &basis_n)?;
    let dim = match cfg.sampler {
        Sampler::Gaussian => {
            let k = &(&w_gamma * &Rational::from_int(2)) + &Rational::from_int(3);
            match k.to_i64() {
                Some(k) if k >= 3 => k as usize,
                _ => return Err(Error::OutOfRange(String::from("the Gaussian sampler needs 2γ a nonnegative integer"))),
            }
        }
        Sampler::Rejection => {
            if gamma <= -0.5 {
                return Err(Error::OutOfRange(String::from("the weight needs γ > −1/2")));
            }
            0
        }
    };
    let sigma = (1.0 / (16.0 * omega)).sqrt();
    let chunks = cfg.samples.div_ceil(CHUNK);
    let k = basis_n.len();
    let mom = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(c);
            let count = CHUNK.min(cfg.samples - c * CHUNK);
            match cfg.sampler {
                Sampler::Gaussian => gaussian_chunk(&basis_n, dim, sigma, count, &mut rng),
                Sampler::Rejection => rejection_chunk(&basis_n, 2.0 * omega, gamma - 0.5, count, &mut rng),
            }
        })
        .reduce(|| Moments::new(k), Moments::merge);
    if mom.kept == 0 {
        return Err(Error::Inconsistent(String::from("no sample landed in the configuration space")));
    }
    // symmetric moment matrix, normalized by total weight, with the exact
    // scale moments restored
    let alpha = 4.5 + 3.0 * gamma;
    let scale_moment = |deg: u32| (0..deg).map(|i| (alpha + f64::from(i)) / (2.0 * omega)).product::<f64>();
    let deg = |a: usize| basis_n[a].iter().sum::<u32>();
    let mut m = vec![vec![0.0; k]; k];
    for a in 0..k {
        for b in a..k {
            let v = mom.m[a * k + b] / mom.w * scale_moment(deg(a) + deg(b));
            m[a][b] = v;
            m[b][a] = v;
        }
    }
    let m = symmetrize(&m, &basis_n);
    let np = coeffs.len();
    let mut gram = vec![vec![0.0; np]; np];
    for i in 0..np {
        for j in i..np {
            let mut s = 0.0;
            for a in 0..k {
                if coeffs[i][a] == 0.0 {
                    continue;
                }
                for b in 0..k {
                    s += coeffs[i][a] * m[a][b] * coeffs[j][b];
                }
            }
            gram[i][j] = s;
            gram[j][i] = s;
        }
    }
    let ratios: Vec<Vec<f64>> = (0..np)
        .map(|i| (0..np).map(|j| gram[i][j].abs() / (gram[i][i] * gram[j][j]).sqrt()).collect())
        .collect();
    let mut max_cross_level = 0.0;
    let mut worst_pair = None;
    let mut max_within_level: f64 = 0.0;
    for i in 0..np {
        for j in i + 1..np {
            if polys[i].level != polys[j].level {
                if ratios[i][j] > max_cross_level {
                    max_cross_level = ratios[i][j];
                    worst_pair = Some((i, j));
                }
            } else {
                max_within_level = max_within_level.max(ratios[i][j]);
            }
        }
    }
    Ok(OrthoReport {
        gamma: cfg.gamma.to_string(),
        omega: cfg.omega.to_string(),
        n: cfg.n,
        sampler: cfg.sampler,
        seed: cfg.seed,
        samples: mom.drawn,
        kept: mom.kept,
        effective_samples: mom.w * mom.w / mom.w2,
        polys,
        ratios,
        max_cross_level,
        worst_pair,
        max_within_level,
    })
}

/// Agreement of the floating-point configuration test with the exact one on
/// a rational point; used to keep the two in step.
pub fn configuration_test_agrees(rho: &[Rational; 6]) -> bool {
    let f: [f64; 6] = std::array::from_fn(|i| rho[i].to_f64());
    let exact = config_space_test(rho).region == Region::Interior;
    exact == in_configuration_space(&f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn basis_sizes() {
        assert_eq!(exponents(0).len(), 1);
        assert_eq!(exponents(2).len(), 28);
        assert_eq!(exponents(4).len(), 210);
    }

    #[test]
    fn twenty_four_relabelings() {
        let b = exponents(2);
        let r = relabelings(&b);
        assert_eq!(r.len(), 24);
        assert!(r.iter().all(|p| p[0] == 0));
    }

    #[test]
    fn unit_tetrahedron_volume() {
        assert!((volume_sq(&[1.0; 6]) - 1.0 / 72.0).abs() < 1e-15);
        assert!((heron(1.0, 1.0, 1.0) - 3.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn float_and_exact_configuration_tests_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let rho: [Rational; 6] = std::array::from_fn(|_| Rational::new(rng.random_range(1..40), rng.random_range(1..8)));
            assert!(configuration_test_agrees(&rho), "{rho:?}");
        }
    }
}
