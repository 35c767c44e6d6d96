//! Exactly and quasi-exactly solvable potentials on the space of squared
//! distances, built from the ground-state ansatz
//! `Ψ₀ = |F₂|^{1/4} F₁^{γ/2} e^{−ωP − (A/2)P²}`.
//!
//! All operators live on the registry `rho.. ; d, gamma, omega, A, N`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::catalog::{self, in_rho, op_from_table, LIE_ADJACENT, LIE_THIRD};
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::gauge::{gauge_conjugate, GaugeFactor};
use crate::generators::{Gen, GeneratorExpr};
use crate::geometry::{edges_p, f1, f2, rho_registry};
use crate::metric::{laplace_beltrami, MetricBundle};
use crate::parse::{parse_poly, parse_ratfunc};
use crate::poly::{Monomial, Poly};
use crate::pushforward::monomials_up_to;
use crate::rational::Rational;
use crate::ratfunc::RatFunc;
use crate::registry::Registry;
use crate::univariate::{charpoly, UPoly};

pub fn qes_registry() -> Registry {
    rho_registry(&["d", "gamma", "omega", "A", "N"])
}

/// `Ψ₀`. The power of `F₂ = 36V − PS` is taken as a power of `|F₂|`; only
/// its logarithmic derivative enters, which is insensitive to the sign.
pub fn psi0(reg: &Registry) -> Result<GaugeFactor> {
    let q = parse_poly(reg, "-omega")?;
    let p = edges_p(reg);
    let half_a = parse_poly(reg, "-A/2")?;
    let exp = &(&q * &p) + &(&half_a * &p.pow(2));
    Ok(GaugeFactor::power(f2(reg), parse_ratfunc(reg, "1/4")?)
        .with_power(f1(reg), parse_ratfunc(reg, "gamma/2")?)
        .with_exp(exp))
}

/// `E₀ = 12ω(3 + 2γ)`.
pub fn ground_energy(reg: &Registry) -> Result<RatFunc> {
    parse_ratfunc(reg, "12*omega*(3 + 2*gamma)")
}

/// Laplace–Beltrami operator of the radial metric, on `reg`.
pub fn lb_operator(reg: &Registry) -> Result<DiffOp> {
    let radial = catalog::build("delta-radial-rho")?.op;
    laplace_beltrami(&MetricBundle::of(&radial)?)?.embed(reg)
}

/// `Ψ₀⁻¹ Δ_LB Ψ₀`. Expensive (about a minute); compute once and pass to
/// [`computed_v0`] and [`conjugated_hamiltonian`].
pub fn rotated_lb(reg: &Registry) -> Result<DiffOp> {
    gauge_conjugate(&lb_operator(reg)?, &psi0(reg)?)
}

/// `Δ_LB Ψ₀ / Ψ₀ + E₀`, the zeroth-order part of [`rotated_lb`] shifted by `E₀`.
pub fn computed_v0(rotated: &DiffOp) -> Result<RatFunc> {
    let reg = rotated.registry();
    let mut v = rotated.zeroth_coeff().checked_add(&ground_energy(reg)?)?;
    v.reduce();
    Ok(v)
}

const F2_TERM: &str = "(3*P^2 + 112*S)/(32*(36*V - P*S))";
const F2_TERM_FLIPPED: &str = "(3*P^2 + 112*S)/(32*(P*S - 36*V))";

/// The ground-state potential with the singular term over `PS − 36V`, the
/// sign under which it matches the gauge computation.
pub fn corrected_v0(reg: &Registry) -> Result<RatFunc> {
    in_rho(
        reg,
        &format!("{F2_TERM_FLIPPED} + gamma*(gamma-1)*S/(18*V) + 8*omega^2*P + 4*A*P*(4*omega*P - 6*gamma - 11) + 8*A^2*P^3"),
    )
}

/// Effective potential of the radial Laplacian with the singular term over
/// `PS − 36V`.
pub fn corrected_v_eff(reg: &Registry) -> Result<RatFunc> {
    in_rho(reg, &format!("{F2_TERM_FLIPPED} + (d-5)*(d-3)*S/(72*V)"))
}

/// The published ground-state potential.
pub fn printed_v0(reg: &Registry) -> Result<RatFunc> {
    in_rho(
        reg,
        &format!("{F2_TERM} + gamma*(gamma-1)*S/(18*V) + 8*omega^2*P + 4*A*P*(4*omega*P - 6*gamma - 11) + 8*A^2*P^3"),
    )
}

/// The published QES potential `V_N`.
pub fn printed_vqes(reg: &Registry) -> Result<RatFunc> {
    in_rho(
        reg,
        &format!("{F2_TERM} + gamma*(gamma-1)*S/(18*V) + 8*omega^2*P + 4*A*P*(4*omega*P - 6*gamma - 11 - 4*N) + 8*A^2*P^3"),
    )
}

/// The published exactly-solvable potential (`A = 0`).
pub fn printed_ves(reg: &Registry) -> Result<RatFunc> {
    in_rho(reg, &format!("{F2_TERM} + gamma*(gamma-1)*S/(18*V) + 8*omega^2*P"))
}

/// The published QES potential for the original problem in relative
/// coordinates, `V_N − V_eff`.
pub fn printed_vrel(reg: &Registry) -> Result<RatFunc> {
    in_rho(
        reg,
        "(4*gamma*(gamma-1) - (d-5)*(d-3))/72*S/V + 8*omega^2*P + 4*A*P*(4*omega*P - 6*gamma - 11 - 4*N) + 8*A^2*P^3",
    )
}

pub fn harmonic(reg: &Registry) -> Result<RatFunc> {
    in_rho(reg, "8*omega^2*P")
}

/// `ΔV_N = 16 A N P`.
pub fn delta_vn(reg: &Registry) -> Result<RatFunc> {
    in_rho(reg, "16*A*N*P")
}

/// `Ψ₀⁻¹ (−Δ_LB + V − E₀) Ψ₀ = −Ψ₀⁻¹ Δ_LB Ψ₀ + V − E₀` for a potential `V`.
pub fn conjugated_hamiltonian(rotated: &DiffOp, v: &RatFunc) -> Result<DiffOp> {
    let reg = rotated.registry();
    let mut h = -rotated;
    h.add_term(Monomial::one(), v.checked_sub(&ground_energy(reg)?)?);
    h.reduce();
    Ok(h)
}

/// `h^(qes)` as an algebraic operator: twice the published `½h^(qes)(ρ)`.
pub fn h_qes(reg: &Registry) -> Result<DiffOp> {
    let p = "(rho12 + rho13 + rho14 + rho23 + rho24 + rho34)";
    let names = reg.var_names();
    let mut table: Vec<(String, String)> = Vec::new();
    for v in names {
        table.push((format!("{v},{v}"), format!("-2*{v}")));
        table.push((v.clone(), format!("-(2*gamma + 3) + 8*omega*{v} + 8*A*{p}*{v}")));
    }
    for (a, b, c) in catalog::ADJACENT {
        table.push((format!("{a},{b}"), format!("-({a} + {b} - {c})")));
    }
    table.push((String::new(), format!("-8*A*{p}*N")));
    let t: Vec<(&str, &str)> = table.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    Ok(op_from_table(reg, &t)?.scale_rational(&Rational::from_int(2)))
}

/// The sl(7) word for `½h^(qes)`. `cross` multiplies the twelve words
/// carrying the third edge of each triangle: `+1` reproduces [`h_qes`], the
/// published word has `+2`.
pub fn half_h_qes_word(reg: &Registry, cross: Rational) -> Result<GeneratorExpr> {
    use Gen::*;
    let mut e = GeneratorExpr::new(reg);
    for i in 0..6 {
        e.push_rational(Rational::from_int(-2), &[Zero(i, i), Lower(i)]);
    }
    for (i, js) in LIE_ADJACENT {
        for j in js {
            e.push_rational(-Rational::one(), &[Zero(i, i), Lower(j)]);
        }
    }
    for (k, l, m) in LIE_THIRD {
        e.push_rational(cross.clone(), &[Zero(k - 1, l - 1), Lower(m - 1)]);
    }
    let lower = parse_ratfunc(reg, "-(3 + 2*gamma)")?;
    let raise = parse_ratfunc(reg, "8*A")?;
    let euler = parse_ratfunc(reg, "8*omega")?;
    for i in 0..6 {
        e.push(lower.clone(), &[Lower(i)]);
        e.push(raise.clone(), &[Raise(i)]);
        e.push(euler.clone(), &[Zero(i, i)]);
    }
    Ok(e)
}

/// `−Δ_R(J) + 2(d−3−2γ)ΣJ⁻ + 16AΣJ⁺(N) + 16ωΣJ⁰_ii + ΔV_N`, the gauge-rotated
/// ground-state Hamiltonian as a generator word. `Δ_R(J)` is twice the
/// radial word with third-edge coefficient `radial_cross`.
pub fn rotated_hamiltonian_word(reg: &Registry, radial_cross: Rational) -> Result<GeneratorExpr> {
    use Gen::*;
    let radial = catalog::radial_lie_word(reg, radial_cross);
    let mut e = GeneratorExpr::new(reg);
    let minus_two = RatFunc::from_rational(reg, Rational::from_int(-2));
    for (c, w) in &radial.terms {
        e.push(c.checked_mul(&minus_two)?, w);
    }
    let lower = parse_ratfunc(reg, "2*(d - 3 - 2*gamma)")?;
    let raise = parse_ratfunc(reg, "16*A")?;
    let euler = parse_ratfunc(reg, "16*omega")?;
    for i in 0..6 {
        e.push(lower.clone(), &[Lower(i)]);
        e.push(raise.clone(), &[Raise(i)]);
        e.push(euler.clone(), &[Zero(i, i)]);
    }
    e.push(delta_vn(reg)?, &[]);
    Ok(e)
}

/// Numeric parameters of the QES family.
#[derive(Clone, Debug, PartialEq)]
pub struct QesParams {
    pub gamma: Rational,
    pub omega: Rational,
    pub a: Rational,
    pub n: u32,
}

impl QesParams {
    fn subs(&self) -> [(&'static str, Rational); 5] {
        [
            ("d", Rational::from_int(3)),
            ("gamma", self.gamma.clone()),
            ("omega", self.omega.clone()),
            ("A", self.a.clone()),
            ("N", Rational::from_int(self.n as i64)),
        ]
    }

    /// `E₀` at these parameters.
    pub fn ground_energy(&self) -> Rational {
        Rational::from_int(12) * &self.omega * &(Rational::from_int(3) + &(Rational::from_int(2) * &self.gamma))
    }
}

/// Action of `h^(qes)` on the monomial basis of `𝒫_N`.
#[derive(Clone, Debug)]
pub struct QesMatrix {
    pub params: QesParams,
    /// Exponent vectors, ordered by total degree.
    pub basis: Vec<Vec<u32>>,
    /// Column `j` lists the nonzero entries `(i, h_ij)` of `h(basis_j)`.
    pub columns: Vec<Vec<(usize, Rational)>>,
}

impl QesMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.basis[i].iter().sum()
    }

    pub fn entry(&self, i: usize, j: usize) -> Rational {
        self.columns[j]
            .iter()
            .find(|(r, _)| *r == i)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn dense(&self) -> Vec<Vec<Rational>> {
        let n = self.dim();
        let mut m = alloc::vec![alloc::vec![Rational::zero(); n]; n];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, c) in col {
                m[*i][j] = c.clone();
            }
        }
        m
    }

    /// No entry maps a basis element to one of strictly higher degree.
    pub fn is_degree_lowering_or_preserving(&self) -> bool {
        self.columns
            .iter()
            .enumerate()
            .all(|(j, col)| col.iter().all(|(i, _)| self.degree(*i) <= self.degree(j)))
    }

    /// Within one degree, only diagonal entries are nonzero.
    pub fn is_diagonal_within_degree(&self) -> bool {
        self.columns.iter().enumerate().all(|(j, col)| {
            col.iter()
                .all(|(i, _)| *i == j || self.degree(*i) != self.degree(j))
        })
    }
}

/// Builds the matrix of `h^(qes)` on `𝒫_N`. An image leaving `𝒫_N` is an
/// [`Error::InvarianceViolation`].
pub fn qes_matrix(params: &QesParams) -> Result<QesMatrix> {
    let reg = qes_registry();
    let subs = params.subs();
    let sref: Vec<(&str, Rational)> = subs.iter().map(|(a, b)| (*a, b.clone())).collect();
    let h = h_qes(&reg)?.specialize(&sref)?;
    matrix_of(&h, params)
}

fn matrix_of(h: &DiffOp, params: &QesParams) -> Result<QesMatrix> {
    let reg = h.registry().clone();
    let n = reg.n_vars();
    let mut basis = monomials_up_to(n, params.n);
    basis.sort_by_key(|e| (e.iter().sum::<u32>(), core::cmp::Reverse(e.clone())));
    let index: BTreeMap<Vec<u32>, usize> = basis.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let mut columns = Vec::with_capacity(basis.len());
    for e in &basis {
        let mut full = e.clone();
        full.resize(reg.len(), 0);
        let m = Poly::monomial(&reg, Monomial::from_exponents(&full), Rational::one());
        let img = h
            .apply_poly(&m)?
            .to_poly()
            .ok_or_else(|| Error::InvarianceViolation(String::from("non-polynomial image")))?;
        let mut col = Vec::new();
        for (mono, c) in img.terms() {
            let ex = mono.exponents(reg.len());
            if ex[n..].iter().any(|&x| x != 0) {
                return Err(Error::InvarianceViolation(format!("image of {:?} depends on a parameter", e)));
            }
            let key = ex[..n].to_vec();
            let i = *index
                .get(&key)
                .ok_or_else(|| Error::InvarianceViolation(format!("image of {:?} contains {:?}", e, key)))?;
            col.push((i, c.clone()));
        }
        col.sort_by_key(|(i, _)| *i);
        columns.push(col);
    }
    Ok(QesMatrix {
        params: params.clone(),
        basis,
        columns,
    })
}

/// One level of the exactly-solvable (`A = 0`) spectrum of `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct EsLevel {
    pub degree: u32,
    /// Eigenvalue of `h^(qes)`; the energy is this plus `E₀`.
    pub eigenvalue: Rational,
    pub multiplicity: usize,
}

/// Reads the `A = 0` spectrum from the exact diagonal, after checking the
/// matrix is triangular in the degree grading with a constant diagonal per
/// degree.
pub fn es_levels(m: &QesMatrix) -> Result<Vec<EsLevel>> {
    if !m.params.a.is_zero() {
        return Err(Error::OutOfRange(String::from("exact levels need A = 0")));
    }
    if !m.is_degree_lowering_or_preserving() || !m.is_diagonal_within_degree() {
        return Err(Error::Inconsistent(String::from("matrix is not triangular in the degree grading")));
    }
    let mut levels: Vec<EsLevel> = Vec::new();
    for i in 0..m.dim() {
        let k = m.degree(i);
        let ev = m.entry(i, i);
        match levels.last_mut() {
            Some(l) if l.degree == k => {
                if l.eigenvalue != ev {
                    return Err(Error::Inconsistent(format!("degree {} carries two diagonal values", k)));
                }
                l.multiplicity += 1;
            }
            _ => levels.push(EsLevel {
                degree: k,
                eigenvalue: ev,
                multiplicity: 1,
            }),
        }
    }
    Ok(levels)
}

/// Eigenpolynomial of `h^(qes)` at `A = 0` with leading monomial `ρ^α`:
/// lower-degree corrections are fixed degree by degree since each degree
/// `j` carries the single diagonal value `16ωj`.
pub fn es_eigenpolynomial(gamma: &Rational, omega: &Rational, alpha: &[u32]) -> Result<(Poly, Rational)> {
    let k: u32 = alpha.iter().sum();
    let params = QesParams {
        gamma: gamma.clone(),
        omega: omega.clone(),
        a: Rational::zero(),
        n: k,
    };
    let reg = qes_registry();
    let sref: Vec<(&str, Rational)> = params.subs().iter().map(|(a, b)| (*a, b.clone())).collect();
    let h = h_qes(&reg)?.specialize(&sref)?;
    let diag = |j: u32| Rational::from_int(16 * j as i64) * omega;
    let lambda = diag(k);
    let mut full = alpha.to_vec();
    full.resize(reg.len(), 0);
    let mut p = Poly::monomial(&reg, Monomial::from_exponents(&full), Rational::one());
    for j in (0..k).rev() {
        let hp = h.apply_poly(&p)?.to_poly().ok_or_else(|| Error::Inconsistent(String::from("non-polynomial")))?;
        let r = &hp - &p.scale_rational(&lambda);
        let rj = r.var_degree_part(j);
        let gap = &lambda - &diag(j);
        if gap.is_zero() {
            return Err(Error::Inconsistent(String::from("degenerate levels (omega = 0)")));
        }
        p = &p + &rj.scale_rational(&gap.recip());
    }
    let hp = h.apply_poly(&p)?.to_poly().ok_or_else(|| Error::Inconsistent(String::from("non-polynomial")))?;
    if !(&hp - &p.scale_rational(&lambda)).is_zero() {
        return Err(Error::NotAnEigenvector(format!("{:?}", alpha)));
    }
    Ok((p, lambda))
}

/// A real eigenvalue of `h^(qes)` known to lie in `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenInterval {
    pub lo: Rational,
    pub hi: Rational,
    pub multiplicity: usize,
}

impl EigenInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Rational {
        &(&self.lo + &self.hi) / &Rational::from_int(2)
    }
}

/// Spectrum of the matrix from its exact characteristic polynomial.
#[derive(Clone, Debug)]
pub struct ExactSpectrum {
    pub charpoly: UPoly,
    /// Distinct real eigenvalues in increasing order.
    pub real: Vec<EigenInterval>,
    /// Eigenvalues off the real line, counted with multiplicity.
    pub non_real: usize,
}

impl ExactSpectrum {
    pub fn real_count(&self) -> usize {
        self.real.iter().map(|e| e.multiplicity).sum()
    }
}

/// Eigenvalues of `h^(qes)` on `𝒫_N` to within `2^−bits`, with
/// multiplicities from the square-free splitting of the characteristic
/// polynomial.
pub fn exact_spectrum(m: &QesMatrix, bits: u32) -> ExactSpectrum {
    let charpoly = charpoly(&m.dense());
    let mut real = Vec::new();
    let mut non_real = 0;
    for (f, k) in charpoly.square_free() {
        let roots = f.real_roots(bits);
        non_real += (f.degree() - roots.len()) * k;
        real.extend(roots.into_iter().map(|(lo, hi)| EigenInterval { lo, hi, multiplicity: k }));
    }
    real.sort_by(|a, b| a.lo.cmp(&b.lo));
    ExactSpectrum { charpoly, real, non_real }
}

/// Number of monomials of total degree `k` in six variables, `C(k+5, 5)`.
pub fn level_multiplicity(k: u32) -> usize {
    let k = k as usize;
    (1..=5).fold(1usize, |acc, i| acc * (k + i) / i)
}

/// `dim 𝒫_N = C(N+6, 6)`.
pub fn qes_dimension(n: u32) -> usize {
    (0..=n).map(level_multiplicity).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(level_multiplicity(0), 1);
        assert_eq!(level_multiplicity(1), 6);
        assert_eq!(level_multiplicity(2), 21);
        assert_eq!(level_multiplicity(3), 56);
        assert_eq!(qes_dimension(2), 28);
    }

    #[test]
    fn n_zero_annihilates_constants() {
        let m = qes_matrix(&QesParams {
            gamma: Rational::from_int(1),
            omega: Rational::from_int(1),
            a: Rational::from_int(1),
            n: 0,
        })
        .unwrap();
        assert_eq!(m.dim(), 1);
        assert!(m.columns[0].is_empty());
    }
}
