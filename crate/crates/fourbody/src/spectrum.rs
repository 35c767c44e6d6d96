//! Level tables for `h^(qes)` on `𝒫_N`.
//!
//! At `A = 0` the exact triangular diagonal is authoritative. For `A ≠ 0`
//! eigenvalues come from the exact characteristic polynomial, isolated to
//! `precision_bits`. Both are cross-checked against a double-precision
//! eigen-solve of the same matrix.

use fourbody_core::qes::{self, QesMatrix, QesParams};
use fourbody_core::{Rational, Result};
use nalgebra::{DMatrix, Schur};
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Level {
    pub level: usize,
    /// Polynomial degree of the eigenfunctions (`A = 0` only).
    pub degree: Option<u32>,
    /// Exact rational, or `[lo, hi]` when only an isolating interval is known.
    pub eigenvalue_exact: String,
    pub eigenvalue: f64,
    /// `E₀ + eigenvalue`.
    pub energy: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub schema_version: u32,
    pub gamma: String,
    pub omega: String,
    pub a: String,
    pub n: u32,
    pub precision_bits: u32,
    pub basis_dimension: usize,
    pub ground_energy: String,
    pub levels: Vec<Level>,
    /// Eigenvalues off the real line, with multiplicity.
    pub non_real: usize,
    /// Gap between consecutive levels when it is constant (`A = 0`).
    pub measured_spacing: Option<String>,
    /// The published level spacing `12ω`.
    pub published_spacing: String,
    pub spacing_matches_published: Option<bool>,
    /// Largest distance between a double-precision eigenvalue and its exact
    /// counterpart, both sorted by real part; absent when the floating-point
    /// solver did not converge.
    pub float_cross_check: Option<f64>,
    pub float_max_imaginary: Option<f64>,
}

fn interval(lo: &Rational, hi: &Rational) -> String {
    if lo == hi {
        lo.to_string()
    } else {
        format!("[{lo}, {hi}]")
    }
}

const SCHUR_MAX_ITER: usize = 100_000;
const SCHUR_TOLERANCES: [f64; 2] = [1e-14, 1e-12];

/// Double-precision eigenvalues of the matrix, sorted by real part; `None`
/// when the Schur iteration does not converge.
pub fn float_eigenvalues(m: &QesMatrix) -> Option<Vec<(f64, f64)>> {
    let n = m.dim();
    let dense = m.dense();
    let a = DMatrix::from_fn(n, n, |i, j| dense[i][j].to_f64());
    // deflating at machine epsilon stalls on the highly degenerate multiplets
    let schur = SCHUR_TOLERANCES
        .iter()
        .find_map(|&eps| Schur::try_new(a.clone(), eps, SCHUR_MAX_ITER))?;
    let mut ev: Vec<(f64, f64)> = schur.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect();
    ev.sort_by(|x, y| x.0.total_cmp(&y.0));
    Some(ev)
}

pub fn spectrum(params: &QesParams, precision_bits: u32) -> Result<SpectrumReport> {
    let m = qes::qes_matrix(params)?;
    let e0 = params.ground_energy();
    let e0f = e0.to_f64();
    let mut levels = Vec::new();
    let mut non_real = 0;
    let mut measured_spacing = None;
    if params.a.is_zero() {
        for (i, l) in qes::es_levels(&m)?.into_iter().enumerate() {
            levels.push(Level {
                level: i,
                degree: Some(l.degree),
                eigenvalue_exact: l.eigenvalue.to_string(),
                eigenvalue: l.eigenvalue.to_f64(),
                energy: (&l.eigenvalue + &e0).to_f64(),
                multiplicity: l.multiplicity,
            });
        }
        measured_spacing = constant_gap(&m)?;
    } else {
        let sp = qes::exact_spectrum(&m, precision_bits.max(53));
        non_real = sp.non_real;
        for (i, e) in sp.real.iter().enumerate() {
            let mid = e.midpoint().to_f64();
            levels.push(Level {
                level: i,
                degree: None,
                eigenvalue_exact: interval(&e.lo, &e.hi),
                eigenvalue: mid,
                energy: mid + e0f,
                multiplicity: e.multiplicity,
            });
        }
    }
    let exact: Vec<f64> = levels
        .iter()
        .flat_map(|l| std::iter::repeat_n(l.eigenvalue, l.multiplicity))
        .collect();
    let float = float_eigenvalues(&m);
    let float_cross_check = float.as_ref().map(|f| {
        if exact.len() == f.len() {
            exact.iter().zip(f).map(|(a, (re, _))| (a - re).abs()).fold(0.0, f64::max)
        } else {
            f64::INFINITY
        }
    });
    let published = &Rational::from_int(12) * &params.omega;
    Ok(SpectrumReport {
        schema_version: SCHEMA_VERSION,
        gamma: params.gamma.to_string(),
        omega: params.omega.to_string(),
        a: params.a.to_string(),
        n: params.n,
        precision_bits,
        basis_dimension: m.dim(),
        ground_energy: e0.to_string(),
        non_real,
        spacing_matches_published: measured_spacing.as_ref().map(|s: &Rational| *s == published),
        measured_spacing: measured_spacing.map(|s| s.to_string()),
        published_spacing: published.to_string(),
        levels,
        float_cross_check,
        float_max_imaginary: float.map(|f| f.iter().map(|z| z.1.abs()).fold(0.0, f64::max)),
    })
}

/// The common gap between consecutive exact levels, if there is one.
fn constant_gap(m: &QesMatrix) -> Result<Option<Rational>> {
    let levels = qes::es_levels(m)?;
    let gaps: Vec<Rational> = levels.windows(2).map(|w| &w[1].eigenvalue - &w[0].eigenvalue).collect();
    Ok(match gaps.first() {
        Some(g) if gaps.iter().all(|x| x == g) => Some(g.clone()),
        _ => None,
    })
}

/// CSV with columns `level,degree,eigenvalue,energy,multiplicity`.
pub fn write_csv<W: std::io::Write>(report: &SpectrumReport, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["level", "degree", "eigenvalue", "energy", "multiplicity"])?;
    for l in &report.levels {
        w.write_record([
            l.level.to_string(),
            l.degree.map(|d| d.to_string()).unwrap_or_default(),
            format!("{:.17e}", l.eigenvalue),
            format!("{:.17e}", l.energy),
            l.multiplicity.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
