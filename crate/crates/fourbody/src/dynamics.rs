//! Classical motion for `H = g^{μν}(x) P_μ P_ν + V(x)`, where `g` is the
//! metric of a catalog operator and `V` a rational potential.

use fourbody_core::{DiffOp, Poly, RatFunc, Rational, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::compiled::{CompiledPoly, CompiledRatFunc};

#[derive(Clone, Debug)]
pub struct ClassicalSystem {
    pub names: Vec<String>,
    metric: Vec<Vec<CompiledPoly>>,
    /// `dmetric[μ][a][b] = ∂_μ g^{ab}`.
    dmetric: Vec<Vec<Vec<CompiledPoly>>>,
    potential: Option<CompiledRatFunc>,
    /// Polynomials that stay positive inside the configuration space.
    domain: Vec<CompiledPoly>,
}

fn metric_poly(c: &RatFunc) -> Result<Poly> {
    c.to_poly()
        .ok_or_else(|| fourbody_core::Error::OutOfRange("metric entries must be polynomial".into()))
}

impl ClassicalSystem {
    /// `op` and `potential` must share a registry; `params` fixes every
    /// parameter (e.g. `d`, `omega`).
    pub fn new(op: &DiffOp, potential: Option<&RatFunc>, params: &[(&str, Rational)]) -> Result<Self> {
        let used: Vec<(&str, Rational)> = params
            .iter()
            .filter(|(n, _)| op.registry().index_of(n).is_some())
            .cloned()
            .collect();
        let op = op.specialize(&used)?;
        let reg = op.registry().clone();
        let n = reg.n_vars();
        let g = op.metric();
        let mut metric = Vec::with_capacity(n);
        let mut dmetric = vec![vec![Vec::with_capacity(n); n]; n];
        for row in &g {
            let mut r = Vec::with_capacity(n);
            for c in row {
                let p = metric_poly(c)?;
                for (mu, dm) in dmetric.iter_mut().enumerate() {
                    dm[metric.len()].push(CompiledPoly::new(&p.derivative(mu)));
                }
                r.push(CompiledPoly::new(&p));
            }
            metric.push(r);
        }
        let potential = match potential {
            Some(v) => {
                reg.ensure_same(v.registry())?;
                let mut v = v.specialize(&used)?;
                v.reduce();
                Some(CompiledRatFunc::new(&v))
            }
            None => None,
        };
        Ok(ClassicalSystem {
            names: reg.var_names().to_vec(),
            metric,
            dmetric,
            potential,
            domain: Vec::new(),
        })
    }

    /// Adds parameter-free polynomials that must stay positive along a
    /// trajectory. `det g > 0` alone can miss a crossing in one step.
    pub fn with_domain(mut self, polys: &[Poly]) -> Self {
        self.domain.extend(polys.iter().map(CompiledPoly::new));
        self
    }

    pub fn in_domain(&self, x: &[f64]) -> bool {
        self.det(x) > 0.0 && self.domain.iter().all(|p| p.eval(x) > 0.0)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn metric_at(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |a, b| self.metric[a][b].eval(x))
    }

    /// `det g(x)`; positive inside the configuration space.
    pub fn det(&self, x: &[f64]) -> f64 {
        self.metric_at(x).determinant()
    }

    pub fn potential(&self, x: &[f64]) -> f64 {
        self.potential.as_ref().map_or(0.0, |v| v.eval(x))
    }

    pub fn kinetic(&self, x: &[f64], p: &[f64]) -> f64 {
        let g = self.metric_at(x);
        let pv = nalgebra::DVector::from_column_slice(p);
        (pv.transpose() * &g * &pv)[(0, 0)]
    }

    pub fn energy(&self, x: &[f64], p: &[f64]) -> f64 {
        self.kinetic(x, p) + self.potential(x)
    }

    /// `∂H/∂P = 2 g P`.
    pub fn velocity(&self, x: &[f64], p: &[f64]) -> Vec<f64> {
        let g = self.metric_at(x);
        let v = g * nalgebra::DVector::from_column_slice(p) * 2.0;
        v.iter().copied().collect()
    }

    /// `∂H/∂x_μ = P·∂_μ g·P + ∂_μ V`.
    pub fn force_gradient(&self, x: &[f64], p: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let dv = match &self.potential {
            Some(v) => v.eval_grad(x).1,
            None => vec![0.0; n],
        };
        (0..n)
            .map(|mu| {
                let mut s = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        s += p[a] * p[b] * self.dmetric[mu][a][b].eval(x);
                    }
                }
                s + dv[mu]
            })
            .collect()
    }

    fn rhs(&self, x: &[f64], p: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let dx = self.velocity(x, p);
        let dp = self.force_gradient(x, p).into_iter().map(|f| -f).collect();
        (dx, dp)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Rk4,
    /// Implicit generalized Störmer–Verlet (the Hamiltonian is not separable).
    StormerVerlet,
}

fn axpy(a: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| yi + a * xi).collect()
}

pub fn rk4_step(sys: &ClassicalSystem, x: &[f64], p: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
    rk4_stages(sys, x, p, h, false).expect("unchecked step always completes")
}

/// With `checked`, `None` when an intermediate stage leaves the domain; near
/// a collision one step can pass through it and land on a finite but
/// meaningless state.
fn rk4_stages(sys: &ClassicalSystem, x: &[f64], p: &[f64], h: f64, checked: bool) -> Option<(Vec<f64>, Vec<f64>)> {
    let inside = |y: &[f64]| !checked || sys.in_domain(y);
    let (k1x, k1p) = sys.rhs(x, p);
    let x2 = axpy(h / 2.0, &k1x, x);
    if !inside(&x2) {
        return None;
    }
    let (k2x, k2p) = sys.rhs(&x2, &axpy(h / 2.0, &k1p, p));
    let x3 = axpy(h / 2.0, &k2x, x);
    if !inside(&x3) {
        return None;
    }
    let (k3x, k3p) = sys.rhs(&x3, &axpy(h / 2.0, &k2p, p));
    let x4 = axpy(h, &k3x, x);
    if !inside(&x4) {
        return None;
    }
    let (k4x, k4p) = sys.rhs(&x4, &axpy(h, &k3p, p));
    let comb = |y: &[f64], k1: &[f64], k2: &[f64], k3: &[f64], k4: &[f64]| -> Vec<f64> {
        (0..y.len())
            .map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect()
    };
    Some((comb(x, &k1x, &k2x, &k3x, &k4x), comb(p, &k1p, &k2p, &k3p, &k4p)))
}

const FIXED_POINT_TOL: f64 = 1e-14;
const FIXED_POINT_ITERS: usize = 100;

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / (1.0 + y.abs()))
        .fold(0.0, f64::max)
}

pub fn verlet_step(sys: &ClassicalSystem, x: &[f64], p: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
    // p_half = p - h/2 ∂_x H(x, p_half)
    let mut ph = p.to_vec();
    for _ in 0..FIXED_POINT_ITERS {
        let next = axpy(-h / 2.0, &sys.force_gradient(x, &ph), p);
        let done = max_diff(&next, &ph) < FIXED_POINT_TOL;
        ph = next;
        if done {
            break;
        }
    }
    // x1 = x + h/2 (∂_P H(x, p_half) + ∂_P H(x1, p_half))
    let v0 = sys.velocity(x, &ph);
    let mut x1 = axpy(h, &v0, x);
    for _ in 0..FIXED_POINT_ITERS {
        let v1 = sys.velocity(&x1, &ph);
        let next: Vec<f64> = (0..x.len()).map(|i| x[i] + h / 2.0 * (v0[i] + v1[i])).collect();
        let done = max_diff(&next, &x1) < FIXED_POINT_TOL;
        x1 = next;
        if done {
            break;
        }
    }
    let p1 = axpy(-h / 2.0, &sys.force_gradient(&x1, &ph), &ph);
    (x1, p1)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IntegrateConfig {
    pub dt: f64,
    pub steps: usize,
    pub method: Method,
    /// Reject the run when the relative energy change in one step exceeds this.
    pub max_step_drift: Option<f64>,
    /// Keep every `record_every`-th state (the final state is always kept).
    pub record_every: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sample {
    pub t: f64,
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    pub energy: f64,
    pub det: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Stop {
    Completed,
    /// The state left the configuration space or stopped being finite.
    Boundary { step: usize },
    /// One step changed the energy by more than the configured bound.
    StepRejected { step: usize, drift: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub stop: Stop,
    /// `max_t |H(t) − H(0)| / |H(0)|` over all steps taken.
    pub max_rel_drift: f64,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory keeps its initial state")
    }
}

pub fn integrate(sys: &ClassicalSystem, x0: &[f64], p0: &[f64], cfg: &IntegrateConfig) -> Trajectory {
    let sample = |t: f64, x: &[f64], p: &[f64]| Sample {
        t,
        x: x.to_vec(),
        p: p.to_vec(),
        energy: sys.energy(x, p),
        det: sys.det(x),
    };
    let first = sample(0.0, x0, p0);
    let e0 = first.energy;
    let scale = e0.abs().max(f64::MIN_POSITIVE);
    let mut samples = vec![first];
    let (mut x, mut p) = (x0.to_vec(), p0.to_vec());
    let mut e_prev = e0;
    let mut max_rel_drift: f64 = 0.0;
    let every = cfg.record_every.max(1);
    let mut stop = Stop::Completed;
    let mut taken = 0;
    for step in 1..=cfg.steps {
        let next = match cfg.method {
            Method::Rk4 => rk4_stages(sys, &x, &p, cfg.dt, true),
            Method::StormerVerlet => Some(verlet_step(sys, &x, &p, cfg.dt)),
        };
        let Some((nx, np)) = next else {
            stop = Stop::Boundary { step };
            break;
        };
        let e = sys.energy(&nx, &np);
        if !sys.in_domain(&nx) || !e.is_finite() || nx.iter().chain(&np).any(|v| !v.is_finite()) {
            stop = Stop::Boundary { step };
            break;
        }
        let step_drift = (e - e_prev).abs() / scale;
        if let Some(bound) = cfg.max_step_drift {
            if step_drift > bound {
                stop = Stop::StepRejected { step, drift: step_drift };
                break;
            }
        }
        max_rel_drift = max_rel_drift.max((e - e0).abs() / scale);
        e_prev = e;
        x = nx;
        p = np;
        taken = step;
        if step % every == 0 || step == cfg.steps {
            samples.push(sample(step as f64 * cfg.dt, &x, &p));
        }
    }
    if samples.last().map(|s| s.x != x).unwrap_or(true) {
        samples.push(sample(taken as f64 * cfg.dt, &x, &p));
    }
    Trajectory {
        samples,
        stop,
        max_rel_drift,
    }
}

/// Order of convergence read off the maximal energy drift at `dt`, `dt/2`,
/// `dt/4` over the same time span, averaging `log2` of the two ratios.
pub fn drift_order(sys: &ClassicalSystem, x0: &[f64], p0: &[f64], dt: f64, t_end: f64, method: Method) -> (Vec<f64>, f64) {
    let drifts: Vec<f64> = (0..3)
        .map(|k| {
            let h = dt / f64::from(1u32 << k);
            let cfg = IntegrateConfig {
                dt: h,
                steps: (t_end / h).round() as usize,
                method,
                max_step_drift: None,
                record_every: usize::MAX,
            };
            integrate(sys, x0, p0, &cfg).max_rel_drift
        })
        .collect();
    let order = ((drifts[0] / drifts[1]).log2() + (drifts[1] / drifts[2]).log2()) / 2.0;
    (drifts, order)
}

/// CSV with columns `t`, one per coordinate, `p_<coordinate>` per momentum,
/// `H` (energy) and `D` (metric determinant).
pub fn write_csv<W: std::io::Write>(names: &[String], traj: &Trajectory, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![String::from("t")];
    header.extend(names.iter().cloned());
    header.extend(names.iter().map(|n| format!("p_{n}")));
    header.push("H".into());
    header.push("D".into());
    w.write_record(&header)?;
    for s in &traj.samples {
        let mut row = vec![format!("{:.17e}", s.t)];
        row.extend(s.x.iter().chain(&s.p).map(|v| format!("{v:.17e}")));
        row.push(format!("{:.17e}", s.energy));
        row.push(format!("{:.17e}", s.det));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
