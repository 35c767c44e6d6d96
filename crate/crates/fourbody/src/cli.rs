//! Command-line frontend.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing identity, 2 on
//! malformed arguments or configuration.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fourbody_core::geometry::{self, config_space_test, mass_volume_vars_at, volume_vars_at, Region};
use fourbody_core::nbody::derive_coefficients;
use fourbody_core::qes::{self, QesParams};
use fourbody_core::{catalog, RatFunc, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dynamics::{self, integrate, IntegrateConfig, Method};
use crate::model::{Model, Potential, Space};
use crate::spectrum;
use crate::verify::{self, Status, VerifyConfig};

#[derive(Parser, Debug)]
#[command(name = "fourbody", version, about = "Exact and numerical tools for the reduced four-body problem")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

fn rational(s: &str) -> Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|e| e.to_string())
}

/// Physical parameters shared by several subcommands.
#[derive(Args, Debug, Clone, Default)]
pub struct Params {
    /// Spatial dimension
    #[arg(long, value_parser = rational)]
    pub d: Option<Rational>,
    #[arg(long, value_parser = rational)]
    pub gamma: Option<Rational>,
    #[arg(long, value_parser = rational)]
    pub omega: Option<Rational>,
    /// Coupling of the quasi-exactly-solvable term
    #[arg(long = "A", value_parser = rational)]
    pub a: Option<Rational>,
    /// Highest polynomial degree kept
    #[arg(long = "N")]
    pub n: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the identity suites and write a JSON report
    Verify {
        /// `all`, a criterion number 1-10, or a suite name
        #[arg(long, default_value = "all")]
        suite: Vec<String>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 10_000_000)]
        mc_samples: u64,
        #[arg(long, default_value_t = 20)]
        oracle_polys: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List catalog operators or print one
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Level table of the algebraic Hamiltonian on polynomials of degree <= N
    Spectrum {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 64)]
        precision_bits: u32,
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Potentials of the quasi-exactly-solvable family, optionally specialized
    Potentials {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate a classical trajectory and write CSV
    Trajectory {
        /// JSON file with the run description; flags override its fields
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum)]
        space: Option<SpaceArg>,
        /// none, harmonic, exactly-solvable, or an expression in V, S, P
        #[arg(long)]
        potential: Option<String>,
        /// Add the effective potential of the gauge rotation
        #[arg(long)]
        effective: bool,
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        record_every: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        x0: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        p0: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Derive the volume-variable operator for n bodies
    NbodyDerive {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        certificate_degree: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a point given by its six squared distances
    Geometry {
        /// rho12,rho13,rho14,rho23,rho24,rho34
        #[arg(long, value_parser = rational, value_delimiter = ',', required = true)]
        rho: Vec<Rational>,
        /// Four masses, comma separated, for the mass-weighted variables
        #[arg(long, value_parser = rational, value_delimiter = ',')]
        masses: Option<Vec<Rational>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogAction {
    List,
    Show {
        id: String,
        #[arg(long, value_enum, default_value_t = OpFormat::Text)]
        format: OpFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OpFormat {
    /// Canonical serialization, stable byte for byte
    Golden,
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceArg {
    Rho,
    Volume,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    Rk4,
    StormerVerlet,
}

/// Malformed input (exit 2) or a failed identity (exit 1).
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
    /// The reader of standard output went away; not an error.
    Closed,
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            CliError::Closed
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(e) => e.into(),
            k => CliError::Usage(format!("{k:?}")),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        match e.io_error_kind() {
            Some(io::ErrorKind::BrokenPipe) => CliError::Closed,
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<fourbody_core::Error> for CliError {
    fn from(e: fourbody_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

fn output(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => Box::new(File::create(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: Serialize>(out: &Option<PathBuf>, v: &T) -> CliResult {
    let mut w = output(out)?;
    serde_json::to_writer_pretty(&mut w, v)?;
    writeln!(w)?;
    Ok(())
}

pub fn run(cli: Cli) -> ExitCode {
    let r = match cli.command {
        Command::Verify {
            suite,
            seed,
            mc_samples,
            oracle_polys,
            out,
        } => verify_cmd(&suite, seed, mc_samples, oracle_polys, &out),
        Command::Catalog { action } => catalog_cmd(action),
        Command::Spectrum {
            params,
            precision_bits,
            format,
            out,
        } => spectrum_cmd(&params, precision_bits, format, &out),
        Command::Potentials { params, out } => potentials_cmd(&params, &out),
        Command::Trajectory {
            config,
            params,
            space,
            potential,
            effective,
            method,
            dt,
            steps,
            record_every,
            x0,
            p0,
            out,
        } => {
            let overrides = TrajectoryConfig {
                space,
                potential: potential.map(|p| parse_potential(&p)),
                effective: effective.then_some(true),
                d: params.d.map(|r| r.to_string()),
                gamma: params.gamma.map(|r| r.to_string()),
                omega: params.omega.map(|r| r.to_string()),
                a: params.a.map(|r| r.to_string()),
                n: params.n,
                method,
                dt,
                steps,
                record_every,
                max_step_drift: None,
                x0,
                p0,
            };
            trajectory_cmd(config.as_deref(), overrides, &out)
        }
        Command::NbodyDerive {
            n,
            certificate_degree,
            out,
        } => nbody_cmd(n, certificate_degree, &out),
        Command::Geometry { rho, masses, out } => geometry_cmd(&rho, masses.as_deref(), &out),
    };
    match r {
        Ok(()) | Err(CliError::Closed) => ExitCode::SUCCESS,
        Err(CliError::Failed(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn verify_cmd(suites: &[String], seed: u64, mc_samples: u64, oracle_polys: usize, out: &Option<PathBuf>) -> CliResult {
    let mut numbers = Vec::new();
    for s in suites {
        let sel = verify::select(s).ok_or_else(|| CliError::Usage(format!("unknown suite `{s}`")))?;
        for k in sel {
            if !numbers.contains(&k) {
                numbers.push(k);
            }
        }
    }
    numbers.sort_unstable();
    let cfg = VerifyConfig {
        seed,
        mc_samples,
        oracle_polys,
    };
    let report = verify::run(&numbers, &cfg);
    for c in &report.criteria {
        eprintln!("{} criterion {}: {} ({:.1} s)", if c.passed { "PASS" } else { "FAIL" }, c.number, c.title, c.seconds);
        for check in c.checks.iter().filter(|k| k.status != Status::Pass) {
            eprintln!("  {:?} {}: {}", check.status, check.name, check.detail);
        }
    }
    match write_json(out, &report) {
        Ok(()) | Err(CliError::Closed) => {}
        Err(e) => return Err(e),
    }
    if report.all_pass {
        Ok(())
    } else {
        Err(CliError::Failed(String::from("verification failed")))
    }
}

fn catalog_cmd(action: CatalogAction) -> CliResult {
    match action {
        CatalogAction::List => {
            let mut w = io::stdout().lock();
            for (id, desc) in catalog::list() {
                writeln!(w, "{id:<24}{desc}")?;
            }
            Ok(())
        }
        CatalogAction::Show { id, format, out } => {
            let e = catalog::build(&id)?;
            match format {
                OpFormat::Golden => {
                    let mut w = output(&out)?;
                    w.write_all(e.op.to_canonical_string().as_bytes())?;
                    Ok(())
                }
                OpFormat::Text => {
                    let mut w = output(&out)?;
                    writeln!(w, "{}: {}", e.id, e.description)?;
                    writeln!(w, "{}", e.op)?;
                    Ok(())
                }
                OpFormat::Json => {
                    let reg = e.registry();
                    let v = json!({
                        "id": e.id,
                        "description": e.description,
                        "variables": reg.var_names(),
                        "parameters": reg.param_names(),
                        "order": e.op.order(),
                        "operator": e.op.to_canonical_string(),
                        "lie_algebraic": e.generators.is_some(),
                        "gauge_potential": e.gauge.as_ref().map(|g| g.potential.to_string()),
                        "suites": e.identities,
                    });
                    write_json(&out, &v)
                }
            }
        }
    }
}

fn qes_params(p: &Params) -> Result<QesParams, CliError> {
    if let Some(d) = &p.d {
        if *d != Rational::from_int(3) {
            return Err(CliError::Usage(String::from("the quasi-exactly-solvable sector is built for d = 3")));
        }
    }
    Ok(QesParams {
        gamma: p.gamma.clone().unwrap_or_else(Rational::zero),
        omega: p.omega.clone().unwrap_or_else(Rational::one),
        a: p.a.clone().unwrap_or_else(Rational::zero),
        n: p.n.ok_or_else(|| CliError::Usage(String::from("--N is required")))?,
    })
}

fn spectrum_cmd(p: &Params, bits: u32, format: TableFormat, out: &Option<PathBuf>) -> CliResult {
    let params = qes_params(p)?;
    if params.omega.signum() <= 0 {
        return Err(CliError::Usage(String::from("omega must be positive")));
    }
    let report = spectrum::spectrum(&params, bits)?;
    match format {
        TableFormat::Json => write_json(out, &report),
        TableFormat::Csv => Ok(spectrum::write_csv(&report, output(out)?)?),
    }
}

fn potentials_cmd(p: &Params, out: &Option<PathBuf>) -> CliResult {
    let reg = qes::qes_registry();
    let mut subs: Vec<(&str, Rational)> = Vec::new();
    for (name, v) in [("d", &p.d), ("gamma", &p.gamma), ("omega", &p.omega), ("A", &p.a)] {
        if let Some(v) = v {
            subs.push((name, v.clone()));
        }
    }
    if let Some(n) = p.n {
        subs.push(("N", Rational::from_int(n as i64)));
    }
    let show = |f: fourbody_core::Result<RatFunc>| -> Result<String, CliError> {
        let mut f = f?.specialize(&subs)?;
        f.reduce();
        Ok(f.to_string())
    };
    let e0 = if p.omega.is_some() && p.gamma.is_some() {
        Some(
            QesParams {
                gamma: p.gamma.clone().unwrap_or_default(),
                omega: p.omega.clone().unwrap_or_default(),
                a: Rational::zero(),
                n: 0,
            }
            .ground_energy()
            .to_string(),
        )
    } else {
        None
    };
    let v = json!({
        "schema_version": spectrum::SCHEMA_VERSION,
        "variables": reg.var_names(),
        "bindings": subs.iter().map(|(k, v)| (k.to_string(), Value::String(v.to_string()))).collect::<serde_json::Map<_, _>>(),
        "ground_energy": e0.unwrap_or(show(qes::ground_energy(&reg))?),
        "harmonic": show(qes::harmonic(&reg))?,
        "effective": show(qes::corrected_v_eff(&reg))?,
        "ground_state": show(qes::corrected_v0(&reg))?,
        "level_shift": show(qes::delta_vn(&reg))?,
        "exactly_solvable": show(qes::printed_ves(&reg))?,
        "quasi_exactly_solvable": show(qes::printed_vqes(&reg))?,
        "relative": show(qes::printed_vrel(&reg))?,
    });
    write_json(out, &v)
}

/// Declarative trajectory run. Rational parameters are strings such as `"1/2"`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrajectoryConfig {
    pub space: Option<SpaceArg>,
    pub potential: Option<Potential>,
    pub effective: Option<bool>,
    pub d: Option<String>,
    pub gamma: Option<String>,
    pub omega: Option<String>,
    #[serde(rename = "A")]
    pub a: Option<String>,
    #[serde(rename = "N")]
    pub n: Option<u32>,
    pub method: Option<MethodArg>,
    pub dt: Option<f64>,
    pub steps: Option<usize>,
    pub record_every: Option<usize>,
    /// Stop when one step changes the relative energy by more than this.
    pub max_step_drift: Option<f64>,
    pub x0: Option<Vec<f64>>,
    pub p0: Option<Vec<f64>>,
}

impl TrajectoryConfig {
    fn overlay(self, o: TrajectoryConfig) -> TrajectoryConfig {
        TrajectoryConfig {
            space: o.space.or(self.space),
            potential: o.potential.or(self.potential),
            effective: o.effective.or(self.effective),
            d: o.d.or(self.d),
            gamma: o.gamma.or(self.gamma),
            omega: o.omega.or(self.omega),
            a: o.a.or(self.a),
            n: o.n.or(self.n),
            method: o.method.or(self.method),
            dt: o.dt.or(self.dt),
            steps: o.steps.or(self.steps),
            record_every: o.record_every.or(self.record_every),
            max_step_drift: o.max_step_drift.or(self.max_step_drift),
            x0: o.x0.or(self.x0),
            p0: o.p0.or(self.p0),
        }
    }
}

fn parse_potential(s: &str) -> Potential {
    match s {
        "none" => Potential::None,
        "harmonic" => Potential::Harmonic,
        "exactly-solvable" => Potential::ExactlySolvable,
        e => Potential::Expr(e.to_string()),
    }
}

fn param(s: &Option<String>, default: i64) -> Result<Rational, CliError> {
    match s {
        Some(s) => rational(s).map_err(CliError::Usage),
        None => Ok(Rational::from_int(default)),
    }
}

fn trajectory_cmd(config: Option<&Path>, overrides: TrajectoryConfig, out: &Option<PathBuf>) -> CliResult {
    let base: TrajectoryConfig = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => TrajectoryConfig::default(),
    };
    let c = base.overlay(overrides);
    let space = match c.space.unwrap_or(SpaceArg::Rho) {
        SpaceArg::Rho => Space::Rho,
        SpaceArg::Volume => Space::Volume,
    };
    let model = Model {
        space,
        potential: c.potential.clone().unwrap_or(Potential::Harmonic),
        effective: c.effective.unwrap_or(false),
        d: param(&c.d, 3)?,
        gamma: param(&c.gamma, 0)?,
        omega: param(&c.omega, 1)?,
        a: param(&c.a, 0)?,
        n: c.n.unwrap_or(0),
    };
    let sys = model.system()?;
    let dim = sys.dim();
    let x0 = match c.x0 {
        Some(x) => x,
        None if space == Space::Rho => vec![1.0; 6],
        None => {
            // the regular tetrahedron is a critical point of the volume map
            let rho = [(11, 10), (9, 10), (21, 20), (19, 20), (1, 1), (6, 5)].map(|(a, b)| fourbody_core::q(a, b));
            let (v, s, p) = volume_vars_at(&rho);
            vec![v.to_f64(), s.to_f64(), p.to_f64()]
        }
    };
    let p0 = c.p0.unwrap_or_else(|| vec![0.0; dim]);
    if x0.len() != dim || p0.len() != dim {
        return Err(CliError::Usage(format!("x0 and p0 need {dim} components")));
    }
    if !sys.in_domain(&x0) {
        return Err(CliError::Usage(String::from("x0 is not an interior point of the configuration space")));
    }
    let dt = c.dt.unwrap_or(1e-3);
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(CliError::Usage(String::from("dt must be positive")));
    }
    let cfg = IntegrateConfig {
        dt,
        steps: c.steps.unwrap_or(10_000),
        method: match c.method.unwrap_or(MethodArg::Rk4) {
            MethodArg::Rk4 => Method::Rk4,
            MethodArg::StormerVerlet => Method::StormerVerlet,
        },
        max_step_drift: c.max_step_drift,
        record_every: c.record_every.unwrap_or(100),
    };
    let t = integrate(&sys, &x0, &p0, &cfg);
    dynamics::write_csv(&sys.names, &t, output(out)?)?;
    eprintln!(
        "{}",
        serde_json::to_string(&json!({ "stop": t.stop, "max_rel_drift": t.max_rel_drift, "samples": t.samples.len() }))?
    );
    Ok(())
}

fn nbody_cmd(n: usize, degree: u32, out: &Option<PathBuf>) -> CliResult {
    let r = derive_coefficients(n, degree)?;
    let v = json!({
        "schema_version": spectrum::SCHEMA_VERSION,
        "n": r.n,
        "coefficients": r.values.iter().map(|(s, v)| (s.to_string(), Value::String(v.to_string()))).collect::<serde_json::Map<_, _>>(),
        "known": r.known.iter().map(|(s, derived, closed)| json!({
            "slot": s.to_string(), "derived": derived.to_string(), "closed_form": closed.to_string()
        })).collect::<Vec<_>>(),
        "known_agree": r.known_agree(),
        "certificate": {
            "degree": r.certificate_degree,
            "checked": r.certificate.checked,
            "all_zero": r.certificate.all_zero(),
            "failures": r.certificate.failures.iter().map(|w| json!({"monomial": w.monomial, "residual": w.residual})).collect::<Vec<_>>(),
        },
        "operator": r.op.to_canonical_string(),
    });
    write_json(out, &v)?;
    if r.certificate.all_zero() && r.known_agree() {
        Ok(())
    } else {
        Err(CliError::Failed(String::from("derivation certificate is not zero")))
    }
}

fn geometry_cmd(rho: &[Rational], masses: Option<&[Rational]>, out: &Option<PathBuf>) -> CliResult {
    let rho: [Rational; 6] = rho
        .to_vec()
        .try_into()
        .map_err(|_| CliError::Usage(String::from("--rho needs six squared distances")))?;
    let rep = config_space_test(&rho);
    let (v, s, p) = volume_vars_at(&rho);
    let reg = geometry::rho_registry(&[]);
    let f1 = geometry::f1(&reg).eval(&rho);
    let f2 = geometry::f2(&reg).eval(&rho);
    let mut report = json!({
        "schema_version": spectrum::SCHEMA_VERSION,
        "rho": rho.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "region": match rep.region { Region::Interior => "interior", Region::Boundary => "boundary", Region::Outside => "outside" },
        "faces_sq": rep.faces.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "volume_sq": rep.volume_sq.to_string(),
        "V": v.to_string(),
        "S": s.to_string(),
        "P": p.to_string(),
        "F1": f1.to_string(),
        "F2": f2.to_string(),
        "notes": rep.notes,
    });
    if let Some(m) = masses {
        let m: [Rational; 4] = m
            .to_vec()
            .try_into()
            .map_err(|_| CliError::Usage(String::from("--masses needs four values")))?;
        if m.iter().any(|x| x.signum() <= 0) {
            return Err(CliError::Usage(String::from("masses must be positive")));
        }
        let (v, s, p) = mass_volume_vars_at(&rho, &m);
        report["mass_weighted"] = json!({ "V": v.to_string(), "S": s.to_string(), "P": p.to_string() });
    }
    write_json(out, &report)
}
