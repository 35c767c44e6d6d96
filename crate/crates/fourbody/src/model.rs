//! Assembly of classical systems from a choice of coordinates and potential.

use fourbody_core::catalog::{build, in_rho};
use fourbody_core::parse::{parse_poly, parse_ratfunc};
use fourbody_core::{geometry, qes, Poly, RatFunc, Rational, Registry, Result};
use serde::{Deserialize, Serialize};

use crate::dynamics::ClassicalSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Space {
    /// The six squared distances.
    Rho,
    /// The volume variables `(V, S, P)`.
    Volume,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Potential {
    None,
    /// `8ω²P`.
    Harmonic,
    /// The exactly solvable potential as published.
    ExactlySolvable,
    /// A rational expression in `V, S, P` and the parameters
    /// `d, gamma, omega, A, N`.
    Expr(String),
}

#[derive(Clone, Debug)]
pub struct Model {
    pub space: Space,
    pub potential: Potential,
    /// Add the effective potential that the gauge rotation produces.
    pub effective: bool,
    pub d: Rational,
    pub gamma: Rational,
    pub omega: Rational,
    pub a: Rational,
    pub n: u32,
}

impl Default for Model {
    fn default() -> Self {
        Model {
            space: Space::Rho,
            potential: Potential::Harmonic,
            effective: false,
            d: Rational::from_int(3),
            gamma: Rational::zero(),
            omega: Rational::one(),
            a: Rational::zero(),
            n: 0,
        }
    }
}

const PARAMS: [&str; 5] = ["d", "gamma", "omega", "A", "N"];

impl Model {
    pub fn registry(&self) -> Registry {
        match self.space {
            Space::Rho => qes::qes_registry(),
            Space::Volume => Registry::new(&["V", "S", "P"], &PARAMS),
        }
    }

    fn params(&self) -> Vec<(&'static str, Rational)> {
        vec![
            ("d", self.d.clone()),
            ("gamma", self.gamma.clone()),
            ("omega", self.omega.clone()),
            ("A", self.a.clone()),
            ("N", Rational::from_int(self.n as i64)),
        ]
    }

    /// An expression in `V, S, P` and parameters on this model's registry.
    fn expr(&self, reg: &Registry, e: &str) -> Result<RatFunc> {
        match self.space {
            Space::Rho => in_rho(reg, e),
            Space::Volume => parse_ratfunc(reg, e),
        }
    }

    /// The full potential, before parameters are specialized.
    pub fn potential_function(&self) -> Result<RatFunc> {
        let reg = self.registry();
        let mut v = match &self.potential {
            Potential::None => RatFunc::zero(&reg),
            Potential::Harmonic => self.expr(&reg, "8*omega^2*P")?,
            Potential::ExactlySolvable => match self.space {
                Space::Rho => qes::printed_ves(&reg)?,
                Space::Volume => parse_ratfunc(
                    &reg,
                    "(3*P^2 + 112*S)/(32*(36*V - P*S)) + gamma*(gamma-1)*S/(18*V) + 8*omega^2*P",
                )?,
            },
            Potential::Expr(e) => self.expr(&reg, e)?,
        };
        if self.effective {
            let eff = match self.space {
                Space::Rho => qes::corrected_v_eff(&reg)?,
                Space::Volume => {
                    let e = build("delta-g")?;
                    let claim = e.gauge.expect("the volume operator carries its gauge data");
                    claim.potential.embed(&reg)?
                }
            };
            v = v.checked_add(&eff)?;
        }
        Ok(v)
    }

    pub fn system(&self) -> Result<ClassicalSystem> {
        let reg = self.registry();
        let id = match self.space {
            Space::Rho => "delta-radial-rho",
            Space::Volume => "delta-g",
        };
        let op = build(id)?.op.embed(&reg)?;
        let v = self.potential_function()?;
        let params = self.params();
        Ok(ClassicalSystem::new(&op, Some(&v), &params)?.with_domain(&self.domain(&reg)?))
    }

    /// Squared distances, face areas and volume in the six-distance space;
    /// `V`, `S`, `P` and `PS − 36V` in the volume space.
    fn domain(&self, reg: &Registry) -> Result<Vec<Poly>> {
        Ok(match self.space {
            Space::Rho => {
                let mut d: Vec<Poly> = (0..reg.n_vars()).map(|i| Poly::var(reg, i)).collect();
                d.extend((0..4).map(|v| geometry::face_area_sq(reg, v)));
                d.push(geometry::volume_sq(reg));
                d
            }
            Space::Volume => ["V", "S", "P", "P*S - 36*V"]
                .iter()
                .map(|e| parse_poly(reg, e))
                .collect::<Result<_>>()?,
        })
    }
}
