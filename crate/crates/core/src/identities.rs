//! Named exact identities between catalog operators: changes of variables,
//! chain-rule images of invariants and restrictions to degenerate loci.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::catalog::{build, in_rho};
use crate::diffop::DiffOp;
use crate::error::Result;
use crate::geometry::{edges_p, faces_s, u_vars, volume_sq};
use crate::parse::parse_poly;
use crate::poly::Poly;
use crate::pushforward::{pushforward_check, PushforwardReport};
use crate::rational::{q, Rational};
use crate::ratfunc::RatFunc;
use crate::registry::Registry;

/// `source` pushed through `phi` should act as `target` on every monomial of
/// degree at most `degree` in the target variables.
pub struct Pushforward {
    pub name: &'static str,
    pub source: DiffOp,
    pub phi: Vec<(String, Poly)>,
    pub target: DiffOp,
    pub degree: u32,
}

impl Pushforward {
    pub fn check(&self) -> Result<PushforwardReport> {
        let phi: Vec<(&str, Poly)> = self.phi.iter().map(|(s, p)| (s.as_str(), p.clone())).collect();
        pushforward_check(&self.source, &phi, &self.target, self.degree)
    }
}

fn named(reg: &Registry, pairs: &[(&str, &str)]) -> Result<Vec<(String, Poly)>> {
    pairs
        .iter()
        .map(|(n, e)| Ok((String::from(*n), parse_poly(reg, e)?)))
        .collect()
}

/// Flat `c · Σ ∂²_{x_i}` on `x1..x4`.
fn flat(c: Rational) -> DiffOp {
    let x = Registry::new(&["x1", "x2", "x3", "x4"], &[]);
    let mut lap = DiffOp::zero(&x);
    for i in 0..4 {
        lap.add_pair(i, i, RatFunc::constant(&x, c.clone()));
    }
    lap
}

pub const PUSHFORWARDS: [&str; 8] = [
    "r-to-rho",
    "rho-to-volume",
    "rho-to-u",
    "rho-to-p",
    "line-to-tau",
    "line-to-relative",
    "relative-to-xi",
    "line-to-p-q",
];

pub fn pushforward(name: &str) -> Result<Pushforward> {
    let radial = build("delta-radial-rho")?.op;
    let reg = radial.registry().clone();
    let (name, source, phi, target, degree): (&'static str, DiffOp, Vec<(String, Poly)>, DiffOp, u32) = match name {
        "r-to-rho" => {
            let r = build("delta-radial-r")?.op;
            let rr = r.registry().clone();
            let phi = ["12", "13", "14", "23", "24", "34"]
                .iter()
                .map(|s| Ok((format!("rho{s}"), parse_poly(&rr, &format!("r{s}^2"))?)))
                .collect::<Result<_>>()?;
            ("r-to-rho", r, phi, radial, 2)
        }
        "rho-to-volume" => {
            let phi = alloc::vec![
                (String::from("V"), volume_sq(&reg)),
                (String::from("S"), faces_s(&reg)),
                (String::from("P"), edges_p(&reg)),
            ];
            ("rho-to-volume", radial, phi, build("delta-g")?.op, 3)
        }
        "rho-to-u" => {
            let [u1, u2, u3] = u_vars(&reg);
            let phi = alloc::vec![(String::from("u1"), u1), (String::from("u2"), u2), (String::from("u3"), u3)];
            ("rho-to-u", radial, phi, build("delta-u")?.op, 3)
        }
        "rho-to-p" => {
            let phi = alloc::vec![(String::from("P"), edges_p(&reg))];
            ("rho-to-p", radial, phi, build("delta-p")?.op, 3)
        }
        "line-to-tau" => {
            // −½Δ in the center of mass and elementary symmetric functions of
            // the centered coordinates
            let src = flat(q(-1, 2));
            let x = src.registry().clone();
            let y = |i: usize| format!("(x{} - (x1+x2+x3+x4)/4)", i);
            let (y1, y2, y3, y4) = (y(1), y(2), y(3), y(4));
            let phi = named(
                &x,
                &[
                    ("Y", "x1+x2+x3+x4"),
                    ("t2", &format!("{y1}*{y2} + {y1}*{y3} + {y1}*{y4} + {y2}*{y3} + {y2}*{y4} + {y3}*{y4}")),
                    ("t3", &format!("{y1}*{y2}*{y3} + {y1}*{y2}*{y4} + {y1}*{y3}*{y4} + {y2}*{y3}*{y4}")),
                    ("t4", &format!("{y1}*{y2}*{y3}*{y4}")),
                ],
            )?;
            ("line-to-tau", src, phi, build("delta-tau-d1")?.op, 3)
        }
        "line-to-relative" => {
            let src = flat(Rational::one());
            let phi = named(src.registry(), &[("x12", "x1-x2"), ("x13", "x1-x3"), ("x14", "x1-x4")])?;
            ("line-to-relative", src, phi, build("delta-rel-d1")?.op, 3)
        }
        "relative-to-xi" => {
            let xi = build("delta-lb-xi")?.op;
            let xr = Registry::new(&["x12", "x13", "x14"], &["N"]);
            let src = build("delta-rel-d1")?.op.embed(&xr)?;
            let phi = named(
                &xr,
                &[("xi1", "x12+x13+x14"), ("xi2", "x12*x13+x12*x14+x13*x14"), ("xi3", "x12*x13*x14")],
            )?;
            ("relative-to-xi", src, phi, xi.scale_rational(&q(2, 1)), 4)
        }
        "line-to-p-q" => {
            let src = flat(q(1, 2));
            let phi = named(
                src.registry(),
                &[
                    ("P", "(x1-x2)^2+(x1-x3)^2+(x1-x4)^2+(x2-x3)^2+(x2-x4)^2+(x3-x4)^2"),
                    ("q1", "(x1-x2)^2"),
                    ("q2", "(x2-x3)^2"),
                    ("sq1", "x1-x2"),
                    ("sq2", "x2-x3"),
                ],
            )?;
            ("line-to-p-q", src, phi, build("delta-radial-d1")?.op, 3)
        }
        other => return Err(crate::error::Error::UnknownEntry(String::from(other))),
    };
    Ok(Pushforward {
        name,
        source,
        phi,
        target,
        degree,
    })
}

/// `Δ_radial` applied to an invariant, compared with its stated image.
pub struct ChainRule {
    pub name: &'static str,
    pub image: RatFunc,
    pub stated: RatFunc,
}

impl ChainRule {
    pub fn holds(&self) -> bool {
        self.image.equals(&self.stated)
    }
}

pub fn chain_rules() -> Result<Vec<ChainRule>> {
    let radial = build("delta-radial-rho")?.op;
    let reg = radial.registry().clone();
    let [u1, _, _] = u_vars(&reg);
    let cases: [(&'static str, Poly, &str); 4] = [
        ("V", volume_sq(&reg), "(d-2)*S/9"),
        ("S", faces_s(&reg), "(d-1)*P/2"),
        ("P", edges_p(&reg), "12*d"),
        ("u1", u1, "4*d"),
    ];
    cases
        .into_iter()
        .map(|(name, f, stated)| {
            Ok(ChainRule {
                name,
                image: radial.apply_poly(&f)?,
                stated: in_rho(&reg, stated)?,
            })
        })
        .collect()
}

/// An operator restricted to a locus (or specialized in its parameters),
/// compared with the operator stated for that case.
pub struct Degeneration {
    pub name: &'static str,
    pub restricted: Result<DiffOp>,
    pub stated: DiffOp,
}

impl Degeneration {
    pub fn holds(&self) -> bool {
        matches!(&self.restricted, Ok(op) if op.equals(&self.stated))
    }
}

fn ones(names: &[&'static str]) -> Vec<(&'static str, Rational)> {
    names.iter().map(|n| (*n, Rational::one())).collect()
}

pub fn degenerations() -> Result<Vec<Degeneration>> {
    let g = build("delta-g")?.op;
    let d2 = build("delta-g-d2")?.op;
    let d1 = build("delta-g-d1")?.op;
    let radial = build("delta-radial-rho")?.op;
    let mass = build("delta-radial-rho-mass")?.op;
    let gm = build("delta-g-mass")?.op;
    let masses = ["m1", "m2", "m3", "m4"];
    Ok(alloc::vec![
        Degeneration {
            name: "volume operator on the plane",
            restricted: g.restrict(&[("V", Rational::zero()), ("d", q(2, 1))], d2.registry()),
            stated: d2,
        },
        Degeneration {
            name: "volume operator on the line",
            restricted: g.restrict(&[("V", Rational::zero()), ("S", Rational::zero()), ("d", q(1, 1))], d1.registry()),
            stated: d1,
        },
        Degeneration {
            name: "radial operator at equal masses",
            restricted: mass.restrict(&ones(&masses), radial.registry()),
            stated: radial,
        },
        Degeneration {
            name: "volume operator at equal masses",
            restricted: gm.restrict(&ones(&masses), g.registry()),
            stated: g,
        },
    ])
}
