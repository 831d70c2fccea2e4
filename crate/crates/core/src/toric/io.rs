//! JSON documents describing a lattice, its defects and a braid word.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::braid::BraidGenerator;
use super::config::{DefectConfig, DefectId};
use super::lattice::{Axis, Site, TorusLattice};
use crate::error::{Error, Result};

/// Default minimum separation between defects.
pub const DEFAULT_SEPARATION: usize = 3;

/// One generator as written in a document: `{"op": ..., "args": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BraidOp {
    pub op: String,
    #[serde(default)]
    pub args: Vec<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToricDocument {
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(default = "default_separation")]
    pub s: usize,
    #[serde(default)]
    pub primal: Vec<[usize; 2]>,
    #[serde(default)]
    pub dual: Vec<[usize; 2]>,
    #[serde(default)]
    pub braid: Vec<BraidOp>,
}

fn default_separation() -> usize {
    DEFAULT_SEPARATION
}

/// A parsed document.
#[derive(Clone, Debug, PartialEq)]
pub struct ToricSetup {
    pub lattice: TorusLattice,
    pub s: usize,
    pub config: DefectConfig,
    pub word: Vec<BraidGenerator>,
}

fn get(op: &BraidOp, i: usize) -> Result<&Value> {
    op.args
        .get(i)
        .ok_or_else(|| Error::InvalidArgument(format!("{}: missing argument {i}", op.op)))
}

fn id_arg(op: &BraidOp, i: usize) -> Result<DefectId> {
    get(op, i)?
        .as_str()
        .ok_or_else(|| Error::InvalidArgument(format!("{}: argument {i} must be a defect id", op.op)))?
        .parse()
}

fn axis_arg(op: &BraidOp, i: usize) -> Result<Axis> {
    match get(op, i)?.as_str() {
        Some("horizontal" | "x") => Ok(Axis::X),
        Some("vertical" | "y") => Ok(Axis::Y),
        _ => Err(Error::InvalidArgument(format!(
            "{}: argument {i} must be horizontal or vertical",
            op.op
        ))),
    }
}

impl BraidOp {
    pub fn to_generator(&self) -> Result<BraidGenerator> {
        Ok(match self.op.as_str() {
            "full_braid" => BraidGenerator::FullBraid {
                mover: id_arg(self, 0)?,
                target: id_arg(self, 1)?,
            },
            "half_braid" => BraidGenerator::HalfBraid {
                a: id_arg(self, 0)?,
                b: id_arg(self, 1)?,
            },
            "torus_loop" => BraidGenerator::TorusLoop {
                defect: id_arg(self, 0)?,
                axis: axis_arg(self, 1)?,
            },
            "contractible_loop" => BraidGenerator::ContractibleLoop {
                defect: id_arg(self, 0)?,
                radius: get(self, 1)?
                    .as_u64()
                    .ok_or_else(|| Error::InvalidArgument("contractible_loop: radius must be a positive integer".into()))?
                    as usize,
            },
            other => return Err(Error::InvalidArgument(format!("unknown braid op {other:?}"))),
        })
    }

    pub fn from_generator(g: &BraidGenerator) -> Self {
        let id = |d: DefectId| Value::String(d.to_string());
        let (op, args) = match *g {
            BraidGenerator::FullBraid { mover, target } => ("full_braid", vec![id(mover), id(target)]),
            BraidGenerator::HalfBraid { a, b } => ("half_braid", vec![id(a), id(b)]),
            BraidGenerator::TorusLoop { defect, axis } => {
                let a = match axis {
                    Axis::X => "horizontal",
                    Axis::Y => "vertical",
                };
                ("torus_loop", vec![id(defect), Value::String(a.into())])
            }
            BraidGenerator::ContractibleLoop { defect, radius } => {
                ("contractible_loop", vec![id(defect), Value::from(radius)])
            }
        };
        Self { op: op.into(), args }
    }
}

impl ToricDocument {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn setup(&self) -> Result<ToricSetup> {
        let lattice = TorusLattice::new(self.l)?;
        let sites = |v: &[[usize; 2]]| v.iter().map(|&[x, y]| Site::new(x, y)).collect();
        let config = DefectConfig::new(&lattice, sites(&self.primal), sites(&self.dual))?;
        let word = self.braid.iter().map(BraidOp::to_generator).collect::<Result<_>>()?;
        Ok(ToricSetup {
            lattice,
            s: self.s,
            config,
            word,
        })
    }

    pub fn from_setup(setup: &ToricSetup) -> Self {
        let pts = |v: &[Site]| v.iter().map(|s| [s.x, s.y]).collect();
        Self {
            l: setup.lattice.l(),
            s: setup.s,
            primal: pts(&setup.config.primal),
            dual: pts(&setup.config.dual),
            braid: setup.word.iter().map(BraidOp::from_generator).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = r#"{"L": 3, "s": 0, "primal": [[0,0],[1,1]], "dual": [[2,2],[0,2]],
            "braid": [{"op": "full_braid", "args": ["p0", "d1"]},
                      {"op": "torus_loop", "args": ["d0", "vertical"]},
                      {"op": "contractible_loop", "args": ["p1", 1]},
                      {"op": "half_braid", "args": ["p0", "p1"]}]}"#;
        let doc = ToricDocument::parse(text).unwrap();
        let setup = doc.setup().unwrap();
        assert_eq!(setup.word.len(), 4);
        assert_eq!(
            setup.word[1],
            BraidGenerator::TorusLoop {
                defect: DefectId::dual(0),
                axis: Axis::Y
            }
        );
        assert_eq!(ToricDocument::from_setup(&setup), doc);
    }

    #[test]
    fn defaults_and_errors() {
        let doc = ToricDocument::parse(r#"{"L": 2}"#).unwrap();
        assert_eq!(doc.s, DEFAULT_SEPARATION);
        assert!(doc.setup().unwrap().config.primal.is_empty());
        let bad = ToricDocument::parse(r#"{"L": 2, "primal": [[0,0]]}"#).unwrap();
        assert!(matches!(bad.setup(), Err(Error::Parity(_))));
        let bad = ToricDocument::parse(r#"{"L": 2, "braid": [{"op": "spin", "args": []}]}"#).unwrap();
        assert!(bad.setup().is_err());
    }
}
