//! Discrete string evolutions: sequences of single-edge string operators
//! that only ever hop existing defects.

use serde::{Deserialize, Serialize};

use super::code::ToricCode;
use super::config::{hardcore_check, DefectConfig, DefectId};
use super::lattice::{LayerEdge, Site, TorusLattice};
use crate::error::{Error, Result};
use crate::pauli_linalg::{Frame, PauliString};

/// One edge string. `forward` records the intended direction relative to the
/// edge orientation; `None` lets occupancy decide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringStep {
    pub edge: LayerEdge,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forward: Option<bool>,
}

impl StringStep {
    pub fn new(edge: LayerEdge) -> Self {
        Self {
            edge,
            forward: None,
        }
    }

    pub fn directed(edge: LayerEdge, forward: bool) -> Self {
        Self {
            edge,
            forward: Some(forward),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringEvolution {
    pub steps: Vec<StringStep>,
}

impl StringEvolution {
    pub fn new(steps: Vec<StringStep>) -> Self {
        Self { steps }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum StepClass {
    Hop {
        defect: DefectId,
        from: Site,
        to: Site,
        forward: bool,
    },
    WouldCreate,
    WouldAnnihilate,
    HardCoreViolation {
        defect: DefectId,
        to: Site,
    },
    /// The tagged direction disagrees with where the defect sits.
    DirectionMismatch,
    /// Not examined because an earlier step was invalid.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionReport {
    pub steps: Vec<StepClass>,
    pub valid: bool,
    /// Configuration after the valid prefix.
    pub final_config: DefectConfig,
    /// Product of the valid prefix's edge strings, latest on the left.
    pub operator: PauliString,
}

impl EvolutionReport {
    pub fn first_invalid(&self) -> Option<(usize, &StepClass)> {
        self.steps
            .iter()
            .enumerate()
            .find(|(_, c)| !matches!(c, StepClass::Hop { .. }))
    }
}

/// Classifies each step in sequence. A step is a hop when exactly one
/// endpoint holds a defect of the edge's layer and the moved configuration
/// still satisfies the separation `s`.
pub fn validate_evolution(
    lat: &TorusLattice,
    cfg: &DefectConfig,
    ev: &StringEvolution,
    s: usize,
) -> EvolutionReport {
    let mut cur = cfg.clone();
    let mut op = PauliString::identity(lat.n_qubits());
    let mut steps = Vec::with_capacity(ev.steps.len());
    let mut valid = true;
    for step in &ev.steps {
        if !valid {
            steps.push(StepClass::Skipped);
            continue;
        }
        let e = step.edge;
        let (a, b) = (lat.edge_start(e), lat.edge_end(e));
        let class = match (cur.occupant(e.layer, a), cur.occupant(e.layer, b)) {
            (None, None) => StepClass::WouldCreate,
            (Some(_), Some(_)) => StepClass::WouldAnnihilate,
            (Some(id), None) | (None, Some(id)) => {
                let from = cur.position(id).expect("occupant exists");
                let forward = from == a;
                let to = if forward { b } else { a };
                let moved = cur.moved(id, to);
                if step.forward.is_some_and(|f| f != forward) {
                    StepClass::DirectionMismatch
                } else if !hardcore_check(lat, &moved, s).ok {
                    StepClass::HardCoreViolation { defect: id, to }
                } else {
                    cur = moved;
                    op = lat.edge_pauli(e).mul(&op).expect("same qubit count");
                    StepClass::Hop {
                        defect: id,
                        from,
                        to,
                        forward,
                    }
                }
            }
        };
        valid = matches!(class, StepClass::Hop { .. });
        steps.push(class);
    }
    EvolutionReport {
        steps,
        valid,
        final_config: cur,
        operator: op,
    }
}

/// Applies a valid evolution to a defect code: the endpoint code and the
/// exact composed string operator.
pub fn apply_string(tc: &ToricCode, ev: &StringEvolution, s: usize) -> Result<(ToricCode, PauliString)> {
    let report = validate_evolution(&tc.lattice, &tc.config, ev, s);
    if let Some((step, class)) = report.first_invalid() {
        return Err(Error::InvalidEvolution {
            step,
            reason: format!("{class:?}"),
        });
    }
    let frame = Frame::new(report.operator.apply_matrix(tc.code.frame().matrix())?)?;
    let code = tc.code.with_frame(frame)?;
    Ok((tc.with_code(code, report.final_config), report.operator))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::lattice::{Axis, Layer};

    fn setup() -> (TorusLattice, DefectConfig) {
        let lat = TorusLattice::new(3).unwrap();
        let cfg = DefectConfig::from_coords(&lat, &[(0, 0), (1, 1)], &[]).unwrap();
        (lat, cfg)
    }

    #[test]
    fn single_hop_then_back() {
        let (lat, cfg) = setup();
        let e = lat.edge(Layer::Primal, 0, 0, Axis::Y);
        let r = validate_evolution(&lat, &cfg, &StringEvolution::new(vec![StringStep::new(e); 2]), 1);
        assert!(r.valid);
        assert_eq!(r.final_config, cfg);
        assert!(r.operator.is_identity_up_to_phase());
        assert_eq!(r.operator, PauliString::identity(lat.n_qubits()));
    }

    #[test]
    fn creation_and_annihilation_are_rejected() {
        let (lat, cfg) = setup();
        let far = lat.edge(Layer::Primal, 2, 2, Axis::X);
        let r = validate_evolution(&lat, &cfg, &StringEvolution::new(vec![StringStep::new(far)]), 1);
        assert_eq!(r.steps, vec![StepClass::WouldCreate]);
        assert!(!r.valid);

        let cfg = DefectConfig::from_coords(&lat, &[(0, 0), (1, 0)], &[]).unwrap();
        let joint = lat.edge(Layer::Primal, 0, 0, Axis::X);
        let ev = StringEvolution::new(vec![StringStep::new(joint), StringStep::new(joint)]);
        let r = validate_evolution(&lat, &cfg, &ev, 0);
        assert_eq!(r.steps, vec![StepClass::WouldAnnihilate, StepClass::Skipped]);
    }

    #[test]
    fn destination_separation_and_direction_tags() {
        let (lat, cfg) = setup();
        // (0,0) -> (1,0) lands next to (1,1).
        let e = lat.edge(Layer::Primal, 0, 0, Axis::X);
        let r = validate_evolution(&lat, &cfg, &StringEvolution::new(vec![StringStep::new(e)]), 2);
        assert!(matches!(r.steps[0], StepClass::HardCoreViolation { .. }));
        let r = validate_evolution(&lat, &cfg, &StringEvolution::new(vec![StringStep::directed(e, false)]), 1);
        assert_eq!(r.steps[0], StepClass::DirectionMismatch);
    }
}
