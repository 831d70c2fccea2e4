//! Frame transport along continuous defect paths.
//!
//! The running frame is tracked alongside a representation
//! `F = Π_i W_i · E`: `E` is the frame of the code with every defect at an
//! anchor site, and each defect off a vertex contributes a short linear
//! combination `W_i` of string operators. An edge defect is anchored at the
//! edge's start with `W = α(t) + β(t) σ_e`; a defect inside a square is
//! anchored at corner `A` with `W = a + b σ_B + c σ_C + d σ_D`. Hops and
//! slides act on the frame by exact unitaries; face moves act by the fibre
//! map `T S†` between the representations before and after. The gap between
//! frame and representation is recorded per segment.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::code::ToricCode;
use super::config::{require_hardcore, ContinuousDefectConfig, DefectConfig, DefectId, Placement};
use super::interp::{apply_terms, corner_paulis, face_coefficients, face_terms};
use super::lattice::{Corner, Layer, LayerEdge, Square, TorusLattice};
use crate::error::{Error, Result};
use crate::holonomy::{SegmentKind, TransportSegment};
use crate::pauli_linalg::frame::{identity_deviation, max_abs, CMatrix};
use crate::pauli_linalg::{alpha, beta, Direction, Frame, PauliString};

/// Parameters closer than this to a boundary are treated as on it.
const SNAP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum SegmentMove {
    /// The full edge string, from whichever endpoint holds the defect.
    DiscreteHop { edge: LayerEdge },
    EdgeSlide { edge: LayerEdge, t_from: f64, t_to: f64 },
    FaceMove {
        square: Square,
        from: (f64, f64),
        to: (f64, f64),
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSegment {
    pub defect: DefectId,
    #[serde(flatten)]
    pub kind: SegmentMove,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigPath {
    pub start: DefectConfig,
    pub segments: Vec<PathSegment>,
}

impl ConfigPath {
    pub fn constant(start: DefectConfig) -> Self {
        Self {
            start,
            segments: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub index: usize,
    pub defect: DefectId,
    pub kind: SegmentKind,
    /// `max |F − Π W E|` after the segment.
    pub residual: f64,
    pub orthonormality: f64,
    pub leakage: f64,
}

#[derive(Clone, Debug)]
pub struct TransportOutcome {
    pub frame: Frame,
    pub final_config: DefectConfig,
    pub transcript: Vec<TranscriptEntry>,
}

impl TransportOutcome {
    pub fn max_residual(&self) -> f64 {
        self.transcript.iter().map(|e| e.residual).fold(0.0, f64::max)
    }
}

struct State<'a> {
    lat: &'a TorusLattice,
    s: usize,
    placements: ContinuousDefectConfig,
    anchor: CMatrix,
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= SNAP
}

impl State<'_> {
    fn w_terms(&self, p: &Placement) -> Option<Vec<(Complex64, PauliString)>> {
        match *p {
            Placement::Vertex(_) => None,
            Placement::Edge { edge, t } => Some(vec![
                (alpha(t), PauliString::identity(self.lat.n_qubits())),
                (beta(t), self.lat.edge_pauli(edge)),
            ]),
            Placement::Face { square, x, y } => Some(face_terms(self.lat, square, &face_coefficients(x, y))),
        }
    }

    fn eval(&self) -> Result<CMatrix> {
        let mut m = self.anchor.clone();
        for id in self.placements.ids() {
            if let Some(terms) = self.w_terms(&self.placements.get(id)) {
                m = apply_terms(&terms, &m)?;
            }
        }
        Ok(m)
    }

    fn support(&self, p: &Placement) -> u64 {
        match *p {
            Placement::Vertex(_) => 0,
            Placement::Edge { edge, .. } => 1 << self.lat.edge_qubit(edge),
            Placement::Face { square, .. } => {
                let e = self.lat.square_edges(square);
                [e.ca, e.cd, e.ab, e.db]
                    .iter()
                    .fold(0, |m, &x| m | 1 << self.lat.edge_qubit(x))
            }
        }
    }

    fn reanchor(&mut self, p: &PauliString) -> Result<()> {
        self.anchor = p.apply_matrix(&self.anchor)?;
        Ok(())
    }

    /// Separation, disjoint supports of the off-vertex combinations, and no
    /// opposite-layer defect touching the centre of an occupied square.
    fn guard(&self, context: &str) -> Result<()> {
        require_hardcore(self.lat, &self.placements, self.s, context)?;
        let ids = self.placements.ids();
        for (i, &a) in ids.iter().enumerate() {
            let pa = self.placements.get(a);
            for &b in &ids[i + 1..] {
                let pb = self.placements.get(b);
                if self.support(&pa) & self.support(&pb) != 0 {
                    return Err(Error::HardCore(format!("{context}: {a} and {b} overlap")));
                }
            }
            if let Placement::Face { square, .. } = pa {
                let centre = self.lat.square_center(square);
                for (j, other) in self.placements.layer(a.layer.other()).iter().enumerate() {
                    if other.adjacency(self.lat).contains(&centre) {
                        let b = DefectId {
                            layer: a.layer.other(),
                            index: j,
                        };
                        return Err(Error::HardCore(format!(
                            "{context}: {b} at the centre of the square holding {a}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Re-expresses the defect's placement inside `sq`, anchored at `A`.
    fn enter_face(&mut self, id: DefectId, sq: Square, from: (f64, f64)) -> Result<()> {
        let lat = self.lat;
        if sq.layer != id.layer {
            return Err(Error::InvalidArgument(format!("{id} cannot move in a {:?} square", sq.layer)));
        }
        let [_, pb, pc, pd] = corner_paulis(lat, sq);
        let e = lat.square_edges(sq);
        let mismatch = || Error::InvalidArgument(format!("{id} is not at {from:?} of {sq:?}"));
        let coords = match self.placements.get(id) {
            Placement::Vertex(v) => {
                let c = Corner::ALL
                    .into_iter()
                    .find(|&c| lat.corner_site(sq, c) == v)
                    .ok_or_else(mismatch)?;
                match c {
                    Corner::A => {}
                    Corner::B => self.reanchor(&pb)?,
                    Corner::C => self.reanchor(&pc)?,
                    Corner::D => self.reanchor(&pd)?,
                }
                c.coords()
            }
            Placement::Edge { edge, t } => {
                if edge == e.ca {
                    self.reanchor(&pc)?;
                    (0.0, t)
                } else if edge == e.cd {
                    self.reanchor(&pc)?;
                    (t, 0.0)
                } else if edge == e.ab {
                    (t, 1.0)
                } else if edge == e.db {
                    self.reanchor(&pd)?;
                    (1.0, t)
                } else {
                    return Err(mismatch());
                }
            }
            Placement::Face { square, x, y } if square == sq => (x, y),
            Placement::Face { .. } => return Err(mismatch()),
        };
        if !near(coords.0, from.0) || !near(coords.1, from.1) {
            return Err(mismatch());
        }
        self.placements.set(
            id,
            Placement::Face {
                square: sq,
                x: from.0,
                y: from.1,
            },
        );
        Ok(())
    }

    /// Moves boundary placements to the simplest equivalent form.
    fn canonicalize(&mut self, id: DefectId) -> Result<()> {
        let lat = self.lat;
        match self.placements.get(id) {
            Placement::Vertex(_) => {}
            Placement::Edge { edge, t } => {
                if near(t, 0.0) {
                    self.placements.set(id, Placement::Vertex(lat.edge_start(edge)));
                } else if near(t, 1.0) {
                    self.reanchor(&lat.edge_pauli(edge))?;
                    self.placements.set(id, Placement::Vertex(lat.edge_end(edge)));
                }
            }
            Placement::Face { square, x, y } => {
                let [_, pb, pc, pd] = corner_paulis(lat, square);
                let e = lat.square_edges(square);
                let (x0, x1, y0, y1) = (near(x, 0.0), near(x, 1.0), near(y, 0.0), near(y, 1.0));
                let corner = match (x0, x1, y0, y1) {
                    (true, _, true, _) => Some((Corner::C, Some(&pc))),
                    (_, true, true, _) => Some((Corner::D, Some(&pd))),
                    (true, _, _, true) => Some((Corner::A, None)),
                    (_, true, _, true) => Some((Corner::B, Some(&pb))),
                    _ => None,
                };
                if let Some((c, p)) = corner {
                    if let Some(p) = p {
                        self.reanchor(p)?;
                    }
                    self.placements.set(id, Placement::Vertex(lat.corner_site(square, c)));
                } else if x0 {
                    self.reanchor(&pc)?;
                    self.placements.set(id, Placement::Edge { edge: e.ca, t: y });
                } else if y0 {
                    self.reanchor(&pc)?;
                    self.placements.set(id, Placement::Edge { edge: e.cd, t: x });
                } else if y1 {
                    self.placements.set(id, Placement::Edge { edge: e.ab, t: x });
                } else if x1 {
                    self.reanchor(&pd)?;
                    self.placements.set(id, Placement::Edge { edge: e.db, t: y });
                }
            }
        }
        Ok(())
    }

    fn check_edge(&self, id: DefectId, edge: LayerEdge) -> Result<()> {
        if edge.layer != id.layer {
            return Err(Error::InvalidArgument(format!("{id} cannot use a {:?} edge", edge.layer)));
        }
        Ok(())
    }

    /// Applies one segment to `frame`, returning its kind and leakage.
    fn step(&mut self, seg: &PathSegment, frame: &mut CMatrix) -> Result<(SegmentKind, f64)> {
        let lat = self.lat;
        let id = seg.defect;
        if id.index >= self.placements.layer(id.layer).len() {
            return Err(Error::InvalidArgument(format!("no defect {id}")));
        }
        let (t_seg, leak) = match seg.kind {
            SegmentMove::DiscreteHop { edge } => {
                self.check_edge(id, edge)?;
                let (a, b) = (lat.edge_start(edge), lat.edge_end(edge));
                let to = match self.placements.get(id) {
                    Placement::Vertex(v) if v == a => b,
                    Placement::Vertex(v) if v == b => a,
                    _ => {
                        return Err(Error::InvalidArgument(format!(
                            "{id} is not at an endpoint of {edge:?}"
                        )))
                    }
                };
                // The hop must commute with every pending combination.
                let mut probe = self.placements.clone();
                probe.set(id, Placement::Edge { edge, t: 0.5 });
                std::mem::swap(&mut self.placements, &mut probe);
                let guarded = self.guard("hop");
                std::mem::swap(&mut self.placements, &mut probe);
                guarded?;
                let sigma = lat.edge_pauli(edge);
                self.reanchor(&sigma)?;
                self.placements.set(id, Placement::Vertex(to));
                let seg = TransportSegment::ExactPauli(sigma);
                let (m, leak) = seg.apply(frame)?;
                *frame = m;
                (seg.kind(), leak)
            }
            SegmentMove::EdgeSlide { edge, t_from, t_to } => {
                self.check_edge(id, edge)?;
                for t in [t_from, t_to] {
                    if !(0.0..=1.0).contains(&t) {
                        return Err(Error::ParameterOutOfRange(t));
                    }
                }
                let sigma = lat.edge_pauli(edge);
                match self.placements.get(id) {
                    Placement::Vertex(v) if v == lat.edge_start(edge) && near(t_from, 0.0) => {}
                    Placement::Vertex(v) if v == lat.edge_end(edge) && near(t_from, 1.0) => {
                        self.reanchor(&sigma)?;
                    }
                    Placement::Edge { edge: e, t } if e == edge && near(t, t_from) => {}
                    p => {
                        return Err(Error::InvalidArgument(format!(
                            "{id} at {p:?} cannot slide along {edge:?} from {t_from}"
                        )))
                    }
                }
                self.placements.set(
                    id,
                    Placement::Edge {
                        edge,
                        t: 0.5 * (t_from + t_to),
                    },
                );
                self.guard("edge slide")?;
                self.placements.set(id, Placement::Edge { edge, t: t_to });
                let seg = TransportSegment::Interpolated {
                    pauli: sigma,
                    family: Direction::Forward,
                    t_from,
                    t_to,
                };
                let (m, leak) = seg.apply(frame)?;
                *frame = m;
                (seg.kind(), leak)
            }
            SegmentMove::FaceMove { square, from, to } => {
                for v in [from.0, from.1, to.0, to.1] {
                    if !(0.0..=1.0).contains(&v) {
                        return Err(Error::ParameterOutOfRange(v));
                    }
                }
                self.enter_face(id, square, from)?;
                self.guard("face move")?;
                let source = self.eval()?;
                self.placements.set(
                    id,
                    Placement::Face {
                        square,
                        x: to.0,
                        y: to.1,
                    },
                );
                let target = self.eval()?;
                let seg = TransportSegment::FibreIsometry { source, target };
                let (m, leak) = seg.apply(frame)?;
                *frame = m;
                (seg.kind(), leak)
            }
        };
        self.canonicalize(id)?;
        self.guard("after segment")?;
        Ok((t_seg, leak))
    }
}

/// Transports the code's frame along `path`, segment by segment.
pub fn transport_along(tc: &ToricCode, path: &ConfigPath, s: usize) -> Result<TransportOutcome> {
    if path.start != tc.config {
        return Err(Error::InvalidArgument(
            "path does not start at the code's configuration".into(),
        ));
    }
    let start = tc.code.frame().matrix().clone();
    let mut state = State {
        lat: &tc.lattice,
        s,
        placements: tc.config.continuous(),
        anchor: start.clone(),
    };
    state.guard("start")?;
    let mut frame = start;
    let mut transcript = Vec::with_capacity(path.segments.len());
    for (index, seg) in path.segments.iter().enumerate() {
        let (kind, leakage) = state.step(seg, &mut frame)?;
        let residual = max_abs(&(&frame - state.eval()?));
        let orthonormality = identity_deviation(&(frame.ad_mul(&frame)));
        transcript.push(TranscriptEntry {
            index,
            defect: seg.defect,
            kind,
            residual,
            orthonormality,
            leakage,
        });
    }
    let final_config = state
        .placements
        .discrete()
        .ok_or_else(|| Error::InvalidArgument("path must end with every defect on a site".into()))?;
    Ok(TransportOutcome {
        frame: Frame::new(frame)?,
        final_config,
        transcript,
    })
}

/// Which layer a segment moves, for summaries.
pub fn segment_layer(seg: &PathSegment) -> Layer {
    seg.defect.layer
}
