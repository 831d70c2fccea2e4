//! Continuous defect positions: edge codes `U(t)·C`, face codes spanned by
//! the four corner codes, and the determinant winding of the boundary
//! interpolation families.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::code::{build_code, ToricCode};
use super::config::{hardcore_check, DefectConfig, DefectId};
use super::lattice::{Corner, LayerEdge, Square, TorusLattice};
use crate::error::{Error, Result};
use crate::pauli_linalg::frame::CMatrix;
use crate::pauli_linalg::interp::apply_combination_matrix;
use crate::pauli_linalg::{alpha, beta, Frame, InterpCoeffs, PauliString};
use crate::qecc::Code;

/// `Σ c_k P_k M`.
pub fn apply_terms(terms: &[(Complex64, PauliString)], m: &CMatrix) -> Result<CMatrix> {
    let mut out = CMatrix::zeros(m.nrows(), m.ncols());
    for (c, p) in terms {
        if *c != Complex64::new(0.0, 0.0) {
            out += p.apply_matrix(m)? * *c;
        }
    }
    Ok(out)
}

fn single_occupant(lat: &TorusLattice, cfg: &DefectConfig, e: LayerEdge) -> Result<DefectId> {
    let a = cfg.occupant(e.layer, lat.edge_start(e));
    let b = cfg.occupant(e.layer, lat.edge_end(e));
    match (a, b) {
        (Some(id), None) | (None, Some(id)) => Ok(id),
        _ => Err(Error::Config(format!(
            "edge {e:?} needs exactly one adjacent defect of its layer"
        ))),
    }
}

/// The code with the edge's adjacent defect at parameter `t` along it:
/// `U(t)` applied to the code with the defect at the edge's start.
pub fn edge_code(lat: &TorusLattice, cfg: &DefectConfig, edge: LayerEdge, t: f64, s: usize) -> Result<Code> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::ParameterOutOfRange(t));
    }
    let id = single_occupant(lat, cfg, edge)?;
    let start = cfg.moved(id, lat.edge_start(edge));
    let end = cfg.moved(id, lat.edge_end(edge));
    if !hardcore_check(lat, &end, s).ok {
        return Err(Error::HardCore(format!("edge {edge:?}: end configuration")));
    }
    edge_code_from(&build_code(lat, &start, s)?, edge, t)
}

/// Like [`edge_code`], reusing an already built code for the start configuration.
pub fn edge_code_from(start: &ToricCode, edge: LayerEdge, t: f64) -> Result<Code> {
    let m = apply_combination_matrix(&start.lattice.edge_pauli(edge), InterpCoeffs::at(t), start.code.frame().matrix())?;
    start.code.with_frame(Frame::new(m)?)
}

/// Which coefficient formula applies: the lower triangle `x + y ≤ 1`
/// mixes `ψ_A, ψ_C, ψ_D`; the upper one mixes `ψ_A, ψ_B, ψ_D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Triangle {
    Lower,
    Upper,
}

impl Triangle {
    pub fn of(x: f64, y: f64) -> Triangle {
        if x + y <= 1.0 {
            Triangle::Lower
        } else {
            Triangle::Upper
        }
    }
}

/// Amplitudes on the corner codewords `ψ_A, ψ_B, ψ_C, ψ_D`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceCoefficients {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl FaceCoefficients {
    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()
    }
}

/// The `ψ_D` amplitude shared by both triangles. Its modulus squared,
/// `1 − |a|² − |c|²`, simplifies to `S_x C_y (S_x C_y + 2 C_x S_y)` with
/// `S_x = sin(πx/2)` etc., which avoids cancellation near the edges.
fn d_coefficient(x: f64, y: f64) -> Complex64 {
    let (sx, cx) = (FRAC_PI_2 * x).sin_cos();
    let (sy, cy) = (FRAC_PI_2 * y).sin_cos();
    let g = sx * cy;
    let ph = beta(x) * alpha(y);
    if g <= 0.0 || ph.norm() == 0.0 {
        // d(0, y) = 0 and d'(x, 1) = 0.
        return Complex64::new(0.0, 0.0);
    }
    let ph = ph / ph.norm();
    ph * (g * (g + 2.0 * cx * sy)).max(0.0).sqrt()
}

pub fn face_coefficients_on(tri: Triangle, x: f64, y: f64) -> FaceCoefficients {
    let a = alpha(x) * beta(y);
    let d = d_coefficient(x, y);
    let zero = Complex64::new(0.0, 0.0);
    match tri {
        Triangle::Lower => FaceCoefficients {
            a,
            b: zero,
            c: alpha(x + y),
            d,
        },
        Triangle::Upper => FaceCoefficients {
            a,
            b: beta(x + y - 1.0),
            c: zero,
            d,
        },
    }
}

pub fn face_coefficients(x: f64, y: f64) -> FaceCoefficients {
    face_coefficients_on(Triangle::of(x, y), x, y)
}

/// Paulis taking `ψ_A` to `ψ_A, ψ_B, ψ_C, ψ_D`.
pub fn corner_paulis(lat: &TorusLattice, sq: Square) -> [PauliString; 4] {
    let e = lat.square_edges(sq);
    let ca = lat.edge_pauli(e.ca);
    let d = lat.edge_pauli(e.cd).mul(&ca).expect("same size");
    [PauliString::identity(lat.n_qubits()), lat.edge_pauli(e.ab), ca, d]
}

/// The operator `a + b σ_B + c σ_C + d σ_D` acting on the anchor code.
pub fn face_terms(lat: &TorusLattice, sq: Square, k: &FaceCoefficients) -> Vec<(Complex64, PauliString)> {
    let [i, pb, pc, pd] = corner_paulis(lat, sq);
    vec![(k.a, i), (k.b, pb), (k.c, pc), (k.d, pd)]
}

/// The defect of the square's layer sitting on one of its corners, and
/// which corner.
pub fn corner_occupant(lat: &TorusLattice, cfg: &DefectConfig, sq: Square) -> Result<(DefectId, Corner)> {
    let found: Vec<(DefectId, Corner)> = Corner::ALL
        .iter()
        .filter_map(|&c| cfg.occupant(sq.layer, lat.corner_site(sq, c)).map(|id| (id, c)))
        .collect();
    match found.as_slice() {
        [one] => Ok(*one),
        _ => Err(Error::Config(format!(
            "square {sq:?} needs exactly one corner defect of its layer, found {}",
            found.len()
        ))),
    }
}

/// Checks that the mover may enter `sq`: every corner configuration is
/// hard-core valid and no opposite-layer defect sits at the centre.
pub fn check_face_entry(lat: &TorusLattice, cfg: &DefectConfig, sq: Square, id: DefectId, s: usize) -> Result<()> {
    let centre = lat.square_center(sq);
    if cfg.layer(sq.layer.other()).contains(&centre) {
        return Err(Error::HardCore(format!(
            "face entry forbidden: {:?} defect at the centre of {sq:?}",
            sq.layer.other()
        )));
    }
    for c in Corner::ALL {
        let moved = cfg.moved(id, lat.corner_site(sq, c));
        if !hardcore_check(lat, &moved, s).ok {
            return Err(Error::HardCore(format!(
                "face entry forbidden: corner {c:?} of {sq:?} violates separation {s}"
            )));
        }
    }
    Ok(())
}

/// The code with the corner defect moved to local position `(x, y)` of the
/// square, using the coefficient formula of `tri`.
pub fn face_code_on(
    lat: &TorusLattice,
    cfg: &DefectConfig,
    sq: Square,
    tri: Triangle,
    x: f64,
    y: f64,
    s: usize,
) -> Result<Code> {
    for v in [x, y] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::ParameterOutOfRange(v));
        }
    }
    let (id, _) = corner_occupant(lat, cfg, sq)?;
    check_face_entry(lat, cfg, sq, id, s)?;
    let anchor = build_code(lat, &cfg.moved(id, lat.corner_site(sq, Corner::A)), s)?;
    face_code_from_anchor(&anchor, sq, tri, x, y)
}

pub fn face_code(lat: &TorusLattice, cfg: &DefectConfig, sq: Square, x: f64, y: f64, s: usize) -> Result<Code> {
    face_code_on(lat, cfg, sq, Triangle::of(x, y), x, y, s)
}

/// Face code from an already-built anchor code (mover at corner `A`).
pub fn face_code_from_anchor(anchor: &ToricCode, sq: Square, tri: Triangle, x: f64, y: f64) -> Result<Code> {
    let k = face_coefficients_on(tri, x, y);
    let m = apply_terms(&face_terms(&anchor.lattice, sq, &k), anchor.code.frame().matrix())?;
    anchor.code.with_frame(Frame::new(m)?)
}

/// One boundary leg of a determinant-winding computation: the family `U(t)`
/// (following the edge orientation) or `V(t)` (against it), traversed from
/// `t_from` to `t_to`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingLeg {
    pub follows_orientation: bool,
    pub t_from: f64,
    pub t_to: f64,
}

/// `det` of the interpolation family on the two-dimensional space spanned
/// by the endpoint codewords. `σ` has eigenvalues `±1` there, so
/// `det U(t) = (α+β)(α−β)`; `V(t) = U(−t)`.
fn family_det(follows: bool, t: f64) -> Complex64 {
    let t = if follows { t } else { -t };
    let (a, b) = (alpha(t), beta(t));
    (a + b) * (a - b)
}

/// Accumulated `arg det` along the legs, by unwrapping sampled increments.
pub fn det_winding(legs: &[WindingLeg]) -> f64 {
    const SAMPLES: usize = 64;
    let mut total = 0.0;
    for leg in legs {
        if leg.t_from == leg.t_to {
            continue;
        }
        let mut prev = family_det(leg.follows_orientation, leg.t_from);
        for k in 1..=SAMPLES {
            let t = leg.t_from + (leg.t_to - leg.t_from) * k as f64 / SAMPLES as f64;
            let cur = family_det(leg.follows_orientation, t);
            let mut step = cur.arg() - prev.arg();
            if step > PI {
                step -= 2.0 * PI;
            } else if step < -PI {
                step += 2.0 * PI;
            }
            total += step;
            prev = cur;
        }
    }
    total
}

/// Sides of a square, for flipping one orientation in diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Ca,
    Cd,
    Ab,
    Db,
}

/// Winding of `arg det` around the boundary `A → C → D → B → A` of a
/// square under the uniform orientation, optionally with one side's
/// orientation reversed.
pub fn det_winding_check(lat: &TorusLattice, sq: Square, flipped: Option<Side>) -> f64 {
    // Every square has the same layout, so only the orientation pattern
    // matters; `lat` fixes which square is meant.
    let _ = lat.square_edges(sq);
    // Side orientations: CA and AB are traversed against, CD and DB along.
    let sides = [(Side::Ca, false), (Side::Cd, true), (Side::Db, true), (Side::Ab, false)];
    let legs: Vec<WindingLeg> = sides
        .iter()
        .map(|&(side, follows)| WindingLeg {
            follows_orientation: if flipped == Some(side) { !follows } else { follows },
            t_from: 0.0,
            t_to: 1.0,
        })
        .collect();
    det_winding(&legs)
}
