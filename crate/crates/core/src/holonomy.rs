//! Frame transport along piecewise paths and holonomy extraction.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli_linalg::frame::{identity_deviation, matrix_serde, max_abs, CMatrix, Frame};
use crate::pauli_linalg::interp::{apply_combination_matrix, Direction, InterpCoeffs};
use crate::pauli_linalg::local::LocalOperator;
use crate::pauli_linalg::{subspace_distance, PauliString};

/// One piece of a transport.
#[derive(Clone, Debug, PartialEq)]
pub enum TransportSegment {
    /// An exact signed Pauli.
    ExactPauli(PauliString),
    /// `W(t_to) W(t_from)^{-1}` for the family `U(t)` (forward) or `V(t)`
    /// (reverse) generated by the Hermitian Pauli `pauli`.
    Interpolated {
        pauli: PauliString,
        family: Direction,
        t_from: f64,
        t_to: f64,
    },
    /// `v ↦ T S† v`: carries the span of `source` onto the span of `target`,
    /// matching columns.
    FibreIsometry { source: CMatrix, target: CMatrix },
    /// A site-local unitary.
    Local(LocalOperator),
    /// A dense unitary, for small oracles.
    Dense(CMatrix),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    ExactPauli,
    Interpolated,
    FibreIsometry,
    Local,
    Dense,
}

impl TransportSegment {
    pub fn kind(&self) -> SegmentKind {
        match self {
            TransportSegment::ExactPauli(_) => SegmentKind::ExactPauli,
            TransportSegment::Interpolated { .. } => SegmentKind::Interpolated,
            TransportSegment::FibreIsometry { .. } => SegmentKind::FibreIsometry,
            TransportSegment::Local(_) => SegmentKind::Local,
            TransportSegment::Dense(_) => SegmentKind::Dense,
        }
    }

    /// Coefficients of the relative interpolation `W(t_to) W(t_from)^{-1}`.
    pub fn interpolation_coeffs(family: Direction, t_from: f64, t_to: f64) -> InterpCoeffs {
        let dt = match family {
            Direction::Forward => t_to - t_from,
            Direction::Reverse => t_from - t_to,
        };
        InterpCoeffs::at(dt)
    }

    fn dim(&self) -> Option<usize> {
        match self {
            TransportSegment::ExactPauli(p) | TransportSegment::Interpolated { pauli: p, .. } => {
                Some(1 << p.n())
            }
            TransportSegment::FibreIsometry { source, .. } => Some(source.nrows()),
            TransportSegment::Local(l) => Some(l.total_dim()),
            TransportSegment::Dense(d) => Some(d.nrows()),
        }
    }

    /// Applies the segment to the columns of `m`. Also returns the part of `m`
    /// outside the segment's domain (nonzero only for fibre isometries).
    pub fn apply(&self, m: &CMatrix) -> Result<(CMatrix, f64)> {
        if let Some(d) = self.dim() {
            if d != m.nrows() {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: m.nrows(),
                });
            }
        }
        Ok(match self {
            TransportSegment::ExactPauli(p) => (p.apply_matrix(m)?, 0.0),
            TransportSegment::Interpolated {
                pauli,
                family,
                t_from,
                t_to,
            } => {
                let c = Self::interpolation_coeffs(*family, *t_from, *t_to);
                (apply_combination_matrix(pauli, c, m)?, 0.0)
            }
            TransportSegment::FibreIsometry { source, target } => {
                if source.shape() != target.shape() {
                    return Err(Error::DimensionMismatch {
                        expected: source.ncols(),
                        got: target.ncols(),
                    });
                }
                let coords = source.ad_mul(m);
                let leak = (m - source * &coords).norm();
                (target * coords, leak)
            }
            TransportSegment::Local(l) => {
                use crate::pauli_linalg::local::FrameOperator;
                (l.apply_columns(m)?, 0.0)
            }
            TransportSegment::Dense(d) => (d * m, 0.0),
        })
    }
}

/// Per-segment diagnostics of a lift.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub kind: SegmentKind,
    /// `‖F†F − 1‖_max` after the segment.
    pub orthonormality: f64,
    /// Frobenius norm of the frame's component outside a fibre map's domain.
    pub leakage: f64,
}

/// Applies `segments` in order and keeps a record per segment.
pub fn lift_frame_with_records(
    start: &Frame,
    segments: &[TransportSegment],
) -> Result<(Frame, Vec<SegmentRecord>)> {
    let mut m = start.matrix().clone();
    let mut records = Vec::with_capacity(segments.len());
    for s in segments {
        let (next, leakage) = s.apply(&m)?;
        m = next;
        records.push(SegmentRecord {
            kind: s.kind(),
            orthonormality: identity_deviation(&(m.ad_mul(&m))),
            leakage,
        });
    }
    Ok((Frame::new(m)?, records))
}

/// Sequential lift of `start` through `segments`.
pub fn lift_frame(start: &Frame, segments: &[TransportSegment]) -> Result<Frame> {
    Ok(lift_frame_with_records(start, segments)?.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    PhaseOnly,
    NontrivialLogical,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `‖M†M − 1‖_max`.
    pub unitarity: f64,
    /// Sine of the largest principal angle between start and end spans.
    pub loop_distance: f64,
    /// `‖M − ξ·1‖_max`.
    pub phase_deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolonomyResult {
    #[serde(rename = "logical_matrix", with = "matrix_serde")]
    pub logical: CMatrix,
    pub phase: Complex64,
    pub classification: Classification,
    pub residuals: Residuals,
}

impl HolonomyResult {
    /// The largest of the residuals relevant to the classification.
    pub fn residual(&self) -> f64 {
        match self.classification {
            Classification::PhaseOnly => self.residuals.phase_deviation.max(self.residuals.unitarity),
            Classification::NontrivialLogical => self.residuals.unitarity,
        }
    }
}

/// The `K`-th root of `det` whose argument is closest to `target`.
fn det_root_nearest(det: Complex64, k: usize, target: f64) -> Complex64 {
    let base = det.arg() / k as f64;
    let step = 2.0 * PI / k as f64;
    let mut best = base;
    let mut best_gap = f64::INFINITY;
    for j in 0..k {
        let a = base + j as f64 * step;
        let gap = (Complex64::from_polar(1.0, a) - Complex64::from_polar(1.0, target)).norm();
        if gap < best_gap {
            best_gap = gap;
            best = a;
        }
    }
    Complex64::from_polar(1.0, best)
}

/// Extracts `M = start† end` for a loop and classifies it.
pub fn classify(start: &Frame, end: &Frame, tol: f64) -> Result<HolonomyResult> {
    if start.n() != end.n() || start.k() != end.k() {
        return Err(Error::DimensionMismatch {
            expected: start.k(),
            got: end.k(),
        });
    }
    let loop_distance = subspace_distance(start, end)?;
    let m = start.matrix().ad_mul(end.matrix());
    if loop_distance >= tol {
        let min_cosine = m.singular_values().iter().copied().fold(f64::INFINITY, f64::min);
        return Err(Error::NotALoop { min_cosine });
    }
    classify_matrix(m, loop_distance, tol)
}

/// Classifies a logical matrix directly.
pub fn classify_matrix(m: CMatrix, loop_distance: f64, tol: f64) -> Result<HolonomyResult> {
    let k = m.nrows();
    let unitarity = identity_deviation(&(m.ad_mul(&m)));
    let tr = m.trace();
    let (phase, trace_branch) = if tr.norm() / k as f64 > 0.5 {
        (tr / tr.norm(), true)
    } else {
        (det_root_nearest(m.determinant(), k, tr.arg()), false)
    };
    let phase_deviation = max_abs(&(&m - CMatrix::identity(k, k) * phase));
    let classification = if trace_branch && phase_deviation < tol {
        Classification::PhaseOnly
    } else {
        Classification::NontrivialLogical
    };
    Ok(HolonomyResult {
        logical: m,
        phase,
        classification,
        residuals: Residuals {
            unitarity,
            loop_distance,
            phase_deviation,
        },
    })
}

/// `min_φ ‖A − e^{iφ} B‖_max`, with `φ` fixed by the overlap `tr(B†A)`.
pub fn phase_adjusted_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let overlap = (b.ad_mul(a)).trace();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    max_abs(&(a - b * phase))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli_linalg::Pauli1;

    #[test]
    fn empty_lift_is_identity() {
        let f = Frame::standard(4, 2).unwrap();
        assert_eq!(lift_frame(&f, &[]).unwrap(), f);
    }

    #[test]
    fn exact_pauli_flips_ket() {
        let f = Frame::standard(2, 1).unwrap();
        let x = PauliString::single(1, 0, Pauli1::X).unwrap();
        let g = lift_frame(&f, &[TransportSegment::ExactPauli(x)]).unwrap();
        assert_eq!(g.matrix()[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(g.matrix()[(0, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn self_loop_is_phase_only_one() {
        let f = Frame::standard(4, 2).unwrap();
        let h = classify(&f, &f, 1e-9).unwrap();
        assert_eq!(h.classification, Classification::PhaseOnly);
        assert!((h.phase - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn global_i_is_phase_only_i() {
        let f = Frame::standard(4, 2).unwrap();
        let g = f.rotate(&(CMatrix::identity(2, 2) * Complex64::new(0.0, 1.0))).unwrap();
        let h = classify(&f, &g, 1e-9).unwrap();
        assert_eq!(h.classification, Classification::PhaseOnly);
        assert!((h.phase - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn logical_x_is_nontrivial() {
        let f = Frame::standard(4, 2).unwrap();
        let mut x = CMatrix::zeros(2, 2);
        x[(0, 1)] = Complex64::new(1.0, 0.0);
        x[(1, 0)] = Complex64::new(1.0, 0.0);
        let h = classify(&f, &f.rotate(&x).unwrap(), 1e-9).unwrap();
        assert_eq!(h.classification, Classification::NontrivialLogical);
        // det X = -1, trace 0: root nearest arg 0 is ±i; either is unit modulus.
        assert!((h.phase.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn different_spans_are_not_a_loop() {
        let f = Frame::standard(4, 1).unwrap();
        let mut g = CMatrix::zeros(4, 1);
        g[(3, 0)] = Complex64::new(1.0, 0.0);
        let g = Frame::new(g).unwrap();
        assert!(matches!(classify(&f, &g, 1e-9), Err(Error::NotALoop { .. })));
    }

    #[test]
    fn dimension_chain_break_errors() {
        let f = Frame::standard(4, 1).unwrap();
        let x = PauliString::single(3, 0, Pauli1::X).unwrap();
        assert!(lift_frame(&f, &[TransportSegment::ExactPauli(x)]).is_err());
    }

    #[test]
    fn interpolated_full_slide_is_the_pauli() {
        let f = Frame::standard(2, 1).unwrap();
        let x = PauliString::single(1, 0, Pauli1::X).unwrap();
        for family in [Direction::Forward, Direction::Reverse] {
            let (t0, t1) = match family {
                Direction::Forward => (0.0, 1.0),
                Direction::Reverse => (1.0, 0.0),
            };
            let seg = TransportSegment::Interpolated {
                pauli: x,
                family,
                t_from: t0,
                t_to: t1,
            };
            let g = lift_frame(&f, &[seg]).unwrap();
            assert_eq!(g.matrix()[(1, 0)], Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn json_has_named_fields() {
        let f = Frame::standard(2, 1).unwrap();
        let h = classify(&f, &f, 1e-9).unwrap();
        let v: serde_json::Value = serde_json::to_value(&h).unwrap();
        assert!(v.get("logical_matrix").is_some());
        assert_eq!(v["classification"], "PhaseOnly");
        let back: HolonomyResult = serde_json::from_value(v).unwrap();
        assert_eq!(back, h);
    }
}
