//! Orthonormal K-frames and subspace comparison.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Orthonormality tolerance enforced at construction.
pub const FRAME_TOL: f64 = 1e-10;

/// Default tolerance for subspace equality.
pub const SUBSPACE_TOL: f64 = 1e-9;

pub type CMatrix = DMatrix<Complex64>;

/// An `N × K` complex matrix with orthonormal columns.
///
/// The column span is a point of `Gr(K, N)`; the ordered columns are an
/// encoding of that subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    data: CMatrix,
}

/// `max |A_ij - δ_ij|` for square `A`.
pub fn identity_deviation(a: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// `max |A_ij|`.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

impl Frame {
    /// Wraps `data` after checking `‖F†F − 1‖_max < FRAME_TOL` and `1 ≤ K ≤ N`.
    pub fn new(data: CMatrix) -> Result<Self> {
        let (n, k) = data.shape();
        if k == 0 || k > n {
            return Err(Error::InvalidArgument(format!(
                "frame shape {n}x{k} needs 1 <= K <= N"
            )));
        }
        let dev = identity_deviation(&(data.ad_mul(&data)));
        if dev >= FRAME_TOL {
            return Err(Error::InvalidArgument(format!(
                "frame columns not orthonormal (deviation {dev:.3e})"
            )));
        }
        Ok(Self { data })
    }

    /// The first `k` standard basis vectors of `C^n`.
    pub fn standard(n: usize, k: usize) -> Result<Self> {
        let mut m = CMatrix::zeros(n, k);
        for j in 0..k.min(n) {
            m[(j, j)] = Complex64::new(1.0, 0.0);
        }
        Self::new(m)
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn k(&self) -> usize {
        self.data.ncols()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn column(&self, j: usize) -> &[Complex64] {
        let n = self.n();
        &self.data.as_slice()[j * n..(j + 1) * n]
    }

    /// `F · U` for a `K × K` matrix `U` (a change of encoding when `U` is unitary).
    pub fn rotate(&self, u: &CMatrix) -> Result<Frame> {
        if u.nrows() != self.k() || u.ncols() != self.k() {
            return Err(Error::DimensionMismatch {
                expected: self.k(),
                got: u.nrows(),
            });
        }
        Frame::new(&self.data * u)
    }

    /// `‖F†F − 1‖_max`.
    pub fn orthonormality_defect(&self) -> f64 {
        identity_deviation(&(self.data.ad_mul(&self.data)))
    }

    /// Indices where any column has a nonzero amplitude, ascending.
    pub fn support(&self) -> Vec<usize> {
        let n = self.n();
        let k = self.k();
        let s = self.data.as_slice();
        (0..n)
            .filter(|&i| (0..k).any(|j| s[j * n + i] != Complex64::new(0.0, 0.0)))
            .collect()
    }

    /// The projector `F F†`, dense. Only for small `N`.
    pub fn projector(&self) -> CMatrix {
        &self.data * self.data.adjoint()
    }
}

fn check_same_shape(f1: &Frame, f2: &Frame) -> Result<()> {
    if f1.n() != f2.n() {
        return Err(Error::DimensionMismatch {
            expected: f1.n(),
            got: f2.n(),
        });
    }
    if f1.k() != f2.k() {
        return Err(Error::DimensionMismatch {
            expected: f1.k(),
            got: f2.k(),
        });
    }
    Ok(())
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Modified Gram–Schmidt with one re-orthogonalization pass.
///
/// Vectors are taken in input order; a vector whose residual norm falls below
/// `tol` is dropped.
pub fn orthonormalize(vectors: &[Vec<Complex64>], tol: f64) -> Result<Frame> {
    let first = vectors
        .first()
        .ok_or_else(|| Error::InvalidArgument("no vectors to orthonormalize".into()))?;
    let n = first.len();
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for v in vectors {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        let mut r = v.clone();
        for _pass in 0..2 {
            for q in &basis {
                let c = dot(q, &r);
                for (ri, qi) in r.iter_mut().zip(q) {
                    *ri -= c * qi;
                }
            }
        }
        let nr = norm(&r);
        if nr < tol {
            continue;
        }
        let inv = 1.0 / nr;
        r.iter_mut().for_each(|z| *z *= inv);
        basis.push(r);
    }
    if basis.is_empty() {
        return Err(Error::EmptySpan);
    }
    let k = basis.len();
    let flat: Vec<Complex64> = basis.into_iter().flatten().collect();
    Frame::new(CMatrix::from_vec(n, k, flat))
}

/// Orthonormalizes the columns of `m`.
pub fn orthonormalize_columns(m: &CMatrix, tol: f64) -> Result<Frame> {
    let cols: Vec<Vec<Complex64>> = m
        .column_iter()
        .map(|c| c.iter().copied().collect())
        .collect();
    orthonormalize(&cols, tol)
}

/// `F1† F2`. Its singular values are the cosines of the principal angles.
pub fn principal_overlap(f1: &Frame, f2: &Frame) -> Result<CMatrix> {
    check_same_shape(f1, f2)?;
    Ok(f1.data.ad_mul(&f2.data))
}

/// Principal-angle cosines, descending.
pub fn principal_cosines(f1: &Frame, f2: &Frame) -> Result<Vec<f64>> {
    let m = principal_overlap(f1, f2)?;
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Sine of the largest principal angle, `‖(1 − F1F1†) F2‖₂`.
///
/// Computed from the residual directly so that tiny angles are not lost to
/// cancellation in `1 − cos`.
pub fn subspace_distance(f1: &Frame, f2: &Frame) -> Result<f64> {
    if f1.n() != f2.n() {
        return Err(Error::DimensionMismatch {
            expected: f1.n(),
            got: f2.n(),
        });
    }
    let overlap = f1.data.ad_mul(&f2.data);
    let residual = &f2.data - &f1.data * overlap;
    let gram = residual.ad_mul(&residual);
    let top = gram
        .singular_values()
        .iter()
        .fold(0.0f64, |m, &s| m.max(s));
    let forward = top.sqrt();
    if f1.k() == f2.k() {
        Ok(forward)
    } else {
        // Different dimensions never span the same space.
        Ok(forward.max(1.0))
    }
}

/// Whether `span(F1) = span(F2)`: every principal angle has sine below `tol`.
pub fn subspace_equal(f1: &Frame, f2: &Frame, tol: f64) -> Result<bool> {
    check_same_shape(f1, f2)?;
    Ok(subspace_distance(f1, f2)? < tol)
}

/// Serde adapter writing a matrix as rows of `[re, im]` pairs.
pub mod matrix_serde {
    use super::CMatrix;
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Complex64>> = (0..m.nrows())
            .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let rows = Vec::<Vec<Complex64>>::deserialize(d)?;
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != nc) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        Ok(CMatrix::from_fn(nr, nc, |r, c| rows[r][c]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn duplicate_is_dropped() {
        let v = vec![c(1.0, 0.0), c(0.0, 0.0)];
        let f = orthonormalize(&[v.clone(), v], 1e-12).unwrap();
        assert_eq!(f.k(), 1);
    }

    #[test]
    fn basis_pair_gives_identity_frame() {
        let f = orthonormalize(
            &[vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]],
            1e-12,
        )
        .unwrap();
        assert_eq!(f.k(), 2);
        assert!(identity_deviation(f.matrix()) < 1e-15);
    }

    #[test]
    fn all_zero_is_empty_span() {
        let z = vec![c(0.0, 0.0); 4];
        assert_eq!(orthonormalize(&[z], 1e-12), Err(Error::EmptySpan));
    }

    #[test]
    fn overlap_of_equal_and_orthogonal_frames() {
        let f = Frame::standard(4, 2).unwrap();
        let m = principal_overlap(&f, &f).unwrap();
        assert!(identity_deviation(&m) < 1e-15);
        let mut g = CMatrix::zeros(4, 2);
        g[(2, 0)] = c(1.0, 0.0);
        g[(3, 1)] = c(1.0, 0.0);
        let g = Frame::new(g).unwrap();
        assert!(max_abs(&principal_overlap(&f, &g).unwrap()) < 1e-15);
        assert!(!subspace_equal(&f, &g, 1e-9).unwrap());
    }

    #[test]
    fn shape_mismatch_errors() {
        let f = Frame::standard(4, 2).unwrap();
        let g = Frame::standard(4, 1).unwrap();
        assert!(principal_overlap(&f, &g).is_err());
        let h = Frame::standard(8, 2).unwrap();
        assert!(subspace_equal(&f, &h, 1e-9).is_err());
    }

    #[test]
    fn non_orthonormal_rejected() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(1.0, 0.0);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(Frame::new(m).is_err());
        assert!(Frame::new(CMatrix::zeros(2, 3)).is_err());
    }
}
