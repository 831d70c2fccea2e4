//! Site-local (tensor-product) operators on mixed-radix registers.

use num_complex::Complex64;

use super::frame::CMatrix;
use super::pauli::PauliString;
use crate::error::{Error, Result};

/// Anything that can act on the columns of an `N × K` block.
pub trait FrameOperator: Sync {
    fn dim(&self) -> usize;
    fn apply_columns(&self, m: &CMatrix) -> Result<CMatrix>;
}

impl FrameOperator for PauliString {
    fn dim(&self) -> usize {
        1usize << self.n()
    }
    fn apply_columns(&self, m: &CMatrix) -> Result<CMatrix> {
        self.apply_matrix(m)
    }
}

/// A dense square matrix used as an operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator(pub CMatrix);

impl FrameOperator for DenseOperator {
    fn dim(&self) -> usize {
        self.0.nrows()
    }
    fn apply_columns(&self, m: &CMatrix) -> Result<CMatrix> {
        if m.nrows() != self.0.ncols() {
            return Err(Error::DimensionMismatch {
                expected: self.0.ncols(),
                got: m.nrows(),
            });
        }
        Ok(&self.0 * m)
    }
}

/// `⊗_j A_j` with `A_j` a `d_j × d_j` matrix. Site 0 is the least significant
/// digit of the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperator {
    dims: Vec<usize>,
    factors: Vec<CMatrix>,
}

pub fn is_identity(m: &CMatrix) -> bool {
    m.is_square()
        && m.iter().enumerate().all(|(idx, z)| {
            let (i, j) = (idx % m.nrows(), idx / m.nrows());
            *z == if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
}

impl LocalOperator {
    pub fn new(dims: Vec<usize>, factors: Vec<CMatrix>) -> Result<Self> {
        if dims.len() != factors.len() {
            return Err(Error::DimensionMismatch {
                expected: dims.len(),
                got: factors.len(),
            });
        }
        for (d, f) in dims.iter().zip(&factors) {
            if *d == 0 || f.nrows() != *d || f.ncols() != *d {
                return Err(Error::DimensionMismatch {
                    expected: *d,
                    got: f.nrows(),
                });
            }
        }
        Ok(Self { dims, factors })
    }

    pub fn identity(dims: &[usize]) -> Self {
        Self {
            dims: dims.to_vec(),
            factors: dims.iter().map(|&d| CMatrix::identity(d, d)).collect(),
        }
    }

    /// Identity everywhere except `m` at `site`.
    pub fn single(dims: &[usize], site: usize, m: CMatrix) -> Result<Self> {
        if site >= dims.len() {
            return Err(Error::InvalidArgument(format!("site {site} out of range")));
        }
        let mut op = Self::identity(dims);
        op.factors[site] = m;
        Self::new(op.dims, op.factors)
    }

    /// The qubit operator with the same action as `p`, phase folded into site 0.
    pub fn from_pauli(p: &PauliString) -> Self {
        let mut factors: Vec<CMatrix> = (0..p.n())
            .map(|j| {
                let m = p.label(j).matrix();
                CMatrix::from_fn(2, 2, |r, c| m[r][c])
            })
            .collect();
        if let Some(f) = factors.first_mut() {
            *f *= p.phase().to_complex();
        }
        Self {
            dims: vec![2; p.n()],
            factors,
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn factors(&self) -> &[CMatrix] {
        &self.factors
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Sites whose factor is not exactly the identity.
    pub fn support(&self) -> Vec<usize> {
        (0..self.dims.len())
            .filter(|&j| !is_identity(&self.factors[j]))
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            dims: self.dims.clone(),
            factors: self.factors.iter().map(|f| f.adjoint()).collect(),
        }
    }

    /// Sitewise product `self · rhs`.
    pub fn compose(&self, rhs: &LocalOperator) -> Result<Self> {
        if self.dims != rhs.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims.len(),
                got: rhs.dims.len(),
            });
        }
        Ok(Self {
            dims: self.dims.clone(),
            factors: self
                .factors
                .iter()
                .zip(&rhs.factors)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// Largest `‖A_j†A_j − 1‖_max` over the factors.
    pub fn unitarity_defect(&self) -> f64 {
        self.factors
            .iter()
            .map(|f| super::frame::identity_deviation(&(f.ad_mul(f))))
            .fold(0.0, f64::max)
    }

    /// Applies every non-identity factor in place.
    pub fn apply_in_place(&self, v: &mut [Complex64]) -> Result<()> {
        let total = self.total_dim();
        if v.len() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                got: v.len(),
            });
        }
        let mut stride = 1usize;
        let mut buf = Vec::new();
        for (j, f) in self.factors.iter().enumerate() {
            let d = self.dims[j];
            if !is_identity(f) {
                buf.resize(d, Complex64::new(0.0, 0.0));
                let block = d * stride;
                for outer in (0..total).step_by(block) {
                    for inner in 0..stride {
                        let base = outer + inner;
                        for (k, slot) in buf.iter_mut().enumerate() {
                            *slot = v[base + k * stride];
                        }
                        for r in 0..d {
                            let mut acc = Complex64::new(0.0, 0.0);
                            for (c, b) in buf.iter().enumerate() {
                                acc += f[(r, c)] * b;
                            }
                            v[base + r * stride] = acc;
                        }
                    }
                }
            }
            stride *= d;
        }
        Ok(())
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut out = v.to_vec();
        self.apply_in_place(&mut out)?;
        Ok(out)
    }

    /// Dense matrix, for oracles on small registers.
    pub fn to_dense(&self) -> CMatrix {
        let n = self.total_dim();
        let mut m = CMatrix::identity(n, n);
        for mut col in m.column_iter_mut() {
            self.apply_in_place(col.as_mut_slice())
                .expect("dimension matches by construction");
        }
        m
    }
}

impl FrameOperator for LocalOperator {
    fn dim(&self) -> usize {
        self.total_dim()
    }
    fn apply_columns(&self, m: &CMatrix) -> Result<CMatrix> {
        let mut out = m.clone();
        for mut col in out.column_iter_mut() {
            self.apply_in_place(col.as_mut_slice())?;
        }
        Ok(out)
    }
}

fn one_norm(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a Taylor core.
/// Meant for the small site factors only.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm = one_norm(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a / Complex64::new(2f64.powi(squarings), 0.0);
    let mut result = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..=30 {
        term = &term * &scaled / Complex64::new(k as f64, 0.0);
        result += &term;
        if super::frame::max_abs(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}
