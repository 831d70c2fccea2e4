//! Codes as frames: the correction condition, distance, logical action and
//! the 5-qubit fixture.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli_linalg::frame::{identity_deviation, max_abs, CMatrix, Frame};
use crate::pauli_linalg::local::{FrameOperator, LocalOperator};
use crate::pauli_linalg::pauli::{paulis_on_support, paulis_up_to_weight, supports_of_size};
use crate::pauli_linalg::{orthonormalize, PauliString};

/// Default tolerance for the constant-block tests.
pub const DEFAULT_TOL: f64 = 1e-9;

/// An `((n, K))` code: an orthonormal frame over `⊗_j C^{d_j}`.
#[derive(Clone, Debug)]
pub struct Code {
    frame: Frame,
    qudit_dims: Vec<usize>,
    /// Basis indices where some codeword is nonzero.
    support: Vec<usize>,
}

impl PartialEq for Code {
    fn eq(&self, other: &Self) -> bool {
        self.frame == other.frame && self.qudit_dims == other.qudit_dims
    }
}

impl Code {
    pub fn new(frame: Frame, qudit_dims: Vec<usize>) -> Result<Self> {
        let prod = qudit_dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::InvalidArgument("qudit dimensions overflow".into()))?;
        if prod != frame.n() {
            return Err(Error::DimensionMismatch {
                expected: frame.n(),
                got: prod,
            });
        }
        let support = frame.support();
        Ok(Self {
            frame,
            qudit_dims,
            support,
        })
    }

    /// A code on `n` qubits.
    pub fn qubits(frame: Frame) -> Result<Self> {
        let n = frame.n();
        if !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "dimension {n} is not a power of two"
            )));
        }
        Self::new(frame, vec![2; n.trailing_zeros() as usize])
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }
    pub fn qudit_dims(&self) -> &[usize] {
        &self.qudit_dims
    }
    pub fn n_sites(&self) -> usize {
        self.qudit_dims.len()
    }
    pub fn k(&self) -> usize {
        self.frame.k()
    }
    pub fn dim(&self) -> usize {
        self.frame.n()
    }
    pub fn support(&self) -> &[usize] {
        &self.support
    }
    pub fn is_qubit_code(&self) -> bool {
        self.qudit_dims.iter().all(|&d| d == 2)
    }

    /// Same code with a different encoding `F · U`.
    pub fn with_frame(&self, frame: Frame) -> Result<Self> {
        Self::new(frame, self.qudit_dims.clone())
    }

    /// `⟨ψ_i|P|ψ_j⟩` for a Pauli on a qubit code, summing only over the
    /// codewords' joint support.
    pub fn pauli_block(&self, p: &PauliString) -> Result<CMatrix> {
        if p.n() != self.n_sites() || !self.is_qubit_code() {
            return Err(Error::DimensionMismatch {
                expected: self.n_sites(),
                got: p.n(),
            });
        }
        let k = self.k();
        let n = self.dim();
        let data = self.frame.matrix().as_slice();
        let mut out = CMatrix::zeros(k, k);
        for &b in &self.support {
            let (coef, t) = p.action_on_basis(b);
            for i in 0..k {
                let left = data[i * n + t];
                if left == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let lc = left.conj() * coef;
                for j in 0..k {
                    out[(i, j)] += lc * data[j * n + b];
                }
            }
        }
        Ok(out)
    }
}

/// One operator of an error model.
#[derive(Clone, Debug, PartialEq)]
pub enum ErrorOp {
    Pauli(PauliString),
    Local(LocalOperator),
}

impl ErrorOp {
    pub fn is_identity(&self) -> bool {
        match self {
            ErrorOp::Pauli(p) => p.is_identity_up_to_phase(),
            ErrorOp::Local(l) => l.support().is_empty(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ErrorOp::Pauli(p) => p.to_string(),
            ErrorOp::Local(l) => format!("local{:?}", l.support()),
        }
    }

    pub fn apply_columns(&self, m: &CMatrix) -> Result<CMatrix> {
        match self {
            ErrorOp::Pauli(p) => p.apply_matrix(m),
            ErrorOp::Local(l) => l.apply_columns(m),
        }
    }
}

/// An error model. Always contains the identity, placed first.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorSet {
    errors: Vec<ErrorOp>,
}

impl ErrorSet {
    /// Wraps `errors`, prepending the identity when none is present.
    pub fn new(errors: Vec<ErrorOp>, identity: impl FnOnce() -> ErrorOp) -> Self {
        let mut errors = errors;
        if !errors.iter().any(ErrorOp::is_identity) {
            errors.insert(0, identity());
        }
        Self { errors }
    }

    pub fn from_paulis(n: usize, paulis: Vec<PauliString>) -> Self {
        Self::new(paulis.into_iter().map(ErrorOp::Pauli).collect(), || {
            ErrorOp::Pauli(PauliString::identity(n))
        })
    }

    pub fn errors(&self) -> &[ErrorOp] {
        &self.errors
    }

    pub fn len(&self) -> usize {
        self.errors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.errors.is_empty()
    }

    /// The Pauli members, if every member is a Pauli.
    pub fn as_paulis(&self) -> Option<Vec<PauliString>> {
        self.errors
            .iter()
            .map(|e| match e {
                ErrorOp::Pauli(p) => Some(*p),
                ErrorOp::Local(_) => None,
            })
            .collect()
    }

    /// Concatenation, keeping the first identity only.
    pub fn join(&self, other: &ErrorSet) -> ErrorSet {
        let mut errors = self.errors.clone();
        errors.extend(other.errors.iter().filter(|e| !e.is_identity()).cloned());
        ErrorSet { errors }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub a: usize,
    pub b: usize,
    pub error_a: String,
    pub error_b: String,
    /// `‖B^{ab} − f_ab·1‖_max`.
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectionReport {
    pub correctable: bool,
    /// `f_ab` for every pair, present when all pairs were evaluated and the
    /// set is small enough to report.
    pub f_matrix: Option<Vec<Vec<Complex64>>>,
    pub witness: Option<Witness>,
    pub max_deviation: f64,
    pub pairs_checked: usize,
}

/// Largest error set whose full `f` matrix is reported.
const F_MATRIX_REPORT_LIMIT: usize = 512;
/// Rows processed per parallel chunk before checking for a violation.
const ROW_CHUNK: usize = 32;

/// `(f, ‖B − f·1‖_max)` with `f = tr(B)/K`.
fn constant_block(b: &CMatrix) -> (Complex64, f64) {
    let k = b.nrows();
    let f = b.trace() / Complex64::new(k as f64, 0.0);
    let mut dev = 0.0f64;
    for j in 0..k {
        for i in 0..k {
            let target = if i == j { f } else { Complex64::new(0.0, 0.0) };
            dev = dev.max((b[(i, j)] - target).norm());
        }
    }
    (f, dev)
}

struct RowResult {
    fs: Vec<Complex64>,
    max_dev: f64,
    violation: Option<(usize, f64)>,
}

/// Evaluates `B^{ab} = ι† E_a† E_b ι` and tests it against `f_ab·1`.
///
/// Rows are scanned in order with parallel chunks; the witness is the first
/// violating pair in row-major order over `a ≤ b`.
pub fn correction_condition(code: &Code, es: &ErrorSet, tol: f64) -> Result<CorrectionReport> {
    let m = es.len();
    let paulis = es.as_paulis().filter(|_| code.is_qubit_code());
    let images: Option<Vec<CMatrix>> = match &paulis {
        Some(ps) => {
            for p in ps {
                if p.n() != code.n_sites() {
                    return Err(Error::DimensionMismatch {
                        expected: code.n_sites(),
                        got: p.n(),
                    });
                }
            }
            None
        }
        None => Some(
            es.errors()
                .par_iter()
                .map(|e| e.apply_columns(code.frame().matrix()))
                .collect::<Result<Vec<_>>>()?,
        ),
    };

    let row = |a: usize| -> Result<RowResult> {
        let mut fs = Vec::with_capacity(m - a);
        let mut max_dev = 0.0f64;
        let mut violation = None;
        for b in a..m {
            let block = match (&paulis, &images) {
                (Some(ps), _) => code.pauli_block(&ps[a].adjoint().mul(&ps[b])?)?,
                (None, Some(im)) => im[a].ad_mul(&im[b]),
                _ => unreachable!(),
            };
            let (f, dev) = constant_block(&block);
            fs.push(f);
            max_dev = max_dev.max(dev);
            if dev >= tol && violation.is_none() {
                violation = Some((b, dev));
            }
        }
        Ok(RowResult {
            fs,
            max_dev,
            violation,
        })
    };

    let mut rows: Vec<RowResult> = Vec::with_capacity(m);
    let mut witness = None;
    let mut start = 0;
    while start < m {
        let end = (start + ROW_CHUNK).min(m);
        let chunk: Vec<RowResult> = (start..end)
            .into_par_iter()
            .map(row)
            .collect::<Result<Vec<_>>>()?;
        for (offset, r) in chunk.iter().enumerate() {
            if let (None, Some((b, dev))) = (&witness, r.violation) {
                let a = start + offset;
                witness = Some(Witness {
                    a,
                    b,
                    error_a: es.errors()[a].label(),
                    error_b: es.errors()[b].label(),
                    deviation: dev,
                });
            }
        }
        rows.extend(chunk);
        if witness.is_some() {
            break;
        }
        start = end;
    }

    let max_deviation = rows.iter().map(|r| r.max_dev).fold(0.0, f64::max);
    let pairs_checked = rows.iter().map(|r| r.fs.len()).sum();
    let complete = rows.len() == m;
    let f_matrix = (complete && m <= F_MATRIX_REPORT_LIMIT).then(|| {
        let mut f = vec![vec![Complex64::new(0.0, 0.0); m]; m];
        for (a, r) in rows.iter().enumerate() {
            for (off, &v) in r.fs.iter().enumerate() {
                f[a][a + off] = v;
                f[a + off][a] = v.conj();
            }
        }
        f
    });
    Ok(CorrectionReport {
        correctable: witness.is_none(),
        f_matrix,
        witness,
        max_deviation,
        pairs_checked,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    /// Least weight of a violating Pauli, when one was found.
    pub distance: Option<usize>,
    /// `distance`, or `max_weight + 1` when no violator exists up to `max_weight`.
    pub lower_bound: usize,
    pub witness: Option<PauliString>,
    pub checked: usize,
}

/// Whether `⟨ψ_i|P|ψ_j⟩ = f(P) δ_ij` fails for `P`.
fn violates(code: &Code, p: &PauliString, tol: f64) -> Result<bool> {
    Ok(constant_block(&code.pauli_block(p)?).1 >= tol)
}

/// Brute-force distance: tests every Pauli of weight `1..=max_weight` in
/// weight order and stops at the first weight with a violator.
pub fn distance(code: &Code, max_weight: usize, tol: f64) -> Result<DistanceReport> {
    if !code.is_qubit_code() {
        return Err(Error::Unsupported(
            "distance enumeration needs qubit sites".into(),
        ));
    }
    let n = code.n_sites();
    if max_weight > n {
        return Err(Error::InvalidArgument(format!(
            "max weight {max_weight} exceeds {n} sites"
        )));
    }
    let mut checked = 0usize;
    for w in 1..=max_weight {
        let supports = supports_of_size(n, w);
        let hit = supports
            .par_iter()
            .map(|&s| -> Result<Option<PauliString>> {
                for p in paulis_on_support(n, s) {
                    if violates(code, &p, tol)? {
                        return Ok(Some(p));
                    }
                }
                Ok(None)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .next();
        checked += supports.len() * 3usize.pow(w as u32);
        if let Some(p) = hit {
            return Ok(DistanceReport {
                distance: Some(w),
                lower_bound: w,
                witness: Some(p),
                checked,
            });
        }
    }
    Ok(DistanceReport {
        distance: None,
        lower_bound: max_weight + 1,
        witness: None,
        checked,
    })
}

/// `M = ι† U ι`, provided `U` maps the codespace into itself.
pub fn logical_action(code: &Code, u: &dyn FrameOperator, tol: f64) -> Result<CMatrix> {
    if u.dim() != code.dim() {
        return Err(Error::DimensionMismatch {
            expected: code.dim(),
            got: u.dim(),
        });
    }
    let f = code.frame().matrix();
    let uf = u.apply_columns(f)?;
    let m = f.ad_mul(&uf);
    if identity_deviation(&(m.ad_mul(&m))) >= tol {
        let leakage = (uf - f * &m).norm();
        return Err(Error::NotLogical { leakage });
    }
    Ok(m)
}

/// Whether the code corrects every error of weight at most `s`.
pub fn corrects_s_errors(code: &Code, s: usize, tol: f64) -> Result<bool> {
    let n = code.n_sites();
    let es = ErrorSet::from_paulis(n, paulis_up_to_weight(n, s.min(n)));
    Ok(correction_condition(code, &es, tol)?.correctable)
}

/// Stabilizer generators `XZZXI` and its cyclic shifts (four of them).
pub fn five_qubit_stabilizers() -> Vec<PauliString> {
    ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
        .iter()
        .map(|s| s.parse().expect("valid label"))
        .collect()
}

/// Projects `v` onto the joint `+1` eigenspace of commuting Hermitian Paulis.
pub fn project_plus(stabilizers: &[PauliString], v: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut v = v.to_vec();
    for s in stabilizers {
        let sv = s.apply(&v)?;
        for (a, b) in v.iter_mut().zip(sv) {
            *a = (*a + b) * 0.5;
        }
    }
    Ok(v)
}

/// The `((5,2))` perfect code with `|0_L⟩ ∝ Π(1+S)/2 |00000⟩`, `|1_L⟩ = X^⊗5|0_L⟩`.
/// Logical `X`, `Y`, `Z` are then the transversal `X^⊗5`, `Y^⊗5`, `Z^⊗5`.
pub fn five_qubit_code() -> Code {
    let stabs = five_qubit_stabilizers();
    let mut e0 = vec![Complex64::new(0.0, 0.0); 32];
    e0[0] = Complex64::new(1.0, 0.0);
    let zero = project_plus(&stabs, &e0).expect("dimension 32");
    let xl: PauliString = "XXXXX".parse().expect("valid label");
    let one = xl.apply(&zero).expect("dimension 32");
    let frame = orthonormalize(&[zero, one], 1e-12).expect("two independent codewords");
    Code::qubits(frame).expect("power-of-two dimension")
}

/// The whole space `C^N` as a trivial `K = N` code on `n` qubits.
pub fn full_space_code(n: usize) -> Code {
    Code::qubits(Frame::standard(1 << n, 1 << n).expect("square identity"))
        .expect("power-of-two dimension")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeDocument {
    pub n: usize,
    pub qudit_dims: Vec<usize>,
    pub k: usize,
    /// Row-major `N × K` entries as `[re, im]`.
    pub frame: Vec<Vec<[f64; 2]>>,
}

impl CodeDocument {
    pub fn from_code(code: &Code) -> Self {
        let f = code.frame().matrix();
        Self {
            n: code.n_sites(),
            qudit_dims: code.qudit_dims().to_vec(),
            k: code.k(),
            frame: (0..f.nrows())
                .map(|r| (0..f.ncols()).map(|c| [f[(r, c)].re, f[(r, c)].im]).collect())
                .collect(),
        }
    }

    pub fn to_code(&self) -> Result<Code> {
        if self.qudit_dims.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: self.qudit_dims.len(),
            });
        }
        let rows = self.frame.len();
        let mut m = CMatrix::zeros(rows, self.k);
        for (r, row) in self.frame.iter().enumerate() {
            if row.len() != self.k {
                return Err(Error::DimensionMismatch {
                    expected: self.k,
                    got: row.len(),
                });
            }
            for (c, z) in row.iter().enumerate() {
                m[(r, c)] = Complex64::new(z[0], z[1]);
            }
        }
        Code::new(Frame::new(m)?, self.qudit_dims.clone())
    }
}

pub fn code_to_json(code: &Code) -> Result<String> {
    Ok(serde_json::to_string(&CodeDocument::from_code(code))?)
}

pub fn code_from_json(text: &str) -> Result<Code> {
    serde_json::from_str::<CodeDocument>(text)?.to_code()
}

/// Largest `|M_ij|` off the diagonal, a quick check for nontrivial logicals.
pub fn off_diagonal_max(m: &CMatrix) -> f64 {
    let mut d = m.clone();
    for i in 0..d.nrows().min(d.ncols()) {
        d[(i, i)] = Complex64::new(0.0, 0.0);
    }
    max_abs(&d)
}
