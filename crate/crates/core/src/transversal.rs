//! Transversal unitaries, their paths, the logical Lie algebra and holonomies
//! of transversal loops.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::holonomy::{classify, phase_adjusted_distance, HolonomyResult};
use crate::pauli_linalg::frame::{identity_deviation, max_abs, CMatrix, Frame};
use crate::pauli_linalg::local::{expm, FrameOperator, LocalOperator};
use crate::pauli_linalg::{Pauli1, PauliString};
use crate::qecc::Code;

const UNITARY_TOL: f64 = 1e-12;

/// SVD cutoff separating numerical zeros in the Lie-algebra nullspace.
pub const NULLSPACE_CUTOFF: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli_matrix(p: Pauli1) -> CMatrix {
    let m = p.matrix();
    CMatrix::from_fn(2, 2, |r, col| m[r][col])
}

/// `⊗_j U_j` with every factor unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct TransversalUnitary {
    op: LocalOperator,
}

impl TransversalUnitary {
    pub fn new(op: LocalOperator) -> Result<Self> {
        let defect = op.unitarity_defect();
        if defect >= UNITARY_TOL {
            return Err(Error::InvalidArgument(format!(
                "site factor not unitary (defect {defect:.3e})"
            )));
        }
        Ok(Self { op })
    }

    pub fn identity(dims: &[usize]) -> Self {
        Self {
            op: LocalOperator::identity(dims),
        }
    }

    /// `R^⊗n` for a single-qubit unitary `R`.
    pub fn uniform(n: usize, r: &CMatrix) -> Result<Self> {
        Self::new(LocalOperator::new(vec![2; n], vec![r.clone(); n])?)
    }

    pub fn op(&self) -> &LocalOperator {
        &self.op
    }

    pub fn dims(&self) -> &[usize] {
        self.op.dims()
    }

    /// `self · rhs`.
    pub fn compose(&self, rhs: &TransversalUnitary) -> Result<Self> {
        Ok(Self {
            op: self.op.compose(&rhs.op)?,
        })
    }
}

impl FrameOperator for TransversalUnitary {
    fn dim(&self) -> usize {
        self.op.total_dim()
    }
    fn apply_columns(&self, m: &CMatrix) -> Result<CMatrix> {
        self.op.apply_columns(m)
    }
}

/// `R3 = ½(1 − i(X+Y+Z))`, the order-3 rotation `X ↦ Y ↦ Z ↦ X`.
pub fn r3_matrix() -> CMatrix {
    let s = pauli_matrix(Pauli1::X) + pauli_matrix(Pauli1::Y) + pauli_matrix(Pauli1::Z);
    (CMatrix::identity(2, 2) - s * c(0.0, 1.0)) * c(0.5, 0.0)
}

/// `Σ_j h_j` with `h_j` anti-Hermitian on site `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalGenerator {
    dims: Vec<usize>,
    terms: Vec<CMatrix>,
}

impl LocalGenerator {
    pub fn new(dims: Vec<usize>, terms: Vec<CMatrix>) -> Result<Self> {
        if dims.len() != terms.len() {
            return Err(Error::DimensionMismatch {
                expected: dims.len(),
                got: terms.len(),
            });
        }
        for (d, h) in dims.iter().zip(&terms) {
            if h.nrows() != *d || h.ncols() != *d {
                return Err(Error::DimensionMismatch {
                    expected: *d,
                    got: h.nrows(),
                });
            }
            let skew = max_abs(&(h + h.adjoint()));
            if skew >= UNITARY_TOL * (1.0 + max_abs(h)) {
                return Err(Error::InvalidArgument(format!(
                    "site generator not anti-Hermitian (defect {skew:.3e})"
                )));
            }
        }
        Ok(Self { dims, terms })
    }

    pub fn zero(dims: &[usize]) -> Self {
        Self {
            dims: dims.to_vec(),
            terms: dims.iter().map(|&d| CMatrix::zeros(d, d)).collect(),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn terms(&self) -> &[CMatrix] {
        &self.terms
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dims: self.dims.clone(),
            terms: self.terms.iter().map(|h| h * c(s, 0.0)).collect(),
        }
    }

    pub fn plus(&self, other: &LocalGenerator) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims.len(),
                got: other.dims.len(),
            });
        }
        Ok(Self {
            dims: self.dims.clone(),
            terms: self.terms.iter().zip(&other.terms).map(|(a, b)| a + b).collect(),
        })
    }

    /// `exp(t·H) = ⊗_j exp(t·h_j)`.
    pub fn exp(&self, t: f64) -> TransversalUnitary {
        TransversalUnitary {
            op: LocalOperator::new(
                self.dims.clone(),
                self.terms.iter().map(|h| expm(&(h * c(t, 0.0)))).collect(),
            )
            .expect("shapes validated at construction"),
        }
    }

    /// Dense `Σ_j h_j` on the full register, for oracles.
    pub fn to_dense(&self) -> CMatrix {
        let n: usize = self.dims.iter().product();
        let mut out = CMatrix::zeros(n, n);
        for (j, h) in self.terms.iter().enumerate() {
            out += LocalOperator::single(&self.dims, j, h.clone())
                .expect("valid site")
                .to_dense();
        }
        out
    }
}

/// Time reparametrization `t ↦ φ(t)` with `φ(0) = 0`, `φ(1) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Reparam {
    Identity,
    /// `t ↦ t^p`, `p > 0`.
    Power(f64),
}

impl Reparam {
    pub fn apply(self, t: f64) -> f64 {
        match self {
            Reparam::Identity => t,
            Reparam::Power(p) => t.powf(p),
        }
    }
}

/// Piecewise path `F(t)` of site-local exponentials, with `F(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransversalPath {
    dims: Vec<usize>,
    segments: Vec<(LocalGenerator, f64)>,
    reparam: Reparam,
}

impl TransversalPath {
    pub fn constant(dims: &[usize]) -> Self {
        Self {
            dims: dims.to_vec(),
            segments: Vec::new(),
            reparam: Reparam::Identity,
        }
    }

    pub fn new(dims: &[usize], segments: Vec<(LocalGenerator, f64)>) -> Result<Self> {
        for (g, dur) in &segments {
            if g.dims() != dims {
                return Err(Error::DimensionMismatch {
                    expected: dims.len(),
                    got: g.dims().len(),
                });
            }
            if dur.is_nan() || *dur < 0.0 {
                return Err(Error::InvalidArgument(format!("segment duration {dur}")));
            }
        }
        Ok(Self {
            dims: dims.to_vec(),
            segments,
            reparam: Reparam::Identity,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn segments(&self) -> &[(LocalGenerator, f64)] {
        &self.segments
    }

    pub fn reparametrized(&self, r: Reparam) -> Self {
        Self {
            reparam: r,
            ..self.clone()
        }
    }

    /// Runs `self` first, then `next`.
    pub fn then(&self, next: &TransversalPath) -> Result<Self> {
        if self.dims != next.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims.len(),
                got: next.dims.len(),
            });
        }
        let mut segments = self.segments.clone();
        segments.extend(next.segments.iter().cloned());
        Ok(Self {
            dims: self.dims.clone(),
            segments,
            reparam: Reparam::Identity,
        })
    }

    fn total_duration(&self) -> f64 {
        self.segments.iter().map(|(_, d)| d).sum()
    }

    /// `F(t)` for `t ∈ [0, 1]`.
    pub fn eval(&self, t: f64) -> Result<TransversalUnitary> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::ParameterOutOfRange(t));
        }
        let total = self.total_duration();
        let mut remaining = if t == 1.0 {
            total
        } else {
            self.reparam.apply(t) * total
        };
        let mut u = TransversalUnitary::identity(&self.dims);
        for (g, dur) in &self.segments {
            if remaining <= 0.0 {
                break;
            }
            let step = remaining.min(*dur);
            u = g.exp(step).compose(&u)?;
            remaining -= step;
        }
        Ok(u)
    }

    pub fn endpoint(&self) -> Result<TransversalUnitary> {
        self.eval(1.0)
    }
}

/// The generator `iπ/2 (σ − 1)`, whose exponential at time `t` is
/// `α(t)·1 + β(t)·σ`.
fn pauli_site_generator(p: Pauli1) -> CMatrix {
    (pauli_matrix(p) - CMatrix::identity(2, 2)) * c(0.0, PI / 2.0)
}

/// Simultaneous single-site rotations ending at `P`. A non-unit phase of `P`
/// is carried by a global-phase term on site 0.
pub fn pauli_generator_path(p: &PauliString) -> TransversalPath {
    let n = p.n();
    let mut terms: Vec<CMatrix> = (0..n)
        .map(|j| match p.label(j) {
            Pauli1::I => CMatrix::zeros(2, 2),
            l => pauli_site_generator(l),
        })
        .collect();
    let k = p.phase().exponent();
    if k != 0 && n > 0 {
        terms[0] += CMatrix::identity(2, 2) * c(0.0, PI / 2.0 * k as f64);
    }
    if p.is_identity_up_to_phase() && k == 0 {
        return TransversalPath::constant(&vec![2; n]);
    }
    let g = LocalGenerator::new(vec![2; n], terms).expect("anti-Hermitian by construction");
    TransversalPath::new(&vec![2; n], vec![(g, 1.0)]).expect("matching dims")
}

/// `exp(t · (−iπ/3)(X+Y+Z)/√3)` on every site; reaches `R3^⊗n` at `t = 1`.
pub fn r3_path(n: usize) -> TransversalPath {
    let s = pauli_matrix(Pauli1::X) + pauli_matrix(Pauli1::Y) + pauli_matrix(Pauli1::Z);
    let h = s * c(0.0, -PI / 3.0 / 3f64.sqrt());
    let g = LocalGenerator::new(vec![2; n], vec![h; n]).expect("anti-Hermitian");
    TransversalPath::new(&vec![2; n], vec![(g, 1.0)]).expect("matching dims")
}

/// Real basis of `u(d)`: `i` times an orthonormal Hermitian basis.
/// For `d = 2` this is `i·{1, X, Y, Z}/√2`.
pub fn site_algebra_basis(d: usize) -> Vec<CMatrix> {
    if d == 2 {
        let s = 1.0 / 2f64.sqrt();
        return [Pauli1::I, Pauli1::X, Pauli1::Y, Pauli1::Z]
            .iter()
            .map(|&p| pauli_matrix(p) * c(0.0, s))
            .collect();
    }
    let s = 1.0 / 2f64.sqrt();
    let mut out = Vec::with_capacity(d * d);
    for k in 0..d {
        let mut m = CMatrix::zeros(d, d);
        m[(k, k)] = c(0.0, 1.0);
        out.push(m);
    }
    for k in 0..d {
        for l in k + 1..d {
            let mut sym = CMatrix::zeros(d, d);
            sym[(k, l)] = c(0.0, s);
            sym[(l, k)] = c(0.0, s);
            out.push(sym);
            let mut asym = CMatrix::zeros(d, d);
            asym[(k, l)] = c(s, 0.0);
            asym[(l, k)] = c(-s, 0.0);
            out.push(asym);
        }
    }
    out
}

/// An orthonormal basis of the logical Lie algebra in parameter space.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraBasis {
    dims: Vec<usize>,
    /// Each vector has `Σ_j d_j²` real coefficients.
    pub vectors: Vec<Vec<f64>>,
    /// Singular values of the constraint map, ascending.
    pub singular_values: Vec<f64>,
}

impl LieAlgebraBasis {
    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// The generator with coefficients `coeffs` in the parameter basis.
    pub fn generator_from_params(dims: &[usize], coeffs: &[f64]) -> LocalGenerator {
        let mut terms: Vec<CMatrix> = dims.iter().map(|&d| CMatrix::zeros(d, d)).collect();
        let mut k = 0;
        for (j, &d) in dims.iter().enumerate() {
            for b in site_algebra_basis(d) {
                terms[j] += b * c(coeffs[k], 0.0);
                k += 1;
            }
        }
        LocalGenerator {
            dims: dims.to_vec(),
            terms,
        }
    }

    pub fn generator(&self, i: usize) -> LocalGenerator {
        Self::generator_from_params(&self.dims, &self.vectors[i])
    }

    /// `Σ_i w_i · basis_i`.
    pub fn combination(&self, weights: &[f64]) -> LocalGenerator {
        let len = self.vectors.first().map_or(0, |v| v.len());
        let mut coeffs = vec![0.0; len];
        for (w, v) in weights.iter().zip(&self.vectors) {
            for (a, b) in coeffs.iter_mut().zip(v) {
                *a += w * b;
            }
        }
        Self::generator_from_params(&self.dims, &coeffs)
    }
}

/// Real nullspace of `H ↦ (1 − P) H ι` over site-local anti-Hermitian `H`.
pub fn fl_lie_algebra(code: &Code, cutoff: f64) -> Result<LieAlgebraBasis> {
    let dims = code.qudit_dims().to_vec();
    let f = code.frame().matrix();
    let (nn, k) = f.shape();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for (j, &d) in dims.iter().enumerate() {
        for b in site_algebra_basis(d) {
            let hf = LocalOperator::single(&dims, j, b)?.apply_columns(f)?;
            let out = &hf - f * (f.ad_mul(&hf));
            let mut col = Vec::with_capacity(2 * nn * k);
            for z in out.iter() {
                col.push(z.re);
                col.push(z.im);
            }
            columns.push(col);
        }
    }
    let p = columns.len();
    let rows = (2 * nn * k).max(p);
    let a = DMatrix::<f64>::from_fn(rows, p, |r, col| columns[col].get(r).copied().unwrap_or(0.0));
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[x].total_cmp(&svd.singular_values[y]).then(x.cmp(&y)));
    let mut vectors = Vec::new();
    for &i in &order {
        if svd.singular_values[i] < cutoff {
            let mut v: Vec<f64> = vt.row(i).iter().copied().collect();
            // Fix the sign so the largest component is positive.
            let lead = v
                .iter()
                .copied()
                .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            if lead < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            vectors.push(v);
        }
    }
    let singular_values = order.iter().map(|&i| svd.singular_values[i]).collect();
    Ok(LieAlgebraBasis {
        dims,
        vectors,
        singular_values,
    })
}

/// `(ξ, ‖M − ξ·1‖_max, leakage)` for `M = ι† U ι`, `ξ = tr M / |tr M|`.
fn scalar_action(code: &Code, u: &TransversalUnitary) -> Result<(Complex64, f64, f64)> {
    let f = code.frame().matrix();
    let uf = u.apply_columns(f)?;
    let m = f.ad_mul(&uf);
    let leakage = max_abs(&(&uf - f * &m));
    let k = m.nrows();
    let tr = m.trace();
    let xi = if tr.norm() > 0.0 { tr / tr.norm() } else { c(1.0, 0.0) };
    let dev = max_abs(&(&m - CMatrix::identity(k, k) * xi));
    Ok((xi, dev, leakage))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrivialActionReport {
    pub samples: usize,
    pub max_residual: f64,
    pub max_leakage: f64,
    pub passed: bool,
    pub phases: Vec<Complex64>,
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Checks that random exponentials from the Lie algebra act on the code as
/// scalars. Coefficients are Gaussian with standard deviation `π`.
pub fn check_projectively_trivial_action(
    code: &Code,
    basis: &LieAlgebraBasis,
    samples: usize,
    tol: f64,
    seed: u64,
) -> Result<TrivialActionReport> {
    let results = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = trial_rng(seed, s as u64);
            let w: Vec<f64> = (0..basis.dimension())
                .map(|_| PI * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let u = basis.combination(&w).exp(1.0);
            scalar_action(code, &u)
        })
        .collect::<Result<Vec<_>>>()?;
    let max_residual = results.iter().map(|r| r.1).fold(0.0, f64::max);
    let max_leakage = results.iter().map(|r| r.2).fold(0.0, f64::max);
    Ok(TrivialActionReport {
        samples,
        max_residual,
        max_leakage,
        passed: max_residual < tol && max_leakage < tol,
        phases: results.iter().map(|r| r.0).collect(),
    })
}

/// Lifts the code's frame along `F(t)` and classifies the resulting loop.
pub fn transversal_holonomy(code: &Code, path: &TransversalPath, tol: f64) -> Result<HolonomyResult> {
    if path.dims() != code.qudit_dims() {
        return Err(Error::DimensionMismatch {
            expected: code.n_sites(),
            got: path.dims().len(),
        });
    }
    let u = path.endpoint()?;
    let end = u.apply_columns(code.frame().matrix())?;
    // Unitary images of orthonormal columns stay orthonormal up to rounding.
    let end = Frame::new(end)?;
    classify(code.frame(), &end, tol)
}

/// `ι† O ι` for an operator preserving the code.
pub fn logical_of(code: &Code, op: &dyn FrameOperator) -> Result<CMatrix> {
    crate::qecc::logical_action(code, op, 1e-9)
}

/// A base loop used by the flatness probe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum BaseLoop {
    Pauli(PauliString),
    R3,
}

impl BaseLoop {
    pub fn path(&self, n: usize) -> TransversalPath {
        match self {
            BaseLoop::Pauli(p) => pauli_generator_path(p),
            BaseLoop::R3 => r3_path(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatnessTrial {
    pub base: String,
    pub power: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatnessReport {
    pub trials: Vec<FlatnessTrial>,
    pub max_deviation: f64,
    pub passed: bool,
}

/// Compares holonomies of homotopic pairs: a base loop reparametrized by
/// `t ↦ t^p`, against the same loop pre- and post-composed with exponentials
/// of logical Lie-algebra elements. They must agree up to a phase.
pub fn flatness_probe_transversal(
    code: &Code,
    bases: &[BaseLoop],
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<FlatnessReport> {
    if bases.is_empty() {
        return Err(Error::InvalidArgument("no base loops".into()));
    }
    let basis = fl_lie_algebra(code, NULLSPACE_CUTOFF)?;
    let dims = code.qudit_dims().to_vec();
    let n = dims.len();
    let results = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<FlatnessTrial> {
            let mut rng = trial_rng(seed, trial as u64);
            let base = &bases[rng.random_range(0..bases.len())];
            let power = rng.random_range(0.5..3.0);
            let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
                (0..basis.dimension())
                    .map(|_| rng.sample::<f64, _>(StandardNormal))
                    .collect()
            };
            let pre = basis.combination(&draw(&mut rng));
            let post = basis.combination(&draw(&mut rng));
            let base_path = base.path(n);
            let a = base_path.reparametrized(Reparam::Power(power));
            let b = TransversalPath::new(&dims, vec![(pre, 1.0)])?
                .then(&base_path)?
                .then(&TransversalPath::new(&dims, vec![(post, 1.0)])?)?;
            let ha = transversal_holonomy(code, &a, 1e-8)?;
            let hb = transversal_holonomy(code, &b, 1e-8)?;
            Ok(FlatnessTrial {
                base: match base {
                    BaseLoop::Pauli(p) => p.to_string(),
                    BaseLoop::R3 => "R3".into(),
                },
                power,
                deviation: phase_adjusted_distance(&ha.logical, &hb.logical),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_deviation = results.iter().map(|t| t.deviation).fold(0.0, f64::max);
    Ok(FlatnessReport {
        passed: max_deviation < tol,
        trials: results,
        max_deviation,
    })
}

/// The default base loops on the 5-qubit code: logical Paulis, `R3^⊗5` and
/// the stabilizer generators.
pub fn five_qubit_base_loops() -> Vec<BaseLoop> {
    let mut out: Vec<BaseLoop> = ["XXXXX", "YYYYY", "ZZZZZ"]
        .iter()
        .map(|s| BaseLoop::Pauli(s.parse().expect("valid label")))
        .collect();
    out.push(BaseLoop::R3);
    out.extend(
        crate::qecc::five_qubit_stabilizers()
            .into_iter()
            .map(BaseLoop::Pauli),
    );
    out
}

/// `‖A A† − 1‖` helper exposed for reports.
pub fn unitarity_defect(m: &CMatrix) -> f64 {
    identity_deviation(&(m.ad_mul(m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qecc::{five_qubit_code, full_space_code};

    #[test]
    fn r3_cycles_paulis() {
        let r = r3_matrix();
        let x = pauli_matrix(Pauli1::X);
        let y = pauli_matrix(Pauli1::Y);
        let z = pauli_matrix(Pauli1::Z);
        assert!(max_abs(&(&r * &x * r.adjoint() - &y)) < 1e-15);
        assert!(max_abs(&(&r * &y * r.adjoint() - &z)) < 1e-15);
        assert!(max_abs(&(&r * &z * r.adjoint() - &x)) < 1e-15);
        let end = r3_path(1).endpoint().unwrap();
        assert!(max_abs(&(end.op().factors()[0].clone() - r)) < 1e-14);
    }

    #[test]
    fn single_x_path_endpoint() {
        let p: PauliString = "X".parse().unwrap();
        let u = pauli_generator_path(&p).endpoint().unwrap();
        assert!(max_abs(&(u.op().to_dense() - p.to_dense())) < 1e-14);
    }

    #[test]
    fn phased_pauli_path_endpoint() {
        let p: PauliString = "-iZY".parse().unwrap();
        let u = pauli_generator_path(&p).endpoint().unwrap();
        assert!(max_abs(&(u.op().to_dense() - p.to_dense())) < 1e-14);
    }

    #[test]
    fn identity_path_is_constant() {
        let path = pauli_generator_path(&PauliString::identity(3));
        assert!(path.segments().is_empty());
        assert_eq!(path.eval(0.7).unwrap(), TransversalUnitary::identity(&[2, 2, 2]));
    }

    #[test]
    fn lie_dims_of_small_cases() {
        assert_eq!(fl_lie_algebra(&full_space_code(2), NULLSPACE_CUTOFF).unwrap().dimension(), 8);
        let zero = Code::qubits(Frame::standard(2, 1).unwrap()).unwrap();
        assert_eq!(fl_lie_algebra(&zero, NULLSPACE_CUTOFF).unwrap().dimension(), 2);
    }

    #[test]
    fn zero_generator_acts_as_one() {
        let code = five_qubit_code();
        let (xi, dev, leak) = scalar_action(&code, &LocalGenerator::zero(&[2; 5]).exp(1.0)).unwrap();
        assert_eq!(xi, c(1.0, 0.0));
        assert_eq!(dev, 0.0);
        assert_eq!(leak, 0.0);
    }

    #[test]
    fn global_identity_generator_gives_its_phase() {
        let code = five_qubit_code();
        let theta = 0.83;
        let mut terms = vec![CMatrix::zeros(2, 2); 5];
        terms[2] = CMatrix::identity(2, 2) * c(0.0, theta);
        let g = LocalGenerator::new(vec![2; 5], terms).unwrap();
        let (xi, dev, _) = scalar_action(&code, &g.exp(1.0)).unwrap();
        assert!((xi - Complex64::from_polar(1.0, theta)).norm() < 1e-14);
        assert!(dev < 1e-14);
    }

    #[test]
    fn eval_rejects_outside_unit_interval() {
        let path = r3_path(2);
        assert!(path.eval(1.2).is_err());
    }
}
