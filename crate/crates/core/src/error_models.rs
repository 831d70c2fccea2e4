//! The s-qudit and geometrically local error families.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli_linalg::frame::{max_abs, CMatrix};
use crate::pauli_linalg::local::LocalOperator;
use crate::pauli_linalg::pauli::{paulis_up_to_weight, Phase};
use crate::pauli_linalg::PauliString;
use crate::qecc::{ErrorOp, ErrorSet};

/// Default ceiling on the size of an enumerated error set.
pub const DEFAULT_ERROR_CAP: usize = 1_000_000;

/// All Paulis of weight at most `s` on `n` qubits, identity first.
pub fn squdit_errors(n: usize, s: usize) -> Result<ErrorSet> {
    if s > n {
        return Err(Error::InvalidArgument(format!(
            "weight bound {s} exceeds {n} sites"
        )));
    }
    Ok(ErrorSet::from_paulis(n, paulis_up_to_weight(n, s)))
}

/// Qubit sites with positions on a periodic square of side `L`.
///
/// Coordinates are stored in half lattice units so that edge midpoints are
/// integral; the period is `2L` in those units.
#[derive(Clone, Debug, PartialEq)]
pub struct GeoLattice {
    l: usize,
    positions: Vec<(i64, i64)>,
}

impl GeoLattice {
    /// Sites at the midpoints of the `2L²` edges of the `L × L` torus, in the
    /// toric qubit order: `H(x,y) = 2(yL+x)`, `V(x,y) = 2(yL+x)+1`.
    pub fn toric_edges(l: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidArgument(format!("lattice period {l} < 2")));
        }
        let mut positions = Vec::with_capacity(2 * l * l);
        for y in 0..l as i64 {
            for x in 0..l as i64 {
                positions.push((2 * x + 1, 2 * y));
                positions.push((2 * x, 2 * y + 1));
            }
        }
        Ok(Self { l, positions })
    }

    /// Arbitrary sites given in half lattice units on a torus of period `L`.
    pub fn from_half_units(l: usize, positions: Vec<(i64, i64)>) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidArgument(format!("lattice period {l} < 2")));
        }
        Ok(Self { l, positions })
    }

    pub fn period(&self) -> usize {
        self.l
    }

    pub fn n_sites(&self) -> usize {
        self.positions.len()
    }

    /// Torus L1 distance in half lattice units.
    pub fn half_distance(&self, a: usize, b: usize) -> i64 {
        let p = 2 * self.l as i64;
        let wrap = |d: i64| {
            let d = d.rem_euclid(p);
            d.min(p - d)
        };
        let (ax, ay) = self.positions[a];
        let (bx, by) = self.positions[b];
        wrap(ax - bx) + wrap(ay - by)
    }

    /// Torus L1 distance in lattice units.
    pub fn distance(&self, a: usize, b: usize) -> f64 {
        self.half_distance(a, b) as f64 / 2.0
    }

    /// Sites inside the disk of diameter `t` centred on site `c`, as a mask.
    pub fn disk(&self, c: usize, t: usize) -> u64 {
        (0..self.n_sites())
            .filter(|&j| self.half_distance(c, j) <= t as i64)
            .fold(0u64, |m, j| m | 1 << j)
    }
}

fn center_combinations(n: usize, s: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for j in start..n {
            cur.push(j);
            rec(j + 1, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, s.min(n), &mut Vec::new(), &mut out);
    out
}

/// Maximal supports: unions of `s` disks, with masks contained in another dropped.
pub fn geolocal_supports(lat: &GeoLattice, s: usize, t: usize) -> Vec<u64> {
    if s == 0 {
        return vec![];
    }
    let disks: Vec<u64> = (0..lat.n_sites()).map(|c| lat.disk(c, t)).collect();
    let unions: BTreeSet<u64> = center_combinations(lat.n_sites(), s)
        .into_iter()
        .map(|cs| cs.iter().fold(0u64, |m, &c| m | disks[c]))
        .collect();
    let all: Vec<u64> = unions.into_iter().collect();
    all.iter()
        .copied()
        .filter(|&m| !all.iter().any(|&o| o != m && o & m == m))
        .collect()
}

/// Every Pauli whose support lies in a union of at most `s` disks of diameter
/// `t`, identity first, ordered by weight then bits.
///
/// The projected size is the sum of `4^|support|` over maximal supports, an
/// upper bound on the deduplicated count; generation is refused above `cap`.
pub fn geolocal_errors(lat: &GeoLattice, s: usize, t: usize, cap: usize) -> Result<ErrorSet> {
    if t < 1 {
        return Err(Error::InvalidArgument("cluster diameter must be >= 1".into()));
    }
    let n = lat.n_sites();
    if n > crate::pauli_linalg::pauli::MAX_QUBITS {
        return Err(Error::Unsupported(format!("{n} sites")));
    }
    let supports = geolocal_supports(lat, s, t);
    let projected: u128 = supports
        .iter()
        .map(|m| 4u128.saturating_pow(m.count_ones()))
        .fold(0u128, |a, b| a.saturating_add(b));
    if projected > cap as u128 {
        return Err(Error::TooManyErrors { projected, cap });
    }
    let mut seen: BTreeSet<(u32, u64, u64, u64)> = BTreeSet::new();
    seen.insert((0, 0, 0, 0));
    for &mask in &supports {
        let sites: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        let total = 1u64 << (2 * sites.len());
        for code in 0..total {
            let (mut x, mut z) = (0u64, 0u64);
            for (k, &j) in sites.iter().enumerate() {
                let two = code >> (2 * k) & 3;
                x |= (two & 1) << j;
                z |= (two >> 1) << j;
            }
            let supp = x | z;
            seen.insert((supp.count_ones(), supp.reverse_bits(), x, z));
        }
    }
    let paulis = seen
        .into_iter()
        .map(|(_, _, x, z)| PauliString::new(n, x, z, Phase::ONE))
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorSet::from_paulis(n, paulis))
}

/// `{U E U†}` for a site-local `U`, as dense site-local operators.
pub fn conjugated_error_set(es: &ErrorSet, u: &LocalOperator) -> Result<ErrorSet> {
    let ud = u.adjoint();
    let mut out = Vec::with_capacity(es.len());
    for e in es.errors() {
        let local = match e {
            ErrorOp::Pauli(p) => {
                if p.n() != u.dims().len() || u.dims().iter().any(|&d| d != 2) {
                    return Err(Error::DimensionMismatch {
                        expected: u.dims().len(),
                        got: p.n(),
                    });
                }
                LocalOperator::from_pauli(p)
            }
            ErrorOp::Local(l) => l.clone(),
        };
        out.push(ErrorOp::Local(u.compose(&local)?.compose(&ud)?));
    }
    let dims = u.dims().to_vec();
    Ok(ErrorSet::new(out, || {
        ErrorOp::Local(LocalOperator::identity(&dims))
    }))
}

/// Splits a dense operator into tensor factors over `dims`, or reports that it
/// is not site-local.
pub fn factor_site_local(m: &CMatrix, dims: &[usize], tol: f64) -> Result<LocalOperator> {
    let total: usize = dims.iter().product();
    if m.nrows() != total || m.ncols() != total {
        return Err(Error::DimensionMismatch {
            expected: total,
            got: m.nrows(),
        });
    }
    // Anchor on the largest entry; slices through it give the factors up to scale.
    let (mut r0, mut c0, mut best) = (0, 0, 0.0);
    for c in 0..total {
        for r in 0..total {
            if m[(r, c)].norm() > best {
                best = m[(r, c)].norm();
                r0 = r;
                c0 = c;
            }
        }
    }
    if best == 0.0 {
        return Err(Error::Unsupported("zero operator".into()));
    }
    let anchor = m[(r0, c0)];
    let mut factors = Vec::with_capacity(dims.len());
    let mut stride = 1;
    for &d in dims {
        let dr = r0 / stride % d;
        let dc = c0 / stride % d;
        let f = CMatrix::from_fn(d, d, |a, b| {
            let r = r0 + a * stride - dr * stride;
            let c = c0 + b * stride - dc * stride;
            m[(r, c)] / anchor
        });
        factors.push(f);
        stride *= d;
    }
    if let Some(f) = factors.first_mut() {
        *f *= anchor;
    }
    let op = LocalOperator::new(dims.to_vec(), factors)?;
    if max_abs(&(op.to_dense() - m)) >= tol {
        return Err(Error::Unsupported(
            "operator is not a tensor product over sites".into(),
        ));
    }
    Ok(op)
}

/// [`conjugated_error_set`] for a dense `U`, which must factor over sites.
pub fn conjugated_error_set_dense(
    es: &ErrorSet,
    u: &CMatrix,
    dims: &[usize],
    tol: f64,
) -> Result<ErrorSet> {
    conjugated_error_set(es, &factor_site_local(u, dims, tol)?)
}

/// JSON list of `±{I,X,Y,Z}^n` strings.
pub fn error_set_to_json(es: &ErrorSet) -> Result<String> {
    let ps = es
        .as_paulis()
        .ok_or_else(|| Error::Unsupported("error set has non-Pauli members".into()))?;
    Ok(serde_json::to_string(&ps)?)
}

pub fn error_set_from_json(text: &str) -> Result<ErrorSet> {
    let ps: Vec<PauliString> = serde_json::from_str(text)?;
    let n = ps
        .first()
        .map(|p| p.n())
        .ok_or_else(|| Error::InvalidArgument("empty error list".into()))?;
    if ps.iter().any(|p| p.n() != n) {
        return Err(Error::InvalidArgument("mixed qubit counts".into()));
    }
    Ok(ErrorSet::from_paulis(n, ps))
}

/// Dense `U E U†` for checks against [`conjugated_error_set`].
pub fn dense_conjugate(u: &CMatrix, e: &CMatrix) -> CMatrix {
    u * e * u.adjoint()
}

/// `exp(-iθ/2 · n̂·σ)` as a 2×2 matrix.
pub fn qubit_rotation(axis: [f64; 3], theta: f64) -> CMatrix {
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let (nx, ny, nz) = (axis[0] / norm, axis[1] / norm, axis[2] / norm);
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    let i = Complex64::new(0.0, 1.0);
    CMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(c, 0.0) - i * s * nz,
            -i * s * nx - s * ny,
            -i * s * nx + s * ny,
            Complex64::new(c, 0.0) + i * s * nz,
        ],
    )
}
