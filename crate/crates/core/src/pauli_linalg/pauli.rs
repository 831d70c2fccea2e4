//! Signed Pauli strings in symplectic form.
//!
//! Qubit `j` is bit `j` of a computational-basis index, so the dense matrix of
//! a string is `P_{n-1} ⊗ ... ⊗ P_0`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest qubit count a `PauliString` can address.
pub const MAX_QUBITS: usize = 64;

/// A power of `i`: one of `{1, i, -1, -i}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: i64) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    /// Exponent `k` with `phase = i^k`, in `0..4`.
    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    pub fn conj(self) -> Self {
        Phase((4 - self.0) % 4)
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

/// Single-qubit Pauli label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli1 {
    I,
    X,
    Y,
    Z,
}

impl Pauli1 {
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli1::I => (false, false),
            Pauli1::X => (true, false),
            Pauli1::Y => (true, true),
            Pauli1::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli1::I,
            (true, false) => Pauli1::X,
            (true, true) => Pauli1::Y,
            (false, true) => Pauli1::Z,
        }
    }

    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli1::I => [[l, o], [o, l]],
            Pauli1::X => [[o, l], [l, o]],
            Pauli1::Y => [[o, -i], [i, o]],
            Pauli1::Z => [[l, o], [o, -l]],
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli1::I => 'I',
            Pauli1::X => 'X',
            Pauli1::Y => 'Y',
            Pauli1::Z => 'Z',
        }
    }

    pub const NON_IDENTITY: [Pauli1; 3] = [Pauli1::X, Pauli1::Y, Pauli1::Z];
}

/// `phase · ⊗_j σ(x_j, z_j)` where `σ(1,0) = X`, `σ(0,1) = Z`, `σ(1,1) = Y = iXZ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: Phase,
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn popcount(v: u64) -> i64 {
    v.count_ones() as i64
}

impl PauliString {
    pub fn new(n: usize, x_bits: u64, z_bits: u64, phase: Phase) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::Unsupported(format!(
                "Pauli strings on {n} qubits (limit {MAX_QUBITS})"
            )));
        }
        if (x_bits | z_bits) & !mask(n) != 0 {
            return Err(Error::InvalidArgument(
                "Pauli bits set beyond qubit count".into(),
            ));
        }
        Ok(Self {
            n,
            x: x_bits,
            z: z_bits,
            phase,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, 0, 0, Phase::ONE).expect("identity within qubit limit")
    }

    /// `σ` acting on `site` and identity elsewhere.
    pub fn single(n: usize, site: usize, p: Pauli1) -> Result<Self> {
        if site >= n {
            return Err(Error::InvalidArgument(format!(
                "site {site} outside {n} qubits"
            )));
        }
        let (x, z) = p.bits();
        Self::new(n, (x as u64) << site, (z as u64) << site, Phase::ONE)
    }

    /// Builds a phase-1 string from one label per qubit.
    pub fn from_labels(labels: &[Pauli1]) -> Result<Self> {
        let mut x = 0u64;
        let mut z = 0u64;
        for (j, p) in labels.iter().enumerate() {
            let (xb, zb) = p.bits();
            x |= (xb as u64) << j;
            z |= (zb as u64) << j;
        }
        Self::new(labels.len(), x, z, Phase::ONE)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn x_bits(&self) -> u64 {
        self.x
    }
    pub fn z_bits(&self) -> u64 {
        self.z
    }
    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.support() == 0
    }

    pub fn label(&self, site: usize) -> Pauli1 {
        Pauli1::from_bits(self.x >> site & 1 == 1, self.z >> site & 1 == 1)
    }

    /// Product `self · rhs` with exact phase tracking.
    pub fn mul(&self, rhs: &PauliString) -> Result<PauliString> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: rhs.n,
            });
        }
        let x = self.x ^ rhs.x;
        let z = self.z ^ rhs.z;
        // σ(x,z) = i^{|x∧z|} X^x Z^z; commuting Z^{z1} past X^{x2} costs (-1)^{|z1∧x2|}.
        let k = self.phase.exponent() as i64
            + rhs.phase.exponent() as i64
            + popcount(self.x & self.z)
            + popcount(rhs.x & rhs.z)
            + 2 * popcount(self.z & rhs.x)
            - popcount(x & z);
        Ok(PauliString {
            n: self.n,
            x,
            z,
            phase: Phase::from_exponent(k),
        })
    }

    pub fn adjoint(&self) -> PauliString {
        PauliString {
            phase: self.phase.conj(),
            ..*self
        }
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        (popcount(self.x & other.z) + popcount(self.z & other.x)) % 2 == 0
    }

    /// Coefficient and target index: `P|b⟩ = coef · |b ⊕ x⟩`.
    #[inline]
    pub fn action_on_basis(&self, b: usize) -> (Complex64, usize) {
        let k = self.phase.exponent() as i64
            + popcount(self.x & self.z)
            + 2 * popcount(b as u64 & self.z);
        (Phase::from_exponent(k).to_complex(), b ^ self.x as usize)
    }

    /// Applies the string to a dense state vector.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }

    pub fn apply_into(&self, v: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        let dim = 1usize
            .checked_shl(self.n as u32)
            .ok_or_else(|| Error::Unsupported("state dimension overflow".into()))?;
        if v.len() != dim || out.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.len(),
            });
        }
        let base = self.phase.exponent() as i64 + popcount(self.x & self.z);
        let plus = Phase::from_exponent(base).to_complex();
        let x = self.x as usize;
        let z = self.z;
        for (b, amp) in v.iter().enumerate() {
            let c = if popcount(b as u64 & z) % 2 == 0 {
                plus
            } else {
                -plus
            };
            out[b ^ x] = c * amp;
        }
        Ok(())
    }

    /// Applies the string to every column of a column-major `dim × k` block.
    pub fn apply_matrix(&self, m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        let mut out = DMatrix::zeros(m.nrows(), m.ncols());
        for c in 0..m.ncols() {
            self.apply_into(m.column(c).as_slice(), out.column_mut(c).as_mut_slice())?;
        }
        Ok(out)
    }

    /// Dense `2^n × 2^n` matrix. Intended for oracles on a handful of qubits.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n;
        let mut m = DMatrix::zeros(dim, dim);
        for b in 0..dim {
            let (c, t) = self.action_on_basis(b);
            m[(t, b)] = c;
        }
        m
    }
}

impl fmt::Display for PauliString {
    /// `±[i]` followed by one letter per qubit, qubit 0 first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.phase.exponent() {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{sign}")?;
        for j in 0..self.n {
            write!(f, "{}", self.label(j).letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (phase, body) = if let Some(r) = s.strip_prefix("+i") {
            (Phase::I, r)
        } else if let Some(r) = s.strip_prefix("-i") {
            (Phase::MINUS_I, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (Phase::ONE, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (Phase::MINUS_ONE, r)
        } else {
            (Phase::ONE, s)
        };
        let labels = body
            .chars()
            .map(|c| match c {
                'I' => Ok(Pauli1::I),
                'X' => Ok(Pauli1::X),
                'Y' => Ok(Pauli1::Y),
                'Z' => Ok(Pauli1::Z),
                other => Err(Error::Serde(format!("bad Pauli letter {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliString::from_labels(&labels)?.with_phase(phase))
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All `k`-subsets of `0..n` as bitmasks, in lexicographic order of their
/// sorted element lists.
pub fn supports_of_size(n: usize, k: usize) -> Vec<u64> {
    fn rec(start: usize, n: usize, k: usize, acc: u64, out: &mut Vec<u64>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for j in start..=n - k {
            rec(j + 1, n, k - 1, acc | 1 << j, out);
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, 0, &mut out);
    }
    out
}

/// Every phase-1 Pauli supported exactly on `support`, in a fixed order.
pub fn paulis_on_support(n: usize, support: u64) -> Vec<PauliString> {
    let sites: Vec<usize> = (0..n).filter(|j| support >> j & 1 == 1).collect();
    let w = sites.len();
    let total = 3usize.pow(w as u32);
    let mut out = Vec::with_capacity(total);
    for mut code in 0..total {
        let mut x = 0u64;
        let mut z = 0u64;
        for &s in &sites {
            let (xb, zb) = Pauli1::NON_IDENTITY[code % 3].bits();
            code /= 3;
            x |= (xb as u64) << s;
            z |= (zb as u64) << s;
        }
        out.push(PauliString { n, x, z, phase: Phase::ONE });
    }
    out
}

/// Every phase-1 Pauli of exactly weight `w` on `n` qubits.
pub fn paulis_of_weight(n: usize, w: usize) -> Vec<PauliString> {
    supports_of_size(n, w)
        .into_iter()
        .flat_map(|s| paulis_on_support(n, s))
        .collect()
}

/// Every phase-1 Pauli of weight at most `s`, identity first.
pub fn paulis_up_to_weight(n: usize, s: usize) -> Vec<PauliString> {
    (0..=s.min(n)).flat_map(|w| paulis_of_weight(n, w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_times_z_is_minus_i_y() {
        let x = PauliString::single(1, 0, Pauli1::X).unwrap();
        let z = PauliString::single(1, 0, Pauli1::Z).unwrap();
        let p = x.mul(&z).unwrap();
        assert_eq!(p.label(0), Pauli1::Y);
        assert_eq!(p.phase(), Phase::MINUS_I);
    }

    #[test]
    fn identity_is_neutral() {
        let p: PauliString = "-iXYZ".parse().unwrap();
        let id = PauliString::identity(3);
        assert_eq!(p.mul(&id).unwrap(), p);
        assert_eq!(id.mul(&p).unwrap(), p);
    }

    #[test]
    fn mismatched_sizes_rejected() {
        let a = PauliString::identity(2);
        let b = PauliString::identity(3);
        assert!(matches!(a.mul(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn x_flips_and_z_signs() {
        let x = PauliString::single(1, 0, Pauli1::X).unwrap();
        let z = PauliString::single(1, 0, Pauli1::Z).unwrap();
        let zero = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let one = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        assert_eq!(x.apply(&zero).unwrap(), one.to_vec());
        assert_eq!(
            z.apply(&one).unwrap(),
            vec![Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)]
        );
    }

    #[test]
    fn text_round_trip() {
        for s in ["+XZZXI", "-IIY", "+iZ", "-iXX"] {
            let p: PauliString = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(paulis_up_to_weight(5, 0).len(), 1);
        assert_eq!(paulis_up_to_weight(5, 1).len(), 16);
        assert_eq!(paulis_up_to_weight(5, 2).len(), 106);
        assert_eq!(supports_of_size(18, 3).len(), 816);
    }

    #[test]
    fn bits_beyond_n_rejected() {
        assert!(PauliString::new(2, 0b100, 0, Phase::ONE).is_err());
        assert!(PauliString::new(65, 0, 0, Phase::ONE).is_err());
    }
}
