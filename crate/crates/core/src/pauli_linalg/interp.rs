//! The interpolating unitaries `U(t) = α(t)·1 + β(t)·σ` between `1` and a
//! Hermitian Pauli `σ`, and their reverses `V(t) = U(1−t)·σ`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::frame::CMatrix;
use super::pauli::PauliString;
use crate::error::{Error, Result};

/// `e^{−iπt}`, exact at integer and half-integer `t`.
fn half_turn(t: f64) -> Complex64 {
    let twice = 2.0 * t;
    if twice.fract() == 0.0 && twice.abs() < 1e15 {
        match (twice as i64).rem_euclid(4) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, -1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        }
    } else {
        Complex64::from_polar(1.0, -std::f64::consts::PI * t)
    }
}

/// `α(t) = e^{−iπt/2} cos(πt/2)`. Defined for every real `t`.
pub fn alpha(t: f64) -> Complex64 {
    (Complex64::new(1.0, 0.0) + half_turn(t)) * 0.5
}

/// `β(t) = i e^{−iπt/2} sin(πt/2)`. Defined for every real `t`.
pub fn beta(t: f64) -> Complex64 {
    (Complex64::new(1.0, 0.0) - half_turn(t)) * 0.5
}

/// The pair `(α(t), β(t))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpCoeffs {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl InterpCoeffs {
    pub fn at(t: f64) -> Self {
        Self {
            alpha: alpha(t),
            beta: beta(t),
        }
    }

    /// Coefficients of `V(t) = U(1−t)·σ = β(1−t)·1 + α(1−t)·σ`.
    pub fn reverse_at(t: f64) -> Self {
        Self {
            alpha: beta(1.0 - t),
            beta: alpha(1.0 - t),
        }
    }

    /// Coefficients for `direction` at `t`.
    pub fn for_direction(t: f64, direction: Direction) -> Self {
        match direction {
            Direction::Forward => Self::at(t),
            Direction::Reverse => Self::reverse_at(t),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Reverse,
}

fn check_hermitian(p: &PauliString) -> Result<()> {
    // Every letter is Hermitian, so σ is iff its phase is real.
    if p.phase().exponent() % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "interpolation needs a Hermitian Pauli, got {p}"
        )));
    }
    Ok(())
}

fn check_t(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) || t.is_nan() {
        return Err(Error::ParameterOutOfRange(t));
    }
    Ok(())
}

/// `(a·1 + b·σ) v`.
pub fn apply_combination(
    p: &PauliString,
    c: InterpCoeffs,
    v: &[Complex64],
) -> Result<Vec<Complex64>> {
    let mut out = p.apply(v)?;
    for (o, x) in out.iter_mut().zip(v) {
        *o = c.alpha * x + c.beta * *o;
    }
    Ok(out)
}

/// `(a·1 + b·σ) M` column by column.
pub fn apply_combination_matrix(p: &PauliString, c: InterpCoeffs, m: &CMatrix) -> Result<CMatrix> {
    let pm = p.apply_matrix(m)?;
    Ok(m * c.alpha + pm * c.beta)
}

/// Applies `U(t)` (forward) or `V(t)` (reverse) for a Hermitian Pauli `σ`.
pub fn interp_unitary_apply(
    p: &PauliString,
    t: f64,
    direction: Direction,
    v: &[Complex64],
) -> Result<Vec<Complex64>> {
    check_t(t)?;
    check_hermitian(p)?;
    apply_combination(p, InterpCoeffs::for_direction(t, direction), v)
}

/// Matrix form of [`interp_unitary_apply`] over the columns of `m`.
pub fn interp_unitary_apply_matrix(
    p: &PauliString,
    t: f64,
    direction: Direction,
    m: &CMatrix,
) -> Result<CMatrix> {
    check_t(t)?;
    check_hermitian(p)?;
    apply_combination_matrix(p, InterpCoeffs::for_direction(t, direction), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli_linalg::pauli::Pauli1;

    #[test]
    fn endpoints_are_exact() {
        assert_eq!(alpha(0.0), Complex64::new(1.0, 0.0));
        assert_eq!(beta(0.0), Complex64::new(0.0, 0.0));
        assert_eq!(alpha(1.0), Complex64::new(0.0, 0.0));
        assert_eq!(beta(1.0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn half_point_values() {
        let h = std::f64::consts::FRAC_PI_4;
        let a = Complex64::from_polar(1.0, -h) * h.cos();
        let b = Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, -h) * h.sin();
        assert!((alpha(0.5) - a).norm() < 1e-15);
        assert!((beta(0.5) - b).norm() < 1e-15);
    }

    #[test]
    fn forward_at_one_is_the_pauli() {
        let x = PauliString::single(1, 0, Pauli1::X).unwrap();
        let v = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let w = interp_unitary_apply(&x, 1.0, Direction::Forward, &v).unwrap();
        assert_eq!(w, x.apply(&v).unwrap());
        let w0 = interp_unitary_apply(&x, 0.0, Direction::Forward, &v).unwrap();
        assert_eq!(w0, v);
    }

    #[test]
    fn out_of_range_rejected() {
        let x = PauliString::single(1, 0, Pauli1::X).unwrap();
        let v = vec![Complex64::new(1.0, 0.0); 2];
        assert_eq!(
            interp_unitary_apply(&x, 1.5, Direction::Forward, &v),
            Err(Error::ParameterOutOfRange(1.5))
        );
        assert!(interp_unitary_apply(&x, -0.1, Direction::Reverse, &v).is_err());
    }

    #[test]
    fn non_hermitian_rejected() {
        let x = PauliString::single(1, 0, Pauli1::X)
            .unwrap()
            .with_phase(crate::pauli_linalg::pauli::Phase::I);
        let v = vec![Complex64::new(1.0, 0.0); 2];
        assert!(interp_unitary_apply(&x, 0.3, Direction::Forward, &v).is_err());
    }

    #[test]
    fn reverse_is_negative_time() {
        for &t in &[0.0, 0.1, 0.37, 0.5, 0.9, 1.0] {
            let r = InterpCoeffs::reverse_at(t);
            assert!((r.alpha - alpha(-t)).norm() < 1e-15);
            assert!((r.beta - beta(-t)).norm() < 1e-15);
        }
    }
}
