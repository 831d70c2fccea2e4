use num_complex::Complex64;
use qholo_core::error_models::squdit_errors;
use qholo_core::holonomy::Classification;
use qholo_core::pauli_linalg::frame::{identity_deviation, max_abs, CMatrix};
use qholo_core::pauli_linalg::PauliString;
use qholo_core::qecc::*;
use qholo_core::transversal::*;

fn p(s: &str) -> PauliString {
    s.parse().unwrap()
}

#[test]
fn distance_is_three() {
    let code = five_qubit_code();
    let d = distance(&code, 3, DEFAULT_TOL).unwrap();
    assert_eq!(d.distance, Some(3));
    assert_eq!(d.witness.unwrap().weight(), 3);
}

#[test]
fn weight_one_correctable_weight_two_not() {
    let code = five_qubit_code();
    let r1 = correction_condition(&code, &squdit_errors(5, 1).unwrap(), DEFAULT_TOL).unwrap();
    assert!(r1.correctable);
    assert_eq!(r1.f_matrix.as_ref().unwrap().len(), 16);
    let r2 = correction_condition(&code, &squdit_errors(5, 2).unwrap(), DEFAULT_TOL).unwrap();
    assert!(!r2.correctable);
    let w = r2.witness.unwrap();
    assert!(w.deviation > 0.5);
    assert!(corrects_s_errors(&code, 1, DEFAULT_TOL).unwrap());
    assert!(!corrects_s_errors(&code, 2, DEFAULT_TOL).unwrap());
}

#[test]
fn weight_three_logical_breaks_correction() {
    let code = five_qubit_code();
    let d = distance(&code, 3, DEFAULT_TOL).unwrap();
    let es = ErrorSet::from_paulis(5, vec![d.witness.unwrap()]);
    let r = correction_condition(&code, &es, DEFAULT_TOL).unwrap();
    assert!(!r.correctable);
    let w = r.witness.unwrap();
    assert_eq!((w.a, w.b), (0, 1));
}

#[test]
fn transversal_logicals() {
    let code = five_qubit_code();
    let xl = logical_action(&code, &p("XXXXX"), 1e-9).unwrap();
    assert!(max_abs(&(&xl * &xl - CMatrix::identity(2, 2))) < 1e-12);
    assert!(xl[(0, 0)].norm() < 1e-12 && (xl[(1, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-12);

    let hx = transversal_holonomy(&code, &pauli_generator_path(&p("XXXXX")), 1e-9).unwrap();
    assert_eq!(hx.classification, Classification::NontrivialLogical);
    assert!(max_abs(&(&hx.logical - &xl)) < 1e-8);

    let zl = logical_action(&code, &p("ZZZZZ"), 1e-9).unwrap();
    let yl = logical_action(&code, &p("YYYYY"), 1e-9).unwrap();
    let hr = transversal_holonomy(&code, &r3_path(5), 1e-9).unwrap();
    let m = &hr.logical;
    assert!(identity_deviation(&(m.adjoint() * m)) < 1e-10);
    assert!(max_abs(&(m * &xl * m.adjoint() - &yl)) < 1e-8);
    assert!(max_abs(&(m * &yl * m.adjoint() - &zl)) < 1e-8);
    assert!(max_abs(&(m * &zl * m.adjoint() - &xl)) < 1e-8);

    for s in five_qubit_stabilizers() {
        let h = transversal_holonomy(&code, &pauli_generator_path(&s), 1e-9).unwrap();
        assert_eq!(h.classification, Classification::PhaseOnly);
        assert!((h.phase - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    }
}

#[test]
fn lie_algebra_and_trivial_action() {
    let code = five_qubit_code();
    let basis = fl_lie_algebra(&code, NULLSPACE_CUTOFF).unwrap();
    assert_eq!(basis.dimension(), 5);
    let rep = check_projectively_trivial_action(&code, &basis, 100, 1e-8, 7).unwrap();
    assert!(rep.passed, "{rep:?}");
}

#[test]
fn flatness_probe() {
    let code = five_qubit_code();
    let rep = flatness_probe_transversal(&code, &five_qubit_base_loops(), 50, 1e-7, 11).unwrap();
    assert!(rep.passed, "max deviation {}", rep.max_deviation);
}
