use num_complex::Complex64;
use proptest::prelude::*;
use qholo_core::error_models::{qubit_rotation, squdit_errors};
use qholo_core::holonomy::{classify, lift_frame, TransportSegment};
use qholo_core::pauli_linalg::frame::{max_abs, CMatrix};
use qholo_core::pauli_linalg::interp::InterpCoeffs;
use qholo_core::pauli_linalg::local::{FrameOperator, LocalOperator};
use qholo_core::pauli_linalg::{
    orthonormalize, orthonormalize_columns, subspace_equal, Frame, PauliString, Phase,
};
use qholo_core::qecc::{
    correction_condition, corrects_s_errors, distance, five_qubit_code, full_space_code,
    logical_action, Code, ErrorSet,
};
use qholo_core::toric::{build_code, edge_code, DefectConfig, Layer, TorusLattice};
use qholo_core::transversal::{r3_matrix, TransversalUnitary};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli(n: usize) -> impl Strategy<Value = PauliString> {
    let mask = (1u64 << n) - 1;
    (any::<u64>(), any::<u64>(), 0u8..4).prop_map(move |(x, z, ph)| {
        PauliString::new(n, x & mask, z & mask, Phase::from_exponent(ph as i64)).unwrap()
    })
}

fn hermitian_pauli(n: usize) -> impl Strategy<Value = PauliString> {
    (pauli(n), any::<bool>()).prop_map(|(p, neg)| p.with_phase(if neg { Phase::MINUS_ONE } else { Phase::ONE }))
}

/// A unitary from the QR factor of a random complex matrix.
fn unitary(k: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * k * k).prop_map(move |v| {
        let m = CMatrix::from_fn(k, k, |i, j| c(v[2 * (i * k + j)], v[2 * (i * k + j) + 1]))
            + CMatrix::identity(k, k) * c(0.1, 0.0);
        m.qr().q()
    })
}

fn rotation() -> impl Strategy<Value = CMatrix> {
    ((-1.0f64..1.0), (-1.0f64..1.0), (-1.0f64..1.0), (-3.2f64..3.2)).prop_map(|(a, b, z, th)| {
        qubit_rotation([a, b, z + 1e-3], th)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pauli_product_matches_dense(
        (p, q, r) in (1usize..=4).prop_flat_map(|n| (pauli(n), pauli(n), pauli(n)))
    ) {
        let pq = p.mul(&q).unwrap();
        // Entries are Gaussian integers, so the comparison is exact.
        prop_assert_eq!(pq.to_dense(), p.to_dense() * q.to_dense());
        prop_assert_eq!(pq.mul(&r).unwrap(), p.mul(&q.mul(&r).unwrap()).unwrap());
        prop_assert!(pq.weight() <= p.weight() + q.weight());
    }

    #[test]
    fn interpolation_is_unitary_and_reverses(sigma in hermitian_pauli(3), t in 0.0f64..=1.0) {
        let s = sigma.to_dense();
        let id = CMatrix::identity(8, 8);
        let u = |c: InterpCoeffs| &id * c.alpha + &s * c.beta;
        let ut = u(InterpCoeffs::at(t));
        prop_assert!(max_abs(&(ut.adjoint() * &ut - &id)) < 1e-12);
        let v = u(InterpCoeffs::reverse_at(t));
        prop_assert_eq!(v, u(InterpCoeffs::at(1.0 - t)) * &s);
    }

    #[test]
    fn orthonormalize_is_idempotent(
        raw in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 32), 1..6),
        dup in any::<bool>(),
    ) {
        let mut vs: Vec<Vec<Complex64>> = raw
            .iter()
            .map(|v| v.chunks(2).map(|p| c(p[0], p[1])).collect())
            .collect();
        if dup {
            // A dependent vector is dropped.
            let sum: Vec<Complex64> = vs[0].iter().map(|x| x * c(2.0, -1.0)).collect();
            vs.push(sum);
        }
        let f = orthonormalize(&vs, 1e-10).unwrap();
        let g = orthonormalize_columns(f.matrix(), 1e-10).unwrap();
        prop_assert_eq!(f.k(), g.k());
        prop_assert!(subspace_equal(&f, &g, 1e-9).unwrap());
    }

    #[test]
    fn frame_change_conjugates_holonomy(v in unitary(2), which in 0usize..3) {
        let code = five_qubit_code();
        let f = code.frame();
        let op = ["XXXXX", "ZZZZZ", "XZZXI"][which].parse::<PauliString>().unwrap();
        let end = lift_frame(f, &[TransportSegment::ExactPauli(op)]).unwrap();
        let m = classify(f, &end, 1e-9).unwrap();
        let fv = f.rotate(&v).unwrap();
        let ev = end.rotate(&v).unwrap();
        let mv = classify(&fv, &ev, 1e-9).unwrap();
        prop_assert_eq!(m.classification, mv.classification);
        prop_assert!(max_abs(&(v.adjoint() * &m.logical * &v - &mv.logical)) < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn correction_is_basis_independent(v in unitary(2), pick in prop::collection::vec(0usize..46, 1..8)) {
        let code = five_qubit_code();
        let rotated = code.with_frame(code.frame().rotate(&v).unwrap()).unwrap();
        let pool = squdit_errors(5, 2).unwrap().as_paulis().unwrap();
        let es = ErrorSet::from_paulis(5, pick.iter().map(|&i| pool[i * 3 % pool.len()]).collect());
        let a = correction_condition(&code, &es, 1e-9).unwrap();
        let b = correction_condition(&rotated, &es, 1e-9).unwrap();
        prop_assert_eq!(a.correctable, b.correctable);
        for e in es.as_paulis().unwrap() {
            let ba = code.pauli_block(&e).unwrap();
            let bb = rotated.pauli_block(&e).unwrap();
            prop_assert!(max_abs(&(v.adjoint() * ba * &v - bb)) < 1e-10);
        }
    }

    #[test]
    fn logical_action_is_multiplicative(a in 0usize..6, b in 0usize..6) {
        let code = five_qubit_code();
        let gens = transversal_logicals();
        let (u, w) = (&gens[a], &gens[b]);
        let uw = u.compose(w).unwrap();
        let mu = logical_action(&code, u, 1e-9).unwrap();
        let mw = logical_action(&code, w, 1e-9).unwrap();
        let muw = logical_action(&code, &uw, 1e-9).unwrap();
        prop_assert!(max_abs(&(muw - mu * mw)) < 1e-10);
    }

    #[test]
    fn transversal_images_keep_distance(rots in prop::collection::vec(rotation(), 5)) {
        let code = five_qubit_code();
        let u = LocalOperator::new(vec![2; 5], rots).unwrap();
        let image = code.with_frame(Frame::new(u.apply_columns(code.frame().matrix()).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(distance(&image, 3, 1e-9).unwrap().distance, Some(3));
    }

    #[test]
    fn edge_codes_separate_distinct_times(t in 0.0f64..=1.0, dt in 0.05f64..1.0) {
        let u = (t + dt).min(1.0);
        prop_assume!(u - t >= 0.05);
        let lat = TorusLattice::new(2).unwrap();
        let cfg = DefectConfig::from_coords(&lat, &[(0, 0), (1, 1)], &[]).unwrap();
        let e = lat.edge(Layer::Primal, 0, 0, qholo_core::toric::Axis::X);
        let a = edge_code(&lat, &cfg, e, t, 0).unwrap();
        let b = edge_code(&lat, &cfg, e, u, 0).unwrap();
        let top = a.frame().matrix().ad_mul(b.frame().matrix()).singular_values().max();
        let bound = (qholo_core::pauli_linalg::alpha(t) * qholo_core::pauli_linalg::alpha(u).conj()
            + qholo_core::pauli_linalg::beta(t) * qholo_core::pauli_linalg::beta(u).conj())
        .norm();
        prop_assert!(top <= bound + 1e-10);
        prop_assert!(bound < 1.0);
    }

    #[test]
    fn random_l2_configurations_have_four_codewords(
        p in prop::sample::subsequence((0..4usize).collect::<Vec<_>>(), 0..=4),
        d in prop::sample::subsequence((0..4usize).collect::<Vec<_>>(), 0..=4),
    ) {
        prop_assume!(p.len() % 2 == 0 && d.len() % 2 == 0);
        let lat = TorusLattice::new(2).unwrap();
        let xy = |i: &usize| (i % 2, i / 2);
        let pc: Vec<_> = p.iter().map(xy).collect();
        let dc: Vec<_> = d.iter().map(xy).collect();
        let cfg = DefectConfig::from_coords(&lat, &pc, &dc).unwrap();
        // Adjacent same-type defects are excluded by the hard-core rule.
        match build_code(&lat, &cfg, 0) {
            Ok(tc) => prop_assert_eq!(tc.code.k(), 4),
            Err(e) => prop_assert!(matches!(e, qholo_core::Error::Config(_)), "{e}"),
        }
    }
}

fn transversal_logicals() -> Vec<TransversalUnitary> {
    let x = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
    let z = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
    let r = r3_matrix();
    let r2 = &r * &r;
    let id = CMatrix::identity(2, 2);
    [x, z, r, r2, id]
        .iter()
        .map(|m| TransversalUnitary::uniform(5, m).unwrap())
        .chain(std::iter::once(
            TransversalUnitary::new(LocalOperator::from_pauli(&"-XZZXI".parse().unwrap())).unwrap(),
        ))
        .collect()
}

#[test]
fn distance_and_correction_agree_on_fixtures() {
    let fixtures: Vec<(Code, usize)> = vec![(five_qubit_code(), 4), (full_space_code(3), 2)];
    for (code, max_weight) in fixtures {
        let d = distance(&code, max_weight, 1e-9).unwrap().distance;
        for s in 0..=max_weight / 2 {
            let corrects = corrects_s_errors(&code, s, 1e-9).unwrap();
            let far = d.is_none_or(|d| d > 2 * s);
            assert_eq!(corrects, far, "s={s} d={d:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn holonomy_of_a_product_loop_is_the_product(a in 0usize..4, b in 0usize..4) {
        use qholo_core::transversal::{five_qubit_base_loops, transversal_holonomy};
        let code = five_qubit_code();
        let loops = five_qubit_base_loops();
        let (p1, p2) = (loops[a].path(5), loops[b].path(5));
        let h1 = transversal_holonomy(&code, &p1, 1e-8).unwrap();
        let h2 = transversal_holonomy(&code, &p2, 1e-8).unwrap();
        let h12 = transversal_holonomy(&code, &p1.then(&p2).unwrap(), 1e-8).unwrap();
        prop_assert!(max_abs(&(h12.logical - h2.logical * h1.logical)) < 1e-10);
    }

    #[test]
    fn lifting_is_functorial(ops in prop::collection::vec(0usize..4, 1..6)) {
        let code = five_qubit_code();
        let labels = ["XXXXX", "ZZZZZ", "YYYYY", "IXZZX"];
        let segs: Vec<_> = ops
            .iter()
            .map(|&i| TransportSegment::ExactPauli(labels[i].parse().unwrap()))
            .collect();
        let whole = lift_frame(code.frame(), &segs).unwrap();
        // Each segment's own transport, read off in the base frame.
        let mut product = CMatrix::identity(2, 2);
        for s in &segs {
            let moved = lift_frame(code.frame(), std::slice::from_ref(s)).unwrap();
            product = classify(code.frame(), &moved, 1e-9).unwrap().logical * product;
        }
        let h = classify(code.frame(), &whole, 1e-9).unwrap();
        prop_assert!(max_abs(&(h.logical - product)) < 1e-10);
    }

    #[test]
    fn flatness_probe_depends_only_on_seed(seed in any::<u64>()) {
        use qholo_core::transversal::{five_qubit_base_loops, flatness_probe_transversal};
        let code = five_qubit_code();
        let bases = five_qubit_base_loops();
        let a = flatness_probe_transversal(&code, &bases, 3, 1e-7, seed).unwrap();
        let b = flatness_probe_transversal(&code, &bases, 3, 1e-7, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn stabilizer_loops_are_phase_only() {
    use qholo_core::holonomy::Classification;
    use qholo_core::qecc::five_qubit_stabilizers;
    use qholo_core::transversal::{pauli_generator_path, transversal_holonomy};
    let code = five_qubit_code();
    for s in five_qubit_stabilizers() {
        let h = transversal_holonomy(&code, &pauli_generator_path(&s), 1e-8).unwrap();
        assert_eq!(h.classification, Classification::PhaseOnly);
        assert!((h.phase - c(1.0, 0.0)).norm() < 1e-8);
    }
}

proptest! {
    #[test]
    fn torus_metric_is_symmetric_and_triangular(
        l in 2usize..=5,
        pts in prop::collection::vec((0usize..5, 0usize..5), 3),
    ) {
        use qholo_core::toric::Site;
        let lat = TorusLattice::new(l).unwrap();
        let [a, b, c] = [0, 1, 2].map(|i| Site::new(pts[i].0 % l, pts[i].1 % l));
        let d = |p: Site, q: Site| lat.site_distance(p, q);
        prop_assert_eq!(d(a, b), d(b, a));
        prop_assert!(d(a, c) <= d(a, b) + d(b, c));
        prop_assert!(d(a, b) <= l);
        prop_assert_eq!(d(a, a), 0);
    }
}
