use std::collections::HashSet;

use qholo_core::error_models::{
    conjugated_error_set, geolocal_errors, geolocal_supports, qubit_rotation, squdit_errors, GeoLattice,
};
use qholo_core::pauli_linalg::local::LocalOperator;
use qholo_core::pauli_linalg::PauliString;
use qholo_core::qecc::{correction_condition, five_qubit_code, ErrorSet};
use qholo_core::toric::{build_code, DefectConfig, TorusLattice};

const TOL: f64 = 1e-9;

/// Edge midpoints in half units, counted without the library's metric.
fn edge_sites(l: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for y in 0..l {
        for x in 0..l {
            out.push((2 * x + 1, 2 * y));
            out.push((2 * x, 2 * y + 1));
        }
    }
    out
}

#[test]
fn cluster_count_matches_a_direct_enumeration() {
    let l = 3i64;
    let (s, t) = (1, 2);
    let sites = edge_sites(l);
    let p = 2 * l;
    let near = |a: (i64, i64), b: (i64, i64)| {
        let dx = (a.0 - b.0).rem_euclid(p);
        let dy = (a.1 - b.1).rem_euclid(p);
        dx.min(p - dx) + dy.min(p - dy) <= t
    };
    // Every (centre, assignment of I/X/Y/Z on the disk) pair.
    let mut ops: HashSet<(u64, u64)> = HashSet::new();
    for &c in &sites {
        let disk: Vec<usize> = (0..sites.len()).filter(|&j| near(c, sites[j])).collect();
        for code in 0u64..1 << (2 * disk.len()) {
            let (mut x, mut z) = (0u64, 0u64);
            for (k, &j) in disk.iter().enumerate() {
                x |= (code >> (2 * k) & 1) << j;
                z |= (code >> (2 * k + 1) & 1) << j;
            }
            ops.insert((x, z));
        }
    }
    let lat = GeoLattice::toric_edges(l as usize).unwrap();
    let es = geolocal_errors(&lat, s, t as usize, 10_000_000).unwrap();
    assert_eq!(es.len(), ops.len());
}

fn defect_free(l: usize) -> qholo_core::qecc::Code {
    let lat = TorusLattice::new(l).unwrap();
    build_code(&lat, &DefectConfig::empty(), 3).unwrap().code
}

#[test]
fn l3_toric_code_corrects_small_clusters() {
    let code = defect_free(3);
    let lat = GeoLattice::toric_edges(3).unwrap();
    let es = geolocal_errors(&lat, 1, 1, 1_000_000).unwrap();
    assert_eq!(es.len(), 1 + 18 * 3);
    assert!(correction_condition(&code, &es, TOL).unwrap().correctable);
}

#[test]
fn a_spanning_cluster_defeats_the_l3_code() {
    let code = defect_free(3);
    let lat = GeoLattice::toric_edges(3).unwrap();
    // The horizontal edges of row 0 close a loop around the torus, and one
    // diameter-2 disk already holds all of them.
    let row: u64 = (0..3).map(|x| 1u64 << (2 * x)).sum();
    assert!(geolocal_supports(&lat, 1, 2).iter().any(|&m| m & row == row));
    let on_row = |c: char| -> PauliString {
        let label: String = (0..18).map(|q| if row >> q & 1 == 1 { c } else { 'I' }).collect();
        label.parse().unwrap()
    };
    let es = ErrorSet::from_paulis(18, vec![PauliString::identity(18), on_row('X'), on_row('Z')]);
    let r = correction_condition(&code, &es, TOL).unwrap();
    assert!(!r.correctable);
    assert!(r.witness.is_some());
}

#[test]
fn conjugated_errors_stay_correctable() {
    let code = five_qubit_code();
    let base = squdit_errors(5, 1).unwrap();
    let factors = (0..5)
        .map(|j| qubit_rotation([1.0, 0.3 * j as f64, -0.7], 0.4 + 0.5 * j as f64))
        .collect();
    let u = LocalOperator::new(vec![2; 5], factors).unwrap();
    let joined = base.join(&conjugated_error_set(&base, &u).unwrap());
    assert!(correction_condition(&code, &joined, TOL).unwrap().correctable);
}
