//! End-to-end acceptance suite. Each criterion runs against its time budget
//! and prints one PASS/FAIL line; the process fails if any criterion does.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use anyhow::{ensure, Context, Result};
use num_complex::Complex64;
use qholo_core::holonomy::{phase_adjusted_distance, Classification};
use qholo_core::pauli_linalg::frame::max_abs;
use qholo_core::pauli_linalg::PauliString;
use qholo_core::qecc::{correction_condition, distance, five_qubit_code, five_qubit_stabilizers, logical_action};
use qholo_core::error_models::squdit_errors;
use qholo_core::toric::monodromy::{anticommutator, squares_to_identity};
use qholo_core::toric::{
    build_code, face_checks, flatness_probe_toric, monodromy, Axis, BraidGenerator, DefectConfig, DefectId, Routing,
    ToricCode, TorusLattice,
};
use qholo_core::transversal::{
    check_projectively_trivial_action, fl_lie_algebra, five_qubit_base_loops, flatness_probe_transversal,
    pauli_generator_path, r3_matrix, r3_path, transversal_holonomy, TransversalUnitary, NULLSPACE_CUTOFF,
};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn pauli(s: &str) -> PauliString {
    s.parse().expect("valid label")
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() < tol
}

fn c1_distance() -> Result<String> {
    let r = distance(&five_qubit_code(), 3, 1e-9)?;
    ensure!(r.distance == Some(3), "distance {:?}", r.distance);
    Ok(format!("distance 3, witness {}", r.witness.context("no witness")?))
}

fn c2_correction() -> Result<String> {
    let code = five_qubit_code();
    let w1 = correction_condition(&code, &squdit_errors(5, 1)?, 1e-9)?;
    ensure!(w1.correctable, "weight-1 set rejected");
    let w2 = correction_condition(&code, &squdit_errors(5, 2)?, 1e-9)?;
    ensure!(!w2.correctable, "weight-2 set accepted");
    let w = w2.witness.context("no witness for the weight-2 set")?;
    Ok(format!("weight 1 correctable; weight 2 fails on {} / {}", w.error_a, w.error_b))
}

fn c3_trivial_action() -> Result<String> {
    let code = five_qubit_code();
    let basis = fl_lie_algebra(&code, NULLSPACE_CUTOFF)?;
    let r = check_projectively_trivial_action(&code, &basis, 100, 1e-8, 11)?;
    ensure!(r.samples == 100 && r.passed, "residual {:.3e}, leakage {:.3e}", r.max_residual, r.max_leakage);
    ensure!(r.max_residual < 1e-8);
    Ok(format!("100 exponentials, max residual {:.2e}", r.max_residual))
}

fn c4_holonomies() -> Result<String> {
    let code = five_qubit_code();
    let tol = 1e-8;
    let mut worst = 0f64;
    for p in ["XXXXX", "ZZZZZ"] {
        let h = transversal_holonomy(&code, &pauli_generator_path(&pauli(p)), tol)?;
        let d = phase_adjusted_distance(&h.logical, &logical_action(&code, &pauli(p), tol)?);
        ensure!(d < tol, "{p}: residual {d:.3e}");
        worst = worst.max(d);
    }
    let h = transversal_holonomy(&code, &r3_path(5), tol)?;
    let want = logical_action(&code, &TransversalUnitary::uniform(5, &r3_matrix())?, tol)?;
    let d = phase_adjusted_distance(&h.logical, &want);
    ensure!(d < tol, "R3: residual {d:.3e}");
    worst = worst.max(d);
    let ls: Vec<_> = ["XXXXX", "YYYYY", "ZZZZZ"]
        .iter()
        .map(|p| logical_action(&code, &pauli(p), tol))
        .collect::<std::result::Result<_, _>>()?;
    for i in 0..3 {
        let dev = max_abs(&(&h.logical * &ls[i] * h.logical.adjoint() - &ls[(i + 1) % 3]));
        ensure!(dev < tol, "R3 conjugation {i}: {dev:.3e}");
        worst = worst.max(dev);
    }
    for g in five_qubit_stabilizers() {
        let h = transversal_holonomy(&code, &pauli_generator_path(&g), tol)?;
        ensure!(
            h.classification == Classification::PhaseOnly && close(h.phase, ONE, tol),
            "{g}: {:?} {}",
            h.classification,
            h.phase
        );
    }
    Ok(format!("X, Z, R3 and 4 stabilizer loops, worst residual {worst:.2e}"))
}

fn c5_transversal_flatness() -> Result<String> {
    let r = flatness_probe_transversal(&five_qubit_code(), &five_qubit_base_loops(), 50, 1e-7, 5)?;
    ensure!(r.trials.len() == 50 && r.passed, "max deviation {:.3e}", r.max_deviation);
    Ok(format!("50 pairs, max deviation {:.2e}", r.max_deviation))
}

fn c6_toric_build() -> Result<String> {
    let mut built = 0;
    for l in [2, 3] {
        let lat = TorusLattice::new(l)?;
        let cfgs = [
            DefectConfig::empty(),
            DefectConfig::from_coords(&lat, &[(0, 0), (1, 1)], &[])?,
            DefectConfig::from_coords(&lat, &[(0, 0), (1, 1)], &[(0, 1), (1, 0)])?,
        ];
        for cfg in &cfgs {
            let k = build_code(&lat, cfg, 0)?.code.k();
            ensure!(k == 4, "L={l}, {} defects: K = {k}", cfg.primal.len() + cfg.dual.len());
            built += 1;
        }
        let tc = build_code(&lat, &DefectConfig::empty(), 0)?;
        let d = distance(&tc.code, l, 1e-9)?.distance;
        ensure!(d == Some(l), "L={l}: distance {d:?}");
    }
    Ok(format!("{built} codes with K = 4, distances 2 and 3"))
}

fn four_defects() -> Result<ToricCode> {
    let lat = TorusLattice::new(3)?;
    let cfg = DefectConfig::from_coords(&lat, &[(0, 0), (0, 2)], &[(1, 1), (2, 0)])?;
    Ok(build_code(&lat, &cfg, 0)?)
}

fn c7_monodromy_table() -> Result<String> {
    let tc = four_defects()?;
    let (p, d) = (DefectId::primal, DefectId::dual);
    let run = |g: BraidGenerator| monodromy(&tc, &[g], 0, Routing::Primary, 1e-8);
    let c = run(BraidGenerator::ContractibleLoop { defect: p(0), radius: 1 })?.holonomy;
    ensure!(
        c.classification == Classification::PhaseOnly && close(c.phase, ONE, 1e-8) && c.residual() < 1e-8,
        "contractible: {:?} {}",
        c.classification,
        c.phase
    );
    let f = run(BraidGenerator::FullBraid { mover: p(0), target: d(0) })?.holonomy;
    ensure!(
        f.classification == Classification::PhaseOnly && close(f.phase, -ONE, 1e-8),
        "full braid: {:?} {}",
        f.classification,
        f.phase
    );
    let h = run(BraidGenerator::HalfBraid { a: p(0), b: p(1) })?.holonomy;
    ensure!(
        h.classification == Classification::PhaseOnly && close(h.phase, ONE, 1e-8),
        "half braid: {:?} {}",
        h.classification,
        h.phase
    );
    let m = run(BraidGenerator::TorusLoop { defect: p(0), axis: Axis::X })?.holonomy;
    let n = run(BraidGenerator::TorusLoop { defect: d(0), axis: Axis::Y })?.holonomy;
    ensure!(m.classification == Classification::NontrivialLogical, "torus loop is phase-only");
    let sq = squares_to_identity(&m.logical);
    let ac = anticommutator(&m.logical, &n.logical);
    ensure!(sq < 1e-8 && ac < 1e-8, "M^2 deviation {sq:.3e}, anticommutator {ac:.3e}");
    Ok(format!("identity, -1, identity, M^2 = 1 with anticommutator {ac:.1e}"))
}

fn c8_interpolation_geometry() -> Result<String> {
    let lat = TorusLattice::new(3)?;
    let cfg = DefectConfig::from_coords(&lat, &[(0, 0), (2, 2)], &[(1, 2), (2, 0)])?;
    let r = face_checks(&lat, &cfg, 0, 1e-9)?;
    ensure!(r.faces > 0 && r.samples >= 20 * r.faces, "{} faces, {} samples", r.faces, r.samples);
    ensure!(r.edge_overlap < 1e-10, "edge overlap {:.3e}", r.edge_overlap);
    for (name, v) in [
        ("normalization", r.normalization),
        ("boundary", r.boundary),
        ("diagonal", r.diagonal),
        ("winding", r.winding),
    ] {
        ensure!(v < 1e-9, "{name} {v:.3e}");
    }
    Ok(format!("{} faces, {} samples, worst {:.1e}", r.faces, r.samples, r.boundary.max(r.diagonal)))
}

fn c9_toric_flatness() -> Result<String> {
    let r = flatness_probe_toric(&four_defects()?, 25, 3, 0, 1e-7, 9)?;
    let distinct = r.trials.iter().filter(|t| t.primary_segments != t.alternative_segments).count();
    ensure!(r.trials.len() == 25 && r.passed, "max deviation {:.3e}", r.max_deviation);
    ensure!(distinct > 0, "every pair of routings had the same length");
    Ok(format!("25 words, max deviation {:.2e}, {distinct} with distinct routing lengths", r.max_deviation))
}

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// Runs the binary and returns its report with timestamp lines removed.
fn report_without_timestamp(args: &[&str], threads: usize, out: &Path) -> Result<String> {
    let status = Command::new(env!("CARGO_BIN_EXE_qholo"))
        .args(args)
        .arg("--threads")
        .arg(threads.to_string())
        .arg("--out")
        .arg(out)
        .current_dir(repo_root())
        .stdout(std::process::Stdio::null())
        .status()?;
    ensure!(status.success(), "{args:?} exited with {status}");
    let text = std::fs::read_to_string(out)?;
    Ok(text.lines().filter(|l| !l.contains("\"timestamp\":")).collect::<Vec<_>>().join("\n"))
}

fn c10_determinism() -> Result<String> {
    let runs: [&[&str]; 5] = [
        &["distance", "--fixture", "five-qubit"],
        &["transversal", "trivial-action", "--seed", "7"],
        &["transversal", "flatness", "--seed", "7", "--trials", "10"],
        &["toric", "braid", "--config", "configs/full_braid.json", "--routing", "alternative", "--seed", "3"],
        &["toric", "flatness", "--config", "configs/face_checks.json", "--trials", "2", "--word-len", "2", "--seed", "5"],
    ];
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("determinism");
    std::fs::create_dir_all(&dir)?;
    for (i, args) in runs.iter().enumerate() {
        let mut seen = Vec::new();
        for (j, threads) in [1, 2, 1, 4].into_iter().enumerate() {
            seen.push(report_without_timestamp(args, threads, &dir.join(format!("{i}-{j}.json")))?);
        }
        ensure!(seen.windows(2).all(|w| w[0] == w[1]), "{args:?}: reports differ");
    }
    Ok(format!("{} commands, 4 runs each under 1, 2 and 4 threads", runs.len()))
}

type Criterion = (usize, &'static str, u64, fn() -> Result<String>);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "five-qubit distance", 2, c1_distance),
        (2, "correction condition", 5, c2_correction),
        (3, "Lie-algebra exponentials act as scalars", 10, c3_trivial_action),
        (4, "transversal holonomies", 5, c4_holonomies),
        (5, "transversal flatness", 30, c5_transversal_flatness),
        (6, "toric build", 60, c6_toric_build),
        (7, "toric monodromy table", 60, c7_monodromy_table),
        (8, "interpolation geometry", 20, c8_interpolation_geometry),
        (9, "toric flatness", 120, c9_toric_flatness),
        (10, "report determinism", 120, c10_determinism),
    ];
    let mut failed = 0;
    for (n, name, budget, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let over = took > Duration::from_secs(budget);
        let line = match &outcome {
            Ok(detail) if !over => format!("PASS criterion {n}: {name}: {detail} ({:.2} s)", took.as_secs_f64()),
            Ok(detail) => format!("FAIL criterion {n}: {name}: {detail}, but took {:.2} s > {budget} s", took.as_secs_f64()),
            Err(e) => format!("FAIL criterion {n}: {name}: {e:#} ({:.2} s)", took.as_secs_f64()),
        };
        if outcome.is_err() || over {
            failed += 1;
        }
        println!("{line}");
    }
    if failed > 0 {
        println!("{failed} of 10 criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
