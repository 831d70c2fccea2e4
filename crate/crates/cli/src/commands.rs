use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use qholo_core::error_models::{error_set_from_json, geolocal_errors, squdit_errors, GeoLattice};
use qholo_core::holonomy::{phase_adjusted_distance, Classification, HolonomyResult};
use qholo_core::pauli_linalg::frame::{max_abs, CMatrix};
use qholo_core::pauli_linalg::{Pauli1, PauliString};
use qholo_core::qecc::{correction_condition, distance, five_qubit_stabilizers, logical_action, Code};
use qholo_core::toric::monodromy::{distance_from_scalar, squares_to_identity};
use qholo_core::toric::{build_code, code::stabilizer_residual, face_checks, flatness_probe_toric, monodromy, Routing, ToricDocument};
use qholo_core::transversal::{
    check_projectively_trivial_action, five_qubit_base_loops, fl_lie_algebra, flatness_probe_transversal,
    pauli_generator_path, r3_matrix, r3_path, transversal_holonomy, BaseLoop, TransversalPath, TransversalUnitary,
    NULLSPACE_CUTOFF,
};
use serde_json::{json, Value};

use crate::args::{CodeArgs, Common, ErrorArgs, RoutingArg, ToricArgs};
use crate::inputs::{load_code, load_toric};
use crate::report::{Check, Outcome, Report};
use crate::UsageError;

/// Largest generated error set.
const ERROR_CAP: usize = 1_000_000;

fn fmt_c(z: Complex64) -> String {
    format!("{:+.6}{:+.6}i", z.re, z.im)
}

fn expect_usize(e: &str) -> Result<usize> {
    e.parse()
        .map_err(|_| UsageError(format!("--expect {e:?}: expected a non-negative integer")).into())
}

fn expect_bool(e: &str) -> Result<bool> {
    match e {
        "true" | "yes" | "pass" | "correctable" => Ok(true),
        "false" | "no" | "fail" | "uncorrectable" => Ok(false),
        _ => bail!(UsageError(format!("--expect {e:?}: expected true or false"))),
    }
}

fn parse_phase(e: &str) -> Option<Complex64> {
    match e {
        "1" | "+1" => Some(Complex64::new(1.0, 0.0)),
        "-1" => Some(Complex64::new(-1.0, 0.0)),
        "i" | "+i" => Some(Complex64::new(0.0, 1.0)),
        "-i" => Some(Complex64::new(0.0, -1.0)),
        _ => None,
    }
}

/// Checks a holonomy against `phase-only`, `nontrivial`, `pauli`, or a phase.
fn expect_holonomy(e: &str, h: &HolonomyResult, tol: f64) -> Result<Check> {
    let phase_only = h.classification == Classification::PhaseOnly;
    Ok(match e {
        "phase-only" => Check::new("expect phase-only", h.classification, phase_only),
        "nontrivial" => Check::new("expect nontrivial", h.classification, !phase_only),
        "pauli" => {
            let sq = squares_to_identity(&h.logical);
            Check::new("expect logical Pauli", json!({"square_deviation": sq}), !phase_only && sq < tol)
        }
        _ => {
            let Some(want) = parse_phase(e) else {
                bail!(UsageError(format!(
                    "--expect {e:?}: expected phase-only, nontrivial, pauli, 1, -1, i or -i"
                )));
            };
            Check::new(
                format!("expect phase {e}"),
                h.phase,
                phase_only && (h.phase - want).norm() < tol,
            )
        }
    })
}

fn no_expect(common: &Common, verb: &str) -> Result<()> {
    if common.expect.is_some() {
        bail!(UsageError(format!("{verb} takes no --expect")));
    }
    Ok(())
}

pub fn config_value(common: &Common, params: Value) -> Value {
    json!({
        "seed": common.seed,
        "tol": common.tol,
        "expect": common.expect,
        "params": params,
    })
}

pub fn cmd_distance(common: &Common, args: &CodeArgs, max_weight: usize) -> Result<Outcome> {
    let tol = common.tol.unwrap_or(1e-9);
    let loaded = load_code(args)?;
    let r = distance(&loaded.code, max_weight, tol)?;
    let mut checks = Vec::new();
    if let Some(e) = &common.expect {
        let ok = match e.as_str() {
            "none" => r.distance.is_none(),
            _ => r.distance == Some(expect_usize(e)?),
        };
        checks.push(Check::new(format!("expect distance {e}"), r.distance, ok));
    }
    let summary = vec![match (&r.distance, &r.witness) {
        (Some(d), Some(w)) => format!("{}: distance {d}, witness {w}, {} Paulis checked", loaded.label, r.checked),
        _ => format!(
            "{}: no violation up to weight {max_weight} (distance >= {}), {} Paulis checked",
            loaded.label, r.lower_bound, r.checked
        ),
    }];
    Ok(Outcome {
        result: json!({"code": loaded.label, "n": loaded.code.n_sites(), "k": loaded.code.k(), "max_weight": max_weight, "distance": r}),
        checks,
        summary,
    })
}

pub fn cmd_correctable(common: &Common, args: &CodeArgs, errs: &ErrorArgs) -> Result<Outcome> {
    let tol = common.tol.unwrap_or(1e-9);
    let loaded = load_code(args)?;
    let n = loaded.code.n_sites();
    let (es, source) = if let Some(s) = errs.weight {
        (squdit_errors(n, s)?, format!("weight <= {s}"))
    } else if let Some(path) = &errs.errors {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        (error_set_from_json(&text)?, path.display().to_string())
    } else if let Some(st) = &errs.geolocal {
        let Some(tc) = &loaded.toric else {
            bail!(UsageError("--geolocal needs a toric code".into()));
        };
        let lat = GeoLattice::toric_edges(tc.lattice.l())?;
        (geolocal_errors(&lat, st[0], st[1], ERROR_CAP)?, format!("{} clusters of diameter {}", st[0], st[1]))
    } else {
        bail!(UsageError("one of --weight, --errors, --geolocal is required".into()));
    };
    let r = correction_condition(&loaded.code, &es, tol)?;
    let mut checks = Vec::new();
    if let Some(e) = &common.expect {
        let want = expect_bool(e)?;
        checks.push(Check::new(format!("expect correctable {want}"), r.correctable, r.correctable == want));
    }
    let summary = vec![match &r.witness {
        None => format!("{}: {} errors ({source}) correctable, {} pairs checked", loaded.label, es.len(), r.pairs_checked),
        Some(w) => format!(
            "{}: {} errors ({source}) not correctable, witness {} / {} (deviation {:.3e})",
            loaded.label,
            es.len(),
            w.error_a,
            w.error_b,
            w.deviation
        ),
    }];
    Ok(Outcome {
        result: json!({"code": loaded.label, "errors": source, "n_errors": es.len(), "correction": r}),
        checks,
        summary,
    })
}

pub fn cmd_lie_dim(common: &Common, args: &CodeArgs, cutoff: f64) -> Result<Outcome> {
    let loaded = load_code(args)?;
    let basis = fl_lie_algebra(&loaded.code, cutoff)?;
    let dim = basis.dimension();
    let mut checks = Vec::new();
    if let Some(e) = &common.expect {
        checks.push(Check::new(format!("expect dimension {e}"), dim, dim == expect_usize(e)?));
    }
    Ok(Outcome {
        result: json!({"code": loaded.label, "dimension": dim, "cutoff": cutoff, "singular_values": basis.singular_values}),
        checks,
        summary: vec![format!("{}: logical Lie algebra has dimension {dim}", loaded.label)],
    })
}

pub fn cmd_trivial_action(common: &Common, args: &CodeArgs, samples: usize) -> Result<Outcome> {
    no_expect(common, "transversal trivial-action")?;
    let tol = common.tol.unwrap_or(1e-8);
    let loaded = load_code(args)?;
    let basis = fl_lie_algebra(&loaded.code, NULLSPACE_CUTOFF)?;
    let r = check_projectively_trivial_action(&loaded.code, &basis, samples, tol, common.seed)?;
    let checks = vec![
        Check::below("max scalar residual", r.max_residual, tol),
        Check::below("max leakage", r.max_leakage, tol),
    ];
    let summary = vec![format!(
        "{}: {samples} exponentials, max residual {:.3e}, max leakage {:.3e}",
        loaded.label, r.max_residual, r.max_leakage
    )];
    Ok(Outcome {
        result: json!({"code": loaded.label, "lie_dimension": basis.dimension(), "trivial_action": r}),
        checks,
        summary,
    })
}

fn uniform_pauli(n: usize, p: Pauli1) -> Result<PauliString> {
    Ok(PauliString::from_labels(&vec![p; n])?)
}

enum Gate {
    Pauli(PauliString),
    R3,
    Stabilizer(PauliString),
}

fn parse_gate(gate: &str, code: &Code) -> Result<Gate> {
    let n = code.n_sites();
    Ok(match gate {
        "X" => Gate::Pauli(uniform_pauli(n, Pauli1::X)?),
        "Y" => Gate::Pauli(uniform_pauli(n, Pauli1::Y)?),
        "Z" => Gate::Pauli(uniform_pauli(n, Pauli1::Z)?),
        "R3" => Gate::R3,
        _ => {
            if let Some(k) = gate.strip_prefix("stabilizer-") {
                let gens = five_qubit_stabilizers();
                let k: usize = k.parse().map_err(|_| UsageError(format!("bad gate {gate:?}")))?;
                if n != 5 || k == 0 || k > gens.len() {
                    bail!(UsageError(format!("{gate} names a generator of the five-qubit code")));
                }
                Gate::Stabilizer(gens[k - 1])
            } else {
                let p: PauliString = gate.parse().map_err(|_| UsageError(format!("bad gate {gate:?}")))?;
                if p.n() != n {
                    bail!(UsageError(format!("gate {gate} acts on {} qubits, code has {n}", p.n())));
                }
                Gate::Pauli(p)
            }
        }
    })
}

pub fn cmd_holonomy(common: &Common, args: &CodeArgs, gate: &str) -> Result<Outcome> {
    let tol = common.tol.unwrap_or(1e-8);
    let loaded = load_code(args)?;
    let code = &loaded.code;
    let n = code.n_sites();
    let g = parse_gate(gate, code)?;
    let path: TransversalPath = match &g {
        Gate::Pauli(p) | Gate::Stabilizer(p) => pauli_generator_path(p),
        Gate::R3 => r3_path(n),
    };
    let h = transversal_holonomy(code, &path, tol)?;
    let mut checks = vec![Check::below("unitarity", h.residuals.unitarity, tol)];
    let mut extra = json!({});
    match &g {
        Gate::Pauli(p) => {
            let want = logical_action(code, p, tol)?;
            checks.push(Check::below("matches the gate's logical action", phase_adjusted_distance(&h.logical, &want), tol));
        }
        Gate::R3 => {
            let u = TransversalUnitary::uniform(n, &r3_matrix())?;
            let want = logical_action(code, &u, tol)?;
            checks.push(Check::below("matches the gate's logical action", phase_adjusted_distance(&h.logical, &want), tol));
            // The cyclic relabelling X -> Y -> Z -> X of logical Paulis.
            let ls: Vec<CMatrix> = [Pauli1::X, Pauli1::Y, Pauli1::Z]
                .iter()
                .map(|&p| logical_action(code, &uniform_pauli(n, p)?, tol).map_err(Into::into))
                .collect::<Result<_>>()?;
            let m = &h.logical;
            let mut map = Vec::new();
            for (i, name) in ["X->Y", "Y->Z", "Z->X"].iter().enumerate() {
                let dev = max_abs(&(m * &ls[i] * m.adjoint() - &ls[(i + 1) % 3]));
                map.push(json!({"map": name, "deviation": dev}));
                checks.push(Check::below(format!("conjugates {name}"), dev, tol));
            }
            extra = json!({"conjugation": map});
        }
        Gate::Stabilizer(_) => {
            checks.push(Check::new(
                "stabilizer loop is phase-only with phase 1",
                h.phase,
                h.classification == Classification::PhaseOnly && (h.phase - Complex64::new(1.0, 0.0)).norm() < tol,
            ));
        }
    }
    if let Some(e) = &common.expect {
        checks.push(expect_holonomy(e, &h, tol)?);
    }
    let summary = vec![format!(
        "{}: holonomy of {gate} is {:?}, phase {}",
        loaded.label,
        h.classification,
        fmt_c(h.phase)
    )];
    Ok(Outcome {
        result: json!({"code": loaded.label, "gate": gate, "holonomy": h, "extra": extra}),
        checks,
        summary,
    })
}

pub fn cmd_transversal_flatness(common: &Common, args: &CodeArgs, trials: usize) -> Result<Outcome> {
    no_expect(common, "transversal flatness")?;
    let tol = common.tol.unwrap_or(1e-7);
    let loaded = load_code(args)?;
    let code = &loaded.code;
    let bases = if code.n_sites() == 5 && loaded.label == "five-qubit" {
        five_qubit_base_loops()
    } else {
        // Uniform Paulis that preserve the code.
        [Pauli1::X, Pauli1::Y, Pauli1::Z]
            .iter()
            .filter_map(|&p| uniform_pauli(code.n_sites(), p).ok())
            .filter(|p| logical_action(code, p, 1e-9).is_ok())
            .map(BaseLoop::Pauli)
            .collect()
    };
    let r = flatness_probe_transversal(code, &bases, trials, tol, common.seed)?;
    let checks = vec![Check::below("max deviation up to phase", r.max_deviation, tol)];
    let summary = vec![format!(
        "{}: {trials} homotopic pairs, max deviation {:.3e}",
        loaded.label, r.max_deviation
    )];
    Ok(Outcome {
        result: json!({"code": loaded.label, "flatness": r}),
        checks,
        summary,
    })
}

fn toric_echo(setup: &qholo_core::toric::ToricSetup) -> Value {
    serde_json::to_value(ToricDocument::from_setup(setup)).unwrap_or(Value::Null)
}

pub fn cmd_toric_build(common: &Common, args: &ToricArgs) -> Result<Outcome> {
    let tol = common.tol.unwrap_or(1e-9);
    let setup = load_toric(args)?;
    let tc = build_code(&setup.lattice, &setup.config, setup.s)?;
    let k = tc.code.k();
    let res = stabilizer_residual(&tc)?;
    let mut checks = vec![
        Check::new("four-dimensional code", k, k == 4),
        Check::below("stabilizer residual", res, tol),
    ];
    if let Some(e) = &common.expect {
        checks.push(Check::new(format!("expect K {e}"), k, k == expect_usize(e)?));
    }
    let l = setup.lattice.l();
    Ok(Outcome {
        result: json!({
            "setup": toric_echo(&setup),
            "n_qubits": setup.lattice.n_qubits(),
            "k": k,
            "stabilizer_residual": res,
        }),
        checks,
        summary: vec![format!(
            "L={l}: {} primal and {} dual defects, K = {k}, stabilizer residual {res:.3e}",
            setup.config.primal.len(),
            setup.config.dual.len()
        )],
    })
}

pub fn cmd_toric_braid(common: &Common, args: &ToricArgs, routing: RoutingArg) -> Result<Outcome> {
    let tol = common.tol.unwrap_or(1e-8);
    let setup = load_toric(args)?;
    if setup.word.is_empty() {
        bail!(UsageError("the configuration has an empty braid word".into()));
    }
    let tc = build_code(&setup.lattice, &setup.config, setup.s)?;
    let routing = match routing {
        RoutingArg::Primary => Routing::Primary,
        RoutingArg::Alternative => Routing::Alternative { seed: common.seed },
    };
    let m = monodromy(&tc, &setup.word, setup.s, routing, tol)?;
    let h = &m.holonomy;
    let mut checks = vec![
        Check::below("unitarity", h.residuals.unitarity, tol),
        Check::below("max segment residual", m.max_residual, tol),
    ];
    if let Some(e) = &common.expect {
        checks.push(expect_holonomy(e, h, tol)?);
    }
    let summary = vec![format!(
        "L={}: {} generators over {} segments, {:?}, phase {}, |M^2 - 1| {:.3e}, distance from scalar {:.3e}",
        setup.lattice.l(),
        setup.word.len(),
        m.segments,
        h.classification,
        fmt_c(h.phase),
        squares_to_identity(&h.logical),
        distance_from_scalar(&h.logical)
    )];
    Ok(Outcome {
        result: json!({"setup": toric_echo(&setup), "routing": routing, "monodromy": m}),
        checks,
        summary,
    })
}

pub fn cmd_toric_flatness(common: &Common, args: &ToricArgs, trials: usize, word_len: usize) -> Result<Outcome> {
    no_expect(common, "toric flatness")?;
    let tol = common.tol.unwrap_or(1e-7);
    let setup = load_toric(args)?;
    let tc = build_code(&setup.lattice, &setup.config, setup.s)?;
    let r = flatness_probe_toric(&tc, trials, word_len, setup.s, tol, common.seed)?;
    let distinct = r.trials.iter().filter(|t| t.primary_segments != t.alternative_segments).count();
    let checks = vec![Check::below("max deviation up to phase", r.max_deviation, tol)];
    let summary = vec![format!(
        "L={}: {trials} braid words of length {word_len}, max deviation {:.3e}, {distinct} with routings of different length",
        setup.lattice.l(),
        r.max_deviation
    )];
    Ok(Outcome {
        result: json!({"setup": toric_echo(&setup), "flatness": r}),
        checks,
        summary,
    })
}

pub fn cmd_face_checks(common: &Common, args: &ToricArgs) -> Result<Outcome> {
    no_expect(common, "toric face-checks")?;
    let tol = common.tol.unwrap_or(1e-9);
    let setup = load_toric(args)?;
    let r = face_checks(&setup.lattice, &setup.config, setup.s, tol)?;
    let checks = vec![
        Check::new("admissible faces", r.faces, r.faces > 0),
        Check::below("normalization", r.normalization, tol),
        Check::below("edge boundary agreement", r.boundary, tol),
        Check::below("diagonal continuity", r.diagonal, tol),
        Check::below("edge overlap closed form", r.edge_overlap, 1e-10),
        Check::below("det winding", r.winding, tol),
        Check::below("flipped-side winding gap", r.flipped_winding_gap, tol),
    ];
    let summary = vec![format!(
        "L={}: {} faces, {} samples; normalization {:.1e}, boundary {:.1e}, diagonal {:.1e}, overlap {:.1e}, winding {:.1e}",
        setup.lattice.l(),
        r.faces,
        r.samples,
        r.normalization,
        r.boundary,
        r.diagonal,
        r.edge_overlap,
        r.winding
    )];
    Ok(Outcome {
        result: json!({"setup": toric_echo(&setup), "face_checks": r}),
        checks,
        summary,
    })
}

pub fn cmd_report_merge(common: &Common, inputs: &[std::path::PathBuf]) -> Result<Outcome> {
    no_expect(common, "report-merge")?;
    let mut reports = Vec::new();
    let mut checks = Vec::new();
    let mut summary = Vec::new();
    for path in inputs {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let r: Report = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if r.schema_version != crate::report::SCHEMA_VERSION {
            bail!("{}: schema version {} is not supported", path.display(), r.schema_version);
        }
        let name = format!("{}: {}", path.display(), r.command);
        summary.push(format!("{} {name}", if r.passed { "PASS" } else { "FAIL" }));
        checks.push(Check::new(name, r.passed, r.passed));
        reports.push(r);
    }
    Ok(Outcome {
        result: json!({"reports": reports}),
        checks,
        summary,
    })
}
