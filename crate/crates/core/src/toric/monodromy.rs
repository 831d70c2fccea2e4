//! Monodromies of braid words, the two-routing flatness probe, and the
//! interpolation-geometry checks.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::braid::{compile_braid, BraidGenerator, Routing};
use super::code::{build_code, ToricCode};
use super::config::{hardcore_check, DefectConfig, DefectId};
use super::interp::{
    corner_paulis, det_winding_check, face_coefficients_on, FaceCoefficients, Side,
    Triangle,
};
use super::lattice::{Axis, Corner, Layer, TorusLattice};
use super::transport::{transport_along, TranscriptEntry};
use crate::error::{Error, Result};
use crate::holonomy::{classify, phase_adjusted_distance, HolonomyResult};
use crate::pauli_linalg::frame::{identity_deviation, max_abs, CMatrix};
use crate::pauli_linalg::{alpha, beta, subspace_distance, Frame};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonodromyReport {
    pub holonomy: HolonomyResult,
    pub segments: usize,
    pub max_residual: f64,
    pub transcript: Vec<TranscriptEntry>,
}

/// Compiles `word`, transports the code's frame along it and extracts the
/// logical action of the closed loop.
pub fn monodromy(
    tc: &ToricCode,
    word: &[BraidGenerator],
    s: usize,
    routing: Routing,
    tol: f64,
) -> Result<MonodromyReport> {
    let path = compile_braid(&tc.lattice, &tc.config, word, s, routing)?;
    let out = transport_along(tc, &path, s)?;
    if !out.final_config.same_sites(&tc.config) {
        return Err(Error::NotALoop { min_cosine: 0.0 });
    }
    let holonomy = classify(tc.code.frame(), &out.frame, tol)?;
    Ok(MonodromyReport {
        max_residual: out.max_residual(),
        segments: path.len(),
        transcript: out.transcript,
        holonomy,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BraidFlatnessTrial {
    pub word: Vec<BraidGenerator>,
    pub primary_segments: usize,
    pub alternative_segments: usize,
    /// `min_φ ‖M₁ − e^{iφ} M₂‖_max` between the two logical matrices.
    pub deviation: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BraidFlatnessReport {
    pub trials: Vec<BraidFlatnessTrial>,
    pub max_deviation: f64,
    pub passed: bool,
}

/// A pseudo-random word of `len` generators over the configuration's
/// defects.
pub fn random_word(lat: &TorusLattice, cfg: &DefectConfig, len: usize, rng: &mut ChaCha8Rng) -> Vec<BraidGenerator> {
    let ids = cfg.ids();
    let pick = |rng: &mut ChaCha8Rng| ids[rng.random_range(0..ids.len())];
    (0..len)
        .map(|_| match rng.random_range(0..4) {
            0 => {
                let mover = pick(rng);
                let others: Vec<DefectId> = ids.iter().copied().filter(|&d| d != mover).collect();
                BraidGenerator::FullBraid {
                    mover,
                    target: others[rng.random_range(0..others.len())],
                }
            }
            1 => {
                let a = pick(rng);
                let mates: Vec<DefectId> = ids
                    .iter()
                    .copied()
                    .filter(|&d| d != a && d.layer == a.layer)
                    .collect();
                BraidGenerator::HalfBraid {
                    a,
                    b: mates[rng.random_range(0..mates.len())],
                }
            }
            2 => BraidGenerator::TorusLoop {
                defect: pick(rng),
                axis: if rng.random_bool(0.5) { Axis::X } else { Axis::Y },
            },
            _ => BraidGenerator::ContractibleLoop {
                defect: pick(rng),
                radius: rng.random_range(1..lat.l()),
            },
        })
        .collect()
}

/// For each trial, transports along the default routing and along a
/// distinct homotopic one and compares the logical matrices up to phase.
/// Words that cannot be routed are redrawn.
pub fn flatness_probe_toric(
    tc: &ToricCode,
    trials: usize,
    word_len: usize,
    s: usize,
    tol: f64,
    seed: u64,
) -> Result<BraidFlatnessReport> {
    let results: Vec<Result<BraidFlatnessTrial>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64);
            for _ in 0..64 {
                let word = random_word(&tc.lattice, &tc.config, word_len, &mut rng);
                let alt = Routing::Alternative { seed: rng.random() };
                let a = match monodromy(tc, &word, s, Routing::Primary, tol) {
                    Ok(a) => a,
                    Err(Error::Routing(_)) => continue,
                    Err(e) => return Err(e),
                };
                let b = monodromy(tc, &word, s, alt, tol)?;
                return Ok(BraidFlatnessTrial {
                    primary_segments: a.segments,
                    alternative_segments: b.segments,
                    deviation: phase_adjusted_distance(&a.holonomy.logical, &b.holonomy.logical),
                    word,
                });
            }
            Err(Error::Routing(format!("trial {trial}: no routable word")))
        })
        .collect();
    let trials = results.into_iter().collect::<Result<Vec<_>>>()?;
    let max_deviation = trials.iter().map(|t| t.deviation).fold(0.0, f64::max);
    Ok(BraidFlatnessReport {
        passed: max_deviation < tol,
        max_deviation,
        trials,
    })
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct FaceCheckReport {
    pub faces: usize,
    pub samples: usize,
    /// Largest `||a|²+|b|²+|c|²+|d|² − 1|`.
    pub normalization: f64,
    /// Largest subspace distance between face codes on a side and the
    /// matching edge codes.
    pub boundary: f64,
    /// Largest subspace distance between the two formulas on the diagonal.
    pub diagonal: f64,
    /// Largest deviation of edge-code overlaps from the closed form.
    pub edge_overlap: f64,
    /// Largest `|winding|` under the uniform orientation.
    pub winding: f64,
    /// Largest `||winding| − 2π|` with one side flipped.
    pub flipped_winding_gap: f64,
    pub passed: bool,
}

impl FaceCheckReport {
    fn merge(&mut self, o: &FaceCheckReport) {
        self.faces += o.faces;
        self.samples += o.samples;
        self.normalization = self.normalization.max(o.normalization);
        self.boundary = self.boundary.max(o.boundary);
        self.diagonal = self.diagonal.max(o.diagonal);
        self.edge_overlap = self.edge_overlap.max(o.edge_overlap);
        self.winding = self.winding.max(o.winding);
        self.flipped_winding_gap = self.flipped_winding_gap.max(o.flipped_winding_gap);
    }
}

/// Points per side and along the diagonal.
const PER_SIDE: usize = 5;
const ON_DIAGONAL: usize = 20;

/// Face-code frame in the coordinates of `[ψ_A | σ_B ψ_A | σ_C ψ_A | σ_D ψ_A]`.
fn face_coords(k: &FaceCoefficients) -> CMatrix {
    let mut m = CMatrix::zeros(16, 4);
    for (block, c) in [k.a, k.b, k.c, k.d].into_iter().enumerate() {
        for j in 0..4 {
            m[(4 * block + j, j)] = c;
        }
    }
    m
}

/// Coordinates of an ambient frame in the orthonormal corner basis `g`,
/// together with the norm of the part outside it.
fn corner_coords(g: &CMatrix, f: &CMatrix) -> (CMatrix, f64) {
    let x = g.ad_mul(f);
    let leak = (f - g * &x).norm();
    (x, leak)
}

/// Sine of the largest principal angle between two frames given in corner
/// coordinates, allowing for a leaked component of norm `leak` in the first.
fn coords_distance(x: &CMatrix, y: &CMatrix, leak: f64) -> Result<f64> {
    let d = subspace_distance(&Frame::new(y.clone())?, &Frame::new(x.clone())?)?;
    Ok(d.hypot(leak))
}

/// Geometry checks for one square, with the mover on corner `C` of `cfg`.
///
/// The four corner codes are mutually orthogonal (their syndromes differ),
/// so every face code lives in the 16-dimensional span of `σ_i ψ_A` and is
/// compared there. Edge codes are built independently from the corner codes
/// and projected into that span; their leakage counts against agreement.
fn check_square(lat: &TorusLattice, cfg: &DefectConfig, mover: DefectId, sq: super::lattice::Square, s: usize) -> Result<FaceCheckReport> {
    let mut r = FaceCheckReport {
        faces: 1,
        ..Default::default()
    };
    let anchor = build_code(lat, &cfg.moved(mover, lat.corner_site(sq, Corner::A)), s)?;
    let e = lat.square_edges(sq);
    let at = |c: Corner| cfg.moved(mover, lat.corner_site(sq, c));
    for c in [Corner::B, Corner::C, Corner::D] {
        if !hardcore_check(lat, &at(c), s).ok {
            return Err(Error::HardCore(format!("corner {c:?} of {sq:?}")));
        }
    }
    let c_code = build_code(lat, &at(Corner::C), s)?;
    let d_code = build_code(lat, &at(Corner::D), s)?;

    let fa = anchor.code.frame().matrix();
    let blocks = corner_paulis(lat, sq)
        .iter()
        .map(|p| p.apply_matrix(fa))
        .collect::<Result<Vec<_>>>()?;
    let g = CMatrix::from_columns(&blocks.iter().flat_map(|b| b.column_iter().map(|c| c.into_owned())).collect::<Vec<_>>());
    r.normalization = Frame::new(g.clone())?.orthonormality_defect();

    let ts: Vec<f64> = (1..=PER_SIDE).map(|k| k as f64 / (PER_SIDE + 1) as f64).collect();
    type SideSpec<'a> = (super::lattice::LayerEdge, &'a ToricCode, fn(f64) -> (f64, f64));
    let sides: [SideSpec; 4] = [
        (e.ca, &c_code, |t| (0.0, t)),
        (e.cd, &c_code, |t| (t, 0.0)),
        (e.ab, &anchor, |t| (t, 1.0)),
        (e.db, &d_code, |t| (1.0, t)),
    ];
    // The edge code at t is α(t)·F + β(t)·σ_e F for the built start code F,
    // so both parts are projected once per side.
    let mut cd_coords = Vec::new();
    for (edge, start, local) in &sides {
        let f0 = start.code.frame().matrix();
        let f1 = lat.edge_pauli(*edge).apply_matrix(f0)?;
        let (x0, l0) = corner_coords(&g, f0);
        let (x1, l1) = corner_coords(&g, &f1);
        for &t in &ts {
            let (x, y) = local(t);
            let k = face_coefficients_on(Triangle::of(x, y), x, y);
            let (a, b) = (alpha(t), beta(t));
            let ec = &x0 * a + &x1 * b;
            let leak = a.norm() * l0 + b.norm() * l1;
            r.boundary = r.boundary.max(coords_distance(&ec, &face_coords(&k), leak)?);
            if *edge == e.cd {
                cd_coords.push(ec);
            }
            r.samples += 1;
        }
    }
    for k in 0..ON_DIAGONAL {
        let x = (k as f64 + 0.5) / ON_DIAGONAL as f64;
        let y = 1.0 - x;
        let lo = face_coefficients_on(Triangle::Lower, x, y);
        let up = face_coefficients_on(Triangle::Upper, x, y);
        r.diagonal = r.diagonal.max(coords_distance(&face_coords(&lo), &face_coords(&up), 0.0)?);
        for k in [lo, up] {
            r.normalization = r.normalization.max((k.norm_sqr() - 1.0).abs());
        }
        r.samples += 1;
    }
    // Interior normalization on a grid.
    for i in 1..PER_SIDE {
        for j in 1..PER_SIDE {
            let (x, y) = (i as f64 / PER_SIDE as f64, j as f64 / PER_SIDE as f64);
            let k = face_coefficients_on(Triangle::of(x, y), x, y);
            r.normalization = r.normalization.max((k.norm_sqr() - 1.0).abs());
        }
    }
    // Edge-code overlaps along CD, as singular values of the coordinate overlap.
    for (i, &t) in ts.iter().enumerate() {
        for (j, &u) in ts.iter().enumerate().skip(i + 1) {
            let want = (alpha(t) * alpha(u).conj() + beta(t) * beta(u).conj()).norm();
            let m = cd_coords[i].ad_mul(&cd_coords[j]);
            for c in m.singular_values().iter() {
                r.edge_overlap = r.edge_overlap.max((c - want).abs());
            }
        }
    }
    r.winding = det_winding_check(lat, sq, None).abs();
    r.flipped_winding_gap = [Side::Ca, Side::Cd, Side::Ab, Side::Db]
        .iter()
        .map(|&side| (det_winding_check(lat, sq, Some(side)).abs() - 2.0 * std::f64::consts::PI).abs())
        .fold(0.0, f64::max);
    Ok(r)
}

/// Runs the geometry checks over every square of both layers where the
/// first defect of that layer, placed on corner `C`, may enter the square.
pub fn face_checks(lat: &TorusLattice, cfg: &DefectConfig, s: usize, tol: f64) -> Result<FaceCheckReport> {
    let mut jobs = Vec::new();
    for layer in [Layer::Primal, Layer::Dual] {
        if cfg.layer(layer).is_empty() {
            continue;
        }
        let mover = DefectId { layer, index: 0 };
        for site in lat.sites() {
            let sq = lat.square(layer, site.x as i64, site.y as i64);
            let moved = cfg.moved(mover, lat.corner_site(sq, Corner::C));
            if DefectConfig::new(lat, moved.primal.clone(), moved.dual.clone()).is_err() {
                continue;
            }
            if super::interp::check_face_entry(lat, &moved, sq, mover, s).is_err() {
                continue;
            }
            jobs.push((moved, mover, sq));
        }
    }
    let parts: Vec<FaceCheckReport> = jobs
        .par_iter()
        .map(|(c, m, sq)| check_square(lat, c, *m, *sq, s))
        .collect::<Result<_>>()?;
    let mut r = FaceCheckReport::default();
    for p in &parts {
        r.merge(p);
    }
    r.passed = r.faces > 0
        && r.normalization < tol
        && r.boundary < tol
        && r.diagonal < tol
        && r.edge_overlap < 1e-10
        && r.winding < tol
        && r.flipped_winding_gap < tol;
    Ok(r)
}

/// Checks a logical matrix squares to the identity.
pub fn squares_to_identity(m: &CMatrix) -> f64 {
    identity_deviation(&(m * m))
}

/// `max |AB + BA|`.
pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a * b + b * a))
}

/// Distance of a logical matrix from `±1` (both signs).
pub fn distance_from_scalar(m: &CMatrix) -> f64 {
    let k = m.nrows();
    let id = CMatrix::identity(k, k);
    [1.0, -1.0]
        .iter()
        .map(|&s| max_abs(&(m - &id * Complex64::new(s, 0.0))))
        .fold(f64::INFINITY, f64::min)
}
