//! Toric codes with defects, built by projecting seed basis states.

use num_complex::Complex64;
use rayon::prelude::*;

use super::config::{hardcore_check, DefectConfig};
use super::lattice::{Dir, Layer, Site, TorusLattice};
use crate::error::{Error, Result};
use crate::pauli_linalg::{orthonormalize, PauliString, Phase};
use crate::qecc::Code;

/// Largest period whose dense state vectors we are willing to allocate.
pub const MAX_DENSE_PERIOD: usize = 3;

/// A defect code together with the configuration it was built for.
#[derive(Clone, Debug)]
pub struct ToricCode {
    pub lattice: TorusLattice,
    pub config: DefectConfig,
    pub code: Code,
}

impl ToricCode {
    /// Replaces the code, keeping lattice and configuration.
    pub fn with_code(&self, code: Code, config: DefectConfig) -> Self {
        Self {
            lattice: self.lattice,
            config,
            code,
        }
    }
}

/// Qubits crossed by the dual path from face `a` to face `b`, moving in `+x`
/// then `+y`.
fn dual_path_mask(lat: &TorusLattice, a: Site, b: Site) -> u64 {
    let l = lat.l();
    let mut mask = 0u64;
    let mut cur = a;
    for (d, steps) in [(Dir::PlusX, (b.x + l - a.x) % l), (Dir::PlusY, (b.y + l - a.y) % l)] {
        for _ in 0..steps {
            let (e, _) = lat.edge_from(Layer::Dual, cur, d);
            mask ^= 1 << lat.edge_qubit(e);
            cur = lat.step(cur, d);
        }
    }
    mask
}

/// Qubits crossed by a dual loop winding once in `d`, starting at face (0,0).
pub fn dual_loop_mask(lat: &TorusLattice, d: Dir) -> u64 {
    let mut mask = 0u64;
    let mut cur = Site::new(0, 0);
    for _ in 0..lat.l() {
        let (e, _) = lat.edge_from(Layer::Dual, cur, d);
        mask ^= 1 << lat.edge_qubit(e);
        cur = lat.step(cur, d);
    }
    mask
}

/// Qubits on a primal loop winding once in `d`, starting at vertex (0,0).
pub fn primal_loop_mask(lat: &TorusLattice, d: Dir) -> u64 {
    let mut mask = 0u64;
    let mut cur = Site::new(0, 0);
    for _ in 0..lat.l() {
        let (e, _) = lat.edge_from(Layer::Primal, cur, d);
        mask ^= 1 << lat.edge_qubit(e);
        cur = lat.step(cur, d);
    }
    mask
}

/// `Z` along a primal loop or `X` along a dual loop, winding once in `d`.
pub fn loop_operator(lat: &TorusLattice, layer: Layer, d: Dir) -> PauliString {
    let n = lat.n_qubits();
    match layer {
        Layer::Primal => PauliString::new(n, 0, primal_loop_mask(lat, d), Phase::ONE),
        Layer::Dual => PauliString::new(n, dual_loop_mask(lat, d), 0, Phase::ONE),
    }
    .expect("mask within range")
}

/// Applies `(1 + sign·X_mask)/2` in place.
fn project_x(v: &mut [Complex64], mask: u64, sign: f64) {
    let m = mask as usize;
    for b in 0..v.len() {
        let c = b ^ m;
        if b < c {
            let (p, q) = (v[b], v[c]);
            v[b] = (p + q * sign) * 0.5;
            v[c] = (q + p * sign) * 0.5;
        }
    }
}

/// The joint eigenspace with `A_v = -1` exactly on primal defects and
/// `B_f = -1` exactly on dual defects; always four-dimensional.
///
/// Seeds are computational basis states whose bits flip the plaquettes of
/// paired dual defects, times the four logical sectors; vertex projectors
/// then symmetrize each seed.
pub fn build_code(lat: &TorusLattice, cfg: &DefectConfig, s: usize) -> Result<ToricCode> {
    if lat.l() > MAX_DENSE_PERIOD {
        return Err(Error::Unsupported(format!(
            "dense codes need L <= {MAX_DENSE_PERIOD}, got {}",
            lat.l()
        )));
    }
    let cfg = DefectConfig::new(lat, cfg.primal.clone(), cfg.dual.clone())?;
    let hc = hardcore_check(lat, &cfg, s);
    if let Some((a, b, d)) = hc.violation {
        return Err(Error::Config(format!(
            "{a} and {b} at distance {d} violate separation {s}"
        )));
    }

    let base = cfg
        .dual
        .chunks(2)
        .fold(0u64, |m, pair| m ^ dual_path_mask(lat, pair[0], pair[1]));
    let h = dual_loop_mask(lat, Dir::PlusY);
    let v = dual_loop_mask(lat, Dir::PlusX);
    let dim = 1usize << lat.n_qubits();

    let seeds: Vec<Vec<Complex64>> = [0, h, v, h ^ v]
        .par_iter()
        .map(|&sector| {
            let mut psi = vec![Complex64::new(0.0, 0.0); dim];
            psi[(base ^ sector) as usize] = Complex64::new(1.0, 0.0);
            for site in lat.sites() {
                let sign = if cfg.primal.contains(&site) { -1.0 } else { 1.0 };
                project_x(&mut psi, lat.star_mask(site), sign);
            }
            psi
        })
        .collect();
    let frame = orthonormalize(&seeds, 1e-12)?;
    if frame.k() != 4 {
        return Err(Error::Config(format!("expected K = 4, found {}", frame.k())));
    }
    Ok(ToricCode {
        lattice: *lat,
        config: cfg,
        code: Code::qubits(frame)?,
    })
}

/// Largest deviation of the code from the stabilizer signs its
/// configuration prescribes.
pub fn stabilizer_residual(tc: &ToricCode) -> Result<f64> {
    let lat = &tc.lattice;
    let f = tc.code.frame().matrix();
    let mut worst: f64 = 0.0;
    for layer in [Layer::Primal, Layer::Dual] {
        for site in lat.sites() {
            let sign = if tc.config.layer(layer).contains(&site) { -1.0 } else { 1.0 };
            let img = lat.stabilizer(layer, site).apply_matrix(f)?;
            worst = worst.max((img - f * Complex64::new(sign, 0.0)).camax());
        }
    }
    Ok(worst)
}
