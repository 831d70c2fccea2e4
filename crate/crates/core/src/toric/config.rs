//! Defect configurations and the hard-core separation test.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::lattice::{Layer, LayerEdge, Site, Square, TorusLattice};
use crate::error::{Error, Result};

/// A defect named by its layer and its position in that layer's list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DefectId {
    pub layer: Layer,
    pub index: usize,
}

impl DefectId {
    pub fn primal(index: usize) -> Self {
        Self {
            layer: Layer::Primal,
            index,
        }
    }

    pub fn dual(index: usize) -> Self {
        Self {
            layer: Layer::Dual,
            index,
        }
    }
}

impl fmt::Display for DefectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.layer.prefix(), self.index)
    }
}

impl FromStr for DefectId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("defect id {s:?}, expected p<i> or d<i>"));
        let (layer, rest) = match s.chars().next() {
            Some('p') => (Layer::Primal, &s[1..]),
            Some('d') => (Layer::Dual, &s[1..]),
            _ => return Err(bad()),
        };
        let index = rest.parse().map_err(|_| bad())?;
        Ok(Self { layer, index })
    }
}

impl Serialize for DefectId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DefectId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Defects sitting on lattice sites: primal on vertices, dual on faces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DefectConfig {
    pub primal: Vec<Site>,
    pub dual: Vec<Site>,
}

impl DefectConfig {
    pub fn empty() -> Self {
        Self {
            primal: Vec::new(),
            dual: Vec::new(),
        }
    }

    /// Validates ranges, distinctness within a layer, and even counts.
    pub fn new(lat: &TorusLattice, primal: Vec<Site>, dual: Vec<Site>) -> Result<Self> {
        for (layer, sites) in [(Layer::Primal, &primal), (Layer::Dual, &dual)] {
            if sites.len() % 2 != 0 {
                return Err(Error::Parity(format!(
                    "{} {layer:?} defects; counts must be even",
                    sites.len()
                )));
            }
            for (i, s) in sites.iter().enumerate() {
                if s.x >= lat.l() || s.y >= lat.l() {
                    return Err(Error::Config(format!("site {s:?} outside L={}", lat.l())));
                }
                if sites[..i].contains(s) {
                    return Err(Error::Config(format!("two {layer:?} defects on {s:?}")));
                }
            }
        }
        Ok(Self { primal, dual })
    }

    pub fn from_coords(lat: &TorusLattice, primal: &[(usize, usize)], dual: &[(usize, usize)]) -> Result<Self> {
        let conv = |v: &[(usize, usize)]| v.iter().map(|&(x, y)| Site::new(x, y)).collect();
        Self::new(lat, conv(primal), conv(dual))
    }

    pub fn layer(&self, layer: Layer) -> &[Site] {
        match layer {
            Layer::Primal => &self.primal,
            Layer::Dual => &self.dual,
        }
    }

    fn layer_mut(&mut self, layer: Layer) -> &mut Vec<Site> {
        match layer {
            Layer::Primal => &mut self.primal,
            Layer::Dual => &mut self.dual,
        }
    }

    pub fn position(&self, id: DefectId) -> Result<Site> {
        self.layer(id.layer)
            .get(id.index)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("no defect {id}")))
    }

    pub fn ids(&self) -> Vec<DefectId> {
        (0..self.primal.len())
            .map(DefectId::primal)
            .chain((0..self.dual.len()).map(DefectId::dual))
            .collect()
    }

    /// A copy with one defect relocated (no validation).
    pub fn moved(&self, id: DefectId, to: Site) -> Self {
        let mut c = self.clone();
        c.layer_mut(id.layer)[id.index] = to;
        c
    }

    /// The defect of `layer` at `s`, if any.
    pub fn occupant(&self, layer: Layer, s: Site) -> Option<DefectId> {
        self.layer(layer)
            .iter()
            .position(|&t| t == s)
            .map(|index| DefectId { layer, index })
    }

    /// Equal as sets of occupied sites per layer.
    pub fn same_sites(&self, other: &DefectConfig) -> bool {
        let norm = |v: &[Site]| {
            let mut v = v.to_vec();
            v.sort();
            v
        };
        norm(&self.primal) == norm(&other.primal) && norm(&self.dual) == norm(&other.dual)
    }

    pub fn continuous(&self) -> ContinuousDefectConfig {
        ContinuousDefectConfig {
            primal: self.primal.iter().map(|&s| Placement::Vertex(s)).collect(),
            dual: self.dual.iter().map(|&s| Placement::Vertex(s)).collect(),
        }
    }
}

/// Where a defect sits along a continuous path, within its own layer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    Vertex(Site),
    /// At parameter `t` from the edge's start.
    Edge { edge: LayerEdge, t: f64 },
    /// At local coordinates `(x, y)` of the square.
    Face { square: Square, x: f64, y: f64 },
}

impl Placement {
    /// Sites the defect is adjacent to: itself, both endpoints of an edge,
    /// or all four corners of a square.
    pub fn adjacency(&self, lat: &TorusLattice) -> Vec<Site> {
        match *self {
            Placement::Vertex(s) => vec![s],
            Placement::Edge { edge, .. } => vec![lat.edge_start(edge), lat.edge_end(edge)],
            Placement::Face { square, .. } => {
                let (x, y) = (square.x as i64, square.y as i64);
                vec![
                    lat.site(x, y),
                    lat.site(x + 1, y),
                    lat.site(x, y + 1),
                    lat.site(x + 1, y + 1),
                ]
            }
        }
    }

    pub fn vertex(&self) -> Option<Site> {
        match *self {
            Placement::Vertex(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuousDefectConfig {
    pub primal: Vec<Placement>,
    pub dual: Vec<Placement>,
}

impl ContinuousDefectConfig {
    pub fn layer(&self, layer: Layer) -> &[Placement] {
        match layer {
            Layer::Primal => &self.primal,
            Layer::Dual => &self.dual,
        }
    }

    pub fn layer_mut(&mut self, layer: Layer) -> &mut Vec<Placement> {
        match layer {
            Layer::Primal => &mut self.primal,
            Layer::Dual => &mut self.dual,
        }
    }

    pub fn get(&self, id: DefectId) -> Placement {
        self.layer(id.layer)[id.index]
    }

    pub fn set(&mut self, id: DefectId, p: Placement) {
        self.layer_mut(id.layer)[id.index] = p;
    }

    pub fn ids(&self) -> Vec<DefectId> {
        (0..self.primal.len())
            .map(DefectId::primal)
            .chain((0..self.dual.len()).map(DefectId::dual))
            .collect()
    }

    /// The vertex configuration, if every defect sits on a site.
    pub fn discrete(&self) -> Option<DefectConfig> {
        let conv = |v: &[Placement]| v.iter().map(|p| p.vertex()).collect::<Option<Vec<_>>>();
        Some(DefectConfig {
            primal: conv(&self.primal)?,
            dual: conv(&self.dual)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardcoreReport {
    pub ok: bool,
    /// Smallest pairwise distance seen, `None` with fewer than two defects.
    pub min_distance: Option<usize>,
    /// First offending pair in id order, with its distance.
    pub violation: Option<(DefectId, DefectId, usize)>,
}

/// Distance between the adjacency sets of two placed defects.
pub fn placement_distance(
    lat: &TorusLattice,
    la: Layer,
    a: &Placement,
    lb: Layer,
    b: &Placement,
) -> usize {
    let (sa, sb) = (a.adjacency(lat), b.adjacency(lat));
    sa.iter()
        .flat_map(|&p| sb.iter().map(move |&q| (p, q)))
        .map(|(p, q)| lat.layer_distance(la, p, lb, q))
        .min()
        .expect("nonempty adjacency sets")
}

/// Separation required between two defects. Defects of the same layer must
/// never share an adjacent site, whatever `s` is.
pub fn required_separation(la: Layer, lb: Layer, s: usize) -> usize {
    if la == lb {
        s.max(1)
    } else {
        s
    }
}

/// Pairwise hard-core test: every pair's adjacency sets must lie at least
/// `s` apart with torus wraparound.
pub fn hardcore_check_continuous(lat: &TorusLattice, cfg: &ContinuousDefectConfig, s: usize) -> HardcoreReport {
    let ids = cfg.ids();
    let mut min_distance = None;
    let mut violation = None;
    for (i, &a) in ids.iter().enumerate() {
        for &b in &ids[i + 1..] {
            let d = placement_distance(lat, a.layer, &cfg.get(a), b.layer, &cfg.get(b));
            min_distance = Some(min_distance.map_or(d, |m: usize| m.min(d)));
            if violation.is_none() && d < required_separation(a.layer, b.layer, s) {
                violation = Some((a, b, d));
            }
        }
    }
    HardcoreReport {
        ok: violation.is_none(),
        min_distance,
        violation,
    }
}

pub fn hardcore_check(lat: &TorusLattice, cfg: &DefectConfig, s: usize) -> HardcoreReport {
    hardcore_check_continuous(lat, &cfg.continuous(), s)
}

/// Converts a failed report into an error.
pub fn require_hardcore(lat: &TorusLattice, cfg: &ContinuousDefectConfig, s: usize, context: &str) -> Result<()> {
    let r = hardcore_check_continuous(lat, cfg, s);
    match r.violation {
        None => Ok(()),
        Some((a, b, d)) => Err(Error::HardCore(format!(
            "{context}: {a} and {b} at distance {d}, need {}",
            required_separation(a.layer, b.layer, s)
        ))),
    }
}
