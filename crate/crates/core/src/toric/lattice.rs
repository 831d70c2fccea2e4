//! The periodic `L × L` lattice, its dual, and the edge/square vocabulary
//! shared by both layers.
//!
//! Vertices and faces are both indexed by `(x, y)`: face `(x, y)` has
//! lower-left corner vertex `(x, y)`. Qubits sit on edges, `H(x,y) = 2(yL+x)`
//! from `(x,y)` to `(x+1,y)` and `V(x,y) = 2(yL+x)+1` from `(x,y)` to `(x,y+1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli_linalg::pauli::MAX_QUBITS;
use crate::pauli_linalg::{Pauli1, PauliString};

/// Primal defects live on vertices and move under `Z` strings; dual defects
/// live on faces and move under `X` strings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    Primal,
    Dual,
}

impl Layer {
    pub fn other(self) -> Layer {
        match self {
            Layer::Primal => Layer::Dual,
            Layer::Dual => Layer::Primal,
        }
    }

    /// The Pauli a string in this layer applies to each crossed qubit.
    pub fn string_pauli(self) -> Pauli1 {
        match self {
            Layer::Primal => Pauli1::Z,
            Layer::Dual => Pauli1::X,
        }
    }

    pub fn prefix(self) -> char {
        match self {
            Layer::Primal => 'p',
            Layer::Dual => 'd',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

/// A unit step. The listed order is the default routing preference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dir {
    PlusX,
    PlusY,
    MinusX,
    MinusY,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::PlusX, Dir::PlusY, Dir::MinusX, Dir::MinusY];

    pub fn delta(self) -> (i64, i64) {
        match self {
            Dir::PlusX => (1, 0),
            Dir::PlusY => (0, 1),
            Dir::MinusX => (-1, 0),
            Dir::MinusY => (0, -1),
        }
    }

    pub fn from_delta(dx: i64, dy: i64) -> Option<Dir> {
        match (dx, dy) {
            (1, 0) => Some(Dir::PlusX),
            (0, 1) => Some(Dir::PlusY),
            (-1, 0) => Some(Dir::MinusX),
            (0, -1) => Some(Dir::MinusY),
            _ => None,
        }
    }

    pub fn axis(self) -> Axis {
        match self {
            Dir::PlusX | Dir::MinusX => Axis::X,
            Dir::PlusY | Dir::MinusY => Axis::Y,
        }
    }
}

/// A vertex (primal) or face (dual), reduced modulo `L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub x: usize,
    pub y: usize,
}

impl Site {
    pub fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }
}

/// An edge of one layer, oriented `+x` or `+y` from site `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LayerEdge {
    pub layer: Layer,
    pub x: usize,
    pub y: usize,
    pub axis: Axis,
}

/// A unit square of one layer with lower-left site `(x, y)`. Corners are
/// named `C = (0,0)`, `D = (1,0)`, `A = (0,1)`, `B = (1,1)` in local
/// coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Square {
    pub layer: Layer,
    pub x: usize,
    pub y: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Corner {
    A,
    B,
    C,
    D,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::C, Corner::D, Corner::A, Corner::B];

    /// Local `(x, y)` coordinates.
    pub fn coords(self) -> (f64, f64) {
        match self {
            Corner::C => (0.0, 0.0),
            Corner::D => (1.0, 0.0),
            Corner::A => (0.0, 1.0),
            Corner::B => (1.0, 1.0),
        }
    }

    pub fn offset(self) -> (usize, usize) {
        match self {
            Corner::C => (0, 0),
            Corner::D => (1, 0),
            Corner::A => (0, 1),
            Corner::B => (1, 1),
        }
    }
}

/// The four oriented sides of a square.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SquareEdges {
    /// `C → A`, left side.
    pub ca: LayerEdge,
    /// `C → D`, bottom.
    pub cd: LayerEdge,
    /// `A → B`, top.
    pub ab: LayerEdge,
    /// `D → B`, right side.
    pub db: LayerEdge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusLattice {
    l: usize,
}

impl TorusLattice {
    pub fn new(l: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidArgument(format!("lattice period {l} < 2")));
        }
        if 2 * l * l > MAX_QUBITS {
            return Err(Error::Unsupported(format!(
                "lattice period {l} needs {} qubits",
                2 * l * l
            )));
        }
        Ok(Self { l })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// `2L²`.
    pub fn n_qubits(&self) -> usize {
        2 * self.l * self.l
    }

    pub fn n_sites(&self) -> usize {
        self.l * self.l
    }

    pub fn wrap(&self, v: i64) -> usize {
        v.rem_euclid(self.l as i64) as usize
    }

    pub fn site(&self, x: i64, y: i64) -> Site {
        Site::new(self.wrap(x), self.wrap(y))
    }

    pub fn step(&self, s: Site, d: Dir) -> Site {
        let (dx, dy) = d.delta();
        self.site(s.x as i64 + dx, s.y as i64 + dy)
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.l).flat_map(move |y| (0..self.l).map(move |x| Site::new(x, y)))
    }

    pub fn h_qubit(&self, x: i64, y: i64) -> usize {
        let s = self.site(x, y);
        2 * (s.y * self.l + s.x)
    }

    pub fn v_qubit(&self, x: i64, y: i64) -> usize {
        self.h_qubit(x, y) + 1
    }

    pub fn edge(&self, layer: Layer, x: i64, y: i64, axis: Axis) -> LayerEdge {
        let s = self.site(x, y);
        LayerEdge {
            layer,
            x: s.x,
            y: s.y,
            axis,
        }
    }

    /// The qubit an edge carries (primal) or crosses (dual).
    pub fn edge_qubit(&self, e: LayerEdge) -> usize {
        let (x, y) = (e.x as i64, e.y as i64);
        match (e.layer, e.axis) {
            (Layer::Primal, Axis::X) => self.h_qubit(x, y),
            (Layer::Primal, Axis::Y) => self.v_qubit(x, y),
            // Dual +x from face (x,y) crosses the right side of that face.
            (Layer::Dual, Axis::X) => self.v_qubit(x + 1, y),
            // Dual +y from face (x,y) crosses its top side.
            (Layer::Dual, Axis::Y) => self.h_qubit(x, y + 1),
        }
    }

    /// The single-qubit string operator of an edge.
    pub fn edge_pauli(&self, e: LayerEdge) -> PauliString {
        PauliString::single(self.n_qubits(), self.edge_qubit(e), e.layer.string_pauli())
            .expect("edge qubit in range")
    }

    pub fn edge_start(&self, e: LayerEdge) -> Site {
        Site::new(e.x, e.y)
    }

    pub fn edge_end(&self, e: LayerEdge) -> Site {
        match e.axis {
            Axis::X => self.site(e.x as i64 + 1, e.y as i64),
            Axis::Y => self.site(e.x as i64, e.y as i64 + 1),
        }
    }

    /// The edge traversed by stepping from `s` in direction `d`, and whether
    /// the step follows the edge's orientation.
    pub fn edge_from(&self, layer: Layer, s: Site, d: Dir) -> (LayerEdge, bool) {
        let (x, y) = (s.x as i64, s.y as i64);
        match d {
            Dir::PlusX => (self.edge(layer, x, y, Axis::X), true),
            Dir::PlusY => (self.edge(layer, x, y, Axis::Y), true),
            Dir::MinusX => (self.edge(layer, x - 1, y, Axis::X), false),
            Dir::MinusY => (self.edge(layer, x, y - 1, Axis::Y), false),
        }
    }

    /// Qubits of the vertex operator `A_v` (four `X`s).
    pub fn star_mask(&self, v: Site) -> u64 {
        let (x, y) = (v.x as i64, v.y as i64);
        [
            self.h_qubit(x, y),
            self.h_qubit(x - 1, y),
            self.v_qubit(x, y),
            self.v_qubit(x, y - 1),
        ]
        .iter()
        .fold(0u64, |m, &q| m | 1 << q)
    }

    /// Qubits of the face operator `B_f` (four `Z`s).
    pub fn plaquette_mask(&self, f: Site) -> u64 {
        let (x, y) = (f.x as i64, f.y as i64);
        [
            self.h_qubit(x, y),
            self.h_qubit(x, y + 1),
            self.v_qubit(x, y),
            self.v_qubit(x + 1, y),
        ]
        .iter()
        .fold(0u64, |m, &q| m | 1 << q)
    }

    /// The stabilizer whose sign a defect of `layer` at `s` flips.
    pub fn stabilizer(&self, layer: Layer, s: Site) -> PauliString {
        let n = self.n_qubits();
        match layer {
            Layer::Primal => PauliString::new(n, self.star_mask(s), 0, Default::default()),
            Layer::Dual => PauliString::new(n, 0, self.plaquette_mask(s), Default::default()),
        }
        .expect("masks within qubit count")
    }

    pub fn square(&self, layer: Layer, x: i64, y: i64) -> Square {
        let s = self.site(x, y);
        Square {
            layer,
            x: s.x,
            y: s.y,
        }
    }

    pub fn corner_site(&self, sq: Square, c: Corner) -> Site {
        let (dx, dy) = c.offset();
        self.site((sq.x + dx) as i64, (sq.y + dy) as i64)
    }

    pub fn square_edges(&self, sq: Square) -> SquareEdges {
        let (x, y) = (sq.x as i64, sq.y as i64);
        SquareEdges {
            ca: self.edge(sq.layer, x, y, Axis::Y),
            cd: self.edge(sq.layer, x, y, Axis::X),
            ab: self.edge(sq.layer, x, y + 1, Axis::X),
            db: self.edge(sq.layer, x + 1, y, Axis::Y),
        }
    }

    /// The opposite-layer site at the centre of a square: a primal square is
    /// face `(x, y)`; a dual square is centred on vertex `(x+1, y+1)`.
    pub fn square_center(&self, sq: Square) -> Site {
        match sq.layer {
            Layer::Primal => Site::new(sq.x, sq.y),
            Layer::Dual => self.site(sq.x as i64 + 1, sq.y as i64 + 1),
        }
    }

    /// Torus L1 distance between two sites of the same grid.
    pub fn site_distance(&self, a: Site, b: Site) -> usize {
        let l = self.l;
        let d = |p: usize, q: usize| {
            let r = p.abs_diff(q) % l;
            r.min(l - r)
        };
        d(a.x, b.x) + d(a.y, b.y)
    }

    /// Distance between sites of possibly different layers. Across layers,
    /// it is measured from the vertex to the nearest corner of the face.
    pub fn layer_distance(&self, la: Layer, a: Site, lb: Layer, b: Site) -> usize {
        match (la, lb) {
            (Layer::Primal, Layer::Dual) => self.vertex_face_distance(a, b),
            (Layer::Dual, Layer::Primal) => self.vertex_face_distance(b, a),
            _ => self.site_distance(a, b),
        }
    }

    pub fn face_corners(&self, f: Site) -> [Site; 4] {
        let (x, y) = (f.x as i64, f.y as i64);
        [
            self.site(x, y),
            self.site(x + 1, y),
            self.site(x, y + 1),
            self.site(x + 1, y + 1),
        ]
    }

    fn vertex_face_distance(&self, v: Site, f: Site) -> usize {
        self.face_corners(f)
            .iter()
            .map(|&c| self.site_distance(v, c))
            .min()
            .expect("four corners")
    }
}
