//! Braid words and their compilation to defect paths.
//!
//! Routes are shortest paths found by breadth-first search in the universal
//! cover of the torus, so winding is tracked exactly and ties are broken by
//! a fixed neighbour order. The alternative routing used for flatness
//! probes searches with the opposite neighbour order, keeps a leg only when
//! it is homotopic to the default one relative to every other defect, and
//! decorates it with corner-cutting face moves, edge excursions and small
//! loops inside faces.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{required_separation, DefectConfig, DefectId};
use super::interp::check_face_entry;
use super::lattice::{Axis, Dir, Layer, Site, TorusLattice};
use super::transport::{ConfigPath, PathSegment, SegmentMove};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum BraidGenerator {
    /// `mover` travels once around `target` and returns.
    FullBraid { mover: DefectId, target: DefectId },
    /// Two defects of one layer exchange positions.
    HalfBraid { a: DefectId, b: DefectId },
    /// A defect winds once around the torus.
    TorusLoop { defect: DefectId, axis: Axis },
    /// A defect walks the boundary of a `radius × radius` square.
    ContractibleLoop { defect: DefectId, radius: usize },
}

impl BraidGenerator {
    pub fn defects(&self) -> Vec<DefectId> {
        match *self {
            BraidGenerator::FullBraid { mover, target } => vec![mover, target],
            BraidGenerator::HalfBraid { a, b } => vec![a, b],
            BraidGenerator::TorusLoop { defect, .. } | BraidGenerator::ContractibleLoop { defect, .. } => {
                vec![defect]
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Routing {
    /// Edge slides along default shortest routes.
    Primary,
    /// A distinct but homotopic routing, decorated pseudo-randomly.
    Alternative { seed: u64 },
}

type Pt = (i64, i64);

const PRIMARY_ORDER: [Dir; 4] = [Dir::PlusX, Dir::PlusY, Dir::MinusX, Dir::MinusY];
const ALTERNATIVE_ORDER: [Dir; 4] = [Dir::MinusY, Dir::MinusX, Dir::PlusY, Dir::PlusX];

/// Winding number of a closed lattice loop around a point off the loop,
/// by counting signed crossings of the ray to `+x`.
pub fn winding_number(lp: &[Pt], q: (f64, f64)) -> i64 {
    let mut w = 0;
    for pair in lp.windows(2) {
        let ((x0, y0), (x1, y1)) = (pair[0], pair[1]);
        if x0 != x1 || (x0 as f64) <= q.0 {
            continue;
        }
        let (lo, hi) = (y0.min(y1) as f64, y0.max(y1) as f64);
        if lo <= q.1 && q.1 < hi {
            w += if y1 > y0 { 1 } else { -1 };
        }
    }
    w
}

/// Where a defect sits in the coordinates of `mover_layer`'s sites: dual
/// sites are shifted by half a cell relative to primal ones.
fn point_in(mover_layer: Layer, layer: Layer, s: Site) -> (f64, f64) {
    let (x, y) = (s.x as f64, s.y as f64);
    match (mover_layer, layer) {
        (Layer::Primal, Layer::Dual) => (x + 0.5, y + 0.5),
        (Layer::Dual, Layer::Primal) => (x - 0.5, y - 0.5),
        _ => (x, y),
    }
}

struct Compiler<'a> {
    lat: &'a TorusLattice,
    s: usize,
    cfg: DefectConfig,
    routing: Routing,
    rng: ChaCha8Rng,
    segments: Vec<PathSegment>,
}

impl Compiler<'_> {
    fn l(&self) -> i64 {
        self.lat.l() as i64
    }

    fn site_of(&self, p: Pt) -> Site {
        self.lat.site(p.0, p.1)
    }

    fn allowed(&self, id: DefectId, site: Site) -> bool {
        self.cfg.ids().into_iter().filter(|&o| o != id).all(|o| {
            let pos = self.cfg.position(o).expect("id from config");
            self.lat.layer_distance(id.layer, site, o.layer, pos) >= required_separation(id.layer, o.layer, self.s)
        })
    }

    /// Shortest route in the universal cover from `from` to any of
    /// `targets`, exploring neighbours in `order`.
    fn bfs(&self, id: DefectId, from: Pt, targets: &[Pt], order: [Dir; 4]) -> Result<Vec<Dir>> {
        if targets.contains(&from) {
            return Ok(Vec::new());
        }
        let radius = 3 * self.l() + 2;
        let goal: HashSet<Pt> = targets.iter().copied().collect();
        let mut parent: HashMap<Pt, (Pt, Dir)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = HashSet::from([from]);
        while let Some(p) = queue.pop_front() {
            for d in order {
                let (dx, dy) = d.delta();
                let q = (p.0 + dx, p.1 + dy);
                if (q.0 - from.0).abs() > radius || (q.1 - from.1).abs() > radius || seen.contains(&q) {
                    continue;
                }
                seen.insert(q);
                if !self.allowed(id, self.site_of(q)) {
                    continue;
                }
                parent.insert(q, (p, d));
                if goal.contains(&q) {
                    let mut dirs = Vec::new();
                    let mut cur = q;
                    while cur != from {
                        let (prev, d) = parent[&cur];
                        dirs.push(d);
                        cur = prev;
                    }
                    dirs.reverse();
                    return Ok(dirs);
                }
                queue.push_back(q);
            }
        }
        Err(Error::Routing(format!(
            "no separated route for {id} from {from:?} to {targets:?}"
        )))
    }

    fn trace(from: Pt, dirs: &[Dir]) -> Vec<Pt> {
        let mut pts = vec![from];
        let mut cur = from;
        for d in dirs {
            let (dx, dy) = d.delta();
            cur = (cur.0 + dx, cur.1 + dy);
            pts.push(cur);
        }
        pts
    }

    /// Whether two routes with equal endpoints wind identically around every
    /// other defect.
    fn homotopic(&self, id: DefectId, from: Pt, a: &[Dir], b: &[Dir]) -> bool {
        let mut lp = Self::trace(from, a);
        let mut back = Self::trace(from, b);
        if lp.last() != back.last() {
            return false;
        }
        back.reverse();
        lp.extend(back.into_iter().skip(1));
        let l = self.l();
        let span = 4;
        self.cfg.ids().into_iter().filter(|&o| o != id).all(|o| {
            let base = point_in(id.layer, o.layer, self.cfg.position(o).expect("id from config"));
            let mut total = 0;
            for kx in -span..=span {
                for ky in -span..=span {
                    total += winding_number(&lp, (base.0 + (kx * l) as f64, base.1 + (ky * l) as f64));
                }
            }
            total == 0
        })
    }

    /// Routes `id` from `from` to one of `targets` and emits the moves.
    /// Returns the point reached.
    fn leg(&mut self, id: DefectId, from: Pt, targets: &[Pt]) -> Result<Pt> {
        let primary = self.bfs(id, from, targets, PRIMARY_ORDER)?;
        let dirs = match self.routing {
            Routing::Primary => primary,
            Routing::Alternative { .. } => match self.bfs(id, from, targets, ALTERNATIVE_ORDER) {
                Ok(alt) if self.homotopic(id, from, &primary, &alt) => alt,
                _ => primary,
            },
        };
        self.walk(id, from, &dirs)
    }

    fn walk(&mut self, id: DefectId, from: Pt, dirs: &[Dir]) -> Result<Pt> {
        let mut cur = from;
        let mut i = 0;
        while i < dirs.len() {
            let consumed = match self.routing {
                Routing::Primary => {
                    self.emit_slide(id, cur, dirs[i]);
                    1
                }
                Routing::Alternative { .. } => self.emit_decorated(id, cur, &dirs[i..]),
            };
            for d in &dirs[i..i + consumed] {
                let (dx, dy) = d.delta();
                cur = (cur.0 + dx, cur.1 + dy);
            }
            self.cfg = self.cfg.moved(id, self.site_of(cur));
            i += consumed;
        }
        Ok(cur)
    }

    fn push(&mut self, id: DefectId, kind: SegmentMove) {
        self.segments.push(PathSegment { defect: id, kind });
    }

    fn emit_slide(&mut self, id: DefectId, at: Pt, d: Dir) {
        let (edge, forward) = self.lat.edge_from(id.layer, self.site_of(at), d);
        let (t_from, t_to) = if forward { (0.0, 1.0) } else { (1.0, 0.0) };
        self.push(id, SegmentMove::EdgeSlide { edge, t_from, t_to });
    }

    /// The square with lower-left `ll` (unwrapped) and the local
    /// coordinates of `p` in it.
    fn local(&self, layer: Layer, ll: Pt, p: Pt) -> (super::lattice::Square, (f64, f64)) {
        (
            self.lat.square(layer, ll.0, ll.1),
            ((p.0 - ll.0) as f64, (p.1 - ll.1) as f64),
        )
    }

    fn face_ok(&self, id: DefectId, sq: super::lattice::Square) -> bool {
        check_face_entry(self.lat, &self.cfg, sq, id, self.s).is_ok()
    }

    fn face_path(&mut self, id: DefectId, sq: super::lattice::Square, pts: &[(f64, f64)]) {
        for w in pts.windows(2) {
            self.push(
                id,
                SegmentMove::FaceMove {
                    square: sq,
                    from: w[0],
                    to: w[1],
                },
            );
        }
    }

    /// Emits a decorated version of the next one or two steps and returns
    /// how many steps it covered.
    fn emit_decorated(&mut self, id: DefectId, at: Pt, rest: &[Dir]) -> usize {
        let layer = id.layer;
        let site = self.site_of(at);

        // A small loop inside one of the squares touching this vertex.
        if self.rng.random_bool(0.2) {
            let k = self.rng.random_range(0..4i64);
            let ll = (at.0 - (k & 1), at.1 - (k >> 1));
            let (sq, c) = self.local(layer, ll, at);
            if self.face_ok(id, sq) {
                let (ix, iy) = (1.0 - 2.0 * c.0, 1.0 - 2.0 * c.1);
                let p1 = (c.0 + 0.4 * ix, c.1 + 0.2 * iy);
                let p2 = (c.0 + 0.2 * ix, c.1 + 0.4 * iy);
                self.face_path(id, sq, &[c, p1, p2, c]);
            }
        }

        // Cut the corner between two perpendicular steps.
        if rest.len() >= 2 && rest[0].axis() != rest[1].axis() && self.rng.random_bool(0.5) {
            let (a, b) = (rest[0].delta(), rest[1].delta());
            let end = (at.0 + a.0 + b.0, at.1 + a.1 + b.1);
            let ll = (at.0.min(end.0), at.1.min(end.1));
            let (sq, from) = self.local(layer, ll, at);
            if self.face_ok(id, sq) {
                let (_, to) = self.local(layer, ll, end);
                let mid = (
                    0.5 * (from.0 + to.0) + 0.15 * (to.1 - from.1),
                    0.5 * (from.1 + to.1) - 0.15 * (to.0 - from.0),
                );
                self.face_path(id, sq, &[from, mid, to]);
                return 2;
            }
        }

        let d = rest[0];
        let (edge, forward) = self.lat.edge_from(layer, site, d);
        let (t0, t1) = if forward { (0.0, 1.0) } else { (1.0, 0.0) };
        match self.rng.random_range(0..3) {
            0 => self.push(id, SegmentMove::DiscreteHop { edge }),
            1 => {
                let mid = t0 + 0.37 * (t1 - t0);
                self.push(id, SegmentMove::EdgeSlide { edge, t_from: t0, t_to: mid });
                self.push(id, SegmentMove::EdgeSlide { edge, t_from: mid, t_to: t1 });
            }
            _ => {
                // Out along a neighbouring edge and back before hopping.
                let side = if d.axis() == Axis::X { Dir::PlusY } else { Dir::PlusX };
                let (e2, f2) = self.lat.edge_from(layer, site, side);
                let (s0, s1) = if f2 { (0.0, 0.5) } else { (1.0, 0.5) };
                let (dx, dy) = side.delta();
                if self.allowed(id, self.lat.step(site, side)) && self.allowed(id, self.site_of((at.0 + dx, at.1 + dy))) {
                    self.push(id, SegmentMove::EdgeSlide { edge: e2, t_from: s0, t_to: s1 });
                    self.push(id, SegmentMove::EdgeSlide { edge: e2, t_from: s1, t_to: s0 });
                }
                self.push(id, SegmentMove::DiscreteHop { edge });
            }
        }
        1
    }

    fn start(&self, id: DefectId) -> Result<Pt> {
        let s = self.cfg.position(id)?;
        Ok((s.x as i64, s.y as i64))
    }

    /// The lift of `q` nearest to `p`.
    fn nearest_lift(&self, p: Pt, q: (f64, f64)) -> (f64, f64) {
        let l = self.l() as f64;
        let mut best = q;
        let mut best_d = f64::INFINITY;
        for kx in -2..=2 {
            for ky in -2..=2 {
                let c = (q.0 + kx as f64 * l, q.1 + ky as f64 * l);
                let d = (c.0 - p.0 as f64).abs() + (c.1 - p.1 as f64).abs();
                if d < best_d - 1e-9 {
                    best = c;
                    best_d = d;
                }
            }
        }
        best
    }

    /// Counter-clockwise boundary of the square `[ll, ll + side]²`,
    /// starting at `ll`.
    fn perimeter(ll: Pt, side: i64) -> Vec<Pt> {
        let mut v = Vec::with_capacity(4 * side as usize);
        for k in 0..side {
            v.push((ll.0 + k, ll.1));
        }
        for k in 0..side {
            v.push((ll.0 + side, ll.1 + k));
        }
        for k in 0..side {
            v.push((ll.0 + side - k, ll.1 + side));
        }
        for k in 0..side {
            v.push((ll.0, ll.1 + side - k));
        }
        v
    }

    fn full_braid(&mut self, mover: DefectId, target: DefectId) -> Result<()> {
        if mover == target {
            return Err(Error::InvalidArgument(format!("{mover} cannot braid around itself")));
        }
        let m = self.start(mover)?;
        let q = point_in(mover.layer, target.layer, self.cfg.position(target)?);
        let q = self.nearest_lift(m, q);
        let r = required_separation(mover.layer, target.layer, self.s) as i64;
        let (ll, side) = if mover.layer == target.layer {
            let c = (q.0.round() as i64, q.1.round() as i64);
            ((c.0 - r, c.1 - r), 2 * r)
        } else {
            ((q.0.floor() as i64 - r, q.1.floor() as i64 - r), 2 * r + 1)
        };
        let ring = Self::perimeter(ll, side);
        let approach = self.bfs(mover, m, &ring, PRIMARY_ORDER)?;
        let approach = match self.routing {
            Routing::Primary => approach,
            Routing::Alternative { .. } => {
                let end = *Self::trace(m, &approach).last().expect("nonempty");
                match self.bfs(mover, m, &[end], ALTERNATIVE_ORDER) {
                    Ok(alt) if self.homotopic(mover, m, &approach, &alt) => alt,
                    _ => approach,
                }
            }
        };
        let entry = self.walk(mover, m, &approach)?;
        let k = ring.iter().position(|&p| p == entry).expect("route ends on the ring");
        let mut cur = entry;
        for j in 1..=ring.len() {
            cur = self.leg(mover, cur, &[ring[(k + j) % ring.len()]])?;
        }
        let back: Vec<Dir> = approach.iter().rev().map(|d| opposite(*d)).collect();
        self.walk(mover, cur, &back)?;
        Ok(())
    }

    fn half_braid(&mut self, a: DefectId, b: DefectId) -> Result<()> {
        if a.layer != b.layer || a == b {
            return Err(Error::InvalidArgument(format!(
                "half braid needs two distinct defects of one layer, got {a} and {b}"
            )));
        }
        let p = self.start(a)?;
        let q = self.start(b)?;
        let aside = PRIMARY_ORDER
            .into_iter()
            .map(|d| {
                let (dx, dy) = d.delta();
                (q.0 + dx, q.1 + dy)
            })
            .find(|&r| self.allowed(b, self.site_of(r)))
            .ok_or_else(|| Error::Routing(format!("{b} cannot step aside")))?;
        let r = self.leg(b, q, &[aside])?;
        let qa = self.nearest_lift(p, (q.0 as f64, q.1 as f64));
        self.leg(a, p, &[(qa.0 as i64, qa.1 as i64)])?;
        let pb = self.nearest_lift(r, (p.0 as f64, p.1 as f64));
        self.leg(b, r, &[(pb.0 as i64, pb.1 as i64)])?;
        Ok(())
    }

    fn torus_loop(&mut self, id: DefectId, axis: Axis) -> Result<()> {
        let m = self.start(id)?;
        let step = match axis {
            Axis::X => (1, 0),
            Axis::Y => (0, 1),
        };
        let mut cur = m;
        for k in 1..=self.l() {
            cur = self.leg(id, cur, &[(m.0 + k * step.0, m.1 + k * step.1)])?;
        }
        Ok(())
    }

    fn contractible_loop(&mut self, id: DefectId, radius: usize) -> Result<()> {
        if radius == 0 {
            return Err(Error::InvalidArgument("loop radius must be positive".into()));
        }
        let m = self.start(id)?;
        let ring = Self::perimeter(m, radius as i64);
        let mut cur = m;
        for j in 1..=ring.len() {
            cur = self.leg(id, cur, &[ring[j % ring.len()]])?;
        }
        Ok(())
    }
}

fn opposite(d: Dir) -> Dir {
    match d {
        Dir::PlusX => Dir::MinusX,
        Dir::MinusX => Dir::PlusX,
        Dir::PlusY => Dir::MinusY,
        Dir::MinusY => Dir::PlusY,
    }
}

/// Compiles a braid word into a defect path starting at `cfg`.
pub fn compile_braid(
    lat: &TorusLattice,
    cfg: &DefectConfig,
    word: &[BraidGenerator],
    s: usize,
    routing: Routing,
) -> Result<ConfigPath> {
    let seed = match routing {
        Routing::Primary => 0,
        Routing::Alternative { seed } => seed,
    };
    let mut c = Compiler {
        lat,
        s,
        cfg: cfg.clone(),
        routing,
        rng: ChaCha8Rng::seed_from_u64(seed),
        segments: Vec::new(),
    };
    for g in word {
        for id in g.defects() {
            c.cfg.position(id)?;
        }
        match *g {
            BraidGenerator::FullBraid { mover, target } => c.full_braid(mover, target)?,
            BraidGenerator::HalfBraid { a, b } => c.half_braid(a, b)?,
            BraidGenerator::TorusLoop { defect, axis } => c.torus_loop(defect, axis)?,
            BraidGenerator::ContractibleLoop { defect, radius } => c.contractible_loop(defect, radius)?,
        }
    }
    Ok(ConfigPath {
        start: cfg.clone(),
        segments: c.segments,
    })
}

/// The unwrapped positions a defect visits along a path of edge slides and
/// hops (face moves are skipped), starting from its site in `path.start`.
pub fn vertex_trace(lat: &TorusLattice, path: &ConfigPath, id: DefectId) -> Result<Vec<Pt>> {
    let s = path.start.position(id)?;
    let mut cur = (s.x as i64, s.y as i64);
    let mut out = vec![cur];
    for seg in path.segments.iter().filter(|g| g.defect == id) {
        let (edge, done) = match seg.kind {
            SegmentMove::DiscreteHop { edge } => (edge, true),
            SegmentMove::EdgeSlide { edge, t_to, .. } => (edge, t_to == 0.0 || t_to == 1.0),
            SegmentMove::FaceMove { .. } => continue,
        };
        if !done {
            continue;
        }
        let here = lat.site(cur.0, cur.1);
        let (dx, dy) = match edge.axis {
            Axis::X => (1, 0),
            Axis::Y => (0, 1),
        };
        if here == lat.edge_start(edge) && here != lat.edge_end(edge) {
            cur = (cur.0 + dx, cur.1 + dy);
        } else {
            cur = (cur.0 - dx, cur.1 - dy);
        }
        out.push(cur);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l3() -> TorusLattice {
        TorusLattice::new(3).unwrap()
    }

    #[test]
    fn empty_word_gives_empty_path() {
        let lat = l3();
        let cfg = DefectConfig::from_coords(&lat, &[(0, 0), (1, 1)], &[]).unwrap();
        let p = compile_braid(&lat, &cfg, &[], 0, Routing::Primary).unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn torus_loop_has_length_l() {
        let lat = l3();
        let cfg = DefectConfig::from_coords(&lat, &[(0, 0), (1, 1)], &[]).unwrap();
        let g = BraidGenerator::TorusLoop {
            defect: DefectId::primal(0),
            axis: Axis::X,
        };
        let p = compile_braid(&lat, &cfg, &[g], 0, Routing::Primary).unwrap();
        assert_eq!(p.len(), 3);
        let tr = vertex_trace(&lat, &p, DefectId::primal(0)).unwrap();
        assert_eq!(tr.first(), Some(&(0, 0)));
        assert_eq!(tr.last(), Some(&(3, 0)));
    }

    #[test]
    fn full_braid_encloses_exactly_its_target() {
        let lat = l3();
        let cfg = DefectConfig::from_coords(&lat, &[(0, 0), (2, 0)], &[(1, 1), (2, 2)]).unwrap();
        let g = BraidGenerator::FullBraid {
            mover: DefectId::primal(0),
            target: DefectId::dual(0),
        };
        let p = compile_braid(&lat, &cfg, &[g], 0, Routing::Primary).unwrap();
        let tr = vertex_trace(&lat, &p, DefectId::primal(0)).unwrap();
        assert_eq!(tr.first(), tr.last());
        let count = |q: (f64, f64)| -> i64 {
            let mut w = 0;
            for kx in -3..=3 {
                for ky in -3..=3 {
                    w += winding_number(&tr, (q.0 + 3.0 * kx as f64, q.1 + 3.0 * ky as f64));
                }
            }
            w
        };
        assert_eq!(count((1.5, 1.5)).abs(), 1);
        assert_eq!(count((2.5, 2.5)), 0);
    }

    #[test]
    fn winding_of_a_unit_square() {
        let sq = [(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)];
        assert_eq!(winding_number(&sq, (0.5, 0.5)), 1);
        assert_eq!(winding_number(&sq, (1.5, 0.5)), 0);
        let rev: Vec<Pt> = sq.iter().rev().copied().collect();
        assert_eq!(winding_number(&rev, (0.5, 0.5)), -1);
    }

    #[test]
    fn routing_is_deterministic_and_blocked_routes_fail() {
        let lat = l3();
        let cfg = DefectConfig::from_coords(&lat, &[(0, 0), (1, 1)], &[(0, 1), (2, 2)]).unwrap();
        let w = [BraidGenerator::ContractibleLoop {
            defect: DefectId::dual(0),
            radius: 1,
        }];
        let a = compile_braid(&lat, &cfg, &w, 0, Routing::Alternative { seed: 5 }).unwrap();
        let b = compile_braid(&lat, &cfg, &w, 0, Routing::Alternative { seed: 5 }).unwrap();
        assert_eq!(a, b);
        // At separation 2 every primal site neighbours the other primal defect.
        let g = BraidGenerator::TorusLoop {
            defect: DefectId::primal(0),
            axis: Axis::Y,
        };
        assert!(matches!(
            compile_braid(&lat, &cfg, &[g], 2, Routing::Primary),
            Err(Error::Routing(_))
        ));
    }
}
