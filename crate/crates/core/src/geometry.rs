//! Compiled, index-based view of a subdivision rule.
//!
//! The rule file speaks in identifier tokens; everything downstream works on
//! dense integer indices. `Geometry` also carries the derived data that the
//! rest of the crate leans on: cell locations (which 0-cell carries each
//! 1-cell), the curve order of on-curve edges, and the per-tile pull-back
//! tables realizing the inverse branches on cells.

use std::collections::BTreeMap;

use crate::error::RuleError;
use crate::rule::SubdivisionRule;

/// Color of a tile, i.e. the 0-tile it maps onto.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }
    pub fn letter(self) -> &'static str {
        match self {
            Color::White => "white",
            Color::Black => "black",
        }
    }
}

/// A 0-cell: one of the two 0-tiles, a 0-edge, or a 0-vertex (postcritical point).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Zero {
    Tile(Color),
    Edge(u32),
    Vert(u32),
}

/// A cell of the level-1 decomposition.
///
/// The variant order gives tiles the smallest rank; canonical ("smallest id")
/// choices below always compare `Cell1` values lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Cell1 {
    Tile(u32),
    Edge(u32),
    Vert(u32),
}

impl Cell1 {
    pub fn dim(self) -> u8 {
        match self {
            Cell1::Tile(_) => 2,
            Cell1::Edge(_) => 1,
            Cell1::Vert(_) => 0,
        }
    }
}

/// Compiled rule: integer indices plus derived incidence and curve data.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub rule: SubdivisionRule,
    pub m: usize,
    pub deg: usize,

    // tiles
    pub tile_color: Vec<Color>,
    /// Which 0-tile the closed 1-tile lies in.
    pub tile_container: Vec<Color>,
    /// Oriented boundary: (edge index, traversed in intrinsic direction?).
    pub tile_boundary: Vec<Vec<(u32, bool)>>,
    /// Boundary vertices in cyclic order (entry vertex of each boundary edge).
    pub tile_verts: Vec<Vec<u32>>,

    // edges
    pub edge_image: Vec<u32>,
    pub edge_ends: Vec<(u32, u32)>,
    pub edge_on_curve: Vec<bool>,
    /// Orientation flag of `f` on an on-curve edge relative to the curve order.
    pub edge_flag: Vec<bool>,
    /// The two incident tiles, sorted by index.
    pub edge_tiles: Vec<(u32, u32)>,
    /// Does the curve traverse the edge in its intrinsic direction?
    pub edge_cdir: Vec<bool>,

    // vertices
    pub vert_image: Vec<u32>,
    pub vert_on_curve: Vec<bool>,
    /// Postcritical index when the 1-vertex is itself a 0-vertex.
    pub vert_post: Vec<Option<u32>>,
    pub vert_tiles: Vec<Vec<u32>>,
    pub vert_edges: Vec<Vec<u32>>,
    pub vert_declared_count: Vec<Option<u32>>,

    // curve data
    /// On-curve edges in curve order (white 0-tile on the left).
    pub curve_cycle: Vec<u32>,
    pub curve_pos: BTreeMap<u32, usize>,
    /// Post endpoints of each 0-edge, (entry, exit) in curve order.
    pub zero_edge_ends: Vec<(u32, u32)>,
    /// On-curve 1-edges composing each 0-edge, in curve order.
    pub zero_edge_subs: Vec<Vec<u32>>,
    /// `f` restricted to the postcritical set.
    pub post_map: Vec<u32>,
    /// The 1-vertex realizing each postcritical point.
    pub post_vert: Vec<u32>,

    // carrier graph
    cells_by_container: BTreeMap<Zero, Vec<Cell1>>,
    /// Per tile: 0-cell of the image closure -> cell of the tile over it.
    tile_pullback: Vec<BTreeMap<Zero, Cell1>>,
}

impl Geometry {
    pub fn n_tiles(&self) -> usize {
        self.tile_color.len()
    }
    pub fn n_edges(&self) -> usize {
        self.edge_image.len()
    }
    pub fn n_verts(&self) -> usize {
        self.vert_image.len()
    }

    /// Image of a 1-cell under the map, as a 0-cell.
    pub fn f0(&self, c: Cell1) -> Zero {
        match c {
            Cell1::Tile(t) => Zero::Tile(self.tile_color[t as usize]),
            Cell1::Edge(e) => Zero::Edge(self.edge_image[e as usize]),
            Cell1::Vert(v) => Zero::Vert(self.vert_image[v as usize]),
        }
    }

    /// The 0-cell whose interior contains the interior of the given 1-cell.
    pub fn container0(&self, c: Cell1) -> Zero {
        match c {
            Cell1::Tile(t) => Zero::Tile(self.tile_container[t as usize]),
            Cell1::Edge(e) => {
                if self.edge_on_curve[e as usize] {
                    Zero::Edge(self.curve_edge_zero(e))
                } else {
                    Zero::Tile(self.tile_container[self.edge_tiles[e as usize].0 as usize])
                }
            }
            Cell1::Vert(v) => {
                if let Some(p) = self.vert_post[v as usize] {
                    Zero::Vert(p)
                } else if self.vert_on_curve[v as usize] {
                    let e = self.vert_edges[v as usize]
                        .iter()
                        .copied()
                        .find(|&e| self.edge_on_curve[e as usize])
                        .expect("on-curve vertex has an on-curve edge");
                    Zero::Edge(self.curve_edge_zero(e))
                } else {
                    let t = self.vert_tiles[v as usize][0];
                    Zero::Tile(self.tile_container[t as usize])
                }
            }
        }
    }

    /// 0-edge containing an on-curve 1-edge.
    pub fn curve_edge_zero(&self, e: u32) -> u32 {
        for (j, subs) in self.zero_edge_subs.iter().enumerate() {
            if subs.contains(&e) {
                return j as u32;
            }
        }
        unreachable!("on-curve edge not in any 0-edge")
    }

    /// Carrier-graph successors: cells whose container is the image 0-cell.
    pub fn carrier_succs(&self, c: Cell1) -> &[Cell1] {
        static EMPTY: [Cell1; 0] = [];
        self.cells_by_container
            .get(&self.f0(c))
            .map(|v| v.as_slice())
            .unwrap_or(&EMPTY)
    }

    pub fn carrier_adm(&self, c: Cell1, d: Cell1) -> bool {
        self.f0(c) == self.container0(d)
    }

    /// All 1-cells contained in the closed cell `c` (including `c` itself).
    pub fn sub_cells(&self, c: Cell1) -> Vec<Cell1> {
        match c {
            Cell1::Tile(t) => {
                let mut out = vec![Cell1::Tile(t)];
                for &(e, _) in &self.tile_boundary[t as usize] {
                    out.push(Cell1::Edge(e));
                }
                for &v in &self.tile_verts[t as usize] {
                    out.push(Cell1::Vert(v));
                }
                out
            }
            Cell1::Edge(e) => {
                let (a, b) = self.edge_ends[e as usize];
                if a == b {
                    vec![Cell1::Edge(e), Cell1::Vert(a)]
                } else {
                    vec![Cell1::Edge(e), Cell1::Vert(a), Cell1::Vert(b)]
                }
            }
            Cell1::Vert(v) => vec![Cell1::Vert(v)],
        }
    }

    /// Is `small` a cell of the closed cell `big`?
    pub fn cell_contains(&self, big: Cell1, small: Cell1) -> bool {
        if big == small {
            return true;
        }
        match (big, small) {
            (Cell1::Tile(t), Cell1::Edge(e)) => {
                self.tile_boundary[t as usize].iter().any(|&(x, _)| x == e)
            }
            (Cell1::Tile(t), Cell1::Vert(v)) => self.tile_verts[t as usize].contains(&v),
            (Cell1::Edge(e), Cell1::Vert(v)) => {
                let (a, b) = self.edge_ends[e as usize];
                a == v || b == v
            }
            _ => false,
        }
    }

    /// Tiles containing the given cell, sorted by index.
    pub fn tiles_containing(&self, c: Cell1) -> Vec<u32> {
        match c {
            Cell1::Tile(t) => vec![t],
            Cell1::Edge(e) => {
                let (a, b) = self.edge_tiles[e as usize];
                vec![a, b]
            }
            Cell1::Vert(v) => self.vert_tiles[v as usize].clone(),
        }
    }

    /// The incident tile of an on-curve edge lying in the given 0-tile.
    pub fn edge_side(&self, e: u32, side: Color) -> u32 {
        let (a, b) = self.edge_tiles[e as usize];
        if self.tile_container[a as usize] == side {
            a
        } else {
            debug_assert_eq!(self.tile_container[b as usize], side);
            b
        }
    }

    /// Local degree of the map at a 1-vertex.
    pub fn vert_deg(&self, v: u32) -> u32 {
        (self.vert_tiles[v as usize].len() / 2) as u32
    }

    /// Local degree of the map at any 1-cell (1 except possibly at vertices).
    pub fn cell_local_deg(&self, c: Cell1) -> u32 {
        match c {
            Cell1::Vert(v) => self.vert_deg(v),
            _ => 1,
        }
    }

    /// Unique cell of the tile `t` mapping onto the 0-cell `target`.
    ///
    /// `target` must be a cell of the closed image 0-tile of `t`.
    pub fn pull_back(&self, t: u32, target: Zero) -> Option<Cell1> {
        self.tile_pullback[t as usize].get(&target).copied()
    }

    /// On-curve edges, sorted by index.
    pub fn curve_edges(&self) -> Vec<u32> {
        let mut v: Vec<u32> = (0..self.n_edges() as u32)
            .filter(|&e| self.edge_on_curve[e as usize])
            .collect();
        v.sort_unstable();
        v
    }

    /// Entry and exit vertex of an on-curve edge along the curve order.
    pub fn curve_ends(&self, e: u32) -> (u32, u32) {
        let (a, b) = self.edge_ends[e as usize];
        if self.edge_cdir[e as usize] {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Successor of an on-curve edge along the curve.
    pub fn curve_next(&self, e: u32) -> u32 {
        let pos = self.curve_pos[&e];
        self.curve_cycle[(pos + 1) % self.curve_cycle.len()]
    }

    /// Predecessor of an on-curve edge along the curve.
    pub fn curve_prev(&self, e: u32) -> u32 {
        let pos = self.curve_pos[&e];
        let n = self.curve_cycle.len();
        self.curve_cycle[(pos + n - 1) % n]
    }

    /// Compile a parsed rule into the indexed geometry.
    ///
    /// Fails with a named check when the combinatorics cannot support the
    /// derived structures at all; softer inconsistencies are left to
    /// `validate`.
    pub fn compile(rule: SubdivisionRule) -> Result<Geometry, RuleError> {
        let m = rule.post.len();
        if m < 3 {
            return Err(RuleError::Structure(format!(
                "post-count: need at least 3 postcritical points, got {m}"
            )));
        }
        let nt = rule.one_tiles.len();
        let ne = rule.one_edges.len();
        let nv = rule.one_vertices.len();

        let tile_color: Vec<Color> = rule.one_tiles.iter().map(|t| t.color).collect();
        let edge_image: Vec<u32> = rule.one_edges.iter().map(|e| e.image).collect();
        let edge_ends: Vec<(u32, u32)> = rule.one_edges.iter().map(|e| e.ends).collect();
        let edge_on_curve: Vec<bool> = rule.one_edges.iter().map(|e| e.on_curve).collect();
        let edge_flag: Vec<bool> = rule.one_edges.iter().map(|e| e.flag).collect();
        let vert_image: Vec<u32> = rule.one_vertices.iter().map(|v| v.image).collect();
        let vert_on_curve: Vec<bool> = rule.one_vertices.iter().map(|v| v.on_curve).collect();
        let vert_declared_count: Vec<Option<u32>> =
            rule.one_vertices.iter().map(|v| v.incident_tiles).collect();
        let tile_boundary: Vec<Vec<(u32, bool)>> =
            rule.one_tiles.iter().map(|t| t.boundary.clone()).collect();

        // Incident tiles per edge; every edge must sit in exactly two boundary
        // entries with opposite orientations.
        let mut edge_uses: Vec<Vec<(u32, bool)>> = vec![Vec::new(); ne];
        for (ti, b) in tile_boundary.iter().enumerate() {
            for &(e, dir) in b {
                edge_uses[e as usize].push((ti as u32, dir));
            }
        }
        let mut edge_tiles = Vec::with_capacity(ne);
        for (ei, uses) in edge_uses.iter().enumerate() {
            if uses.len() != 2 || uses[0].1 == uses[1].1 {
                return Err(RuleError::Structure(format!(
                    "edge-two-sided: 1-edge #{ei} appears in tile boundaries {:?}",
                    uses
                )));
            }
            let mut pair = [uses[0].0, uses[1].0];
            pair.sort_unstable();
            edge_tiles.push((pair[0], pair[1]));
        }

        // Boundary vertices: entry vertex of each oriented boundary edge. The
        // boundary must be a closed walk.
        let mut tile_verts = Vec::with_capacity(nt);
        for (ti, b) in tile_boundary.iter().enumerate() {
            let mut verts = Vec::with_capacity(b.len());
            for (j, &(e, dir)) in b.iter().enumerate() {
                let (a, bb) = edge_ends[e as usize];
                let (from, to) = if dir { (a, bb) } else { (bb, a) };
                let (ne2, nd) = b[(j + 1) % b.len()];
                let (na, nb) = edge_ends[ne2 as usize];
                let nfrom = if nd { na } else { nb };
                if to != nfrom {
                    return Err(RuleError::Structure(format!(
                        "boundary-walk-closed: tile #{ti} boundary breaks after edge #{e}"
                    )));
                }
                verts.push(from);
            }
            tile_verts.push(verts);
        }

        // Vertex incidences.
        let mut vert_tiles: Vec<Vec<u32>> = vec![Vec::new(); nv];
        for (ti, verts) in tile_verts.iter().enumerate() {
            for &v in verts {
                vert_tiles[v as usize].push(ti as u32);
            }
        }
        for v in &mut vert_tiles {
            v.sort_unstable();
            v.dedup();
        }
        let mut vert_edges: Vec<Vec<u32>> = vec![Vec::new(); nv];
        for (ei, &(a, b)) in edge_ends.iter().enumerate() {
            vert_edges[a as usize].push(ei as u32);
            if b != a {
                vert_edges[b as usize].push(ei as u32);
            }
        }
        for v in &mut vert_edges {
            v.sort_unstable();
            v.dedup();
        }

        // Curve cycle: resolve traversal directions by chaining endpoints.
        let cyc = &rule.curve_cycle;
        if cyc.is_empty() {
            return Err(RuleError::Structure(
                "curve-closed: empty curve cycle".into(),
            ));
        }
        let mut edge_cdir = vec![true; ne];
        {
            // Direction of the first edge: the one that lets the whole cycle
            // close up. Try forward; on failure try backward.
            let try_orient = |first_dir: bool| -> Option<Vec<bool>> {
                let mut dirs = Vec::with_capacity(cyc.len());
                let e0 = cyc[0] as usize;
                let mut exit = if first_dir {
                    edge_ends[e0].1
                } else {
                    edge_ends[e0].0
                };
                dirs.push(first_dir);
                for &e in &cyc[1..] {
                    let (a, b) = edge_ends[e as usize];
                    if a == exit {
                        dirs.push(true);
                        exit = b;
                    } else if b == exit {
                        dirs.push(false);
                        exit = a;
                    } else {
                        return None;
                    }
                }
                let (a0, b0) = edge_ends[e0];
                let entry0 = if first_dir { a0 } else { b0 };
                if exit == entry0 {
                    Some(dirs)
                } else {
                    None
                }
            };
            let dirs = try_orient(true).or_else(|| try_orient(false)).ok_or_else(|| {
                RuleError::Structure("curve-closed: curve cycle does not close up".into())
            })?;
            for (i, &e) in cyc.iter().enumerate() {
                if !edge_on_curve[e as usize] {
                    return Err(RuleError::Structure(format!(
                        "curve-closed: edge #{e} in curve cycle is not flagged on-curve"
                    )));
                }
                edge_cdir[e as usize] = dirs[i];
            }
        }
        let curve_cycle: Vec<u32> = cyc.clone();
        let mut curve_pos = BTreeMap::new();
        for (i, &e) in curve_cycle.iter().enumerate() {
            if curve_pos.insert(e, i).is_some() {
                return Err(RuleError::Structure(format!(
                    "curve-closed: edge #{e} repeats in the curve cycle"
                )));
            }
        }

        // Identify post-point vertices: a 1-vertex realizes post point p when
        // it lies on the curve at a position where 0-edges meet. Post points
        // are matched by identifier: the vertex with the same id token as the
        // post name.
        let mut vert_post: Vec<Option<u32>> = vec![None; nv];
        let mut post_vert = vec![u32::MAX; m];
        for (pi, pname) in rule.post.iter().enumerate() {
            match rule.one_vertices.iter().position(|v| &v.id == pname) {
                Some(vi) => {
                    vert_post[vi] = Some(pi as u32);
                    post_vert[pi] = vi as u32;
                }
                None => {
                    return Err(RuleError::Structure(format!(
                        "post-vertices: post point `{pname}` has no matching 1-vertex record"
                    )))
                }
            }
        }

        // Split the curve cycle into 0-edge arcs at post vertices.
        let n_cyc = curve_cycle.len();
        let entry_vert = |geom_dirs: &Vec<bool>, e: u32| -> u32 {
            let (a, b) = edge_ends[e as usize];
            if geom_dirs[e as usize] {
                a
            } else {
                b
            }
        };
        let starts: Vec<usize> = (0..n_cyc)
            .filter(|&i| vert_post[entry_vert(&edge_cdir, curve_cycle[i]) as usize].is_some())
            .collect();
        if starts.len() != m {
            return Err(RuleError::Structure(format!(
                "curve-closed: curve passes through {} post points, expected {m}",
                starts.len()
            )));
        }
        let mut zero_edge_subs: Vec<Vec<u32>> = vec![Vec::new(); m];
        let mut zero_edge_ends: Vec<(u32, u32)> = vec![(0, 0); m];
        for k in 0..m {
            let s = starts[k];
            let t = starts[(k + 1) % m];
            let p_from = vert_post[entry_vert(&edge_cdir, curve_cycle[s]) as usize].unwrap();
            let p_to = vert_post[entry_vert(&edge_cdir, curve_cycle[t]) as usize].unwrap();
            let mut arc = Vec::new();
            let mut i = s;
            loop {
                arc.push(curve_cycle[i]);
                i = (i + 1) % n_cyc;
                if i == t {
                    break;
                }
            }
            // Which declared 0-edge is this arc? Match endpoints in order.
            let ze = rule
                .zero_edges
                .iter()
                .position(|z| z.ends == (p_from, p_to))
                .ok_or_else(|| {
                    RuleError::Structure(format!(
                        "curve-closed: no declared 0-edge from post {} to post {}",
                        rule.post[p_from as usize], rule.post[p_to as usize]
                    ))
                })?;
            if !zero_edge_subs[ze].is_empty() {
                return Err(RuleError::Structure(format!(
                    "curve-closed: 0-edge #{ze} traversed twice"
                )));
            }
            zero_edge_subs[ze] = arc;
            zero_edge_ends[ze] = (p_from, p_to);
        }

        // Tile locations: seed from on-curve edges (white 0-tile on the left,
        // i.e. the white-side tile traverses the edge in curve direction),
        // propagate across interior edges.
        let mut tile_container: Vec<Option<Color>> = vec![None; nt];
        let mut queue = std::collections::VecDeque::new();
        for (ei, uses) in edge_uses.iter().enumerate() {
            if !edge_on_curve[ei] {
                continue;
            }
            for &(ti, dir) in uses {
                let side = if dir == edge_cdir[ei] {
                    Color::White
                } else {
                    Color::Black
                };
                match tile_container[ti as usize] {
                    None => {
                        tile_container[ti as usize] = Some(side);
                        queue.push_back(ti);
                    }
                    Some(c) if c != side => {
                        return Err(RuleError::Structure(format!(
                            "locations-consistent: tile #{ti} pinned to both 0-tiles"
                        )))
                    }
                    _ => {}
                }
            }
        }
        while let Some(ti) = queue.pop_front() {
            let loc = tile_container[ti as usize].unwrap();
            for &(e, _) in &tile_boundary[ti as usize] {
                if edge_on_curve[e as usize] {
                    continue;
                }
                let (a, b) = edge_tiles[e as usize];
                let other = if a == ti { b } else { a };
                match tile_container[other as usize] {
                    None => {
                        tile_container[other as usize] = Some(loc);
                        queue.push_back(other);
                    }
                    Some(c) if c != loc => {
                        return Err(RuleError::Structure(format!(
                            "locations-consistent: interior edge #{e} separates 0-tiles"
                        )))
                    }
                    _ => {}
                }
            }
        }
        let tile_container: Vec<Color> = tile_container
            .into_iter()
            .enumerate()
            .map(|(ti, c)| {
                c.ok_or_else(|| {
                    RuleError::Structure(format!(
                        "locations-consistent: tile #{ti} unreachable from the curve"
                    ))
                })
            })
            .collect::<Result<_, _>>()?;

        let deg = tile_color.iter().filter(|&&c| c == Color::White).count();

        // Post map: f restricted to the 0-vertices.
        let post_map: Vec<u32> = post_vert
            .iter()
            .map(|&v| vert_image[v as usize])
            .collect();

        // Pull-back tables.
        let mut tile_pullback = Vec::with_capacity(nt);
        for ti in 0..nt {
            let mut map: BTreeMap<Zero, Cell1> = BTreeMap::new();
            map.insert(Zero::Tile(tile_color[ti]), Cell1::Tile(ti as u32));
            for &(e, _) in &tile_boundary[ti] {
                let z = Zero::Edge(edge_image[e as usize]);
                if map.insert(z, Cell1::Edge(e)).is_some() {
                    return Err(RuleError::Structure(format!(
                        "preimage-tiling: tile #{ti} has two boundary edges over the same 0-edge"
                    )));
                }
            }
            for &v in &tile_verts[ti] {
                let z = Zero::Vert(vert_image[v as usize]);
                if map.insert(z, Cell1::Vert(v)).is_some() {
                    return Err(RuleError::Structure(format!(
                        "preimage-tiling: tile #{ti} has two vertices over the same 0-vertex"
                    )));
                }
            }
            tile_pullback.push(map);
        }

        let mut g = Geometry {
            rule,
            m,
            deg,
            tile_color,
            tile_container,
            tile_boundary,
            tile_verts,
            edge_image,
            edge_ends,
            edge_on_curve,
            edge_flag,
            edge_tiles,
            edge_cdir,
            vert_image,
            vert_on_curve,
            vert_post,
            vert_tiles,
            vert_edges,
            vert_declared_count,
            curve_cycle,
            curve_pos,
            zero_edge_ends,
            zero_edge_subs,
            post_map,
            post_vert,
            cells_by_container: BTreeMap::new(),
            tile_pullback,
        };

        // Group cells by container for the carrier graph.
        let mut by: BTreeMap<Zero, Vec<Cell1>> = BTreeMap::new();
        for t in 0..g.n_tiles() as u32 {
            by.entry(g.container0(Cell1::Tile(t)))
                .or_default()
                .push(Cell1::Tile(t));
        }
        for e in 0..g.n_edges() as u32 {
            by.entry(g.container0(Cell1::Edge(e)))
                .or_default()
                .push(Cell1::Edge(e));
        }
        for v in 0..g.n_verts() as u32 {
            by.entry(g.container0(Cell1::Vert(v)))
                .or_default()
                .push(Cell1::Vert(v));
        }
        for list in by.values_mut() {
            list.sort_unstable();
        }
        g.cells_by_container = by;
        Ok(g)
    }
}
