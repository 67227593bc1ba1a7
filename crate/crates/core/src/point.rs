//! Points as canonical carrier itineraries, periodic-point enumeration with
//! local degrees, coding multiplicities, and the per-point counting identity.
//!
//! Every point of the sphere has exactly one itinerary through the interiors
//! of level-1 cells, and the level-n cell carrying the point is spelled by
//! the first n letters. Itineraries make point identity, location class, and
//! all incidence questions exact: two points are equal iff their normalized
//! itineraries agree, and a periodic point's class is the dimension of its
//! (constant-dimension) cycle letters.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::CodingError;
use crate::geometry::{Cell1, Color, Geometry, Zero};
use crate::words::{count_closed_paths, least_rotation, minimal_period, tile_step};

/// Location trichotomy of a periodic point.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum PointClass {
    /// Interior of an n-tile (off every skeleton).
    TileInterior,
    /// Interior of an on-curve n-edge.
    CurveEdge,
    /// A postcritical point.
    Postcritical,
}

impl PointClass {
    pub fn name(self) -> &'static str {
        match self {
            PointClass::TileInterior => "tile-interior",
            PointClass::CurveEdge => "edge-interior-on-curve",
            PointClass::Postcritical => "postcritical",
        }
    }
}

/// A point with eventually periodic carrier itinerary `pre . cyc^infinity`,
/// kept in normalized form (primitive cycle, minimal preperiod).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ResolvedPoint {
    pub pre: Vec<Cell1>,
    pub cyc: Vec<Cell1>,
}

impl ResolvedPoint {
    pub fn new(pre: Vec<Cell1>, cyc: Vec<Cell1>) -> ResolvedPoint {
        let mut p = ResolvedPoint { pre, cyc };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        let p = minimal_period(&self.cyc);
        self.cyc.truncate(p);
        while let Some(&last) = self.pre.last() {
            if last == self.cyc[p - 1] {
                self.pre.pop();
                self.cyc.rotate_right(1);
            } else {
                break;
            }
        }
    }

    pub fn carrier(&self, j: usize) -> Cell1 {
        if j < self.pre.len() {
            self.pre[j]
        } else {
            self.cyc[(j - self.pre.len()) % self.cyc.len()]
        }
    }

    pub fn is_periodic(&self) -> bool {
        self.pre.is_empty()
    }

    pub fn period(&self) -> usize {
        self.cyc.len()
    }

    /// Image under the map: shift the itinerary.
    pub fn image(&self) -> ResolvedPoint {
        if self.pre.is_empty() {
            let mut cyc = self.cyc.clone();
            cyc.rotate_left(1);
            ResolvedPoint::new(Vec::new(), cyc)
        } else {
            ResolvedPoint::new(self.pre[1..].to_vec(), self.cyc.clone())
        }
    }

    /// Location class of a periodic point.
    pub fn class(&self) -> Option<PointClass> {
        if !self.is_periodic() {
            return None;
        }
        Some(match self.cyc[0] {
            Cell1::Tile(_) => PointClass::TileInterior,
            Cell1::Edge(_) => PointClass::CurveEdge,
            Cell1::Vert(_) => PointClass::Postcritical,
        })
    }

    /// Local degree of f^n along the cycle (periodic points only).
    pub fn local_degree(&self, g: &Geometry, n: usize) -> u64 {
        assert!(self.is_periodic() && n % self.cyc.len() == 0);
        let per: u64 = self
            .cyc
            .iter()
            .map(|&c| g.cell_local_deg(c) as u64)
            .product();
        per.pow((n / self.cyc.len()) as u32)
    }
}

/// Unique cell of the closed cell `big` mapping onto the 0-cell `target`.
pub fn pull_back_in(g: &Geometry, big: Cell1, target: Zero) -> Option<Cell1> {
    match big {
        Cell1::Tile(t) => g.pull_back(t, target),
        Cell1::Edge(e) => match target {
            Zero::Edge(z) if g.edge_image[e as usize] == z => Some(Cell1::Edge(e)),
            Zero::Vert(p) => {
                let (a, b) = g.edge_ends[e as usize];
                let hits: Vec<u32> = [a, b]
                    .into_iter()
                    .filter(|&v| g.vert_image[v as usize] == p)
                    .collect();
                match hits.as_slice() {
                    [v] => Some(Cell1::Vert(*v)),
                    [v, w] if v == w => Some(Cell1::Vert(*v)),
                    _ => None,
                }
            }
            _ => None,
        },
        Cell1::Vert(v) => match target {
            Zero::Vert(p) if g.vert_image[v as usize] == p => Some(Cell1::Vert(v)),
            _ => None,
        },
    }
}

/// Resolve the point coded by the purely periodic tile word w (w.w admissible).
///
/// The canonical itinerary is the unique minimal-dimension closed carrier
/// word componentwise contained in the coding.
pub fn resolve_periodic_tile_word(g: &Geometry, w: &[u32]) -> Result<ResolvedPoint, CodingError> {
    let n = w.len();
    for j in 0..n {
        if !tile_step(g, w[j], w[(j + 1) % n]) {
            return Err(CodingError::Inadmissible { pos: j });
        }
    }
    if let Some(cyc) = closed_vertex_subword(g, &|j| {
        g.tile_verts[w[j % n] as usize].clone()
    }, n) {
        return Ok(ResolvedPoint::new(Vec::new(), cyc));
    }
    if let Some(cyc) = closed_edge_subword(g, &|j| {
        g.tile_boundary[w[j % n] as usize]
            .iter()
            .map(|&(e, _)| e)
            .filter(|&e| g.edge_on_curve[e as usize])
            .collect()
    }, n) {
        return Ok(ResolvedPoint::new(Vec::new(), cyc));
    }
    Ok(ResolvedPoint::new(
        Vec::new(),
        w.iter().map(|&t| Cell1::Tile(t)).collect(),
    ))
}

/// Resolve the point coded by the purely periodic on-curve edge word.
pub fn resolve_periodic_edge_word(g: &Geometry, w: &[u32]) -> Result<ResolvedPoint, CodingError> {
    let n = w.len();
    for j in 0..n {
        let a = w[j];
        let b = w[(j + 1) % n];
        if !(g.edge_on_curve[a as usize]
            && g.edge_on_curve[b as usize]
            && g.edge_image[a as usize] == g.curve_edge_zero(b))
        {
            return Err(CodingError::Inadmissible { pos: j });
        }
    }
    if let Some(cyc) = closed_vertex_subword(g, &|j| {
        let (a, b) = g.edge_ends[w[j % n] as usize];
        if a == b {
            vec![a]
        } else {
            vec![a, b]
        }
    }, n) {
        return Ok(ResolvedPoint::new(Vec::new(), cyc));
    }
    Ok(ResolvedPoint::new(
        Vec::new(),
        w.iter().map(|&e| Cell1::Edge(e)).collect(),
    ))
}

/// Closed vertex carrier word with letters drawn from per-position candidate
/// vertex sets. In a closed carrier word every letter is a postcritical
/// vertex and consecutive letters follow the induced map on the 0-vertices,
/// so at most one such word exists; search over starting candidates.
fn closed_vertex_subword(
    g: &Geometry,
    cands: &dyn Fn(usize) -> Vec<u32>,
    n: usize,
) -> Option<Vec<Cell1>> {
    'start: for v0 in cands(0) {
        let Some(p0) = g.vert_post[v0 as usize] else {
            continue;
        };
        let mut word = vec![Cell1::Vert(v0)];
        let mut p = p0;
        for j in 1..=n {
            p = g.post_map[p as usize];
            if j < n {
                let v = g.post_vert[p as usize];
                if !cands(j).contains(&v) {
                    continue 'start;
                }
                word.push(Cell1::Vert(v));
            }
        }
        if p == p0 {
            return Some(word);
        }
    }
    None
}

/// Closed on-curve edge carrier word with per-position candidates; `None`
/// when no such word exists. At most one exists when no closed vertex
/// subword does; the lexicographically least is returned regardless.
fn closed_edge_subword(
    g: &Geometry,
    cands: &dyn Fn(usize) -> Vec<u32>,
    n: usize,
) -> Option<Vec<Cell1>> {
    let step = |a: u32, b: u32| g.edge_image[a as usize] == g.curve_edge_zero(b);
    let per: Vec<Vec<u32>> = (0..n)
        .map(|j| {
            let mut c = cands(j);
            c.sort_unstable();
            c
        })
        .collect();
    for &start in &per[0] {
        let mut can: Vec<Vec<u32>> = vec![Vec::new(); n];
        can[n - 1] = per[n - 1]
            .iter()
            .copied()
            .filter(|&e| step(e, start))
            .collect();
        for j in (0..n - 1).rev() {
            can[j] = per[j]
                .iter()
                .copied()
                .filter(|&e| can[j + 1].iter().any(|&x| step(e, x)))
                .collect();
        }
        if !can[0].contains(&start) {
            continue;
        }
        let mut word = vec![start];
        for j in 1..n {
            let prev = word[j - 1];
            let next = can[j].iter().copied().find(|&e| step(prev, e));
            match next {
                Some(e) => word.push(e),
                None => break,
            }
        }
        if word.len() == n {
            return Some(word.into_iter().map(Cell1::Edge).collect());
        }
    }
    None
}

/// Resolve an eventually periodic coding u.v^infinity in the tile shift.
pub fn resolve_tile_coding(
    g: &Geometry,
    pre: &[u32],
    cyc: &[u32],
) -> Result<ResolvedPoint, CodingError> {
    for j in 0..pre.len() {
        let next = if j + 1 < pre.len() { pre[j + 1] } else { cyc[0] };
        if !tile_step(g, pre[j], next) {
            return Err(CodingError::Inadmissible { pos: j });
        }
    }
    let tail = resolve_periodic_tile_word(g, cyc)?;
    let mut carriers: Vec<Cell1> = Vec::with_capacity(pre.len());
    let mut next_carrier = tail.carrier(0);
    for &t in pre.iter().rev() {
        let target = g.container0(next_carrier);
        let c = pull_back_in(g, Cell1::Tile(t), target).ok_or(CodingError::Inadmissible {
            pos: carriers.len(),
        })?;
        carriers.push(c);
        next_carrier = c;
    }
    carriers.reverse();
    Ok(ResolvedPoint::new(carriers, tail.cyc))
}

/// A fixed point of f^n as a length-n itinerary cycle.
#[derive(Clone, Debug)]
pub struct FixedPoint {
    /// Length-n closed carrier walk (the itinerary cycle, possibly a repeat
    /// of a shorter primitive cycle).
    pub walk: Vec<Cell1>,
    pub class: PointClass,
    /// Local degree of f^n at the point.
    pub degree: u64,
}

impl FixedPoint {
    pub fn point(&self) -> ResolvedPoint {
        ResolvedPoint::new(Vec::new(), self.walk.clone())
    }
}

/// Enumerate all fixed points of f^n, exactly once each, with class and
/// local degree.
pub fn fixed_points(g: &Geometry, n: usize, cap: u64) -> Result<Vec<FixedPoint>, CodingError> {
    let mut out = Vec::new();
    for_each_fixed_point(g, n, cap, |fp| out.push(fp))?;
    Ok(out)
}

/// Streaming enumeration of the fixed points of f^n.
pub fn for_each_fixed_point(
    g: &Geometry,
    n: usize,
    cap: u64,
    mut visit: impl FnMut(FixedPoint),
) -> Result<(), CodingError> {
    assert!(n >= 1);

    // Postcritical fixed points: cycles of the induced map on 0-vertices.
    let mut post_walks: Vec<Vec<Cell1>> = Vec::new();
    for p0 in 0..g.m as u32 {
        let mut p = p0;
        let mut walk = Vec::with_capacity(n);
        for _ in 0..n {
            walk.push(Cell1::Vert(g.post_vert[p as usize]));
            p = g.post_map[p as usize];
        }
        if p == p0 {
            post_walks.push(walk);
        }
    }
    for walk in &post_walks {
        let degree: u64 = walk.iter().map(|&c| g.cell_local_deg(c) as u64).product();
        visit(FixedPoint {
            walk: walk.clone(),
            class: PointClass::Postcritical,
            degree,
        });
    }

    // Closed walks in the edge shift.
    let curve = g.curve_edges();
    let _eidx: BTreeMap<u32, usize> = curve.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let esucc: Vec<Vec<usize>> = curve
        .iter()
        .map(|&a| {
            curve
                .iter()
                .enumerate()
                .filter(|&(_, &b)| g.edge_image[a as usize] == g.curve_edge_zero(b))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let mut edge_walks: Vec<Vec<u32>> = Vec::new();
    for_each_closed_walk(curve.len(), &esucc, n, cap, &mut |idx_walk| {
        edge_walks.push(idx_walk.iter().map(|&i| curve[i]).collect());
    })?;

    // Which edge walks are real itineraries (no closed vertex subword)?
    for walk in &edge_walks {
        let has_vertex = closed_vertex_subword(
            g,
            &|j| {
                let (a, b) = g.edge_ends[walk[j % n] as usize];
                if a == b {
                    vec![a]
                } else {
                    vec![a, b]
                }
            },
            n,
        )
        .is_some();
        if !has_vertex {
            visit(FixedPoint {
                walk: walk.iter().map(|&e| Cell1::Edge(e)).collect(),
                class: PointClass::CurveEdge,
                degree: 1,
            });
        }
    }

    // Tile walks that cover a closed edge or vertex walk are not itineraries.
    let mut excluded: BTreeSet<Vec<u32>> = BTreeSet::new();
    for walk in &edge_walks {
        for c0 in [Color::White, Color::Black] {
            let mut col = c0;
            let mut cover = Vec::with_capacity(n);
            for &e in walk {
                let side = g.edge_side(e, col);
                cover.push(side);
                col = g.tile_color[side as usize];
            }
            if col == c0 {
                excluded.insert(cover);
            }
        }
    }
    for walk in &post_walks {
        // All closed tile walks through the incident tiles of the orbit.
        let cands: Vec<Vec<u32>> = walk
            .iter()
            .map(|&c| g.tiles_containing(c))
            .collect();
        collect_closed_covers(g, &cands, &mut excluded);
    }

    let tsucc: Vec<Vec<usize>> = (0..g.n_tiles())
        .map(|a| {
            (0..g.n_tiles())
                .filter(|&b| tile_step(g, a as u32, b as u32))
                .collect()
        })
        .collect();
    for_each_closed_walk(g.n_tiles(), &tsucc, n, cap, &mut |idx_walk| {
        let walk: Vec<u32> = idx_walk.iter().map(|&i| i as u32).collect();
        if !excluded.contains(&walk) {
            visit(FixedPoint {
                walk: walk.into_iter().map(Cell1::Tile).collect(),
                class: PointClass::TileInterior,
                degree: 1,
            });
        }
    })?;
    Ok(())
}

fn collect_closed_covers(g: &Geometry, cands: &[Vec<u32>], out: &mut BTreeSet<Vec<u32>>) {
    let n = cands.len();
    let mut word: Vec<u32> = Vec::with_capacity(n);
    fn rec(
        g: &Geometry,
        cands: &[Vec<u32>],
        word: &mut Vec<u32>,
        out: &mut BTreeSet<Vec<u32>>,
    ) {
        let j = word.len();
        if j == cands.len() {
            if tile_step(g, word[j - 1], word[0]) {
                out.insert(word.clone());
            }
            return;
        }
        for &t in &cands[j] {
            if j == 0 || tile_step(g, word[j - 1], t) {
                word.push(t);
                rec(g, cands, word, out);
                word.pop();
            }
        }
    }
    rec(g, cands, &mut word, out);
}

/// Enumerate closed walks of the given length in a successor graph, pruning
/// by per-start reachability.
fn for_each_closed_walk(
    n_states: usize,
    succs: &[Vec<usize>],
    len: usize,
    cap: u64,
    visit: &mut dyn FnMut(&[usize]),
) -> Result<(), CodingError> {
    // quick count for the cap
    let mut count: u128 = 0;
    {
        let mut m: Vec<Vec<u128>> = (0..n_states)
            .map(|i| {
                let mut row = vec![0u128; n_states];
                for &j in &succs[i] {
                    row[j] = 1;
                }
                row
            })
            .collect();
        let base = m.clone();
        for _ in 1..len {
            let mut next = vec![vec![0u128; n_states]; n_states];
            for i in 0..n_states {
                for k in 0..n_states {
                    if m[i][k] > 0 {
                        let v = m[i][k];
                        for (j, cell) in next[i].iter_mut().enumerate() {
                            *cell += v * base[k][j];
                        }
                    }
                }
            }
            m = next;
        }
        for i in 0..n_states {
            count += m[i][i];
        }
    }
    if count > cap as u128 {
        return Err(CodingError::Cap(format!(
            "{count} closed walks of length {len}"
        )));
    }

    let mut walk: Vec<usize> = Vec::with_capacity(len);
    for start in 0..n_states {
        // reach[j][a]: path of length j from a back to start
        let mut reach = vec![vec![false; n_states]; len + 1];
        reach[0][start] = true;
        for j in 1..=len {
            for a in 0..n_states {
                reach[j][a] = succs[a].iter().any(|&b| reach[j - 1][b]);
            }
        }
        if !reach[len][start] {
            continue;
        }
        walk.push(start);
        rec_walk(succs, len, start, &reach, &mut walk, visit);
        walk.pop();
    }
    Ok(())
}

fn rec_walk(
    succs: &[Vec<usize>],
    len: usize,
    start: usize,
    reach: &[Vec<bool>],
    walk: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    let j = walk.len();
    if j == len {
        if succs[walk[len - 1]].contains(&start) {
            visit(walk);
        }
        return;
    }
    let prev = walk[j - 1];
    for &b in &succs[prev] {
        // b would sit at position j; it needs len - j more steps to close.
        if reach[len - j][b] {
            walk.push(b);
            rec_walk(succs, len, start, reach, walk, visit);
            walk.pop();
        }
    }
}

/// The four coding multiplicities of a fixed point of f^n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Multiplicities {
    pub tile: u64,
    pub pair: u64,
    pub edge: u64,
    pub post: u64,
}

pub fn multiplicities(g: &Geometry, walk: &[Cell1]) -> Multiplicities {
    let n = walk.len();
    let tile_cands: Vec<Vec<u32>> = (0..n).map(|j| g.tiles_containing(walk[j])).collect();
    let m_tile = count_closed_paths(&tile_cands, |a, b| tile_step(g, a, b));

    let edge_cands: Vec<Vec<u32>> = (0..n)
        .map(|j| match walk[j] {
            Cell1::Tile(_) => Vec::new(),
            Cell1::Edge(e) => {
                if g.edge_on_curve[e as usize] {
                    vec![e]
                } else {
                    Vec::new()
                }
            }
            Cell1::Vert(v) => g.vert_edges[v as usize]
                .iter()
                .copied()
                .filter(|&e| g.edge_on_curve[e as usize])
                .collect(),
        })
        .collect();
    let m_edge = if edge_cands.iter().any(|c| c.is_empty()) {
        0
    } else {
        count_closed_paths(&edge_cands, |a, b| {
            g.edge_image[a as usize] == g.curve_edge_zero(b)
        })
    };

    let pair_cands: Vec<Vec<(u32, Color)>> = edge_cands
        .iter()
        .map(|es| {
            es.iter()
                .flat_map(|&e| [(e, Color::White), (e, Color::Black)])
                .collect()
        })
        .collect();
    let m_pair = if pair_cands.iter().any(|c| c.is_empty()) {
        0
    } else {
        count_closed_paths(&pair_cands, |(e1, c1), (e2, c2)| {
            g.edge_image[e1 as usize] == g.curve_edge_zero(e2)
                && g.tile_color[g.edge_side(e1, c1) as usize] == c2
        })
    };

    let m_post = match walk[0] {
        Cell1::Vert(v) if g.vert_post[v as usize].is_some() => 1,
        _ => 0,
    };

    Multiplicities {
        tile: m_tile,
        pair: m_pair,
        edge: m_edge,
        post: m_post,
    }
}

/// One row of the counting-identity report.
#[derive(Clone, Debug)]
pub struct IdentityRow {
    pub walk: Vec<Cell1>,
    pub class: PointClass,
    pub degree: u64,
    pub mult: Multiplicities,
    pub pass: bool,
}

/// Check, at every fixed point of f^n, that the alternating sum of coding
/// multiplicities equals the local degree.
pub fn verify_counting_identity(
    g: &Geometry,
    n: usize,
    cap: u64,
) -> Result<Vec<IdentityRow>, CodingError> {
    let mut rows = Vec::new();
    for_each_fixed_point(g, n, cap, |fp| {
        let mult = multiplicities(g, &fp.walk);
        let lhs = mult.tile as i64 - mult.pair as i64 + mult.edge as i64 + mult.post as i64;
        rows.push(IdentityRow {
            class: fp.class,
            degree: fp.degree,
            pass: lhs == fp.degree as i64,
            mult,
            walk: fp.walk,
        });
    })?;
    rows.sort_by(|a, b| a.walk.cmp(&b.walk));
    Ok(rows)
}

/// Sum of local degrees over the fixed points of f^n.
pub fn weighted_fixed_point_count(g: &Geometry, n: usize, cap: u64) -> Result<u64, CodingError> {
    let mut sum = 0u64;
    for_each_fixed_point(g, n, cap, |fp| sum += fp.degree)?;
    Ok(sum)
}

/// Canonical cyclic representative of a fixed-point walk (for orbit grouping).
pub fn canonical_rotation(walk: &[Cell1]) -> Vec<Cell1> {
    least_rotation(walk)
}
