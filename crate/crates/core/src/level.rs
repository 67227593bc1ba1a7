//! Explicit level-n cell complexes and combinatorial quantities on them.

use std::collections::BTreeMap;

use crate::error::BuildError;
use crate::geometry::{Cell1, Geometry};
use crate::words::tile_step;

pub const DEFAULT_CELL_CAP: u64 = 2_000_000;

/// The level-n complex, cells identified with admissible carrier words.
#[derive(Clone, Debug)]
pub struct CellLevel {
    pub level: usize,
    /// n-tiles as tile words.
    pub tiles: Vec<Vec<u32>>,
    /// n-edges as carrier words (last letter an edge).
    pub edges: Vec<Vec<Cell1>>,
    /// n-vertices as carrier words (last letter a vertex).
    pub verts: Vec<Vec<Cell1>>,
    pub tile_index: BTreeMap<Vec<u32>, u32>,
    /// Incident tiles of each edge (exactly two).
    pub edge_tiles: Vec<(u32, u32)>,
    /// Incident tiles of each vertex, sorted.
    pub vert_tiles: Vec<Vec<u32>>,
    /// Local degree of f^n at each vertex.
    pub vert_deg: Vec<u64>,
    /// On-curve n-edges (indices into `edges`) in no particular order.
    pub curve_edges: Vec<u32>,
}

fn count_cells(g: &Geometry, n: usize) -> u128 {
    // paths of length n in the carrier graph
    let states: Vec<Cell1> = all_cells(g);
    let mut cnt: BTreeMap<Cell1, u128> = states.iter().map(|&c| (c, 1u128)).collect();
    for _ in 1..n {
        let mut next: BTreeMap<Cell1, u128> = BTreeMap::new();
        for (&c, &k) in &cnt {
            for &d in g.carrier_succs(c) {
                *next.entry(d).or_insert(0) += k;
            }
        }
        // reversed: we want paths forward; equivalent by symmetry of counting
        cnt = next;
    }
    cnt.values().sum()
}

pub fn all_cells(g: &Geometry) -> Vec<Cell1> {
    let mut v: Vec<Cell1> = (0..g.n_tiles() as u32).map(Cell1::Tile).collect();
    v.extend((0..g.n_edges() as u32).map(Cell1::Edge));
    v.extend((0..g.n_verts() as u32).map(Cell1::Vert));
    v
}

/// Build the level-n complex. Level 0 is the base decomposition, represented
/// with empty words plus sentinel cells; callers normally want n >= 1.
pub fn build_level(g: &Geometry, n: usize, cap: u64) -> Result<CellLevel, BuildError> {
    assert!(n >= 1, "level-0 complex is the base decomposition");
    let needed = count_cells(g, n);
    if needed > cap as u128 {
        return Err(BuildError::CapExceeded {
            level: n,
            needed,
            cap,
        });
    }

    let mut tiles: Vec<Vec<u32>> = Vec::new();
    let mut edges: Vec<Vec<Cell1>> = Vec::new();
    let mut verts: Vec<Vec<Cell1>> = Vec::new();

    // DFS over carrier words.
    let mut stack: Vec<Cell1> = Vec::with_capacity(n);
    fn rec(
        g: &Geometry,
        n: usize,
        stack: &mut Vec<Cell1>,
        tiles: &mut Vec<Vec<u32>>,
        edges: &mut Vec<Vec<Cell1>>,
        verts: &mut Vec<Vec<Cell1>>,
    ) {
        if stack.len() == n {
            match stack[n - 1] {
                Cell1::Tile(_) => tiles.push(
                    stack
                        .iter()
                        .map(|&c| match c {
                            Cell1::Tile(t) => t,
                            _ => unreachable!("dims non-increasing"),
                        })
                        .collect(),
                ),
                Cell1::Edge(_) => edges.push(stack.clone()),
                Cell1::Vert(_) => verts.push(stack.clone()),
            }
            return;
        }
        let last = *stack.last().unwrap();
        for &c in g.carrier_succs(last) {
            stack.push(c);
            rec(g, n, stack, tiles, edges, verts);
            stack.pop();
        }
    }
    for c in all_cells(g) {
        stack.push(c);
        rec(g, n, &mut stack, &mut tiles, &mut edges, &mut verts);
        stack.pop();
    }
    tiles.sort_unstable();
    edges.sort_unstable();
    verts.sort_unstable();

    let tile_index: BTreeMap<Vec<u32>, u32> = tiles
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i as u32))
        .collect();

    // Incidence: cover words of each edge / vertex.
    let mut edge_tiles = Vec::with_capacity(edges.len());
    for (ei, ew) in edges.iter().enumerate() {
        let covers = tile_covers(g, ew, &tile_index);
        if covers.len() != 2 {
            return Err(BuildError::Gluing {
                level: n,
                msg: format!("edge word #{ei} has {} incident tiles", covers.len()),
            });
        }
        edge_tiles.push((covers[0], covers[1]));
    }
    let mut vert_tiles = Vec::with_capacity(verts.len());
    let mut vert_deg = Vec::with_capacity(verts.len());
    for vw in &verts {
        let covers = tile_covers(g, vw, &tile_index);
        let d: u64 = vw
            .iter()
            .map(|&c| g.cell_local_deg(c) as u64)
            .product();
        if covers.len() as u64 != 2 * d {
            return Err(BuildError::Gluing {
                level: n,
                msg: format!(
                    "vertex word {:?} has {} incident tiles, local degree {d}",
                    vw,
                    covers.len()
                ),
            });
        }
        vert_tiles.push(covers);
        vert_deg.push(d);
    }

    let curve_edges: Vec<u32> = edges
        .iter()
        .enumerate()
        .filter(|(_, w)| {
            w.iter().all(|&c| match c {
                Cell1::Edge(e) => g.edge_on_curve[e as usize],
                _ => false,
            })
        })
        .map(|(i, _)| i as u32)
        .collect();

    Ok(CellLevel {
        level: n,
        tiles,
        edges,
        verts,
        tile_index,
        edge_tiles,
        vert_tiles,
        vert_deg,
        curve_edges,
    })
}

/// All level-n tiles containing the given carrier word, as indices.
fn tile_covers(g: &Geometry, cells: &[Cell1], index: &BTreeMap<Vec<u32>, u32>) -> Vec<u32> {
    let n = cells.len();
    let mut out = Vec::new();
    let mut word: Vec<u32> = Vec::with_capacity(n);
    fn rec(
        g: &Geometry,
        cells: &[Cell1],
        word: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        let j = word.len();
        if j == cells.len() {
            out.push(word.clone());
            return;
        }
        for t in g.tiles_containing(cells[j]) {
            if j == 0 || tile_step(g, word[j - 1], t) {
                word.push(t);
                rec(g, cells, word, out);
                word.pop();
            }
        }
    }
    let mut res = Vec::new();
    rec(g, cells, &mut word, &mut res);
    for w in res {
        out.push(index[&w]);
    }
    out.sort_unstable();
    out
}

/// Local degree of f^n at a vertex of the level.
pub fn local_degree(level: &CellLevel, v: u32) -> u64 {
    level.vert_deg[v as usize]
}

/// The set of 0-edges met by each level-n tile.
pub fn tile_zero_edges(g: &Geometry, level: &CellLevel) -> Vec<Vec<u32>> {
    // A tile meets a 0-edge iff one of its vertices lies on the closed arc,
    // i.e. the vertex's first carrier is a sub-edge or an endpoint vertex of
    // the arc.
    let mut allowed: Vec<BTreeMap<Cell1, ()>> = vec![BTreeMap::new(); g.m];
    for z in 0..g.m {
        for &e in &g.zero_edge_subs[z] {
            allowed[z].insert(Cell1::Edge(e), ());
            let (a, b) = g.edge_ends[e as usize];
            allowed[z].insert(Cell1::Vert(a), ());
            allowed[z].insert(Cell1::Vert(b), ());
        }
    }
    let mut out = vec![Vec::new(); level.tiles.len()];
    for (vi, vw) in level.verts.iter().enumerate() {
        let c0 = vw[0];
        let zs: Vec<u32> = (0..g.m as u32)
            .filter(|&z| allowed[z as usize].contains_key(&c0))
            .collect();
        if zs.is_empty() {
            continue;
        }
        for &t in &level.vert_tiles[vi] {
            for &z in &zs {
                if !out[t as usize].contains(&z) {
                    out[t as usize].push(z);
                }
            }
        }
    }
    for v in &mut out {
        v.sort_unstable();
    }
    out
}

/// Does some level-n tile join opposite sides of the curve?
pub fn joins_opposite_sides(g: &Geometry, n: usize, cap: u64) -> Result<bool, BuildError> {
    if n == 0 {
        return Ok(true); // a 0-tile contains the whole curve
    }
    let level = build_level(g, n, cap)?;
    let met = tile_zero_edges(g, &level);
    let m = g.m as i64;
    Ok(met.iter().any(|zs| {
        if g.m == 3 {
            zs.len() == 3
        } else {
            zs.iter().any(|&a| {
                zs.iter().any(|&b| {
                    let d = (a as i64 - b as i64).rem_euclid(m);
                    d != 0 && d != 1 && d != m - 1
                })
            })
        }
    }))
}

/// Minimal number of level-n tiles in a connected chain joining opposite
/// sides of the curve.
pub fn dn(g: &Geometry, n: usize, cap: u64) -> Result<u64, BuildError> {
    let level = build_level(g, n, cap)?;
    let met = tile_zero_edges(g, &level);
    let nt = level.tiles.len();

    // Tile adjacency via shared vertices.
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); nt];
    for tiles in &level.vert_tiles {
        for &a in tiles {
            for &b in tiles {
                if a != b && !adj[a as usize].contains(&b) {
                    adj[a as usize].push(b);
                }
            }
        }
    }

    let bfs = |sources: &[bool]| -> Vec<u64> {
        let mut dist = vec![u64::MAX; nt];
        let mut q = std::collections::VecDeque::new();
        for (t, &s) in sources.iter().enumerate() {
            if s {
                dist[t] = 0;
                q.push_back(t as u32);
            }
        }
        while let Some(t) = q.pop_front() {
            let d = dist[t as usize];
            for &u in &adj[t as usize] {
                if dist[u as usize] == u64::MAX {
                    dist[u as usize] = d + 1;
                    q.push_back(u);
                }
            }
        }
        dist
    };
    let meets = |z: u32| -> Vec<bool> { met.iter().map(|zs| zs.contains(&z)).collect() };

    let m = g.m as i64;
    let mut best = u64::MAX;
    if g.m == 3 {
        let d0 = bfs(&meets(0));
        let d1 = bfs(&meets(1));
        let d2 = bfs(&meets(2));
        for t in 0..nt {
            if d0[t] != u64::MAX && d1[t] != u64::MAX && d2[t] != u64::MAX {
                best = best.min(d0[t] + d1[t] + d2[t] + 1);
            }
        }
    } else {
        for a in 0..g.m as u32 {
            for b in (a + 1)..g.m as u32 {
                let d = (b as i64 - a as i64).rem_euclid(m);
                if d == 1 || d == m - 1 {
                    continue; // adjacent 0-edges share a post point
                }
                let da = bfs(&meets(a));
                let targets = meets(b);
                for t in 0..nt {
                    if targets[t] && da[t] != u64::MAX {
                        best = best.min(da[t] + 1);
                    }
                }
            }
        }
    }
    Ok(best)
}

/// Table of (n, D_n) for n = 1..=n_max plus the expansion-factor estimate
/// D_{n_max}^{1/n_max}.
pub fn dn_table(g: &Geometry, n_max: usize, cap: u64) -> Result<(Vec<(usize, u64)>, f64), BuildError> {
    let mut rows = Vec::new();
    let mut prev = 0u64;
    for n in 1..=n_max {
        let d = dn(g, n, cap)?;
        if d < prev {
            return Err(BuildError::Gluing {
                level: n,
                msg: format!("D_n dropped from {prev} to {d}"),
            });
        }
        prev = d;
        rows.push((n, d));
    }
    let est = (prev as f64).powf(1.0 / n_max as f64);
    Ok((rows, est))
}
