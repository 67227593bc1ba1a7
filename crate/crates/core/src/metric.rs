//! The combinatorial visual metric and the symbolic Hölder seminorm.

use std::collections::BTreeSet;

use crate::error::MetricError;
use crate::geometry::{Cell1, Geometry};
use crate::point::ResolvedPoint;
use crate::potential::{to_f64, Potential};
use crate::words::tile_step;

#[derive(Clone, Copy, Debug)]
pub struct VisualMetricParams {
    /// Expansion factor, > 1.
    pub lambda: f64,
    /// Hölder exponent in (0, 1].
    pub alpha: f64,
}

impl Default for VisualMetricParams {
    fn default() -> Self {
        VisualMetricParams {
            lambda: 2.0,
            alpha: 1.0,
        }
    }
}

/// Separation level of two distinct points: the least level n >= 1 at which
/// no level-n tile containing x intersects a level-n tile containing y.
/// Tiles intersect when they share any cell; vertex contact counts.
pub fn separation_level(
    g: &Geometry,
    x: &ResolvedPoint,
    y: &ResolvedPoint,
    cap: usize,
) -> Result<usize, MetricError> {
    assert_ne!(x, y, "separation level of equal points");
    // Frontier of triples (tile over x, tile over y, shared cell), advanced
    // one level at a time. Nonempty frontier at level n means the points lie
    // in intersecting n-tiles.
    let mut frontier: BTreeSet<(u32, u32, Cell1)> = BTreeSet::new();
    for tx in g.tiles_containing(x.carrier(0)) {
        for ty in g.tiles_containing(y.carrier(0)) {
            for c in g.sub_cells(Cell1::Tile(tx)) {
                if g.cell_contains(Cell1::Tile(ty), c) {
                    frontier.insert((tx, ty, c));
                }
            }
        }
    }
    let mut n = 1usize;
    loop {
        if frontier.is_empty() {
            return Ok(n);
        }
        if n > cap {
            return Err(MetricError::SeparationCap { cap });
        }
        let mut next: BTreeSet<(u32, u32, Cell1)> = BTreeSet::new();
        let cx = x.carrier(n);
        let cy = y.carrier(n);
        for &(tx, ty, c) in &frontier {
            for tx2 in g.tiles_containing(cx) {
                if !tile_step(g, tx, tx2) {
                    continue;
                }
                for ty2 in g.tiles_containing(cy) {
                    if !tile_step(g, ty, ty2) {
                        continue;
                    }
                    for c2 in g.sub_cells(Cell1::Tile(tx2)) {
                        if g.cell_contains(Cell1::Tile(ty2), c2) && g.carrier_adm(c, c2) {
                            next.insert((tx2, ty2, c2));
                        }
                    }
                }
            }
        }
        frontier = next;
        n += 1;
    }
}

/// Combinatorial visual distance Lambda^(-separation level); 0 for equal points.
pub fn visual_distance(
    g: &Geometry,
    x: &ResolvedPoint,
    y: &ResolvedPoint,
    params: &VisualMetricParams,
    cap: usize,
) -> Result<f64, MetricError> {
    if x == y {
        return Ok(0.0);
    }
    let s = separation_level(g, x, y, cap)?;
    Ok(params.lambda.powi(-(s as i32)))
}

/// Separation class of two admissible depth-k tile words: the first level at
/// which the prefix tiles are disjoint, or k+1 when the full words still
/// intersect. Distinct intersecting words always admit point pairs separating
/// right below them, so the class is exactly the least separation level over
/// interior point pairs.
pub fn word_separation_class(g: &Geometry, w: &[u32], v: &[u32]) -> usize {
    let k = w.len();
    debug_assert_eq!(k, v.len());
    for j in 1..=k {
        if !prefixes_intersect(g, &w[..j], &v[..j]) {
            return j;
        }
    }
    k + 1
}

fn prefixes_intersect(g: &Geometry, w: &[u32], v: &[u32]) -> bool {
    // Intersecting iff a common carrier word exists componentwise.
    let mut frontier: Vec<Cell1> = Vec::new();
    for c in g.sub_cells(Cell1::Tile(w[0])) {
        if g.cell_contains(Cell1::Tile(v[0]), c) {
            frontier.push(c);
        }
    }
    for j in 1..w.len() {
        let mut next: Vec<Cell1> = Vec::new();
        for &c in &frontier {
            for &d in g.carrier_succs(c) {
                if g.cell_contains(Cell1::Tile(w[j]), d)
                    && g.cell_contains(Cell1::Tile(v[j]), d)
                    && !next.contains(&d)
                {
                    next.push(d);
                }
            }
        }
        if next.is_empty() {
            return false;
        }
        frontier = next;
    }
    !frontier.is_empty()
}

/// Symbolic Hölder seminorm of a depth-k potential: the exact maximum of
/// |phi(w) - phi(w')| * Lambda^(alpha * class(w, w')) over word pairs.
pub fn holder_seminorm(g: &Geometry, phi: &Potential, params: &VisualMetricParams) -> f64 {
    let words = crate::potential::admissible_words(g, phi.depth);
    let mut best = 0.0f64;
    for i in 0..words.len() {
        for j in (i + 1)..words.len() {
            let dv = to_f64(&(phi.value(&words[i]) - phi.value(&words[j]))).abs();
            if dv == 0.0 {
                continue;
            }
            let m = word_separation_class(g, &words[i], &words[j]);
            let val = dv * params.lambda.powf(params.alpha * m as f64);
            if val > best {
                best = val;
            }
        }
    }
    best
}
