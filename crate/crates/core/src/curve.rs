//! Lazy model of the curve subdivisions.
//!
//! A level-l on-curve edge is an admissible word of l on-curve 1-edges
//! (refinement extends on the right, the map drops the first letter). A
//! level-l vertex is represented by the unique level-l edge it enters along
//! the curve orientation. Everything here works on words, so deep levels cost
//! O(level) per operation and nothing is materialized.

use crate::geometry::Geometry;

/// A level-l on-curve edge.
pub type EdgeWord = Vec<u32>;

/// A curve vertex at level `word.len()`: the entry point of `right` along
/// the curve orientation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CurveVertex {
    pub right: EdgeWord,
}

/// Is `w` an admissible on-curve edge word?
pub fn edge_word_ok(g: &Geometry, w: &[u32]) -> bool {
    if w.is_empty() {
        return false;
    }
    w.iter().all(|&e| g.edge_on_curve[e as usize])
        && w.windows(2).all(|p| {
            g.edge_image[p[0] as usize] == g.curve_edge_zero(p[1])
        })
}

/// Net orientation of f^(l-1)... of the edge word: true when the composed
/// restriction preserves the curve orientation (product of the letter flags).
pub fn orient(g: &Geometry, w: &[u32]) -> bool {
    w.iter().fold(true, |acc, &e| acc == g.edge_flag[e as usize])
}

/// Sub-edges of the edge word, as their appended last letters in curve order
/// along the edge itself.
pub fn sub_edges_in_order(g: &Geometry, w: &[u32]) -> Vec<u32> {
    let last = *w.last().unwrap();
    let z = g.edge_image[last as usize] as usize;
    let mut subs = g.zero_edge_subs[z].clone();
    if !orient(g, w) {
        subs.reverse();
    }
    subs
}

/// Successor edge along the curve at the same level.
pub fn next_edge(g: &Geometry, w: &[u32]) -> EdgeWord {
    if w.len() == 1 {
        return vec![g.curve_next(w[0])];
    }
    let parent = &w[..w.len() - 1];
    let order = sub_edges_in_order(g, parent);
    let pos = order
        .iter()
        .position(|&t| t == w[w.len() - 1])
        .expect("edge is a sub-edge of its prefix");
    if pos + 1 < order.len() {
        let mut out = parent.to_vec();
        out.push(order[pos + 1]);
        out
    } else {
        let np = next_edge(g, parent);
        let norder = sub_edges_in_order(g, &np);
        let mut out = np;
        out.push(norder[0]);
        out
    }
}

/// Predecessor edge along the curve at the same level.
pub fn prev_edge(g: &Geometry, w: &[u32]) -> EdgeWord {
    if w.len() == 1 {
        return vec![g.curve_prev(w[0])];
    }
    let parent = &w[..w.len() - 1];
    let order = sub_edges_in_order(g, parent);
    let pos = order
        .iter()
        .position(|&t| t == w[w.len() - 1])
        .expect("edge is a sub-edge of its prefix");
    if pos > 0 {
        let mut out = parent.to_vec();
        out.push(order[pos - 1]);
        out
    } else {
        let pp = prev_edge(g, parent);
        let porder = sub_edges_in_order(g, &pp);
        let mut out = pp;
        out.push(*porder.last().unwrap());
        out
    }
}

/// The iterated first sub-edge chain of an edge down to the given level.
pub fn first_chain(g: &Geometry, base: &[u32], level: usize) -> EdgeWord {
    let mut w = base.to_vec();
    while w.len() < level {
        let t = sub_edges_in_order(g, &w)[0];
        w.push(t);
    }
    w
}

impl CurveVertex {
    pub fn level(&self) -> usize {
        self.right.len()
    }

    /// Image under the map: shift the entry edge; a reversing first letter
    /// sends the entry point to the exit of the image edge.
    pub fn image(&self, g: &Geometry) -> CurveVertex {
        assert!(self.level() >= 2, "level-0 vertices are postcritical points");
        let w = &self.right;
        let shifted = w[1..].to_vec();
        if g.edge_flag[w[0] as usize] {
            CurveVertex { right: shifted }
        } else {
            CurveVertex {
                right: next_edge(g, &shifted),
            }
        }
    }

    /// Preimages on the curve, one level up.
    pub fn preimages(&self, g: &Geometry) -> Vec<CurveVertex> {
        let u = &self.right;
        let mut out = Vec::new();
        let u0z = g.curve_edge_zero(u[0]);
        let pu = prev_edge(g, u);
        let pu0z = g.curve_edge_zero(pu[0]);
        for t in g.curve_edges() {
            let flag = g.edge_flag[t as usize];
            if flag && g.edge_image[t as usize] == u0z {
                let mut w = vec![t];
                w.extend_from_slice(u);
                out.push(CurveVertex { right: w });
            }
            if !flag && g.edge_image[t as usize] == pu0z {
                let mut w = vec![t];
                w.extend_from_slice(&pu);
                out.push(CurveVertex { right: w });
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Does the vertex lie on the closed edge-pair neighborhood of `p`
    /// (a vertex of a coarser or equal level)?
    pub fn in_edge_pair(&self, g: &Geometry, p: &CurveVertex) -> bool {
        let m = p.level();
        assert!(self.level() >= m);
        let a: EdgeWord = self.right[..m].to_vec();
        let u = &p.right;
        let pu = prev_edge(g, u);
        if a == *u || a == pu {
            return true;
        }
        let nu = next_edge(g, u);
        if a == nu {
            // only the entry point of a = exit of u lies in the closed pair
            return self.right == first_chain(g, &a, self.level());
        }
        false
    }
}

/// Backward-orbit sets on the curve constrained to edge-pair neighborhoods:
/// apply the constraints q_1, q_2, ... in order, starting from the target q.
pub fn enumerate_em(
    g: &Geometry,
    q: &CurveVertex,
    constraints: &[CurveVertex],
) -> Vec<CurveVertex> {
    let mut cur = vec![q.clone()];
    for p in constraints {
        let mut next = Vec::new();
        for x in &cur {
            for y in x.preimages(g) {
                if y.in_edge_pair(g, p) && !next.contains(&y) {
                    next.push(y);
                }
            }
        }
        next.sort();
        cur = next;
        if cur.is_empty() {
            break;
        }
    }
    cur
}

/// A deterministic pseudo-random level-m vertex from a seeded walk.
pub fn random_vertex(g: &Geometry, m: usize, rng: &mut impl rand::Rng) -> CurveVertex {
    let curve = g.curve_edges();
    let mut w = vec![curve[rng.gen_range(0..curve.len())]];
    while w.len() < m {
        let subs = sub_edges_in_order(g, &w);
        let t = subs[rng.gen_range(0..subs.len())];
        w.push(t);
    }
    CurveVertex { right: w }
}
