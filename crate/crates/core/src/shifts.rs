//! The three subshifts of finite type attached to a rule: tiles, on-curve
//! edges, and colored on-curve edges.

use crate::geometry::{Cell1, Color, Geometry};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ShiftKind {
    Tile,
    Edge,
    EdgeColor,
}

#[derive(Clone, Debug)]
pub struct StateMeta {
    pub label: String,
    pub color: Option<Color>,
    pub on_curve: bool,
    /// Underlying 1-cell (the enclosing tile for edge-color states).
    pub cell: Cell1,
}

/// A finite-state subshift of finite type with a 0/1 transition matrix.
#[derive(Clone, Debug)]
pub struct ShiftSystem {
    pub kind: ShiftKind,
    pub states: Vec<StateMeta>,
    trans: Vec<Vec<bool>>,
}

impl ShiftSystem {
    pub fn n(&self) -> usize {
        self.states.len()
    }
    pub fn allowed(&self, a: usize, b: usize) -> bool {
        self.trans[a][b]
    }
    pub fn successors(&self, a: usize) -> Vec<usize> {
        (0..self.n()).filter(|&b| self.trans[a][b]).collect()
    }

    /// Trace of the n-th matrix power: the number of n-periodic words.
    pub fn trace_pow(&self, n: usize) -> u128 {
        assert!(n >= 1);
        let s = self.n();
        let mut m: Vec<Vec<u128>> = (0..s)
            .map(|i| (0..s).map(|j| self.trans[i][j] as u128).collect())
            .collect();
        let base = m.clone();
        for _ in 1..n {
            let mut next = vec![vec![0u128; s]; s];
            for i in 0..s {
                for k in 0..s {
                    if m[i][k] == 0 {
                        continue;
                    }
                    let mik = m[i][k];
                    for (j, cell) in next[i].iter_mut().enumerate() {
                        if base[k][j] == 1 {
                            *cell += mik;
                        }
                    }
                }
            }
            m = next;
        }
        (0..s).map(|i| m[i][i]).sum()
    }

    /// Is some power of the transition matrix entrywise positive? The power
    /// is bounded by (card S)^2.
    pub fn is_topologically_mixing(&self) -> bool {
        let s = self.n();
        if s == 0 {
            return false;
        }
        let mut m = self.trans.clone();
        let lim = s * s;
        for _ in 0..lim {
            if m.iter().all(|row| row.iter().all(|&x| x)) {
                return true;
            }
            let mut next = vec![vec![false; s]; s];
            for i in 0..s {
                for k in 0..s {
                    if m[i][k] {
                        for (j, cell) in next[i].iter_mut().enumerate() {
                            *cell = *cell || self.trans[k][j];
                        }
                    }
                }
            }
            if next == m {
                return next.iter().all(|row| row.iter().all(|&x| x));
            }
            m = next;
        }
        m.iter().all(|row| row.iter().all(|&x| x))
    }

    /// All length-n words w with w.w admissible, lexicographic order.
    pub fn periodic_words(&self, n: usize, cap: u64) -> Result<Vec<Vec<u16>>, crate::error::CodingError> {
        let count = self.trace_pow(n);
        if count > cap as u128 {
            return Err(crate::error::CodingError::Cap(format!(
                "{count} periodic words at n = {n}"
            )));
        }
        let mut out = Vec::with_capacity(count as usize);
        let s = self.n();
        // reach[j][a] = exists path of length j from a to start (computed per start)
        let mut word: Vec<u16> = Vec::with_capacity(n);
        for start in 0..s {
            // reachability to `start` in exactly j steps
            let mut reach = vec![vec![false; s]; n + 1];
            reach[0][start] = true;
            for j in 1..=n {
                for a in 0..s {
                    reach[j][a] = (0..s).any(|b| self.trans[a][b] && reach[j - 1][b]);
                }
            }
            if !reach[n][start] {
                continue;
            }
            word.push(start as u16);
            self.enum_rec(n, start, &reach, &mut word, &mut out);
            word.pop();
        }
        Ok(out)
    }

    fn enum_rec(
        &self,
        n: usize,
        start: usize,
        reach: &[Vec<bool>],
        word: &mut Vec<u16>,
        out: &mut Vec<Vec<u16>>,
    ) {
        let j = word.len();
        if j == n {
            out.push(word.clone());
            return;
        }
        let prev = word[j - 1] as usize;
        for b in 0..self.n() {
            // b would sit at position j; it needs n - j more steps to close.
            if self.trans[prev][b] && reach[n - j][b] {
                word.push(b as u16);
                self.enum_rec(n, start, reach, word, out);
                word.pop();
            }
        }
    }
}

/// Tile shift: states are the 1-tiles, transition X -> X' iff f(X) contains X'.
pub fn tile_shift(g: &Geometry) -> ShiftSystem {
    let n = g.n_tiles();
    let states = (0..n)
        .map(|t| StateMeta {
            label: g.rule.one_tiles[t].id.clone(),
            color: Some(g.tile_color[t]),
            on_curve: false,
            cell: Cell1::Tile(t as u32),
        })
        .collect();
    let trans = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| g.tile_color[a] == g.tile_container[b])
                .collect()
        })
        .collect();
    ShiftSystem {
        kind: ShiftKind::Tile,
        states,
        trans,
    }
}

/// Edge shift: states are the on-curve 1-edges, transition e1 -> e2 iff
/// f(e1) contains e2.
pub fn edge_shift(g: &Geometry) -> ShiftSystem {
    let edges = g.curve_edges();
    let states: Vec<StateMeta> = edges
        .iter()
        .map(|&e| StateMeta {
            label: g.rule.one_edges[e as usize].id.clone(),
            color: None,
            on_curve: true,
            cell: Cell1::Edge(e),
        })
        .collect();
    let trans = edges
        .iter()
        .map(|&a| {
            edges
                .iter()
                .map(|&b| g.edge_image[a as usize] == g.curve_edge_zero(b))
                .collect()
        })
        .collect();
    ShiftSystem {
        kind: ShiftKind::Edge,
        states,
        trans,
    }
}

/// Edge-color shift: states are pairs (on-curve edge, 0-tile side); the side
/// fixes the enclosing 1-tile of the edge in that 0-tile.
pub fn edge_color_shift(g: &Geometry) -> ShiftSystem {
    let edges = g.curve_edges();
    let mut states = Vec::with_capacity(2 * edges.len());
    let mut meta: Vec<(u32, Color)> = Vec::new();
    for &e in &edges {
        for col in [Color::White, Color::Black] {
            let side = g.edge_side(e, col);
            states.push(StateMeta {
                label: format!(
                    "{}|{}",
                    g.rule.one_edges[e as usize].id,
                    col.letter()
                ),
                color: Some(col),
                on_curve: true,
                cell: Cell1::Tile(side),
            });
            meta.push((e, col));
        }
    }
    let n = states.len();
    let mut trans = vec![vec![false; n]; n];
    for a in 0..n {
        let (e1, c1) = meta[a];
        let side1 = g.edge_side(e1, c1);
        for b in 0..n {
            let (e2, c2) = meta[b];
            let edge_ok = g.edge_image[e1 as usize] == g.curve_edge_zero(e2);
            // f(X^1(e1,c1)) is the 0-tile of that tile's color; it contains
            // X^1(e2,c2) iff the color matches the location c2.
            let tile_ok = g.tile_color[side1 as usize] == c2;
            trans[a][b] = edge_ok && tile_ok;
        }
    }
    ShiftSystem {
        kind: ShiftKind::EdgeColor,
        states,
        trans,
    }
}
