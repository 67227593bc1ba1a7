//! Word utilities over the level-1 cells.
//!
//! Level-n cells are identified with admissible length-n words in the carrier
//! graph (tiles for 2-cells; a word's dimension is the dimension of its last
//! letter). Containment across levels and incidence are componentwise, which
//! is what the cover helpers below exploit.

use crate::geometry::{Cell1, Geometry};

/// Does tile `a` map onto a 0-tile containing tile `b` (tile-shift step)?
pub fn tile_step(g: &Geometry, a: u32, b: u32) -> bool {
    g.tile_color[a as usize] == g.tile_container[b as usize]
}

/// Lexicographically least admissible tile word `w` of the given length with
/// `w[j]` containing `cells[j mod cells.len()]` componentwise. The word is
/// open (no closure constraint); `None` when no cover exists.
pub fn lex_min_open_cover(g: &Geometry, cells: &[Cell1], len: usize) -> Option<Vec<u32>> {
    if len == 0 {
        return Some(Vec::new());
    }
    let cand = |j: usize| g.tiles_containing(cells[j % cells.len()]);
    let mut word = Vec::with_capacity(len);
    let mut prev: Option<u32> = None;
    for j in 0..len {
        let mut cs = cand(j);
        cs.sort_unstable();
        // Any containing tile extends to a full cover, so a greedy choice
        // constrained only by the previous letter is lexicographically least.
        let pick = cs.into_iter().find(|&t| match prev {
            None => true,
            Some(p) => tile_step(g, p, t),
        })?;
        word.push(pick);
        prev = Some(pick);
    }
    Some(word)
}

/// Lexicographically least closed tile word of length `cells.len()` covering
/// the cyclic cell word componentwise, or `None` when no closed cover exists.
pub fn lex_min_closed_cover(g: &Geometry, cells: &[Cell1]) -> Option<Vec<u32>> {
    let n = cells.len();
    assert!(n > 0);
    let cands: Vec<Vec<u32>> = (0..n)
        .map(|j| {
            let mut c = g.tiles_containing(cells[j]);
            c.sort_unstable();
            c
        })
        .collect();
    // Feasibility to return to a fixed start within the remaining steps.
    let mut best: Option<Vec<u32>> = None;
    for &start in &cands[0] {
        // can_reach[j] = set of tiles at position j that can still close to start
        let mut can: Vec<Vec<u32>> = vec![Vec::new(); n];
        can[n - 1] = cands[n - 1]
            .iter()
            .copied()
            .filter(|&t| tile_step(g, t, start))
            .collect();
        for j in (0..n - 1).rev() {
            can[j] = cands[j]
                .iter()
                .copied()
                .filter(|&t| can[j + 1].iter().any(|&u| tile_step(g, t, u)))
                .collect();
        }
        if !can[0].contains(&start) {
            continue;
        }
        let mut word = vec![start];
        let mut ok = true;
        for j in 1..n {
            match can[j]
                .iter()
                .copied()
                .find(|&t| tile_step(g, word[j - 1], t))
            {
                Some(t) => word.push(t),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            match &best {
                None => best = Some(word),
                Some(b) if word < *b => best = Some(word),
                _ => {}
            }
            // Candidates are scanned in increasing start order and the word is
            // determined greedily, so the first success is already minimal.
            break;
        }
    }
    best
}

/// Number of closed admissible words of length `n` through per-position
/// candidate state sets with the given step relation.
pub fn count_closed_paths<S: Copy + Eq>(
    cands: &[Vec<S>],
    step: impl Fn(S, S) -> bool,
) -> u64 {
    let n = cands.len();
    assert!(n > 0);
    let mut total = 0u64;
    for (s0i, &s0) in cands[0].iter().enumerate() {
        let _ = s0i;
        // vector over cands[j] of path counts from s0
        let mut counts: Vec<u64> = vec![1];
        let mut layer: Vec<S> = vec![s0];
        for cand in cands.iter().skip(1) {
            let mut next_counts = vec![0u64; cand.len()];
            for (i, &s) in layer.iter().enumerate() {
                if counts[i] == 0 {
                    continue;
                }
                for (jj, &t) in cand.iter().enumerate() {
                    if step(s, t) {
                        next_counts[jj] += counts[i];
                    }
                }
            }
            layer = cand.clone();
            counts = next_counts;
        }
        for (i, &s) in layer.iter().enumerate() {
            if step(s, s0) {
                total += counts[i];
            }
        }
    }
    total
}

/// Minimal period of a cyclic word.
pub fn minimal_period<T: Eq>(w: &[T]) -> usize {
    let n = w.len();
    'outer: for p in 1..=n {
        if n % p != 0 {
            continue;
        }
        for i in 0..n {
            if w[i] != w[i % p] {
                continue 'outer;
            }
        }
        return p;
    }
    n
}

/// Lexicographically least rotation of a word (Booth-style, quadratic is fine
/// at desk scale).
pub fn least_rotation<T: Ord + Clone>(w: &[T]) -> Vec<T> {
    let n = w.len();
    let mut best = 0usize;
    for s in 1..n {
        for i in 0..n {
            let a = &w[(s + i) % n];
            let b = &w[(best + i) % n];
            if a < b {
                best = s;
                break;
            }
            if a > b {
                break;
            }
        }
    }
    (0..n).map(|i| w[(best + i) % n].clone()).collect()
}
