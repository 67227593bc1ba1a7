//! Transfer operators on depth-k locally constant functions, pressure, the
//! zero s0 of t -> P(-t phi), Perron normalization, split operators, and the
//! empirical spectral-gap fit.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::ThermoError;
use crate::geometry::{Color, Geometry};
use crate::potential::{admissible_words, to_f64, Potential};
use crate::shifts::tile_shift;
use crate::words::tile_step;

/// The word graph at a given depth: states are admissible words, a step
/// appends one tile (so the operator sums over one-step preimages).
#[derive(Clone, Debug)]
pub struct WordGraph {
    pub depth: usize,
    pub words: Vec<Vec<u32>>,
    pub index: BTreeMap<Vec<u32>, usize>,
    /// succ[i] = words reachable by shifting and appending.
    pub succ: Vec<Vec<usize>>,
    /// pred[j] = words mapping onto j (one-step preimages).
    pub pred: Vec<Vec<usize>>,
    /// Location of the word: the 0-tile containing its first tile.
    pub container: Vec<Color>,
}

impl WordGraph {
    pub fn new(g: &Geometry, depth: usize) -> WordGraph {
        let words = admissible_words(g, depth);
        let index: BTreeMap<Vec<u32>, usize> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let mut succ = vec![Vec::new(); words.len()];
        let mut pred = vec![Vec::new(); words.len()];
        for (i, w) in words.iter().enumerate() {
            for t in 0..g.n_tiles() as u32 {
                if tile_step(g, w[depth - 1], t) {
                    let mut w2 = w[1..].to_vec();
                    w2.push(t);
                    let j = index[&w2];
                    succ[i].push(j);
                    pred[j].push(i);
                }
            }
        }
        let container = words
            .iter()
            .map(|w| g.tile_container[w[0] as usize])
            .collect();
        WordGraph {
            depth,
            words,
            index,
            succ,
            pred,
            container,
        }
    }

    pub fn n(&self) -> usize {
        self.words.len()
    }
}

/// Real transfer operator for the weight exp(t phi) on depth-k words.
#[derive(Clone, Debug)]
pub struct WeightedMatrix {
    pub graph: WordGraph,
    /// Weight attached to each source word.
    pub weight: Vec<f64>,
    /// Exact log-weights (t * phi values) for bookkeeping.
    pub log_weight: Vec<BigRational>,
}

impl WeightedMatrix {
    pub fn new(g: &Geometry, phi: &Potential, t: f64) -> WeightedMatrix {
        let graph = WordGraph::new(g, phi.depth);
        let weight: Vec<f64> = graph
            .words
            .iter()
            .map(|w| (t * to_f64(phi.value(w))).exp())
            .collect();
        let log_weight = graph
            .words
            .iter()
            .map(|w| phi.value(w).clone())
            .collect();
        WeightedMatrix {
            graph,
            weight,
            log_weight,
        }
    }

    /// (L u)(w') = sum over one-step preimages w of e^{t phi(w)} u(w).
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.graph.n()];
        for (j, preds) in self.graph.pred.iter().enumerate() {
            let mut s = 0.0;
            for &i in preds {
                s += self.weight[i] * u[i];
            }
            out[j] = s;
        }
        out
    }

    /// Adjoint action (left vectors): (v L)(w) = sum over successors.
    pub fn apply_t(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.graph.n()];
        for (i, succs) in self.graph.succ.iter().enumerate() {
            let mut s = 0.0;
            for &j in succs {
                s += v[j];
            }
            out[i] = self.weight[i] * s;
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct PerronData {
    /// log of the Perron root.
    pub log_root: f64,
    /// Right eigenvector, positive, sup-norm 1.
    pub right: Vec<f64>,
    /// Left eigenvector, positive, normalized so <left, right> = 1.
    pub left: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

pub const PERRON_TOL: f64 = 1e-12;
pub const PERRON_MAX_ITERS: usize = 100_000;

/// Power iteration from the all-ones vector, with the matching left vector.
pub fn perron(mat: &WeightedMatrix) -> Result<PerronData, ThermoError> {
    let n = mat.graph.n();
    let mut u = vec![1.0; n];
    let mut iters = 0;
    let mut residual = f64::INFINITY;
    while iters < PERRON_MAX_ITERS {
        let v = mat.apply(&u);
        let norm = v.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        if norm == 0.0 {
            return Err(ThermoError::NotMixing);
        }
        let next: Vec<f64> = v.iter().map(|x| x / norm).collect();
        residual = next
            .iter()
            .zip(&u)
            .fold(0.0f64, |a, (&x, &y)| a.max((x - y).abs()));
        u = next;
        iters += 1;
        if residual < PERRON_TOL {
            break;
        }
    }
    if residual >= PERRON_TOL {
        return Err(ThermoError::NoConvergence {
            iters,
            residual,
        });
    }
    // refine the root with a Rayleigh-style step
    let v = mat.apply(&u);
    let num: f64 = v.iter().zip(&u).map(|(a, b)| a * b).sum();
    let den: f64 = u.iter().map(|b| b * b).sum();
    let root = num / den;

    let mut l = vec![1.0; n];
    let mut liters = 0;
    loop {
        let v = mat.apply_t(&l);
        let norm = v.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        if norm == 0.0 {
            return Err(ThermoError::NotMixing);
        }
        let next: Vec<f64> = v.iter().map(|x| x / norm).collect();
        let res = next
            .iter()
            .zip(&l)
            .fold(0.0f64, |a, (&x, &y)| a.max((x - y).abs()));
        l = next;
        liters += 1;
        if res < PERRON_TOL || liters >= PERRON_MAX_ITERS {
            break;
        }
    }
    let dot: f64 = l.iter().zip(&u).map(|(a, b)| a * b).sum();
    let left: Vec<f64> = l.iter().map(|x| x / dot).collect();
    Ok(PerronData {
        log_root: root.ln(),
        right: u,
        left,
        residual,
        iterations: iters,
    })
}

#[derive(Clone, Debug)]
pub struct PressureResult {
    pub pressure: f64,
    pub residual: f64,
}

/// Topological pressure of t * phi: log of the Perron root of the weighted
/// word matrix. Requires the tile shift to be topologically mixing.
pub fn pressure(g: &Geometry, phi: &Potential, t: f64) -> Result<PressureResult, ThermoError> {
    if !tile_shift(g).is_topologically_mixing() {
        return Err(ThermoError::NotMixing);
    }
    let mat = WeightedMatrix::new(g, phi, t);
    let p = perron(&mat)?;
    Ok(PressureResult {
        pressure: p.log_root,
        residual: p.residual,
    })
}

pub const S0_TOL: f64 = 1e-10;

/// The unique root of t -> P(-t phi) for an eventually positive phi.
pub fn s0(g: &Geometry, phi: &Potential, positivity_cap: usize) -> Result<f64, ThermoError> {
    phi.certify_eventually_positive(g, positivity_cap)
        .ok_or(ThermoError::NotEventuallyPositive {
            cap: positivity_cap,
        })?;
    let p_at = |t: f64| -> Result<f64, ThermoError> { Ok(pressure(g, phi, -t)?.pressure) };
    let mut lo = 0.0f64;
    let mut p_lo = p_at(lo)?;
    if p_lo <= 0.0 {
        return Err(ThermoError::Bracket(format!(
            "P(0) = {p_lo} is not positive"
        )));
    }
    let mut hi = 1.0f64;
    let mut p_hi = p_at(hi)?;
    let mut grow = 0;
    while p_hi > 0.0 {
        hi *= 2.0;
        p_hi = p_at(hi)?;
        grow += 1;
        if grow > 200 {
            return Err(ThermoError::Bracket("no sign change found".into()));
        }
    }
    // monotonicity spot check on the sampled bracket
    if p_hi >= p_lo {
        return Err(ThermoError::Bracket(
            "pressure failed to decrease across the bracket".into(),
        ));
    }
    while hi - lo > S0_TOL {
        let mid = 0.5 * (lo + hi);
        let pm = p_at(mid)?;
        if pm > 0.0 {
            lo = mid;
            p_lo = pm;
        } else {
            hi = mid;
            p_hi = pm;
        }
    }
    let _ = (p_lo, p_hi);
    Ok(0.5 * (lo + hi))
}

/// Perron data of the t*phi-weighted operator, with Gibbs word weights and
/// the normalized (tilde) operator data.
#[derive(Clone, Debug)]
pub struct NormalizedPotentialData {
    pub pressure: f64,
    pub mat: WeightedMatrix,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
    /// gibbs[w] = left[w] * right[w], summing to 1.
    pub gibbs: Vec<f64>,
    pub residual: f64,
}

pub fn normalize(g: &Geometry, phi: &Potential, t: f64) -> Result<NormalizedPotentialData, ThermoError> {
    if !tile_shift(g).is_topologically_mixing() {
        return Err(ThermoError::NotMixing);
    }
    let mat = WeightedMatrix::new(g, phi, t);
    let p = perron(&mat)?;
    let gibbs: Vec<f64> = p
        .left
        .iter()
        .zip(&p.right)
        .map(|(a, b)| a * b)
        .collect();
    Ok(NormalizedPotentialData {
        pressure: p.log_root,
        mat,
        right: p.right,
        left: p.left,
        gibbs,
        residual: p.residual,
    })
}

impl NormalizedPotentialData {
    /// Apply the tilde-normalized operator: entries
    /// e^{t phi(w) - P} * u_right(w) / u_right(w').
    pub fn apply_tilde(&self, u: &[f64]) -> Vec<f64> {
        let n = self.mat.graph.n();
        let ep = self.pressure.exp();
        let mut out = vec![0.0; n];
        for (j, preds) in self.mat.graph.pred.iter().enumerate() {
            let mut s = 0.0;
            for &i in preds {
                s += self.mat.weight[i] * self.right[i] * u[i];
            }
            out[j] = s / (ep * self.right[j]);
        }
        out
    }

    /// Integral of a depth-k function against the equilibrium-state skeleton.
    pub fn integrate(&self, u: &[f64]) -> f64 {
        self.gibbs.iter().zip(u).map(|(w, x)| w * x).sum()
    }
}

/// Complex transfer operator for the weight exp(-s phi).
#[derive(Clone, Debug)]
pub struct ComplexMatrix {
    pub graph: WordGraph,
    pub weight: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(g: &Geometry, phi: &Potential, s: Complex64) -> ComplexMatrix {
        let graph = WordGraph::new(g, phi.depth);
        let weight = graph
            .words
            .iter()
            .map(|w| (-s * to_f64(phi.value(w))).exp())
            .collect();
        ComplexMatrix { graph, weight }
    }

    pub fn apply(&self, u: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.graph.n()];
        for (j, preds) in self.graph.pred.iter().enumerate() {
            let mut s = Complex64::new(0.0, 0.0);
            for &i in preds {
                s += self.weight[i] * u[i];
            }
            out[j] = s;
        }
        out
    }

    pub fn apply_n(&self, u: &[Complex64], n: usize) -> Vec<Complex64> {
        let mut v = u.to_vec();
        for _ in 0..n {
            v = self.apply(&v);
        }
        v
    }
}

/// Iterated real transfer operator (the n-th image of a depth-j function).
pub fn ruelle_apply(mat: &WeightedMatrix, u: &[f64], n: usize) -> Vec<f64> {
    let mut v = u.to_vec();
    for _ in 0..n {
        v = mat.apply(&v);
    }
    v
}

/// A pair of depth-k functions, one per 0-tile, stored as full-length word
/// vectors whose entries over words located in the other 0-tile are ignored.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitPair {
    pub black: Vec<f64>,
    pub white: Vec<f64>,
}

impl SplitPair {
    pub fn constant(graph: &WordGraph, b: f64, w: f64) -> SplitPair {
        SplitPair {
            black: vec![b; graph.n()],
            white: vec![w; graph.n()],
        }
    }

    /// Sup norm over the entries that belong to each component's 0-tile.
    pub fn sup_norm(&self, graph: &WordGraph) -> f64 {
        let mut m = 0.0f64;
        for (i, &c) in graph.container.iter().enumerate() {
            let v = match c {
                Color::Black => self.black[i],
                Color::White => self.white[i],
            };
            m = m.max(v.abs());
        }
        m
    }
}

/// Restrict a word vector to words located in one 0-tile (zero elsewhere).
pub fn restrict(graph: &WordGraph, u: &[f64], side: Color) -> Vec<f64> {
    u.iter()
        .enumerate()
        .map(|(i, &x)| if graph.container[i] == side { x } else { 0.0 })
        .collect()
}

/// One coordinate piece of the split operator with E a full 0-tile:
/// output restricted to `target`-located words, input to `side`-located ones.
/// Only the chain endpoints are constrained, so the piece is an
/// endpoint-restricted n-th matrix power.
pub fn split_piece_full(
    mat: &WeightedMatrix,
    u: &[f64],
    n: usize,
    target: Color,
    side: Color,
) -> Vec<f64> {
    let graph = &mat.graph;
    let mut v = restrict(graph, u, side);
    for _ in 0..n {
        v = mat.apply(&v);
    }
    for (i, x) in v.iter_mut().enumerate() {
        if graph.container[i] != target {
            *x = 0.0;
        }
    }
    v
}

/// General split piece with E an arbitrary union of n-tiles (a predicate on
/// n-tile words). Exponential in n; intended for small n in identities.
pub fn split_piece(
    mat: &WeightedMatrix,
    g: &Geometry,
    target: Color,
    n: usize,
    u: &[f64],
    in_e: &dyn Fn(&[u32]) -> bool,
) -> Vec<f64> {
    let graph = &mat.graph;
    let k = graph.depth;
    let mut out = vec![0.0; graph.n()];
    if n == 0 {
        // identity on functions over E when the 0-tile lies in E
        for (j, w) in graph.words.iter().enumerate() {
            if graph.container[j] == target && in_e(&[]) {
                out[j] = u[graph.index[w]];
            }
        }
        return out;
    }
    for (j, w) in graph.words.iter().enumerate() {
        if graph.container[j] != target {
            continue;
        }
        let mut total = 0.0;
        // extend backwards n tiles, accumulating the weight of each new window
        let mut stack: Vec<(Vec<u32>, f64)> = vec![(w.clone(), 1.0)];
        for _ in 0..n {
            let mut next = Vec::new();
            for (front, acc) in stack {
                for t in 0..g.n_tiles() as u32 {
                    if tile_step(g, t, front[0]) {
                        let mut w2 = Vec::with_capacity(front.len() + 1);
                        w2.push(t);
                        w2.extend_from_slice(&front);
                        let wt = mat.weight[graph.index[&w2[..k].to_vec()]];
                        next.push((w2, acc * wt));
                    }
                }
            }
            stack = next;
        }
        for (word, acc) in stack {
            if in_e(&word[..n]) {
                total += acc * u[graph.index[&word[..k].to_vec()]];
            }
        }
        out[j] = total;
    }
    out
}

/// The split operator on pairs, via the coordinate formula. Iterating the
/// one-step operator realizes every power exactly.
pub fn split_apply(mat: &WeightedMatrix, pair: &SplitPair, n: usize) -> SplitPair {
    let mut cur = pair.clone();
    for _ in 0..n {
        let bb = split_piece_full(mat, &cur.black, 1, Color::Black, Color::Black);
        let bw = split_piece_full(mat, &cur.white, 1, Color::Black, Color::White);
        let wb = split_piece_full(mat, &cur.black, 1, Color::White, Color::Black);
        let ww = split_piece_full(mat, &cur.white, 1, Color::White, Color::White);
        let black: Vec<f64> = bb.iter().zip(&bw).map(|(a, b)| a + b).collect();
        let white: Vec<f64> = wb.iter().zip(&ww).map(|(a, b)| a + b).collect();
        cur = SplitPair { black, white };
    }
    cur
}

/// Tilde-normalized split operator on pairs.
pub fn split_apply_tilde(data: &NormalizedPotentialData, pair: &SplitPair, n: usize) -> SplitPair {
    let graph = &data.mat.graph;
    let conj = |u: &[f64]| -> Vec<f64> {
        u.iter().zip(&data.right).map(|(x, r)| x * r).collect()
    };
    let deconj = |u: &[f64]| -> Vec<f64> {
        let ep = data.pressure.exp();
        u.iter()
            .zip(&data.right)
            .map(|(x, r)| x / (r * ep))
            .collect()
    };
    let mut cur = pair.clone();
    for _ in 0..n {
        let step = |ub: &[f64], uw: &[f64]| -> (Vec<f64>, Vec<f64>) {
            let b_in = restrict(graph, &conj(ub), Color::Black);
            let w_in = restrict(graph, &conj(uw), Color::White);
            let mut total = data.mat.apply(&b_in);
            let tw = data.mat.apply(&w_in);
            for (a, b) in total.iter_mut().zip(&tw) {
                *a += b;
            }
            let total = deconj(&total);
            let black = restrict(graph, &total, Color::Black);
            let white = restrict(graph, &total, Color::White);
            (black, white)
        };
        let (black, white) = step(&cur.black, &cur.white);
        cur = SplitPair { black, white };
    }
    cur
}

/// Empirical spectral-gap measurement: apply the tilde operator to mean-zero
/// random pairs, record sup norms over a range of powers, and fit geometric
/// decay by least squares on the log.
#[derive(Clone, Debug)]
pub struct GapFit {
    pub ratio: f64,
    pub residual: f64,
    pub norms: Vec<(usize, f64)>,
}

pub fn spectral_gap_estimate(
    g: &Geometry,
    phi: &Potential,
    t: f64,
    n_lo: usize,
    n_hi: usize,
    seed: u64,
) -> Result<GapFit, ThermoError> {
    use rand::{Rng, SeedableRng};
    let data = normalize(g, phi, t)?;
    let graph = &data.mat.graph;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut black: Vec<f64> = (0..graph.n()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut white: Vec<f64> = (0..graph.n()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    // subtract the paper's mean: integral of the black part over the black
    // 0-tile plus integral of the white part over the white 0-tile
    let mean: f64 = graph
        .container
        .iter()
        .enumerate()
        .map(|(i, &c)| match c {
            Color::Black => data.gibbs[i] * black[i],
            Color::White => data.gibbs[i] * white[i],
        })
        .sum();
    for x in black.iter_mut() {
        *x -= mean;
    }
    for x in white.iter_mut() {
        *x -= mean;
    }
    let mut pair = SplitPair { black, white };
    let scale = pair.sup_norm(graph);
    let mut norms = Vec::new();
    for n in 0..=n_hi {
        if n >= n_lo {
            norms.push((n, pair.sup_norm(graph)));
        }
        if n < n_hi {
            pair = split_apply_tilde(&data, &pair, 1);
        }
    }
    if norms.iter().all(|&(_, v)| v < 1e-14) {
        return Err(ThermoError::Bracket(
            "fit degenerate: all norms below 1e-14".into(),
        ));
    }
    // least squares on log(norm) = a + b n, dropping norms at the rounding
    // floor of the initial scale
    let floor = scale * 1e-13;
    let pts: Vec<(f64, f64)> = norms
        .iter()
        .filter(|&&(_, v)| v > floor)
        .map(|&(n, v)| (n as f64, v.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(ThermoError::Bracket(
            "fit degenerate: decay reached rounding level immediately".into(),
        ));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let a = (sy - b * sx) / n;
    let rms = (pts
        .iter()
        .map(|p| {
            let r = p.1 - (a + b * p.0);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(GapFit {
        ratio: b.exp(),
        residual: rms,
        norms,
    })
}
