//! Exact temporal distances, the local-integrability tester, the cohomology
//! (coboundary) detector, and the strong non-integrability probe.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero as NumZero};

use crate::error::MetricError;
use crate::geometry::{Cell1, Geometry};
use crate::point::{fixed_points, PointClass, ResolvedPoint};
use crate::potential::{
    birkhoff_sum, canonical_coding, sample_value, to_f64, Potential,
};
use crate::words::tile_step;

/// A backward branch: tiles xi_0, xi_{-1}, ..., xi_{-(L-1)} with
/// f(xi_{-(i+1)}) containing xi_{-i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch(pub Vec<u32>);

impl Branch {
    pub fn check(&self, g: &Geometry) -> Result<(), MetricError> {
        for i in 0..self.0.len().saturating_sub(1) {
            if !tile_step(g, self.0[i + 1], self.0[i]) {
                return Err(MetricError::BadBranch(format!(
                    "tile {} does not map over tile {}",
                    self.0[i + 1],
                    self.0[i]
                )));
            }
        }
        Ok(())
    }
}

/// Enumerate all backward branches of the given length, grouped by the color
/// of f(xi_0) (the 0-tile on which the branch acts).
pub fn backward_branches(g: &Geometry, len: usize) -> Vec<Branch> {
    let mut out = Vec::new();
    let mut word: Vec<u32> = Vec::with_capacity(len);
    fn rec(g: &Geometry, len: usize, word: &mut Vec<u32>, out: &mut Vec<Branch>) {
        if word.len() == len {
            out.push(Branch(word.clone()));
            return;
        }
        for t in 0..g.n_tiles() as u32 {
            // extend backwards: new tile maps over the last one
            if word.is_empty() || tile_step(g, t, *word.last().unwrap()) {
                word.push(t);
                rec(g, len, word, out);
                word.pop();
            }
        }
    }
    rec(g, len, &mut word, &mut out);
    out
}

/// Carrier prefix (length `upto`) of the i-th backward image of `x` along the
/// branch: the preimage point under the inverse branch through
/// xi_{-i}, ..., xi_0.
fn preimage_carriers(
    g: &Geometry,
    branch: &Branch,
    i: usize,
    x: &ResolvedPoint,
    upto: usize,
) -> Vec<Cell1> {
    // positions j <= i are pulled back inside the branch tiles; beyond that
    // the carriers are x's own.
    let mut chain: Vec<Cell1> = vec![Cell1::Tile(0); i + 1];
    let mut next = x.carrier(0);
    for j in (0..=i).rev() {
        let target = g.container0(next);
        let c = crate::point::pull_back_in(g, Cell1::Tile(branch.0[i - j]), target)
            .expect("admissible branch pulls back carriers");
        chain[j] = c;
        next = c;
    }
    let mut out = Vec::with_capacity(upto);
    for j in 0..upto {
        if j <= i {
            out.push(chain[j]);
        } else {
            out.push(x.carrier(j - i - 1));
        }
    }
    out
}

/// One-branch telescoped difference Delta_{phi, xi}(x, y), truncated at the
/// potential depth (later terms of a depth-k potential vanish).
pub fn branch_delta(
    g: &Geometry,
    phi: &Potential,
    xi: &Branch,
    x: &ResolvedPoint,
    y: &ResolvedPoint,
) -> Result<BigRational, MetricError> {
    xi.check(g)?;
    let k = phi.depth;
    if xi.0.len() < k {
        return Err(MetricError::BadBranch(format!(
            "branch of length {} is shorter than the potential depth {k}",
            xi.0.len()
        )));
    }
    // x and y must lie in a common 1-tile inside f(xi_0).
    let common = g
        .tiles_containing(x.carrier(0))
        .into_iter()
        .any(|t| {
            g.cell_contains(Cell1::Tile(t), y.carrier(0))
                && tile_step(g, xi.0[0], t)
        });
    if !common {
        return Err(MetricError::BadBranch(
            "points do not lie in a common 1-tile inside f(xi_0)".into(),
        ));
    }
    let mut sum = BigRational::zero();
    for i in 0..k {
        let cx = preimage_carriers(g, xi, i, x, k);
        let cy = preimage_carriers(g, xi, i, y, k);
        sum += sample_value(g, phi, &cx) - sample_value(g, phi, &cy);
    }
    Ok(sum)
}

/// Term of index i of the Delta series (exposed for the truncation assertion).
pub fn branch_delta_term(
    g: &Geometry,
    phi: &Potential,
    xi: &Branch,
    x: &ResolvedPoint,
    y: &ResolvedPoint,
    i: usize,
) -> BigRational {
    let k = phi.depth;
    let cx = preimage_carriers(g, xi, i, x, k);
    let cy = preimage_carriers(g, xi, i, y, k);
    sample_value(g, phi, &cx) - sample_value(g, phi, &cy)
}

/// Temporal distance: Delta_{phi,xi}(x,y) - Delta_{phi,eta}(x,y). The two
/// branches must start over the same 0-tile.
pub fn temporal_distance(
    g: &Geometry,
    phi: &Potential,
    xi: &Branch,
    eta: &Branch,
    x: &ResolvedPoint,
    y: &ResolvedPoint,
) -> Result<BigRational, MetricError> {
    if g.tile_color[xi.0[0] as usize] != g.tile_color[eta.0[0] as usize] {
        return Err(MetricError::BadBranch(
            "branches do not start over a common 0-tile".into(),
        ));
    }
    Ok(branch_delta(g, phi, xi, x, y)? - branch_delta(g, phi, eta, x, y)?)
}

#[derive(Clone, Debug)]
pub struct NliWitness {
    pub xi: Branch,
    pub eta: Branch,
    pub x: ResolvedPoint,
    pub y: ResolvedPoint,
    pub value: BigRational,
}

#[derive(Clone, Debug)]
pub enum NliVerdict {
    /// Every sampled temporal distance vanished.
    LocallyIntegrableOnSamples { samples: usize },
    /// Some temporal distance is nonzero.
    Witness(Box<NliWitness>),
}

#[derive(Clone, Copy, Debug)]
pub struct NliConfig {
    /// Periods of the sampled periodic points.
    pub max_period: usize,
    /// Include on-curve periodic points in the sweep. Off-curve pairs are the
    /// exactness class on which vanishing is equivalent to symbolic
    /// cohomology; curve pairs see the boundary behavior of the canonical
    /// tile evaluation.
    pub include_curve_pairs: bool,
    pub cap: u64,
    /// Budget on evaluated temporal distances.
    pub max_samples: usize,
}

impl Default for NliConfig {
    fn default() -> Self {
        NliConfig {
            max_period: 2,
            include_curve_pairs: false,
            cap: 1 << 20,
            max_samples: 4000,
        }
    }
}

/// Deterministic temporal-distance sweep over branch pairs and periodic
/// point pairs lying in a common 1-tile.
pub fn nli_test(g: &Geometry, phi: &Potential, cfg: &NliConfig) -> Result<NliVerdict, MetricError> {
    let mut points: Vec<ResolvedPoint> = Vec::new();
    for n in 1..=cfg.max_period {
        let fps = fixed_points(g, n, cfg.cap)
            .map_err(|e| MetricError::BadBranch(e.to_string()))?;
        for fp in fps {
            if !cfg.include_curve_pairs && fp.class != PointClass::TileInterior {
                continue;
            }
            let p = fp.point();
            if !points.contains(&p) {
                points.push(p);
            }
        }
    }
    points.sort();

    let blen = phi.depth.max(1);
    let branches = backward_branches(g, blen);
    let mut samples = 0usize;
    for a in 0..branches.len() {
        for b in (a + 1)..branches.len() {
            let (xi, eta) = (&branches[a], &branches[b]);
            if g.tile_color[xi.0[0] as usize] != g.tile_color[eta.0[0] as usize] {
                continue;
            }
            for x in &points {
                for y in &points {
                    if x >= y {
                        continue;
                    }
                    if samples >= cfg.max_samples {
                        return Ok(NliVerdict::LocallyIntegrableOnSamples { samples });
                    }
                    // common 1-tile inside f(xi_0)
                    let ok = g.tiles_containing(x.carrier(0)).into_iter().any(|t| {
                        g.cell_contains(Cell1::Tile(t), y.carrier(0))
                            && tile_step(g, xi.0[0], t)
                    });
                    if !ok {
                        continue;
                    }
                    samples += 1;
                    let v = temporal_distance(g, phi, xi, eta, x, y)?;
                    if !v.is_zero() {
                        return Ok(NliVerdict::Witness(Box::new(NliWitness {
                            xi: xi.clone(),
                            eta: eta.clone(),
                            x: x.clone(),
                            y: y.clone(),
                            value: v,
                        })));
                    }
                }
            }
        }
    }
    Ok(NliVerdict::LocallyIntegrableOnSamples { samples })
}

#[derive(Clone, Debug)]
pub enum CohomologyVerdict {
    /// All periodic Birkhoff averages agree: the candidate constant.
    Constant(BigRational),
    /// Two fixed points with different averages.
    Witness {
        x: ResolvedPoint,
        y: ResolvedPoint,
        sx: BigRational,
        sy: BigRational,
    },
}

/// If phi is cohomologous to a constant K then S_n phi = n K at every fixed
/// point of f^n; return K when all sampled averages agree exactly.
pub fn cohomology_test(
    g: &Geometry,
    phi: &Potential,
    n_max: usize,
    cap: u64,
) -> Result<CohomologyVerdict, crate::error::CodingError> {
    let mut first: Option<(ResolvedPoint, BigRational)> = None;
    for n in 1..=n_max {
        for fp in fixed_points(g, n, cap)? {
            let x = fp.point();
            if x.period() != n {
                continue; // counted at its own period
            }
            let avg = birkhoff_sum(g, phi, &x, n)
                / BigRational::from_integer(BigInt::from(n as i64));
            match &first {
                None => first = Some((x, avg)),
                Some((x0, k)) => {
                    if avg != *k {
                        return Ok(CohomologyVerdict::Witness {
                            x: x0.clone(),
                            y: x,
                            sx: k.clone(),
                            sy: avg,
                        });
                    }
                }
            }
        }
    }
    Ok(CohomologyVerdict::Constant(first.expect("fixed points exist").1))
}

/// One row of the strong non-integrability probe.
#[derive(Clone, Debug)]
pub struct SniRow {
    pub m: usize,
    pub n: usize,
    /// The M-tile under scrutiny (its word).
    pub tile: Vec<u32>,
    pub branch_a: Vec<u32>,
    pub branch_b: Vec<u32>,
    /// |S_N phi(s1 x1) - S_N phi(s2 x1) - S_N phi(s1 x2) + S_N phi(s2 x2)| / d(x1,x2)^alpha
    pub ratio: f64,
}

#[derive(Clone, Debug)]
pub struct SniReport {
    pub rows: Vec<SniRow>,
    /// Worst (smallest) over scanned (M, N) of the best (largest) ratio over
    /// branch pairs.
    pub floor: f64,
    pub threshold: f64,
    pub clears: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct SniConfig {
    pub n0: usize,
    pub n_span: usize,
    pub m0: usize,
    pub m_max: usize,
    pub lambda: f64,
    pub alpha: f64,
    pub threshold: f64,
    /// Cap on branch pairs per (M, N, tile).
    pub max_branch_pairs: usize,
}

impl Default for SniConfig {
    fn default() -> Self {
        SniConfig {
            n0: 2,
            n_span: 2,
            m0: 1,
            m_max: 2,
            lambda: 2.0,
            alpha: 1.0,
            threshold: 1e-9,
            max_branch_pairs: 64,
        }
    }
}

/// Numerical probe of the strong non-integrability ratios over nested tiles
/// and inverse-branch pairs. Verdicts are restricted to the scanned range.
pub fn sni_probe(
    g: &Geometry,
    phi: &Potential,
    cfg: &SniConfig,
) -> Result<SniReport, MetricError> {
    let k = phi.depth;
    // Candidate M0-tiles: lexicographically least white and black tile words.
    let m0_words: Vec<Vec<u32>> = {
        let all = crate::potential::admissible_words(g, cfg.m0);
        let mut white = None;
        let mut black = None;
        for w in all {
            let col = g.tile_color[*w.last().unwrap() as usize];
            match col {
                crate::geometry::Color::White if white.is_none() => white = Some(w),
                crate::geometry::Color::Black if black.is_none() => black = Some(w),
                _ => {}
            }
        }
        [white, black].into_iter().flatten().collect()
    };

    let mut rows = Vec::new();
    let mut floor = f64::INFINITY;
    for y0 in &m0_words {
        for m in cfg.m0.max(cfg.m0)..=cfg.m_max {
            // M-tiles inside the M0-tile: extensions of its word.
            let m_tiles: Vec<Vec<u32>> = extensions(g, y0, m);
            let Some(x_tile) = m_tiles.first() else { continue };
            // Two vertex points deep inside the tile: resolved from interior
            // cells at level m + 2.
            let Some((x1, x2)) = deep_point_pair(g, x_tile) else {
                continue;
            };
            let sep = crate::metric::separation_level(g, &x1, &x2, 4 * (m + 8))
                .unwrap_or(m + 2);
            let dist = cfg.lambda.powf(-(sep as f64) * cfg.alpha);
            for n in cfg.n0..=(cfg.n0 + cfg.n_span) {
                // Branch words: length-n prefixes mapping onto the M0-tile.
                let branch_words = prefix_words(g, y0, n, 2 * cfg.max_branch_pairs);
                let mut best = 0.0f64;
                let mut best_pair: Option<(Vec<u32>, Vec<u32>)> = None;
                let mut pairs = 0usize;
                'outer: for a in 0..branch_words.len() {
                    for b in (a + 1)..branch_words.len() {
                        if pairs >= cfg.max_branch_pairs {
                            break 'outer;
                        }
                        pairs += 1;
                        let num = sni_numerator(
                            g, phi, k, n, &branch_words[a], &branch_words[b], &x1, &x2,
                        );
                        let ratio = to_f64(&num).abs() / dist;
                        if ratio > best {
                            best = ratio;
                            best_pair =
                                Some((branch_words[a].clone(), branch_words[b].clone()));
                        }
                    }
                }
                if let Some((ba, bb)) = best_pair {
                    rows.push(SniRow {
                        m,
                        n,
                        tile: x_tile.clone(),
                        branch_a: ba,
                        branch_b: bb,
                        ratio: best,
                    });
                }
                if best < floor {
                    floor = best;
                }
            }
        }
    }
    if !floor.is_finite() {
        return Err(MetricError::BadBranch(
            "no admissible branch pair at these parameters".into(),
        ));
    }
    Ok(SniReport {
        rows,
        floor,
        threshold: cfg.threshold,
        clears: floor >= cfg.threshold,
    })
}

/// Words of length `len` extending `base` (base is a prefix).
fn extensions(g: &Geometry, base: &[u32], len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![base.to_vec()];
    while out[0].len() < len {
        let mut next = Vec::new();
        for w in &out {
            for t in 0..g.n_tiles() as u32 {
                if tile_step(g, *w.last().unwrap(), t) {
                    let mut w2 = w.clone();
                    w2.push(t);
                    next.push(w2);
                }
            }
        }
        out = next;
    }
    out.sort_unstable();
    out
}

/// Words w of length `n` + |base| whose length-n shift is `base`
/// (inverse branches of f^n over the base tile), capped.
fn prefix_words(g: &Geometry, base: &[u32], n: usize, cap: usize) -> Vec<Vec<u32>> {
    let mut out = vec![base.to_vec()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &out {
            for t in 0..g.n_tiles() as u32 {
                if tile_step(g, t, w[0]) {
                    let mut w2 = vec![t];
                    w2.extend_from_slice(w);
                    next.push(w2);
                }
            }
        }
        out = next;
        if out.len() > cap * 4 {
            out.sort_unstable();
            out.truncate(cap * 4);
        }
    }
    out.sort_unstable();
    out.truncate(cap);
    out
}

/// Two vertex points deep inside the tile word: interior level-(m+2) vertices
/// whose containing tiles all refine the given word.
fn deep_point_pair(g: &Geometry, tile: &[u32]) -> Option<(ResolvedPoint, ResolvedPoint)> {
    let m = tile.len();
    let depth = m + 2;
    // enumerate vertex carrier words of length `depth` prefixed inside `tile`
    let mut found: Vec<ResolvedPoint> = Vec::new();
    let mut word: Vec<Cell1> = Vec::new();
    fn rec(
        g: &Geometry,
        tile: &[u32],
        depth: usize,
        word: &mut Vec<Cell1>,
        found: &mut Vec<ResolvedPoint>,
    ) {
        if found.len() >= 8 {
            return;
        }
        let j = word.len();
        if j == depth {
            if let Cell1::Vert(_) = word[depth - 1] {
                // deep inside: containing tiles at every level <= m stay in `tile`
                let inside = (0..tile.len()).all(|i| match word[i] {
                    Cell1::Tile(t) => t == tile[i],
                    _ => false,
                });
                if inside {
                    // resolve: finite vertex word continues along the post orbit
                    if let Some(p) = resolve_vertex_word(g, word) {
                        if !found.contains(&p) {
                            found.push(p);
                        }
                    }
                }
            }
            return;
        }
        let cands: Vec<Cell1> = if j == 0 {
            vec![Cell1::Tile(tile[0])]
        } else {
            g.carrier_succs(word[j - 1]).to_vec()
        };
        for c in cands {
            if j < tile.len() {
                if let Cell1::Tile(t) = c {
                    if t != tile[j] {
                        continue;
                    }
                } else {
                    continue;
                }
            }
            word.push(c);
            rec(g, tile, depth, word, found);
            word.pop();
        }
    }
    rec(g, tile, depth, &mut word, &mut found);
    if found.len() < 2 {
        return None;
    }
    // prefer the pair differing earliest in the itinerary: a depth-k
    // potential only sees coding positions below k-1
    let mut best: Option<(usize, usize, usize)> = None;
    for i in 0..found.len() {
        for j in (i + 1)..found.len() {
            let d = (0..256)
                .find(|&l| found[i].carrier(l) != found[j].carrier(l))
                .unwrap_or(usize::MAX);
            match best {
                None => best = Some((d, i, j)),
                Some((bd, ..)) if d < bd => best = Some((d, i, j)),
                _ => {}
            }
        }
    }
    let (_, i, j) = best.unwrap();
    Some((found[i].clone(), found[j].clone()))
}

/// Resolve a finite carrier word ending in a vertex into a full point: the
/// itinerary continues with the postcritical orbit.
pub fn resolve_vertex_word(g: &Geometry, word: &[Cell1]) -> Option<ResolvedPoint> {
    let Cell1::Vert(v) = *word.last()? else {
        return None;
    };
    let mut pre: Vec<Cell1> = word.to_vec();
    // after the vertex, the orbit runs through post points
    let mut p = g.vert_image[v as usize];
    let mut seen: Vec<u32> = Vec::new();
    let mut tail: Vec<Cell1> = Vec::new();
    loop {
        if let Some(pos) = seen.iter().position(|&q| q == p) {
            let cyc = tail.split_off(pos);
            pre.extend(tail);
            return Some(ResolvedPoint::new(pre, cyc));
        }
        seen.push(p);
        tail.push(Cell1::Vert(g.post_vert[p as usize]));
        p = g.post_map[p as usize];
    }
}

/// The mixed second difference S_N(s1 x1) - S_N(s2 x1) - S_N(s1 x2) + S_N(s2 x2),
/// evaluated symbolically along branch-concatenated codings. The branch words
/// have the base tile word as their length-N shift, and the preimage of a
/// point deep inside the base is coded by the branch prefix followed by the
/// point's own canonical coding.
fn sni_numerator(
    g: &Geometry,
    phi: &Potential,
    k: usize,
    n_steps: usize,
    wa: &[u32],
    wb: &[u32],
    x1: &ResolvedPoint,
    x2: &ResolvedPoint,
) -> BigRational {
    debug_assert_eq!(wa.len(), wb.len());
    let s = |w: &[u32], x: &ResolvedPoint| -> BigRational {
        let cx = canonical_coding(g, x);
        let window = |j: usize| -> Vec<u32> {
            (j..j + k)
                .map(|i| if i < n_steps { w[i] } else { cx.at(i - n_steps) })
                .collect()
        };
        let mut sum = BigRational::zero();
        for j in 0..n_steps {
            sum += phi.value(&window(j));
        }
        sum
    };
    s(wa, x1) - s(wb, x1) - s(wa, x2) + s(wb, x2)
}
