//! Fixed-point sums Z^(n), truncated zeta logarithms, the per-level
//! factorization of the degree-weighted series into the three symbolic zeta
//! functions and the 0-vertex system, and pressure on the invariant curve.

use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{CodingError, ThermoError};
use crate::geometry::Geometry;
use crate::point::{for_each_fixed_point, multiplicities, Multiplicities, PointClass};
use crate::potential::{birkhoff_sum, to_f64, Potential};
use crate::thermo::{perron, PerronData, WeightedMatrix};
use crate::words::lex_min_open_cover;
use crate::geometry::Cell1;

/// Per-point data of the fixed points of f^n for one potential.
#[derive(Clone, Debug)]
pub struct LedgerRow {
    pub walk: Vec<Cell1>,
    pub class: PointClass,
    pub degree: u64,
    pub mult: Multiplicities,
    /// Exact Birkhoff sum S_n phi at the point.
    pub s_n: BigRational,
}

#[derive(Clone, Debug)]
pub struct PointLedger {
    pub n: usize,
    pub rows: Vec<LedgerRow>,
}

pub fn point_ledger(
    g: &Geometry,
    phi: &Potential,
    n: usize,
    cap: u64,
) -> Result<PointLedger, CodingError> {
    let mut rows = Vec::new();
    for_each_fixed_point(g, n, cap, |fp| {
        let point = fp.point();
        let mult = multiplicities(g, &fp.walk);
        let s_n = birkhoff_sum(g, phi, &point, n);
        rows.push(LedgerRow {
            walk: fp.walk,
            class: fp.class,
            degree: fp.degree,
            mult,
            s_n,
        });
    })?;
    rows.sort_by(|a, b| a.walk.cmp(&b.walk));
    Ok(PointLedger { n, rows })
}

/// The five systems whose fixed-point sums enter the factorization.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ZSystem {
    /// Fixed points of the map itself.
    Map,
    /// Tile shift.
    Tile,
    /// Edge-color shift.
    EdgeColor,
    /// Edge shift.
    Edge,
    /// The induced system on the 0-vertices.
    Post,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ZWeight {
    One,
    Degree,
}

/// Z^(n)(s) = sum over the system's n-periodic points of w(x) e^{-s S_n}.
/// Symbolic systems share the point values of phi through the factor maps.
pub fn zn(ledger: &PointLedger, system: ZSystem, weight: ZWeight, s: Complex64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for row in &ledger.rows {
        let count = match system {
            ZSystem::Map => 1,
            ZSystem::Tile => row.mult.tile,
            ZSystem::EdgeColor => row.mult.pair,
            ZSystem::Edge => row.mult.edge,
            ZSystem::Post => row.mult.post,
        };
        if count == 0 {
            continue;
        }
        let w = match weight {
            ZWeight::One => 1.0,
            ZWeight::Degree => row.degree as f64,
        };
        let z = (-s * to_f64(&row.s_n)).exp();
        total += z * (w * count as f64);
    }
    total
}

#[derive(Clone, Debug)]
pub struct SeriesTerm {
    pub n: usize,
    pub z: Complex64,
    /// |Z^(n)| / n, the summand magnitude of log zeta.
    pub magnitude: f64,
}

#[derive(Clone, Debug)]
pub struct SeriesAccumulator {
    pub s: Complex64,
    pub terms: Vec<SeriesTerm>,
    pub log_sum: Complex64,
    /// Geometric decrease of |Z^(n)|/n over the last third of the terms.
    pub tail_decreasing: bool,
}

/// Truncated log zeta: sum_{n <= N} Z^(n)(s) / n, with a convergence
/// diagnostic on the tail.
pub fn zeta_log_truncated(
    g: &Geometry,
    phi: &Potential,
    system: ZSystem,
    weight: ZWeight,
    s: Complex64,
    n_max: usize,
    cap: u64,
) -> Result<SeriesAccumulator, CodingError> {
    let mut terms = Vec::new();
    let mut log_sum = Complex64::new(0.0, 0.0);
    for n in 1..=n_max {
        let ledger = point_ledger(g, phi, n, cap)?;
        let z = zn(&ledger, system, weight, s);
        let t = z / n as f64;
        log_sum += t;
        terms.push(SeriesTerm {
            n,
            z,
            magnitude: t.norm(),
        });
    }
    let tail_decreasing = {
        let from = terms.len().saturating_sub(terms.len() / 3).max(1);
        (from..terms.len()).all(|i| terms[i].magnitude < terms[i - 1].magnitude)
    };
    Ok(SeriesAccumulator {
        s,
        terms,
        log_sum,
        tail_decreasing,
    })
}

#[derive(Clone, Debug)]
pub struct FactorizationRow {
    pub n: usize,
    pub s: Complex64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

/// Per-level factorization: the degree-weighted fixed-point sum of the map
/// equals Z_tile - Z_pair + Z_edge + Z_post at every s, by the pointwise
/// counting identity.
pub fn verify_factorization(
    g: &Geometry,
    phi: &Potential,
    s_grid: &[Complex64],
    n_max: usize,
    cap: u64,
) -> Result<Vec<FactorizationRow>, CodingError> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let ledger = point_ledger(g, phi, n, cap)?;
        for &s in s_grid {
            let lhs = zn(&ledger, ZSystem::Map, ZWeight::Degree, s);
            let rhs = zn(&ledger, ZSystem::Tile, ZWeight::One, s)
                - zn(&ledger, ZSystem::EdgeColor, ZWeight::One, s)
                + zn(&ledger, ZSystem::Edge, ZWeight::One, s)
                + zn(&ledger, ZSystem::Post, ZWeight::One, s);
            rows.push(FactorizationRow {
                n,
                s,
                lhs,
                rhs,
                residual: (lhs - rhs).norm(),
            });
        }
    }
    Ok(rows)
}

/// Pressure of t*phi on the invariant curve: the Perron root of the weighted
/// edge-word matrix, with phi read through the lexicographically least
/// containing tile word of each edge word.
pub fn pressure_on_curve(
    g: &Geometry,
    phi: &Potential,
    t: f64,
) -> Result<(f64, PerronData), ThermoError> {
    let k = phi.depth;
    // admissible on-curve edge words of length k
    let curve = g.curve_edges();
    let mut words: Vec<Vec<u32>> = curve.iter().map(|&e| vec![e]).collect();
    for _ in 1..k {
        let mut next = Vec::new();
        for w in &words {
            let z = g.edge_image[*w.last().unwrap() as usize] as usize;
            for &e2 in &g.zero_edge_subs[z] {
                let mut w2 = w.clone();
                w2.push(e2);
                next.push(w2);
            }
        }
        words = next;
    }
    words.sort_unstable();
    let index: std::collections::BTreeMap<Vec<u32>, usize> = words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    let values: Vec<f64> = words
        .iter()
        .map(|w| {
            let cells: Vec<Cell1> = w.iter().map(|&e| Cell1::Edge(e)).collect();
            let cover = lex_min_open_cover(g, &cells, k).expect("edge word has a tile cover");
            (t * to_f64(phi.value(&cover))).exp()
        })
        .collect();
    // transfer step: w -> shift(w) + e
    let n = words.len();
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, w) in words.iter().enumerate() {
        let z = g.edge_image[w[k - 1] as usize] as usize;
        for &e2 in &g.zero_edge_subs[z] {
            let mut w2 = w[1..].to_vec();
            w2.push(e2);
            if let Some(&j) = index.get(&w2) {
                succ[i].push(j);
                pred[j].push(i);
            }
        }
    }
    // reuse the generic Perron iteration through a WeightedMatrix facade
    let mat = WeightedMatrix {
        graph: crate::thermo::WordGraph {
            depth: k,
            words,
            index,
            succ,
            pred,
            container: vec![crate::geometry::Color::White; n],
        },
        weight: values,
        log_weight: Vec::new(),
    };
    let p = perron(&mat)?;
    Ok((p.log_root, p))
}

/// P(f, t*phi) - P(f restricted to the curve, t*phi): the pressure gap.
pub fn curve_pressure_gap(g: &Geometry, phi: &Potential, t: f64) -> Result<(f64, f64, f64), ThermoError> {
    let full = crate::thermo::pressure(g, phi, t)?.pressure;
    let (curve, _) = pressure_on_curve(g, phi, t)?;
    Ok((full, curve, full - curve))
}
