//! Depth-k locally constant potentials with exact rational values.
//!
//! A potential assigns a rational to every admissible length-k tile word.
//! Point evaluation and Birkhoff sums run along a point's canonical tile
//! coding: the lexicographically least periodic coding for periodic points
//! (doubling the period at points that admit no periodic coding), the greedy
//! least coding otherwise. Evaluating along one fixed coding keeps every
//! cross-system identity exact, in particular the telescoping of symbolic
//! coboundaries over periodic orbits.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero as NumZero};

use crate::error::MetricError;
use crate::geometry::Geometry;
use crate::point::ResolvedPoint;
use crate::words::{lex_min_closed_cover, lex_min_open_cover, tile_step};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse "p/q", an integer, or a plain decimal into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((a, b)) = s.split_once('.') {
        let neg = a.trim_start().starts_with('-');
        let ip: BigInt = if a.is_empty() || a == "-" {
            BigInt::from(0)
        } else {
            a.parse().ok()?
        };
        if b.chars().any(|c| !c.is_ascii_digit()) {
            return None;
        }
        let scale = BigInt::from(10u32).pow(b.len() as u32);
        let fp: BigInt = if b.is_empty() { BigInt::from(0) } else { b.parse().ok()? };
        let frac = BigRational::new(fp, scale.clone());
        let whole = BigRational::from_integer(ip);
        return Some(if neg { whole - frac } else { whole + frac });
    }
    let n: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(n))
}

/// Every admissible tile word of the given length, lexicographic order.
pub fn admissible_words(g: &Geometry, len: usize) -> Vec<Vec<u32>> {
    assert!(len >= 1);
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(len);
    fn rec(g: &Geometry, len: usize, word: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if word.len() == len {
            out.push(word.clone());
            return;
        }
        for t in 0..g.n_tiles() as u32 {
            if word.is_empty() || tile_step(g, *word.last().unwrap(), t) {
                word.push(t);
                rec(g, len, word, out);
                word.pop();
            }
        }
    }
    rec(g, len, &mut word, &mut out);
    out
}

/// A depth-k locally constant potential.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential {
    pub depth: usize,
    values: BTreeMap<Vec<u32>, BigRational>,
}

impl Potential {
    pub fn new(depth: usize, values: BTreeMap<Vec<u32>, BigRational>) -> Potential {
        assert!(depth >= 1);
        Potential { depth, values }
    }

    pub fn constant(g: &Geometry, depth: usize, c: BigRational) -> Potential {
        let values = admissible_words(g, depth)
            .into_iter()
            .map(|w| (w, c.clone()))
            .collect();
        Potential { depth, values }
    }

    /// Depth-1 indicator of a single tile, scaled.
    pub fn indicator(g: &Geometry, tile: u32, value: BigRational) -> Potential {
        let values = admissible_words(g, 1)
            .into_iter()
            .map(|w| {
                let v = if w[0] == tile {
                    value.clone()
                } else {
                    BigRational::zero()
                };
                (w, v)
            })
            .collect();
        Potential { depth: 1, values }
    }

    /// Strictly positive depth-1 potential separating the tiles: 1 + t/(4 deg).
    /// Not cohomologous to a constant on any rule with at least two tiles of
    /// equal color meeting distinct fixed words.
    pub fn graded(g: &Geometry) -> Potential {
        let n = g.n_tiles() as i64;
        let values = admissible_words(g, 1)
            .into_iter()
            .map(|w| (w.clone(), rat(1, 1) + rat(w[0] as i64, 2 * n)))
            .collect();
        Potential { depth: 1, values }
    }

    /// Symbolic coboundary plus constant: phi(w) = c + beta(w[1..]) - beta(w[..k-1])
    /// from a depth-(k-1) table beta.
    pub fn coboundary(g: &Geometry, c: BigRational, beta: &Potential) -> Potential {
        let depth = beta.depth + 1;
        let values = admissible_words(g, depth)
            .into_iter()
            .map(|w| {
                let head = beta.values[&w[..depth - 1].to_vec()].clone();
                let tail = beta.values[&w[1..].to_vec()].clone();
                (w, c.clone() + tail - head)
            })
            .collect();
        Potential { depth, values }
    }

    pub fn from_table(
        g: &Geometry,
        depth: usize,
        table: BTreeMap<Vec<u32>, BigRational>,
    ) -> Result<Potential, MetricError> {
        for w in admissible_words(g, depth) {
            if !table.contains_key(&w) {
                return Err(MetricError::MissingValue(format!("{w:?}")));
            }
        }
        Ok(Potential {
            depth,
            values: table,
        })
    }

    pub fn value(&self, w: &[u32]) -> &BigRational {
        &self.values[w]
    }

    pub fn words(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.values.iter()
    }

    pub fn scale(&self, c: &BigRational) -> Potential {
        Potential {
            depth: self.depth,
            values: self
                .values
                .iter()
                .map(|(w, v)| (w.clone(), v * c))
                .collect(),
        }
    }

    pub fn add(&self, other: &Potential) -> Potential {
        assert_eq!(self.depth, other.depth);
        Potential {
            depth: self.depth,
            values: self
                .values
                .iter()
                .map(|(w, v)| (w.clone(), v + &other.values[w]))
                .collect(),
        }
    }

    pub fn min_value(&self) -> BigRational {
        self.values.values().cloned().fold(None, |acc: Option<BigRational>, v| {
            Some(match acc {
                None => v,
                Some(a) => a.min(v),
            })
        })
        .expect("nonempty table")
    }

    pub fn max_abs(&self) -> BigRational {
        self.values
            .values()
            .map(|v| v.abs())
            .fold(BigRational::zero(), |a, b| a.max(b))
    }

    /// Largest n <= cap with min over admissible (n+k)-words of S_n > 0,
    /// together with that minimum. Certifies eventual positivity.
    pub fn certify_eventually_positive(
        &self,
        g: &Geometry,
        cap: usize,
    ) -> Option<(usize, BigRational)> {
        // min-plus dynamic programming over word windows:
        // state = admissible depth-k word; step appends one tile and pays
        // the value of the outgoing window.
        let words = admissible_words(g, self.depth);
        let index: BTreeMap<Vec<u32>, usize> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        // transitions w -> w' with w' = shift(w) + t
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); words.len()];
        for (i, w) in words.iter().enumerate() {
            for t in 0..g.n_tiles() as u32 {
                if tile_step(g, w[self.depth - 1], t) {
                    let mut w2 = w[1..].to_vec();
                    w2.push(t);
                    if let Some(&j) = index.get(&w2) {
                        succ[i].push(j);
                    }
                }
            }
        }
        let mut best: Vec<Option<BigRational>> =
            words.iter().map(|_| Some(BigRational::zero())).collect();
        for n in 1..=cap {
            // append: new_best[j] = min over predecessors i of best[i] + value(words[i])
            let mut next: Vec<Option<BigRational>> = vec![None; words.len()];
            for (i, b) in best.iter().enumerate() {
                let Some(b) = b else { continue };
                let v = b + self.value(&words[i]);
                for &j in &succ[i] {
                    match &next[j] {
                        None => next[j] = Some(v.clone()),
                        Some(cur) if v < *cur => next[j] = Some(v.clone()),
                        _ => {}
                    }
                }
            }
            best = next;
            let min = best
                .iter()
                .flatten()
                .cloned()
                .fold(None, |acc: Option<BigRational>, v| {
                    Some(match acc {
                        None => v,
                        Some(a) => a.min(v),
                    })
                })?;
            if min > BigRational::zero() {
                return Some((n, min));
            }
        }
        None
    }
}

/// Canonical tile coding of a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalCoding {
    pub pre: Vec<u32>,
    pub cyc: Vec<u32>,
    /// True when the cycle codes two turns around the orbit (points with no
    /// periodic coding of their own period).
    pub half: bool,
}

/// Compute the canonical tile coding of a resolved point.
pub fn canonical_coding(g: &Geometry, x: &ResolvedPoint) -> CanonicalCoding {
    if x.is_periodic() {
        if let Some(cyc) = lex_min_closed_cover(g, &x.cyc) {
            return CanonicalCoding {
                pre: Vec::new(),
                cyc,
                half: false,
            };
        }
        let doubled: Vec<_> = x.cyc.iter().chain(x.cyc.iter()).copied().collect();
        let cyc = lex_min_closed_cover(g, &doubled)
            .expect("every periodic point admits a coding of twice its period");
        return CanonicalCoding {
            pre: Vec::new(),
            cyc,
            half: true,
        };
    }
    // Greedy least coding; it becomes periodic once the pair
    // (previous tile, phase in the itinerary cycle) repeats.
    let p = x.cyc.len();
    let mut pre: Vec<u32> = Vec::new();
    let mut seen: BTreeMap<(u32, usize), usize> = BTreeMap::new();
    let mut j = 0usize;
    loop {
        let cell = x.carrier(j);
        let mut cands = g.tiles_containing(cell);
        cands.sort_unstable();
        let prev = pre.last().copied();
        let pick = cands
            .into_iter()
            .find(|&t| match prev {
                None => true,
                Some(pt) => tile_step(g, pt, t),
            })
            .expect("containing tile always extends");
        pre.push(pick);
        if j >= x.pre.len() {
            let phase = (j - x.pre.len()) % p;
            if let Some(&j0) = seen.get(&(pick, phase)) {
                // positions [j0, j) repeat forever
                let cycle = pre[j0..j].to_vec();
                pre.truncate(j0);
                return CanonicalCoding {
                    pre,
                    cyc: cycle,
                    half: false,
                };
            }
            seen.insert((pick, phase), j);
        }
        j += 1;
    }
}

impl CanonicalCoding {
    /// Tile at position j of the infinite coding.
    pub fn at(&self, j: usize) -> u32 {
        if j < self.pre.len() {
            self.pre[j]
        } else {
            self.cyc[(j - self.pre.len()) % self.cyc.len()]
        }
    }

    /// The depth-k window starting at position j.
    pub fn window(&self, j: usize, k: usize) -> Vec<u32> {
        (j..j + k).map(|i| self.at(i)).collect()
    }
}

/// Point value of the potential: the value at the head window of the point's
/// canonical coding (averaging the two half-turn windows when the canonical
/// coding doubles the period).
pub fn point_value(g: &Geometry, phi: &Potential, x: &ResolvedPoint) -> BigRational {
    let c = canonical_coding(g, x);
    if c.half {
        let p = c.cyc.len() / 2;
        let a = phi.value(&c.window(0, phi.depth)).clone();
        let b = phi.value(&c.window(p, phi.depth)).clone();
        (a + b) / BigRational::from_integer(BigInt::from(2))
    } else {
        phi.value(&c.window(0, phi.depth)).clone()
    }
}

/// Value of the potential at a point given by the first cells of its
/// itinerary, via the lexicographically least containing word. Used by the
/// temporal-distance machinery, where the preimage points are generally not
/// periodic.
pub fn sample_value(
    g: &Geometry,
    phi: &Potential,
    carriers: &[crate::geometry::Cell1],
) -> BigRational {
    let w = lex_min_open_cover(g, carriers, phi.depth).expect("containing word exists");
    phi.value(&w).clone()
}

/// Exact Birkhoff sum S_n phi along the canonical coding of the point.
///
/// Over full periods the sum runs along the orbit's canonical cover (the
/// least closed cover of the least rotation of the itinerary cycle), so all
/// points of one orbit report the same cycle sum.
pub fn birkhoff_sum(
    g: &Geometry,
    phi: &Potential,
    x: &ResolvedPoint,
    n: usize,
) -> BigRational {
    if n == 0 {
        return BigRational::zero();
    }
    if x.is_periodic() {
        let p = x.period();
        if n % p == 0 {
            let base = crate::words::least_rotation(&x.cyc);
            let (cover, half) = match lex_min_closed_cover(g, &base) {
                Some(c) => (c, false),
                None => {
                    let doubled: Vec<_> =
                        base.iter().chain(base.iter()).copied().collect();
                    (
                        lex_min_closed_cover(g, &doubled)
                            .expect("doubled period always admits a cover"),
                        true,
                    )
                }
            };
            let coding = CanonicalCoding {
                pre: Vec::new(),
                cyc: cover,
                half,
            };
            let mut s = BigRational::zero();
            for j in 0..coding.cyc.len() {
                s += phi.value(&coding.window(j, phi.depth));
            }
            let turns = if half {
                BigRational::new(BigInt::from(n as i64), BigInt::from(2 * p as i64))
            } else {
                BigRational::new(BigInt::from(n as i64), BigInt::from(p as i64))
            };
            return s * turns;
        }
    }
    let c = canonical_coding(g, x);
    let mut s = BigRational::zero();
    for j in 0..n {
        s += phi.value(&c.window(j, phi.depth));
    }
    s
}

/// phi + t for a rational constant t, at the same depth.
pub fn shift_by_constant(g: &Geometry, phi: &Potential, t: &BigRational) -> Potential {
    phi.add(&Potential::constant(g, phi.depth, t.clone()))
}

pub fn to_f64(v: &BigRational) -> f64 {
    let n = v.numer();
    let d = v.denom();
    // exact when representable; otherwise best-effort via string fallback
    let nf = n.to_string().parse::<f64>().unwrap_or(f64::NAN);
    let df = d.to_string().parse::<f64>().unwrap_or(f64::NAN);
    nf / df
}

pub fn one() -> BigRational {
    BigRational::one()
}
