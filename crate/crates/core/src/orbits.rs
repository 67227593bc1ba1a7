//! Primitive-orbit ledgers with weighted lengths, the logarithmic integral,
//! orbit counting, and the prime-orbit-counting report.

use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero as NumZero};

use crate::error::{CodingError, CountError};
use crate::geometry::{Cell1, Geometry};
use crate::point::{for_each_fixed_point, PointClass, ResolvedPoint};
use crate::potential::{birkhoff_sum, to_f64, Potential};
use crate::temporal::{cohomology_test, CohomologyVerdict};
use crate::words::{least_rotation, minimal_period};

/// A primitive periodic orbit of the map.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitRecord {
    pub period: usize,
    /// Lexicographically least rotation of the itinerary cycle.
    pub rep: Vec<Cell1>,
    /// Weighted length: the Birkhoff sum of the potential over the orbit.
    pub length: BigRational,
    /// Product of the local degrees along the orbit.
    pub degree: u64,
    pub class: PointClass,
}

#[derive(Clone, Debug)]
pub struct OrbitLedger {
    pub p_max: usize,
    pub records: Vec<OrbitRecord>,
    /// Every orbit with weighted length at most this value is present.
    pub horizon: f64,
}

/// Build the primitive-orbit ledger up to the given period.
pub fn primitive_orbits(
    g: &Geometry,
    phi: &Potential,
    p_max: usize,
    cap: u64,
) -> Result<OrbitLedger, CodingError> {
    let mut records = Vec::new();
    for n in 1..=p_max {
        for_each_fixed_point(g, n, cap, |fp| {
            if minimal_period(&fp.walk) != n {
                return; // a repeat of a shorter orbit
            }
            let rep = least_rotation(&fp.walk);
            if rep != fp.walk {
                return; // one representative per orbit
            }
            let point = ResolvedPoint::new(Vec::new(), fp.walk.clone());
            let length = birkhoff_sum(g, phi, &point, n);
            records.push(OrbitRecord {
                period: n,
                rep,
                length,
                degree: fp.degree,
                class: fp.class,
            });
        })?;
    }
    records.sort_by(|a, b| (a.period, &a.rep).cmp(&(b.period, &b.rep)));
    let horizon = completeness_horizon(g, phi, p_max);
    Ok(OrbitLedger {
        p_max,
        records,
        horizon,
    })
}

/// Completeness horizon: with l(tau) >= period * A for a certified positive
/// rate A, every orbit of weighted length <= p_max * A has period <= p_max.
pub fn completeness_horizon(g: &Geometry, phi: &Potential, p_max: usize) -> f64 {
    let min_word = phi.min_value();
    let rate = if min_word > BigRational::zero() {
        to_f64(&min_word)
    } else {
        match phi.certify_eventually_positive(g, 64) {
            Some((n, min)) => to_f64(&min) / n as f64,
            None => return f64::NEG_INFINITY,
        }
    };
    p_max as f64 * rate
}

/// Number of ledger orbits with weighted length at most T. Errors when T
/// exceeds the completeness horizon.
pub fn pi_count(ledger: &OrbitLedger, t: f64) -> Result<u64, CountError> {
    if t > ledger.horizon {
        return Err(CountError::Horizon {
            t,
            horizon: ledger.horizon,
        });
    }
    Ok(ledger
        .records
        .iter()
        .filter(|r| to_f64(&r.length) <= t)
        .count() as u64)
}

/// The Eulerian logarithmic integral: integral from 2 to y of dt / log t,
/// by adaptive Simpson quadrature. Absolute tolerance 1e-10, relaxed to the
/// f64 resolution of the result for large y.
pub fn li(y: f64) -> Result<f64, CountError> {
    if !(y > 1.0) {
        return Err(CountError::LiDomain(y));
    }
    if (y - 2.0).abs() < 1e-300 {
        return Ok(0.0);
    }
    let f = |t: f64| 1.0 / t.ln();
    adaptive_simpson(&f, 2.0, y, 1e-10, 60).ok_or(CountError::Quadrature)
}

fn adaptive_simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    depth: usize,
) -> Option<f64> {
    let c = 0.5 * (a + b);
    let fa = f(a);
    let fb = f(b);
    let fc = f(c);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    // an absolute tolerance below the floating-point resolution of the
    // result is unattainable; clamp to it
    let tol = tol.max(whole.abs() * 4e-15);
    rec_simpson(f, a, b, fa, fb, fc, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn rec_simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fc: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Option<f64> {
    let c = 0.5 * (a + b);
    let d = 0.5 * (a + c);
    let e = 0.5 * (c + b);
    let fd = f(d);
    let fe = f(e);
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Some(left + right + delta / 15.0);
    }
    if depth == 0 {
        return None;
    }
    let l = rec_simpson(f, a, c, fa, fc, fd, left, tol / 2.0, depth - 1)?;
    let r = rec_simpson(f, c, b, fc, fb, fe, right, tol / 2.0, depth - 1)?;
    Some(l + r)
}

#[derive(Clone, Debug)]
pub struct PotRow {
    pub t: f64,
    pub pi: u64,
    pub li: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug)]
pub struct PotReport {
    pub rows: Vec<PotRow>,
    /// Trend of log(pi(T) / Li(e^{s0 T})) across the last decade of T.
    pub log_residual_trend: Vec<(f64, f64)>,
    /// Potential cohomologous to a constant: lengths live on a lattice and
    /// the asymptotic comparison degenerates.
    pub lattice_constant: Option<BigRational>,
}

/// The prime-orbit-counting comparison table.
pub fn pot_report(
    g: &Geometry,
    phi: &Potential,
    ledger: &OrbitLedger,
    s0: f64,
    t_grid: &[f64],
    cap: u64,
) -> Result<PotReport, CountError> {
    let lattice = match cohomology_test(g, phi, 3.min(ledger.p_max), cap) {
        Ok(CohomologyVerdict::Constant(k)) => Some(k),
        _ => None,
    };
    let mut rows = Vec::new();
    for &t in t_grid {
        let pi = pi_count(ledger, t)?;
        let y = (s0 * t).exp();
        let liv = li(y)?;
        let ratio = if liv > 0.0 { pi as f64 / liv } else { f64::NAN };
        rows.push(PotRow {
            t,
            pi,
            li: liv,
            ratio,
        });
    }
    let t_hi = t_grid.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let trend = rows
        .iter()
        .filter(|r| r.t >= t_hi / 10.0 && r.ratio.is_finite() && r.ratio > 0.0)
        .map(|r| (r.t, r.ratio.ln()))
        .collect();
    Ok(PotReport {
        rows,
        log_residual_trend: trend,
        lattice_constant: lattice,
    })
}

const LEDGER_VERSION: &str = "thurston-ledger v1";

fn cell_token(c: &Cell1) -> String {
    match c {
        Cell1::Tile(t) => format!("T{t}"),
        Cell1::Edge(e) => format!("E{e}"),
        Cell1::Vert(v) => format!("V{v}"),
    }
}

fn parse_cell(tok: &str) -> Option<Cell1> {
    let (kind, num) = tok.split_at(1);
    let n: u32 = num.parse().ok()?;
    match kind {
        "T" => Some(Cell1::Tile(n)),
        "E" => Some(Cell1::Edge(n)),
        "V" => Some(Cell1::Vert(n)),
        _ => None,
    }
}

/// Lossless comma-separated export, sorted by (period, representative).
pub fn export_ledger(ledger: &OrbitLedger, mut w: impl Write) -> Result<(), CountError> {
    writeln!(w, "# {LEDGER_VERSION}")?;
    writeln!(w, "# p_max = {}, horizon = {:.12e}", ledger.p_max, ledger.horizon)?;
    writeln!(w, "period, representative, class, degree, length")?;
    for r in &ledger.records {
        let rep: Vec<String> = r.rep.iter().map(cell_token).collect();
        writeln!(
            w,
            "{}, {}, {}, {}, {}",
            r.period,
            rep.join("."),
            r.class.name(),
            r.degree,
            r.length
        )?;
    }
    Ok(())
}

pub fn import_ledger(r: impl BufRead) -> Result<OrbitLedger, CountError> {
    let mut lines = r.lines();
    let head = lines
        .next()
        .ok_or_else(|| CountError::Version("empty file".into()))??;
    if head.trim() != format!("# {LEDGER_VERSION}") {
        return Err(CountError::Version(format!(
            "expected `# {LEDGER_VERSION}`, got `{head}`"
        )));
    }
    let meta = lines
        .next()
        .ok_or_else(|| CountError::Version("missing metadata line".into()))??;
    let (p_max, horizon) = parse_meta(&meta)
        .ok_or_else(|| CountError::Version(format!("bad metadata `{meta}`")))?;
    let mut records = Vec::new();
    for (lno, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("period") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(|f| f.trim()).collect();
        if fields.len() != 5 {
            return Err(CountError::Row {
                line: lno + 3,
                msg: format!("expected 5 fields, got {}", fields.len()),
            });
        }
        let period: usize = fields[0].parse().map_err(|_| CountError::Row {
            line: lno + 3,
            msg: "bad period".into(),
        })?;
        let rep: Option<Vec<Cell1>> = fields[1].split('.').map(parse_cell).collect();
        let rep = rep.ok_or(CountError::Row {
            line: lno + 3,
            msg: "bad representative".into(),
        })?;
        let class = match fields[2] {
            "tile-interior" => PointClass::TileInterior,
            "edge-interior-on-curve" => PointClass::CurveEdge,
            "postcritical" => PointClass::Postcritical,
            other => {
                return Err(CountError::Row {
                    line: lno + 3,
                    msg: format!("bad class `{other}`"),
                })
            }
        };
        let degree: u64 = fields[3].parse().map_err(|_| CountError::Row {
            line: lno + 3,
            msg: "bad degree".into(),
        })?;
        let length = parse_big_rational(fields[4]).ok_or(CountError::Row {
            line: lno + 3,
            msg: "bad length".into(),
        })?;
        records.push(OrbitRecord {
            period,
            rep,
            length,
            degree,
            class,
        });
    }
    Ok(OrbitLedger {
        p_max,
        records,
        horizon,
    })
}

fn parse_meta(s: &str) -> Option<(usize, f64)> {
    let s = s.strip_prefix('#')?.trim();
    let mut p_max = None;
    let mut horizon = None;
    for part in s.split(',') {
        let (k, v) = part.split_once('=')?;
        match k.trim() {
            "p_max" => p_max = v.trim().parse().ok(),
            "horizon" => horizon = v.trim().parse().ok(),
            _ => {}
        }
    }
    Some((p_max?, horizon?))
}

fn parse_big_rational(s: &str) -> Option<BigRational> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.trim().parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

/// All ledger lengths lie on K * Z for cohomologous potentials; report the
/// largest deviation from the lattice for diagnostics.
pub fn lattice_deviation(ledger: &OrbitLedger, k: &BigRational) -> BigRational {
    let mut worst = BigRational::zero();
    for r in &ledger.records {
        let expect = k * BigRational::from_integer(BigInt::from(r.period as i64));
        let dev = (&r.length - expect).abs();
        if dev > worst {
            worst = dev;
        }
    }
    worst
}
