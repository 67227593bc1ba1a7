//! Rule validation: a list of named checks, each pass/fail with a witness.

use crate::geometry::{Cell1, Color, Geometry, Zero};
use crate::rule::SubdivisionRule;

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub witness: String,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.pass)
    }
}

/// Run every combinatorial check on a parsed rule.
pub fn validate_rule(rule: &SubdivisionRule) -> ValidationReport {
    let mut checks = Vec::new();
    let mut push = |name: &str, pass: bool, witness: String| {
        checks.push(CheckResult {
            name: name.to_string(),
            pass,
            witness,
        });
    };

    let g = match Geometry::compile(rule.clone()) {
        Ok(g) => g,
        Err(e) => {
            let msg = e.to_string();
            let name = msg
                .split(": ")
                .nth(1)
                .and_then(|rest| rest.split(':').next())
                .unwrap_or("structure");
            push(name, false, msg.clone());
            return ValidationReport { checks };
        }
    };

    let m = g.m;
    let deg = g.deg;
    let blacks = g
        .tile_color
        .iter()
        .filter(|&&c| c == Color::Black)
        .count();

    push(
        "degree-at-least-2",
        deg >= 2,
        format!("deg = {deg}"),
    );
    push(
        "colors-balanced",
        blacks == deg,
        format!("white = {deg}, black = {blacks}"),
    );
    push(
        "tile-count",
        g.n_tiles() == 2 * deg,
        format!("card one_tiles = {}, 2*deg = {}", g.n_tiles(), 2 * deg),
    );
    push(
        "edge-count",
        g.n_edges() == m * deg,
        format!("card one_edges = {}, m*deg = {}", g.n_edges(), m * deg),
    );

    let mut mgon_ok = true;
    let mut mgon_w = String::new();
    for (ti, b) in g.tile_boundary.iter().enumerate() {
        let mut verts = g.tile_verts[ti].clone();
        verts.sort_unstable();
        verts.dedup();
        if b.len() != m || verts.len() != m {
            mgon_ok = false;
            mgon_w = format!(
                "tile `{}`: {} boundary edges, {} distinct vertices, m = {m}",
                g.rule.one_tiles[ti].id,
                b.len(),
                verts.len()
            );
            break;
        }
    }
    push("tile-boundary-m-gon", mgon_ok, mgon_w);

    let mut sided_ok = true;
    let mut sided_w = String::new();
    for e in 0..g.n_edges() {
        let (a, b) = g.edge_tiles[e];
        let ca = g.tile_color[a as usize];
        let cb = g.tile_color[b as usize];
        if ca == cb {
            sided_ok = false;
            sided_w = format!(
                "edge `{}` bounds `{}` and `{}`, both {}",
                g.rule.one_edges[e].id,
                g.rule.one_tiles[a as usize].id,
                g.rule.one_tiles[b as usize].id,
                ca.letter()
            );
            break;
        }
    }
    push("edge-bounds-one-black-one-white", sided_ok, sided_w);

    let mut even_ok = true;
    let mut decl_ok = true;
    let mut even_w = String::new();
    let mut decl_w = String::new();
    for v in 0..g.n_verts() {
        let cnt = g.vert_tiles[v].len();
        if cnt % 2 != 0 || cnt == 0 {
            even_ok = false;
            even_w = format!(
                "vertex `{}` has incident-tile count {cnt}",
                g.rule.one_vertices[v].id
            );
        }
        if let Some(d) = g.vert_declared_count[v] {
            if d as usize != cnt {
                decl_ok = false;
                decl_w = format!(
                    "vertex `{}` declares {d} incident tiles, computed {cnt}",
                    g.rule.one_vertices[v].id
                );
            }
        }
    }
    push("vertex-degree-even", even_ok, even_w);
    push("incident-count-consistent", decl_ok, decl_w);

    let rh: i64 = (0..g.n_verts())
        .map(|v| g.vert_deg(v as u32) as i64 - 1)
        .sum();
    push(
        "riemann-hurwitz",
        rh == 2 * deg as i64 - 2,
        format!("sum(deg_f(v)-1) = {rh}, 2*deg-2 = {}", 2 * deg as i64 - 2),
    );

    // For each 0-vertex p: local degrees over p sum to deg.
    let mut pv_ok = true;
    let mut pv_w = String::new();
    for p in 0..m as u32 {
        let s: u64 = (0..g.n_verts() as u32)
            .filter(|&v| g.vert_image[v as usize] == p)
            .map(|v| g.vert_deg(v) as u64)
            .sum();
        if s != deg as u64 {
            pv_ok = false;
            pv_w = format!(
                "0-vertex `{}`: sum of local degrees above it is {s}, deg = {deg}",
                g.rule.post[p as usize]
            );
            break;
        }
    }
    push("preimage-tiling-vertices", pv_ok, pv_w);

    let mut pe_ok = true;
    let mut pe_w = String::new();
    for z in 0..m as u32 {
        let c = (0..g.n_edges())
            .filter(|&e| g.edge_image[e] == z)
            .count();
        if c != deg {
            pe_ok = false;
            pe_w = format!(
                "0-edge `{}` has {c} 1-edges above it, deg = {deg}",
                g.rule.zero_edges[z as usize].id
            );
            break;
        }
    }
    push("preimage-tiling-edges", pe_ok, pe_w);

    // Each closed 0-tile carries a disk subcomplex: V - E + F = 1.
    let mut disk_ok = true;
    let mut disk_w = String::new();
    for side in [Color::White, Color::Black] {
        let f = g
            .tile_container
            .iter()
            .filter(|&&c| c == side)
            .count() as i64;
        let e = (0..g.n_edges() as u32)
            .filter(|&e| {
                g.edge_on_curve[e as usize]
                    || g.container0(Cell1::Edge(e)) == Zero::Tile(side)
            })
            .count() as i64;
        let v = (0..g.n_verts() as u32)
            .filter(|&v| {
                g.vert_on_curve[v as usize]
                    || g.container0(Cell1::Vert(v)) == Zero::Tile(side)
            })
            .count() as i64;
        let chi = v - e + f;
        if chi != 1 {
            disk_ok = false;
            disk_w = format!("{} 0-tile: V-E+F = {v}-{e}+{f} = {chi}", side.letter());
            break;
        }
    }
    push("subdivision-is-disk", disk_ok, disk_w);

    // Walking the curve, the images of on-curve edges must chain continuously
    // with the declared orientation flags.
    let mut cm_ok = true;
    let mut cm_w = String::new();
    for &e in &g.curve_cycle {
        let (entry, exit) = g.curve_ends(e);
        let z = g.edge_image[e as usize] as usize;
        let (zf, zt) = g.zero_edge_ends[z];
        let (want_entry, want_exit) = if g.edge_flag[e as usize] {
            (zf, zt)
        } else {
            (zt, zf)
        };
        let ie = g.vert_image[entry as usize];
        let ix = g.vert_image[exit as usize];
        if ie != want_entry || ix != want_exit {
            cm_ok = false;
            cm_w = format!(
                "edge `{}`: endpoint images ({}, {}) do not match flag over 0-edge `{}`",
                g.rule.one_edges[e as usize].id,
                g.rule.post[ie as usize],
                g.rule.post[ix as usize],
                g.rule.zero_edges[z].id,
            );
            break;
        }
    }
    push("curve-maps-consistently", cm_ok, cm_w);

    // Pullback tables must cover the full closed image 0-tile.
    let mut pb_ok = true;
    let mut pb_w = String::new();
    for t in 0..g.n_tiles() as u32 {
        let mut need = 1 + 2 * m;
        for z in 0..m as u32 {
            if g.pull_back(t, Zero::Edge(z)).is_some() {
                need -= 1;
            }
            if g.pull_back(t, Zero::Vert(z)).is_some() {
                need -= 1;
            }
        }
        if g.pull_back(t, Zero::Tile(g.tile_color[t as usize])).is_some() {
            need -= 1;
        }
        if need != 0 {
            pb_ok = false;
            pb_w = format!(
                "tile `{}` does not map onto the full closed 0-tile",
                g.rule.one_tiles[t as usize].id
            );
            break;
        }
    }
    push("tile-maps-onto-0-tile", pb_ok, pb_w);

    ValidationReport { checks }
}
