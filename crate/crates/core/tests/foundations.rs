//! Structural checks of the pillow rules and the coding machinery.

use thurston_core::geometry::{Cell1, Geometry};
use thurston_core::lattes::lattes_rule;
use thurston_core::level::{build_level, dn_table, joins_opposite_sides, DEFAULT_CELL_CAP};
use thurston_core::point::{
    fixed_points, multiplicities, verify_counting_identity, weighted_fixed_point_count,
    PointClass,
};
use thurston_core::shifts::{edge_color_shift, edge_shift, tile_shift};
use thurston_core::validate::validate_rule;

fn pillow(k: u32) -> Geometry {
    let rule = lattes_rule(k).unwrap();
    Geometry::compile(rule).unwrap()
}

#[test]
fn lattes2_validates() {
    let rule = lattes_rule(2).unwrap();
    let report = validate_rule(&rule);
    for c in &report.checks {
        assert!(c.pass, "check {} failed: {}", c.name, c.witness);
    }
}

#[test]
fn lattes3_validates() {
    let rule = lattes_rule(3).unwrap();
    let report = validate_rule(&rule);
    for c in &report.checks {
        assert!(c.pass, "check {} failed: {}", c.name, c.witness);
    }
    let g = pillow(3);
    assert_eq!(g.deg, 9);
}

#[test]
fn lattes2_counts() {
    let g = pillow(2);
    assert_eq!(g.deg, 4);
    assert_eq!(g.n_tiles(), 8);
    assert_eq!(g.n_edges(), 16);
    assert_eq!(g.n_verts(), 10);
}

#[test]
fn recolored_tile_fails_validation() {
    let mut rule = lattes_rule(2).unwrap();
    let c = rule.one_tiles[0].color;
    rule.one_tiles[0].color = c.other();
    let report = validate_rule(&rule);
    assert!(!report.all_pass());
    let fail = report.first_failure().unwrap();
    assert!(
        fail.name.contains("black") || fail.name.contains("balanced") || fail.name.contains("preimage"),
        "unexpected first failure {}",
        fail.name
    );
}

#[test]
fn parse_serialize_roundtrip() {
    let rule = lattes_rule(2).unwrap();
    let text = rule.serialize();
    let back = thurston_core::SubdivisionRule::parse(&text).unwrap();
    assert_eq!(rule, back);
    assert_eq!(text, back.serialize());
}

#[test]
fn level_counts_match_formulas() {
    for (k, nmax) in [(2u32, 4usize), (3, 3)] {
        let g = pillow(k);
        let deg = g.deg as u128;
        for n in 1..=nmax {
            let level = build_level(&g, n, DEFAULT_CELL_CAP).unwrap();
            assert_eq!(level.tiles.len() as u128, 2 * deg.pow(n as u32), "tiles k={k} n={n}");
            assert_eq!(
                level.edges.len() as u128,
                g.m as u128 * deg.pow(n as u32),
                "edges k={k} n={n}"
            );
            assert!(level.verts.len() as u128 <= g.m as u128 * deg.pow(n as u32));
        }
    }
}

#[test]
fn level_vertex_degrees_factor() {
    // deg_{f^2}(v) equals the product of local degrees along the itinerary.
    let g = pillow(2);
    let level = build_level(&g, 2, DEFAULT_CELL_CAP).unwrap();
    for (vi, vw) in level.verts.iter().enumerate() {
        let product: u64 = vw.iter().map(|&c| g.cell_local_deg(c) as u64).product();
        assert_eq!(level.vert_deg[vi], product);
        assert_eq!(level.vert_tiles[vi].len() as u64, 2 * product);
    }
}

#[test]
fn joins_opposite_sides_pillow() {
    let g = pillow(2);
    assert!(joins_opposite_sides(&g, 0, DEFAULT_CELL_CAP).unwrap());
    assert!(!joins_opposite_sides(&g, 1, DEFAULT_CELL_CAP).unwrap());
    let g3 = pillow(3);
    assert!(!joins_opposite_sides(&g3, 1, DEFAULT_CELL_CAP).unwrap());
}

#[test]
fn dn_values() {
    let g = pillow(2);
    let (rows, est) = dn_table(&g, 4, DEFAULT_CELL_CAP).unwrap();
    assert_eq!(rows[0], (1, 2)); // two squares in a row join opposite sides
    for w in rows.windows(2) {
        assert!(w[1].1 >= w[0].1);
    }
    for &(n, d) in &rows {
        let root = (d as f64).powf(1.0 / n as f64);
        assert!(root > 1.0 && root <= 4.0);
    }
    assert!(est > 1.0 && est <= 4.0);
}

#[test]
fn shift_sizes_and_mixing() {
    let g = pillow(2);
    let ts = tile_shift(&g);
    let es = edge_shift(&g);
    let cs = edge_color_shift(&g);
    assert_eq!(ts.n(), 8);
    assert_eq!(es.n(), 8);
    assert_eq!(cs.n(), 16);
    assert!(ts.is_topologically_mixing());
    // trace(A) = number of same-color-as-container tiles = 4 on the pillow
    assert_eq!(ts.trace_pow(1), 4);
    for n in 1..=6 {
        let words = ts.periodic_words(n, 1 << 24).unwrap();
        assert_eq!(words.len() as u128, ts.trace_pow(n), "n={n}");
        assert!(words.len() as u128 <= (ts.n() as u128).pow(n as u32));
    }
}

#[test]
fn fixed_points_lattes2() {
    let g = pillow(2);
    let fps = fixed_points(&g, 1, 1 << 20).unwrap();
    assert_eq!(fps.len(), 5, "five fixed points");
    let total: u64 = fps.iter().map(|f| f.degree).sum();
    assert_eq!(total, 5, "weighted count 1 + deg");
    let post: Vec<_> = fps
        .iter()
        .filter(|f| f.class == PointClass::Postcritical)
        .collect();
    assert_eq!(post.len(), 1, "P0 is the only fixed post point");
    let curve: Vec<_> = fps
        .iter()
        .filter(|f| f.class == PointClass::CurveEdge)
        .collect();
    assert_eq!(curve.len(), 2);
    for n in 1..=5 {
        assert_eq!(
            weighted_fixed_point_count(&g, n, 1 << 22).unwrap(),
            1 + 4u64.pow(n as u32),
            "n = {n}"
        );
    }
}

#[test]
fn multiplicity_table_at_p0() {
    // Orientation-preserving non-critical fixed post point.
    let g = pillow(2);
    let fps = fixed_points(&g, 1, 1 << 20).unwrap();
    let p0 = fps
        .iter()
        .find(|f| f.class == PointClass::Postcritical)
        .unwrap();
    let m = multiplicities(&g, &p0.walk);
    assert_eq!((m.tile, m.pair, m.edge, m.post), (2, 4, 2, 1));
}

#[test]
fn counting_identity_small_levels() {
    for (k, nmax) in [(2u32, 4usize), (3, 2)] {
        let g = pillow(k);
        for n in 1..=nmax {
            let rows = verify_counting_identity(&g, n, 1 << 22).unwrap();
            for row in &rows {
                assert!(
                    row.pass,
                    "k={k} n={n}: identity fails at {:?} ({:?}, deg {})",
                    row.walk, row.mult, row.degree
                );
            }
        }
    }
}

#[test]
fn edge_fixed_point_multiplicities() {
    // The edge-interior fixed point has a color-swapping coding: no periodic
    // tile word, one periodic edge word.
    let g = pillow(2);
    let fps = fixed_points(&g, 1, 1 << 20).unwrap();
    for fp in fps.iter().filter(|f| f.class == PointClass::CurveEdge) {
        let m = multiplicities(&g, &fp.walk);
        assert_eq!(m.edge, 1);
        assert_eq!(m.post, 0);
        assert_eq!(m.tile as i64 - m.pair as i64, 0);
    }
}

#[test]
fn word_cell_bijection() {
    // The map word -> tile from admissible length-n tile words to level-n
    // tiles is a bijection (tiles are stored by their words).
    let g = pillow(2);
    let level = build_level(&g, 3, DEFAULT_CELL_CAP).unwrap();
    let words = thurston_core::potential::admissible_words(&g, 3);
    assert_eq!(level.tiles.len(), words.len());
    for w in &words {
        assert!(level.tile_index.contains_key(w));
    }
}

#[test]
fn subdivision_pattern_isomorphic_to_level_one() {
    // Inside any n-tile, the (n+1)-cells biject with the level-1 cells of the
    // image 0-tile via the last letter.
    let g = pillow(2);
    let level2 = build_level(&g, 2, DEFAULT_CELL_CAP).unwrap();
    let level1 = build_level(&g, 1, DEFAULT_CELL_CAP).unwrap();
    let tile = &level1.tiles[0]; // a 1-tile (word of length 1)
    let color = g.tile_color[tile[0] as usize];
    // cells of level 2 inside this tile
    let inside_tiles = level2
        .tiles
        .iter()
        .filter(|w| w[0] == tile[0])
        .count();
    let inside_edges = level2
        .edges
        .iter()
        .filter(|w| g.cell_contains(Cell1::Tile(tile[0]), w[0]))
        .count();
    let inside_verts = level2
        .verts
        .iter()
        .filter(|w| g.cell_contains(Cell1::Tile(tile[0]), w[0]))
        .count();
    // level-1 cells inside the closed 0-tile of that color
    let t1 = (0..g.n_tiles()).filter(|&t| g.tile_container[t] == color).count();
    let e1 = (0..g.n_edges() as u32)
        .filter(|&e| {
            g.edge_on_curve[e as usize]
                || g.tile_container[g.edge_tiles[e as usize].0 as usize] == color
        })
        .count();
    let v1 = (0..g.n_verts() as u32)
        .filter(|&v| {
            g.vert_on_curve[v as usize]
                || g.vert_tiles[v as usize]
                    .iter()
                    .any(|&t| g.tile_container[t as usize] == color)
        })
        .count();
    assert_eq!(inside_tiles, t1);
    assert_eq!(inside_edges, e1);
    assert_eq!(inside_verts, v1);
}
