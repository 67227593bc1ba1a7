//! The pillow rule: a two-faced square pillow with each face subdivided into a
//! k-by-k checkerboard. It models the degree-k^2 flexible Lattès map induced
//! by multiplication by k, with the four corners as postcritical points.

use crate::error::RuleError;
use crate::geometry::Color;
use crate::rule::{OneEdgeRec, OneTileRec, OneVertexRec, SubdivisionRule, ZeroEdgeRec};

/// Build the k-by-k pillow rule, k >= 2.
///
/// Front face is the white 0-tile, back face the black one. Corners P0..P3
/// sit at (0,0), (k,0), (k,k), (0,k) of the front chart; the curve runs
/// bottom, right, top, left with the white face on the left.
pub fn lattes_rule(k: u32) -> Result<SubdivisionRule, RuleError> {
    if k < 2 {
        return Err(RuleError::Structure(format!(
            "pillow rule needs k >= 2, got {k}"
        )));
    }
    let k = k as usize;
    let post = vec!["P0".into(), "P1".into(), "P2".into(), "P3".into()];
    let zero_edges = vec![
        ZeroEdgeRec { id: "E0".into(), ends: (0, 1) },
        ZeroEdgeRec { id: "E1".into(), ends: (1, 2) },
        ZeroEdgeRec { id: "E2".into(), ends: (2, 3) },
        ZeroEdgeRec { id: "E3".into(), ends: (3, 0) },
    ];

    // Image 0-vertex of a grid point: by coordinate parity.
    let vert_image = |i: usize, j: usize| -> u32 {
        match (i % 2, j % 2) {
            (0, 0) => 0,
            (1, 0) => 1,
            (1, 1) => 2,
            (0, 1) => 3,
            _ => unreachable!(),
        }
    };

    // Vertices: grid points; boundary points are shared between the faces.
    let mut one_vertices: Vec<OneVertexRec> = Vec::new();
    let mut vid: std::collections::BTreeMap<(char, usize, usize), u32> =
        std::collections::BTreeMap::new();
    let push_vert = |name: String,
                         key: (char, usize, usize),
                         image: u32,
                         on_curve: bool,
                         count: u32,
                         one_vertices: &mut Vec<OneVertexRec>,
                         vid: &mut std::collections::BTreeMap<(char, usize, usize), u32>| {
        let idx = one_vertices.len() as u32;
        one_vertices.push(OneVertexRec {
            id: name,
            image,
            on_curve,
            incident_tiles: Some(count),
        });
        vid.insert(key, idx);
    };
    for j in 0..=k {
        for i in 0..=k {
            let boundary = i == 0 || i == k || j == 0 || j == k;
            if boundary {
                let corner = (i == 0 || i == k) && (j == 0 || j == k);
                let name = match (i, j) {
                    (0, 0) => "P0".to_string(),
                    (x, 0) if x == k => "P1".to_string(),
                    (x, y) if x == k && y == k => "P2".to_string(),
                    (0, y) if y == k => "P3".to_string(),
                    _ => format!("c_{i}_{j}"),
                };
                let count = if corner { 2 } else { 4 };
                push_vert(
                    name,
                    ('c', i, j),
                    vert_image(i, j),
                    true,
                    count,
                    &mut one_vertices,
                    &mut vid,
                );
            }
        }
    }
    for j in 1..k {
        for i in 1..k {
            push_vert(
                format!("fv_{i}_{j}"),
                ('f', i, j),
                vert_image(i, j),
                false,
                4,
                &mut one_vertices,
                &mut vid,
            );
        }
    }
    for j in 1..k {
        for i in 1..k {
            push_vert(
                format!("bv_{i}_{j}"),
                ('b', i, j),
                vert_image(i, j),
                false,
                4,
                &mut one_vertices,
                &mut vid,
            );
        }
    }
    let v = |face: char, i: usize, j: usize| -> u32 {
        let boundary = i == 0 || i == k || j == 0 || j == k;
        if boundary {
            vid[&('c', i, j)]
        } else {
            vid[&(face, i, j)]
        }
    };

    // Edges. Horizontal h(face,i,j): (i,j)->(i+1,j); vertical v(face,i,j):
    // (i,j)->(i,j+1). Boundary edges are shared and named ch_/cv_.
    let mut one_edges: Vec<OneEdgeRec> = Vec::new();
    let mut eid: std::collections::BTreeMap<(char, char, usize, usize), u32> =
        std::collections::BTreeMap::new();
    // Orientation flag of f relative to the curve order, per side.
    let h_flag = |i: usize, j: usize| -> bool {
        if j == 0 {
            i % 2 == 0 // bottom
        } else if k % 2 == 1 {
            i % 2 == 0 // top -> top when k is odd
        } else {
            i % 2 == 1 // top -> bottom when k is even
        }
    };
    let v_flag = |i: usize, j: usize| -> bool {
        if i == 0 {
            j % 2 == 0 // left -> left always
        } else if k % 2 == 1 {
            j % 2 == 0 // right -> right when k is odd
        } else {
            j % 2 == 1 // right -> left when k is even
        }
    };
    {
        let mut push_edge = |name: String, key, image: u32, a: u32, b: u32, onc: bool, flag: bool| {
            let idx = one_edges.len() as u32;
            one_edges.push(OneEdgeRec {
                id: name,
                image,
                ends: (a, b),
                on_curve: onc,
                flag,
            });
            eid.insert(key, idx);
        };
        // Shared curve edges.
        for i in 0..k {
            push_edge(
                format!("ch_{i}_0"),
                ('c', 'h', i, 0),
                if 0 % 2 == 0 { 0 } else { 2 },
                v('c', i, 0),
                v('c', i + 1, 0),
                true,
                h_flag(i, 0),
            );
        }
        for i in 0..k {
            push_edge(
                format!("ch_{i}_{k}"),
                ('c', 'h', i, k),
                if k % 2 == 0 { 0 } else { 2 },
                v('c', i, k),
                v('c', i + 1, k),
                true,
                h_flag(i, k),
            );
        }
        for j in 0..k {
            push_edge(
                format!("cv_0_{j}"),
                ('c', 'v', 0, j),
                3,
                v('c', 0, j),
                v('c', 0, j + 1),
                true,
                v_flag(0, j),
            );
        }
        for j in 0..k {
            push_edge(
                format!("cv_{k}_{j}"),
                ('c', 'v', k, j),
                if k % 2 == 0 { 3 } else { 1 },
                v('c', k, j),
                v('c', k, j + 1),
                true,
                v_flag(k, j),
            );
        }
        // Interior edges per face.
        for face in ['f', 'b'] {
            for j in 1..k {
                for i in 0..k {
                    push_edge(
                        format!("{face}h_{i}_{j}"),
                        (face, 'h', i, j),
                        if j % 2 == 0 { 0 } else { 2 },
                        v(face, i, j),
                        v(face, i + 1, j),
                        false,
                        false,
                    );
                }
            }
            for j in 0..k {
                for i in 1..k {
                    push_edge(
                        format!("{face}v_{i}_{j}"),
                        (face, 'v', i, j),
                        if i % 2 == 0 { 3 } else { 1 },
                        v(face, i, j),
                        v(face, i, j + 1),
                        false,
                        false,
                    );
                }
            }
        }
    }
    let he = |face: char, i: usize, j: usize| -> u32 {
        if j == 0 || j == k {
            eid[&('c', 'h', i, j)]
        } else {
            eid[&(face, 'h', i, j)]
        }
    };
    let ve = |face: char, i: usize, j: usize| -> u32 {
        if i == 0 || i == k {
            eid[&('c', 'v', i, j)]
        } else {
            eid[&(face, 'v', i, j)]
        }
    };

    // Tiles. Front (i,j) white iff i+j even; back white iff i+j odd.
    // Boundary cyclic lists are counterclockwise as seen from the white side.
    let mut one_tiles: Vec<OneTileRec> = Vec::new();
    for j in 0..k {
        for i in 0..k {
            let color = if (i + j) % 2 == 0 {
                Color::White
            } else {
                Color::Black
            };
            one_tiles.push(OneTileRec {
                id: format!("ft_{i}_{j}"),
                color,
                boundary: vec![
                    (he('f', i, j), true),
                    (ve('f', i + 1, j), true),
                    (he('f', i, j + 1), false),
                    (ve('f', i, j), false),
                ],
            });
        }
    }
    for j in 0..k {
        for i in 0..k {
            let color = if (i + j) % 2 == 1 {
                Color::White
            } else {
                Color::Black
            };
            one_tiles.push(OneTileRec {
                id: format!("bt_{i}_{j}"),
                color,
                boundary: vec![
                    (ve('b', i, j), true),
                    (he('b', i, j + 1), true),
                    (ve('b', i + 1, j), false),
                    (he('b', i, j), false),
                ],
            });
        }
    }

    // Curve cycle: bottom, right, top (reversed), left (reversed).
    let mut curve_cycle = Vec::with_capacity(4 * k);
    for i in 0..k {
        curve_cycle.push(eid[&('c', 'h', i, 0)]);
    }
    for j in 0..k {
        curve_cycle.push(eid[&('c', 'v', k, j)]);
    }
    for i in (0..k).rev() {
        curve_cycle.push(eid[&('c', 'h', i, k)]);
    }
    for j in (0..k).rev() {
        curve_cycle.push(eid[&('c', 'v', 0, j)]);
    }

    Ok(SubdivisionRule {
        post,
        zero_edges,
        one_vertices,
        one_edges,
        one_tiles,
        curve_cycle,
    })
}
