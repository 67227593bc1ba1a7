//! Rule files: the line-oriented source format, parsing, and byte-stable
//! serialization.
//!
//! A rule file has the sections `[post]`, `[zero_edges]`, `[one_vertices]`,
//! `[one_edges]`, `[one_tiles]`, `[curve_cycle]`, one record per line,
//! comma-separated fields, `#` comments. Identifiers are ASCII tokens.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::RuleError;
use crate::geometry::Color;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroEdgeRec {
    pub id: String,
    /// Post indices (entry, exit) along the curve.
    pub ends: (u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneVertexRec {
    pub id: String,
    /// Index of the image 0-vertex.
    pub image: u32,
    pub on_curve: bool,
    /// Declared incident-tile count; recomputed when absent.
    pub incident_tiles: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneEdgeRec {
    pub id: String,
    /// Index of the image 0-edge.
    pub image: u32,
    /// Endpoint 1-vertex indices in intrinsic order.
    pub ends: (u32, u32),
    pub on_curve: bool,
    /// Orientation of `f` on the edge relative to the curve order
    /// (meaningful only when `on_curve`).
    pub flag: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneTileRec {
    pub id: String,
    pub color: Color,
    /// Cyclic oriented boundary: (1-edge index, intrinsic direction).
    pub boundary: Vec<(u32, bool)>,
}

/// Source-level subdivision rule with resolved cross-references.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionRule {
    pub post: Vec<String>,
    pub zero_edges: Vec<ZeroEdgeRec>,
    pub one_vertices: Vec<OneVertexRec>,
    pub one_edges: Vec<OneEdgeRec>,
    pub one_tiles: Vec<OneTileRec>,
    /// On-curve 1-edge indices in curve order.
    pub curve_cycle: Vec<u32>,
}

impl SubdivisionRule {
    pub fn post_count(&self) -> usize {
        self.post.len()
    }

    /// Parse a rule file. Resolves all identifiers; does not validate dynamics.
    pub fn parse(text: &str) -> Result<SubdivisionRule, RuleError> {
        #[derive(PartialEq, Clone, Copy)]
        enum Sec {
            None,
            Post,
            ZeroEdges,
            OneVertices,
            OneEdges,
            OneTiles,
            CurveCycle,
        }
        let mut sec = Sec::None;

        let mut post: Vec<String> = Vec::new();
        let mut zero_raw: Vec<(usize, String, String, String)> = Vec::new();
        let mut vert_raw: Vec<(usize, String, String, String, Option<String>)> = Vec::new();
        let mut edge_raw: Vec<(usize, String, String, String, String, String, String)> =
            Vec::new();
        let mut tile_raw: Vec<(usize, String, String, Vec<String>)> = Vec::new();
        let mut cycle_raw: Vec<(usize, String)> = Vec::new();

        for (lno, raw) in text.lines().enumerate() {
            let line = lno + 1;
            let content = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if content.is_empty() {
                continue;
            }
            match content {
                "[post]" => {
                    sec = Sec::Post;
                    continue;
                }
                "[zero_edges]" => {
                    sec = Sec::ZeroEdges;
                    continue;
                }
                "[one_vertices]" => {
                    sec = Sec::OneVertices;
                    continue;
                }
                "[one_edges]" => {
                    sec = Sec::OneEdges;
                    continue;
                }
                "[one_tiles]" => {
                    sec = Sec::OneTiles;
                    continue;
                }
                "[curve_cycle]" => {
                    sec = Sec::CurveCycle;
                    continue;
                }
                s if s.starts_with('[') => {
                    return Err(RuleError::Syntax {
                        line,
                        msg: format!("unknown section {s}"),
                    })
                }
                _ => {}
            }
            let fields: Vec<String> = content
                .split(',')
                .map(|f| f.trim().to_string())
                .collect();
            let need = |n: usize| -> Result<(), RuleError> {
                if fields.len() == n {
                    Ok(())
                } else {
                    Err(RuleError::Syntax {
                        line,
                        msg: format!("expected {n} fields, got {}", fields.len()),
                    })
                }
            };
            match sec {
                Sec::None => {
                    return Err(RuleError::Syntax {
                        line,
                        msg: "record outside any section".into(),
                    })
                }
                Sec::Post => {
                    for f in &fields {
                        if f.is_empty() {
                            return Err(RuleError::Syntax {
                                line,
                                msg: "empty post identifier".into(),
                            });
                        }
                        post.push(f.clone());
                    }
                }
                Sec::ZeroEdges => {
                    need(3)?;
                    zero_raw.push((line, fields[0].clone(), fields[1].clone(), fields[2].clone()));
                }
                Sec::OneVertices => {
                    if fields.len() != 3 && fields.len() != 4 {
                        return Err(RuleError::Syntax {
                            line,
                            msg: format!("expected 3 or 4 fields, got {}", fields.len()),
                        });
                    }
                    vert_raw.push((
                        line,
                        fields[0].clone(),
                        fields[1].clone(),
                        fields[2].clone(),
                        fields.get(3).cloned(),
                    ));
                }
                Sec::OneEdges => {
                    need(6)?;
                    edge_raw.push((
                        line,
                        fields[0].clone(),
                        fields[1].clone(),
                        fields[2].clone(),
                        fields[3].clone(),
                        fields[4].clone(),
                        fields[5].clone(),
                    ));
                }
                Sec::OneTiles => {
                    if fields.len() < 3 {
                        return Err(RuleError::Syntax {
                            line,
                            msg: "tile record needs id, color, boundary edges".into(),
                        });
                    }
                    tile_raw.push((
                        line,
                        fields[0].clone(),
                        fields[1].clone(),
                        fields[2..].to_vec(),
                    ));
                }
                Sec::CurveCycle => {
                    for f in &fields {
                        cycle_raw.push((line, f.clone()));
                    }
                }
            }
        }

        // Index maps with duplicate detection.
        let mut post_idx: BTreeMap<&str, u32> = BTreeMap::new();
        for (i, p) in post.iter().enumerate() {
            if post_idx.insert(p.as_str(), i as u32).is_some() {
                return Err(RuleError::Duplicate {
                    line: 0,
                    ident: p.clone(),
                });
            }
        }
        let mut zedge_idx: BTreeMap<&str, u32> = BTreeMap::new();
        for (i, (line, id, ..)) in zero_raw.iter().enumerate() {
            if zedge_idx.insert(id.as_str(), i as u32).is_some() {
                return Err(RuleError::Duplicate {
                    line: *line,
                    ident: id.clone(),
                });
            }
        }
        let mut vert_idx: BTreeMap<&str, u32> = BTreeMap::new();
        for (i, (line, id, ..)) in vert_raw.iter().enumerate() {
            if vert_idx.insert(id.as_str(), i as u32).is_some() {
                return Err(RuleError::Duplicate {
                    line: *line,
                    ident: id.clone(),
                });
            }
        }
        let mut edge_idx: BTreeMap<&str, u32> = BTreeMap::new();
        for (i, (line, id, ..)) in edge_raw.iter().enumerate() {
            if edge_idx.insert(id.as_str(), i as u32).is_some() {
                return Err(RuleError::Duplicate {
                    line: *line,
                    ident: id.clone(),
                });
            }
        }
        let mut tile_idx: BTreeMap<&str, u32> = BTreeMap::new();
        for (i, (line, id, ..)) in tile_raw.iter().enumerate() {
            if tile_idx.insert(id.as_str(), i as u32).is_some() {
                return Err(RuleError::Duplicate {
                    line: *line,
                    ident: id.clone(),
                });
            }
        }

        let lookup = |map: &BTreeMap<&str, u32>, ident: &str, line: usize| -> Result<u32, RuleError> {
            map.get(ident).copied().ok_or_else(|| RuleError::Dangling {
                line,
                ident: ident.to_string(),
            })
        };
        let parse_bool = |s: &str, line: usize| -> Result<bool, RuleError> {
            match s {
                "true" | "1" | "yes" => Ok(true),
                "false" | "0" | "no" => Ok(false),
                _ => Err(RuleError::Syntax {
                    line,
                    msg: format!("expected boolean, got `{s}`"),
                }),
            }
        };

        let mut zero_edges = Vec::new();
        for (line, id, from, to) in &zero_raw {
            zero_edges.push(ZeroEdgeRec {
                id: id.clone(),
                ends: (
                    lookup(&post_idx, from, *line)?,
                    lookup(&post_idx, to, *line)?,
                ),
            });
        }
        let mut one_vertices = Vec::new();
        for (line, id, image, onc, count) in &vert_raw {
            let cnt = match count {
                None => None,
                Some(s) => Some(s.parse::<u32>().map_err(|_| RuleError::Syntax {
                    line: *line,
                    msg: format!("bad incident-tile count `{s}`"),
                })?),
            };
            one_vertices.push(OneVertexRec {
                id: id.clone(),
                image: lookup(&post_idx, image, *line)?,
                on_curve: parse_bool(onc, *line)?,
                incident_tiles: cnt,
            });
        }
        let mut one_edges = Vec::new();
        for (line, id, image, a, b, onc, flag) in &edge_raw {
            one_edges.push(OneEdgeRec {
                id: id.clone(),
                image: lookup(&zedge_idx, image, *line)?,
                ends: (lookup(&vert_idx, a, *line)?, lookup(&vert_idx, b, *line)?),
                on_curve: parse_bool(onc, *line)?,
                flag: parse_bool(flag, *line)?,
            });
        }
        let mut one_tiles = Vec::new();
        for (line, id, color, bnd) in &tile_raw {
            let color = match color.as_str() {
                "white" | "w" => Color::White,
                "black" | "b" => Color::Black,
                c => {
                    return Err(RuleError::Syntax {
                        line: *line,
                        msg: format!("bad color `{c}`"),
                    })
                }
            };
            let mut boundary = Vec::with_capacity(bnd.len());
            for tok in bnd {
                let (dir, name) = match tok.strip_prefix('+') {
                    Some(rest) => (true, rest),
                    None => match tok.strip_prefix('-') {
                        Some(rest) => (false, rest),
                        None => (true, tok.as_str()),
                    },
                };
                boundary.push((lookup(&edge_idx, name, *line)?, dir));
            }
            one_tiles.push(OneTileRec {
                id: id.clone(),
                color,
                boundary,
            });
        }
        let mut curve_cycle = Vec::new();
        for (line, tok) in &cycle_raw {
            curve_cycle.push(lookup(&edge_idx, tok, *line)?);
        }

        if post.is_empty() {
            return Err(RuleError::Syntax {
                line: 0,
                msg: "missing [post] section".into(),
            });
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

    /// Byte-stable serialization: fields in declaration order.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[post]");
        let _ = writeln!(s, "{}", self.post.join(", "));
        let _ = writeln!(s, "[zero_edges]");
        for z in &self.zero_edges {
            let _ = writeln!(
                s,
                "{}, {}, {}",
                z.id, self.post[z.ends.0 as usize], self.post[z.ends.1 as usize]
            );
        }
        let _ = writeln!(s, "[one_vertices]");
        for v in &self.one_vertices {
            match v.incident_tiles {
                Some(c) => {
                    let _ = writeln!(
                        s,
                        "{}, {}, {}, {}",
                        v.id, self.post[v.image as usize], v.on_curve, c
                    );
                }
                None => {
                    let _ = writeln!(s, "{}, {}, {}", v.id, self.post[v.image as usize], v.on_curve);
                }
            }
        }
        let _ = writeln!(s, "[one_edges]");
        for e in &self.one_edges {
            let _ = writeln!(
                s,
                "{}, {}, {}, {}, {}, {}",
                e.id,
                self.zero_edges[e.image as usize].id,
                self.one_vertices[e.ends.0 as usize].id,
                self.one_vertices[e.ends.1 as usize].id,
                e.on_curve,
                e.flag
            );
        }
        let _ = writeln!(s, "[one_tiles]");
        for t in &self.one_tiles {
            let bnd: Vec<String> = t
                .boundary
                .iter()
                .map(|&(e, d)| {
                    format!(
                        "{}{}",
                        if d { "+" } else { "-" },
                        self.one_edges[e as usize].id
                    )
                })
                .collect();
            let _ = writeln!(s, "{}, {}, {}", t.id, t.color.letter(), bnd.join(", "));
        }
        let _ = writeln!(s, "[curve_cycle]");
        let cyc: Vec<String> = self
            .curve_cycle
            .iter()
            .map(|&e| self.one_edges[e as usize].id.clone())
            .collect();
        let _ = writeln!(s, "{}", cyc.join(", "));
        s
    }
}
