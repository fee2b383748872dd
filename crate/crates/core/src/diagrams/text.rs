//! Line-oriented text format for diagrams.
//!
//! ```text
//! skeleton: none
//! T a: 1 2 3
//! U l: 4
//! E: 1 4
//! ```
//!
//! Vertex ids and half-edge names are arbitrary tokens. For interval
//! diagrams without an `order:` line, skeleton vertices follow their
//! declaration order.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{UniTrivalentDiagram, VertexKind};
use crate::error::{Error, Result};

pub fn parse_diagram(text: &str) -> Result<UniTrivalentDiagram> {
    let mut d: Option<UniTrivalentDiagram> = None;
    let mut vertex_ids: HashMap<String, usize> = HashMap::new();
    let mut half_edges: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<(usize, String, String)> = Vec::new();
    let mut order: Option<(usize, Vec<String>)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| Error::Parse { line: line_no, message };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| err(format!("expected ':' in {line:?}")))?;
        let head: Vec<&str> = head.split_whitespace().collect();
        let args: Vec<&str> = rest.split_whitespace().collect();

        if head == ["skeleton"] {
            if d.is_some() {
                return Err(err("duplicate skeleton header".into()));
            }
            d = Some(match args.as_slice() {
                ["interval"] => UniTrivalentDiagram::on_interval(),
                ["none"] => UniTrivalentDiagram::chinese(),
                _ => return Err(err(format!("unknown skeleton {:?}", rest.trim()))),
            });
            continue;
        }
        let diagram = d
            .as_mut()
            .ok_or_else(|| err("first line must be the skeleton header".into()))?;
        match head.as_slice() {
            ["E"] => {
                if args.len() != 2 {
                    return Err(err(format!("edge needs 2 half-edges, got {}", args.len())));
                }
                edges.push((line_no, args[0].to_string(), args[1].to_string()));
            }
            ["order"] => {
                if order.is_some() {
                    return Err(err("duplicate order line".into()));
                }
                order = Some((line_no, args.iter().map(|s| s.to_string()).collect()));
            }
            [kind, id] => {
                let kind = match *kind {
                    "T" => VertexKind::Internal,
                    "U" => VertexKind::Leg,
                    "S" => VertexKind::Skeleton,
                    other => return Err(err(format!("unknown vertex kind {other:?}"))),
                };
                if vertex_ids.contains_key(*id) {
                    return Err(err(format!("duplicate vertex id {id:?}")));
                }
                if args.len() != kind.slot_count() {
                    return Err(err(format!(
                        "vertex {id} of kind {} needs {} half-edges, got {}",
                        kind.letter(),
                        kind.slot_count(),
                        args.len()
                    )));
                }
                let v = diagram.add_vertex(kind);
                vertex_ids.insert(id.to_string(), v);
                for (slot, name) in args.iter().enumerate() {
                    let h = diagram.slots(v)[slot];
                    if half_edges.insert(name.to_string(), h).is_some() {
                        return Err(err(format!("half-edge {name:?} used twice")));
                    }
                }
            }
            _ => return Err(err(format!("unrecognized line {line:?}"))),
        }
    }

    let mut d = d.ok_or(Error::Parse {
        line: 0,
        message: "missing skeleton header".into(),
    })?;
    for (line, a, b) in edges {
        let lookup = |name: &str| {
            half_edges.get(name).copied().ok_or_else(|| Error::Parse {
                line,
                message: format!("unknown half-edge {name:?}"),
            })
        };
        let (ha, hb) = (lookup(&a)?, lookup(&b)?);
        if ha == hb || d.mate(ha).is_some() || d.mate(hb).is_some() {
            return Err(Error::Parse {
                line,
                message: format!("half-edges {a:?} and {b:?} cannot be paired"),
            });
        }
        d.join(ha, hb);
    }
    if let Some((line, ids)) = order {
        if d.is_chinese() {
            return Err(Error::Parse {
                line,
                message: "order line on a diagram without skeleton".into(),
            });
        }
        let verts = ids
            .iter()
            .map(|id| {
                vertex_ids.get(id).copied().ok_or_else(|| Error::Parse {
                    line,
                    message: format!("unknown vertex {id:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        d.set_skeleton_order(verts);
    }
    Ok(d)
}

pub fn write_diagram(d: &UniTrivalentDiagram) -> String {
    let mut out = String::new();
    let skeleton = if d.is_chinese() { "none" } else { "interval" };
    writeln!(out, "skeleton: {skeleton}").unwrap();
    for v in 0..d.vertex_count() {
        write!(out, "{} v{v}:", d.kind(v).letter()).unwrap();
        for h in d.slots(v) {
            write!(out, " h{h}").unwrap();
        }
        out.push('\n');
    }
    for h in 0..d.half_edge_count() {
        if let Some(m) = d.mate(h) {
            if h < m {
                writeln!(out, "E: h{h} h{m}").unwrap();
            }
        }
    }
    if let Some(order) = d.skeleton_order() {
        if !order.is_empty() {
            out.push_str("order:");
            for v in order {
                write!(out, " v{v}").unwrap();
            }
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{canonical_form, chord, validate_diagram, wheel, SpaceKind};

    #[test]
    fn roundtrip() {
        for d in [wheel(2), wheel(4), chord(), UniTrivalentDiagram::chinese()] {
            let text = write_diagram(&d);
            assert_eq!(parse_diagram(&text).unwrap(), d, "{text}");
        }
    }

    #[test]
    fn parses_handwritten_wheel() {
        let text = "# two-wheel\nskeleton: none\nT a: 1 2 3\nT b: 4 5 6\nU x: 7\nU y: 8\n\
                    E: 1 7\nE: 4 8\nE: 2 6\nE: 3 5\n";
        let d = parse_diagram(text).unwrap();
        validate_diagram(&d, SpaceKind::B).unwrap();
        assert_eq!(
            canonical_form(&d).unwrap(),
            canonical_form(&wheel(2)).unwrap()
        );
    }

    #[test]
    fn skeleton_order_line() {
        let text = "skeleton: interval\nS p: a\nS q: b\nE: a b\norder: q p\n";
        let d = parse_diagram(text).unwrap();
        assert_eq!(d.skeleton_order().unwrap(), &[1, 0]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("T a: 1 2 3\n", 1),
            ("skeleton: none\nT a: 1 2\n", 2),
            ("skeleton: none\nU a: 1\nU b: 1\n", 3),
            ("skeleton: none\nU a: 1\nE: 1 9\n", 3),
            ("skeleton: none\nQ a: 1\n", 2),
        ];
        for (text, line) in cases {
            match parse_diagram(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}
