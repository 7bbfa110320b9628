//! Text instance format.
//!
//! One directive per line; `#` starts a comment. Directives:
//!
//! ```text
//! v <count>                      vertex count, required first
//! e <id> <u> <v> <weight> <sig>  edge; ids must be dense 0..m-1
//! rot <vertex> <dart>...         cyclic dart order; dart = <edge-id>+ | <edge-id>-
//!                                (+ is the head end at v, - the tail end at u)
//! bnd <dart>                     flags the face traced from the dart as boundary
//! ```
//!
//! Parsing is strict: unknown directives, repeated ids, and malformed darts
//! are errors carrying the 1-based line number.

use std::fmt;

use thiserror::Error;

use crate::embed::{Dart, EdgeRecord, EmbeddingSpec};

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseErrorKind {
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("`v` must appear once, before other directives")]
    MisplacedVertexCount,
    #[error("missing `v` directive")]
    MissingVertexCount,
    #[error("expected {expected} fields, found {found}")]
    FieldCount { expected: usize, found: usize },
    #[error("malformed number `{0}`")]
    BadNumber(String),
    #[error("malformed dart `{0}` (expected <edge-id>+ or <edge-id>-)")]
    BadDart(String),
    #[error("signature must be 0 or 1, found `{0}`")]
    BadSignature(String),
    #[error("duplicate edge id {0}")]
    DuplicateEdgeId(u32),
    #[error("edge ids must be dense 0..{expected}, id {missing} is missing")]
    MissingEdgeId { expected: usize, missing: u32 },
    #[error("duplicate rotation for vertex {0}")]
    DuplicateRotation(usize),
    #[error("weight must be nonnegative and finite, found {0}")]
    BadWeight(f64),
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

pub fn parse_dart(tok: &str) -> Option<Dart> {
    let (id, end) = tok.split_at(tok.len().checked_sub(1)?);
    let head = match end {
        "+" => true,
        "-" => false,
        _ => return None,
    };
    let id: u32 = id.parse().ok()?;
    Some(Dart::new(id, head))
}

/// Parses instance text into an embedding spec. Structural validation
/// beyond the file format happens in [`EmbeddedGraph::build`].
///
/// [`EmbeddedGraph::build`]: crate::embed::EmbeddedGraph::build
pub fn parse(text: &str) -> Result<EmbeddingSpec, ParseError> {
    let mut vertex_count: Option<usize> = None;
    let mut edges: Vec<(u32, EdgeRecord)> = Vec::new();
    let mut rotations: Vec<Option<Vec<Dart>>> = Vec::new();
    let mut boundary_darts = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let directive = fields.next().unwrap();
        let rest: Vec<&str> = fields.collect();
        match directive {
            "v" => {
                if vertex_count.is_some() || !edges.is_empty() {
                    return Err(err(line_no, ParseErrorKind::MisplacedVertexCount));
                }
                if rest.len() != 1 {
                    return Err(err(line_no, ParseErrorKind::FieldCount { expected: 1, found: rest.len() }));
                }
                let n = rest[0]
                    .parse()
                    .map_err(|_| err(line_no, ParseErrorKind::BadNumber(rest[0].into())))?;
                vertex_count = Some(n);
                rotations = vec![None; n];
            }
            "e" => {
                if vertex_count.is_none() {
                    return Err(err(line_no, ParseErrorKind::MissingVertexCount));
                }
                if rest.len() != 5 {
                    return Err(err(line_no, ParseErrorKind::FieldCount { expected: 5, found: rest.len() }));
                }
                let id: u32 = rest[0]
                    .parse()
                    .map_err(|_| err(line_no, ParseErrorKind::BadNumber(rest[0].into())))?;
                let u: usize = rest[1]
                    .parse()
                    .map_err(|_| err(line_no, ParseErrorKind::BadNumber(rest[1].into())))?;
                let v: usize = rest[2]
                    .parse()
                    .map_err(|_| err(line_no, ParseErrorKind::BadNumber(rest[2].into())))?;
                let weight: f64 = rest[3]
                    .parse()
                    .map_err(|_| err(line_no, ParseErrorKind::BadNumber(rest[3].into())))?;
                if !weight.is_finite() || weight < 0.0 {
                    return Err(err(line_no, ParseErrorKind::BadWeight(weight)));
                }
                let sig = match rest[4] {
                    "0" => false,
                    "1" => true,
                    other => return Err(err(line_no, ParseErrorKind::BadSignature(other.into()))),
                };
                if edges.iter().any(|(eid, _)| *eid == id) {
                    return Err(err(line_no, ParseErrorKind::DuplicateEdgeId(id)));
                }
                edges.push((id, EdgeRecord { u, v, weight, sig }));
            }
            "rot" => {
                if vertex_count.is_none() {
                    return Err(err(line_no, ParseErrorKind::MissingVertexCount));
                }
                if rest.is_empty() {
                    return Err(err(line_no, ParseErrorKind::FieldCount { expected: 2, found: 1 }));
                }
                let v: usize = rest[0]
                    .parse()
                    .map_err(|_| err(line_no, ParseErrorKind::BadNumber(rest[0].into())))?;
                let mut darts = Vec::with_capacity(rest.len() - 1);
                for tok in &rest[1..] {
                    darts.push(
                        parse_dart(tok).ok_or_else(|| err(line_no, ParseErrorKind::BadDart((*tok).into())))?,
                    );
                }
                if v < rotations.len() {
                    if rotations[v].is_some() {
                        return Err(err(line_no, ParseErrorKind::DuplicateRotation(v)));
                    }
                    rotations[v] = Some(darts);
                } else {
                    // Out-of-range vertex: surfaced by the builder with
                    // full context rather than here.
                    rotations.resize(v + 1, None);
                    rotations[v] = Some(darts);
                }
            }
            "bnd" => {
                if vertex_count.is_none() {
                    return Err(err(line_no, ParseErrorKind::MissingVertexCount));
                }
                if rest.len() != 1 {
                    return Err(err(line_no, ParseErrorKind::FieldCount { expected: 1, found: rest.len() }));
                }
                let d = parse_dart(rest[0])
                    .ok_or_else(|| err(line_no, ParseErrorKind::BadDart(rest[0].into())))?;
                boundary_darts.push(d);
            }
            other => {
                return Err(err(line_no, ParseErrorKind::UnknownDirective(other.into())));
            }
        }
    }

    let vertex_count = vertex_count.ok_or(err(text.lines().count() + 1, ParseErrorKind::MissingVertexCount))?;

    // Edge ids must be dense.
    let m = edges.len();
    let mut table: Vec<Option<EdgeRecord>> = vec![None; m];
    for (id, rec) in edges {
        if (id as usize) >= m {
            return Err(err(0, ParseErrorKind::MissingEdgeId { expected: m, missing: id }));
        }
        table[id as usize] = Some(rec);
    }
    let edges = table
        .into_iter()
        .enumerate()
        .map(|(i, rec)| rec.ok_or(err(0, ParseErrorKind::MissingEdgeId { expected: m, missing: i as u32 })))
        .collect::<Result<Vec<_>, _>>()?;

    Ok(EmbeddingSpec {
        vertex_count,
        edges,
        rotations: rotations.into_iter().map(Option::unwrap_or_default).collect(),
        boundary_darts,
    })
}

fn write_weight(w: f64, out: &mut String) {
    use fmt::Write;
    if w.fract() == 0.0 && w.abs() < 1e15 {
        let _ = write!(out, "{}", w as i64);
    } else {
        let _ = write!(out, "{w}");
    }
}

/// Canonical text form: `v`, then edges by id, rotations by vertex,
/// boundary markers in given order. Byte-deterministic.
pub fn write(spec: &EmbeddingSpec) -> String {
    use fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "v {}", spec.vertex_count);
    for (id, rec) in spec.edges.iter().enumerate() {
        let _ = write!(out, "e {} {} {} ", id, rec.u, rec.v);
        write_weight(rec.weight, &mut out);
        let _ = writeln!(out, " {}", rec.sig as u8);
    }
    for (v, rot) in spec.rotations.iter().enumerate() {
        if rot.is_empty() {
            continue;
        }
        let _ = write!(out, "rot {v}");
        for d in rot {
            let _ = write!(out, " {d}");
        }
        out.push('\n');
    }
    for d in &spec.boundary_darts {
        let _ = writeln!(out, "bnd {d}");
    }
    out
}
