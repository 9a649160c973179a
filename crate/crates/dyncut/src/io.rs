//! Line-oriented text formats.
//!
//! Graph files start with a header `n m` followed by `m` lines `u v cap`.
//! Update streams hold one item per line:
//!
//! ```text
//! I u v cap          insert an edge
//! D u v              delete the live (u, v) edge with the smallest handle
//! S v k h1 .. hk     split v, moving the listed edge handles
//! Q ST s t           minimum s-t cut
//! Q SC               sparsest cut
//! Q MWC k t1 .. tk   multiway cut
//! Q MC k s1 t1 ..    multicut over k pairs
//! ```
//!
//! Vertices are 0-based. Edge handles number edges in creation order: the
//! graph file's edges first, then every insertion. Capacities are integers
//! or fractions `p/q`. Blank lines and text after `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Capacity, DynamicMultiGraph, EdgeHandle, GraphError, GraphUpdate, VertexId};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
}

#[derive(Debug, Error)]
pub enum ResolveError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("no live edge between {0} and {1}")]
    NoEdge(u32, u32),
}

fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

fn read(path: &Path) -> Result<String, ParseError> {
    std::fs::read_to_string(path).map_err(|source| ParseError::Io { path: path.display().to_string(), source })
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn num<T: FromStr>(line: usize, tok: &str, what: &str) -> Result<T, ParseError> {
    tok.parse().map_err(|_| syntax(line, format!("bad {what} `{tok}`")))
}

fn capacity(line: usize, tok: &str) -> Result<Capacity, ParseError> {
    let c: Capacity = num(line, tok, "capacity")?;
    if c <= Capacity::from_integer(0) {
        return Err(syntax(line, format!("capacity must be positive, got `{tok}`")));
    }
    Ok(c)
}

fn arity(line: usize, toks: &[&str], n: usize) -> Result<(), ParseError> {
    if toks.len() != n {
        return Err(syntax(line, format!("expected {} fields, found {}", n, toks.len())));
    }
    Ok(())
}

pub fn parse_graph(text: &str) -> Result<DynamicMultiGraph, ParseError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| syntax(1, "missing `n m` header"))?;
    arity(hl, &header, 2)?;
    let n: usize = num(hl, header[0], "vertex count")?;
    let m: usize = num(hl, header[1], "edge count")?;
    let mut g = DynamicMultiGraph::with_vertices(n);
    let mut seen = 0;
    for (line, toks) in lines {
        arity(line, &toks, 3)?;
        let u: u32 = num(line, toks[0], "vertex")?;
        let v: u32 = num(line, toks[1], "vertex")?;
        let c = capacity(line, toks[2])?;
        g.insert_edge(VertexId(u), VertexId(v), c).map_err(|source| ParseError::Graph { line, source })?;
        seen += 1;
    }
    if seen != m {
        return Err(syntax(hl, format!("header declares {m} edges, file has {seen}")));
    }
    Ok(DynamicMultiGraph::from_edges(n, &g.edges().map(|(_, r)| (r.u.0, r.v.0, r.cap)).collect::<Vec<_>>()).expect("validated above"))
}

pub fn read_graph(path: &Path) -> Result<DynamicMultiGraph, ParseError> {
    parse_graph(&read(path)?)
}

/// Edge list in graph-file form; vertices keep their ids.
pub fn format_graph(n: usize, edges: &[(usize, usize, Capacity)]) -> String {
    let mut s = format!("{} {}\n", n, edges.len());
    for (u, v, c) in edges {
        writeln!(s, "{u} {v} {c}").expect("write to string");
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StreamUpdate {
    Insert { u: u32, v: u32, cap: Capacity },
    Delete { u: u32, v: u32 },
    Split { vertex: u32, moved: Vec<u32> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    MinCut { s: u32, t: u32 },
    SparsestCut,
    Multiway { terminals: Vec<u32> },
    Multicut { pairs: Vec<(u32, u32)> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StreamItem {
    Update(StreamUpdate),
    Query(Query),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line<T> {
    pub line: usize,
    pub item: T,
}

fn counted(line: usize, toks: &[&str], per: usize) -> Result<usize, ParseError> {
    let k: usize = num(line, toks[0], "count")?;
    arity(line, toks, 1 + per * k)?;
    Ok(k)
}

pub fn parse_stream(text: &str) -> Result<Vec<Line<StreamItem>>, ParseError> {
    let mut out = Vec::new();
    for (line, toks) in content_lines(text) {
        let item = match toks[0] {
            "I" => {
                arity(line, &toks, 4)?;
                StreamItem::Update(StreamUpdate::Insert { u: num(line, toks[1], "vertex")?, v: num(line, toks[2], "vertex")?, cap: capacity(line, toks[3])? })
            }
            "D" => {
                arity(line, &toks, 3)?;
                StreamItem::Update(StreamUpdate::Delete { u: num(line, toks[1], "vertex")?, v: num(line, toks[2], "vertex")? })
            }
            "S" => {
                if toks.len() < 3 {
                    return Err(syntax(line, "split needs `S v k h1 .. hk`"));
                }
                counted(line, &toks[2..], 1)?;
                let moved = toks[3..].iter().map(|t| num(line, t, "edge handle")).collect::<Result<_, _>>()?;
                StreamItem::Update(StreamUpdate::Split { vertex: num(line, toks[1], "vertex")?, moved })
            }
            "Q" => StreamItem::Query(parse_query(line, &toks[1..])?),
            other => return Err(syntax(line, format!("unknown stream command `{other}`"))),
        };
        out.push(Line { line, item });
    }
    Ok(out)
}

fn parse_query(line: usize, toks: &[&str]) -> Result<Query, ParseError> {
    let kind = toks.first().ok_or_else(|| syntax(line, "query kind missing"))?;
    let ids = |ts: &[&str]| ts.iter().map(|t| num::<u32>(line, t, "vertex")).collect::<Result<Vec<_>, _>>();
    match *kind {
        "ST" => {
            arity(line, toks, 3)?;
            Ok(Query::MinCut { s: num(line, toks[1], "vertex")?, t: num(line, toks[2], "vertex")? })
        }
        "SC" => {
            arity(line, toks, 1)?;
            Ok(Query::SparsestCut)
        }
        "MWC" if toks.len() >= 2 => {
            counted(line, &toks[1..], 1)?;
            Ok(Query::Multiway { terminals: ids(&toks[2..])? })
        }
        "MC" if toks.len() >= 2 => {
            counted(line, &toks[1..], 2)?;
            let v = ids(&toks[2..])?;
            Ok(Query::Multicut { pairs: v.chunks(2).map(|p| (p[0], p[1])).collect() })
        }
        "MWC" | "MC" => Err(syntax(line, "count missing")),
        other => Err(syntax(line, format!("unknown query `{other}`"))),
    }
}

pub fn read_stream(path: &Path) -> Result<Vec<Line<StreamItem>>, ParseError> {
    parse_stream(&read(path)?)
}

impl StreamUpdate {
    /// Request against the current graph state.
    pub fn resolve(&self, g: &DynamicMultiGraph) -> Result<GraphUpdate, ResolveError> {
        let vertex = |x: u32| {
            let v = VertexId(x);
            g.has_vertex(v).then_some(v).ok_or(GraphError::UnknownVertex(v))
        };
        Ok(match self {
            StreamUpdate::Insert { u, v, cap } => GraphUpdate::Insert { u: vertex(*u)?, v: vertex(*v)?, cap: *cap },
            StreamUpdate::Delete { u, v } => {
                let (a, b) = (vertex(*u)?, vertex(*v)?);
                let edge = g
                    .incident(a)
                    .iter()
                    .copied()
                    .filter(|&h| g.edge(h).is_some_and(|r| r.other(a) == b))
                    .min()
                    .ok_or(ResolveError::NoEdge(*u, *v))?;
                GraphUpdate::Delete { edge }
            }
            StreamUpdate::Split { vertex: x, moved } => GraphUpdate::Split { vertex: vertex(*x)?, moved: moved.iter().map(|&h| EdgeHandle(h)).collect() },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cap;
    use num_rational::Ratio;

    #[test]
    fn graph_file_with_comments_and_fractions() {
        let g = parse_graph("# triangle\n3 3\n0 1 2\n1 2 3/2  # heavy\n\n2 0 1\n").unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.capacity(EdgeHandle(1)), Some(Ratio::new(3, 2)));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_graph("2 1\n\n0 1 x\n").unwrap_err();
        assert_eq!(e.to_string(), "line 3: bad capacity `x`");
        let e = parse_graph("2 2\n0 1 1\n").unwrap_err();
        assert!(e.to_string().starts_with("line 1:"));
        let e = parse_stream("I 0 1 1\nS 0 2 4\n").unwrap_err();
        assert!(e.to_string().starts_with("line 2:"));
        assert!(parse_graph("2 1\n0 0 1\n").unwrap_err().to_string().starts_with("line 2:"));
    }

    #[test]
    fn stream_items_and_delete_resolution() {
        let items = parse_stream("I 0 1 5\nD 1 0\nS 2 2 0 3\nQ ST 0 2\nQ SC\nQ MWC 3 0 1 2\nQ MC 2 0 1 1 2\n").unwrap();
        assert_eq!(items.len(), 7);
        assert_eq!(items[2].item, StreamItem::Update(StreamUpdate::Split { vertex: 2, moved: vec![0, 3] }));
        assert_eq!(items[6].item, StreamItem::Query(Query::Multicut { pairs: vec![(0, 1), (1, 2)] }));
        let g = DynamicMultiGraph::from_edges(3, &[(0, 1, cap(1)), (1, 2, cap(1)), (1, 0, cap(2))]).unwrap();
        let StreamItem::Update(d) = &items[1].item else { unreachable!() };
        assert_eq!(d.resolve(&g).unwrap(), GraphUpdate::Delete { edge: EdgeHandle(0) });
    }

    #[test]
    fn formatted_graph_parses_back() {
        let text = format_graph(3, &[(0, 1, cap(2)), (1, 2, Ratio::new(1, 3))]);
        let g = parse_graph(&text).unwrap();
        assert_eq!(g.capacity(EdgeHandle(1)), Some(Ratio::new(1, 3)));
    }
}
