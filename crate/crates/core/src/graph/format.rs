//! Line-oriented graph text format:
//!
//! ```text
//! graph <name>
//! vertex <id>        # one per vertex, order is the canonical order
//! edge <id> <id>
//! ```

use super::SimplicialGraph;
use crate::error::{Error, Result};

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub(super) fn parse(text: &str) -> Result<SimplicialGraph> {
    let mut name: Option<String> = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, String, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["graph", n] => {
                if name.is_some() {
                    return Err(err(lineno, "second `graph` header"));
                }
                name = Some(n.to_string());
            }
            ["vertex", v] => {
                if name.is_none() {
                    return Err(err(lineno, "`vertex` before `graph` header"));
                }
                if !edges.is_empty() {
                    return Err(err(lineno, "`vertex` after `edge` lines"));
                }
                vertices.push(v.to_string());
            }
            ["edge", a, b] => {
                if name.is_none() {
                    return Err(err(lineno, "`edge` before `graph` header"));
                }
                edges.push((lineno, a.to_string(), b.to_string()));
            }
            [kw, ..] => {
                return Err(err(
                    lineno,
                    format!("malformed `{kw}` line: {line:?}"),
                ))
            }
            [] => unreachable!(),
        }
    }

    let name = name.ok_or_else(|| err(1, "missing `graph <name>` header"))?;
    let mut g = SimplicialGraph::with_vertices(&name, vertices).map_err(|e| err(0, e.to_string()))?;
    for (lineno, a, b) in edges {
        let u = g.vertex(&a).map_err(|e| err(lineno, e.to_string()))?;
        let v = g.vertex(&b).map_err(|e| err(lineno, e.to_string()))?;
        g.add_edge(u, v).map_err(|e| err(lineno, e.to_string()))?;
    }
    Ok(g)
}

pub(super) fn write(g: &SimplicialGraph) -> String {
    let mut out = format!("graph {}\n", g.name());
    for v in g.vertex_names() {
        out.push_str(&format!("vertex {v}\n"));
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("edge {} {}\n", g.vertex_name(u), g.vertex_name(v)));
    }
    out
}
