//! Exhaustive catalog of small connected graphs up to isomorphism.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{classify_focused, has_trivial_automorphism_group, is_austere, refined_colors};
use crate::SimplicialGraph;

/// Largest graph accepted by [`canonical_form`].
pub const CANONICAL_BOUND: usize = 10;

/// Default guard for [`enumerate_catalog`].
pub const DEFAULT_MAX_N: usize = 8;

/// Connected graphs on n = 1..=8 vertices up to isomorphism.
pub const CONNECTED_COUNTS: [usize; 8] = [1, 1, 2, 6, 21, 112, 853, 11117];

const HEADER: &str = "atlas v1";

struct Canon<'a> {
    g: &'a SimplicialGraph,
    /// Colour required at each position.
    slots: Vec<usize>,
    colors: Vec<usize>,
    order: Vec<usize>,
    used: Vec<bool>,
    best: Option<Vec<bool>>,
    current: Vec<bool>,
}

impl Canon<'_> {
    fn search(&mut self) {
        let i = self.order.len();
        if i == self.slots.len() {
            if self.best.as_ref().is_none_or(|b| self.current < *b) {
                self.best = Some(self.current.clone());
            }
            return;
        }
        for v in 0..self.g.n() {
            if self.used[v] || self.colors[v] != self.slots[i] {
                continue;
            }
            let start = self.current.len();
            for &u in &self.order {
                self.current.push(self.g.adjacent(v, u));
            }
            let prune = self
                .best
                .as_ref()
                .is_some_and(|b| self.current[..] > b[..self.current.len()]);
            if !prune {
                self.used[v] = true;
                self.order.push(v);
                self.search();
                self.order.pop();
                self.used[v] = false;
            }
            self.current.truncate(start);
        }
    }
}

/// Canonical representative of the isomorphism class of `g`, on vertices
/// `v0..v{n-1}`.
///
/// Vertices are grouped by refined colour, which every isomorphism
/// preserves; within that constraint the lower-triangle adjacency code is
/// minimized exhaustively.
pub fn canonical_form(g: &SimplicialGraph) -> Result<SimplicialGraph> {
    let n = g.n();
    if n > CANONICAL_BOUND {
        return Err(Error::Capability(format!(
            "canonical form is limited to {CANONICAL_BOUND} vertices (got {n})"
        )));
    }
    let colors = refined_colors(g);
    let mut slots = colors.clone();
    slots.sort_unstable();
    let mut canon = Canon {
        g,
        slots,
        colors,
        order: Vec::with_capacity(n),
        used: vec![false; n],
        best: None,
        current: Vec::new(),
    };
    canon.search();
    Ok(from_code(n, &canon.best.expect("some order exists")))
}

fn from_code(n: usize, code: &[bool]) -> SimplicialGraph {
    let mut edges = Vec::new();
    let mut bits = code.iter();
    for i in 1..n {
        for j in 0..i {
            if *bits.next().expect("code length") {
                edges.push((j, i));
            }
        }
    }
    SimplicialGraph::from_index_edges("canonical", n, &edges).expect("code describes a simple graph")
}

/// Classification tag of a catalog record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphClass {
    Focused,
    Austere,
    Other,
}

impl fmt::Display for GraphClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphClass::Focused => "focused",
            GraphClass::Austere => "austere",
            GraphClass::Other => "other",
        })
    }
}

impl std::str::FromStr for GraphClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "focused" => Ok(GraphClass::Focused),
            "austere" => Ok(GraphClass::Austere),
            "other" => Ok(GraphClass::Other),
            _ => Err(Error::Input(format!("unknown class {s:?}"))),
        }
    }
}

/// Parameters recorded per class: (l, m, k) for focused graphs, the sorted
/// degree sequence otherwise.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Params {
    Focused { l: usize, m: usize, k: usize },
    Degrees(Vec<usize>),
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Params::Focused { l, m, k } => write!(f, "{l},{m},{k}"),
            Params::Degrees(d) => {
                let parts: Vec<String> = d.iter().map(usize::to_string).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

/// One isomorphism class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogRecord {
    pub graph: SimplicialGraph,
    pub class: GraphClass,
    pub params: Params,
    pub trivial_aut: bool,
    /// Focused with k = 1.
    pub k1_focus: bool,
    /// Focused at more than one vertex.
    pub multi_focus: bool,
}

impl CatalogRecord {
    /// Classifies a canonical graph.
    pub fn classify(graph: SimplicialGraph) -> Self {
        let trivial_aut = has_trivial_automorphism_group(&graph);
        let focused = classify_focused(graph.clone()).ok();
        let austere = graph.n() > 1 && is_austere(graph.clone()).is_ok();
        let mut degrees: Vec<usize> = (0..graph.n()).map(|v| graph.degree(v)).collect();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        let (class, params) = match (&focused, austere) {
            (_, true) => (GraphClass::Austere, Params::Degrees(degrees)),
            (Some(d), false) => (
                GraphClass::Focused,
                Params::Focused {
                    l: d.l(),
                    m: d.m(),
                    k: d.k(),
                },
            ),
            (None, false) => (GraphClass::Other, Params::Degrees(degrees)),
        };
        CatalogRecord {
            graph,
            class,
            params,
            trivial_aut,
            k1_focus: focused.as_ref().is_some_and(|d| d.k() == 1),
            multi_focus: focused.as_ref().is_some_and(|d| d.multiplicity > 1),
        }
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.graph.edges().collect()
    }

    fn flags(&self) -> Vec<&'static str> {
        let mut flags = Vec::new();
        if self.trivial_aut {
            flags.push("trivial-aut");
        }
        if self.k1_focus {
            flags.push("k1-focus");
        }
        if self.multi_focus {
            flags.push("multi-focus");
        }
        flags
    }

    /// The record as one line of the catalog file.
    pub fn line(&self) -> String {
        let edges: Vec<String> = self.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
        format!(
            "n={}; edges={}; class={}; params={}; flags={}",
            self.n(),
            edges.join(","),
            self.class,
            self.params,
            self.flags().join(",")
        )
    }

    fn parse_line(line: &str, lineno: usize) -> Result<Self> {
        let err = |message: String| Error::Parse { line: lineno, message };
        let mut fields = std::collections::BTreeMap::new();
        for part in line.split(';') {
            let (key, value) = part
                .trim()
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got {part:?}")))?;
            fields.insert(key.trim(), value.trim());
        }
        let get = |key: &str| fields.get(key).copied().ok_or_else(|| err(format!("missing field {key}")));
        let n: usize = get("n")?.parse().map_err(|_| err("bad vertex count".into()))?;
        let mut edges = Vec::new();
        for e in get("edges")?.split(',').filter(|s| !s.is_empty()) {
            let (u, v) = e.split_once('-').ok_or_else(|| err(format!("bad edge {e:?}")))?;
            let u: usize = u.parse().map_err(|_| err(format!("bad edge {e:?}")))?;
            let v: usize = v.parse().map_err(|_| err(format!("bad edge {e:?}")))?;
            edges.push((u, v));
        }
        let graph = SimplicialGraph::from_index_edges("canonical", n, &edges).map_err(|e| err(e.to_string()))?;
        let class: GraphClass = get("class")?.parse().map_err(|e: Error| err(e.to_string()))?;
        let params_text = get("params")?;
        let numbers: Vec<usize> = params_text
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| err(format!("bad params {params_text:?}"))))
            .collect::<Result<_>>()?;
        let params = match class {
            GraphClass::Focused => match numbers[..] {
                [l, m, k] => Params::Focused { l, m, k },
                _ => return Err(err("focused params need l,m,k".into())),
            },
            _ => Params::Degrees(numbers),
        };
        let flags: BTreeSet<&str> = get("flags")?.split(',').filter(|s| !s.is_empty()).collect();
        if let Some(bad) = flags
            .iter()
            .find(|f| !["trivial-aut", "k1-focus", "multi-focus"].contains(f))
        {
            return Err(err(format!("unknown flag {bad:?}")));
        }
        Ok(CatalogRecord {
            graph,
            class,
            params,
            trivial_aut: flags.contains("trivial-aut"),
            k1_focus: flags.contains("k1-focus"),
            multi_focus: flags.contains("multi-focus"),
        })
    }
}

/// All connected graphs with at most `max_n` vertices, one per isomorphism class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphCatalog {
    pub max_n: usize,
    pub records: Vec<CatalogRecord>,
}

type Code = (usize, Vec<(usize, usize)>);

fn code_of(g: &SimplicialGraph) -> Code {
    (g.n(), g.edges().collect())
}

/// Canonical connected graphs on exactly `n` vertices, sorted by edge list.
fn connected_graphs(n: usize, smaller: &[SimplicialGraph]) -> Vec<SimplicialGraph> {
    if n == 1 {
        return vec![SimplicialGraph::from_index_edges("canonical", 1, &[]).unwrap()];
    }
    // every connected graph has a vertex whose removal leaves it connected
    let found: BTreeSet<Code> = smaller
        .par_iter()
        .flat_map_iter(|h| {
            let base: Vec<(usize, usize)> = h.edges().collect();
            (1u64..1 << (n - 1)).filter_map(move |mask| {
                let mut edges = base.clone();
                edges.extend((0..n - 1).filter(|i| mask >> i & 1 == 1).map(|i| (i, n - 1)));
                let g = SimplicialGraph::from_index_edges("candidate", n, &edges).ok()?;
                Some(code_of(&canonical_form(&g).ok()?))
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    found
        .into_iter()
        .map(|(n, edges)| SimplicialGraph::from_index_edges("canonical", n, &edges).unwrap())
        .collect()
}

/// Enumerates and classifies all connected graphs on 1..=max_n vertices.
/// Deterministic: records are ordered by vertex count, then edge list.
pub fn enumerate_catalog(max_n: usize) -> Result<GraphCatalog> {
    if max_n > DEFAULT_MAX_N {
        return Err(Error::Capability(format!(
            "atlas enumeration is guarded at n <= {DEFAULT_MAX_N} (asked for {max_n})"
        )));
    }
    let mut records = Vec::new();
    let mut previous: Vec<SimplicialGraph> = Vec::new();
    for n in 1..=max_n {
        let graphs = connected_graphs(n, &previous);
        let classified: Vec<CatalogRecord> = graphs.par_iter().cloned().map(CatalogRecord::classify).collect();
        records.extend(classified);
        previous = graphs;
    }
    Ok(GraphCatalog { max_n, records })
}

impl GraphCatalog {
    pub fn of_class(&self, class: GraphClass) -> impl Iterator<Item = &CatalogRecord> {
        self.records.iter().filter(move |r| r.class == class)
    }

    pub fn count(&self, n: usize, class: Option<GraphClass>) -> usize {
        self.records
            .iter()
            .filter(|r| r.n() == n && class.is_none_or(|c| r.class == c))
            .count()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{HEADER} maxN={}\n", self.max_n);
        for r in &self.records {
            out.push_str(&r.line());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty catalog".into(),
        })?;
        let max_n = header
            .strip_prefix(HEADER)
            .and_then(|rest| rest.trim().strip_prefix("maxN="))
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| Error::Parse {
                line: 1,
                message: format!("expected header \"{HEADER} maxN=<n>\", got {header:?}"),
            })?;
        let records = lines
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| CatalogRecord::parse_line(l, i + 2))
            .collect::<Result<Vec<_>>>()?;
        Ok(GraphCatalog { max_n, records })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Per-n counts by class, one line per n.
    pub fn summary(&self) -> Vec<String> {
        (1..=self.max_n)
            .map(|n| {
                format!(
                    "n={n} total={} focused={} austere={} other={}",
                    self.count(n, None),
                    self.count(n, Some(GraphClass::Focused)),
                    self.count(n, Some(GraphClass::Austere)),
                    self.count(n, Some(GraphClass::Other)),
                )
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn canonical_form_ignores_labels() {
        let a = path("p", &["a", "b", "c"]);
        let b = SimplicialGraph::new("q", &["b", "c", "a"], &[("b", "c"), ("c", "a")]).unwrap();
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
        let k3 = complete("k3", &["x", "y", "z"]);
        assert_eq!(canonical_form(&k3).unwrap().edge_count(), 3);
    }

    #[test]
    fn canonical_form_separates_classes() {
        let p4 = path("p4", &["a", "b", "c", "d"]);
        let star = claw();
        assert_ne!(canonical_form(&p4).unwrap(), canonical_form(&star).unwrap());
    }

    #[test]
    fn canonical_form_has_a_bound() {
        let names: Vec<String> = (0..11).map(|i| format!("v{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        assert!(matches!(canonical_form(&edgeless("big", &refs)), Err(Error::Capability(_))));
    }

    #[test]
    fn small_counts() {
        let c = enumerate_catalog(5).unwrap();
        for n in 1..=5 {
            assert_eq!(c.count(n, None), CONNECTED_COUNTS[n - 1]);
        }
        let single = &c.records[0];
        assert_eq!(single.n(), 1);
        assert_ne!(single.class, GraphClass::Focused);
        assert_ne!(single.class, GraphClass::Austere);
    }

    #[test]
    fn guard_refuses_large_n() {
        assert!(matches!(enumerate_catalog(9), Err(Error::Capability(_))));
    }

    #[test]
    fn text_round_trip_and_errors() {
        let c = enumerate_catalog(4).unwrap();
        let text = c.to_text();
        assert_eq!(GraphCatalog::parse(&text).unwrap(), c);
        assert!(matches!(
            GraphCatalog::parse("atlas v2 maxN=4\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        let mut broken: Vec<&str> = text.lines().collect();
        broken[3] = "n=4; edges=0-1";
        assert!(matches!(
            GraphCatalog::parse(&broken.join("\n")),
            Err(Error::Parse { line: 4, .. })
        ));
    }
}
