//! Finite simplicial graphs: the defining data of a right-angled Artin group.
//!
//! Vertices are stored by index; the order in which they were declared is the
//! canonical order used everywhere downstream (normal forms, bases, reports).

mod build;
mod classify;
mod format;
mod symmetry;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

pub use build::{asymmetric_tree, build_focused};
pub use classify::{
    classify_focused, is_austere, AustereCertificate, AustereRefusal, FocusedDecomposition,
    NotFocused,
};
pub use symmetry::{
    automorphisms, cycle_notation, graph_automorphism_group, has_trivial_automorphism_group,
    refined_colors,
    DEFAULT_AUTOMORPHISM_BOUND,
};

use crate::error::{Error, Result};

/// Set of vertex indices, ordered canonically.
pub type VertexSet = BTreeSet<usize>;

/// Shared handle to a graph; words and automorphisms keep one to their ambient graph.
pub type GraphRef = Arc<SimplicialGraph>;

#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialGraph {
    name: String,
    names: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Vec<bool>,
    neighbors: Vec<Vec<usize>>,
}

impl SimplicialGraph {
    /// Builds a graph from vertex names (in canonical order) and edges given by name.
    pub fn new<S: AsRef<str>>(name: &str, vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut g = Self::with_vertices(name, vertices.iter().map(|v| v.as_ref().to_string()))?;
        for (a, b) in edges {
            let (u, v) = (g.vertex(a.as_ref())?, g.vertex(b.as_ref())?);
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Graph on vertices named `v0..v{n-1}` with edges given by index.
    pub fn from_index_edges(name: &str, n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::with_vertices(name, (0..n).map(|i| format!("v{i}")))?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::UnknownVertex(format!("v{}", u.max(v))));
            }
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub(crate) fn with_vertices(
        name: &str,
        vertices: impl IntoIterator<Item = String>,
    ) -> Result<Self> {
        let names: Vec<String> = vertices.into_iter().collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, v) in names.iter().enumerate() {
            if v.is_empty() || v.chars().any(|c| c.is_whitespace()) {
                return Err(Error::InvalidGraph(format!("bad vertex identifier {v:?}")));
            }
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{v}`")));
            }
        }
        let n = names.len();
        Ok(SimplicialGraph {
            name: name.to_string(),
            names,
            index,
            adjacency: vec![false; n * n],
            neighbors: vec![Vec::new(); n],
        })
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at `{}`", self.names[u])));
        }
        if self.adjacent(u, v) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge {} {}",
                self.names[u], self.names[v]
            )));
        }
        let n = self.n();
        self.adjacency[u * n + v] = true;
        self.adjacency[v * n + u] = true;
        for (a, b) in [(u, v), (v, u)] {
            let pos = self.neighbors[a].partition_point(|&x| x < b);
            self.neighbors[a].insert(pos, b);
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    /// Index of the vertex with the given identifier.
    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u * self.n() + v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors[u]
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    /// lk(v): the neighbours of `v`.
    pub fn link(&self, v: usize) -> VertexSet {
        self.neighbors[v].iter().copied().collect()
    }

    /// st(v) = lk(v) ∪ {v}.
    pub fn star(&self, v: usize) -> VertexSet {
        let mut s = self.link(v);
        s.insert(v);
        s
    }

    /// `true` iff lk(v) ⊆ st(u), written v ≤ u. Every vertex dominates itself.
    pub fn dominates(&self, u: usize, v: usize) -> bool {
        self.neighbors[v]
            .iter()
            .all(|&w| w == u || self.adjacent(u, w))
    }

    /// lk(v) \ st(u): the obstruction to u dominating v.
    pub fn domination_witness(&self, u: usize, v: usize) -> VertexSet {
        self.neighbors[v]
            .iter()
            .copied()
            .filter(|&w| w != u && !self.adjacent(u, w))
            .collect()
    }

    /// All ordered pairs `(dominated, dominator)` of distinct vertices with dominated ≤ dominator.
    pub fn domination_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n)
            .flat_map(|v| (0..n).map(move |u| (v, u)))
            .filter(|&(v, u)| u != v && self.dominates(u, v))
            .collect()
    }

    /// Connected components of the subgraph induced on the vertices not removed.
    /// Sorted with singletons first, then by least vertex.
    pub fn components_avoiding(&self, removed: &[bool]) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = removed.to_vec();
        let mut comps = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.neighbors[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps.sort_by_key(|c| (c.len() > 1, c[0]));
        comps
    }

    /// Connected components of the graph with st(v) deleted.
    pub fn star_complement_components(&self, v: usize) -> Vec<Vec<usize>> {
        let mut removed = vec![false; self.n()];
        removed[v] = true;
        for &w in &self.neighbors[v] {
            removed[w] = true;
        }
        self.components_avoiding(&removed)
    }

    pub fn is_connected(&self) -> bool {
        self.components_avoiding(&vec![false; self.n()]).len() <= 1
    }

    /// Breadth-first distances from `v`; `None` for unreachable vertices.
    pub fn distances_from(&self, v: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[v] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for &y in &self.neighbors[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Diameter of a connected graph, `None` if disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for v in 0..self.n() {
            for d in self.distances_from(v) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    /// Reorders vertices: vertex `i` of `self` becomes vertex `perm[i]` of the result.
    pub fn relabeled(&self, perm: &[usize]) -> SimplicialGraph {
        let n = self.n();
        let mut names = vec![String::new(); n];
        for (i, &p) in perm.iter().enumerate() {
            names[p] = self.names[i].clone();
        }
        let mut g = Self::with_vertices(&self.name, names).expect("relabeling keeps names distinct");
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]).expect("relabeling keeps edges simple");
        }
        g
    }

    /// Formats a vertex set as `a,b,c` using vertex names.
    pub fn format_set<'a>(&self, set: impl IntoIterator<Item = &'a usize>) -> String {
        set.into_iter()
            .map(|&v| self.names[v].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses the line-oriented graph text format.
    pub fn parse(text: &str) -> Result<Self> {
        format::parse(text)
    }

    /// Serializes to the line-oriented graph text format.
    pub fn to_text(&self) -> String {
        format::write(self)
    }
}

impl fmt::Debug for SimplicialGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges()
            .map(|(u, v)| format!("{}-{}", self.names[u], self.names[v]))
            .collect();
        write!(f, "Graph({}; [{}]; {})", self.name, self.names.join(" "), edges.join(" "))
    }
}

/// Small named graphs used throughout tests and examples.
pub mod named {
    use super::SimplicialGraph;

    fn with_names(name: &str, vertices: &[&str], edges: &[(&str, &str)]) -> SimplicialGraph {
        SimplicialGraph::new(name, vertices, edges).expect("well-formed named graph")
    }

    pub fn path(name: &str, vertices: &[&str]) -> SimplicialGraph {
        let edges: Vec<(&str, &str)> = vertices.windows(2).map(|w| (w[0], w[1])).collect();
        with_names(name, vertices, &edges)
    }

    pub fn cycle(name: &str, vertices: &[&str]) -> SimplicialGraph {
        let mut edges: Vec<(&str, &str)> = vertices.windows(2).map(|w| (w[0], w[1])).collect();
        edges.push((vertices[vertices.len() - 1], vertices[0]));
        with_names(name, vertices, &edges)
    }

    pub fn complete(name: &str, vertices: &[&str]) -> SimplicialGraph {
        let mut edges = Vec::new();
        for (i, a) in vertices.iter().enumerate() {
            for b in &vertices[i + 1..] {
                edges.push((*a, *b));
            }
        }
        with_names(name, vertices, &edges)
    }

    pub fn edgeless(name: &str, vertices: &[&str]) -> SimplicialGraph {
        with_names(name, vertices, &[])
    }

    /// K_{1,3} with centre `x` and leaves `a`, `b`, `c`.
    pub fn claw() -> SimplicialGraph {
        with_names(
            "claw",
            &["a", "b", "c", "x"],
            &[("x", "a"), ("x", "b"), ("x", "c")],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    fn set(g: &SimplicialGraph, names: &[&str]) -> VertexSet {
        names.iter().map(|n| g.vertex(n).unwrap()).collect()
    }

    #[test]
    fn link_and_star_on_path() {
        let g = path("p3", &["a", "b", "c"]);
        let b = g.vertex("b").unwrap();
        assert_eq!(g.link(b), set(&g, &["a", "c"]));
        assert_eq!(g.star(b), set(&g, &["a", "b", "c"]));
    }

    #[test]
    fn link_and_star_on_edgeless_and_triangle() {
        let g = edgeless("e2", &["a", "b"]);
        assert!(g.link(0).is_empty());
        assert_eq!(g.star(0), set(&g, &["a"]));
        let k3 = complete("k3", &["a", "b", "c"]);
        for v in 0..3 {
            assert_eq!(k3.star(v).len(), 3);
        }
    }

    #[test]
    fn unknown_vertex_is_an_input_error() {
        let g = path("p3", &["a", "b", "c"]);
        assert_eq!(g.vertex("z"), Err(Error::UnknownVertex("z".into())));
    }

    #[test]
    fn domination_examples() {
        let g = path("p3", &["a", "b", "c"]);
        let (a, b) = (g.vertex("a").unwrap(), g.vertex("b").unwrap());
        assert!(g.dominates(b, a));
        let e = edgeless("e3", &["a", "b", "c"]);
        for u in 0..3 {
            for v in 0..3 {
                assert!(e.dominates(u, v));
            }
        }
        let c4 = cycle("c4", &["a", "b", "c", "d"]);
        let [a, b, c] = ["a", "b", "c"].map(|x| c4.vertex(x).unwrap());
        assert!(c4.dominates(a, c));
        assert!(!c4.dominates(a, b));
        assert!(c4.dominates(a, a));
    }

    #[test]
    fn domination_agrees_with_definition_by_enumeration() {
        let g = SimplicialGraph::from_index_edges("g", 6, &[(0, 1), (1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (0, 4)])
            .unwrap();
        for u in 0..6 {
            for v in 0..6 {
                let by_def = g.link(v).is_subset(&g.star(u));
                assert_eq!(g.dominates(u, v), by_def, "u={u} v={v}");
                assert_eq!(g.domination_witness(u, v).is_empty(), by_def);
            }
        }
    }

    #[test]
    fn star_complement_examples() {
        let g = path("p3", &["a", "b", "c"]);
        assert!(g.star_complement_components(1).is_empty());
        let g = path("p5", &["a", "b", "c", "d", "e"]);
        let c = g.vertex("c").unwrap();
        let comps = g.star_complement_components(c);
        assert_eq!(comps, vec![vec![g.vertex("a").unwrap()], vec![g.vertex("e").unwrap()]]);
        let k3 = complete("k3", &["a", "b", "c"]);
        assert!(k3.star_complement_components(0).is_empty());
    }

    #[test]
    fn singletons_sort_before_larger_components() {
        // centre 0 adjacent to 1; 2-3 hang off 1, and 4 hangs off 1 alone.
        let g = SimplicialGraph::from_index_edges("g", 5, &[(0, 1), (1, 2), (2, 3), (1, 4)]).unwrap();
        assert_eq!(g.star_complement_components(0), vec![vec![4], vec![2, 3]]);
    }

    #[test]
    fn rejects_malformed_graphs() {
        assert!(SimplicialGraph::new("x", &["a", "a"], &[]).is_err());
        assert!(SimplicialGraph::new("x", &["a", "b"], &[("a", "a")]).is_err());
        assert!(SimplicialGraph::new("x", &["a", "b"], &[("a", "b"), ("b", "a")]).is_err());
        assert!(SimplicialGraph::new("x", &["a", "b"], &[("a", "z")]).is_err());
    }

    #[test]
    fn diameter_and_connectivity() {
        let g = path("p4", &["a", "b", "c", "d"]);
        assert_eq!(g.diameter(), Some(3));
        assert!(g.is_connected());
        let e = edgeless("e2", &["a", "b"]);
        assert_eq!(e.diameter(), None);
    }

    #[test]
    fn relabeling_preserves_structure() {
        let g = path("p3", &["a", "b", "c"]);
        let h = g.relabeled(&[2, 0, 1]);
        assert_eq!(h.vertex_names(), &["b", "c", "a"]);
        assert!(h.adjacent(h.vertex("a").unwrap(), h.vertex("b").unwrap()));
        assert!(!h.adjacent(h.vertex("a").unwrap(), h.vertex("c").unwrap()));
    }
}
