//! Graph automorphisms by colour-refined backtracking.

use std::collections::BTreeMap;

use super::SimplicialGraph;
use crate::error::{Error, Result};

/// Default vertex bound for listing the full automorphism group.
pub const DEFAULT_AUTOMORPHISM_BOUND: usize = 10;

/// Colour refinement (1-dimensional Weisfeiler-Leman) starting from degrees.
///
/// Colours are ranks of sorted signatures, so isomorphic graphs receive
/// corresponding colourings and every automorphism preserves colours.
pub fn refined_colors(g: &SimplicialGraph) -> Vec<usize> {
    let n = g.n();
    let mut colors: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut classes = usize::MAX;
    loop {
        let signatures: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let ranks: BTreeMap<&(usize, Vec<usize>), usize> = {
            let mut distinct: Vec<&(usize, Vec<usize>)> = signatures.iter().collect();
            distinct.sort();
            distinct.dedup();
            distinct.into_iter().enumerate().map(|(i, s)| (s, i)).collect()
        };
        let next: Vec<usize> = signatures.iter().map(|s| ranks[s]).collect();
        let count = ranks.len();
        colors = next;
        if count == classes {
            return colors;
        }
        classes = count;
    }
}

struct Search<'a> {
    g: &'a SimplicialGraph,
    colors: Vec<usize>,
    order: Vec<usize>,
    image: Vec<Option<usize>>,
    used: Vec<bool>,
    found: Vec<Vec<usize>>,
    limit: Option<usize>,
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.limit.is_some_and(|l| self.found.len() >= l)
    }

    fn extend(&mut self, depth: usize) {
        if self.done() {
            return;
        }
        if depth == self.order.len() {
            self.found
                .push(self.image.iter().map(|x| x.expect("complete map")).collect());
            return;
        }
        let v = self.order[depth];
        for w in 0..self.g.n() {
            if self.used[w] || self.colors[w] != self.colors[v] {
                continue;
            }
            let consistent = self.order[..depth].iter().all(|&u| {
                let image_u = self.image[u].expect("placed");
                self.g.adjacent(v, u) == self.g.adjacent(w, image_u)
            });
            if !consistent {
                continue;
            }
            self.image[v] = Some(w);
            self.used[w] = true;
            self.extend(depth + 1);
            self.image[v] = None;
            self.used[w] = false;
            if self.done() {
                return;
            }
        }
    }
}

/// Placement order: small colour classes first, then vertices with many placed neighbours.
fn search_order(g: &SimplicialGraph, colors: &[usize]) -> Vec<usize> {
    let n = g.n();
    let mut class_size = vec![0usize; n];
    for &c in colors {
        class_size[c] += 1;
    }
    let mut placed = vec![false; n];
    let mut placed_neighbors = vec![0usize; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| {
                (
                    class_size[colors[v]] == 1,
                    std::cmp::Reverse(placed_neighbors[v]),
                    class_size[colors[v]],
                    v,
                )
            })
            .expect("unplaced vertex remains");
        placed[v] = true;
        for &w in g.neighbors(v) {
            placed_neighbors[w] += 1;
        }
        order.push(v);
    }
    order
}

/// Adjacency-preserving vertex permutations (as image vectors), sorted so the
/// identity comes first. Stops after `limit` permutations when given.
pub fn automorphisms(g: &SimplicialGraph, limit: Option<usize>) -> Vec<Vec<usize>> {
    let colors = refined_colors(g);
    let order = search_order(g, &colors);
    let mut search = Search {
        g,
        colors,
        order,
        image: vec![None; g.n()],
        used: vec![false; g.n()],
        found: Vec::new(),
        limit,
    };
    search.extend(0);
    let mut found = search.found;
    found.sort();
    found
}

/// The full automorphism group, refused above `bound` vertices.
pub fn graph_automorphism_group(g: &SimplicialGraph, bound: usize) -> Result<Vec<Vec<usize>>> {
    if g.n() > bound {
        return Err(Error::Capability(format!(
            "graph has {} vertices; listing Aut(graph) is limited to {bound}, use a smaller graph",
            g.n()
        )));
    }
    Ok(automorphisms(g, None))
}

/// `true` iff the only automorphism is the identity.
pub fn has_trivial_automorphism_group(g: &SimplicialGraph) -> bool {
    automorphisms(g, Some(2)).len() == 1
}

/// Cycle notation of a permutation, e.g. `(a b c)`; `()` for the identity.
pub fn cycle_notation(g: &SimplicialGraph, perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(g.vertex_name(x));
            x = perm[x];
        }
        out.push_str(&format!("({})", cycle.join(" ")));
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::named::*;
    use super::*;

    fn brute_force_count(g: &SimplicialGraph) -> usize {
        fn permutations(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in permutations(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        permutations(g.n())
            .into_iter()
            .filter(|p| g.edges().all(|(u, v)| g.adjacent(p[u], p[v])))
            .count()
    }

    #[test]
    fn small_group_orders() {
        let p3 = path("p3", &["a", "b", "c"]);
        let auts = graph_automorphism_group(&p3, DEFAULT_AUTOMORPHISM_BOUND).unwrap();
        assert_eq!(auts.len(), 2);
        assert_eq!(auts[0], vec![0, 1, 2]);
        let k3 = complete("k3", &["a", "b", "c"]);
        assert_eq!(automorphisms(&k3, None).len(), 6);
        let c5 = cycle("c5", &["a", "b", "c", "d", "e"]);
        assert_eq!(automorphisms(&c5, None).len(), 10);
    }

    #[test]
    fn agrees_with_brute_force_on_small_graphs() {
        let graphs = [
            claw(),
            cycle("c4", &["a", "b", "c", "d"]),
            edgeless("e4", &["a", "b", "c", "d"]),
            SimplicialGraph::from_index_edges("g", 6, &[(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)]).unwrap(),
            SimplicialGraph::from_index_edges("h", 6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (1, 4), (2, 5)])
                .unwrap(),
        ];
        for g in &graphs {
            assert_eq!(automorphisms(g, None).len(), brute_force_count(g), "{g:?}");
        }
    }

    #[test]
    fn bound_is_enforced() {
        let g = SimplicialGraph::from_index_edges("big", 11, &[]).unwrap();
        assert!(matches!(
            graph_automorphism_group(&g, DEFAULT_AUTOMORPHISM_BOUND),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn trivial_group_detection() {
        // smallest asymmetric tree: spider with legs of length 1, 2, 3
        let t = SimplicialGraph::from_index_edges("t", 7, &[(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6)])
            .unwrap();
        assert!(has_trivial_automorphism_group(&t));
        assert!(!has_trivial_automorphism_group(&claw()));
    }

    #[test]
    fn cycle_notation_formats() {
        let c3 = cycle("c3", &["a", "b", "c"]);
        assert_eq!(cycle_notation(&c3, &[1, 2, 0]), "(a b c)");
        assert_eq!(cycle_notation(&c3, &[0, 1, 2]), "()");
    }
}
