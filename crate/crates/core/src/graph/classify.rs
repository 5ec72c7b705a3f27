//! Focused and austere classification.

use std::fmt;

use super::symmetry::{automorphisms, cycle_notation};
use super::{GraphRef, SimplicialGraph};

/// Decomposition of a focused graph at its focus `c`.
///
/// `x_1..x_l` are the dominated vertices not adjacent to `c`, `x_{l+1}..x_m`
/// the dominated vertices adjacent to `c`. `components` lists the components
/// `P_1..P_k` of the complement of st(c), with `P_i = {x_i}` for `i <= l`; the
/// last entry is `P_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FocusedDecomposition {
    pub graph: GraphRef,
    pub focus: usize,
    pub l_set: Vec<usize>,
    pub s_set: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    /// Number of vertices at which the graph is focused.
    pub multiplicity: usize,
    /// Whether Aut(graph) is trivial; the Out(A_Γ) model requires it.
    pub trivial_automorphisms: bool,
}

impl FocusedDecomposition {
    pub fn l(&self) -> usize {
        self.l_set.len()
    }

    pub fn m(&self) -> usize {
        self.l_set.len() + self.s_set.len()
    }

    pub fn k(&self) -> usize {
        self.components.len()
    }

    /// Rank k+m-1 of the image of the transvection/partial-conjugation subgroup in Out.
    pub fn rank(&self) -> usize {
        self.k() + self.m() - 1
    }

    /// `x_i` for `1 <= i <= m`.
    pub fn x(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.m(), "x index {i} out of range 1..={}", self.m());
        if i <= self.l() {
            self.l_set[i - 1]
        } else {
            self.s_set[i - 1 - self.l()]
        }
    }

    /// Vertices `x_1..x_m` in order.
    pub fn dominated(&self) -> Vec<usize> {
        self.l_set.iter().chain(&self.s_set).copied().collect()
    }

    /// The focus is only weakly distinguished: the complement of its star is connected.
    pub fn k1_focus(&self) -> bool {
        self.k() == 1
    }

    pub fn summary(&self) -> String {
        format!(
            "focused at {}: l={} m={} k={} rank={}",
            self.graph.vertex_name(self.focus),
            self.l(),
            self.m(),
            self.k(),
            self.rank()
        )
    }
}

/// Why a graph is not focused.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NotFocused {
    Empty,
    /// Two vertices dominate each other.
    MutualDomination { a: usize, b: usize },
    /// Two distinct vertices each dominate some other vertex.
    SeveralDominators {
        first: (usize, usize),
        second: (usize, usize),
    },
    /// The stars of two distinct vertices both disconnect the graph.
    SeveralDisconnectingStars { a: usize, b: usize },
    /// The only possible focus has a disconnected star complement elsewhere.
    DisconnectingStar { focus: usize, vertex: usize },
    /// Every admissible focus is adjacent to all other vertices.
    Degenerate { candidate: usize },
}

impl NotFocused {
    pub fn describe(&self, g: &SimplicialGraph) -> String {
        let name = |v: usize| g.vertex_name(v);
        match *self {
            NotFocused::Empty => "empty graph".into(),
            NotFocused::MutualDomination { a, b } => {
                format!("mutual domination {}↔{}", name(a), name(b))
            }
            NotFocused::SeveralDominators { first, second } => format!(
                "two dominators: {} ≤ {} and {} ≤ {}",
                name(first.0),
                name(first.1),
                name(second.0),
                name(second.1)
            ),
            NotFocused::SeveralDisconnectingStars { a, b } => {
                format!("stars of {} and {} both disconnect the graph", name(a), name(b))
            }
            NotFocused::DisconnectingStar { focus, vertex } => format!(
                "only possible focus is {} but the star of {} disconnects the graph",
                name(focus),
                name(vertex)
            ),
            NotFocused::Degenerate { candidate } => format!(
                "degenerate: k = 0 ({} is adjacent to every vertex)",
                name(candidate)
            ),
        }
    }
}

/// Decides whether `g` is focused; on success returns the decomposition at the
/// least admissible focus.
pub fn classify_focused(g: impl Into<GraphRef>) -> Result<FocusedDecomposition, NotFocused> {
    let g: GraphRef = g.into();
    let n = g.n();
    if n == 0 {
        return Err(NotFocused::Empty);
    }
    let pairs = g.domination_pairs();
    let mut dominators: Vec<usize> = pairs.iter().map(|&(_, u)| u).collect();
    dominators.sort_unstable();
    dominators.dedup();
    if dominators.len() >= 2 {
        if let Some(&(v, u)) = pairs.iter().find(|&&(v, u)| v < u && g.dominates(v, u)) {
            return Err(NotFocused::MutualDomination { a: v, b: u });
        }
        let pick = |d: usize| *pairs.iter().find(|p| p.1 == d).expect("dominator has a pair");
        return Err(NotFocused::SeveralDominators {
            first: pick(dominators[0]),
            second: pick(dominators[1]),
        });
    }

    let disconnecting: Vec<usize> = (0..n)
        .filter(|&v| g.star_complement_components(v).len() >= 2)
        .collect();
    if disconnecting.len() >= 2 {
        return Err(NotFocused::SeveralDisconnectingStars {
            a: disconnecting[0],
            b: disconnecting[1],
        });
    }

    let mut candidates: Vec<usize> = match dominators.first() {
        Some(&u) => vec![u],
        None => (0..n).collect(),
    };
    if let Some(&d) = disconnecting.first() {
        if !candidates.contains(&d) {
            return Err(NotFocused::DisconnectingStar {
                focus: candidates[0],
                vertex: d,
            });
        }
        candidates = vec![d];
    }
    let degenerate_witness = candidates[0];
    candidates.retain(|&c| !g.star_complement_components(c).is_empty());
    let Some(&focus) = candidates.first() else {
        return Err(NotFocused::Degenerate {
            candidate: degenerate_witness,
        });
    };

    let mut l_set = Vec::new();
    let mut s_set = Vec::new();
    for &(v, u) in &pairs {
        if u == focus {
            if g.adjacent(u, v) {
                s_set.push(v);
            } else {
                l_set.push(v);
            }
        }
    }
    l_set.sort_unstable();
    s_set.sort_unstable();
    let components = g.star_complement_components(focus);
    debug_assert!(components
        .iter()
        .zip(&l_set)
        .all(|(p, &x)| p.as_slice() == [x]));
    let trivial_automorphisms = automorphisms(&g, Some(2)).len() == 1;
    Ok(FocusedDecomposition {
        multiplicity: candidates.len(),
        graph: g,
        focus,
        l_set,
        s_set,
        components,
        trivial_automorphisms,
    })
}

/// Certificate that a graph is austere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AustereCertificate {
    pub graph: GraphRef,
    pub max_degree: usize,
    pub diameter: usize,
}

/// First violated austerity condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AustereRefusal {
    Empty,
    Symmetry { permutation: Vec<usize> },
    Domination { dominated: usize, dominator: usize },
    DisconnectingStar { vertex: usize, components: usize },
}

impl AustereRefusal {
    pub fn describe(&self, g: &SimplicialGraph) -> String {
        match self {
            AustereRefusal::Empty => "empty graph".into(),
            AustereRefusal::Symmetry { permutation } => {
                format!(
                    "automorphism ({}) {}",
                    symmetry_kind(permutation),
                    cycle_notation(g, permutation)
                )
            }
            AustereRefusal::Domination {
                dominated,
                dominator,
            } => format!(
                "{} dominates {}",
                g.vertex_name(*dominator),
                g.vertex_name(*dominated)
            ),
            AustereRefusal::DisconnectingStar { vertex, components } => format!(
                "star of {} leaves {components} components",
                g.vertex_name(*vertex)
            ),
        }
    }
}

/// Automorphisms inspected when choosing a symmetry witness.
const SYMMETRY_SAMPLE: usize = 64;

/// "rotation" for a single cycle through every vertex, "involution" for an
/// element of order two, "symmetry" otherwise.
fn symmetry_kind(p: &[usize]) -> &'static str {
    let n = p.len();
    let mut v = 0;
    let mut steps = 0;
    loop {
        v = p[v];
        steps += 1;
        if v == 0 {
            break;
        }
    }
    if steps == n && n > 2 {
        "rotation"
    } else if (0..n).all(|i| p[p[i]] == i) {
        "involution"
    } else {
        "symmetry"
    }
}

/// Checks the austere conditions in order: trivial symmetry, no domination,
/// connected star complements.
pub fn is_austere(g: impl Into<GraphRef>) -> Result<AustereCertificate, AustereRefusal> {
    let g: GraphRef = g.into();
    if g.n() == 0 {
        return Err(AustereRefusal::Empty);
    }
    let autos = automorphisms(&g, Some(SYMMETRY_SAMPLE));
    if autos.len() > 1 {
        let p = autos
            .iter()
            .skip(1)
            .find(|p| symmetry_kind(p) == "rotation")
            .unwrap_or(&autos[1])
            .clone();
        return Err(AustereRefusal::Symmetry { permutation: p });
    }
    if let Some(&(dominated, dominator)) = g.domination_pairs().first() {
        return Err(AustereRefusal::Domination {
            dominated,
            dominator,
        });
    }
    for v in 0..g.n() {
        let components = g.star_complement_components(v).len();
        if components >= 2 {
            return Err(AustereRefusal::DisconnectingStar { vertex: v, components });
        }
    }
    let diameter = g
        .diameter()
        .expect("a graph without dominated vertices is connected");
    Ok(AustereCertificate {
        max_degree: g.max_degree(),
        diameter,
        graph: g,
    })
}

impl fmt::Display for AustereCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "austere: n={} edges={} max_degree={} diameter={}",
            self.graph.n(),
            self.graph.edge_count(),
            self.max_degree,
            self.diameter
        )
    }
}

#[cfg(test)]
mod tests {
    use super::super::named::*;
    use super::*;

    #[test]
    fn claw_is_not_focused() {
        let g = claw();
        let err = classify_focused(g.clone()).unwrap_err();
        assert_eq!(err.describe(&g), "mutual domination a↔b");
    }

    #[test]
    fn single_vertex_is_degenerate() {
        let g = SimplicialGraph::from_index_edges("k1", 1, &[]).unwrap();
        assert!(matches!(
            classify_focused(g),
            Err(NotFocused::Degenerate { .. })
        ));
    }

    #[test]
    fn path_of_five_is_focused_at_its_centre() {
        // a-b-c-d-e: b dominates a, d dominates e, so two dominators
        let g = path("p5", &["a", "b", "c", "d", "e"]);
        assert!(classify_focused(g).is_err());
    }

    #[test]
    fn c5_is_not_austere_because_of_rotation() {
        let g = cycle("c5", &["a", "b", "c", "d", "e"]);
        let refusal = is_austere(g.clone()).unwrap_err();
        assert!(matches!(refusal, AustereRefusal::Symmetry { .. }));
        assert!(refusal.describe(&g).starts_with("automorphism (rotation) ("));
    }

    #[test]
    fn edgeless_pair_is_not_austere() {
        assert!(is_austere(edgeless("e2", &["a", "b"])).is_err());
    }
}
