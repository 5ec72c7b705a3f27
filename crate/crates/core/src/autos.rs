//! Automorphisms of A_Γ given by generator images, and the Laurence-Servatius
//! generators: inversions, transvections, partial conjugations and graph
//! automorphisms.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{automorphisms, GraphRef, SimplicialGraph, VertexSet};
use crate::matrix::IntMatrix;
use crate::words::{format_letters, invert_letters, normalize, GroupWord, Letter};

/// How an automorphism was constructed. Equality ignores tags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tag {
    Identity,
    Inversion(usize),
    Transvection { u: usize, v: usize, adjacent: bool },
    PartialConjugation { v: usize, component: Vec<usize> },
    GraphPermutation(Vec<usize>),
    Inner(Vec<Letter>),
    Composite,
}

/// An automorphism of A_Γ, stored with the images of the generators and of
/// the generators under its inverse (all in normal form).
#[derive(Clone)]
pub struct RaagAutomorphism {
    graph: GraphRef,
    images: Vec<Vec<Letter>>,
    inverse_images: Vec<Vec<Letter>>,
    tag: Tag,
}

impl RaagAutomorphism {
    pub fn identity(graph: &GraphRef) -> Self {
        let images: Vec<Vec<Letter>> = (0..graph.n()).map(|v| vec![Letter::pos(v)]).collect();
        RaagAutomorphism {
            graph: graph.clone(),
            inverse_images: images.clone(),
            images,
            tag: Tag::Identity,
        }
    }

    fn from_parts(
        graph: &GraphRef,
        images: Vec<Vec<Letter>>,
        inverse_images: Vec<Vec<Letter>>,
        tag: Tag,
    ) -> Self {
        let images = images.into_iter().map(|w| normalize(graph, w)).collect();
        let inverse_images = inverse_images.into_iter().map(|w| normalize(graph, w)).collect();
        RaagAutomorphism {
            graph: graph.clone(),
            images,
            inverse_images,
            tag,
        }
    }

    /// Builds an automorphism from explicit images and inverse images, checking
    /// that both maps respect the defining relations and are mutually inverse.
    pub fn from_images(graph: &GraphRef, images: Vec<GroupWord>, inverse_images: Vec<GroupWord>) -> Result<Self> {
        let n = graph.n();
        if images.len() != n || inverse_images.len() != n {
            return Err(Error::Input(format!("expected {n} images")));
        }
        let f = Self::from_parts(
            graph,
            images.into_iter().map(|w| w.letters().to_vec()).collect(),
            inverse_images.into_iter().map(|w| w.letters().to_vec()).collect(),
            Tag::Composite,
        );
        f.check_relations()?;
        f.inverse().check_relations()?;
        if !f.compose(&f.inverse())?.is_identity() || !f.inverse().compose(&f)?.is_identity() {
            return Err(Error::Input("inverse images do not invert the map".into()));
        }
        Ok(f)
    }

    /// ι_v: v ↦ v⁻¹.
    pub fn inversion(graph: &GraphRef, v: usize) -> Self {
        let mut images: Vec<Vec<Letter>> = (0..graph.n()).map(|x| vec![Letter::pos(x)]).collect();
        images[v] = vec![Letter::neg(v)];
        Self::from_parts(graph, images.clone(), images, Tag::Inversion(v))
    }

    /// τ_{uv}: v ↦ uv, defined when v ≤ u.
    pub fn transvection(graph: &GraphRef, u: usize, v: usize) -> Result<Self> {
        if u == v {
            return Err(Error::Input("transvection needs distinct vertices".into()));
        }
        if !graph.dominates(u, v) {
            return Err(Error::NotDominated {
                dominator: graph.vertex_name(u).into(),
                dominated: graph.vertex_name(v).into(),
                witness: graph.format_set(&graph.domination_witness(u, v)),
            });
        }
        let mut images: Vec<Vec<Letter>> = (0..graph.n()).map(|x| vec![Letter::pos(x)]).collect();
        let mut inverse_images = images.clone();
        images[v] = vec![Letter::pos(u), Letter::pos(v)];
        inverse_images[v] = vec![Letter::neg(u), Letter::pos(v)];
        let adjacent = graph.adjacent(u, v);
        Ok(Self::from_parts(graph, images, inverse_images, Tag::Transvection { u, v, adjacent }))
    }

    /// χ_{v,P}: x ↦ v x v⁻¹ for x in the component P of Γ ∖ st(v).
    pub fn partial_conjugation(graph: &GraphRef, v: usize, component: &VertexSet) -> Result<Self> {
        let wanted: Vec<usize> = component.iter().copied().collect();
        if !graph.star_complement_components(v).contains(&wanted) {
            return Err(Error::NotAComponent {
                vertex: graph.vertex_name(v).into(),
                set: graph.format_set(component),
            });
        }
        let mut images: Vec<Vec<Letter>> = (0..graph.n()).map(|x| vec![Letter::pos(x)]).collect();
        let mut inverse_images = images.clone();
        for &x in &wanted {
            images[x] = vec![Letter::pos(v), Letter::pos(x), Letter::neg(v)];
            inverse_images[x] = vec![Letter::neg(v), Letter::pos(x), Letter::pos(v)];
        }
        Ok(Self::from_parts(
            graph,
            images,
            inverse_images,
            Tag::PartialConjugation { v, component: wanted },
        ))
    }

    /// The automorphism permuting generators along a graph automorphism.
    pub fn graph_permutation(graph: &GraphRef, perm: &[usize]) -> Result<Self> {
        let n = graph.n();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::NotAGraphAutomorphism("not a permutation of the vertices".into()));
        }
        if let Some((u, v)) = graph.edges().find(|&(u, v)| !graph.adjacent(perm[u], perm[v])) {
            return Err(Error::NotAGraphAutomorphism(format!(
                "edge {} {} is not mapped to an edge",
                graph.vertex_name(u),
                graph.vertex_name(v)
            )));
        }
        let mut inv = vec![0; n];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        Ok(Self::from_parts(
            graph,
            perm.iter().map(|&p| vec![Letter::pos(p)]).collect(),
            inv.iter().map(|&p| vec![Letter::pos(p)]).collect(),
            Tag::GraphPermutation(perm.to_vec()),
        ))
    }

    /// γ_w: x ↦ w x w⁻¹.
    pub fn inner(word: &GroupWord) -> Self {
        let graph = word.graph();
        let w = word.normal_form().letters().to_vec();
        let conj = |x: usize, w: &[Letter]| -> Vec<Letter> {
            w.iter()
                .copied()
                .chain(std::iter::once(Letter::pos(x)))
                .chain(invert_letters(w))
                .collect()
        };
        let w_inv: Vec<Letter> = invert_letters(&w).collect();
        Self::from_parts(
            graph,
            (0..graph.n()).map(|x| conj(x, &w)).collect(),
            (0..graph.n()).map(|x| conj(x, &w_inv)).collect(),
            Tag::Inner(w),
        )
    }

    pub fn graph(&self) -> &GraphRef {
        &self.graph
    }

    pub fn tag(&self) -> &Tag {
        &self.tag
    }

    /// Image of generator `v`.
    pub fn image(&self, v: usize) -> GroupWord {
        GroupWord::from_letters(&self.graph, self.images[v].clone())
    }

    fn same_ambient(&self, graph: &GraphRef) -> Result<()> {
        if Arc::ptr_eq(&self.graph, graph) || *self.graph == **graph {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    fn substitute(graph: &SimplicialGraph, images: &[Vec<Letter>], w: &[Letter]) -> Vec<Letter> {
        let mut out = Vec::new();
        for a in w {
            let img = &images[a.vertex];
            if a.inverse {
                out.extend(invert_letters(img));
            } else {
                out.extend_from_slice(img);
            }
        }
        normalize(graph, out)
    }

    pub(crate) fn apply_letters(&self, w: &[Letter]) -> Vec<Letter> {
        Self::substitute(&self.graph, &self.images, w)
    }

    /// f(w) in normal form.
    pub fn apply(&self, w: &GroupWord) -> Result<GroupWord> {
        self.same_ambient(w.graph())?;
        Ok(GroupWord::from_letters(&self.graph, self.apply_letters(w.letters())))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &RaagAutomorphism) -> Result<RaagAutomorphism> {
        self.same_ambient(&other.graph)?;
        let images = other
            .images
            .iter()
            .map(|w| Self::substitute(&self.graph, &self.images, w))
            .collect();
        let inverse_images = self
            .inverse_images
            .iter()
            .map(|w| Self::substitute(&self.graph, &other.inverse_images, w))
            .collect();
        Ok(RaagAutomorphism {
            graph: self.graph.clone(),
            images,
            inverse_images,
            tag: Tag::Composite,
        })
    }

    pub fn inverse(&self) -> RaagAutomorphism {
        let tag = match &self.tag {
            Tag::Identity | Tag::Inversion(_) => self.tag.clone(),
            _ => Tag::Composite,
        };
        RaagAutomorphism {
            graph: self.graph.clone(),
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
            tag,
        }
    }

    pub fn pow(&self, e: i64) -> RaagAutomorphism {
        let mut base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = RaagAutomorphism::identity(&self.graph);
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base).expect("same ambient");
            }
            base = base.compose(&base).expect("same ambient");
            e >>= 1;
        }
        acc
    }

    /// Extensional equality: all generator images agree in A_Γ.
    pub fn equals(&self, other: &RaagAutomorphism) -> Result<bool> {
        self.same_ambient(&other.graph)?;
        Ok(self.images == other.images)
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(v, w)| w.as_slice() == [Letter::pos(v)])
    }

    /// Images of adjacent generators must commute.
    pub fn check_relations(&self) -> Result<()> {
        for (x, y) in self.graph.edges() {
            let xy = Self::substitute(&self.graph, &self.images, &[Letter::pos(x), Letter::pos(y)]);
            let yx = Self::substitute(&self.graph, &self.images, &[Letter::pos(y), Letter::pos(x)]);
            if xy != yx {
                return Err(Error::Input(format!(
                    "images of adjacent generators {} and {} do not commute",
                    self.graph.vertex_name(x),
                    self.graph.vertex_name(y)
                )));
            }
        }
        Ok(())
    }

    /// Induced map on the abelianization Z^n; column `u` holds the image of `u`.
    pub fn abelianization_matrix(&self) -> IntMatrix {
        let n = self.graph.n();
        let mut m = IntMatrix::zero(n);
        for (u, img) in self.images.iter().enumerate() {
            for a in img {
                m.set(a.vertex, u, m.get(a.vertex, u) + a.sign());
            }
        }
        m
    }

    /// Total length of the generator images.
    pub fn image_length(&self) -> usize {
        self.images.iter().map(Vec::len).sum()
    }

    /// Decides whether `self` is inner. Returns `w` with `self = γ_w`.
    ///
    /// Greedy descent: repeatedly precompose with conjugation by a single
    /// letter whenever that strictly shortens the total image length. An inner
    /// automorphism always admits such a step until it reaches the identity.
    pub fn inner_conjugator(&self) -> Option<GroupWord> {
        let g = &self.graph;
        let mut images = self.images.clone();
        let mut total: usize = images.iter().map(Vec::len).sum();
        let mut conjugator: Vec<Letter> = Vec::new();
        let letters: Vec<Letter> = (0..g.n()).flat_map(|v| [Letter::pos(v), Letter::neg(v)]).collect();
        loop {
            if images
                .iter()
                .enumerate()
                .all(|(v, w)| w.as_slice() == [Letter::pos(v)])
            {
                return Some(GroupWord::from_letters(g, normalize(g, conjugator)));
            }
            let mut improved = false;
            for &a in &letters {
                // γ_a⁻¹ ∘ current: x ↦ a⁻¹ current(x) a
                let next: Vec<Vec<Letter>> = images
                    .iter()
                    .map(|w| {
                        normalize(
                            g,
                            std::iter::once(a.inv())
                                .chain(w.iter().copied())
                                .chain(std::iter::once(a)),
                        )
                    })
                    .collect();
                let len: usize = next.iter().map(Vec::len).sum();
                if len < total {
                    images = next;
                    total = len;
                    conjugator.push(a);
                    improved = true;
                    break;
                }
            }
            if !improved {
                return None;
            }
        }
    }

    /// Parses `inv v`, `tv u v`, `pc v {a,b}`, `perm (a b)(c d)`, `conj w`, `id`,
    /// joined by `;` and applied left to right.
    pub fn parse(graph: &GraphRef, text: &str) -> Result<Self> {
        let mut acc = RaagAutomorphism::identity(graph);
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let f = parse_one(graph, part)?;
            acc = f.compose(&acc)?;
        }
        Ok(acc)
    }
}

fn parse_one(graph: &GraphRef, part: &str) -> Result<RaagAutomorphism> {
    let (head, rest) = part.split_once(char::is_whitespace).unwrap_or((part, ""));
    let rest = rest.trim();
    let vertex = |s: &str| graph.vertex(s.trim());
    match head {
        "id" => Ok(RaagAutomorphism::identity(graph)),
        "inv" => Ok(RaagAutomorphism::inversion(graph, vertex(rest)?)),
        "tv" => {
            let args: Vec<&str> = rest.split_whitespace().collect();
            let [u, v] = args.as_slice() else {
                return Err(Error::Input(format!("`tv` expects two vertices: {part:?}")));
            };
            RaagAutomorphism::transvection(graph, vertex(u)?, vertex(v)?)
        }
        "pc" => {
            let (v, set) = rest
                .split_once('{')
                .ok_or_else(|| Error::Input(format!("`pc` expects `v {{a,b,...}}`: {part:?}")))?;
            let set = set
                .strip_suffix('}')
                .ok_or_else(|| Error::Input(format!("unclosed set in {part:?}")))?;
            let mut component = VertexSet::new();
            for name in set.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                component.insert(vertex(name)?);
            }
            RaagAutomorphism::partial_conjugation(graph, vertex(v)?, &component)
        }
        "perm" => {
            let mut perm: Vec<usize> = (0..graph.n()).collect();
            for cycle in rest.split('(').map(str::trim).filter(|c| !c.is_empty()) {
                let cycle = cycle
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Input(format!("unclosed cycle in {part:?}")))?;
                let vs = cycle
                    .split_whitespace()
                    .map(&vertex)
                    .collect::<Result<Vec<_>>>()?;
                for (i, &v) in vs.iter().enumerate() {
                    perm[v] = vs[(i + 1) % vs.len()];
                }
            }
            RaagAutomorphism::graph_permutation(graph, &perm)
        }
        "conj" => Ok(RaagAutomorphism::inner(&GroupWord::parse(graph, rest)?)),
        _ => Err(Error::Input(format!("unknown automorphism `{head}`"))),
    }
}

impl fmt::Display for RaagAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(v, w)| format!("{} -> {}", self.graph.vertex_name(v), format_letters(&self.graph, w)))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

impl fmt::Debug for RaagAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RaagAutomorphism({self})")
    }
}

/// The Laurence-Servatius generating set of Aut(A_Γ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorInventory {
    pub inversions: Vec<usize>,
    /// Pairs `(u, v)` with `v ≤ u`, giving τ_{uv}.
    pub transvections: Vec<(usize, usize)>,
    /// Pairs `(v, P)` with `P` a component of Γ ∖ st(v).
    pub partial_conjugations: Vec<(usize, Vec<usize>)>,
    /// Non-identity graph automorphisms.
    pub graph_automorphisms: Vec<Vec<usize>>,
}

impl GeneratorInventory {
    pub fn of(graph: &SimplicialGraph) -> Self {
        let transvections = graph.domination_pairs().into_iter().map(|(v, u)| (u, v)).collect();
        let partial_conjugations = (0..graph.n())
            .flat_map(|v| graph.star_complement_components(v).into_iter().map(move |p| (v, p)))
            .collect();
        let graph_automorphisms = automorphisms(graph, None).into_iter().skip(1).collect();
        GeneratorInventory {
            inversions: (0..graph.n()).collect(),
            transvections,
            partial_conjugations,
            graph_automorphisms,
        }
    }

    /// Partial conjugations that are not conjugations of the whole complement of a star.
    pub fn proper_partial_conjugations(&self, graph: &SimplicialGraph) -> Vec<(usize, Vec<usize>)> {
        self.partial_conjugations
            .iter()
            .filter(|(v, p)| p.len() + graph.star(*v).len() < graph.n())
            .cloned()
            .collect()
    }

    /// Builds every generator as an automorphism.
    pub fn automorphisms(&self, graph: &GraphRef) -> Vec<RaagAutomorphism> {
        let mut out: Vec<RaagAutomorphism> = self
            .inversions
            .iter()
            .map(|&v| RaagAutomorphism::inversion(graph, v))
            .collect();
        for &(u, v) in &self.transvections {
            out.push(RaagAutomorphism::transvection(graph, u, v).expect("listed pair is dominated"));
        }
        for (v, p) in &self.partial_conjugations {
            let set: VertexSet = p.iter().copied().collect();
            out.push(RaagAutomorphism::partial_conjugation(graph, *v, &set).expect("listed component"));
        }
        for p in &self.graph_automorphisms {
            out.push(RaagAutomorphism::graph_permutation(graph, p).expect("listed automorphism"));
        }
        out
    }
}
