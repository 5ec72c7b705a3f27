//! Words in the generators of A_Γ and their canonical normal forms.
//!
//! A word is reduced by a single left-to-right pass: each incoming letter
//! scans back over letters it commutes with and cancels against the first
//! letter on the same vertex if the signs are opposite. The reduced word is
//! then rearranged into the lexicographically least member of its shuffle
//! class (letters ordered by vertex, positive before inverse).

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{GraphRef, SimplicialGraph, VertexSet};

/// A generator `v` or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub vertex: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(vertex: usize, inverse: bool) -> Self {
        Letter { vertex, inverse }
    }

    pub fn pos(vertex: usize) -> Self {
        Letter::new(vertex, false)
    }

    pub fn neg(vertex: usize) -> Self {
        Letter::new(vertex, true)
    }

    pub fn inv(self) -> Self {
        Letter::new(self.vertex, !self.inverse)
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// Two letters commute iff they sit on distinct adjacent vertices (or are equal).
fn commute(g: &SimplicialGraph, a: Letter, b: Letter) -> bool {
    a.vertex != b.vertex && g.adjacent(a.vertex, b.vertex)
}

/// Appends `a` to an already reduced letter sequence, keeping it reduced.
fn push_reduced(g: &SimplicialGraph, out: &mut Vec<Letter>, a: Letter) {
    for j in (0..out.len()).rev() {
        let b = out[j];
        if b.vertex == a.vertex {
            if b.inverse != a.inverse {
                out.remove(j);
                return;
            }
            break;
        }
        if !g.adjacent(a.vertex, b.vertex) {
            break;
        }
    }
    out.push(a);
}

/// Minimal-length representative (not yet in lex order).
pub(crate) fn reduce(g: &SimplicialGraph, letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out = Vec::new();
    for a in letters {
        push_reduced(g, &mut out, a);
    }
    out
}

/// Lexicographically least rearrangement of a reduced word within its shuffle class.
pub(crate) fn lex_least(g: &SimplicialGraph, mut rest: Vec<Letter>) -> Vec<Letter> {
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let mut best: Option<usize> = None;
        for i in 0..rest.len() {
            if best.is_some_and(|b| rest[b] <= rest[i]) {
                continue;
            }
            if rest[..i].iter().all(|&b| commute(g, b, rest[i])) {
                best = Some(i);
            }
        }
        out.push(rest.remove(best.expect("the first letter is always available")));
    }
    out
}

/// Canonical normal form of a letter sequence.
pub(crate) fn normalize(g: &SimplicialGraph, letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    lex_least(g, reduce(g, letters))
}

pub(crate) fn invert_letters(letters: &[Letter]) -> impl Iterator<Item = Letter> + '_ {
    letters.iter().rev().map(|a| a.inv())
}

/// A word in the generators of A_Γ over a fixed ambient graph.
///
/// Words built with [`GroupWord::from_letters`] or parsed from text are kept
/// as given; group operations return normal forms.
#[derive(Clone)]
pub struct GroupWord {
    graph: GraphRef,
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity(graph: &GraphRef) -> Self {
        GroupWord {
            graph: graph.clone(),
            letters: Vec::new(),
        }
    }

    pub fn generator(graph: &GraphRef, v: usize) -> Self {
        Self::from_letters(graph, vec![Letter::pos(v)])
    }

    /// Wraps letters as given, without reducing.
    pub fn from_letters(graph: &GraphRef, letters: Vec<Letter>) -> Self {
        debug_assert!(letters.iter().all(|a| a.vertex < graph.n()));
        GroupWord {
            graph: graph.clone(),
            letters,
        }
    }

    /// Parses whitespace-separated tokens `v` or `v^-1`; `1` is the empty word.
    pub fn parse(graph: &GraphRef, text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            if token == "1" && graph.vertex("1").is_err() {
                continue;
            }
            let (name, inverse) = match token.strip_suffix("^-1") {
                Some(name) => (name, true),
                None => (token, false),
            };
            letters.push(Letter::new(graph.vertex(name)?, inverse));
        }
        Ok(Self::from_letters(graph, letters))
    }

    pub fn graph(&self) -> &GraphRef {
        &self.graph
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn same_ambient(&self, other: &GroupWord) -> Result<()> {
        if Arc::ptr_eq(&self.graph, &other.graph) || *self.graph == *other.graph {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    pub fn normal_form(&self) -> GroupWord {
        GroupWord {
            graph: self.graph.clone(),
            letters: normalize(&self.graph, self.letters.iter().copied()),
        }
    }

    pub fn is_normal(&self) -> bool {
        self.normal_form().letters == self.letters
    }

    /// Equality in A_Γ.
    pub fn equals(&self, other: &GroupWord) -> Result<bool> {
        self.same_ambient(other)?;
        Ok(self.normal_form().letters == other.normal_form().letters)
    }

    /// Vertices occurring in a minimal representative.
    pub fn support(&self) -> VertexSet {
        reduce(&self.graph, self.letters.iter().copied())
            .into_iter()
            .map(|a| a.vertex)
            .collect()
    }

    /// Product `self · other` in normal form.
    pub fn concat(&self, other: &GroupWord) -> Result<GroupWord> {
        self.same_ambient(other)?;
        Ok(GroupWord {
            graph: self.graph.clone(),
            letters: normalize(&self.graph, self.letters.iter().chain(&other.letters).copied()),
        })
    }

    /// Inverse in normal form.
    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            graph: self.graph.clone(),
            letters: normalize(&self.graph, invert_letters(&self.letters)),
        }
    }

    /// `self^e` in normal form.
    pub fn pow(&self, e: i64) -> GroupWord {
        let base = if e < 0 { self.inverse() } else { self.normal_form() };
        let mut letters = Vec::new();
        for _ in 0..e.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        GroupWord {
            graph: self.graph.clone(),
            letters: normalize(&self.graph, letters),
        }
    }

    /// Sum of the signs of the letters on `v`: the `v` coordinate in the abelianization.
    pub fn exponent_sum(&self, v: usize) -> i64 {
        self.letters
            .iter()
            .filter(|a| a.vertex == v)
            .map(|a| a.sign())
            .sum()
    }
}

impl PartialEq for GroupWord {
    /// Literal equality of letter sequences; use [`GroupWord::equals`] for equality in A_Γ.
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters && *self.graph == *other.graph
    }
}

impl Eq for GroupWord {}

impl Hash for GroupWord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.letters.hash(state);
    }
}

pub(crate) fn format_letters(g: &SimplicialGraph, letters: &[Letter]) -> String {
    if letters.is_empty() {
        return "1".into();
    }
    letters
        .iter()
        .map(|a| {
            if a.inverse {
                format!("{}^-1", g.vertex_name(a.vertex))
            } else {
                g.vertex_name(a.vertex).to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_letters(&self.graph, &self.letters))
    }
}

impl fmt::Debug for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupWord({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    fn g_ab() -> GraphRef {
        Arc::new(path("ab", &["a", "b"]))
    }

    fn nf(g: &GraphRef, s: &str) -> String {
        GroupWord::parse(g, s).unwrap().normal_form().to_string()
    }

    #[test]
    fn basic_normal_forms() {
        let g = g_ab();
        assert_eq!(nf(&g, "a a^-1"), "1");
        assert_eq!(nf(&g, "a b a^-1"), "b");
        assert_eq!(nf(&g, "a b a^-1 b"), "b b");
        assert_eq!(nf(&g, "b a"), "a b");
        let free = Arc::new(edgeless("e", &["a", "b"]));
        assert_eq!(nf(&free, "a b a^-1"), "a b a^-1");
    }

    #[test]
    fn equality_and_support() {
        let g = Arc::new(SimplicialGraph::new("abc", &["a", "b", "c"], &[("a", "b")]).unwrap());
        let w = |s: &str| GroupWord::parse(&g, s).unwrap();
        assert!(w("a b").equals(&w("b a")).unwrap());
        assert!(!w("a c b").equals(&w("c b a")).unwrap());
        assert!(w("a a^-1").support().is_empty());
        assert_eq!(w("a b a^-1").support(), VertexSet::from([1]));
        assert_eq!(w("a b c").support().len(), 3);
    }

    #[test]
    fn inverse_and_concat() {
        let g = Arc::new(edgeless("e", &["a", "b"]));
        let w = GroupWord::parse(&g, "a b").unwrap();
        assert_eq!(w.inverse().to_string(), "b^-1 a^-1");
        assert!(w.concat(&w.inverse()).unwrap().is_empty());
        let other = Arc::new(edgeless("f", &["a", "c"]));
        assert_eq!(
            w.concat(&GroupWord::identity(&other)),
            Err(Error::AmbientMismatch)
        );
    }

    #[test]
    fn parse_rejects_unknown_vertices() {
        let g = g_ab();
        assert!(matches!(GroupWord::parse(&g, "a z"), Err(Error::UnknownVertex(_))));
        assert!(GroupWord::parse(&g, "1").unwrap().is_empty());
    }
}
