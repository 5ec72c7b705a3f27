//! Independent oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use raagkit::{GraphRef, Letter, SimplicialGraph};

/// Graph on `n` vertices with one bit per unordered pair, in the order
/// (0,1), (0,2), (1,2), (0,3), ...
pub fn graph_from_bits(n: usize, bits: &[bool]) -> GraphRef {
    let mut edges = Vec::new();
    let mut idx = 0;
    for j in 1..n {
        for i in 0..j {
            if bits.get(idx).copied().unwrap_or(false) {
                edges.push((i, j));
            }
            idx += 1;
        }
    }
    Arc::new(SimplicialGraph::from_index_edges("random", n, &edges).expect("simple graph"))
}

pub fn random_graph(rng: &mut impl Rng, max_n: usize) -> GraphRef {
    let n = rng.gen_range(1..=max_n);
    let bits: Vec<bool> = (0..n * (n - 1) / 2).map(|_| rng.gen_bool(0.5)).collect();
    graph_from_bits(n, &bits)
}

pub fn edgeless(n: usize) -> GraphRef {
    graph_from_bits(n, &[])
}

pub fn complete(n: usize) -> GraphRef {
    graph_from_bits(n, &vec![true; n * (n - 1) / 2])
}

pub fn random_letters(rng: &mut impl Rng, n: usize, max_len: usize) -> Vec<Letter> {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| Letter::new(rng.gen_range(0..n), rng.gen_bool(0.5)))
        .collect()
}

fn commute(g: &SimplicialGraph, a: Letter, b: Letter) -> bool {
    a.vertex != b.vertex && g.adjacent(a.vertex, b.vertex)
}

/// Stack-based free reduction.
pub fn free_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for &a in letters {
        if out.last() == Some(&a.inv()) {
            out.pop();
        } else {
            out.push(a);
        }
    }
    out
}

/// Pairs (i, j) with letters i and j mutually inverse and every letter
/// strictly between them commuting with letter i.
fn cancellable_pairs(g: &SimplicialGraph, w: &[Letter]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[j] == w[i].inv() {
                out.push((i, j));
            }
            if !commute(g, w[i], w[j]) {
                break;
            }
        }
    }
    out
}

/// Cancels randomly chosen cancellable pairs until none remain.
pub fn random_reduction(g: &SimplicialGraph, letters: &[Letter], rng: &mut impl Rng) -> Vec<Letter> {
    let mut w = letters.to_vec();
    loop {
        let pairs = cancellable_pairs(g, &w);
        let Some(&(i, j)) = pairs.choose(rng) else {
            return w;
        };
        w.remove(j);
        w.remove(i);
    }
}

/// Trace equivalence by the projection criterion: two words are equal in
/// the partially commutative monoid iff their projections onto every pair
/// of dependent letters agree.
pub fn trace_equivalent(g: &SimplicialGraph, a: &[Letter], b: &[Letter]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let alphabet: BTreeSet<Letter> = a.iter().chain(b).copied().collect();
    for &x in &alphabet {
        for &y in &alphabet {
            if x <= y && !commute(g, x, y) {
                let proj = |w: &[Letter]| -> Vec<Letter> { w.iter().copied().filter(|&z| z == x || z == y).collect() };
                if proj(a) != proj(b) {
                    return false;
                }
            }
        }
    }
    true
}

/// Lexicographically least member of the shuffle class, by breadth-first
/// enumeration of adjacent commuting swaps.
pub fn exhaustive_lex_least(g: &SimplicialGraph, letters: &[Letter]) -> Vec<Letter> {
    let start = letters.to_vec();
    let mut seen: BTreeSet<Vec<Letter>> = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        for i in 0..w.len().saturating_sub(1) {
            if commute(g, w[i], w[i + 1]) {
                let mut s = w.clone();
                s.swap(i, i + 1);
                if seen.insert(s.clone()) {
                    queue.push_back(s);
                }
            }
        }
    }
    seen.into_iter().next().expect("class is non-empty")
}

/// Exponent sum per vertex, zeros dropped.
pub fn exponent_sums(letters: &[Letter]) -> BTreeMap<usize, i64> {
    let mut sums = BTreeMap::new();
    for a in letters {
        *sums.entry(a.vertex).or_insert(0) += a.sign();
    }
    sums.retain(|_, s| *s != 0);
    sums
}

/// Inserts a cancelling pair at a random position and shuffles one random
/// adjacent commuting pair, yielding a word for the same element.
pub fn perturb(g: &SimplicialGraph, letters: &[Letter], rng: &mut impl Rng) -> Vec<Letter> {
    let mut w = letters.to_vec();
    let x = Letter::new(rng.gen_range(0..g.n()), rng.gen_bool(0.5));
    let at = rng.gen_range(0..=w.len());
    w.insert(at, x.inv());
    w.insert(at, x);
    let swaps: Vec<usize> = (0..w.len().saturating_sub(1))
        .filter(|&i| commute(g, w[i], w[i + 1]))
        .collect();
    if let Some(&i) = swaps.choose(rng) {
        w.swap(i, i + 1);
    }
    w
}

/// Every normal-form property for one word `letters` on `g`, plus the
/// edgeless and complete specializations on the same vertex count.
pub fn check_normal_form(g: &GraphRef, letters: &[Letter], rng: &mut impl Rng) -> Result<(), String> {
    use raagkit::GroupWord;
    let w = GroupWord::from_letters(g, letters.to_vec());
    let nf = w.normal_form();
    for _ in 0..2 {
        let r = random_reduction(g, letters, rng);
        if !trace_equivalent(g, &r, nf.letters()) {
            return Err(format!("random reduction {r:?} is not shuffle equivalent to {nf}"));
        }
        if GroupWord::from_letters(g, r).normal_form().letters() != nf.letters() {
            return Err(format!("canonical form depends on the reduction order for {w}"));
        }
    }
    if nf.len() <= 8 && exhaustive_lex_least(g, nf.letters()) != nf.letters() {
        return Err(format!("{nf} is not the least member of its shuffle class"));
    }
    if nf.len() > w.len() {
        return Err(format!("normal form of {w} is longer than the word"));
    }
    if !w.concat(&w.inverse()).map_err(|e| e.to_string())?.is_empty() {
        return Err(format!("{w} times its inverse is not trivial"));
    }

    let n = g.n();
    let other = random_letters(rng, n, 12);
    let free = edgeless(n);
    let u = GroupWord::from_letters(&free, letters.to_vec());
    if u.normal_form().letters() != free_reduce(letters) {
        return Err(format!("edgeless normal form of {u} differs from free reduction"));
    }
    let same = GroupWord::from_letters(&free, perturb(&free, letters, rng));
    let v = GroupWord::from_letters(&free, other.clone());
    if !u.equals(&same).unwrap() || u.equals(&v).unwrap() != (free_reduce(letters) == free_reduce(&other)) {
        return Err(format!("edgeless equality disagrees with free reduction for {u}"));
    }
    let abelian = complete(n);
    let u = GroupWord::from_letters(&abelian, letters.to_vec());
    let mut shuffled = letters.to_vec();
    shuffled.shuffle(rng);
    let same = GroupWord::from_letters(&abelian, perturb(&abelian, &shuffled, rng));
    let v = GroupWord::from_letters(&abelian, other.clone());
    if !u.equals(&same).unwrap() || u.equals(&v).unwrap() != (exponent_sums(letters) == exponent_sums(&other)) {
        return Err(format!("abelian equality disagrees with exponent sums for {u}"));
    }
    Ok(())
}
