//! Constructing focused graphs with prescribed parameters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::classify::classify_focused;
use super::SimplicialGraph;
use crate::error::{Error, Result};

const ATTEMPTS_PER_HUB_COUNT: usize = 400;
const EXTRA_HUB_COUNTS: usize = 8;

/// The smallest tree with trivial automorphism group: a spider with legs of
/// lengths 1, 2 and 3.
pub fn asymmetric_tree() -> SimplicialGraph {
    SimplicialGraph::new(
        "spider123",
        &["o", "a1", "b1", "b2", "d1", "d2", "d3"],
        &[
            ("o", "a1"),
            ("o", "b1"),
            ("b1", "b2"),
            ("o", "d1"),
            ("d1", "d2"),
            ("d2", "d3"),
        ],
    )
    .expect("static tree is simple")
}

/// Builds a focused graph at `c` with `l` dominated vertices off the star of
/// `c`, `m - l` dominated neighbours of `c`, and one further component of the
/// star complement per entry of `shapes`.
///
/// Proposals are drawn from a fixed-seed generator: `c` is joined to a set of
/// hubs and to the adjacent dominated vertices, every other vertex is wired to
/// hub subsets. A proposal is returned only if it classifies as focused at
/// `c` with exactly the requested `(l, m, k)` and has trivial automorphism
/// group.
pub fn build_focused(l: usize, m: usize, shapes: &[SimplicialGraph]) -> Result<SimplicialGraph> {
    if m < l {
        return Err(Error::Construction(format!("need m >= l, got l={l} m={m}")));
    }
    let k = l + shapes.len();
    if k < 2 {
        return Err(Error::Construction(format!(
            "k = {k}: at least two components are needed for a symmetry-free focused layout"
        )));
    }
    for s in shapes {
        if s.n() < 2 || !s.is_connected() {
            return Err(Error::Construction(format!(
                "component shape {} must be connected with at least two vertices",
                s.name()
            )));
        }
    }

    let shape_vertices: usize = shapes.iter().map(SimplicialGraph::n).sum();
    let base_hubs = 3 + m.div_ceil(2);
    let mut rng = ChaCha8Rng::seed_from_u64(
        0x00f0_c05e_d000 ^ ((l as u64) << 32) ^ ((m as u64) << 16) ^ shape_vertices as u64,
    );
    for hubs in base_hubs..base_hubs + EXTRA_HUB_COUNTS {
        for _ in 0..ATTEMPTS_PER_HUB_COUNT {
            let g = propose(l, m, shapes, hubs, &mut rng);
            let Ok(d) = classify_focused(g.clone()) else {
                continue;
            };
            if d.focus == 0 && d.l() == l && d.m() == m && d.k() == k && d.trivial_automorphisms {
                return Ok(g);
            }
        }
    }
    Err(Error::Construction(format!(
        "no symmetry-free focused graph found for l={l} m={m} k={k}"
    )))
}

fn random_subset(rng: &mut ChaCha8Rng, size: usize, p: f64, min: usize) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..size).filter(|_| rng.gen_bool(p)).collect();
        if s.len() >= min {
            return s;
        }
    }
}

fn random_hub_set(rng: &mut ChaCha8Rng, hubs: usize, size: usize) -> Vec<usize> {
    let mut set = rand::seq::index::sample(rng, hubs, size).into_vec();
    set.sort_unstable();
    set
}

fn propose(
    l: usize,
    m: usize,
    shapes: &[SimplicialGraph],
    hubs: usize,
    rng: &mut ChaCha8Rng,
) -> SimplicialGraph {
    let mut names = vec!["c".to_string()];
    names.extend((1..=m).map(|i| format!("x{i}")));
    names.extend((1..=hubs).map(|i| format!("h{i}")));
    for (j, s) in shapes.iter().enumerate() {
        names.extend((0..s.n()).map(|i| format!("p{}_{}", j + 1, i)));
    }
    let mut g = SimplicialGraph::with_vertices("focused", names).expect("generated names are distinct");
    let c = 0;
    let x = |i: usize| i; // x_i has index i
    let h = |i: usize| 1 + m + i;

    for i in 0..hubs {
        g.add_edge(c, h(i)).unwrap();
        for j in 0..i {
            if rng.gen_bool(0.25) {
                g.add_edge(h(j), h(i)).unwrap();
            }
        }
    }
    // L vertices: distinct hub sets of equal size, hence pairwise incomparable
    let size = (hubs / 2).max(2);
    let mut chosen: Vec<Vec<usize>> = Vec::new();
    for i in 1..=l {
        let mut set = random_hub_set(rng, hubs, size);
        for _ in 0..64 {
            if !chosen.contains(&set) {
                break;
            }
            set = random_hub_set(rng, hubs, size);
        }
        for &a in &set {
            g.add_edge(x(i), h(a)).unwrap();
        }
        chosen.push(set);
    }
    for i in l + 1..=m {
        g.add_edge(c, x(i)).unwrap();
        for a in random_subset(rng, hubs, 0.5, 2) {
            g.add_edge(x(i), h(a)).unwrap();
        }
    }
    let mut offset = 1 + m + hubs;
    for s in shapes {
        for (u, v) in s.edges() {
            g.add_edge(offset + u, offset + v).unwrap();
        }
        for u in 0..s.n() {
            for a in random_subset(rng, hubs, 0.4, 1) {
                g.add_edge(offset + u, h(a)).unwrap();
            }
        }
        offset += s.n();
    }
    // a hub with no neighbour off st(c) would itself be dominated by c
    let off_star: Vec<usize> = (1..=l).chain(1 + m + hubs..g.n()).collect();
    for i in 0..hubs {
        if !g.neighbors(h(i)).iter().any(|w| off_star.contains(w)) {
            let w = off_star[rng.gen_range(0..off_star.len())];
            g.add_edge(h(i), w).unwrap();
        }
    }
    g
}
