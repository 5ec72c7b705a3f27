mod common;

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use raagkit::atlas::{canonical_form, enumerate_catalog, CatalogRecord, GraphCatalog, GraphClass};
use raagkit::graph::{
    asymmetric_tree, build_focused, classify_focused, graph_automorphism_group, is_austere, named,
};
use raagkit::SimplicialGraph;

/// Vertex count and edge set of a catalog record.
type EdgeKey<'a> = (usize, &'a BTreeSet<(usize, usize)>);

fn atlas7() -> &'static GraphCatalog {
    static CATALOG: OnceLock<GraphCatalog> = OnceLock::new();
    CATALOG.get_or_init(|| enumerate_catalog(7).expect("n <= 8 is in range"))
}

fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

fn mapped(perm: &[usize], set: &[usize]) -> BTreeSet<usize> {
    set.iter().map(|&v| perm[v]).collect()
}

proptest! {
    #[test]
    fn star_complement_components_partition(n in 1usize..=8, bits in proptest::collection::vec(any::<bool>(), 28)) {
        let g = common::graph_from_bits(n, &bits);
        for v in 0..n {
            let mut seen: BTreeSet<usize> = g.star(v);
            let mut total = seen.len();
            for p in g.star_complement_components(v) {
                total += p.len();
                seen.extend(p);
            }
            prop_assert_eq!(total, n, "components overlap at {}", v);
            prop_assert_eq!(seen.len(), n);
        }
    }

    #[test]
    fn domination_matches_links(n in 1usize..=7, bits in proptest::collection::vec(any::<bool>(), 21)) {
        let g = common::graph_from_bits(n, &bits);
        for u in 0..n {
            for v in 0..n {
                let oracle = g.link(v).is_subset(&g.star(u));
                prop_assert_eq!(g.dominates(u, v), oracle);
            }
        }
    }
}

#[test]
fn mutual_domination_only_through_the_focus() {
    for r in atlas7().records.iter().filter(|r| r.class != GraphClass::Other) {
        let g = &r.graph;
        let focus = classify_focused(g.clone()).ok().map(|d| d.focus);
        for u in 0..g.n() {
            for v in 0..u {
                if g.dominates(u, v) && g.dominates(v, u) {
                    assert!(
                        r.class == GraphClass::Focused && (focus == Some(u) || focus == Some(v)),
                        "{} and {} dominate each other in {}",
                        u,
                        v,
                        r.line()
                    );
                }
            }
        }
    }
}

#[test]
fn focused_classification_is_stable_under_relabeling() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for r in atlas7().of_class(GraphClass::Focused) {
        let d = classify_focused(r.graph.clone()).unwrap();
        for _ in 0..3 {
            let perm = random_perm(r.n(), &mut rng);
            let e = classify_focused(r.graph.relabeled(&perm)).expect("relabeling keeps the class");
            assert_eq!((d.l(), d.m(), d.k(), d.multiplicity), (e.l(), e.m(), e.k(), e.multiplicity));
            if d.multiplicity == 1 {
                assert_eq!(perm[d.focus], e.focus);
                assert_eq!(mapped(&perm, &d.l_set), e.l_set.iter().copied().collect());
                assert_eq!(mapped(&perm, &d.s_set), e.s_set.iter().copied().collect());
                let before: BTreeSet<BTreeSet<usize>> = d.components.iter().map(|p| mapped(&perm, p)).collect();
                let after: BTreeSet<BTreeSet<usize>> =
                    e.components.iter().map(|p| p.iter().copied().collect()).collect();
                assert_eq!(before, after);
            }
        }
    }
}

#[test]
fn austere_certificates_bound_diameter_and_degree() {
    let catalog = enumerate_catalog(8).unwrap();
    let austere: Vec<&CatalogRecord> = catalog.of_class(GraphClass::Austere).collect();
    assert!(!austere.is_empty());
    for r in austere {
        let cert = is_austere(r.graph.clone()).unwrap();
        assert!(cert.diameter >= 2);
        assert!(cert.max_degree <= r.n() - 2);
        assert_eq!(cert.diameter, r.graph.diameter().unwrap());
    }
}

#[test]
fn automorphism_group_examples() {
    let path = named::path("p", &["a", "b", "c"]);
    assert_eq!(graph_automorphism_group(&path, 10).unwrap().len(), 2);
    let k3 = named::complete("k", &["a", "b", "c"]);
    assert_eq!(graph_automorphism_group(&k3, 10).unwrap().len(), 6);
    let built = build_focused(1, 2, &[asymmetric_tree()]).unwrap();
    assert_eq!(raagkit::graph::automorphisms(&built, None).len(), 1);
    let big = named::path("long", &["a", "b", "c", "d", "e", "f", "g", "h", "i", "j", "k"]);
    assert!(graph_automorphism_group(&big, 10).is_err());
}

#[test]
fn atlas_enumeration_is_deterministic() {
    let a = enumerate_catalog(6).unwrap().to_text();
    let b = enumerate_catalog(6).unwrap().to_text();
    assert_eq!(a, b);
}

#[test]
fn atlas_records_are_pairwise_non_isomorphic() {
    let catalog = atlas7();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let forms: BTreeSet<String> = catalog
        .records
        .iter()
        .map(|r| canonical_form(&r.graph).unwrap().to_text())
        .collect();
    assert_eq!(forms.len(), catalog.records.len());

    // probing: a random relabeling of one record never reproduces another
    let edge_sets: Vec<BTreeSet<(usize, usize)>> = catalog.records.iter().map(|r| r.edges().into_iter().collect()).collect();
    let index: HashMap<EdgeKey, usize> = catalog
        .records
        .iter()
        .zip(&edge_sets)
        .enumerate()
        .map(|(i, (r, e))| ((r.n(), e), i))
        .collect();
    for (i, r) in catalog.records.iter().enumerate() {
        for _ in 0..20 {
            let perm = random_perm(r.n(), &mut rng);
            let relabeled: BTreeSet<(usize, usize)> = r.graph.relabeled(&perm).edges().collect();
            if let Some(&j) = index.get(&(r.n(), &relabeled)) {
                assert_eq!(i, j, "records {} and {} are isomorphic", i, j);
            }
        }
    }
}

#[test]
fn atlas_tags_agree_with_the_classifiers() {
    for r in &atlas7().records {
        let again = CatalogRecord::classify(r.graph.clone());
        assert_eq!(&again, r);
        let focused = classify_focused(r.graph.clone()).is_ok();
        let austere = r.n() > 1 && is_austere(r.graph.clone()).is_ok();
        let expected = if austere {
            GraphClass::Austere
        } else if focused {
            GraphClass::Focused
        } else {
            GraphClass::Other
        };
        assert_eq!(r.class, expected);
    }
}

#[test]
fn canonical_form_is_label_invariant_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let g = common::random_graph(&mut rng, 8);
        let perm = random_perm(g.n(), &mut rng);
        let h: SimplicialGraph = g.relabeled(&perm);
        let a = canonical_form(&g).unwrap();
        let b = canonical_form(&h).unwrap();
        assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
    }
}
