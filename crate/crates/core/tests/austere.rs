mod common;

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use raagkit::austere::{AustereModel, AutElement, AutGenerator, PhiChecker, PhiFunction, PhiTally};
use raagkit::autos::GeneratorInventory;
use raagkit::{GraphRef, RaagAutomorphism, SimplicialGraph};

/// An austere graph on 8 vertices with 12 edges.
fn austere8() -> GraphRef {
    let edges = [
        (0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 7), (3, 5), (3, 6), (4, 6), (4, 7), (5, 7), (6, 7),
    ];
    Arc::new(SimplicialGraph::from_index_edges("austere8", 8, &edges).unwrap())
}

/// An austere graph on 9 vertices with 25 edges.
fn austere9() -> GraphRef {
    let edges = [
        (0, 1), (0, 2), (0, 3), (1, 3), (0, 4), (1, 4), (2, 4), (0, 5), (1, 5), (2, 5), (2, 6), (3, 6), (4, 6),
        (1, 7), (2, 7), (3, 7), (4, 7), (5, 7), (6, 7), (0, 8), (1, 8), (2, 8), (3, 8), (5, 8), (6, 8),
    ];
    Arc::new(SimplicialGraph::from_index_edges("austere9", 9, &edges).unwrap())
}

fn models() -> Vec<AustereModel> {
    vec![AustereModel::new(austere8()).unwrap(), AustereModel::new(austere9()).unwrap()]
}

/// (w, b) as the automorphism γ_w ∘ ι_b of A_Γ.
fn as_automorphism(model: &AustereModel, x: &AutElement) -> RaagAutomorphism {
    let g = model.graph();
    let mut f = RaagAutomorphism::inner(&x.word);
    for v in x.bits.support() {
        f = f.compose(&RaagAutomorphism::inversion(g, v)).unwrap();
    }
    f
}

fn random_element(model: &AustereModel, rng: &mut ChaCha8Rng) -> AutElement {
    let mut x = model.identity();
    for _ in 0..rng.gen_range(0..6) {
        let v = rng.gen_range(0..model.n());
        let g = if rng.gen_bool(0.6) { model.gamma(v) } else { model.iota(v) };
        let g = if rng.gen_bool(0.5) { model.inverse(&g) } else { g };
        x = model.multiply(&x, &g).unwrap();
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn products_agree_with_composition(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for model in models() {
            let a = random_element(&model, &mut rng);
            let b = random_element(&model, &mut rng);
            let c = random_element(&model, &mut rng);
            let ab = model.multiply(&a, &b).unwrap();
            let left = model.multiply(&ab, &c).unwrap();
            let right = model.multiply(&a, &model.multiply(&b, &c).unwrap()).unwrap();
            prop_assert!(model.equal(&left, &right).unwrap());
            prop_assert!(model.is_identity(&model.multiply(&a, &model.inverse(&a)).unwrap()));
            prop_assert!(model.equal(&model.multiply(&model.identity(), &a).unwrap(), &a).unwrap());
            let composed = as_automorphism(&model, &a).compose(&as_automorphism(&model, &b)).unwrap();
            prop_assert!(as_automorphism(&model, &ab).equals(&composed).unwrap());
        }
    }

    #[test]
    fn random_phis_are_relation_preserving_involutions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for model in models() {
            let phi = model.random_phi(&mut rng);
            let map = model.build_phi_automorphism(&phi).unwrap();
            prop_assert!(map.is_involution());
            let report = model.relations_under(|g| map.image(g));
            prop_assert!(report.all_passed());
            prop_assert_eq!(&map.image(AutGenerator::Iota(0)), &model.iota(0));
        }
    }
}

#[test]
fn out_reduces_to_inversions() {
    for model in models() {
        assert!(model.out_is_inversions_only());
        let inventory = GeneratorInventory::of(model.graph());
        assert!(inventory.transvections.is_empty());
        assert!(inventory.graph_automorphisms.is_empty());
        for (v, p) in &inventory.partial_conjugations {
            assert_eq!(p.len() + model.graph().star(*v).len(), model.n());
        }
    }
}

#[test]
fn presentation_holds() {
    for model in models() {
        let report = model.verify_presentation();
        assert!(report.all_passed(), "{:?}", report.lines());
    }
}

#[test]
fn count_matches_direct_position_count_and_bounds() {
    for model in models() {
        let g = model.graph();
        let n = g.n();
        let mut free = 0;
        for k in 0..n {
            for j in 0..n {
                // (i) no diagonal bit, (ii) no bit for a neighbour
                if j != k && !g.adjacent(j, k) {
                    free += 1;
                }
            }
        }
        assert_eq!(model.phi_exponent(), free);
        assert_eq!(model.count_phi(), BigUint::from(2u8).pow(free as u32));
        assert!(model.count_phi() >= BigUint::from(2u8).pow(n as u32));
        let k = g.max_degree();
        assert!(model.count_phi() >= BigUint::from(2u8).pow((n * (n - k - 1)) as u32));
    }
}

#[test]
fn enumeration_prefix_is_valid_and_distinct() {
    for model in models() {
        let phis: Vec<PhiFunction> = model.enumerate_phi(Some(300)).collect();
        assert_eq!(phis.len(), 300);
        assert!(phis[0].is_zero());
        let distinct: HashSet<&PhiFunction> = phis.iter().collect();
        assert_eq!(distinct.len(), phis.len());
        let mut checker = PhiChecker::new(&model);
        let mut tally = PhiTally::default();
        for phi in &phis {
            phi.validate(model.graph()).unwrap();
            checker.check(phi, &mut tally);
        }
        assert_eq!((tally.relation_failures, tally.involution_failures), (0, 0), "{:?}", tally.first_failure);
        let report = model.phi_distinct_in_out(&phis).unwrap();
        assert!(report.passed(), "{report:?}");
    }
}

#[test]
fn every_vertex_has_a_witness() {
    for model in models() {
        for (v, w) in model.vertex_witnesses().into_iter().enumerate() {
            let phi = w.unwrap_or_else(|| panic!("no witness at {v}"));
            assert!(model.build_phi_automorphism(&phi).is_ok());
            let report = model.phi_distinct_in_out(&[PhiFunction::zero(model.n()), phi]).unwrap();
            assert!(report.passed());
        }
    }
}

#[test]
fn inadmissible_phis_are_rejected() {
    let model = &models()[0];
    let g = model.graph();
    let mut diagonal = PhiFunction::zero(8);
    diagonal.rows[3].bits[3] = true;
    assert!(diagonal.validate(g).unwrap_err().to_string().contains("(i)"));
    let mut adjacent = PhiFunction::zero(8);
    adjacent.rows[0].bits[1] = true;
    assert!(adjacent.validate(g).unwrap_err().to_string().contains("(ii)"));
    assert!(model.build_phi_automorphism(&adjacent).is_err());
}

#[test]
fn non_austere_graphs_are_refused() {
    let c5 = common::graph_from_bits(5, &[true, false, true, false, false, true, true, false, false, true]);
    assert!(AustereModel::new(c5).is_err());
}
