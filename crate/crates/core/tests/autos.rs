mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use raagkit::autos::GeneratorInventory;
use raagkit::focused::{ExponentVector, FocusedModel};
use raagkit::graph::{asymmetric_tree, build_focused};
use raagkit::{GraphRef, GroupWord, Letter, RaagAutomorphism};

fn generators(g: &GraphRef) -> Vec<RaagAutomorphism> {
    GeneratorInventory::of(g).automorphisms(g)
}

fn random_product(gens: &[RaagAutomorphism], g: &GraphRef, rng: &mut ChaCha8Rng) -> RaagAutomorphism {
    let mut f = RaagAutomorphism::identity(g);
    for _ in 0..rng.gen_range(1..=3) {
        let x = &gens[rng.gen_range(0..gens.len())];
        let x = if rng.gen_bool(0.5) { x.inverse() } else { x.clone() };
        f = f.compose(&x).unwrap();
    }
    f
}

fn word(g: &GraphRef, letters: Vec<Letter>) -> GroupWord {
    GroupWord::from_letters(g, letters)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_and_abelianization(n in 1usize..=5, bits in proptest::collection::vec(any::<bool>(), 10), seed in any::<u64>()) {
        let g = common::graph_from_bits(n, &bits);
        let gens = generators(&g);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_product(&gens, &g, &mut rng);
        let h = random_product(&gens, &g, &mut rng);
        let fh = f.compose(&h).unwrap();
        for _ in 0..4 {
            let w = word(&g, common::random_letters(&mut rng, n, 8));
            let direct = fh.apply(&w).unwrap();
            let nested = f.apply(&h.apply(&w).unwrap()).unwrap();
            prop_assert!(direct.equals(&nested).unwrap(), "{} vs {}", direct, nested);
        }
        let product = &f.abelianization_matrix() * &h.abelianization_matrix();
        prop_assert_eq!(fh.abelianization_matrix(), product);
        let det = fh.abelianization_matrix().det();
        prop_assert!(det == 1 || det == -1);
        prop_assert!(f.compose(&f.inverse()).unwrap().is_identity());
    }

    #[test]
    fn generators_preserve_edge_relations(n in 1usize..=5, bits in proptest::collection::vec(any::<bool>(), 10)) {
        let g = common::graph_from_bits(n, &bits);
        for f in generators(&g) {
            prop_assert!(f.check_relations().is_ok());
            for (x, y) in g.edges() {
                let xy = word(&g, vec![Letter::pos(x), Letter::pos(y)]);
                let yx = word(&g, vec![Letter::pos(y), Letter::pos(x)]);
                prop_assert!(f.apply(&xy).unwrap().equals(&f.apply(&yx).unwrap()).unwrap());
            }
        }
    }
}

#[test]
fn generator_matrices() {
    let g = common::graph_from_bits(3, &[true, true, false]);
    let inv = RaagAutomorphism::inversion(&g, 1);
    assert_eq!(inv.abelianization_matrix(), raagkit::IntMatrix::diagonal(&[1, -1, 1]));
    // vertex 0 is adjacent to 1 and 2, so it dominates both
    let tv = RaagAutomorphism::transvection(&g, 0, 1).unwrap();
    assert_eq!(tv.abelianization_matrix(), raagkit::IntMatrix::elementary(3, 0, 1, 1));
    let path = common::graph_from_bits(3, &[true, false, true]);
    for (v, p) in GeneratorInventory::of(&path).partial_conjugations {
        let set = p.iter().copied().collect();
        let pc = RaagAutomorphism::partial_conjugation(&path, v, &set).unwrap();
        assert!(pc.abelianization_matrix().is_identity());
    }
}

#[test]
fn lattice_automorphisms_have_no_small_torsion() {
    let g = build_focused(2, 3, &[asymmetric_tree()]).unwrap();
    let model = FocusedModel::from_graph(g).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut tested = 0;
    while tested < 30 {
        let coords: Vec<i64> = (0..model.dim()).map(|_| rng.gen_range(-2..=2)).collect();
        if coords.iter().all(|&x| x == 0) {
            continue;
        }
        let f = model.from_coords(&ExponentVector { coords }).unwrap();
        for t in 1..=6 {
            assert!(!f.pow(t).is_identity(), "{f} has order dividing {t}");
        }
        tested += 1;
    }
}
