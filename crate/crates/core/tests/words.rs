mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use raagkit::{GroupWord, Letter};

fn graph_and_word() -> impl Strategy<Value = (usize, Vec<bool>, Vec<Letter>)> {
    (1usize..=6).prop_flat_map(|n| {
        (
            Just(n),
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2),
            proptest::collection::vec((0..n, any::<bool>()).prop_map(|(v, i)| Letter::new(v, i)), 0..=12),
        )
    })
}

proptest! {
    #[test]
    fn normal_form_properties((n, bits, letters) in graph_and_word(), seed in any::<u64>()) {
        let g = common::graph_from_bits(n, &bits);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Err(e) = common::check_normal_form(&g, &letters, &mut rng) {
            prop_assert!(false, "{}", e);
        }
    }

    #[test]
    fn normal_form_is_idempotent_and_inverse_is_involutive((n, bits, letters) in graph_and_word()) {
        let g = common::graph_from_bits(n, &bits);
        let w = GroupWord::from_letters(&g, letters);
        let nf = w.normal_form();
        prop_assert!(nf.is_normal());
        let back = nf.inverse().inverse();
        prop_assert_eq!(back.letters(), nf.letters());
        prop_assert_eq!(w.support(), nf.letters().iter().map(|a| a.vertex).collect());
    }

    #[test]
    fn concatenation_is_associative((n, bits, a) in graph_and_word(), b in proptest::collection::vec((0usize..6, any::<bool>()), 0..6)) {
        let g = common::graph_from_bits(n, &bits);
        let b: Vec<Letter> = b.into_iter().map(|(v, i)| Letter::new(v % n, i)).collect();
        let x = GroupWord::from_letters(&g, a);
        let y = GroupWord::from_letters(&g, b);
        let left = x.concat(&y).unwrap().concat(&x).unwrap();
        let right = x.concat(&y.concat(&x).unwrap()).unwrap();
        prop_assert_eq!(left.letters(), right.letters());
    }
}

#[test]
fn exhaustive_shuffle_oracle_matches_on_a_path() {
    let g = common::graph_from_bits(3, &[true, false, true]);
    let w = GroupWord::from_letters(&g, [2, 0, 1, 2, 0].map(Letter::pos).to_vec());
    let nf = w.normal_form();
    assert_eq!(common::exhaustive_lex_least(&g, nf.letters()), nf.letters());
}
