use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zigzag_core::colim::{direct_limit, direct_limit_with_order};
use zigzag_core::corpus;
use zigzag_core::descent::{check_computation, elim_section, uniqueness_check};
use zigzag_core::gen::{random_span_within, random_word, SpanShape};
use zigzag_core::words::{self, Strategy as Rewrite};
use zigzag_core::{build_stages, FiniteSpan, TableFamily, Vertex};

fn span_from(seed: u64) -> FiniteSpan {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_span_within(&mut rng, SpanShape::default(), 6, 5_000)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_is_confluent(seed in any::<u64>(), len in 0usize..24) {
        let span = span_from(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed.rotate_left(17));
        let w = random_word(&span, &mut rng, len);
        let stack = words::reduce(&span, &w).unwrap();
        let (left, n_left) = words::reduce_with(&span, &w, Rewrite::Leftmost).unwrap();
        let (right, n_right) = words::reduce_with(&span, &w, Rewrite::Rightmost).unwrap();
        prop_assert_eq!(&stack, &left);
        prop_assert_eq!(&stack, &right);
        prop_assert_eq!(n_left, n_right);
        prop_assert_eq!(stack.len() + 2 * n_left, w.len());
        prop_assert_eq!(words::endpoint(&span, &stack), words::endpoint(&span, &w));
        prop_assert_eq!(words::reduce(&span, &stack).unwrap(), stack.clone());
    }

    #[test]
    fn concatenations_are_mutually_inverse(seed in any::<u64>()) {
        let span = span_from(seed);
        for w in words::enumerate_all(&span, 5) {
            for s in span.edge_ids() {
                match words::endpoint(&span, &w) {
                    Vertex::A(a) if span.left(s) == a => {
                        let x = words::concat_fwd(&span, &w, s).unwrap();
                        prop_assert!(x.is_reduced());
                        prop_assert_eq!(words::concat_bwd(&span, &x, s).unwrap(), w.clone());
                    }
                    Vertex::B(b) if span.right(s) == b => {
                        let x = words::concat_bwd(&span, &w, s).unwrap();
                        prop_assert!(x.is_reduced());
                        prop_assert_eq!(words::concat_fwd(&span, &x, s).unwrap(), w.clone());
                    }
                    _ => prop_assert!(
                        words::concat_fwd(&span, &w, s).is_err()
                            && words::concat_bwd(&span, &w, s).is_err()
                    ),
                }
            }
        }
    }

    #[test]
    fn span_text_round_trips(seed in any::<u64>()) {
        let span = span_from(seed);
        prop_assert_eq!(FiniteSpan::parse(&span.to_string()).unwrap(), span);
    }

    #[test]
    fn enumeration_is_monotone_and_canonical(seed in any::<u64>(), len in 0usize..6) {
        let span = span_from(seed);
        let small = words::enumerate_all(&span, len);
        let big = words::enumerate_all(&span, len + 1);
        prop_assert_eq!(&big[..small.len()], &small[..]);
        prop_assert!(big[small.len()..].iter().all(|w| w.len() == len + 1));
        prop_assert!(big.windows(2).all(|p| p[0] < p[1]));
        prop_assert!(big.iter().all(|w| w.is_reduced()));
    }

    #[test]
    fn stage_sizes_count_words(seed in any::<u64>()) {
        let span = span_from(seed);
        let stages = build_stages(&span, 3);
        for n in 0..=3usize {
            for v in span.vertices() {
                let max_len = match v {
                    Vertex::A(_) => 2 * n,
                    Vertex::B(_) => (2 * n).saturating_sub(1),
                };
                let count = words::enumerate(&span, v, max_len).len();
                prop_assert_eq!(stages.cardinality(n, v), count);
            }
        }
    }

    #[test]
    fn direct_limit_ignores_union_order(seed in any::<u64>()) {
        let span = span_from(seed);
        let stages = build_stages(&span, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for v in span.vertices() {
            let d = stages.diagram(v);
            let plain = direct_limit(&d);
            let shuffled = direct_limit_with_order(&d, |mut pairs| {
                pairs.shuffle(&mut rng);
                pairs
            });
            prop_assert_eq!(plain.class_count(), shuffled.class_count());
            for c in 0..plain.class_count() {
                prop_assert_eq!(plain.representative(c), shuffled.representative(c));
            }
        }
    }

    #[test]
    fn random_families_eliminate(seed in any::<u64>(), k in 1usize..5) {
        let span = span_from(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fam = TableFamily::random(&span, 4, k, &mut rng);
        let sec = elim_section(&span, &fam, 0).unwrap();
        prop_assert!(check_computation(&span, &fam, &0, &sec).is_ok());
        prop_assert!(uniqueness_check(&span, &fam, &0, &sec).unwrap().is_ok());
    }
}

#[test]
fn walk_count_recurrences() {
    // Circle: two reduced words of every positive length. Theta: 3 * 2^(L-1).
    let circle = corpus::get("circle").unwrap();
    let theta = corpus::get("theta").unwrap();
    for len in 1..=10 {
        let exact = |span: &FiniteSpan| {
            words::enumerate_all(span, len)
                .into_iter()
                .filter(|w| w.len() == len)
                .count()
        };
        assert_eq!(exact(&circle), 2);
        assert_eq!(exact(&theta), 3 << (len - 1));
    }
}
