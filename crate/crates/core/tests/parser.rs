mod common;

use common::{brute_balanced, g2_yield, w};
use o2_mcfg::grammar::{certify, to_sexp};
use o2_mcfg::oracle::{enumerate_balanced, reference_parse, search_decompositions, SearchBudget};
use o2_mcfg::parser::{decompose_pair, decompose_pair_with_stats, GuidedStats};
use o2_mcfg::sample::{seeded_rng, uniform_balanced};
use o2_mcfg::{g2, parse, ParseError, Strategy, Word};
use proptest::prelude::*;

fn sound(word: &Word, strategy: Strategy) {
    let t = parse(word, strategy).unwrap_or_else(|e| panic!("{word} ({strategy}): {e}"));
    assert_eq!(certify(&g2(), &t).as_ref(), Ok(word), "{word}");
    assert_eq!(g2_yield(&t), Some(word.to_string()));
}

#[test]
fn every_word_up_to_eight_parses_three_ways() {
    let words = brute_balanced(8);
    assert_eq!(enumerate_balanced(8).collect::<Vec<_>>(), words);
    for x in &words {
        sound(x, Strategy::Guided);
        sound(x, Strategy::Search);
        let t = reference_parse(x).unwrap();
        assert_eq!(certify(&g2(), &t).as_ref(), Ok(x));
    }
}

#[test]
fn emitted_decompositions_lie_in_the_search_space() {
    let mut stats = GuidedStats::default();
    for x in brute_balanced(8) {
        for cut in 1..x.len() {
            let (v, u) = (Word::from(&x[..cut]), Word::from(&x[cut..]));
            if x.len() <= 2 {
                continue;
            }
            let space: Vec<_> = search_decompositions(&v, &u, SearchBudget::default()).collect();
            let guided = decompose_pair_with_stats(&v, &u, Strategy::Guided, &mut stats).unwrap();
            assert!(space.contains(&guided), "{v} {u}: {guided}");
            assert_eq!(decompose_pair(&v, &u, Strategy::Search).unwrap(), space[0]);
        }
    }
    assert!(stats.lifts > 0);
}

#[test]
fn examples() {
    assert_eq!(
        to_sexp(&parse(&w("aA"), Strategy::Guided).unwrap()),
        r#"(r_z "aA" (r_a "a" "A"))"#
    );
    assert_eq!(
        to_sexp(&parse(&w(""), Strategy::Search).unwrap()),
        r#"(r_z "" (r_0 "" ""))"#
    );
    assert!(matches!(
        parse(&w("ab"), Strategy::Guided),
        Err(ParseError::NotBalanced(_))
    ));
    assert!(matches!(
        reference_parse(&w("aabABB")),
        Err(ParseError::NotBalanced(_))
    ));
    assert!(matches!(
        parse(&w("a3A3"), Strategy::Guided),
        Err(ParseError::Alphabet(_))
    ));
}

#[test]
fn long_words() {
    let mut rng = seeded_rng(2);
    for len in [200, 400, 1000] {
        let x = uniform_balanced(len, &mut rng).unwrap();
        sound(&x, Strategy::Guided);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn strategies_agree_and_are_deterministic(seed in any::<u64>(), half in 0usize..40) {
        let x = uniform_balanced(2 * half, &mut seeded_rng(seed)).unwrap();
        let g = parse(&x, Strategy::Guided).unwrap();
        prop_assert_eq!(parse(&x, Strategy::Guided).unwrap(), g.clone());
        prop_assert_eq!(certify(&g2(), &g).unwrap(), x.clone());
        let s = parse(&x, Strategy::Search).unwrap();
        prop_assert_eq!(certify(&g2(), &s).unwrap(), x.clone());
        let r = reference_parse(&x).unwrap();
        prop_assert_eq!(certify(&g2(), &r).unwrap(), x);
    }

    #[test]
    fn unbalanced_words_are_rejected(digits in prop::collection::vec(0..4usize, 1..60)) {
        let x = common::word_from_digits(&digits);
        let balanced = common::balanced_by_count(&x.to_string());
        prop_assert_eq!(parse(&x, Strategy::Guided).is_ok(), balanced);
        prop_assert_eq!(parse(&x, Strategy::Search).is_ok(), balanced);
        prop_assert_eq!(reference_parse(&x).is_ok(), balanced);
    }
}
