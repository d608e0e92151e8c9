//! Cross-module properties: the combinatorial, operator and recurrence
//! routes describe the same numbers.

use proptest::prelude::*;
use qtmoments::cards::{expand_arrangements, partition_from_cards};
use qtmoments::cfrac::{cf_series, cf_spec, min_depth};
use qtmoments::fock::{check_commutation, vacuum_expectation_word, OperatorLetter, OperatorWord, ScalarGauge};
use qtmoments::orthopoly::{jfraction_series, moment_sequence_by_motzkin, JacobiParams};
use qtmoments::partitions::{enumerate_partitions, NestingMode, SetPartition};
use qtmoments::qtnum::qt_number;
use qtmoments::ring::{rational, Assignment, Polynomial, Var};

fn word(max: usize) -> impl Strategy<Value = OperatorWord> {
    prop::collection::vec(prop::sample::select(OperatorLetter::ALL.to_vec()), 1..=max).prop_map(OperatorWord::new)
}

fn gauge() -> impl Strategy<Value = ScalarGauge> {
    prop::sample::select(vec![ScalarGauge::Identity, ScalarGauge::TPowerN])
}

/// A random restricted growth string of length `1..=max`.
fn rgs(max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..8, 1..=max).prop_map(|raw| {
        let mut out = Vec::with_capacity(raw.len());
        let mut top = 0u8;
        for (i, r) in raw.into_iter().enumerate() {
            let v = if i == 0 { 0 } else { r % (top + 2) };
            top = top.max(v);
            out.push(v);
        }
        out
    })
}

fn small_poly() -> impl Strategy<Value = Polynomial> {
    (0i64..4, 0i64..3, 0u32..2).prop_map(|(a, b, k)| {
        &Polynomial::constant(a) + &Polynomial::term(b, qtmoments::ring::Monomial::var_pow(Var::Q, k))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn card_sum_is_vacuum_expectation(w in word(8), g in gauge()) {
        let expectation = vacuum_expectation_word(&w, g);
        match expand_arrangements(&w, g) {
            Ok(arr) => {
                prop_assert!(w.is_contributor());
                let total: Polynomial = arr.into_iter().map(|a| a.weight).sum();
                prop_assert_eq!(total, expectation);
            }
            Err(_) => {
                prop_assert!(!w.is_contributor());
                prop_assert!(expectation.is_zero());
            }
        }
    }

    #[test]
    fn every_partition_has_its_arrangement(r in rgs(9), g in gauge()) {
        // rebuild the cards a partition calls for and play them back
        let p = SetPartition::new(r).unwrap();
        let blocks = p.blocks();
        let n = p.n();
        let mut open: Vec<usize> = Vec::new();
        let mut cards = Vec::new();
        for k in 1..=n {
            let b = blocks.iter().position(|b| b.contains(&k)).unwrap();
            let block = &blocks[b];
            let level = open.len() as u32;
            let card = if block.len() == 1 {
                qtmoments::cards::Card::Singleton(level)
            } else if block[0] == k {
                open.insert(0, b);
                qtmoments::cards::Card::Creation(level)
            } else {
                let j = open.iter().position(|&x| x == b).unwrap();
                open.remove(j);
                if *block.last().unwrap() == k {
                    qtmoments::cards::Card::Annihilation(level, j as u32 + 1)
                } else {
                    open.insert(0, b);
                    qtmoments::cards::Card::Intermediate(level, j as u32 + 1)
                }
            };
            cards.push(card);
        }
        prop_assert_eq!(partition_from_cards(&cards).unwrap(), p.clone());
        let w = OperatorWord::from_sites(cards.iter().map(|c| c.letter()).collect());
        let hits = expand_arrangements(&w, g).unwrap().into_iter().filter(|a| a.partition == p).count();
        prop_assert_eq!(hits, 1);
    }

    #[test]
    fn stats_stay_in_range(r in rgs(10)) {
        let p = SetPartition::new(r).unwrap();
        let s = p.stats();
        let arcs = (p.n() - p.num_blocks()) as u32;
        let pairs = arcs * arcs.saturating_sub(1) / 2;
        prop_assert!(s.rc + s.rn_strict <= pairs);
        prop_assert!(s.rn_covered >= s.rn_strict);
        prop_assert_eq!(s.rn(NestingMode::Strict), s.rn_strict);
    }

    #[test]
    fn commutation_at_rational_points(a in -4i64..=4, b in 1i64..=4) {
        // t = b/4, q = a/5 * t keeps |q| < t <= 1
        let t = rational(b, 4);
        let q = &rational(a, 5) * &t;
        let r = check_commutation(8, Some((&q, &t))).unwrap();
        prop_assert!(r.passed());
    }

    #[test]
    fn bracket_recursion(k in 0u32..30) {
        let q = Polynomial::var(Var::Q);
        let t = Polynomial::var(Var::T);
        prop_assert_eq!(&qt_number(k + 1) - &(&q * &qt_number(k)), t.pow(k));
        prop_assert_eq!(&qt_number(k + 1) - &(&t * &qt_number(k)), q.pow(k));
    }

    #[test]
    fn custom_jfraction_matches_motzkin(
        alpha in prop::collection::vec(small_poly(), 6),
        omega in prop::collection::vec(small_poly(), 6),
        order in 0usize..9,
    ) {
        let j = JacobiParams::Custom { name: "random".into(), alpha, omega };
        prop_assert_eq!(jfraction_series(&j, order), moment_sequence_by_motzkin(&j, order));
        let spec = cf_spec(&j, min_depth(order).max(1)).unwrap();
        let deep = cf_spec(&j, min_depth(order) + 3).unwrap();
        prop_assert_eq!(cf_series(&spec, order).unwrap(), cf_series(&deep, order).unwrap());
    }

    #[test]
    fn specialised_moments_are_evaluated_moments(a in -3i64..=3, b in 1i64..=3, l in 1i64..=4) {
        use qtmoments::orthopoly::Specialized;
        let t = rational(b, 3);
        let q = &rational(a, 4) * &t;
        let at = Assignment::from([(Var::Q, q), (Var::T, t), (Var::Lambda, rational(l, 2))]);
        let sym = moment_sequence_by_motzkin(&JacobiParams::CharlierStrict, 7);
        let num = moment_sequence_by_motzkin(&Specialized { params: &JacobiParams::CharlierStrict, at: at.clone() }, 7);
        for (s, v) in sym.iter().zip(&num) {
            prop_assert_eq!(&s.eval(&at).unwrap(), v);
        }
    }
}

#[test]
fn partition_counts_match_bell() {
    let bell = qtmoments::partitions::bell_numbers(9);
    for n in 0..=9 {
        assert_eq!(enumerate_partitions(n).count() as u128, bell[n]);
    }
}
