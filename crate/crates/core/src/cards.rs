//! Card calculus: each contributor word expands into admissible card
//! arrangements, and each arrangement draws one set partition.
//!
//! Sites are read in application order. An open line is a block still
//! waiting for elements; the open lines form a stack listed from the bottom,
//! where the newest line sits. A creation card opens a line at the bottom,
//! annihilation card `A_i^(j)` closes the `j`-th line from the bottom, and
//! intermediate card `I_i^(j)` extends that line and moves it to the bottom.
//! The `j - 1` lines below the chosen one are crossed (weight `q`) and the
//! `i - j` above it are nested (weight `t`).

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fock::{OperatorLetter, OperatorWord, ScalarGauge};
use crate::partitions::SetPartition;
use crate::ring::{Monomial, Polynomial, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CardError {
    #[error("word {0} is not a contributor")]
    NotContributor(String),
    #[error("card {card} cannot be played at site {site}")]
    Inadmissible { card: String, site: usize },
    #[error("arrangement leaves {0} open lines")]
    Unclosed(usize),
    #[error("unrecognised card name {0:?}")]
    BadName(String),
}

/// A card with its level `i` and, where relevant, the line choice `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Card {
    Creation(u32),
    Annihilation(u32, u32),
    Intermediate(u32, u32),
    Singleton(u32),
}

impl Card {
    pub fn level(self) -> u32 {
        match self {
            Card::Creation(i) | Card::Annihilation(i, _) | Card::Intermediate(i, _) | Card::Singleton(i) => i,
        }
    }

    pub fn letter(self) -> OperatorLetter {
        match self {
            Card::Creation(_) => OperatorLetter::Creation,
            Card::Annihilation(..) => OperatorLetter::Annihilation,
            Card::Intermediate(..) => OperatorLetter::Number,
            Card::Singleton(_) => OperatorLetter::Scalar,
        }
    }

    /// Weight monomial in `s, t, q, lambda` (`s^2 = lambda`).
    pub fn weight_monomial(self, gauge: ScalarGauge) -> Monomial {
        let split = |i: u32, j: u32| [(Var::T, i - j), (Var::Q, j - 1)];
        match self {
            Card::Creation(_) => Monomial::var(Var::S),
            Card::Annihilation(i, j) => {
                Monomial::from_exponents(split(i, j).into_iter().chain([(Var::S, 1)]))
            }
            Card::Intermediate(i, j) => Monomial::from_exponents(split(i, j)),
            Card::Singleton(i) => match gauge {
                ScalarGauge::Identity => Monomial::var(Var::Lambda),
                ScalarGauge::TPowerN => Monomial::from_exponents([(Var::Lambda, 1), (Var::T, i)]),
            },
        }
    }

    pub fn weight(self, gauge: ScalarGauge) -> Polynomial {
        Polynomial::term(1, self.weight_monomial(gauge))
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Card::Creation(i) => write!(f, "C{i}"),
            Card::Annihilation(i, j) => write!(f, "A{i}_{j}"),
            Card::Intermediate(i, j) => write!(f, "I{i}_{j}"),
            Card::Singleton(i) => write!(f, "S{i}"),
        }
    }
}

impl FromStr for Card {
    type Err = CardError;

    fn from_str(s: &str) -> Result<Self, CardError> {
        let bad = || CardError::BadName(s.to_string());
        let mut chars = s.chars();
        let kind = chars.next().ok_or_else(bad)?;
        let rest = chars.as_str();
        let num = |x: &str| x.parse::<u32>().map_err(|_| bad());
        let pair = |x: &str| -> Result<(u32, u32), CardError> {
            let (i, j) = x.split_once('_').ok_or_else(bad)?;
            let (i, j) = (num(i)?, num(j)?);
            if j == 0 || j > i {
                return Err(bad());
            }
            Ok((i, j))
        };
        match kind {
            'C' => Ok(Card::Creation(num(rest)?)),
            'S' => Ok(Card::Singleton(num(rest)?)),
            'A' => pair(rest).map(|(i, j)| Card::Annihilation(i, j)),
            'I' => pair(rest).map(|(i, j)| Card::Intermediate(i, j)),
            _ => Err(bad()),
        }
    }
}

/// Plays cards in site order and returns the induced partition.
pub fn partition_from_cards(cards: &[Card]) -> Result<SetPartition, CardError> {
    let mut labels = vec![0usize; cards.len()];
    // open[0] is the bottom line; entries are block labels
    let mut open: Vec<usize> = Vec::new();
    let mut next_block = 0;
    for (site, &card) in cards.iter().enumerate() {
        let inadmissible = || CardError::Inadmissible {
            card: card.to_string(),
            site: site + 1,
        };
        if card.level() as usize != open.len() {
            return Err(inadmissible());
        }
        match card {
            Card::Creation(_) => {
                labels[site] = next_block;
                open.insert(0, next_block);
                next_block += 1;
            }
            Card::Singleton(_) => {
                labels[site] = next_block;
                next_block += 1;
            }
            Card::Annihilation(i, j) | Card::Intermediate(i, j) => {
                if j == 0 || j > i {
                    return Err(inadmissible());
                }
                let block = open.remove(j as usize - 1);
                labels[site] = block;
                if matches!(card, Card::Intermediate(..)) {
                    open.insert(0, block);
                }
            }
        }
    }
    if !open.is_empty() {
        return Err(CardError::Unclosed(open.len()));
    }
    Ok(SetPartition::from_labels(&labels))
}

/// Cards in site order together with what they produce.
#[derive(Debug, Clone, PartialEq)]
pub struct CardArrangement {
    pub word: OperatorWord,
    pub cards: Vec<Card>,
    /// Product of card weights with `s^2` replaced by `lambda`.
    pub weight: Polynomial,
    pub partition: SetPartition,
}

/// JSON line form of an arrangement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementRecord {
    pub word: String,
    pub cards: Vec<String>,
    pub weight: String,
    pub partition: Vec<Vec<usize>>,
}

impl CardArrangement {
    pub fn from_cards(cards: Vec<Card>, gauge: ScalarGauge) -> Result<Self, CardError> {
        let partition = partition_from_cards(&cards)?;
        let mono = cards
            .iter()
            .fold(Monomial::ONE, |m, c| m.mul(&c.weight_monomial(gauge)));
        let weight = Polynomial::term(1, mono)
            .resolve_half_powers()
            .expect("closed arrangements pair every s");
        Ok(CardArrangement {
            word: OperatorWord::from_sites(cards.iter().map(|c| c.letter()).collect()),
            cards,
            weight,
            partition,
        })
    }

    pub fn record(&self) -> ArrangementRecord {
        ArrangementRecord {
            word: self.word.to_string(),
            cards: self.cards.iter().map(|c| c.to_string()).collect(),
            weight: self.weight.canonical_string().expect("weights are free of s"),
            partition: self.partition.blocks(),
        }
    }
}

/// All contributors of length `n`, depth first over sites with letters
/// tried in the order C, A, N, S.
pub fn enumerate_contributors(n: usize) -> Vec<OperatorWord> {
    fn go(n: usize, level: usize, sites: &mut Vec<OperatorLetter>, out: &mut Vec<OperatorWord>) {
        let remaining = n - sites.len();
        if remaining == 0 {
            if level == 0 {
                out.push(OperatorWord::from_sites(sites.clone()));
            }
            return;
        }
        for z in OperatorLetter::ALL {
            let next = match z {
                OperatorLetter::Creation => level + 1,
                OperatorLetter::Annihilation if level >= 1 => level - 1,
                OperatorLetter::Annihilation => continue,
                OperatorLetter::Number if level == 0 => continue,
                _ => level,
            };
            // the path has to get back to ground in the sites that are left
            if next > remaining - 1 {
                continue;
            }
            sites.push(z);
            go(n, next, sites, out);
            sites.pop();
        }
    }
    let mut out = Vec::new();
    go(n, 0, &mut Vec::new(), &mut out);
    out
}

/// Every admissible card arrangement of a contributor, in lexicographic
/// order of the line choices.
pub fn expand_arrangements(w: &OperatorWord, gauge: ScalarGauge) -> Result<Vec<CardArrangement>, CardError> {
    if !w.is_contributor() {
        return Err(CardError::NotContributor(w.to_string()));
    }
    let levels = w.levels();
    let sites: Vec<OperatorLetter> = w.sites().collect();
    let choices: Vec<Vec<Card>> = sites
        .iter()
        .zip(&levels)
        .map(|(&z, &l)| {
            let i = l as u32;
            match z {
                OperatorLetter::Creation => vec![Card::Creation(i)],
                OperatorLetter::Scalar => vec![Card::Singleton(i)],
                OperatorLetter::Annihilation => (1..=i).map(|j| Card::Annihilation(i, j)).collect(),
                OperatorLetter::Number => (1..=i).map(|j| Card::Intermediate(i, j)).collect(),
            }
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    loop {
        let cards = idx.iter().zip(&choices).map(|(&k, c)| c[k]).collect();
        out.push(CardArrangement::from_cards(cards, gauge)?);
        // odometer, last site fastest
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Sum of arrangement weights over all contributors of length `n`.
pub fn moment_by_cards(n: usize, gauge: ScalarGauge) -> Polynomial {
    if n == 0 {
        return Polynomial::one();
    }
    enumerate_contributors(n)
        .par_iter()
        .map(|w| {
            expand_arrangements(w, gauge)
                .expect("enumerated words are contributors")
                .into_iter()
                .map(|a| a.weight)
                .sum::<Polynomial>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum()
}

/// Replaces the intermediate card at `site` (1-based) by its annihilation
/// card followed by a creation card one level lower.
pub fn split_intermediate(cards: &[Card], site: usize) -> Option<Vec<Card>> {
    match cards.get(site.checked_sub(1)?)? {
        Card::Intermediate(i, j) => {
            let mut out = cards[..site - 1].to_vec();
            out.push(Card::Annihilation(*i, *j));
            out.push(Card::Creation(i - 1));
            out.extend_from_slice(&cards[site..]);
            Some(out)
        }
        _ => None,
    }
}

/// Joins elements `k` and `k + 1` (1-based) into one and renumbers.
pub fn merge_adjacent(p: &SetPartition, k: usize) -> SetPartition {
    let rgs = p.rgs();
    let (a, b) = (rgs[k - 1], rgs[k]);
    let labels: Vec<usize> = rgs
        .iter()
        .enumerate()
        .filter(|&(idx, _)| idx != k)
        .map(|(_, &l)| if l == b { a as usize } else { l as usize })
        .collect();
    SetPartition::from_labels(&labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{all_words, vacuum_expectation_word};
    use crate::partitions::{enumerate_partitions, moment_by_partitions, NestingMode};
    use std::collections::HashMap;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s).unwrap()
    }

    fn blocks(p: &SetPartition) -> Vec<Vec<usize>> {
        p.blocks()
    }

    #[test]
    fn card_names_round_trip() {
        for c in [
            Card::Creation(0),
            Card::Annihilation(2, 1),
            Card::Intermediate(3, 3),
            Card::Singleton(2),
        ] {
            assert_eq!(c.to_string().parse::<Card>().unwrap(), c);
        }
        assert!("A2_3".parse::<Card>().is_err());
        assert!("I1_0".parse::<Card>().is_err());
        assert!("X1".parse::<Card>().is_err());
    }

    #[test]
    fn card_weights() {
        let g = ScalarGauge::Identity;
        assert_eq!(Card::Creation(4).weight(g), p("s"));
        assert_eq!(Card::Annihilation(3, 2).weight(g), p("s*t*q"));
        assert_eq!(Card::Intermediate(3, 1).weight(g), p("t^2"));
        assert_eq!(Card::Singleton(3).weight(g), p("lambda"));
        assert_eq!(Card::Singleton(3).weight(ScalarGauge::TPowerN), p("lambda*t^3"));
    }

    #[test]
    fn contributor_counts_match_brute_force() {
        for n in 1..=7 {
            let mut brute: Vec<OperatorWord> = all_words(n).filter(|w| w.is_contributor()).collect();
            let mut fast = enumerate_contributors(n);
            assert_eq!(fast.len(), brute.len(), "n = {n}");
            brute.sort_by_key(|w| w.to_string());
            fast.sort_by_key(|w| w.to_string());
            assert_eq!(fast, brute);
        }
        let one = enumerate_contributors(1);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].to_string(), "S");
        assert_eq!(enumerate_contributors(2).len(), 2);
    }

    #[test]
    fn six_letter_example() {
        let w: OperatorWord = "AASNCC".parse().unwrap();
        assert!(enumerate_contributors(6).contains(&w));
        let arr = expand_arrangements(&w, ScalarGauge::Identity).unwrap();
        let got: Vec<(Vec<Vec<usize>>, Polynomial)> =
            arr.iter().map(|a| (blocks(&a.partition), a.weight.clone())).collect();
        let expect = vec![
            (vec![vec![1, 6], vec![2, 3, 5], vec![4]], p("lambda^3*t^2")),
            (vec![vec![1, 5], vec![2, 3, 6], vec![4]], p("lambda^3*t*q")),
            (vec![vec![1, 3, 5], vec![2, 6], vec![4]], p("lambda^3*t*q")),
            (vec![vec![1, 3, 6], vec![2, 5], vec![4]], p("lambda^3*q^2")),
        ];
        assert_eq!(got, expect);
        let rec = arr[0].record();
        assert_eq!(rec.cards, ["C0", "C1", "I2_1", "S2", "A2_1", "A1_1"]);
        assert_eq!(rec.word, "AASNCC");
    }

    #[test]
    fn ten_letter_example() {
        let w: OperatorWord = "AASACNNNCC".parse().unwrap();
        let target = SetPartition::from_blocks(10, &[vec![1, 3, 4, 7], vec![2, 5, 10], vec![6, 9], vec![8]]).unwrap();
        let arr = expand_arrangements(&w, ScalarGauge::Identity).unwrap();
        let hit: Vec<_> = arr.iter().filter(|a| a.partition == target).collect();
        assert_eq!(hit.len(), 1);
        assert_eq!(hit[0].weight, p("lambda^4*t^2*q^4"));
        let names: Vec<String> = hit[0].cards.iter().map(|c| c.to_string()).collect();
        assert_eq!(names, ["C0", "C1", "I2_2", "I2_1", "I2_2", "C2", "A3_3", "S2", "A2_1", "A1_1"]);
    }

    #[test]
    fn singleton_word() {
        let arr = expand_arrangements(&"S".parse().unwrap(), ScalarGauge::Identity).unwrap();
        assert_eq!(arr.len(), 1);
        assert_eq!(arr[0].weight, p("lambda"));
        assert_eq!(blocks(&arr[0].partition), vec![vec![1]]);
        assert_eq!(
            expand_arrangements(&"CA".parse().unwrap(), ScalarGauge::Identity),
            Err(CardError::NotContributor("CA".into()))
        );
    }

    #[test]
    fn arrangement_count_is_product_of_levels() {
        for w in enumerate_contributors(6) {
            let levels = w.levels();
            let expected: usize = w
                .sites()
                .zip(&levels)
                .map(|(z, &l)| match z {
                    OperatorLetter::Annihilation | OperatorLetter::Number => l as usize,
                    _ => 1,
                })
                .product();
            assert_eq!(expand_arrangements(&w, ScalarGauge::Identity).unwrap().len(), expected);
        }
    }

    #[test]
    fn bijection_and_weights() {
        for gauge in [ScalarGauge::Identity, ScalarGauge::TPowerN] {
            let mode = gauge.nesting_mode();
            for n in 1..=7 {
                let mut seen: HashMap<SetPartition, usize> = HashMap::new();
                for w in enumerate_contributors(n) {
                    for a in expand_arrangements(&w, gauge).unwrap() {
                        let stats = a.partition.stats();
                        assert_eq!(a.weight, Polynomial::term(1, stats.weight(mode)), "{}", a.partition);
                        *seen.entry(a.partition).or_default() += 1;
                    }
                }
                let all: Vec<SetPartition> = enumerate_partitions(n).collect();
                assert_eq!(seen.len(), all.len());
                assert!(all.iter().all(|p| seen.get(p) == Some(&1)));
            }
        }
    }

    #[test]
    fn per_word_sums_match_operator() {
        for gauge in [ScalarGauge::Identity, ScalarGauge::TPowerN] {
            for n in 1..=7 {
                for w in enumerate_contributors(n) {
                    let sum: Polynomial = expand_arrangements(&w, gauge).unwrap().into_iter().map(|a| a.weight).sum();
                    assert_eq!(sum, vacuum_expectation_word(&w, gauge), "{w}");
                }
            }
        }
    }

    #[test]
    fn moments() {
        assert_eq!(moment_by_cards(2, ScalarGauge::Identity), p("lambda^2 + lambda"));
        assert_eq!(moment_by_cards(3, ScalarGauge::Identity), p("lambda^3 + 3*lambda^2 + lambda"));
        assert_eq!(
            moment_by_cards(4, ScalarGauge::TPowerN),
            p("lambda^4 + (3 + t^2 + 2*t)*lambda^3 + (3 + 3*t + q)*lambda^2 + lambda")
        );
        for n in 0..=6 {
            assert_eq!(moment_by_cards(n, ScalarGauge::TPowerN), moment_by_partitions(n, NestingMode::CoveredSingleton));
        }
    }

    #[test]
    fn intermediate_card_splits() {
        // context: i creations, the card under test, then close everything
        for i in 1..=6u32 {
            for j in 1..=i {
                let mut cards: Vec<Card> = (0..i).map(Card::Creation).collect();
                cards.push(Card::Intermediate(i, j));
                cards.extend((1..=i).rev().map(|l| Card::Annihilation(l, 1)));
                let site = i as usize + 1;
                let whole = partition_from_cards(&cards).unwrap();
                let split = split_intermediate(&cards, site).unwrap();
                let parted = partition_from_cards(&split).unwrap();
                assert_eq!(merge_adjacent(&parted, site), whole, "i = {i}, j = {j}");
            }
        }
        assert_eq!(split_intermediate(&[Card::Singleton(0)], 1), None);
    }

    #[test]
    fn inadmissible_cards_rejected() {
        assert!(matches!(
            partition_from_cards(&[Card::Creation(1)]),
            Err(CardError::Inadmissible { site: 1, .. })
        ));
        assert_eq!(partition_from_cards(&[Card::Creation(0)]), Err(CardError::Unclosed(1)));
    }
}
