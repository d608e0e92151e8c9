//! Set partitions of `{1..n}` in restricted-growth-string form, their arc
//! diagrams, restricted crossing / nesting statistics, and the moment sum
//! `sum over partitions of lambda^|pi| q^rc t^rn`.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{Monomial, Polynomial, Var};

/// Enumeration above this size is allowed but slow (B(17) > 8e10).
pub const SOFT_LIMIT: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("not a restricted growth string: {0:?}")]
    NotRestrictedGrowth(Vec<u8>),
    #[error("blocks do not partition 1..{n}")]
    BadBlocks { n: usize },
}

/// How nestings are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NestingMode {
    /// Pairs of arcs `(a,d)`, `(b,c)` with `a < b < c < d`.
    Strict,
    /// `Strict` plus every singleton lying strictly under an arc.
    CoveredSingleton,
}

impl NestingMode {
    pub fn name(self) -> &'static str {
        match self {
            NestingMode::Strict => "strict",
            NestingMode::CoveredSingleton => "covered",
        }
    }
}

/// A partition of `{1..n}` stored as its restricted growth string:
/// `rgs[0] = 0` and `rgs[k] <= 1 + max(rgs[..k])`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    rgs: Vec<u8>,
}

/// Arcs join consecutive elements of each block; singletons carry no arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcDiagram {
    pub arcs: Vec<(usize, usize)>,
    pub singletons: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PartitionStats {
    pub blocks: u32,
    pub rc: u32,
    pub rn_strict: u32,
    pub rn_covered: u32,
}

impl PartitionStats {
    pub fn rn(&self, mode: NestingMode) -> u32 {
        match mode {
            NestingMode::Strict => self.rn_strict,
            NestingMode::CoveredSingleton => self.rn_covered,
        }
    }

    /// `lambda^blocks q^rc t^rn`.
    pub fn weight(&self, mode: NestingMode) -> Monomial {
        Monomial::from_exponents([
            (Var::Lambda, self.blocks),
            (Var::Q, self.rc),
            (Var::T, self.rn(mode)),
        ])
    }
}

/// One JSON line of the partition listing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionRecord {
    pub rgs: Vec<u8>,
    pub blocks: u32,
    pub rc: u32,
    pub rn_strict: u32,
    pub rn_covered: u32,
}

impl SetPartition {
    pub fn new(rgs: Vec<u8>) -> Result<Self, PartitionError> {
        if !is_restricted_growth(&rgs) {
            return Err(PartitionError::NotRestrictedGrowth(rgs));
        }
        Ok(SetPartition { rgs })
    }

    /// Builds a partition from 1-based blocks in any order.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self, PartitionError> {
        let mut label = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(PartitionError::BadBlocks { n });
            }
            for &e in block {
                if e == 0 || e > n || label[e - 1] != usize::MAX {
                    return Err(PartitionError::BadBlocks { n });
                }
                label[e - 1] = b;
            }
        }
        if label.contains(&usize::MAX) {
            return Err(PartitionError::BadBlocks { n });
        }
        Ok(Self::from_labels(&label))
    }

    /// Normalises arbitrary block labels (equal label = same block) to RGS form.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut seen: HashMap<usize, u8> = HashMap::new();
        let rgs = labels
            .iter()
            .map(|l| {
                let next = seen.len() as u8;
                *seen.entry(*l).or_insert(next)
            })
            .collect();
        SetPartition { rgs }
    }

    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    pub fn n(&self) -> usize {
        self.rgs.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.rgs.iter().map(|&r| r as usize + 1).max().unwrap_or(0)
    }

    /// Blocks as sorted 1-based element lists, ordered by smallest element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (i, &r) in self.rgs.iter().enumerate() {
            out[r as usize].push(i + 1);
        }
        out
    }

    pub fn arc_diagram(&self) -> ArcDiagram {
        let mut last: Vec<Option<usize>> = vec![None; self.num_blocks()];
        let mut size = vec![0usize; self.num_blocks()];
        let mut arcs = Vec::new();
        for (i, &r) in self.rgs.iter().enumerate() {
            let e = i + 1;
            if let Some(prev) = last[r as usize] {
                arcs.push((prev, e));
            }
            last[r as usize] = Some(e);
            size[r as usize] += 1;
        }
        let singletons = self
            .rgs
            .iter()
            .enumerate()
            .filter(|(_, &r)| size[r as usize] == 1)
            .map(|(i, _)| i + 1)
            .collect();
        ArcDiagram { arcs, singletons }
    }

    pub fn stats(&self) -> PartitionStats {
        let diagram = self.arc_diagram();
        let arcs = &diagram.arcs;
        let mut rc = 0;
        let mut rn = 0;
        for (i, &(a1, b1)) in arcs.iter().enumerate() {
            for &(a2, b2) in &arcs[i + 1..] {
                let ((_, c), (b, d)) = if a1 < a2 { ((a1, b1), (a2, b2)) } else { ((a2, b2), (a1, b1)) };
                // left arc ends at c; right arc is (b, d) and starts after the left one
                if b < c && c < d {
                    rc += 1;
                } else if d < c {
                    rn += 1;
                }
            }
        }
        let covered = diagram
            .singletons
            .iter()
            .map(|&e| arcs.iter().filter(|&&(a, d)| a < e && e < d).count() as u32)
            .sum::<u32>();
        PartitionStats {
            blocks: self.num_blocks() as u32,
            rc,
            rn_strict: rn,
            rn_covered: rn + covered,
        }
    }

    pub fn record(&self) -> PartitionRecord {
        let s = self.stats();
        PartitionRecord {
            rgs: self.rgs.clone(),
            blocks: s.blocks,
            rc: s.rc,
            rn_strict: s.rn_strict,
            rn_covered: s.rn_covered,
        }
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| {
                let inner: Vec<String> = b.iter().map(|e| e.to_string()).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        write!(f, "{{{}}}", blocks.join(","))
    }
}

fn is_restricted_growth(rgs: &[u8]) -> bool {
    let mut max: i32 = -1;
    for &r in rgs {
        if r as i32 > max + 1 {
            return false;
        }
        max = max.max(r as i32);
    }
    true
}

pub fn restricted_crossings(p: &SetPartition) -> u32 {
    p.stats().rc
}

pub fn restricted_nestings(p: &SetPartition, mode: NestingMode) -> u32 {
    p.stats().rn(mode)
}

/// Lexicographic enumeration of the restricted growth strings of length `n`
/// that start with a fixed prefix.
#[derive(Debug, Clone)]
pub struct Partitions {
    rgs: Vec<u8>,
    // prefix_max[i] = max(rgs[..=i])
    prefix_max: Vec<u8>,
    fixed: usize,
    started: bool,
    done: bool,
}

impl Partitions {
    fn with_prefix(n: usize, prefix: &[u8]) -> Self {
        assert!(prefix.len() <= n && is_restricted_growth(prefix));
        let mut rgs = prefix.to_vec();
        rgs.resize(n, 0);
        let mut prefix_max = Vec::with_capacity(n);
        let mut m = 0u8;
        for &r in &rgs {
            m = m.max(r);
            prefix_max.push(m);
        }
        Partitions {
            rgs,
            prefix_max,
            // position 0 is always 0
            fixed: prefix.len().max(1),
            started: false,
            done: false,
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.rgs.len();
        let mut i = n;
        while i > self.fixed {
            i -= 1;
            if self.rgs[i] <= self.prefix_max[i - 1] {
                self.rgs[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.rgs[i]);
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for Partitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        if self.started && !self.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        Some(SetPartition { rgs: self.rgs.clone() })
    }
}

/// Every partition of `{1..n}` once, in lexicographic RGS order.
/// `n = 0` yields the single empty partition.
pub fn enumerate_partitions(n: usize) -> Partitions {
    Partitions::with_prefix(n, &[])
}

/// Completions of a valid RGS prefix, in lexicographic order.
pub fn enumerate_with_prefix(n: usize, prefix: &[u8]) -> Partitions {
    Partitions::with_prefix(n, prefix)
}

/// All valid RGS prefixes of length `k`, in lexicographic order. Enumerating
/// the completions of each in turn reproduces [`enumerate_partitions`].
pub fn rgs_prefixes(k: usize) -> Vec<Vec<u8>> {
    enumerate_partitions(k).map(|p| p.rgs).collect()
}

fn work_units(n: usize) -> Vec<Vec<u8>> {
    rgs_prefixes(n.min(6))
}

/// `sum over P(n) of lambda^|pi| q^rc(pi) t^rn(pi)`.
pub fn moment_by_partitions(n: usize, mode: NestingMode) -> Polynomial {
    let counts = work_units(n)
        .par_iter()
        .map(|prefix| {
            let mut local: HashMap<Monomial, u64> = HashMap::new();
            for p in enumerate_with_prefix(n, prefix) {
                *local.entry(p.stats().weight(mode)).or_default() += 1;
            }
            local
        })
        .reduce(HashMap::new, |mut a, b| {
            for (m, c) in b {
                *a.entry(m).or_default() += c;
            }
            a
        });
    counts
        .into_iter()
        .map(|(m, c)| Polynomial::term(c, m))
        .sum()
}

/// Bell numbers `B(0..=n)` from the recurrence `B(n+1) = sum C(n,k) B(k)`.
pub fn bell_numbers(n: usize) -> Vec<u128> {
    let mut bell = vec![1u128];
    let mut binom = vec![1u128];
    for m in 0..n {
        let next: u128 = (0..=m).map(|k| binom[k] * bell[k]).sum();
        bell.push(next);
        let mut row = vec![1u128; m + 2];
        for k in 1..=m {
            row[k] = binom[k - 1] + binom[k];
        }
        binom = row;
    }
    bell
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(blocks: &[&[usize]]) -> SetPartition {
        let n = blocks.iter().map(|b| b.len()).sum();
        let owned: Vec<Vec<usize>> = blocks.iter().map(|b| b.to_vec()).collect();
        SetPartition::from_blocks(n, &owned).unwrap()
    }

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s).unwrap()
    }

    /// Literal quadruple scan over `a < b < c < d` using the "follows" relation.
    fn brute_stats(pi: &SetPartition) -> (u32, u32, u32) {
        let n = pi.n();
        let blocks = pi.blocks();
        let follows = |e: usize, f: usize| {
            blocks.iter().any(|b| b.windows(2).any(|w| w[0] == e && w[1] == f))
        };
        let (mut rc, mut rn) = (0, 0);
        for a in 1..=n {
            for b in a + 1..=n {
                for c in b + 1..=n {
                    for d in c + 1..=n {
                        if follows(a, c) && follows(b, d) {
                            rc += 1;
                        }
                        if follows(a, d) && follows(b, c) {
                            rn += 1;
                        }
                    }
                }
            }
        }
        let singles: Vec<usize> = blocks.iter().filter(|b| b.len() == 1).map(|b| b[0]).collect();
        let mut covered = 0;
        for &e in &singles {
            for a in 1..e {
                for d in e + 1..=n {
                    if follows(a, d) {
                        covered += 1;
                    }
                }
            }
        }
        (rc, rn, rn + covered)
    }

    #[test]
    fn rgs_validation() {
        assert!(SetPartition::new(vec![0, 1, 0, 2]).is_ok());
        assert!(SetPartition::new(vec![1]).is_err());
        assert!(SetPartition::new(vec![0, 2]).is_err());
    }

    #[test]
    fn arc_diagram_of_example() {
        let pi = part(&[&[1, 3, 4, 7], &[2, 5, 10], &[6, 9], &[8]]);
        let d = pi.arc_diagram();
        let mut arcs = d.arcs.clone();
        arcs.sort();
        assert_eq!(arcs, vec![(1, 3), (2, 5), (3, 4), (4, 7), (5, 10), (6, 9)]);
        assert_eq!(d.singletons, vec![8]);
        assert_eq!(d.arcs.len(), pi.n() - pi.num_blocks());
    }

    #[test]
    fn known_examples() {
        let pi = part(&[&[1, 3, 4, 7], &[2, 5, 10], &[6, 9], &[8]]);
        assert_eq!(restricted_crossings(&pi), 4);
        assert_eq!(restricted_nestings(&pi, NestingMode::Strict), 2);
        let pi = part(&[&[1, 4, 6, 9], &[2, 3, 10], &[5], &[7, 8]]);
        assert_eq!(restricted_crossings(&pi), 1);
        assert_eq!(restricted_nestings(&pi, NestingMode::Strict), 5);
    }

    #[test]
    fn singleton_edge_cases() {
        let pi = part(&[&[1], &[2], &[3], &[4]]);
        assert_eq!(pi.stats(), PartitionStats { blocks: 4, rc: 0, rn_strict: 0, rn_covered: 0 });
        let pi = part(&[&[1, 3], &[2]]);
        assert_eq!(restricted_nestings(&pi, NestingMode::Strict), 0);
        assert_eq!(restricted_nestings(&pi, NestingMode::CoveredSingleton), 1);
    }

    #[test]
    fn stats_match_quadruple_scan() {
        for n in 1..=8 {
            for pi in enumerate_partitions(n) {
                let s = pi.stats();
                assert_eq!((s.rc, s.rn_strict, s.rn_covered), brute_stats(&pi), "{pi}");
            }
        }
    }

    #[test]
    fn counts_are_bell_numbers() {
        let bell = bell_numbers(10);
        assert_eq!(bell[3], 5);
        assert_eq!(bell[10], 115_975);
        assert_eq!(enumerate_partitions(1).count(), 1);
        for n in 1..=10 {
            assert_eq!(enumerate_partitions(n).count() as u128, bell[n], "n = {n}");
        }
    }

    #[test]
    fn enumeration_is_lexicographic_and_prefix_split_agrees() {
        let all: Vec<SetPartition> = enumerate_partitions(7).collect();
        assert!(all.windows(2).all(|w| w[0].rgs < w[1].rgs));
        let split: Vec<SetPartition> = rgs_prefixes(3)
            .iter()
            .flat_map(|pre| enumerate_with_prefix(7, pre))
            .collect();
        assert_eq!(all, split);
        assert_eq!(enumerate_partitions(0).count(), 1);
    }

    #[test]
    fn small_moments() {
        assert_eq!(moment_by_partitions(1, NestingMode::Strict), p("lambda"));
        for mode in [NestingMode::Strict, NestingMode::CoveredSingleton] {
            assert_eq!(moment_by_partitions(2, mode), p("lambda^2 + lambda"));
        }
        assert_eq!(
            moment_by_partitions(3, NestingMode::CoveredSingleton),
            p("lambda^3 + (2 + t)*lambda^2 + lambda")
        );
        assert_eq!(moment_by_partitions(3, NestingMode::Strict), p("lambda^3 + 3*lambda^2 + lambda"));
        assert_eq!(
            moment_by_partitions(4, NestingMode::CoveredSingleton),
            p("lambda^4 + (3 + t^2 + 2*t)*lambda^3 + (3 + 3*t + q)*lambda^2 + lambda")
        );
    }

    #[test]
    fn stat_bounds() {
        for n in 1..=8 {
            for pi in enumerate_partitions(n) {
                let s = pi.stats();
                let arcs = (n - pi.num_blocks()) as u32;
                let bound = arcs * arcs.saturating_sub(1) / 2;
                assert!(s.rc <= bound && s.rn_strict <= bound);
            }
        }
    }
}
