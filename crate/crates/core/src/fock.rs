//! Truncated one-mode (q,t)-Fock space with polynomial coefficients, and a
//! small exact-rational multi-mode layer for inner-product checks.
//!
//! The one-mode layer works in the rescaled basis `f_k = lambda^(-k/2) xi^k`
//! (`f_0` is the vacuum). In that basis the four letters of the Poisson
//! operator act by polynomial matrices:
//!
//! | letter        | action on `f_k`                     |
//! |---------------|-------------------------------------|
//! | Creation      | `lambda * f_{k+1}`                  |
//! | Annihilation  | `[k] * f_{k-1}` (`f_0 -> 0`)        |
//! | Number        | `[k] * f_k`                         |
//! | Scalar        | `lambda * f_k` or `lambda t^k f_k`  |
//!
//! so no square root of `lambda` ever appears.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partitions::NestingMode;
use crate::qtnum::QtNumbers;
use crate::ring::{Assignment, CoeffRing, Monomial, Polynomial, Rational, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FockError {
    #[error("creation past truncation level {0}")]
    TruncationOverflow(usize),
    #[error("invalid operator letter `{0}` (expected one of C, A, N, S)")]
    InvalidLetter(char),
    #[error("parameters outside |q| < t <= 1")]
    ParameterRegion,
    #[error("multi-mode layer supports alphabet size <= 3 and level <= 4 (got d = {d}, n = {n})")]
    TooLarge { d: usize, n: usize },
    #[error("Gram matrix must be square of size {0} and symmetric")]
    BadGram(usize),
}

/// A vector of the truncated space spanned by `f_0, ..., f_D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockVector {
    coeffs: Vec<Polynomial>,
}

impl FockVector {
    pub fn zero(dim: usize) -> Self {
        FockVector {
            coeffs: vec![Polynomial::zero(); dim + 1],
        }
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coeffs[k] = Polynomial::one();
        v
    }

    pub fn vacuum(dim: usize) -> Self {
        Self::basis(dim, 0)
    }

    pub fn from_coeffs(coeffs: Vec<Polynomial>) -> Self {
        assert!(!coeffs.is_empty());
        FockVector { coeffs }
    }

    /// Truncation level `D`.
    pub fn dim(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Polynomial {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial::is_zero)
    }

    pub fn scale(&self, c: &Polynomial) -> FockVector {
        FockVector {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        assert_eq!(self.dim(), other.dim());
        FockVector {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        assert_eq!(self.dim(), other.dim());
        FockVector {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    /// Bare creation `xi^k -> xi^(k+1)` (no lambda weight).
    pub fn raise(&self) -> Result<FockVector, FockError> {
        let d = self.dim();
        if !self.coeffs[d].is_zero() {
            return Err(FockError::TruncationOverflow(d));
        }
        let mut out = FockVector::zero(d);
        for k in 0..d {
            out.coeffs[k + 1] = self.coeffs[k].clone();
        }
        Ok(out)
    }

    /// Bare annihilation `xi^k -> [k] xi^(k-1)`.
    pub fn lower(&self, qt: &QtNumbers) -> FockVector {
        let d = self.dim();
        let mut out = FockVector::zero(d);
        for k in 1..=d {
            if !self.coeffs[k].is_zero() {
                out.coeffs[k - 1] = &self.coeffs[k] * &qt.get(k as u32);
            }
        }
        out
    }

    fn diagonal(&self, f: impl Fn(usize) -> Polynomial) -> FockVector {
        FockVector {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if c.is_zero() { Polynomial::zero() } else { c * &f(k) })
                .collect(),
        }
    }
}

/// The four factors of the Poisson operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorLetter {
    Creation,
    Annihilation,
    Number,
    Scalar,
}

impl OperatorLetter {
    pub const ALL: [OperatorLetter; 4] = [
        OperatorLetter::Creation,
        OperatorLetter::Annihilation,
        OperatorLetter::Number,
        OperatorLetter::Scalar,
    ];

    pub fn symbol(self) -> char {
        match self {
            OperatorLetter::Creation => 'C',
            OperatorLetter::Annihilation => 'A',
            OperatorLetter::Number => 'N',
            OperatorLetter::Scalar => 'S',
        }
    }

    pub fn from_symbol(c: char) -> Result<Self, FockError> {
        match c {
            'C' => Ok(OperatorLetter::Creation),
            'A' => Ok(OperatorLetter::Annihilation),
            'N' => Ok(OperatorLetter::Number),
            'S' => Ok(OperatorLetter::Scalar),
            other => Err(FockError::InvalidLetter(other)),
        }
    }

    /// Level change caused by the letter.
    pub fn step(self) -> i32 {
        match self {
            OperatorLetter::Creation => 1,
            OperatorLetter::Annihilation => -1,
            OperatorLetter::Number | OperatorLetter::Scalar => 0,
        }
    }
}

/// A product `Z_n ... Z_1` stored in display order: `letters[0]` is `Z_n`,
/// the last factor applied.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OperatorWord {
    letters: Vec<OperatorLetter>,
}

impl OperatorWord {
    pub fn new(letters: Vec<OperatorLetter>) -> Self {
        OperatorWord { letters }
    }

    /// Builds a word from factors listed in application order (`Z_1` first).
    pub fn from_sites(sites: Vec<OperatorLetter>) -> Self {
        let mut letters = sites;
        letters.reverse();
        OperatorWord { letters }
    }

    pub fn letters(&self) -> &[OperatorLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Factors in application order: `sites()[k-1]` is `Z_k`.
    pub fn sites(&self) -> impl Iterator<Item = OperatorLetter> + '_ {
        self.letters.iter().rev().copied()
    }

    /// `l(1), ..., l(n+1)` with `l(1) = 0`.
    pub fn levels(&self) -> Vec<i32> {
        let mut levels = Vec::with_capacity(self.len() + 1);
        let mut l = 0;
        levels.push(l);
        for z in self.sites() {
            l += z.step();
            levels.push(l);
        }
        levels
    }

    /// Motzkin-path conditions with Number letters strictly above ground.
    pub fn is_contributor(&self) -> bool {
        let levels = self.levels();
        let n = self.len();
        if levels[n] != 0 {
            return false;
        }
        self.sites().enumerate().all(|(k, z)| {
            let l = levels[k];
            l >= 0
                && levels[k + 1] >= 0
                && (z != OperatorLetter::Number || l >= 1)
        })
    }

    /// Replaces each Number letter by Creation followed (on the left) by
    /// Annihilation, i.e. `N -> C A` in display order.
    pub fn expand_number_letters(&self) -> OperatorWord {
        let mut letters = Vec::new();
        for &z in &self.letters {
            if z == OperatorLetter::Number {
                letters.push(OperatorLetter::Creation);
                letters.push(OperatorLetter::Annihilation);
            } else {
                letters.push(z);
            }
        }
        OperatorWord { letters }
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for z in &self.letters {
            write!(f, "{}", z.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for OperatorWord {
    type Err = FockError;

    fn from_str(s: &str) -> Result<Self, FockError> {
        s.chars()
            .map(OperatorLetter::from_symbol)
            .collect::<Result<Vec<_>, _>>()
            .map(OperatorWord::new)
    }
}

/// How the scalar part of the Poisson operator acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarGauge {
    /// `lambda * 1`.
    Identity,
    /// `lambda * t^N`.
    TPowerN,
}

impl ScalarGauge {
    pub fn name(self) -> &'static str {
        match self {
            ScalarGauge::Identity => "identity",
            ScalarGauge::TPowerN => "tpower",
        }
    }

    /// The nesting convention that this gauge reproduces.
    pub fn nesting_mode(self) -> NestingMode {
        match self {
            ScalarGauge::Identity => NestingMode::Strict,
            ScalarGauge::TPowerN => NestingMode::CoveredSingleton,
        }
    }

    pub fn for_mode(mode: NestingMode) -> Self {
        match mode {
            NestingMode::Strict => ScalarGauge::Identity,
            NestingMode::CoveredSingleton => ScalarGauge::TPowerN,
        }
    }

    /// Scalar factor on `f_k`.
    pub fn scalar_weight(self, k: usize) -> Polynomial {
        match self {
            ScalarGauge::Identity => Polynomial::var(Var::Lambda),
            ScalarGauge::TPowerN => Polynomial::term(
                1,
                Monomial::from_exponents([(Var::Lambda, 1), (Var::T, k as u32)]),
            ),
        }
    }
}

fn lambda() -> Polynomial {
    Polynomial::var(Var::Lambda)
}

fn apply_letter_with(
    letter: OperatorLetter,
    v: &FockVector,
    gauge: ScalarGauge,
    qt: &QtNumbers,
) -> Result<FockVector, FockError> {
    Ok(match letter {
        OperatorLetter::Creation => v.raise()?.scale(&lambda()),
        OperatorLetter::Annihilation => v.lower(qt),
        OperatorLetter::Number => v.diagonal(|k| qt.get(k as u32)),
        OperatorLetter::Scalar => v.diagonal(|k| gauge.scalar_weight(k)),
    })
}

/// Applies one letter in the f-basis.
pub fn apply_letter(
    letter: OperatorLetter,
    v: &FockVector,
    gauge: ScalarGauge,
) -> Result<FockVector, FockError> {
    apply_letter_with(letter, v, gauge, &QtNumbers::new(v.dim() as u32))
}

/// `p v = (N + C + A + S) v`.
pub fn apply_poisson(v: &FockVector, gauge: ScalarGauge) -> Result<FockVector, FockError> {
    apply_poisson_with(v, gauge, &QtNumbers::new(v.dim() as u32))
}

fn apply_poisson_with(
    v: &FockVector,
    gauge: ScalarGauge,
    qt: &QtNumbers,
) -> Result<FockVector, FockError> {
    let d = v.dim();
    let mut out = FockVector::zero(d);
    for k in 0..=d {
        let c = &v.coeffs[k];
        if c.is_zero() {
            continue;
        }
        let qk = qt.get(k as u32);
        out.coeffs[k] += &(c * &(&qk + &gauge.scalar_weight(k)));
        if k > 0 {
            out.coeffs[k - 1] += &(c * &qk);
        }
        if k == d {
            return Err(FockError::TruncationOverflow(d));
        }
        out.coeffs[k + 1] += &(c * &lambda());
    }
    Ok(out)
}

/// `phi(w) = (w f_0 | f_0)`: the `f_0` coefficient of the word applied to the vacuum.
pub fn vacuum_expectation_word(w: &OperatorWord, gauge: ScalarGauge) -> Polynomial {
    let dim = w.len().max(1);
    let qt = QtNumbers::new(dim as u32);
    let mut v = FockVector::vacuum(dim);
    for z in w.sites() {
        v = apply_letter_with(z, &v, gauge, &qt).expect("word length bounds the level");
    }
    v.coeffs.swap_remove(0)
}

/// `phi(p^n)` by repeated application of the Poisson operator to the vacuum.
pub fn moment_by_operator(n: usize, gauge: ScalarGauge) -> Polynomial {
    moment_sequence_by_operator(n, gauge).pop().expect("non-empty")
}

/// `phi(p^0), ..., phi(p^n)` from one chain of applications.
pub fn moment_sequence_by_operator(n: usize, gauge: ScalarGauge) -> Vec<Polynomial> {
    let dim = n + 1;
    let qt = QtNumbers::new(dim as u32);
    let mut v = FockVector::vacuum(dim);
    let mut out = vec![Polynomial::one()];
    for _ in 0..n {
        v = apply_poisson_with(&v, gauge, &qt).expect("dimension n+1 suffices");
        out.push(v.coeffs[0].clone());
    }
    out
}

/// Every word of length `n` over the four letters, in display order.
pub fn all_words(n: usize) -> impl Iterator<Item = OperatorWord> {
    let total = 4usize.pow(n as u32);
    (0..total).map(move |mut code| {
        let mut letters = Vec::with_capacity(n);
        for _ in 0..n {
            letters.push(OperatorLetter::ALL[code % 4]);
            code /= 4;
        }
        letters.reverse();
        OperatorWord::new(letters)
    })
}

/// `phi(p^n)` as the sum of `phi(w)` over all `4^n` words.
pub fn moment_by_word_sum(n: usize, gauge: ScalarGauge) -> Polynomial {
    all_words(n).map(|w| vacuum_expectation_word(&w, gauge)).sum()
}

/// Applies a polynomial in `x` (coefficients in `q, t, lambda`) to `v`,
/// with `x` acting as the Poisson operator. Evaluated by Horner's rule.
pub fn apply_polynomial(
    poly: &Polynomial,
    v: &FockVector,
    gauge: ScalarGauge,
) -> Result<FockVector, FockError> {
    let by_degree = poly.coefficients_in(Var::X);
    let deg = by_degree.keys().next_back().copied().unwrap_or(0);
    let qt = QtNumbers::new(v.dim() as u32);
    let mut acc = FockVector::zero(v.dim());
    for k in (0..=deg).rev() {
        acc = apply_poisson_with(&acc, gauge, &qt)?;
        if let Some(c) = by_degree.get(&k) {
            acc = acc.add(&v.scale(c));
        }
    }
    Ok(acc)
}

/// Result of [`check_commutation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutationReport {
    pub levels_checked: usize,
    pub failing_levels: Vec<usize>,
}

impl CommutationReport {
    pub fn passed(&self) -> bool {
        self.failing_levels.is_empty()
    }
}

/// Verifies `(A A^+ - q A^+ A) xi^k = t^k xi^k` for `0 <= k < dim` with the
/// bare operators. With `params = Some((q, t))` both sides are additionally
/// compared after exact evaluation at that point.
pub fn check_commutation(
    dim: usize,
    params: Option<(&Rational, &Rational)>,
) -> Result<CommutationReport, FockError> {
    if let Some((q, t)) = params {
        check_region(q, t)?;
    }
    let qt = QtNumbers::new(dim as u32);
    let q = Polynomial::var(Var::Q);
    let mut failing = Vec::new();
    for k in 0..dim {
        let v = FockVector::basis(dim, k);
        let aa_dag = v.raise()?.lower(&qt);
        let a_dag_a = v.lower(&qt).raise()?;
        let lhs = aa_dag.sub(&a_dag_a.scale(&q));
        let rhs = v.scale(&Polynomial::var(Var::T).pow(k as u32));
        let mut ok = lhs == rhs;
        if let Some((qv, tv)) = params {
            let mut asg = Assignment::new();
            asg.insert(Var::Q, qv.clone());
            asg.insert(Var::T, tv.clone());
            ok &= lhs
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .all(|(a, b)| a.eval(&asg).ok() == b.eval(&asg).ok());
        }
        if !ok {
            failing.push(k);
        }
    }
    Ok(CommutationReport {
        levels_checked: dim,
        failing_levels: failing,
    })
}

/// `|q| < t <= 1`.
pub fn check_region(q: &Rational, t: &Rational) -> Result<(), FockError> {
    use num_traits::{One, Signed};
    if q.abs() < *t && *t <= <Rational as One>::one() {
        Ok(())
    } else {
        Err(FockError::ParameterRegion)
    }
}

/// Square matrix of pairings `<xi_i | eta_j>`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix<R> {
    entries: Vec<Vec<R>>,
}

impl<R: CoeffRing> GramMatrix<R> {
    pub fn new(entries: Vec<Vec<R>>) -> Result<Self, FockError> {
        let n = entries.len();
        if entries.iter().any(|row| row.len() != n) {
            return Err(FockError::BadGram(n));
        }
        Ok(GramMatrix { entries })
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n)
            .map(|i| (0..n).map(|j| if i == j { R::one() } else { R::zero() }).collect())
            .collect();
        GramMatrix { entries }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.entries[i][j]
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }
}

/// Permutations of `0..n` in lexicographic order, each with its inversion count.
fn permutations_with_inversions(n: usize) -> Vec<(Vec<usize>, u32)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let mut inv = 0;
        for i in 0..n {
            for j in i + 1..n {
                if perm[i] > perm[j] {
                    inv += 1;
                }
            }
        }
        out.push((perm.clone(), inv));
        // next permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).expect("pivot");
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    out
}

/// `sum over S_n of q^inv(s) t^(n(n-1)/2 - inv(s)) prod_k g[k][s(k)]` with
/// caller-supplied values for `q` and `t`.
pub fn qt_inner_product_with<R: CoeffRing>(g: &GramMatrix<R>, q: &R, t: &R) -> R {
    let n = g.size();
    let top = n * n.saturating_sub(1) / 2;
    let mut qpow = vec![R::one()];
    let mut tpow = vec![R::one()];
    for k in 0..top {
        qpow.push(qpow[k].mul(q));
        tpow.push(tpow[k].mul(t));
    }
    let mut total = R::zero();
    for (perm, inv) in permutations_with_inversions(n) {
        let mut prod = R::one();
        for (k, &s) in perm.iter().enumerate() {
            prod = prod.mul(g.get(k, s));
            if prod.is_zero() {
                break;
            }
        }
        if prod.is_zero() {
            continue;
        }
        let inv = inv as usize;
        let w = qpow[inv].mul(&tpow[top - inv]);
        total = total.add(&w.mul(&prod));
    }
    total
}

/// The (q,t)-pairing of two elementary tensors with Gram matrix `g`, as a
/// polynomial in `q, t`.
pub fn qt_inner_product(g: &GramMatrix<Polynomial>) -> Polynomial {
    qt_inner_product_with(g, &Polynomial::var(Var::Q), &Polynomial::var(Var::T))
}

type Word = Vec<u8>;
type RVector = BTreeMap<Word, Rational>;

/// Truncated multi-mode space: basis = all words of length `<= n` over an
/// alphabet of size `d`, inner product from a Gram matrix on the alphabet.
#[derive(Debug, Clone)]
pub struct MultiModeSpace {
    d: usize,
    n: usize,
    g: GramMatrix<Rational>,
    q: Rational,
    t: Rational,
    basis: Vec<Word>,
    index: BTreeMap<Word, usize>,
    gram: Vec<Vec<Rational>>,
}

impl MultiModeSpace {
    pub fn new(
        n: usize,
        g: GramMatrix<Rational>,
        q: Rational,
        t: Rational,
    ) -> Result<Self, FockError> {
        let d = g.size();
        if d == 0 || d > 3 || n > 4 {
            return Err(FockError::TooLarge { d, n });
        }
        if !g.is_symmetric() {
            return Err(FockError::BadGram(d));
        }
        check_region(&q, &t)?;
        let mut basis: Vec<Word> = vec![vec![]];
        let mut layer: Vec<Word> = vec![vec![]];
        for _ in 0..n {
            layer = layer
                .iter()
                .flat_map(|w| {
                    (0..d as u8).map(move |a| {
                        let mut w2 = w.clone();
                        w2.push(a);
                        w2
                    })
                })
                .collect();
            basis.extend(layer.iter().cloned());
        }
        let index = basis.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut space = MultiModeSpace {
            d,
            n,
            g,
            q,
            t,
            basis,
            index,
            gram: Vec::new(),
        };
        space.gram = space.compute_gram();
        Ok(space)
    }

    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    /// `(u | v)_{q,t}` for basis words.
    fn pair_words(&self, u: &Word, v: &Word) -> Rational {
        if u.len() != v.len() {
            return <Rational as CoeffRing>::zero();
        }
        let entries = u
            .iter()
            .map(|&a| v.iter().map(|&b| self.g.get(a as usize, b as usize).clone()).collect())
            .collect();
        let local = GramMatrix { entries };
        qt_inner_product_with(&local, &self.q, &self.t)
    }

    fn compute_gram(&self) -> Vec<Vec<Rational>> {
        self.basis
            .iter()
            .map(|u| self.basis.iter().map(|v| self.pair_words(u, v)).collect())
            .collect()
    }

    /// Gram matrix of the basis words under `( . | . )_{q,t}`.
    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    pub fn inner(&self, u: &RVector, v: &RVector) -> Rational {
        let mut total = <Rational as CoeffRing>::zero();
        for (wu, cu) in u {
            for (wv, cv) in v {
                total += cu * cv * &self.gram[self.index[wu]][self.index[wv]];
            }
        }
        total
    }

    /// Left creation `A^+(xi_i)`; words already at the top level are an error.
    pub fn create(&self, i: usize, v: &RVector) -> Result<RVector, FockError> {
        let mut out = RVector::new();
        for (w, c) in v {
            if w.len() >= self.n {
                return Err(FockError::TruncationOverflow(self.n));
            }
            let mut w2 = vec![i as u8];
            w2.extend_from_slice(w);
            *out.entry(w2).or_insert_with(<Rational as CoeffRing>::zero) += c;
        }
        out.retain(|_, c| !CoeffRing::is_zero(c));
        Ok(out)
    }

    /// `A(xi_i)(x_1...x_m) = sum_k q^(k-1) t^(m-k) <xi_i | x_k> x_1..^x_k..x_m`.
    pub fn annihilate(&self, i: usize, v: &RVector) -> RVector {
        let mut out = RVector::new();
        for (w, c) in v {
            let m = w.len();
            for k in 1..=m {
                let pairing = self.g.get(i, w[k - 1] as usize);
                if CoeffRing::is_zero(pairing) {
                    continue;
                }
                let weight = num_traits::pow(self.q.clone(), k - 1)
                    * num_traits::pow(self.t.clone(), m - k);
                let mut w2 = w.clone();
                w2.remove(k - 1);
                *out.entry(w2).or_insert_with(<Rational as CoeffRing>::zero) +=
                    c * pairing * weight;
            }
        }
        out.retain(|_, c| !CoeffRing::is_zero(c));
        out
    }

    pub fn unit(&self, w: &Word) -> RVector {
        let mut v = RVector::new();
        v.insert(w.clone(), <Rational as CoeffRing>::one());
        v
    }
}

/// Result of [`check_adjointness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjointnessReport {
    pub pairs_checked: usize,
    /// `(letter, u, v)` where `(A^+ u | v) != (u | A v)`.
    pub failures: Vec<(usize, Vec<u8>, Vec<u8>)>,
}

impl AdjointnessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.pairs_checked > 0
    }
}

/// Checks `(A^+(xi_i) u | v) = (u | A(xi_i) v)` on every pair of basis words
/// with `|u| < n`.
pub fn check_adjointness(
    n: usize,
    g: GramMatrix<Rational>,
    q: Rational,
    t: Rational,
) -> Result<AdjointnessReport, FockError> {
    let space = MultiModeSpace::new(n, g, q, t)?;
    let mut report = AdjointnessReport {
        pairs_checked: 0,
        failures: Vec::new(),
    };
    for i in 0..space.d {
        for u in space.basis().iter().filter(|u| u.len() < n) {
            let ub = space.unit(u);
            let cu = space.create(i, &ub)?;
            for v in space.basis() {
                let vb = space.unit(v);
                let lhs = space.inner(&cu, &vb);
                let rhs = space.inner(&ub, &space.annihilate(i, &vb));
                report.pairs_checked += 1;
                if lhs != rhs {
                    report.failures.push((i, u.clone(), v.clone()));
                }
            }
        }
    }
    Ok(report)
}

/// Determinant by exact Gaussian elimination with row pivoting.
pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = <Rational as CoeffRing>::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !CoeffRing::is_zero(&a[r][col])) else {
            return <Rational as CoeffRing>::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if CoeffRing::is_zero(&a[r][col]) {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let delta = &f * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    det
}

/// Leading principal minors `det(M[..k, ..k])` for `k = 1..=n`.
pub fn leading_principal_minors(m: &[Vec<Rational>]) -> Vec<Rational> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut minors = Vec::with_capacity(n);
    let mut running = <Rational as CoeffRing>::one();
    for k in 0..n {
        let p = a[k][k].clone();
        if CoeffRing::is_zero(&p) {
            // elimination without pivoting breaks down; finish directly
            for j in k..n {
                let sub: Vec<Vec<Rational>> = m[..=j].iter().map(|row| row[..=j].to_vec()).collect();
                minors.push(determinant(&sub));
            }
            return minors;
        }
        running *= &p;
        minors.push(running.clone());
        for r in k + 1..n {
            if CoeffRing::is_zero(&a[r][k]) {
                continue;
            }
            let f = &a[r][k] / &p;
            for c in k..n {
                let delta = &f * &a[k][c];
                a[r][c] -= delta;
            }
        }
    }
    minors
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivityReport {
    pub minors: Vec<Rational>,
}

impl PositivityReport {
    pub fn passed(&self) -> bool {
        use num_traits::Signed;
        !self.minors.is_empty() && self.minors.iter().all(|m| m.is_positive())
    }
}

/// Leading principal minors of the basis-word Gram matrix.
pub fn check_gram_positivity(
    n: usize,
    g: GramMatrix<Rational>,
    q: Rational,
    t: Rational,
) -> Result<PositivityReport, FockError> {
    let space = MultiModeSpace::new(n, g, q, t)?;
    Ok(PositivityReport {
        minors: leading_principal_minors(space.gram()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtnum::qt_factorial;
    use crate::ring::rational;

    fn p(s: &str) -> Polynomial {
        Polynomial::parse(s).unwrap()
    }

    fn w(s: &str) -> OperatorWord {
        s.parse().unwrap()
    }

    #[test]
    fn annihilation_kills_vacuum() {
        let v = FockVector::vacuum(3);
        let out = apply_letter(OperatorLetter::Annihilation, &v, ScalarGauge::Identity).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn number_on_f2() {
        let v = FockVector::basis(3, 2);
        let out = apply_letter(OperatorLetter::Number, &v, ScalarGauge::Identity).unwrap();
        assert_eq!(out, FockVector::basis(3, 2).scale(&p("t + q")));
    }

    #[test]
    fn scalar_gauges() {
        let v = FockVector::basis(3, 2);
        let id = apply_letter(OperatorLetter::Scalar, &v, ScalarGauge::Identity).unwrap();
        assert_eq!(id.coeff(2), &p("lambda"));
        let tp = apply_letter(OperatorLetter::Scalar, &v, ScalarGauge::TPowerN).unwrap();
        assert_eq!(tp.coeff(2), &p("lambda*t^2"));
    }

    #[test]
    fn creation_then_annihilation() {
        let v = FockVector::vacuum(2);
        let c = apply_letter(OperatorLetter::Creation, &v, ScalarGauge::Identity).unwrap();
        let a = apply_letter(OperatorLetter::Annihilation, &c, ScalarGauge::Identity).unwrap();
        assert_eq!(a, FockVector::vacuum(2).scale(&p("lambda")));
        assert_eq!(vacuum_expectation_word(&w("AC"), ScalarGauge::Identity), p("lambda"));
    }

    #[test]
    fn truncation_overflow() {
        let v = FockVector::basis(2, 2);
        assert_eq!(
            apply_letter(OperatorLetter::Creation, &v, ScalarGauge::Identity),
            Err(FockError::TruncationOverflow(2))
        );
    }

    #[test]
    fn word_expectations() {
        assert_eq!(
            vacuum_expectation_word(&w("AASNCC"), ScalarGauge::Identity),
            p("lambda^3*(t + q)^2")
        );
        assert!(vacuum_expectation_word(&w("C"), ScalarGauge::Identity).is_zero());
        assert_eq!(vacuum_expectation_word(&w(""), ScalarGauge::Identity), p("1"));
        assert!(w("AASNCC").is_contributor());
        assert!(!w("N").is_contributor());
        assert!(!w("CA").is_contributor());
        assert_eq!(w("AASNCC").levels(), vec![0, 1, 2, 2, 2, 1, 0]);
        assert!("CX".parse::<OperatorWord>().is_err());
    }

    #[test]
    fn operator_moments() {
        assert_eq!(moment_by_operator(0, ScalarGauge::Identity), p("1"));
        assert_eq!(moment_by_operator(1, ScalarGauge::Identity), p("lambda"));
        assert_eq!(moment_by_operator(2, ScalarGauge::Identity), p("lambda^2 + lambda"));
        assert_eq!(
            moment_by_operator(4, ScalarGauge::TPowerN),
            p("lambda^4 + (3 + t^2 + 2*t)*lambda^3 + (3 + 3*t + q)*lambda^2 + lambda")
        );
    }

    #[test]
    fn operator_moments_match_word_sums() {
        for gauge in [ScalarGauge::Identity, ScalarGauge::TPowerN] {
            for n in 0..=6 {
                assert_eq!(moment_by_operator(n, gauge), moment_by_word_sum(n, gauge), "n = {n}");
            }
        }
    }

    #[test]
    fn nonzero_expectation_iff_contributor() {
        for n in 0..=6 {
            for word in all_words(n) {
                let e = vacuum_expectation_word(&word, ScalarGauge::Identity);
                assert_eq!(!e.is_zero(), word.is_contributor(), "{word}");
            }
        }
    }

    #[test]
    fn number_letter_expansion_at_unit_lambda() {
        let one = Polynomial::one();
        for n in 1..=6 {
            for word in all_words(n).filter(OperatorWord::is_contributor) {
                let expanded = word.expand_number_letters();
                for gauge in [ScalarGauge::Identity, ScalarGauge::TPowerN] {
                    let a = vacuum_expectation_word(&word, gauge).substitute(Var::Lambda, &one);
                    let b = vacuum_expectation_word(&expanded, gauge).substitute(Var::Lambda, &one);
                    assert_eq!(a, b, "{word}");
                }
            }
        }
    }

    #[test]
    fn inner_product_small_cases() {
        let c = GramMatrix::new(vec![vec![p("7")]]).unwrap();
        assert_eq!(qt_inner_product(&c), p("7"));
        let id = GramMatrix::<Polynomial>::identity(2);
        assert_eq!(qt_inner_product(&id), p("t"));
        let ones = GramMatrix::new(vec![vec![p("1"); 2]; 2]).unwrap();
        assert_eq!(qt_inner_product(&ones), p("t + q"));
    }

    #[test]
    fn inner_product_is_factorial_for_all_ones() {
        for n in 0..=7 {
            let ones = GramMatrix::new(vec![vec![Polynomial::one(); n]; n]).unwrap();
            assert_eq!(qt_inner_product(&ones), qt_factorial(n as u32), "n = {n}");
        }
    }

    #[test]
    fn commutation_relation() {
        let symbolic = check_commutation(12, None).unwrap();
        assert!(symbolic.passed());
        assert_eq!(symbolic.levels_checked, 12);
        let r = check_commutation(12, Some((&rational(1, 3), &rational(2, 3)))).unwrap();
        assert!(r.passed());
        let free = check_commutation(6, Some((&rational(0, 1), &rational(1, 1)))).unwrap();
        assert!(free.passed());
        assert_eq!(
            check_commutation(4, Some((&rational(1, 2), &rational(1, 2)))),
            Err(FockError::ParameterRegion)
        );
    }

    #[test]
    fn free_relation_at_q0_t1() {
        // A A^+ = 1 once q = 0 and t = 1
        let qt = QtNumbers::new(6);
        for k in 0..6 {
            let v = FockVector::basis(6, k);
            let out = v.raise().unwrap().lower(&qt);
            let mut asg = Assignment::new();
            asg.insert(Var::Q, rational(0, 1));
            asg.insert(Var::T, rational(1, 1));
            assert_eq!(out.coeff(k).eval(&asg).unwrap(), rational(1, 1));
        }
    }

    #[test]
    fn one_mode_norms_are_factorials() {
        let (q, t) = (rational(1, 3), rational(1, 2));
        let g = GramMatrix::new(vec![vec![rational(1, 1)]]).unwrap();
        let space = MultiModeSpace::new(4, g, q.clone(), t.clone()).unwrap();
        let mut asg = Assignment::new();
        asg.insert(Var::Q, q);
        asg.insert(Var::T, t);
        for (i, word) in space.basis().iter().enumerate() {
            let expected = qt_factorial(word.len() as u32).eval(&asg).unwrap();
            assert_eq!(space.gram()[i][i], expected);
        }
    }

    #[test]
    fn two_mode_adjoint_pair() {
        // orthonormal alphabet: (A^+(x1) x2 | x1 x2) against (x2 | A(x1)(x1 x2))
        let (q, t) = (rational(1, 3), rational(1, 2));
        let space = MultiModeSpace::new(2, GramMatrix::identity(2), q, t.clone()).unwrap();
        let u = space.unit(&vec![1]);
        let v = space.unit(&vec![0, 1]);
        let lhs = space.inner(&space.create(0, &u).unwrap(), &v);
        let rhs = space.inner(&u, &space.annihilate(0, &v));
        // only the identity permutation survives: t^1
        assert_eq!(lhs, t);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn adjointness_exhaustive() {
        let g = GramMatrix::new(vec![
            vec![rational(1, 1), rational(1, 2)],
            vec![rational(1, 2), rational(1, 1)],
        ])
        .unwrap();
        let r = check_adjointness(4, g, rational(1, 3), rational(1, 2)).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        let r = check_adjointness(3, GramMatrix::identity(3), rational(-1, 4), rational(1, 2)).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn multimode_limits() {
        assert!(matches!(
            MultiModeSpace::new(5, GramMatrix::identity(1), rational(0, 1), rational(1, 1)),
            Err(FockError::TooLarge { .. })
        ));
        let asym = GramMatrix::new(vec![
            vec![rational(1, 1), rational(1, 2)],
            vec![rational(0, 1), rational(1, 1)],
        ])
        .unwrap();
        assert!(matches!(
            MultiModeSpace::new(2, asym, rational(0, 1), rational(1, 1)),
            Err(FockError::BadGram(2))
        ));
    }

    #[test]
    fn minors() {
        let m = vec![
            vec![rational(2, 1), rational(1, 1)],
            vec![rational(1, 1), rational(2, 1)],
        ];
        assert_eq!(leading_principal_minors(&m), vec![rational(2, 1), rational(3, 1)]);
        let m = vec![
            vec![rational(0, 1), rational(1, 1)],
            vec![rational(1, 1), rational(0, 1)],
        ];
        assert_eq!(leading_principal_minors(&m), vec![rational(0, 1), rational(-1, 1)]);
        assert_eq!(determinant(&m), rational(-1, 1));
    }

    #[test]
    fn gram_positivity_at_samples() {
        for (q, t) in [(1, 3, 1, 2), (-1, 4, 1, 2), (0, 1, 1, 1), (9, 10, 1, 1)]
            .map(|(a, b, c, d)| (rational(a, b), rational(c, d)))
        {
            let r = check_gram_positivity(4, GramMatrix::identity(2), q.clone(), t.clone()).unwrap();
            assert!(r.passed(), "q = {q}, t = {t}");
        }
    }
}
