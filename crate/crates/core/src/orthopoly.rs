//! Monic three-term recurrences over the polynomial ring, the moment
//! sequences they determine, and the checks tying them to the Fock model.
//!
//! A family is given by Jacobi parameters `(alpha_n, omega_n)`:
//!
//! ```text
//! P_0 = 1,  P_1 = x - alpha_0,
//! P_{n+1} = (x - alpha_n) P_n - omega_n P_{n-1}
//! ```
//!
//! Its moments are weighted Motzkin path sums (level step at height `h`
//! weighs `alpha_h`, down step from `h` weighs `omega_h`), equivalently the
//! series coefficients of the J-fraction
//! `1 / (1 - alpha_0 z - omega_1 z^2 / (1 - alpha_1 z - ...))`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;
use thiserror::Error;

use crate::fock::{apply_polynomial, FockVector, ScalarGauge};
use crate::qtnum::qt_number;
use crate::ring::{Assignment, CoeffRing, Monomial, Polynomial, Rational, Var};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrthoError {
    #[error("moment functional needs moments up to degree {needed}, got {have}")]
    InsufficientMoments { needed: usize, have: usize },
    #[error("parameter limit has a positive power of m")]
    DivergentLimit,
    #[error("Poisson limit needs m > lambda (m = {0})")]
    MTooSmall(u64),
}

/// Source of Jacobi parameters over a coefficient ring.
pub trait Jacobi<R> {
    fn alpha(&self, n: usize) -> R;
    /// Defined for `n >= 1`.
    fn omega(&self, n: usize) -> R;
    fn name(&self) -> String;
}

/// Symbolic presets. Coefficients are polynomials in `q, t, lambda`.
#[derive(Debug, Clone, PartialEq)]
pub enum JacobiParams {
    /// `alpha_n = lambda + [n]`, `omega_n = lambda [n]`.
    CharlierStrict,
    /// `alpha_n = lambda t^n + [n]`, `omega_n = lambda [n]`; pairs with the
    /// covered-singleton nesting convention.
    CharlierTGauge,
    /// The `t = 1` specialisation: `alpha_n = lambda + [n]_q`, `omega_n = lambda [n]_q`.
    QCharlier,
    /// `alpha_n = [n]`, `omega_n = [n]`.
    Ejsmont,
    /// Explicit finite tables; entries past the end are zero.
    Custom {
        name: String,
        alpha: Vec<Polynomial>,
        /// `omega[0]` is `omega_1`.
        omega: Vec<Polynomial>,
    },
}

fn lambda() -> Polynomial {
    Polynomial::var(Var::Lambda)
}

fn q_number(n: usize) -> Polynomial {
    (0..n as u32).map(|k| Polynomial::var(Var::Q).pow(k)).sum()
}

impl Jacobi<Polynomial> for JacobiParams {
    fn alpha(&self, n: usize) -> Polynomial {
        let qn = qt_number(n as u32);
        match self {
            JacobiParams::CharlierStrict => &lambda() + &qn,
            JacobiParams::CharlierTGauge => {
                let lt = Polynomial::term(1, Monomial::from_exponents([(Var::Lambda, 1), (Var::T, n as u32)]));
                &lt + &qn
            }
            JacobiParams::QCharlier => &lambda() + &q_number(n),
            JacobiParams::Ejsmont => qn,
            JacobiParams::Custom { alpha, .. } => alpha.get(n).cloned().unwrap_or_default(),
        }
    }

    fn omega(&self, n: usize) -> Polynomial {
        match self {
            JacobiParams::CharlierStrict | JacobiParams::CharlierTGauge => &lambda() * &qt_number(n as u32),
            JacobiParams::QCharlier => &lambda() * &q_number(n),
            JacobiParams::Ejsmont => qt_number(n as u32),
            JacobiParams::Custom { omega, .. } => {
                n.checked_sub(1).and_then(|i| omega.get(i)).cloned().unwrap_or_default()
            }
        }
    }

    fn name(&self) -> String {
        match self {
            JacobiParams::CharlierStrict => "charlier-strict".into(),
            JacobiParams::CharlierTGauge => "charlier-tgauge".into(),
            JacobiParams::QCharlier => "q-charlier".into(),
            JacobiParams::Ejsmont => "ejsmont".into(),
            JacobiParams::Custom { name, .. } => name.clone(),
        }
    }
}

impl JacobiParams {
    /// The Charlier preset whose moments match the given gauge.
    pub fn charlier_for(gauge: ScalarGauge) -> Self {
        match gauge {
            ScalarGauge::Identity => JacobiParams::CharlierStrict,
            ScalarGauge::TPowerN => JacobiParams::CharlierTGauge,
        }
    }
}

/// A symbolic preset evaluated at a rational point.
#[derive(Debug, Clone)]
pub struct Specialized<'a, J> {
    pub params: &'a J,
    pub at: Assignment,
}

impl<'a, J: Jacobi<Polynomial>> Jacobi<Rational> for Specialized<'a, J> {
    fn alpha(&self, n: usize) -> Rational {
        self.params.alpha(n).eval(&self.at).expect("assignment covers q, t, lambda")
    }

    fn omega(&self, n: usize) -> Rational {
        self.params.omega(n).eval(&self.at).expect("assignment covers q, t, lambda")
    }

    fn name(&self) -> String {
        format!("{}@point", self.params.name())
    }
}

/// The (q,t)-binomial family at a rational point:
/// `alpha_n = mp + (1 - 2p)[n]`, `omega_n = [n](m - [n-1]) p (1 - p)`,
/// with `omega_n = 0` once `[n-1] >= m`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinomialParams {
    pub m: u64,
    pub p: Rational,
    pub q: Rational,
    pub t: Rational,
}

impl BinomialParams {
    fn bracket(&self, n: usize) -> Rational {
        let mut asg = Assignment::new();
        asg.insert(Var::Q, self.q.clone());
        asg.insert(Var::T, self.t.clone());
        qt_number(n as u32).eval(&asg).expect("q and t assigned")
    }

    fn m_rational(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.m))
    }
}

impl Jacobi<Rational> for BinomialParams {
    fn alpha(&self, n: usize) -> Rational {
        let one = <Rational as CoeffRing>::one();
        let two = <Rational as CoeffRing>::from_i64(2);
        self.m_rational() * &self.p + (one - two * &self.p) * self.bracket(n)
    }

    fn omega(&self, n: usize) -> Rational {
        let prev = self.bracket(n - 1);
        let m = self.m_rational();
        if prev >= m {
            return <Rational as CoeffRing>::zero();
        }
        let one = <Rational as CoeffRing>::one();
        self.bracket(n) * (m - prev) * &self.p * (one - &self.p)
    }

    fn name(&self) -> String {
        format!("binomial(m={}, p={})", self.m, self.p)
    }
}

/// Monic orthogonal polynomials `P_0..P_{n_max}` in the variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoPolySequence {
    pub name: String,
    pub polys: Vec<Polynomial>,
}

pub fn three_term_polys<J: Jacobi<Polynomial>>(j: &J, n_max: usize) -> OrthoPolySequence {
    let x = Polynomial::var(Var::X);
    let mut polys = vec![Polynomial::one()];
    if n_max >= 1 {
        polys.push(&x - &j.alpha(0));
    }
    for n in 1..n_max {
        let next = &(&(&x - &j.alpha(n)) * &polys[n]) - &(&j.omega(n) * &polys[n - 1]);
        polys.push(next);
    }
    OrthoPolySequence {
        name: j.name(),
        polys,
    }
}

/// `m_0..m_n` by dynamic programming over Motzkin path heights.
pub fn moment_sequence_by_motzkin<R: CoeffRing, J: Jacobi<R>>(j: &J, n: usize) -> Vec<R> {
    let top = n / 2 + 1;
    let alpha: Vec<R> = (0..=top).map(|h| j.alpha(h)).collect();
    let omega: Vec<R> = (0..=top + 1).map(|h| if h == 0 { R::zero() } else { j.omega(h) }).collect();
    // weight[h] = total weight of partial paths currently at height h
    let mut weight = vec![R::zero(); top + 2];
    weight[0] = R::one();
    let mut out = vec![R::one()];
    for step in 1..=n {
        let remaining = n - step;
        let reach = (step.min(remaining)).min(top);
        let mut next = vec![R::zero(); top + 2];
        for (h, slot) in next.iter_mut().enumerate().take(reach + 1) {
            let mut acc = weight[h].mul(&alpha[h]);
            if h > 0 {
                acc = acc.add(&weight[h - 1]);
            }
            if h < top {
                acc = acc.add(&weight[h + 1].mul(&omega[h + 1]));
            }
            *slot = acc;
        }
        weight = next;
        out.push(weight[0].clone());
    }
    out
}

/// Weighted Motzkin path sum of length `n`.
pub fn moment_by_motzkin<R: CoeffRing, J: Jacobi<R>>(j: &J, n: usize) -> R {
    moment_sequence_by_motzkin(j, n).pop().expect("non-empty")
}

/// The linear functional `x^k -> moments[k]`.
pub fn moment_functional(p: &Polynomial, moments: &[Polynomial]) -> Result<Polynomial, OrthoError> {
    let by_degree = p.coefficients_in(Var::X);
    let needed = by_degree.keys().next_back().copied().unwrap_or(0) as usize;
    if needed >= moments.len() {
        return Err(OrthoError::InsufficientMoments {
            needed,
            have: moments.len().saturating_sub(1),
        });
    }
    Ok(by_degree
        .iter()
        .map(|(&k, c)| c * &moments[k as usize])
        .sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalityReport {
    pub pairs_checked: usize,
    /// `(n, m, expected, actual)`.
    pub failures: Vec<(usize, usize, Polynomial, Polynomial)>,
}

impl OrthogonalityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `L(P_n P_m) = delta_{nm} omega_1 ... omega_n` for `n, m <= n_max`.
pub fn check_orthogonality<J: Jacobi<Polynomial>>(
    j: &J,
    n_max: usize,
    moments: &[Polynomial],
) -> Result<OrthogonalityReport, OrthoError> {
    let seq = three_term_polys(j, n_max);
    let mut norms = vec![Polynomial::one()];
    for i in 1..=n_max {
        norms.push(&norms[i - 1] * &j.omega(i));
    }
    let mut report = OrthogonalityReport {
        pairs_checked: 0,
        failures: Vec::new(),
    };
    for n in 0..=n_max {
        for m in 0..=n_max {
            let value = moment_functional(&(&seq.polys[n] * &seq.polys[m]), moments)?;
            let expected = if n == m { norms[n].clone() } else { Polynomial::zero() };
            report.pairs_checked += 1;
            if value != expected {
                report.failures.push((n, m, expected, value));
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharlierFockReport {
    pub checked: usize,
    pub failing: Vec<usize>,
}

impl CharlierFockReport {
    pub fn passed(&self) -> bool {
        self.failing.is_empty()
    }
}

/// Verifies `C_n(p) f_0 = lambda^n f_n` for `n <= n_max` in the identity
/// gauge, symbolically and at the supplied rational samples.
pub fn check_charlier_fock_identity(n_max: usize, samples: &[Assignment]) -> CharlierFockReport {
    let dim = n_max + 1;
    let seq = three_term_polys(&JacobiParams::CharlierStrict, n_max);
    let vacuum = FockVector::vacuum(dim);
    let mut failing = Vec::new();
    for (n, c) in seq.polys.iter().enumerate() {
        let got = apply_polynomial(c, &vacuum, ScalarGauge::Identity).expect("dimension n_max+1");
        let expected = FockVector::basis(dim, n).scale(&lambda().pow(n as u32));
        let mut ok = got == expected;
        for at in samples {
            ok &= got
                .coeffs()
                .iter()
                .zip(expected.coeffs())
                .all(|(a, b)| a.eval(at).ok() == b.eval(at).ok());
        }
        if !ok {
            failing.push(n);
        }
    }
    CharlierFockReport {
        checked: n_max + 1,
        failing,
    }
}

/// Laurent polynomial in `m` with polynomial coefficients, used to take the
/// limit `m -> infinity` with `p = lambda / m`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentInM {
    pub coeffs: BTreeMap<i32, Polynomial>,
}

impl LaurentInM {
    pub fn constant(p: Polynomial) -> Self {
        Self::monomial(0, p)
    }

    pub fn monomial(power: i32, p: Polynomial) -> Self {
        let mut coeffs = BTreeMap::new();
        if !p.is_zero() {
            coeffs.insert(power, p);
        }
        LaurentInM { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            let slot = out.coeffs.entry(*k).or_default();
            *slot += c;
            if slot.is_zero() {
                out.coeffs.remove(k);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentInM {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentInM::default();
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &other.coeffs {
                out = out.add(&LaurentInM::monomial(ka + kb, ca * cb));
            }
        }
        out
    }

    /// The `m^0` coefficient, provided no positive power of `m` survives.
    pub fn limit(&self) -> Result<Polynomial, OrthoError> {
        if self.coeffs.keys().any(|&k| k > 0) {
            return Err(OrthoError::DivergentLimit);
        }
        Ok(self.coeffs.get(&0).cloned().unwrap_or_default())
    }
}

/// Binomial Jacobi parameters `(alpha_n, omega_n)` with `p = lambda / m`,
/// as Laurent polynomials in `m`.
pub fn binomial_params_in_m(n: usize) -> (LaurentInM, LaurentInM) {
    let one = LaurentInM::constant(Polynomial::one());
    let m = LaurentInM::monomial(1, Polynomial::one());
    let p = LaurentInM::monomial(-1, lambda());
    let two_p = p.mul(&LaurentInM::constant(Polynomial::constant(2)));
    let bracket = LaurentInM::constant(qt_number(n as u32));
    let prev = LaurentInM::constant(qt_number(n.saturating_sub(1) as u32));
    let alpha = m.mul(&p).add(&one.add(&two_p.neg()).mul(&bracket));
    let omega = bracket
        .mul(&m.add(&prev.neg()))
        .mul(&p)
        .mul(&one.add(&p.neg()));
    (alpha, omega)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonLimitReport {
    /// Symbolic `m -> infinity` limits agree with the Charlier parameters for every checked index.
    pub symbolic_ok: bool,
    /// `deviations[i][k-2] = |binomial m_k - Charlier m_k|` at `m_values[i]`,
    /// for orders `k >= 2`. Order 1 is `mp = lambda` for every `m`.
    pub m_values: Vec<u64>,
    pub deviations: Vec<Vec<Rational>>,
}

impl PoissonLimitReport {
    /// Deviation at each moment order strictly decreases along `m_values`.
    pub fn strictly_decreasing(&self) -> bool {
        self.deviations
            .windows(2)
            .all(|w| w[0].iter().zip(&w[1]).all(|(a, b)| b < a))
    }

    pub fn passed(&self) -> bool {
        self.symbolic_ok && self.strictly_decreasing()
    }
}

/// Compares binomial moments at `p = lambda / m` with Charlier moments at
/// the point `(q, t, lambda)`, for orders `2..=n` and each `m`.
pub fn poisson_limit_check(
    n: usize,
    lambda_value: &Rational,
    q: &Rational,
    t: &Rational,
    m_values: &[u64],
) -> Result<PoissonLimitReport, OrthoError> {
    let mut symbolic_ok = true;
    for k in 0..=n {
        let (alpha, omega) = binomial_params_in_m(k);
        symbolic_ok &= alpha.limit()? == JacobiParams::CharlierStrict.alpha(k);
        if k >= 1 {
            symbolic_ok &= omega.limit()? == JacobiParams::CharlierStrict.omega(k);
        }
    }
    let mut at = Assignment::new();
    at.insert(Var::Q, q.clone());
    at.insert(Var::T, t.clone());
    at.insert(Var::Lambda, lambda_value.clone());
    let poisson = moment_sequence_by_motzkin(
        &Specialized {
            params: &JacobiParams::CharlierStrict,
            at,
        },
        n,
    );
    let mut deviations = Vec::new();
    for &m in m_values {
        if Rational::from_integer(BigInt::from(m)) <= *lambda_value {
            return Err(OrthoError::MTooSmall(m));
        }
        let params = BinomialParams {
            m,
            p: lambda_value / Rational::from_integer(BigInt::from(m)),
            q: q.clone(),
            t: t.clone(),
        };
        let binom = moment_sequence_by_motzkin(&params, n);
        debug_assert_eq!(binom.get(1), poisson.get(1));
        deviations.push((2..=n).map(|k| (&binom[k] - &poisson[k]).abs()).collect());
    }
    Ok(PoissonLimitReport {
        symbolic_ok,
        m_values: m_values.to_vec(),
        deviations,
    })
}

/// `1 / (1 - g)` as a truncated series; `g[0]` must be zero.
fn inverse_one_minus<R: CoeffRing>(g: &[R], order: usize) -> Vec<R> {
    debug_assert!(g.first().map(|c| c.is_zero()).unwrap_or(true));
    let mut h = vec![R::one()];
    for n in 1..=order {
        let mut acc = R::zero();
        for k in 1..=n.min(g.len().saturating_sub(1)) {
            if !g[k].is_zero() {
                acc = acc.add(&g[k].mul(&h[n - k]));
            }
        }
        h.push(acc);
    }
    h
}

/// Series coefficients `z^0..z^order` of the finite J-fraction with level
/// weights `b[0..=D]` and down weights `lam[0..D]` (`lam[0]` is `omega_1`),
/// evaluated bottom-up.
pub fn jfraction_series_from<R: CoeffRing>(b: &[R], lam: &[R], order: usize) -> Vec<R> {
    assert!(!b.is_empty() && lam.len() + 1 >= b.len());
    let depth = b.len() - 1;
    // the tail at level k sits under k factors of z^2, so it is only
    // needed to order `order - 2k`
    let need = |k: usize| order.saturating_sub(2 * k);
    let mut g = vec![R::zero(); need(depth) + 1];
    if g.len() > 1 {
        g[1] = b[depth].clone();
    }
    let mut tail = inverse_one_minus(&g, need(depth));
    for k in (0..depth).rev() {
        let len = need(k);
        let mut g = vec![R::zero(); len + 1];
        if len >= 1 {
            g[1] = b[k].clone();
        }
        for i in 2..=len {
            if let Some(c) = tail.get(i - 2) {
                g[i] = g[i].add(&lam[k].mul(c));
            }
        }
        tail = inverse_one_minus(&g, len);
    }
    tail
}

/// J-fraction series of a Jacobi family up to `z^order`.
pub fn jfraction_series<R: CoeffRing, J: Jacobi<R>>(j: &J, order: usize) -> Vec<R> {
    let depth = order.div_ceil(2) + 1;
    let b: Vec<R> = (0..=depth).map(|k| j.alpha(k)).collect();
    let lam: Vec<R> = (1..=depth).map(|k| j.omega(k)).collect();
    jfraction_series_from(&b, &lam, order)
}
