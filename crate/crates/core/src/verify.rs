//! The cross-check battery: every route to the moments and every structural
//! identity, each reported as one pass/fail line.

use std::collections::HashMap;
use std::fmt;

use crate::cards::{enumerate_contributors, expand_arrangements, moment_by_cards};
use crate::cfrac::{cf_series, cf_spec, default_depth};
use crate::fock::{
    check_adjointness, check_commutation, check_gram_positivity, moment_sequence_by_operator, qt_inner_product,
    GramMatrix, ScalarGauge,
};
use crate::orthopoly::{
    check_charlier_fock_identity, check_orthogonality, moment_by_motzkin, moment_functional, moment_sequence_by_motzkin,
    poisson_limit_check, three_term_polys, Jacobi, JacobiParams, Specialized,
};
use crate::partitions::{enumerate_partitions, moment_by_partitions, NestingMode};
use crate::qtnum::{qt_factorial, qt_number};
use crate::ring::{rational, Assignment, Polynomial, Rational, Var};

/// Knobs for the battery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Largest moment order compared across the five routes.
    pub n_max: usize,
    /// Largest order for the card route, which is the slowest.
    pub cards_n_max: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_max: 10,
            cards_n_max: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "moment routes agree"),
    (2, "reference moment table"),
    (3, "reference Charlier polynomials"),
    (4, "orthogonality"),
    (5, "Charlier polynomials on the vacuum"),
    (6, "specialisation ladder"),
    (7, "inner-product factorial"),
    (8, "commutation relation"),
    (9, "adjointness"),
    (10, "Gram positivity"),
    (11, "card bijection"),
    (12, "Poisson limit"),
];

fn p(s: &str) -> Polynomial {
    Polynomial::parse(s).expect("literal polynomial")
}

fn point(q: Rational, t: Rational, lambda: Rational) -> Assignment {
    Assignment::from([(Var::Q, q), (Var::T, t), (Var::Lambda, lambda)])
}

fn result(id: u8, passed: bool, detail: impl Into<String>) -> CriterionResult {
    let name = CRITERIA[id as usize - 1].1;
    CriterionResult {
        id,
        name,
        passed,
        detail: detail.into(),
    }
}

/// Runs one criterion by number (1-12).
pub fn run_criterion(id: u8, cfg: &VerifyConfig) -> Option<CriterionResult> {
    Some(match id {
        1 => moment_routes(cfg),
        2 => moment_table(),
        3 => reference_charlier(),
        4 => orthogonality(),
        5 => charlier_on_vacuum(),
        6 => ladder(),
        7 => inner_product_factorial(),
        8 => commutation(),
        9 => adjointness(),
        10 => gram_positivity(),
        11 => card_bijection(cfg),
        12 => poisson_limit(),
        _ => return None,
    })
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .filter_map(|(id, _)| run_criterion(*id, cfg))
        .collect()
}

/// Compares a list of named moment sequences entry by entry.
fn agree(label: &str, routes: &[(&str, &[Polynomial])], upto: usize) -> Vec<String> {
    let (base_name, base) = routes[0];
    let mut bad = Vec::new();
    for (name, seq) in &routes[1..] {
        for n in 1..=upto.min(seq.len().saturating_sub(1)) {
            if seq[n] != base[n] {
                bad.push(format!("{label}: {name} != {base_name} at n={n}"));
            }
        }
    }
    bad
}

fn moment_routes(cfg: &VerifyConfig) -> CriterionResult {
    let n_max = cfg.n_max;
    let mut bad = Vec::new();
    for gauge in [ScalarGauge::Identity, ScalarGauge::TPowerN] {
        let mode = gauge.nesting_mode();
        let jacobi = JacobiParams::charlier_for(gauge);
        let parts: Vec<Polynomial> = (0..=n_max).map(|n| moment_by_partitions(n, mode)).collect();
        let ops = moment_sequence_by_operator(n_max, gauge);
        let cards: Vec<Polynomial> = (0..=cfg.cards_n_max.min(n_max)).map(|n| moment_by_cards(n, gauge)).collect();
        let motzkin = moment_sequence_by_motzkin(&jacobi, n_max);
        let spec = cf_spec(&jacobi, default_depth(n_max)).expect("depth >= 1");
        let cf = cf_series(&spec, n_max).expect("default depth suffices");
        bad.extend(agree(
            mode.name(),
            &[
                ("partitions", &parts),
                ("operator", &ops),
                ("cards", &cards),
                ("motzkin", &motzkin),
                ("cfrac", &cf),
            ],
            n_max,
        ));
    }
    let detail = if bad.is_empty() {
        format!(
            "5 routes, n <= {n_max} (cards n <= {}), both modes",
            cfg.cards_n_max.min(n_max)
        )
    } else {
        bad.join("; ")
    };
    result(1, bad.is_empty(), detail)
}

fn moment_table() -> CriterionResult {
    let strict = |n| moment_by_partitions(n, NestingMode::Strict);
    let covered = |n| moment_by_partitions(n, NestingMode::CoveredSingleton);
    let checks = [
        ("m1 strict", strict(1) == p("lambda")),
        ("m1 covered", covered(1) == p("lambda")),
        ("m2 strict", strict(2) == p("lambda^2 + lambda")),
        ("m2 covered", covered(2) == p("lambda^2 + lambda")),
        ("m3 covered", covered(3) == p("lambda^3 + (2 + t)*lambda^2 + lambda")),
        (
            "m4 covered",
            covered(4) == p("lambda^4 + (3 + t^2 + 2*t)*lambda^3 + (3 + 3*t + q)*lambda^2 + lambda"),
        ),
        ("m3 strict", strict(3) == p("lambda^3 + 3*lambda^2 + lambda")),
        ("modes differ at m3", strict(3) != covered(3)),
    ];
    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    result(
        2,
        failed.is_empty(),
        if failed.is_empty() {
            "m1..m4 match, strict m3 differs from covered m3".into()
        } else {
            format!("mismatch: {}", failed.join(", "))
        },
    )
}

fn reference_charlier() -> CriterionResult {
    let seq = three_term_polys(&JacobiParams::CharlierStrict, 3);
    let reference = [
        p("x - lambda"),
        p("x^2 - (2*lambda + 1)*x + lambda^2"),
        p("x^3 - (3*lambda + t + q + 1)*x^2 + (3*lambda^2 + (t + q)*(lambda + 1) + lambda)*x - lambda^3"),
    ];
    let failed: Vec<usize> = (1..=3).filter(|&k| seq.polys[k] != reference[k - 1]).collect();
    result(
        3,
        failed.is_empty(),
        if failed.is_empty() {
            "C1, C2, C3 reproduced".into()
        } else {
            format!("differs at C{failed:?}")
        },
    )
}

fn orthogonality() -> CriterionResult {
    let mut bad = Vec::new();
    let mut pairs = 0;
    for j in [JacobiParams::CharlierStrict, JacobiParams::CharlierTGauge] {
        let moments = moment_sequence_by_motzkin(&j, 12);
        match check_orthogonality(&j, 6, &moments) {
            Ok(r) => {
                pairs += r.pairs_checked;
                bad.extend(r.failures.iter().map(|(n, m, _, _)| format!("{} ({n},{m})", j.name())));
            }
            Err(e) => bad.push(e.to_string()),
        }
    }
    // the norms are the products of lambda [i]
    let mut norm = Polynomial::one();
    for i in 1..=6u32 {
        norm = &norm * &(&p("lambda") * &qt_number(i));
    }
    let seq = three_term_polys(&JacobiParams::CharlierStrict, 6);
    let moments = moment_sequence_by_motzkin(&JacobiParams::CharlierStrict, 12);
    let top = moment_functional(&(&seq.polys[6] * &seq.polys[6]), &moments);
    if top.as_ref().ok() != Some(&norm) {
        bad.push("norm of C6".into());
    }
    result(
        4,
        bad.is_empty(),
        if bad.is_empty() {
            format!("{pairs} pairings, n, m <= 6, both gauges")
        } else {
            bad.join("; ")
        },
    )
}

fn charlier_on_vacuum() -> CriterionResult {
    let r = check_charlier_fock_identity(8, &[point(rational(1, 3), rational(2, 3), rational(1, 1))]);
    result(
        5,
        r.passed(),
        if r.passed() {
            format!("C_n(p) f0 = lambda^n f_n for n <= {}", r.checked - 1)
        } else {
            format!("fails at n = {:?}", r.failing)
        },
    )
}

fn ladder() -> CriterionResult {
    let at = |q: i64, t: i64| point(rational(q, 1), rational(t, 1), rational(1, 1));
    let seq = |asg: Assignment| {
        let spec = Specialized {
            params: &JacobiParams::CharlierStrict,
            at: asg,
        };
        moment_sequence_by_motzkin(&spec, 6)
    };
    let ints = |v: &[i64]| v.iter().map(|&c| rational(c, 1)).collect::<Vec<_>>();
    // partition route specialised independently of the recurrence
    let eval_parts = |asg: &Assignment| {
        (0..=6)
            .map(|n| moment_by_partitions(n, NestingMode::Strict).eval(asg).expect("all variables set"))
            .collect::<Vec<_>>()
    };
    let catalan = ints(&[1, 1, 2, 5, 14, 42, 132]);
    let bell = ints(&[1, 1, 2, 5, 15, 52, 203]);
    let mut bad = Vec::new();
    if seq(at(0, 1)) != catalan || eval_parts(&at(0, 1)) != catalan {
        bad.push("Catalan");
    }
    if seq(at(1, 1)) != bell || eval_parts(&at(1, 1)) != bell {
        bad.push("Bell");
    }
    let one = Polynomial::one();
    if (0..=8).any(|n| {
        moment_by_partitions(n, NestingMode::Strict).substitute(Var::T, &one)
            != moment_by_motzkin(&JacobiParams::QCharlier, n)
    }) {
        bad.push("q-Charlier");
    }
    result(
        6,
        bad.is_empty(),
        if bad.is_empty() {
            "Catalan, Bell and q-Charlier specialisations".into()
        } else {
            format!("mismatch: {}", bad.join(", "))
        },
    )
}

fn inner_product_factorial() -> CriterionResult {
    let failed: Vec<usize> = (1..=8)
        .filter(|&n| {
            let ones = GramMatrix::new(vec![vec![Polynomial::one(); n]; n]).expect("symmetric");
            qt_inner_product(&ones) != qt_factorial(n as u32)
        })
        .collect();
    result(
        7,
        failed.is_empty(),
        if failed.is_empty() {
            "sum over S_n equals [n]! for n <= 8".into()
        } else {
            format!("fails at n = {failed:?}")
        },
    )
}

fn commutation() -> CriterionResult {
    let q = Polynomial::var(Var::Q);
    let t = Polynomial::var(Var::T);
    let scalar_ok = (0..=12u32).all(|k| &qt_number(k + 1) - &(&q * &qt_number(k)) == t.pow(k));
    match check_commutation(13, None) {
        Ok(r) if r.passed() && scalar_ok => result(8, true, "(AA+ - qA+A) f_k = t^k f_k for k <= 12"),
        Ok(r) => result(8, false, format!("failing levels {:?}, scalar identity {scalar_ok}", r.failing_levels)),
        Err(e) => result(8, false, e.to_string()),
    }
}

fn gram2() -> GramMatrix<Rational> {
    GramMatrix::new(vec![
        vec![rational(1, 1), rational(1, 2)],
        vec![rational(1, 2), rational(1, 1)],
    ])
    .expect("symmetric")
}

fn adjointness() -> CriterionResult {
    let mut bad = Vec::new();
    let mut pairs = 0;
    for (q, t) in [(rational(1, 3), rational(1, 2)), (rational(-1, 4), rational(1, 2))] {
        for g in [GramMatrix::identity(1), GramMatrix::identity(2), gram2()] {
            match check_adjointness(4, g, q.clone(), t.clone()) {
                Ok(r) => {
                    pairs += r.pairs_checked;
                    if !r.passed() {
                        bad.push(format!("q={q} t={t}: {} failures", r.failures.len()));
                    }
                }
                Err(e) => bad.push(e.to_string()),
            }
        }
    }
    result(
        9,
        bad.is_empty(),
        if bad.is_empty() {
            format!("{pairs} basis pairs, d <= 2, n <= 4")
        } else {
            bad.join("; ")
        },
    )
}

fn gram_positivity() -> CriterionResult {
    let samples = [(1, 3, 1, 2), (-1, 4, 1, 2), (0, 1, 1, 1), (9, 10, 1, 1)];
    let mut bad = Vec::new();
    for (a, b, c, d) in samples {
        let (q, t) = (rational(a, b), rational(c, d));
        for g in [GramMatrix::identity(1), GramMatrix::identity(2), gram2()] {
            let size = g.size();
            match check_gram_positivity(4, g, q.clone(), t.clone()) {
                Ok(r) if r.passed() => {}
                Ok(_) => bad.push(format!("q={q} t={t} d={size}")),
                Err(e) => bad.push(e.to_string()),
            }
        }
    }
    result(
        10,
        bad.is_empty(),
        if bad.is_empty() {
            "all leading minors positive at 4 samples".into()
        } else {
            bad.join("; ")
        },
    )
}

fn card_bijection(cfg: &VerifyConfig) -> CriterionResult {
    let upto = cfg.n_max.min(7);
    let mut bad = Vec::new();
    for gauge in [ScalarGauge::Identity, ScalarGauge::TPowerN] {
        let mode = gauge.nesting_mode();
        for n in 1..=upto {
            let mut seen: HashMap<_, usize> = HashMap::new();
            for w in enumerate_contributors(n) {
                for a in expand_arrangements(&w, gauge).expect("contributor") {
                    if a.weight != Polynomial::term(1, a.partition.stats().weight(mode)) {
                        bad.push(format!("{} weight at {}", mode.name(), a.partition));
                    }
                    *seen.entry(a.partition).or_default() += 1;
                }
            }
            let all: Vec<_> = enumerate_partitions(n).collect();
            if seen.len() != all.len() || all.iter().any(|p| seen.get(p) != Some(&1)) {
                bad.push(format!("{} not a bijection at n={n}", mode.name()));
            }
        }
    }
    result(
        11,
        bad.is_empty(),
        if bad.is_empty() {
            format!("arrangements hit P(n) once each, n <= {upto}, both gauges")
        } else {
            bad.join("; ")
        },
    )
}

fn poisson_limit() -> CriterionResult {
    match poisson_limit_check(6, &rational(1, 1), &rational(1, 3), &rational(2, 3), &[10, 100, 1000]) {
        Ok(r) => result(
            12,
            r.passed(),
            format!(
                "symbolic limits {}, deviations {}",
                if r.symbolic_ok { "ok" } else { "wrong" },
                if r.strictly_decreasing() {
                    "strictly decreasing"
                } else {
                    "not decreasing"
                }
            ),
        ),
        Err(e) => result(12, false, e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_battery_passes() {
        let cfg = VerifyConfig {
            n_max: 6,
            cards_n_max: 6,
        };
        for r in run_all(&cfg) {
            assert!(r.passed, "{r}");
        }
        assert!(run_criterion(13, &cfg).is_none());
    }
}
