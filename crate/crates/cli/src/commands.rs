use rayon::prelude::*;
use serde_json::{json, Value};

use qtmoments::cards::{enumerate_contributors, expand_arrangements, moment_by_cards, CardArrangement};
use qtmoments::cfrac::{cf_series, cf_spec, default_depth};
use qtmoments::fock::{moment_by_operator, OperatorWord};
use qtmoments::orthopoly::{
    moment_by_motzkin, moment_sequence_by_motzkin, poisson_limit_check, three_term_polys, BinomialParams,
    JacobiParams,
};
use qtmoments::partitions::{enumerate_partitions, moment_by_partitions};
use qtmoments::ring::Assignment;
use qtmoments::verify::{run_criterion, VerifyConfig, CRITERIA};
use qtmoments::{NestingMode, Polynomial, Rational, ScalarGauge, Var};

use crate::args::*;

pub const SCHEMA: &str = "qtmoments/1";

/// Largest n per route that finishes in reasonable time.
const PARTITIONS_N_MAX: usize = 12;
const CARDS_N_MAX: usize = 10;
const RECURRENCE_N_MAX: usize = 60;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed(String),
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Moments(a) => moments(a),
        Command::Partitions(a) => partitions(a),
        Command::Charlier(a) => charlier(a),
        Command::Cards(a) => cards(a),
        Command::Cfrac(a) => cfrac(a),
        Command::Binomial(a) => binomial(a),
        Command::Verify(a) => verify(a),
    }
}

fn resolve(mg: &ModeGauge) -> Result<(NestingMode, ScalarGauge), CliError> {
    match (mg.mode.map(NestingMode::from), mg.gauge.map(ScalarGauge::from)) {
        (None, None) => Ok((NestingMode::Strict, ScalarGauge::Identity)),
        (Some(m), None) => Ok((m, ScalarGauge::for_mode(m))),
        (None, Some(g)) => Ok((g.nesting_mode(), g)),
        (Some(m), Some(g)) if g.nesting_mode() == m => Ok((m, g)),
        (Some(m), Some(g)) if mg.allow_mismatch => {
            eprintln!(
                "warning: mode {} does not match gauge {}; routes will disagree",
                m.name(),
                g.name()
            );
            Ok((m, g))
        }
        (Some(m), Some(g)) => Err(usage(format!(
            "mode {} pairs with gauge {}, not {} (pass --allow-mismatch to force)",
            m.name(),
            ScalarGauge::for_mode(m).name(),
            g.name()
        ))),
    }
}

fn resolve_point(p: &Point) -> Result<Option<Assignment>, CliError> {
    match (&p.q, &p.t, &p.lambda) {
        (None, None, None) => Ok(None),
        (Some(q), Some(t), Some(l)) => Ok(Some(Assignment::from([
            (Var::Q, q.clone()),
            (Var::T, t.clone()),
            (Var::Lambda, l.clone()),
        ]))),
        _ => Err(usage("--q, --t and --lambda must be given together")),
    }
}

fn canonical(p: &Polynomial) -> String {
    p.canonical_string().expect("moments are free of s")
}

fn family(f: Family) -> JacobiParams {
    match f {
        Family::Strict => JacobiParams::CharlierStrict,
        Family::Tgauge => JacobiParams::CharlierTGauge,
        Family::Qcharlier => JacobiParams::QCharlier,
        Family::Ejsmont => JacobiParams::Ejsmont,
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("serialisable"));
}

fn moments(a: &MomentsArgs) -> Result<u8, CliError> {
    let (mode, gauge) = resolve(&a.mode_gauge)?;
    let point = resolve_point(&a.point)?;
    let n = a.n;
    let methods: Vec<Method> = match a.method {
        Method::All => vec![
            Method::Partitions,
            Method::Operator,
            Method::Cards,
            Method::Motzkin,
            Method::Cfrac,
        ],
        m => vec![m],
    };
    for m in &methods {
        let limit = match m {
            Method::Partitions => PARTITIONS_N_MAX,
            Method::Cards => CARDS_N_MAX,
            _ => RECURRENCE_N_MAX,
        };
        if n > limit {
            return Err(usage(format!("n = {n} is above the limit {limit} for method {}", method_name(*m))));
        }
    }
    let jacobi = JacobiParams::charlier_for(gauge);
    let results: Vec<(&str, Polynomial)> = methods
        .iter()
        .map(|&m| {
            let value = match m {
                Method::Partitions => moment_by_partitions(n, mode),
                Method::Operator => moment_by_operator(n, gauge),
                Method::Cards => moment_by_cards(n, gauge),
                Method::Motzkin => moment_by_motzkin(&jacobi, n),
                Method::Cfrac => {
                    let spec = cf_spec(&jacobi, default_depth(n)).expect("depth >= 1");
                    cf_series(&spec, n).expect("default depth suffices").pop().expect("non-empty")
                }
                Method::All => unreachable!(),
            };
            (method_name(m), value)
        })
        .collect();
    let agree = results.windows(2).all(|w| w[0].1 == w[1].1);
    let moment = &results[0].1;
    let value = match &point {
        Some(at) => Some(moment.eval(at).map_err(|e| usage(e.to_string()))?),
        None => None,
    };
    let show = |r: &Option<Rational>| r.as_ref().map(|v| v.to_string());
    match a.output {
        Output::Json => print_json(&json!({
            "schema": SCHEMA,
            "command": "moments",
            "n": n,
            "mode": mode.name(),
            "gauge": gauge.name(),
            "methods": results.iter().map(|(name, p)| json!({"method": name, "moment": canonical(p)})).collect::<Vec<_>>(),
            "agree": agree,
            "moment": canonical(moment),
            "terms": moment.to_json(),
            "point": point.as_ref().map(|_| json!({
                "q": show(&a.point.q), "t": show(&a.point.t), "lambda": show(&a.point.lambda)
            })),
            "value": show(&value),
        })),
        Output::Csv => {
            println!("n,q,t,lambda,moment");
            let cell = |r: &Option<Rational>| show(r).unwrap_or_default();
            let m = value.as_ref().map(|v| v.to_string()).unwrap_or_else(|| canonical(moment));
            println!("{n},{},{},{},{m}", cell(&a.point.q), cell(&a.point.t), cell(&a.point.lambda));
        }
        Output::Pretty => {
            println!("m_{n}  mode={}  gauge={}", mode.name(), gauge.name());
            for (name, p) in &results {
                println!("{name:>10}: {}", canonical(p));
            }
            if let Some(v) = &value {
                println!("{:>10}: {v}", "value");
            }
            println!("{}", canonical(moment));
        }
    }
    if agree {
        Ok(0)
    } else {
        Err(CliError::Failed("moment routes disagree".into()))
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Partitions => "partitions",
        Method::Operator => "operator",
        Method::Cards => "cards",
        Method::Motzkin => "motzkin",
        Method::Cfrac => "cfrac",
        Method::All => "all",
    }
}

fn partitions(a: &PartitionsArgs) -> Result<u8, CliError> {
    if a.n > PARTITIONS_N_MAX {
        return Err(usage(format!("n = {} is above the limit {PARTITIONS_N_MAX}", a.n)));
    }
    let mode = NestingMode::from(a.mode);
    if a.output == Output::Csv {
        println!("rgs,blocks,rc,rn,weight");
    }
    for p in enumerate_partitions(a.n) {
        let stats = p.stats();
        let weight = canonical(&Polynomial::term(1, stats.weight(mode)));
        let rgs: String = p.rgs().iter().map(|b| b.to_string()).collect();
        match a.output {
            Output::Json => {
                let rec = p.record();
                print_json(&json!({
                    "rgs": rec.rgs,
                    "blocks": p.blocks(),
                    "rc": rec.rc,
                    "rn_strict": rec.rn_strict,
                    "rn_covered": rec.rn_covered,
                    "weight": weight,
                }));
            }
            Output::Csv => println!("{rgs},{},{},{},{weight}", stats.blocks, stats.rc, stats.rn(mode)),
            Output::Pretty => println!("{p}  rc={} rn={}  {weight}", stats.rc, stats.rn(mode)),
        }
    }
    Ok(0)
}

fn charlier(a: &CharlierArgs) -> Result<u8, CliError> {
    if a.n_max > RECURRENCE_N_MAX {
        return Err(usage(format!("n-max is limited to {RECURRENCE_N_MAX}")));
    }
    let j = family(a.family);
    let seq = three_term_polys(&j, a.n_max);
    let polys: Vec<String> = seq.polys.iter().map(canonical).collect();
    match a.output {
        Output::Json => print_json(&json!({
            "schema": SCHEMA,
            "command": "charlier",
            "family": seq.name,
            "polys": polys,
        })),
        Output::Csv => {
            println!("n,poly");
            for (k, p) in polys.iter().enumerate() {
                println!("{k},{p}");
            }
        }
        Output::Pretty => {
            for (k, p) in seq.polys.iter().enumerate() {
                println!("P_{k}(x) = {}", in_powers_of_x(p));
            }
        }
    }
    Ok(0)
}

/// `x^3 - (3*lambda + 1)*x^2 + ...`, highest power of `x` first.
fn in_powers_of_x(p: &Polynomial) -> String {
    let mut out = String::new();
    for (d, c) in p.coefficients_in(Var::X).iter().rev() {
        let (neg, c) = if canonical(c).starts_with('-') {
            (true, -c)
        } else {
            (false, c.clone())
        };
        let body = canonical(&c);
        let coeff = if c.len() > 1 { format!("({body})") } else { body };
        let xs = match d {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{d}"),
        };
        let term = match (coeff.as_str(), xs.is_empty()) {
            (_, true) => coeff.clone(),
            ("1", false) => xs,
            (_, false) => format!("{coeff}*{xs}"),
        };
        let sep = match (out.is_empty(), neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        out.push_str(sep);
        out.push_str(&term);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn cards(a: &CardsArgs) -> Result<u8, CliError> {
    let (_, gauge) = resolve(&a.mode_gauge)?;
    let words: Vec<OperatorWord> = match (&a.word, a.n) {
        (Some(w), _) => vec![w.parse().map_err(|e: qtmoments::fock::FockError| usage(e.to_string()))?],
        (None, Some(n)) if n > CARDS_N_MAX => {
            return Err(usage(format!("n = {n} is above the limit {CARDS_N_MAX}")))
        }
        (None, Some(n)) => enumerate_contributors(n),
        (None, None) => return Err(usage("give --n or --word")),
    };
    let expanded: Vec<Vec<CardArrangement>> = words
        .par_iter()
        .map(|w| expand_arrangements(w, gauge))
        .collect::<Result<_, _>>()
        .map_err(|e| usage(e.to_string()))?;
    if a.output == Output::Csv {
        println!("word,cards,weight,partition");
    }
    let mut total = Polynomial::zero();
    for arr in expanded.iter().flatten() {
        total += &arr.weight;
        let rec = arr.record();
        match a.output {
            Output::Json => print_json(&serde_json::to_value(&rec).expect("serialisable")),
            Output::Csv => println!("{},{},{},{}", rec.word, rec.cards.join(" "), rec.weight, arr.partition),
            Output::Pretty => println!("{}  {}  {}  {}", rec.word, rec.cards.join(" "), rec.weight, arr.partition),
        }
    }
    if a.output == Output::Pretty {
        println!("total: {}", canonical(&total));
    }
    Ok(0)
}

fn cfrac(a: &CfracArgs) -> Result<u8, CliError> {
    if a.order > RECURRENCE_N_MAX {
        return Err(usage(format!("order is limited to {RECURRENCE_N_MAX}")));
    }
    let j = family(a.family);
    let depth = a.depth.unwrap_or_else(|| default_depth(a.order));
    let spec = cf_spec(&j, depth).map_err(|e| usage(e.to_string()))?;
    let series = cf_series(&spec, a.order).map_err(|e| usage(e.to_string()))?;
    let coeffs: Vec<String> = series.iter().map(canonical).collect();
    match a.output {
        Output::Json => print_json(&json!({
            "schema": SCHEMA,
            "command": "cfrac",
            "family": family_name(a.family),
            "depth": depth,
            "b": spec.b.iter().map(canonical).collect::<Vec<_>>(),
            "lam": spec.lam.iter().map(canonical).collect::<Vec<_>>(),
            "layout": spec.render(),
            "series": coeffs,
        })),
        Output::Csv => {
            println!("n,moment");
            for (k, c) in coeffs.iter().enumerate() {
                println!("{k},{c}");
            }
        }
        Output::Pretty => {
            print!("{}", spec.render_nested());
            for (k, c) in coeffs.iter().enumerate() {
                println!("z^{k}: {c}");
            }
        }
    }
    Ok(0)
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Strict => "charlier-strict",
        Family::Tgauge => "charlier-tgauge",
        Family::Qcharlier => "q-charlier",
        Family::Ejsmont => "ejsmont",
    }
}

fn binomial(a: &BinomialArgs) -> Result<u8, CliError> {
    if a.n > RECURRENCE_N_MAX {
        return Err(usage(format!("n is limited to {RECURRENCE_N_MAX}")));
    }
    if a.poisson_limit {
        let lambda = a.lambda.as_ref().expect("clap enforces --lambda");
        let report = poisson_limit_check(a.n, lambda, &a.q, &a.t, &[10, 100, 1000])
            .map_err(|e| usage(e.to_string()))?;
        let rows: Vec<(u64, Vec<String>)> = report
            .m_values
            .iter()
            .zip(&report.deviations)
            .map(|(m, d)| (*m, d.iter().map(|r| r.to_string()).collect()))
            .collect();
        match a.output {
            Output::Json => print_json(&json!({
                "schema": SCHEMA,
                "command": "binomial",
                "poisson_limit": {
                    "symbolic_ok": report.symbolic_ok,
                    "strictly_decreasing": report.strictly_decreasing(),
                    "deviations": rows.iter().map(|(m, d)| json!({"m": m, "orders_from_2": d})).collect::<Vec<_>>(),
                }
            })),
            Output::Csv => {
                println!("m,n,deviation");
                for (m, d) in &rows {
                    for (k, v) in d.iter().enumerate() {
                        println!("{m},{},{v}", k + 2);
                    }
                }
            }
            Output::Pretty => {
                println!("symbolic limits: {}", if report.symbolic_ok { "ok" } else { "wrong" });
                for (m, d) in &rows {
                    println!("m={m:<5} {}", d.join("  "));
                }
                println!(
                    "deviations {}",
                    if report.strictly_decreasing() { "strictly decrease" } else { "do not decrease" }
                );
            }
        }
        return if report.passed() {
            Ok(0)
        } else {
            Err(CliError::Failed("Poisson limit check failed".into()))
        };
    }
    let (m, p) = (a.m.expect("clap enforces --m"), a.p.clone().expect("clap enforces --p"));
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    if p < zero || p > one {
        return Err(usage("p must lie in [0, 1]"));
    }
    let params = BinomialParams {
        m,
        p,
        q: a.q.clone(),
        t: a.t.clone(),
    };
    let moments: Vec<String> = moment_sequence_by_motzkin(&params, a.n).iter().map(|r| r.to_string()).collect();
    match a.output {
        Output::Json => print_json(&json!({
            "schema": SCHEMA,
            "command": "binomial",
            "m": m,
            "p": params.p.to_string(),
            "q": a.q.to_string(),
            "t": a.t.to_string(),
            "moments": moments,
        })),
        Output::Csv => {
            println!("n,moment");
            for (k, v) in moments.iter().enumerate() {
                println!("{k},{v}");
            }
        }
        Output::Pretty => {
            for (k, v) in moments.iter().enumerate() {
                println!("m_{k} = {v}");
            }
        }
    }
    Ok(0)
}

fn parse_suite(s: &str) -> Result<Vec<u8>, CliError> {
    if s == "all" {
        return Ok(CRITERIA.iter().map(|(id, _)| *id).collect());
    }
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<u8>()
                .ok()
                .filter(|id| (1..=CRITERIA.len() as u8).contains(id))
                .ok_or_else(|| usage(format!("unknown criterion {part:?}")))
        })
        .collect()
}

fn verify(a: &VerifyArgs) -> Result<u8, CliError> {
    let ids = parse_suite(&a.suite)?;
    if a.n_max == 0 || a.n_max > PARTITIONS_N_MAX {
        return Err(usage(format!("n-max must be in 1..={PARTITIONS_N_MAX}")));
    }
    if a.cards_n_max > CARDS_N_MAX {
        return Err(usage(format!("cards-n-max is limited to {CARDS_N_MAX}")));
    }
    let cfg = VerifyConfig {
        n_max: a.n_max,
        cards_n_max: a.cards_n_max,
    };
    let results: Vec<_> = ids.iter().filter_map(|&id| run_criterion(id, &cfg)).collect();
    let passed = results.iter().filter(|r| r.passed).count();
    match a.output {
        Output::Json => print_json(&json!({
            "schema": SCHEMA,
            "command": "verify",
            "passed": passed == results.len(),
            "results": results.iter().map(|r| json!({
                "id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail
            })).collect::<Vec<_>>(),
        })),
        Output::Csv => {
            println!("id,name,passed");
            for r in &results {
                println!("{},{},{}", r.id, r.name, r.passed);
            }
        }
        Output::Pretty => {
            for r in &results {
                println!("{r}");
            }
            println!("{passed}/{} criteria passed", results.len());
        }
    }
    if passed == results.len() {
        Ok(0)
    } else {
        Err(CliError::Failed(format!("{} criteria failed", results.len() - passed)))
    }
}
