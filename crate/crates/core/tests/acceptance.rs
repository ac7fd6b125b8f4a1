//! One PASS/FAIL line per acceptance criterion. Win rates must be exactly 100% and every
//! check below has zero tolerance for violations; runtimes are bounded per criterion.

mod common;

use cl_core::cl2::{check_cl2_proof, prove, ProveConfig, Rule, Schema};
use cl_core::formula::f;
use cl_core::suites::{cl2_schemata, colored_prefix_check, corpus_suite, named_suite, ProbeConfig, Tally};
use std::time::{Duration, Instant};

struct Outcome {
    ok: bool,
    detail: String,
}

fn summarize(tallies: &[Tally]) -> Outcome {
    let plays: usize = tallies.iter().map(|t| t.plays).sum();
    let wins: usize = tallies.iter().map(|t| t.wins).sum();
    let leaves: usize = tallies.iter().map(|t| t.leaves).sum();
    let bad: Vec<String> = tallies.iter().filter(|t| !t.passed()).map(|t| t.to_string()).collect();
    let mut detail = format!("{} games, {wins}/{plays} random wins, {leaves} exhaustive branches", tallies.len());
    if let Some(first) = bad.first() {
        detail.push_str(&format!("; {} failing, first: {first}", bad.len()));
    }
    Outcome { ok: bad.is_empty() && plays > 0, detail }
}

fn c1() -> Outcome {
    let cfg = ProveConfig::default();
    let mut notes = Vec::new();
    let mut ok = true;
    match prove(&f("(P -> Q) /\\ (Q -> T) -> (P -> T)"), &cfg) {
        Ok(Some(p)) => {
            let shape = p.steps.len() == 4 && p.rule_counts() == (1, 0, 3) && matches!(p.steps[0].rule, Rule::A);
            ok &= shape && check_cl2_proof(&p).is_ok();
            notes.push(format!("transitivity: {} steps {:?}", p.steps.len(), p.rule_counts()));
        }
        other => {
            ok = false;
            notes.push(format!("transitivity: {other:?}"));
        }
    }
    let mut choice = 0;
    for m in 1..=2 {
        for s in [Schema::H { r: m, n: 2 }, Schema::J { r: m, n: 2, i: 1 }, Schema::J { r: m, n: 2, i: 2 }] {
            let g = s.formula().expect("in range");
            match prove(&g, &cfg) {
                Ok(Some(p)) if check_cl2_proof(&p).is_ok() && p.conclusion() == Some(&g) => choice += 1,
                other => {
                    ok = false;
                    notes.push(format!("{s}: {other:?}"));
                }
            }
        }
    }
    notes.push(format!("{choice}/6 h/j instances"));
    let contraction = prove(&f("P -> P /\\ P"), &cfg);
    ok &= contraction == Ok(None);
    notes.push(format!("P -> P /\\ P unprovable: {}", contraction == Ok(None)));
    Outcome { ok, detail: notes.join(", ") }
}

fn c2() -> Outcome {
    summarize(&cl2_schemata(&ProbeConfig::default()))
}

fn c3_and_4() -> (Outcome, Outcome) {
    let cfg = ProbeConfig { plays: 500, ..ProbeConfig::default() };
    let tallies = named_suite(&cfg);
    let o3 = summarize(&tallies);
    let prefix = colored_prefix_check(4, cfg.exec);
    let l5: Vec<&Tally> = tallies.iter().filter(|t| t.name == "l5").collect();
    let audits: usize = l5.iter().map(|t| t.audits).sum();
    let ok = prefix.violations == 0 && prefix.trees > 0 && !l5.is_empty() && audits > 0 && l5.iter().all(|t| t.passed());
    let o4 = Outcome {
        ok,
        detail: format!(
            "{} colored trees, {} branch pairs, {} violations; {} l5 plays, {audits} audited iterations",
            prefix.trees,
            prefix.pairs,
            prefix.violations,
            l5.iter().map(|t| t.plays).sum::<usize>()
        ),
    };
    (o3, o4)
}

fn c5() -> Outcome {
    let cfg = ProbeConfig { plays: 1000, interps: 10, ..ProbeConfig::default() };
    let report = corpus_suite(&cfg);
    let mut o = summarize(&report.tallies);
    o.ok &= report.passed() && report.tallies.len() >= 10;
    o.detail = format!("{} rules covered, {}", report.rules.len(), o.detail);
    o
}

fn c6() -> Outcome {
    let c = common::oracle_campaign(1);
    let mut detail = format!(
        "{} formulas, {} cases, {} probes, {} disagreements",
        c.formulas,
        c.cases,
        c.probes,
        c.disagreements.len()
    );
    if let Some(d) = c.disagreements.first() {
        detail.push_str(&format!("; first: {d}"));
    }
    Outcome { ok: c.cases >= 1000 && c.disagreements.is_empty(), detail }
}

fn c7() -> Outcome {
    let ex = common::micro_examples();
    let failed: Vec<&str> = ex.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    Outcome {
        ok: failed.is_empty(),
        detail: if failed.is_empty() { format!("{} examples", ex.len()) } else { format!("failed: {}", failed.join(", ")) },
    }
}

fn report(n: u32, name: &str, limit: Duration, run: impl FnOnce() -> Outcome) -> bool {
    let t0 = Instant::now();
    let o = run();
    line(n, name, limit, t0.elapsed(), o)
}

fn line(n: u32, name: &str, limit: Duration, took: Duration, o: Outcome) -> bool {
    let ok = o.ok && took <= limit;
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("{verdict} {n} {name} ({:.2}s, limit {}s): {}", took.as_secs_f64(), limit.as_secs(), o.detail);
    ok
}

fn main() {
    let s = Duration::from_secs;
    let mut ok = true;
    ok &= report(1, "cl2 reproduction", s(5), c1);
    ok &= report(2, "cl2 schemata", s(600), c2);
    let t0 = Instant::now();
    let (o3, o4) = c3_and_4();
    let took = t0.elapsed();
    ok &= line(3, "named strategies", s(600), took, o3);
    ok &= line(4, "colored-tree invariants", s(600), took, o4);
    ok &= report(5, "compiled corpus", s(1200), c5);
    ok &= report(6, "evaluator oracle", s(120), c6);
    ok &= report(7, "worked examples", s(5), c7);
    if !ok {
        std::process::exit(1);
    }
}
