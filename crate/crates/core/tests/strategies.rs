mod common;

use cl_core::formula::{f, Term};
use cl_core::game::{Labmove, Signature, Valuation};
use cl_core::strategies::{
    all_closure, bang_closure, compose_mp, transitivity, BangClosure, BuildCtx, CBit, ColoredTree, L5Strategy,
    ShapeError, Shaped, StrategyExpr,
};
use cl_core::suites::{probe, ProbeConfig};
use common::{build, drive};
use proptest::prelude::*;

fn replies(expr: &str, env: &[&str]) -> Vec<Vec<String>> {
    drive(&mut build(expr), env, &Valuation::default())
}

fn v(ms: &[&str]) -> Vec<String> {
    ms.iter().map(|s| s.to_string()).collect()
}

fn small() -> ProbeConfig {
    ProbeConfig { plays: 60, interps: 3, ..ProbeConfig::default() }
}

fn wins(expr: &str, game: &str) {
    let t = probe(expr, &expr.parse().unwrap(), &f(game), &small(), None);
    assert!(t.passed(), "{t}");
}

#[test]
fn ccs_copies_across() {
    assert_eq!(replies("ccs", &["2.a"]), vec![v(&[]), v(&["1.a"])]);
    assert_eq!(replies("ccs", &["1.x", "2.y"]), vec![v(&[]), v(&["2.x"]), v(&["1.y"])]);
    assert_eq!(replies("ccs", &[]), vec![v(&[])]);
}

#[test]
fn l6a_uses_the_root_copy() {
    assert_eq!(replies("l6a", &["2.m", "1..n"]), vec![v(&[]), v(&["1..m"]), v(&["2.n"])]);
    wins("l6a", "!(P & Q) -> P & Q");
}

#[test]
fn l4_rewrites() {
    assert_eq!(replies("l4", &["2.2.:"])[1], v(&["1.:", "2.1.:"]));
    assert_eq!(replies("l4", &["2.2.0.a"])[1], v(&["1.0.2.a"]));
    assert_eq!(replies("l4", &["1.0.1.a"])[1], v(&["2.1.0.a"]));
}

#[test]
fn l4a_broadcasts_replications() {
    assert_eq!(replies("l4a[n=2]", &["2.:"])[1], v(&["1.1.:", "1.2.:"]));
    assert_eq!(replies("l4a[n=2]", &["2.0.2.a"])[1], v(&["1.2.0.a"]));
    assert!(build("l4a[n=1]").id().contains("n=1"));
    assert!("l4a[n=0]".parse::<StrategyExpr>().unwrap().build(&BuildCtx::default()).is_err());
}

#[test]
fn l6c_splits_the_antecedent() {
    let r = replies("l6c", &["2.1..a", "1..b", "2.2.1.c"]);
    assert_eq!(r[0], v(&["1.:"]));
    assert_eq!(r[1], v(&["1.0.a"]));
    assert_eq!(r[2], v(&["2.1..b", "2.2..b"]));
    assert_eq!(r[3], v(&["1.11.c"]));
}

#[test]
fn l6b_cases() {
    let ctx = BuildCtx::new(Signature::of_formula(&f("P /\\ Q /\\ R(x)")));
    let run = |k: &str, env: &[&str], val: &Valuation| {
        let mut s = StrategyExpr::L6b(f(k)).build(&ctx).unwrap();
        drive(&mut s, env, val)
    };
    let val = Valuation::default();
    assert_eq!(run("$", &["2.m"], &val), replies("l6a", &["2.m"]));
    // P, Q and R(1), R(2), ... interleave; R(x) with x = 2 is the fourth grounded atom.
    let mut x2 = Valuation::default();
    x2.set("x", 2);
    let idx = ctx.signature.index_of("R", &[2]).unwrap();
    assert_eq!(run("R(x)", &[], &x2)[0], v(&[&format!("1..{}", idx + 1)]));
    assert_eq!(run("P + Q", &[], &val)[0][0], "2.1");
    assert!(StrategyExpr::L6b(f("~P")).build(&ctx).is_err());
}

#[test]
fn l11_family() {
    assert_eq!(replies("l11a[i=2,n=3]", &[])[0], v(&["1..2"]));
    assert_eq!(replies("l11c[n=2]", &["1..2"])[1], v(&["2.2"]));
    assert_eq!(replies("l11d", &["1..7"])[1], v(&["2.7"]));
    let mut val = Valuation::default();
    val.set("y", 5);
    assert_eq!(drive(&mut build("l11b[t=y]"), &[], &val)[0], v(&["1..5"]));
    assert!("l11a[i=4,n=3]".parse::<StrategyExpr>().unwrap().build(&BuildCtx::default()).is_err());
}

#[test]
fn quantifier_strategies() {
    assert_eq!(replies("oct5a", &["2.2.5"])[1], v(&["1.5", "2.1.5"]));
    assert_eq!(replies("oct5b[t=4]", &["2.a"]), vec![v(&["2.4"]), v(&["1.a"])]);
    let r = replies("oct5c", &["1.a", "1.b", "2.9"]);
    assert!(r[1].is_empty() && r[2].is_empty());
    assert_eq!(r[3], v(&["2.a", "2.b"]));
    assert_eq!(replies("oct99", &["2.a"]), replies("ccs", &["2.a"]));
}

#[test]
fn colored_trees() {
    let b = CBit::blue;
    let y = CBit::yellow;
    assert!(ColoredTree::new().is_valid());
    let ok = ColoredTree::from_branches([vec![], vec![b(0)], vec![b(1)]]).unwrap();
    assert!(ok.is_valid());
    assert!(ColoredTree::from_branches([vec![], vec![b(0)], vec![y(1)]]).map_or(true, |t| !t.is_valid()));
    assert!(ColoredTree::from_branches([vec![], vec![b(0)], vec![y(0)], vec![b(1)], vec![y(1)]])
        .map_or(true, |t| !t.is_valid()));
}

#[test]
fn l5_replicates_and_routes() {
    let mut s: Box<dyn cl_core::epm::Strategy> = Box::new(L5Strategy::new());
    let r = drive(&mut s, &["2.:", "1.0.a"], &Valuation::default());
    assert_eq!(r[1], v(&["1.:"]));
    assert_eq!(r[2], v(&["2.0..a"]));
    let l5 = s.as_any().downcast_ref::<L5Strategy>().unwrap();
    let want = ColoredTree::from_branches([vec![], vec![CBit::blue(0)], vec![CBit::blue(1)]]).unwrap();
    assert_eq!(l5.tree(), &want);
    assert!(!l5.parked());

    let mut s: Box<dyn cl_core::epm::Strategy> = Box::new(L5Strategy::new());
    drive(&mut s, &["3.x"], &Valuation::default());
    assert!(s.as_any().downcast_ref::<L5Strategy>().unwrap().parked());
}

#[test]
fn compose_mp_and_transitivity_shapes() {
    let ccs = |g: &str| Shaped::new(StrategyExpr::Ccs, f(g));
    let id = compose_mp(vec![], ccs("P -> P")).unwrap();
    assert_eq!(id, ccs("P -> P"));

    let l6a = Shaped::new(StrategyExpr::L6a, f("!P -> P"));
    let one = compose_mp(vec![l6a.clone()], ccs("(!P -> P) -> (!P -> P)")).unwrap();
    assert_eq!(one.game, f("!P -> P"));
    wins(&one.expr.to_string(), "!P -> P");

    let t = transitivity(ccs("P -> P"), ccs("P -> P")).unwrap();
    assert_eq!(t.game, f("P -> P"));
    wins(&t.expr.to_string(), "P -> P");
    let chain = transitivity(transitivity(t.clone(), ccs("P -> P")).unwrap(), ccs("P -> P")).unwrap();
    wins(&chain.expr.to_string(), "P -> P");

    assert!(matches!(transitivity(ccs("P -> P"), ccs("Q -> Q")), Err(ShapeError::Mismatch { .. })));
    assert!(matches!(compose_mp(vec![l6a], ccs("P")), Err(ShapeError::NotImplication(_))));
}

#[test]
fn bang_closure_keeps_one_copy_per_leaf() {
    let b = bang_closure(Shaped::new(StrategyExpr::Ccs, f("P -> P")));
    assert_eq!(b.game, f("!(P -> P)"));
    let mut s = build(&b.expr.to_string());
    let r = drive(&mut s, &[".2.a"], &Valuation::default());
    assert_eq!(r[1], v(&[".1.a"]));

    let mut s = build(&b.expr.to_string());
    let r = drive(&mut s, &[".2.a", ":", "0:", "01.2.b"], &Valuation::default());
    assert_eq!(r[4], v(&["01.1.b"]));
    let bc = s.as_any().downcast_ref::<BangClosure>().unwrap();
    assert_eq!(bc.leaves(), vec!["00", "01", "1"]);
    wins(&b.expr.to_string(), "!(P -> P)");
}

#[test]
fn all_closure_overrides_the_valuation() {
    let a = all_closure("y", Shaped::new(StrategyExpr::L11b(Term::var("y")), f("!?x.P(x) -> P(y)")));
    let mut s = build(&a.expr.to_string());
    let r = drive(&mut s, &["5"], &Valuation::default());
    let mut five = Valuation::default();
    five.set("y", 5);
    assert_eq!(r[1], drive(&mut build("l11b[t=y]"), &[], &five)[0]);
    assert!(drive(&mut build(&a.expr.to_string()), &[], &Valuation::default())[0].is_empty());

    let nested = all_closure("x", all_closure("y", Shaped::new(StrategyExpr::Oct5b(f_term("x")), f("P(y) -> P(y)"))));
    let r = drive(&mut build(&nested.expr.to_string()), &["7", "5"], &Valuation::default());
    assert_eq!(r[2], v(&["2.7"]));
}

fn f_term(s: &str) -> Term {
    cl_core::formula::parse_term(s).unwrap()
}

#[test]
fn named_strategies_win_their_games() {
    for (expr, game) in cl_core::suites::named_cases() {
        if matches!(expr, StrategyExpr::L6b(_)) {
            continue;
        }
        let t = probe(&expr.to_string(), &expr, &game, &small(), None);
        assert!(t.passed(), "{t}");
    }
}

#[test]
fn strategies_are_interpretation_blind() {
    let cfg = small();
    for (expr, game) in cl_core::suites::named_cases().into_iter().step_by(3) {
        cl_core::suites::blindness(&expr, &game, &cfg, 5).unwrap_or_else(|e| panic!("{expr}: {e}"));
    }
}

fn expr() -> impl Strategy<Value = StrategyExpr> {
    let leaf = prop_oneof![
        Just(StrategyExpr::Ccs),
        Just(StrategyExpr::L6a),
        Just(StrategyExpr::L5),
        (1usize..4).prop_map(StrategyExpr::L4a),
        (1usize..4).prop_map(|n| StrategyExpr::L11a { i: 1, n }),
        Just(StrategyExpr::L11b(Term::Const(3))),
        Just(StrategyExpr::L6b(f("P & @x.Q(x)"))),
        Just(StrategyExpr::Cl2(f("P -> P"))),
    ];
    leaf.prop_recursive(3, 10, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(StrategyExpr::bang),
            inner.clone().prop_map(|e| StrategyExpr::all("y", e)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| StrategyExpr::trans(a, b)),
            (prop::collection::vec(inner.clone(), 1..3), inner).prop_map(|(ps, c)| StrategyExpr::mp(ps, c)),
        ]
    })
}

proptest! {
    #[test]
    fn expression_text_round_trips(e in expr()) {
        let text = e.to_string();
        prop_assert_eq!(text.parse::<StrategyExpr>().unwrap(), e);
    }
}

#[test]
fn strategy_snapshots_replay_identically() {
    let mut a = build("bang(mp(l6a; ccs))");
    a.observe(&Labmove::env(":"));
    let mut b = a.snapshot();
    let env = ["0.2.a", "1.2.b"];
    assert_eq!(drive(&mut a, &env, &Valuation::default()), drive(&mut b, &env, &Valuation::default()));
}
