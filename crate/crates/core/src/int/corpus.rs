//! A fixed list of small INT derivations covering every rule.

use super::{IntProof, IntRule};
use crate::formula::{parse_sequent, Term};

fn node(seq: &str, rule: IntRule, premises: Vec<IntProof>) -> IntProof {
    let sequent = parse_sequent(seq).unwrap_or_else(|e| panic!("corpus sequent {seq:?}: {e}"));
    IntProof::new(sequent, rule, premises)
}

fn id(seq: &str) -> IntProof {
    node(seq, IntRule::Identity, Vec::new())
}

fn one(seq: &str, rule: IntRule, premise: IntProof) -> IntProof {
    node(seq, rule, vec![premise])
}

fn y() -> Term {
    Term::var("y")
}

/// Named derivations, each valid under [`super::check_proof`].
pub fn curated_theorem_corpus() -> Vec<(&'static str, IntProof)> {
    let mut out = Vec::new();
    out.push(("identity", id("P => P")));
    out.push(("domination", node("$ => P", IntRule::Domination, vec![])));
    out.push(("domination-quantified", node("$ => @x.(P(x) + Q)", IntRule::Domination, vec![])));
    out.push(("right-impl", one("=> !P -> P", IntRule::RightImpl, id("P => P"))));

    let weak = one("P, Q => P", IntRule::Weakening, id("P => P"));
    let k_inner = one("P => !Q -> P", IntRule::RightImpl, weak.clone());
    out.push(("k-combinator", one("=> !P -> (!Q -> P)", IntRule::RightImpl, k_inner)));

    out.push(("left-conj", one("P & Q => P", IntRule::LeftChoiceConj { i: 1, n: 2 }, id("P => P"))));
    let swapped = one("Q, P => P", IntRule::Exchange { pos: 1 }, weak);
    out.push(("left-conj-in-context", one("Q, P & R => P", IntRule::LeftChoiceConj { i: 1, n: 2 }, swapped)));
    out.push(("right-disj", one("P => P + Q", IntRule::RightChoiceDisj { i: 1, n: 2 }, id("P => P"))));

    let pick2 = one("P & Q => Q", IntRule::LeftChoiceConj { i: 2, n: 2 }, id("Q => Q"));
    let pick1 = one("P & Q => P", IntRule::LeftChoiceConj { i: 1, n: 2 }, id("P => P"));
    let comm = node("P & Q => Q & P", IntRule::RightChoiceConj, vec![pick2, pick1]);
    out.push(("conj-commutes", one("=> !(P & Q) -> Q & P", IntRule::RightImpl, comm)));

    out.push((
        "disj-commutes",
        node(
            "P + Q => Q + P",
            IntRule::LeftChoiceDisj,
            vec![
                one("P => Q + P", IntRule::RightChoiceDisj { i: 2, n: 2 }, id("P => P")),
                one("Q => Q + P", IntRule::RightChoiceDisj { i: 1, n: 2 }, id("Q => Q")),
            ],
        ),
    ));

    out.push(("left-all", one("@x.P(x) => P(3)", IntRule::LeftChoiceAll { t: Term::Const(3) }, id("P(3) => P(3)"))));
    out.push(("right-exists", one("P(3) => ?x.P(x)", IntRule::RightChoiceExists { t: Term::Const(3) }, id("P(3) => P(3)"))));

    let mp = node("Q, !Q -> P => P", IntRule::LeftImpl, vec![id("P => P"), id("Q => Q")]);
    out.push(("modus-ponens", mp.clone()));

    let twice = node("Q, Q, !Q -> (!Q -> P) => P", IntRule::LeftImpl, vec![mp, id("Q => Q")]);
    let ex2 = one("Q, !Q -> (!Q -> P), Q => P", IntRule::Exchange { pos: 2 }, twice);
    let ex1 = one("!Q -> (!Q -> P), Q, Q => P", IntRule::Exchange { pos: 1 }, ex2);
    out.push(("contraction", one("!Q -> (!Q -> P), Q => P", IntRule::Contraction, ex1)));
    let pp = one("P, P => P", IntRule::Weakening, id("P => P"));
    out.push(("weaken-contract", one("P => P", IntRule::Contraction, pp)));

    let inst = one("@x.P(x) => P(y)", IntRule::LeftChoiceAll { t: y() }, id("P(y) => P(y)"));
    out.push(("all-rename", one("@x.P(x) => @z.P(z)", IntRule::RightChoiceAll { y: "y".into() }, inst)));
    let body = one("=> !P(y) -> P(y)", IntRule::RightImpl, id("P(y) => P(y)"));
    out.push(("all-closed", one("=> @x.(!P(x) -> P(x))", IntRule::RightChoiceAll { y: "y".into() }, body)));

    let witness = one("P(y) => ?z.P(z)", IntRule::RightChoiceExists { t: y() }, id("P(y) => P(y)"));
    out.push(("exists-rename", one("?x.P(x) => ?z.P(z)", IntRule::LeftChoiceExists { y: "y".into() }, witness.clone())));
    let w = one("P(y), Q => ?z.P(z)", IntRule::Weakening, witness);
    let w = one("Q, P(y) => ?z.P(z)", IntRule::Exchange { pos: 1 }, w);
    out.push(("exists-in-context", one("Q, ?x.P(x) => ?z.P(z)", IntRule::LeftChoiceExists { y: "y".into() }, w)));
    out
}
