//! The intuitionistic sequent calculus INT: rule checking and compilation of
//! derivations into strategies.

mod compile;
mod corpus;
mod json;

pub use compile::{compile, CompileError};
pub use corpus::curated_theorem_corpus;
pub use json::{proof_from_json, proof_to_json, ProofFileError};

use crate::formula::{is_free_for, Formula, Sequent, Term};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// One of the fifteen rules, with the side data it needs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IntRule {
    Identity,
    Domination,
    /// Swaps context items `pos` and `pos + 1` (1-based).
    Exchange { pos: usize },
    Weakening,
    Contraction,
    RightImpl,
    LeftImpl,
    RightChoiceConj,
    LeftChoiceConj { i: usize, n: usize },
    RightChoiceDisj { i: usize, n: usize },
    LeftChoiceDisj,
    RightChoiceAll { y: String },
    LeftChoiceAll { t: Term },
    RightChoiceExists { t: Term },
    LeftChoiceExists { y: String },
}

impl IntRule {
    pub const NAMES: [&'static str; 15] = [
        "Identity",
        "Domination",
        "Exchange",
        "Weakening",
        "Contraction",
        "RightImpl",
        "LeftImpl",
        "RightChoiceConj",
        "LeftChoiceConj",
        "RightChoiceDisj",
        "LeftChoiceDisj",
        "RightChoiceAll",
        "LeftChoiceAll",
        "RightChoiceExists",
        "LeftChoiceExists",
    ];

    pub fn name(&self) -> &'static str {
        let k = match self {
            IntRule::Identity => 0,
            IntRule::Domination => 1,
            IntRule::Exchange { .. } => 2,
            IntRule::Weakening => 3,
            IntRule::Contraction => 4,
            IntRule::RightImpl => 5,
            IntRule::LeftImpl => 6,
            IntRule::RightChoiceConj => 7,
            IntRule::LeftChoiceConj { .. } => 8,
            IntRule::RightChoiceDisj { .. } => 9,
            IntRule::LeftChoiceDisj => 10,
            IntRule::RightChoiceAll { .. } => 11,
            IntRule::LeftChoiceAll { .. } => 12,
            IntRule::RightChoiceExists { .. } => 13,
            IntRule::LeftChoiceExists { .. } => 14,
        };
        IntRule::NAMES[k]
    }
}

impl fmt::Display for IntRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        match self {
            IntRule::Exchange { pos } => write!(f, "[pos={pos}]"),
            IntRule::LeftChoiceConj { i, n } | IntRule::RightChoiceDisj { i, n } => write!(f, "[i={i},n={n}]"),
            IntRule::RightChoiceAll { y } | IntRule::LeftChoiceExists { y } => write!(f, "[y={y}]"),
            IntRule::LeftChoiceAll { t } | IntRule::RightChoiceExists { t } => write!(f, "[t={t}]"),
            _ => Ok(()),
        }
    }
}

/// A derivation tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntProof {
    pub sequent: Sequent,
    pub rule: IntRule,
    pub premises: Vec<IntProof>,
}

impl IntProof {
    pub fn new(sequent: Sequent, rule: IntRule, premises: Vec<IntProof>) -> Self {
        IntProof { sequent, rule, premises }
    }

    pub fn leaf(sequent: Sequent, rule: IntRule) -> Self {
        IntProof::new(sequent, rule, Vec::new())
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(|p| p.size()).sum::<usize>()
    }

    /// Names of the rules used anywhere in the tree.
    pub fn rules_used(&self) -> BTreeSet<&'static str> {
        let mut out = BTreeSet::new();
        self.visit(&mut |p| {
            out.insert(p.rule.name());
        });
        out
    }

    fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a IntProof)) {
        f(self);
        for p in &self.premises {
            p.visit(f);
        }
    }
}

/// The first node failing its rule, addressed by premise indices from the root (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("node {} ({sequent}): {reason}", path_text(.path))]
pub struct BadNode {
    pub path: Vec<usize>,
    pub sequent: String,
    pub reason: String,
}

fn path_text(p: &[usize]) -> String {
    if p.is_empty() {
        "root".into()
    } else {
        p.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(".")
    }
}

type Check = Result<(), String>;

fn need(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same(what: &str, want: &Formula, got: &Formula) -> Check {
    need(want == got, || format!("{what}: expected {want}, got {got}"))
}

fn same_seq(what: &str, want: &[Formula], got: &[Formula]) -> Check {
    let show = |v: &[Formula]| v.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ");
    need(want == got, || format!("{what}: expected [{}], got [{}]", show(want), show(got)))
}

fn premises_count(p: &IntProof, n: usize) -> Check {
    need(p.premises.len() == n, || format!("{} takes {n} premise(s), got {}", p.rule.name(), p.premises.len()))
}

/// Split off the last context item.
fn last(ctx: &[Formula]) -> Result<(&[Formula], &Formula), String> {
    ctx.split_last().map(|(l, rest)| (rest, l)).ok_or_else(|| "context must not be empty".to_string())
}

fn fresh(y: &str, s: &Sequent) -> Check {
    need(!s.all_vars().contains(y), || format!("eigenvariable {y} occurs in the conclusion"))
}

/// Check one node against its rule and its immediate premises.
pub fn check_rule(p: &IntProof) -> Check {
    let s = &p.sequent;
    need(s.is_int(), || "not an INT sequent".into())?;
    for q in &p.premises {
        need(q.sequent.is_int(), || format!("premise {} is not an INT sequent", q.sequent))?;
    }
    let k = &s.succedent;
    let ctx = &s.context[..];
    let prem = |i: usize| &p.premises[i].sequent;
    match &p.rule {
        IntRule::Identity => {
            premises_count(p, 0)?;
            need(ctx.len() == 1, || "Identity needs exactly one context formula".into())?;
            same("Identity", &ctx[0], k)
        }
        IntRule::Domination => {
            premises_count(p, 0)?;
            need(ctx == [Formula::Dollar], || "Domination needs the context $".into())
        }
        IntRule::Exchange { pos } => {
            premises_count(p, 1)?;
            let pos = *pos;
            need(pos >= 1 && pos < ctx.len(), || format!("exchange position {pos} out of range"))?;
            let mut want = prem(0).context.clone();
            need(want.len() == ctx.len(), || "Exchange keeps the context length".into())?;
            want.swap(pos - 1, pos);
            same_seq("context", &want, ctx)?;
            same("succedent", &prem(0).succedent, k)
        }
        IntRule::Weakening => {
            premises_count(p, 1)?;
            let (rest, _) = last(ctx)?;
            same_seq("context", &prem(0).context, rest)?;
            same("succedent", &prem(0).succedent, k)
        }
        IntRule::Contraction => {
            premises_count(p, 1)?;
            let (rest, f) = last(ctx)?;
            let mut want = rest.to_vec();
            want.push(f.clone());
            want.push(f.clone());
            same_seq("premise context", &want, &prem(0).context)?;
            same("succedent", &prem(0).succedent, k)
        }
        IntRule::RightImpl => {
            premises_count(p, 1)?;
            let Formula::Implies(a, kk) = k else { return Err("succedent must be F o- K".into()) };
            let Formula::Bang(f) = a.as_ref() else { return Err("succedent must be F o- K".into()) };
            let mut want = ctx.to_vec();
            want.push((**f).clone());
            same_seq("premise context", &want, &prem(0).context)?;
            same("premise succedent", kk, &prem(0).succedent)
        }
        IntRule::LeftImpl => {
            premises_count(p, 2)?;
            let (g, f) = last(&prem(0).context)?;
            let h = &prem(1).context;
            let mut want = g.to_vec();
            want.extend(h.iter().cloned());
            want.push(Formula::int_impl(prem(1).succedent.clone(), f.clone()));
            same_seq("context", &want, ctx)?;
            same("succedent", &prem(0).succedent, k)
        }
        IntRule::RightChoiceConj => {
            let Formula::ChoiceConj(ks) = k else { return Err("succedent must be a choice conjunction".into()) };
            premises_count(p, ks.len())?;
            for (j, kj) in ks.iter().enumerate() {
                same_seq("premise context", ctx, &prem(j).context)?;
                same(&format!("premise {} succedent", j + 1), kj, &prem(j).succedent)?;
            }
            Ok(())
        }
        IntRule::LeftChoiceConj { i, n } => {
            premises_count(p, 1)?;
            let (g, last_f) = last(ctx)?;
            let Formula::ChoiceConj(fs) = last_f else { return Err("principal must be a choice conjunction".into()) };
            index_in_range(*i, *n, fs.len())?;
            let mut want = g.to_vec();
            want.push(fs[i - 1].clone());
            same_seq("premise context", &want, &prem(0).context)?;
            same("succedent", &prem(0).succedent, k)
        }
        IntRule::RightChoiceDisj { i, n } => {
            premises_count(p, 1)?;
            let Formula::ChoiceDisj(ks) = k else { return Err("succedent must be a choice disjunction".into()) };
            index_in_range(*i, *n, ks.len())?;
            same_seq("premise context", ctx, &prem(0).context)?;
            same("premise succedent", &ks[i - 1], &prem(0).succedent)
        }
        IntRule::LeftChoiceDisj => {
            let (g, last_f) = last(ctx)?;
            let Formula::ChoiceDisj(fs) = last_f else { return Err("principal must be a choice disjunction".into()) };
            premises_count(p, fs.len())?;
            for (j, fj) in fs.iter().enumerate() {
                let mut want = g.to_vec();
                want.push(fj.clone());
                same_seq(&format!("premise {} context", j + 1), &want, &prem(j).context)?;
                same("succedent", &prem(j).succedent, k)?;
            }
            Ok(())
        }
        IntRule::RightChoiceAll { y } => {
            premises_count(p, 1)?;
            let Formula::ChoiceAll(x, body) = k else { return Err("succedent must be @x K(x)".into()) };
            fresh(y, s)?;
            same_seq("premise context", ctx, &prem(0).context)?;
            same("premise succedent", &body.subst1(x, Term::var(y)), &prem(0).succedent)
        }
        IntRule::LeftChoiceAll { t } => {
            premises_count(p, 1)?;
            let (g, last_f) = last(ctx)?;
            let Formula::ChoiceAll(x, body) = last_f else { return Err("principal must be @x F(x)".into()) };
            need(is_free_for(t, x, body), || format!("{t} is not free for {x} in {body}"))?;
            let mut want = g.to_vec();
            want.push(body.subst1(x, t.clone()));
            same_seq("premise context", &want, &prem(0).context)?;
            same("succedent", &prem(0).succedent, k)
        }
        IntRule::RightChoiceExists { t } => {
            premises_count(p, 1)?;
            let Formula::ChoiceExists(x, body) = k else { return Err("succedent must be ?x K(x)".into()) };
            need(is_free_for(t, x, body), || format!("{t} is not free for {x} in {body}"))?;
            same_seq("premise context", ctx, &prem(0).context)?;
            same("premise succedent", &body.subst1(x, t.clone()), &prem(0).succedent)
        }
        IntRule::LeftChoiceExists { y } => {
            premises_count(p, 1)?;
            let (g, last_f) = last(ctx)?;
            let Formula::ChoiceExists(x, body) = last_f else { return Err("principal must be ?x F(x)".into()) };
            fresh(y, s)?;
            let mut want = g.to_vec();
            want.push(body.subst1(x, Term::var(y)));
            same_seq("premise context", &want, &prem(0).context)?;
            same("succedent", &prem(0).succedent, k)
        }
    }
}

fn index_in_range(i: usize, n: usize, len: usize) -> Check {
    need(n >= 2, || format!("n must be at least 2, got {n}"))?;
    need(n == len, || format!("n={n} but the principal formula has {len} components"))?;
    need(i >= 1 && i <= n, || format!("index i={i} out of range 1..={n}"))
}

/// Check every node, reporting the first bad one in preorder.
pub fn check_proof(p: &IntProof) -> Result<(), BadNode> {
    fn go(p: &IntProof, path: &mut Vec<usize>) -> Result<(), BadNode> {
        check_rule(p).map_err(|reason| BadNode { path: path.clone(), sequent: p.sequent.to_string(), reason })?;
        for (k, q) in p.premises.iter().enumerate() {
            path.push(k);
            go(q, path)?;
            path.pop();
        }
        Ok(())
    }
    go(p, &mut Vec::new())
}
