//! The propositional logic CL2: elementarization, stability, proofs, and strategies
//! extracted from proofs of general-base formulas.
//!
//! CL2 formulas reuse [`Formula`]: nullary atoms starting with a lowercase letter are
//! elementary, uppercase ones are general. Occurrences are addressed by paths of 1-based
//! child indices.

mod extract;
mod proof;
mod prove;
mod schemata;

pub use extract::{strategy_for, Cl2Strategy};
pub use proof::{check_cl2_proof, Cl2Proof, ProofCheckError, Rule, Step};
pub use prove::{prove, ProveConfig};
pub use schemata::Schema;

use crate::formula::Formula;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Cl2Error {
    #[error("not a CL2 formula: {0}")]
    NotCl2(String),
    #[error("no subformula at path {0}")]
    BadPath(String),
    #[error("search budget of {0} goals exhausted")]
    Budget(usize),
    #[error("not provable: {0}")]
    Unprovable(String),
    #[error("not general-base: {0}")]
    NotGeneralBase(String),
    #[error("proof file line {line}: {msg}")]
    ProofSyntax { line: usize, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

pub fn is_elementary_atom(f: &Formula) -> bool {
    matches!(f, Formula::Atom(n, a) if a.is_empty() && n.starts_with(|c: char| c.is_ascii_lowercase()))
}

pub fn is_general_atom(f: &Formula) -> bool {
    matches!(f, Formula::Atom(n, a) if a.is_empty() && n.starts_with(|c: char| c.is_ascii_uppercase()))
}

/// Built only from nullary atoms, ⊤, ⊥, ¬, ∧, ∨, →, ⊓, ⊔.
pub fn is_cl2(f: &Formula) -> bool {
    match f {
        Formula::Atom(_, a) => a.is_empty(),
        Formula::Top | Formula::Bot => true,
        Formula::Dollar | Formula::Bang(_) | Formula::ChoiceAll(..) | Formula::ChoiceExists(..) => false,
        _ => f.children().iter().all(|c| is_cl2(c)),
    }
}

/// No elementary atoms, ⊤ or ⊥.
pub fn is_general_base(f: &Formula) -> bool {
    let mut ok = is_cl2(f);
    f.walk(&mut |g| {
        if is_elementary_atom(g) || matches!(g, Formula::Top | Formula::Bot) {
            ok = false;
        }
    });
    ok
}

/// Polarity of the occurrence at `path` and whether it is a surface occurrence.
pub fn polarity_and_surface(f: &Formula, path: &[usize]) -> Result<(Polarity, bool), Cl2Error> {
    let bad = || Cl2Error::BadPath(path_to_string(path));
    let mut pol = Polarity::Positive;
    let mut surface = true;
    let mut cur = f;
    for &i in path {
        match cur {
            Formula::Neg(_) => pol = pol.flip(),
            Formula::Implies(..) if i == 1 => pol = pol.flip(),
            Formula::ChoiceConj(_) | Formula::ChoiceDisj(_) => surface = false,
            _ => {}
        }
        cur = *cur.children().get(i.checked_sub(1).ok_or_else(bad)?).ok_or_else(bad)?;
    }
    Ok((pol, surface))
}

/// The move prefix addressing the surface occurrence at `path`.
pub fn move_prefix(f: &Formula, path: &[usize]) -> String {
    let mut out = String::new();
    let mut cur = f;
    for &i in path {
        match cur {
            Formula::ParConj(_) | Formula::ParDisj(_) | Formula::Implies(..) => out.push_str(&format!("{i}.")),
            _ => {}
        }
        match cur.children().get(i - 1) {
            Some(c) => cur = c,
            None => break,
        }
    }
    out
}

/// Paths of all surface occurrences satisfying `pred`, with their polarities, in preorder.
pub fn surface_occurrences(f: &Formula, pred: &dyn Fn(&Formula) -> bool) -> Vec<(Vec<usize>, Polarity)> {
    fn go(
        f: &Formula,
        pol: Polarity,
        path: &mut Vec<usize>,
        pred: &dyn Fn(&Formula) -> bool,
        out: &mut Vec<(Vec<usize>, Polarity)>,
    ) {
        if pred(f) {
            out.push((path.clone(), pol));
        }
        let flip_first = matches!(f, Formula::Implies(..));
        match f {
            Formula::ChoiceConj(_) | Formula::ChoiceDisj(_) => {}
            Formula::Neg(a) => {
                path.push(1);
                go(a, pol.flip(), path, pred, out);
                path.pop();
            }
            _ => {
                for (k, c) in f.children().into_iter().enumerate() {
                    path.push(k + 1);
                    let p = if flip_first && k == 0 { pol.flip() } else { pol };
                    go(c, p, path, pred, out);
                    path.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(f, Polarity::Positive, &mut Vec::new(), pred, &mut out);
    out
}

/// Replace surface choices and surface general atoms by ⊤/⊥.
pub fn elementarization(f: &Formula) -> Formula {
    fn go(f: &Formula, pol: Polarity) -> Formula {
        match f {
            Formula::ChoiceConj(_) => Formula::Top,
            Formula::ChoiceDisj(_) => Formula::Bot,
            g if is_general_atom(g) => match pol {
                Polarity::Positive => Formula::Bot,
                Polarity::Negative => Formula::Top,
            },
            Formula::Neg(a) => Formula::neg(go(a, pol.flip())),
            Formula::Implies(a, b) => Formula::implies(go(a, pol.flip()), go(b, pol)),
            Formula::ParConj(v) => Formula::ParConj(v.iter().map(|c| go(c, pol)).collect()),
            Formula::ParDisj(v) => Formula::ParDisj(v.iter().map(|c| go(c, pol)).collect()),
            other => other.clone(),
        }
    }
    go(f, Polarity::Positive)
}

fn elementary_atoms(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    f.walk(&mut |g| {
        if let Formula::Atom(n, _) = g {
            if is_elementary_atom(g) {
                out.insert(n.clone());
            }
        }
    });
    out
}

fn eval_classical(f: &Formula, truth: &dyn Fn(&str) -> bool) -> bool {
    match f {
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Atom(n, _) => truth(n),
        Formula::Neg(a) => !eval_classical(a, truth),
        Formula::ParConj(v) => v.iter().all(|c| eval_classical(c, truth)),
        Formula::ParDisj(v) => v.iter().any(|c| eval_classical(c, truth)),
        Formula::Implies(a, b) => !eval_classical(a, truth) || eval_classical(b, truth),
        _ => false,
    }
}

/// Is the elementarization a classical tautology?
pub fn is_stable(f: &Formula) -> bool {
    let e = elementarization(f);
    let atoms: Vec<String> = elementary_atoms(&e).into_iter().collect();
    assert!(atoms.len() < 24, "too many elementary atoms for a truth table");
    (0u32..1 << atoms.len()).all(|mask| {
        eval_classical(&e, &|n| atoms.iter().position(|a| a == n).is_some_and(|k| mask >> k & 1 == 1))
    })
}

/// The premises demanded by rule (a): one per environment choice and alternative.
pub fn rule_a_premises(f: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    for (path, pol) in surface_occurrences(f, &|g| matches!(g, Formula::ChoiceConj(_) | Formula::ChoiceDisj(_))) {
        let Some(g) = f.at_path(&path) else { continue };
        let env_choice = matches!(
            (g, pol),
            (Formula::ChoiceConj(_), Polarity::Positive) | (Formula::ChoiceDisj(_), Polarity::Negative)
        );
        if env_choice {
            for c in g.children() {
                if let Some(h) = f.replace_at(&path, c.clone()) {
                    out.insert(h);
                }
            }
        }
    }
    out
}

/// Surface choice occurrences resolved by the machine (rule (b)).
pub fn machine_choices(f: &Formula) -> Vec<Vec<usize>> {
    surface_occurrences(f, &|g| matches!(g, Formula::ChoiceConj(_) | Formula::ChoiceDisj(_)))
        .into_iter()
        .filter(|(path, pol)| {
            matches!(
                (f.at_path(path), pol),
                (Some(Formula::ChoiceConj(_)), Polarity::Negative) | (Some(Formula::ChoiceDisj(_)), Polarity::Positive)
            )
        })
        .map(|(p, _)| p)
        .collect()
}

pub(crate) fn path_to_string(path: &[usize]) -> String {
    if path.is_empty() {
        "-".into()
    } else {
        path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

pub(crate) fn path_from_str(s: &str) -> Option<Vec<usize>> {
    let s = s.trim();
    if s == "-" {
        return Some(Vec::new());
    }
    s.split('.').map(|p| p.parse().ok().filter(|&i: &usize| i >= 1)).collect()
}
