//! CL2 proofs: representation, checking, and the text format.

use super::{
    is_elementary_atom, is_general_atom, is_stable, path_from_str, path_to_string, polarity_and_surface,
    rule_a_premises, Cl2Error, Polarity,
};
use crate::formula::{parse_formula, Formula};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// How a step is justified.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    /// From the premises for every environment choice; the formula must be stable.
    A,
    /// Resolve the machine choice at `path` to alternative `i`.
    B { path: Vec<usize>, i: usize },
    /// Two opposite surface occurrences of a general atom replaced by a fresh elementary atom.
    C { pos: Vec<usize>, neg: Vec<usize>, atom: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub formula: Formula,
    pub rule: Rule,
    /// Indices of earlier steps.
    pub premises: Vec<usize>,
}

/// A sequence of steps; the last one is the conclusion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cl2Proof {
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {reason}")]
pub struct ProofCheckError {
    /// 1-based.
    pub step: usize,
    pub reason: String,
}

impl Cl2Proof {
    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    pub fn root(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }

    /// Number of steps using each rule, as `(a, b, c)`.
    pub fn rule_counts(&self) -> (usize, usize, usize) {
        let mut n = (0, 0, 0);
        for s in &self.steps {
            match s.rule {
                Rule::A => n.0 += 1,
                Rule::B { .. } => n.1 += 1,
                Rule::C { .. } => n.2 += 1,
            }
        }
        n
    }

    /// One step per line: `<idx>. <formula> ; rule=<a|b|c> ; premises=[...] ; path=... ; i=... ; atom=...`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, s) in self.steps.iter().enumerate() {
            let prem: Vec<String> = s.premises.iter().map(|p| (p + 1).to_string()).collect();
            out.push_str(&format!("{}. {}", k + 1, s.formula));
            match &s.rule {
                Rule::A => out.push_str(" ; rule=a"),
                Rule::B { .. } => out.push_str(" ; rule=b"),
                Rule::C { .. } => out.push_str(" ; rule=c"),
            }
            out.push_str(&format!(" ; premises=[{}]", prem.join(",")));
            match &s.rule {
                Rule::A => {}
                Rule::B { path, i } => out.push_str(&format!(" ; path={} ; i={i}", path_to_string(path))),
                Rule::C { pos, neg, atom } => out.push_str(&format!(
                    " ; path={},{} ; atom={atom}",
                    path_to_string(pos),
                    path_to_string(neg)
                )),
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Cl2Proof, Cl2Error> {
        let mut steps = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Cl2Error::ProofSyntax { line: ln + 1, msg: msg.to_string() };
            let (idx, rest) = line.split_once(". ").ok_or_else(|| err("expected `<idx>. <formula>`"))?;
            if idx.trim().parse::<usize>().ok() != Some(steps.len() + 1) {
                return Err(err("step indices must be 1, 2, 3, ..."));
            }
            let mut fields = rest.split(" ; ");
            let formula = parse_formula(fields.next().unwrap_or("")).map_err(|e| err(&e.to_string()))?;
            let (mut rule, mut premises, mut path, mut i, mut atom) = (None, Vec::new(), None, None, None);
            for fld in fields {
                let (k, v) = fld.split_once('=').ok_or_else(|| err("expected key=value"))?;
                match k.trim() {
                    "rule" => rule = Some(v.trim().to_string()),
                    "premises" => {
                        let v = v.trim().trim_start_matches('[').trim_end_matches(']');
                        for p in v.split(',').filter(|p| !p.trim().is_empty()) {
                            let p: usize = p.trim().parse().map_err(|_| err("bad premise index"))?;
                            premises.push(p.checked_sub(1).ok_or_else(|| err("premise indices start at 1"))?);
                        }
                    }
                    "path" => path = Some(v.trim().to_string()),
                    "i" => i = Some(v.trim().parse::<usize>().map_err(|_| err("bad index"))?),
                    "atom" => atom = Some(v.trim().to_string()),
                    _ => return Err(err("unknown field")),
                }
            }
            let bad_path = || err("bad path");
            let rule = match rule.as_deref() {
                Some("a") => Rule::A,
                Some("b") => Rule::B {
                    path: path_from_str(path.as_deref().ok_or_else(bad_path)?).ok_or_else(bad_path)?,
                    i: i.ok_or_else(|| err("rule b needs i"))?,
                },
                Some("c") => {
                    let p = path.ok_or_else(bad_path)?;
                    let (a, b) = p.split_once(',').ok_or_else(bad_path)?;
                    Rule::C {
                        pos: path_from_str(a).ok_or_else(bad_path)?,
                        neg: path_from_str(b).ok_or_else(bad_path)?,
                        atom: atom.ok_or_else(|| err("rule c needs atom"))?,
                    }
                }
                _ => return Err(err("rule must be a, b or c")),
            };
            steps.push(Step { formula, rule, premises });
        }
        Ok(Cl2Proof { steps })
    }
}

impl fmt::Display for Cl2Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn atom_names(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    f.walk(&mut |g| {
        if let Formula::Atom(n, _) = g {
            out.insert(n.clone());
        }
    });
    out
}

fn check_step(steps: &[Step], k: usize) -> Result<(), String> {
    let s = &steps[k];
    let f = &s.formula;
    if !super::is_cl2(f) {
        return Err("not a CL2 formula".into());
    }
    if let Some(&p) = s.premises.iter().find(|&&p| p >= k) {
        return Err(format!("premise {} is not an earlier step", p + 1));
    }
    let prem: Vec<&Formula> = s.premises.iter().map(|&p| &steps[p].formula).collect();
    let single = || -> Result<&Formula, String> {
        match prem.as_slice() {
            [h] => Ok(*h),
            _ => Err("this rule takes exactly one premise".into()),
        }
    };
    match &s.rule {
        Rule::A => {
            if !is_stable(f) {
                return Err("rule (a) needs a stable formula".into());
            }
            let want = rule_a_premises(f);
            let got: BTreeSet<Formula> = prem.into_iter().cloned().collect();
            if want != got {
                return Err(format!("rule (a) needs exactly {} distinct premises", want.len()));
            }
        }
        Rule::B { path, i } => {
            let (pol, surface) = polarity_and_surface(f, path).map_err(|e| e.to_string())?;
            let g = f.at_path(path).ok_or("bad path")?;
            let alts = match (g, pol) {
                (Formula::ChoiceConj(v), Polarity::Negative) | (Formula::ChoiceDisj(v), Polarity::Positive) => v,
                _ => return Err("rule (b) needs a negative ⊓ or positive ⊔ occurrence".into()),
            };
            if !surface {
                return Err("rule (b) occurrence is not a surface occurrence".into());
            }
            if *i < 1 || *i > alts.len() {
                return Err(format!("choice index {i} out of range 1..={}", alts.len()));
            }
            let want = f.replace_at(path, alts[i - 1].clone()).ok_or("bad path")?;
            if single()? != &want {
                return Err("premise is not the resolved formula".into());
            }
        }
        Rule::C { pos, neg, atom } => {
            let (pp, ps) = polarity_and_surface(f, pos).map_err(|e| e.to_string())?;
            let (np, ns) = polarity_and_surface(f, neg).map_err(|e| e.to_string())?;
            let a = f.at_path(pos).ok_or("bad path")?;
            let b = f.at_path(neg).ok_or("bad path")?;
            if !is_general_atom(a) || a != b {
                return Err("rule (c) needs two occurrences of the same general atom".into());
            }
            if !(ps && ns) {
                return Err("rule (c) occurrences must be surface occurrences".into());
            }
            if pp != Polarity::Positive || np != Polarity::Negative {
                return Err("rule (c) occurrences must be one positive and one negative".into());
            }
            let q = Formula::atom(atom);
            if !is_elementary_atom(&q) {
                return Err(format!("{atom} is not an elementary atom name"));
            }
            if atom_names(f).contains(atom) {
                return Err(format!("atom {atom} already occurs in the formula"));
            }
            let want = f.replace_at(pos, q.clone()).and_then(|h| h.replace_at(neg, q)).ok_or("bad path")?;
            if single()? != &want {
                return Err("premise is not the formula with both occurrences replaced".into());
            }
        }
    }
    Ok(())
}

/// Re-derive every step's justification.
pub fn check_cl2_proof(p: &Cl2Proof) -> Result<(), ProofCheckError> {
    if p.steps.is_empty() {
        return Err(ProofCheckError { step: 0, reason: "empty proof".into() });
    }
    for k in 0..p.steps.len() {
        check_step(&p.steps, k).map_err(|reason| ProofCheckError { step: k + 1, reason })?;
    }
    Ok(())
}
