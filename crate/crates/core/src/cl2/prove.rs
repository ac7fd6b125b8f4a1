//! Backward proof search with memoization modulo renaming of elementary atoms.

use super::proof::{Cl2Proof, Rule, Step};
use super::{
    is_cl2, is_elementary_atom, is_general_atom, is_stable, machine_choices, rule_a_premises, surface_occurrences,
    Cl2Error, Polarity,
};
use crate::formula::Formula;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

#[derive(Clone, Copy, Debug)]
pub struct ProveConfig {
    /// Distinct goals the search may expand before giving up.
    pub max_goals: usize,
}

impl Default for ProveConfig {
    fn default() -> Self {
        ProveConfig { max_goals: 200_000 }
    }
}

#[derive(Debug)]
struct Node {
    formula: Formula,
    rule: Rule,
    premises: Vec<Rc<Node>>,
}

struct Search {
    memo: HashMap<Formula, Option<Rc<Node>>>,
    goals: usize,
    cfg: ProveConfig,
}

fn rename_formula(f: &Formula, map: &BTreeMap<String, String>) -> Formula {
    f.substitute_atoms(&|n| map.get(n).map(|m| Formula::atom(m)))
}

fn rename(node: &Node, map: &BTreeMap<String, String>) -> Rc<Node> {
    let rule = match &node.rule {
        Rule::C { pos, neg, atom } => Rule::C {
            pos: pos.clone(),
            neg: neg.clone(),
            atom: map.get(atom).cloned().unwrap_or_else(|| atom.clone()),
        },
        r => r.clone(),
    };
    Rc::new(Node {
        formula: rename_formula(&node.formula, map),
        rule,
        premises: node.premises.iter().map(|p| rename(p, map)).collect(),
    })
}

/// Rename elementary atoms to `q1, q2, ...` in order of first occurrence.
fn canonical(f: &Formula) -> (Formula, BTreeMap<String, String>) {
    let mut map = BTreeMap::new();
    f.walk(&mut |g| {
        if let Formula::Atom(n, _) = g {
            if is_elementary_atom(g) && !map.contains_key(n) {
                let k = map.len() + 1;
                map.insert(n.clone(), format!("q{k}"));
            }
        }
    });
    (rename_formula(f, &map), map)
}

fn fresh_atom(f: &Formula) -> String {
    let mut used = BTreeSet::new();
    f.walk(&mut |g| {
        if let Formula::Atom(n, _) = g {
            used.insert(n.clone());
        }
    });
    (1..).map(|k| format!("q{k}")).find(|n| !used.contains(n)).expect("unbounded")
}

impl Search {
    fn prove(&mut self, f: &Formula) -> Result<Option<Rc<Node>>, Cl2Error> {
        let (canon, map) = canonical(f);
        let found = match self.memo.get(&canon) {
            Some(r) => r.clone(),
            None => {
                let r = self.solve(&canon)?;
                self.memo.insert(canon, r.clone());
                r
            }
        };
        let back: BTreeMap<String, String> = map.into_iter().map(|(a, b)| (b, a)).collect();
        Ok(found.map(|n| if back.iter().all(|(a, b)| a == b) { n } else { rename(&n, &back) }))
    }

    fn all(&mut self, goals: &[Formula]) -> Result<Option<Vec<Rc<Node>>>, Cl2Error> {
        let mut out = Vec::new();
        for g in goals {
            match self.prove(g)? {
                Some(n) => out.push(n),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    fn solve(&mut self, f: &Formula) -> Result<Option<Rc<Node>>, Cl2Error> {
        self.goals += 1;
        if self.goals > self.cfg.max_goals {
            return Err(Cl2Error::Budget(self.cfg.max_goals));
        }
        let node = |rule, premises| Some(Rc::new(Node { formula: f.clone(), rule, premises }));
        if is_stable(f) {
            let goals: Vec<Formula> = rule_a_premises(f).into_iter().collect();
            if let Some(ps) = self.all(&goals)? {
                return Ok(node(Rule::A, ps));
            }
        }
        for path in machine_choices(f) {
            let n = f.at_path(&path).map_or(0, |g| g.children().len());
            for i in 1..=n {
                let alt = f.at_path(&path).expect("choice path").children()[i - 1].clone();
                let h = f.replace_at(&path, alt).expect("choice path");
                if let Some(p) = self.prove(&h)? {
                    return Ok(node(Rule::B { path: path.clone(), i }, vec![p]));
                }
            }
        }
        let atoms = surface_occurrences(f, &is_general_atom);
        for (pos, _) in atoms.iter().filter(|(_, p)| *p == Polarity::Positive) {
            for (neg, _) in atoms.iter().filter(|(_, p)| *p == Polarity::Negative) {
                if f.at_path(pos) != f.at_path(neg) {
                    continue;
                }
                let atom = fresh_atom(f);
                let q = Formula::atom(&atom);
                let h = f.replace_at(pos, q.clone()).and_then(|h| h.replace_at(neg, q)).expect("atom paths");
                if let Some(p) = self.prove(&h)? {
                    return Ok(node(Rule::C { pos: pos.clone(), neg: neg.clone(), atom }, vec![p]));
                }
            }
        }
        Ok(None)
    }
}

fn flatten(n: &Node, steps: &mut Vec<Step>, seen: &mut HashMap<Formula, usize>) -> usize {
    if let Some(&k) = seen.get(&n.formula) {
        return k;
    }
    let premises = n.premises.iter().map(|p| flatten(p, steps, seen)).collect();
    steps.push(Step { formula: n.formula.clone(), rule: n.rule.clone(), premises });
    let k = steps.len() - 1;
    seen.insert(n.formula.clone(), k);
    k
}

/// Search for a CL2 proof. `Ok(None)` means the formula is refuted; running out of
/// budget is reported as an error instead.
pub fn prove(f: &Formula, cfg: &ProveConfig) -> Result<Option<Cl2Proof>, Cl2Error> {
    if !is_cl2(f) || !f.well_formed() {
        return Err(Cl2Error::NotCl2(f.to_string()));
    }
    let mut s = Search { memo: HashMap::new(), goals: 0, cfg: *cfg };
    let Some(root) = s.prove(f)? else { return Ok(None) };
    let mut steps = Vec::new();
    flatten(&root, &mut steps, &mut HashMap::new());
    Ok(Some(Cl2Proof { steps }))
}
