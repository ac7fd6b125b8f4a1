//! Bounded candidate-move generation, used for environment alphabets and move hints.

use super::eval::legal;
use super::tree::{prelegal_tree_view, subrun_view};
use super::{parse_numeral, split_index, view, ConstantGame, GameRef, Interpretation, Labmove, Player, Valuation};
use crate::formula::Formula;
use std::collections::BTreeSet;

/// Bounds on the otherwise infinite move alphabets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MoveCaps {
    /// Constants offered for quantifier choices: `1..=constants`.
    pub constants: u64,
    /// Conjunct indices offered for `$`: `1..=dollar`.
    pub dollar: u64,
    /// Skip replicative moves once the tree has this many leaves.
    pub max_leaves: usize,
}

impl Default for MoveCaps {
    fn default() -> Self {
        MoveCaps { constants: 3, dollar: 4, max_leaves: 4 }
    }
}

type Cand = (Player, String);

fn prefixed(cs: Vec<Cand>, prefix: &str) -> impl Iterator<Item = Cand> + '_ {
    cs.into_iter().map(move |(p, m)| (p, format!("{prefix}{m}")))
}

fn flipped(cs: Vec<Cand>) -> Vec<Cand> {
    cs.into_iter().map(|(p, m)| (p.opp(), m)).collect()
}

fn components<'a>(run: &[(Player, &'a str)], n: usize) -> Vec<Vec<(Player, &'a str)>> {
    let mut out = vec![Vec::new(); n];
    for (p, m) in run {
        if let Some((i, rest)) = split_index(m) {
            if (1..=n).contains(&i) {
                out[i - 1].push((*p, rest));
            }
        }
    }
    out
}

fn cands(f: &Formula, it: &Interpretation, val: &Valuation, run: &[(Player, &str)], caps: &MoveCaps) -> Vec<Cand> {
    let start = |chooser: Player, n: u64| (1..=n).map(|i| (chooser, i.to_string())).collect::<Vec<_>>();
    match f {
        Formula::Atom(n, args) => {
            let cs: Vec<u64> = args.iter().map(|t| val.eval(t)).collect();
            match it.game(n, &cs) {
                Ok(g) => match g.walk(run) {
                    Some(k) => g.node(k).edges.iter().map(|(p, m, _)| (*p, m.clone())).collect(),
                    None => Vec::new(),
                },
                Err(_) => Vec::new(),
            }
        }
        Formula::Top | Formula::Bot => Vec::new(),
        Formula::Dollar => match run.split_first() {
            None => start(Player::Env, caps.dollar),
            Some(((_, m), rest)) => match parse_numeral(m).and_then(|i| it.dollar_conjunct(i).ok()) {
                Some(g) => match g.walk(rest) {
                    Some(k) => g.node(k).edges.iter().map(|(p, m, _)| (*p, m.clone())).collect(),
                    None => Vec::new(),
                },
                None => Vec::new(),
            },
        },
        Formula::Neg(a) => {
            let neg: Vec<_> = run.iter().map(|(p, m)| (p.opp(), *m)).collect();
            flipped(cands(a, it, val, &neg, caps))
        }
        Formula::ParConj(v) | Formula::ParDisj(v) => {
            let parts = components(run, v.len());
            let mut out = Vec::new();
            for (i, (g, r)) in v.iter().zip(&parts).enumerate() {
                out.extend(prefixed(cands(g, it, val, r, caps), &format!("{}.", i + 1)));
            }
            out
        }
        Formula::Implies(a, b) => {
            let parts = components(run, 2);
            let neg: Vec<_> = parts[0].iter().map(|(p, m)| (p.opp(), *m)).collect();
            let mut out: Vec<Cand> = prefixed(flipped(cands(a, it, val, &neg, caps)), "1.").collect();
            out.extend(prefixed(cands(b, it, val, &parts[1], caps), "2."));
            out
        }
        Formula::ChoiceConj(v) | Formula::ChoiceDisj(v) => {
            let chooser = if matches!(f, Formula::ChoiceConj(_)) { Player::Env } else { Player::Machine };
            match run.split_first() {
                None => start(chooser, v.len() as u64),
                Some(((_, m), rest)) => match parse_numeral(m) {
                    Some(i) if i as usize <= v.len() => cands(&v[i as usize - 1], it, val, rest, caps),
                    _ => Vec::new(),
                },
            }
        }
        Formula::ChoiceAll(x, a) | Formula::ChoiceExists(x, a) => {
            let chooser = if matches!(f, Formula::ChoiceAll(..)) { Player::Env } else { Player::Machine };
            match run.split_first() {
                None => start(chooser, caps.constants),
                Some(((_, m), rest)) => match parse_numeral(m) {
                    Some(c) => cands(a, it, &val.with(x, c), rest, caps),
                    None => Vec::new(),
                },
            }
        }
        Formula::Bang(a) => {
            let Ok(tree) = prelegal_tree_view(run) else {
                return Vec::new();
            };
            let leaves = tree.leaves();
            let mut out = Vec::new();
            if leaves.len() < caps.max_leaves {
                out.extend(leaves.iter().map(|w| (Player::Env, format!("{w}:"))));
            }
            for w in tree.nodes() {
                let mut seen = BTreeSet::new();
                for u in leaves.iter().filter(|u| u.starts_with(w.as_str())) {
                    for c in cands(a, it, val, &subrun_view(run, u), caps) {
                        if seen.insert(c.clone()) {
                            out.push((c.0, format!("{w}.{}", c.1)));
                        }
                    }
                }
            }
            out
        }
    }
}

/// Structurally plausible next labmoves (not yet filtered for legality).
pub fn candidate_moves(g: &GameRef, run: &[Labmove], caps: &MoveCaps) -> Vec<Labmove> {
    let mut seen = BTreeSet::new();
    cands(&g.formula, &g.interp, &g.val, &view(run), caps)
        .into_iter()
        .filter(|c| seen.insert(c.clone()))
        .map(|(p, m)| Labmove::new(p, m))
        .collect()
}

/// Legal next labmoves for `player` (or both) within the caps.
pub fn legal_moves(g: &GameRef, run: &[Labmove], player: Option<Player>, caps: &MoveCaps) -> Vec<Labmove> {
    if !g.is_legal(run) {
        return Vec::new();
    }
    let base = view(run);
    candidate_moves(g, run, caps)
        .into_iter()
        .filter(|lm| player.is_none_or(|p| p == lm.player))
        .filter(|lm| {
            let mut v = base.clone();
            v.push((lm.player, lm.mv.as_str()));
            legal(&g.formula, &g.interp, &g.val, &v)
        })
        .collect()
}
