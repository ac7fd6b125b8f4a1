//! Compositional legality and winner evaluation.

use super::tree::{prelegal_tree_view, subrun_view};
use super::{parse_numeral, split_index, view, FiniteGame, GameError, Interpretation, Labmove, Player, Valuation, View};
use crate::formula::{Formula, Term};
use std::sync::Arc;

/// Anything with a legality predicate and a winner function on finite runs.
pub trait ConstantGame {
    fn is_legal(&self, run: &[Labmove]) -> bool;

    /// Winner of a legal run.
    fn winner_legal(&self, run: &[Labmove]) -> Player;

    /// Index of the first labmove that makes the run illegal.
    fn first_illegal(&self, run: &[Labmove]) -> Option<usize> {
        first_illegal(run.len(), |k| self.is_legal(&run[..k]))
    }

    /// Winner of any run: the offender of an illegal run loses.
    fn winner(&self, run: &[Labmove]) -> Player {
        match self.first_illegal(run) {
            Some(k) => run[k].player.opp(),
            None => self.winner_legal(run),
        }
    }
}

/// Smallest `k` such that the prefix of length `k + 1` is illegal, given a
/// prefix-closed legality oracle `legal(len)`.
pub fn first_illegal(len: usize, legal: impl Fn(usize) -> bool) -> Option<usize> {
    if legal(len) {
        return None;
    }
    let (mut lo, mut hi) = (0, len);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if legal(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(hi - 1)
}

impl ConstantGame for FiniteGame {
    fn is_legal(&self, run: &[Labmove]) -> bool {
        self.walk(&view(run)).is_some()
    }

    fn winner_legal(&self, run: &[Labmove]) -> Player {
        self.walk(&view(run)).map(|n| self.node(n).winner).unwrap_or(Player::Machine)
    }
}

fn negate<'a>(run: &[(Player, &'a str)]) -> View<'a> {
    run.iter().map(|(p, m)| (p.opp(), *m)).collect()
}

/// Bucket moves `i.rest` into `n` components; `None` if some move has no valid prefix.
fn split_components<'a>(run: &[(Player, &'a str)], n: usize) -> Option<Vec<View<'a>>> {
    let mut out = vec![Vec::new(); n];
    for (p, m) in run {
        let (i, rest) = split_index(m)?;
        if i < 1 || i > n {
            return None;
        }
        out[i - 1].push((*p, rest));
    }
    Some(out)
}

fn atom_game(it: &Interpretation, val: &Valuation, name: &str, args: &[Term]) -> Arc<FiniteGame> {
    let cs: Vec<u64> = args.iter().map(|t| val.eval(t)).collect();
    it.game(name, &cs).unwrap_or_else(|_| Arc::new(FiniteGame::elementary(Player::Machine)))
}

fn choice<'r, 'a>(run: &'r [(Player, &'a str)], chooser: Player) -> Option<(u64, &'r [(Player, &'a str)])> {
    let ((p, m), rest) = run.split_first()?;
    if *p != chooser {
        return None;
    }
    Some((parse_numeral(m)?, rest))
}

pub(crate) fn legal(f: &Formula, it: &Interpretation, val: &Valuation, run: &[(Player, &str)]) -> bool {
    match f {
        Formula::Atom(n, args) => atom_game(it, val, n, args).walk(run).is_some(),
        Formula::Top | Formula::Bot => run.is_empty(),
        Formula::Dollar => {
            if run.is_empty() {
                return true;
            }
            match choice(run, Player::Env) {
                Some((i, rest)) => it.dollar_conjunct(i).map(|g| g.walk(rest).is_some()).unwrap_or(false),
                None => false,
            }
        }
        Formula::Neg(a) => legal(a, it, val, &negate(run)),
        Formula::ParConj(v) | Formula::ParDisj(v) => match split_components(run, v.len()) {
            Some(parts) => v.iter().zip(&parts).all(|(g, r)| legal(g, it, val, r)),
            None => false,
        },
        Formula::Implies(a, b) => match split_components(run, 2) {
            Some(parts) => legal(a, it, val, &negate(&parts[0])) && legal(b, it, val, &parts[1]),
            None => false,
        },
        Formula::ChoiceConj(v) | Formula::ChoiceDisj(v) => {
            if run.is_empty() {
                return true;
            }
            let chooser = if matches!(f, Formula::ChoiceConj(_)) { Player::Env } else { Player::Machine };
            match choice(run, chooser) {
                Some((i, rest)) if i as usize <= v.len() => legal(&v[i as usize - 1], it, val, rest),
                _ => false,
            }
        }
        Formula::ChoiceAll(x, a) | Formula::ChoiceExists(x, a) => {
            if run.is_empty() {
                return true;
            }
            let chooser = if matches!(f, Formula::ChoiceAll(..)) { Player::Env } else { Player::Machine };
            match choice(run, chooser) {
                Some((c, rest)) => legal(a, it, &val.with(x, c), rest),
                None => false,
            }
        }
        Formula::Bang(a) => match prelegal_tree_view(run) {
            Ok(tree) => tree.leaves().iter().all(|w| legal(a, it, val, &subrun_view(run, w))),
            Err(_) => false,
        },
    }
}

pub(crate) fn winner_legal(f: &Formula, it: &Interpretation, val: &Valuation, run: &[(Player, &str)]) -> Player {
    match f {
        Formula::Atom(n, args) => {
            let g = atom_game(it, val, n, args);
            g.walk(run).map(|k| g.node(k).winner).unwrap_or(Player::Machine)
        }
        Formula::Top => Player::Machine,
        Formula::Bot => Player::Env,
        Formula::Dollar => match choice(run, Player::Env) {
            None => Player::Machine,
            Some((i, rest)) => match it.dollar_conjunct(i) {
                Ok(g) => g.walk(rest).map(|k| g.node(k).winner).unwrap_or(Player::Machine),
                Err(_) => Player::Machine,
            },
        },
        Formula::Neg(a) => winner_legal(a, it, val, &negate(run)).opp(),
        Formula::ParConj(v) | Formula::ParDisj(v) => {
            let parts = split_components(run, v.len()).unwrap_or_else(|| vec![Vec::new(); v.len()]);
            let mut wins = v.iter().zip(&parts).map(|(g, r)| winner_legal(g, it, val, r) == Player::Machine);
            let ok = if matches!(f, Formula::ParConj(_)) { wins.all(|w| w) } else { wins.any(|w| w) };
            if ok {
                Player::Machine
            } else {
                Player::Env
            }
        }
        Formula::Implies(a, b) => {
            let parts = split_components(run, 2).unwrap_or_else(|| vec![Vec::new(); 2]);
            if winner_legal(a, it, val, &negate(&parts[0])) == Player::Env || winner_legal(b, it, val, &parts[1]) == Player::Machine {
                Player::Machine
            } else {
                Player::Env
            }
        }
        Formula::ChoiceConj(v) | Formula::ChoiceDisj(v) => {
            let chooser = if matches!(f, Formula::ChoiceConj(_)) { Player::Env } else { Player::Machine };
            match choice(run, chooser) {
                Some((i, rest)) if i >= 1 && i as usize <= v.len() => winner_legal(&v[i as usize - 1], it, val, rest),
                _ => chooser.opp(),
            }
        }
        Formula::ChoiceAll(x, a) | Formula::ChoiceExists(x, a) => {
            let chooser = if matches!(f, Formula::ChoiceAll(..)) { Player::Env } else { Player::Machine };
            match choice(run, chooser) {
                Some((c, rest)) => winner_legal(a, it, &val.with(x, c), rest),
                None => chooser.opp(),
            }
        }
        Formula::Bang(a) => {
            let tree = prelegal_tree_view(run).unwrap_or_default();
            if tree.leaves().iter().all(|w| winner_legal(a, it, val, &subrun_view(run, w)) == Player::Machine) {
                Player::Machine
            } else {
                Player::Env
            }
        }
    }
}

/// A formula evaluated under an interpretation and a valuation.
#[derive(Clone, Debug)]
pub struct GameRef {
    pub formula: Formula,
    pub interp: Interpretation,
    pub val: Valuation,
}

impl GameRef {
    /// Fails if the formula uses a letter the interpretation does not cover.
    pub fn new(formula: Formula, interp: Interpretation, val: Valuation) -> Result<Self, GameError> {
        for l in formula.letters() {
            if !interp.signature().contains(&l) {
                return Err(GameError::Uninterpreted(l.to_string()));
            }
        }
        Ok(GameRef { formula, interp, val })
    }

    /// `$` as a game: `B ⊓ F1 ⊓ F2 ⊓ ...`.
    pub fn universal_problem(interp: Interpretation) -> Self {
        GameRef { formula: Formula::Dollar, interp, val: Valuation::default() }
    }

    /// Is `pos + lm` legal? Errors if `pos` itself is not.
    pub fn classify_move(&self, pos: &[Labmove], lm: &Labmove) -> Result<bool, GameError> {
        if let Some(k) = self.first_illegal(pos) {
            return Err(GameError::IllegalPosition(k));
        }
        let mut v = view(pos);
        v.push((lm.player, lm.mv.as_str()));
        Ok(legal(&self.formula, &self.interp, &self.val, &v))
    }

    /// The game continued from the legal position `pos`.
    pub fn prefixation(&self, pos: &[Labmove]) -> Result<PrefixedGame, GameError> {
        if let Some(k) = self.first_illegal(pos) {
            return Err(GameError::IllegalPosition(k));
        }
        Ok(PrefixedGame { base: self.clone(), prefix: pos.to_vec() })
    }
}

impl ConstantGame for GameRef {
    fn is_legal(&self, run: &[Labmove]) -> bool {
        legal(&self.formula, &self.interp, &self.val, &view(run))
    }

    fn winner_legal(&self, run: &[Labmove]) -> Player {
        winner_legal(&self.formula, &self.interp, &self.val, &view(run))
    }
}

/// `⟨Φ⟩A`: legality and winner of `Φ` followed by the run.
#[derive(Clone, Debug)]
pub struct PrefixedGame {
    base: GameRef,
    prefix: Vec<Labmove>,
}

impl PrefixedGame {
    fn joined(&self, run: &[Labmove]) -> Vec<Labmove> {
        let mut all = self.prefix.clone();
        all.extend_from_slice(run);
        all
    }
}

impl ConstantGame for PrefixedGame {
    fn is_legal(&self, run: &[Labmove]) -> bool {
        self.base.is_legal(&self.joined(run))
    }

    fn winner_legal(&self, run: &[Labmove]) -> Player {
        self.base.winner_legal(&self.joined(run))
    }
}
