//! Constant games: players, runs, valuations, interpretations, and the
//! legality/winner semantics of every operation of the extended language.

mod eval;
mod finite;
mod interp;
mod moves;
mod tree;

pub use eval::{first_illegal, ConstantGame, GameRef, PrefixedGame};
pub use finite::{random_choice_game, random_finite_game, FiniteGame, GameNode, GameSpec};
pub use interp::{Interpretation, LetterGame, Signature};
pub use moves::{candidate_moves, legal_moves, MoveCaps};
pub use tree::{parse_bang_move, prelegal_and_tree, subrun_upto, BangMove, BitTree};

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// The always-illegal move symbol.
pub const SPADE: char = '♠';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("position is not legal (first offending labmove #{0})")]
    IllegalPosition(usize),
    #[error("letter {0} is not interpreted")]
    Uninterpreted(String),
    #[error("bad interpretation: {0}")]
    BadInterpretation(String),
    #[error("grounded-atom index must be at least 1")]
    BadIndex,
    #[error("empty signature has no grounded atoms")]
    EmptySignature,
}

/// ⊤ (machine) or ⊥ (environment).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    Machine,
    Env,
}

impl Player {
    pub fn opp(self) -> Player {
        match self {
            Player::Machine => Player::Env,
            Player::Env => Player::Machine,
        }
    }

    /// `T` or `B`, as used in transcripts and interpretation files.
    pub fn symbol(self) -> &'static str {
        match self {
            Player::Machine => "T",
            Player::Env => "B",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Player> {
        match s {
            "T" => Some(Player::Machine),
            "B" => Some(Player::Env),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A move tagged with the player who made it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Labmove {
    pub player: Player,
    pub mv: String,
}

impl Labmove {
    pub fn new(player: Player, mv: impl Into<String>) -> Self {
        Labmove { player, mv: mv.into() }
    }

    pub fn machine(mv: impl Into<String>) -> Self {
        Labmove::new(Player::Machine, mv)
    }

    pub fn env(mv: impl Into<String>) -> Self {
        Labmove::new(Player::Env, mv)
    }
}

impl fmt::Display for Labmove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.player, self.mv)
    }
}

/// A finite run (position).
pub type Run = Vec<Labmove>;

/// A borrowed run used by the evaluator.
pub(crate) type View<'a> = Vec<(Player, &'a str)>;

pub(crate) fn view(run: &[Labmove]) -> View<'_> {
    run.iter().map(|l| (l.player, l.mv.as_str())).collect()
}

/// Keep labmoves whose move starts with `prefix` (raw string prefix) and strip it.
pub fn project(run: &[Labmove], prefix: &str) -> Run {
    run.iter()
        .filter_map(|l| l.mv.strip_prefix(prefix).map(|rest| Labmove::new(l.player, rest)))
        .collect()
}

/// Swap all labels.
pub fn negate_run(run: &[Labmove]) -> Run {
    run.iter().map(|l| Labmove::new(l.player.opp(), l.mv.clone())).collect()
}

/// Parse a canonical positive decimal numeral (no sign, no leading zero).
pub fn parse_numeral(s: &str) -> Option<u64> {
    if s.is_empty() || s.starts_with('0') || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Split `"i.rest"` into `(i, rest)` for a canonical numeral `i`.
pub fn split_index(m: &str) -> Option<(usize, &str)> {
    let dot = m.find('.')?;
    let i = parse_numeral(&m[..dot])?;
    Some((usize::try_from(i).ok()?, &m[dot + 1..]))
}

/// Variable → constant map with a default for unmapped variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Valuation {
    map: BTreeMap<String, u64>,
    default: u64,
}

impl Default for Valuation {
    fn default() -> Self {
        Valuation { map: BTreeMap::new(), default: 1 }
    }
}

impl Valuation {
    pub fn new(default: u64) -> Self {
        Valuation { map: BTreeMap::new(), default: default.max(1) }
    }

    pub fn get(&self, x: &str) -> u64 {
        self.map.get(x).copied().unwrap_or(self.default)
    }

    pub fn set(&mut self, x: &str, c: u64) {
        self.map.insert(x.to_string(), c.max(1));
    }

    /// A copy overridden at `x := c`.
    pub fn with(&self, x: &str, c: u64) -> Valuation {
        let mut v = self.clone();
        v.set(x, c);
        v
    }

    pub fn eval(&self, t: &crate::formula::Term) -> u64 {
        match t {
            crate::formula::Term::Const(c) => *c,
            crate::formula::Term::Var(x) => self.get(x),
        }
    }

    pub fn default_value(&self) -> u64 {
        self.default
    }

    pub fn entries(&self) -> impl Iterator<Item = (&String, &u64)> {
        self.map.iter()
    }

    /// Parse `x=3,y=5` (an optional `default=k` entry sets the default).
    pub fn parse(text: &str) -> Result<Valuation, String> {
        let mut v = Valuation::default();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, c) = part.split_once('=').ok_or_else(|| format!("expected var=const, got {part:?}"))?;
            let c = parse_numeral(c.trim()).ok_or_else(|| format!("bad constant in {part:?}"))?;
            if k.trim() == "default" {
                v.default = c;
            } else {
                v.set(k.trim(), c);
            }
        }
        Ok(v)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, c) in &self.map {
            write!(f, "{x}={c},")?;
        }
        write!(f, "default={}", self.default)
    }
}
