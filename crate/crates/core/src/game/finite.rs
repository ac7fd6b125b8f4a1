//! Explicit finite game trees and their JSON form.

use super::{GameError, Player};
use rand::Rng;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

/// One position of a [`FiniteGame`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameNode {
    pub winner: Player,
    pub edges: Vec<(Player, String, usize)>,
}

/// A finite game stored as an arena; node 0 is the empty position.
/// Moves not listed at a node are illegal there.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGame {
    nodes: Vec<GameNode>,
}

impl FiniteGame {
    /// The game with no legal moves, won by `winner`.
    pub fn elementary(winner: Player) -> Self {
        FiniteGame { nodes: vec![GameNode { winner, edges: Vec::new() }] }
    }

    pub fn nodes(&self) -> &[GameNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &GameNode {
        &self.nodes[id]
    }

    /// Add a fresh node and return its id.
    pub fn add_node(&mut self, winner: Player) -> usize {
        self.nodes.push(GameNode { winner, edges: Vec::new() });
        self.nodes.len() - 1
    }

    /// Add an edge; replaces an existing edge with the same labmove.
    pub fn add_edge(&mut self, from: usize, player: Player, mv: &str, to: usize) {
        let edges = &mut self.nodes[from].edges;
        edges.retain(|(p, m, _)| !(*p == player && m == mv));
        edges.push((player, mv.to_string(), to));
    }

    pub fn child(&self, node: usize, player: Player, mv: &str) -> Option<usize> {
        self.nodes[node].edges.iter().find(|(p, m, _)| *p == player && m == mv).map(|e| e.2)
    }

    /// Follow a run from the root; `None` if some step is not a listed edge.
    pub fn walk(&self, run: &[(Player, &str)]) -> Option<usize> {
        let mut cur = 0;
        for (p, m) in run {
            cur = self.child(cur, *p, m)?;
        }
        Some(cur)
    }

    /// Length of the longest legal run.
    pub fn depth(&self) -> usize {
        fn go(g: &FiniteGame, n: usize) -> usize {
            g.nodes[n].edges.iter().map(|e| 1 + go(g, e.2)).max().unwrap_or(0)
        }
        go(self, 0)
    }

    /// Same move structure with every leaf winner redrawn.
    pub fn with_random_leaf_winners<R: Rng>(&self, rng: &mut R) -> Self {
        let mut out = self.clone();
        for n in &mut out.nodes {
            if n.edges.is_empty() {
                n.winner = if rng.gen_bool(0.5) { Player::Machine } else { Player::Env };
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        fn go(g: &FiniteGame, n: usize) -> Value {
            let mut moves = Map::new();
            for (p, m, c) in &g.nodes[n].edges {
                moves.insert(format!("{}:{}", p.symbol(), m), go(g, *c));
            }
            json!({ "winner": g.nodes[n].winner.symbol(), "moves": moves })
        }
        go(self, 0)
    }

    pub fn from_json(v: &Value) -> Result<Self, GameError> {
        GameSpec::from_json(v)?.instantiate(&BTreeMap::new())
    }
}

/// A possibly parametric game description, as found in interpretation files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GameSpec {
    Node { winner: Player, moves: Vec<(Player, String, GameSpec)> },
    Guard { cases: Vec<(BTreeMap<String, u64>, GameSpec)>, default: Box<GameSpec> },
}

fn bad(msg: impl Into<String>) -> GameError {
    GameError::BadInterpretation(msg.into())
}

impl GameSpec {
    pub fn from_json(v: &Value) -> Result<Self, GameError> {
        let obj = v.as_object().ok_or_else(|| bad("game node must be an object"))?;
        if let Some(cases) = obj.get("cases") {
            let cases = cases.as_array().ok_or_else(|| bad("`cases` must be an array"))?;
            let mut out = Vec::new();
            for c in cases {
                let co = c.as_object().ok_or_else(|| bad("case must be an object"))?;
                let mut when = BTreeMap::new();
                if let Some(w) = co.get("when") {
                    for (k, val) in w.as_object().ok_or_else(|| bad("`when` must be an object"))? {
                        let n = val.as_u64().filter(|n| *n >= 1).ok_or_else(|| bad("guard values are constants >= 1"))?;
                        when.insert(k.clone(), n);
                    }
                }
                let mut rest = co.clone();
                rest.remove("when");
                out.push((when, GameSpec::from_json(&Value::Object(rest))?));
            }
            let default = obj.get("default").ok_or_else(|| bad("guard table needs `default`"))?;
            return Ok(GameSpec::Guard { cases: out, default: Box::new(GameSpec::from_json(default)?) });
        }
        let winner = match obj.get("winner").and_then(Value::as_str) {
            Some(s) => Player::from_symbol(s).ok_or_else(|| bad(format!("winner must be T or B, got {s:?}")))?,
            None => return Err(bad("node needs a `winner`")),
        };
        let mut moves = Vec::new();
        if let Some(m) = obj.get("moves") {
            for (k, child) in m.as_object().ok_or_else(|| bad("`moves` must be an object"))? {
                let (p, mv) = k.split_once(':').ok_or_else(|| bad(format!("move key {k:?} must be T:move or B:move")))?;
                let p = Player::from_symbol(p).ok_or_else(|| bad(format!("bad player in {k:?}")))?;
                moves.push((p, mv.to_string(), GameSpec::from_json(child)?));
            }
        }
        Ok(GameSpec::Node { winner, moves })
    }

    /// Resolve guard tables against parameter values.
    pub fn instantiate(&self, binding: &BTreeMap<String, u64>) -> Result<FiniteGame, GameError> {
        let mut g = FiniteGame { nodes: Vec::new() };
        self.build(binding, &mut g)?;
        Ok(g)
    }

    fn build(&self, binding: &BTreeMap<String, u64>, g: &mut FiniteGame) -> Result<usize, GameError> {
        match self {
            GameSpec::Guard { cases, default } => {
                let hit = cases
                    .iter()
                    .find(|(when, _)| when.iter().all(|(k, v)| binding.get(k) == Some(v)))
                    .map(|(_, s)| s)
                    .unwrap_or(default);
                hit.build(binding, g)
            }
            GameSpec::Node { winner, moves } => {
                let id = g.add_node(*winner);
                for (p, m, child) in moves {
                    let c = child.build(binding, g)?;
                    g.add_edge(id, *p, m, c);
                }
                Ok(id)
            }
        }
    }
}

/// A random choice tree of depth at most `depth`: each node is a leaf with a random winner,
/// an environment choice (won by T while unresolved), or a machine choice (won by B while unresolved).
pub fn random_choice_game<R: Rng>(rng: &mut R, depth: usize, width: usize) -> FiniteGame {
    const NAMES: [&str; 4] = ["a", "b", "c", "d"];
    fn go<R: Rng>(rng: &mut R, g: &mut FiniteGame, depth: usize, width: usize) -> usize {
        let kind = if depth == 0 { 0 } else { rng.gen_range(0..10) };
        let coin = |rng: &mut R| if rng.gen_bool(0.5) { Player::Machine } else { Player::Env };
        match kind {
            0..=2 => {
                let w = coin(rng);
                g.add_node(w)
            }
            _ => {
                let chooser = if kind <= 6 { Player::Env } else { Player::Machine };
                let id = g.add_node(chooser.opp());
                let n = rng.gen_range(1..=width.clamp(1, NAMES.len()));
                for name in NAMES.iter().take(n) {
                    let c = go(rng, g, depth - 1, width);
                    g.add_edge(id, chooser, name, c);
                }
                id
            }
        }
    }
    let mut g = FiniteGame { nodes: Vec::new() };
    go(rng, &mut g, depth, width);
    g
}

/// An arbitrary random finite game over the moves `a`, `b` for both players.
pub fn random_finite_game<R: Rng>(rng: &mut R, depth: usize) -> FiniteGame {
    fn go<R: Rng>(rng: &mut R, g: &mut FiniteGame, depth: usize) -> usize {
        let w = if rng.gen_bool(0.5) { Player::Machine } else { Player::Env };
        let id = g.add_node(w);
        if depth > 0 {
            for p in [Player::Machine, Player::Env] {
                for m in ["a", "b"] {
                    if rng.gen_bool(0.35) {
                        let c = go(rng, g, depth - 1);
                        g.add_edge(id, p, m, c);
                    }
                }
            }
        }
        id
    }
    let mut g = FiniteGame { nodes: Vec::new() };
    go(rng, &mut g, depth);
    g
}
