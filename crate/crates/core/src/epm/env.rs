//! Environments: silent, scripted, and seeded random.

use crate::game::{legal_moves, GameRef, Labmove, MoveCaps, Player};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The opponent of a strategy. It may inspect the game and emits at most one move per grant.
pub trait Environment: Send {
    fn on_permission(&mut self, g: &GameRef, run: &[Labmove]) -> Option<String>;

    /// True once the environment will never move again.
    fn exhausted(&self) -> bool {
        true
    }
}

/// Never moves.
#[derive(Clone, Copy, Debug, Default)]
pub struct SilentEnv;

impl Environment for SilentEnv {
    fn on_permission(&mut self, _: &GameRef, _: &[Labmove]) -> Option<String> {
        None
    }
}

/// One line of an environment script.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Directive {
    Move(String),
    Pass,
    Stop,
}

/// Replays directives, one per grant.
#[derive(Clone, Debug, Default)]
pub struct ScriptEnv {
    directives: Vec<Directive>,
    next: usize,
    stopped: bool,
}

impl ScriptEnv {
    pub fn new(directives: Vec<Directive>) -> Self {
        ScriptEnv { directives, next: 0, stopped: false }
    }

    /// Each move is emitted on successive grants.
    pub fn moves<S: AsRef<str>>(moves: &[S]) -> Self {
        ScriptEnv::new(moves.iter().map(|m| Directive::Move(m.as_ref().to_string())).collect())
    }

    /// Parse `move <string>` / `pass` / `stop` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let t = line.trim_end_matches(['\r', '\n']);
            if t.trim().is_empty() || t.trim_start().starts_with('#') {
                continue;
            }
            let d = if let Some(m) = t.strip_prefix("move ") {
                Directive::Move(m.to_string())
            } else if t.trim() == "move" {
                Directive::Move(String::new())
            } else if t.trim() == "pass" {
                Directive::Pass
            } else if t.trim() == "stop" {
                Directive::Stop
            } else {
                return Err(format!("line {}: expected `move <m>`, `pass` or `stop`", n + 1));
            };
            out.push(d);
        }
        Ok(ScriptEnv::new(out))
    }
}

impl Environment for ScriptEnv {
    fn on_permission(&mut self, _: &GameRef, _: &[Labmove]) -> Option<String> {
        if self.stopped {
            return None;
        }
        let d = self.directives.get(self.next).cloned();
        self.next += 1;
        match d {
            Some(Directive::Move(m)) => Some(m),
            Some(Directive::Pass) => None,
            Some(Directive::Stop) | None => {
                self.stopped = true;
                None
            }
        }
    }

    fn exhausted(&self) -> bool {
        self.stopped || self.next >= self.directives.len()
    }
}

/// Picks uniformly among legal candidate moves, passing now and then,
/// and stops after a randomly drawn number of moves.
#[derive(Clone, Debug)]
pub struct RandomEnv {
    rng: ChaCha8Rng,
    p_pass: f64,
    target: usize,
    made: usize,
    stuck: bool,
    caps: MoveCaps,
}

impl RandomEnv {
    pub fn new(seed: u64, max_moves: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p_pass = rng.gen_range(0.1..0.5);
        let target = rng.gen_range(0..=max_moves);
        RandomEnv { rng, p_pass, target, made: 0, stuck: false, caps: MoveCaps::default() }
    }

    pub fn with_caps(mut self, caps: MoveCaps) -> Self {
        self.caps = caps;
        self
    }
}

impl Environment for RandomEnv {
    fn on_permission(&mut self, g: &GameRef, run: &[Labmove]) -> Option<String> {
        if self.made >= self.target || self.rng.gen_bool(self.p_pass) {
            return None;
        }
        let moves = legal_moves(g, run, Some(Player::Env), &self.caps);
        if moves.is_empty() {
            self.stuck = true;
            return None;
        }
        self.stuck = false;
        self.made += 1;
        let k = self.rng.gen_range(0..moves.len());
        Some(moves[k].mv.clone())
    }

    fn exhausted(&self) -> bool {
        self.made >= self.target || self.stuck
    }
}
