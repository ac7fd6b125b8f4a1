//! The EPM play model: strategies grant permission, environments move only when allowed.

mod env;
mod search;

pub use env::{Directive, Environment, RandomEnv, ScriptEnv, SilentEnv};
pub use search::{wins_against_all, SearchConfig, SearchError, SearchReport};

use crate::game::{ConstantGame, GameRef, Labmove, Player, Run, Valuation};
use std::any::Any;
use std::fmt;

/// What a strategy does on its turn.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    Move(String),
    Grant,
    Idle,
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Move(m) => write!(f, "move {m}"),
            Action::Grant => write!(f, "grant"),
            Action::Idle => write!(f, "idle"),
        }
    }
}

/// A duplicable, interpretation-blind machine.
///
/// `observe` is called for every labmove appended to the run, the strategy's own moves included.
pub trait Strategy: Send + Sync {
    fn observe(&mut self, lm: &Labmove);
    fn act(&mut self, val: &Valuation) -> Action;
    /// No pending work: nothing will happen until the environment moves.
    fn settled(&self) -> bool;
    fn snapshot(&self) -> Box<dyn Strategy>;
    fn id(&self) -> String;
    fn as_any(&self) -> &dyn Any;
}

impl Clone for Box<dyn Strategy> {
    fn clone(&self) -> Self {
        self.snapshot()
    }
}

/// Why a simulation stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HaltReason {
    Quiescent,
    Budget,
    EnvIllegal,
    MachineIllegal,
}

impl fmt::Display for HaltReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HaltReason::Quiescent => "quiescent",
            HaltReason::Budget => "budget",
            HaltReason::EnvIllegal => "env_illegal",
            HaltReason::MachineIllegal => "machine_illegal",
        })
    }
}

/// The record of one play.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub run: Run,
    pub verdict: Player,
    pub steps: usize,
    pub grants: usize,
    pub halted: HaltReason,
    /// Every strategy action in order.
    pub actions: Vec<Action>,
    pub diagnostic: Option<String>,
}

impl Transcript {
    /// Moves made by the machine, in order.
    pub fn machine_moves(&self) -> Vec<&str> {
        self.run.iter().filter(|l| l.player == Player::Machine).map(|l| l.mv.as_str()).collect()
    }

    /// The text form: header lines then one labmove per line.
    pub fn to_text(&self, g: &GameRef) -> String {
        let mut out = format!("#game {}\n#valuation {}\n", g.formula, g.val);
        for lm in &self.run {
            out.push_str(&format!("{lm}\n"));
        }
        out.push_str(&format!(
            "#verdict {}\n#halted {}\n#steps {}\n#grants {}\n",
            self.verdict, self.halted, self.steps, self.grants
        ));
        if let Some(d) = &self.diagnostic {
            out.push_str(&format!("#diagnostic {d}\n"));
        }
        out
    }

    /// Parse the labmove lines of a transcript, ignoring headers.
    pub fn parse_run(text: &str) -> Result<Run, String> {
        let mut run = Vec::new();
        for line in text.lines() {
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let (p, m) = line.split_once(' ').unwrap_or((line, ""));
            let p = Player::from_symbol(p).ok_or_else(|| format!("bad labmove line {line:?}"))?;
            run.push(Labmove::new(p, m));
        }
        Ok(run)
    }
}

/// A simulation in progress; cloning duplicates the strategy by snapshot.
#[derive(Clone)]
pub(crate) struct Sim<'g> {
    pub g: &'g GameRef,
    pub s: Box<dyn Strategy>,
    pub run: Run,
    pub actions: Vec<Action>,
    pub steps: usize,
    pub grants: usize,
    pub budget: usize,
}

pub(crate) enum Step {
    /// The strategy granted permission; the environment may reply.
    Granted,
    Halted(Transcript),
}

impl<'g> Sim<'g> {
    pub fn new(s: Box<dyn Strategy>, g: &'g GameRef, budget: usize) -> Self {
        Sim { g, s, run: Vec::new(), actions: Vec::new(), steps: 0, grants: 0, budget: budget.max(1) }
    }

    pub fn finish(&self, halted: HaltReason, diagnostic: Option<String>) -> Transcript {
        let verdict = match halted {
            HaltReason::EnvIllegal => Player::Machine,
            HaltReason::MachineIllegal => Player::Env,
            _ => self.g.winner(&self.run),
        };
        Transcript {
            run: self.run.clone(),
            verdict,
            steps: self.steps,
            grants: self.grants,
            halted,
            actions: self.actions.clone(),
            diagnostic,
        }
    }

    fn legal_with(&self, lm: &Labmove) -> bool {
        let mut r = self.run.clone();
        r.push(lm.clone());
        self.g.is_legal(&r)
    }

    /// Let the strategy act until it grants permission or the play halts.
    pub fn to_grant(&mut self) -> Step {
        let mut idle_streak = 0;
        loop {
            if self.steps >= self.budget {
                return Step::Halted(self.finish(HaltReason::Budget, None));
            }
            self.steps += 1;
            let a = self.s.act(&self.g.val);
            self.actions.push(a.clone());
            match a {
                Action::Move(m) => {
                    idle_streak = 0;
                    let lm = Labmove::machine(m);
                    let ok = self.legal_with(&lm);
                    self.run.push(lm.clone());
                    self.s.observe(&lm);
                    if !ok {
                        let d = format!("machine made illegal move {:?} ({})", lm.mv, self.s.id());
                        return Step::Halted(self.finish(HaltReason::MachineIllegal, Some(d)));
                    }
                }
                Action::Grant => {
                    self.grants += 1;
                    return Step::Granted;
                }
                Action::Idle => {
                    idle_streak += 1;
                    if self.s.settled() && idle_streak > 1 {
                        return Step::Halted(self.finish(HaltReason::Quiescent, None));
                    }
                }
            }
        }
    }

    /// Apply the environment's reply to a grant. `Err` carries the halting transcript
    /// for an illegal move; `Ok(true)` means a move was appended.
    pub fn reply(&mut self, mv: Option<String>) -> Result<bool, Transcript> {
        let Some(m) = mv else { return Ok(false) };
        let lm = Labmove::env(m);
        if !self.legal_with(&lm) {
            let d = format!("environment attempted illegal move {:?}", lm.mv);
            return Err(self.finish(HaltReason::EnvIllegal, Some(d)));
        }
        self.run.push(lm.clone());
        self.s.observe(&lm);
        Ok(true)
    }
}

/// Play `s` against `env` on `g` for at most `budget` strategy steps.
pub fn simulate(s: Box<dyn Strategy>, env: &mut dyn Environment, g: &GameRef, budget: usize) -> Transcript {
    let mut sim = Sim::new(s, g, budget);
    loop {
        match sim.to_grant() {
            Step::Halted(t) => return t,
            Step::Granted => {
                let mv = env.on_permission(g, &sim.run);
                match sim.reply(mv) {
                    Err(t) => return t,
                    Ok(true) => {}
                    Ok(false) => {
                        if sim.s.settled() && env.exhausted() {
                            return sim.finish(HaltReason::Quiescent, None);
                        }
                    }
                }
            }
        }
    }
}

/// Finite fairness surrogate: no `window` consecutive actions without a grant.
pub fn check_fairness(t: &Transcript, window: usize) -> bool {
    let mut streak = 0;
    for a in &t.actions {
        if *a == Action::Grant {
            streak = 0;
        } else {
            streak += 1;
            if streak >= window {
                return false;
            }
        }
    }
    true
}
