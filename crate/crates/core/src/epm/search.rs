//! Exhaustive adversary search over bounded environment behaviors.

use super::{HaltReason, Sim, Step, Strategy, Transcript};
use crate::game::{legal_moves, GameRef, MoveCaps, Player};
use crate::par::Exec;
use std::sync::atomic::{AtomicUsize, Ordering};
use thiserror::Error;

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    /// Maximum number of environment moves on a branch.
    pub depth: usize,
    pub caps: MoveCaps,
    /// Strategy steps per branch.
    pub budget: usize,
    /// Abort once this many leaves have been explored.
    pub max_leaves: usize,
    /// Also let the environment move at grants where the strategy still has pending work.
    pub branch_unsettled: bool,
    pub exec: Exec,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            depth: 2,
            caps: MoveCaps::default(),
            budget: 400,
            max_leaves: 2_000_000,
            branch_unsettled: false,
            exec: Exec::default(),
        }
    }
}

impl SearchConfig {
    pub fn depth(depth: usize) -> Self {
        SearchConfig { depth, ..SearchConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("combinatorial budget exceeded: more than {0} leaves")]
    LeafBudget(usize),
}

#[derive(Clone, Debug, Default)]
pub struct SearchReport {
    pub leaves: usize,
    /// The first lost play found, if any.
    pub counterexample: Option<Transcript>,
}

impl SearchReport {
    pub fn all_won(&self) -> bool {
        self.counterexample.is_none()
    }

    fn merge(&mut self, other: SearchReport) {
        self.leaves += other.leaves;
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
    }
}

struct Ctx<'c> {
    cfg: &'c SearchConfig,
    leaves: AtomicUsize,
}

impl Ctx<'_> {
    fn leaf(&self, t: Transcript) -> Result<SearchReport, SearchError> {
        let n = self.leaves.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.cfg.max_leaves {
            return Err(SearchError::LeafBudget(self.cfg.max_leaves));
        }
        let lost = t.verdict != Player::Machine;
        Ok(SearchReport { leaves: 1, counterexample: lost.then_some(t) })
    }
}

fn explore(mut sim: Sim<'_>, used: usize, top: bool, ctx: &Ctx<'_>) -> Result<SearchReport, SearchError> {
    loop {
        match sim.to_grant() {
            Step::Halted(t) => return ctx.leaf(t),
            Step::Granted => {
                let settled = sim.s.settled();
                let may_move = used < ctx.cfg.depth && (settled || ctx.cfg.branch_unsettled);
                let moves = if may_move {
                    legal_moves(sim.g, &sim.run, Some(Player::Env), &ctx.cfg.caps)
                } else {
                    Vec::new()
                };
                if moves.is_empty() {
                    if settled {
                        return ctx.leaf(sim.finish(HaltReason::Quiescent, None));
                    }
                    continue;
                }
                let mut options: Vec<Option<String>> = vec![None];
                options.extend(moves.into_iter().map(|l| Some(l.mv)));
                let run_child = |opt: Option<String>| -> Result<SearchReport, SearchError> {
                    let mut child = sim.clone();
                    let moved = opt.is_some();
                    match child.reply(opt) {
                        Err(t) => ctx.leaf(t),
                        Ok(_) if !moved && settled => ctx.leaf(child.finish(HaltReason::Quiescent, None)),
                        Ok(_) => explore(child, used + usize::from(moved), false, ctx),
                    }
                };
                if top {
                    let results = ctx.cfg.exec.map(options, run_child);
                    let mut rep = SearchReport::default();
                    for r in results {
                        rep.merge(r?);
                    }
                    return Ok(rep);
                }
                let mut rep = SearchReport::default();
                for opt in options {
                    rep.merge(run_child(opt)?);
                    if rep.counterexample.is_some() {
                        break;
                    }
                }
                return Ok(rep);
            }
        }
    }
}

/// Does `s` win against every environment making at most `cfg.depth` moves from the
/// bounded legal alphabet? Backtracking duplicates the strategy by snapshot.
pub fn wins_against_all(s: Box<dyn Strategy>, g: &GameRef, cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    let ctx = Ctx { cfg, leaves: AtomicUsize::new(0) };
    explore(Sim::new(s, g, cfg.budget), 0, true, &ctx)
}
