//! Named strategies, the colored-tree machine, combinators, and the strategy term language.

mod combinators;
mod expr;
mod l5;
mod l6b;
mod named;
mod shaped;

pub use combinators::{AllClosure, BangClosure, Composite};
pub use expr::{BuildCtx, BuildError, StrategyExpr};
pub use l5::{
    audit_points, blue_content, check_l5_audit, content, yellow_content, AuditPoint, CBit, Color, ColoredTree,
    L5Strategy, L5Violation,
};
pub use l6b::L6bStrategy;
pub use named::{
    ccs_reply, Ccs, L11a, L11b, L11c, L11d, L4a, L6a, L6c, Oct5a, Oct5b, Oct5c, Oct5d, Oct5e, L4,
};
pub use shaped::{all_closure, bang_closure, compose_mp, transitivity, ShapeError, Shaped};

use crate::epm::{Action, Strategy};
use crate::game::{Labmove, Player, Valuation};
use std::any::Any;
use std::collections::VecDeque;

/// A reaction table: moves to make at the start and in response to each environment move.
pub trait Rule: Clone + Send + Sync + 'static {
    fn start(&mut self, _val: &Valuation) -> Vec<String> {
        Vec::new()
    }

    fn on_env(&mut self, mv: &str, val: &Valuation) -> Vec<String>;

    fn id(&self) -> String;
}

/// Runs a [`Rule`]: environment moves are queued and answered one at a time,
/// and permission is granted whenever nothing is pending.
#[derive(Clone, Debug)]
pub struct Reactive<R> {
    pub rule: R,
    started: bool,
    inbox: VecDeque<String>,
    outbox: VecDeque<String>,
}

impl<R: Rule> Reactive<R> {
    pub fn new(rule: R) -> Self {
        Reactive { rule, started: false, inbox: VecDeque::new(), outbox: VecDeque::new() }
    }

    pub fn boxed(rule: R) -> Box<dyn Strategy> {
        Box::new(Reactive::new(rule))
    }
}

impl<R: Rule> Strategy for Reactive<R> {
    fn observe(&mut self, lm: &Labmove) {
        if lm.player == Player::Env {
            self.inbox.push_back(lm.mv.clone());
        }
    }

    fn act(&mut self, val: &Valuation) -> Action {
        if !self.started {
            self.started = true;
            self.outbox.extend(self.rule.start(val));
        }
        while self.outbox.is_empty() {
            let Some(m) = self.inbox.pop_front() else { break };
            self.outbox.extend(self.rule.on_env(&m, val));
        }
        match self.outbox.pop_front() {
            Some(m) => Action::Move(m),
            None => Action::Grant,
        }
    }

    fn settled(&self) -> bool {
        self.started && self.inbox.is_empty() && self.outbox.is_empty()
    }

    fn snapshot(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }

    fn id(&self) -> String {
        self.rule.id()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Grants forever. Used where a fault must not crash a play.
#[derive(Clone, Copy, Debug, Default)]
pub struct Idle;

impl Strategy for Idle {
    fn observe(&mut self, _: &Labmove) {}

    fn act(&mut self, _: &Valuation) -> Action {
        Action::Grant
    }

    fn settled(&self) -> bool {
        true
    }

    fn snapshot(&self) -> Box<dyn Strategy> {
        Box::new(*self)
    }

    fn id(&self) -> String {
        "idle".into()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
