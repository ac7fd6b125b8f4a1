//! Strategies that run other strategies internally and route moves between them.

use crate::epm::{Action, Strategy};
use crate::game::{parse_bang_move, parse_numeral, split_index, BangMove, Labmove, Player, Valuation, SPADE};
use std::any::Any;
use std::collections::{BTreeMap, VecDeque};

/// Internal rounds per external action before permission is granted anyway.
const MAX_ROUNDS: usize = 64;
/// Consecutive moves a part may make in one round.
const MAX_TICKS: usize = 64;

/// An internally simulated strategy with the moves waiting to be shown to it.
#[derive(Clone)]
struct Part {
    s: Box<dyn Strategy>,
    inbox: VecDeque<String>,
}

impl Part {
    fn new(s: Box<dyn Strategy>) -> Self {
        Part { s, inbox: VecDeque::new() }
    }

    fn settled(&self) -> bool {
        self.inbox.is_empty() && self.s.settled()
    }

    /// Let the part act until it grants. Its own moves are returned; one pending
    /// message is delivered at the grant. `progressed` reports whether anything happened.
    fn turn(&mut self, val: &Valuation, progressed: &mut bool) -> Vec<String> {
        let mut out = Vec::new();
        for _ in 0..MAX_TICKS {
            match self.s.act(val) {
                Action::Move(m) => {
                    self.s.observe(&Labmove::machine(m.clone()));
                    out.push(m);
                    *progressed = true;
                }
                Action::Grant => {
                    if let Some(msg) = self.inbox.pop_front() {
                        self.s.observe(&Labmove::env(msg));
                        *progressed = true;
                    }
                    break;
                }
                Action::Idle => break,
            }
        }
        out
    }
}

/// Modus ponens: premises `e1..en` play `F1..Fn`, the major part plays
/// `F1 /\ ... /\ Fn -> E`, and the composite plays `E`.
#[derive(Clone)]
pub struct Composite {
    id: String,
    /// Premises first, the major part last.
    parts: Vec<Part>,
    outbox: VecDeque<String>,
    fault: Option<String>,
}

impl Composite {
    pub fn new(id: String, premises: Vec<Box<dyn Strategy>>, major: Box<dyn Strategy>) -> Self {
        let mut parts: Vec<Part> = premises.into_iter().map(Part::new).collect();
        parts.push(Part::new(major));
        Composite { id, parts, outbox: VecDeque::new(), fault: None }
    }

    /// The first routing failure, if any.
    pub fn fault(&self) -> Option<&str> {
        self.fault.as_deref()
    }

    fn n(&self) -> usize {
        self.parts.len() - 1
    }

    fn route(&mut self, from: usize, m: String) {
        let n = self.n();
        if from < n {
            let msg = if n == 1 { format!("1.{m}") } else { format!("1.{}.{m}", from + 1) };
            self.parts[n].inbox.push_back(msg);
            return;
        }
        if let Some(a) = m.strip_prefix("2.") {
            self.outbox.push_back(a.to_string());
            return;
        }
        let target = m.strip_prefix("1.").and_then(|b| {
            if n == 1 {
                Some((0, b.to_string()))
            } else {
                split_index(b).filter(|(i, _)| (1..=n).contains(i)).map(|(i, r)| (i - 1, r.to_string()))
            }
        });
        match target {
            Some((i, msg)) => self.parts[i].inbox.push_back(msg),
            None => self.fail(format!("major part made unroutable move {m:?}")),
        }
    }

    fn fail(&mut self, d: String) {
        if self.fault.is_none() {
            self.fault = Some(d);
        }
        self.outbox.push_back(SPADE.to_string());
    }
}

impl Strategy for Composite {
    fn observe(&mut self, lm: &Labmove) {
        if lm.player == Player::Env {
            let n = self.n();
            self.parts[n].inbox.push_back(format!("2.{}", lm.mv));
        }
    }

    fn act(&mut self, val: &Valuation) -> Action {
        for _ in 0..MAX_ROUNDS {
            if let Some(m) = self.outbox.pop_front() {
                return Action::Move(m);
            }
            let mut progressed = false;
            for k in 0..self.parts.len() {
                for m in self.parts[k].turn(val, &mut progressed) {
                    self.route(k, m);
                }
            }
            if !progressed {
                break;
            }
        }
        match self.outbox.pop_front() {
            Some(m) => Action::Move(m),
            None => Action::Grant,
        }
    }

    fn settled(&self) -> bool {
        self.outbox.is_empty() && self.parts.iter().all(Part::settled)
    }

    fn snapshot(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }

    fn id(&self) -> String {
        self.id.clone()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Plays `!F` with one copy of a strategy for `F` per leaf of the replication tree.
#[derive(Clone)]
pub struct BangClosure {
    id: String,
    copies: BTreeMap<String, Part>,
    outbox: VecDeque<String>,
}

impl BangClosure {
    pub fn new(id: String, e: Box<dyn Strategy>) -> Self {
        BangClosure { id, copies: BTreeMap::from([(String::new(), Part::new(e))]), outbox: VecDeque::new() }
    }

    /// Leaves of the replication tree, in lexicographic order.
    pub fn leaves(&self) -> Vec<&str> {
        self.copies.keys().map(String::as_str).collect()
    }

    /// The copy serving leaf `w`.
    pub fn copy(&self, w: &str) -> Option<&dyn Strategy> {
        self.copies.get(w).map(|p| p.s.as_ref())
    }
}

impl Strategy for BangClosure {
    fn observe(&mut self, lm: &Labmove) {
        if lm.player != Player::Env {
            return;
        }
        match parse_bang_move(&lm.mv) {
            Some(BangMove::Replicate(w)) => {
                if let Some(p) = self.copies.remove(w) {
                    self.copies.insert(format!("{w}0"), p.clone());
                    self.copies.insert(format!("{w}1"), p);
                }
            }
            Some(BangMove::At(w, a)) => {
                for (u, p) in self.copies.iter_mut() {
                    if u.starts_with(w) {
                        p.inbox.push_back(a.to_string());
                    }
                }
            }
            None => {}
        }
    }

    fn act(&mut self, val: &Valuation) -> Action {
        for _ in 0..MAX_ROUNDS {
            if let Some(m) = self.outbox.pop_front() {
                return Action::Move(m);
            }
            let mut progressed = false;
            for (u, p) in self.copies.iter_mut() {
                for m in p.turn(val, &mut progressed) {
                    self.outbox.push_back(format!("{u}.{m}"));
                }
            }
            if !progressed {
                break;
            }
        }
        match self.outbox.pop_front() {
            Some(m) => Action::Move(m),
            None => Action::Grant,
        }
    }

    fn settled(&self) -> bool {
        self.outbox.is_empty() && self.copies.values().all(Part::settled)
    }

    fn snapshot(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }

    fn id(&self) -> String {
        self.id.clone()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// Plays `@xF`: waits for the environment's constant, then runs the inner strategy
/// with `x` overridden in the valuation.
#[derive(Clone)]
pub struct AllClosure {
    id: String,
    x: String,
    chosen: Option<u64>,
    inner: Box<dyn Strategy>,
}

impl AllClosure {
    pub fn new(id: String, x: &str, inner: Box<dyn Strategy>) -> Self {
        AllClosure { id, x: x.to_string(), chosen: None, inner }
    }
}

impl Strategy for AllClosure {
    fn observe(&mut self, lm: &Labmove) {
        match self.chosen {
            Some(_) => self.inner.observe(lm),
            None if lm.player == Player::Env => self.chosen = parse_numeral(&lm.mv),
            None => {}
        }
    }

    fn act(&mut self, val: &Valuation) -> Action {
        match self.chosen {
            Some(c) => self.inner.act(&val.with(&self.x, c)),
            None => Action::Grant,
        }
    }

    fn settled(&self) -> bool {
        self.chosen.is_none() || self.inner.settled()
    }

    fn snapshot(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }

    fn id(&self) -> String {
        self.id.clone()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
