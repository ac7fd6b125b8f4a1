//! `!$ -> K` for INT formulas `K`, by recursion on `K`.

use super::expr::{BuildCtx, BuildError, StrategyExpr};
use super::{L6a, Reactive};
use crate::epm::{Action, Strategy};
use crate::formula::{Formula, Term};
use crate::game::{parse_numeral, Labmove, Player, Valuation, SPADE};
use std::any::Any;

#[derive(Clone)]
enum Phase {
    /// Make this move first, then hand over to the delegate built from `next`.
    Lead(String, Formula),
    /// Grounded atom: its index is read from the valuation on the first turn.
    Atom(String, Vec<Term>),
    /// Wait for the environment's `2.i` (or `2.c`) before recursing.
    Wait,
    /// The own lead move was made; skip observing it.
    Skip(Box<dyn Strategy>),
    Run(Box<dyn Strategy>),
}

#[derive(Clone)]
pub struct L6bStrategy {
    k: Formula,
    ctx: BuildCtx,
    phase: Phase,
}

impl L6bStrategy {
    pub fn build(k: &Formula, ctx: &BuildCtx) -> Result<Box<dyn Strategy>, BuildError> {
        if !k.is_int() {
            return Err(BuildError::NotInt(k.to_string()));
        }
        let phase = match k {
            Formula::Dollar => return Ok(Reactive::boxed(L6a)),
            Formula::Atom(p, ts) => Phase::Atom(p.clone(), ts.clone()),
            Formula::Implies(a, b) => {
                if !matches!(a.as_ref(), Formula::Bang(_)) {
                    return Err(BuildError::NotInt(k.to_string()));
                }
                return l6b_implication_expr(b).build(ctx);
            }
            Formula::ChoiceDisj(v) => Phase::Lead("2.1".into(), v[0].clone()),
            Formula::ChoiceExists(x, e) => Phase::Lead("2.1".into(), e.subst1(x, Term::Const(1))),
            Formula::ChoiceConj(_) | Formula::ChoiceAll(..) => Phase::Wait,
            _ => return Err(BuildError::NotInt(k.to_string())),
        };
        Ok(Box::new(L6bStrategy { k: k.clone(), ctx: ctx.clone(), phase }))
    }

    fn delegate(&self, k: &Formula) -> Box<dyn Strategy> {
        match L6bStrategy::build(k, &self.ctx) {
            Ok(s) => s,
            Err(_) => Box::new(super::Idle),
        }
    }
}

/// `!$ -> (!E -> F)` as modus ponens from `!$ -> F` through two CL2 schemata.
/// The result does not depend on `E`.
pub(crate) fn l6b_implication_expr(fk: &Formula) -> StrategyExpr {
    let r = Formula::atom("R");
    let t = Formula::atom("T");
    let p = Formula::atom("P");
    let rt = Formula::implies(r.clone(), t.clone());
    let rpt = Formula::implies(Formula::ParConj(vec![r.clone(), p.clone()]), t.clone());
    let curried = Formula::implies(r, Formula::implies(p, t));
    StrategyExpr::Mp(
        vec![StrategyExpr::L6b(fk.clone())],
        Box::new(StrategyExpr::Trans(
            Box::new(StrategyExpr::Cl2(Formula::implies(rt, rpt.clone()))),
            Box::new(StrategyExpr::Cl2(Formula::implies(rpt, curried))),
        )),
    )
}

impl Strategy for L6bStrategy {
    fn observe(&mut self, lm: &Labmove) {
        match &mut self.phase {
            Phase::Skip(_) => {
                if let Phase::Skip(d) = std::mem::replace(&mut self.phase, Phase::Wait) {
                    self.phase = Phase::Run(d);
                }
            }
            Phase::Run(d) => d.observe(lm),
            Phase::Wait if lm.player == Player::Env => {
                let Some(c) = lm.mv.strip_prefix("2.").and_then(parse_numeral) else { return };
                let next = match &self.k {
                    Formula::ChoiceConj(v) => match v.get(c as usize - 1) {
                        Some(f) => f.clone(),
                        None => return,
                    },
                    Formula::ChoiceAll(x, e) => e.subst1(x, Term::Const(c)),
                    _ => return,
                };
                self.phase = Phase::Run(self.delegate(&next));
            }
            _ => {}
        }
    }

    fn act(&mut self, val: &Valuation) -> Action {
        match &mut self.phase {
            Phase::Lead(m, next) => {
                let m = m.clone();
                let next = next.clone();
                self.phase = Phase::Skip(self.delegate(&next));
                Action::Move(m)
            }
            Phase::Atom(p, ts) => {
                let args: Vec<u64> = ts.iter().map(|t| val.eval(t)).collect();
                let m = match self.ctx.signature.index_of(p, &args) {
                    Some(i) => format!("1..{}", i + 1),
                    None => SPADE.to_string(),
                };
                self.phase = Phase::Skip(Reactive::boxed(L6a));
                Action::Move(m)
            }
            Phase::Wait => Action::Grant,
            Phase::Skip(_) => Action::Grant,
            Phase::Run(d) => d.act(val),
        }
    }

    fn settled(&self) -> bool {
        match &self.phase {
            Phase::Wait => true,
            Phase::Run(d) => d.settled(),
            _ => false,
        }
    }

    fn snapshot(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }

    fn id(&self) -> String {
        format!("l6b[K={}]", self.k)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
