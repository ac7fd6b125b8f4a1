//! Strategy expressions paired with the game each one is meant to win, so that
//! composition can check that the pieces fit before anything is run.

use super::StrategyExpr;
use crate::formula::Formula;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shaped {
    pub expr: StrategyExpr,
    pub game: Formula,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("expected an implication, got {0}")]
    NotImplication(String),
    #[error("shape mismatch: expected {want}, got {got}")]
    Mismatch { want: String, got: String },
}

impl Shaped {
    pub fn new(expr: StrategyExpr, game: Formula) -> Self {
        Shaped { expr, game }
    }
}

fn split_implication(f: &Formula) -> Result<(&Formula, &Formula), ShapeError> {
    match f {
        Formula::Implies(a, b) => Ok((a, b)),
        other => Err(ShapeError::NotImplication(other.to_string())),
    }
}

fn expect(want: &Formula, got: &Formula) -> Result<(), ShapeError> {
    if want == got {
        Ok(())
    } else {
        Err(ShapeError::Mismatch { want: want.to_string(), got: got.to_string() })
    }
}

/// Modus ponens: from solutions of `F1..Fn` and of `F1 /\ ... /\ Fn -> E`, a solution of `E`.
/// With no premises the major strategy is returned unchanged.
pub fn compose_mp(premises: Vec<Shaped>, major: Shaped) -> Result<Shaped, ShapeError> {
    if premises.is_empty() {
        return Ok(major);
    }
    let (ante, cons) = split_implication(&major.game)?;
    let want = Formula::conj_of(premises.iter().map(|p| p.game.clone()).collect()).expect("nonempty");
    expect(&want, ante)?;
    let game = cons.clone();
    Ok(Shaped::new(StrategyExpr::mp(premises.into_iter().map(|p| p.expr).collect(), major.expr), game))
}

/// From solutions of `F -> E` and `E -> G`, a solution of `F -> G`.
pub fn transitivity(a: Shaped, b: Shaped) -> Result<Shaped, ShapeError> {
    let (f, e1) = split_implication(&a.game)?;
    let (e2, g) = split_implication(&b.game)?;
    expect(e1, e2)?;
    let game = Formula::implies(f.clone(), g.clone());
    Ok(Shaped::new(StrategyExpr::trans(a.expr, b.expr), game))
}

/// From a solution of `F`, a solution of `!F`.
pub fn bang_closure(a: Shaped) -> Shaped {
    Shaped::new(StrategyExpr::bang(a.expr), Formula::bang(a.game))
}

/// From a solution of `F`, a solution of `@xF`.
pub fn all_closure(x: &str, a: Shaped) -> Shaped {
    Shaped::new(StrategyExpr::all(x, a.expr), Formula::all(x, a.game))
}
