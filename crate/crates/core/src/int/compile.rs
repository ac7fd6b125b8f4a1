//! From an INT derivation to a strategy expression for the sequent's formula reading.
//!
//! Each rule is handled by combining the premises' strategies with named strategies and
//! CL2-extracted ones by modus ponens and transitivity. Every intermediate stage carries the
//! game it is meant to win, so a composition that does not fit fails at compile time.

use super::{check_proof, BadNode, IntProof, IntRule};
use crate::cl2::Schema;
use crate::formula::{Formula, Term};
use crate::strategies::{
    all_closure, bang_closure, compose_mp, transitivity, ShapeError, Shaped, StrategyExpr as X,
};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("invalid proof: {0}")]
    Invalid(#[from] BadNode),
    #[error("composition failed at {sequent}: {err}")]
    Shape { sequent: String, err: ShapeError },
}

/// Compile a checked proof. The result's `game` is the formula reading of the root sequent.
pub fn compile(p: &IntProof) -> Result<Shaped, CompileError> {
    check_proof(p)?;
    node(p)
}

fn bangs(ctx: &[Formula]) -> Vec<Formula> {
    ctx.iter().cloned().map(Formula::bang).collect()
}

fn named(expr: X, game: Formula) -> Shaped {
    Shaped::new(expr, game)
}

fn imp(a: Formula, b: Formula) -> Formula {
    Formula::implies(a, b)
}

/// Atoms `name1..namek` bound to `items`.
fn seq(name: &str, items: &[Formula]) -> Vec<(String, Formula)> {
    items.iter().enumerate().map(|(j, g)| (format!("{name}{}", j + 1), g.clone())).collect()
}

fn one(name: &str, g: &Formula) -> Vec<(String, Formula)> {
    vec![(name.to_string(), g.clone())]
}

/// The CL2 strategy for `general`, playing the instance with atoms replaced per `subs`.
fn instance(general: Formula, subs: Vec<(String, Formula)>) -> Shaped {
    let game = general.substitute_atoms(&|n| subs.iter().find(|(a, _)| a == n).map(|(_, g)| g.clone()));
    Shaped::new(X::Cl2(general), game)
}

fn schema(s: Schema, subs: Vec<Vec<(String, Formula)>>) -> Shaped {
    instance(s.formula().expect("schema parameters in range"), subs.into_iter().flatten().collect())
}

/// `(P -> Q1 /\ Q2) -> (W /\ P -> W /\ Q1 /\ Q2)`, the flat form used by contraction.
fn duplicate_last(w: &[Formula], f: &Formula) -> Shaped {
    let ws: Vec<Formula> = (1..=w.len()).map(|j| Formula::atom(&format!("W{j}"))).collect();
    let (p, q1, q2) = (Formula::atom("P"), Formula::atom("Q1"), Formula::atom("Q2"));
    let mut ante = ws.clone();
    ante.push(p.clone());
    let mut cons = ws;
    cons.extend([q1.clone(), q2.clone()]);
    let general = imp(
        imp(p, Formula::ParConj(vec![q1, q2])),
        imp(Formula::ParConj(ante), Formula::ParConj(cons)),
    );
    let mut subs = seq("W", w);
    subs.extend([("P".into(), f.clone()), ("Q1".into(), f.clone()), ("Q2".into(), f.clone())]);
    instance(general, subs)
}

/// From `X -> Y`, the solution of `W /\ X -> W /\ Y` (or `X -> Y` itself when `W` is empty).
fn in_context(w: &[Formula], e: Shaped) -> Result<Shaped, ShapeError> {
    if w.is_empty() {
        return Ok(e);
    }
    let Formula::Implies(x, y) = &e.game else { return Err(ShapeError::NotImplication(e.game.to_string())) };
    let major = schema(
        Schema::C { k: 1, w: w.len(), u: 0 },
        vec![seq("W", w), one("R1", x), one("S1", y)],
    );
    compose_mp(vec![e], major)
}

fn node(p: &IntProof) -> Result<Shaped, CompileError> {
    let shape = |err| CompileError::Shape { sequent: p.sequent.to_string(), err };
    let out = rule(p).map_err(|e| match e {
        Step::Shape(err) => shape(err),
        Step::Nested(e) => e,
    })?;
    let want = p.sequent.to_formula();
    if out.game != want {
        return Err(shape(ShapeError::Mismatch { want: want.to_string(), got: out.game.to_string() }));
    }
    Ok(out)
}

enum Step {
    Shape(ShapeError),
    Nested(CompileError),
}

impl From<ShapeError> for Step {
    fn from(e: ShapeError) -> Self {
        Step::Shape(e)
    }
}

impl From<CompileError> for Step {
    fn from(e: CompileError) -> Self {
        Step::Nested(e)
    }
}

fn rule(p: &IntProof) -> Result<Shaped, Step> {
    let s = &p.sequent;
    let ctx = &s.context;
    let k = &s.succedent;
    let sub = |i: usize| node(&p.premises[i]);
    Ok(match &p.rule {
        IntRule::Identity => named(X::L6a, s.to_formula()),
        IntRule::Domination => named(X::L6b(k.clone()), s.to_formula()),
        IntRule::Exchange { pos } => {
            let prem = &p.premises[0].sequent.context;
            let b = bangs(prem);
            let (r, rest) = b.split_at(pos - 1);
            let major = schema(
                Schema::A { r: r.len(), s: rest.len() - 2 },
                vec![seq("R", r), one("P", &rest[0]), one("Q", &rest[1]), seq("S", &rest[2..]), one("T", k)],
            );
            compose_mp(vec![sub(0)?], major)?
        }
        IntRule::Weakening => {
            let b = bangs(ctx);
            let (f, r) = b.split_last().expect("checked");
            let major = schema(Schema::B { r: r.len() }, vec![seq("R", r), one("P", f), one("T", k)]);
            compose_mp(vec![sub(0)?], major)?
        }
        IntRule::Contraction => {
            let b = bangs(ctx);
            let (f, w) = b.split_last().expect("checked");
            let split = named(X::L6c, imp(f.clone(), Formula::ParConj(vec![f.clone(), f.clone()])));
            let widen = if w.is_empty() { split } else { compose_mp(vec![split], duplicate_last(w, f))? };
            transitivity(widen, sub(0)?)?
        }
        IntRule::RightImpl => {
            let Formula::Implies(bf, kk) = k else { unreachable!("checked") };
            let r = bangs(ctx);
            let major = schema(Schema::D { r: r.len() }, vec![seq("R", &r), one("P", bf), one("Q", kk)]);
            compose_mp(vec![sub(0)?], major)?
        }
        IntRule::LeftImpl => left_impl(p)?,
        IntRule::RightChoiceConj => {
            let Formula::ChoiceConj(ks) = k else { unreachable!("checked") };
            let r = bangs(ctx);
            let major = schema(Schema::H { r: r.len(), n: ks.len() }, vec![seq("R", &r), seq("S", ks)]);
            let prems = (0..ks.len()).map(sub).collect::<Result<Vec<_>, _>>()?;
            compose_mp(prems, major)?
        }
        IntRule::RightChoiceDisj { i, n } => {
            let Formula::ChoiceDisj(ks) = k else { unreachable!("checked") };
            let r = bangs(ctx);
            let major = schema(Schema::J { r: r.len(), n: *n, i: *i }, vec![seq("R", &r), seq("S", ks)]);
            compose_mp(vec![sub(0)?], major)?
        }
        IntRule::LeftChoiceConj { i, n } => {
            let (principal, g) = ctx.split_last().expect("checked");
            let Formula::ChoiceConj(fs) = principal else { unreachable!("checked") };
            let pick = named(
                X::L11a { i: *i, n: *n },
                imp(Formula::bang(principal.clone()), Formula::bang(fs[i - 1].clone())),
            );
            transitivity(in_context(&bangs(g), pick)?, sub(0)?)?
        }
        IntRule::LeftChoiceAll { t } => {
            let (principal, g) = ctx.split_last().expect("checked");
            let Formula::ChoiceAll(x, body) = principal else { unreachable!("checked") };
            let pick = named(
                X::L11b(t.clone()),
                imp(Formula::bang(principal.clone()), Formula::bang(body.subst1(x, t.clone()))),
            );
            transitivity(in_context(&bangs(g), pick)?, sub(0)?)?
        }
        IntRule::LeftChoiceDisj => {
            let (principal, g) = ctx.split_last().expect("checked");
            let Formula::ChoiceDisj(fs) = principal else { unreachable!("checked") };
            let r = bangs(g);
            let fb = bangs(fs);
            let cases = schema(
                Schema::I { r: r.len(), n: fs.len() },
                vec![seq("R", &r), seq("S", &fb), one("T", k)],
            );
            let prems = (0..fs.len()).map(sub).collect::<Result<Vec<_>, _>>()?;
            let by_cases = compose_mp(prems, cases)?;
            let distribute =
                named(X::L11c(fs.len()), imp(Formula::bang(principal.clone()), Formula::ChoiceDisj(fb)));
            transitivity(in_context(&r, distribute)?, by_cases)?
        }
        IntRule::RightChoiceExists { t } => {
            let Formula::ChoiceExists(x, body) = k else { unreachable!("checked") };
            let witness = named(X::Oct5b(t.clone()), imp(body.subst1(x, t.clone()), k.clone()));
            if ctx.is_empty() {
                compose_mp(vec![sub(0)?], witness)?
            } else {
                transitivity(sub(0)?, witness)?
            }
        }
        IntRule::RightChoiceAll { y } => right_all(p, y)?,
        IntRule::LeftChoiceExists { y } => left_exists(p, y)?,
    })
}

/// `@y(G -> K(y))` from the premise, then through `@y G -> @y K(y)` to `@x K(x)`.
/// With an empty context there is nothing to distribute over, and the closure
/// is renamed directly.
fn right_all(p: &IntProof, y: &str) -> Result<Shaped, Step> {
    let k = &p.sequent.succedent;
    let Formula::ChoiceAll(_, _) = k else { unreachable!("checked") };
    let prem = node(&p.premises[0])?;
    let ky = p.premises[0].sequent.succedent.clone();
    let rename = named(X::Oct99, imp(Formula::all(y, ky.clone()), k.clone()));
    let closed = all_closure(y, prem);
    let Some(g) = Formula::conj_of(bangs(&p.sequent.context)) else {
        return Ok(compose_mp(vec![closed], rename)?);
    };
    let dist = named(
        X::Oct5a,
        imp(closed.game.clone(), imp(Formula::all(y, g.clone()), Formula::all(y, ky))),
    );
    let lifted = compose_mp(vec![closed], dist)?;
    let vacuous = named(X::Oct5c, imp(g.clone(), Formula::all(y, g)));
    Ok(transitivity(transitivity(vacuous, lifted)?, rename)?)
}

/// `G, ?xF(x) => K` from `G, F(y) => K` via `@y(...)`, the distribution of `@y` over the
/// context and `?y` over the principal, and the renaming of `y` back to `x`.
fn left_exists(p: &IntProof, y: &str) -> Result<Shaped, Step> {
    let s = &p.sequent;
    let k = &s.succedent;
    let (principal, g) = s.context.split_last().expect("checked");
    let Formula::ChoiceExists(x, body) = principal else { unreachable!("checked") };
    let gb = bangs(g);
    let fy = Formula::bang(body.subst1(x, Term::var(y)));
    let fx = Formula::bang((**body).clone());

    let closed = all_closure(y, node(&p.premises[0])?);
    let mut ante: Vec<Formula> = gb.iter().map(|gi| Formula::all(y, gi.clone())).collect();
    ante.push(Formula::exists(y, fy.clone()));
    let dist = named(
        X::Oct5d(gb.len()),
        imp(closed.game.clone(), imp(Formula::conj_of(ante.clone()).expect("nonempty"), Formula::exists(y, k.clone()))),
    );
    let lifted = compose_mp(vec![closed], dist)?;
    let drop_y = named(X::Oct5e, imp(Formula::exists(y, k.clone()), k.clone()));
    let mut body_k = transitivity(lifted, drop_y)?;

    if !gb.is_empty() {
        let vacuous: Vec<Shaped> = gb
            .iter()
            .map(|gi| named(X::Oct5c, imp(gi.clone(), Formula::all(y, gi.clone()))))
            .collect();
        let r = gb.clone();
        let sv: Vec<Formula> = gb.iter().map(|gi| Formula::all(y, gi.clone())).collect();
        let spread = schema(
            Schema::C { k: gb.len(), w: 0, u: 1 },
            vec![seq("R", &r), seq("S", &sv), one("U1", &Formula::exists(y, fy.clone()))],
        );
        body_k = transitivity(compose_mp(vacuous, spread)?, body_k)?;
    }

    let rename = named(X::Oct99, imp(Formula::exists(x, fx.clone()), Formula::exists(y, fy)));
    let renamed = transitivity(in_context(&gb, rename)?, body_k)?;
    let pull = named(X::L11d, imp(Formula::bang(principal.clone()), Formula::exists(x, fx)));
    Ok(transitivity(in_context(&gb, pull)?, renamed)?)
}

/// `G, H, K2 o- F => K1` from `G, F => K1` and `H => K2`.
fn left_impl(p: &IntProof) -> Result<Shaped, Step> {
    let (p1, p2) = (&p.premises[0], &p.premises[1]);
    let (f, g) = p1.sequent.context.split_last().expect("checked");
    let h = &p2.sequent.context;
    let k1 = &p1.sequent.succedent;
    let k2 = &p2.sequent.succedent;
    let hb = bangs(h);
    let bk2 = Formula::bang(k2.clone());
    let bbk2 = Formula::bang(bk2.clone());
    let bf = Formula::bang(f.clone());
    let principal = Formula::bang(Formula::int_impl(k2.clone(), f.clone()));

    let e1 = node(p2)?;
    // H -> !!K2
    let e5 = match Formula::conj_of(hb.clone()) {
        None => bang_closure(bang_closure(e1)),
        Some(conj) => {
            let bconj = Formula::bang(conj.clone());
            let l4 = |a: &Formula, b: &Formula| {
                let (ba, bb) = (Formula::bang(a.clone()), Formula::bang(b.clone()));
                named(X::L4, imp(Formula::bang(imp(a.clone(), b.clone())), imp(ba, bb)))
            };
            let once = compose_mp(vec![bang_closure(e1)], l4(&conj, k2))?;
            let e4 = compose_mp(vec![bang_closure(once)], l4(&bconj, &bk2))?;
            let l5 = |a: &Formula| named(X::L5, imp(Formula::bang(a.clone()), Formula::bang(Formula::bang(a.clone()))));
            let up = if hb.len() == 1 {
                l5(&h[0])
            } else {
                let each: Vec<Shaped> = h.iter().map(l5).collect();
                let bh: Vec<Formula> = hb.iter().cloned().map(Formula::bang).collect();
                let spread = schema(Schema::C { k: h.len(), w: 0, u: 0 }, vec![seq("R", &hb), seq("S", &bh)]);
                let gather = named(X::L4a(h.len()), imp(Formula::ParConj(bh), bconj.clone()));
                transitivity(compose_mp(each, spread)?, gather)?
            };
            let twice = transitivity(up, l5(&conj))?;
            transitivity(twice, e4)?
        }
    };
    let e9 = named(X::L4, imp(principal.clone(), imp(bbk2.clone(), bf.clone())));
    let major_e = schema(
        Schema::E { r: hb.len() },
        vec![one("P", &principal), one("Q", &bbk2), one("T", &bf), seq("R", &hb)],
    );
    let e6 = compose_mp(vec![e9, e5], major_e)?;
    let major_f = schema(
        Schema::F { r: hb.len(), s: g.len() },
        vec![one("P", &principal), seq("R", &hb), one("Q", &bf), seq("S", &bangs(g)), one("T", k1)],
    );
    Ok(compose_mp(vec![e6, node(p1)?], major_f)?)
}
