//! A term language over the strategy registry.
//!
//! Syntax: a registry name, optional `[key=value,...]` parameters, and for combinators
//! a parenthesized argument list, e.g. `mp(l6a, ccs; trans(ccs, ccs))` or `all[x=y](l6a)`.

use super::{
    AllClosure, BangClosure, Ccs, Composite, L11a, L11b, L11c, L11d, L4a, L5Strategy, L6a, L6bStrategy, L6c,
    Oct5a, Oct5b, Oct5c, Oct5d, Oct5e, Reactive, L4,
};
use crate::epm::Strategy;
use crate::formula::{parse_formula, parse_term, Formula, Term};
use crate::game::Signature;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StrategyExpr {
    Ccs,
    L6a,
    L4,
    L4a(usize),
    L6c,
    L6b(Formula),
    L11a { i: usize, n: usize },
    L11b(Term),
    L11c(usize),
    L11d,
    Oct5a,
    Oct5b(Term),
    Oct5c,
    Oct5d(usize),
    Oct5e,
    Oct99,
    L5,
    /// The strategy extracted from a CL2 proof of the given general-base formula.
    Cl2(Formula),
    /// Modus ponens: premises, then the major strategy.
    Mp(Vec<StrategyExpr>, Box<StrategyExpr>),
    Trans(Box<StrategyExpr>, Box<StrategyExpr>),
    Bang(Box<StrategyExpr>),
    All(String, Box<StrategyExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("not an INT formula: {0}")]
    NotInt(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("CL2 formula has no proof: {0}")]
    Unprovable(String),
    #[error("unknown strategy {0:?}")]
    Unknown(String),
    #[error("cannot parse strategy expression: {0}")]
    Syntax(String),
}

/// What building a strategy may need to know about the game: only its signature,
/// which fixes the enumeration of grounded atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BuildCtx {
    pub signature: Signature,
}

impl BuildCtx {
    pub fn new(signature: Signature) -> Self {
        BuildCtx { signature }
    }
}

impl StrategyExpr {
    pub fn mp(premises: Vec<StrategyExpr>, major: StrategyExpr) -> Self {
        StrategyExpr::Mp(premises, Box::new(major))
    }

    pub fn trans(a: StrategyExpr, b: StrategyExpr) -> Self {
        StrategyExpr::Trans(Box::new(a), Box::new(b))
    }

    pub fn bang(e: StrategyExpr) -> Self {
        StrategyExpr::Bang(Box::new(e))
    }

    pub fn all(x: &str, e: StrategyExpr) -> Self {
        StrategyExpr::All(x.to_string(), Box::new(e))
    }

    pub fn cl2(f: Formula) -> Self {
        StrategyExpr::Cl2(f)
    }

    /// Number of nodes in the term.
    pub fn size(&self) -> usize {
        1 + match self {
            StrategyExpr::Mp(ps, c) => ps.iter().map(|p| p.size()).sum::<usize>() + c.size(),
            StrategyExpr::Trans(a, b) => a.size() + b.size(),
            StrategyExpr::Bang(e) | StrategyExpr::All(_, e) => e.size(),
            _ => 0,
        }
    }

    pub fn build(&self, ctx: &BuildCtx) -> Result<Box<dyn Strategy>, BuildError> {
        Ok(match self {
            StrategyExpr::Ccs | StrategyExpr::Oct99 => Reactive::boxed(Ccs),
            StrategyExpr::L6a => Reactive::boxed(L6a),
            StrategyExpr::L4 => Reactive::boxed(L4),
            StrategyExpr::L4a(n) => {
                if *n < 1 {
                    return Err(BuildError::BadParam("l4a needs n >= 1".into()));
                }
                Reactive::boxed(L4a { n: *n })
            }
            StrategyExpr::L6c => Reactive::boxed(L6c),
            StrategyExpr::L6b(k) => L6bStrategy::build(k, ctx)?,
            StrategyExpr::L11a { i, n } => {
                if *i < 1 || i > n {
                    return Err(BuildError::BadParam(format!("l11a needs 1 <= i <= n, got i={i}, n={n}")));
                }
                Reactive::boxed(L11a { i: *i, n: *n })
            }
            StrategyExpr::L11b(t) => Reactive::boxed(L11b { t: t.clone() }),
            StrategyExpr::L11c(n) => {
                if *n < 1 {
                    return Err(BuildError::BadParam("l11c needs n >= 1".into()));
                }
                Reactive::boxed(L11c::new(*n))
            }
            StrategyExpr::L11d => Reactive::boxed(L11d::default()),
            StrategyExpr::Oct5a => Reactive::boxed(Oct5a::default()),
            StrategyExpr::Oct5b(t) => Reactive::boxed(Oct5b { t: t.clone() }),
            StrategyExpr::Oct5c => Reactive::boxed(Oct5c::default()),
            StrategyExpr::Oct5d(n) => Reactive::boxed(Oct5d::new(*n)),
            StrategyExpr::Oct5e => Reactive::boxed(Oct5e::default()),
            StrategyExpr::L5 => Box::new(L5Strategy::new()),
            StrategyExpr::Cl2(f) => crate::cl2::strategy_for(f).map_err(|_| BuildError::Unprovable(f.to_string()))?,
            StrategyExpr::Mp(ps, c) => {
                if ps.is_empty() {
                    return c.build(ctx);
                }
                let premises = ps.iter().map(|p| p.build(ctx)).collect::<Result<Vec<_>, _>>()?;
                Box::new(Composite::new(self.to_string(), premises, c.build(ctx)?))
            }
            StrategyExpr::Trans(a, b) => {
                return StrategyExpr::mp(vec![(**a).clone(), (**b).clone()], StrategyExpr::Cl2(transitivity_schema()))
                    .build(ctx)
            }
            StrategyExpr::Bang(e) => Box::new(BangClosure::new(self.to_string(), e.build(ctx)?)),
            StrategyExpr::All(x, e) => Box::new(AllClosure::new(self.to_string(), x, e.build(ctx)?)),
        })
    }
}

/// `(P -> Q) /\ (Q -> T) -> (P -> T)`.
pub(crate) fn transitivity_schema() -> Formula {
    let (p, q, t) = (Formula::atom("P"), Formula::atom("Q"), Formula::atom("T"));
    Formula::implies(
        Formula::ParConj(vec![Formula::implies(p.clone(), q.clone()), Formula::implies(q, t.clone())]),
        Formula::implies(p, t),
    )
}

impl fmt::Display for StrategyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyExpr::Ccs => write!(f, "ccs"),
            StrategyExpr::L6a => write!(f, "l6a"),
            StrategyExpr::L4 => write!(f, "l4"),
            StrategyExpr::L4a(n) => write!(f, "l4a[n={n}]"),
            StrategyExpr::L6c => write!(f, "l6c"),
            StrategyExpr::L6b(k) => write!(f, "l6b[K={k}]"),
            StrategyExpr::L11a { i, n } => write!(f, "l11a[i={i},n={n}]"),
            StrategyExpr::L11b(t) => write!(f, "l11b[t={t}]"),
            StrategyExpr::L11c(n) => write!(f, "l11c[n={n}]"),
            StrategyExpr::L11d => write!(f, "l11d"),
            StrategyExpr::Oct5a => write!(f, "oct5a"),
            StrategyExpr::Oct5b(t) => write!(f, "oct5b[t={t}]"),
            StrategyExpr::Oct5c => write!(f, "oct5c"),
            StrategyExpr::Oct5d(n) => write!(f, "oct5d[n={n}]"),
            StrategyExpr::Oct5e => write!(f, "oct5e"),
            StrategyExpr::Oct99 => write!(f, "oct99"),
            StrategyExpr::L5 => write!(f, "l5"),
            StrategyExpr::Cl2(g) => write!(f, "cl2[F={g}]"),
            StrategyExpr::Mp(ps, c) => {
                write!(f, "mp(")?;
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "; {c})")
            }
            StrategyExpr::Trans(a, b) => write!(f, "trans({a}, {b})"),
            StrategyExpr::Bang(e) => write!(f, "bang({e})"),
            StrategyExpr::All(x, e) => write!(f, "all[x={x}]({e})"),
        }
    }
}

/// Split at top-level occurrences of any of `seps`, ignoring separators nested in brackets.
fn split_top(s: &str, seps: &[char]) -> Vec<(Option<char>, String)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let mut last_sep = None;
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth == 0 && seps.contains(&ch) {
            out.push((last_sep, std::mem::take(&mut cur)));
            last_sep = Some(ch);
        } else {
            cur.push(ch);
        }
    }
    out.push((last_sep, cur));
    out
}

/// Find the index of the bracket closing the one at `open`.
fn matching(s: &str, open: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices().skip_while(|(i, _)| *i < open) {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

struct Params(Vec<(String, String)>);

impl Params {
    fn get(&self, key: &str) -> Result<&str, BuildError> {
        self.0
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| BuildError::BadParam(format!("missing parameter {key}")))
    }

    fn usize(&self, key: &str) -> Result<usize, BuildError> {
        let v = self.get(key)?;
        v.parse().map_err(|_| BuildError::BadParam(format!("{key}={v} is not a number")))
    }

    fn formula(&self, key: &str) -> Result<Formula, BuildError> {
        parse_formula(self.get(key)?).map_err(|e| BuildError::BadParam(format!("{key}: {e}")))
    }

    fn term(&self, key: &str) -> Result<Term, BuildError> {
        parse_term(self.get(key)?).map_err(|e| BuildError::BadParam(format!("{key}: {e}")))
    }
}

impl std::str::FromStr for StrategyExpr {
    type Err = BuildError;

    fn from_str(s: &str) -> Result<Self, BuildError> {
        let s = s.trim();
        let syntax = || BuildError::Syntax(s.to_string());
        let name_end = s.find(['[', '(']).unwrap_or(s.len());
        let name = s[..name_end].trim();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric()) {
            return Err(syntax());
        }
        let mut rest = name_end;
        let mut params = Params(Vec::new());
        if s[rest..].starts_with('[') {
            let close = matching(s, rest).ok_or_else(syntax)?;
            for (_, kv) in split_top(&s[rest + 1..close], &[',']) {
                let (k, v) = kv.split_once('=').ok_or_else(syntax)?;
                params.0.push((k.trim().to_string(), v.trim().to_string()));
            }
            rest = close + 1;
        }
        let mut args: Vec<(Option<char>, StrategyExpr)> = Vec::new();
        let has_args = s[rest..].starts_with('(');
        if has_args {
            let close = matching(s, rest).ok_or_else(syntax)?;
            if close + 1 != s.len() {
                return Err(syntax());
            }
            let inner = &s[rest + 1..close];
            if !inner.trim().is_empty() {
                for (sep, part) in split_top(inner, &[',', ';']) {
                    if part.trim().is_empty() {
                        if sep.is_none() && name == "mp" {
                            continue;
                        }
                        return Err(syntax());
                    }
                    args.push((sep, part.parse()?));
                }
            }
        } else if rest != s.len() {
            return Err(syntax());
        }
        let arity = |k: usize| if args.len() == k && has_args { Ok(()) } else { Err(syntax()) };
        let leaf = |e: StrategyExpr| if has_args { Err(syntax()) } else { Ok(e) };
        match name {
            "ccs" => leaf(StrategyExpr::Ccs),
            "l6a" => leaf(StrategyExpr::L6a),
            "l4" => leaf(StrategyExpr::L4),
            "l4a" => leaf(StrategyExpr::L4a(params.usize("n")?)),
            "l6c" => leaf(StrategyExpr::L6c),
            "l6b" => leaf(StrategyExpr::L6b(params.formula("K")?)),
            "l11a" => leaf(StrategyExpr::L11a { i: params.usize("i")?, n: params.usize("n")? }),
            "l11b" => leaf(StrategyExpr::L11b(params.term("t")?)),
            "l11c" => leaf(StrategyExpr::L11c(params.usize("n")?)),
            "l11d" => leaf(StrategyExpr::L11d),
            "oct5a" => leaf(StrategyExpr::Oct5a),
            "oct5b" => leaf(StrategyExpr::Oct5b(params.term("t")?)),
            "oct5c" => leaf(StrategyExpr::Oct5c),
            "oct5d" => leaf(StrategyExpr::Oct5d(params.usize("n")?)),
            "oct5e" => leaf(StrategyExpr::Oct5e),
            "oct99" => leaf(StrategyExpr::Oct99),
            "l5" => leaf(StrategyExpr::L5),
            "cl2" => leaf(StrategyExpr::Cl2(params.formula("F")?)),
            "mp" => {
                let major_at = args.iter().position(|(sep, _)| *sep == Some(';')).ok_or_else(syntax)?;
                if major_at + 1 != args.len() {
                    return Err(syntax());
                }
                let major = args.pop().ok_or_else(syntax)?.1;
                Ok(StrategyExpr::mp(args.into_iter().map(|(_, e)| e).collect(), major))
            }
            "trans" => {
                arity(2)?;
                let b = args.pop().ok_or_else(syntax)?.1;
                let a = args.pop().ok_or_else(syntax)?.1;
                Ok(StrategyExpr::trans(a, b))
            }
            "bang" => {
                arity(1)?;
                Ok(StrategyExpr::bang(args.pop().ok_or_else(syntax)?.1))
            }
            "all" => {
                arity(1)?;
                let x = params.get("x")?.to_string();
                Ok(StrategyExpr::all(&x, args.pop().ok_or_else(syntax)?.1))
            }
            other => Err(BuildError::Unknown(other.to_string())),
        }
    }
}
