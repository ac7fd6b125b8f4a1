//! Formulas of the extended language: AST, printer, and syntactic utilities.
//!
//! The parser lives in [`parse`]. Connectives are n-ary primitives and are
//! never flattened, because move prefixes `i.` depend on the literal arity.

mod parse;

pub use parse::{parse_formula, parse_sequent, parse_term, ParseError};

use std::collections::BTreeSet;
use std::fmt;

/// A term: a variable or a constant from {1, 2, ...}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(u64),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_string())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => write!(f, "{c}"),
        }
    }
}

/// A nonlogical letter with its arity, e.g. `P/2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub name: String,
    pub arity: usize,
}

impl Letter {
    pub fn new(name: &str, arity: usize) -> Self {
        Letter { name: name.to_string(), arity }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// A formula of the extended language.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Top,
    Bot,
    Dollar,
    Neg(Box<Formula>),
    ParConj(Vec<Formula>),
    ParDisj(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ChoiceConj(Vec<Formula>),
    ChoiceDisj(Vec<Formula>),
    ChoiceAll(String, Box<Formula>),
    ChoiceExists(String, Box<Formula>),
    Bang(Box<Formula>),
}

impl Formula {
    /// Nullary atom.
    pub fn atom(name: &str) -> Self {
        Formula::Atom(name.to_string(), Vec::new())
    }

    pub fn atom_with(name: &str, args: Vec<Term>) -> Self {
        Formula::Atom(name.to_string(), args)
    }

    pub fn neg(f: Formula) -> Self {
        Formula::Neg(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn bang(f: Formula) -> Self {
        Formula::Bang(Box::new(f))
    }

    /// `!a -> b`.
    pub fn int_impl(a: Formula, b: Formula) -> Self {
        Formula::implies(Formula::bang(a), b)
    }

    pub fn all(x: &str, f: Formula) -> Self {
        Formula::ChoiceAll(x.to_string(), Box::new(f))
    }

    pub fn exists(x: &str, f: Formula) -> Self {
        Formula::ChoiceExists(x.to_string(), Box::new(f))
    }

    /// Parallel conjunction of a list; one item is returned as is, none gives `None`.
    pub fn conj_of(mut items: Vec<Formula>) -> Option<Formula> {
        match items.len() {
            0 => None,
            1 => items.pop(),
            _ => Some(Formula::ParConj(items)),
        }
    }

    /// `items -> k` with the degenerate readings: no items gives `k`, one item gives `item -> k`.
    pub fn imp_of(items: Vec<Formula>, k: Formula) -> Formula {
        match Formula::conj_of(items) {
            None => k,
            Some(a) => Formula::implies(a, k),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Immediate subformulas, in order.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(..) | Formula::Top | Formula::Bot | Formula::Dollar => Vec::new(),
            Formula::Neg(a) | Formula::Bang(a) => vec![a],
            Formula::ChoiceAll(_, a) | Formula::ChoiceExists(_, a) => vec![a],
            Formula::Implies(a, b) => vec![a, b],
            Formula::ParConj(v)
            | Formula::ParDisj(v)
            | Formula::ChoiceConj(v)
            | Formula::ChoiceDisj(v) => v.iter().collect(),
        }
    }

    /// Subformula at a path of 1-based child indices.
    pub fn at_path(&self, path: &[usize]) -> Option<&Formula> {
        let mut cur = self;
        for &i in path {
            cur = *cur.children().get(i.checked_sub(1)?)?;
        }
        Some(cur)
    }

    /// Replace the subformula at `path` by `new`.
    pub fn replace_at(&self, path: &[usize], new: Formula) -> Option<Formula> {
        let Some((&i, rest)) = path.split_first() else {
            return Some(new);
        };
        let idx = i.checked_sub(1)?;
        let mut out = self.clone();
        match &mut out {
            Formula::Neg(a) | Formula::Bang(a) | Formula::ChoiceAll(_, a) | Formula::ChoiceExists(_, a) => {
                if idx != 0 {
                    return None;
                }
                **a = a.replace_at(rest, new)?;
            }
            Formula::Implies(a, b) => match idx {
                0 => **a = a.replace_at(rest, new)?,
                1 => **b = b.replace_at(rest, new)?,
                _ => return None,
            },
            Formula::ParConj(v) | Formula::ParDisj(v) | Formula::ChoiceConj(v) | Formula::ChoiceDisj(v) => {
                let c = v.get_mut(idx)?;
                *c = c.replace_at(rest, new)?;
            }
            _ => return None,
        }
        Some(out)
    }

    /// Variables with a free occurrence.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, args) => {
                for t in args {
                    if let Term::Var(v) = t {
                        if !bound.contains(v) {
                            out.insert(v.clone());
                        }
                    }
                }
            }
            Formula::ChoiceAll(x, a) | Formula::ChoiceExists(x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
            _ => {
                for c in self.children() {
                    c.collect_free(bound, out);
                }
            }
        }
    }

    /// Every variable occurring anywhere, free or bound (including binders).
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            Formula::Atom(_, args) => {
                for t in args {
                    if let Term::Var(v) = t {
                        out.insert(v.clone());
                    }
                }
            }
            Formula::ChoiceAll(x, _) | Formula::ChoiceExists(x, _) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn walk(&self, visit: &mut dyn FnMut(&Formula)) {
        visit(self);
        for c in self.children() {
            c.walk(visit);
        }
    }

    /// Nonlogical letters occurring in the formula.
    pub fn letters(&self) -> BTreeSet<Letter> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Atom(n, args) = f {
                out.insert(Letter::new(n, args.len()));
            }
        });
        out
    }

    /// Simultaneous substitution of free variable occurrences.
    pub fn substitute(&self, bindings: &[(String, Term)]) -> Formula {
        if bindings.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Atom(n, args) => Formula::Atom(
                n.clone(),
                args.iter()
                    .map(|t| match t {
                        Term::Var(v) => bindings
                            .iter()
                            .find(|(x, _)| x == v)
                            .map(|(_, t)| t.clone())
                            .unwrap_or_else(|| t.clone()),
                        c => c.clone(),
                    })
                    .collect(),
            ),
            Formula::Top | Formula::Bot | Formula::Dollar => self.clone(),
            Formula::Neg(a) => Formula::neg(a.substitute(bindings)),
            Formula::Bang(a) => Formula::bang(a.substitute(bindings)),
            Formula::Implies(a, b) => Formula::implies(a.substitute(bindings), b.substitute(bindings)),
            Formula::ParConj(v) => Formula::ParConj(v.iter().map(|c| c.substitute(bindings)).collect()),
            Formula::ParDisj(v) => Formula::ParDisj(v.iter().map(|c| c.substitute(bindings)).collect()),
            Formula::ChoiceConj(v) => Formula::ChoiceConj(v.iter().map(|c| c.substitute(bindings)).collect()),
            Formula::ChoiceDisj(v) => Formula::ChoiceDisj(v.iter().map(|c| c.substitute(bindings)).collect()),
            Formula::ChoiceAll(x, a) | Formula::ChoiceExists(x, a) => {
                let inner: Vec<(String, Term)> =
                    bindings.iter().filter(|(v, _)| v != x).cloned().collect();
                let body = Box::new(a.substitute(&inner));
                if matches!(self, Formula::ChoiceAll(..)) {
                    Formula::ChoiceAll(x.clone(), body)
                } else {
                    Formula::ChoiceExists(x.clone(), body)
                }
            }
        }
    }

    /// `substitute` for a single variable.
    pub fn subst1(&self, x: &str, t: Term) -> Formula {
        self.substitute(&[(x.to_string(), t)])
    }

    /// Substitute nullary atoms by formulas (a CL2 substitution).
    pub fn substitute_atoms(&self, map: &dyn Fn(&str) -> Option<Formula>) -> Formula {
        match self {
            Formula::Atom(n, args) if args.is_empty() => map(n).unwrap_or_else(|| self.clone()),
            Formula::Atom(..) | Formula::Top | Formula::Bot | Formula::Dollar => self.clone(),
            Formula::Neg(a) => Formula::neg(a.substitute_atoms(map)),
            Formula::Bang(a) => Formula::bang(a.substitute_atoms(map)),
            Formula::Implies(a, b) => Formula::implies(a.substitute_atoms(map), b.substitute_atoms(map)),
            Formula::ParConj(v) => Formula::ParConj(v.iter().map(|c| c.substitute_atoms(map)).collect()),
            Formula::ParDisj(v) => Formula::ParDisj(v.iter().map(|c| c.substitute_atoms(map)).collect()),
            Formula::ChoiceConj(v) => Formula::ChoiceConj(v.iter().map(|c| c.substitute_atoms(map)).collect()),
            Formula::ChoiceDisj(v) => Formula::ChoiceDisj(v.iter().map(|c| c.substitute_atoms(map)).collect()),
            Formula::ChoiceAll(x, a) => Formula::all(x, a.substitute_atoms(map)),
            Formula::ChoiceExists(x, a) => Formula::exists(x, a.substitute_atoms(map)),
        }
    }

    /// True iff the formula is in the INT sublanguage: atoms over uppercase letters,
    /// `$`, choice connectives and quantifiers, and `!F -> G`.
    pub fn is_int(&self) -> bool {
        match self {
            Formula::Atom(n, _) => n.starts_with(|c: char| c.is_ascii_uppercase()),
            Formula::Dollar => true,
            Formula::ChoiceConj(v) | Formula::ChoiceDisj(v) => v.len() >= 2 && v.iter().all(|f| f.is_int()),
            Formula::ChoiceAll(_, a) | Formula::ChoiceExists(_, a) => a.is_int(),
            Formula::Implies(a, b) => match a.as_ref() {
                Formula::Bang(inner) => inner.is_int() && b.is_int(),
                _ => false,
            },
            _ => false,
        }
    }

    /// Checks arities of n-ary connectives (n ≥ 2).
    pub fn well_formed(&self) -> bool {
        let own = match self {
            Formula::ParConj(v) | Formula::ParDisj(v) | Formula::ChoiceConj(v) | Formula::ChoiceDisj(v) => v.len() >= 2,
            _ => true,
        };
        own && self.children().iter().all(|c| c.well_formed())
    }

    fn level(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::ParDisj(_) | Formula::ChoiceDisj(_) => 2,
            Formula::ParConj(_) | Formula::ChoiceConj(_) => 3,
            _ => 4,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }

    fn fmt_nary(f: &mut fmt::Formatter<'_>, items: &[Formula], op: &str, level: u8) -> fmt::Result {
        for (k, c) in items.iter().enumerate() {
            if k > 0 {
                write!(f, " {op} ")?;
            }
            c.fmt_child(f, c.level() <= level)?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(n, args) => {
                write!(f, "{n}")?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (k, t) in args.iter().enumerate() {
                        if k > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{t}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
            Formula::Top => write!(f, "top"),
            Formula::Bot => write!(f, "bot"),
            Formula::Dollar => write!(f, "$"),
            Formula::Neg(a) => {
                write!(f, "~")?;
                a.fmt_child(f, a.level() < 4)
            }
            Formula::Bang(a) => {
                write!(f, "!")?;
                a.fmt_child(f, a.level() < 4)
            }
            Formula::ChoiceAll(x, a) => {
                write!(f, "@{x}.")?;
                a.fmt_child(f, a.level() < 4)
            }
            Formula::ChoiceExists(x, a) => {
                write!(f, "?{x}.")?;
                a.fmt_child(f, a.level() < 4)
            }
            Formula::ParConj(v) => Formula::fmt_nary(f, v, "/\\", 3),
            Formula::ChoiceConj(v) => Formula::fmt_nary(f, v, "&", 3),
            Formula::ParDisj(v) => Formula::fmt_nary(f, v, "\\/", 2),
            Formula::ChoiceDisj(v) => Formula::fmt_nary(f, v, "+", 2),
            Formula::Implies(a, b) => {
                a.fmt_child(f, a.level() <= 1)?;
                write!(f, " -> ")?;
                b.fmt_child(f, false)
            }
        }
    }
}

/// Is `t` free for `x` in `f`: no free occurrence of `x` lies in the scope of a
/// quantifier binding `t`. Always true for constants.
pub fn is_free_for(t: &Term, x: &str, f: &Formula) -> bool {
    let Term::Var(y) = t else {
        return true;
    };
    fn go(f: &Formula, x: &str, y: &str, under: bool) -> bool {
        match f {
            Formula::Atom(_, args) => !(under && args.iter().any(|a| matches!(a, Term::Var(v) if v == x))),
            Formula::ChoiceAll(z, a) | Formula::ChoiceExists(z, a) => {
                if z == x {
                    true
                } else {
                    go(a, x, y, under || z == y)
                }
            }
            _ => f.children().iter().all(|c| go(c, x, y, under)),
        }
    }
    go(f, x, y, false)
}

/// A sequent `G1, ..., Gn => K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub context: Vec<Formula>,
    pub succedent: Formula,
}

impl Sequent {
    pub fn new(context: Vec<Formula>, succedent: Formula) -> Self {
        Sequent { context, succedent }
    }

    /// The formula reading: `K`, `!E1 -> K`, or `!E1 /\ ... /\ !En -> K`.
    pub fn to_formula(&self) -> Formula {
        Formula::imp_of(self.context.iter().cloned().map(Formula::bang).collect(), self.succedent.clone())
    }

    pub fn is_int(&self) -> bool {
        self.context.iter().all(|f| f.is_int()) && self.succedent.is_int()
    }

    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = self.succedent.all_vars();
        for f in &self.context {
            out.extend(f.all_vars());
        }
        out
    }

    pub fn letters(&self) -> BTreeSet<Letter> {
        let mut out = self.succedent.letters();
        for f in &self.context {
            out.extend(f.letters());
        }
        out
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, g) in self.context.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        if self.context.is_empty() {
            write!(f, "=> {}", self.succedent)
        } else {
            write!(f, " => {}", self.succedent)
        }
    }
}

/// Shorthand used by tests and builders: parse or panic.
pub fn f(text: &str) -> Formula {
    parse_formula(text).unwrap_or_else(|e| panic!("bad formula {text:?}: {e}"))
}
