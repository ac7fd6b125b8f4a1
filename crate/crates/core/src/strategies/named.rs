//! Reaction tables for the fixed strategies.

use super::Rule;
use crate::formula::Term;
use crate::game::{parse_bang_move, parse_numeral, split_index, BangMove, Valuation};

/// Copy-cat between `1.` and `2.`.
pub fn ccs_reply(mv: &str) -> Option<String> {
    if let Some(a) = mv.strip_prefix("1.") {
        Some(format!("2.{a}"))
    } else {
        mv.strip_prefix("2.").map(|a| format!("1.{a}"))
    }
}

fn ccs_vec(mv: &str) -> Vec<String> {
    ccs_reply(mv).into_iter().collect()
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Ccs;

impl Rule for Ccs {
    fn on_env(&mut self, mv: &str, _: &Valuation) -> Vec<String> {
        ccs_vec(mv)
    }

    fn id(&self) -> String {
        "ccs".into()
    }
}

/// `!F -> F`: copy-cat through the root of the antecedent.
#[derive(Clone, Copy, Debug, Default)]
pub struct L6a;

impl Rule for L6a {
    fn on_env(&mut self, mv: &str, _: &Valuation) -> Vec<String> {
        if let Some(a) = mv.strip_prefix("1..") {
            vec![format!("2.{a}")]
        } else if let Some(a) = mv.strip_prefix("2.") {
            vec![format!("1..{a}")]
        } else {
            Vec::new()
        }
    }

    fn id(&self) -> String {
        "l6a".into()
    }
}

/// `!(F -> G) -> (!F -> !G)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct L4;

impl Rule for L4 {
    fn on_env(&mut self, mv: &str, _: &Valuation) -> Vec<String> {
        if let Some(rest) = mv.strip_prefix("2.2.") {
            return match parse_bang_move(rest) {
                Some(BangMove::Replicate(w)) => vec![format!("1.{w}:"), format!("2.1.{w}:")],
                Some(BangMove::At(w, a)) => vec![format!("1.{w}.2.{a}")],
                None => Vec::new(),
            };
        }
        if let Some(rest) = mv.strip_prefix("2.1.") {
            if let Some(BangMove::At(w, a)) = parse_bang_move(rest) {
                return vec![format!("1.{w}.1.{a}")];
            }
            return Vec::new();
        }
        if let Some(rest) = mv.strip_prefix("1.") {
            if let Some(BangMove::At(w, a)) = parse_bang_move(rest) {
                if let Some(b) = a.strip_prefix("2.") {
                    return vec![format!("2.2.{w}.{b}")];
                }
                if let Some(b) = a.strip_prefix("1.") {
                    return vec![format!("2.1.{w}.{b}")];
                }
            }
        }
        Vec::new()
    }

    fn id(&self) -> String {
        "l4".into()
    }
}

/// `!F1 /\ ... /\ !Fn -> !(F1 /\ ... /\ Fn)`. With `n = 1` the conjunctions disappear.
#[derive(Clone, Copy, Debug)]
pub struct L4a {
    pub n: usize,
}

impl Rule for L4a {
    fn on_env(&mut self, mv: &str, _: &Valuation) -> Vec<String> {
        let n = self.n;
        if let Some(rest) = mv.strip_prefix("2.") {
            return match parse_bang_move(rest) {
                Some(BangMove::Replicate(w)) if n == 1 => vec![format!("1.{w}:")],
                Some(BangMove::Replicate(w)) => (1..=n).map(|i| format!("1.{i}.{w}:")).collect(),
                Some(BangMove::At(w, a)) if n == 1 => vec![format!("1.{w}.{a}")],
                Some(BangMove::At(w, a)) => match split_index(a) {
                    Some((i, b)) if (1..=n).contains(&i) => vec![format!("1.{i}.{w}.{b}")],
                    _ => Vec::new(),
                },
                None => Vec::new(),
            };
        }
        if let Some(rest) = mv.strip_prefix("1.") {
            if n == 1 {
                if let Some(BangMove::At(w, a)) = parse_bang_move(rest) {
                    return vec![format!("2.{w}.{a}")];
                }
                return Vec::new();
            }
            if let Some((i, r)) = split_index(rest) {
                if let Some(BangMove::At(w, a)) = parse_bang_move(r) {
                    return vec![format!("2.{w}.{i}.{a}")];
                }
            }
        }
        Vec::new()
    }

    fn id(&self) -> String {
        format!("l4a[n={}]", self.n)
    }
}

/// `!F -> !F /\ !F`: split the antecedent at the root, branch 0 serving conjunct 1.
#[derive(Clone, Copy, Debug, Default)]
pub struct L6c;

impl Rule for L6c {
    fn start(&mut self, _: &Valuation) -> Vec<String> {
        vec!["1.:".into()]
    }

    fn on_env(&mut self, mv: &str, _: &Valuation) -> Vec<String> {
        if let Some(rest) = mv.strip_prefix("1.") {
            if let Some(a) = rest.strip_prefix('.') {
                return vec![format!("2.1..{a}"), format!("2.2..{a}")];
            }
            if let Some(m) = rest.strip_prefix('0') {
                return vec![format!("2.1.{m}")];
            }
            if let Some(m) = rest.strip_prefix('1') {
                return vec![format!("2.2.{m}")];
            }
            return Vec::new();
        }
        if let Some(m) = mv.strip_prefix("2.1.") {
            return vec![format!("1.0{m}")];
        }
        if let Some(m) = mv.strip_prefix("2.2.") {
            return vec![format!("1.1{m}")];
        }
        Vec::new()
    }

    fn id(&self) -> String {
        "l6c".into()
    }
}

/// Choose conjunct `i` of the antecedent's disjunction, then copy-cat.
#[derive(Clone, Copy, Debug)]
pub struct L11a {
    pub i: usize,
    pub n: usize,
}

impl Rule for L11a {
    fn start(&mut self, _: &Valuation) -> Vec<String> {
        vec![format!("1..{}", self.i)]
    }

    fn on_env(&mut self, mv: &str, _: &Valuation) -> Vec<String> {
        ccs_vec(mv)
    }

    fn id(&self) -> String {
        format!("l11a[i={},n={}]", self.i, self.n)
    }
}

/// Choose the value of `t` in the antecedent's existential, then copy-cat.
#[derive(Clone, Debug)]
pub struct L11b {
    pub t: Term,
}

impl Rule for L11b {
    fn start(&mut self, val: &Valuation) -> Vec<String> {
        vec![format!("1..{}", val.eval(&self.t))]
    }

    fn on_env(&mut self, mv: &str, _: &Valuation) -> Vec<String> {
        ccs_vec(mv)
    }

    fn id(&self) -> String {
        format!("l11b[t={}]", self.t)
    }
}

/// Wait for the environment's choice `1..j` and mirror it as `2.j`.
#[derive(Clone, Copy, Debug)]
pub struct L11c {
    pub n: usize,
    chosen: bool,
}

impl L11c {
    pub fn new(n: usize) -> Self {
        L11c { n, chosen: false }
    }
}

impl Rule for L11c {
    fn on_env(&mut self, mv: &str, _: &Valuation) -> Vec<String> {
        if self.chosen {
            return ccs_vec(mv);
        }
        match mv.strip_prefix("1..").and_then(parse_numeral) {
            Some(j) if (1..=self.n as u64).contains(&j) => {
                self.chosen = true;
                vec![format!("2.{j}")]
            }
            _ => Vec::new(),
        }
    }

    fn id(&self) -> String {
        format!("l11c[n={}]", self.n)
    }
}

/// Wait for the environment's constant `1..c` and mirror it as `2.c`.
#[derive(Clone, Copy, Debug, Default)]
pub struct L11d {
    chosen: bool,
}

impl Rule for L11d {
    fn on_env(&mut self, mv: &str, _: &Valuation) -> Vec<String> {
        if self.chosen {
            return ccs_vec(mv);
        }
        match mv.strip_prefix("1..").and_then(parse_numeral) {
            Some(c) => {
                self.chosen = true;
                vec![format!("2.{c}")]
            }
            None => Vec::new(),
        }
    }

    fn id(&self) -> String {
        "l11d".into()
    }
}

/// `@x(F -> G) -> (@xF -> @xG)`: wait for `2.2.c`, answer `1.c` and `2.1.c`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Oct5a {
    chosen: bool,
}

impl Rule for Oct5a {
    fn on_env(&mut self, mv: &str, _: &Valuation) -> Vec<String> {
        if self.chosen {
            return ccs_vec(mv);
        }
        match mv.strip_prefix("2.2.").and_then(parse_numeral) {
            Some(c) => {
                self.chosen = true;
                vec![format!("1.{c}"), format!("2.1.{c}")]
            }
            None => Vec::new(),
        }
    }

    fn id(&self) -> String {
        "oct5a".into()
    }
}

/// `@x(F1 /\ ... /\ Fn /\ E -> G) -> (@xF1 /\ ... /\ @xFn /\ ?xE -> ?xG)`:
/// wait for the choice `c` in `?xE`, then pick `c` everywhere else.
#[derive(Clone, Copy, Debug)]
pub struct Oct5d {
    pub n: usize,
    chosen: bool,
}

impl Oct5d {
    pub fn new(n: usize) -> Self {
        Oct5d { n, chosen: false }
    }
}

impl Rule for Oct5d {
    fn on_env(&mut self, mv: &str, _: &Valuation) -> Vec<String> {
        if self.chosen {
            return ccs_vec(mv);
        }
        let slot = if self.n == 0 { "2.1.".to_string() } else { format!("2.1.{}.", self.n + 1) };
        match mv.strip_prefix(slot.as_str()).and_then(parse_numeral) {
            Some(c) => {
                self.chosen = true;
                let mut out = vec![format!("2.2.{c}"), format!("1.{c}")];
                out.extend((1..=self.n).map(|i| format!("2.1.{i}.{c}")));
                out
            }
            None => Vec::new(),
        }
    }

    fn id(&self) -> String {
        format!("oct5d[n={}]", self.n)
    }
}

/// `F(t) -> ?xF(x)`: choose the value of `t`, then copy-cat.
#[derive(Clone, Debug)]
pub struct Oct5b {
    pub t: Term,
}

impl Rule for Oct5b {
    fn start(&mut self, val: &Valuation) -> Vec<String> {
        vec![format!("2.{}", val.eval(&self.t))]
    }

    fn on_env(&mut self, mv: &str, _: &Valuation) -> Vec<String> {
        ccs_vec(mv)
    }

    fn id(&self) -> String {
        format!("oct5b[t={}]", self.t)
    }
}

/// `F -> @xF` with `x` not in `F`: buffer antecedent moves until the
/// environment picks `2.c`, replay them, then copy-cat.
#[derive(Clone, Debug, Default)]
pub struct Oct5c {
    buffered: Vec<String>,
    chosen: bool,
}

impl Rule for Oct5c {
    fn on_env(&mut self, mv: &str, _: &Valuation) -> Vec<String> {
        if self.chosen {
            return ccs_vec(mv);
        }
        if let Some(a) = mv.strip_prefix("1.") {
            self.buffered.push(a.to_string());
            return Vec::new();
        }
        match mv.strip_prefix("2.").and_then(parse_numeral) {
            Some(_) => {
                self.chosen = true;
                self.buffered.drain(..).map(|a| format!("2.{a}")).collect()
            }
            None => Vec::new(),
        }
    }

    fn id(&self) -> String {
        "oct5c".into()
    }
}

/// `?xF -> F` with `x` not free in `F`: buffer consequent moves until the environment
/// picks `1.c`, replay them, then copy-cat.
#[derive(Clone, Debug, Default)]
pub struct Oct5e {
    buffered: Vec<String>,
    chosen: bool,
}

impl Rule for Oct5e {
    fn on_env(&mut self, mv: &str, _: &Valuation) -> Vec<String> {
        if self.chosen {
            return ccs_vec(mv);
        }
        if let Some(a) = mv.strip_prefix("2.") {
            self.buffered.push(a.to_string());
            return Vec::new();
        }
        match mv.strip_prefix("1.").and_then(parse_numeral) {
            Some(_) => {
                self.chosen = true;
                self.buffered.drain(..).map(|a| format!("1.{a}")).collect()
            }
            None => Vec::new(),
        }
    }

    fn id(&self) -> String {
        "oct5e".into()
    }
}
