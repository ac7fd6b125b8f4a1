//! Recursive-descent parser for the ASCII formula and sequent grammar.

use super::{Formula, Sequent, Term};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("letter {name} used with arity {first} and arity {second} (offset {pos})")]
    Arity { name: String, first: usize, second: usize, pos: usize },
    #[error("connective with fewer than two operands")]
    ShortConnective,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Sym(&'static str),
}

const SYMS: &[&str] = &["=>", "->", "/\\", "\\/", "~", "!", "@", "?", ".", "(", ")", ",", "&", "+", "$"];

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: u64 = text[start..i].parse().map_err(|_| ParseError::Syntax {
                pos: start,
                msg: "numeral out of range".into(),
            })?;
            out.push((Tok::Num(n), start));
            continue;
        }
        match SYMS.iter().find(|s| text[i..].starts_with(**s)) {
            Some(s) => {
                out.push((Tok::Sym(s), i));
                i += s.len();
            }
            None => {
                return Err(ParseError::Syntax {
                    pos: i,
                    msg: format!("unexpected character {:?}", text[i..].chars().next().unwrap_or('?')),
                })
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    arities: BTreeMap<String, usize>,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0, end: text.len(), arities: BTreeMap::new() })
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.offset(), msg: msg.to_string() })
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), ParseError> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.err(&format!("expected `{sym}`"))
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            let rhs = self.implication()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn nary(
        &mut self,
        ops: [&'static str; 2],
        next: fn(&mut Self) -> Result<Formula, ParseError>,
        build: [fn(Vec<Formula>) -> Formula; 2],
    ) -> Result<Formula, ParseError> {
        let first = next(self)?;
        let mut items = vec![first];
        let mut chosen: Option<usize> = None;
        loop {
            let which = match self.peek() {
                Some(Tok::Sym(s)) if *s == ops[0] => 0,
                Some(Tok::Sym(s)) if *s == ops[1] => 1,
                _ => break,
            };
            if let Some(c) = chosen {
                if c != which {
                    return self.err("mixed connectives of equal precedence need parentheses");
                }
            }
            chosen = Some(which);
            self.pos += 1;
            items.push(next(self)?);
        }
        Ok(match chosen {
            None => items.pop().expect("one operand"),
            Some(c) => build[c](items),
        })
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        self.nary(["\\/", "+"], Self::conjunction, [Formula::ParDisj, Formula::ChoiceDisj])
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        self.nary(["/\\", "&"], Self::unary, [Formula::ParConj, Formula::ChoiceConj])
    }

    fn variable(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(v)) if v.starts_with(|c: char| c.is_ascii_lowercase()) && v != "top" && v != "bot" => {
                let v = v.clone();
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected a lowercase variable"),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat("~") {
            return Ok(Formula::neg(self.unary()?));
        }
        if self.eat("!") {
            return Ok(Formula::bang(self.unary()?));
        }
        if self.eat("@") {
            let x = self.variable()?;
            self.expect(".")?;
            return Ok(Formula::all(&x, self.unary()?));
        }
        if self.eat("?") {
            let x = self.variable()?;
            self.expect(".")?;
            return Ok(Formula::exists(&x, self.unary()?));
        }
        self.primary()
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Num(0)) => self.err("constants start at 1"),
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(Term::Const(n))
            }
            _ => Ok(Term::Var(self.variable()?)),
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let inner = self.implication()?;
                self.expect(")")?;
                Ok(inner)
            }
            Some(Tok::Sym("$")) => {
                self.pos += 1;
                Ok(Formula::Dollar)
            }
            Some(Tok::Ident(name)) if name == "top" => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(Tok::Ident(name)) if name == "bot" => {
                self.pos += 1;
                Ok(Formula::Bot)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let mut args = Vec::new();
                if self.eat("(") {
                    args.push(self.term()?);
                    while self.eat(",") {
                        args.push(self.term()?);
                    }
                    self.expect(")")?;
                }
                match self.arities.get(&name) {
                    Some(&first) if first != args.len() => {
                        return Err(ParseError::Arity { name, first, second: args.len(), pos: at })
                    }
                    _ => {
                        self.arities.insert(name.clone(), args.len());
                    }
                }
                Ok(Formula::Atom(name, args))
            }
            _ => self.err("expected a formula"),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            self.err("unexpected trailing input")
        } else {
            Ok(())
        }
    }
}

/// Parse a formula.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.implication()?;
    p.finish()?;
    Ok(f)
}

/// Parse a term (`x` or a positive numeral).
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parse `F1, F2 => K` or `=> K`.
pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text)?;
    let mut context = Vec::new();
    if !p.eat("=>") {
        context.push(p.implication()?);
        while p.eat(",") {
            context.push(p.implication()?);
        }
        p.expect("=>")?;
    }
    let succedent = p.implication()?;
    p.finish()?;
    Ok(Sequent { context, succedent })
}
