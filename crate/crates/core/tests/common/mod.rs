//! A brute-force game oracle: every formula is materialized as an explicit state machine
//! over positions, independently of the run-filtering evaluator in the library.

#![allow(dead_code)]

use cl_core::formula::Formula;
use cl_core::game::{ConstantGame, FiniteGame, GameRef, GameSpec, Interpretation, Labmove, LetterGame, Player, Valuation};
use cl_core::formula::Letter;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
enum St {
    Node(usize),
    Elem,
    Wrap(Box<St>),
    Parts(Vec<St>),
    /// An unresolved choice, or the chosen component with its state.
    Choice(Option<(usize, Box<St>)>),
    Leaves(BTreeMap<String, St>),
}

pub struct Oracle<'a> {
    pub atoms: &'a BTreeMap<String, FiniteGame>,
    pub dollar_base: &'a FiniteGame,
}

fn numeral(s: &str) -> Option<u64> {
    if s.is_empty() || s.starts_with('0') || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn bits(s: &str) -> bool {
    s.bytes().all(|b| b == b'0' || b == b'1')
}

/// The game selected by the `$` choice `i` over the nullary letters in name order, cycling.
fn dollar_pick<'a>(o: &Oracle<'a>, i: u64) -> &'a FiniteGame {
    if i == 1 || o.atoms.is_empty() {
        return o.dollar_base;
    }
    let names: Vec<&String> = o.atoms.keys().collect();
    &o.atoms[names[((i - 2) % names.len() as u64) as usize]]
}

impl<'a> Oracle<'a> {
    fn init(&self, f: &Formula) -> St {
        match f {
            Formula::Atom(..) => St::Node(0),
            Formula::Top | Formula::Bot => St::Elem,
            Formula::Neg(a) => St::Wrap(Box::new(self.init(a))),
            Formula::ParConj(v) | Formula::ParDisj(v) => St::Parts(v.iter().map(|g| self.init(g)).collect()),
            Formula::Implies(a, b) => St::Parts(vec![self.init(a), self.init(b)]),
            Formula::ChoiceConj(_) | Formula::ChoiceDisj(_) | Formula::ChoiceAll(..) | Formula::ChoiceExists(..) => {
                St::Choice(None)
            }
            Formula::Dollar => St::Choice(None),
            Formula::Bang(a) => St::Leaves(BTreeMap::from([(String::new(), self.init(a))])),
        }
    }

    fn atom_game(&self, f: &Formula) -> &'a FiniteGame {
        let Formula::Atom(name, _) = f else { unreachable!() };
        &self.atoms[name]
    }

    fn step_game(g: &FiniteGame, node: usize, p: Player, m: &str) -> Option<usize> {
        g.node(node).edges.iter().find(|(q, mm, _)| *q == p && mm == m).map(|e| e.2)
    }

    /// The state after `p` plays `m`, or `None` if the move is illegal.
    fn step(&self, f: &Formula, st: &St, p: Player, m: &str) -> Option<St> {
        match (f, st) {
            (Formula::Atom(..), St::Node(n)) => Oracle::step_game(self.atom_game(f), *n, p, m).map(St::Node),
            (Formula::Top | Formula::Bot, _) => None,
            (Formula::Neg(a), St::Wrap(s)) => self.step(a, s, p.opp(), m).map(|s| St::Wrap(Box::new(s))),
            (Formula::ParConj(v) | Formula::ParDisj(v), St::Parts(parts)) => {
                let (i, rest) = m.split_once('.')?;
                let i = numeral(i)? as usize;
                let g = v.get(i.checked_sub(1)?)?;
                let mut parts = parts.clone();
                parts[i - 1] = self.step(g, &parts[i - 1], p, rest)?;
                Some(St::Parts(parts))
            }
            (Formula::Implies(a, b), St::Parts(parts)) => {
                let (i, rest) = m.split_once('.')?;
                let mut parts = parts.clone();
                match i {
                    "1" => parts[0] = self.step(a, &parts[0], p.opp(), rest)?,
                    "2" => parts[1] = self.step(b, &parts[1], p, rest)?,
                    _ => return None,
                }
                Some(St::Parts(parts))
            }
            (Formula::ChoiceConj(v) | Formula::ChoiceDisj(v), St::Choice(c)) => {
                let chooser = if matches!(f, Formula::ChoiceConj(_)) { Player::Env } else { Player::Machine };
                match c {
                    None => {
                        let i = numeral(m)? as usize;
                        (p == chooser && i <= v.len()).then(|| St::Choice(Some((i, Box::new(self.init(&v[i - 1]))))))
                    }
                    Some((i, s)) => {
                        let s = self.step(&v[i - 1], s, p, m)?;
                        Some(St::Choice(Some((*i, Box::new(s)))))
                    }
                }
            }
            (Formula::ChoiceAll(_, a) | Formula::ChoiceExists(_, a), St::Choice(c)) => {
                let chooser = if matches!(f, Formula::ChoiceAll(..)) { Player::Env } else { Player::Machine };
                match c {
                    None => {
                        let k = numeral(m)? as usize;
                        (p == chooser).then(|| St::Choice(Some((k, Box::new(self.init(a))))))
                    }
                    Some((k, s)) => Some(St::Choice(Some((*k, Box::new(self.step(a, s, p, m)?))))),
                }
            }
            (Formula::Dollar, St::Choice(c)) => match c {
                None => {
                    let i = numeral(m)?;
                    (p == Player::Env).then(|| St::Choice(Some((i as usize, Box::new(St::Node(0))))))
                }
                Some((i, s)) => {
                    let St::Node(n) = **s else { unreachable!() };
                    let g = dollar_pick(self, *i as u64);
                    let n = Oracle::step_game(g, n, p, m)?;
                    Some(St::Choice(Some((*i, Box::new(St::Node(n))))))
                }
            },
            (Formula::Bang(a), St::Leaves(leaves)) => {
                if let Some(w) = m.strip_suffix(':') {
                    if bits(w) && p == Player::Env && leaves.contains_key(w) {
                        let mut out = leaves.clone();
                        let s = out.remove(w).unwrap();
                        out.insert(format!("{w}0"), s.clone());
                        out.insert(format!("{w}1"), s);
                        return Some(St::Leaves(out));
                    }
                }
                let (w, alpha) = m.split_once('.')?;
                if !bits(w) || !leaves.keys().any(|u| u.starts_with(w)) {
                    return None;
                }
                let mut out = leaves.clone();
                for (u, s) in out.iter_mut() {
                    if u.starts_with(w) {
                        *s = self.step(a, s, p, alpha)?;
                    }
                }
                Some(St::Leaves(out))
            }
            _ => None,
        }
    }

    fn win(&self, f: &Formula, st: &St) -> Player {
        match (f, st) {
            (Formula::Atom(..), St::Node(n)) => self.atom_game(f).node(*n).winner,
            (Formula::Top, _) => Player::Machine,
            (Formula::Bot, _) => Player::Env,
            (Formula::Neg(a), St::Wrap(s)) => self.win(a, s).opp(),
            (Formula::ParConj(v), St::Parts(ps)) => {
                if v.iter().zip(ps).all(|(g, s)| self.win(g, s) == Player::Machine) {
                    Player::Machine
                } else {
                    Player::Env
                }
            }
            (Formula::ParDisj(v), St::Parts(ps)) => {
                if v.iter().zip(ps).any(|(g, s)| self.win(g, s) == Player::Machine) {
                    Player::Machine
                } else {
                    Player::Env
                }
            }
            (Formula::Implies(a, b), St::Parts(ps)) => {
                if self.win(a, &ps[0]) == Player::Env || self.win(b, &ps[1]) == Player::Machine {
                    Player::Machine
                } else {
                    Player::Env
                }
            }
            (Formula::ChoiceConj(v) | Formula::ChoiceDisj(v), St::Choice(c)) => match c {
                None => if matches!(f, Formula::ChoiceConj(_)) { Player::Machine } else { Player::Env },
                Some((i, s)) => self.win(&v[i - 1], s),
            },
            (Formula::ChoiceAll(_, a) | Formula::ChoiceExists(_, a), St::Choice(c)) => match c {
                None => if matches!(f, Formula::ChoiceAll(..)) { Player::Machine } else { Player::Env },
                Some((_, s)) => self.win(a, s),
            },
            (Formula::Dollar, St::Choice(c)) => match c {
                None => Player::Machine,
                Some((i, s)) => {
                    let St::Node(n) = **s else { unreachable!() };
                    dollar_pick(self, *i as u64).node(n).winner
                }
            },
            (Formula::Bang(a), St::Leaves(leaves)) => {
                if leaves.values().all(|s| self.win(a, s) == Player::Machine) {
                    Player::Machine
                } else {
                    Player::Env
                }
            }
            _ => unreachable!("state does not match formula"),
        }
    }

    /// Candidate moves at a state: every legal one plus some illegal probes.
    fn candidates(&self, f: &Formula, st: &St) -> Vec<String> {
        let game_moves = |g: &FiniteGame, n: usize| {
            let mut out: Vec<String> = g.node(n).edges.iter().map(|e| e.1.clone()).collect();
            out.extend(["a".to_string(), "b".to_string()]);
            out.sort();
            out.dedup();
            out
        };
        match (f, st) {
            (Formula::Atom(..), St::Node(n)) => game_moves(self.atom_game(f), *n),
            (Formula::Top | Formula::Bot, _) => vec!["a".into()],
            (Formula::Neg(a), St::Wrap(s)) => self.candidates(a, s),
            (Formula::ParConj(v) | Formula::ParDisj(v), St::Parts(ps)) => {
                let mut out = vec![format!("{}.a", v.len() + 1)];
                for (i, (g, s)) in v.iter().zip(ps).enumerate() {
                    out.extend(self.candidates(g, s).into_iter().map(|m| format!("{}.{m}", i + 1)));
                }
                out
            }
            (Formula::Implies(a, b), St::Parts(ps)) => {
                let mut out = vec!["3.a".to_string()];
                out.extend(self.candidates(a, &ps[0]).into_iter().map(|m| format!("1.{m}")));
                out.extend(self.candidates(b, &ps[1]).into_iter().map(|m| format!("2.{m}")));
                out
            }
            (Formula::ChoiceConj(v) | Formula::ChoiceDisj(v), St::Choice(c)) => match c {
                None => (1..=v.len() + 1).map(|i| i.to_string()).chain(["01".to_string()]).collect(),
                Some((i, s)) => self.candidates(&v[i - 1], s),
            },
            (Formula::ChoiceAll(_, a) | Formula::ChoiceExists(_, a), St::Choice(c)) => match c {
                None => vec!["1".into(), "7".into(), "0".into()],
                Some((_, s)) => self.candidates(a, s),
            },
            (Formula::Dollar, St::Choice(c)) => match c {
                None => vec!["1".into(), "2".into(), "3".into(), "0".into()],
                Some((i, s)) => {
                    let St::Node(n) = **s else { unreachable!() };
                    game_moves(dollar_pick(self, *i as u64), n)
                }
            },
            (Formula::Bang(a), St::Leaves(leaves)) => {
                let mut nodes: Vec<String> = Vec::new();
                for u in leaves.keys() {
                    for k in 0..=u.len() {
                        nodes.push(u[..k].to_string());
                    }
                }
                nodes.sort();
                nodes.dedup();
                let mut out = Vec::new();
                for w in &nodes {
                    if leaves.len() < 3 {
                        out.push(format!("{w}:"));
                    }
                    let some_leaf = leaves.iter().find(|(u, _)| u.starts_with(w.as_str())).unwrap();
                    out.extend(self.candidates(a, some_leaf.1).into_iter().map(|m| format!("{w}.{m}")));
                }
                out.push("2.a".into());
                out
            }
            _ => Vec::new(),
        }
    }
}

/// An interpretation giving each nullary letter the corresponding explicit game.
pub fn explicit_interpretation(atoms: &BTreeMap<String, FiniteGame>, base: &FiniteGame) -> Interpretation {
    let letters = atoms
        .iter()
        .map(|(name, g)| {
            let spec = GameSpec::from_json(&g.to_json()).expect("game round-trips");
            (Letter::new(name, 0), LetterGame::Spec { params: Vec::new(), spec })
        })
        .collect();
    Interpretation::new(letters, base.clone()).expect("valid interpretation")
}

#[derive(Debug, Default)]
pub struct Agreement {
    pub positions: usize,
    pub probes: usize,
    pub disagreements: Vec<String>,
}

/// Walk every oracle-legal position up to `depth` moves, comparing legality of every candidate
/// extension and the winner of every position (illegal extensions included).
pub fn compare(f: &Formula, o: &Oracle, g: &GameRef, depth: usize) -> Agreement {
    let mut out = Agreement::default();
    fn go(f: &Formula, o: &Oracle, g: &GameRef, st: &St, run: &mut Vec<Labmove>, depth: usize, out: &mut Agreement) {
        out.positions += 1;
        let w = o.win(f, st);
        if g.winner(run) != w {
            out.disagreements.push(format!("{f}: winner of {run:?}"));
        }
        if depth == 0 {
            return;
        }
        for m in o.candidates(f, st) {
            for p in [Player::Machine, Player::Env] {
                out.probes += 1;
                let lm = Labmove::new(p, m.clone());
                let next = o.step(f, st, p, &m);
                let legal = g.classify_move(run, &lm).expect("position is legal");
                if legal != next.is_some() {
                    out.disagreements.push(format!("{f}: legality of {lm} after {run:?}: evaluator {legal}"));
                    continue;
                }
                run.push(lm);
                match next {
                    Some(s) => go(f, o, g, &s, run, depth - 1, out),
                    None => {
                        if g.winner(run) != p.opp() {
                            out.disagreements.push(format!("{f}: illegal {p} move not lost after {run:?}"));
                        }
                    }
                }
                run.pop();
            }
        }
    }
    let st = o.init(f);
    go(f, o, g, &st, &mut Vec::new(), depth, &mut out);
    out
}

/// All formulas of exactly `size` nodes over the given leaves, with binary connectives.
pub fn formulas_of_size(size: usize, leaves: &[Formula]) -> Vec<Formula> {
    if size == 0 {
        return Vec::new();
    }
    if size == 1 {
        return leaves.to_vec();
    }
    let mut out = Vec::new();
    for a in formulas_of_size(size - 1, leaves) {
        out.push(Formula::neg(a.clone()));
        out.push(Formula::bang(a.clone()));
        out.push(Formula::all("x", a.clone()));
        out.push(Formula::exists("x", a));
    }
    for k in 1..size - 1 {
        let left = formulas_of_size(k, leaves);
        let right = formulas_of_size(size - 1 - k, leaves);
        for a in &left {
            for b in &right {
                let pair = vec![a.clone(), b.clone()];
                out.push(Formula::ParConj(pair.clone()));
                out.push(Formula::ParDisj(pair.clone()));
                out.push(Formula::ChoiceConj(pair.clone()));
                out.push(Formula::ChoiceDisj(pair));
                out.push(Formula::implies(a.clone(), b.clone()));
            }
        }
    }
    out
}

pub fn game_ref(f: &Formula, interp: Interpretation) -> GameRef {
    GameRef::new(f.clone(), interp, Valuation::default()).expect("letters interpreted")
}

#[derive(Debug, Default)]
pub struct Campaign {
    pub formulas: usize,
    pub cases: usize,
    pub probes: usize,
    pub disagreements: Vec<String>,
}

/// Every formula of size at most 4 over `P, Q, top, bot, $`, checked under `interps` random
/// interpretations of depth 2 each.
pub fn oracle_campaign(interps: u64) -> Campaign {
    use rand::SeedableRng;
    let leaves = vec![Formula::atom("P"), Formula::atom("Q"), Formula::Top, Formula::Bot, Formula::Dollar];
    let formulas: Vec<Formula> = (1..=4).flat_map(|s| formulas_of_size(s, &leaves)).collect();
    let mut out = Campaign { formulas: formulas.len(), ..Campaign::default() };
    for (k, f) in formulas.iter().enumerate() {
        for j in 0..interps {
            let mut rng = rand::rngs::StdRng::seed_from_u64(k as u64 * 1000 + j);
            let atoms: BTreeMap<String, FiniteGame> = ["P", "Q"]
                .iter()
                .map(|n| (n.to_string(), cl_core::game::random_finite_game(&mut rng, 2)))
                .collect();
            let base = cl_core::game::random_finite_game(&mut rng, 2);
            let g = game_ref(f, explicit_interpretation(&atoms, &base));
            let o = Oracle { atoms: &atoms, dollar_base: &base };
            let depth = if f.to_string().contains('!') { 3 } else { 4 };
            let a = compare(f, &o, &g, depth);
            out.cases += 1;
            out.probes += a.probes;
            out.disagreements.extend(a.disagreements);
        }
    }
    out
}

fn lm(p: char, m: &str) -> Labmove {
    Labmove::new(if p == 'T' { Player::Machine } else { Player::Env }, m)
}

pub fn run_of(moves: &[(char, &str)]) -> Vec<Labmove> {
    moves.iter().map(|(p, m)| lm(*p, m)).collect()
}

/// All runs of length at most `len` over both players and the given moves.
pub fn all_runs(moves: &[&str], len: usize) -> Vec<Vec<Labmove>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for r in &frontier {
            for p in [Player::Machine, Player::Env] {
                for m in moves {
                    let mut r2: Vec<Labmove> = r.clone();
                    r2.push(Labmove::new(p, *m));
                    next.push(r2);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn same_game(a: &dyn ConstantGame, b: &dyn ConstantGame, runs: &[Vec<Labmove>]) -> bool {
    runs.iter().all(|r| a.is_legal(r) == b.is_legal(r) && a.winner(r) == b.winner(r))
}

/// The worked examples: the `≼u` subrun, tree growth, colored contents, and choice prefixation.
pub fn micro_examples() -> Vec<(&'static str, bool)> {
    use cl_core::game::{prelegal_and_tree, subrun_upto, BitTree};
    use cl_core::strategies::{blue_content, content, yellow_content, CBit};
    use rand::SeedableRng;
    let mut out = Vec::new();

    let gamma = run_of(&[('T', ".a1"), ('B', ":"), ('B', "1.a2"), ('T', "0.a3"), ('B', "1:"), ('T', "10.a4")]);
    out.push(("subrun 101000", subrun_upto(&gamma, "101000") == run_of(&[('T', "a1"), ('B', "a2"), ('T', "a4")])));

    let tree = |nodes: &[&str]| BitTree::from_nodes(nodes.iter().map(|s| s.to_string())).unwrap();
    let grows = prelegal_and_tree(&[]) == (true, tree(&[""]))
        && prelegal_and_tree(&run_of(&[('B', ":")])) == (true, tree(&["", "0", "1"]))
        && prelegal_and_tree(&run_of(&[('B', ":"), ('B', "00:")])) == (false, tree(&["", "0", "1"]))
        && prelegal_and_tree(&run_of(&[('B', ":"), ('B', "1:")])) == (true, tree(&["", "0", "1", "10", "11"]));
    out.push(("tree growth", grows));

    let v = [CBit::blue(1), CBit::yellow(0), CBit::yellow(0), CBit::blue(0), CBit::yellow(1)];
    out.push((
        "colored content",
        content(&v) == "10001" && blue_content(&v) == "10" && yellow_content(&v) == "001",
    ));

    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let atoms: BTreeMap<String, FiniteGame> =
        ["P", "Q"].iter().map(|n| (n.to_string(), cl_core::game::random_finite_game(&mut rng, 2))).collect();
    let interp = explicit_interpretation(&atoms, &FiniteGame::elementary(Player::Machine));
    let runs = all_runs(&["a", "b", "1"], 3);
    let p = game_ref(&Formula::atom("P"), interp.clone());
    let q = game_ref(&Formula::atom("Q"), interp.clone());
    let pq = vec![Formula::atom("P"), Formula::atom("Q")];
    let conj = game_ref(&Formula::ChoiceConj(pq.clone()), interp.clone());
    let disj = game_ref(&Formula::ChoiceDisj(pq), interp);
    let prefixed = |g: &GameRef, who: char, m: &str| g.prefixation(&run_of(&[(who, m)])).unwrap();
    let ok = same_game(&prefixed(&conj, 'B', "1"), &p, &runs)
        && same_game(&prefixed(&conj, 'B', "2"), &q, &runs)
        && same_game(&prefixed(&disj, 'T', "1"), &p, &runs)
        && same_game(&prefixed(&disj, 'T', "2"), &q, &runs)
        && same_game(&conj.prefixation(&[]).unwrap(), &conj, &runs);
    out.push(("choice prefixation", ok));
    out
}

/// Feed environment moves to a strategy one at a time, without a game, collecting the
/// machine moves it makes before its first move and after each environment move.
pub fn drive(s: &mut Box<dyn cl_core::epm::Strategy>, env: &[&str], val: &Valuation) -> Vec<Vec<String>> {
    use cl_core::epm::Action;
    let burst = |s: &mut Box<dyn cl_core::epm::Strategy>| {
        let mut out = Vec::new();
        for _ in 0..64 {
            match s.act(val) {
                Action::Move(m) => {
                    s.observe(&Labmove::machine(m.clone()));
                    out.push(m);
                }
                _ => break,
            }
        }
        out
    };
    let mut out = vec![burst(s)];
    for m in env {
        s.observe(&Labmove::env(*m));
        out.push(burst(s));
    }
    out
}

pub fn build(expr: &str) -> Box<dyn cl_core::epm::Strategy> {
    let e: cl_core::strategies::StrategyExpr = expr.parse().expect("strategy expression");
    e.build(&cl_core::strategies::BuildCtx::default()).expect("builds")
}
