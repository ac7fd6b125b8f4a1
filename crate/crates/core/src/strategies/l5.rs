//! `!F -> !!F` via a tree whose edges are colored blue or yellow.
//!
//! A leaf `z` of the colored tree stands for the antecedent branch `content(z)` and, in the
//! consequent, for the inner branch `yellow(z)` of the outer branch `blue(z)`.

use crate::epm::{Action, Strategy};
use crate::game::{
    negate_run, parse_bang_move, prelegal_and_tree, project, subrun_upto, BangMove, BitTree, ConstantGame,
    GameRef, Labmove, Player, Valuation,
};
use std::any::Any;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Color {
    Blue,
    Yellow,
}

/// A colored bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CBit {
    pub bit: bool,
    pub color: Color,
}

impl CBit {
    pub fn blue(bit: u8) -> Self {
        CBit { bit: bit == 1, color: Color::Blue }
    }

    pub fn yellow(bit: u8) -> Self {
        CBit { bit: bit == 1, color: Color::Yellow }
    }

    /// All four colored bits.
    pub fn all() -> [CBit; 4] {
        [CBit::blue(0), CBit::blue(1), CBit::yellow(0), CBit::yellow(1)]
    }
}

impl fmt::Display for CBit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.color == Color::Blue { 'b' } else { 'y' };
        write!(f, "{c}{}", u8::from(self.bit))
    }
}

fn bits_where(v: &[CBit], keep: impl Fn(&CBit) -> bool) -> String {
    v.iter().filter(|b| keep(b)).map(|b| if b.bit { '1' } else { '0' }).collect()
}

/// The bit string obtained by ignoring colors.
pub fn content(v: &[CBit]) -> String {
    bits_where(v, |_| true)
}

pub fn blue_content(v: &[CBit]) -> String {
    bits_where(v, |b| b.color == Color::Blue)
}

pub fn yellow_content(v: &[CBit]) -> String {
    bits_where(v, |b| b.color == Color::Yellow)
}

/// A finite colored tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColoredTree {
    branches: BTreeSet<Vec<CBit>>,
}

impl Default for ColoredTree {
    fn default() -> Self {
        ColoredTree::new()
    }
}

impl ColoredTree {
    /// `{ε}`.
    pub fn new() -> Self {
        ColoredTree { branches: BTreeSet::from([Vec::new()]) }
    }

    /// Accepts the set only if it is a colored tree.
    pub fn from_branches<I: IntoIterator<Item = Vec<CBit>>>(branches: I) -> Option<Self> {
        let t = ColoredTree { branches: branches.into_iter().collect() };
        t.is_valid().then_some(t)
    }

    pub fn branches(&self) -> impl Iterator<Item = &Vec<CBit>> {
        self.branches.iter()
    }

    pub fn contains(&self, v: &[CBit]) -> bool {
        self.branches.contains(v)
    }

    /// The tree of contents.
    pub fn content_tree(&self) -> Option<BitTree> {
        BitTree::from_nodes(self.branches.iter().map(|v| content(v)))
    }

    /// Contents form a tree, contents determine branches, and siblings share a color.
    pub fn is_valid(&self) -> bool {
        if self.content_tree().is_none() {
            return false;
        }
        let contents: BTreeSet<String> = self.branches.iter().map(|v| content(v)).collect();
        if contents.len() != self.branches.len() {
            return false;
        }
        self.branches.iter().all(|v| {
            let with = |b: CBit| {
                let mut w = v.clone();
                w.push(b);
                self.branches.contains(&w)
            };
            !(with(CBit::blue(0)) && with(CBit::yellow(1))) && !(with(CBit::yellow(0)) && with(CBit::blue(1)))
        })
    }

    /// Leaves in lexicographic order.
    pub fn leaves(&self) -> Vec<Vec<CBit>> {
        let contents: BTreeSet<String> = self.branches.iter().map(|v| content(v)).collect();
        self.branches
            .iter()
            .filter(|v| {
                let c = content(v);
                !contents.contains(&format!("{c}0")) && !contents.contains(&format!("{c}1"))
            })
            .cloned()
            .collect()
    }

    fn split(&mut self, v: &[CBit], color: Color) {
        for bit in [false, true] {
            let mut w = v.to_vec();
            w.push(CBit { bit, color });
            self.branches.insert(w);
        }
    }
}

impl fmt::Display for ColoredTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.branches.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if v.is_empty() {
                write!(f, "ε")?;
            }
            for b in v {
                write!(f, "{b}")?;
            }
        }
        write!(f, "}}")
    }
}

/// The colored-tree machine.
#[derive(Clone, Debug, Default)]
pub struct L5Strategy {
    tree: ColoredTree,
    inbox: VecDeque<String>,
    outbox: VecDeque<String>,
    parked: bool,
}

impl L5Strategy {
    pub fn new() -> Self {
        L5Strategy::default()
    }

    pub fn tree(&self) -> &ColoredTree {
        &self.tree
    }

    pub fn parked(&self) -> bool {
        self.parked
    }

    /// Handle one environment move; `None` means it matched no case.
    fn react(&mut self, gamma: &str) -> Option<Vec<String>> {
        let leaves = self.tree.leaves();
        if let Some(rest) = gamma.strip_prefix("2.") {
            return match parse_bang_move(rest)? {
                BangMove::Replicate(w) => {
                    let hit: Vec<_> = leaves.into_iter().filter(|v| blue_content(v) == w).collect();
                    let out = hit.iter().map(|v| format!("1.{}:", content(v))).collect();
                    for v in &hit {
                        self.tree.split(v, Color::Blue);
                    }
                    Some(out)
                }
                BangMove::At(w, inner) => match parse_bang_move(inner)? {
                    BangMove::Replicate(u) => {
                        let hit: Vec<_> = leaves
                            .into_iter()
                            .filter(|v| blue_content(v).starts_with(w) && yellow_content(v) == u)
                            .collect();
                        let out = hit.iter().map(|v| format!("1.{}:", content(v))).collect();
                        for v in &hit {
                            self.tree.split(v, Color::Yellow);
                        }
                        Some(out)
                    }
                    BangMove::At(u, a) => Some(
                        leaves
                            .iter()
                            .filter(|v| blue_content(v).starts_with(w) && yellow_content(v).starts_with(u))
                            .map(|v| format!("1.{}.{a}", content(v)))
                            .collect(),
                    ),
                },
            };
        }
        let rest = gamma.strip_prefix("1.")?;
        match parse_bang_move(rest)? {
            BangMove::At(w, a) => Some(
                leaves
                    .iter()
                    .filter(|v| content(v).starts_with(w))
                    .map(|v| format!("2.{}.{}.{a}", blue_content(v), yellow_content(v)))
                    .collect(),
            ),
            BangMove::Replicate(_) => None,
        }
    }
}

impl Strategy for L5Strategy {
    fn observe(&mut self, lm: &Labmove) {
        if lm.player == Player::Env {
            self.inbox.push_back(lm.mv.clone());
        }
    }

    fn act(&mut self, _: &Valuation) -> Action {
        while self.outbox.is_empty() && !self.parked {
            let Some(g) = self.inbox.pop_front() else { break };
            match self.react(&g) {
                Some(out) => self.outbox.extend(out),
                None => self.parked = true,
            }
        }
        match self.outbox.pop_front() {
            Some(m) => Action::Move(m),
            None => Action::Grant,
        }
    }

    fn settled(&self) -> bool {
        self.outbox.is_empty() && (self.inbox.is_empty() || self.parked)
    }

    fn snapshot(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }

    fn id(&self) -> String {
        "l5".into()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// The state at the beginning of one pass of the main loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditPoint {
    pub tree: ColoredTree,
    /// Length of the run prefix made so far.
    pub run_len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum L5Violation {
    #[error("run is not a play of l5: {0}")]
    NotAPlay(String),
    #[error("at loop pass {point}: clause ({clause}) fails: {detail}")]
    Clause { point: usize, clause: char, detail: String },
}

/// Replay `run` through a fresh machine, recording the tree at every loop boundary.
pub fn audit_points(run: &[Labmove]) -> Result<Vec<AuditPoint>, L5Violation> {
    let mut s = L5Strategy::new();
    let val = Valuation::new(1);
    let mut i = 0;
    let mut points = Vec::new();
    loop {
        loop {
            match s.act(&val) {
                Action::Move(m) => {
                    let Some(lm) = run.get(i) else { return Ok(points) };
                    if lm.player != Player::Machine || lm.mv != m {
                        return Err(L5Violation::NotAPlay(format!("expected machine move {m:?} at {i}")));
                    }
                    s.observe(lm);
                    i += 1;
                }
                _ => break,
            }
        }
        points.push(AuditPoint { tree: s.tree.clone(), run_len: i });
        let Some(lm) = run.get(i) else { return Ok(points) };
        if lm.player != Player::Env {
            return Err(L5Violation::NotAPlay(format!("unexpected machine move {:?} at {i}", lm.mv)));
        }
        s.observe(lm);
        i += 1;
    }
}

/// Check the loop invariants of the colored-tree machine at every loop boundary of `run`.
/// Returns the number of boundaries checked.
pub fn check_l5_audit(g: &GameRef, run: &[Labmove]) -> Result<usize, L5Violation> {
    let points = audit_points(run)?;
    for (k, p) in points.iter().enumerate() {
        check_point(g, &run[..p.run_len], &p.tree).map_err(|(clause, detail)| L5Violation::Clause {
            point: k + 1,
            clause,
            detail,
        })?;
    }
    Ok(points.len())
}

fn check_point(g: &GameRef, theta: &[Labmove], t: &ColoredTree) -> Result<(), (char, String)> {
    let phi = negate_run(&project(theta, "1."));
    let psi = project(theta, "2.");
    let (ok, phi_tree) = prelegal_and_tree(&phi);
    if !ok {
        return Err(('a', "antecedent run is not prelegal".into()));
    }
    let want = t.content_tree().ok_or(('a', "contents do not form a tree".to_string()))?;
    if phi_tree != want {
        return Err(('a', format!("antecedent tree {phi_tree} differs from contents {want}")));
    }
    let (ok, psi_tree) = prelegal_and_tree(&psi);
    if !ok {
        return Err(('b', "consequent run is not prelegal".into()));
    }
    for x in psi_tree.leaves() {
        if !prelegal_and_tree(&subrun_upto(&psi, &x)).0 {
            return Err(('c', format!("consequent subrun at {x} is not prelegal")));
        }
    }
    let leaves = t.leaves();
    for z in &leaves {
        let (b, y) = (blue_content(z), yellow_content(z));
        if !psi_tree.is_leaf(&b) {
            return Err(('d', format!("blue content {b:?} is not a consequent leaf")));
        }
        let inner = prelegal_and_tree(&subrun_upto(&psi, &b)).1;
        if !inner.is_leaf(&y) {
            return Err(('d', format!("yellow content {y:?} is not a leaf under {b:?}")));
        }
    }
    for x in psi_tree.leaves() {
        let inner = prelegal_and_tree(&subrun_upto(&psi, &x)).1;
        for y in inner.leaves() {
            if !leaves.iter().any(|z| blue_content(z) == x && yellow_content(z) == y) {
                return Err(('e', format!("no leaf for the pair ({x:?}, {y:?})")));
            }
        }
    }
    for z in &leaves {
        let lhs = subrun_upto(&phi, &content(z));
        let rhs = subrun_upto(&subrun_upto(&psi, &blue_content(z)), &yellow_content(z));
        if lhs != rhs {
            return Err(('f', format!("subruns differ at leaf with content {:?}", content(z))));
        }
    }
    if !g.is_legal(theta) {
        return Err(('g', "position is not legal".into()));
    }
    Ok(())
}
