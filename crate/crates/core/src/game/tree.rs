//! Bit-string trees and the prelegality layer of branching recurrence.

use super::{Labmove, Player};
use std::collections::BTreeSet;
use std::fmt;

/// A finite tree of bit strings: contains ε, downward closed, and `w0` is present iff `w1` is.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitTree {
    nodes: BTreeSet<String>,
}

impl Default for BitTree {
    fn default() -> Self {
        BitTree::new()
    }
}

impl BitTree {
    /// The single-node tree `{ε}`.
    pub fn new() -> Self {
        let mut nodes = BTreeSet::new();
        nodes.insert(String::new());
        BitTree { nodes }
    }

    /// Build from an arbitrary set, returning `None` if it is not a tree.
    pub fn from_nodes<I: IntoIterator<Item = String>>(nodes: I) -> Option<Self> {
        let nodes: BTreeSet<String> = nodes.into_iter().collect();
        let t = BitTree { nodes };
        t.is_valid().then_some(t)
    }

    fn is_valid(&self) -> bool {
        if !self.nodes.contains("") {
            return false;
        }
        self.nodes.iter().all(|w| {
            if !w.bytes().all(|b| b == b'0' || b == b'1') {
                return false;
            }
            if w.is_empty() {
                return true;
            }
            let parent = &w[..w.len() - 1];
            let sibling = format!("{parent}{}", if w.ends_with('0') { '1' } else { '0' });
            self.nodes.contains(parent) && self.nodes.contains(&sibling)
        })
    }

    pub fn contains(&self, w: &str) -> bool {
        self.nodes.contains(w)
    }

    pub fn is_leaf(&self, w: &str) -> bool {
        self.contains(w) && !self.nodes.contains(&format!("{w}0"))
    }

    /// Leaves in lexicographic order.
    pub fn leaves(&self) -> Vec<String> {
        self.nodes.iter().filter(|w| self.is_leaf(w)).cloned().collect()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &String> {
        self.nodes.iter()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Split leaf `w` into `w0` and `w1`. Returns false if `w` is not a leaf.
    pub fn replicate(&mut self, w: &str) -> bool {
        if !self.is_leaf(w) {
            return false;
        }
        self.nodes.insert(format!("{w}0"));
        self.nodes.insert(format!("{w}1"));
        true
    }
}

impl fmt::Display for BitTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, w) in self.nodes.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            if w.is_empty() {
                write!(f, "ε")?;
            } else {
                write!(f, "{w}")?;
            }
        }
        write!(f, "}}")
    }
}

/// A move in a branching-recurrence component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BangMove<'a> {
    /// `w:`
    Replicate(&'a str),
    /// `w.α`
    At(&'a str, &'a str),
}

/// Split a move into its bit-string address and payload, if it has either form.
pub fn parse_bang_move(m: &str) -> Option<BangMove<'_>> {
    let idx = m.bytes().position(|b| b != b'0' && b != b'1')?;
    let w = &m[..idx];
    match m.as_bytes()[idx] {
        b':' if idx + 1 == m.len() => Some(BangMove::Replicate(w)),
        b'.' => Some(BangMove::At(w, &m[idx + 1..])),
        _ => None,
    }
}

pub(crate) fn prelegal_tree_view(run: &[(Player, &str)]) -> Result<BitTree, (usize, BitTree)> {
    let mut tree = BitTree::new();
    for (k, (p, m)) in run.iter().enumerate() {
        let ok = match parse_bang_move(m) {
            Some(BangMove::Replicate(w)) => *p == Player::Env && tree.replicate(w),
            Some(BangMove::At(w, _)) => tree.contains(w),
            None => false,
        };
        if !ok {
            return Err((k, tree));
        }
    }
    Ok(tree)
}

/// Check prelegality and compute the tree; on failure returns the tree built before the first violation.
pub fn prelegal_and_tree(run: &[Labmove]) -> (bool, BitTree) {
    match prelegal_tree_view(&super::view(run)) {
        Ok(t) => (true, t),
        Err((_, t)) => (false, t),
    }
}

pub(crate) fn subrun_view<'a>(run: &[(Player, &'a str)], u: &str) -> Vec<(Player, &'a str)> {
    run.iter()
        .filter_map(|(p, m)| match parse_bang_move(m) {
            Some(BangMove::At(w, a)) if u.starts_with(w) => Some((*p, a)),
            _ => None,
        })
        .collect()
}

/// `Γ^{≼u}`: keep `w.α` with `w` a prefix of `u`, stripped to `α`.
pub fn subrun_upto(run: &[Labmove], u: &str) -> Vec<Labmove> {
    subrun_view(&super::view(run), u).into_iter().map(|(p, m)| Labmove::new(p, m)).collect()
}
