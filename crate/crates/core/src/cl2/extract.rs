//! Playing a general-base formula by walking its CL2 proof from the conclusion upward.
//!
//! Rule (b) steps make the recorded choice, rule (c) steps open a copy-cat channel between
//! the two atom occurrences, and rule (a) steps wait for an environment choice. Moves the
//! environment made inside an occurrence before its channel opened are replayed when it opens.

use super::proof::{check_cl2_proof, Cl2Proof, Rule};
use super::{is_general_base, move_prefix, prove, surface_occurrences, Cl2Error, Polarity, ProveConfig};
use crate::epm::{Action, Strategy};
use crate::formula::Formula;
use crate::game::{parse_numeral, Labmove, Player, Valuation};
use std::any::Any;
use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Clone, Debug)]
pub struct Cl2Strategy {
    proof: Arc<Cl2Proof>,
    node: usize,
    /// Pairs of move prefixes joined by copy-cat.
    channels: Vec<(String, String)>,
    processed: Vec<String>,
    inbox: VecDeque<String>,
    outbox: VecDeque<String>,
}

impl Cl2Strategy {
    /// The proof must be valid and conclude a general-base formula.
    pub fn new(proof: Arc<Cl2Proof>) -> Result<Self, Cl2Error> {
        let concl = proof.conclusion().ok_or_else(|| Cl2Error::Unprovable("empty proof".into()))?;
        if !is_general_base(concl) {
            return Err(Cl2Error::NotGeneralBase(concl.to_string()));
        }
        check_cl2_proof(&proof).map_err(|e| Cl2Error::Unprovable(e.to_string()))?;
        Ok(Cl2Strategy::unchecked(proof))
    }

    fn unchecked(proof: Arc<Cl2Proof>) -> Self {
        let node = proof.root();
        Cl2Strategy {
            proof,
            node,
            channels: Vec::new(),
            processed: Vec::new(),
            inbox: VecDeque::new(),
            outbox: VecDeque::new(),
        }
    }

    pub fn proof(&self) -> &Cl2Proof {
        &self.proof
    }

    /// Index of the proof step the play has reached.
    pub fn node(&self) -> usize {
        self.node
    }

    fn formula(&self) -> &Formula {
        &self.proof.steps[self.node].formula
    }

    /// Pass through rule (b) and (c) steps until a rule (a) step is reached.
    fn advance(&mut self) {
        loop {
            let step = &self.proof.steps[self.node];
            match &step.rule {
                Rule::A => return,
                Rule::B { path, i } => {
                    self.outbox.push_back(format!("{}{i}", move_prefix(&step.formula, path)));
                }
                Rule::C { pos, neg, .. } => {
                    let a = move_prefix(&step.formula, pos);
                    let b = move_prefix(&step.formula, neg);
                    for m in &self.processed {
                        if let Some(r) = m.strip_prefix(a.as_str()) {
                            self.outbox.push_back(format!("{b}{r}"));
                        } else if let Some(r) = m.strip_prefix(b.as_str()) {
                            self.outbox.push_back(format!("{a}{r}"));
                        }
                    }
                    self.channels.push((a, b));
                }
            }
            self.node = step.premises[0];
        }
    }

    fn handle_env(&mut self, m: String) {
        for (a, b) in &self.channels {
            if let Some(r) = m.strip_prefix(a.as_str()) {
                self.outbox.push_back(format!("{b}{r}"));
                self.processed.push(m);
                return;
            }
            if let Some(r) = m.strip_prefix(b.as_str()) {
                self.outbox.push_back(format!("{a}{r}"));
                self.processed.push(m);
                return;
            }
        }
        // Choice moves are not replayed into channels opened later.
        match self.env_choice(&m) {
            Some(next) => self.node = next,
            None => self.processed.push(m),
        }
    }

    /// The premise selected by an environment choice move at the current rule (a) step.
    fn env_choice(&self, m: &str) -> Option<usize> {
        let f = self.formula();
        let occ = surface_occurrences(f, &|g| matches!(g, Formula::ChoiceConj(_) | Formula::ChoiceDisj(_)));
        for (path, pol) in occ {
            let g = f.at_path(&path)?;
            let env_choice = matches!(
                (g, pol),
                (Formula::ChoiceConj(_), Polarity::Positive) | (Formula::ChoiceDisj(_), Polarity::Negative)
            );
            if !env_choice {
                continue;
            }
            let Some(i) = m.strip_prefix(move_prefix(f, &path).as_str()).and_then(parse_numeral) else {
                continue;
            };
            let alt = g.children().get(i as usize - 1).map(|c| (*c).clone())?;
            let h = f.replace_at(&path, alt)?;
            return self.proof.steps[self.node]
                .premises
                .iter()
                .copied()
                .find(|&p| self.proof.steps[p].formula == h);
        }
        None
    }
}

impl Strategy for Cl2Strategy {
    fn observe(&mut self, lm: &Labmove) {
        if lm.player == Player::Env {
            self.inbox.push_back(lm.mv.clone());
        }
    }

    fn act(&mut self, _: &Valuation) -> Action {
        loop {
            if let Some(m) = self.outbox.pop_front() {
                return Action::Move(m);
            }
            self.advance();
            if !self.outbox.is_empty() {
                continue;
            }
            match self.inbox.pop_front() {
                Some(m) => self.handle_env(m),
                None => return Action::Grant,
            }
        }
    }

    fn settled(&self) -> bool {
        self.outbox.is_empty() && self.inbox.is_empty() && matches!(self.proof.steps[self.node].rule, Rule::A)
    }

    fn snapshot(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }

    fn id(&self) -> String {
        match self.proof.conclusion() {
            Some(f) => format!("cl2[F={f}]"),
            None => "cl2".into(),
        }
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

type ProofCache = Mutex<HashMap<Formula, Arc<Cl2Proof>>>;

fn cache() -> &'static ProofCache {
    static CACHE: OnceLock<ProofCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Prove `f` (memoized process-wide) and return a fresh strategy for it.
pub fn strategy_for(f: &Formula) -> Result<Box<dyn Strategy>, Cl2Error> {
    if !is_general_base(f) {
        return Err(Cl2Error::NotGeneralBase(f.to_string()));
    }
    let cached = cache().lock().expect("proof cache").get(f).cloned();
    let proof = match cached {
        Some(p) => p,
        None => {
            let p = prove(f, &ProveConfig::default())?.ok_or_else(|| Cl2Error::Unprovable(f.to_string()))?;
            check_cl2_proof(&p).map_err(|e| Cl2Error::Unprovable(e.to_string()))?;
            let p = Arc::new(p);
            cache().lock().expect("proof cache").insert(f.clone(), p.clone());
            p
        }
    };
    Ok(Box::new(Cl2Strategy::unchecked(proof)))
}
