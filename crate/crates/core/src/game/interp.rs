//! Signatures, the grounded-atom enumeration, and interpretations.

use super::finite::{random_choice_game, GameSpec};
use super::{FiniteGame, GameError, Player};
use crate::formula::{Formula, Letter, Sequent};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

/// The nonlogical letters of the language, sorted by (name, arity).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    letters: Vec<Letter>,
}

fn cantor_pair(a: u64, b: u64) -> Option<u64> {
    let s = a.checked_add(b)?;
    s.checked_mul(s.checked_add(1)?)?.checked_div(2)?.checked_add(b)
}

fn cantor_unpair(z: u64) -> (u64, u64) {
    let z = z as u128;
    let mut w = (((8 * z + 1) as f64).sqrt() as u128).saturating_sub(1) / 2;
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    let b = z - w * (w + 1) / 2;
    ((w - b) as u64, b as u64)
}

/// The k-tuple of constants with the given rank (iterated Cantor unpairing).
pub(crate) fn tuple_of_rank(r: u64, k: usize) -> Vec<u64> {
    match k {
        0 => Vec::new(),
        1 => vec![r + 1],
        _ => {
            let (a, rest) = cantor_unpair(r);
            let mut out = vec![a + 1];
            out.extend(tuple_of_rank(rest, k - 1));
            out
        }
    }
}

pub(crate) fn rank_of_tuple(cs: &[u64]) -> Option<u64> {
    match cs {
        [] => Some(0),
        [c] => c.checked_sub(1),
        [c, rest @ ..] => cantor_pair(c.checked_sub(1)?, rank_of_tuple(rest)?),
    }
}

impl Signature {
    pub fn new<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let set: BTreeSet<Letter> = letters.into_iter().filter(|l| l.name != "$").collect();
        Signature { letters: set.into_iter().collect() }
    }

    pub fn of_formula(f: &Formula) -> Self {
        Signature::new(f.letters())
    }

    pub fn of_sequent(s: &Sequent) -> Self {
        Signature::new(s.letters())
    }

    /// Union of two signatures.
    pub fn union(&self, other: &Signature) -> Self {
        Signature::new(self.letters.iter().chain(other.letters.iter()).cloned())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn contains(&self, l: &Letter) -> bool {
        self.letters.binary_search(l).is_ok()
    }

    fn all_nullary(&self) -> bool {
        self.letters.iter().all(|l| l.arity == 0)
    }

    /// The k-th (1-based) grounded atom. When every letter is nullary the finite list repeats.
    pub fn enumerate(&self, k: u64) -> Result<(Letter, Vec<u64>), GameError> {
        if k < 1 {
            return Err(GameError::BadIndex);
        }
        let n = self.letters.len();
        if n == 0 {
            return Err(GameError::EmptySignature);
        }
        if self.all_nullary() {
            return Ok((self.letters[((k - 1) % n as u64) as usize].clone(), Vec::new()));
        }
        let mut count = 0u64;
        for s in 0u64.. {
            for j in 0..n.min(s as usize + 1) {
                let l = &self.letters[j];
                let r = s - j as u64;
                if l.arity > 0 || r == 0 {
                    count += 1;
                    if count == k {
                        return Ok((l.clone(), tuple_of_rank(r, l.arity)));
                    }
                }
            }
        }
        unreachable!("the diagonal walk is unbounded")
    }

    /// The (1-based) position of a grounded atom, the first one if the list repeats.
    pub fn index_of(&self, name: &str, args: &[u64]) -> Option<u64> {
        let j = self.letters.iter().position(|l| l.name == name && l.arity == args.len())?;
        if args.iter().any(|&c| c < 1) {
            return None;
        }
        if self.all_nullary() {
            return Some(j as u64 + 1);
        }
        let r = rank_of_tuple(args)?;
        let s = (j as u64).checked_add(r)?;
        let mut before = 0u64;
        for (jj, l) in self.letters.iter().enumerate() {
            let jj = jj as u64;
            if l.arity > 0 {
                before += s.saturating_sub(jj);
            } else if jj < s {
                before += 1;
            }
        }
        for (jj, l) in self.letters.iter().enumerate().take(j) {
            let rr = s - jj as u64;
            if l.arity > 0 || rr == 0 {
                before += 1;
            }
        }
        Some(before + 1)
    }
}

/// How one letter is interpreted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LetterGame {
    /// A (possibly guarded) game description; `params` name the arguments.
    Spec { params: Vec<String>, spec: GameSpec },
    /// A random choice tree per argument tuple. The move structure comes from `shape_seed`
    /// and the leaf winners from `winner_seed`.
    Random { shape_seed: u64, winner_seed: u64, depth: usize, width: usize },
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn mix_seed(seed: u64, name: &str, args: &[u64]) -> u64 {
    let mut h = splitmix(seed);
    for b in name.bytes() {
        h = splitmix(h ^ b as u64);
    }
    h = splitmix(h ^ 0xFF);
    for &a in args {
        h = splitmix(h ^ a);
    }
    h
}

type GameCache = HashMap<(String, Vec<u64>), Arc<FiniteGame>>;

/// An interpretation: a game for every letter of its signature, plus the base game of `$`.
#[derive(Clone, Debug)]
pub struct Interpretation {
    signature: Signature,
    letters: BTreeMap<Letter, LetterGame>,
    dollar_base: Arc<FiniteGame>,
    cache: Arc<RwLock<GameCache>>,
}

fn bad(msg: impl Into<String>) -> GameError {
    GameError::BadInterpretation(msg.into())
}

impl Interpretation {
    pub fn new(letters: BTreeMap<Letter, LetterGame>, dollar_base: FiniteGame) -> Result<Self, GameError> {
        for (l, g) in &letters {
            if let LetterGame::Spec { params, .. } = g {
                if params.len() != l.arity {
                    return Err(bad(format!("{l} has {} params", params.len())));
                }
            }
        }
        Ok(Interpretation {
            signature: Signature::new(letters.keys().cloned()),
            letters,
            dollar_base: Arc::new(dollar_base),
            cache: Arc::default(),
        })
    }

    /// Random choice-tree games (depth 3, width 2) for every letter of `sig`.
    pub fn random(sig: &Signature, seed: u64) -> Self {
        Interpretation::reskinned(sig, seed, seed)
    }

    /// Like [`Interpretation::random`] with the same move structure as `shape_seed`
    /// but leaf winners drawn from `winner_seed`.
    pub fn reskinned(sig: &Signature, shape_seed: u64, winner_seed: u64) -> Self {
        let letters = sig
            .letters()
            .iter()
            .map(|l| (l.clone(), LetterGame::Random { shape_seed, winner_seed, depth: 3, width: 2 }))
            .collect();
        Interpretation::new(letters, FiniteGame::elementary(Player::Machine)).expect("random letters have no params")
    }

    pub fn with_dollar_base(mut self, base: FiniteGame) -> Self {
        self.dollar_base = Arc::new(base);
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn dollar_base(&self) -> &Arc<FiniteGame> {
        &self.dollar_base
    }

    /// The game interpreting `name(args)`.
    pub fn game(&self, name: &str, args: &[u64]) -> Result<Arc<FiniteGame>, GameError> {
        let key = (name.to_string(), args.to_vec());
        if let Some(g) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(g.clone());
        }
        let letter = Letter::new(name, args.len());
        let lg = self.letters.get(&letter).ok_or_else(|| GameError::Uninterpreted(letter.to_string()))?;
        let game = match lg {
            LetterGame::Spec { params, spec } => {
                let binding = params.iter().cloned().zip(args.iter().copied()).collect();
                spec.instantiate(&binding)?
            }
            LetterGame::Random { shape_seed, winner_seed, depth, width } => {
                let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(*shape_seed, name, args));
                let g = random_choice_game(&mut rng, *depth, *width);
                if winner_seed == shape_seed {
                    g
                } else {
                    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(*winner_seed, name, args));
                    g.with_random_leaf_winners(&mut rng)
                }
            }
        };
        let game = Arc::new(game);
        self.cache.write().expect("cache lock").insert(key, game.clone());
        Ok(game)
    }

    /// Conjunct `i` (1-based) of `$*`: `B` for 1, else the (i-1)-th grounded atom.
    pub fn dollar_conjunct(&self, i: u64) -> Result<Arc<FiniteGame>, GameError> {
        if i == 0 {
            return Err(GameError::BadIndex);
        }
        if i == 1 {
            return Ok(self.dollar_base.clone());
        }
        match self.signature.enumerate(i - 1) {
            Ok((l, args)) => self.game(&l.name, &args),
            Err(GameError::EmptySignature) => Ok(self.dollar_base.clone()),
            Err(e) => Err(e),
        }
    }

    /// Load the JSON interpretation format.
    pub fn from_json(v: &Value) -> Result<Self, GameError> {
        let obj = v.as_object().ok_or_else(|| bad("interpretation must be an object"))?;
        let mut letters = BTreeMap::new();
        if let Some(ls) = obj.get("letters") {
            for (key, entry) in ls.as_object().ok_or_else(|| bad("`letters` must be an object"))? {
                let (name, arity) = key.split_once('/').ok_or_else(|| bad(format!("letter key {key:?} must be NAME/ARITY")))?;
                let arity: usize = arity.parse().map_err(|_| bad(format!("bad arity in {key:?}")))?;
                let eo = entry.as_object().ok_or_else(|| bad(format!("entry for {key} must be an object")))?;
                let params = match eo.get("params") {
                    Some(p) => p
                        .as_array()
                        .ok_or_else(|| bad("`params` must be an array"))?
                        .iter()
                        .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("params are strings")))
                        .collect::<Result<Vec<_>, _>>()?,
                    None => (1..=arity).map(|i| format!("x{i}")).collect(),
                };
                let game = eo.get("game").ok_or_else(|| bad(format!("entry for {key} needs `game`")))?;
                let lg = match game.get("random") {
                    Some(r) => {
                        let seed = r.get("seed").and_then(Value::as_u64).unwrap_or(0);
                        LetterGame::Random {
                            shape_seed: seed,
                            winner_seed: r.get("winner_seed").and_then(Value::as_u64).unwrap_or(seed),
                            depth: r.get("depth").and_then(Value::as_u64).unwrap_or(3) as usize,
                            width: r.get("width").and_then(Value::as_u64).unwrap_or(2) as usize,
                        }
                    }
                    None => LetterGame::Spec { params, spec: GameSpec::from_json(game)? },
                };
                letters.insert(Letter::new(name, arity), lg);
            }
        }
        let base = match obj.get("dollar_base") {
            Some(b) => FiniteGame::from_json(b)?,
            None => FiniteGame::elementary(Player::Machine),
        };
        Interpretation::new(letters, base)
    }
}
