//! Property suites: seeded random plays and exhaustive adversaries against named, CL2-extracted
//! and compiled strategies, plus the colored-tree prefix property.

use crate::cl2::Schema;
use crate::epm::{simulate, wins_against_all, Directive, Environment, RandomEnv, ScriptEnv, SearchConfig, Transcript};
use crate::formula::{f, Formula, Term};
use crate::game::{random_finite_game, FiniteGame, GameRef, Interpretation, Labmove, MoveCaps, Player, Signature, Valuation};
use crate::int::{compile, curated_theorem_corpus, IntRule};
use crate::par::Exec;
use crate::strategies::{check_l5_audit, BuildCtx, StrategyExpr as X};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Copy, Debug)]
pub struct ProbeConfig {
    /// Random plays per strategy, spread over the interpretations.
    pub plays: usize,
    pub interps: usize,
    /// Interpretations also searched exhaustively.
    pub exhaustive_interps: usize,
    /// Environment moves per exhaustive branch.
    pub depth: usize,
    pub seed: u64,
    /// Strategy steps per play.
    pub budget: usize,
    /// Upper bound on the random environment's moves.
    pub max_moves: usize,
    pub caps: MoveCaps,
    pub exec: Exec,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            plays: 200,
            interps: 5,
            exhaustive_interps: 2,
            depth: 2,
            seed: 0,
            budget: 600,
            max_moves: 6,
            caps: MoveCaps::default(),
            exec: Exec::default(),
        }
    }
}

fn mix(seed: u64, k: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k.wrapping_mul(0xD1B5_4A32_D192_ED03) ^ k)
}

/// The outcome of probing one strategy on one game.
#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub name: String,
    pub game: String,
    pub plays: usize,
    pub wins: usize,
    /// Exhaustive branches explored.
    pub leaves: usize,
    /// L5 loop boundaries audited.
    pub audits: usize,
    pub failures: Vec<String>,
}

impl Tally {
    fn new(name: &str, game: &Formula) -> Self {
        Tally { name: name.to_string(), game: game.to_string(), ..Tally::default() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.wins == self.plays
    }

    fn fail(&mut self, msg: impl Into<String>) {
        if self.failures.len() < 5 {
            self.failures.push(msg.into());
        }
    }
}

impl fmt::Display for Tally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok" } else { "FAIL" };
        write!(f, "{status} {} on {}: {}/{} random wins, {} exhaustive branches", self.name, self.game, self.wins, self.plays, self.leaves)?;
        if self.audits > 0 {
            write!(f, ", {} audit points", self.audits)?;
        }
        if let Some(e) = self.failures.first() {
            write!(f, "; {e}")?;
        }
        Ok(())
    }
}

/// Extra per-play check; returns a count of checked points.
pub type Audit = dyn Fn(&GameRef, &Transcript) -> Result<usize, String> + Sync;

fn game_ref(game: &Formula, interp: Interpretation) -> Result<GameRef, String> {
    GameRef::new(game.clone(), interp, Valuation::default()).map_err(|e| e.to_string())
}

/// Random plays under `cfg.interps` random interpretations and exhaustive search under the first
/// `cfg.exhaustive_interps` of them.
pub fn probe(name: &str, expr: &X, game: &Formula, cfg: &ProbeConfig, audit: Option<&Audit>) -> Tally {
    let mut tally = Tally::new(name, game);
    let sig = Signature::of_formula(game);
    let ctx = BuildCtx::new(sig.clone());
    let interps: Vec<Interpretation> =
        (0..cfg.interps.max(1)).map(|k| Interpretation::random(&sig, mix(cfg.seed, k as u64))).collect();
    let jobs: Vec<usize> = (0..cfg.plays).collect();
    let results = cfg.exec.map(jobs, |j| -> Result<(Player, usize), String> {
        let g = game_ref(game, interps[j % interps.len()].clone())?;
        let s = expr.build(&ctx).map_err(|e| e.to_string())?;
        let mut env = RandomEnv::new(mix(cfg.seed ^ 0xA5A5, j as u64), cfg.max_moves).with_caps(cfg.caps);
        let t = simulate(s, &mut env, &g, cfg.budget);
        let audited = match audit {
            Some(a) => a(&g, &t).map_err(|e| format!("play {j}: {e}"))?,
            None => 0,
        };
        if t.verdict != Player::Machine {
            return Err(format!("play {j} lost ({}): {}", t.halted, run_text(&t.run)));
        }
        Ok((t.verdict, audited))
    });
    tally.plays = cfg.plays;
    for r in results {
        match r {
            Ok((_, a)) => {
                tally.wins += 1;
                tally.audits += a;
            }
            Err(e) => tally.fail(e),
        }
    }
    let search = SearchConfig { depth: cfg.depth, caps: cfg.caps, budget: cfg.budget, exec: cfg.exec, ..SearchConfig::default() };
    for interp in interps.iter().take(cfg.exhaustive_interps) {
        let g = match game_ref(game, interp.clone()) {
            Ok(g) => g,
            Err(e) => {
                tally.fail(e);
                break;
            }
        };
        let s = match expr.build(&ctx) {
            Ok(s) => s,
            Err(e) => {
                tally.fail(e.to_string());
                break;
            }
        };
        match wins_against_all(s, &g, &search) {
            Ok(rep) => {
                tally.leaves += rep.leaves;
                if let Some(t) = rep.counterexample {
                    tally.fail(format!("exhaustive counterexample ({}): {}", t.halted, run_text(&t.run)));
                }
            }
            Err(e) => tally.fail(e.to_string()),
        }
    }
    tally
}

fn run_text(run: &[Labmove]) -> String {
    let items: Vec<String> = run.iter().map(|l| l.to_string()).collect();
    format!("<{}>", items.join(", "))
}

/// Records the reply given at every grant so the play can be replayed as a script.
struct Recording {
    inner: RandomEnv,
    log: Vec<Directive>,
}

impl Environment for Recording {
    fn on_permission(&mut self, g: &GameRef, run: &[Labmove]) -> Option<String> {
        let m = self.inner.on_permission(g, run);
        self.log.push(match &m {
            Some(m) => Directive::Move(m.clone()),
            None => Directive::Pass,
        });
        m
    }

    fn exhausted(&self) -> bool {
        self.inner.exhausted()
    }
}

/// Interpretation-blindness: for `scripts` random environment behaviors recorded under one
/// interpretation, the strategy's actions are identical under two reskinned interpretations
/// with the same move structure, and it wins under all three. Returns the number of replays.
pub fn blindness(expr: &X, game: &Formula, cfg: &ProbeConfig, scripts: usize) -> Result<usize, String> {
    let sig = Signature::of_formula(game);
    let ctx = BuildCtx::new(sig.clone());
    let jobs: Vec<usize> = (0..scripts).collect();
    let results = cfg.exec.map(jobs, |k| -> Result<usize, String> {
        let shape = mix(cfg.seed ^ 0xB11D, k as u64);
        let gs = (0..3u64)
            .map(|w| game_ref(game, Interpretation::reskinned(&sig, shape, mix(shape, w))))
            .collect::<Result<Vec<_>, _>>()?;
        let mut rec = Recording { inner: RandomEnv::new(shape, cfg.max_moves).with_caps(cfg.caps), log: Vec::new() };
        let first = simulate(expr.build(&ctx).map_err(|e| e.to_string())?, &mut rec, &gs[0], cfg.budget);
        if first.verdict != Player::Machine {
            return Err(format!("script {k} lost under the first interpretation"));
        }
        for g in &gs[1..] {
            let mut env = ScriptEnv::new(rec.log.clone());
            let t = simulate(expr.build(&ctx).map_err(|e| e.to_string())?, &mut env, g, cfg.budget);
            if t.actions != first.actions || t.run != first.run {
                return Err(format!("script {k}: actions differ across interpretations"));
            }
            if t.verdict != Player::Machine {
                return Err(format!("script {k} lost after reskinning"));
            }
        }
        Ok(2)
    });
    results.into_iter().try_fold(0, |acc, r| r.map(|n| acc + n))
}

/// Different `$` base games never change the verdict. Returns the number of plays.
pub fn dollar_insensitive(expr: &X, game: &Formula, cfg: &ProbeConfig, plays_per_base: usize) -> Result<usize, String> {
    let sig = Signature::of_formula(game);
    let ctx = BuildCtx::new(sig.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xD011);
    let bases =
        [FiniteGame::elementary(Player::Env), random_finite_game(&mut rng, 2), random_finite_game(&mut rng, 3)];
    let mut jobs = Vec::new();
    for (b, base) in bases.iter().enumerate() {
        for j in 0..plays_per_base {
            jobs.push((b, base.clone(), j));
        }
    }
    let n = jobs.len();
    let results = cfg.exec.map(jobs, |(b, base, j)| -> Result<(), String> {
        let interp = Interpretation::random(&sig, mix(cfg.seed, j as u64)).with_dollar_base(base);
        let g = game_ref(game, interp)?;
        let mut env = RandomEnv::new(mix(cfg.seed ^ 0xD0, j as u64), cfg.max_moves).with_caps(cfg.caps);
        let t = simulate(expr.build(&ctx).map_err(|e| e.to_string())?, &mut env, &g, cfg.budget);
        if t.verdict != Player::Machine {
            return Err(format!("play {j} lost with dollar base {b}: {}", run_text(&t.run)));
        }
        Ok(())
    });
    results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(n)
}

/// Every schema member with underline lengths up to 2 and `n` in {2, 3}.
pub fn cl2_schemata(cfg: &ProbeConfig) -> Vec<Tally> {
    Schema::all(2, &[2, 3])
        .into_iter()
        .map(|s| {
            let g = s.formula().expect("family members are in range");
            probe(&s.to_string(), &X::Cl2(g.clone()), &g, cfg, None)
        })
        .collect()
}

/// The INT formulas used to exercise `l6b`.
pub fn l6b_targets() -> Vec<Formula> {
    [
        "P",
        "P & Q",
        "P + Q",
        "!P -> Q",
        "@x.P(x)",
        "?x.P(x)",
        "$",
        "!Q -> P & Q",
        "@x.(P(x) + Q)",
        "(P + Q) & T",
        "!(P & Q) -> ?x.R(x)",
        "!$ -> P",
    ]
    .iter()
    .map(|s| f(s))
    .collect()
}

/// The named strategies with the games they are meant to win.
pub fn named_cases() -> Vec<(X, Formula)> {
    let mut out = vec![
        (X::Ccs, f("P -> P")),
        (X::Ccs, f("P & Q -> P & Q")),
        (X::L6a, f("!P -> P")),
        (X::L6a, f("!(P + Q) -> P + Q")),
        (X::L4, f("!(P -> Q) -> (!P -> !Q)")),
        (X::L4a(1), f("!P1 -> !P1")),
        (X::L4a(2), f("!P1 /\\ !P2 -> !(P1 /\\ P2)")),
        (X::L4a(3), f("!P1 /\\ !P2 /\\ !P3 -> !(P1 /\\ P2 /\\ P3)")),
        (X::L6c, f("!P -> !P /\\ !P")),
    ];
    out.extend(l6b_targets().into_iter().map(|k| (X::L6b(k.clone()), Formula::implies(Formula::bang(Formula::Dollar), k))));
    out.extend([
        (X::L11a { i: 1, n: 2 }, f("!(P1 & P2) -> !P1")),
        (X::L11a { i: 2, n: 2 }, f("!(P1 & P2) -> !P2")),
        (X::L11a { i: 3, n: 3 }, f("!(P1 & P2 & P3) -> !P3")),
        (X::L11b(Term::Const(2)), f("!@x.P(x) -> !P(2)")),
        (X::L11b(Term::var("y")), f("!@x.P(x) -> !P(y)")),
        (X::L11c(2), f("!(P1 + P2) -> !P1 + !P2")),
        (X::L11c(3), f("!(P1 + P2 + P3) -> !P1 + !P2 + !P3")),
        (X::L11d, f("!?x.P(x) -> ?x.!P(x)")),
        (X::Oct5a, f("@x.(P(x) -> Q(x)) -> (@x.P(x) -> @x.Q(x))")),
        (X::Oct5b(Term::Const(3)), f("P(3) -> ?x.P(x)")),
        (X::Oct5b(Term::var("y")), f("P(y) -> ?x.P(x)")),
        (X::Oct5c, f("P -> @x.P")),
        (X::Oct5d(0), f("@x.(E(x) -> G(x)) -> (?x.E(x) -> ?x.G(x))")),
        (X::Oct5d(1), f("@x.(F1(x) /\\ E(x) -> G(x)) -> (@x.F1(x) /\\ ?x.E(x) -> ?x.G(x))")),
        (X::Oct5d(2), f("@x.(F1 /\\ F2(x) /\\ E(x) -> G) -> (@x.F1 /\\ @x.F2(x) /\\ ?x.E(x) -> ?x.G)")),
        (X::Oct5e, f("?x.P -> P")),
        (X::Oct99, f("@x.P(x) -> @y.P(y)")),
        (X::Oct99, f("?x.P(x) -> ?y.P(y)")),
        (X::L5, f("!P -> !!P")),
        (X::L5, f("!(P & Q) -> !!(P & Q)")),
    ]);
    out
}

fn l5_audit(g: &GameRef, t: &Transcript) -> Result<usize, String> {
    check_l5_audit(g, &t.run).map_err(|e| e.to_string())
}

pub fn named_suite(cfg: &ProbeConfig) -> Vec<Tally> {
    named_cases()
        .into_iter()
        .map(|(e, g)| {
            let audit: Option<&Audit> = if e == X::L5 { Some(&l5_audit) } else { None };
            probe(&e.to_string(), &e, &g, cfg, audit)
        })
        .collect()
}

/// Counts from the exhaustive colored-tree check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PrefixCheck {
    pub trees: u64,
    pub pairs: u64,
    pub violations: u64,
}

/// A colored bit string packed into bytes: bit `k` of `bits`/`blue` is position `k`.
#[derive(Clone, Copy)]
struct Packed {
    len: u8,
    bits: u8,
    blue: u8,
}

impl Packed {
    fn push_front(self, bit: bool, blue: bool) -> Packed {
        Packed { len: self.len + 1, bits: (self.bits << 1) | bit as u8, blue: (self.blue << 1) | blue as u8 }
    }

    /// The bits of one color, packed, with their count.
    fn colored(self, blue: bool) -> (u8, u8) {
        let (mut len, mut out) = (0, 0);
        for k in 0..self.len {
            if ((self.blue >> k) & 1 == 1) == blue {
                out |= ((self.bits >> k) & 1) << len;
                len += 1;
            }
        }
        (len, out)
    }
}

fn prefix(a: (u8, u8), b: (u8, u8)) -> bool {
    a.0 <= b.0 && (a.1 ^ b.1) & ((1u16 << a.0) - 1) as u8 == 0
}

fn trees_up_to(depth: usize) -> Vec<Vec<Packed>> {
    let leaf = vec![Packed { len: 0, bits: 0, blue: 0 }];
    let mut level: Vec<Vec<Packed>> = vec![leaf.clone()];
    for _ in 0..depth {
        let mut next = vec![leaf.clone()];
        for blue in [true, false] {
            for l in &level {
                for r in &level {
                    next.push(join(blue, l, r));
                }
            }
        }
        level = next;
    }
    level
}

fn join(blue: bool, l: &[Packed], r: &[Packed]) -> Vec<Packed> {
    let mut t = Vec::with_capacity(1 + l.len() + r.len());
    t.push(Packed { len: 0, bits: 0, blue: 0 });
    t.extend(l.iter().map(|p| p.push_front(false, blue)));
    t.extend(r.iter().map(|p| p.push_front(true, blue)));
    t
}

fn check_tree(t: &[Packed]) -> (u64, u64) {
    let split: Vec<((u8, u8), (u8, u8), (u8, u8, u8))> =
        t.iter().map(|p| (p.colored(true), p.colored(false), (p.len, p.bits, p.blue))).collect();
    let mut bad = 0;
    for (bw, yw, w) in &split {
        for (bu, yu, u) in &split {
            if prefix(*bw, *bu) && prefix(*yw, *yu) {
                let mask = ((1u16 << w.0) - 1) as u8;
                let ok = w.0 <= u.0 && (w.1 ^ u.1) & mask == 0 && (w.2 ^ u.2) & mask == 0;
                if !ok {
                    bad += 1;
                }
            }
        }
    }
    ((split.len() * split.len()) as u64, bad)
}

/// For every colored tree with branches of length at most `max_len` and all branches `w`, `u`:
/// if the blue and yellow contents of `w` are prefixes of those of `u`, then `w` is a prefix of `u`.
pub fn colored_prefix_check(max_len: usize, exec: Exec) -> PrefixCheck {
    let mut out = PrefixCheck::default();
    if max_len == 0 {
        let (pairs, violations) = check_tree(&trees_up_to(0)[0]);
        return PrefixCheck { trees: 1, pairs, violations };
    }
    let sub = trees_up_to(max_len - 1);
    let (pairs, violations) = check_tree(&trees_up_to(0)[0]);
    out.trees += 1;
    out.pairs += pairs;
    out.violations += violations;
    let jobs: Vec<(bool, usize)> = [true, false].iter().flat_map(|&b| (0..sub.len()).map(move |i| (b, i))).collect();
    let parts = exec.map(jobs, |(blue, i)| {
        let mut acc = PrefixCheck::default();
        for r in &sub {
            let (p, v) = check_tree(&join(blue, &sub[i], r));
            acc.trees += 1;
            acc.pairs += p;
            acc.violations += v;
        }
        acc
    });
    for p in parts {
        out.trees += p.trees;
        out.pairs += p.pairs;
        out.violations += p.violations;
    }
    out
}

#[derive(Clone, Debug)]
pub struct ColoredSuiteReport {
    pub prefix: PrefixCheck,
    pub l5: Vec<Tally>,
}

impl ColoredSuiteReport {
    pub fn passed(&self) -> bool {
        self.prefix.violations == 0 && self.l5.iter().all(|t| t.passed())
    }
}

pub fn colored_suite(cfg: &ProbeConfig) -> ColoredSuiteReport {
    let prefix = colored_prefix_check(4, cfg.exec);
    let l5 = named_cases()
        .into_iter()
        .filter(|(e, _)| *e == X::L5)
        .map(|(e, g)| probe("l5", &e, &g, cfg, Some(&l5_audit)))
        .collect();
    ColoredSuiteReport { prefix, l5 }
}

#[derive(Clone, Debug)]
pub struct CorpusReport {
    pub rules: BTreeSet<&'static str>,
    pub tallies: Vec<Tally>,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.rules.len() == IntRule::NAMES.len() && self.tallies.iter().all(|t| t.passed())
    }
}

/// Compile every corpus proof and probe the result, including the blindness and `$` checks.
pub fn corpus_suite(cfg: &ProbeConfig) -> CorpusReport {
    let mut rules = BTreeSet::new();
    let mut tallies = Vec::new();
    for (name, proof) in curated_theorem_corpus() {
        rules.extend(proof.rules_used());
        let game = proof.sequent.to_formula();
        let shaped = match compile(&proof) {
            Ok(s) => s,
            Err(e) => {
                let mut t = Tally::new(name, &game);
                t.fail(e.to_string());
                tallies.push(t);
                continue;
            }
        };
        let mut t = probe(name, &shaped.expr, &game, cfg, None);
        if let Err(e) = blindness(&shaped.expr, &game, cfg, 10) {
            t.fail(format!("blindness: {e}"));
        }
        if let Err(e) = dollar_insensitive(&shaped.expr, &game, cfg, 20) {
            t.fail(format!("dollar base: {e}"));
        }
        tallies.push(t);
    }
    CorpusReport { rules, tallies }
}
