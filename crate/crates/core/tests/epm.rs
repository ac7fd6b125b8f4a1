mod common;

use cl_core::epm::{
    check_fairness, simulate, wins_against_all, Action, Directive, HaltReason, RandomEnv, ScriptEnv, SearchConfig,
    SearchError, SilentEnv, Strategy, Transcript,
};
use cl_core::formula::f;
use cl_core::game::{ConstantGame, FiniteGame, GameRef, Interpretation, Labmove, MoveCaps, Player, Signature, Valuation};
use cl_core::strategies::{Reactive, Rule};
use common::{build, run_of};
use std::any::Any;

/// A = {<> -> T, <Ba> -> B}.
fn a_game() -> FiniteGame {
    let mut g = FiniteGame::elementary(Player::Machine);
    let k = g.add_node(Player::Env);
    g.add_edge(0, Player::Env, "a", k);
    g
}

fn with_a(formula: &str) -> GameRef {
    let atoms = [("P".to_string(), a_game())].into_iter().collect();
    let interp = common::explicit_interpretation(&atoms, &FiniteGame::elementary(Player::Machine));
    GameRef::new(f(formula), interp, Valuation::default()).unwrap()
}

fn random_game(text: &str, seed: u64) -> GameRef {
    let g = f(text);
    GameRef::new(g.clone(), Interpretation::random(&Signature::of_formula(&g), seed), Valuation::default()).unwrap()
}

/// Copies to the same side it was attacked on.
#[derive(Clone)]
struct Broken;

impl Rule for Broken {
    fn on_env(&mut self, mv: &str, _: &Valuation) -> Vec<String> {
        vec![mv.to_string()]
    }

    fn id(&self) -> String {
        "broken".into()
    }
}

/// Grants `grants` times, then idles forever.
#[derive(Clone)]
struct Lazy {
    grants: usize,
}

impl Strategy for Lazy {
    fn observe(&mut self, _: &Labmove) {}

    fn act(&mut self, _: &Valuation) -> Action {
        if self.grants > 0 {
            self.grants -= 1;
            Action::Grant
        } else {
            Action::Idle
        }
    }

    fn settled(&self) -> bool {
        false
    }

    fn snapshot(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }

    fn id(&self) -> String {
        "lazy".into()
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

#[test]
fn ccs_against_silence() {
    let g = with_a("P -> P");
    let t = simulate(build("ccs"), &mut SilentEnv, &g, 100);
    assert_eq!(t.verdict, Player::Machine);
    assert!(t.run.is_empty());
    assert_eq!(t.halted, HaltReason::Quiescent);
}

#[test]
fn ccs_answers_a_scripted_move() {
    let g = with_a("P -> P");
    let t = simulate(build("ccs"), &mut ScriptEnv::moves(&["2.a"]), &g, 100);
    assert_eq!(t.run, run_of(&[('B', "2.a"), ('T', "1.a")]));
    assert_eq!(t.verdict, Player::Machine);
    assert_eq!(t.verdict, g.winner(&t.run));
}

#[test]
fn illegal_environment_moves_are_intercepted() {
    let g = with_a("P -> P");
    let t = simulate(build("ccs"), &mut ScriptEnv::moves(&["3.a"]), &g, 100);
    assert_eq!(t.halted, HaltReason::EnvIllegal);
    assert_eq!(t.verdict, Player::Machine);
    assert!(t.run.is_empty());
}

#[test]
fn illegal_machine_moves_lose() {
    let g = with_a("P -> P");
    let t = simulate(Reactive::boxed(Broken), &mut ScriptEnv::moves(&["2.a"]), &g, 100);
    assert_eq!(t.halted, HaltReason::MachineIllegal);
    assert_eq!(t.verdict, Player::Env);
    assert!(t.diagnostic.is_some());
}

#[test]
fn budget_is_reported() {
    let g = with_a("P -> P");
    let t = simulate(Box::new(Lazy { grants: 0 }), &mut SilentEnv, &g, 30);
    assert_eq!(t.halted, HaltReason::Budget);
    assert_eq!(t.steps, 30);
}

#[test]
fn script_directives() {
    let s = ScriptEnv::parse("# comment\nmove 2.a\n\npass\nstop\nmove 1.a\n").unwrap();
    let g = with_a("P -> P");
    let t = simulate(build("ccs"), &mut s.clone(), &g, 100);
    assert_eq!(t.run.len(), 2);
    assert!(ScriptEnv::parse("jump 2.a").is_err());
    let d = ScriptEnv::new(vec![Directive::Pass, Directive::Move("2.a".into())]);
    let t = simulate(build("ccs"), &mut d.clone(), &g, 100);
    assert_eq!(t.run, run_of(&[('B', "2.a"), ('T', "1.a")]));
}

#[test]
fn scripted_runs_are_reproducible() {
    let g = random_game("!(P & Q) -> P & Q", 4);
    let script = ScriptEnv::moves(&["2.2", "1..2"]);
    let a = simulate(build("l6a"), &mut script.clone(), &g, 200);
    let b = simulate(build("l6a"), &mut script.clone(), &g, 200);
    assert_eq!(a, b);
}

#[test]
fn random_envs_are_seeded_and_clean() {
    let g = random_game("!(P + Q) -> P + Q", 2);
    let play = |seed| simulate(build("l6a"), &mut RandomEnv::new(seed, 6), &g, 400);
    assert_eq!(play(9), play(9));
    for seed in 0..100 {
        let t: Transcript = play(seed);
        assert_ne!(t.halted, HaltReason::EnvIllegal);
        assert!(g.is_legal(&t.run), "{:?}", t.run);
        assert_eq!(t.verdict, g.winner(&t.run));
    }
}

#[test]
fn uniformity_probe() {
    let text = "!(P & Q) -> P & Q";
    let script = ScriptEnv::moves(&["2.1", "1..1"]);
    let sig = Signature::of_formula(&f(text));
    let mut traces = Vec::new();
    for w in 0..3 {
        let g = GameRef::new(f(text), Interpretation::reskinned(&sig, 11, w), Valuation::default()).unwrap();
        traces.push(simulate(build("l6a"), &mut script.clone(), &g, 200).actions);
    }
    assert!(traces.windows(2).all(|p| p[0] == p[1]));
}

#[test]
fn fairness() {
    let g = with_a("P -> P");
    let t = simulate(build("ccs"), &mut ScriptEnv::moves(&["2.a"]), &g, 100);
    assert!(check_fairness(&t, 10));
    let idle = simulate(Box::new(Lazy { grants: 0 }), &mut SilentEnv, &g, 50);
    assert!(!check_fairness(&idle, 10));
    let once = simulate(Box::new(Lazy { grants: 1 }), &mut SilentEnv, &g, 50);
    assert!(!check_fairness(&once, 10));
}

#[test]
fn exhaustive_search() {
    let g = with_a("P -> P");
    let ok = wins_against_all(build("ccs"), &g, &SearchConfig::depth(2)).unwrap();
    assert!(ok.all_won());
    assert!(ok.leaves >= 2);

    let bad = wins_against_all(Reactive::boxed(Broken), &g, &SearchConfig::depth(2)).unwrap();
    let cx = bad.counterexample.expect("counterexample");
    assert_eq!(cx.verdict, Player::Env);
    assert_eq!(cx.run.first(), Some(&Labmove::env("2.a")));

    let choice = random_game("P & Q", 1);
    assert!(wins_against_all(Box::new(Lazy { grants: 1000 }), &choice, &SearchConfig::depth(0)).unwrap().all_won());

    let small = SearchConfig { max_leaves: 3, ..SearchConfig::depth(3) };
    let big = random_game("!(P & Q) -> P & Q", 1);
    assert!(matches!(wins_against_all(build("l6a"), &big, &small), Err(SearchError::LeafBudget(3))));

    let caps = MoveCaps { constants: 2, ..MoveCaps::default() };
    let q = random_game("!?x.P(x) -> ?x.!P(x)", 1);
    assert!(wins_against_all(build("l11d"), &q, &SearchConfig { caps, ..SearchConfig::depth(2) }).unwrap().all_won());
}

#[test]
fn transcript_text_round_trips() {
    let g = with_a("P -> P");
    let t = simulate(build("ccs"), &mut ScriptEnv::moves(&["2.a"]), &g, 100);
    let text = t.to_text(&g);
    assert!(text.starts_with("#game "));
    assert_eq!(Transcript::parse_run(&text).unwrap(), t.run);
}
