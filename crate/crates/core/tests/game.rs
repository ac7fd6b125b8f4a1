mod common;

use cl_core::formula::{f, Formula, Letter};
use cl_core::game::{
    legal_moves, negate_run, prelegal_and_tree, project, subrun_upto, BitTree, ConstantGame, FiniteGame, GameError,
    GameRef, Interpretation, Labmove, MoveCaps, Player, Signature, Valuation,
};
use common::{all_runs, run_of};
use proptest::prelude::*;
use rand::SeedableRng;

fn random_game(f: &str, seed: u64) -> GameRef {
    let f = cl_core::formula::f(f);
    let interp = Interpretation::random(&Signature::of_formula(&f), seed);
    GameRef::new(f, interp, Valuation::default()).unwrap()
}

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

#[test]
fn classify_move_examples() {
    let g = random_game("P & Q", 1);
    assert!(g.classify_move(&[], &Labmove::env("1")).unwrap());
    assert!(!g.classify_move(&[], &Labmove::machine("1")).unwrap());

    let g = random_game("!P", 1);
    assert!(g.classify_move(&[], &Labmove::env(":")).unwrap());
    assert!(!g.classify_move(&[], &Labmove::env("0:")).unwrap());
    assert!(!g.classify_move(&[], &Labmove::machine(":")).unwrap());

    let g = random_game("P /\\ Q", 1);
    assert!(!g.classify_move(&[], &Labmove::machine("3.a")).unwrap());
}

#[test]
fn classify_move_rejects_illegal_positions() {
    let g = random_game("P & Q", 1);
    let bad = vec![Labmove::machine("1")];
    assert!(matches!(g.classify_move(&bad, &Labmove::env("1")), Err(GameError::IllegalPosition(0))));
    assert!(g.prefixation(&bad).is_err());
}

#[test]
fn winner_examples() {
    assert_eq!(random_game("P + Q", 2).winner(&[]), Player::Env);
    assert_eq!(random_game("P & Q", 2).winner(&[]), Player::Machine);
    assert_eq!(random_game("top", 2).winner(&[]), Player::Machine);
    assert_eq!(random_game("bot", 2).winner(&[]), Player::Env);
    let g = with_a("P -> P");
    assert_eq!(g.winner(&run_of(&[('B', "2.a"), ('T', "1.a")])), Player::Machine);
    assert_eq!(g.winner(&run_of(&[('B', "2.a")])), Player::Env);
}

#[test]
fn offender_loses() {
    let g = with_a("P -> P");
    assert_eq!(g.winner(&run_of(&[('B', "2.a"), ('T', "1.b"), ('T', "1.a")])), Player::Env);
    assert_eq!(g.winner(&run_of(&[('B', "3.a")])), Player::Machine);
    let spade = Labmove::env(format!("2.{}", cl_core::game::SPADE));
    assert_eq!(g.winner(&[spade]), Player::Machine);
}

#[test]
fn project_and_negate() {
    let r = run_of(&[('B', "2.a"), ('T', "1.b")]);
    assert_eq!(project(&r, "1."), run_of(&[('T', "b")]));
    assert_eq!(project(&[], "1."), Vec::<Labmove>::new());
    assert_eq!(project(&run_of(&[('T', "10.x")]), "1"), run_of(&[('T', "0.x")]));
    assert_eq!(negate_run(&run_of(&[('T', "a")])), run_of(&[('B', "a")]));
    assert!(negate_run(&[]).is_empty());
}

#[test]
fn tree_and_subrun_examples() {
    for (name, ok) in common::micro_examples() {
        assert!(ok, "{name}");
    }
    let no_dots = run_of(&[('T', "a"), ('B', ":")]);
    assert!(subrun_upto(&no_dots, "0").is_empty());
    let r = run_of(&[('T', ".a"), ('B', ":"), ('T', "0.b")]);
    assert_eq!(subrun_upto(&r, ""), run_of(&[('T', "a")]));
    let (ok, t) = prelegal_and_tree(&run_of(&[('T', ":")]));
    assert!(!ok);
    assert_eq!(t, BitTree::new());
}

#[test]
fn universal_problem() {
    let sig = Signature::new([Letter::new("P", 0)]);
    let interp = Interpretation::random(&sig, 3);
    let d = GameRef::universal_problem(interp.clone());
    assert_eq!(d.winner(&[]), Player::Machine);
    for k in [1, 2, 7, 1000] {
        assert!(d.classify_move(&[], &Labmove::env(k.to_string())).unwrap());
    }
    assert!(!d.classify_move(&[], &Labmove::env("0")).unwrap());
    assert!(!d.classify_move(&[], &Labmove::machine("1")).unwrap());

    let base = a_game();
    let d = GameRef::universal_problem(interp.with_dollar_base(base.clone()));
    let b = GameRef::universal_problem(Interpretation::new(Default::default(), base).unwrap());
    let pre = d.prefixation(&[Labmove::env("1")]).unwrap();
    let runs = all_runs(&["a", "b"], 2);
    for r in &runs {
        let mut via = vec![Labmove::env("1")];
        via.extend_from_slice(r);
        assert_eq!(pre.winner(r), d.winner(&via));
        assert_eq!(pre.is_legal(r), b.prefixation(&[Labmove::env("1")]).unwrap().is_legal(r));
    }
}

#[test]
fn grounded_atom_enumeration() {
    let p = Signature::new([Letter::new("P", 0)]);
    assert_eq!(p.enumerate(1).unwrap(), (Letter::new("P", 0), vec![]));
    assert!(matches!(p.enumerate(0), Err(GameError::BadIndex)));
    let q = Signature::new([Letter::new("Q", 1)]);
    assert_eq!(q.enumerate(1).unwrap(), (Letter::new("Q", 1), vec![1]));
    assert_eq!(q.enumerate(2).unwrap(), (Letter::new("Q", 1), vec![2]));
    let pq = Signature::new([Letter::new("Q", 1), Letter::new("P", 0)]);
    let first: Vec<_> = (1..=4).map(|k| pq.enumerate(k).unwrap()).collect();
    assert_eq!(
        first,
        vec![
            (Letter::new("P", 0), vec![]),
            (Letter::new("Q", 1), vec![1]),
            (Letter::new("Q", 1), vec![2]),
            (Letter::new("Q", 1), vec![3]),
        ]
    );
    for k in 1..50 {
        let (l, args) = pq.enumerate(k).unwrap();
        assert_eq!(pq.index_of(&l.name, &args), Some(k));
    }
}

#[test]
fn legal_moves_are_legal() {
    let caps = MoveCaps::default();
    for (i, text) in ["!P -> P", "!(P & Q) -> ?x.R(x)", "$ /\\ ~P", "@x.(R(x) + P)"].iter().enumerate() {
        let g = random_game(text, i as u64);
        let mut run = Vec::new();
        let mut rng = rand::rngs::StdRng::seed_from_u64(i as u64);
        for _ in 0..6 {
            let moves = legal_moves(&g, &run, None, &caps);
            for m in &moves {
                assert!(g.classify_move(&run, m).unwrap(), "{text}: {m} after {run:?}");
            }
            if moves.is_empty() {
                break;
            }
            use rand::Rng;
            run.push(moves[rng.gen_range(0..moves.len())].clone());
        }
    }
}

#[test]
fn bang_winner_checks_every_branch() {
    let g = with_a("!P");
    assert_eq!(g.winner(&[]), Player::Machine);
    assert_eq!(g.winner(&run_of(&[('B', ":"), ('B', "0.a")])), Player::Env);
    assert_eq!(g.winner(&run_of(&[('B', ":"), ('B', "1.a")])), Player::Env);
    assert_eq!(g.winner(&run_of(&[('B', ".a"), ('B', ":")])), Player::Env);
    assert!(!g.is_legal(&run_of(&[('B', ":"), ('B', "0.a"), ('B', ".a")])));
}

#[test]
fn evaluator_matches_oracle() {
    let c = common::oracle_campaign(1);
    assert!(c.cases >= 1000, "only {} cases", c.cases);
    assert!(c.disagreements.is_empty(), "{} disagreements, e.g. {:?}", c.disagreements.len(), &c.disagreements[..c.disagreements.len().min(5)]);
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just(f("P")), Just(f("Q")), Just(Formula::Top), Just(Formula::Bot), Just(Formula::Dollar)];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::neg),
            inner.clone().prop_map(Formula::bang),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            prop::collection::vec(inner.clone(), 2..3).prop_map(Formula::ParConj),
            prop::collection::vec(inner.clone(), 2..3).prop_map(Formula::ParDisj),
            prop::collection::vec(inner.clone(), 2..3).prop_map(Formula::ChoiceConj),
            prop::collection::vec(inner, 2..3).prop_map(Formula::ChoiceDisj),
        ]
    })
}

fn fixed_interp(seed: u64) -> Interpretation {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let atoms = ["P", "Q"]
        .iter()
        .map(|n| (n.to_string(), cl_core::game::random_finite_game(&mut rng, 2)))
        .collect();
    common::explicit_interpretation(&atoms, &FiniteGame::elementary(Player::Env))
}

fn random_run(seed: u64, g: &GameRef, len: usize) -> Vec<Labmove> {
    use rand::Rng;
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut run = Vec::new();
    for _ in 0..len {
        let mut moves = legal_moves(g, &run, None, &MoveCaps::default());
        if moves.is_empty() || rng.gen_bool(0.2) {
            let p = if rng.gen_bool(0.5) { Player::Machine } else { Player::Env };
            moves.push(Labmove::new(p, ["1.a", "2.b", ":", "0.a", "a"][rng.gen_range(0..5)]));
        }
        run.push(moves.swap_remove(rng.gen_range(0..moves.len())));
    }
    run
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn negation_duality(g in formula(), seed in 0u64..50, rs in 0u64..1000) {
        let interp = fixed_interp(seed);
        let a = GameRef::new(g.clone(), interp.clone(), Valuation::default()).unwrap();
        let na = GameRef::new(Formula::neg(g), interp, Valuation::default()).unwrap();
        let run = random_run(rs, &a, 5);
        prop_assert_eq!(na.winner(&negate_run(&run)), a.winner(&run).opp());
        prop_assert_eq!(na.is_legal(&negate_run(&run)), a.is_legal(&run));
    }

    #[test]
    fn legality_is_prefix_closed(g in formula(), seed in 0u64..50, rs in 0u64..1000) {
        let a = GameRef::new(g, fixed_interp(seed), Valuation::default()).unwrap();
        let run = random_run(rs, &a, 6);
        if a.is_legal(&run) {
            for k in 0..run.len() {
                prop_assert!(a.is_legal(&run[..k]));
            }
        }
        if let Some(k) = a.first_illegal(&run) {
            prop_assert_eq!(a.winner(&run), run[k].player.opp());
        }
    }

    #[test]
    fn negate_run_is_an_involution(moves in prop::collection::vec((any::<bool>(), "[a-c.:01]{0,4}"), 0..8)) {
        let run: Vec<Labmove> = moves
            .into_iter()
            .map(|(t, m)| Labmove::new(if t { Player::Machine } else { Player::Env }, m))
            .collect();
        prop_assert_eq!(negate_run(&negate_run(&run)), run);
    }
}
