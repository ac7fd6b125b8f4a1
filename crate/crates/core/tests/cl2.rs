use cl_core::cl2::{
    check_cl2_proof, elementarization, is_general_base, is_stable, polarity_and_surface, prove, Cl2Error,
    Cl2Proof, Polarity, ProveConfig, Rule, Schema,
};
use cl_core::formula::f;

fn proof_of(text: &str) -> Cl2Proof {
    prove(&f(text), &ProveConfig::default()).expect("search").expect("provable")
}

#[test]
fn transitivity_has_the_four_step_proof() {
    let p = proof_of("(P -> Q) /\\ (Q -> T) -> (P -> T)");
    assert_eq!(p.steps.len(), 4);
    assert_eq!(p.rule_counts(), (1, 0, 3));
    assert!(matches!(p.steps[0].rule, Rule::A));
    assert!(p.steps[0].premises.is_empty());
    check_cl2_proof(&p).unwrap();
}

#[test]
fn elementarization_follows_polarity() {
    let e = elementarization(&f("(P -> Q) /\\ (Q -> T) -> (P -> T)"));
    assert_eq!(e, f("(bot -> top) /\\ (bot -> top) -> (top -> bot)"));
    assert!(!is_stable(&f("(P -> Q) /\\ (Q -> T) -> (P -> T)")));
    let own = f("(p -> q) /\\ (q -> t) -> (p -> t)");
    assert_eq!(elementarization(&own), own);
    assert!(is_stable(&own));
    assert_eq!(elementarization(&f("A & B")), f("top"));
    assert!(is_stable(&f("p \\/ ~p")));
    assert!(!is_stable(&f("P -> P /\\ P")));
}

#[test]
fn elementarization_is_idempotent_on_schemata() {
    for s in Schema::all(2, &[2, 3]) {
        let e = elementarization(&s.formula().unwrap());
        assert_eq!(elementarization(&e), e, "{s}");
    }
}

#[test]
fn polarity_counts_negations_and_antecedents() {
    assert_eq!(polarity_and_surface(&f("~F"), &[1]).unwrap(), (Polarity::Negative, true));
    assert_eq!(polarity_and_surface(&f("(G1 & G2) -> H"), &[1]).unwrap(), (Polarity::Negative, true));
    assert_eq!(polarity_and_surface(&f("Q + (P /\\ R)"), &[2, 1]).unwrap(), (Polarity::Positive, false));
    assert!(matches!(polarity_and_surface(&f("~F"), &[2]), Err(Cl2Error::BadPath(_))));
}

#[test]
fn choice_schemata_at_small_sizes() {
    for m in 1..=2 {
        for s in [Schema::H { r: m, n: 2 }, Schema::J { r: m, n: 2, i: 1 }, Schema::J { r: m, n: 2, i: 2 }] {
            let g = s.formula().unwrap();
            let p = prove(&g, &ProveConfig::default()).unwrap().unwrap_or_else(|| panic!("{s} unprovable"));
            check_cl2_proof(&p).unwrap();
            assert_eq!(p.conclusion(), Some(&g));
        }
    }
}

#[test]
fn contraction_is_not_provable() {
    assert_eq!(prove(&f("P -> P /\\ P"), &ProveConfig::default()).unwrap(), None);
}

#[test]
fn budget_is_reported_separately_from_refutation() {
    let g = Schema::C { k: 2, w: 2, u: 2 }.formula().unwrap();
    assert_eq!(prove(&g, &ProveConfig { max_goals: 1 }), Err(Cl2Error::Budget(1)));
}

#[test]
fn every_schema_member_is_provable() {
    let all = Schema::all(2, &[2, 3]);
    assert!(all.len() > 60);
    for s in all {
        let g = s.formula().unwrap();
        assert!(is_general_base(&g), "{s}");
        let p = prove(&g, &ProveConfig::default()).unwrap().unwrap_or_else(|| panic!("{s} unprovable"));
        check_cl2_proof(&p).unwrap_or_else(|e| panic!("{s}: {e}"));
    }
}

#[test]
fn proof_text_round_trips() {
    let p = proof_of("(P -> Q) /\\ (Q -> T) -> (P -> T)");
    let text = p.to_text();
    assert_eq!(Cl2Proof::from_text(&text).unwrap(), p);
    assert!(text.contains("rule=c"));
}

#[test]
fn checker_rejects_reused_atom() {
    let mut p = proof_of("(P -> Q) /\\ (Q -> T) -> (P -> T)");
    let Rule::C { atom, .. } = &p.steps[1].rule else { panic!("step 2 should use rule (c)") };
    let reused = atom.clone();
    let last = p.steps.len() - 1;
    if let Rule::C { atom, .. } = &mut p.steps[last].rule {
        *atom = reused;
    }
    let err = check_cl2_proof(&p).unwrap_err();
    assert_eq!(err.step, 4);
}

#[test]
fn checker_rejects_out_of_range_choice() {
    let mut p = proof_of("(R1 -> S1) -> (R1 -> S1 + S2)");
    let k = p.steps.iter().position(|s| matches!(s.rule, Rule::B { .. })).unwrap();
    if let Rule::B { i, .. } = &mut p.steps[k].rule {
        *i = 3;
    }
    assert!(check_cl2_proof(&p).is_err());
}
