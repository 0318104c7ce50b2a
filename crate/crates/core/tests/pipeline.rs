//! Cross-module integration checks: full decision pipelines on the bundled
//! fixtures, exercised through the public crate surface only.

use buffsim_core::{
    build_bounded_buffer_arena, compute_preorder, decide, fixtures, language_inclusion,
    parse_nba, prune, quotient_automaton, solve, Acceptance, BufferMode, InclusionVerdict,
    NbaFormat, PreorderKind, QuotientRelation, SimulationOutcome, DEFAULT_CAP,
};

fn holds(outcome: &SimulationOutcome) -> bool {
    outcome.holds().expect("fixture-sized instances stay under the cap")
}

#[test]
fn branching_fixture_needs_unbounded_lookahead() {
    let (a, b) = fixtures::branching();
    for k in 1..=5 {
        let arena = build_bounded_buffer_arena(
            &a,
            &b,
            k,
            BufferMode::Lookahead,
            Acceptance::Fair,
            DEFAULT_CAP,
        )
        .unwrap();
        assert!(!solve(&arena).holds, "bounded-{} should fail on branching", k);
    }
    let (outcome, _) = decide(&a, &b, QuotientRelation::LookaheadFair, DEFAULT_CAP).unwrap();
    assert!(holds(&outcome));
}

#[test]
fn native_round_trip_preserves_verdicts() {
    let (a, b) = fixtures::lookahead_gap();
    let a2 = parse_nba(&a.to_native(), NbaFormat::Native).unwrap();
    let b2 = parse_nba(&b.to_native(), NbaFormat::Native).unwrap();
    let (before, _) = decide(&a, &b, QuotientRelation::ContinuousFair, DEFAULT_CAP).unwrap();
    let (after, _) = decide(&a2, &b2, QuotientRelation::ContinuousFair, DEFAULT_CAP).unwrap();
    assert_eq!(holds(&before), holds(&after));
    assert!(holds(&after));
}

#[test]
fn ba_round_trip_preserves_verdicts() {
    let (a, b) = fixtures::inclusion_gap();
    let a2 = parse_nba(&a.to_ba(), NbaFormat::Ba).unwrap();
    let b2 = parse_nba(&b.to_ba(), NbaFormat::Ba).unwrap();
    assert!(language_inclusion(&a2, &b2, DEFAULT_CAP).unwrap().is_included());
    let (outcome, _) = decide(&a2, &b2, QuotientRelation::ContinuousFair, DEFAULT_CAP).unwrap();
    assert!(!holds(&outcome));
}

#[test]
fn minimisation_pipeline_preserves_fixture_language() {
    let (a, _) = fixtures::branching();
    let rel = compute_preorder(&a, PreorderKind::Direct, 1, DEFAULT_CAP).unwrap();
    let q = quotient_automaton(&a, &rel);
    let rel_q = compute_preorder(&q, PreorderKind::Direct, 1, DEFAULT_CAP).unwrap();
    let p = prune(&q, &rel_q).unwrap();
    assert!(p.num_states() < a.num_states());
    for (x, y) in [(&a, &p), (&p, &a)] {
        assert!(matches!(
            language_inclusion(x, y, DEFAULT_CAP).unwrap(),
            InclusionVerdict::Included
        ));
    }
}
