//! Acceptance gate: one test per release criterion, each printing a single
//! `ACCEPTANCE <n> (<name>): pass|fail` line (visible with `-- --nocapture`).

use std::path::PathBuf;
use std::process::Command;

use buffsim_core::{
    decide, fixtures, language_inclusion, suites, QuotientRelation, SimulationOutcome,
    DEFAULT_CAP,
};

fn report(n: u32, name: &str, ok: bool) {
    println!("ACCEPTANCE {} ({}): {}", n, name, if ok { "pass" } else { "fail" });
    assert!(ok, "acceptance criterion {} ({}) failed", n, name);
}

fn quotient_holds(a: &buffsim_core::Nba, b: &buffsim_core::Nba, r: QuotientRelation) -> bool {
    let (outcome, _) = decide(a, b, r, DEFAULT_CAP).unwrap();
    match outcome {
        SimulationOutcome::Decided(rep) => rep.holds,
        SimulationOutcome::Inconclusive { .. } => panic!("fixture blew the cap"),
    }
}

#[test]
fn criterion_1_verdict_matrix() {
    use buffsim_core::{
        build_bounded_buffer_arena, build_plain_sim_arena, solve, Acceptance, BufferMode,
    };
    let start = std::time::Instant::now();
    let mut ok = true;

    let (a, b) = fixtures::branching();
    let plain = solve(&build_plain_sim_arena(&a, &b, Acceptance::Fair).unwrap());
    ok &= !plain.holds;
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
        ok &= !solve(&arena).holds;
    }
    ok &= quotient_holds(&a, &b, QuotientRelation::LookaheadFair);
    ok &= quotient_holds(&a, &b, QuotientRelation::ContinuousFair);
    ok &= !quotient_holds(
        &a.with_all_accepting(),
        &b.with_all_accepting(),
        QuotientRelation::ContinuousFair,
    );

    let (a, b) = fixtures::lookahead_gap();
    ok &= quotient_holds(&a, &b, QuotientRelation::ContinuousFair);
    ok &= !quotient_holds(&a, &b, QuotientRelation::LookaheadFair);

    let (a, b) = fixtures::inclusion_gap();
    ok &= language_inclusion(&a, &b, DEFAULT_CAP).unwrap().is_included();
    ok &= !quotient_holds(&a, &b, QuotientRelation::ContinuousFair);

    ok &= start.elapsed().as_secs() < 10;
    report(1, "fixture verdict matrix", ok);
}

#[test]
fn criterion_2_implication_chain() {
    let s = suites::implication_chain_suite(7 ^ 0x04, 200, DEFAULT_CAP);
    report(2, "implication-chain property suite", s.ok());
}

#[test]
fn criterion_3_monoid_correctness() {
    let start = std::time::Instant::now();
    let s = suites::monoid_suite(7 ^ 0x01, 1000);
    report(3, "monoid correctness", s.ok() && start.elapsed().as_secs() < 60);
}

#[test]
fn criterion_4_inclusion_oracle_equivalence() {
    let s = suites::inclusion_oracle_suite(7 ^ 0x03, 500, DEFAULT_CAP);
    report(4, "inclusion-oracle equivalence", s.ok());
}

#[test]
fn criterion_5_minimisation_soundness() {
    let s = suites::minimization_suite(7 ^ 0x05, 200, DEFAULT_CAP);
    report(5, "minimisation soundness", s.ok());
}

#[test]
fn criterion_6_generator_differential() {
    let s = suites::generator_suite(7 ^ 0x07, 10);
    report(6, "generator differential tests", s.ok());
}

#[test]
fn criterion_7_ramsey_factorization() {
    let s = suites::ramsey_suite(7 ^ 0x02, 100);
    report(7, "Ramsey factorization", s.ok());
}

#[test]
fn criterion_8_determinism() {
    let bin = env!("CARGO_BIN_EXE_buffsim");
    let fixtures_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let tmp = std::env::temp_dir().join("buffsim-acceptance");
    std::fs::create_dir_all(&tmp).unwrap();
    let fx = |name: &str| fixtures_dir.join(name).display().to_string();
    let tf = |name: &str| tmp.join(name).display().to_string();

    // Every subcommand, with all file outputs captured for comparison.
    let runs: Vec<(Vec<String>, Vec<String>)> = vec![
        (
            vec![
                "sim".into(),
                "--relation".into(),
                "lookahead".into(),
                "--certificate".into(),
                tf("sim.cert"),
                fx("branching.A"),
                fx("branching.B"),
            ],
            vec![tf("sim.cert")],
        ),
        (
            vec![
                "sim".into(),
                "--relation".into(),
                "bounded".into(),
                "--k".into(),
                "2".into(),
                "--certificate".into(),
                tf("bounded.cert"),
                fx("lookahead-gap.A"),
                fx("lookahead-gap.B"),
            ],
            vec![tf("bounded.cert")],
        ),
        (
            vec!["incl".into(), fx("inclusion-gap.A"), fx("inclusion-gap.B")],
            vec![],
        ),
        (
            vec![
                "minimize".into(),
                "--relation".into(),
                "direct".into(),
                "--k".into(),
                "1".into(),
                "--prune".into(),
                "-o".into(),
                tf("min.nba"),
                fx("branching.A"),
            ],
            vec![tf("min.nba")],
        ),
        (
            vec![
                "gen".into(),
                "pspace".into(),
                "--tiling".into(),
                fx("example.tiles"),
                "--n".into(),
                "1".into(),
                "-o".into(),
                tf("gen"),
            ],
            vec![tf("gen.A.nba"), tf("gen.B.nba")],
        ),
        (
            vec!["monoid".into(), "--dot".into(), tf("cayley.dot"), fx("a1")],
            vec![tf("cayley.dot")],
        ),
        (
            vec!["selftest".into(), "--seed".into(), "3".into()],
            vec![],
        ),
    ];

    let mut ok = true;
    for (argv, outputs) in &runs {
        let mut snapshots: Vec<(Vec<u8>, Vec<Vec<u8>>)> = Vec::new();
        for _ in 0..2 {
            let out = Command::new(bin).args(argv).output().unwrap();
            let files: Vec<Vec<u8>> =
                outputs.iter().map(|p| std::fs::read(p).unwrap_or_default()).collect();
            snapshots.push((out.stdout, files));
        }
        if snapshots[0] != snapshots[1] {
            eprintln!("nondeterministic output for argv {:?}", argv);
            ok = false;
        }
    }
    report(8, "byte-identical determinism", ok);
}
