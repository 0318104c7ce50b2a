//! `buffsim` — command-line frontend for the buffered-simulation toolkit.
//!
//! Exit codes: 0 = positive verdict / success, 1 = negative verdict,
//! 2 = error or inconclusive (resource cap exceeded). In non-verbose mode
//! the verdict line `RESULT holds|fails|inconclusive` is the only line on
//! standard output; everything else goes to standard error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use buffsim_core::{
    build_bounded_buffer_arena, build_plain_sim_arena, compute_preorder, decide, default_cap,
    language_inclusion, parse_nba, prune, quotient_automaton, replay, solve, word_profile,
    Acceptance, BufferMode, Error, InclusionVerdict, Nba, NbaFormat, PreorderKind,
    QuotientRelation, RunPath, SimulationOutcome, TilingSystem,
};

#[derive(Parser)]
#[command(
    name = "buffsim",
    about = "Buffered simulation relations, Ramsey-based language inclusion, \
             simulation-based minimisation, and hardness-instance generators \
             for nondeterministic Büchi automata"
)]
struct Cli {
    /// Also print reports and diagnostics to standard output.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a simulation relation between two automata.
    Sim(SimArgs),
    /// Ramsey-based language inclusion L(A) ⊆ L(B).
    Incl(InclArgs),
    /// Quotient (and optionally prune) an automaton by a bounded-k
    /// simulation preorder.
    Minimize(MinimizeArgs),
    /// Generate a hard instance pair from a tiling system.
    Gen(GenArgs),
    /// Build and print the transition monoid of an automaton.
    Monoid(MonoidArgs),
    /// Run the full seeded property and differential suites.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Relation {
    Plain,
    Bounded,
    Lookahead,
    Continuous,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Lookahead,
    Continuous,
}

#[derive(Clone, Copy, ValueEnum)]
enum AcceptanceArg {
    Fair,
    Direct,
    Delayed,
}

impl From<AcceptanceArg> for Acceptance {
    fn from(a: AcceptanceArg) -> Acceptance {
        match a {
            AcceptanceArg::Fair => Acceptance::Fair,
            AcceptanceArg::Direct => Acceptance::Direct,
            AcceptanceArg::Delayed => Acceptance::Delayed,
        }
    }
}

#[derive(Args)]
struct SimArgs {
    /// Which simulation relation to decide.
    #[arg(long, value_enum)]
    relation: Relation,
    /// Buffer discipline for --relation bounded (default: lookahead).
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Acceptance condition (default: fair; quotient relations are
    /// fair-only).
    #[arg(long, value_enum)]
    acceptance: Option<AcceptanceArg>,
    /// Buffer bound; required for and exclusive to --relation bounded.
    #[arg(long)]
    k: Option<usize>,
    /// Node budget for monoid closure and arena construction.
    #[arg(long)]
    cap: Option<usize>,
    /// Write the winner's strategy certificate to this file.
    #[arg(long)]
    certificate: Option<PathBuf>,
    /// Write the game arena in DOT format to this file.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Replay an accepting lasso u:v of A through the winning strategy
    /// (quotient relations only; letters whitespace-separated).
    #[arg(long)]
    replay: Option<String>,
    a: PathBuf,
    b: PathBuf,
}

#[derive(Args)]
struct InclArgs {
    #[arg(long)]
    cap: Option<usize>,
    a: PathBuf,
    b: PathBuf,
}

#[derive(Args)]
struct MinimizeArgs {
    /// Preorder provenance: direct or delayed bounded-k look-ahead
    /// simulation.
    #[arg(long)]
    relation: PreorderKind,
    /// Buffer bound of the underlying simulation games.
    #[arg(long)]
    k: usize,
    /// Also delete subsumed transitions (direct provenance only).
    #[arg(long)]
    prune: bool,
    /// Check language equality of input and output with the inclusion
    /// oracle; a violation fails the process.
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    cap: Option<usize>,
    /// Output path for the minimised automaton.
    #[arg(short)]
    o: PathBuf,
    a: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Pspace,
    Exptime,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    /// Tiling-system description file.
    #[arg(long)]
    tiling: PathBuf,
    /// Corridor width (pspace) or row length (exptime).
    #[arg(long)]
    n: usize,
    /// Output prefix; writes <prefix>.A.nba and <prefix>.B.nba.
    #[arg(short, long = "out-prefix")]
    o: PathBuf,
    /// Search budget for the brute-force oracle.
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Args)]
struct MonoidArgs {
    #[arg(long)]
    cap: Option<usize>,
    /// Write the right-Cayley graph in DOT format to this file.
    #[arg(long)]
    dot: Option<PathBuf>,
    a: PathBuf,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    cap: Option<usize>,
}

/// Final verdict of a subcommand; printed as the sole stdout line.
enum Outcome {
    Holds,
    Fails,
    Inconclusive(String),
}

impl Outcome {
    fn finish(self) -> ExitCode {
        match self {
            Outcome::Holds => {
                println!("RESULT holds");
                ExitCode::SUCCESS
            }
            Outcome::Fails => {
                println!("RESULT fails");
                ExitCode::from(1)
            }
            Outcome::Inconclusive(why) => {
                eprintln!("inconclusive: {}", why);
                println!("RESULT inconclusive");
                ExitCode::from(2)
            }
        }
    }
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {}", msg);
    ExitCode::from(2)
}

fn load_nba(path: &Path) -> Result<Nba, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {}", path.display(), e))?;
    let format = if path.extension().is_some_and(|e| e == "ba") {
        NbaFormat::Ba
    } else {
        NbaFormat::Native
    };
    parse_nba(&text, format).map_err(|e| format!("{}: {}", path.display(), e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let verbose = cli.verbose;
    match cli.command {
        Command::Sim(args) => run_sim(args, verbose),
        Command::Incl(args) => run_incl(args, verbose),
        Command::Minimize(args) => run_minimize(args, verbose),
        Command::Gen(args) => run_gen(args, verbose),
        Command::Monoid(args) => run_monoid(args, verbose),
        Command::Selftest(args) => run_selftest(args, verbose),
    }
}

fn run_sim(args: SimArgs, verbose: bool) -> ExitCode {
    let cap = args.cap.unwrap_or_else(default_cap);
    if args.k.is_some() && args.relation != Relation::Bounded {
        return fail("--k is only valid with --relation bounded");
    }
    if args.mode.is_some() && args.relation != Relation::Bounded {
        return fail("--mode is only valid with --relation bounded");
    }
    if args.replay.is_some()
        && !matches!(args.relation, Relation::Lookahead | Relation::Continuous)
    {
        return fail("--replay is only valid with the quotient relations");
    }
    let acceptance: Acceptance = args.acceptance.unwrap_or(AcceptanceArg::Fair).into();
    let a = match load_nba(&args.a) {
        Ok(a) => a,
        Err(e) => return fail(e),
    };
    let b = match load_nba(&args.b) {
        Ok(b) => b,
        Err(e) => return fail(e),
    };

    match args.relation {
        Relation::Plain | Relation::Bounded => {
            let arena = if args.relation == Relation::Plain {
                build_plain_sim_arena(&a, &b, acceptance)
            } else {
                let Some(k) = args.k else {
                    return fail("--relation bounded requires --k");
                };
                let mode = match args.mode.unwrap_or(ModeArg::Lookahead) {
                    ModeArg::Lookahead => BufferMode::Lookahead,
                    ModeArg::Continuous => BufferMode::Continuous,
                };
                build_bounded_buffer_arena(&a, &b, k, mode, acceptance, cap)
            };
            let arena = match arena {
                Ok(arena) => arena,
                Err(Error::CapExceeded { partial, cap }) => {
                    return Outcome::Inconclusive(format!(
                        "arena cap exceeded ({} positions, cap {})",
                        partial, cap
                    ))
                    .finish()
                }
                Err(e) => return fail(e),
            };
            let verdict = solve(&arena);
            if let Some(path) = &args.dot {
                if let Err(e) = fs::write(path, arena.to_dot("arena")) {
                    return fail(format!("cannot write {}: {}", path.display(), e));
                }
            }
            if let Some(path) = &args.certificate {
                let mut out = String::new();
                for (u, choice) in verdict.strategy.iter().enumerate() {
                    if let Some(v) = choice {
                        out.push_str(&format!("POSITION {} -> {}\n", u, v));
                    }
                }
                if let Err(e) = fs::write(path, out) {
                    return fail(format!("cannot write {}: {}", path.display(), e));
                }
            }
            if verbose {
                println!(
                    "arena: {} positions, winner: {:?}",
                    verdict.arena_size, verdict.winner
                );
            }
            if verdict.holds { Outcome::Holds } else { Outcome::Fails }.finish()
        }
        Relation::Lookahead | Relation::Continuous => {
            match args.acceptance {
                None | Some(AcceptanceArg::Fair) => {}
                Some(_) => {
                    return fail("the quotient relations support --acceptance fair only")
                }
            }
            let relation = if args.relation == Relation::Lookahead {
                QuotientRelation::LookaheadFair
            } else {
                QuotientRelation::ContinuousFair
            };
            let (outcome, game) = match decide(&a, &b, relation, cap) {
                Ok(pair) => pair,
                Err(e) => return fail(e),
            };
            let report = match outcome {
                SimulationOutcome::Decided(report) => report,
                SimulationOutcome::Inconclusive { partial, cap } => {
                    return Outcome::Inconclusive(format!(
                        "cap exceeded ({} nodes, cap {})",
                        partial, cap
                    ))
                    .finish()
                }
            };
            let game = game.expect("a decided outcome carries its game");
            if let Some(path) = &args.dot {
                if let Err(e) = fs::write(path, game.arena.to_dot("quotient")) {
                    return fail(format!("cannot write {}: {}", path.display(), e));
                }
            }
            if let Some(path) = &args.certificate {
                let mut out = report.certificate.join("\n");
                out.push('\n');
                if let Err(e) = fs::write(path, out) {
                    return fail(format!("cannot write {}: {}", path.display(), e));
                }
            }
            if let Some(spec) = &args.replay {
                match run_replay(&game, &a, &b, spec) {
                    Ok(path) => {
                        let states: Vec<&str> =
                            path.states.iter().map(|&q| b.state_name(q)).collect();
                        eprintln!("replayed Duplicator run: {}", states.join(" "));
                    }
                    Err(e) => return fail(e),
                }
            }
            if verbose {
                println!(
                    "monoid: {} elements, arena: {} positions",
                    report.monoid_size, report.arena_size
                );
            }
            if report.holds { Outcome::Holds } else { Outcome::Fails }.finish()
        }
    }
}

/// Parses `u:v`, locates an accepting lasso run of `a` over u·v^ω, and
/// replays it through the Prover strategy of a winning quotient game.
fn run_replay(
    game: &buffsim_core::QuotientGame,
    a: &Nba,
    b: &Nba,
    spec: &str,
) -> Result<RunPath, String> {
    let (u, v) = spec
        .split_once(':')
        .ok_or_else(|| "replay argument must have the form u:v".to_string())?;
    let parse_word = |s: &str| -> Result<Vec<u32>, String> {
        let s = s.trim();
        if let Ok(w) = a.letters(s) {
            return Ok(w);
        }
        // Fallback for unseparated single-character letters, e.g. "ab".
        s.chars()
            .map(|c| a.letters(&c.to_string()).map(|w| w[0]))
            .collect::<Result<Vec<u32>, _>>()
            .map_err(|e| e.to_string())
    };
    let u = parse_word(u)?;
    let v = parse_word(v)?;
    if v.is_empty() {
        return Err("the period v must be nonempty".into());
    }
    let n = a.num_states();
    // Find an accepting anchor q reachable via u·v^i that carries a v^j
    // loop, then realise both path segments concretely.
    for i in 0..=n {
        let mut stem_word = u.clone();
        for _ in 0..i {
            stem_word.extend_from_slice(&v);
        }
        let p_stem = word_profile(a, &stem_word).map_err(|e| e.to_string())?;
        for q in 0..n as u32 {
            if !a.is_accepting(q) || !p_stem.has_path(a.initial() as usize, q as usize) {
                continue;
            }
            for j in 1..=n {
                let mut cyc_word = Vec::new();
                for _ in 0..j {
                    cyc_word.extend_from_slice(&v);
                }
                let p_cyc = word_profile(a, &cyc_word).map_err(|e| e.to_string())?;
                if !p_cyc.has_path(q as usize, q as usize) {
                    continue;
                }
                let stem_states = realize_path(a, a.initial(), &stem_word, q)
                    .ok_or_else(|| "internal: stem path not realisable".to_string())?;
                let cyc_states = realize_path(a, q, &cyc_word, q)
                    .ok_or_else(|| "internal: cycle path not realisable".to_string())?;
                let stem = RunPath::new(stem_states, stem_word).map_err(|e| e.to_string())?;
                let cycle = RunPath::new(cyc_states, cyc_word).map_err(|e| e.to_string())?;
                return replay(game, a, b, &stem, &cycle, 3).map_err(|e| e.to_string());
            }
        }
    }
    Err("A has no accepting lasso over u·v^ω".into())
}

/// Depth-first search for a concrete state sequence from `from` to `to`
/// along `word`.
fn realize_path(a: &Nba, from: u32, word: &[u32], to: u32) -> Option<Vec<u32>> {
    fn go(a: &Nba, here: u32, word: &[u32], idx: usize, to: u32, acc: &mut Vec<u32>) -> bool {
        if idx == word.len() {
            return here == to;
        }
        for &t in a.successors(here, word[idx]) {
            acc.push(t);
            if go(a, t, word, idx + 1, to, acc) {
                return true;
            }
            acc.pop();
        }
        false
    }
    let mut acc = vec![from];
    if go(a, from, word, 0, to, &mut acc) {
        Some(acc)
    } else {
        None
    }
}

fn run_incl(args: InclArgs, verbose: bool) -> ExitCode {
    let cap = args.cap.unwrap_or_else(default_cap);
    let a = match load_nba(&args.a) {
        Ok(a) => a,
        Err(e) => return fail(e),
    };
    let b = match load_nba(&args.b) {
        Ok(b) => b,
        Err(e) => return fail(e),
    };
    match language_inclusion(&a, &b, cap) {
        Ok(InclusionVerdict::Included) => Outcome::Holds.finish(),
        Ok(InclusionVerdict::NotIncluded(w)) => {
            let rendered = w.render(&a);
            if verbose {
                println!("counterexample: {}", rendered);
            }
            eprintln!("counterexample: {}", rendered);
            Outcome::Fails.finish()
        }
        Ok(InclusionVerdict::Inconclusive { partial, cap }) => Outcome::Inconclusive(format!(
            "monoid cap exceeded ({} elements, cap {})",
            partial, cap
        ))
        .finish(),
        Err(e) => fail(e),
    }
}

fn run_minimize(args: MinimizeArgs, verbose: bool) -> ExitCode {
    let cap = args.cap.unwrap_or_else(default_cap);
    if args.prune && args.relation != PreorderKind::Direct {
        return fail(Error::DelayedPruningRefused);
    }
    let a = match load_nba(&args.a) {
        Ok(a) => a,
        Err(e) => return fail(e),
    };
    let preorder = match compute_preorder(&a, args.relation, args.k, cap) {
        Ok(p) => p,
        Err(Error::CapExceeded { partial, cap }) => {
            return Outcome::Inconclusive(format!(
                "arena cap exceeded ({} positions, cap {})",
                partial, cap
            ))
            .finish()
        }
        Err(e) => return fail(e),
    };
    let mut out = quotient_automaton(&a, &preorder);
    if args.prune {
        // The preorder indexes the original states; recompute it over the
        // quotient before deleting its subsumed transitions.
        let preorder_q = match compute_preorder(&out, args.relation, args.k, cap) {
            Ok(p) => p,
            Err(Error::CapExceeded { partial, cap }) => {
                return Outcome::Inconclusive(format!(
                    "arena cap exceeded ({} positions, cap {})",
                    partial, cap
                ))
                .finish()
            }
            Err(e) => return fail(e),
        };
        out = match prune(&out, &preorder_q) {
            Ok(out) => out,
            Err(e) => return fail(e),
        };
    }
    if let Err(e) = fs::write(&args.o, out.to_native()) {
        return fail(format!("cannot write {}: {}", args.o.display(), e));
    }
    if verbose {
        println!("states: {} -> {}", a.num_states(), out.num_states());
    }
    eprintln!(
        "minimised {} states / {} transitions to {} / {}",
        a.num_states(),
        a.transitions().len(),
        out.num_states(),
        out.transitions().len()
    );
    if args.verify {
        for (x, y, dir) in [(&a, &out, "input ⊆ output"), (&out, &a, "output ⊆ input")] {
            match language_inclusion(x, y, cap) {
                Ok(InclusionVerdict::Included) => {}
                Ok(InclusionVerdict::NotIncluded(w)) => {
                    eprintln!("verification failed ({}): counterexample {}", dir, w.render(x));
                    return Outcome::Fails.finish();
                }
                Ok(InclusionVerdict::Inconclusive { partial, cap }) => {
                    return Outcome::Inconclusive(format!(
                        "verification oracle cap exceeded ({} elements, cap {})",
                        partial, cap
                    ))
                    .finish()
                }
                Err(e) => return fail(e),
            }
        }
        eprintln!("verification passed: language preserved in both directions");
    }
    Outcome::Holds.finish()
}

fn run_gen(args: GenArgs, verbose: bool) -> ExitCode {
    let budget = args.budget.unwrap_or(100_000);
    let text = match fs::read_to_string(&args.tiling) {
        Ok(t) => t,
        Err(e) => return fail(format!("cannot read {}: {}", args.tiling.display(), e)),
    };
    let ts = match TilingSystem::parse(&text) {
        Ok(ts) => ts,
        Err(e) => return fail(e),
    };
    let (a, b, expected) = match args.kind {
        GenKind::Pspace => {
            let (a, b) = buffsim_core::gen_pspace(&ts, args.n);
            (a, b, buffsim_core::expected_pspace_holds(&ts, args.n, budget))
        }
        GenKind::Exptime => {
            let (a, b) = buffsim_core::gen_exptime(&ts, args.n);
            (a, b, buffsim_core::expected_exptime_holds(&ts, args.n, budget))
        }
    };
    let prefix = args.o.display();
    let path_a = PathBuf::from(format!("{}.A.nba", prefix));
    let path_b = PathBuf::from(format!("{}.B.nba", prefix));
    if let Err(e) = fs::write(&path_a, a.to_native()) {
        return fail(format!("cannot write {}: {}", path_a.display(), e));
    }
    if let Err(e) = fs::write(&path_b, b.to_native()) {
        return fail(format!("cannot write {}: {}", path_b.display(), e));
    }
    let expected = match expected {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    eprintln!(
        "wrote {} ({} states) and {} ({} states); oracle expects the simulation {}",
        path_a.display(),
        a.num_states(),
        path_b.display(),
        b.num_states(),
        if expected { "to hold" } else { "to fail" }
    );
    if verbose {
        println!("oracle expects: {}", if expected { "holds" } else { "fails" });
    }
    if expected { Outcome::Holds } else { Outcome::Fails }.finish()
}

fn run_monoid(args: MonoidArgs, verbose: bool) -> ExitCode {
    let cap = args.cap.unwrap_or_else(default_cap);
    let a = match load_nba(&args.a) {
        Ok(a) => a,
        Err(e) => return fail(e),
    };
    let m = match buffsim_core::build_monoid(&a, cap) {
        Ok(m) => m,
        Err(Error::CapExceeded { partial, cap }) => {
            return Outcome::Inconclusive(format!(
                "monoid cap exceeded ({} elements, cap {})",
                partial, cap
            ))
            .finish()
        }
        Err(e) => return fail(e),
    };
    let mut report = String::new();
    let idempotents = m.idempotents().len();
    report.push_str(&format!("{} elements, {} idempotent\n", m.len(), idempotents));
    for (i, e) in m.elements().iter().enumerate() {
        let word = if e.witness.is_empty() {
            "ε".to_string()
        } else {
            e.witness
                .iter()
                .map(|&l| a.letter_name(l).to_string())
                .collect::<Vec<_>>()
                .join(".")
        };
        let tags = match (e.is_identity, e.idempotent) {
            (true, _) => " (identity)",
            (false, true) => " (idempotent)",
            (false, false) => "",
        };
        report.push_str(&format!("element {} [{}]{}\n", i, word, tags));
        for line in e.profile.render().lines() {
            report.push_str(&format!("  {}\n", line));
        }
    }
    eprint!("{}", report);
    if verbose {
        print!("{}", report);
    }
    if let Some(path) = &args.dot {
        if let Err(e) = fs::write(path, m.to_cayley_dot(a.alphabet())) {
            return fail(format!("cannot write {}: {}", path.display(), e));
        }
    }
    Outcome::Holds.finish()
}

fn run_selftest(args: SelftestArgs, verbose: bool) -> ExitCode {
    let cap = args.cap.unwrap_or_else(default_cap);
    let report = buffsim_core::suites::run_all(args.seed, cap);
    let rendered = report.render();
    eprint!("{}", rendered);
    if verbose {
        print!("{}", rendered);
    }
    if report.ok() { Outcome::Holds } else { Outcome::Fails }.finish()
}
