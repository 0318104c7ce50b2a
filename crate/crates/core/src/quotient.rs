//! The quotient games over the transition monoid of A ⊎ B: Refuter pumps
//! abstract loops ([w1], [w2], q_target), Prover answers with states that
//! carry an accepting [w2]-loop, and Prover wins exactly the infinite
//! plays (safety). The continuous game threads the abstract buffer β
//! through rounds; the look-ahead game flushes it every round.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::games::arena::{ArenaBuilder, GameArena, Player};
use crate::games::solve::{solve, Verdict};
use crate::monoid::{build_monoid, TransitionMonoid};
use crate::nba::{DisjointUnion, Nba};
use crate::word::RunPath;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientRelation {
    ContinuousFair,
    LookaheadFair,
}

impl QuotientRelation {
    pub fn name(self) -> &'static str {
        match self {
            QuotientRelation::ContinuousFair => "continuous-fair",
            QuotientRelation::LookaheadFair => "lookahead-fair",
        }
    }

    fn tracks_beta(self) -> bool {
        matches!(self, QuotientRelation::ContinuousFair)
    }
}

/// Payload of an arena position; parallel to the arena's position ids.
#[derive(Debug, Clone)]
pub enum PositionInfo {
    /// Refuter to move at (q, q') with abstract buffer β (a monoid id; the
    /// identity in look-ahead games).
    Refuter { q: u32, qp: u32, beta: u32 },
    /// Prover to move: Refuter picked some ([w1], [w2], q_target); `w1` is
    /// the first class generating this position in enumeration order, and
    /// `mask` is the bitset of states Prover may answer with.
    Prover { qt: u32, w1: u32, w2: u32, mask: Vec<u64> },
    /// Dead-end sink added by the arena builder.
    Sink,
}

/// A fully-built and solved quotient game, with everything needed for
/// certificates and replay.
#[derive(Debug)]
pub struct QuotientGame {
    pub relation: QuotientRelation,
    pub union: DisjointUnion,
    pub monoid: TransitionMonoid,
    pub arena: GameArena,
    pub info: Vec<PositionInfo>,
    pub verdict: Verdict,
    refuter_ids: HashMap<(u32, u32, u32), u32>,
    prover_ids: HashMap<(u32, u32, Vec<u64>), u32>,
}

#[derive(Debug, Clone)]
pub enum SimulationOutcome {
    Decided(Box<SimulationReport>),
    Inconclusive { partial: usize, cap: usize },
}

impl SimulationOutcome {
    pub fn holds(&self) -> Option<bool> {
        match self {
            SimulationOutcome::Decided(r) => Some(r.holds),
            SimulationOutcome::Inconclusive { .. } => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimulationReport {
    pub relation: QuotientRelation,
    pub holds: bool,
    pub monoid_size: usize,
    pub arena_size: usize,
    /// One `POSITION a -> b [witness: ...]` line per strategy edge of the
    /// winner, in position order.
    pub certificate: Vec<String>,
    /// Witness words of every monoid class referenced by the certificate.
    pub witness_words: BTreeMap<String, String>,
}

struct Builder<'m> {
    m: &'m TransitionMonoid,
    relation: QuotientRelation,
    cap: usize,
    arena: ArenaBuilder,
    info: Vec<PositionInfo>,
    refuter_ids: HashMap<(u32, u32, u32), u32>,
    prover_ids: HashMap<(u32, u32, Vec<u64>), u32>,
    queue: Vec<u32>,
    compose_memo: HashMap<(u32, u32), u32>,
    /// Non-identity idempotents with an accepting loop on some A-state,
    /// with their diagonal accepting-loop masks.
    loops: Vec<(u32, Vec<u64>)>,
    a_part_mask: Vec<u64>,
    union_names: Vec<String>,
}

fn mask_bits(mask: &[u64]) -> impl Iterator<Item = u32> + '_ {
    mask.iter().enumerate().flat_map(|(w, &bits)| {
        let mut bits = bits;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let b = bits.trailing_zeros();
            bits &= bits - 1;
            Some(w as u32 * 64 + b)
        })
    })
}

fn and_masks(x: &[u64], y: &[u64]) -> Vec<u64> {
    x.iter().zip(y).map(|(a, b)| a & b).collect()
}

impl<'m> Builder<'m> {
    fn compose(&mut self, i: u32, j: u32) -> u32 {
        if let Some(&r) = self.compose_memo.get(&(i, j)) {
            return r;
        }
        let r = self.m.compose_ids(i, j);
        self.compose_memo.insert((i, j), r);
        r
    }

    fn witness_str(&self, e: u32) -> String {
        let w = &self.m.element(e).witness;
        if w.is_empty() {
            "ε".to_string()
        } else {
            w.iter().map(|&l| self.union_names[l as usize].clone()).collect::<Vec<_>>().join(".")
        }
    }

    fn intern_refuter(&mut self, q: u32, qp: u32, beta: u32) -> Result<u32> {
        if let Some(&id) = self.refuter_ids.get(&(q, qp, beta)) {
            return Ok(id);
        }
        if self.arena.len() >= self.cap {
            return Err(Error::CapExceeded { partial: self.arena.len(), cap: self.cap });
        }
        let label = format!(
            "R({},{},β=[{}])",
            q, qp, self.witness_str(beta)
        );
        let id = self.arena.push(Player::Spoiler, 0, label);
        self.info.push(PositionInfo::Refuter { q, qp, beta });
        self.refuter_ids.insert((q, qp, beta), id);
        self.queue.push(id);
        Ok(id)
    }

    fn intern_prover(&mut self, qt: u32, w1: u32, w2: u32, mask: Vec<u64>) -> Result<u32> {
        if let Some(&id) = self.prover_ids.get(&(qt, w2, mask.clone())) {
            return Ok(id);
        }
        if self.arena.len() >= self.cap {
            return Err(Error::CapExceeded { partial: self.arena.len(), cap: self.cap });
        }
        let label = format!(
            "P({},w1=[{}],w2=[{}])",
            qt,
            self.witness_str(w1),
            self.witness_str(w2)
        );
        let id = self.arena.push(Player::Duplicator, 0, label);
        self.info.push(PositionInfo::Prover { qt, w1, w2, mask: mask.clone() });
        self.prover_ids.insert((qt, w2, mask), id);
        self.queue.push(id);
        Ok(id)
    }

    fn expand(&mut self, id: u32) -> Result<()> {
        match self.info[id as usize].clone() {
            PositionInfo::Refuter { q, qp, beta } => {
                let mut seen: HashSet<u32> = HashSet::new();
                for e1 in 0..self.m.len() as u32 {
                    let row_a = and_masks(
                        self.m.element(e1).profile.path_row(q as usize),
                        &self.a_part_mask,
                    );
                    if row_a.iter().all(|&x| x == 0) {
                        continue;
                    }
                    let mut c1 = None; // β·w1, computed lazily per w1
                    for li in 0..self.loops.len() {
                        let (e2, ref acc2) = self.loops[li];
                        let qt_mask = and_masks(&row_a, acc2);
                        if qt_mask.iter().all(|&x| x == 0) {
                            continue;
                        }
                        let c1v = match c1 {
                            Some(v) => v,
                            None => {
                                let v = self.compose(beta, e1);
                                c1 = Some(v);
                                v
                            }
                        };
                        let c = self.compose(c1v, e2);
                        let acc2 = self.loops[li].1.clone();
                        let s_mask = and_masks(
                            self.m.element(c).profile.path_row(qp as usize),
                            &acc2,
                        );
                        for qt in mask_bits(&qt_mask) {
                            let to = self.intern_prover(qt, e1, e2, s_mask.clone())?;
                            if seen.insert(to) {
                                self.arena.add_edge(id, to);
                            }
                        }
                    }
                }
            }
            PositionInfo::Prover { qt, w2, ref mask, .. } => {
                let beta2 = if self.relation.tracks_beta() { w2 } else { 0 };
                for qp2 in mask_bits(mask) {
                    let to = self.intern_refuter(qt, qp2, beta2)?;
                    self.arena.add_edge(id, to);
                }
            }
            PositionInfo::Sink => {}
        }
        Ok(())
    }
}

/// Builds and solves the quotient game for `relation` on a ⊎ b over its
/// monoid `m` (which must have been built from the same union).
pub fn build_quotient_game(
    a: &Nba,
    b: &Nba,
    m: TransitionMonoid,
    relation: QuotientRelation,
    cap: usize,
) -> Result<QuotientGame> {
    let union = DisjointUnion::new(a, b)?;
    if m.dim() != union.nba.num_states() {
        return Err(Error::DimensionMismatch(m.dim(), union.nba.num_states()));
    }
    let words = m.dim().div_ceil(64);
    let mut a_part_mask = vec![0u64; words];
    for q in 0..union.a_states {
        a_part_mask[q / 64] |= 1 << (q % 64);
    }
    let loops: Vec<(u32, Vec<u64>)> = m
        .idempotents()
        .into_iter()
        .filter(|&e| !m.element(e).is_identity)
        .filter_map(|e| {
            let acc = m.element(e).profile.accepting_loop_mask();
            let on_a = and_masks(&acc, &a_part_mask);
            if on_a.iter().all(|&x| x == 0) {
                None
            } else {
                Some((e, acc))
            }
        })
        .collect();
    let mut builder = Builder {
        m: &m,
        relation,
        cap,
        arena: ArenaBuilder::new(),
        info: Vec::new(),
        refuter_ids: HashMap::new(),
        prover_ids: HashMap::new(),
        queue: Vec::new(),
        compose_memo: HashMap::new(),
        loops,
        a_part_mask,
        union_names: union.nba.alphabet().to_vec(),
    };
    let start = builder.intern_refuter(union.a_initial, union.b_initial, 0)?;
    let mut next = 0usize;
    while next < builder.queue.len() {
        let id = builder.queue[next];
        next += 1;
        builder.expand(id)?;
    }
    let Builder { arena, mut info, refuter_ids, prover_ids, .. } = builder;
    let arena = arena.finish(start);
    info.resize(arena.len(), PositionInfo::Sink);
    let verdict = solve(&arena);
    Ok(QuotientGame {
        relation,
        union,
        monoid: m,
        arena,
        info,
        verdict,
        refuter_ids,
        prover_ids,
    })
}

pub fn build_continuous_quotient(
    a: &Nba,
    b: &Nba,
    m: TransitionMonoid,
    cap: usize,
) -> Result<QuotientGame> {
    build_quotient_game(a, b, m, QuotientRelation::ContinuousFair, cap)
}

pub fn build_lookahead_quotient(
    a: &Nba,
    b: &Nba,
    m: TransitionMonoid,
    cap: usize,
) -> Result<QuotientGame> {
    build_quotient_game(a, b, m, QuotientRelation::LookaheadFair, cap)
}

/// Full decision pipeline: disjoint union → monoid → arena → solve.
/// A blown cap is an explicit Inconclusive, never a boolean.
pub fn decide(
    a: &Nba,
    b: &Nba,
    relation: QuotientRelation,
    cap: usize,
) -> Result<(SimulationOutcome, Option<QuotientGame>)> {
    let union = DisjointUnion::new(a, b)?;
    let m = match build_monoid(&union.nba, cap) {
        Ok(m) => m,
        Err(Error::CapExceeded { partial, cap }) => {
            return Ok((SimulationOutcome::Inconclusive { partial, cap }, None))
        }
        Err(e) => return Err(e),
    };
    match build_quotient_game(a, b, m, relation, cap) {
        Ok(game) => {
            let report = game.report();
            Ok((SimulationOutcome::Decided(Box::new(report)), Some(game)))
        }
        Err(Error::CapExceeded { partial, cap }) => {
            Ok((SimulationOutcome::Inconclusive { partial, cap }, None))
        }
        Err(e) => Err(e),
    }
}

impl QuotientGame {
    pub fn holds(&self) -> bool {
        self.verdict.holds
    }

    /// Arena id of the Refuter position (q, q', β), if it was reached.
    pub fn refuter_position(&self, q: u32, qp: u32, beta: u32) -> Option<u32> {
        self.refuter_ids.get(&(q, qp, beta)).copied()
    }

    pub fn report(&self) -> SimulationReport {
        let mut certificate = Vec::new();
        let mut witness_words = BTreeMap::new();
        let note_class = |w: &mut BTreeMap<String, String>, e: u32| {
            let elem = self.monoid.element(e);
            let word = if elem.witness.is_empty() {
                "ε".to_string()
            } else {
                elem.witness
                    .iter()
                    .map(|&l| self.union.nba.letter_name(l).to_string())
                    .collect::<Vec<_>>()
                    .join(".")
            };
            w.entry(format!("[{}]", word.clone())).or_insert(word);
        };
        for (u, choice) in self.verdict.strategy.iter().enumerate() {
            let Some(v) = choice else { continue };
            let annot = match &self.info[u] {
                PositionInfo::Prover { w1, w2, .. } => {
                    note_class(&mut witness_words, *w1);
                    note_class(&mut witness_words, *w2);
                    format!(
                        " [witness: w1={}, w2={}]",
                        self.class_word(*w1),
                        self.class_word(*w2)
                    )
                }
                _ => match &self.info[*v as usize] {
                    PositionInfo::Prover { w1, w2, .. } => {
                        note_class(&mut witness_words, *w1);
                        note_class(&mut witness_words, *w2);
                        format!(
                            " [witness: w1={}, w2={}]",
                            self.class_word(*w1),
                            self.class_word(*w2)
                        )
                    }
                    _ => String::new(),
                },
            };
            certificate.push(format!("POSITION {} -> {}{}", u, v, annot));
        }
        SimulationReport {
            relation: self.relation,
            holds: self.verdict.holds,
            monoid_size: self.monoid.len(),
            arena_size: self.arena.len(),
            certificate,
            witness_words,
        }
    }

    fn class_word(&self, e: u32) -> String {
        let w = &self.monoid.element(e).witness;
        if w.is_empty() {
            "ε".to_string()
        } else {
            w.iter()
                .map(|&l| self.union.nba.letter_name(l).to_string())
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

/// A path in `b` realising `word` from `from` to `to`, preferring paths
/// through an accepting position when one exists.
fn find_word_path(b: &Nba, from: u32, word: &[u32], to: u32) -> Option<RunPath> {
    let n = b.num_states();
    // reach[i][(q, flag)] = reachable after i letters, flag = passed an
    // accepting position ≥ 1.
    let mut layers: Vec<Vec<bool>> = Vec::with_capacity(word.len() + 1);
    let mut cur = vec![false; 2 * n];
    cur[from as usize * 2] = true;
    layers.push(cur.clone());
    for &l in word {
        let mut nxt = vec![false; 2 * n];
        for q in 0..n {
            for f in 0..2 {
                if !cur[q * 2 + f] {
                    continue;
                }
                for &t in b.successors(q as u32, l) {
                    let nf = if b.is_accepting(t) { 1 } else { f };
                    nxt[t as usize * 2 + nf] = true;
                }
            }
        }
        cur = nxt;
        layers.push(cur.clone());
    }
    let last = &layers[word.len()];
    let goal_flag = if last[to as usize * 2 + 1] {
        1
    } else if last[to as usize * 2] {
        0
    } else {
        return None;
    };
    // Backtrack deterministically (smallest predecessor state first).
    let mut states = vec![to];
    let mut flag = goal_flag;
    for i in (0..word.len()).rev() {
        let l = word[i];
        let here = *states.last().unwrap();
        let mut found = None;
        'outer: for q in 0..n as u32 {
            for f in 0..2usize {
                if !layers[i][q as usize * 2 + f] {
                    continue;
                }
                let nf = if b.is_accepting(here) { 1 } else { f };
                if nf == flag && b.successors(q, l).contains(&here) {
                    found = Some((q, f));
                    break 'outer;
                }
            }
        }
        let (q, f) = found?;
        states.push(q);
        flag = f;
    }
    states.reverse();
    RunPath::new(states, word.to_vec()).ok()
}

/// Strategy transfer per the congruence lemmas: factorize the Spoiler
/// lasso with `ramsey_factorize`, follow the Prover strategy in the
/// quotient arena for `rounds` rounds, and realise each abstract move as a
/// concrete run segment of `b`. Any failure indicates a bug, never a
/// legitimate outcome.
pub fn replay(
    game: &QuotientGame,
    a: &Nba,
    b: &Nba,
    stem: &RunPath,
    cycle: &RunPath,
    rounds: usize,
) -> Result<RunPath> {
    use crate::monoid::ramsey_factorize;

    if !game.verdict.holds {
        return Err(Error::ReplayFailure("the relation does not hold".into()));
    }
    stem.validate(a)?;
    cycle.validate(a)?;
    let anchor = *stem.states.last().unwrap();
    if cycle.states[0] != anchor || *cycle.states.last().unwrap() != anchor {
        return Err(Error::InvalidRun("cycle must loop on the stem's last state".into()));
    }
    if !a.is_accepting(anchor) {
        return Err(Error::InvalidRun("lasso anchor must be accepting".into()));
    }

    // Unroll enough of the lasso to survive `rounds` factorizations: the
    // cycle powers hit an idempotent class within |monoid| repetitions.
    let m = &game.monoid;
    let per_round = 3 * (m.len() + 2) * cycle.len() + 2;
    let total = stem.len() + per_round * rounds;
    let mut states = stem.states.clone();
    let mut word = stem.word.clone();
    while word.len() < total {
        word.extend_from_slice(&cycle.word);
        states.extend_from_slice(&cycle.states[1..]);
    }
    let full = RunPath::new(states, word)?;

    let mut p = 0usize; // pointer into `full`
    let mut pending: Vec<u32> = Vec::new(); // concrete buffer content (class β)
    let mut dup_states: Vec<u32> = vec![b.initial()];
    let mut dup_word: Vec<u32> = Vec::new();
    let mut pos = game.arena.start;

    for round in 0..rounds {
        let PositionInfo::Refuter { q, qp, beta } = game.info[pos as usize] else {
            return Err(Error::ReplayFailure(format!("round {}: not a Refuter position", round)));
        };
        if full.states[p] != q {
            return Err(Error::ReplayFailure("pointer desynchronised from game state".into()));
        }
        let sub = RunPath::new(full.states[p..].to_vec(), full.word[p..].to_vec())?;
        // Factorize over the union automaton: the game's classes live in the
        // union monoid, and idempotency there is what the arena keys need.
        // A-runs embed verbatim since A keeps its state indices in the union.
        let Some((i, j, k)) = ramsey_factorize(&game.union.nba, &sub)? else {
            return Err(Error::ReplayFailure("no Ramsey triple in the unrolled run".into()));
        };
        let w1_word = &full.word[p..p + i];
        let w2_word = &full.word[p + i..p + j];
        let e1 = m.class_of(w1_word);
        let e2 = m.class_of(w2_word);
        let qt = full.states[p + i];

        // Locate the Prover position this Refuter move leads to.
        let c1 = m.compose_ids(beta, e1);
        let c = m.compose_ids(c1, e2);
        let acc2 = m.element(e2).profile.accepting_loop_mask();
        let s_mask = and_masks(m.element(c).profile.path_row(qp as usize), &acc2);
        let Some(&ppos) = game.prover_ids.get(&(qt, e2, s_mask)) else {
            return Err(Error::ReplayFailure(format!(
                "round {}: Refuter move ([{:?}],[{:?}],{}) has no arena position",
                round, w1_word, w2_word, qt
            )));
        };
        let Some(rpos) = game.verdict.strategy[ppos as usize] else {
            return Err(Error::ReplayFailure(format!(
                "round {}: Prover strategy undefined at position {}",
                round, ppos
            )));
        };
        let PositionInfo::Refuter { qp: qp2, .. } = game.info[rpos as usize] else {
            return Err(Error::ReplayFailure("strategy leaves the Refuter/Prover shape".into()));
        };

        // Realise the consumed segment in b: pending ++ w1 ++ w2 from the
        // current Duplicator state to Prover's answer.
        let mut segment = pending.clone();
        segment.extend_from_slice(w1_word);
        segment.extend_from_slice(w2_word);
        let from = *dup_states.last().unwrap();
        let to_local = qp2 - game.union.a_states as u32;
        let Some(path) = find_word_path(b, from, &segment, to_local) else {
            return Err(Error::ReplayFailure(format!(
                "round {}: no concrete b-path for the consumed segment",
                round
            )));
        };
        dup_word.extend_from_slice(&path.word);
        dup_states.extend_from_slice(&path.states[1..]);

        if game.relation.tracks_beta() {
            pending = full.word[p + j..p + k].to_vec();
            p += k;
        } else {
            pending.clear();
            p += j;
        }
        pos = rpos;
    }

    let out = RunPath::new(dup_states, dup_word)?;
    out.validate(b)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{a1, fixture};
    use crate::DEFAULT_CAP;

    fn decide_holds(a: &Nba, b: &Nba, rel: QuotientRelation) -> bool {
        decide(a, b, rel, DEFAULT_CAP).unwrap().0.holds().expect("conclusive at test scale")
    }

    #[test]
    fn reflexivity_both_relations() {
        let a = a1();
        assert!(decide_holds(&a, &a, QuotientRelation::ContinuousFair));
        assert!(decide_holds(&a, &a, QuotientRelation::LookaheadFair));
    }

    #[test]
    fn branching_quotient_verdicts() {
        let (a, b) = fixture("branching").unwrap();
        assert!(decide_holds(&a, &b, QuotientRelation::LookaheadFair));
        assert!(decide_holds(&a, &b, QuotientRelation::ContinuousFair));
        // LTS reading: all states accepting — continuous fails.
        let (la, lb) = (a.with_all_accepting(), b.with_all_accepting());
        assert!(!decide_holds(&la, &lb, QuotientRelation::ContinuousFair));
    }

    #[test]
    fn lookahead_gap_quotient_verdicts() {
        let (a, b) = fixture("lookahead-gap").unwrap();
        assert!(decide_holds(&a, &b, QuotientRelation::ContinuousFair));
        assert!(!decide_holds(&a, &b, QuotientRelation::LookaheadFair));
    }

    #[test]
    fn inclusion_gap_continuous_fails() {
        let (a, b) = fixture("inclusion-gap").unwrap();
        assert!(!decide_holds(&a, &b, QuotientRelation::ContinuousFair));
    }

    #[test]
    fn replay_identity_pair() {
        let a = a1();
        let (_, game) = decide(&a, &a, QuotientRelation::ContinuousFair, DEFAULT_CAP).unwrap();
        let game = game.unwrap();
        let stem = RunPath::new(vec![0, 1], vec![0]).unwrap();
        let cycle = RunPath::new(vec![1, 0, 1], vec![1, 0]).unwrap();
        let run = replay(&game, &a, &a, &stem, &cycle, 3).unwrap();
        run.validate(&a).unwrap();
        assert!(!run.is_empty());
    }

    #[test]
    fn replay_branching() {
        let (a, b) = fixture("branching").unwrap();
        let (_, game) = decide(&a, &b, QuotientRelation::ContinuousFair, DEFAULT_CAP).unwrap();
        let game = game.unwrap();
        // Spoiler lasso: a.b then loop on a at the accepting a2.
        let a2 = a.state_index("a2").unwrap();
        let a0 = a.state_index("a0").unwrap();
        let a1s = a.state_index("a1").unwrap();
        let la = a.letter_index("a").unwrap();
        let lb = a.letter_index("b").unwrap();
        let stem = RunPath::new(vec![a0, a1s, a2], vec![la, lb]).unwrap();
        let cycle = RunPath::new(vec![a2, a2], vec![la]).unwrap();
        let run = replay(&game, &a, &b, &stem, &cycle, 3).unwrap();
        run.validate(&b).unwrap();
        // The answer must end in B's upper (b-seeing) branch.
        let b2 = b.state_index("b2").unwrap();
        assert_eq!(*run.states.last().unwrap(), b2);
    }
}
