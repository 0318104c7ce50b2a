//! Independent oracles used to cross-check the main algorithms. Each
//! deliberately takes a different algorithmic route than the implementation
//! it validates and must stay that way.

use crate::games::arena::{GameArena, Player};
use crate::nba::Nba;
use crate::word::UltimatelyPeriodicWord;

/// Exact membership of u·v^ω in L(a) without the SCC machinery of
/// `periodic_membership`: explicit (state, period-position) graph, then a
/// quadratic reach/return test through accepting nodes.
pub fn naive_membership(a: &Nba, w: &UltimatelyPeriodicWord) -> bool {
    let n = a.num_states();
    let plen = w.period.len();
    // State set after reading the stem.
    let mut cur = vec![false; n];
    cur[a.initial() as usize] = true;
    for &l in &w.stem {
        let mut nxt = vec![false; n];
        for q in 0..n {
            if cur[q] {
                for &t in a.successors(q as u32, l) {
                    nxt[t as usize] = true;
                }
            }
        }
        cur = nxt;
    }
    // Period graph on (state, position) nodes.
    let node = |q: usize, i: usize| q * plen + i;
    let mut succs: Vec<Vec<usize>> = vec![Vec::new(); n * plen];
    for q in 0..n {
        for i in 0..plen {
            for &t in a.successors(q as u32, w.period[i]) {
                succs[node(q, i)].push(node(t as usize, (i + 1) % plen));
            }
        }
    }
    let reach_from = |sources: &[usize]| -> Vec<bool> {
        let mut seen = vec![false; n * plen];
        let mut stack: Vec<usize> = Vec::new();
        for &s in sources {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(v) = stack.pop() {
            for &u in &succs[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    };
    let roots: Vec<usize> = (0..n).filter(|&q| cur[q]).map(|q| node(q, 0)).collect();
    let reachable = reach_from(&roots);
    // Accepted iff some accepting node lies on a cycle reachable from the
    // stem frontier: f reachable, and f reaches f again via ≥ 1 step.
    for q in 0..n {
        if !a.is_accepting(q as u32) {
            continue;
        }
        for i in 0..plen {
            let f = node(q, i);
            if !reachable[f] {
                continue;
            }
            let step: Vec<usize> = succs[f].clone();
            if reach_from(&step)[f] {
                return true;
            }
        }
    }
    false
}

/// Exhaustive search for an ultimately periodic counterexample to
/// L(a) ⊆ L(b) over all stems up to `max_stem` and periods of length
/// 1..=`max_period`, in length-then-lex order. Membership on both sides
/// uses `naive_membership`.
pub fn exhaustive_lasso_counterexample(
    a: &Nba,
    b: &Nba,
    max_stem: usize,
    max_period: usize,
) -> Option<UltimatelyPeriodicWord> {
    let letters = a.num_letters() as u32;
    let words = |max_len: usize, min_len: usize| -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = Vec::new();
        let mut layer: Vec<Vec<u32>> = vec![Vec::new()];
        for len in 0..=max_len {
            if len >= min_len {
                out.extend(layer.iter().cloned());
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for w in &layer {
                for l in 0..letters {
                    let mut w2 = w.clone();
                    w2.push(l);
                    next.push(w2);
                }
            }
            layer = next;
        }
        out
    };
    for stem in words(max_stem, 0) {
        for period in words(max_period, 1) {
            let w = UltimatelyPeriodicWord { stem: stem.clone(), period };
            if naive_membership(a, &w) && !naive_membership(b, &w) {
                return Some(w);
            }
        }
    }
    None
}

/// Brute-force parity winner by Spoiler-strategy enumeration plus cycle
/// analysis: Spoiler wins iff some positional Spoiler strategy leaves
/// Duplicator without a reachable good cycle (a cycle through priority 2,
/// or one using only priority 0). Returns None when the strategy space
/// exceeds `limit`.
pub fn brute_force_parity_winner(arena: &GameArena, limit: u64) -> Option<Player> {
    let n = arena.len();
    let spoiler_pos: Vec<usize> =
        (0..n).filter(|&u| arena.owner[u] == Player::Spoiler).collect();
    let mut total: u64 = 1;
    for &u in &spoiler_pos {
        total = total.checked_mul(arena.succ[u].len() as u64)?;
        if total > limit {
            return None;
        }
    }
    let mut choice = vec![0usize; spoiler_pos.len()];
    loop {
        // Restricted successor view under the current Spoiler strategy.
        let succ_of = |u: usize| -> &[u32] {
            if let Ok(i) = spoiler_pos.binary_search(&u) {
                std::slice::from_ref(&arena.succ[u][choice[i]])
            } else {
                &arena.succ[u]
            }
        };
        if !duplicator_wins_one_player(arena, arena.start as usize, &succ_of) {
            return Some(Player::Spoiler);
        }
        // Next strategy.
        let mut i = 0;
        loop {
            if i == spoiler_pos.len() {
                return Some(Player::Duplicator);
            }
            choice[i] += 1;
            if choice[i] < arena.succ[spoiler_pos[i]].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// One-player (Duplicator-only) analysis: a play with even dominating
/// priority exists iff some reachable cycle contains a priority-2 node or
/// consists of priority-0 nodes only.
fn duplicator_wins_one_player<'a, F>(arena: &GameArena, start: usize, succ_of: &F) -> bool
where
    F: Fn(usize) -> &'a [u32],
{
    let n = arena.len();
    let reach = |sources: &[usize], allowed: &dyn Fn(usize) -> bool| -> Vec<bool> {
        let mut seen = vec![false; n];
        let mut stack = Vec::new();
        for &s in sources {
            if allowed(s) && !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        while let Some(v) = stack.pop() {
            for &u in succ_of(v) {
                let u = u as usize;
                if allowed(u) && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    };
    let reachable = reach(&[start], &|_| true);
    // Cycle through a reachable priority-2 node.
    for v in 0..n {
        if reachable[v] && arena.priority[v] == 2 {
            let firsts: Vec<usize> = succ_of(v).iter().map(|&u| u as usize).collect();
            if reach(&firsts, &|_| true)[v] {
                return true;
            }
        }
    }
    // Cycle entirely inside reachable priority-0 nodes.
    let zero = |u: usize| reachable[u] && arena.priority[u] == 0;
    for v in 0..n {
        if zero(v) {
            let firsts: Vec<usize> =
                succ_of(v).iter().map(|&u| u as usize).filter(|&u| zero(u)).collect();
            if reach(&firsts, &zero)[v] {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::a1;
    use crate::games::solve;
    use crate::randgen::{random_arena, rng};
    use crate::word::periodic_membership;

    #[test]
    fn naive_membership_matches_scc_oracle_on_a1() {
        let a = a1();
        for (stem, period, expect) in [
            (vec![], vec![0u32, 1], true),
            (vec![0u32], vec![0], false),
            (vec![0, 0, 1], vec![0, 1], true),
            (vec![], vec![1], false),
        ] {
            let w = UltimatelyPeriodicWord { stem, period };
            assert_eq!(naive_membership(&a, &w), expect, "{:?}", w);
            assert_eq!(periodic_membership(&a, &w), expect, "{:?}", w);
        }
    }

    #[test]
    fn parity_oracle_agrees_with_zielonka() {
        let mut r = rng(0xa11ce);
        let mut checked = 0;
        for i in 0..300 {
            let arena = random_arena(&mut r, 3 + (i % 12));
            if let Some(winner) = brute_force_parity_winner(&arena, 1 << 16) {
                let v = solve(&arena);
                assert_eq!(v.winner, winner, "arena #{}\n{}", i, arena.to_dot("x"));
                checked += 1;
            }
        }
        assert!(checked >= 250);
    }
}
