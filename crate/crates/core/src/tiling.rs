//! Tiling systems, hardness-instance generators, and brute-force oracles.
//!
//! `gen_pspace` and `gen_exptime` emit NBA pairs whose look-ahead (resp.
//! continuous) simulation verdict is governed by a corridor-tiling problem:
//! the pair holds iff no valid tiling exists (resp. iff Starter wins the
//! tiling game). The brute-force oracles decide those tiling questions
//! directly, giving every generated pair a known expected verdict.

use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::games::{solve, ArenaBuilder, Player};
use crate::nba::Nba;
use crate::word::UltimatelyPeriodicWord;

/// (T, H, V, t_I, t_F): tiles with horizontal/vertical compatibility.
#[derive(Debug, Clone)]
pub struct TilingSystem {
    tiles: Vec<String>,
    horizontal: Vec<bool>,
    vertical: Vec<bool>,
    initial: u32,
    final_tile: u32,
}

impl TilingSystem {
    pub fn new(
        tiles: Vec<String>,
        horizontal: &[(u32, u32)],
        vertical: &[(u32, u32)],
        initial: u32,
        final_tile: u32,
    ) -> TilingSystem {
        let n = tiles.len();
        assert!(n > 0 && (initial as usize) < n && (final_tile as usize) < n);
        let mut h = vec![false; n * n];
        let mut v = vec![false; n * n];
        for &(a, b) in horizontal {
            h[a as usize * n + b as usize] = true;
        }
        for &(a, b) in vertical {
            v[a as usize * n + b as usize] = true;
        }
        TilingSystem { tiles, horizontal: h, vertical: v, initial, final_tile }
    }

    pub fn num_tiles(&self) -> usize {
        self.tiles.len()
    }
    pub fn tile_name(&self, t: u32) -> &str {
        &self.tiles[t as usize]
    }
    pub fn initial_tile(&self) -> u32 {
        self.initial
    }
    pub fn final_tile(&self) -> u32 {
        self.final_tile
    }
    pub fn h(&self, a: u32, b: u32) -> bool {
        self.horizontal[a as usize * self.tiles.len() + b as usize]
    }
    pub fn v(&self, a: u32, b: u32) -> bool {
        self.vertical[a as usize * self.tiles.len() + b as usize]
    }

    fn tile_index(&self, name: &str) -> Result<u32> {
        self.tiles
            .iter()
            .position(|t| t == name)
            .map(|i| i as u32)
            .ok_or_else(|| Error::Parse { line: 0, msg: format!("unknown tile `{name}`") })
    }

    /// Parses the line-based format emitted by [`TilingSystem::render`].
    pub fn parse(text: &str) -> Result<TilingSystem> {
        let mut tiles: Option<Vec<String>> = None;
        let mut h_pairs: Vec<(String, String)> = Vec::new();
        let mut v_pairs: Vec<(String, String)> = Vec::new();
        let mut initial: Option<String> = None;
        let mut final_tile: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line.split_once(':').ok_or_else(|| Error::Parse {
                line: lineno,
                msg: "expected `key: value`".into(),
            })?;
            let fields: Vec<&str> = rest.split_whitespace().collect();
            let pair = |fields: &[&str]| -> Result<(String, String)> {
                if fields.len() != 2 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "expected exactly two tiles".into(),
                    });
                }
                Ok((fields[0].to_string(), fields[1].to_string()))
            };
            match key.trim() {
                "tiles" => {
                    if fields.is_empty() {
                        return Err(Error::Parse { line: lineno, msg: "no tiles listed".into() });
                    }
                    tiles = Some(fields.iter().map(|s| s.to_string()).collect());
                }
                "h" => h_pairs.push(pair(&fields)?),
                "v" => v_pairs.push(pair(&fields)?),
                "initial" => {
                    if fields.len() != 1 {
                        return Err(Error::Parse { line: lineno, msg: "expected one tile".into() });
                    }
                    initial = Some(fields[0].to_string());
                }
                "final" => {
                    if fields.len() != 1 {
                        return Err(Error::Parse { line: lineno, msg: "expected one tile".into() });
                    }
                    final_tile = Some(fields[0].to_string());
                }
                other => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        let tiles = tiles.ok_or(Error::Parse { line: 0, msg: "missing `tiles:` line".into() })?;
        let base = TilingSystem::new(tiles, &[], &[], 0, 0);
        let initial = base.tile_index(
            &initial.ok_or(Error::Parse { line: 0, msg: "missing `initial:` line".into() })?,
        )?;
        let final_tile = base.tile_index(
            &final_tile.ok_or(Error::Parse { line: 0, msg: "missing `final:` line".into() })?,
        )?;
        let mut h = Vec::new();
        for (a, b) in &h_pairs {
            h.push((base.tile_index(a)?, base.tile_index(b)?));
        }
        let mut v = Vec::new();
        for (a, b) in &v_pairs {
            v.push((base.tile_index(a)?, base.tile_index(b)?));
        }
        Ok(TilingSystem::new(base.tiles, &h, &v, initial, final_tile))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "tiles: {}", self.tiles.join(" "));
        let n = self.tiles.len() as u32;
        for a in 0..n {
            for b in 0..n {
                if self.h(a, b) {
                    let _ = writeln!(out, "h: {} {}", self.tile_name(a), self.tile_name(b));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.v(a, b) {
                    let _ = writeln!(out, "v: {} {}", self.tile_name(a), self.tile_name(b));
                }
            }
        }
        let _ = writeln!(out, "initial: {}", self.tile_name(self.initial));
        let _ = writeln!(out, "final: {}", self.tile_name(self.final_tile));
        out
    }
}

/// The three-tile running example: H = {(t1,t1),(t1,t3),(t3,t3)},
/// V = {(t1,t2),(t2,t1),(t2,t3)}, initial t1, final t3.
pub fn example_system() -> TilingSystem {
    TilingSystem::new(
        vec!["t1".into(), "t2".into(), "t3".into()],
        &[(0, 0), (0, 2), (2, 2)],
        &[(0, 1), (1, 0), (1, 2)],
        0,
        2,
    )
}

/// A seeded random system over `num_tiles` tiles; each compatibility pair is
/// present with probability 1/2.
pub fn random_system<R: Rng>(r: &mut R, num_tiles: usize) -> TilingSystem {
    assert!(num_tiles >= 1);
    let tiles: Vec<String> = (1..=num_tiles).map(|i| format!("t{i}")).collect();
    let mut h = Vec::new();
    let mut v = Vec::new();
    for a in 0..num_tiles as u32 {
        for b in 0..num_tiles as u32 {
            if r.gen_bool(0.5) {
                h.push((a, b));
            }
            if r.gen_bool(0.5) {
                v.push((a, b));
            }
        }
    }
    let initial = r.gen_range(0..num_tiles as u32);
    let final_tile = r.gen_range(0..num_tiles as u32);
    TilingSystem::new(tiles, &h, &v, initial, final_tile)
}

/// A valid (or candidate) n×m tiling, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tiling {
    pub width: usize,
    pub rows: Vec<Vec<u32>>,
}

impl Tiling {
    pub fn render(&self, ts: &TilingSystem) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let names: Vec<&str> = row.iter().map(|&t| ts.tile_name(t)).collect();
            let _ = writeln!(out, "{}", names.join(" "));
        }
        out
    }
}

/// Enumerates all horizontally valid rows of width `n` in lexicographic tile
/// order, guarded by `budget` (max candidate count |T|^n).
fn h_valid_rows(ts: &TilingSystem, n: usize, budget: usize) -> Result<Vec<Vec<u32>>> {
    let t = ts.num_tiles();
    let mut total: usize = 1;
    for _ in 0..n {
        total = total.saturating_mul(t);
        if total > budget {
            return Err(Error::BudgetExceeded(format!(
                "row enumeration needs up to {t}^{n} candidates (budget {budget})"
            )));
        }
    }
    let mut rows = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    fn extend(ts: &TilingSystem, n: usize, current: &mut Vec<u32>, rows: &mut Vec<Vec<u32>>) {
        if current.len() == n {
            rows.push(current.clone());
            return;
        }
        for t in 0..ts.num_tiles() as u32 {
            if current.last().map_or(true, |&prev| ts.h(prev, t)) {
                current.push(t);
                extend(ts, n, current, rows);
                current.pop();
            }
        }
    }
    extend(ts, n, &mut current, &mut rows);
    Ok(rows)
}

fn v_compatible(ts: &TilingSystem, above: &[u32], below: &[u32]) -> bool {
    above.iter().zip(below).all(|(&a, &b)| ts.v(a, b))
}

/// Row-DP search for the lexicographically least valid n×m tiling.
pub fn brute_force_tiling(
    ts: &TilingSystem,
    n: usize,
    m: usize,
    budget: usize,
) -> Result<Option<Tiling>> {
    assert!(n >= 1 && m >= 1);
    let rows = h_valid_rows(ts, n, budget)?;
    if m > budget {
        return Err(Error::BudgetExceeded(format!("{m} rows exceeds budget {budget}")));
    }
    // ok[rem][i]: rows i can head a valid suffix with rem more rows below it.
    let mut ok = vec![vec![false; rows.len()]; m];
    for (i, row) in rows.iter().enumerate() {
        ok[0][i] = row[n - 1] == ts.final_tile();
    }
    for rem in 1..m {
        for i in 0..rows.len() {
            ok[rem][i] =
                (0..rows.len()).any(|j| ok[rem - 1][j] && v_compatible(ts, &rows[i], &rows[j]));
        }
    }
    let first = (0..rows.len())
        .find(|&i| rows[i][0] == ts.initial_tile() && ok[m - 1][i]);
    let Some(mut current) = first else { return Ok(None) };
    let mut chosen = vec![rows[current].clone()];
    for rem in (0..m - 1).rev() {
        current = (0..rows.len())
            .find(|&j| ok[rem][j] && v_compatible(ts, &rows[current], &rows[j]))
            .expect("DP table admits a successor");
        chosen.push(rows[current].clone());
    }
    Ok(Some(Tiling { width: n, rows: chosen }))
}

/// Winner of the two-player corridor-tiling game of width `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TilingGameWinner {
    StarterWins,
    CompleterWins,
}

/// Solves the tiling game: Starter opens each row with a tile (vertically
/// compatible with the previous opener, t_I in round one), Completer fills
/// the rest of the row. A stuck player loses outright; an infinite play is
/// won by Completer iff t_F was placed at some point.
///
/// Encoded as a parity game on the shared arena type with Starter playing as
/// Duplicator and Completer as Spoiler. Positions carry a monotone
/// "t_F seen" flag; flagged positions have priority 1, so an infinite play
/// goes to Completer exactly when the flag was raised, and the dead-end
/// rerouting of the arena builder implements the stuck rule.
pub fn brute_force_tiling_game(
    ts: &TilingSystem,
    n: usize,
    budget: usize,
) -> Result<TilingGameWinner> {
    assert!(n >= 1);
    let rows = h_valid_rows(ts, n, budget)?;
    let mut builder = ArenaBuilder::new();
    let prio = |seen: bool| seen as u8;
    let tag = |seen: bool| if seen { "+tF" } else { "" };
    // Starter positions: init, then one per (previous row, flag).
    let init = builder.push(Player::Duplicator, 0, "start".to_string());
    let s_pos: Vec<[u32; 2]> = (0..rows.len())
        .map(|i| {
            [false, true].map(|seen| {
                builder.push(Player::Duplicator, prio(seen), format!("row#{i}{}", tag(seen)))
            })
        })
        .collect();
    // Completer positions: (previous row or init, Starter's opener, flag).
    let c_pos: Vec<Vec<[u32; 2]>> = (0..=rows.len())
        .map(|prev| {
            (0..ts.num_tiles())
                .map(|t| {
                    [false, true].map(|seen| {
                        let at = if prev == rows.len() {
                            "init".to_string()
                        } else {
                            format!("row#{prev}")
                        };
                        builder.push(
                            Player::Spoiler,
                            prio(seen),
                            format!("open:{at}:{}{}", ts.tile_name(t as u32), tag(seen)),
                        )
                    })
                })
                .collect()
        })
        .collect();

    let starter_moves = |from: u32, prev: Option<usize>, seen: bool, builder: &mut ArenaBuilder| {
        for t in 0..ts.num_tiles() as u32 {
            let legal = match prev {
                None => t == ts.initial_tile(),
                Some(i) => ts.v(rows[i][0], t),
            };
            if legal {
                let slot = prev.unwrap_or(rows.len());
                let seen2 = seen || t == ts.final_tile();
                builder.add_edge(from, c_pos[slot][t as usize][seen2 as usize]);
            }
        }
    };
    starter_moves(init, None, false, &mut builder);
    for (i, pair) in s_pos.iter().enumerate() {
        for (seen, &sp) in [false, true].iter().zip(pair) {
            starter_moves(sp, Some(i), *seen, &mut builder);
        }
    }
    for prev in 0..=rows.len() {
        for t in 0..ts.num_tiles() as u32 {
            for seen in [false, true] {
                let from = c_pos[prev][t as usize][seen as usize];
                for (j, row) in rows.iter().enumerate() {
                    if row[0] != t {
                        continue;
                    }
                    // Column 1's vertical constraint is Starter's; Completer
                    // owes the remaining columns.
                    if prev < rows.len() && !v_compatible(ts, &rows[prev][1..], &row[1..]) {
                        continue;
                    }
                    let seen2 = seen || row.contains(&ts.final_tile());
                    builder.add_edge(from, s_pos[j][seen2 as usize]);
                }
            }
        }
    }
    let arena = builder.finish(init);
    if solve(&arena).holds {
        Ok(TilingGameWinner::StarterWins)
    } else {
        Ok(TilingGameWinner::CompleterWins)
    }
}

/// Accumulates named states (all accepting) and transitions for a generator.
struct AutomatonSketch {
    names: Vec<String>,
    transitions: Vec<(u32, u32, u32)>,
}

impl AutomatonSketch {
    fn new() -> AutomatonSketch {
        AutomatonSketch { names: Vec::new(), transitions: Vec::new() }
    }
    fn state(&mut self, name: String) -> u32 {
        let id = self.names.len() as u32;
        self.names.push(name);
        id
    }
    fn edge(&mut self, src: u32, letter: u32, dst: u32) {
        self.transitions.push((src, letter, dst));
    }
    fn finish(self, alphabet: Vec<String>, initial: u32) -> Nba {
        let accepting = vec![true; self.names.len()];
        Nba::from_indexed(self.names, alphabet, self.transitions, initial, accepting)
    }
}

/// Letter layout for the PSPACE alphabet (T×{0,1}) ∪ {$, #}.
pub struct PspaceAlphabet {
    num_tiles: usize,
}

impl PspaceAlphabet {
    pub fn new(ts: &TilingSystem) -> PspaceAlphabet {
        PspaceAlphabet { num_tiles: ts.num_tiles() }
    }
    pub fn tagged(&self, tile: u32, bit: u8) -> u32 {
        2 * tile + bit as u32
    }
    pub fn separator(&self) -> u32 {
        2 * self.num_tiles as u32
    }
    pub fn hash(&self) -> u32 {
        2 * self.num_tiles as u32 + 1
    }
    pub fn len(&self) -> usize {
        2 * self.num_tiles + 2
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    fn names(&self, ts: &TilingSystem) -> Vec<String> {
        let mut out = Vec::new();
        for t in 0..self.num_tiles as u32 {
            out.push(format!("{}/0", ts.tile_name(t)));
            out.push(format!("{}/1", ts.tile_name(t)));
        }
        out.push("$".to_string());
        out.push("#".to_string());
        out
    }
}

/// The look-ahead hardness pair: A accepts $-separated blocks of n tagged
/// tiles whose tags run a binary counter from 0 to 2^n−1 (least-significant
/// bit first); B accepts from q0 when two adjacent blocks are not tagged
/// consecutively, and from q_t when tile t has an incompatible horizontal or
/// vertical neighbour. A buffered look-ahead (fair) simulation holds iff no
/// valid n×2^n tiling exists.
pub fn gen_pspace(ts: &TilingSystem, n: usize) -> (Nba, Nba) {
    assert!(n >= 1);
    let al = PspaceAlphabet::new(ts);
    let tiles = 0..ts.num_tiles() as u32;

    // --- A ---
    let mut a = AutomatonSketch::new();
    let init = a.state("init".to_string());
    let first = a.state("block1".to_string());
    let sep = a.state("between-blocks".to_string());
    let row = a.state("in-block".to_string());
    let end = a.state("end".to_string());
    a.edge(init, al.separator(), first);
    // First block: t_I then n−1 arbitrary tiles, every tag 0.
    let mut prev = first;
    for j in 1..n {
        let s = a.state(format!("block1.{j}"));
        if j == 1 {
            a.edge(prev, al.tagged(ts.initial_tile(), 0), s);
        } else {
            for t in tiles.clone() {
                a.edge(prev, al.tagged(t, 0), s);
            }
        }
        prev = s;
    }
    if n == 1 {
        a.edge(prev, al.tagged(ts.initial_tile(), 0), sep);
    } else {
        for t in tiles.clone() {
            a.edge(prev, al.tagged(t, 0), sep);
        }
    }
    a.edge(sep, al.separator(), row);
    // Intermediate block: n tagged tiles with at least one 0 tag.
    if n == 1 {
        for t in tiles.clone() {
            a.edge(row, al.tagged(t, 0), sep);
        }
    } else {
        // mid[j][f]: j tiles read, f = some tag 0 seen.
        let mut mid = vec![[0u32; 2]; n];
        for j in 1..n {
            mid[j] = [
                a.state(format!("mid.{j}.pending")),
                a.state(format!("mid.{j}.tagged0")),
            ];
        }
        let target = |j: usize, f: bool, mid: &Vec<[u32; 2]>| -> Option<u32> {
            if j == n {
                if f { Some(sep) } else { None }
            } else {
                Some(mid[j][f as usize])
            }
        };
        for t in tiles.clone() {
            for bit in 0..2u8 {
                if let Some(d) = target(1, bit == 0, &mid) {
                    a.edge(row, al.tagged(t, bit), d);
                }
            }
        }
        for j in 1..n {
            for f in 0..2usize {
                for t in tiles.clone() {
                    for bit in 0..2u8 {
                        if let Some(d) = target(j + 1, f == 1 || bit == 0, &mid) {
                            a.edge(mid[j][f], al.tagged(t, bit), d);
                        }
                    }
                }
            }
        }
    }
    // Final block: n−1 arbitrary tiles then t_F, every tag 1.
    let mut prev = row;
    for j in 1..n {
        let s = a.state(format!("final.{j}"));
        for t in tiles.clone() {
            a.edge(prev, al.tagged(t, 1), s);
        }
        prev = s;
    }
    a.edge(prev, al.tagged(ts.final_tile(), 1), end);
    a.edge(end, al.hash(), end);
    let a = a.finish(al.names(ts), init);

    // --- B ---
    let mut b = AutomatonSketch::new();
    let wait = b.state("wait".to_string());
    let q0 = b.state("q0".to_string());
    let sink = b.state("accept".to_string());
    for l in 0..al.len() as u32 {
        b.edge(sink, l, sink);
        if l != al.hash() {
            b.edge(wait, l, wait);
        }
    }
    b.edge(wait, al.separator(), q0);
    // q0: tag-increment violation between two adjacent blocks. Walking the
    // first block, the counter increment must flip the leading 1-tags to 0,
    // flip the first 0-tag to 1, and copy the rest; each branch skips n
    // letters to land on the matching position of the next block.
    let skip_chain = |b: &mut AutomatonSketch, label: &str, al: &PspaceAlphabet| -> (u32, u32) {
        let head = b.state(format!("{label}.0"));
        let mut prev = head;
        for j in 1..=n {
            let s = b.state(format!("{label}.{j}"));
            for l in 0..al.len() as u32 {
                b.edge(prev, l, s);
            }
            prev = s;
        }
        (head, prev)
    };
    let all_with_tag = |b: &mut AutomatonSketch, src: u32, bit: u8, dst: u32| {
        for t in 0..ts.num_tiles() as u32 {
            b.edge(src, al.tagged(t, bit), dst);
        }
    };
    all_with_tag(&mut b, q0, 1, q0);
    let (flip0, flip0_end) = skip_chain(&mut b, "flip0", &al);
    all_with_tag(&mut b, q0, 0, flip0);
    all_with_tag(&mut b, flip0_end, 0, sink);
    let (flip1, flip1_end) = skip_chain(&mut b, "flip1", &al);
    all_with_tag(&mut b, q0, 1, flip1);
    all_with_tag(&mut b, flip1_end, 1, sink);
    let copy = b.state("copy".to_string());
    all_with_tag(&mut b, q0, 0, copy);
    for l in 0..al.len() as u32 {
        if l != al.separator() {
            b.edge(copy, l, copy);
        }
    }
    let (copy0, copy0_end) = skip_chain(&mut b, "copy0", &al);
    all_with_tag(&mut b, copy, 0, copy0);
    all_with_tag(&mut b, copy0_end, 1, sink);
    let (copy1, copy1_end) = skip_chain(&mut b, "copy1", &al);
    all_with_tag(&mut b, copy, 1, copy1);
    all_with_tag(&mut b, copy1_end, 0, sink);
    // q_t components: horizontal mismatch on the next letter, or vertical
    // mismatch on the same column of the next block (n letters later).
    for t in tiles.clone() {
        let qt = b.state(format!("q[{}]", ts.tile_name(t)));
        for bit in 0..2u8 {
            b.edge(wait, al.tagged(t, bit), qt);
        }
        for t2 in tiles.clone() {
            if !ts.h(t, t2) {
                for bit in 0..2u8 {
                    b.edge(qt, al.tagged(t2, bit), sink);
                }
            }
        }
        let mut vend = qt;
        for j in 1..=n {
            let s = b.state(format!("v[{}].{j}", ts.tile_name(t)));
            for l in 0..al.len() as u32 {
                b.edge(vend, l, s);
            }
            vend = s;
        }
        for t2 in tiles.clone() {
            if !ts.v(t, t2) {
                for bit in 0..2u8 {
                    b.edge(vend, al.tagged(t2, bit), sink);
                }
            }
        }
    }
    let b = b.finish(al.names(ts), wait);
    (a, b)
}

/// A Spoiler word for the PSPACE pair: the tiling's rows as counter-tagged
/// blocks, then #^ω. With a valid tiling this word witnesses failure of the
/// simulation.
pub fn pspace_tiling_word(ts: &TilingSystem, tiling: &Tiling) -> UltimatelyPeriodicWord {
    let al = PspaceAlphabet::new(ts);
    let n = tiling.width;
    let mut stem = Vec::new();
    for (i, row) in tiling.rows.iter().enumerate() {
        stem.push(al.separator());
        for (j, &t) in row.iter().enumerate() {
            let bit = ((i >> j) & 1) as u8;
            let _ = n;
            stem.push(al.tagged(t, bit));
        }
    }
    UltimatelyPeriodicWord::new(stem, vec![al.hash()]).expect("nonempty period")
}

/// Letter layout for the EXPTIME alphabet T ⊎ {0, 1}.
pub struct ExptimeAlphabet {
    num_tiles: usize,
}

impl ExptimeAlphabet {
    pub fn new(ts: &TilingSystem) -> ExptimeAlphabet {
        ExptimeAlphabet { num_tiles: ts.num_tiles() }
    }
    pub fn tile(&self, t: u32) -> u32 {
        t
    }
    pub fn bit(&self, b: u8) -> u32 {
        self.num_tiles as u32 + b as u32
    }
    pub fn len(&self) -> usize {
        self.num_tiles + 2
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    fn names(&self, ts: &TilingSystem) -> Vec<String> {
        let mut out: Vec<String> = (0..self.num_tiles as u32)
            .map(|t| ts.tile_name(t).to_string())
            .collect();
        out.push("0".to_string());
        out.push("1".to_string());
        out
    }
}

/// The continuous hardness pair: A accepts b₀w₀b₁w₁… with each wᵢ a
/// horizontally valid row of n tiles; B's states q_t satisfy (P1)–(P5), with
/// the ε-edges into the mismatch components eliminated by closure. A
/// continuous (fair) simulation holds iff Starter wins the width-n tiling
/// game.
pub fn gen_exptime(ts: &TilingSystem, n: usize) -> (Nba, Nba) {
    assert!(n >= 1);
    let al = ExptimeAlphabet::new(ts);
    let tiles = 0..ts.num_tiles() as u32;

    // --- A ---
    let mut a = AutomatonSketch::new();
    // The first separator bit is forced to 0: a leading 1 would claim to
    // repeat a row that does not exist, which B's components never police.
    let bit = a.state("bit0".to_string());
    let start = a.state("row".to_string());
    a.edge(bit, al.bit(0), start);
    // row(j, t): j tiles read, last tile t.
    let row: Vec<Vec<u32>> = (1..=n)
        .map(|j| {
            tiles
                .clone()
                .map(|t| a.state(format!("row.{j}[{}]", ts.tile_name(t))))
                .collect()
        })
        .collect();
    for t in tiles.clone() {
        a.edge(start, al.tile(t), row[0][t as usize]);
    }
    for j in 1..n {
        for t in tiles.clone() {
            for t2 in tiles.clone() {
                if ts.h(t, t2) {
                    a.edge(row[j - 1][t as usize], al.tile(t2), row[j][t2 as usize]);
                }
            }
        }
    }
    for t in tiles.clone() {
        a.edge(row[n - 1][t as usize], al.bit(0), start);
        a.edge(row[n - 1][t as usize], al.bit(1), start);
    }
    let a = a.finish(al.names(ts), bit);

    // --- B ---
    let mut b = AutomatonSketch::new();
    let q: Vec<u32> = tiles.clone().map(|t| b.state(format!("q[{}]", ts.tile_name(t)))).collect();
    let sink = b.state("accept".to_string());
    for l in 0..al.len() as u32 {
        b.edge(sink, l, sink);
    }
    // (P4): consume 1v for t_F-free rows v in place.
    for &qt in &q {
        b.edge(qt, al.bit(1), qt);
        for t2 in tiles.clone() {
            if t2 != ts.final_tile() {
                b.edge(qt, al.tile(t2), qt);
            }
        }
    }
    // (P5): 0-edges follow vertical compatibility of the row openers.
    for t in tiles.clone() {
        for t2 in tiles.clone() {
            if ts.v(t, t2) {
                b.edge(q[t as usize], al.bit(0), q[t2 as usize]);
            }
        }
    }
    // (P1): Spoiler opens the next row with a tile other than Duplicator's
    // committed choice t.
    for t in tiles.clone() {
        let pt = b.state(format!("open[{}]", ts.tile_name(t)));
        b.edge(q[t as usize], al.bit(0), pt);
        for t2 in tiles.clone() {
            if t2 != t {
                b.edge(pt, al.tile(t2), sink);
            }
        }
    }
    // (P2)/(P3) mismatch components, shared by every q_t via ε-closure:
    // remember a tile, skip n letters (excluding the bit that must not be
    // crossed), then catch the offending tile of the next row.
    let mismatch = |b: &mut AutomatonSketch, tag: &str, skip_bit: u8, bad: &dyn Fn(u32, u32) -> bool| {
        for t in tiles.clone() {
            let mut prev = b.state(format!("{tag}.0[{}]", ts.tile_name(t)));
            for &qt in &q {
                b.edge(qt, al.tile(t), prev);
            }
            for j in 1..=n {
                let s = b.state(format!("{tag}.{j}[{}]", ts.tile_name(t)));
                for t2 in tiles.clone() {
                    b.edge(prev, al.tile(t2), s);
                }
                b.edge(prev, al.bit(skip_bit), s);
                prev = s;
            }
            for t2 in tiles.clone() {
                if bad(t, t2) {
                    b.edge(prev, al.tile(t2), sink);
                }
            }
        }
    };
    mismatch(&mut b, "vmis", 0, &|t, t2| !ts.v(t, t2));
    mismatch(&mut b, "rep", 1, &|t, t2| t != t2);
    let b = b.finish(al.names(ts), q[ts.initial_tile() as usize]);
    (a, b)
}

/// Expected look-ahead verdict for `gen_pspace(ts, n)`: holds iff no valid
/// n×2^n tiling exists.
pub fn expected_pspace_holds(ts: &TilingSystem, n: usize, budget: usize) -> Result<bool> {
    Ok(brute_force_tiling(ts, n, 1usize << n, budget)?.is_none())
}

/// Expected continuous verdict for `gen_exptime(ts, n)`: holds iff Starter
/// wins the width-n tiling game.
pub fn expected_exptime_holds(ts: &TilingSystem, n: usize, budget: usize) -> Result<bool> {
    Ok(brute_force_tiling_game(ts, n, budget)? == TilingGameWinner::StarterWins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randgen;
    use crate::word::{periodic_membership, word_profile, UltimatelyPeriodicWord};
    use crate::NO_PATH;

    const BUDGET: usize = 100_000;

    #[test]
    fn parse_render_round_trip() {
        let ts = example_system();
        let text = ts.render();
        let back = TilingSystem::parse(&text).unwrap();
        assert_eq!(back.render(), text);
        assert!(TilingSystem::parse("tiles:\n").is_err());
        assert!(TilingSystem::parse("tiles: a\ninitial: a\n").is_err());
    }

    #[test]
    fn example_single_row_tiling() {
        let ts = example_system();
        let t = brute_force_tiling(&ts, 3, 1, BUDGET).unwrap().unwrap();
        assert_eq!(t.rows, vec![vec![0, 0, 2]], "t1 t1 t3 is the least valid row");
    }

    #[test]
    fn example_has_no_3x8_tiling() {
        let ts = example_system();
        assert!(brute_force_tiling(&ts, 3, 8, BUDGET).unwrap().is_none());
    }

    #[test]
    fn permissive_system_always_tileable() {
        let tiles: Vec<String> = vec!["a".into(), "b".into()];
        let all: Vec<(u32, u32)> =
            (0..2).flat_map(|x| (0..2).map(move |y| (x, y))).collect();
        let ts = TilingSystem::new(tiles, &all, &all, 0, 0);
        for (n, m) in [(1, 1), (2, 4), (3, 8)] {
            assert!(brute_force_tiling(&ts, n, m, BUDGET).unwrap().is_some());
        }
    }

    #[test]
    fn example_tiling_game_starter_wins() {
        let ts = example_system();
        assert_eq!(
            brute_force_tiling_game(&ts, 3, BUDGET).unwrap(),
            TilingGameWinner::StarterWins,
            "Starter plays t2 in row 2; no H-row starts with t2"
        );
    }

    #[test]
    fn final_initial_coincide_completer_wins() {
        let ts = TilingSystem::new(vec!["a".into()], &[(0, 0)], &[(0, 0)], 0, 0);
        assert_eq!(
            brute_force_tiling_game(&ts, 2, BUDGET).unwrap(),
            TilingGameWinner::CompleterWins
        );
    }

    #[test]
    fn empty_vertical_relation_strands_starter() {
        let tiles: Vec<String> = vec!["a".into(), "b".into()];
        let all: Vec<(u32, u32)> =
            (0..2).flat_map(|x| (0..2).map(move |y| (x, y))).collect();
        let ts = TilingSystem::new(tiles, &all, &[], 0, 1);
        // Completer can fill row 1 with `a`s (no t_F); Starter is then stuck.
        assert_eq!(
            brute_force_tiling_game(&ts, 2, BUDGET).unwrap(),
            TilingGameWinner::CompleterWins
        );
    }

    #[test]
    fn pspace_a_accepts_valid_tiling_encodings() {
        // 1-column system with valid 1×2 tiling a;b.
        let ts = TilingSystem::new(vec!["a".into(), "b".into()], &[], &[(0, 1)], 0, 1);
        let tiling = brute_force_tiling(&ts, 1, 2, BUDGET).unwrap().unwrap();
        let (a, _) = gen_pspace(&ts, 1);
        let w = pspace_tiling_word(&ts, &tiling);
        assert!(periodic_membership(&a, &w));
        // Tag violation: second block repeats tag 0.
        let al = PspaceAlphabet::new(&ts);
        let bad = UltimatelyPeriodicWord::new(
            vec![al.separator(), al.tagged(0, 0), al.separator(), al.tagged(1, 0)],
            vec![al.hash()],
        )
        .unwrap();
        assert!(!periodic_membership(&a, &bad));
    }

    #[test]
    fn pspace_b_accepts_tag_violations() {
        let ts = TilingSystem::new(vec!["a".into(), "b".into()], &[], &[(0, 1)], 0, 1);
        let (_, b) = gen_pspace(&ts, 1);
        let al = PspaceAlphabet::new(&ts);
        // Second block repeats tag 0: the stuck-at-0 branch of q0 fires.
        let bad = UltimatelyPeriodicWord::new(
            vec![al.separator(), al.tagged(0, 0)],
            vec![al.separator(), al.tagged(0, 0)],
        )
        .unwrap();
        assert!(periodic_membership(&b, &bad));
        // Properly incremented tags (0 then 1) are not caught by q0, and
        // a;b is vertically compatible, so B rejects the valid encoding.
        let tiling = Tiling { width: 1, rows: vec![vec![0], vec![1]] };
        let good = pspace_tiling_word(&ts, &tiling);
        assert!(!periodic_membership(&b, &good));
    }

    #[test]
    fn pspace_b_accepts_compatibility_violations() {
        let ts = example_system();
        let (_, b) = gen_pspace(&ts, 2);
        let al = PspaceAlphabet::new(&ts);
        // Horizontal violation: t2 after t1 ((t1,t2) ∉ H).
        let hbad = UltimatelyPeriodicWord::new(
            vec![al.separator(), al.tagged(0, 0), al.tagged(1, 0)],
            vec![al.hash()],
        )
        .unwrap();
        assert!(periodic_membership(&b, &hbad));
        // Vertical violation: t1 above t1 ((t1,t1) ∉ V), same column of the
        // next block (n+1 = 3 letters later).
        let vbad = UltimatelyPeriodicWord::new(
            vec![
                al.separator(),
                al.tagged(0, 0),
                al.tagged(0, 0),
                al.separator(),
                al.tagged(0, 1),
                al.tagged(1, 0),
            ],
            vec![al.hash()],
        )
        .unwrap();
        assert!(periodic_membership(&b, &vbad));
    }

    #[test]
    fn exptime_b_satisfies_p4_p5_p1() {
        let ts = example_system();
        for n in [1, 2, 3] {
            let (_, b) = gen_exptime(&ts, n);
            let al = ExptimeAlphabet::new(&ts);
            let q: Vec<u32> = (0..3)
                .map(|t| b.state_index(&format!("q[{}]", ts.tile_name(t))).unwrap())
                .collect();
            // All t_F-free rows of width n (t_F = t3 = tile 2).
            let mut rows = vec![Vec::new()];
            for _ in 0..n {
                rows = rows
                    .into_iter()
                    .flat_map(|r: Vec<u32>| {
                        (0..2u32).map(move |t| {
                            let mut r2 = r.clone();
                            r2.push(t);
                            r2
                        })
                    })
                    .collect();
            }
            for v in &rows {
                // (P4): q_t --1v--> q_t.
                let mut w1 = vec![al.bit(1)];
                w1.extend(v.iter().map(|&t| al.tile(t)));
                let p = word_profile(&b, &w1).unwrap();
                for &qt in &q {
                    assert_ne!(p.entry(qt as usize, qt as usize), NO_PATH, "(P4) failed for n={n}");
                }
                // (P5): q_t --0v--> q_t' iff (t,t') ∈ V.
                let mut w0 = vec![al.bit(0)];
                w0.extend(v.iter().map(|&t| al.tile(t)));
                let p = word_profile(&b, &w0).unwrap();
                for t in 0..3u32 {
                    for t2 in 0..3u32 {
                        assert_eq!(
                            p.entry(q[t as usize] as usize, q[t2 as usize] as usize) != NO_PATH,
                            ts.v(t, t2),
                            "(P5) failed for n={n}, t={t}, t2={t2}"
                        );
                    }
                }
            }
            // (P1): from q_t, any word starting 0t' with t' ≠ t is accepted.
            for t in 0..3u32 {
                for t2 in 0..3u32 {
                    if t == t2 {
                        continue;
                    }
                    for suffix in [vec![al.bit(1)], vec![al.tile(0), al.bit(0)]] {
                        let w = UltimatelyPeriodicWord::new(
                            vec![al.bit(0), al.tile(t2)],
                            suffix,
                        )
                        .unwrap();
                        assert!(
                            periodic_membership(&b.with_initial(q[t as usize]), &w),
                            "(P1) failed for n={n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn exptime_a_accepts_exactly_banded_rows() {
        let ts = example_system();
        let (a, _) = gen_exptime(&ts, 2);
        let al = ExptimeAlphabet::new(&ts);
        // (0 t1t3)^ω is banded with H-valid rows.
        let good =
            UltimatelyPeriodicWord::new(vec![], vec![al.bit(0), al.tile(0), al.tile(2)]).unwrap();
        assert!(periodic_membership(&a, &good));
        // t1t2 violates H.
        let bad =
            UltimatelyPeriodicWord::new(vec![], vec![al.bit(0), al.tile(0), al.tile(1)]).unwrap();
        assert!(!periodic_membership(&a, &bad));
        // The first bit may not claim a repetition.
        let lead1 = UltimatelyPeriodicWord::new(
            vec![al.bit(1), al.tile(0), al.tile(2)],
            vec![al.bit(0), al.tile(0), al.tile(2)],
        )
        .unwrap();
        assert!(!periodic_membership(&a, &lead1));
        // Missing separator bit.
        let unbanded = UltimatelyPeriodicWord::new(vec![], vec![al.tile(0), al.tile(2)]).unwrap();
        assert!(!periodic_membership(&a, &unbanded));
    }

    #[test]
    fn random_systems_round_trip_and_stay_in_budget() {
        let mut r = randgen::rng(0x7111);
        for _ in 0..10 {
            let ts = random_system(&mut r, 3);
            let back = TilingSystem::parse(&ts.render()).unwrap();
            assert_eq!(back.render(), ts.render());
            let _ = expected_pspace_holds(&ts, 2, BUDGET).unwrap();
            let _ = expected_exptime_holds(&ts, 2, BUDGET).unwrap();
        }
    }
}
