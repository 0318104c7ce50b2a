//! Transition profiles: the function f_w mapping a state pair to
//! 0 (accepting w-path), 1 (no w-path), or 2 (w-path but no accepting one).
//!
//! Stored as two bit matrices (`path`, `acc` with acc ⊆ path); composition
//! is boolean matrix multiplication over u64-packed rows.

use crate::error::{Error, Result};
use crate::nba::Nba;

pub const NO_PATH: u8 = 1;
pub const ACCEPTING_PATH: u8 = 0;
pub const PLAIN_PATH: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    dim: usize,
    /// u64 words per row.
    words: usize,
    path: Vec<u64>,
    acc: Vec<u64>,
}

impl Profile {
    pub fn empty(dim: usize) -> Profile {
        let words = dim.div_ceil(64).max(1);
        Profile { dim, words, path: vec![0; dim * words], acc: vec![0; dim * words] }
    }

    /// The profile of the empty word: diagonal 2, off-diagonal 1. A length-0
    /// path exists but is never accepting (position 0 does not count).
    pub fn identity(dim: usize) -> Profile {
        let mut p = Profile::empty(dim);
        for q in 0..dim {
            p.set_path(q, q);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn row(&self, q: usize) -> usize {
        q * self.words
    }

    #[inline]
    pub fn has_path(&self, q: usize, r: usize) -> bool {
        self.path[self.row(q) + r / 64] >> (r % 64) & 1 == 1
    }

    #[inline]
    pub fn has_accepting_path(&self, q: usize, r: usize) -> bool {
        self.acc[self.row(q) + r / 64] >> (r % 64) & 1 == 1
    }

    pub fn set_path(&mut self, q: usize, r: usize) {
        let i = self.row(q) + r / 64;
        self.path[i] |= 1 << (r % 64);
    }

    pub fn set_accepting(&mut self, q: usize, r: usize) {
        self.set_path(q, r);
        let i = self.row(q) + r / 64;
        self.acc[i] |= 1 << (r % 64);
    }

    /// The {0,1,2} entry at (q, r).
    pub fn entry(&self, q: usize, r: usize) -> u8 {
        if self.has_accepting_path(q, r) {
            ACCEPTING_PATH
        } else if self.has_path(q, r) {
            PLAIN_PATH
        } else {
            NO_PATH
        }
    }

    /// Row of `path` bits (entries ≠ 1) for state `q`.
    pub fn path_row(&self, q: usize) -> &[u64] {
        &self.path[self.row(q)..self.row(q) + self.words]
    }

    /// Diagonal accepting-loop mask: bit q set iff entry(q, q) = 0.
    pub fn accepting_loop_mask(&self) -> Vec<u64> {
        let mut mask = vec![0u64; self.words];
        for q in 0..self.dim {
            if self.has_accepting_path(q, q) {
                mask[q / 64] |= 1 << (q % 64);
            }
        }
        mask
    }

    /// Profile composition: realises f_{uv} from f_u and f_v.
    pub fn compose(&self, other: &Profile) -> Result<Profile> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let mut out = Profile::empty(self.dim);
        let w = self.words;
        for q in 0..self.dim {
            let prow = &self.path[q * w..(q + 1) * w];
            let arow = &self.acc[q * w..(q + 1) * w];
            let out_p = &mut out.path[q * w..(q + 1) * w];
            // path''(q,·) = ∪ { path_g(r,·) : path_f(q,r) }
            // acc''(q,·)  = ∪ { acc_g(r,·) : path_f(q,r) } ∪ { path_g(r,·) : acc_f(q,r) }
            let mut acc_accum = vec![0u64; w];
            for (wi, (&pbits, &abits)) in prow.iter().zip(arow.iter()).enumerate() {
                let mut bits = pbits;
                while bits != 0 {
                    let r = wi * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let grow_p = &other.path[r * w..(r + 1) * w];
                    let grow_a = &other.acc[r * w..(r + 1) * w];
                    let through_acc = abits >> (r % 64) & 1 == 1;
                    for j in 0..w {
                        out_p[j] |= grow_p[j];
                        acc_accum[j] |= grow_a[j];
                        if through_acc {
                            acc_accum[j] |= grow_p[j];
                        }
                    }
                }
            }
            out.acc[q * w..(q + 1) * w].copy_from_slice(&acc_accum);
        }
        Ok(out)
    }

    pub fn is_idempotent(&self) -> bool {
        match self.compose(self) {
            Ok(sq) => sq == *self,
            Err(_) => false,
        }
    }

    /// Renders the matrix with one row per line, entries from {0,1,2}.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for q in 0..self.dim {
            for r in 0..self.dim {
                out.push(char::from(b'0' + self.entry(q, r)));
            }
            out.push('\n');
        }
        out
    }
}

/// The single-letter profile: entry 0 for a transition into an accepting
/// state, 2 for one into a non-accepting state, 1 otherwise.
pub fn letter_profile(a: &Nba, letter: u32) -> Result<Profile> {
    if letter as usize >= a.num_letters() {
        return Err(Error::UnknownLetter(format!("#{}", letter)));
    }
    let mut p = Profile::empty(a.num_states());
    for q in 0..a.num_states() as u32 {
        for &d in a.successors(q, letter) {
            if a.is_accepting(d) {
                p.set_accepting(q as usize, d as usize);
            } else {
                p.set_path(q as usize, d as usize);
            }
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::a1;

    #[test]
    fn identity_profile_entries() {
        let p = Profile::identity(3);
        for q in 0..3 {
            for r in 0..3 {
                let want = if q == r { PLAIN_PATH } else { NO_PATH };
                assert_eq!(p.entry(q, r), want);
            }
        }
    }

    #[test]
    fn identity_is_neutral() {
        let a = a1();
        let id = Profile::identity(a.num_states());
        for l in 0..a.num_letters() as u32 {
            let f = letter_profile(&a, l).unwrap();
            assert_eq!(id.compose(&f).unwrap(), f);
            assert_eq!(f.compose(&id).unwrap(), f);
        }
    }

    #[test]
    fn letter_profile_on_a1() {
        // A1: p -a-> p, p -a-> q, q -b-> p, F = {q}.
        let a = a1();
        let (p, q) = (0, 1);
        let fa = letter_profile(&a, a.letter_index("a").unwrap()).unwrap();
        assert_eq!(fa.entry(p, q), ACCEPTING_PATH);
        assert_eq!(fa.entry(p, p), PLAIN_PATH);
        assert_eq!(fa.entry(q, p), NO_PATH);
        assert_eq!(fa.entry(q, q), NO_PATH);
    }

    #[test]
    fn no_letter_transitions_gives_all_one() {
        let a = Nba::from_parts(
            vec!["s".into()],
            vec!["a".into(), "b".into()],
            &[("s".into(), "a".into(), "s".into())],
            "s",
            &[],
        )
        .unwrap();
        let fb = letter_profile(&a, a.letter_index("b").unwrap()).unwrap();
        assert_eq!(fb.entry(0, 0), NO_PATH);
    }
}
