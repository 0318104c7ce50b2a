//! The transition monoid Σ*/~: breadth-first closure of letter profiles
//! under composition, Ramsey factorization of long runs, and the
//! Ramsey-based language-inclusion oracle.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::nba::{DisjointUnion, Nba};
use crate::profile::{letter_profile, Profile, ACCEPTING_PATH, NO_PATH};
use crate::word::{periodic_membership, RunPath, UltimatelyPeriodicWord};

/// One class [w] of the congruence, carrying its shortest (then
/// lexicographically least) representative word.
#[derive(Debug, Clone)]
pub struct MonoidElement {
    pub profile: Profile,
    pub witness: Vec<u32>,
    pub idempotent: bool,
    pub is_identity: bool,
}

/// The finite quotient Σ*/~ for one automaton, closed under composition.
///
/// The class of ε is kept as a distinct formal element (id 0) even when
/// some nonempty word has the identity profile; `index` covers the
/// nonempty-word classes only, which form a subsemigroup.
#[derive(Debug, Clone)]
pub struct TransitionMonoid {
    dim: usize,
    elements: Vec<MonoidElement>,
    index: HashMap<Profile, u32>,
    generator_map: Vec<u32>,
    cap: usize,
}

impl TransitionMonoid {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false // always contains at least the identity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Elements in discovery (shortest-then-lex witness) order; index 0 is
    /// the identity.
    pub fn elements(&self) -> &[MonoidElement] {
        &self.elements
    }

    pub fn element(&self, id: u32) -> &MonoidElement {
        &self.elements[id as usize]
    }

    pub fn identity_id(&self) -> u32 {
        0
    }

    /// The element representing a single letter.
    pub fn generator(&self, letter: u32) -> u32 {
        self.generator_map[letter as usize]
    }

    /// The nonempty-word class with this profile, if any.
    pub fn lookup(&self, p: &Profile) -> Option<u32> {
        self.index.get(p).copied()
    }

    /// Composition at the element level. The monoid is closed, so the
    /// product of stored elements is always stored.
    pub fn compose_ids(&self, i: u32, j: u32) -> u32 {
        if i == 0 {
            return j;
        }
        if j == 0 {
            return i;
        }
        let p = self.elements[i as usize]
            .profile
            .compose(&self.elements[j as usize].profile)
            .expect("elements share the monoid dimension");
        *self.index.get(&p).expect("monoid is closed under composition")
    }

    /// The class of a finite word given as letter indices.
    pub fn class_of(&self, word: &[u32]) -> u32 {
        let mut e = self.identity_id();
        for &l in word {
            e = self.compose_ids(e, self.generator(l));
        }
        e
    }

    /// All idempotent elements in discovery order (the identity included).
    pub fn idempotents(&self) -> Vec<u32> {
        (0..self.elements.len() as u32)
            .filter(|&i| self.elements[i as usize].idempotent)
            .collect()
    }

    /// Right-Cayley graph in DOT format: one node per element (labelled by
    /// its witness word), one `letter`-labelled edge e → e·[letter] per
    /// generator.
    pub fn to_cayley_dot(&self, letter_names: &[String]) -> String {
        let mut out = String::from("digraph cayley {\n  rankdir=LR;\n");
        for (i, e) in self.elements.iter().enumerate() {
            let word = if e.witness.is_empty() {
                "ε".to_string()
            } else {
                e.witness
                    .iter()
                    .map(|&l| letter_names[l as usize].clone())
                    .collect::<Vec<_>>()
                    .join(".")
            };
            let shape = if e.idempotent { "doublecircle" } else { "circle" };
            out.push_str(&format!("  n{} [label=\"[{}]\", shape={}];\n", i, word, shape));
        }
        for i in 0..self.elements.len() as u32 {
            for (l, name) in letter_names.iter().enumerate() {
                let j = self.compose_ids(i, self.generator(l as u32));
                out.push_str(&format!("  n{} -> n{} [label=\"{}\"];\n", i, j, name));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Breadth-first closure of {[ε]} ∪ letter generators under right
/// composition with generators. Discovery order yields shortest-then-lex
/// witnesses; stops with `CapExceeded` once the element count would pass
/// `cap`.
pub fn build_monoid(a: &Nba, cap: usize) -> Result<TransitionMonoid> {
    if cap < a.num_letters() + 1 {
        return Err(Error::CapExceeded { partial: 0, cap });
    }
    let dim = a.num_states();
    let mut elements: Vec<MonoidElement> = Vec::new();
    let mut index: HashMap<Profile, u32> = HashMap::new();

    // Nonempty-word classes only; the formal identity below never enters
    // `index`.
    let insert = |elements: &mut Vec<MonoidElement>,
                      index: &mut HashMap<Profile, u32>,
                      profile: Profile,
                      witness: Vec<u32>|
     -> Option<u32> {
        if let Some(&id) = index.get(&profile) {
            return Some(id);
        }
        if elements.len() >= cap {
            return None;
        }
        let id = elements.len() as u32;
        let idempotent = profile.is_idempotent();
        index.insert(profile.clone(), id);
        elements.push(MonoidElement { profile, witness, idempotent, is_identity: false });
        Some(id)
    };

    elements.push(MonoidElement {
        profile: Profile::identity(dim),
        witness: Vec::new(),
        idempotent: true,
        is_identity: true,
    });
    let mut generator_profiles = Vec::with_capacity(a.num_letters());
    let mut generator_map = Vec::with_capacity(a.num_letters());
    for l in 0..a.num_letters() as u32 {
        let p = letter_profile(a, l)?;
        generator_profiles.push(p.clone());
        match insert(&mut elements, &mut index, p, vec![l]) {
            Some(id) => generator_map.push(id),
            None => return Err(Error::CapExceeded { partial: elements.len(), cap }),
        }
    }

    // Frontier = nonempty classes in insertion order; right-composing each
    // with all generators reaches every product of letters.
    let mut next = 1usize;
    while next < elements.len() {
        let base_profile = elements[next].profile.clone();
        let base_witness = elements[next].witness.clone();
        for (l, gp) in generator_profiles.iter().enumerate() {
            let p = base_profile.compose(gp)?;
            if index.contains_key(&p) {
                continue;
            }
            let mut w = base_witness.clone();
            w.push(l as u32);
            if insert(&mut elements, &mut index, p, w).is_none() {
                return Err(Error::CapExceeded { partial: elements.len(), cap });
            }
        }
        next += 1;
    }

    Ok(TransitionMonoid { dim, elements, index, generator_map, cap })
}

/// Least (in lexicographic (k, i, j) order) triple of run positions
/// i < j < k visiting the same accepting state such that the three segment
/// profiles f_{w[i..j]}, f_{w[j..k]}, f_{w[i..k]} coincide.
pub fn ramsey_factorize(a: &Nba, run: &RunPath) -> Result<Option<(usize, usize, usize)>> {
    run.validate(a)?;
    let n = run.len();
    let accepting_pos: Vec<usize> =
        (0..=n).filter(|&i| a.is_accepting(run.states[i])).collect();
    if accepting_pos.len() < 3 {
        return Ok(None);
    }
    let letters: Vec<Profile> = (0..a.num_letters() as u32)
        .map(|l| letter_profile(a, l))
        .collect::<Result<Vec<_>>>()?;

    // seg[i] is f of run.word[i..k] for the current k, extended column by
    // column as k grows.
    let mut seg: Vec<Vec<Profile>> = vec![Vec::new(); n + 1];
    for k in 0..=n {
        if k > 0 {
            let g = &letters[run.word[k - 1] as usize];
            for i in 0..k {
                let prev = if i == k - 1 {
                    Profile::identity(a.num_states())
                } else {
                    seg[i][k - 1 - i - 1].clone()
                };
                let p = prev.compose(g)?;
                seg[i].push(p);
            }
        }
        if !a.is_accepting(run.states[k]) {
            continue;
        }
        for (ai, &i) in accepting_pos.iter().enumerate() {
            if i >= k || run.states[i] != run.states[k] {
                continue;
            }
            for &j in &accepting_pos[ai + 1..] {
                if j >= k {
                    break;
                }
                if run.states[j] != run.states[k] {
                    continue;
                }
                let fij = &seg[i][j - i - 1];
                let fjk = &seg[j][k - j - 1];
                if fij == fjk && fij == &seg[i][k - i - 1] {
                    return Ok(Some((i, j, k)));
                }
            }
        }
    }
    Ok(None)
}

/// Outcome of the Ramsey inclusion check.
#[derive(Debug, Clone)]
pub enum InclusionVerdict {
    Included,
    NotIncluded(UltimatelyPeriodicWord),
    Inconclusive { partial: usize, cap: usize },
}

impl InclusionVerdict {
    pub fn is_included(&self) -> bool {
        matches!(self, InclusionVerdict::Included)
    }
}

/// Ramsey-based inclusion L(a) ⊆ L(b): over the monoid of the disjoint
/// union, every pair (g, h) with h a non-identity idempotent that certifies
/// an ultimately periodic word of L(a) must pass the exact membership test
/// on b.
///
/// Membership of witness(g)·witness(h)^ω in L(b) only depends on the
/// classes ([g·h], [h]) (the congruence saturates languages), so verdicts
/// are cached under that key.
pub fn language_inclusion(a: &Nba, b: &Nba, cap: usize) -> Result<InclusionVerdict> {
    let union = DisjointUnion::new(a, b)?;
    let m = match build_monoid(&union.nba, cap) {
        Ok(m) => m,
        Err(Error::CapExceeded { partial, cap }) => {
            return Ok(InclusionVerdict::Inconclusive { partial, cap })
        }
        Err(e) => return Err(e),
    };
    let loops: Vec<u32> = m
        .idempotents()
        .into_iter()
        .filter(|&h| !m.element(h).is_identity)
        .collect();
    let q_init = union.a_initial as usize;
    let mut cache: HashMap<(u32, u32), bool> = HashMap::new();
    for g in 0..m.len() as u32 {
        let gp = &m.element(g).profile;
        for &h in &loops {
            let hp = &m.element(h).profile;
            let fits = (0..union.a_states).any(|q| {
                gp.entry(q_init, q) != NO_PATH && hp.entry(q, q) == ACCEPTING_PATH
            });
            if !fits {
                continue;
            }
            let key = (m.compose_ids(g, h), h);
            let member = match cache.get(&key) {
                Some(&v) => v,
                None => {
                    let w = UltimatelyPeriodicWord::new(
                        m.element(g).witness.clone(),
                        m.element(h).witness.clone(),
                    )?;
                    let v = periodic_membership(b, &w);
                    cache.insert(key, v);
                    v
                }
            };
            if !member {
                let w = UltimatelyPeriodicWord::new(
                    m.element(g).witness.clone(),
                    m.element(h).witness.clone(),
                )?;
                return Ok(InclusionVerdict::NotIncluded(w));
            }
        }
    }
    Ok(InclusionVerdict::Included)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{a1, fixture};
    use crate::word::word_profile;

    #[test]
    fn one_state_loop_monoid() {
        let a = Nba::from_parts(
            vec!["s".into()],
            vec!["a".into()],
            &[("s".into(), "a".into(), "s".into())],
            "s",
            &[],
        )
        .unwrap();
        let m = build_monoid(&a, 100).unwrap();
        assert_eq!(m.len(), 2);
        assert!(m.elements().iter().all(|e| e.idempotent));
        assert_eq!(m.element(m.generator(0)).profile, word_profile(&a, &[0]).unwrap());
    }

    #[test]
    fn a1_witness_coherence_and_closure() {
        let a = a1();
        let m = build_monoid(&a, 10_000).unwrap();
        assert!(m.len() <= 3usize.pow((a.num_states() * a.num_states()) as u32));
        for e in m.elements() {
            assert_eq!(word_profile(&a, &e.witness).unwrap(), e.profile);
        }
        for i in 0..m.len() as u32 {
            for j in 0..m.len() as u32 {
                m.compose_ids(i, j); // must not panic
            }
        }
    }

    #[test]
    fn cap_exceeded_reports_partial() {
        let (a, _) = fixture("branching").unwrap();
        match build_monoid(&a, 4) {
            Err(Error::CapExceeded { partial, cap }) => {
                assert_eq!(cap, 4);
                assert!(partial >= 4);
            }
            other => panic!("expected CapExceeded, got {:?}", other.map(|m| m.len())),
        }
    }

    #[test]
    fn ramsey_on_a1_unrolled_lasso() {
        let a = a1();
        // p (a(ba)^4): q at positions 1,3,5,7,9. [ba] is not idempotent
        // (f_baba(q,p)=0 but f_ba(q,p)=2), so the least triple pumps (ba)².
        let run = RunPath::new(
            vec![0, 1, 0, 1, 0, 1, 0, 1, 0, 1],
            vec![0, 1, 0, 1, 0, 1, 0, 1, 0],
        )
        .unwrap();
        let (i, j, k) = ramsey_factorize(&a, &run).unwrap().unwrap();
        assert_eq!((i, j, k), (1, 5, 9));
        assert_eq!(run.states[i], run.states[j]);
        assert_eq!(run.states[j], run.states[k]);
        assert!(a.is_accepting(run.states[i]));
        let fij = word_profile(&a, &run.word[i..j]).unwrap();
        let fjk = word_profile(&a, &run.word[j..k]).unwrap();
        let fik = word_profile(&a, &run.word[i..k]).unwrap();
        assert_eq!(fij, fjk);
        assert_eq!(fij, fik);
        assert!(fij.is_idempotent());
    }

    #[test]
    fn ramsey_short_run_is_none() {
        let a = a1();
        let run = RunPath::new(vec![0, 1], vec![0]).unwrap();
        assert!(ramsey_factorize(&a, &run).unwrap().is_none());
    }

    #[test]
    fn inclusion_reflexive_and_gap() {
        let (ia, ib) = fixture("inclusion-gap").unwrap();
        assert!(language_inclusion(&ia, &ib, 50_000).unwrap().is_included());
        assert!(language_inclusion(&ia, &ia, 50_000).unwrap().is_included());
        assert!(language_inclusion(&ib, &ib, 50_000).unwrap().is_included());
    }

    #[test]
    fn inclusion_fails_against_empty_language() {
        let a = a1();
        let empty = Nba::from_parts(
            a.states().to_vec(),
            a.alphabet().to_vec(),
            &[
                ("p".into(), "a".into(), "p".into()),
                ("p".into(), "a".into(), "q".into()),
                ("q".into(), "b".into(), "p".into()),
            ],
            "p",
            &[],
        )
        .unwrap();
        match language_inclusion(&a, &empty, 50_000).unwrap() {
            InclusionVerdict::NotIncluded(w) => {
                assert!(periodic_membership(&a, &w));
                assert!(!periodic_membership(&empty, &w));
            }
            other => panic!("expected NotIncluded, got {:?}", other),
        }
    }
}
