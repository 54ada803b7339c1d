//! Classification of absorbing states up to agent relabeling.
//!
//! Two independent methods must agree. The structural invariant route
//! reads the multiset of (faction size, core size) pairs off the
//! decomposition; two absorbing states are relabelings of each other
//! exactly when those multisets match. The brute-force route
//! canonicalizes a state as the lexicographically minimal encoding over
//! all `n!` relabelings and works on arbitrary states, at factorial
//! cost.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::enumerate::{constructive_all, generate_structures, scan_all, CONSTRUCTIVE_MAX_AGENTS};
use crate::trustnet::bit_index;
use crate::{AbsorbingStructure, Error, Result, TrustMatrix};

/// Isomorphism class of an absorbing state: the multiset of
/// (faction size, core size) pairs, stored sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsoClass {
    pairs: Vec<(u8, u8)>,
}

impl IsoClass {
    /// Class of a faction structure.
    pub fn from_structure(s: &AbsorbingStructure) -> Self {
        let mut pairs: Vec<(u8, u8)> = s
            .factions()
            .iter()
            .map(|f| (f.members.len() as u8, f.core.len() as u8))
            .collect();
        pairs.sort_unstable_by(|a, b| b.cmp(a));
        IsoClass { pairs }
    }

    /// (faction size, core size) pairs, descending.
    pub fn pairs(&self) -> &[(u8, u8)] {
        &self.pairs
    }

    /// Total agent count (sum of faction sizes).
    pub fn n(&self) -> u8 {
        self.pairs.iter().map(|&(k, _)| k).sum()
    }
}

impl fmt::Display for IsoClass {
    /// Formats as `k:m` pairs joined by `+`, e.g. `2:1+1:1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, (k, m)) in self.pairs.iter().enumerate() {
            if idx > 0 {
                write!(f, "+")?;
            }
            write!(f, "{k}:{m}")?;
        }
        Ok(())
    }
}

/// Class of an absorbing matrix; errors on non-absorbing input.
pub fn iso_class(m: &TrustMatrix) -> Result<IsoClass> {
    Ok(IsoClass::from_structure(&m.decompose()?))
}

/// Lexicographically minimal encoding of a state over all relabelings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    n: u8,
    encoding: u64,
}

impl CanonicalForm {
    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn encoding(&self) -> u64 {
        self.encoding
    }
}

/// Largest `n` supported by canonicalization (`n!` relabelings).
pub const CANONICAL_MAX_AGENTS: u8 = 8;

/// Minimal encoding over all `n!` agent relabelings.
///
/// Works on arbitrary states, absorbing or not.
pub fn canonical_form(m: &TrustMatrix) -> Result<CanonicalForm> {
    let n = m.n();
    if n > CANONICAL_MAX_AGENTS {
        return Err(Error::SizeLimit {
            what: "canonical form",
            n,
            limit: CANONICAL_MAX_AGENTS,
        });
    }
    let enc = m.encoding_u64();
    let mut best = u64::MAX;
    for perm in permutations(n) {
        best = best.min(permute_encoding(n, enc, &perm));
    }
    Ok(CanonicalForm { n, encoding: best })
}

/// The matrix relabeled by `perm`: agent `i` becomes `perm[i]`, so
/// `relabel(m, perm).trusts(perm[i], perm[j]) == m.trusts(i, j)`.
///
/// # Panics
/// If `perm` is not a permutation of `0..m.n()`.
pub fn relabel(m: &TrustMatrix, perm: &[u8]) -> TrustMatrix {
    let n = m.n();
    assert_eq!(perm.len(), usize::from(n), "permutation length mismatch");
    let mut seen = 0u16;
    for &p in perm {
        assert!(p < n, "permutation value out of range");
        seen |= 1 << p;
    }
    assert_eq!(seen.count_ones(), u32::from(n), "not a permutation");

    let mut out = TrustMatrix::empty(n).unwrap();
    for i in 0..n {
        for j in 0..n {
            if i != j && m.trusts(i, j) {
                out = out.with_trust(perm[usize::from(i)], perm[usize::from(j)], true);
            }
        }
    }
    out
}

/// Relabeling on the packed encoding, `n ≤ 8`.
fn permute_encoding(n: u8, enc: u64, perm: &[u8]) -> u64 {
    let w = u32::from(n - 1);
    let mut out = 0u64;
    let mut rest = enc;
    while rest != 0 {
        let b = rest.trailing_zeros();
        rest &= rest - 1;
        let i = (b / w) as u8;
        let r = (b % w) as u8;
        let j = if r < i { r } else { r + 1 };
        out |= 1u64 << bit_index(n, perm[usize::from(i)], perm[usize::from(j)]);
    }
    out
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: u8) -> Vec<Vec<u8>> {
    let mut all = Vec::new();
    let mut current = Vec::with_capacity(usize::from(n));
    fn extend(n: u8, used: u16, current: &mut Vec<u8>, all: &mut Vec<Vec<u8>>) {
        if current.len() == usize::from(n) {
            all.push(current.clone());
            return;
        }
        for v in 0..n {
            if used >> v & 1 == 0 {
                current.push(v);
                extend(n, used | 1 << v, current, all);
                current.pop();
            }
        }
    }
    extend(n, 0, &mut current, &mut all);
    all
}

/// Where classification draws its absorbing states from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateSource {
    /// Exhaustive scan (n ≤ 6).
    Brute,
    /// Generated from faction structures (n ≤ 7).
    Constructive,
}

/// Per-class labeled state counts, rows sorted by rendered class name.
pub fn class_census(n: u8, source: StateSource) -> Result<Vec<(IsoClass, u64)>> {
    let mut counts: BTreeMap<IsoClass, u64> = BTreeMap::new();
    match source {
        StateSource::Brute => {
            let workers = std::thread::available_parallelism().map_or(1, |p| p.get());
            let report = scan_all(n, workers, true)?;
            for m in report.states.as_deref().unwrap_or(&[]) {
                *counts.entry(iso_class(m)?).or_insert(0) += 1;
            }
        }
        StateSource::Constructive => {
            if n == 0 {
                return Err(Error::AgentCount(n));
            }
            if n > CONSTRUCTIVE_MAX_AGENTS {
                return Err(Error::SizeLimit {
                    what: "constructive classification",
                    n,
                    limit: CONSTRUCTIVE_MAX_AGENTS,
                });
            }
            for s in generate_structures(n) {
                *counts.entry(IsoClass::from_structure(&s)).or_insert(0) += 1;
            }
        }
    }
    let mut rows: Vec<(IsoClass, u64)> = counts.into_iter().collect();
    rows.sort_by_key(|(class, _)| class.to_string());
    Ok(rows)
}

/// Number of distinct classes among all absorbing states on `n` agents.
pub fn count_classes(n: u8, source: StateSource) -> Result<u64> {
    Ok(class_census(n, source)?.len() as u64)
}

/// Distinct canonical forms over all absorbing states; the factorial
/// cross-check for [`count_classes`].
pub fn count_canonical_forms(n: u8, source: StateSource) -> Result<u64> {
    let states: Vec<TrustMatrix> = match source {
        StateSource::Brute => scan_all(
            n,
            std::thread::available_parallelism().map_or(1, |p| p.get()),
            true,
        )?
        .states
        .unwrap(),
        StateSource::Constructive => constructive_all(n, true)?.states.unwrap(),
    };
    let mut forms = BTreeSet::new();
    for m in &states {
        forms.insert(canonical_form(m)?);
    }
    Ok(forms.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iso_class_examples() {
        let all_one = iso_class(&TrustMatrix::full(3).unwrap()).unwrap();
        assert_eq!(all_one.pairs(), [(3, 3)]);
        let all_zero = iso_class(&TrustMatrix::empty(3).unwrap()).unwrap();
        assert_eq!(all_zero.pairs(), [(1, 1), (1, 1), (1, 1)]);
        let one_way = TrustMatrix::empty(2).unwrap().with_trust(0, 1, true);
        assert_eq!(iso_class(&one_way).unwrap().pairs(), [(2, 1)]);
        assert_eq!(all_zero.n(), 3);
    }

    #[test]
    fn iso_class_rejects_non_absorbing() {
        let m = TrustMatrix::from_u64(3, 9).unwrap();
        assert_eq!(iso_class(&m), Err(Error::NotAbsorbing));
    }

    #[test]
    fn iso_class_rendering() {
        let m = TrustMatrix::empty(3).unwrap().with_trust(0, 1, true);
        assert_eq!(iso_class(&m).unwrap().to_string(), "2:1+1:1");
        assert_eq!(
            iso_class(&TrustMatrix::empty(3).unwrap())
                .unwrap()
                .to_string(),
            "1:1+1:1+1:1"
        );
    }

    #[test]
    fn canonical_form_fixed_points() {
        for n in [2u8, 3, 5] {
            let zero = TrustMatrix::empty(n).unwrap();
            assert_eq!(canonical_form(&zero).unwrap().encoding(), 0);
            let full = TrustMatrix::full(n).unwrap();
            assert_eq!(
                canonical_form(&full).unwrap().encoding(),
                full.encoding_u64()
            );
        }
    }

    #[test]
    fn canonical_form_identifies_swapped_pair() {
        let a = TrustMatrix::empty(2).unwrap().with_trust(0, 1, true);
        let b = TrustMatrix::empty(2).unwrap().with_trust(1, 0, true);
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
    }

    #[test]
    fn canonical_form_size_limit() {
        let m = TrustMatrix::empty(9).unwrap();
        assert!(matches!(
            canonical_form(&m),
            Err(Error::SizeLimit { limit: 8, .. })
        ));
    }

    #[test]
    fn relabel_matches_definition() {
        let m = TrustMatrix::from_u64(3, 6).unwrap();
        let perm = [2u8, 0, 1];
        let r = relabel(&m, &perm);
        for i in 0..3u8 {
            for j in 0..3u8 {
                if i != j {
                    assert_eq!(
                        r.trusts(perm[usize::from(i)], perm[usize::from(j)]),
                        m.trusts(i, j)
                    );
                }
            }
        }
        assert_eq!(relabel(&m, &[0, 1, 2]), m);
    }

    #[test]
    fn relabel_agrees_with_encoding_permutation() {
        for enc in [0u64, 6, 0x2a, 63, 0x155] {
            let m = TrustMatrix::from_u64(4, enc & 0xfff).unwrap();
            for perm in permutations(4) {
                assert_eq!(
                    relabel(&m, &perm).encoding_u64(),
                    permute_encoding(4, m.encoding_u64(), &perm)
                );
            }
        }
    }

    #[test]
    fn permutation_invariance_of_both_classifiers() {
        for enc in [0u64, 1, 30, 43, 63] {
            let m = TrustMatrix::from_u64(3, enc).unwrap();
            let class = iso_class(&m).unwrap();
            let canon = canonical_form(&m).unwrap();
            for perm in permutations(3) {
                let r = relabel(&m, &perm);
                assert_eq!(iso_class(&r).unwrap(), class);
                assert_eq!(canonical_form(&r).unwrap(), canon);
            }
        }
    }

    #[test]
    fn permutations_are_lexicographic_and_complete() {
        let perms = permutations(3);
        assert_eq!(
            perms,
            [
                [0, 1, 2],
                [0, 2, 1],
                [1, 0, 2],
                [1, 2, 0],
                [2, 0, 1],
                [2, 1, 0]
            ]
        );
        assert_eq!(permutations(5).len(), 120);
    }

    #[test]
    fn census_n3() {
        for source in [StateSource::Brute, StateSource::Constructive] {
            let rows: Vec<(String, u64)> = class_census(3, source)
                .unwrap()
                .into_iter()
                .map(|(c, k)| (c.to_string(), k))
                .collect();
            assert_eq!(
                rows,
                [
                    ("1:1+1:1+1:1".into(), 1),
                    ("2:1+1:1".into(), 6),
                    ("2:2+1:1".into(), 3),
                    ("3:1".into(), 3),
                    ("3:2".into(), 3),
                    ("3:3".into(), 1)
                ]
            );
        }
    }

    #[test]
    fn class_counts_small_n() {
        for (n, want) in [(1u8, 1u64), (2, 3), (3, 6), (4, 13)] {
            assert_eq!(count_classes(n, StateSource::Brute).unwrap(), want);
            assert_eq!(count_classes(n, StateSource::Constructive).unwrap(), want);
            assert_eq!(count_canonical_forms(n, StateSource::Brute).unwrap(), want);
        }
    }

    #[test]
    fn census_totals_match_labeled_counts() {
        for (n, labeled) in [(3u8, 17u64), (4, 89), (5, 552)] {
            let total: u64 = class_census(n, StateSource::Constructive)
                .unwrap()
                .iter()
                .map(|(_, k)| k)
                .sum();
            assert_eq!(total, labeled);
        }
    }
}
