use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{Matching, Model};
use crate::degseq::{DegreeSequence, Flavor};
use crate::error::{Error, Result};
use crate::exact::{factorial, matchings_count, ratio, Rational};

/// Largest instances the exhaustive oracle accepts: total degree for the
/// undirected model, edge count for the bijective (directed, bipartite) ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationCap {
    pub undirected: u64,
    pub bijective: u64,
}

impl Default for EnumerationCap {
    fn default() -> Self {
        EnumerationCap {
            undirected: 16,
            bijective: 8,
        }
    }
}

impl EnumerationCap {
    pub fn for_flavor(&self, flavor: Flavor) -> u64 {
        match flavor {
            Flavor::Undirected => self.undirected,
            Flavor::Directed | Flavor::Bipartite => self.bijective,
        }
    }
}

pub fn check_cap(d: &DegreeSequence, cap: EnumerationCap) -> Result<()> {
    let limit = cap.for_flavor(d.flavor());
    if d.total() > limit {
        return Err(Error::TooLarge {
            total: d.total(),
            cap: limit,
        });
    }
    Ok(())
}

/// Number of equally likely configurations: `(ell - 1)!!` or `ell!`.
pub fn enumeration_size(d: &DegreeSequence) -> BigUint {
    match d.flavor() {
        Flavor::Undirected => matchings_count(d.total()),
        _ => factorial(d.total()),
    }
}

/// Lexicographic enumeration of perfect matchings of `0..len`, as partner
/// arrays. The lowest unmatched point is always paired first.
#[derive(Clone, Debug)]
pub(crate) struct PairingCursor {
    partner: Vec<u32>,
    firsts: Vec<u32>,
    started: bool,
    done: bool,
}

const FREE: u32 = u32::MAX;

impl PairingCursor {
    pub(crate) fn new(len: usize) -> Self {
        PairingCursor {
            partner: vec![FREE; len],
            firsts: Vec::with_capacity(len / 2),
            started: false,
            done: len % 2 == 1,
        }
    }

    fn next_free_after(&self, after: usize) -> Option<usize> {
        (after + 1..self.partner.len()).find(|&k| self.partner[k] == FREE)
    }

    /// Completes the matching greedily from the current prefix.
    fn fill(&mut self) {
        while let Some(first) = self.partner.iter().position(|&p| p == FREE) {
            let second = self.next_free_after(first).expect("even number of free points");
            self.partner[first] = second as u32;
            self.partner[second] = first as u32;
            self.firsts.push(first as u32);
        }
    }

    pub(crate) fn advance(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.fill();
            return Some(&self.partner);
        }
        while let Some(first) = self.firsts.pop() {
            let first = first as usize;
            let current = self.partner[first] as usize;
            self.partner[first] = FREE;
            self.partner[current] = FREE;
            if let Some(next) = self.next_free_after(current) {
                self.partner[first] = next as u32;
                self.partner[next] = first as u32;
                self.firsts.push(first as u32);
                self.fill();
                return Some(&self.partner);
            }
        }
        self.done = true;
        None
    }
}

/// Lexicographic enumeration of all permutations of `0..len`.
#[derive(Clone, Debug)]
pub(crate) struct PermutationCursor {
    perm: Vec<u32>,
    started: bool,
    done: bool,
}

impl PermutationCursor {
    pub(crate) fn new(len: usize) -> Self {
        PermutationCursor {
            perm: (0..len as u32).collect(),
            started: false,
            done: false,
        }
    }

    pub(crate) fn advance(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.perm);
        }
        let p = &mut self.perm;
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            self.done = true;
            return None;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
        Some(&self.perm)
    }
}

#[derive(Clone, Debug)]
pub(crate) enum RawCursor {
    Pairing(PairingCursor),
    Permutation(PermutationCursor),
}

impl RawCursor {
    pub(crate) fn for_model(model: &Model) -> Self {
        match model.flavor {
            Flavor::Undirected => RawCursor::Pairing(PairingCursor::new(model.raw_len())),
            _ => RawCursor::Permutation(PermutationCursor::new(model.raw_len())),
        }
    }

    pub(crate) fn advance(&mut self) -> Option<&[u32]> {
        match self {
            RawCursor::Pairing(c) => c.advance(),
            RawCursor::Permutation(c) => c.advance(),
        }
    }
}

/// Every configuration of a small instance exactly once, each with its exact
/// probability `1/(ell - 1)!!` (undirected) or `1/ell!` (bijective).
pub struct MatchingEnumeration {
    model: Model,
    cursor: RawCursor,
    probability: Rational,
}

impl MatchingEnumeration {
    pub fn probability(&self) -> &Rational {
        &self.probability
    }
}

impl Iterator for MatchingEnumeration {
    type Item = (Matching, Rational);

    fn next(&mut self) -> Option<Self::Item> {
        let raw = self.cursor.advance()?;
        Some((self.model.matching(raw), self.probability.clone()))
    }
}

pub fn enumerate_matchings(d: &DegreeSequence, cap: EnumerationCap) -> Result<MatchingEnumeration> {
    check_cap(d, cap)?;
    let model = Model::new(d);
    Ok(MatchingEnumeration {
        cursor: RawCursor::for_model(&model),
        probability: ratio(1, enumeration_size(d)),
        model,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degseq::{BipartiteDegrees, Degrees, DirectedDegrees};
    use num_traits::{One, Zero};
    use std::collections::HashSet;

    fn count(d: impl Into<DegreeSequence>) -> usize {
        enumerate_matchings(&d.into(), EnumerationCap::default()).unwrap().count()
    }

    #[test]
    fn matching_counts() {
        assert_eq!(count(Degrees::new(vec![2, 2]).unwrap()), 3);
        assert_eq!(count(Degrees::new(vec![3, 3, 3, 3]).unwrap()), 10395);
        assert_eq!(count(Degrees::new(vec![1, 1]).unwrap()), 1);
        assert_eq!(count(DirectedDegrees::new(vec![1, 1], vec![1, 1]).unwrap()), 2);
        assert_eq!(count(BipartiteDegrees::new(vec![2, 1], vec![2, 1]).unwrap()), 6);
    }

    #[test]
    fn pairing_cursor_emits_distinct_perfect_matchings() {
        for len in [0usize, 2, 4, 6, 8, 10] {
            let mut cursor = PairingCursor::new(len);
            let mut seen = HashSet::new();
            while let Some(p) = cursor.advance() {
                for (h, &q) in p.iter().enumerate() {
                    assert_ne!(h as u32, q);
                    assert_eq!(p[q as usize], h as u32);
                }
                assert!(seen.insert(p.to_vec()));
            }
            assert_eq!(BigUint::from(seen.len()), matchings_count(len as u64));
        }
    }

    #[test]
    fn permutation_cursor_counts() {
        for len in 0..=6usize {
            let mut cursor = PermutationCursor::new(len);
            let mut seen = HashSet::new();
            while let Some(p) = cursor.advance() {
                assert!(seen.insert(p.to_vec()));
            }
            assert_eq!(BigUint::from(seen.len()), factorial(len as u64));
        }
    }

    #[test]
    fn probabilities_sum_to_one() {
        let d: DegreeSequence = Degrees::new(vec![2, 3, 1, 2]).unwrap().into();
        let total: Rational = enumerate_matchings(&d, EnumerationCap::default())
            .unwrap()
            .map(|(_, p)| p)
            .fold(Rational::zero(), |a, b| a + b);
        assert!(total.is_one());
    }

    #[test]
    fn cap_is_enforced() {
        let d: DegreeSequence = Degrees::regular(6, 3).unwrap().into();
        match enumerate_matchings(&d, EnumerationCap::default()) {
            Err(Error::TooLarge { total: 18, cap: 16 }) => {}
            other => panic!("unexpected {:?}", other.map(|_| ())),
        }
        let dd: DegreeSequence = DirectedDegrees::new(vec![3, 3, 3], vec![3, 3, 3]).unwrap().into();
        assert!(matches!(
            enumerate_matchings(&dd, EnumerationCap::default()),
            Err(Error::TooLarge { total: 9, cap: 8 })
        ));
    }
}
