//! Exact law of the loop and multi-edge statistics, by enumerating every
//! configuration of a small instance.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;

use crate::degseq::{DegreeSequence, Flavor};
use crate::error::Result;
use crate::exact::{factorial, ratio, Rational};
use crate::pairing::{check_cap, EnumerationCap, Model, RawCursor};
use crate::stats::loop_multi_pair;

/// Joint distribution of `(S, M)` (or the flavor analogue) as integer counts
/// of configurations, all of which are equally likely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactLaw {
    flavor: Flavor,
    configurations: u64,
    joint: BTreeMap<(u64, u64), u64>,
    removed: BTreeMap<u64, u64>,
    simple: u64,
    degree_factorials: BigUint,
}

impl ExactLaw {
    pub fn compute(d: &DegreeSequence, cap: EnumerationCap) -> Result<Self> {
        check_cap(d, cap)?;
        let model = Model::new(d);
        let mut cursor = RawCursor::for_model(&model);
        let mut keys = Vec::with_capacity(model.raw_len());
        let mut joint = BTreeMap::new();
        let mut removed = BTreeMap::new();
        let mut configurations = 0u64;
        let mut simple = 0u64;
        while let Some(raw) = cursor.advance() {
            let counts = model.counts(raw, &mut keys);
            let (s, m) = loop_multi_pair(&counts);
            *joint.entry((s, m)).or_insert(0) += 1;
            if d.flavor() == Flavor::Undirected {
                let r = crate::stats::loop_multi_stats(&counts)?.removed;
                *removed.entry(r).or_insert(0) += 1;
            }
            if s == 0 && m == 0 {
                simple += 1;
            }
            configurations += 1;
        }
        let degree_factorials = match d {
            DegreeSequence::Undirected(d) => product_of_factorials(d.as_slice()),
            DegreeSequence::Directed(d) => {
                product_of_factorials(d.in_degrees()) * product_of_factorials(d.out_degrees())
            }
            DegreeSequence::Bipartite(d) => {
                product_of_factorials(d.left()) * product_of_factorials(d.right())
            }
        };
        Ok(ExactLaw {
            flavor: d.flavor(),
            configurations,
            joint,
            removed,
            simple,
            degree_factorials,
        })
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn configurations(&self) -> u64 {
        self.configurations
    }

    pub fn simple_configurations(&self) -> u64 {
        self.simple
    }

    pub fn probability(&self, s: u64, m: u64) -> Rational {
        ratio(self.joint.get(&(s, m)).copied().unwrap_or(0), self.configurations)
    }

    /// `((s, m), P(S = s, M = m))` over the support, in key order.
    pub fn joint(&self) -> impl Iterator<Item = ((u64, u64), Rational)> + '_ {
        self.joint
            .iter()
            .map(|(&k, &c)| (k, ratio(c, self.configurations)))
    }

    /// Law of the erased-edge count `R_n` (undirected only; empty otherwise).
    pub fn removed_law(&self) -> impl Iterator<Item = (u64, Rational)> + '_ {
        self.removed
            .iter()
            .map(|(&r, &c)| (r, ratio(c, self.configurations)))
    }

    fn mean_by(&self, f: impl Fn(u64, u64) -> u64) -> Rational {
        let num: BigUint = self
            .joint
            .iter()
            .map(|(&(s, m), &c)| BigUint::from(f(s, m)) * c)
            .sum();
        ratio(num, self.configurations)
    }

    pub fn mean_s(&self) -> Rational {
        self.mean_by(|s, _| s)
    }

    pub fn mean_m(&self) -> Rational {
        self.mean_by(|_, m| m)
    }

    pub fn p_simple(&self) -> Rational {
        ratio(self.simple, self.configurations)
    }

    /// Number of simple graphs with these degrees:
    /// `#simple configurations / prod d_i!`. Each simple graph is produced by
    /// exactly `prod d_i!` configurations, so the division is exact.
    pub fn graph_count(&self) -> BigUint {
        let (q, r) = BigUint::from(self.simple).div_rem(&self.degree_factorials);
        debug_assert!(r.is_zero(), "simple configurations not divisible by degree factorials");
        q
    }

    pub fn graph_count_is_integral(&self) -> bool {
        (BigUint::from(self.simple) % &self.degree_factorials).is_zero()
    }
}

fn product_of_factorials(degrees: &[u32]) -> BigUint {
    degrees.iter().map(|&d| factorial(d.into())).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degseq::Degrees;

    #[test]
    fn two_two_law() {
        let law = ExactLaw::compute(&Degrees::new(vec![2, 2]).unwrap().into(), EnumerationCap::default()).unwrap();
        assert_eq!(law.configurations(), 3);
        assert_eq!(law.probability(2, 0), ratio(1, 3));
        assert_eq!(law.probability(0, 1), ratio(2, 3));
        assert_eq!(law.mean_s(), ratio(2, 3));
        assert_eq!(law.mean_m(), ratio(2, 3));
        assert_eq!(law.graph_count(), BigUint::zero());
    }

    #[test]
    fn complete_graph_k4() {
        let law = ExactLaw::compute(&Degrees::regular(4, 3).unwrap().into(), EnumerationCap::default()).unwrap();
        assert_eq!(law.configurations(), 10395);
        assert_eq!(law.simple_configurations(), 1296);
        assert_eq!(law.p_simple(), ratio(1296, 10395));
        assert_eq!(law.graph_count(), BigUint::from(1u32));
    }

    #[test]
    fn single_edge() {
        let law = ExactLaw::compute(&Degrees::new(vec![1, 1]).unwrap().into(), EnumerationCap::default()).unwrap();
        assert_eq!(law.graph_count(), BigUint::from(1u32));
    }
}
