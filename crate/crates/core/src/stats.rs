//! Scalar self-loop and multiple-edge statistics of a configuration.

use serde::Serialize;

use crate::degseq::{Degrees, Flavor};
use crate::error::{Error, Result};
use crate::pairing::EdgeCounts;

#[inline]
fn choose2(x: u32) -> u64 {
    let x = u64::from(x);
    x * x.saturating_sub(1) / 2
}

/// `S_n`, `M_n = sum C(X_ij, 2)`, `tilde M_n = sum (X_ij - 1)_+`, the
/// indicator counts `S_n^(l)`, `M_n^(l)`, the erased-edge count `R_n`, and
/// whether the configuration is simple.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LoopMultiStats {
    pub s: u64,
    pub m: u64,
    pub m_tilde: u64,
    pub s_ind: u64,
    pub m_ind: u64,
    pub removed: u64,
    pub simple: bool,
}

fn expect_flavor(counts: &EdgeCounts, expected: Flavor) -> Result<()> {
    if counts.flavor() == expected {
        Ok(())
    } else {
        Err(Error::FlavorMismatch {
            expected: expected.name(),
            found: counts.flavor().name(),
        })
    }
}

pub fn loop_multi_stats(counts: &EdgeCounts) -> Result<LoopMultiStats> {
    expect_flavor(counts, Flavor::Undirected)?;
    let mut st = LoopMultiStats::default();
    for ((i, j), x) in counts.iter() {
        if i == j {
            st.s += u64::from(x);
            st.s_ind += 1;
        } else if x >= 2 {
            st.m += choose2(x);
            st.m_tilde += u64::from(x - 1);
            st.m_ind += 1;
        }
    }
    st.removed = st.s + st.m_tilde;
    st.simple = st.s == 0 && st.m == 0;
    Ok(st)
}

/// `M_n` restricted to vertex pairs whose degrees are both at most `m_cut`.
pub fn truncated_multi(counts: &EdgeCounts, d: &Degrees, m_cut: u32) -> Result<u64> {
    expect_flavor(counts, Flavor::Undirected)?;
    let deg = d.as_slice();
    if counts.vertices().0 != deg.len() {
        return Err(Error::InvalidArgument(format!(
            "edge counts cover {} vertices but the degree sequence has {}",
            counts.vertices().0,
            deg.len()
        )));
    }
    Ok(counts
        .iter()
        .filter(|&((i, j), _)| i != j && deg[i as usize] <= m_cut && deg[j as usize] <= m_cut)
        .map(|(_, x)| choose2(x))
        .sum())
}

/// Directed self-loops `hat S_n` and same-direction multiple edges `hat M_n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DirectedStats {
    pub s_hat: u64,
    pub m_hat: u64,
    pub simple: bool,
}

/// Counts over `X_ij^(out)`; two edges in opposite directions between the
/// same vertices are not a multiple edge.
pub fn directed_stats(counts: &EdgeCounts) -> Result<DirectedStats> {
    expect_flavor(counts, Flavor::Directed)?;
    let mut st = DirectedStats::default();
    for ((i, j), x) in counts.iter() {
        if i == j {
            st.s_hat += u64::from(x);
        } else {
            st.m_hat += choose2(x);
        }
    }
    st.simple = st.s_hat == 0 && st.m_hat == 0;
    Ok(st)
}

/// `bar M_n = sum_{i,j} C(bar X_ij, 2)`.
pub fn bipartite_multi(counts: &EdgeCounts) -> Result<u64> {
    expect_flavor(counts, Flavor::Bipartite)?;
    Ok(counts.iter().map(|(_, x)| choose2(x)).sum())
}

/// `(S, M)`-style pair for any flavor: `(S_n, M_n)`, `(hat S_n, hat M_n)` or
/// `(0, bar M_n)`.
pub fn loop_multi_pair(counts: &EdgeCounts) -> (u64, u64) {
    match counts.flavor() {
        Flavor::Undirected => {
            let st = loop_multi_stats(counts).expect("flavor checked");
            (st.s, st.m)
        }
        Flavor::Directed => {
            let st = directed_stats(counts).expect("flavor checked");
            (st.s_hat, st.m_hat)
        }
        Flavor::Bipartite => (0, bipartite_multi(counts).expect("flavor checked")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degseq::{BipartiteDegrees, DegreeSequence, DirectedDegrees};
    use crate::pairing::{edge_counts, enumerate_matchings, EnumerationCap, HalfEdge, Matching};

    fn he(v: u32, s: u32) -> HalfEdge {
        HalfEdge::new(v, s)
    }

    fn counts_of(d: &[u32], pairs: &[(HalfEdge, HalfEdge)]) -> EdgeCounts {
        let d = Degrees::new(d.to_vec()).unwrap();
        edge_counts(&Matching::from_pairs(&d, pairs).unwrap())
    }

    #[test]
    fn two_self_loops() {
        let st = loop_multi_stats(&counts_of(&[2, 2], &[(he(0, 0), he(0, 1)), (he(1, 0), he(1, 1))])).unwrap();
        assert_eq!((st.s, st.m, st.s_ind, st.simple), (2, 0, 2, false));
        assert_eq!(st.removed, 2);
    }

    #[test]
    fn double_edge() {
        let st = loop_multi_stats(&counts_of(&[2, 2], &[(he(0, 0), he(1, 0)), (he(0, 1), he(1, 1))])).unwrap();
        assert_eq!((st.s, st.m, st.m_tilde, st.m_ind), (0, 1, 1, 1));
        assert_eq!(st.removed, 1);
    }

    #[test]
    fn triple_edge() {
        let pairs = [(he(0, 0), he(1, 0)), (he(0, 1), he(1, 1)), (he(0, 2), he(1, 2))];
        let st = loop_multi_stats(&counts_of(&[3, 3], &pairs)).unwrap();
        assert_eq!((st.m, st.m_tilde, st.m_ind), (3, 2, 1));
    }

    #[test]
    fn truncation() {
        let d = Degrees::new(vec![2, 2, 5, 5]).unwrap();
        // double edges between 0-1 and between 2-3, plus loops at 2 and 3
        let pairs = [
            (he(0, 0), he(1, 0)),
            (he(0, 1), he(1, 1)),
            (he(2, 0), he(3, 0)),
            (he(2, 1), he(3, 1)),
            (he(2, 2), he(3, 2)),
            (he(2, 3), he(2, 4)),
            (he(3, 3), he(3, 4)),
        ];
        let x = edge_counts(&Matching::from_pairs(&d, &pairs).unwrap());
        let full = loop_multi_stats(&x).unwrap().m;
        assert_eq!(full, 4);
        assert_eq!(truncated_multi(&x, &d, 5).unwrap(), full);
        assert_eq!(truncated_multi(&x, &d, 0).unwrap(), 0);
        assert_eq!(truncated_multi(&x, &d, 2).unwrap(), 1);
    }

    #[test]
    fn directed_examples() {
        let d: DegreeSequence = DirectedDegrees::new(vec![1, 1], vec![1, 1]).unwrap().into();
        let outcomes: Vec<DirectedStats> = enumerate_matchings(&d, EnumerationCap::default())
            .unwrap()
            .map(|(m, _)| directed_stats(&edge_counts(&m)).unwrap())
            .collect();
        assert!(outcomes.contains(&DirectedStats { s_hat: 2, m_hat: 0, simple: false }));
        assert!(outcomes.contains(&DirectedStats { s_hat: 0, m_hat: 0, simple: true }));

        let d: DegreeSequence = DirectedDegrees::new(vec![2, 2], vec![2, 2]).unwrap().into();
        // both out-half-edges of vertex 0 feed both in-half-edges of vertex 1
        let both = enumerate_matchings(&d, EnumerationCap::default())
            .unwrap()
            .map(|(m, _)| edge_counts(&m))
            .find(|x| x.get(0, 1) == 2)
            .unwrap();
        assert_eq!(directed_stats(&both).unwrap().m_hat, 2);
    }

    #[test]
    fn bipartite_examples() {
        let enumerate = |l: Vec<u32>, r: Vec<u32>| -> Vec<u64> {
            let d: DegreeSequence = BipartiteDegrees::new(l, r).unwrap().into();
            enumerate_matchings(&d, EnumerationCap::default())
                .unwrap()
                .map(|(m, _)| bipartite_multi(&edge_counts(&m)).unwrap())
                .collect()
        };
        assert!(enumerate(vec![2], vec![2]).iter().all(|&m| m == 1));
        assert!(enumerate(vec![1, 1], vec![1, 1]).iter().all(|&m| m == 0));
        let ms = enumerate(vec![2, 1], vec![2, 1]);
        assert_eq!(ms.len(), 6);
        assert_eq!(ms.iter().filter(|&&m| m == 1).count(), 2);
    }

    #[test]
    fn flavor_mismatch() {
        let d: DegreeSequence = BipartiteDegrees::new(vec![1], vec![1]).unwrap().into();
        let (m, _) = enumerate_matchings(&d, EnumerationCap::default()).unwrap().next().unwrap();
        assert!(matches!(loop_multi_stats(&edge_counts(&m)), Err(Error::FlavorMismatch { .. })));
    }
}
