//! Seeded Monte Carlo replicates.
//!
//! Replicate `i` always draws from `RngStream::new(seed, i)`, and results are
//! returned in replicate order, so the output does not depend on whether or
//! how the work was split across threads.

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::degseq::{DegreeSequence, Flavor};
use crate::dist::JointEmpiricalDist;
use crate::error::Result;
use crate::pairing::Sampler;
use crate::rng::RngStream;
use crate::stats::{directed_stats, loop_multi_stats, truncated_multi, bipartite_multi};

/// How replicates are scheduled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses the current rayon pool. Falls back to sequential execution when
    /// the crate is built without the `parallel` feature.
    #[default]
    Parallel,
}

/// Runs `reps` replicates of `f`, each with its own random stream and a
/// per-worker scratch state built by `init`.
pub fn run_replicates<S, T, I, F>(reps: u64, seed: u64, exec: Execution, init: I, f: F) -> Vec<T>
where
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, &mut ChaCha8Rng, u64) -> T + Sync + Send,
    T: Send,
{
    let one = |state: &mut S, i: u64| {
        let mut rng = RngStream::new(seed, i).rng();
        f(state, &mut rng, i)
    };
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..reps).into_par_iter().map_init(&init, |s, i| one(s, i)).collect()
        }
        _ => {
            let mut state = init();
            (0..reps).map(|i| one(&mut state, i)).collect()
        }
    }
}

/// One replicate's statistics. For the directed model `s` and `m` are
/// `hat S_n` and `hat M_n`; for the bipartite model `s` is zero and `m` is
/// `bar M_n`. `removed` and `m_trunc` are only filled for the undirected model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReplicateRecord {
    pub replicate: u64,
    pub s: u64,
    pub m: u64,
    pub simple: bool,
    pub removed: Option<u64>,
    pub m_trunc: Option<u64>,
}

impl ReplicateRecord {
    pub const CSV_HEADER: &'static str = "replicate,s,m,simple,removed,m_trunc";

    pub fn csv_row(&self) -> String {
        let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{}",
            self.replicate,
            self.s,
            self.m,
            u8::from(self.simple),
            opt(self.removed),
            opt(self.m_trunc)
        )
    }
}

/// Samples `reps` configurations of `d` and records their statistics.
/// `m_cut` adds the truncated multi-edge count (undirected only).
pub fn simulate(
    d: &DegreeSequence,
    reps: u64,
    seed: u64,
    m_cut: Option<u32>,
    exec: Execution,
) -> Result<Vec<ReplicateRecord>> {
    let undirected = d.as_undirected().ok().cloned();
    let records = run_replicates(
        reps,
        seed,
        exec,
        || Sampler::new(d),
        |sampler, rng, i| -> Result<ReplicateRecord> {
            let counts = sampler.sample_counts(rng);
            let rec = match d.flavor() {
                Flavor::Undirected => {
                    let st = loop_multi_stats(&counts)?;
                    let m_trunc = match (m_cut, &undirected) {
                        (Some(cut), Some(u)) => Some(truncated_multi(&counts, u, cut)?),
                        _ => None,
                    };
                    ReplicateRecord {
                        replicate: i,
                        s: st.s,
                        m: st.m,
                        simple: st.simple,
                        removed: Some(st.removed),
                        m_trunc,
                    }
                }
                Flavor::Directed => {
                    let st = directed_stats(&counts)?;
                    ReplicateRecord {
                        replicate: i,
                        s: st.s_hat,
                        m: st.m_hat,
                        simple: st.simple,
                        removed: None,
                        m_trunc: None,
                    }
                }
                Flavor::Bipartite => {
                    let m = bipartite_multi(&counts)?;
                    ReplicateRecord {
                        replicate: i,
                        s: 0,
                        m,
                        simple: m == 0,
                        removed: None,
                        m_trunc: None,
                    }
                }
            };
            Ok(rec)
        },
    );
    records.into_iter().collect()
}

/// Joint `(s, m)` tally of a batch of records.
pub fn joint_of(records: &[ReplicateRecord]) -> JointEmpiricalDist {
    records.iter().map(|r| (r.s, r.m)).collect()
}

/// Fraction of simple configurations in a batch.
pub fn simple_fraction(records: &[ReplicateRecord]) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    records.iter().filter(|r| r.simple).count() as f64 / records.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degseq::{Degrees, DirectedDegrees};

    #[test]
    fn sequential_and_parallel_agree() {
        let d: DegreeSequence = Degrees::regular(30, 3).unwrap().into();
        let a = simulate(&d, 50, 7, Some(2), Execution::Sequential).unwrap();
        let b = simulate(&d, 50, 7, Some(2), Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 50);
        assert!(a.iter().enumerate().all(|(i, r)| r.replicate == i as u64));
    }

    #[test]
    fn forced_outcomes() {
        let d: DegreeSequence = Degrees::new(vec![2]).unwrap().into();
        let recs = simulate(&d, 5, 1, None, Execution::Sequential).unwrap();
        assert!(recs.iter().all(|r| r.s == 1 && r.removed == Some(1)));
        let d: DegreeSequence = Degrees::new(vec![1; 8]).unwrap().into();
        let recs = simulate(&d, 5, 1, None, Execution::Sequential).unwrap();
        assert!(recs.iter().all(|r| r.simple && r.removed == Some(0)));
        assert_eq!(simple_fraction(&recs), 1.0);
    }

    #[test]
    fn directed_rows() {
        let d: DegreeSequence = DirectedDegrees::new(vec![1], vec![1]).unwrap().into();
        let recs = simulate(&d, 3, 1, None, Execution::Sequential).unwrap();
        assert!(recs.iter().all(|r| r.s == 1 && !r.simple));
        assert_eq!(recs[0].csv_row(), "0,1,0,0,,");
    }
}
