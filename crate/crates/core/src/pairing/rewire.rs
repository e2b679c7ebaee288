use rand::Rng;

use super::{HalfEdge, Matching};
use crate::error::{Error, Result};

/// Pairs `s` with `t`. If they were matched elsewhere, the two edges through
/// them are broken and the freed partners are paired with each other.
pub(crate) fn force_pair(partner: &mut [u32], s: usize, t: usize) {
    if partner[s] as usize == t {
        return;
    }
    let a = partner[s] as usize;
    let b = partner[t] as usize;
    partner[s] = t as u32;
    partner[t] = s as u32;
    partner[a] = b as u32;
    partner[b] = a as u32;
}

/// Raw indices of a double-edge target `(s1, t1), (s2, t2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct DoubleTarget {
    pub s1: usize,
    pub t1: usize,
    pub s2: usize,
    pub t2: usize,
}

impl DoubleTarget {
    pub(crate) fn holds(&self, partner: &[u32]) -> bool {
        partner[self.s1] as usize == self.t1 && partner[self.s2] as usize == self.t2
    }

    fn freed(&self, partner: &[u32]) -> ([usize; 4], usize) {
        let targets = [self.s1, self.t1, self.s2, self.t2];
        let mut freed = [0usize; 4];
        let mut len = 0;
        for &x in &targets {
            let p = partner[x] as usize;
            if !targets.contains(&p) {
                freed[len] = p;
                len += 1;
            }
        }
        (freed, len)
    }
}

/// How many equally likely repairs the double-edge rewiring has from this
/// configuration: 3 when four half-edges are freed, otherwise 1.
pub(crate) fn double_outcome_count(partner: &[u32], target: &DoubleTarget) -> usize {
    if target.holds(partner) {
        return 1;
    }
    match target.freed(partner).1 {
        4 => 3,
        _ => 1,
    }
}

/// Applies the double-edge rewiring with repair number `choice`
/// (`0..double_outcome_count`). Freed half-edges are re-paired: two are
/// joined to each other, four use the `choice`-th of their three perfect
/// matchings.
pub(crate) fn apply_double(partner: &mut [u32], target: &DoubleTarget, choice: usize) {
    if target.holds(partner) {
        return;
    }
    let (freed, len) = target.freed(partner);
    let join = |partner: &mut [u32], a: usize, b: usize| {
        partner[a] = b as u32;
        partner[b] = a as u32;
    };
    join(partner, target.s1, target.t1);
    join(partner, target.s2, target.t2);
    match len {
        0 => {}
        2 => join(partner, freed[0], freed[1]),
        4 => {
            let [a, b, c, d] = freed;
            let (x, y) = match choice {
                0 => ((a, b), (c, d)),
                1 => ((a, c), (b, d)),
                _ => ((a, d), (b, c)),
            };
            join(partner, x.0, x.1);
            join(partner, y.0, y.1);
        }
        _ => unreachable!("an odd number of half-edges cannot be freed"),
    }
}

/// Rewires `m` so that `s` and `t`, two distinct half-edges of one vertex,
/// form a self-loop.
///
/// Applied to a uniform matching, the output is uniform among matchings
/// containing the pair `(s, t)`. A self-loop at any other vertex survives.
pub fn rewire_force_selfloop(m: &Matching, s: HalfEdge, t: HalfEdge) -> Result<Matching> {
    if s.vertex != t.vertex {
        return Err(Error::InvalidCoupling(format!(
            "self-loop half-edges {s} and {t} sit on different vertices"
        )));
    }
    if s == t {
        return Err(Error::InvalidCoupling(format!("half-edge {s} cannot pair with itself")));
    }
    let (model, mut partner) = m.to_raw_undirected()?;
    let (Some(i), Some(j)) = (model.first.index(s), model.first.index(t)) else {
        return Err(Error::InvalidCoupling(format!("{s} or {t} is not a half-edge of this matching")));
    };
    force_pair(&mut partner, i, j);
    Ok(model.matching(&partner))
}

/// Rewires `m` so that `(s1, t1)` and `(s2, t2)` are both edges, forming a
/// double edge between the vertex of `s1, s2` and the vertex of `t1, t2`.
///
/// All edges through the four half-edges are broken; the freed half-edges
/// are paired uniformly at random. Applied to a uniform matching, the output
/// is uniform among matchings containing both pairs.
pub fn rewire_force_double<R: Rng + ?Sized>(
    m: &Matching,
    s1: HalfEdge,
    t1: HalfEdge,
    s2: HalfEdge,
    t2: HalfEdge,
    rng: &mut R,
) -> Result<Matching> {
    if s1.vertex != s2.vertex || t1.vertex != t2.vertex {
        return Err(Error::InvalidCoupling(
            "s1, s2 must share a vertex and t1, t2 must share a vertex".into(),
        ));
    }
    if s1.vertex == t1.vertex {
        return Err(Error::InvalidCoupling("a double edge needs two distinct vertices".into()));
    }
    if s1.slot >= s2.slot {
        return Err(Error::InvalidCoupling(format!("expected s1 < s2 in slot order, got {s1} and {s2}")));
    }
    if t1 == t2 {
        return Err(Error::InvalidCoupling(format!("t1 and t2 are both {t1}")));
    }
    let (model, mut partner) = m.to_raw_undirected()?;
    let idx = |h: HalfEdge| {
        model
            .first
            .index(h)
            .ok_or_else(|| Error::InvalidCoupling(format!("{h} is not a half-edge of this matching")))
    };
    let target = DoubleTarget {
        s1: idx(s1)?,
        t1: idx(t1)?,
        s2: idx(s2)?,
        t2: idx(t2)?,
    };
    let choices = double_outcome_count(&partner, &target);
    let choice = if choices > 1 { rng.random_range(0..choices) } else { 0 };
    apply_double(&mut partner, &target, choice);
    Ok(model.matching(&partner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degseq::Degrees;
    use crate::rng::RngStream;

    fn he(v: u32, s: u32) -> HalfEdge {
        HalfEdge::new(v, s)
    }

    #[test]
    fn forcing_self_loop_on_double_edge() {
        let d = Degrees::new(vec![2, 2]).unwrap();
        let m = Matching::from_pairs(&d, &[(he(0, 0), he(1, 0)), (he(0, 1), he(1, 1))]).unwrap();
        let out = rewire_force_selfloop(&m, he(0, 0), he(0, 1)).unwrap();
        assert_eq!(out.pairs(), &[(he(0, 0), he(0, 1)), (he(1, 0), he(1, 1))]);
    }

    #[test]
    fn forcing_present_self_loop_is_identity() {
        let d = Degrees::new(vec![2, 2]).unwrap();
        let m = Matching::from_pairs(&d, &[(he(0, 0), he(0, 1)), (he(1, 0), he(1, 1))]).unwrap();
        assert_eq!(rewire_force_selfloop(&m, he(0, 1), he(0, 0)).unwrap(), m);
    }

    #[test]
    fn self_loop_errors() {
        let d = Degrees::new(vec![2, 2]).unwrap();
        let m = Matching::from_pairs(&d, &[(he(0, 0), he(0, 1)), (he(1, 0), he(1, 1))]).unwrap();
        assert!(matches!(rewire_force_selfloop(&m, he(0, 0), he(1, 0)), Err(Error::InvalidCoupling(_))));
        assert!(matches!(rewire_force_selfloop(&m, he(0, 0), he(0, 0)), Err(Error::InvalidCoupling(_))));
        assert!(matches!(rewire_force_selfloop(&m, he(0, 0), he(0, 5)), Err(Error::InvalidCoupling(_))));
    }

    #[test]
    fn forcing_double_edge_from_two_self_loops() {
        let d = Degrees::new(vec![2, 2]).unwrap();
        let m = Matching::from_pairs(&d, &[(he(0, 0), he(0, 1)), (he(1, 0), he(1, 1))]).unwrap();
        let mut rng = RngStream::new(1, 0).rng();
        let out = rewire_force_double(&m, he(0, 0), he(1, 0), he(0, 1), he(1, 1), &mut rng).unwrap();
        assert_eq!(out.pairs(), &[(he(0, 0), he(1, 0)), (he(0, 1), he(1, 1))]);
        let again = rewire_force_double(&out, he(0, 0), he(1, 0), he(0, 1), he(1, 1), &mut rng).unwrap();
        assert_eq!(again, out);
    }

    #[test]
    fn double_edge_errors() {
        let d = Degrees::new(vec![2, 2]).unwrap();
        let m = Matching::from_pairs(&d, &[(he(0, 0), he(0, 1)), (he(1, 0), he(1, 1))]).unwrap();
        let mut rng = RngStream::new(1, 0).rng();
        let mut attempt = |a, b, c, e| rewire_force_double(&m, a, b, c, e, &mut rng);
        assert!(attempt(he(0, 1), he(1, 0), he(0, 0), he(1, 1)).is_err());
        assert!(attempt(he(0, 0), he(0, 1), he(0, 1), he(0, 0)).is_err());
        assert!(attempt(he(0, 0), he(1, 0), he(0, 1), he(1, 0)).is_err());
        assert!(attempt(he(0, 0), he(1, 0), he(1, 1), he(1, 1)).is_err());
    }
}
