//! Half-edge pairings: uniform samplers for the three models, exhaustive
//! enumeration, the rewiring couplings, and edge multiplicities.
//!
//! Vertices and slots are zero-based in the API. The text dump format is
//! one-based (`vertex:slot`).

mod enumerate;
mod rewire;

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::degseq::{BipartiteDegrees, DegreeSequence, Degrees, DirectedDegrees, Flavor};
use crate::error::{Error, Result};

pub use enumerate::{
    check_cap, enumerate_matchings, enumeration_size, EnumerationCap, MatchingEnumeration,
};
pub use rewire::{rewire_force_double, rewire_force_selfloop};

pub(crate) use enumerate::RawCursor;
pub(crate) use rewire::{apply_double, double_outcome_count, force_pair, DoubleTarget};

/// Which side of the model a half-edge sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plain,
    In,
    Out,
    Left,
    Right,
}

/// A degree stub: slot `slot` of vertex `vertex`. Ordering is
/// `(vertex, slot)` lexicographic within a side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HalfEdge {
    pub vertex: u32,
    pub slot: u32,
    pub side: Side,
}

impl HalfEdge {
    pub fn new(vertex: u32, slot: u32) -> Self {
        HalfEdge {
            vertex,
            slot,
            side: Side::Plain,
        }
    }

    pub fn on(side: Side, vertex: u32, slot: u32) -> Self {
        HalfEdge { vertex, slot, side }
    }
}

impl fmt::Display for HalfEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.vertex + 1, self.slot + 1)
    }
}

/// Global numbering of the half-edges of one side: vertex `v` owns indices
/// `offsets[v]..offsets[v + 1]`.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    offsets: Vec<u32>,
    owner: Vec<u32>,
    side: Side,
}

impl Layout {
    pub(crate) fn new(degrees: &[u32], side: Side) -> Self {
        let mut offsets = Vec::with_capacity(degrees.len() + 1);
        let mut owner = Vec::new();
        offsets.push(0);
        for (v, &d) in degrees.iter().enumerate() {
            owner.extend(std::iter::repeat_n(v as u32, d as usize));
            offsets.push(owner.len() as u32);
        }
        Layout {
            offsets,
            owner,
            side,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.owner.len()
    }

    pub(crate) fn vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub(crate) fn owner(&self, h: usize) -> u32 {
        self.owner[h]
    }

    pub(crate) fn degree(&self, v: usize) -> u32 {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub(crate) fn index(&self, he: HalfEdge) -> Option<usize> {
        let v = he.vertex as usize;
        (v < self.vertices() && he.slot < self.degree(v))
            .then(|| (self.offsets[v] + he.slot) as usize)
    }

    pub(crate) fn half_edge(&self, h: usize) -> HalfEdge {
        let v = self.owner[h];
        HalfEdge::on(self.side, v, h as u32 - self.offsets[v as usize])
    }
}

/// The two half-edge layouts of a model plus the rules for turning a raw
/// pairing into a [`Matching`] or [`EdgeCounts`].
///
/// A raw pairing is a partner array over all half-edges for the undirected
/// model, and a map from first-side to second-side half-edges otherwise.
#[derive(Clone, Debug)]
pub(crate) struct Model {
    pub(crate) flavor: Flavor,
    pub(crate) first: Layout,
    pub(crate) second: Layout,
}

impl Model {
    pub(crate) fn new(d: &DegreeSequence) -> Self {
        match d {
            DegreeSequence::Undirected(d) => {
                let layout = Layout::new(d.as_slice(), Side::Plain);
                Model {
                    flavor: Flavor::Undirected,
                    second: layout.clone(),
                    first: layout,
                }
            }
            DegreeSequence::Directed(d) => Model {
                flavor: Flavor::Directed,
                first: Layout::new(d.in_degrees(), Side::In),
                second: Layout::new(d.out_degrees(), Side::Out),
            },
            DegreeSequence::Bipartite(d) => Model {
                flavor: Flavor::Bipartite,
                first: Layout::new(d.left(), Side::Left),
                second: Layout::new(d.right(), Side::Right),
            },
        }
    }

    pub(crate) fn raw_len(&self) -> usize {
        self.first.len()
    }

    pub(crate) fn matching(&self, raw: &[u32]) -> Matching {
        let pairs = match self.flavor {
            Flavor::Undirected => raw
                .iter()
                .enumerate()
                .filter(|&(h, &p)| h < p as usize)
                .map(|(h, &p)| (self.first.half_edge(h), self.first.half_edge(p as usize)))
                .collect(),
            _ => raw
                .iter()
                .enumerate()
                .map(|(h, &p)| (self.first.half_edge(h), self.second.half_edge(p as usize)))
                .collect(),
        };
        Matching {
            flavor: self.flavor,
            vertices: (self.first.vertices(), self.second.vertices()),
            pairs,
        }
    }

    pub(crate) fn fill_keys(&self, raw: &[u32], keys: &mut Vec<(u32, u32)>) {
        keys.clear();
        match self.flavor {
            Flavor::Undirected => {
                for (h, &p) in raw.iter().enumerate() {
                    if h < p as usize {
                        let (a, b) = (self.first.owner(h), self.first.owner(p as usize));
                        keys.push((a.min(b), a.max(b)));
                    }
                }
            }
            // in-half-edge at `a` paired with out-half-edge at `b` is the edge b -> a
            Flavor::Directed => keys.extend(
                raw.iter()
                    .enumerate()
                    .map(|(h, &p)| (self.second.owner(p as usize), self.first.owner(h))),
            ),
            Flavor::Bipartite => keys.extend(
                raw.iter()
                    .enumerate()
                    .map(|(h, &p)| (self.first.owner(h), self.second.owner(p as usize))),
            ),
        }
    }

    pub(crate) fn counts(&self, raw: &[u32], keys: &mut Vec<(u32, u32)>) -> EdgeCounts {
        self.fill_keys(raw, keys);
        EdgeCounts::from_keys(
            self.flavor,
            (self.first.vertices(), self.second.vertices()),
            keys,
        )
    }
}

/// A perfect pairing of half-edges, stored canonically: each pair with its
/// smaller (or first-side) half-edge first, pairs sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Matching {
    flavor: Flavor,
    vertices: (usize, usize),
    pairs: Vec<(HalfEdge, HalfEdge)>,
}

impl Matching {
    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn pairs(&self) -> &[(HalfEdge, HalfEdge)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Vertex counts of the first and second side (equal when undirected).
    pub fn vertices(&self) -> (usize, usize) {
        self.vertices
    }

    pub fn contains(&self, a: HalfEdge, b: HalfEdge) -> bool {
        let key = if self.flavor == Flavor::Undirected && b < a { (b, a) } else { (a, b) };
        self.pairs.binary_search(&key).is_ok()
    }

    /// Builds an undirected matching from explicit pairs, validating that
    /// every half-edge of `degrees` appears exactly once.
    pub fn from_pairs(degrees: &Degrees, pairs: &[(HalfEdge, HalfEdge)]) -> Result<Self> {
        let model = Model::new(&DegreeSequence::Undirected(degrees.clone()));
        let mut partner = vec![u32::MAX; model.raw_len()];
        for &(a, b) in pairs {
            let (Some(i), Some(j)) = (model.first.index(a), model.first.index(b)) else {
                return Err(Error::InvalidArgument(format!("pair ({a}, {b}) names a missing half-edge")));
            };
            if i == j || partner[i] != u32::MAX || partner[j] != u32::MAX {
                return Err(Error::InvalidArgument(format!("half-edge reused in pair ({a}, {b})")));
            }
            partner[i] = j as u32;
            partner[j] = i as u32;
        }
        if partner.contains(&u32::MAX) {
            return Err(Error::InvalidArgument("pairs do not cover every half-edge".into()));
        }
        Ok(model.matching(&partner))
    }

    /// Recovers the degree sequence and raw partner array of an undirected
    /// matching.
    pub(crate) fn to_raw_undirected(&self) -> Result<(Model, Vec<u32>)> {
        if self.flavor != Flavor::Undirected {
            return Err(Error::FlavorMismatch {
                expected: "cm",
                found: self.flavor.name(),
            });
        }
        let mut degrees = vec![0u32; self.vertices.0];
        for &(a, b) in &self.pairs {
            degrees[a.vertex as usize] += 1;
            degrees[b.vertex as usize] += 1;
        }
        let model = Model::new(&DegreeSequence::Undirected(Degrees::new(degrees)?));
        let mut partner = vec![0u32; model.raw_len()];
        for &(a, b) in &self.pairs {
            let i = model.first.index(a).ok_or_else(|| Error::InvalidArgument(format!("bad half-edge {a}")))?;
            let j = model.first.index(b).ok_or_else(|| Error::InvalidArgument(format!("bad half-edge {b}")))?;
            partner[i] = j as u32;
            partner[j] = i as u32;
        }
        Ok((model, partner))
    }

    /// One `vertex:slot vertex:slot` line per pair, in canonical order.
    pub fn dump(&self) -> String {
        let mut out = String::with_capacity(self.pairs.len() * 12);
        for (a, b) in &self.pairs {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }
}

/// Sparse edge multiplicities `X_ij`, sorted by key.
///
/// Keys are `(i, j)` with `i <= j` for the undirected model (`X_ii` counts
/// self-loops), `(from, to)` for the directed model, and `(left, right)` for
/// the bipartite model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCounts {
    flavor: Flavor,
    vertices: (usize, usize),
    entries: Vec<((u32, u32), u32)>,
}

impl EdgeCounts {
    pub(crate) fn from_keys(flavor: Flavor, vertices: (usize, usize), keys: &mut [(u32, u32)]) -> Self {
        keys.sort_unstable();
        let mut entries: Vec<((u32, u32), u32)> = Vec::with_capacity(keys.len());
        for &key in keys.iter() {
            match entries.last_mut() {
                Some((k, x)) if *k == key => *x += 1,
                _ => entries.push((key, 1)),
            }
        }
        EdgeCounts {
            flavor,
            vertices,
            entries,
        }
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn vertices(&self) -> (usize, usize) {
        self.vertices
    }

    pub fn get(&self, i: u32, j: u32) -> u32 {
        let key = if self.flavor == Flavor::Undirected { (i.min(j), i.max(j)) } else { (i, j) };
        self.entries
            .binary_search_by_key(&key, |&(k, _)| k)
            .map_or(0, |idx| self.entries[idx].1)
    }

    /// Nonzero entries in key order.
    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), u32)> + '_ {
        self.entries.iter().copied()
    }

    pub fn num_edges(&self) -> u64 {
        self.entries.iter().map(|&(_, x)| u64::from(x)).sum()
    }

    /// Degrees implied by an undirected multiplicity map:
    /// `d_i = 2 X_ii + sum_{j != i} X_ij`.
    pub fn implied_degrees(&self) -> Vec<u32> {
        let mut d = vec![0u32; self.vertices.0];
        for ((i, j), x) in self.iter() {
            if i == j {
                d[i as usize] += 2 * x;
            } else {
                d[i as usize] += x;
                d[j as usize] += x;
            }
        }
        d
    }
}

/// Multiplicities `X_ij` of a matching.
pub fn edge_counts(m: &Matching) -> EdgeCounts {
    let mut keys: Vec<(u32, u32)> = m
        .pairs
        .iter()
        .map(|&(a, b)| match m.flavor {
            Flavor::Undirected => (a.vertex.min(b.vertex), a.vertex.max(b.vertex)),
            Flavor::Directed => (b.vertex, a.vertex),
            Flavor::Bipartite => (a.vertex, b.vertex),
        })
        .collect();
    EdgeCounts::from_keys(m.flavor, m.vertices, &mut keys)
}

/// Erases self-loops and merges multiple edges. Returns the simple graph
/// and the number of removed edges `R_n`.
pub fn erase(counts: &EdgeCounts) -> Result<(EdgeCounts, u64)> {
    if counts.flavor != Flavor::Undirected {
        return Err(Error::FlavorMismatch {
            expected: "cm",
            found: counts.flavor.name(),
        });
    }
    let mut removed = 0u64;
    let mut entries = Vec::with_capacity(counts.entries.len());
    for &((i, j), x) in &counts.entries {
        if i == j {
            removed += u64::from(x);
        } else {
            removed += u64::from(x - 1);
            entries.push(((i, j), 1));
        }
    }
    Ok((
        EdgeCounts {
            flavor: Flavor::Undirected,
            vertices: counts.vertices,
            entries,
        },
        removed,
    ))
}

/// Reusable sampler holding the half-edge layout and scratch buffers, so
/// repeated draws do not reallocate.
#[derive(Clone, Debug)]
pub struct Sampler {
    model: Model,
    raw: Vec<u32>,
    pool: Vec<u32>,
    pos: Vec<u32>,
    keys: Vec<(u32, u32)>,
}

const UNSET: u32 = u32::MAX;

impl Sampler {
    pub fn new(d: &DegreeSequence) -> Self {
        let model = Model::new(d);
        let len = model.raw_len();
        Sampler {
            model,
            raw: vec![0; len],
            pool: Vec::with_capacity(len),
            pos: vec![0; len],
            keys: Vec::with_capacity(len),
        }
    }

    pub fn flavor(&self) -> Flavor {
        self.model.flavor
    }

    /// Draws a raw pairing into the internal buffer.
    ///
    /// Undirected: the lowest unmatched half-edge is paired with a uniform
    /// choice among the remaining unmatched ones, which is uniform over all
    /// `(ell - 1)!!` matchings. Directed and bipartite: each first-side
    /// half-edge in turn takes a uniform unused second-side half-edge.
    pub(crate) fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> &[u32] {
        let len = self.raw.len();
        self.pool.clear();
        self.pool.extend(0..len as u32);
        match self.model.flavor {
            Flavor::Undirected => {
                for (i, p) in self.pos.iter_mut().enumerate() {
                    *p = i as u32;
                }
                for h in 0..len {
                    if self.pos[h] == UNSET {
                        continue;
                    }
                    remove_from_pool(&mut self.pool, &mut self.pos, h as u32);
                    let j = self.pool[rng.random_range(0..self.pool.len())];
                    remove_from_pool(&mut self.pool, &mut self.pos, j);
                    self.raw[h] = j;
                    self.raw[j as usize] = h as u32;
                }
            }
            Flavor::Directed | Flavor::Bipartite => {
                for h in 0..len {
                    let j = rng.random_range(h..len);
                    self.pool.swap(h, j);
                    self.raw[h] = self.pool[h];
                }
            }
        }
        &self.raw
    }

    pub fn sample_matching<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Matching {
        self.draw(rng);
        self.model.matching(&self.raw)
    }

    /// Draws a configuration and returns only its multiplicities.
    pub fn sample_counts<R: Rng + ?Sized>(&mut self, rng: &mut R) -> EdgeCounts {
        self.draw(rng);
        self.model.counts(&self.raw, &mut self.keys)
    }
}

fn remove_from_pool(pool: &mut Vec<u32>, pos: &mut [u32], v: u32) {
    let idx = pos[v as usize] as usize;
    let last = pool.pop().expect("pool is nonempty");
    if last != v {
        pool[idx] = last;
        pos[last as usize] = idx as u32;
    }
    pos[v as usize] = UNSET;
}

/// Uniform random matching of the configuration model.
pub fn sample_cm<R: Rng + ?Sized>(d: &Degrees, rng: &mut R) -> Matching {
    Sampler::new(&DegreeSequence::Undirected(d.clone())).sample_matching(rng)
}

/// Uniform bijection from in-half-edges to out-half-edges.
pub fn sample_dcm<R: Rng + ?Sized>(d: &DirectedDegrees, rng: &mut R) -> Matching {
    Sampler::new(&DegreeSequence::Directed(d.clone())).sample_matching(rng)
}

/// Uniform bijection from left half-edges to right half-edges.
pub fn sample_bcm<R: Rng + ?Sized>(d: &BipartiteDegrees, rng: &mut R) -> Matching {
    Sampler::new(&DegreeSequence::Bipartite(d.clone())).sample_matching(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn he(v: u32, s: u32) -> HalfEdge {
        HalfEdge::new(v, s)
    }

    #[test]
    fn single_vertex_degree_two_is_a_self_loop() {
        let d = Degrees::new(vec![2]).unwrap();
        let m = sample_cm(&d, &mut RngStream::new(1, 0).rng());
        assert_eq!(m.pairs(), &[(he(0, 0), he(0, 1))]);
        let x = edge_counts(&m);
        assert_eq!(x.get(0, 0), 1);
        assert_eq!(m.dump(), "1:1 1:2\n");
    }

    #[test]
    fn double_edge_counts() {
        let d = Degrees::new(vec![2, 2]).unwrap();
        let m = Matching::from_pairs(&d, &[(he(0, 0), he(1, 0)), (he(0, 1), he(1, 1))]).unwrap();
        let x = edge_counts(&m);
        assert_eq!(x.get(0, 1), 2);
        assert_eq!(x.get(1, 0), 2);
        assert_eq!(x.get(0, 0), 0);
        let (simple, removed) = erase(&x).unwrap();
        assert_eq!(removed, 1);
        assert_eq!(simple.get(0, 1), 1);
    }

    #[test]
    fn erase_self_loop_and_simple_graphs() {
        let d = Degrees::new(vec![2]).unwrap();
        let x = edge_counts(&sample_cm(&d, &mut RngStream::new(3, 0).rng()));
        let (simple, removed) = erase(&x).unwrap();
        assert_eq!(removed, 1);
        assert_eq!(simple.num_edges(), 0);

        let d = Degrees::new(vec![1, 1]).unwrap();
        let x = edge_counts(&sample_cm(&d, &mut RngStream::new(3, 0).rng()));
        let (simple, removed) = erase(&x).unwrap();
        assert_eq!(removed, 0);
        assert_eq!(simple, x);
    }

    #[test]
    fn directed_cycle_counts() {
        let d = DirectedDegrees::new(vec![1, 1], vec![1, 1]).unwrap();
        let model = Model::new(&d.into());
        // in-half-edge of vertex 0 takes the out-half-edge of vertex 1 and vice versa
        let m = model.matching(&[1, 0]);
        let x = edge_counts(&m);
        assert_eq!(x.get(0, 1), 1);
        assert_eq!(x.get(1, 0), 1);
        assert_eq!(x.get(0, 0), 0);
    }

    #[test]
    fn forced_directed_and_bipartite_outcomes() {
        let one = DirectedDegrees::new(vec![1], vec![1]).unwrap();
        let x = edge_counts(&sample_dcm(&one, &mut RngStream::new(5, 0).rng()));
        assert_eq!(x.get(0, 0), 1);

        let two = DirectedDegrees::new(vec![2], vec![2]).unwrap();
        for i in 0..5 {
            let x = edge_counts(&sample_dcm(&two, &mut RngStream::new(5, i).rng()));
            assert_eq!(x.get(0, 0), 2);
        }

        let b = BipartiteDegrees::new(vec![2], vec![2]).unwrap();
        let x = edge_counts(&sample_bcm(&b, &mut RngStream::new(5, 0).rng()));
        assert_eq!(x.get(0, 0), 2);

        let b = BipartiteDegrees::new(vec![1, 1], vec![2]).unwrap();
        let x = edge_counts(&sample_bcm(&b, &mut RngStream::new(5, 0).rng()));
        assert_eq!((x.get(0, 0), x.get(1, 0)), (1, 1));
    }

    #[test]
    fn sampler_paths_agree() {
        let d: DegreeSequence = Degrees::new(vec![3, 1, 4, 1, 5, 2]).unwrap().into();
        let mut sampler = Sampler::new(&d);
        let a = sampler.sample_matching(&mut RngStream::new(9, 2).rng());
        let b = sampler.sample_counts(&mut RngStream::new(9, 2).rng());
        assert_eq!(edge_counts(&a), b);
        assert_eq!(b.implied_degrees(), vec![3, 1, 4, 1, 5, 2]);
    }

    #[test]
    fn from_pairs_rejects_bad_input() {
        let d = Degrees::new(vec![2, 2]).unwrap();
        assert!(Matching::from_pairs(&d, &[(he(0, 0), he(1, 0))]).is_err());
        assert!(Matching::from_pairs(&d, &[(he(0, 0), he(0, 0)), (he(1, 0), he(1, 1))]).is_err());
        assert!(Matching::from_pairs(&d, &[(he(0, 0), he(3, 0)), (he(1, 0), he(1, 1))]).is_err());
    }
}
