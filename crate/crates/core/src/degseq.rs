//! Degree sequences for the undirected, directed and bipartite models, their
//! factorial-moment summaries, and the deterministic power-law construction.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{falling, Exact};

/// Which configuration model a degree sequence (and everything derived from
/// it) belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    #[serde(rename = "cm")]
    Undirected,
    #[serde(rename = "dcm")]
    Directed,
    #[serde(rename = "bcm")]
    Bipartite,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Undirected => "cm",
            Flavor::Directed => "dcm",
            Flavor::Bipartite => "bcm",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Undirected degrees `d_1..d_n`, all positive, with even total `ell_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Degrees {
    degrees: Vec<u32>,
    total: u64,
}

impl Degrees {
    pub fn new(degrees: Vec<u32>) -> Result<Self> {
        let total = checked_total(&degrees, "degree")?;
        if total % 2 == 1 {
            return Err(Error::OddTotalDegree(total));
        }
        Ok(Degrees { degrees, total })
    }

    pub fn regular(n: usize, r: u32) -> Result<Self> {
        Degrees::new(vec![r; n])
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// `ell_n`.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Caps every degree at `cap`. If capping leaves an odd total, one vertex
    /// sitting at the cap loses a half-edge, so the result never exceeds `cap`.
    pub fn truncated(&self, cap: u32) -> Result<Self> {
        if cap == 0 {
            return Err(Error::InvalidDegrees("degree cap must be positive".into()));
        }
        let mut degrees: Vec<u32> = self.degrees.iter().map(|&d| d.min(cap)).collect();
        let total: u64 = degrees.iter().map(|&d| u64::from(d)).sum();
        if total % 2 == 1 {
            let top = degrees.iter().copied().max().unwrap_or(0);
            if top < 2 {
                return Err(Error::OddTotalDegree(total));
            }
            if let Some(d) = degrees.iter_mut().rev().find(|d| **d == top) {
                *d -= 1;
            }
        }
        Degrees::new(degrees)
    }
}

/// Directed degrees: per-vertex `(in, out)` with equal totals `hat ell_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectedDegrees {
    in_degrees: Vec<u32>,
    out_degrees: Vec<u32>,
    total: u64,
}

impl DirectedDegrees {
    /// Each vertex needs at least one half-edge, on either side.
    pub fn new(in_degrees: Vec<u32>, out_degrees: Vec<u32>) -> Result<Self> {
        if in_degrees.len() != out_degrees.len() {
            return Err(Error::InvalidDegrees(format!(
                "{} in-degrees but {} out-degrees",
                in_degrees.len(),
                out_degrees.len()
            )));
        }
        if in_degrees.is_empty() {
            return Err(Error::InvalidDegrees("no vertices".into()));
        }
        if let Some(v) = (0..in_degrees.len()).find(|&v| in_degrees[v] == 0 && out_degrees[v] == 0) {
            return Err(Error::InvalidDegrees(format!("vertex {} has no half-edges", v + 1)));
        }
        let total_in: u64 = in_degrees.iter().map(|&d| u64::from(d)).sum();
        let total_out: u64 = out_degrees.iter().map(|&d| u64::from(d)).sum();
        if total_in != total_out {
            return Err(Error::UnbalancedSides {
                first_side: "in-degrees",
                first: total_in,
                second_side: "out-degrees",
                second: total_out,
            });
        }
        Ok(DirectedDegrees {
            in_degrees,
            out_degrees,
            total: total_in,
        })
    }

    pub fn in_degrees(&self) -> &[u32] {
        &self.in_degrees
    }

    pub fn out_degrees(&self) -> &[u32] {
        &self.out_degrees
    }

    pub fn len(&self) -> usize {
        self.in_degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.in_degrees.is_empty()
    }

    /// `hat ell_n`, the number of edges.
    pub fn total(&self) -> u64 {
        self.total
    }
}

/// Bipartite degrees for the left and right vertex classes, equal totals
/// `bar ell_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipartiteDegrees {
    left: Vec<u32>,
    right: Vec<u32>,
    total: u64,
}

impl BipartiteDegrees {
    pub fn new(left: Vec<u32>, right: Vec<u32>) -> Result<Self> {
        let total_left = checked_total(&left, "left degree")?;
        let total_right = checked_total(&right, "right degree")?;
        if total_left != total_right {
            return Err(Error::UnbalancedSides {
                first_side: "left degrees",
                first: total_left,
                second_side: "right degrees",
                second: total_right,
            });
        }
        Ok(BipartiteDegrees {
            left,
            right,
            total: total_left,
        })
    }

    pub fn left(&self) -> &[u32] {
        &self.left
    }

    pub fn right(&self) -> &[u32] {
        &self.right
    }

    /// `bar ell_n`, the number of edges.
    pub fn total(&self) -> u64 {
        self.total
    }
}

fn checked_total(degrees: &[u32], what: &str) -> Result<u64> {
    if degrees.is_empty() {
        return Err(Error::InvalidDegrees("no vertices".into()));
    }
    if let Some(v) = degrees.iter().position(|&d| d == 0) {
        return Err(Error::InvalidDegrees(format!("{what} of vertex {} is zero", v + 1)));
    }
    Ok(degrees.iter().map(|&d| u64::from(d)).sum())
}

/// Any of the three degree-sequence flavors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "flavor", rename_all = "lowercase")]
pub enum DegreeSequence {
    #[serde(rename = "cm")]
    Undirected(Degrees),
    #[serde(rename = "dcm")]
    Directed(DirectedDegrees),
    #[serde(rename = "bcm")]
    Bipartite(BipartiteDegrees),
}

impl DegreeSequence {
    pub fn flavor(&self) -> Flavor {
        match self {
            DegreeSequence::Undirected(_) => Flavor::Undirected,
            DegreeSequence::Directed(_) => Flavor::Directed,
            DegreeSequence::Bipartite(_) => Flavor::Bipartite,
        }
    }

    /// Number of half-edges on one side of the pairing: `ell_n` for the
    /// undirected model, the edge count otherwise.
    pub fn total(&self) -> u64 {
        match self {
            DegreeSequence::Undirected(d) => d.total(),
            DegreeSequence::Directed(d) => d.total(),
            DegreeSequence::Bipartite(d) => d.total(),
        }
    }

    pub fn as_undirected(&self) -> Result<&Degrees> {
        match self {
            DegreeSequence::Undirected(d) => Ok(d),
            other => Err(Error::FlavorMismatch {
                expected: "cm",
                found: other.flavor().name(),
            }),
        }
    }
}

impl From<Degrees> for DegreeSequence {
    fn from(d: Degrees) -> Self {
        DegreeSequence::Undirected(d)
    }
}

impl From<DirectedDegrees> for DegreeSequence {
    fn from(d: DirectedDegrees) -> Self {
        DegreeSequence::Directed(d)
    }
}

impl From<BipartiteDegrees> for DegreeSequence {
    fn from(d: BipartiteDegrees) -> Self {
        DegreeSequence::Bipartite(d)
    }
}

/// Factorial-moment summary of a degree list normalised by a total degree.
///
/// `mu[r - 1]` holds `mu_n^(r) = sum_i (d_i)_r / ell` for `r = 1..4`, so
/// `mu[0]` is exactly one whenever `ell` is the degree sum. `chi` is only
/// defined for undirected sequences with `ell >= 4`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentSummary {
    pub n: usize,
    pub ell: u64,
    pub mu: [Exact; 4],
    pub nu: Exact,
    pub chi: Option<Exact>,
    pub d_max: u32,
}

impl MomentSummary {
    /// `mu_n^(r)` for `r` in `1..=4`.
    pub fn mu(&self, r: usize) -> &Exact {
        &self.mu[r - 1]
    }
}

/// Sums `(d)_r` for `r = 1..4` and `[(d)_2]^2`, in 128-bit integers.
pub(crate) fn factorial_sums(degrees: &[u32]) -> ([u128; 4], u128) {
    let mut sums = [0u128; 4];
    let mut sq = 0u128;
    for &d in degrees {
        let d = u64::from(d);
        for (r, slot) in sums.iter_mut().enumerate() {
            *slot += falling(d, r as u32 + 1);
        }
        let f2 = falling(d, 2);
        sq += f2 * f2;
    }
    (sums, sq)
}

fn summarize(degrees: &[u32], ell: u64, with_chi: bool) -> MomentSummary {
    let (sums, sq) = factorial_sums(degrees);
    let den = BigInt::from(ell.max(1));
    let mu = sums.map(|s| Exact::new(BigInt::from(s), den.clone()));
    let chi = (with_chi && ell >= 4).then(|| {
        let ell = BigInt::from(ell);
        Exact::new(BigInt::from(sq), 4 * (&ell - 1) * (&ell - 3))
    });
    MomentSummary {
        n: degrees.len(),
        ell,
        nu: mu[1].clone(),
        mu,
        chi,
        d_max: degrees.iter().copied().max().unwrap_or(0),
    }
}

/// `ell_n`, `mu_n^(1..4)`, `nu_n`, `chi_n` and `d_max` of an undirected sequence.
pub fn compute_moments(d: &Degrees) -> MomentSummary {
    summarize(d.as_slice(), d.total(), true)
}

/// In- and out-side moments of a directed sequence, both over `hat ell_n`.
pub fn directed_moments(d: &DirectedDegrees) -> (MomentSummary, MomentSummary) {
    (
        summarize(d.in_degrees(), d.total(), false),
        summarize(d.out_degrees(), d.total(), false),
    )
}

/// Left- and right-side moments of a bipartite sequence, both over `bar ell_n`.
pub fn bipartite_moments(d: &BipartiteDegrees) -> (MomentSummary, MomentSummary) {
    (
        summarize(d.left(), d.total(), false),
        summarize(d.right(), d.total(), false),
    )
}

/// `F_n(x) = #{j : d_j <= x} / n`.
pub fn empirical_tail(degrees: &[u32], x: f64) -> f64 {
    if degrees.is_empty() {
        return 0.0;
    }
    let below = degrees.iter().filter(|&&d| f64::from(d) <= x).count();
    below as f64 / degrees.len() as f64
}

/// Parameters of the deterministic power-law sequence: `n` vertices, exponent
/// `tau > 1`, and tail constant `c` in `P(D >= k) = c k^-(tau-1)` for
/// `k >= 2` (clipped to `[0, 1]`; every degree is at least one).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLawSpec {
    pub n: usize,
    pub tau: f64,
    pub c: f64,
}

impl PowerLawSpec {
    pub fn new(n: usize, tau: f64, c: f64) -> Self {
        PowerLawSpec { n, tau, c }
    }

    /// Number of vertices with degree at least `k`: `n - ceil(n F(k - 1))`.
    pub fn count_at_least(&self, k: u64) -> u64 {
        if k <= 1 {
            return self.n as u64;
        }
        let survival = (self.c * (k as f64).powf(-(self.tau - 1.0))).clamp(0.0, 1.0);
        (self.n as f64 * survival).floor() as u64
    }
}

const MAX_POWERLAW_DEGREE: u64 = 1 << 28;

/// Builds `n_k = ceil(n F(k)) - ceil(n F(k - 1))` vertices of each degree `k`,
/// listed in nondecreasing order. An odd total is repaired by giving the last
/// maximum-degree vertex one more half-edge.
pub fn powerlaw_degrees(spec: &PowerLawSpec) -> Result<Degrees> {
    if !(spec.tau.is_finite() && spec.tau > 1.0) {
        return Err(Error::InvalidSpec(format!("tau must exceed 1, got {}", spec.tau)));
    }
    if !(spec.c.is_finite() && spec.c > 0.0) {
        return Err(Error::InvalidSpec(format!("c must be positive, got {}", spec.c)));
    }
    if spec.n == 0 {
        return Err(Error::InvalidSpec("n must be positive".into()));
    }
    // d_max grows like (n c)^(1/(tau-1)); refuse specs that would blow past u32.
    let predicted = (spec.n as f64 * spec.c).powf(1.0 / (spec.tau - 1.0));
    if predicted > MAX_POWERLAW_DEGREE as f64 {
        return Err(Error::InvalidSpec(format!(
            "maximum degree would be about {predicted:.3e}; lower n or c, or raise tau"
        )));
    }

    let mut degrees = Vec::with_capacity(spec.n);
    let mut k = 1u64;
    let mut at_least_k = spec.count_at_least(1);
    while at_least_k > 0 {
        let at_least_next = spec.count_at_least(k + 1).min(at_least_k);
        let n_k = at_least_k - at_least_next;
        degrees.extend(std::iter::repeat_n(k as u32, n_k as usize));
        at_least_k = at_least_next;
        k += 1;
    }

    let total: u64 = degrees.iter().map(|&d| u64::from(d)).sum();
    if total % 2 == 1 {
        if let Some(last) = degrees.last_mut() {
            *last += 1;
        }
    }
    Degrees::new(degrees)
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_degree(line: usize, field: &str) -> Result<u32> {
    field.trim().parse::<u32>().map_err(|e| Error::Parse {
        line,
        message: format!("cannot parse degree {:?}: {e}", field.trim()),
    })
}

/// Reads one integer degree per line. Blank lines and `#` comments are skipped.
pub fn parse_degrees(text: &str) -> Result<Degrees> {
    let mut degrees = Vec::new();
    for (line, content) in data_lines(text) {
        let d = parse_degree(line, content)?;
        if d == 0 {
            return Err(Error::Parse {
                line,
                message: "degrees must be positive".into(),
            });
        }
        degrees.push(d);
    }
    Degrees::new(degrees)
}

/// Reads `in,out` pairs, one vertex per line.
pub fn parse_directed(text: &str) -> Result<DirectedDegrees> {
    let mut ins = Vec::new();
    let mut outs = Vec::new();
    for (line, content) in data_lines(text) {
        let mut fields = content.split(',');
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                line,
                message: format!("expected `in,out`, got {content:?}"),
            });
        };
        ins.push(parse_degree(line, a)?);
        outs.push(parse_degree(line, b)?);
    }
    DirectedDegrees::new(ins, outs)
}

/// Reads the left and right classes of a bipartite sequence from two
/// one-degree-per-line texts.
pub fn parse_bipartite(left: &str, right: &str) -> Result<BipartiteDegrees> {
    let read = |text: &str| -> Result<Vec<u32>> {
        data_lines(text)
            .map(|(line, content)| {
                let d = parse_degree(line, content)?;
                if d == 0 {
                    Err(Error::Parse {
                        line,
                        message: "degrees must be positive".into(),
                    })
                } else {
                    Ok(d)
                }
            })
            .collect()
    };
    BipartiteDegrees::new(read(left)?, read(right)?)
}
