//! Closed-form means, C-free Stein factors, simplicity and graph-count
//! estimates, and CLT standardization.
//!
//! Every mean is exact. A mean whose denominator vanishes or turns negative
//! for tiny instances is reported as `None` rather than as a float artifact.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::degseq::{
    bipartite_moments, compute_moments, directed_moments, factorial_sums, BipartiteDegrees, DegreeSequence,
    Degrees, DirectedDegrees, Flavor,
};
use crate::error::{Error, Result};
use crate::exact::{falling, ln_matchings_count, ratio, to_f64, Exact, Rational};
use crate::exact_law::ExactLaw;
use crate::pairing::EnumerationCap;

/// `(lambda_S, lambda_M)`; `lambda_M` is `None` when `ell < 4`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LambdaPair {
    pub lambda_s: Exact,
    pub lambda_m: Option<Exact>,
}

/// `sum_{i<j} a_i a_j = ((sum a)^2 - sum a^2) / 2`.
fn pair_product_sum(sum: u128, sum_sq: u128) -> BigInt {
    (BigInt::from(sum) * BigInt::from(sum) - BigInt::from(sum_sq)) / 2
}

pub fn lambda_pair(d: &Degrees) -> LambdaPair {
    let ell = BigInt::from(d.total());
    let (sums, sq) = factorial_sums(d.as_slice());
    let lambda_s = Exact::new(BigInt::from(sums[1]), 2 * (&ell - 1));
    let lambda_m = (d.total() >= 4).then(|| {
        let num = pair_product_sum(sums[1], sq);
        Exact::new(num, 2 * (&ell - 1) * (&ell - 3))
    });
    LambdaPair { lambda_s, lambda_m }
}

/// `lambda_M` restricted to pairs of vertices with both degrees at most `m_cut`.
pub fn lambda_truncated(d: &Degrees, m_cut: u32) -> Option<Exact> {
    if d.total() < 4 {
        return None;
    }
    let kept: Vec<u32> = d.as_slice().iter().copied().filter(|&x| x <= m_cut).collect();
    let (sums, sq) = factorial_sums(&kept);
    let ell = BigInt::from(d.total());
    Some(Exact::new(pair_product_sum(sums[1], sq), 2 * (&ell - 1) * (&ell - 3)))
}

/// `(hat lambda_S, hat lambda_M)`; `hat lambda_M` is `None` when `hat ell < 2`.
pub fn lambda_directed(d: &DirectedDegrees) -> LambdaPair {
    let ell = d.total();
    let s: u128 = d
        .in_degrees()
        .iter()
        .zip(d.out_degrees())
        .map(|(&a, &b)| u128::from(a) * u128::from(b))
        .sum();
    let lambda_s = Exact::new(BigInt::from(s), ell);
    let lambda_m = (ell >= 2).then(|| {
        let a: Vec<u128> = d.in_degrees().iter().map(|&x| falling(x.into(), 2)).collect();
        let b: Vec<u128> = d.out_degrees().iter().map(|&x| falling(x.into(), 2)).collect();
        let diag: u128 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        let num = BigInt::from(a.iter().sum::<u128>()) * BigInt::from(b.iter().sum::<u128>()) - BigInt::from(diag);
        let ell = BigInt::from(ell);
        Exact::new(num, 2 * &ell * (&ell - 1))
    });
    LambdaPair { lambda_s, lambda_m }
}

/// `bar lambda_M = sum_{i,j} (d_i^l)_2 (d_j^r)_2 / (2 ell (ell - 1))`, or
/// `None` when `bar ell < 2`.
pub fn lambda_bipartite(d: &BipartiteDegrees) -> Option<Exact> {
    let ell = d.total();
    if ell < 2 {
        return None;
    }
    let (l, _) = factorial_sums(d.left());
    let (r, _) = factorial_sums(d.right());
    let ell = BigInt::from(ell);
    Some(Exact::new(BigInt::from(l[1]) * BigInt::from(r[1]), 2 * &ell * (&ell - 1)))
}

/// Stein factors without the universal constant. A factor is `None` when
/// the mean it depends on is undefined or the model has no such statistic.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SteinBounds {
    pub bound_s: Option<Exact>,
    pub bound_m: Option<Exact>,
    pub bound_sum: Option<Exact>,
}

impl SteinBounds {
    /// The factors multiplied by a user-supplied constant.
    pub fn scaled(&self, c: f64) -> [Option<f64>; 3] {
        [&self.bound_s, &self.bound_m, &self.bound_sum].map(|b| b.as_ref().map(|b| c * b.value()))
    }
}

fn max_one(x: &Rational) -> Rational {
    if *x > Rational::one() {
        x.clone()
    } else {
        Rational::one()
    }
}

fn factor(numerator: &Rational, ell: u64, lambda: &Rational) -> Exact {
    Exact(numerator / (Rational::from_integer(ell.into()) * max_one(lambda)))
}

pub fn stein_bounds(d: &DegreeSequence) -> SteinBounds {
    match d {
        DegreeSequence::Undirected(d) => {
            let mom = compute_moments(d);
            let ell = d.total();
            let nu = mom.nu.0.clone();
            let mu3 = mom.mu(3).0.clone();
            let half_nu = &nu / Rational::from_integer(2.into());
            let bound_s = factor(&(&nu * &nu), ell, &half_nu);
            let lambdas = lambda_pair(d);
            let nu2 = &nu * &nu;
            let numerator = &mu3 * &mu3 + &nu2 * &nu2;
            let bound_m = lambdas.lambda_m.as_ref().map(|lm| factor(&numerator, ell, lm));
            let bound_sum = lambdas
                .lambda_m
                .as_ref()
                .map(|lm| factor(&numerator, ell, &(&lambdas.lambda_s.0 + &lm.0)));
            SteinBounds {
                bound_s: Some(bound_s),
                bound_m,
                bound_sum,
            }
        }
        DegreeSequence::Directed(d) => {
            let (min, mout) = directed_moments(d);
            let ell = d.total();
            let lambdas = lambda_directed(d);
            let ls = &lambdas.lambda_s.0;
            let bound_s = factor(&(ls * ls), ell, ls);
            let mixed = &min.mu(3).0 * &mout.mu(3).0;
            let bound_m = lambdas.lambda_m.as_ref().map(|lm| factor(&(&mixed + &lm.0 * &lm.0), ell, lm));
            let bound_sum = lambdas
                .lambda_m
                .as_ref()
                .map(|lm| factor(&(&mixed + &lm.0 * &lm.0), ell, &(ls + &lm.0)));
            SteinBounds {
                bound_s: Some(bound_s),
                bound_m,
                bound_sum,
            }
        }
        DegreeSequence::Bipartite(d) => {
            let (ml, mr) = bipartite_moments(d);
            let mixed = &ml.mu(3).0 * &mr.mu(3).0;
            let bound_m = lambda_bipartite(d).map(|lm| factor(&(&mixed + &lm.0 * &lm.0), d.total(), &lm.0));
            SteinBounds {
                bound_s: None,
                bound_sum: bound_m.clone(),
                bound_m,
            }
        }
    }
}

/// `(lambda_S, lambda_M)` for any flavor, with `lambda_S = 0` for the
/// bipartite model.
pub fn flavor_lambdas(d: &DegreeSequence) -> LambdaPair {
    match d {
        DegreeSequence::Undirected(d) => lambda_pair(d),
        DegreeSequence::Directed(d) => lambda_directed(d),
        DegreeSequence::Bipartite(d) => LambdaPair {
            lambda_s: Exact(Rational::zero()),
            lambda_m: lambda_bipartite(d),
        },
    }
}

/// `exp(-lambda_S - lambda_M)` for the flavor of `d`.
pub fn simplicity_estimate(d: &DegreeSequence) -> Result<f64> {
    let l = flavor_lambdas(d);
    let lm = l
        .lambda_m
        .ok_or_else(|| Error::Undefined(format!("lambda_M at total degree {}", d.total())))?;
    Ok((-(l.lambda_s.value() + lm.value())).exp())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphCountEstimate {
    /// `ln N_n(d) ~ -lambda_S - lambda_M + ln (ell - 1)!! - sum ln d_i!`.
    pub log_estimate: f64,
    /// Exact number of simple graphs, when enumeration fits the cap.
    #[serde(serialize_with = "serialize_opt_biguint")]
    pub exact: Option<BigUint>,
}

fn serialize_opt_biguint<S: serde::Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

/// Estimated number of simple graphs with degrees `d`. For `ell < 4` no two
/// edges exist, so `M_n = 0` and `lambda_M` is taken as zero here.
pub fn graph_count_estimate(d: &Degrees, cap: EnumerationCap) -> Result<GraphCountEstimate> {
    use statrs::function::factorial::ln_factorial;
    let l = lambda_pair(d);
    let lm = l.lambda_m.map(|x| x.value()).unwrap_or(0.0);
    let log_estimate = -l.lambda_s.value() - lm + ln_matchings_count(d.total())
        - d.as_slice().iter().map(|&x| ln_factorial(x.into())).sum::<f64>();
    let seq: DegreeSequence = d.clone().into();
    let exact = match ExactLaw::compute(&seq, cap) {
        Ok(law) => Some(law.graph_count()),
        Err(Error::TooLarge { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(GraphCountEstimate { log_estimate, exact })
}

/// `(stat - center) / sqrt(scale)`.
pub fn standardized_score(stat: u64, center: f64, scale: f64) -> Result<f64> {
    if scale.is_nan() || scale <= 0.0 {
        return Err(Error::Undefined(format!("standardized score with scale {scale}")));
    }
    Ok((stat as f64 - center) / scale.sqrt())
}

/// Everything `limits` knows about one sequence, ready for serialization.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitReport {
    pub flavor: Flavor,
    pub lambda_s: Option<Exact>,
    pub lambda_m: Option<Exact>,
    pub bounds: SteinBounds,
    pub p_simple_est: Option<f64>,
    pub log_count_est: Option<f64>,
    /// `chi_n` and the approximation `nu_n^2 / 4 - chi_n` of `lambda_M`,
    /// undirected only.
    pub chi: Option<Exact>,
    pub lambda_m_approx: Option<Exact>,
}

pub fn limit_report(d: &DegreeSequence) -> LimitReport {
    let lambdas = flavor_lambdas(d);
    let bounds = stein_bounds(d);
    let p_simple_est = simplicity_estimate(d).ok();
    let (log_count_est, chi, lambda_m_approx) = match d {
        DegreeSequence::Undirected(u) => {
            let mom = compute_moments(u);
            let approx = mom
                .chi
                .as_ref()
                .map(|c| Exact(&mom.nu.0 * &mom.nu.0 / Rational::from_integer(4.into()) - &c.0));
            let log = graph_count_estimate(u, EnumerationCap { undirected: 0, bijective: 0 })
                .ok()
                .map(|g| g.log_estimate);
            (log, mom.chi, approx)
        }
        _ => (None, None, None),
    };
    LimitReport {
        flavor: d.flavor(),
        lambda_s: (d.flavor() != Flavor::Bipartite).then_some(lambdas.lambda_s),
        lambda_m: lambdas.lambda_m,
        bounds,
        p_simple_est,
        log_count_est,
        chi,
        lambda_m_approx,
    }
}

/// `|2 lambda_S / nu - 1|`, the relative gap between `lambda_S` and `nu/2`.
pub fn self_loop_mean_gap(d: &Degrees) -> Option<f64> {
    let nu = compute_moments(d).nu;
    if nu.0.is_zero() {
        return None;
    }
    let l = lambda_pair(d).lambda_s;
    Some(to_f64(&(ratio(2, 1) * &l.0 / &nu.0 - Rational::one())).abs())
}
