use std::fs;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use cmloops::degseq::{
    parse_bipartite, parse_degrees, parse_directed, powerlaw_degrees, BipartiteDegrees, DegreeSequence, Degrees,
    DirectedDegrees, Flavor, PowerLawSpec,
};
use cmloops::pairing::EnumerationCap;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FlavorArg {
    Cm,
    Dcm,
    Bcm,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::Cm => Flavor::Undirected,
            FlavorArg::Dcm => Flavor::Directed,
            FlavorArg::Bcm => Flavor::Bipartite,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Options shared by every subcommand.
#[derive(Clone, Debug, Args)]
pub struct CommonArgs {
    /// Degree file: one degree per line (cm), "in,out" per line (dcm), or the
    /// left side (bcm). Blank lines and lines starting with '#' are skipped.
    #[arg(long, value_name = "FILE", group = "source")]
    pub degrees: Option<PathBuf>,
    /// Right-side degree file for the bipartite model.
    #[arg(long, value_name = "FILE", requires = "degrees")]
    pub degrees_right: Option<PathBuf>,
    /// N vertices of degree R.
    #[arg(long, num_args = 2, value_names = ["N", "R"], group = "source")]
    pub regular: Option<Vec<u64>>,
    /// Deterministic power-law sequence with tail exponent TAU and constant C.
    #[arg(long, num_args = 3, value_names = ["N", "TAU", "C"], group = "source", allow_negative_numbers = true)]
    pub powerlaw: Option<Vec<f64>>,
    /// Cap every degree at D before use.
    #[arg(long, value_name = "D")]
    pub truncate: Option<u32>,
    #[arg(long, value_enum, default_value_t = FlavorArg::Cm)]
    pub flavor: FlavorArg,
    #[arg(long, default_value_t = 1000)]
    pub reps: u64,
    /// Master seed; overrides CMLOOPS_SEED.
    #[arg(long, env = "CMLOOPS_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Worker threads (defaults to all cores). Never changes the data.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output file (defaults to stdout).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Thinning probability for self-loops.
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// Thinning probability for multiple edges.
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    /// Only count multiple edges between vertices of degree at most M.
    #[arg(long, value_name = "M")]
    pub mcut: Option<u32>,
    /// Enumeration cap on the total degree (cm) or edge count (dcm, bcm).
    #[arg(long, value_name = "L")]
    pub cap: Option<u64>,
    /// Multiply the Stein factors by this constant.
    #[arg(long, value_name = "C")]
    pub stein_c: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DegreeSource {
    File { path: String, right: Option<String> },
    Regular { n: u64, r: u64 },
    Powerlaw { n: u64, tau: f64, c: f64 },
}

/// The full, echoed description of one run. Thread count is deliberately
/// absent: it is reported next to the config, never inside it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub source: DegreeSource,
    pub truncate: Option<u32>,
    pub flavor: FlavorArg,
    pub replicates: u64,
    pub seed: u64,
    pub format: Format,
    pub p: f64,
    pub q: f64,
    pub m_cut: Option<u32>,
    pub cap: Option<u64>,
    pub stein_c: Option<f64>,
}

impl ExperimentConfig {
    pub fn from_args(a: &CommonArgs) -> Result<Self, CliError> {
        let source = if let Some(path) = &a.degrees {
            DegreeSource::File {
                path: path.display().to_string(),
                right: a.degrees_right.as_ref().map(|p| p.display().to_string()),
            }
        } else if let Some(v) = &a.regular {
            DegreeSource::Regular { n: v[0], r: v[1] }
        } else if let Some(v) = &a.powerlaw {
            if v[0] < 1.0 || v[0].fract() != 0.0 {
                return Err(CliError::invalid(format!("power-law N must be a positive integer, got {}", v[0])));
            }
            DegreeSource::Powerlaw {
                n: v[0] as u64,
                tau: v[1],
                c: v[2],
            }
        } else {
            return Err(CliError::invalid("one of --degrees, --regular or --powerlaw is required"));
        };
        if a.reps == 0 {
            return Err(CliError::invalid("--reps must be at least 1"));
        }
        for (name, v) in [("--p", a.p), ("--q", a.q)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(CliError::invalid(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        if a.flavor == FlavorArg::Bcm && matches!(source, DegreeSource::File { right: None, .. }) {
            return Err(CliError::invalid("the bipartite model needs --degrees-right"));
        }
        if a.threads == Some(0) {
            return Err(CliError::invalid("--threads must be at least 1"));
        }
        Ok(ExperimentConfig {
            source,
            truncate: a.truncate,
            flavor: a.flavor,
            replicates: a.reps,
            seed: a.seed,
            format: a.format,
            p: a.p,
            q: a.q,
            m_cut: a.mcut,
            cap: a.cap,
            stein_c: a.stein_c,
        })
    }

    pub fn enumeration_cap(&self) -> EnumerationCap {
        match self.cap {
            Some(c) => EnumerationCap {
                undirected: c,
                bijective: c,
            },
            None => EnumerationCap::default(),
        }
    }

    fn base_sequence(&self) -> Result<Degrees, CliError> {
        let d = match &self.source {
            DegreeSource::Regular { n, r } => {
                let r = u32::try_from(*r).map_err(|_| CliError::invalid(format!("degree {r} is too large")))?;
                Degrees::regular(*n as usize, r)?
            }
            DegreeSource::Powerlaw { n, tau, c } => powerlaw_degrees(&PowerLawSpec::new(*n as usize, *tau, *c))?,
            DegreeSource::File { path, .. } => parse_degrees(&read(path)?)?,
        };
        Ok(d)
    }

    /// Loads and validates the degree sequence for the configured flavor.
    pub fn load(&self) -> Result<DegreeSequence, CliError> {
        let seq: DegreeSequence = match (&self.source, self.flavor) {
            (DegreeSource::File { path, .. }, FlavorArg::Dcm) => {
                let d = parse_directed(&read(path)?)?;
                match self.truncate {
                    Some(cap) => DirectedDegrees::new(
                        d.in_degrees().iter().map(|&x| x.min(cap)).collect(),
                        d.out_degrees().iter().map(|&x| x.min(cap)).collect(),
                    )?,
                    None => d,
                }
                .into()
            }
            (DegreeSource::File { path, right }, FlavorArg::Bcm) => {
                let right = right.as_ref().expect("checked when building the config");
                let d = parse_bipartite(&read(path)?, &read(right)?)?;
                match self.truncate {
                    Some(cap) => BipartiteDegrees::new(
                        d.left().iter().map(|&x| x.min(cap)).collect(),
                        d.right().iter().map(|&x| x.min(cap)).collect(),
                    )?,
                    None => d,
                }
                .into()
            }
            (_, flavor) => {
                let mut d = self.base_sequence()?;
                if let Some(cap) = self.truncate {
                    d = d.truncated(cap)?;
                }
                let v = d.as_slice().to_vec();
                match flavor {
                    FlavorArg::Cm => d.into(),
                    FlavorArg::Dcm => DirectedDegrees::new(v.clone(), v)?.into(),
                    FlavorArg::Bcm => BipartiteDegrees::new(v.clone(), v)?.into(),
                }
            }
        };
        Ok(seq)
    }
}

fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::invalid(format!("cannot read {path}: {e}")))
}
