//! Function families and their canonical text forms.
//!
//! A [`FamilySpec`] is the parsed form of strings like `tribes:n=8,s=2` or
//! `connectivity:v=400`; [`FamilySpec::build`] turns it into a function.

pub mod dnf;
pub mod graph;
pub mod recursive_majority;
pub mod threshold;
pub mod tribes;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::Function;

pub use dnf::RandomMonotoneDnf;
pub use graph::{Connectivity, EdgeIndex, GraphState, KConnectivity};
pub use recursive_majority::RecursiveMajority;
pub use threshold::ThresholdFunction;
pub use tribes::Tribes;

/// Parsed family descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilySpec {
    Dictator {
        n: usize,
        i: usize,
    },
    Junta {
        n: usize,
        bits: Vec<usize>,
        k: usize,
    },
    PrefixThreshold {
        n: usize,
        m: usize,
        k: usize,
    },
    Tribes {
        n: usize,
        s: usize,
    },
    RecursiveMajority {
        k: usize,
        t: usize,
    },
    And {
        n: usize,
    },
    Or {
        n: usize,
    },
    Majority {
        n: usize,
    },
    Connectivity {
        v: usize,
    },
    KConnectivity {
        v: usize,
        k: usize,
    },
    RandomMonotoneDnf {
        n: usize,
        clauses: usize,
        width: usize,
        seed: u64,
    },
}

impl FamilySpec {
    /// Instantiate the function this spec describes.
    pub fn build(&self) -> Result<Box<dyn Function>> {
        Ok(match *self {
            FamilySpec::Dictator { n, i } => Box::new(ThresholdFunction::dictator(n, i)?),
            FamilySpec::Junta { n, ref bits, k } => {
                Box::new(ThresholdFunction::junta(n, bits.clone(), k)?)
            }
            FamilySpec::PrefixThreshold { n, m, k } => {
                Box::new(ThresholdFunction::prefix_threshold(n, m, k)?)
            }
            FamilySpec::Tribes { n, s } => Box::new(Tribes::new(n, s)?),
            FamilySpec::RecursiveMajority { k, t } => Box::new(RecursiveMajority::new(k, t)?),
            FamilySpec::And { n } => Box::new(ThresholdFunction::and(n)?),
            FamilySpec::Or { n } => Box::new(ThresholdFunction::or(n)?),
            FamilySpec::Majority { n } => Box::new(ThresholdFunction::majority(n)?),
            FamilySpec::Connectivity { v } => Box::new(Connectivity::new(v)?),
            FamilySpec::KConnectivity { v, k } => Box::new(KConnectivity::new(v, k)?),
            FamilySpec::RandomMonotoneDnf {
                n,
                clauses,
                width,
                seed,
            } => Box::new(RandomMonotoneDnf::new(n, clauses, width, seed)?),
        })
    }

    /// The size parameter a growing sequence varies: `n` for bit families,
    /// `v` for graph families, `k^t` for recursive majority.
    pub fn scale(&self) -> usize {
        match *self {
            FamilySpec::Dictator { n, .. }
            | FamilySpec::Junta { n, .. }
            | FamilySpec::PrefixThreshold { n, .. }
            | FamilySpec::Tribes { n, .. }
            | FamilySpec::And { n }
            | FamilySpec::Or { n }
            | FamilySpec::Majority { n }
            | FamilySpec::RandomMonotoneDnf { n, .. } => n,
            FamilySpec::Connectivity { v } | FamilySpec::KConnectivity { v, .. } => v,
            FamilySpec::RecursiveMajority { k, t } => k.pow(t as u32),
        }
    }

    /// Kind names with their parameter lists, for usage listings.
    pub fn kinds() -> &'static [(&'static str, &'static str)] {
        &[
            ("dictator", "n=<arity>,i=<index>"),
            ("junta", "n=<arity>,bits=<i+j+...>,k=<threshold>"),
            ("prefix_threshold", "n=<arity>,m=<prefix>,k=<threshold>"),
            ("tribes", "n=<arity>,s=<tribe size>"),
            ("recursive_majority", "k=<odd branching>,t=<depth>"),
            ("and", "n=<arity>"),
            ("or", "n=<arity>"),
            ("majority", "n=<arity>"),
            ("connectivity", "v=<vertices>"),
            ("k_connectivity", "v=<vertices>,k=<2 or 3>"),
            (
                "random_monotone_dnf",
                "n=<arity>,clauses=<count>,width=<literals>,seed=<u64>",
            ),
        ]
    }
}

/// Build a function directly from its canonical text form.
pub fn build_function(spec: &str) -> Result<Box<dyn Function>> {
    spec.parse::<FamilySpec>()?.build()
}

struct Params<'a> {
    spec: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn parse(spec: &'a str, body: &'a str) -> Result<Self> {
        let mut pairs = Vec::new();
        if !body.is_empty() {
            for piece in body.split(',') {
                let (k, v) = piece.split_once('=').ok_or_else(|| Error::MalformedSpec {
                    spec: spec.to_string(),
                    reason: format!("expected key=value, got `{piece}`"),
                })?;
                pairs.push((k.trim(), v.trim()));
            }
        }
        Ok(Params { spec, pairs })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<T> {
        let (_, v) =
            self.pairs
                .iter()
                .find(|(k, _)| *k == key)
                .ok_or_else(|| Error::MalformedSpec {
                    spec: self.spec.to_string(),
                    reason: format!("missing parameter `{key}`"),
                })?;
        v.parse().map_err(|_| Error::MalformedSpec {
            spec: self.spec.to_string(),
            reason: format!("cannot parse `{key}={v}`"),
        })
    }

    fn get_list(&self, key: &str) -> Result<Vec<usize>> {
        let raw: String = self.get(key)?;
        raw.split('+')
            .map(|p| {
                p.trim().parse().map_err(|_| Error::MalformedSpec {
                    spec: self.spec.to_string(),
                    reason: format!("cannot parse index `{p}` in `{key}`"),
                })
            })
            .collect()
    }

    fn finish(&self, expected: &[&str]) -> Result<()> {
        for (k, _) in &self.pairs {
            if !expected.contains(k) {
                return Err(Error::MalformedSpec {
                    spec: self.spec.to_string(),
                    reason: format!("unknown parameter `{k}`"),
                });
            }
        }
        Ok(())
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (kind, body) = match s.split_once(':') {
            Some((k, b)) => (k.trim(), b),
            None => (s, ""),
        };
        let p = Params::parse(s, body)?;
        let spec = match kind {
            "dictator" => {
                p.finish(&["n", "i"])?;
                FamilySpec::Dictator {
                    n: p.get("n")?,
                    i: p.get("i")?,
                }
            }
            "junta" => {
                p.finish(&["n", "bits", "k"])?;
                FamilySpec::Junta {
                    n: p.get("n")?,
                    bits: p.get_list("bits")?,
                    k: p.get("k")?,
                }
            }
            "prefix_threshold" => {
                p.finish(&["n", "m", "k"])?;
                FamilySpec::PrefixThreshold {
                    n: p.get("n")?,
                    m: p.get("m")?,
                    k: p.get("k")?,
                }
            }
            "tribes" => {
                p.finish(&["n", "s"])?;
                FamilySpec::Tribes {
                    n: p.get("n")?,
                    s: p.get("s")?,
                }
            }
            "recursive_majority" => {
                p.finish(&["k", "t"])?;
                FamilySpec::RecursiveMajority {
                    k: p.get("k")?,
                    t: p.get("t")?,
                }
            }
            "and" => {
                p.finish(&["n"])?;
                FamilySpec::And { n: p.get("n")? }
            }
            "or" => {
                p.finish(&["n"])?;
                FamilySpec::Or { n: p.get("n")? }
            }
            "majority" => {
                p.finish(&["n"])?;
                FamilySpec::Majority { n: p.get("n")? }
            }
            "connectivity" => {
                p.finish(&["v"])?;
                FamilySpec::Connectivity { v: p.get("v")? }
            }
            "k_connectivity" => {
                p.finish(&["v", "k"])?;
                FamilySpec::KConnectivity {
                    v: p.get("v")?,
                    k: p.get("k")?,
                }
            }
            "random_monotone_dnf" => {
                p.finish(&["n", "clauses", "width", "seed"])?;
                FamilySpec::RandomMonotoneDnf {
                    n: p.get("n")?,
                    clauses: p.get("clauses")?,
                    width: p.get("width")?,
                    seed: p.get("seed")?,
                }
            }
            other => return Err(Error::UnknownFamily(other.to_string())),
        };
        Ok(spec)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::Dictator { n, i } => write!(f, "dictator:n={n},i={i}"),
            FamilySpec::Junta { n, ref bits, k } => {
                let set = bits
                    .iter()
                    .map(|b| b.to_string())
                    .collect::<Vec<_>>()
                    .join("+");
                write!(f, "junta:n={n},bits={set},k={k}")
            }
            FamilySpec::PrefixThreshold { n, m, k } => {
                write!(f, "prefix_threshold:n={n},m={m},k={k}")
            }
            FamilySpec::Tribes { n, s } => write!(f, "tribes:n={n},s={s}"),
            FamilySpec::RecursiveMajority { k, t } => {
                write!(f, "recursive_majority:k={k},t={t}")
            }
            FamilySpec::And { n } => write!(f, "and:n={n}"),
            FamilySpec::Or { n } => write!(f, "or:n={n}"),
            FamilySpec::Majority { n } => write!(f, "majority:n={n}"),
            FamilySpec::Connectivity { v } => write!(f, "connectivity:v={v}"),
            FamilySpec::KConnectivity { v, k } => write!(f, "k_connectivity:v={v},k={k}"),
            FamilySpec::RandomMonotoneDnf {
                n,
                clauses,
                width,
                seed,
            } => {
                write!(
                    f,
                    "random_monotone_dnf:n={n},clauses={clauses},width={width},seed={seed}"
                )
            }
        }
    }
}
