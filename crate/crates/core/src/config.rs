//! Run configuration files.
//!
//! ```toml
//! seed = 2024
//! replications = 1000
//! workers = 4
//! digits = 4
//!
//! [[experiment]]
//! model = "exponential"
//! n = [100, 500]
//! estimators = ["tildeG_p1", "hatGG_p-10"]
//! k_min = 1
//! ```
//!
//! `n` may be a single integer or a list. `estimators` may be omitted for
//! the six study models, in which case the standard menu of that model is
//! used. A manifest written by a previous run is accepted as well: its
//! `[config]` table is read in place of the top level.

use std::ops::Range;
use std::path::Path;

use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::error::{Error, Result};
use crate::estimator::{EstimatorSpec, Family};
use crate::models::ModelId;

pub const DEFAULT_REPLICATIONS: usize = 5000;
pub const DEFAULT_SEED: u64 = 20240717;
pub const DEFAULT_N_GRID: [usize; 7] = [100, 200, 400, 750, 1000, 1500, 2000];

/// Standard estimator menu of a study model, in table row order.
pub fn study_menu(model: ModelId) -> Option<Vec<EstimatorSpec>> {
    use Family::*;
    let rows: &[(Family, f64)] = match model {
        ModelId::Exponential => &[
            (TildeG, 1.0),
            (TildeG, 0.75),
            (TildeG, 1.25),
            (TildeGG, 0.25),
            (TildeGG, 1.0),
            (HatG, 0.25),
            (HatG, 0.5),
            (HatGG, -10.0),
        ],
        ModelId::Weibull21 => &[
            (TildeG, 1.0),
            (TildeG, 0.75),
            (TildeG, 1.25),
            (TildeGG, 0.25),
            (TildeGG, 0.75),
            (HatG, -0.25),
            (HatG, 0.25),
            (HatGG, -20.0),
        ],
        ModelId::Gamma0751 => &[
            (TildeG, 1.0),
            (TildeG, 1.75),
            (TildeG, 2.0),
            (TildeGG, 0.25),
            (TildeGG, 0.5),
            (HatG, 0.25),
            (HatG, -1.75),
            (HatGG, -25.0),
        ],
        ModelId::HalfNormal => &[
            (TildeG, 1.0),
            (TildeG, 2.0),
            (TildeG, 3.5),
            (TildeGG, 0.25),
            (TildeGG, 1.0),
            (HatG, 0.25),
            (HatG, 1.0),
            (HatGG, -2.0),
        ],
        ModelId::GumbelStd => &[
            (TildeG, 1.0),
            (TildeG, 0.25),
            (TildeG, 0.5),
            (TildeGG, 0.25),
            (TildeGG, 0.5),
            (HatG, 0.25),
            (HatG, -2.0),
            (HatGG, -25.0),
        ],
        ModelId::HalfLogistic => &[
            (TildeG, 1.0),
            (TildeG, 0.25),
            (TildeG, 0.5),
            (TildeGG, 0.25),
            (TildeGG, 0.5),
            (HatG, 0.25),
            (HatG, -2.0),
            (HatGG, -15.0),
        ],
        _ => return None,
    };
    Some(rows.iter().map(|&(family, p)| EstimatorSpec { family, p }).collect())
}

/// One `[[experiment]]` section.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSection {
    pub model: ModelId,
    pub n: Vec<usize>,
    pub estimators: Vec<EstimatorSpec>,
    pub k_min: Option<usize>,
    pub k_max: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub replications: usize,
    pub workers: Option<usize>,
    pub digits: Option<usize>,
    pub experiments: Vec<ExperimentSection>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            replications: DEFAULT_REPLICATIONS,
            workers: None,
            digits: None,
            experiments: Vec::new(),
        }
    }
}

impl RunConfig {
    /// The six study models over the standard size grid with their menus.
    pub fn study() -> Self {
        let experiments = ModelId::STUDY
            .iter()
            .map(|&model| ExperimentSection {
                model,
                n: DEFAULT_N_GRID.to_vec(),
                estimators: study_menu(model).expect("study model has a menu"),
                k_min: None,
                k_max: None,
            })
            .collect();
        Self { experiments, ..Self::default() }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}:{msg}", path.display())),
            other => other,
        })
    }

    /// Parses a config document, or the `[config]` table of a manifest.
    ///
    /// Error messages start with `line:column:`.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: toml::Table = text.parse().map_err(|e| de_error(text, &e))?;
        if let Some(inner) = doc.get("config") {
            let inner = toml::to_string(inner)
                .map_err(|e| Error::Config(format!("1:1: unreadable [config] table: {e}")))?;
            return Self::parse_raw(&inner);
        }
        Self::parse_raw(text)
    }

    fn parse_raw(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| de_error(text, &e))?;
        let at = |span: Range<usize>, msg: String| {
            let (line, col) = line_col(text, span.start);
            Error::Config(format!("{line}:{col}: {msg}"))
        };
        let mut cfg = RunConfig::default();
        if let Some(seed) = raw.seed {
            cfg.seed = match seed.get_ref() {
                RawSeed::Int(v) => *v,
                RawSeed::Text(s) => s
                    .parse()
                    .map_err(|_| at(seed.span(), format!("seed {s:?} is not a 64-bit unsigned integer")))?,
            };
        }
        if let Some(r) = raw.replications {
            if *r.get_ref() == 0 {
                return Err(at(r.span(), "replications must be at least 1".into()));
            }
            cfg.replications = r.into_inner();
        }
        if let Some(w) = raw.workers {
            if *w.get_ref() == 0 {
                return Err(at(w.span(), "workers must be at least 1".into()));
            }
            cfg.workers = Some(w.into_inner());
        }
        cfg.digits = raw.digits;
        for section in raw.experiment {
            let model: ModelId = section
                .model
                .get_ref()
                .parse()
                .map_err(|e: Error| at(section.model.span(), e.to_string()))?;
            let n = match section.n.get_ref() {
                RawSizes::One(n) => vec![*n],
                RawSizes::Many(ns) => ns.clone(),
            };
            if n.is_empty() {
                return Err(at(section.n.span(), "sample size list is empty".into()));
            }
            if let Some(&bad) = n.iter().find(|&&n| n < 2) {
                return Err(at(section.n.span(), format!("sample size {bad} is below 2")));
            }
            let estimators = match section.estimators {
                None => study_menu(model).ok_or_else(|| {
                    at(
                        section.model.span(),
                        format!("model {model} has no default estimator menu; list estimators"),
                    )
                })?,
                Some(list) => {
                    if list.get_ref().is_empty() {
                        return Err(at(list.span(), "estimator list is empty".into()));
                    }
                    list.get_ref()
                        .iter()
                        .map(|id| {
                            id.get_ref()
                                .parse::<EstimatorSpec>()
                                .map_err(|e| at(id.span(), format!("estimator {:?}: {e}", id.get_ref())))
                        })
                        .collect::<Result<_>>()?
                }
            };
            if let (Some(lo), Some(hi)) = (section.k_min, section.k_max) {
                if lo > hi {
                    return Err(at(section.model.span(), format!("k_min {lo} exceeds k_max {hi}")));
                }
            }
            if section.k_min == Some(0) {
                return Err(at(section.model.span(), "k_min must be at least 1".into()));
            }
            cfg.experiments.push(ExperimentSection {
                model,
                n,
                estimators,
                k_min: section.k_min,
                k_max: section.k_max,
            });
        }
        Ok(cfg)
    }

    /// Canonical TOML rendering; [`RunConfig::parse`] reads it back unchanged.
    pub fn to_toml(&self) -> String {
        toml::to_string(&self.echo()).expect("config echo serializes")
    }

    pub(crate) fn echo(&self) -> EchoConfig {
        EchoConfig {
            seed: if self.seed <= i64::MAX as u64 {
                EchoSeed::Int(self.seed as i64)
            } else {
                EchoSeed::Text(self.seed.to_string())
            },
            replications: self.replications,
            workers: self.workers,
            digits: self.digits,
            experiment: self
                .experiments
                .iter()
                .map(|s| EchoSection {
                    model: s.model.to_string(),
                    n: s.n.clone(),
                    estimators: s.estimators.iter().map(EstimatorSpec::id).collect(),
                    k_min: s.k_min,
                    k_max: s.k_max,
                })
                .collect(),
        }
    }
}

fn de_error(text: &str, e: &toml::de::Error) -> Error {
    let (line, col) = e.span().map_or((1, 1), |s| line_col(text, s.start));
    Error::Config(format!("{line}:{col}: {}", e.message().trim_end()))
}

/// 1-based line and column of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<Spanned<RawSeed>>,
    replications: Option<Spanned<usize>>,
    workers: Option<Spanned<usize>>,
    digits: Option<usize>,
    #[serde(default)]
    experiment: Vec<RawSection>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawSeed {
    Int(u64),
    Text(String),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawSizes {
    One(usize),
    Many(Vec<usize>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSection {
    model: Spanned<String>,
    n: Spanned<RawSizes>,
    estimators: Option<Spanned<Vec<Spanned<String>>>>,
    k_min: Option<usize>,
    k_max: Option<usize>,
}

#[derive(Serialize)]
pub(crate) struct EchoConfig {
    seed: EchoSeed,
    replications: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    workers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    digits: Option<usize>,
    experiment: Vec<EchoSection>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum EchoSeed {
    Int(i64),
    Text(String),
}

#[derive(Serialize)]
struct EchoSection {
    model: String,
    n: Vec<usize>,
    estimators: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_min: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_max: Option<usize>,
}

/// Renders `cfg` as the `[config]` table of a manifest.
pub(crate) fn echo_as_table(cfg: &RunConfig) -> String {
    let mut doc = toml::Table::new();
    doc.insert(
        "config".into(),
        toml::Value::try_from(cfg.echo()).expect("config echo serializes"),
    );
    toml::to_string(&doc).expect("config echo serializes")
}
