//! Estimator identities: which generalized mean, which normalization, which `p`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The four WTC estimator families.
///
/// `Hat*` families use the mean-of-order-p `H_p` of the relative excesses,
/// `Tilde*` families use the power mean `PM_p` of the log-excesses. The `G`
/// normalization divides by the log-log sequence [`crate::t_seq_g`], `GG`
/// multiplies by `ln(n/k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    HatG,
    HatGG,
    TildeG,
    TildeGG,
}

/// Which generalized mean a family is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanKind {
    /// `H_p`, relative excesses.
    Hat,
    /// `PM_p`, log-excesses.
    Tilde,
}

/// Which deterministic sequence turns the mean into a WTC estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    G,
    GG,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::HatG, Family::HatGG, Family::TildeG, Family::TildeGG];

    pub fn mean_kind(self) -> MeanKind {
        match self {
            Family::HatG | Family::HatGG => MeanKind::Hat,
            Family::TildeG | Family::TildeGG => MeanKind::Tilde,
        }
    }

    pub fn normalization(self) -> Normalization {
        match self {
            Family::HatG | Family::TildeG => Normalization::G,
            Family::HatGG | Family::TildeGG => Normalization::GG,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::HatG => "hatG",
            Family::HatGG => "hatGG",
            Family::TildeG => "tildeG",
            Family::TildeGG => "tildeGG",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hatG" => Ok(Family::HatG),
            "hatGG" => Ok(Family::HatGG),
            "tildeG" => Ok(Family::TildeG),
            "tildeGG" => Ok(Family::TildeGG),
            _ => Err(Error::Parameter(format!(
                "unknown estimator family `{s}` (expected hatG, hatGG, tildeG or tildeGG)"
            ))),
        }
    }
}

/// A family together with its tuning parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorSpec {
    pub family: Family,
    pub p: f64,
}

impl EstimatorSpec {
    /// Validated constructor.
    pub fn new(family: Family, p: f64) -> Result<Self> {
        let spec = Self { family, p };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the parameter domain of the underlying mean.
    ///
    /// `H_p` accepts every finite real `p` (the tail index is zero for
    /// Weibull-type tails, so the usual `p < 1/xi` bound is void). `PM_p`
    /// needs `p > -1` and `p != 0`.
    pub fn validate(&self) -> Result<()> {
        if !self.p.is_finite() {
            return Err(Error::Parameter(format!("p must be finite, got {}", self.p)));
        }
        if self.family.mean_kind() == MeanKind::Tilde && !(self.p > -1.0 && self.p != 0.0) {
            return Err(Error::Parameter(format!(
                "{} requires p > -1 and p != 0, got p = {}",
                self.family, self.p
            )));
        }
        Ok(())
    }

    /// Stable identifier such as `tildeG_p1` or `hatGG_p-10`.
    pub fn id(&self) -> String {
        format!("{}_p{}", self.family, self.p)
    }
}

impl fmt::Display for EstimatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for EstimatorSpec {
    type Err = Error;

    /// Parses the identifier produced by [`EstimatorSpec::id`].
    fn from_str(s: &str) -> Result<Self> {
        let (family, p) = s.split_once("_p").ok_or_else(|| {
            Error::Parameter(format!("estimator id `{s}` must look like <family>_p<value>"))
        })?;
        let family: Family = family.parse()?;
        let p: f64 = p
            .parse()
            .map_err(|_| Error::Parameter(format!("bad p value in estimator id `{s}`")))?;
        EstimatorSpec::new(family, p)
    }
}
