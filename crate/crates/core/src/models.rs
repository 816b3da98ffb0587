//! Test distributions with known Weibull tail coefficient.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Gamma, Open01, StandardNormal};
use statrs::function::{erf::erf, gamma::gamma_lr};

use crate::error::{Error, Result};
use crate::sample::{Origin, SortedSample};
use crate::stream::SeededStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelId {
    Exponential,
    /// Weibull with shape 2 and scale 1.
    Weibull21,
    /// Gamma with shape 0.75 and scale 1.
    Gamma0751,
    HalfNormal,
    GumbelStd,
    HalfLogistic,
    Logistic,
    /// Gumbel with location `mu` and unit scale.
    GumbelMu(f64),
}

/// Rate class of the second-order function `B(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SecondOrder {
    /// `B(t) = 0`, `β = -∞`.
    Zero,
    /// `B(t) = α / t`, `β = -1`. `alpha` is `None` when it is not known.
    AlphaOverT { alpha: Option<f64> },
    /// `B(t) ∝ ln t / t`, `β = -1`.
    LogOverT,
}

impl SecondOrder {
    /// Second-order rate `β`.
    pub fn beta(&self) -> f64 {
        match self {
            SecondOrder::Zero => f64::NEG_INFINITY,
            SecondOrder::AlphaOverT { .. } | SecondOrder::LogOverT => -1.0,
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            SecondOrder::AlphaOverT { alpha } => *alpha,
            _ => None,
        }
    }
}

/// A test model with its ground truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub id: ModelId,
    pub theta: f64,
    pub second_order: SecondOrder,
    pub beta: f64,
}

impl ModelId {
    /// The six models of the simulation study.
    pub const STUDY: [ModelId; 6] = [
        ModelId::Exponential,
        ModelId::Weibull21,
        ModelId::Gamma0751,
        ModelId::HalfNormal,
        ModelId::GumbelStd,
        ModelId::HalfLogistic,
    ];

    pub fn spec(self) -> ModelSpec {
        ModelSpec::new(self)
    }

    /// Stable file-name friendly form, e.g. `weibull_2_1`.
    pub fn slug(&self) -> String {
        self.to_string()
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
            .collect::<String>()
            .trim_end_matches('_')
            .replace("__", "_")
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelId::Exponential => f.write_str("exponential"),
            ModelId::Weibull21 => f.write_str("weibull(2,1)"),
            ModelId::Gamma0751 => f.write_str("gamma(0.75,1)"),
            ModelId::HalfNormal => f.write_str("half-normal"),
            ModelId::GumbelStd => f.write_str("gumbel"),
            ModelId::HalfLogistic => f.write_str("half-logistic"),
            ModelId::Logistic => f.write_str("logistic"),
            ModelId::GumbelMu(mu) => write!(f, "gumbel(mu={mu})"),
        }
    }
}

impl FromStr for ModelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "exponential" => ModelId::Exponential,
            "weibull(2,1)" => ModelId::Weibull21,
            "gamma(0.75,1)" => ModelId::Gamma0751,
            "half-normal" => ModelId::HalfNormal,
            "gumbel" => ModelId::GumbelStd,
            "half-logistic" => ModelId::HalfLogistic,
            "logistic" => ModelId::Logistic,
            other => {
                let mu = other
                    .strip_prefix("gumbel(mu=")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|m| m.parse::<f64>().ok())
                    .filter(|m| m.is_finite())
                    .ok_or_else(|| Error::Parameter(format!("unknown model `{other}`")))?;
                ModelId::GumbelMu(mu)
            }
        })
    }
}

impl ModelSpec {
    pub fn new(id: ModelId) -> Self {
        let (theta, second_order) = match id {
            ModelId::Exponential => (1.0, SecondOrder::Zero),
            ModelId::Weibull21 => (0.5, SecondOrder::Zero),
            ModelId::Gamma0751 => (1.0, SecondOrder::LogOverT),
            ModelId::HalfNormal => (0.5, SecondOrder::LogOverT),
            ModelId::GumbelStd => (1.0, SecondOrder::AlphaOverT { alpha: Some(0.0) }),
            ModelId::HalfLogistic => (1.0, SecondOrder::AlphaOverT { alpha: None }),
            ModelId::Logistic => (
                1.0,
                SecondOrder::AlphaOverT {
                    alpha: Some(-std::f64::consts::LN_2),
                },
            ),
            ModelId::GumbelMu(mu) => (1.0, SecondOrder::AlphaOverT { alpha: Some(0.0 - mu) }),
        };
        Self {
            id,
            theta,
            second_order,
            beta: second_order.beta(),
        }
    }

    /// True Weibull tail coefficient.
    pub fn true_theta(&self) -> f64 {
        self.theta
    }

    pub fn second_order_info(&self) -> (SecondOrder, Option<f64>, f64) {
        (self.second_order, self.second_order.alpha(), self.beta)
    }

    /// Whether the support reaches below zero, so that draws are truncated
    /// to their positive part.
    pub fn is_truncated(&self) -> bool {
        matches!(
            self.id,
            ModelId::GumbelStd | ModelId::GumbelMu(_) | ModelId::Logistic
        )
    }

    fn location(&self) -> f64 {
        match self.id {
            ModelId::GumbelMu(mu) => mu,
            _ => 0.0,
        }
    }

    /// Inverse CDF for the models sampled by inversion; `None` otherwise.
    pub fn quantile(&self, u: f64) -> Option<f64> {
        match self.id {
            ModelId::Exponential => Some(-(-u).ln_1p()),
            ModelId::Weibull21 => Some((-(-u).ln_1p()).sqrt()),
            ModelId::HalfLogistic => Some(((1.0 + u) / (1.0 - u)).ln()),
            ModelId::Logistic => Some((u / (1.0 - u)).ln()),
            ModelId::GumbelStd | ModelId::GumbelMu(_) => Some(self.location() - (-u.ln()).ln()),
            ModelId::Gamma0751 | ModelId::HalfNormal => None,
        }
    }

    /// CDF of the untruncated distribution.
    pub fn cdf(&self, x: f64) -> f64 {
        let pos = x.max(0.0);
        match self.id {
            ModelId::Exponential => -(-pos).exp_m1(),
            ModelId::Weibull21 => -(-pos * pos).exp_m1(),
            ModelId::Gamma0751 => {
                if pos == 0.0 {
                    0.0
                } else {
                    gamma_lr(0.75, pos)
                }
            }
            ModelId::HalfNormal => erf(pos / std::f64::consts::SQRT_2),
            ModelId::HalfLogistic => (-(-pos).exp_m1()) / (1.0 + (-pos).exp()),
            ModelId::Logistic => 1.0 / (1.0 + (-x).exp()),
            ModelId::GumbelStd | ModelId::GumbelMu(_) => (-(-(x - self.location())).exp()).exp(),
        }
    }

    /// One draw from the untruncated distribution.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.id {
            ModelId::Gamma0751 => Gamma::new(0.75, 1.0)
                .expect("valid gamma parameters")
                .sample(rng),
            ModelId::HalfNormal => {
                let z: f64 = StandardNormal.sample(rng);
                z.abs()
            }
            _ => {
                let u: f64 = Open01.sample(rng);
                self.quantile(u).expect("inversion model")
            }
        }
    }

    /// Draws `n` variates and keeps the strictly positive ones.
    pub fn sample(&self, n: usize, stream: SeededStream) -> Result<SortedSample> {
        if n < 2 {
            return Err(Error::DegenerateSample { drawn: n, kept: 0 });
        }
        let mut rng = stream.rng();
        let raw: Vec<f64> = (0..n).map(|_| self.draw(&mut rng)).collect();
        let sample = self.from_draws(raw)?;
        Ok(sample.with_origin(Origin {
            model: self.id.to_string(),
            experiment_seed: stream.experiment_seed,
            replication: stream.replication_index,
        }))
    }

    /// Applies the positive-part rule to raw draws and sorts them.
    pub fn from_draws(&self, raw: Vec<f64>) -> Result<SortedSample> {
        let drawn = raw.len();
        let kept: Vec<f64> = raw.into_iter().filter(|x| *x > 0.0 && x.is_finite()).collect();
        if kept.len() < 2 {
            return Err(Error::DegenerateSample {
                drawn,
                kept: kept.len(),
            });
        }
        SortedSample::from_unsorted(kept)
    }
}

/// Samples `n` draws from `model` on the given stream.
pub fn sample(model: &ModelSpec, n: usize, stream: SeededStream) -> Result<SortedSample> {
    model.sample(n, stream)
}
