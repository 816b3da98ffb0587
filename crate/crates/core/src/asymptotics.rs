//! Closed-form asymptotic bias, variance, AMSE and bias-cancelling `p`.
//!
//! Bias terms are the leading `1/ln(n/k)` contributions for models with
//! `B(t) = α/t` (which includes `B = 0` at `α = 0`); models in the
//! `ln t / t` class carry no in-model constant and are rejected.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::estimator::{Family, MeanKind};
use crate::models::SecondOrder;

/// `v(p)` in `Var_∞ = θ² v(p) / k`: 1 for the `H_p` families,
/// `(Γ(2p+1)/Γ(p+1)² - 1) / p²` for the power-mean families.
pub fn variance_factor(kind: MeanKind, p: f64) -> Result<f64> {
    match kind {
        MeanKind::Hat => Ok(1.0),
        MeanKind::Tilde => {
            if !(p > -1.0 && p != 0.0 && p.is_finite()) {
                return Err(Error::Parameter(format!(
                    "variance factor of the power mean needs p > -1, p != 0; got {p}"
                )));
            }
            if p.fract() == 0.0 && (1.0..=25.0).contains(&p) {
                return Ok((central_binomial(p as u32) - 1.0) / (p * p));
            }
            let log_ratio = ln_gamma(2.0 * p + 1.0) - 2.0 * ln_gamma(p + 1.0);
            Ok(log_ratio.exp_m1() / (p * p))
        }
    }
}

/// `C(2m, m)`, exact in `f64` for `m <= 25`.
fn central_binomial(m: u32) -> f64 {
    (1..=u64::from(m)).fold(1u64, |c, i| c * (m as u64 + i) / i) as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmseInput {
    pub family: Family,
    pub p: f64,
    pub theta: f64,
    /// Sample size. May be omitted only when the leading bias vanishes
    /// identically, since then `ln(n/k)` does not enter.
    pub n: Option<usize>,
    pub k: usize,
    pub second_order: SecondOrder,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmseReport {
    pub bias_sq: f64,
    pub variance: f64,
    pub amse: f64,
    pub variance_factor: f64,
}

impl AmseReport {
    fn new(bias_sq: f64, theta: f64, k: usize, variance_factor: f64) -> Self {
        let variance = theta * theta / k as f64 * variance_factor;
        Self {
            bias_sq,
            variance,
            amse: bias_sq + variance,
            variance_factor,
        }
    }
}

fn class_alpha(second_order: SecondOrder) -> Result<f64> {
    match second_order {
        SecondOrder::Zero => Ok(0.0),
        SecondOrder::AlphaOverT { alpha: Some(a) } => Ok(a),
        SecondOrder::AlphaOverT { alpha: None } => Err(Error::Capability(
            "second-order constant α is not known for this model".into(),
        )),
        SecondOrder::LogOverT => Err(Error::Capability(
            "AMSE needs B(t) = 0 or B(t) = α/t; the ln(t)/t class has no in-model constant".into(),
        )),
    }
}

/// Numerator `c` of the leading bias `c / ln(n/k)` for `B(t) = α/t`.
pub fn bias_numerator(family: Family, p: f64, theta: f64, alpha: f64) -> f64 {
    match family {
        Family::HatGG => alpha - theta,
        Family::HatG => alpha,
        Family::TildeGG => (2.0 * alpha - theta * (p + 1.0)) / 2.0,
        Family::TildeG => (2.0 * alpha - theta * (p - 1.0)) / 2.0,
    }
}

fn check_common(theta: f64, k: usize, n: Option<usize>) -> Result<()> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::Parameter(format!("theta must be positive, got {theta}")));
    }
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    if let Some(n) = n {
        if k >= n {
            return Err(Error::Range { k, n });
        }
    }
    Ok(())
}

/// AMSE for the `B = 0` and `B = α/t` classes.
pub fn amse(input: &AmseInput) -> Result<AmseReport> {
    check_common(input.theta, input.k, input.n)?;
    let alpha = class_alpha(input.second_order)?;
    let v = variance_factor(input.family.mean_kind(), input.p)?;
    let c = bias_numerator(input.family, input.p, input.theta, alpha);
    let bias_sq = if c == 0.0 {
        0.0
    } else {
        let n = input.n.ok_or_else(|| {
            Error::Parameter("n is required when the asymptotic bias does not vanish".into())
        })?;
        let log_ratio = (n as f64 / input.k as f64).ln();
        (c / log_ratio).powi(2)
    };
    Ok(AmseReport::new(bias_sq, input.theta, input.k, v))
}

/// AMSE for an arbitrary second-order function, in the generic form
/// `(B(ln(n/k)) / θ)² + θ² v(p) / k`.
///
/// This form omits the `-1/ln(n/k)`-type terms that the closed classes in
/// [`amse`] carry, so the two only agree where those terms vanish.
pub fn amse_generic<B: Fn(f64) -> f64>(
    family: Family,
    p: f64,
    theta: f64,
    n: usize,
    k: usize,
    b: B,
) -> Result<AmseReport> {
    check_common(theta, k, Some(n))?;
    let v = variance_factor(family.mean_kind(), p)?;
    let bias = b((n as f64 / k as f64).ln()) / theta;
    Ok(AmseReport::new(bias * bias, theta, k, v))
}

/// Outcome of the bias-cancelling `p` search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OptimalP {
    Feasible(f64),
    /// The cancelling value is not positive.
    Infeasible,
}

impl OptimalP {
    pub fn value(self) -> Option<f64> {
        match self {
            OptimalP::Feasible(p) => Some(p),
            OptimalP::Infeasible => None,
        }
    }
}

/// `p` that cancels the leading bias of a power-mean estimator under
/// `B(t) = α/t`: `2α/θ - 1` (GG) or `2α/θ + 1` (G), required to be `> 0`.
pub fn optimal_p(family: Family, alpha: f64, theta: f64) -> Result<OptimalP> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::Parameter(format!("theta must be positive, got {theta}")));
    }
    let p = match family {
        Family::TildeGG => 2.0 * alpha / theta - 1.0,
        Family::TildeG => 2.0 * alpha / theta + 1.0,
        Family::HatG | Family::HatGG => {
            return Err(Error::Parameter(format!(
                "{family}: the leading bias of H_p estimators does not depend on p"
            )))
        }
    };
    Ok(if p > 0.0 {
        OptimalP::Feasible(p)
    } else {
        OptimalP::Infeasible
    })
}

/// Normalized bias coefficients of the power-mean estimators.
///
/// With `B(t) = α/t`: `(2α - θ(p+1)) / 2α` (GG), `(2α - θ(p-1)) / 2α` (G).
/// With `B = 0`: `-θ(p+1)/2` (GG), `-θ(p-1)/2` (G).
pub fn bias_coefficient(
    family: Family,
    p: f64,
    theta: f64,
    second_order: SecondOrder,
) -> Result<f64> {
    let shift = match family {
        Family::TildeGG => p + 1.0,
        Family::TildeG => p - 1.0,
        Family::HatG | Family::HatGG => {
            return Err(Error::Capability(format!(
                "bias coefficients are defined for the power-mean families, not {family}"
            )))
        }
    };
    if second_order == SecondOrder::Zero {
        return Ok(-theta * shift / 2.0);
    }
    match class_alpha(second_order)? {
        a if a == 0.0 => Err(Error::Domain(
            "bias coefficient is undefined for α = 0 in the α/t class".into(),
        )),
        a => Ok((2.0 * a - theta * shift) / (2.0 * a)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(family: Family, p: f64, n: Option<usize>, k: usize, so: SecondOrder) -> AmseInput {
        AmseInput {
            family,
            p,
            theta: 1.0,
            n,
            k,
            second_order: so,
        }
    }

    #[test]
    fn variance_factor_values() {
        assert_eq!(variance_factor(MeanKind::Tilde, 1.0).unwrap(), 1.0);
        assert_eq!(variance_factor(MeanKind::Tilde, 3.0).unwrap(), 19.0 / 9.0);
        let near = variance_factor(MeanKind::Tilde, 3.0 + 1e-9).unwrap();
        assert!((near - 19.0 / 9.0).abs() < 1e-7);
        assert!((variance_factor(MeanKind::Tilde, 2.0).unwrap() - 1.25).abs() < 1e-13);
        for p in [-3.0, 0.0, 0.5, 7.0] {
            assert_eq!(variance_factor(MeanKind::Hat, p).unwrap(), 1.0);
        }
        assert!(variance_factor(MeanKind::Tilde, 0.0).is_err());
        assert!(variance_factor(MeanKind::Tilde, -1.0).is_err());
    }

    #[test]
    fn amse_examples() {
        let r = amse(&input(Family::HatG, 3.0, Some(5000), 100, SecondOrder::Zero)).unwrap();
        assert!((r.amse - 0.01).abs() < 1e-15);
        let r = amse(&input(Family::HatGG, 0.0, Some(1000), 100, SecondOrder::Zero)).unwrap();
        let want = 1.0 / 10f64.ln().powi(2) + 0.01;
        assert!((r.amse - want).abs() < 1e-14);
        assert!((r.amse - 0.198611).abs() < 1e-6);
        let r = amse(&input(Family::TildeG, 1.0, None, 100, SecondOrder::Zero)).unwrap();
        assert!((r.amse - 0.01).abs() < 1e-15);
        assert_eq!(r.bias_sq, 0.0);
        assert_eq!(r.amse, r.bias_sq + r.variance);
    }

    #[test]
    fn amse_rejects_unsupported() {
        assert!(matches!(
            amse(&input(Family::HatG, 1.0, Some(100), 10, SecondOrder::LogOverT)),
            Err(Error::Capability(_))
        ));
        assert!(matches!(
            amse(&input(Family::HatG, 1.0, Some(100), 10, SecondOrder::AlphaOverT { alpha: None })),
            Err(Error::Capability(_))
        ));
        assert!(amse(&input(Family::HatGG, 1.0, None, 10, SecondOrder::Zero)).is_err());
        assert!(amse(&input(Family::HatGG, 1.0, Some(10), 10, SecondOrder::Zero)).is_err());
    }

    #[test]
    fn generic_matches_closed_form_where_they_coincide() {
        // HAT_G with B(t) = α/t: generic (α/(θ ln))² equals (α/ln)² at θ = 1.
        let alpha = 0.7;
        let g = amse_generic(Family::HatG, 0.0, 1.0, 1000, 50, |t| alpha / t).unwrap();
        let c = amse(&input(
            Family::HatG,
            0.0,
            Some(1000),
            50,
            SecondOrder::AlphaOverT { alpha: Some(alpha) },
        ))
        .unwrap();
        assert!((g.amse - c.amse).abs() < 1e-15);
    }

    #[test]
    fn optimal_p_closed_form_values() {
        assert_eq!(optimal_p(Family::TildeGG, 1.0, 1.0).unwrap(), OptimalP::Feasible(1.0));
        assert_eq!(optimal_p(Family::TildeG, 1.0, 1.0).unwrap(), OptimalP::Feasible(3.0));
        let ln2 = std::f64::consts::LN_2;
        assert_eq!(optimal_p(Family::TildeGG, -ln2, 1.0).unwrap(), OptimalP::Infeasible);
        assert_eq!(optimal_p(Family::TildeG, -ln2, 1.0).unwrap(), OptimalP::Infeasible);
        // Gumbel(mu): GG feasible iff mu < -0.5, G feasible iff mu < 0.5
        assert!(optimal_p(Family::TildeGG, 0.4, 1.0).unwrap().value().is_none());
        assert!(optimal_p(Family::TildeGG, 0.6, 1.0).unwrap().value().is_some());
        assert!(optimal_p(Family::TildeG, -0.4, 1.0).unwrap().value().is_some());
        assert!(optimal_p(Family::TildeG, -0.6, 1.0).unwrap().value().is_none());
        assert!(optimal_p(Family::HatG, 1.0, 1.0).is_err());
    }

    #[test]
    fn bias_coefficient_values() {
        assert_eq!(bias_coefficient(Family::TildeG, 1.0, 0.7, SecondOrder::Zero).unwrap(), 0.0);
        let one = SecondOrder::AlphaOverT { alpha: Some(1.0) };
        assert_eq!(bias_coefficient(Family::TildeGG, 1.0, 1.0, one).unwrap(), 0.0);
        assert_eq!(bias_coefficient(Family::TildeGG, 3.0, 0.5, SecondOrder::Zero).unwrap(), -1.0);
        let zero = SecondOrder::AlphaOverT { alpha: Some(0.0) };
        assert!(matches!(
            bias_coefficient(Family::TildeG, 1.0, 1.0, zero),
            Err(Error::Domain(_))
        ));
        assert!(bias_coefficient(Family::TildeG, 1.0, 1.0, SecondOrder::LogOverT).is_err());
        assert!(bias_coefficient(Family::HatG, 1.0, 1.0, one).is_err());
    }
}
