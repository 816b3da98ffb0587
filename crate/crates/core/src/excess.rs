//! Excess statistics and the four WTC estimator families at a single `k`.
//!
//! Every function here recomputes from scratch in `O(k)`. The incremental
//! curve over all `k` lives in [`crate::curve`].

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::estimator::{EstimatorSpec, MeanKind, Normalization};
use crate::sample::SortedSample;

/// Log-excesses `V_ik` and relative excesses `U_ik`, `i = 1..=k`.
///
/// Index `i - 1` holds the excess of the `i`-th largest observation over
/// the threshold `X_{n-k:n}`, so both vectors are non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcessVectors {
    pub log_excess: Vec<f64>,
    pub rel_excess: Vec<f64>,
}

impl ExcessVectors {
    pub fn k(&self) -> usize {
        self.log_excess.len()
    }
}

fn log_excesses(s: &SortedSample, k: usize) -> Result<(Vec<f64>, f64)> {
    s.check_k(k)?;
    let threshold = s.top(k + 1);
    if threshold <= 0.0 {
        return Err(Error::Domain(format!("non-positive threshold {threshold}")));
    }
    let log_thr = threshold.ln();
    Ok(((1..=k).map(|i| s.top(i).ln() - log_thr).collect(), threshold))
}

pub fn excesses(s: &SortedSample, k: usize) -> Result<ExcessVectors> {
    let (log_excess, threshold) = log_excesses(s, k)?;
    let rel_excess = (1..=k).map(|i| s.top(i) / threshold).collect();
    Ok(ExcessVectors {
        log_excess,
        rel_excess,
    })
}

/// Hill estimator: the mean of the `k` log-excesses.
pub fn hill(s: &SortedSample, k: usize) -> Result<f64> {
    let (v, _) = log_excesses(s, k)?;
    Ok(v.iter().sum::<f64>() / k as f64)
}

/// Power mean of exponent `p` of the log-excesses, normalized by `Γ(p+1)`:
/// `((1/k) Σ V_ik^p / Γ(p+1))^(1/p)`, defined for `p > -1`, `p != 0`.
///
/// A zero log-excess with `p < 0` is a domain error.
pub fn pm(s: &SortedSample, k: usize, p: f64) -> Result<f64> {
    check_pm_parameter(p)?;
    let (v, _) = log_excesses(s, k)?;
    if p < 0.0 && v.iter().any(|&x| x == 0.0) {
        return Err(Error::Domain(format!(
            "zero log-excess with negative p = {p} (tie at the threshold)"
        )));
    }
    let moment = v.iter().map(|x| x.powf(p)).sum::<f64>() / k as f64;
    Ok(power_mean_from_moment(moment, p))
}

pub(crate) fn check_pm_parameter(p: f64) -> Result<()> {
    if p > -1.0 && p != 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "power mean needs p > -1 and p != 0, got {p}"
        )))
    }
}

/// `(moment / Γ(p+1))^(1/p)`, with the gamma factor taken in log space.
pub(crate) fn power_mean_from_moment(moment: f64, p: f64) -> f64 {
    if moment == 0.0 {
        return 0.0;
    }
    ((moment.ln() - ln_gamma(p + 1.0)) / p).exp()
}

/// Mean-of-order-p of the relative excesses:
/// `(1 - ((1/k) Σ U_ik^p)^(-1)) / p` for `p != 0`, Hill at `p = 0`.
///
/// Evaluated as `Σ (U^p - 1) / (p Σ U^p)`, the same quantity without the
/// cancellation in `1 - 1/mean` when the excesses are small.
pub fn hp(s: &SortedSample, k: usize, p: f64) -> Result<f64> {
    if !p.is_finite() {
        return Err(Error::Parameter(format!("p must be finite, got {p}")));
    }
    if p == 0.0 {
        return hill(s, k);
    }
    let (v, _) = log_excesses(s, k)?;
    let excess: f64 = v.iter().map(|x| (p * x).exp_m1()).sum();
    let mass: f64 = v.iter().map(|x| (p * x).exp()).sum();
    Ok(hp_from_mass(excess, mass, p))
}

/// `H_p` from `excess = Σ (U^p - 1)` and `mass = Σ U^p`.
pub(crate) fn hp_from_mass(excess: f64, mass: f64, p: f64) -> f64 {
    if excess == 0.0 {
        0.0
    } else if mass.is_infinite() {
        1.0 / p
    } else {
        excess / (p * mass)
    }
}

/// Normalizing sequence of the G family,
/// `(1/k) Σ_{i≤k} ln ln((n+1)/i) - ln ln((n+1)/(k+1))`.
///
/// Depends only on `(n, k)` and is strictly positive for `1 <= k <= n-1`.
pub fn t_seq_g(n: usize, k: usize) -> Result<f64> {
    if k == 0 || k >= n {
        return Err(Error::Range { k, n });
    }
    let m = (n + 1) as f64;
    let base = (m / (k + 1) as f64).ln().ln();
    let total: f64 = (1..=k).map(|i| (m / i as f64).ln().ln() - base).sum();
    Ok(total / k as f64)
}

/// One WTC estimate at level `k`.
///
/// | family    | value                   |
/// |-----------|-------------------------|
/// | `HatGG`   | `ln(n/k) · H_p(k)`      |
/// | `HatG`    | `H_p(k) / T_n(k)`       |
/// | `TildeGG` | `ln(n/k) · PM_p(k)`     |
/// | `TildeG`  | `PM_p(k) / T_n(k)`      |
pub fn wtc(s: &SortedSample, k: usize, spec: EstimatorSpec) -> Result<f64> {
    spec.validate()?;
    let mean = match spec.family.mean_kind() {
        MeanKind::Hat => hp(s, k, spec.p)?,
        MeanKind::Tilde => pm(s, k, spec.p)?,
    };
    let n = s.len();
    Ok(match spec.family.normalization() {
        Normalization::GG => (n as f64 / k as f64).ln() * mean,
        Normalization::G => mean / t_seq_g(n, k)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::Family;
    use std::f64::consts::E;

    fn geometric() -> SortedSample {
        SortedSample::from_sorted(vec![1.0, E, E * E, E * E * E]).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn geometric_excesses() {
        let x = excesses(&geometric(), 3).unwrap();
        for (v, want) in x.log_excess.iter().zip([3.0, 2.0, 1.0]) {
            close(*v, want, 1e-12);
        }
        for (u, want) in x.rel_excess.iter().zip([E.powi(3), E * E, E]) {
            close(*u, want, 1e-12);
        }
        let scaled = excesses(&geometric().scaled(7.0).unwrap(), 3).unwrap();
        for (a, b) in scaled.log_excess.iter().zip(&x.log_excess) {
            close(*a, *b, 1e-12);
        }
        for (a, b) in scaled.rel_excess.iter().zip(&x.rel_excess) {
            close(*a, *b, 1e-12);
        }
    }

    #[test]
    fn ties_give_zero_excess() {
        let s = SortedSample::from_sorted(vec![5.0; 4]).unwrap();
        let x = excesses(&s, 2).unwrap();
        assert_eq!(x.log_excess, vec![0.0, 0.0]);
        assert_eq!(x.rel_excess, vec![1.0, 1.0]);
        assert_eq!(hill(&s, 3).unwrap(), 0.0);
        assert_eq!(hp(&s, 3, -2.0).unwrap(), 0.0);
        assert_eq!(pm(&s, 3, 2.0).unwrap(), 0.0);
        assert!(matches!(pm(&s, 3, -0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn k_out_of_range() {
        let s = geometric();
        assert_eq!(excesses(&s, 0), Err(Error::Range { k: 0, n: 4 }));
        assert_eq!(hill(&s, 4), Err(Error::Range { k: 4, n: 4 }));
        assert!(t_seq_g(4, 4).is_err());
        assert!(wtc(&s, 4, EstimatorSpec { family: Family::HatGG, p: 0.0 }).is_err());
    }

    #[test]
    fn hill_values() {
        close(hill(&geometric(), 3).unwrap(), 2.0, 1e-12);
        close(hill(&geometric().scaled(0.01).unwrap(), 3).unwrap(), 2.0, 1e-12);
    }

    #[test]
    fn pm_values() {
        let s = geometric();
        close(pm(&s, 3, 2.0).unwrap(), (7.0f64 / 3.0).sqrt(), 1e-12);
        close(pm(&s, 3, 1.0).unwrap(), 2.0, 1e-12);
        // direct evaluation with Γ(1.5) = √π / 2
        let direct = ((3f64.sqrt() + 2f64.sqrt() + 1.0) / 3.0
            / (std::f64::consts::PI.sqrt() / 2.0))
            .powi(2);
        close(pm(&s, 3, 0.5).unwrap(), direct, 1e-12);
        close(direct, 2.432100900698127, 1e-12);
        assert!(matches!(pm(&s, 3, 0.0), Err(Error::Parameter(_))));
        assert!(matches!(pm(&s, 3, -1.0), Err(Error::Parameter(_))));
    }

    #[test]
    fn hp_values() {
        let s = geometric();
        close(hp(&s, 3, -1.0).unwrap(), 4.424937204888277, 1e-12);
        close(hp(&s, 3, 0.0).unwrap(), 2.0, 1e-12);
        close(hp(&s, 3, 1.0).unwrap(), 1.0 - 3.0 / (E.powi(3) + E * E + E), 1e-12);
        close(hp(&s, 3, 1.0).unwrap(), 0.9006388091612073, 1e-12);
    }

    #[test]
    fn t_seq_values() {
        close(t_seq_g(4, 3).unwrap(), 1.4055187972409267, 1e-12);
        let one_term = (101f64).ln().ln() - (101.0f64 / 2.0).ln().ln();
        close(t_seq_g(100, 1).unwrap(), one_term, 1e-14);
        for n in [2, 3, 10, 1000] {
            for k in 1..n {
                assert!(t_seq_g(n, k).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn wtc_values() {
        let s = geometric();
        let spec = |family, p| EstimatorSpec { family, p };
        close(wtc(&s, 3, spec(Family::HatGG, 0.0)).unwrap(), 0.5753641449035617, 1e-12);
        let tg = wtc(&s, 3, spec(Family::TildeG, 1.0)).unwrap();
        close(tg, 1.4229621147195306, 1e-12);
        close(tg, wtc(&s, 3, spec(Family::HatG, 0.0)).unwrap(), 1e-12);
        close(wtc(&s, 3, spec(Family::TildeGG, 2.0)).unwrap(), 0.4394416243640187, 1e-12);
        assert!(wtc(&s, 3, spec(Family::TildeGG, 0.0)).is_err());
    }
}
