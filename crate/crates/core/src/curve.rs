//! Estimator curves over a whole range of `k` in near-linear time.
//!
//! Moving from `k` to `k + 1` lowers the threshold from `X_{n-k:n}` to
//! `X_{n-k-1:n}`, which shifts every log-excess by the same gap
//! `δ = ln(X_{n-k:n} / X_{n-k-1:n})`. Quantities with an exact update rule
//! under that shift are carried forward in `O(1)` per level:
//!
//! * `Σ V` (Hill): `S_{k+1} = S_k + (k+1) δ`,
//! * `Σ U^p` and `Σ (U^p - 1)` (`H_p`): multiply by `e^{pδ}` and add the
//!   new unit term,
//! * the log-log G normalizer, using the same re-basing on its own terms.
//!
//! `Σ V^p` for non-integer `p` has no such rule. It is answered per level by
//! a multilevel power-sum tree: blocks of log order statistics that sit far
//! enough above the threshold are summed through a truncated binomial
//! expansion about the block centre, using block moments precomputed once
//! per sample, and only the blocks adjacent to the threshold are summed
//! term by term. A query touches `O(log n)` blocks.

use std::ops::RangeInclusive;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::estimator::{EstimatorSpec, MeanKind, Normalization};
use crate::excess::{check_pm_parameter, hp_from_mass, power_mean_from_moment};
use crate::sample::SortedSample;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Per-sample state shared by every estimator curve drawn from one sample.
///
/// Building a context costs `O(n)`; the power-sum tree needed by the
/// `Tilde*` families is built on first use and then reused for every `p`.
#[derive(Debug)]
pub struct CurveContext {
    n: usize,
    /// `ln X_{n-j:n}` for `j = 0..n`, i.e. descending log order statistics.
    log_desc: Vec<f64>,
    /// `gap[j] = ln(X_{n-j:n} / X_{n-j-1:n})`.
    gap: Vec<f64>,
    /// `T_n(k)` for `k = 1..n`, index `k - 1`.
    t_seq: Vec<f64>,
    tree: OnceLock<PowerSumTree>,
}

impl CurveContext {
    pub fn new(s: &SortedSample) -> Self {
        let n = s.len();
        let log_desc: Vec<f64> = (1..=n).map(|j| s.top(j).ln()).collect();
        let gap = (1..n).map(|j| (s.top(j) / s.top(j + 1)).ln()).collect();
        Self {
            n,
            log_desc,
            gap,
            t_seq: t_seq_curve(n),
            tree: OnceLock::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `T_n(k)` for `k = 1..=n-1`.
    pub fn t_seq(&self) -> &[f64] {
        &self.t_seq
    }

    fn tree(&self) -> &PowerSumTree {
        self.tree.get_or_init(|| PowerSumTree::build(&self.log_desc))
    }

    /// Estimates at `k_min..=k_max`; `None` marks levels where the
    /// underlying mean is undefined (a zero log-excess with `p < 0`).
    pub fn curve(
        &self,
        spec: EstimatorSpec,
        k_range: RangeInclusive<usize>,
    ) -> Result<Vec<Option<f64>>> {
        spec.validate()?;
        let (k_min, k_max) = (*k_range.start(), *k_range.end());
        if k_min == 0 || k_min > k_max || k_max >= self.n {
            return Err(Error::Range {
                k: if k_min == 0 { 0 } else { k_max },
                n: self.n,
            });
        }
        let means = match spec.family.mean_kind() {
            MeanKind::Hat if spec.p == 0.0 => self.hill_means(k_max),
            MeanKind::Hat => self.hp_means(spec.p, k_max),
            MeanKind::Tilde => {
                check_pm_parameter(spec.p)?;
                if spec.p == 1.0 {
                    self.hill_means(k_max)
                } else {
                    self.pm_means(spec.p, k_min, k_max)
                }
            }
        };
        let n = self.n as f64;
        Ok((k_min..=k_max)
            .map(|k| {
                means[k - 1].map(|m| match spec.family.normalization() {
                    Normalization::GG => (n / k as f64).ln() * m,
                    Normalization::G => m / self.t_seq[k - 1],
                })
            })
            .collect())
    }

    fn hill_means(&self, k_max: usize) -> Vec<Option<f64>> {
        let mut sum = CompensatedSum::default();
        (1..=k_max)
            .map(|k| {
                sum.add(k as f64 * self.gap[k - 1]);
                Some(sum.value() / k as f64)
            })
            .collect()
    }

    fn hp_means(&self, p: f64, k_max: usize) -> Vec<Option<f64>> {
        // mass = Σ U^p, excess = Σ (U^p - 1) = mass - k, both carried
        // exactly under re-basing.
        let (mut mass, mut excess) = (0.0f64, 0.0f64);
        (1..=k_max)
            .map(|k| {
                let x = p * self.gap[k - 1];
                let (step, ratio) = (x.exp_m1(), x.exp());
                mass = (mass + 1.0) * ratio;
                excess = excess * ratio + k as f64 * step;
                Some(hp_from_mass(excess, mass, p))
            })
            .collect()
    }

    fn pm_means(&self, p: f64, k_min: usize, k_max: usize) -> Vec<Option<f64>> {
        let tree = self.tree();
        let weights = BinomialWeights::new(p);
        let mut out = vec![None; k_max];
        for k in k_min..=k_max {
            let threshold = self.log_desc[k];
            if p < 0.0 && self.log_desc[k - 1] == threshold {
                continue;
            }
            let moment = if p > DIRECT_P_LIMIT {
                direct_power_sum(&self.log_desc[..k], threshold, p)
            } else {
                tree.power_sum(&self.log_desc, k, p, &weights)
            };
            out[k - 1] = Some(power_mean_from_moment(moment / k as f64, p));
        }
        out
    }
}

/// Convenience wrapper: estimator curve of one sample for one spec.
pub fn wtc_curve(
    s: &SortedSample,
    spec: EstimatorSpec,
    k_range: RangeInclusive<usize>,
) -> Result<Vec<Option<f64>>> {
    CurveContext::new(s).curve(spec, k_range)
}

/// `T_n(k)`, `k = 1..n`, carried forward with
/// `W_{k+1} = W_k + (k+1) (g_{k+1} - g_{k+2})`, `g_j = ln ln((n+1)/j)`.
fn t_seq_curve(n: usize) -> Vec<f64> {
    let m = (n + 1) as f64;
    let mut w = CompensatedSum::default();
    (1..n)
        .map(|k| {
            // g_k - g_{k+1} = ln(1 + ln(1 + 1/k) / ln((n+1)/(k+1)))
            let kf = k as f64;
            let step = ((1.0 / kf).ln_1p() / (m / (kf + 1.0)).ln()).ln_1p();
            w.add(kf * step);
            w.value() / kf
        })
        .collect()
}

/// Above this `p` the binomial coefficients grow too fast for a fixed
/// truncation order; such curves are summed term by term.
const DIRECT_P_LIMIT: f64 = 8.0;
/// Block size of the finest tree level.
const LEAF: usize = 16;
/// Highest moment kept per block.
const MAX_ORDER: usize = 40;
/// Largest admissible `half_width / (distance to threshold + half_width)`.
const MAX_RATIO: f64 = 0.4;
/// `ln` of the truncation target for the expansion remainder.
const LN_TRUNCATION: f64 = -36.0;

fn direct_power_sum(values: &[f64], threshold: f64, p: f64) -> f64 {
    values.iter().map(|v| (v - threshold).powf(p)).sum()
}

struct BinomialWeights([f64; MAX_ORDER + 1]);

impl BinomialWeights {
    /// `C(p, m)` for `m = 0..=MAX_ORDER`.
    fn new(p: f64) -> Self {
        let mut w = [0.0; MAX_ORDER + 1];
        w[0] = 1.0;
        for m in 1..=MAX_ORDER {
            w[m] = w[m - 1] * (p - (m - 1) as f64) / m as f64;
        }
        Self(w)
    }
}

#[derive(Debug)]
struct Level {
    block: usize,
    center: Vec<f64>,
    half_width: Vec<f64>,
    low: Vec<f64>,
    /// `Σ (ℓ - centre)^m`, `m = 0..=MAX_ORDER`, row-major per block.
    moments: Vec<f64>,
}

#[derive(Debug)]
struct PowerSumTree {
    levels: Vec<Level>,
}

impl PowerSumTree {
    fn build(log_desc: &[f64]) -> Self {
        let n = log_desc.len();
        let mut levels = Vec::new();
        let mut block = LEAF;
        while block < n {
            let count = n / block;
            let mut level = Level {
                block,
                center: Vec::with_capacity(count),
                half_width: Vec::with_capacity(count),
                low: Vec::with_capacity(count),
                moments: Vec::with_capacity(count * (MAX_ORDER + 1)),
            };
            for chunk in log_desc.chunks_exact(block) {
                let (hi, lo) = (chunk[0], chunk[block - 1]);
                let center = 0.5 * (hi + lo);
                let mut acc = [0.0f64; MAX_ORDER + 1];
                for &v in chunk {
                    let d = v - center;
                    let mut pw = 1.0;
                    for a in acc.iter_mut() {
                        *a += pw;
                        pw *= d;
                    }
                }
                level.center.push(center);
                level.half_width.push(0.5 * (hi - lo));
                level.low.push(lo);
                level.moments.extend_from_slice(&acc);
            }
            levels.push(level);
            block *= 2;
        }
        Self { levels }
    }

    /// `Σ_{j<k} (log_desc[j] - log_desc[k])^p`.
    fn power_sum(&self, log_desc: &[f64], k: usize, p: f64, weights: &BinomialWeights) -> f64 {
        let threshold = log_desc[k];
        let mut total = 0.0;
        let mut pos = 0;
        for (depth, level) in self.levels.iter().enumerate().rev() {
            while pos + level.block <= k {
                total += self.block_sum(log_desc, depth, pos / level.block, threshold, p, weights);
                pos += level.block;
            }
        }
        total + direct_power_sum(&log_desc[pos..k], threshold, p)
    }

    fn block_sum(
        &self,
        log_desc: &[f64],
        depth: usize,
        index: usize,
        threshold: f64,
        p: f64,
        weights: &BinomialWeights,
    ) -> f64 {
        let level = &self.levels[depth];
        let gap = level.low[index] - threshold;
        let w = level.half_width[index];
        if w == 0.0 {
            // every entry equals `low`; p < 0 with gap 0 is filtered upstream
            return if gap == 0.0 { 0.0 } else { level.block as f64 * gap.powf(p) };
        }
        if gap > 0.0 {
            let ratio = w / (gap + w);
            if ratio <= MAX_RATIO {
                let order = ((LN_TRUNCATION / ratio.ln()).ceil() as usize).clamp(1, MAX_ORDER);
                let dist = gap + w;
                let inv = 1.0 / dist;
                let moments = &level.moments[index * (MAX_ORDER + 1)..][..=order];
                let mut poly = 0.0;
                for m in (0..=order).rev() {
                    poly = poly * inv + weights.0[m] * moments[m];
                }
                return dist.powf(p) * poly;
            }
        }
        if depth == 0 {
            let start = index * level.block;
            return direct_power_sum(&log_desc[start..start + level.block], threshold, p);
        }
        self.block_sum(log_desc, depth - 1, 2 * index, threshold, p, weights)
            + self.block_sum(log_desc, depth - 1, 2 * index + 1, threshold, p, weights)
    }
}
