//! Deterministic parallel Monte-Carlo replication of estimator curves.
//!
//! Replication `r` always draws from `SeededStream(seed, r)`. Replications
//! are grouped into fixed-size chunks whose boundaries do not depend on the
//! worker count; each chunk is accumulated sequentially and chunks are
//! merged in index order, so aggregated curves are bit-identical for any
//! number of workers.

use std::ops::RangeInclusive;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::curve::CurveContext;
use crate::error::{Error, Result};
use crate::estimator::EstimatorSpec;
use crate::models::ModelSpec;
use crate::stream::SeededStream;

/// Replications accumulated sequentially per work unit.
const CHUNK: usize = 16;
/// Chunks in flight between two ordered merges.
const WAVE: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub n: usize,
    pub replications: usize,
    pub estimators: Vec<EstimatorSpec>,
    pub experiment_seed: u64,
    /// Defaults to `1..=n-1`.
    pub k_range: Option<RangeInclusive<usize>>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        if self.estimators.is_empty() {
            return Err(Error::Config("estimator list is empty".into()));
        }
        if self.n < 2 {
            return Err(Error::Config(format!("n must be at least 2, got {}", self.n)));
        }
        for spec in &self.estimators {
            spec.validate()
                .map_err(|e| Error::Config(format!("estimator {spec}: {e}")))?;
        }
        let r = self.k_range();
        if *r.start() == 0 || r.start() > r.end() || *r.end() >= self.n {
            return Err(Error::Config(format!(
                "k range {}..={} does not fit 1..={}",
                r.start(),
                r.end(),
                self.n - 1
            )));
        }
        Ok(())
    }

    pub fn k_range(&self) -> RangeInclusive<usize> {
        self.k_range.clone().unwrap_or(1..=self.n - 1)
    }
}

/// Monte-Carlo mean and RMSE curves of one estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSet {
    pub spec: EstimatorSpec,
    /// Nominal sample size the experiment was run at.
    pub n: usize,
    pub replications: usize,
    pub k: Vec<usize>,
    /// `NaN` where no replication was defined.
    pub mean: Vec<f64>,
    pub rmse: Vec<f64>,
    pub defined_count: Vec<usize>,
    /// Standard error of `mean`.
    pub mean_se: Vec<f64>,
    /// Delta-method standard error of `rmse`.
    pub rmse_se: Vec<f64>,
}

/// Summary at the simulated optimal level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalSummary {
    pub k_hat: usize,
    pub osf: f64,
    pub mean_at_opt: f64,
    pub rmse_at_opt: f64,
    pub mean_se: f64,
    pub rmse_se: f64,
}

/// Result of [`run_experiment`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub curves: Vec<CurveSet>,
    /// Replication indices skipped because the drawn sample was degenerate.
    pub skipped: Vec<usize>,
}

impl ExperimentResult {
    pub fn curve(&self, spec: &EstimatorSpec) -> Option<&CurveSet> {
        self.curves.iter().find(|c| c.spec == *spec)
    }
}

/// Draws one sample and evaluates every estimator curve on it.
///
/// Returned arrays are indexed like `k_range`; levels beyond a truncated
/// sample's own `n - 1` are `None`.
pub fn replication_estimates(
    model: &ModelSpec,
    n: usize,
    stream: SeededStream,
    estimators: &[EstimatorSpec],
    k_range: RangeInclusive<usize>,
) -> Result<Vec<Vec<Option<f64>>>> {
    for spec in estimators {
        spec.validate()
            .map_err(|e| Error::Config(format!("estimator {spec}: {e}")))?;
    }
    let sample = model.sample(n, stream)?;
    let ctx = CurveContext::new(&sample);
    let (k_min, k_max) = (*k_range.start(), *k_range.end());
    let width = k_max + 1 - k_min;
    let top = k_max.min(ctx.n() - 1);
    estimators
        .iter()
        .map(|spec| {
            let mut row = if top >= k_min {
                ctx.curve(*spec, k_min..=top)?
            } else {
                Vec::new()
            };
            row.resize(width, None);
            Ok(row)
        })
        .collect()
}

#[derive(Debug, Clone)]
struct Accumulator {
    theta: f64,
    count: Vec<usize>,
    sum: Vec<f64>,
    sum_sq_err: Vec<f64>,
    sum_quad_err: Vec<f64>,
}

impl Accumulator {
    fn new(theta: f64, width: usize) -> Self {
        Self {
            theta,
            count: vec![0; width],
            sum: vec![0.0; width],
            sum_sq_err: vec![0.0; width],
            sum_quad_err: vec![0.0; width],
        }
    }

    fn push(&mut self, row: &[Option<f64>]) {
        for (j, v) in row.iter().enumerate() {
            if let Some(x) = v.filter(|x| x.is_finite()) {
                let e2 = (x - self.theta).powi(2);
                self.count[j] += 1;
                self.sum[j] += x;
                self.sum_sq_err[j] += e2;
                self.sum_quad_err[j] += e2 * e2;
            }
        }
    }

    fn merge(&mut self, other: &Accumulator) {
        for j in 0..self.count.len() {
            self.count[j] += other.count[j];
            self.sum[j] += other.sum[j];
            self.sum_sq_err[j] += other.sum_sq_err[j];
            self.sum_quad_err[j] += other.sum_quad_err[j];
        }
    }

    fn finish(&self, spec: EstimatorSpec, n: usize, replications: usize, k: Vec<usize>) -> CurveSet {
        let width = k.len();
        let mut curve = CurveSet {
            spec,
            n,
            replications,
            k,
            mean: vec![f64::NAN; width],
            rmse: vec![f64::NAN; width],
            defined_count: self.count.clone(),
            mean_se: vec![f64::NAN; width],
            rmse_se: vec![f64::NAN; width],
        };
        for j in 0..width {
            let c = self.count[j];
            if c == 0 {
                continue;
            }
            let cf = c as f64;
            let mean = self.sum[j] / cf;
            let mse = self.sum_sq_err[j] / cf;
            curve.mean[j] = mean;
            curve.rmse[j] = mse.sqrt();
            if c > 1 {
                let bias = mean - self.theta;
                let var = ((self.sum_sq_err[j] - cf * bias * bias) / (cf - 1.0)).max(0.0);
                curve.mean_se[j] = (var / cf).sqrt();
                let var_e2 = ((self.sum_quad_err[j] / cf - mse * mse) * cf / (cf - 1.0)).max(0.0);
                curve.rmse_se[j] = if mse > 0.0 {
                    (var_e2 / cf).sqrt() / (2.0 * mse.sqrt())
                } else {
                    0.0
                };
            }
        }
        curve
    }
}

/// Runs the experiment on the current rayon pool.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    run_experiment_with_progress(cfg, &|_, _| {})
}

/// Runs the experiment on a dedicated pool with `workers` threads.
pub fn run_experiment_on(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentResult> {
    run_on(cfg, workers, &|_, _| {})
}

pub fn run_on(
    cfg: &ExperimentConfig,
    workers: usize,
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Result<ExperimentResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_experiment_with_progress(cfg, progress))
}

/// Runs the experiment, calling `progress(completed, total)` as
/// replications finish.
pub fn run_experiment_with_progress(
    cfg: &ExperimentConfig,
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Result<ExperimentResult> {
    cfg.validate()?;
    let k_range = cfg.k_range();
    let width = k_range.end() + 1 - k_range.start();
    let fresh = || vec![Accumulator::new(cfg.model.theta, width); cfg.estimators.len()];
    let mut total = fresh();
    let mut skipped = Vec::new();
    let done = AtomicUsize::new(0);

    let chunks = cfg.replications.div_ceil(CHUNK);
    for wave_start in (0..chunks).step_by(WAVE) {
        let wave_end = (wave_start + WAVE).min(chunks);
        let partials: Vec<Result<(Vec<Accumulator>, Vec<usize>)>> = (wave_start..wave_end)
            .into_par_iter()
            .map(|chunk| {
                let mut acc = fresh();
                let mut skip = Vec::new();
                let first = chunk * CHUNK;
                for r in first..(first + CHUNK).min(cfg.replications) {
                    let stream = SeededStream::new(cfg.experiment_seed, r as u64);
                    match replication_estimates(
                        &cfg.model,
                        cfg.n,
                        stream,
                        &cfg.estimators,
                        k_range.clone(),
                    ) {
                        Ok(rows) => {
                            for (a, row) in acc.iter_mut().zip(&rows) {
                                a.push(row);
                            }
                        }
                        Err(Error::DegenerateSample { drawn, kept }) => {
                            log::warn!(
                                "replication {r}: degenerate sample ({kept} of {drawn} usable), skipped"
                            );
                            skip.push(r);
                        }
                        Err(e) => return Err(e),
                    }
                    let d = done.fetch_add(1, Ordering::Relaxed) + 1;
                    progress(d, cfg.replications);
                }
                Ok((acc, skip))
            })
            .collect();
        for partial in partials {
            let (acc, skip) = partial?;
            for (t, a) in total.iter_mut().zip(&acc) {
                t.merge(a);
            }
            skipped.extend(skip);
        }
    }

    let ks: Vec<usize> = k_range.collect();
    let curves = cfg
        .estimators
        .iter()
        .zip(&total)
        .map(|(spec, acc)| acc.finish(*spec, cfg.n, cfg.replications, ks.clone()))
        .collect();
    Ok(ExperimentResult { curves, skipped })
}

/// Simulated optimal level: the smallest `k` attaining the minimum RMSE.
///
/// Only levels where at least half of the replications are defined compete
/// for the minimum, so that a truncated model's sparsely populated top
/// levels cannot win on a handful of draws. Fails with
/// [`Error::EmptyCurve`] if no level is defined at all, and with
/// [`Error::InsufficientCoverage`] (reporting the best sparse level) if no
/// level is sufficiently covered.
pub fn optimal_level(curve: &CurveSet) -> Result<OptimalSummary> {
    let covered = |j: usize| 2 * curve.defined_count[j] >= curve.replications;
    let argmin = |eligible: &dyn Fn(usize) -> bool| {
        let mut best: Option<usize> = None;
        for (j, r) in curve.rmse.iter().enumerate() {
            if r.is_nan() || curve.defined_count[j] == 0 || !eligible(j) {
                continue;
            }
            if best.is_none_or(|b| *r < curve.rmse[b]) {
                best = Some(j);
            }
        }
        best
    };
    let Some(j) = argmin(&covered) else {
        let sparse = argmin(&|_| true).ok_or(Error::EmptyCurve)?;
        return Err(Error::InsufficientCoverage {
            k: curve.k[sparse],
            defined: curve.defined_count[sparse],
            replications: curve.replications,
        });
    };
    Ok(OptimalSummary {
        k_hat: curve.k[j],
        osf: curve.k[j] as f64 / curve.n as f64,
        mean_at_opt: curve.mean[j],
        rmse_at_opt: curve.rmse[j],
        mean_se: curve.mean_se[j],
        rmse_se: curve.rmse_se[j],
    })
}
