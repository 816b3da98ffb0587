//! Monte-Carlo mean and RMSE curves and the simulated optimal level.
//!
//! ```text
//! cargo run --release --example monte_carlo
//! ```

use std::sync::atomic::{AtomicUsize, Ordering};

use wtail::mc::{run_on, ExperimentConfig};
use wtail::{optimal_level, EstimatorSpec, Family, ModelId};

fn main() -> wtail::Result<()> {
    let cfg = ExperimentConfig {
        model: ModelId::Exponential.spec(),
        n: 500,
        replications: 1000,
        estimators: vec![
            EstimatorSpec::new(Family::TildeG, 1.0)?,
            EstimatorSpec::new(Family::TildeGG, 1.0)?,
            EstimatorSpec::new(Family::HatG, 0.25)?,
            EstimatorSpec::new(Family::HatGG, -10.0)?,
        ],
        experiment_seed: 42,
        k_range: None,
    };
    let last = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map_or(1, usize::from);
    let res = run_on(&cfg, workers, &|done, total| {
        let decile = done * 10 / total;
        if last.fetch_max(decile, Ordering::Relaxed) < decile {
            eprintln!("{done}/{total}");
        }
    })?;

    println!("{:<14}{:>7}{:>8}{:>10}{:>10}", "estimator", "k_hat", "osf", "mean", "rmse");
    for curve in &res.curves {
        let opt = optimal_level(curve)?;
        println!(
            "{:<14}{:>7}{:>8.4}{:>10.4}{:>10.4}",
            curve.spec.id(),
            opt.k_hat,
            opt.osf,
            opt.mean_at_opt,
            opt.rmse_at_opt
        );
    }

    let flat = &res.curves[0];
    let worst = (50..=450)
        .map(|k| (flat.mean[k - 1] - 1.0).abs())
        .fold(0.0, f64::max);
    println!("\n{}: max |mean - 1| over k in 50..=450 is {worst:.4}", flat.spec.id());
    Ok(())
}
