//! Semi-parametric estimators of the Weibull tail coefficient built on
//! generalized means of log-excesses and relative excesses.
//!
//! * [`excess`] and [`curve`]: per-level estimators and whole `k = 1..n-1`
//!   curves in a single incremental pass.
//! * [`models`]: the test distributions, their true coefficient and
//!   second-order class, with reproducible sampling through [`SeededStream`].
//! * [`asymptotics`]: asymptotic bias, variance, AMSE and optimal `p`.
//! * [`mc`]: deterministic parallel Monte-Carlo mean/RMSE curves and the
//!   simulated optimal level.
//! * [`config`] and [`report`]: config files, CSV reports and run manifests
//!   behind the `wtail` binary.
//!
//! ```
//! use wtail::{wtc_curve, EstimatorSpec, Family, SortedSample};
//!
//! let s = SortedSample::from_unsorted(vec![0.3, 2.1, 1.4, 0.9, 3.3, 0.2]).unwrap();
//! let spec = EstimatorSpec::new(Family::TildeG, 1.0).unwrap();
//! let curve = wtc_curve(&s, spec, 1..=5).unwrap();
//! assert_eq!(curve.len(), 5);
//! ```

pub mod asymptotics;
pub mod config;
pub mod curve;
pub mod error;
pub mod estimator;
pub mod excess;
pub mod mc;
pub mod models;
pub mod report;
pub mod sample;
pub mod stream;

pub use asymptotics::{amse, bias_coefficient, optimal_p, variance_factor, AmseInput, AmseReport, OptimalP};
pub use curve::{wtc_curve, CurveContext};
pub use error::{Error, Result};
pub use estimator::{EstimatorSpec, Family, MeanKind, Normalization};
pub use excess::{excesses, hill, hp, pm, t_seq_g, wtc, ExcessVectors};
pub use mc::{
    optimal_level, replication_estimates, run_experiment, CurveSet, ExperimentConfig,
    ExperimentResult, OptimalSummary,
};
pub use models::{ModelId, ModelSpec, SecondOrder};
pub use sample::{Origin, SortedSample};
pub use stream::SeededStream;
