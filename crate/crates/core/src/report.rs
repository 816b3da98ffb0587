//! Experiment runners that write CSV reports and a run manifest.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::asymptotics::{self, AmseInput, AmseReport, OptimalP};
use crate::config::{self, ExperimentSection, RunConfig};
use crate::curve::CurveContext;
use crate::error::{Error, Result};
use crate::estimator::{EstimatorSpec, Family, MeanKind};
use crate::excess::{hill, hp, pm, wtc};
use crate::mc::{self, CurveSet, ExperimentConfig, ExperimentResult, OptimalSummary};
use crate::models::{ModelId, SecondOrder};
use crate::stream::{splitmix64, SeededStream};

pub const MANIFEST_FILE: &str = "manifest.toml";
pub const AMSE_HEADER: &str = "family,p,theta,alpha,n,k,bias_sq,variance,amse";

/// Numeric cell rendering.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NumberFormat {
    /// Fixed decimals; `None` keeps 17 significant digits.
    pub digits: Option<usize>,
}

impl NumberFormat {
    pub fn cell(&self, x: f64) -> String {
        if !x.is_finite() {
            return "NA".into();
        }
        match self.digits {
            Some(d) => format!("{x:.d$}"),
            None => format!("{x:.16e}"),
        }
    }
}

/// Options shared by the experiment commands.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Worker threads; defaults to the machine's parallelism.
    pub workers: Option<usize>,
    pub format: NumberFormat,
}

impl RunOptions {
    fn workers(&self) -> usize {
        self.workers
            .or_else(|| std::thread::available_parallelism().ok().map(usize::from))
            .unwrap_or(1)
    }
}

/// Record of a finished run, written last as `manifest.toml`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub experiment_seed: u64,
    pub replications: usize,
    pub wall_time_seconds: f64,
    /// Emitted files, relative to the output directory.
    pub outputs: Vec<String>,
    pub config: RunConfig,
}

impl RunManifest {
    pub fn to_toml(&self) -> String {
        #[derive(Serialize)]
        struct Header<'a> {
            command: &'a str,
            version: &'a str,
            experiment_seed: String,
            replications: usize,
            wall_time_seconds: f64,
            outputs: &'a [String],
        }
        let head = Header {
            command: &self.command,
            version: &self.version,
            experiment_seed: self.experiment_seed.to_string(),
            replications: self.replications,
            wall_time_seconds: self.wall_time_seconds,
            outputs: &self.outputs,
        };
        let mut out = toml::to_string(&head).expect("manifest header serializes");
        out.push('\n');
        out.push_str(&config::echo_as_table(&self.config));
        out
    }
}

/// Seed of the experiment for one `(model, n)` cell.
pub fn cell_seed(seed: u64, model: ModelId, n: usize) -> u64 {
    let mut state = seed;
    for b in model.slug().bytes().chain((n as u64).to_le_bytes()) {
        state = splitmix64(&mut state) ^ u64::from(b);
    }
    splitmix64(&mut state)
}

fn experiment_for(cfg: &RunConfig, section: &ExperimentSection, n: usize) -> Result<ExperimentConfig> {
    let k_min = section.k_min.unwrap_or(1);
    let k_max = section.k_max.unwrap_or(n - 1);
    if k_max >= n {
        return Err(Error::Config(format!(
            "k_max = {k_max} needs n > {k_max}, but experiment {} has n = {n}",
            section.model
        )));
    }
    let range = (section.k_min.is_some() || section.k_max.is_some()).then_some(k_min..=k_max);
    let exp = ExperimentConfig {
        model: section.model.spec(),
        n,
        replications: cfg.replications,
        estimators: section.estimators.clone(),
        experiment_seed: cell_seed(cfg.seed, section.model, n),
        k_range: range,
    };
    exp.validate()?;
    Ok(exp)
}

fn run_cell(exp: &ExperimentConfig, workers: usize) -> Result<ExperimentResult> {
    let label = format!("{} n={}", exp.model.id, exp.n);
    let step = (exp.replications / 10).max(1);
    let started = Instant::now();
    let res = mc::run_on(exp, workers, &|done, total| {
        if done % step == 0 || done == total {
            log::debug!("{label}: {done}/{total} replications");
        }
    })?;
    log::info!("{label}: {} replications in {:.2?}", exp.replications, started.elapsed());
    if !res.skipped.is_empty() {
        log::warn!("{label}: {} degenerate replications skipped", res.skipped.len());
    }
    Ok(res)
}

/// Validates every experiment of `cfg` without sampling.
pub fn check_config(cfg: &RunConfig) -> Result<()> {
    if cfg.experiments.is_empty() {
        return Err(Error::Config("no [[experiment]] sections".into()));
    }
    for section in &cfg.experiments {
        for &n in &section.n {
            experiment_for(cfg, section, n)?;
        }
    }
    Ok(())
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
    w.write_record(header).map_err(|e| Error::Io(e.to_string()))?;
    for row in rows {
        w.write_record(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// File name of the curve CSV of one `(model, n)` cell.
pub fn curves_file_name(model: ModelId, n: usize) -> String {
    format!("curves_{}_n{n}.csv", model.slug())
}

/// Header and rows of a curves CSV.
pub fn curves_table(curves: &[CurveSet], format: NumberFormat) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header = vec!["k".to_string()];
    for c in curves {
        header.push(format!("mean_{}", c.spec.id()));
        header.push(format!("rmse_{}", c.spec.id()));
    }
    let ks = curves.first().map_or(&[][..], |c| &c.k[..]);
    let rows = ks
        .iter()
        .enumerate()
        .map(|(j, k)| {
            let mut row = vec![k.to_string()];
            for c in curves {
                row.push(format.cell(c.mean[j]));
                row.push(format.cell(c.rmse[j]));
            }
            row
        })
        .collect();
    (header, rows)
}

fn finish(
    command: &str,
    cfg: &RunConfig,
    out: &Path,
    started: Instant,
    outputs: Vec<String>,
) -> Result<RunManifest> {
    let manifest = RunManifest {
        command: command.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        experiment_seed: cfg.seed,
        replications: cfg.replications,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        outputs,
        config: cfg.clone(),
    };
    std::fs::write(out.join(MANIFEST_FILE), manifest.to_toml())?;
    Ok(manifest)
}

/// Mean and RMSE curves: one CSV per `(model, n)`.
pub fn cmd_curves(cfg: &RunConfig, out: &Path, opts: RunOptions) -> Result<RunManifest> {
    check_config(cfg)?;
    let started = Instant::now();
    std::fs::create_dir_all(out)?;
    let mut outputs = Vec::new();
    for section in &cfg.experiments {
        for &n in &section.n {
            let exp = experiment_for(cfg, section, n)?;
            let res = run_cell(&exp, opts.workers())?;
            let (header, rows) = curves_table(&res.curves, opts.format);
            let name = curves_file_name(section.model, n);
            write_csv(&out.join(&name), &header, &rows)?;
            outputs.push(name);
        }
    }
    finish("curves", cfg, out, started, outputs)
}

/// The three summary tables at the simulated optimal level.
#[derive(Debug, Clone, PartialEq)]
pub struct Tables {
    pub sizes: Vec<usize>,
    pub rows: Vec<TableRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub model: ModelId,
    pub spec: EstimatorSpec,
    /// One entry per size in [`Tables::sizes`].
    pub cells: Vec<Option<OptimalSummary>>,
}

/// Runs every experiment and summarizes each curve at its optimal level.
pub fn compute_tables(cfg: &RunConfig, opts: RunOptions) -> Result<Tables> {
    check_config(cfg)?;
    let sizes: Vec<usize> = cfg
        .experiments
        .iter()
        .flat_map(|s| s.n.iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut rows = Vec::new();
    for section in &cfg.experiments {
        let first = rows.len();
        rows.extend(section.estimators.iter().map(|&spec| TableRow {
            model: section.model,
            spec,
            cells: vec![None; sizes.len()],
        }));
        for &n in &section.n {
            let col = sizes.binary_search(&n).expect("size collected above");
            let res = run_cell(&experiment_for(cfg, section, n)?, opts.workers())?;
            for (i, curve) in res.curves.iter().enumerate() {
                rows[first + i].cells[col] = Some(mc::optimal_level(curve)?);
            }
        }
    }
    Ok(Tables { sizes, rows })
}

impl Tables {
    fn csv(&self, pick: fn(&OptimalSummary) -> f64, format: NumberFormat) -> (Vec<String>, Vec<Vec<String>>) {
        let mut header: Vec<String> = ["model", "estimator", "p"].map(String::from).to_vec();
        header.extend(self.sizes.iter().map(|n| n.to_string()));
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![r.model.to_string(), r.spec.family.to_string(), r.spec.p.to_string()];
                row.extend(r.cells.iter().map(|c| format.cell(c.as_ref().map_or(f64::NAN, pick))));
                row
            })
            .collect();
        (header, rows)
    }

    /// Fixed-width text rendering with one block per table.
    pub fn pretty(&self, digits: usize) -> String {
        let blocks: [(&str, fn(&OptimalSummary) -> f64); 3] = [
            ("Mean value at the simulated optimal level", |s| s.mean_at_opt),
            ("RMSE at the simulated optimal level", |s| s.rmse_at_opt),
            ("Simulated optimal sample fraction", |s| s.osf),
        ];
        let width = (digits + 4).max(7);
        let mut out = String::new();
        for (title, pick) in blocks {
            let _ = writeln!(out, "{title}\n");
            let _ = write!(out, "{:<20}", "");
            for n in &self.sizes {
                let _ = write!(out, "{n:>width$}");
            }
            out.push('\n');
            let mut last = None;
            for r in &self.rows {
                if last != Some(r.model) {
                    let _ = writeln!(out, "{} (theta = {})", r.model, r.model.spec().theta);
                    last = Some(r.model);
                }
                let _ = write!(out, "{:<20}", format!("  {} p={}", r.spec.family, r.spec.p));
                for c in &r.cells {
                    let cell = c.map_or("NA".into(), |s| format!("{:.digits$}", pick(&s)));
                    let _ = write!(out, "{cell:>width$}");
                }
                out.push('\n');
            }
            out.push('\n');
        }
        out
    }
}

/// Writes `table1_mean.csv`, `table2_rmse.csv`, `table3_osf.csv` and
/// `tables.txt`.
pub fn cmd_tables(cfg: &RunConfig, out: &Path, opts: RunOptions) -> Result<RunManifest> {
    let started = Instant::now();
    let tables = compute_tables(cfg, opts)?;
    std::fs::create_dir_all(out)?;
    let files: [(&str, fn(&OptimalSummary) -> f64); 3] = [
        ("table1_mean.csv", |s| s.mean_at_opt),
        ("table2_rmse.csv", |s| s.rmse_at_opt),
        ("table3_osf.csv", |s| s.osf),
    ];
    let mut outputs = Vec::new();
    for (name, pick) in files {
        let (header, rows) = tables.csv(pick, opts.format);
        write_csv(&out.join(name), &header, &rows)?;
        outputs.push(name.to_string());
    }
    std::fs::write(out.join("tables.txt"), tables.pretty(opts.format.digits.unwrap_or(4)))?;
    outputs.push("tables.txt".into());
    finish("tables", cfg, out, started, outputs)
}

/// Reads the `[config]` echo of a manifest in `dir`.
pub fn manifest_config(dir: &Path) -> Result<RunConfig> {
    RunConfig::load(&dir.join(MANIFEST_FILE))
}

/// One CSV row under [`AMSE_HEADER`].
pub fn amse_row(input: &AmseInput, report: &AmseReport, format: NumberFormat) -> String {
    let alpha = match input.second_order {
        SecondOrder::Zero => "0".to_string(),
        other => other.alpha().map_or("NA".into(), |a| a.to_string()),
    };
    let n = input.n.map_or("NA".into(), |n| n.to_string());
    format!(
        "{},{},{},{alpha},{n},{},{},{},{}",
        input.family,
        input.p,
        input.theta,
        input.k,
        format.cell(report.bias_sq),
        format.cell(report.variance),
        format.cell(report.amse)
    )
}

/// Renders an optimal-p result as printed by the CLI.
pub fn optimal_p_text(opt: OptimalP) -> String {
    match opt {
        OptimalP::Feasible(p) => p.to_string(),
        OptimalP::Infeasible => "infeasible".into(),
    }
}

/// Outcome of one built-in consistency check.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Quick internal consistency checks, independent of any config.
pub fn selftest() -> Vec<SelfCheck> {
    let mut checks = Vec::new();
    let mut push = |name, passed, detail: String| checks.push(SelfCheck { name, passed, detail });

    let model = ModelId::Exponential.spec();
    let sample = model.sample(500, SeededStream::new(1, 0)).expect("exponential sample");
    let mut worst: f64 = 0.0;
    for k in [1, 10, 100, 499] {
        let h = hill(&sample, k).unwrap();
        worst = worst
            .max((pm(&sample, k, 1.0).unwrap() - h).abs())
            .max((hp(&sample, k, 0.0).unwrap() - h).abs());
    }
    push("identities", worst < 1e-12, format!("max deviation {worst:.3e}"));

    let ctx = CurveContext::new(&sample);
    let mut worst: f64 = 0.0;
    for family in Family::ALL {
        for p in [-2.0, -0.25, 0.25, 1.0, 2.0, 3.5] {
            let Ok(spec) = EstimatorSpec::new(family, p) else { continue };
            let curve = ctx.curve(spec, 1..=499).unwrap();
            for k in [1, 7, 50, 250, 499] {
                let direct = wtc(&sample, k, spec).unwrap();
                let fast = curve[k - 1].unwrap();
                worst = worst.max((fast - direct).abs() / direct.abs().max(1e-300));
            }
        }
    }
    push("incremental curves", worst < 1e-9, format!("max relative deviation {worst:.3e}"));

    let v = asymptotics::variance_factor(MeanKind::Tilde, 1.0).unwrap();
    push("variance factor", (v - 1.0).abs() < 1e-12, format!("v(1) = {v}"));

    let logistic = asymptotics::optimal_p(Family::TildeGG, -std::f64::consts::LN_2, 1.0);
    let gumbel = [Family::TildeGG, Family::TildeG].map(|f| asymptotics::optimal_p(f, 1.0, 1.0));
    push(
        "optimal p",
        logistic == Ok(OptimalP::Infeasible)
            && gumbel == [Ok(OptimalP::Feasible(1.0)), Ok(OptimalP::Feasible(3.0))],
        format!("logistic {logistic:?}, gumbel(mu=-1) {gumbel:?}"),
    );

    let exp = ExperimentConfig {
        model,
        n: 100,
        replications: 40,
        estimators: vec![EstimatorSpec::new(Family::TildeG, 1.0).unwrap()],
        experiment_seed: 5,
        k_range: None,
    };
    let runs = [1, 3].map(|w| mc::run_experiment_on(&exp, w).map(|r| r.curves));
    let same = matches!(&runs, [Ok(a), Ok(b)] if a == b);
    push("deterministic replication", same, "1 vs 3 workers".into());
    checks
}

/// Flags of the `asymptotics` command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticsRequest {
    pub family: Family,
    pub p: Option<f64>,
    pub theta: f64,
    /// `B(t) = alpha / t`; exclusive with `b0`.
    pub alpha: Option<f64>,
    /// `B = 0`.
    pub b0: bool,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub optimal_p: bool,
}

/// Output of the `asymptotics` command: the optimal `p` (or `infeasible`),
/// or a CSV header plus one AMSE row.
pub fn cmd_asymptotics(req: &AsymptoticsRequest, format: NumberFormat) -> Result<String> {
    let usage = |m: &str| Error::Parameter(m.to_string());
    let second_order = match (req.alpha, req.b0) {
        (Some(_), true) => return Err(usage("--alpha and --b0 are mutually exclusive")),
        (Some(a), false) => SecondOrder::AlphaOverT { alpha: Some(a) },
        (None, true) => SecondOrder::Zero,
        (None, false) => return Err(usage("one of --alpha or --b0 is required")),
    };
    if req.optimal_p {
        let alpha = req.alpha.unwrap_or(0.0);
        let opt = asymptotics::optimal_p(req.family, alpha, req.theta)?;
        return Ok(format!("{}\n", optimal_p_text(opt)));
    }
    let p = req.p.ok_or_else(|| usage("--p is required"))?;
    let k = req.k.ok_or_else(|| usage("--k is required"))?;
    let input = AmseInput {
        family: req.family,
        p,
        theta: req.theta,
        n: req.n,
        k,
        second_order,
    };
    let report = asymptotics::amse(&input)?;
    Ok(format!("{AMSE_HEADER}\n{}\n", amse_row(&input, &report, format)))
}
