use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use wtail::config::RunConfig;
use wtail::{wtc_curve, EstimatorSpec, ModelId, SeededStream};

fn wtail(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wtail"))
        .args(args)
        .env_remove("WTAIL_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.toml");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn asymptotics_examples() {
    let o = wtail(&["asymptotics", "--family", "tildeGG", "--alpha", "1", "--theta", "1", "--optimal-p"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1");

    let o = wtail(&["asymptotics", "--family", "tildeGG", "--alpha", "-0.6931", "--theta", "1", "--optimal-p"]);
    assert_eq!(stdout(&o).trim(), "infeasible");

    let o = wtail(&["asymptotics", "--family", "tildeG", "--b0", "--theta", "1", "--p", "1", "--k", "100"]);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("family,p,theta,alpha,n,k,bias_sq,variance,amse"));
    let amse: f64 = lines.next().unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!((amse - 0.01).abs() < 1e-15);

    let o = wtail(&["asymptotics", "--family", "hatG", "--alpha", "1", "--b0", "--p", "1", "--k", "10"]);
    assert_eq!(o.status.code(), Some(2));
    let o = wtail(&["asymptotics", "--family", "tildeGG", "--alpha", "1", "--p", "2", "--k", "10"]);
    assert_eq!(o.status.code(), Some(2), "n is needed for a nonzero bias");
}

#[test]
fn config_errors_exit_two_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "replications = 5\n\n[[experiment]]\nmodel = \"exponential\"\nn = 50\nestimators = []\n",
    );
    let o = wtail(&["curves", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("run.toml:6:"), "{err}");

    let cfg = write_config(
        dir.path(),
        "[[experiment]]\nmodel = \"exponential\"\nn = 50\nestimators = [\"tildeGG_p-1\"]\n",
    );
    let o = wtail(&["curves", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":4:"));
}

#[test]
fn single_replication_csv_is_the_raw_curve() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "seed = 42\nreplications = 1\n\n[[experiment]]\nmodel = \"half-logistic\"\nn = 60\nestimators = [\"tildeG_p0.5\"]\n",
    );
    let out = dir.path().join("o");
    let o = wtail(&["curves", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out.join("curves_half-logistic_n60.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,mean_tildeG_p0.5,rmse_tildeG_p0.5"));

    let seed = wtail::report::cell_seed(42, ModelId::HalfLogistic, 60);
    let s = ModelId::HalfLogistic.spec().sample(60, SeededStream::new(seed, 0)).unwrap();
    let raw = wtc_curve(&s, "tildeG_p0.5".parse::<EstimatorSpec>().unwrap(), 1..=59).unwrap();
    for (line, x) in lines.zip(&raw) {
        let cells: Vec<&str> = line.split(',').collect();
        let mean: f64 = cells[1].parse().unwrap();
        let rmse: f64 = cells[2].parse().unwrap();
        assert_eq!(mean, x.unwrap());
        assert!((rmse - (x.unwrap() - 1.0).abs()).abs() < 1e-15);
    }
}

#[test]
fn manifest_round_trip_and_worker_independence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "seed = 9\nreplications = 30\n\n[[experiment]]\nmodel = \"gumbel\"\nn = [40, 80]\nestimators = [\"hatG_p-2\", \"tildeGG_p0.25\"]\n\n[[experiment]]\nmodel = \"gumbel(mu=-1)\"\nn = 50\nestimators = [\"tildeG_p3\"]\n",
    );
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let o = wtail(&["curves", "--config", &cfg, "--out", a.to_str().unwrap(), "--workers", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest = a.join("manifest.toml");
    let o = Command::new(env!("CARGO_BIN_EXE_wtail"))
        .args(["curves", "--config", manifest.to_str().unwrap(), "--out", b.to_str().unwrap()])
        .env("WTAIL_WORKERS", "8")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let listed = RunConfig::load(&manifest).unwrap();
    assert_eq!(listed.replications, 30);
    let text = fs::read_to_string(&manifest).unwrap();
    let names = ["curves_gumbel_n40.csv", "curves_gumbel_n80.csv", "curves_gumbel_mu_-1_n50.csv"];
    for name in names {
        assert!(text.contains(name), "{name} missing from manifest");
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn tables_command_writes_three_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "replications = 20\n\n[[experiment]]\nmodel = \"exponential\"\nn = [100, 200]\nestimators = [\"tildeG_p1\", \"hatGG_p-10\"]\n\n[[experiment]]\nmodel = \"weibull(2,1)\"\nn = 200\nestimators = [\"tildeG_p1\"]\n",
    );
    let out = dir.path().join("t");
    let o = wtail(&["tables", "--config", &cfg, "--out", out.to_str().unwrap(), "--digits", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let t1 = fs::read_to_string(out.join("table1_mean.csv")).unwrap();
    let lines: Vec<&str> = t1.lines().collect();
    assert_eq!(lines[0], "model,estimator,p,100,200");
    assert!(lines[1].starts_with("exponential,tildeG,1,"));
    assert!(lines[3].starts_with("\"weibull(2,1)\",tildeG,1,NA,0."));
    let osf = fs::read_to_string(out.join("table3_osf.csv")).unwrap();
    for cell in osf.lines().skip(1).flat_map(|l| l.rsplit(',').take(1)) {
        let v: f64 = cell.parse().unwrap();
        assert!(v > 0.0 && v < 1.0);
    }
    assert!(fs::read_to_string(out.join("tables.txt")).unwrap().contains("exponential (theta = 1)"));
    let manifest = fs::read_to_string(out.join("manifest.toml")).unwrap();
    for f in ["table1_mean.csv", "table2_rmse.csv", "table3_osf.csv", "tables.txt"] {
        assert!(manifest.contains(f));
    }
}

#[test]
fn selftest_passes() {
    let o = wtail(&["selftest"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS")));
}
