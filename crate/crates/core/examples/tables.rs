//! Summary tables at the simulated optimal level, written as CSV with a
//! manifest, from a config given inline.
//!
//! ```text
//! cargo run --release --example tables -- /tmp/wtail-tables
//! ```

use std::path::PathBuf;

use wtail::config::RunConfig;
use wtail::report::{self, NumberFormat, RunOptions};

const CONFIG: &str = r#"
seed = 2024
replications = 300

[[experiment]]
model = "weibull(2,1)"
n = [100, 400]

[[experiment]]
model = "gumbel"
n = [100, 400]
estimators = ["tildeG_p1", "hatG_p-2"]
"#;

fn main() -> wtail::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("wtail-tables"), PathBuf::from);
    let cfg = RunConfig::parse(CONFIG)?;
    let opts = RunOptions {
        workers: None,
        format: NumberFormat { digits: Some(4) },
    };
    let manifest = report::cmd_tables(&cfg, &out, opts)?;
    print!("{}", std::fs::read_to_string(out.join("tables.txt"))?);
    println!("wrote {:?} to {}", manifest.outputs, out.display());

    // The manifest echoes the effective config and can be fed back in.
    let again = report::manifest_config(&out)?;
    assert_eq!(again, cfg);
    Ok(())
}
