//! Whole estimator curves over `k = 1..n-1` sharing one sorted sample.
//!
//! ```text
//! cargo run --release --example curves > curves.csv
//! ```

use std::time::Instant;

use wtail::{CurveContext, EstimatorSpec, Family, ModelId, SeededStream};

fn main() -> wtail::Result<()> {
    let sample = ModelId::Exponential.spec().sample(2000, SeededStream::new(1, 0))?;
    let n = sample.len();
    let ctx = CurveContext::new(&sample);

    let specs = [
        EstimatorSpec::new(Family::TildeG, 1.0)?,
        EstimatorSpec::new(Family::TildeG, 1.25)?,
        EstimatorSpec::new(Family::TildeGG, 0.25)?,
        EstimatorSpec::new(Family::HatG, 0.5)?,
        EstimatorSpec::new(Family::HatGG, -10.0)?,
    ];
    let started = Instant::now();
    let curves = specs
        .iter()
        .map(|&s| ctx.curve(s, 1..=n - 1))
        .collect::<wtail::Result<Vec<_>>>()?;
    eprintln!("{} curves of {} levels in {:.2?}", specs.len(), n - 1, started.elapsed());

    print!("k");
    for s in &specs {
        print!(",{}", s.id());
    }
    println!();
    for k in (10..n).step_by(10) {
        print!("{k}");
        for c in &curves {
            print!(",{:.6}", c[k - 1].unwrap_or(f64::NAN));
        }
        println!();
    }
    Ok(())
}
