//! The test distributions: true coefficient, second-order class and
//! reproducible samples.
//!
//! ```text
//! cargo run --example models
//! ```

use wtail::{ModelId, SecondOrder, SeededStream};

fn main() -> wtail::Result<()> {
    let models = ModelId::STUDY
        .into_iter()
        .chain([ModelId::Logistic, ModelId::GumbelMu(-1.0)]);
    println!("{:<16}{:>7}  {:<22}{:>8}{:>10}", "model", "theta", "B(t)", "kept", "max");
    for id in models {
        let model = id.spec();
        let class = match model.second_order {
            SecondOrder::Zero => "0".to_string(),
            SecondOrder::AlphaOverT { alpha: Some(a) } => format!("{a:.4}/t"),
            SecondOrder::AlphaOverT { alpha: None } => "alpha/t".to_string(),
            SecondOrder::LogOverT => "~ ln(t)/t".to_string(),
        };
        let sample = model.sample(1000, SeededStream::new(2024, 0))?;
        let max = sample.top(1);
        println!(
            "{:<16}{:>7}  {:<22}{:>8}{:>10.4}",
            id.to_string(),
            model.theta,
            class,
            sample.len(),
            max
        );
    }

    // Same seed and replication index, same sample.
    let a = ModelId::Gamma0751.spec().sample(50, SeededStream::new(5, 3))?;
    let b = ModelId::Gamma0751.spec().sample(50, SeededStream::new(5, 3))?;
    assert_eq!(a.values(), b.values());
    println!("\norigin of a sample: {:?}", a.origin());
    Ok(())
}
