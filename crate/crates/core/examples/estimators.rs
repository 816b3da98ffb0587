//! Point estimates of the Weibull tail coefficient at a few levels `k`.
//!
//! ```text
//! cargo run --example estimators
//! ```

use wtail::{excesses, hill, t_seq_g, wtc, EstimatorSpec, Family, ModelId, SeededStream};

fn main() -> wtail::Result<()> {
    let model = ModelId::Weibull21.spec();
    let sample = model.sample(1000, SeededStream::new(7, 0))?;
    println!("{} sample of n = {}, true theta = {}", model.id, sample.len(), model.theta);

    let k = 200;
    let ex = excesses(&sample, k)?;
    println!(
        "k = {k}: threshold {:.4}, largest log-excess {:.4}, largest relative excess {:.4}",
        sample.top(k + 1),
        ex.log_excess[0],
        ex.rel_excess[0]
    );
    println!("Hill = {:.5}, T_n(k) = {:.5}", hill(&sample, k)?, t_seq_g(sample.len(), k)?);

    let menu = [
        (Family::TildeG, 1.0),
        (Family::TildeG, 0.75),
        (Family::TildeGG, 0.25),
        (Family::HatG, -0.25),
        (Family::HatG, 0.25),
        (Family::HatGG, -20.0),
    ];
    println!("\n{:<14}{:>10}{:>10}{:>10}", "estimator", "k=50", "k=200", "k=600");
    for (family, p) in menu {
        let spec = EstimatorSpec::new(family, p)?;
        print!("{:<14}", spec.id());
        for k in [50, 200, 600] {
            print!("{:>10.4}", wtc(&sample, k, spec)?);
        }
        println!();
    }

    // p = 0 is not a power mean; the spec constructor rejects it.
    assert!(EstimatorSpec::new(Family::TildeG, 0.0).is_err());
    Ok(())
}
