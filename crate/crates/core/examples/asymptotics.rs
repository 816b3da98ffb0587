//! Asymptotic bias, variance and AMSE, and the bias-cancelling `p`.
//!
//! ```text
//! cargo run --example asymptotics
//! ```

use wtail::asymptotics::{amse, optimal_p, variance_factor, AmseInput, OptimalP};
use wtail::{Family, MeanKind, ModelId, SecondOrder};

fn main() -> wtail::Result<()> {
    println!("variance factor of the power mean:");
    for p in [0.25, 0.5, 1.0, 2.0, 3.5] {
        println!("  p = {p:<5} v(p) = {:.6}", variance_factor(MeanKind::Tilde, p)?);
    }

    let (n, k, theta) = (1000, 100, 1.0);
    println!("\nAMSE at n = {n}, k = {k}, theta = {theta}, B = 0:");
    for family in Family::ALL {
        for p in [0.5, 1.0, 2.0] {
            let r = amse(&AmseInput {
                family,
                p,
                theta,
                n: Some(n),
                k,
                second_order: SecondOrder::Zero,
            })?;
            println!(
                "  {:<8} p = {p:<4} bias^2 = {:.5}  var = {:.5}  amse = {:.5}",
                family.to_string(),
                r.bias_sq,
                r.variance,
                r.amse
            );
        }
    }

    println!("\noptimal p for the alpha/t models:");
    for id in [ModelId::Logistic, ModelId::GumbelMu(-1.0), ModelId::GumbelMu(-3.0)] {
        let model = id.spec();
        let alpha = model.second_order.alpha().expect("alpha/t class");
        for family in [Family::TildeGG, Family::TildeG] {
            let text = match optimal_p(family, alpha, model.theta)? {
                OptimalP::Feasible(p) => format!("{p}"),
                OptimalP::Infeasible => "infeasible".into(),
            };
            println!("  {:<16}{:<9}{text}", id.to_string(), family.to_string());
        }
    }
    Ok(())
}
