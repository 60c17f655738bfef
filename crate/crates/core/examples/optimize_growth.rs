//! Finds the growth-optimal pre-sleep and awakening fractions three ways.
//!
//! Run with `cargo run --example optimize_growth`.

use sleeping_kelly::growth::{optimize_growth, GrowthMethod};

fn main() -> sleeping_kelly::Result<()> {
    let methods = [
        GrowthMethod::ClosedForm,
        GrowthMethod::Grid { resolution: 0.01 },
        GrowthMethod::Gradient { tolerance: 1e-10 },
    ];
    for method in methods {
        let r = optimize_growth(method)?;
        println!(
            "{:<12} a={:+.6} b={:+.6} multiplier={:.9} ({} evaluations)",
            format!("{:?}", r.method),
            r.strategy.a(),
            r.strategy.b(),
            r.objective_value,
            r.evaluations
        );
    }
    Ok(())
}
