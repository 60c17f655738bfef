//! Expected value says bet everything; growth says bet a third on tails when
//! awake. Shows what each choice does to wealth over repeated experiments.

use sleeping_kelly::growth::{
    expected_value, expected_value_critical_points, experiment_multiplier, optimize_expected_value,
    optimize_growth, GrowthMethod,
};
use sleeping_kelly::montecarlo::{simulate_sequence, SimulationConfig};

fn main() -> sleeping_kelly::Result<()> {
    let ev = optimize_expected_value();
    let growth = optimize_growth(GrowthMethod::ClosedForm)?;

    for p in expected_value_critical_points() {
        println!(
            "interior critical point ({:.4}, {:.4}): EV {:.4}, Hessian det {:.3} (saddle)",
            p.strategy.a(),
            p.strategy.b(),
            p.value,
            p.hessian_determinant
        );
    }

    for (name, s) in [("expected value", ev.strategy), ("growth", growth.strategy)] {
        let report = simulate_sequence(&SimulationConfig::new(s, 1000, 42)?);
        println!(
            "{name:>14}: a={:.3} b={:.3}  EV per experiment {:.4}  growth per experiment {:.4}  \
             log wealth after 1000 experiments {:.1}",
            s.a(),
            s.b(),
            expected_value(s),
            experiment_multiplier(s),
            report.log_wealth_ratio
        );
    }
    Ok(())
}
