//! A fixed-size bettor on a fair coin goes broke almost surely; compare the
//! simulated ruin rate with the reflection-principle estimate.

use sleeping_kelly::montecarlo::{reflection_survival_estimate, simulate_fixed_stake_ruin, RuinConfig};

fn main() -> sleeping_kelly::Result<()> {
    for steps in [100, 1_000, 10_000, 100_000] {
        let cfg = RuinConfig {
            bankroll: 10,
            stake: 1,
            max_steps: steps,
            trials: 10_000,
            seed: 1,
        };
        let r = simulate_fixed_stake_ruin(&cfg)?;
        println!(
            "{steps:>7} bets: ruined {:.4}, estimate {:.4}",
            r.ruin_fraction,
            1.0 - reflection_survival_estimate(10, 1, steps)
        );
    }
    Ok(())
}
