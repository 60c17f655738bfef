//! Seeded simulation of the betting protocol.
//!
//! All randomness comes from ChaCha8 seeded with the user's seed. Stream `i`
//! of that seed drives trial `i` (stream 0 for a single sequence), so results
//! do not depend on how trials are spread across threads.

use std::io::Write;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growth::format_significant;
use crate::types::{Coin, SimulationReport, Strategy};

/// Trajectory output is capped at this many rows.
pub const TRAJECTORY_ROW_CAP: usize = 10_000;

/// The RNG for trial `stream` under `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn flip(rng: &mut ChaCha8Rng) -> Coin {
    if rng.next_u64() >> 63 == 0 {
        Coin::Heads
    } else {
        Coin::Tails
    }
}

/// End-of-experiment wealth ratio for one coin outcome. All bets settle when
/// the experiment ends; with multiplicative factors the order is irrelevant.
pub fn simulate_experiment(strategy: Strategy, coin: Coin) -> f64 {
    let (a, b) = (strategy.a(), strategy.b());
    match coin {
        Coin::Heads => (1.0 - a) * (1.0 - b),
        Coin::Tails => (1.0 + a) * (1.0 + b) * (1.0 + b),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub strategy: Strategy,
    pub num_experiments: u64,
    pub seed: u64,
    pub initial_wealth: f64,
}

impl SimulationConfig {
    pub fn new(strategy: Strategy, num_experiments: u64, seed: u64) -> Result<Self> {
        Self::with_initial_wealth(strategy, num_experiments, seed, 1.0)
    }

    pub fn with_initial_wealth(
        strategy: Strategy,
        num_experiments: u64,
        seed: u64,
        initial_wealth: f64,
    ) -> Result<Self> {
        if num_experiments == 0 {
            return Err(Error::InvalidConfig("num_experiments must be at least 1".into()));
        }
        if !(initial_wealth > 0.0 && initial_wealth.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "initial_wealth must be positive, got {initial_wealth}"
            )));
        }
        Ok(Self {
            strategy,
            num_experiments,
            seed,
            initial_wealth,
        })
    }
}

/// One row of a per-experiment trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub experiment: u64,
    pub coin: Coin,
    pub ratio: f64,
    /// Wealth ratio after this experiment, relative to the start.
    pub cumulative: f64,
}

struct Run {
    report: SimulationReport,
    trajectory: Vec<TrajectoryRow>,
}

fn run(config: &SimulationConfig, keep_rows: usize) -> Run {
    let mut rng = rng_for(config.seed, 0);
    let heads_ratio = simulate_experiment(config.strategy, Coin::Heads);
    let tails_ratio = simulate_experiment(config.strategy, Coin::Tails);
    let (heads_log, tails_log) = (heads_ratio.ln(), tails_ratio.ln());

    // Wealth lives in log space throughout: a ratio of exactly 0 becomes
    // -inf and stays there, and long winning or losing streaks never
    // overflow or underflow.
    let mut log_wealth = 0.0f64;
    let (mut heads_count, mut tails_count) = (0u64, 0u64);
    let mut trajectory = Vec::with_capacity(keep_rows.min(config.num_experiments as usize));
    for experiment in 1..=config.num_experiments {
        let coin = flip(&mut rng);
        let (ratio, log_ratio) = match coin {
            Coin::Heads => {
                heads_count += 1;
                (heads_ratio, heads_log)
            }
            Coin::Tails => {
                tails_count += 1;
                (tails_ratio, tails_log)
            }
        };
        log_wealth += log_ratio;
        if trajectory.len() < keep_rows {
            trajectory.push(TrajectoryRow {
                experiment,
                coin,
                ratio,
                cumulative: log_wealth.exp(),
            });
        }
    }

    let n = config.num_experiments as f64;
    Run {
        report: SimulationReport {
            seed: config.seed,
            num_experiments: config.num_experiments,
            final_wealth_ratio: log_wealth.exp(),
            log_wealth_ratio: log_wealth,
            empirical_multiplier: (log_wealth / n).exp(),
            heads_count,
            tails_count,
        },
        trajectory,
    }
}

/// Runs `num_experiments` experiments in sequence, compounding wealth.
/// Same config, same report, bit for bit.
pub fn simulate_sequence(config: &SimulationConfig) -> SimulationReport {
    run(config, 0).report
}

/// Like [`simulate_sequence`], also returning up to `max_rows` trajectory rows
/// (at most [`TRAJECTORY_ROW_CAP`]).
pub fn simulate_with_trajectory(config: &SimulationConfig, max_rows: usize) -> (SimulationReport, Vec<TrajectoryRow>) {
    let r = run(config, max_rows.min(TRAJECTORY_ROW_CAP));
    (r.report, r.trajectory)
}

/// CSV with header `experiment,coin,ratio,cumulative`.
pub fn write_trajectory_csv<W: Write>(rows: &[TrajectoryRow], mut out: W) -> Result<()> {
    writeln!(out, "experiment,coin,ratio,cumulative")?;
    for r in rows.iter().take(TRAJECTORY_ROW_CAP) {
        writeln!(
            out,
            "{},{},{},{}",
            r.experiment,
            r.coin,
            format_significant(r.ratio, 12),
            format_significant(r.cumulative, 12)
        )?;
    }
    out.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuinConfig {
    /// Starting wealth in integer units.
    pub bankroll: u64,
    /// Fixed bet size in the same units.
    pub stake: u64,
    pub max_steps: u64,
    pub trials: u64,
    pub seed: u64,
}

impl RuinConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bankroll == 0 || self.stake == 0 {
            return Err(Error::InvalidConfig("bankroll and stake must be positive".into()));
        }
        if self.stake > self.bankroll {
            return Err(Error::InvalidConfig(format!(
                "stake {} exceeds bankroll {}",
                self.stake, self.bankroll
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuinReport {
    pub trials: u64,
    pub ruined: u64,
    pub ruin_fraction: f64,
}

/// Runs `trials` unbiased `±stake` walks from `bankroll`, absorbing at 0,
/// each for at most `max_steps` bets, and counts how many were absorbed.
pub fn simulate_fixed_stake_ruin(config: &RuinConfig) -> Result<RuinReport> {
    config.validate()?;
    let ruined = (0..config.trials)
        .into_par_iter()
        .filter(|&trial| ruin_walk(config, trial))
        .count() as u64;
    Ok(RuinReport {
        trials: config.trials,
        ruined,
        ruin_fraction: ruined as f64 / config.trials as f64,
    })
}

/// One walk; true if absorbed. Coin flips are drawn 64 at a time.
fn ruin_walk(config: &RuinConfig, trial: u64) -> bool {
    let mut rng = rng_for(config.seed, trial);
    let mut wealth = config.bankroll as i64;
    let stake = config.stake as i64;
    let mut steps = 0u64;
    while steps < config.max_steps {
        let mut bits = rng.next_u64();
        let batch = (config.max_steps - steps).min(64);
        for _ in 0..batch {
            if bits & 1 == 1 {
                wealth += stake;
            } else {
                wealth -= stake;
                if wealth <= 0 {
                    return true;
                }
            }
            bits >>= 1;
        }
        steps += batch;
    }
    false
}

/// Survival probability of a fixed-stake walk from the reflection principle
/// with the normal approximation:
/// `P(no ruin within n steps) ~ 2 Phi(k / sqrt(n)) - 1`, `k = bankroll / stake`.
///
/// For `k << sqrt(n)` this is close to `k sqrt(2 / (pi n))`.
pub fn reflection_survival_estimate(bankroll: u64, stake: u64, steps: u64) -> f64 {
    let k = (bankroll as f64 / stake as f64).ceil();
    let z = k / (steps as f64).sqrt();
    erf(z / std::f64::consts::SQRT_2)
}

/// Abramowitz and Stegun 7.1.26, absolute error below 1.5e-7.
fn erf(x: f64) -> f64 {
    let sign = x.signum();
    let x = x.abs();
    let t = 1.0 / (1.0 + 0.327_591_1 * x);
    let poly = t
        * (0.254_829_592
            + t * (-0.284_496_736 + t * (1.421_413_741 + t * (-1.453_152_027 + t * 1.061_405_429))));
    sign * (1.0 - poly * (-x * x).exp())
}

/// Net dollar result of the additive book in each branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HitchcockOutcome {
    pub heads_pnl: f64,
    pub tails_pnl: f64,
    /// Lowest wealth reached along either branch if every loss is paid as it
    /// is incurred.
    pub lowest_wealth: f64,
}

impl HitchcockOutcome {
    /// Loses in both branches.
    pub fn is_dutch_book(&self) -> bool {
        self.heads_pnl < 0.0 && self.tails_pnl < 0.0
    }
}

/// Which of the two additive bets the agent takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HitchcockDecisions {
    pub accept_presleep: bool,
    pub accept_awake: bool,
}

impl HitchcockDecisions {
    pub const ALL: HitchcockDecisions = HitchcockDecisions {
        accept_presleep: true,
        accept_awake: true,
    };
}

/// Minimum bankroll that covers every loss in the additive book.
pub const HITCHCOCK_MIN_WEALTH: f64 = 35.0;

/// The additive book against an expected-value maximizing halfer: before
/// sleep, win `15 + eps` on tails or lose 15 on heads; at each awakening, win
/// `10 + eps` on heads or lose 10 on tails. Both bets have expected value
/// `eps / 2` to a halfer, yet both branches net `-5 + eps`.
pub fn simulate_hitchcock_book(epsilon: f64, initial_wealth: f64) -> Result<HitchcockOutcome> {
    simulate_hitchcock_book_with(epsilon, initial_wealth, HitchcockDecisions::ALL)
}

pub fn simulate_hitchcock_book_with(
    epsilon: f64,
    initial_wealth: f64,
    decisions: HitchcockDecisions,
) -> Result<HitchcockOutcome> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidConfig(format!("epsilon must be non-negative, got {epsilon}")));
    }
    if initial_wealth.is_nan() || initial_wealth < HITCHCOCK_MIN_WEALTH {
        return Err(Error::InvalidConfig(format!(
            "initial wealth {initial_wealth} cannot cover losses of up to {HITCHCOCK_MIN_WEALTH}"
        )));
    }
    let presleep = |coin: Coin| match (decisions.accept_presleep, coin) {
        (false, _) => 0.0,
        (true, Coin::Heads) => -15.0,
        (true, Coin::Tails) => 15.0 + epsilon,
    };
    let awake = |coin: Coin| match (decisions.accept_awake, coin) {
        (false, _) => 0.0,
        (true, Coin::Heads) => 10.0 + epsilon,
        (true, Coin::Tails) => -10.0,
    };

    let mut lowest = initial_wealth;
    let mut pnl = |coin: Coin, awakenings: u32| {
        // Worst case for liquidity: losses are paid before any win arrives.
        let mut legs = vec![presleep(coin)];
        legs.extend(std::iter::repeat_n(awake(coin), awakenings as usize));
        let losses: f64 = legs.iter().filter(|x| **x < 0.0).sum();
        lowest = lowest.min(initial_wealth + losses);
        legs.iter().sum::<f64>()
    };
    let heads_pnl = pnl(Coin::Heads, 1);
    let tails_pnl = pnl(Coin::Tails, 2);
    Ok(HitchcockOutcome {
        heads_pnl,
        tails_pnl,
        lowest_wealth: lowest,
    })
}

/// Expected profit of the two Hitchcock bets under the given probability of
/// tails: `(presleep, awake)`.
pub fn hitchcock_expected_values(epsilon: f64, p_tails_presleep: f64, p_tails_awake: f64) -> (f64, f64) {
    let presleep = p_tails_presleep * (15.0 + epsilon) - (1.0 - p_tails_presleep) * 15.0;
    let awake = (1.0 - p_tails_awake) * (10.0 + epsilon) - p_tails_awake * 10.0;
    (presleep, awake)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(a: f64, b: f64) -> Strategy {
        Strategy::new(a, b).unwrap()
    }

    #[test]
    fn branch_ratios() {
        let k = s(0.0, 1.0 / 3.0);
        assert!((simulate_experiment(k, Coin::Heads) - 2.0 / 3.0).abs() < 1e-15);
        assert!((simulate_experiment(k, Coin::Tails) - 16.0 / 9.0).abs() < 1e-15);
        assert_eq!(simulate_experiment(s(1.0, 1.0), Coin::Heads), 0.0);
        assert_eq!(simulate_experiment(s(1.0, 1.0), Coin::Tails), 8.0);
    }

    #[test]
    fn null_strategy_keeps_wealth() {
        let r = simulate_sequence(&SimulationConfig::new(Strategy::null(), 1000, 42).unwrap());
        assert_eq!(r.final_wealth_ratio, 1.0);
        assert_eq!(r.empirical_multiplier, 1.0);
        assert_eq!(r.heads_count + r.tails_count, 1000);
    }

    #[test]
    fn all_in_is_absorbed() {
        for seed in 0..100 {
            let r = simulate_sequence(&SimulationConfig::new(s(1.0, 1.0), 64, seed).unwrap());
            assert_eq!(r.final_wealth_ratio, 0.0, "seed {seed}");
            assert_eq!(r.log_wealth_ratio, f64::NEG_INFINITY);
            assert_eq!(r.empirical_multiplier, 0.0);
        }
    }

    #[test]
    fn same_seed_same_report() {
        let cfg = SimulationConfig::new(s(0.1, 0.3), 5000, 9).unwrap();
        assert_eq!(simulate_sequence(&cfg), simulate_sequence(&cfg));
        let other = SimulationConfig::new(s(0.1, 0.3), 5000, 10).unwrap();
        assert_ne!(simulate_sequence(&cfg).heads_count, simulate_sequence(&other).heads_count);
    }

    #[test]
    fn long_runs_do_not_lose_precision() {
        let r = simulate_sequence(&SimulationConfig::new(s(0.0, 1.0 / 3.0), 100_000, 1).unwrap());
        assert!(r.final_wealth_ratio.is_infinite());
        assert!(r.log_wealth_ratio.is_finite());
        let m = (32.0f64 / 27.0).sqrt();
        assert!((r.empirical_multiplier - m).abs() / m < 0.005);
    }

    #[test]
    fn config_validation() {
        assert!(SimulationConfig::new(Strategy::null(), 0, 1).is_err());
        assert!(SimulationConfig::with_initial_wealth(Strategy::null(), 1, 1, 0.0).is_err());
        let bad = RuinConfig {
            bankroll: 5,
            stake: 10,
            max_steps: 1,
            trials: 1,
            seed: 0,
        };
        assert!(simulate_fixed_stake_ruin(&bad).is_err());
        assert!(simulate_fixed_stake_ruin(&RuinConfig { trials: 0, stake: 1, ..bad }).is_err());
    }

    #[test]
    fn trajectory_matches_report() {
        let cfg = SimulationConfig::new(s(0.2, 0.3), 50, 5).unwrap();
        let (report, rows) = simulate_with_trajectory(&cfg, 100);
        assert_eq!(rows.len(), 50);
        assert_eq!(report, simulate_sequence(&cfg));
        let last = rows.last().unwrap();
        assert!((last.cumulative - report.final_wealth_ratio).abs() < 1e-12 * report.final_wealth_ratio);
        let mut csv = Vec::new();
        write_trajectory_csv(&rows, &mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("experiment,coin,ratio,cumulative\n1,"));
        assert_eq!(text.lines().count(), 51);
    }

    #[test]
    fn trajectory_is_capped() {
        let cfg = SimulationConfig::new(Strategy::null(), 20_000, 5).unwrap();
        let (_, rows) = simulate_with_trajectory(&cfg, usize::MAX);
        assert_eq!(rows.len(), TRAJECTORY_ROW_CAP);
    }

    #[test]
    fn single_flip_ruin() {
        let r = simulate_fixed_stake_ruin(&RuinConfig {
            bankroll: 10,
            stake: 10,
            max_steps: 1,
            trials: 10_000,
            seed: 3,
        })
        .unwrap();
        // 4 standard errors of a fair coin over 1e4 trials
        assert!((r.ruin_fraction - 0.5).abs() < 0.02, "{}", r.ruin_fraction);
    }

    #[test]
    fn ruin_is_deterministic_across_pools() {
        let cfg = RuinConfig {
            bankroll: 3,
            stake: 1,
            max_steps: 500,
            trials: 2000,
            seed: 11,
        };
        let a = simulate_fixed_stake_ruin(&cfg).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| simulate_fixed_stake_ruin(&cfg).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn reflection_estimate_values() {
        let v = reflection_survival_estimate(10, 1, 100_000);
        assert!((v - 10.0 * (2.0 / (std::f64::consts::PI * 1e5)).sqrt()).abs() < 1e-4);
        assert!((reflection_survival_estimate(1, 1, 10_000) - 0.00798).abs() < 1e-4);
    }

    #[test]
    fn hitchcock_examples() {
        let o = simulate_hitchcock_book(0.0, 100.0).unwrap();
        assert_eq!((o.heads_pnl, o.tails_pnl), (-5.0, -5.0));
        assert!(o.is_dutch_book());
        let o = simulate_hitchcock_book(0.5, 100.0).unwrap();
        assert_eq!((o.heads_pnl, o.tails_pnl), (-4.5, -4.5));
        let o = simulate_hitchcock_book_with(
            0.0,
            100.0,
            HitchcockDecisions {
                accept_presleep: true,
                accept_awake: false,
            },
        )
        .unwrap();
        assert_eq!(o.heads_pnl, -15.0);
    }

    #[test]
    fn hitchcock_bankroll() {
        assert!(simulate_hitchcock_book(0.0, 34.99).is_err());
        assert!(simulate_hitchcock_book(-0.1, 100.0).is_err());
        let o = simulate_hitchcock_book(0.0, 35.0).unwrap();
        assert_eq!(o.lowest_wealth, 15.0);
        assert!(!simulate_hitchcock_book(5.0, 35.0).unwrap().is_dutch_book());
    }

    #[test]
    fn hitchcock_bets_look_good_to_halfer() {
        let (pre, awake) = hitchcock_expected_values(0.2, 0.5, 0.5);
        assert!((pre - 0.1).abs() < 1e-12);
        assert!((awake - 0.1).abs() < 1e-12);
        // a thirder sees the awakening bet as a loser
        let (_, awake) = hitchcock_expected_values(0.2, 0.5, 2.0 / 3.0);
        assert!(awake < 0.0);
    }

    mod props {
        use super::*;
        use crate::growth::two_run_multiplier;
        use proptest::prelude::{prop_assert, prop_assert_eq, proptest};

        proptest! {
            #[test]
            fn branch_product_is_two_run_multiplier(a in -1.0f64..=1.0, b in -1.0f64..=1.0) {
                let st = s(a, b);
                let lhs = simulate_experiment(st, Coin::Heads) * simulate_experiment(st, Coin::Tails);
                prop_assert!((lhs - two_run_multiplier(st)).abs() <= 1e-12);
            }

            #[test]
            fn report_counts_and_geometric_mean(a in -0.9f64..0.9, b in -0.9f64..0.9, seed in 0u64..1000, n in 1u64..2000) {
                let r = simulate_sequence(&SimulationConfig::new(s(a, b), n, seed).unwrap());
                prop_assert_eq!(r.heads_count + r.tails_count, n);
                // Subnormal ratios have already lost precision.
                if r.final_wealth_ratio.is_normal() {
                    let g = r.final_wealth_ratio.powf(1.0 / n as f64);
                    prop_assert!((g - r.empirical_multiplier).abs() <= 1e-9 * g);
                }
            }
        }
    }
}
