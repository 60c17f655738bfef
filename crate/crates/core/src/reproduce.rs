//! The headline results, each as a check that either passes or fails.
//!
//! Every check is deterministic: seeds are fixed and parallel reductions are
//! order-independent, so the serialized [`ReproductionReport`] is
//! byte-identical across runs. Wall-clock time is measured but never
//! serialized.

use std::time::{Duration, Instant};

use rand_chacha::rand_core::RngCore;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::dutchbook::{
    evaluate_offer, is_dutch_book, outcome_multipliers, search_dutch_book, verify_no_dutch_book, SearchConfig,
};
use crate::growth::{
    experiment_multiplier, infer_probability, kelly_fraction_even_odds, optimize_expected_value, optimize_growth,
    GrowthMethod,
};
use crate::montecarlo::{
    reflection_survival_estimate, rng_for, simulate_experiment, simulate_fixed_stake_ruin, simulate_hitchcock_book,
    simulate_sequence, RuinConfig, SimulationConfig,
};
use crate::types::{BetOffer, Coin, CredenceProfile, Strategy};

pub const SCHEMA_VERSION: u32 = 1;

/// Seeds for the Monte Carlo convergence check.
pub const CONVERGENCE_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];
pub const CONVERGENCE_EXPERIMENTS: u64 = 100_000;
pub const CONVERGENCE_TOLERANCE: f64 = 0.005;

/// Epsilons used with the halfer counterexample offer.
pub const HALFER_EPSILONS: [f64; 3] = [0.001, 0.01, 0.02];

pub const LATTICE_RESOLUTION: f64 = 0.05;
pub const IDENTITY_SAMPLES: usize = 10_000;
pub const IDENTITY_SEED: u64 = 2024;

pub const RUIN_CONFIG: RuinConfig = RuinConfig {
    bankroll: 10,
    stake: 1,
    max_steps: 100_000,
    trials: 10_000,
    seed: 17,
};
pub const RUIN_MIN_FRACTION: f64 = 0.95;
/// Allowed gap between simulated survival and the reflection estimate:
/// about six binomial standard errors at 1e4 trials.
pub const RUIN_ORACLE_SLACK: f64 = 0.01;

pub const KELLY_SAMPLES: usize = 1_000;
pub const KELLY_SEED: u64 = 99;

/// The values each check compares against. [`Expectations::default`] holds
/// the published numbers; tests swap individual fields to confirm that a
/// wrong constant turns a check red.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectations {
    pub growth_optimum: (f64, f64),
    pub growth_multiplier: f64,
    pub ev_optimum: (f64, f64),
    pub ev_value: f64,
    /// Wealth at `(1, 1)` after heads and after tails.
    pub ev_branches: (f64, f64),
    pub convergence_target: f64,
    pub hitchcock_loss: f64,
    pub kelly_awake: (f64, f64),
}

impl Default for Expectations {
    fn default() -> Self {
        Self {
            growth_optimum: (0.0, 1.0 / 3.0),
            growth_multiplier: (32.0f64 / 27.0).sqrt(),
            ev_optimum: (1.0, 1.0),
            ev_value: 4.0,
            ev_branches: (0.0, 8.0),
            convergence_target: 1.088662,
            hitchcock_loss: -5.0,
            kelly_awake: (2.0 / 3.0, 1.0 / 3.0),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClaimResult {
    pub id: String,
    pub description: String,
    pub passed: bool,
    /// Measured values, in a fixed key order.
    pub details: Value,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReproductionReport {
    pub schema_version: u32,
    pub all_passed: bool,
    pub claims: Vec<ClaimResult>,
}

impl ReproductionReport {
    pub fn failing(&self) -> impl Iterator<Item = &ClaimResult> {
        self.claims.iter().filter(|c| !c.passed)
    }
}

type Check = fn(&Expectations) -> (bool, Value);

/// `(id, description, check)` for every claim, in report order.
pub fn claims() -> Vec<(&'static str, &'static str, Check)> {
    vec![
        (
            "growth-optimum",
            "growth-optimal strategy is a=0, b=1/3 with multiplier sqrt(32/27); grid and gradient agree",
            check_growth_optimum,
        ),
        (
            "ev-optimum",
            "expected value is maximized by going all-in (a=b=1, value 4), ending at 0 or 8",
            check_ev_optimum,
        ),
        (
            "monte-carlo-convergence",
            "simulated per-experiment growth at (0, 1/3) is within 0.5% of 1.088662 on 5 seeds",
            check_convergence,
        ),
        (
            "thirder-invulnerability",
            "no lattice offer is both accepted by a thirder and losing on heads and tails",
            check_thirder,
        ),
        (
            "halfer-vulnerability",
            "the counterexample offer is a Dutch book against a halfer; search finds a witness",
            check_halfer,
        ),
        (
            "hitchcock-book",
            "the additive book costs an expected-value maximizing halfer 5 in both branches",
            check_hitchcock,
        ),
        (
            "fixed-stake-ruin",
            "fixed-stake betting on a fair coin ruins at least 95% of bankrolls within 1e5 bets",
            check_ruin,
        ),
        (
            "kelly-round-trip",
            "Kelly fraction and implied probability invert each other; p=2/3 gives b=1/3",
            check_kelly,
        ),
        (
            "determinism",
            "seeded simulations serialize identically when re-run",
            check_determinism,
        ),
    ]
}

pub fn run_all() -> ReproductionReport {
    run_with(&Expectations::default())
}

pub fn run_with(expected: &Expectations) -> ReproductionReport {
    let claims: Vec<ClaimResult> = claims()
        .into_iter()
        .map(|(id, description, check)| {
            let start = Instant::now();
            let (passed, details) = check(expected);
            ClaimResult {
                id: id.to_string(),
                description: description.to_string(),
                passed,
                details,
                elapsed: start.elapsed(),
            }
        })
        .collect();
    ReproductionReport {
        schema_version: SCHEMA_VERSION,
        all_passed: claims.iter().all(|c| c.passed),
        claims,
    }
}

fn strategy(p: (f64, f64)) -> Strategy {
    Strategy::new(p.0, p.1).expect("expected strategy inside the box")
}

fn check_growth_optimum(e: &Expectations) -> (bool, Value) {
    let closed = optimize_growth(GrowthMethod::ClosedForm).expect("closed form");
    let grid = optimize_growth(GrowthMethod::Grid { resolution: 0.01 }).expect("grid");
    let gradient = optimize_growth(GrowthMethod::Gradient { tolerance: 1e-10 });
    let target = strategy(e.growth_optimum);

    let closed_ok = closed.strategy == target && (closed.objective_value - e.growth_multiplier).abs() <= 1e-12;
    let grid_ok = (grid.strategy.a() - target.a()).abs() <= 0.01 && (grid.strategy.b() - target.b()).abs() <= 0.01;
    let gradient_ok = gradient.as_ref().is_ok_and(|g| {
        (g.strategy.a() - target.a()).abs() < 1e-8 && (g.strategy.b() - target.b()).abs() < 1e-8
    });
    let gradient_json = match &gradient {
        Ok(g) => json!({"a": g.strategy.a(), "b": g.strategy.b(), "evaluations": g.evaluations}),
        Err(err) => json!({"error": err.to_string()}),
    };
    (
        closed_ok && grid_ok && gradient_ok,
        json!({
            "closed_form": {"a": closed.strategy.a(), "b": closed.strategy.b(), "multiplier": closed.objective_value},
            "grid": {"a": grid.strategy.a(), "b": grid.strategy.b(), "multiplier": grid.objective_value},
            "gradient": gradient_json,
        }),
    )
}

fn check_ev_optimum(e: &Expectations) -> (bool, Value) {
    let r = optimize_expected_value();
    let heads = simulate_experiment(r.strategy, Coin::Heads);
    let tails = simulate_experiment(r.strategy, Coin::Tails);
    let passed = r.strategy == strategy(e.ev_optimum)
        && r.objective_value == e.ev_value
        && (heads, tails) == e.ev_branches;
    (
        passed,
        json!({
            "a": r.strategy.a(), "b": r.strategy.b(), "expected_value": r.objective_value,
            "heads_wealth": heads, "tails_wealth": tails,
            "long_run_multiplier": experiment_multiplier(r.strategy),
        }),
    )
}

fn check_convergence(e: &Expectations) -> (bool, Value) {
    let s = strategy(e.growth_optimum);
    let mut passed = true;
    let runs: Vec<Value> = CONVERGENCE_SEEDS
        .iter()
        .map(|&seed| {
            let cfg = SimulationConfig::new(s, CONVERGENCE_EXPERIMENTS, seed).expect("valid config");
            let r = simulate_sequence(&cfg);
            let rel = (r.empirical_multiplier - e.convergence_target).abs() / e.convergence_target;
            passed &= rel < CONVERGENCE_TOLERANCE;
            json!({"seed": seed, "empirical_multiplier": r.empirical_multiplier, "relative_error": rel,
                   "heads": r.heads_count, "tails": r.tails_count})
        })
        .collect();
    (passed, json!({"target": e.convergence_target, "runs": runs}))
}

fn check_thirder(_: &Expectations) -> (bool, Value) {
    let thirder = CredenceProfile::thirder();
    let cert = search_dutch_book(&thirder, SearchConfig::exhaustive(LATTICE_RESOLUTION)).expect("valid search");

    let mut rng = rng_for(IDENTITY_SEED, 0);
    let mut identity_failures = 0usize;
    let mut books = 0usize;
    for _ in 0..IDENTITY_SAMPLES {
        let offer = BetOffer::from_array(std::array::from_fn(|_| uniform(&mut rng, -1.0, 1.0))).expect("in box");
        match verify_no_dutch_book(&thirder, &offer) {
            Ok(check) => books += usize::from(!check.excludes_book()),
            Err(_) => identity_failures += 1,
        }
    }
    (
        cert.book_found.is_none() && identity_failures == 0 && books == 0,
        json!({
            "lattice_resolution": LATTICE_RESOLUTION,
            "offers_examined": cert.offers_examined,
            "books_found": usize::from(cert.book_found.is_some()),
            "identity_samples": IDENTITY_SAMPLES,
            "identity_failures": identity_failures,
        }),
    )
}

fn check_halfer(_: &Expectations) -> (bool, Value) {
    let halfer = CredenceProfile::halfer();
    let mut passed = true;
    let fixtures: Vec<Value> = HALFER_EPSILONS
        .iter()
        .map(|&eps| {
            let offer = BetOffer::halfer_counterexample(eps).expect("epsilon in range");
            let acc = evaluate_offer(&offer, &halfer);
            let out = outcome_multipliers(&offer);
            let heads_formula = 1.0 - 1.5 * eps;
            let tails_formula = 2.0 * (2.0 / 3.0 + eps) * (2.0 / 3.0 + eps);
            let ok = acc.accepted_both()
                && out.heads < 1.0
                && out.tails < 1.0
                && (out.heads - heads_formula).abs() < 1e-12
                && (out.tails - tails_formula).abs() < 1e-12
                && is_dutch_book(&offer, &halfer);
            passed &= ok;
            json!({"epsilon": eps, "presleep_product": acc.presleep_product, "awake_product": acc.awake_product,
                   "heads_multiplier": out.heads, "tails_multiplier": out.tails, "dutch_book": ok})
        })
        .collect();
    let cert = search_dutch_book(&halfer, SearchConfig::exhaustive(LATTICE_RESOLUTION)).expect("valid search");
    passed &= cert.book_found.is_some();
    (
        passed,
        json!({"fixtures": fixtures, "search": serde_json::to_value(&cert).expect("serializable")}),
    )
}

fn check_hitchcock(e: &Expectations) -> (bool, Value) {
    let o = simulate_hitchcock_book(0.0, 100.0).expect("valid inputs");
    (
        o.heads_pnl == e.hitchcock_loss && o.tails_pnl == e.hitchcock_loss,
        json!({"heads_pnl": o.heads_pnl, "tails_pnl": o.tails_pnl}),
    )
}

fn check_ruin(_: &Expectations) -> (bool, Value) {
    let r = simulate_fixed_stake_ruin(&RUIN_CONFIG).expect("valid config");
    let survival = 1.0 - r.ruin_fraction;
    let estimate = reflection_survival_estimate(RUIN_CONFIG.bankroll, RUIN_CONFIG.stake, RUIN_CONFIG.max_steps);
    (
        r.ruin_fraction >= RUIN_MIN_FRACTION && (survival - estimate).abs() <= RUIN_ORACLE_SLACK,
        json!({"ruin_fraction": r.ruin_fraction, "survival": survival, "reflection_estimate": estimate}),
    )
}

fn check_kelly(e: &Expectations) -> (bool, Value) {
    let mut rng = rng_for(KELLY_SEED, 0);
    let worst = (0..KELLY_SAMPLES)
        .map(|_| {
            let p = uniform(&mut rng, 0.0, 1.0);
            (infer_probability(kelly_fraction_even_odds(p)) - p).abs()
        })
        .fold(0.0, f64::max);
    let (p, b) = e.kelly_awake;
    let b_from_p = kelly_fraction_even_odds(p);
    (
        worst <= 1e-15 && (b_from_p - b).abs() <= 1e-15,
        json!({"samples": KELLY_SAMPLES, "max_round_trip_error": worst, "fraction_at_two_thirds": b_from_p}),
    )
}

fn check_determinism(_: &Expectations) -> (bool, Value) {
    let cfg = SimulationConfig::new(Strategy::new(0.0, 1.0 / 3.0).expect("valid"), 10_000, 42).expect("valid");
    let ruin = RuinConfig {
        trials: 500,
        max_steps: 2_000,
        ..RUIN_CONFIG
    };
    let first = serde_json::to_string(&(simulate_sequence(&cfg), simulate_fixed_stake_ruin(&ruin).expect("valid")))
        .expect("serializable");
    let second = serde_json::to_string(&(simulate_sequence(&cfg), simulate_fixed_stake_ruin(&ruin).expect("valid")))
        .expect("serializable");
    (first == second, json!({"bytes": first.len(), "identical": first == second}))
}

/// Uniform draw in `[lo, hi]` from the top 53 bits.
fn uniform(rng: &mut impl RngCore, lo: f64, hi: f64) -> f64 {
    let unit = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    lo + (hi - lo) * unit
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claim_ids_are_unique() {
        let ids: Vec<&str> = claims().iter().map(|c| c.0).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(ids.len(), sorted.len());
    }

    #[test]
    fn wrong_constant_fails_its_claim() {
        let wrong = Expectations {
            ev_value: 5.0,
            ..Expectations::default()
        };
        assert!(!check_ev_optimum(&wrong).0);
        assert!(check_ev_optimum(&Expectations::default()).0);

        let wrong = Expectations {
            hitchcock_loss: -4.0,
            ..Expectations::default()
        };
        assert!(!check_hitchcock(&wrong).0);
    }

    #[test]
    fn uniform_stays_in_range() {
        let mut rng = rng_for(0, 0);
        for _ in 0..1000 {
            let x = uniform(&mut rng, -1.0, 1.0);
            assert!((-1.0..=1.0).contains(&x));
        }
    }
}
