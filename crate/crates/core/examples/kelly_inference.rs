//! Kelly fractions at even odds, and reading a credence back off a bet.

use sleeping_kelly::growth::{infer_probability, kelly_fraction_even_odds};

fn main() {
    println!("{:>8} {:>10} {:>10}", "p", "fraction", "inferred");
    for p in [0.0, 0.25, 0.5, 0.6, 2.0 / 3.0, 0.9, 1.0] {
        let f = kelly_fraction_even_odds(p);
        println!("{p:>8.4} {f:>+10.4} {:>10.4}", infer_probability(f));
    }
    // An agent staking a third on tails when awake is acting as a thirder.
    println!("awake fraction 1/3 -> P(tails) = {:.6}", infer_probability(1.0 / 3.0));
}
