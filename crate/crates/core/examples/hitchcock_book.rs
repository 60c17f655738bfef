//! The additive book: two bets a halfer values positively that lose 5 in
//! every branch.

use sleeping_kelly::montecarlo::{
    hitchcock_expected_values, simulate_hitchcock_book, simulate_hitchcock_book_with, HitchcockDecisions,
};

fn main() -> sleeping_kelly::Result<()> {
    let (pre, awake) = hitchcock_expected_values(1.0, 0.5, 0.5);
    println!("with a sweetener of 1, a halfer values the bets at {pre} and {awake}");
    let (pre, awake) = hitchcock_expected_values(0.0, 0.5, 2.0 / 3.0);
    println!("thirder values the awakening bet at {awake:.3} (pre-sleep {pre})");

    let o = simulate_hitchcock_book(0.0, 100.0)?;
    println!(
        "both bets: heads {:+}, tails {:+}, lowest wealth {}",
        o.heads_pnl, o.tails_pnl, o.lowest_wealth
    );

    for (accept_presleep, accept_awake) in [(true, false), (false, true)] {
        let d = HitchcockDecisions { accept_presleep, accept_awake };
        let o = simulate_hitchcock_book_with(0.0, 100.0, d)?;
        println!("{d:?}: heads {:+}, tails {:+}", o.heads_pnl, o.tails_pnl);
    }
    Ok(())
}
