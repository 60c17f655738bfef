//! A halfer who bets Kelly-style accepts two offers that together lose in
//! both branches.

use sleeping_kelly::dutchbook::{evaluate_offer, outcome_multipliers, search_dutch_book, SearchConfig};
use sleeping_kelly::types::halfer_counterexample_epsilon_bound;
use sleeping_kelly::{BetOffer, CredenceProfile};

fn main() -> sleeping_kelly::Result<()> {
    let halfer = CredenceProfile::halfer();
    println!("counterexample valid for 0 < eps < {:.6}", halfer_counterexample_epsilon_bound());

    for eps in [0.001, 0.01, 0.02] {
        let offer = BetOffer::halfer_counterexample(eps)?;
        let acc = evaluate_offer(&offer, &halfer);
        let m = outcome_multipliers(&offer);
        println!(
            "eps {eps}: accepts x{:.6} before sleep and x{:.6} awake; heads x{:.6}, tails x{:.6}",
            acc.presleep_product, acc.awake_product, m.heads, m.tails
        );
    }

    let cert = search_dutch_book(&halfer, SearchConfig::exhaustive(0.05))?;
    if let Some(book) = cert.book_found {
        println!(
            "first lattice witness after {} offers: {book} (heads x{:.4}, tails x{:.4})",
            cert.offers_examined, cert.heads_multiplier.unwrap_or(f64::NAN), cert.tails_multiplier.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
