//! Scans every offer on a lattice and finds none that a thirder accepts on
//! both occasions and that loses in both branches. The factorization
//! identity explains why: if both acceptance products exceed 1, so does the
//! product of the outcome multipliers.

use sleeping_kelly::dutchbook::{search_dutch_book, verify_no_dutch_book, SearchConfig};
use sleeping_kelly::{BetOffer, CredenceProfile};

fn main() -> sleeping_kelly::Result<()> {
    let thirder = CredenceProfile::thirder();
    let cert = search_dutch_book(&thirder, SearchConfig::exhaustive(0.05))?;
    println!(
        "scanned {} offers at resolution {}: {}",
        cert.offers_examined,
        cert.resolution,
        if cert.book_found.is_some() { "book found" } else { "no book" }
    );

    let offer = BetOffer::halfer_counterexample(0.01)?;
    let check = verify_no_dutch_book(&thirder, &offer)?;
    println!(
        "offer {offer}: acceptance side {:.9} = outcome side {:.9}, excludes book: {}",
        check.acceptance_side,
        check.outcome_side,
        check.excludes_book()
    );
    Ok(())
}
