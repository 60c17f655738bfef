//! Growth-optimal (Kelly) betting for the Sleeping Beauty protocol.
//!
//! A fair coin is flipped after Sleeping Beauty goes to sleep. She is woken
//! once on heads and twice on tails, with her memory erased between
//! awakenings. Every wager is a fraction of her current wealth at 1:1 odds.
//!
//! The crate is organised by concern:
//!
//! - [`types`]: validated domain values ([`Strategy`], [`CredenceProfile`],
//!   [`BetOffer`], [`MultiOutcomeBet`]) with the sign convention fixed once:
//!   positive fractions are always wagers on tails.
//! - [`growth`]: expected value versus wealth multiplier, Kelly sizing, and
//!   three cross-checking optimizers.
//! - [`dutchbook`]: acceptance predicates under arbitrary credences, the
//!   Dutch-book test, lattice search for books and the factorization check
//!   that makes thirders immune.
//! - [`montecarlo`]: seeded simulation of repeated experiments, fixed-stake
//!   gambler's ruin and the additive Hitchcock book.
//! - [`reproduce`]: every headline claim as a runnable, pass/fail check.
//! - [`cli`]: the command-line front end used by the `sleeping-kelly` binary.

pub mod cli;
pub mod dutchbook;
pub mod error;
pub mod growth;
pub(crate) mod lattice;
pub mod montecarlo;
pub mod reproduce;
pub mod types;

pub use error::{Error, Result};
pub use types::{BetOffer, CredenceProfile, MultiOutcomeBet, SimulationReport, Strategy};
