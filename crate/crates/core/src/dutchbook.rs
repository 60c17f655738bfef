//! Dutch books against agents that only accept bets with a wealth multiplier
//! above one.
//!
//! An agent is offered one bet before sleep and the same bet at every
//! awakening, and judges each using its own credences. The offer is a Dutch
//! book when both bets are accepted yet wealth shrinks on heads and on tails.
//! Beliefs decide acceptance; the protocol decides outcomes (two awakenings
//! on tails, whatever the agent believes).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::types::{BetOffer, CredenceProfile, MultiOutcomeBet};

/// Relative tolerance on the factorization identity.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

/// `prod (1 + alpha_i)^p_i`, computed in the log domain.
///
/// Outcomes with `p_i = 0` contribute nothing. A total loss (`alpha_i = -1`)
/// on an outcome with positive probability makes the result exactly 0.
pub fn acceptance_multiplier(bet: &MultiOutcomeBet) -> f64 {
    let mut log_sum = 0.0;
    for o in bet.outcomes() {
        if o.probability == 0.0 {
            continue;
        }
        let factor = 1.0 + o.alpha;
        if factor <= 0.0 {
            return 0.0;
        }
        log_sum += o.probability * factor.ln();
    }
    log_sum.exp()
}

/// Largest denominator tried when recovering integer exponents.
const MAX_DENOMINATOR: u32 = 12;

/// How a single decision point's product is reported.
///
/// When `p_tails = k / d` for a small `d`, the geometric product
/// `(1+h)^(1-p) (1+t)^p` is raised to the `d`-th power, giving the integer
/// form `(1+h)^(d-k) (1+t)^k`. Raising to a positive power preserves the
/// comparison with 1, so either form decides acceptance identically.
#[derive(Debug, Clone, Copy, PartialEq)]
enum ProductForm {
    Integer { heads_power: i32, tails_power: i32 },
    Geometric { p_tails: f64 },
}

impl ProductForm {
    fn for_probability(p_tails: f64) -> Self {
        for d in 1..=MAX_DENOMINATOR {
            let k = p_tails * d as f64;
            let rounded = k.round();
            if (k - rounded).abs() <= 1e-12 {
                let k = rounded as i32;
                return ProductForm::Integer {
                    heads_power: d as i32 - k,
                    tails_power: k,
                };
            }
        }
        ProductForm::Geometric { p_tails }
    }

    fn product(&self, alpha_heads: f64, alpha_tails: f64) -> f64 {
        match *self {
            ProductForm::Integer {
                heads_power,
                tails_power,
            } => (1.0 + alpha_heads).powi(heads_power) * (1.0 + alpha_tails).powi(tails_power),
            ProductForm::Geometric { p_tails } => {
                let bet = MultiOutcomeBet::binary(p_tails, alpha_heads, alpha_tails)
                    .expect("validated credences and offer");
                acceptance_multiplier(&bet)
            }
        }
    }
}

/// Acceptance rule for a credence profile, built once and reused.
#[derive(Debug, Clone, Copy)]
struct AcceptanceRule {
    presleep: ProductForm,
    awake: ProductForm,
}

impl AcceptanceRule {
    fn new(credences: &CredenceProfile) -> Self {
        Self {
            presleep: ProductForm::for_probability(credences.p_tails_presleep()),
            awake: ProductForm::for_probability(credences.p_tails_awake()),
        }
    }

    fn evaluate(&self, offer: &BetOffer) -> AcceptanceReport {
        let presleep_product = self.presleep.product(offer.alpha_oh(), offer.alpha_ot());
        let awake_product = self.awake.product(offer.alpha_wh(), offer.alpha_wt());
        AcceptanceReport {
            presleep_product,
            awake_product,
            accepted_presleep: presleep_product > 1.0,
            accepted_awake: awake_product > 1.0,
        }
    }

    fn is_dutch_book(&self, offer: &BetOffer) -> bool {
        let report = self.evaluate(offer);
        if !(report.accepted_presleep && report.accepted_awake) {
            return false;
        }
        let m = outcome_multipliers(offer);
        m.heads < 1.0 && m.tails < 1.0
    }
}

/// Whether each of the two offered bets is accepted. A product of exactly 1
/// is a rejection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceReport {
    pub presleep_product: f64,
    pub awake_product: f64,
    pub accepted_presleep: bool,
    pub accepted_awake: bool,
}

impl AcceptanceReport {
    pub fn accepted_both(&self) -> bool {
        self.accepted_presleep && self.accepted_awake
    }
}

/// Evaluates an offer under `credences`.
///
/// Products are reported in integer-exponent form where the credence is a
/// small-denominator fraction: `(1+OH)(1+OT)` for 1/2 before sleep,
/// `(1+WH)(1+WT)^2` for 2/3 upon waking. Other credences use the geometric
/// form `(1+h)^(1-p) (1+t)^p`.
pub fn evaluate_offer(offer: &BetOffer, credences: &CredenceProfile) -> AcceptanceReport {
    AcceptanceRule::new(credences).evaluate(offer)
}

/// Realized end-of-experiment wealth ratios when every offered bet is taken.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeMultipliers {
    /// `(1+OH)(1+WH)`: one awakening.
    pub heads: f64,
    /// `(1+OT)(1+WT)^2`: two awakenings.
    pub tails: f64,
}

pub fn outcome_multipliers(offer: &BetOffer) -> OutcomeMultipliers {
    let wt = 1.0 + offer.alpha_wt();
    OutcomeMultipliers {
        heads: (1.0 + offer.alpha_oh()) * (1.0 + offer.alpha_wh()),
        tails: (1.0 + offer.alpha_ot()) * wt * wt,
    }
}

/// Both bets accepted and both outcome multipliers strictly below 1.
pub fn is_dutch_book(offer: &BetOffer, credences: &CredenceProfile) -> bool {
    AcceptanceRule::new(credences).is_dutch_book(offer)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Lattice spacing, in `(0, 1]`.
    pub resolution: f64,
    /// Stop after examining this many offers.
    pub limit: u64,
    /// Include `-1` (total loss) on every axis.
    pub include_total_loss: bool,
}

impl SearchConfig {
    /// Full scan with the `-1` face excluded.
    pub fn exhaustive(resolution: f64) -> Self {
        Self {
            resolution,
            limit: u64::MAX,
            include_total_loss: false,
        }
    }
}

/// Outcome of a lattice search, witness or not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DutchBookCertificate {
    pub credences: CredenceProfile,
    pub resolution: f64,
    pub offers_examined: u64,
    pub book_found: Option<BetOffer>,
    pub heads_multiplier: Option<f64>,
    pub tails_multiplier: Option<f64>,
}

/// Scans offers on the lattice `{-1 + r, -1 + 2r, ..., 1}^4` in
/// lexicographic order over `(OH, OT, WH, WT)` and stops at the first Dutch
/// book or after `limit` offers.
///
/// The scan runs in parallel; the reported witness and count are those of a
/// sequential scan.
pub fn search_dutch_book(credences: &CredenceProfile, config: SearchConfig) -> Result<DutchBookCertificate> {
    if !(config.resolution > 0.0 && config.resolution <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "search resolution must lie in (0, 1], got {}",
            config.resolution
        )));
    }
    if config.limit == 0 {
        return Err(Error::InvalidConfig("search limit must be positive".into()));
    }
    let lattice = Lattice::new(config.resolution);
    let first = usize::from(!config.include_total_loss);
    let values: Vec<f64> = (first..lattice.len()).map(|i| lattice.point(i)).collect();
    let m = values.len() as u64;
    let total = m.pow(4);
    let bound = total.min(config.limit);
    let rule = AcceptanceRule::new(credences);

    let decode = |idx: u64| -> BetOffer {
        let digit = |k: u32| values[((idx / m.pow(3 - k)) % m) as usize];
        BetOffer::new(digit(0), digit(1), digit(2), digit(3)).expect("lattice inside the box")
    };
    let witness = (0..bound)
        .into_par_iter()
        .find_first(|&idx| rule.is_dutch_book(&decode(idx)));

    Ok(match witness {
        Some(idx) => {
            let offer = decode(idx);
            let m = outcome_multipliers(&offer);
            DutchBookCertificate {
                credences: *credences,
                resolution: config.resolution,
                offers_examined: idx + 1,
                book_found: Some(offer),
                heads_multiplier: Some(m.heads),
                tails_multiplier: Some(m.tails),
            }
        }
        None => DutchBookCertificate {
            credences: *credences,
            resolution: config.resolution,
            offers_examined: bound,
            book_found: None,
            heads_multiplier: None,
            tails_multiplier: None,
        },
    })
}

/// Both groupings of the four-factor product for one offer.
///
/// Accepting both bets makes each acceptance factor exceed 1, so their
/// product does too; that same number is `heads * tails`, so the two
/// outcomes cannot both lose.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorizationCheck {
    pub acceptance: AcceptanceReport,
    pub outcomes: OutcomeMultipliers,
    /// `presleep_product * awake_product`.
    pub acceptance_side: f64,
    /// `heads * tails`.
    pub outcome_side: f64,
    pub both_accepted: bool,
    pub both_losing: bool,
}

impl FactorizationCheck {
    /// "Both accepted implies not both losing" holds for this offer.
    pub fn excludes_book(&self) -> bool {
        !(self.both_accepted && self.both_losing)
    }
}

/// Checks `(1+OH)(1+OT) * (1+WH)(1+WT)^2 == (1+OH)(1+WH) * (1+OT)(1+WT)^2`
/// for one offer, with the left side taken from the acceptance products.
///
/// Only credences whose integer-exponent forms are `(1, 1)` before sleep and
/// `(1, 2)` upon waking (the thirder's) regroup this way; anything else is a
/// configuration error. A mismatch beyond [`IDENTITY_TOLERANCE`] is an
/// internal error.
pub fn verify_no_dutch_book(credences: &CredenceProfile, offer: &BetOffer) -> Result<FactorizationCheck> {
    let rule = AcceptanceRule::new(credences);
    let thirder_shaped = rule.presleep
        == ProductForm::Integer {
            heads_power: 1,
            tails_power: 1,
        }
        && rule.awake
            == ProductForm::Integer {
                heads_power: 1,
                tails_power: 2,
            };
    if !thirder_shaped {
        return Err(Error::InvalidConfig(format!(
            "the regrouping identity needs thirder credences (1/2, 2/3), got ({}, {})",
            credences.p_tails_presleep(),
            credences.p_tails_awake()
        )));
    }
    let acceptance = rule.evaluate(offer);
    let outcomes = outcome_multipliers(offer);
    let acceptance_side = acceptance.presleep_product * acceptance.awake_product;
    let outcome_side = outcomes.heads * outcomes.tails;
    let scale = acceptance_side.abs().max(outcome_side.abs());
    if (acceptance_side - outcome_side).abs() > IDENTITY_TOLERANCE * scale {
        return Err(Error::IdentityViolated {
            left: acceptance_side,
            right: outcome_side,
        });
    }
    Ok(FactorizationCheck {
        acceptance,
        outcomes,
        acceptance_side,
        outcome_side,
        both_accepted: acceptance.accepted_both(),
        both_losing: outcomes.heads < 1.0 && outcomes.tails < 1.0,
    })
}
