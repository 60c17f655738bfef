//! Validated domain values shared by every module.
//!
//! Sign convention: a positive fraction is a wager on tails, a negative one a
//! wager on heads. Nothing downstream takes a sign flag.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the probability sum of a [`MultiOutcomeBet`].
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-12;

pub(crate) fn check_range(field: &'static str, value: f64, min: f64, max: f64) -> Result<f64> {
    // NaN fails both comparisons and is rejected here.
    if value >= min && value <= max {
        Ok(value)
    } else {
        Err(Error::OutOfRange {
            field,
            value,
            min,
            max,
        })
    }
}

/// Outcome of the coin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coin {
    Heads,
    Tails,
}

impl fmt::Display for Coin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coin::Heads => f.write_str("heads"),
            Coin::Tails => f.write_str("tails"),
        }
    }
}

/// A betting strategy: `a` is wagered before sleep, `b` at every awakening.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStrategy")]
pub struct Strategy {
    a: f64,
    b: f64,
}

#[derive(Deserialize)]
struct RawStrategy {
    a: f64,
    b: f64,
}

impl TryFrom<RawStrategy> for Strategy {
    type Error = Error;

    fn try_from(raw: RawStrategy) -> Result<Self> {
        Strategy::new(raw.a, raw.b)
    }
}

impl Strategy {
    /// Both fractions must lie in `[-1, 1]`; the boundary is legal.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        Ok(Self {
            a: check_range("a", a, -1.0, 1.0)?,
            b: check_range("b", b, -1.0, 1.0)?,
        })
    }

    /// Never bet.
    pub const fn null() -> Self {
        Self { a: 0.0, b: 0.0 }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={}, b={}", self.a, self.b)
    }
}

/// Probabilities an agent assigns to tails before sleeping and upon waking.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCredences")]
pub struct CredenceProfile {
    p_tails_presleep: f64,
    p_tails_awake: f64,
}

#[derive(Deserialize)]
struct RawCredences {
    p_tails_presleep: f64,
    p_tails_awake: f64,
}

impl TryFrom<RawCredences> for CredenceProfile {
    type Error = Error;

    fn try_from(raw: RawCredences) -> Result<Self> {
        CredenceProfile::new(raw.p_tails_presleep, raw.p_tails_awake)
    }
}

impl CredenceProfile {
    pub fn new(p_tails_presleep: f64, p_tails_awake: f64) -> Result<Self> {
        Ok(Self {
            p_tails_presleep: check_range("p_tails_presleep", p_tails_presleep, 0.0, 1.0)?,
            p_tails_awake: check_range("p_tails_awake", p_tails_awake, 0.0, 1.0)?,
        })
    }

    /// One half before sleep, two thirds upon waking.
    pub fn thirder() -> Self {
        Self {
            p_tails_presleep: 0.5,
            p_tails_awake: 2.0 / 3.0,
        }
    }

    /// One half at both decision points.
    pub fn halfer() -> Self {
        Self {
            p_tails_presleep: 0.5,
            p_tails_awake: 0.5,
        }
    }

    pub fn p_tails_presleep(&self) -> f64 {
        self.p_tails_presleep
    }

    pub fn p_tails_awake(&self) -> f64 {
        self.p_tails_awake
    }
}

/// Parses `thirder`, `halfer` or `custom:P1,P2`.
impl FromStr for CredenceProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "thirder" => Ok(Self::thirder()),
            "halfer" => Ok(Self::halfer()),
            other => {
                let bad = |reason: &str| {
                    Error::InvalidConfig(format!("credence {other:?}: {reason}"))
                };
                let body = other
                    .strip_prefix("custom:")
                    .ok_or_else(|| bad("expected thirder, halfer or custom:P1,P2"))?;
                let parts: Vec<&str> = body.split(',').collect();
                if parts.len() != 2 {
                    return Err(bad("custom credences take exactly two probabilities"));
                }
                let p: Vec<f64> = parts
                    .iter()
                    .map(|p| p.trim().parse::<f64>().map_err(|e| bad(&e.to_string())))
                    .collect::<Result<_>>()?;
                Self::new(p[0], p[1])
            }
        }
    }
}

/// Four outcome-contingent wealth deltas, always in the order OH, OT, WH, WT.
///
/// `O*` is the offer made before sleep, `W*` the offer made at every
/// awakening; the trailing letter is the coin outcome that settles it. The
/// awakening offer is the same at each awakening, so one pair describes it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOffer")]
pub struct BetOffer {
    alpha_oh: f64,
    alpha_ot: f64,
    alpha_wh: f64,
    alpha_wt: f64,
}

#[derive(Deserialize)]
struct RawOffer {
    alpha_oh: f64,
    alpha_ot: f64,
    alpha_wh: f64,
    alpha_wt: f64,
}

impl TryFrom<RawOffer> for BetOffer {
    type Error = Error;

    fn try_from(raw: RawOffer) -> Result<Self> {
        BetOffer::new(raw.alpha_oh, raw.alpha_ot, raw.alpha_wh, raw.alpha_wt)
    }
}

impl BetOffer {
    pub const FIELDS: [&'static str; 4] = ["alpha_oh", "alpha_ot", "alpha_wh", "alpha_wt"];

    pub fn new(alpha_oh: f64, alpha_ot: f64, alpha_wh: f64, alpha_wt: f64) -> Result<Self> {
        Ok(Self {
            alpha_oh: check_range("alpha_oh", alpha_oh, -1.0, 1.0)?,
            alpha_ot: check_range("alpha_ot", alpha_ot, -1.0, 1.0)?,
            alpha_wh: check_range("alpha_wh", alpha_wh, -1.0, 1.0)?,
            alpha_wt: check_range("alpha_wt", alpha_wt, -1.0, 1.0)?,
        })
    }

    /// Builds an offer from `[OH, OT, WH, WT]`.
    pub fn from_array(values: [f64; 4]) -> Result<Self> {
        Self::new(values[0], values[1], values[2], values[3])
    }

    pub const fn null() -> Self {
        Self {
            alpha_oh: 0.0,
            alpha_ot: 0.0,
            alpha_wh: 0.0,
            alpha_wt: 0.0,
        }
    }

    /// The offer used against the halfer:
    /// `(-1/3 - eps, 1, 1/2, -1/3 + eps)`.
    ///
    /// `eps` must lie in `(0, 1/sqrt(2) - 2/3)`. Below the upper bound the
    /// tails branch `2(2/3 + eps)^2` still loses; at `eps = 0` neither bet is
    /// strictly accepted.
    pub fn halfer_counterexample(eps: f64) -> Result<Self> {
        let max = halfer_counterexample_epsilon_bound();
        if !(eps > 0.0 && eps < max) {
            return Err(Error::OutOfRange {
                field: "epsilon",
                value: eps,
                min: 0.0,
                max,
            });
        }
        Self::new(-1.0 / 3.0 - eps, 1.0, 0.5, -1.0 / 3.0 + eps)
    }

    pub fn alpha_oh(&self) -> f64 {
        self.alpha_oh
    }

    pub fn alpha_ot(&self) -> f64 {
        self.alpha_ot
    }

    pub fn alpha_wh(&self) -> f64 {
        self.alpha_wh
    }

    pub fn alpha_wt(&self) -> f64 {
        self.alpha_wt
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.alpha_oh, self.alpha_ot, self.alpha_wh, self.alpha_wt]
    }
}

/// Exclusive upper bound on epsilon for [`BetOffer::halfer_counterexample`].
pub fn halfer_counterexample_epsilon_bound() -> f64 {
    std::f64::consts::FRAC_1_SQRT_2 - 2.0 / 3.0
}

/// `aOH,aOT,aWH,aWT`, e.g. `-0.343333,1,0.5,-0.323333`.
impl FromStr for BetOffer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: String| Error::ParseOffer {
            input: s.to_string(),
            reason,
        };
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(err(format!("expected 4 comma-separated values, got {}", parts.len())));
        }
        let mut values = [0.0; 4];
        for (slot, (part, field)) in values.iter_mut().zip(parts.iter().zip(Self::FIELDS)) {
            *slot = part
                .parse::<f64>()
                .map_err(|e| err(format!("{field}: {e}")))?;
        }
        Self::from_array(values)
    }
}

impl fmt::Display for BetOffer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{}",
            self.alpha_oh, self.alpha_ot, self.alpha_wh, self.alpha_wt
        )
    }
}

/// One outcome of a [`MultiOutcomeBet`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub probability: f64,
    pub alpha: f64,
}

/// A bet over `k >= 1` mutually exclusive outcomes; wealth is multiplied by
/// `1 + alpha_i` when outcome `i` occurs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMultiOutcomeBet")]
pub struct MultiOutcomeBet {
    outcomes: Vec<Outcome>,
}

#[derive(Deserialize)]
struct RawMultiOutcomeBet {
    outcomes: Vec<Outcome>,
}

impl TryFrom<RawMultiOutcomeBet> for MultiOutcomeBet {
    type Error = Error;

    fn try_from(raw: RawMultiOutcomeBet) -> Result<Self> {
        MultiOutcomeBet::new(raw.outcomes.into_iter().map(|o| (o.probability, o.alpha)))
    }
}

impl MultiOutcomeBet {
    /// Takes `(probability, alpha)` pairs.
    pub fn new(outcomes: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let outcomes = outcomes
            .into_iter()
            .map(|(p, alpha)| {
                Ok(Outcome {
                    probability: check_range("probability", p, 0.0, 1.0)?,
                    alpha: check_range("alpha", alpha, -1.0, 1.0)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if outcomes.is_empty() {
            return Err(Error::EmptyBet);
        }
        let sum: f64 = outcomes.iter().map(|o| o.probability).sum();
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(Error::ProbabilitySum { sum });
        }
        Ok(Self { outcomes })
    }

    /// Two outcomes, heads then tails, with `p_tails` on tails.
    pub fn binary(p_tails: f64, alpha_heads: f64, alpha_tails: f64) -> Result<Self> {
        Self::new([(1.0 - p_tails, alpha_heads), (p_tails, alpha_tails)])
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }
}

/// Result of a seeded run of repeated experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub seed: u64,
    pub num_experiments: u64,
    /// Final wealth over initial wealth. Saturates to 0 or infinity in `f64`
    /// for long runs; `log_wealth_ratio` carries the exact value.
    pub final_wealth_ratio: f64,
    /// Natural log of the final wealth ratio; `-inf` once wealth hits zero.
    pub log_wealth_ratio: f64,
    /// Geometric mean growth factor per experiment.
    pub empirical_multiplier: f64,
    pub heads_count: u64,
    pub tails_count: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_offer_is_valid() {
        let offer = BetOffer::new(0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(offer, BetOffer::null());
    }

    #[test]
    fn counterexample_offer_is_valid() {
        let eps = 0.01;
        let offer = BetOffer::new(-1.0 / 3.0 - eps, 1.0, 0.5, -1.0 / 3.0 + eps).unwrap();
        assert_eq!(offer, BetOffer::halfer_counterexample(eps).unwrap());
    }

    #[test]
    fn out_of_range_offer_names_field() {
        match BetOffer::new(0.0, 1.5, 0.0, 0.0) {
            Err(Error::OutOfRange { field, value, .. }) => {
                assert_eq!(field, "alpha_ot");
                assert_eq!(value, 1.5);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nan_is_rejected() {
        assert!(Strategy::new(f64::NAN, 0.0).is_err());
        assert!(BetOffer::new(0.0, 0.0, f64::NAN, 0.0).is_err());
        assert!(CredenceProfile::new(0.5, f64::NAN).is_err());
    }

    #[test]
    fn strategy_box_is_closed() {
        assert!(Strategy::new(1.0, -1.0).is_ok());
        assert!(Strategy::new(1.0 + 1e-15, 0.0).is_err());
        assert!(Strategy::new(0.0, -1.0 - 1e-15).is_err());
    }

    #[test]
    fn named_credences() {
        let t = CredenceProfile::thirder();
        assert!((t.p_tails_awake() - 2.0 / 3.0).abs() <= 1e-15);
        assert_eq!(t.p_tails_presleep(), 0.5);
        assert_eq!(CredenceProfile::halfer().p_tails_awake(), 0.5);
    }

    #[test]
    fn parse_credences() {
        assert_eq!("thirder".parse::<CredenceProfile>().unwrap(), CredenceProfile::thirder());
        assert_eq!("halfer".parse::<CredenceProfile>().unwrap(), CredenceProfile::halfer());
        let c: CredenceProfile = "custom:0.5,1".parse().unwrap();
        assert_eq!(c.p_tails_awake(), 1.0);
        assert!("custom:0.5".parse::<CredenceProfile>().is_err());
        assert!("custom:0.5,1.2".parse::<CredenceProfile>().is_err());
        assert!("lewis".parse::<CredenceProfile>().is_err());
    }

    #[test]
    fn parse_offer() {
        let offer: BetOffer = "-0.343333,1,0.5,-0.323333".parse().unwrap();
        assert_eq!(offer.to_array(), [-0.343333, 1.0, 0.5, -0.323333]);
        assert!("1,2,3".parse::<BetOffer>().is_err());
        assert!("0,x,0,0".parse::<BetOffer>().is_err());
        match "0,0,0,-1.01".parse::<BetOffer>() {
            Err(Error::OutOfRange { field, .. }) => assert_eq!(field, "alpha_wt"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn offer_json_is_flat() {
        let offer = BetOffer::new(0.1, -0.2, 0.3, -0.4).unwrap();
        let json = serde_json::to_value(offer).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"alpha_oh": 0.1, "alpha_ot": -0.2, "alpha_wh": 0.3, "alpha_wt": -0.4})
        );
    }

    #[test]
    fn deserialization_validates() {
        assert!(serde_json::from_str::<Strategy>(r#"{"a": 2.0, "b": 0.0}"#).is_err());
        assert!(serde_json::from_str::<BetOffer>(
            r#"{"alpha_oh": 0, "alpha_ot": 0, "alpha_wh": -1.5, "alpha_wt": 0}"#
        )
        .is_err());
        assert!(serde_json::from_str::<CredenceProfile>(
            r#"{"p_tails_presleep": 0.5, "p_tails_awake": 1.5}"#
        )
        .is_err());
    }

    #[test]
    fn multi_outcome_validation() {
        assert!(matches!(MultiOutcomeBet::new([]), Err(Error::EmptyBet)));
        assert!(matches!(
            MultiOutcomeBet::new([(0.5, 0.0), (0.4, 0.0)]),
            Err(Error::ProbabilitySum { .. })
        ));
        assert!(MultiOutcomeBet::new([(1.0 / 3.0, 0.0), (2.0 / 3.0, 0.0)]).is_ok());
        assert!(MultiOutcomeBet::new([(0.5, 0.0), (0.5, 1.1)]).is_err());
        assert!(MultiOutcomeBet::new([(-0.1, 0.0), (1.1, 0.0)]).is_err());
    }

    #[test]
    fn counterexample_epsilon_bound() {
        assert!(BetOffer::halfer_counterexample(0.0).is_err());
        assert!(BetOffer::halfer_counterexample(0.04).is_ok());
        // 1/24 is past the point where the tails branch stops losing.
        assert!(BetOffer::halfer_counterexample(1.0 / 24.0).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::{prop, prop_assert, prop_assert_eq, proptest};

        proptest! {
            #[test]
            fn offer_json_round_trip(v in prop::array::uniform4(-1.0f64..=1.0)) {
                let offer = BetOffer::from_array(v).unwrap();
                let back: BetOffer = serde_json::from_str(&serde_json::to_string(&offer).unwrap()).unwrap();
                prop_assert_eq!(back.to_array(), offer.to_array());
            }

            #[test]
            fn offer_cli_string_round_trip(v in prop::array::uniform4(-1.0f64..=1.0)) {
                let offer = BetOffer::from_array(v).unwrap();
                let back: BetOffer = offer.to_string().parse().unwrap();
                prop_assert_eq!(back, offer);
            }

            #[test]
            fn construction_total_on_box(a in -1.0f64..=1.0, b in -1.0f64..=1.0, out in 1.0f64..10.0) {
                prop_assert!(Strategy::new(a, b).is_ok());
                prop_assert!(Strategy::new(out + 1e-9, b).is_err());
                prop_assert!(Strategy::new(a, -out - 1e-9).is_err());
            }
        }
    }
}
