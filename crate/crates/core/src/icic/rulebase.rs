//! The allocation rulebase: four inputs, two outputs, nine rules.

use serde::{Deserialize, Serialize};

use crate::fuzzy::{Antecedent, Combiner, Consequent, LinguisticVariable, MembershipFunction, Rule, RulebaseDoc, Term};
use crate::link_metrics::McsTable;
use crate::scenario::rayleigh_scale;
use crate::signal_stats::{signal_distributions, SignalStatsConfig};
use crate::Result;

pub const RATE: &str = "rate";
pub const SIGNAL: &str = "signal";
pub const INTERFERENCE: &str = "interference";
pub const FADING: &str = "fading";
pub const ALLOC: &str = "alloc";
pub const POWER: &str = "power";

/// Rulebase built from the default signal statistics, shipped as JSON.
pub const BUNDLED_RULEBASE: &str = include_str!("../../data/rulebase.json");

pub const POWER_UNIVERSE_DBM: [f64; 2] = [-200.0, 20.0];
pub const FADING_UNIVERSE: [f64; 2] = [0.0, 20.0];
pub const RATE_UNIVERSE_MEANS: f64 = 10.0;

/// Rate quantiles splitting Low / LowMed / MedHigh / High.
pub const RATE_PERCENTILES: [f64; 6] = [0.20, 0.30, 0.45, 0.55, 0.70, 0.80];

/// Breakpoints of the input terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembershipAnchors {
    /// Desired-signal percentiles (28, 38, 62, 72) in dBm.
    pub signal_dbm: [f64; 4],
    /// Interference percentiles (28, 38, 62, 72) in dBm.
    pub interference_dbm: [f64; 4],
    /// Rate quantiles at [`RATE_PERCENTILES`], bits/s.
    pub rate_bps: [f64; 6],
    pub average_rate_bps: f64,
}

impl MembershipAnchors {
    pub fn from_signal_stats(cfg: &SignalStatsConfig, table: &McsTable) -> Result<Self> {
        let a = signal_distributions(cfg, table)?.anchors()?;
        let scale = rayleigh_scale(cfg.average_rate_bps);
        let q = RATE_PERCENTILES.map(|p| scale * (-2.0 * (1.0 - p).ln()).sqrt());
        Ok(MembershipAnchors {
            signal_dbm: a.desired_dbm,
            interference_dbm: a.interfering_dbm,
            rate_bps: q,
            average_rate_bps: cfg.average_rate_bps,
        })
    }
}

fn three_levels(name: &str, p: [f64; 4]) -> LinguisticVariable {
    LinguisticVariable::new(
        name,
        "dBm",
        POWER_UNIVERSE_DBM,
        vec![
            Term::new("Low", MembershipFunction::OpenLeft { c: p[0], d: p[1] }),
            Term::new("Med", MembershipFunction::Trapezoid { a: p[0], b: p[1], c: p[2], d: p[3] }),
            Term::new("High", MembershipFunction::OpenRight { a: p[2], b: p[3] }),
        ],
    )
}

fn yes_no(name: &str, yes: &str, no: &str) -> LinguisticVariable {
    LinguisticVariable::new(
        name,
        "",
        [0.0, 1.0],
        vec![
            Term::new(yes, MembershipFunction::Triangle { a: 0.0, b: 0.0, c: 0.75 }),
            Term::new(no, MembershipFunction::Triangle { a: 0.25, b: 1.0, c: 1.0 }),
        ],
    )
}

fn is(variable: &str, term: &str) -> Antecedent {
    Antecedent { variable: variable.into(), term: term.into(), negated: false }
}

fn not(variable: &str, term: &str) -> Antecedent {
    Antecedent { variable: variable.into(), term: term.into(), negated: true }
}

fn then(variable: &str, term: &str) -> Consequent {
    Consequent { variable: variable.into(), term: term.into() }
}

fn rule(combiner: Combiner, antecedents: Vec<Antecedent>, consequents: Vec<Consequent>) -> Rule {
    Rule { combiner, antecedents, consequents }
}

/// The nine allocation rules over the given term breakpoints.
pub fn allocation_rulebase(anchors: &MembershipAnchors) -> RulebaseDoc {
    use Combiner::{And, Or};
    let q = anchors.rate_bps;
    let rate = LinguisticVariable::new(
        RATE,
        "bit/s",
        [0.0, RATE_UNIVERSE_MEANS * anchors.average_rate_bps],
        vec![
            Term::new("Low", MembershipFunction::OpenLeft { c: q[0], d: q[1] }),
            Term::new("LowMed", MembershipFunction::Trapezoid { a: q[0], b: q[1], c: q[2], d: q[3] }),
            Term::new("MedHigh", MembershipFunction::Trapezoid { a: q[2], b: q[3], c: q[4], d: q[5] }),
            Term::new("High", MembershipFunction::OpenRight { a: q[4], b: q[5] }),
        ],
    );
    let fading = LinguisticVariable::new(
        FADING,
        "",
        FADING_UNIVERSE,
        vec![
            Term::new("Deep", MembershipFunction::OpenLeft { c: 0.5, d: 0.9 }),
            Term::new("Average", MembershipFunction::Trapezoid { a: 0.5, b: 0.9, c: 1.1, d: 2.0 }),
            Term::new("Peak", MembershipFunction::OpenRight { a: 1.1, b: 2.0 }),
        ],
    );
    let rules = vec![
        rule(And, vec![not(SIGNAL, "Low"), is(INTERFERENCE, "Low")], vec![then(ALLOC, "Yes"), then(POWER, "Half")]),
        rule(
            And,
            vec![is(RATE, "Low"), not(SIGNAL, "Low"), is(INTERFERENCE, "Med"), is(FADING, "Deep")],
            vec![then(ALLOC, "Yes"), then(POWER, "Max")],
        ),
        rule(And, vec![not(RATE, "Low"), is(INTERFERENCE, "High")], vec![then(ALLOC, "No")]),
        rule(
            And,
            vec![is(RATE, "LowMed"), not(SIGNAL, "Low"), is(INTERFERENCE, "Med"), not(FADING, "Deep")],
            vec![then(ALLOC, "Yes"), then(POWER, "Max")],
        ),
        rule(
            And,
            vec![is(RATE, "MedHigh"), not(SIGNAL, "Low"), is(INTERFERENCE, "Med"), is(FADING, "Peak")],
            vec![then(ALLOC, "Yes"), then(POWER, "Max")],
        ),
        rule(Or, vec![is(INTERFERENCE, "High"), is(FADING, "Deep")], vec![then(ALLOC, "No")]),
        rule(And, vec![is(SIGNAL, "High"), not(FADING, "Deep")], vec![then(ALLOC, "Yes"), then(POWER, "Half")]),
        rule(And, vec![is(SIGNAL, "Low"), not(INTERFERENCE, "Low")], vec![then(ALLOC, "No")]),
        rule(
            And,
            vec![is(RATE, "MedHigh"), is(SIGNAL, "High"), is(INTERFERENCE, "Med"), is(FADING, "Peak")],
            vec![then(ALLOC, "Yes"), then(POWER, "Half")],
        ),
    ];
    RulebaseDoc {
        inputs: vec![
            rate,
            three_levels(SIGNAL, anchors.signal_dbm),
            three_levels(INTERFERENCE, anchors.interference_dbm),
            fading,
        ],
        outputs: vec![yes_no(ALLOC, "Yes", "No"), yes_no(POWER, "Half", "Max")],
        rules,
    }
}

pub fn bundled_rulebase() -> Result<RulebaseDoc> {
    RulebaseDoc::from_json(BUNDLED_RULEBASE)
}
