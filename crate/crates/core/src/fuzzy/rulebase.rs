use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::membership::MembershipFunction;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub label: String,
    pub mf: MembershipFunction,
}

impl Term {
    pub fn new(label: impl Into<String>, mf: MembershipFunction) -> Self {
        Term { label: label.into(), mf }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinguisticVariable {
    pub name: String,
    #[serde(default)]
    pub unit: String,
    pub universe: [f64; 2],
    pub terms: Vec<Term>,
}

impl LinguisticVariable {
    pub fn new(name: impl Into<String>, unit: impl Into<String>, universe: [f64; 2], terms: Vec<Term>) -> Self {
        LinguisticVariable {
            name: name.into(),
            unit: unit.into(),
            universe,
            terms,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let [lo, hi] = self.universe;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Config(format!("variable `{}` has an empty universe", self.name)));
        }
        if self.terms.is_empty() {
            return Err(Error::Config(format!("variable `{}` has no terms", self.name)));
        }
        let mut seen = HashSet::new();
        for t in &self.terms {
            t.mf.validate()?;
            if !seen.insert(t.label.as_str()) {
                return Err(Error::Config(format!("duplicate term `{}` in `{}`", t.label, self.name)));
            }
        }
        // Coverage: every universe point belongs to some term.
        const PROBES: usize = 1001;
        for i in 0..PROBES {
            let x = lo + (hi - lo) * i as f64 / (PROBES - 1) as f64;
            if self.terms.iter().all(|t| t.mf.degree(x) <= 0.0) {
                return Err(Error::Config(format!(
                    "variable `{}` leaves {x} {} uncovered",
                    self.name, self.unit
                )));
            }
        }
        Ok(())
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.universe[0], self.universe[1])
    }

    pub fn term_index(&self, label: &str) -> Result<usize> {
        self.terms
            .iter()
            .position(|t| t.label == label)
            .ok_or_else(|| Error::UnknownTerm {
                variable: self.name.clone(),
                term: label.to_string(),
            })
    }

    /// Membership of the clamped crisp value in every term, in term order.
    pub fn fuzzify(&self, x: f64) -> Vec<f64> {
        let x = self.clamp(x);
        self.terms.iter().map(|t| t.mf.degree(x)).collect()
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.universe[0] + self.universe[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Combiner {
    And,
    Or,
}

impl Combiner {
    /// AND is the minimum, OR the maximum.
    pub fn combine(self, degrees: impl IntoIterator<Item = f64>) -> f64 {
        let it = degrees.into_iter();
        match self {
            Combiner::And => it.fold(1.0, f64::min),
            Combiner::Or => it.fold(0.0, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Antecedent {
    pub variable: String,
    pub term: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub negated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Consequent {
    pub variable: String,
    pub term: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub combiner: Combiner,
    #[serde(rename = "if")]
    pub antecedents: Vec<Antecedent>,
    #[serde(rename = "then")]
    pub consequents: Vec<Consequent>,
}

impl Rule {
    /// Activation of this rule for crisp inputs keyed by variable name.
    pub fn fire(&self, vocabulary: &[LinguisticVariable], inputs: &HashMap<String, f64>) -> Result<f64> {
        let mut degrees = Vec::with_capacity(self.antecedents.len());
        for ant in &self.antecedents {
            let var = vocabulary
                .iter()
                .find(|v| v.name == ant.variable)
                .ok_or_else(|| Error::UnknownVariable(ant.variable.clone()))?;
            let term = &var.terms[var.term_index(&ant.term)?];
            let x = *inputs
                .get(&ant.variable)
                .ok_or_else(|| Error::MissingInput(ant.variable.clone()))?;
            let mu = term.mf.degree(var.clamp(x));
            degrees.push(if ant.negated { 1.0 - mu } else { mu });
        }
        Ok(self.combiner.combine(degrees))
    }
}

/// Serializable rulebase: input and output vocabularies plus rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RulebaseDoc {
    pub inputs: Vec<LinguisticVariable>,
    pub outputs: Vec<LinguisticVariable>,
    pub rules: Vec<Rule>,
}

impl RulebaseDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: RulebaseDoc = serde_json::from_str(text)?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn input(&self, name: &str) -> Result<&LinguisticVariable> {
        self.inputs
            .iter()
            .find(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn output(&self, name: &str) -> Result<&LinguisticVariable> {
        self.outputs
            .iter()
            .find(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let mut names = HashSet::new();
        for v in self.inputs.iter().chain(&self.outputs) {
            v.validate()?;
            if !names.insert(v.name.as_str()) {
                return Err(Error::Config(format!("duplicate variable `{}`", v.name)));
            }
        }
        for (i, rule) in self.rules.iter().enumerate() {
            if rule.antecedents.is_empty() || rule.consequents.is_empty() {
                return Err(Error::Config(format!("rule {} needs an antecedent and a consequent", i + 1)));
            }
            for a in &rule.antecedents {
                self.input(&a.variable)?.term_index(&a.term)?;
            }
            for c in &rule.consequents {
                self.output(&c.variable)?.term_index(&c.term)?;
            }
        }
        Ok(())
    }
}
