//! Mamdani fuzzy inference.
//!
//! Membership evaluation, rule firing (AND = min, OR = max, NOT = 1 − μ),
//! clipping implication with pointwise-max aggregation, and centre-of-gravity
//! defuzzification on a sampled output universe. Nothing here knows about
//! radio; the allocator in [`crate::icic`] supplies the vocabulary.

mod membership;
mod rulebase;

pub use membership::{evaluate_membership, MembershipFunction};
pub use rulebase::{Antecedent, Combiner, Consequent, LinguisticVariable, Rule, RulebaseDoc, Term};

use std::collections::HashMap;

use crate::{Error, Result};

/// Samples used for every output universe.
pub const OUTPUT_GRID_POINTS: usize = 201;

/// Sampled membership curve of an aggregated output.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyOutputSet {
    pub grid: Vec<f64>,
    pub mu: Vec<f64>,
}

impl FuzzyOutputSet {
    pub fn zeros(universe: [f64; 2], points: usize) -> Self {
        FuzzyOutputSet {
            grid: uniform_grid(universe, points),
            mu: vec![0.0; points],
        }
    }

    pub fn universe(&self) -> [f64; 2] {
        [self.grid[0], *self.grid.last().expect("non-empty grid")]
    }

    pub fn is_empty(&self) -> bool {
        self.mu.iter().all(|&m| m <= 0.0)
    }
}

pub fn uniform_grid(universe: [f64; 2], points: usize) -> Vec<f64> {
    assert!(points >= 2, "grid needs at least two points");
    let [lo, hi] = universe;
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|i| if i + 1 == points { hi } else { lo + step * i as f64 })
        .collect()
}

/// Clip each term curve at its activation and merge pointwise by maximum.
pub fn aggregate_terms(universe: [f64; 2], points: usize, clipped: &[(f64, MembershipFunction)]) -> FuzzyOutputSet {
    let mut set = FuzzyOutputSet::zeros(universe, points);
    for &(act, mf) in clipped {
        if act <= 0.0 {
            continue;
        }
        for (mu, &x) in set.mu.iter_mut().zip(&set.grid) {
            *mu = mu.max(act.min(mf.degree(x)));
        }
    }
    set
}

/// Centre of gravity by trapezoidal quadrature; the universe midpoint when
/// the set is empty.
pub fn defuzzify(set: &FuzzyOutputSet) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for i in 1..set.grid.len() {
        let h = set.grid[i] - set.grid[i - 1];
        num += 0.5 * h * (set.grid[i - 1] * set.mu[i - 1] + set.grid[i] * set.mu[i]);
        den += 0.5 * h * (set.mu[i - 1] + set.mu[i]);
    }
    if den <= 0.0 {
        let [lo, hi] = set.universe();
        return 0.5 * (lo + hi);
    }
    num / den
}

#[derive(Debug, Clone)]
struct CompiledRule {
    combiner: Combiner,
    antecedents: Vec<(usize, usize, bool)>,
    consequents: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
struct OutputCurves {
    grid: Vec<f64>,
    /// `curves[term][i]` is the term's membership at `grid[i]`.
    curves: Vec<Vec<f64>>,
}

/// A validated rulebase with output term curves pre-sampled.
///
/// Immutable after construction; `infer` takes `&self` and may be called from
/// any number of threads.
#[derive(Debug, Clone)]
pub struct FuzzySystem {
    doc: RulebaseDoc,
    rules: Vec<CompiledRule>,
    outputs: Vec<OutputCurves>,
}

impl FuzzySystem {
    pub fn new(doc: RulebaseDoc) -> Result<Self> {
        doc.validate()?;
        let input_idx = |name: &str| doc.inputs.iter().position(|v| v.name == name);
        let output_idx = |name: &str| doc.outputs.iter().position(|v| v.name == name);
        let mut rules = Vec::with_capacity(doc.rules.len());
        for r in &doc.rules {
            let mut antecedents = Vec::new();
            for a in &r.antecedents {
                let vi = input_idx(&a.variable).ok_or_else(|| Error::UnknownVariable(a.variable.clone()))?;
                antecedents.push((vi, doc.inputs[vi].term_index(&a.term)?, a.negated));
            }
            let mut consequents = Vec::new();
            for c in &r.consequents {
                let vi = output_idx(&c.variable).ok_or_else(|| Error::UnknownVariable(c.variable.clone()))?;
                consequents.push((vi, doc.outputs[vi].term_index(&c.term)?));
            }
            rules.push(CompiledRule {
                combiner: r.combiner,
                antecedents,
                consequents,
            });
        }
        let outputs = doc
            .outputs
            .iter()
            .map(|v| {
                let grid = uniform_grid(v.universe, OUTPUT_GRID_POINTS);
                let curves = v
                    .terms
                    .iter()
                    .map(|t| grid.iter().map(|&x| t.mf.degree(x)).collect())
                    .collect();
                OutputCurves { grid, curves }
            })
            .collect();
        Ok(FuzzySystem { doc, rules, outputs })
    }

    pub fn doc(&self) -> &RulebaseDoc {
        &self.doc
    }

    pub fn input_index(&self, name: &str) -> Result<usize> {
        self.doc
            .inputs
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn output_index(&self, name: &str) -> Result<usize> {
        self.doc
            .outputs
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Term degrees of input `var` at crisp value `x`.
    pub fn fuzzify(&self, var: usize, x: f64) -> Vec<f64> {
        self.doc.inputs[var].fuzzify(x)
    }

    /// Activation of every rule given per-input term degrees.
    pub fn activations(&self, degrees: &[&[f64]]) -> Vec<f64> {
        self.rules
            .iter()
            .map(|r| {
                r.combiner.combine(r.antecedents.iter().map(|&(v, t, neg)| {
                    let mu = degrees[v][t];
                    if neg {
                        1.0 - mu
                    } else {
                        mu
                    }
                }))
            })
            .collect()
    }

    /// Activations from crisp inputs keyed by name.
    pub fn fire_all(&self, inputs: &HashMap<String, f64>) -> Result<Vec<f64>> {
        self.doc.rules.iter().map(|r| r.fire(&self.doc.inputs, inputs)).collect()
    }

    /// Aggregated fuzzy set of output `out` for the given rule activations.
    pub fn aggregate(&self, activations: &[f64], out: usize) -> FuzzyOutputSet {
        let curves = &self.outputs[out];
        // max over rules of min(a_r, μ_t) equals min(max_r a_r, μ_t) per term.
        let mut strength = vec![0.0f64; curves.curves.len()];
        for (rule, &act) in self.rules.iter().zip(activations) {
            for &(o, t) in &rule.consequents {
                if o == out {
                    strength[t] = strength[t].max(act);
                }
            }
        }
        let mut mu = vec![0.0f64; curves.grid.len()];
        for (curve, &s) in curves.curves.iter().zip(&strength) {
            if s <= 0.0 {
                continue;
            }
            for (m, &c) in mu.iter_mut().zip(curve) {
                *m = m.max(s.min(c));
            }
        }
        FuzzyOutputSet {
            grid: curves.grid.clone(),
            mu,
        }
    }

    /// Crisp value of every output, in output order.
    pub fn infer(&self, degrees: &[&[f64]]) -> Vec<f64> {
        let acts = self.activations(degrees);
        (0..self.outputs.len())
            .map(|o| defuzzify(&self.aggregate(&acts, o)))
            .collect()
    }

    /// Convenience wrapper taking crisp inputs in input order.
    pub fn infer_crisp(&self, inputs: &[f64]) -> Vec<f64> {
        let fuzzified: Vec<Vec<f64>> = inputs.iter().enumerate().map(|(i, &x)| self.fuzzify(i, x)).collect();
        let refs: Vec<&[f64]> = fuzzified.iter().map(Vec::as_slice).collect();
        self.infer(&refs)
    }
}
