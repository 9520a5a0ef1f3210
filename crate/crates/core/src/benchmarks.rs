//! Reference policies: maximum power everywhere, and the same with random
//! almost-blank subframes.
//!
//! Both place RBs with the proportional-fair scheduler fed uniform random
//! scores redrawn every slot.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::icic::{schedule_cell, MsAllocation, PowerLevel, SchedulerInput, SchedulerKind};
use crate::rng::{stream, LABEL_ABS, LABEL_POLICY};
use crate::scenario::UserDemand;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbsConfig {
    pub blank_probability: f64,
}

impl Default for AbsConfig {
    fn default() -> Self {
        AbsConfig { blank_probability: 0.1 }
    }
}

impl AbsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.blank_probability) {
            return Err(Error::Config(format!(
                "ABS probability {} outside [0, 1]",
                self.blank_probability
            )));
        }
        Ok(())
    }
}

/// Max-power decision for one cell's users `(id, demand, achieved rate)`.
/// Randomness comes from `(seed, slot, cell)` only.
pub fn max_power_allocate(
    users: &[(usize, &UserDemand, f64)],
    num_rbs: usize,
    p_max_w: f64,
    seed: u64,
    slot: usize,
    cell: usize,
) -> Vec<MsAllocation> {
    let mut rng = stream(seed, &[LABEL_POLICY, slot as u64, cell as u64]);
    let inputs: Vec<SchedulerInput> = users
        .iter()
        .map(|(_, d, achieved)| SchedulerInput {
            scores: (0..num_rbs).map(|_| rng.random::<f64>()).collect(),
            n_rb: d.n_rb,
            desired_rate_bps: d.desired_rate_bps,
            achieved_rate_bps: *achieved,
        })
        .collect();
    let sets = schedule_cell(&inputs, SchedulerKind::Pfs, false);
    users
        .iter()
        .zip(sets)
        .zip(&inputs)
        .map(|(((id, d, _), rbs), input)| MsAllocation {
            ms: *id,
            mcs: d.mcs,
            scores: rbs.iter().map(|&rb| input.scores[rb]).collect(),
            levels: vec![PowerLevel::Max; rbs.len()],
            powers_w: vec![PowerLevel::Max.watts(p_max_w, d.n_rb); rbs.len()],
            rbs,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gate {
    Transmit,
    Blank,
}

/// Independent Bernoulli blank per user and slot.
pub fn abs_gate(seed: u64, slot: usize, user: usize, blank_probability: f64) -> Gate {
    let mut rng = stream(seed, &[LABEL_ABS, slot as u64, user as u64]);
    if rng.random::<f64>() < blank_probability {
        Gate::Blank
    } else {
        Gate::Transmit
    }
}

/// Silences the allocation for a blank slot: RBs stay assigned, power is zero.
pub fn apply_gate(alloc: &mut MsAllocation, gate: Gate) {
    if gate == Gate::Blank {
        alloc.powers_w.iter_mut().for_each(|p| *p = 0.0);
    }
}
