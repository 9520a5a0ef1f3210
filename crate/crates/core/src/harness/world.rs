//! One scenario evolving over time slots under one policy.

use serde::{Deserialize, Serialize};

use crate::benchmarks::{abs_gate, apply_gate, max_power_allocate, AbsConfig};
use crate::channel::GainTable;
use crate::fuzzy::RulebaseDoc;
use crate::icic::{
    allocation_rulebase, decide_fuzzy, link_adapt, AllocationFuzzy, IcicConfig, MembershipAnchors, MsAllocation,
    SlotMeasurement, UserObservations,
};
use crate::link_metrics::{McsTable, RbNumerology, SlotMetrics, UserSlotMetrics};
use crate::optimality::{greedy_sinr_allocate, ComplexityCounters};
use crate::scenario::{Scenario, UserDemand};
use crate::units::dbm_to_watts;
use crate::{Error, Result};

use super::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    Fuzzy,
    FuzzyLa,
    #[serde(rename = "maxpower")]
    MaxPower,
    Abs,
    GreedySinr,
}

impl Policy {
    pub fn name(self) -> &'static str {
        match self {
            Policy::Fuzzy => "fuzzy",
            Policy::FuzzyLa => "fuzzy-la",
            Policy::MaxPower => "maxpower",
            Policy::Abs => "abs",
            Policy::GreedySinr => "greedy-sinr",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "fuzzy" => Ok(Policy::Fuzzy),
            "fuzzy-la" => Ok(Policy::FuzzyLa),
            "maxpower" | "max-power" => Ok(Policy::MaxPower),
            "abs" => Ok(Policy::Abs),
            "greedy-sinr" | "greedy" => Ok(Policy::GreedySinr),
            other => Err(Error::Config(format!("unknown policy `{other}`"))),
        }
    }

    pub fn uses_fuzzy(self) -> bool {
        matches!(self, Policy::Fuzzy | Policy::FuzzyLa)
    }
}

/// Which end of each serving link transmits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Downlink,
    Uplink,
}

/// Campaign-wide constants shared read-only by every world.
#[derive(Debug, Clone)]
pub struct SimContext {
    pub mcs: McsTable,
    pub numerology: RbNumerology,
    pub noise_w: f64,
    pub p_max_w: f64,
    pub direction: Direction,
    pub icic: IcicConfig,
    pub abs: AbsConfig,
    pub fuzzy: AllocationFuzzy,
}

impl SimContext {
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        let mcs = McsTable::default();
        let doc = match &cfg.rulebase {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::io(format!("reading rulebase {}", path.display()), e))?;
                RulebaseDoc::from_json(&text)?
            }
            None => allocation_rulebase(&MembershipAnchors::from_signal_stats(&cfg.signal_stats_config(), &mcs)?),
        };
        Ok(SimContext {
            numerology: cfg.numerology(),
            noise_w: cfg.noise().noise_watts(),
            p_max_w: dbm_to_watts(cfg.total_tx_power_dbm),
            direction: cfg.direction,
            icic: cfg.icic_config(),
            abs: cfg.abs_config(),
            fuzzy: AllocationFuzzy::new(doc)?,
            mcs,
        })
    }
}

/// Result of one slot.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotOutcome {
    pub slot: usize,
    pub metrics: SlotMetrics,
    /// Per user, indexed by MS id.
    pub allocations: Vec<MsAllocation>,
}

#[derive(Debug, Clone)]
pub struct World<'a> {
    ctx: &'a SimContext,
    pub scenario: Scenario,
    pub gains: GainTable,
    pub policy: Policy,
    seed: u64,
    pub demands: Vec<UserDemand>,
    pub observations: Vec<UserObservations>,
    pub slot: usize,
    pub counters: ComplexityCounters,
    cell_users: Vec<Vec<usize>>,
}

impl<'a> World<'a> {
    /// Fresh world; observations start from sounding (fading and
    /// large-scale gain of every serving link) with no interference history.
    pub fn new(ctx: &'a SimContext, scenario: Scenario, gains: GainTable, policy: Policy, seed: u64) -> Self {
        let cell_users: Vec<Vec<usize>> = (0..scenario.num_cells()).map(|c| scenario.users_of(c).collect()).collect();
        let observations = scenario
            .mobiles
            .iter()
            .zip(&scenario.demands)
            .map(|(ms, d)| {
                UserObservations::new(
                    gains.fading(ms.cell, ms.id).to_vec(),
                    gains.large_scale(ms.cell, ms.id),
                    ctx.mcs.min_sinr_db(d.mcs),
                )
            })
            .collect();
        World {
            ctx,
            demands: scenario.demands.clone(),
            scenario,
            gains,
            policy,
            seed,
            observations,
            slot: 0,
            counters: ComplexityCounters::default(),
            cell_users,
        }
    }

    fn cell_of(&self, user: usize) -> usize {
        self.scenario.mobiles[user].cell
    }

    /// Gain from the transmitter of user `tx`'s link to the receiver of
    /// user `rx`'s link on `rb`.
    fn cross_gain(&self, tx: usize, rx: usize, rb: usize) -> f64 {
        match self.ctx.direction {
            Direction::Downlink => self.gains.gain(self.cell_of(tx), rx, rb),
            Direction::Uplink => self.gains.gain(self.cell_of(rx), tx, rb),
        }
    }

    fn decide(&mut self) -> Vec<MsAllocation> {
        let ctx = self.ctx;
        let m = self.scenario.num_rbs;
        let mut out: Vec<Option<MsAllocation>> = vec![None; self.scenario.num_users()];
        for (cell, users) in self.cell_users.iter().enumerate() {
            if users.is_empty() {
                continue;
            }
            let allocs = match self.policy {
                Policy::Fuzzy | Policy::FuzzyLa => {
                    let view: Vec<(usize, &UserDemand, &UserObservations)> =
                        users.iter().map(|&u| (u, &self.demands[u], &self.observations[u])).collect();
                    decide_fuzzy(
                        &ctx.fuzzy,
                        &ctx.icic,
                        &view,
                        ctx.p_max_w,
                        ctx.noise_w,
                        &mut self.counters.fuzzy_evaluations,
                    )
                }
                Policy::MaxPower | Policy::Abs => {
                    let view: Vec<(usize, &UserDemand, f64)> = users
                        .iter()
                        .map(|&u| (u, &self.demands[u], self.observations[u].last_throughput_bps))
                        .collect();
                    let mut a = max_power_allocate(&view, m, ctx.p_max_w, self.seed, self.slot, cell);
                    if self.policy == Policy::Abs {
                        for alloc in &mut a {
                            apply_gate(
                                alloc,
                                abs_gate(self.seed, self.slot, alloc.ms, ctx.abs.blank_probability),
                            );
                        }
                    }
                    a
                }
                Policy::GreedySinr => {
                    let mut taken = vec![false; m];
                    users
                        .iter()
                        .map(|&u| {
                            let serving: Vec<f64> = self.gains.gains(cell, u).to_vec();
                            // gain and interference per RB
                            self.counters.heuristic_evaluations += 2 * serving.len() as u64;
                            let a = greedy_sinr_allocate(
                                u,
                                &self.demands[u],
                                &serving,
                                &self.observations[u],
                                &taken,
                                ctx.p_max_w,
                                ctx.noise_w,
                            );
                            for &rb in &a.rbs {
                                taken[rb] = true;
                            }
                            a
                        })
                        .collect()
                }
            };
            for a in allocs {
                let id = a.ms;
                out[id] = Some(a);
            }
        }
        out.into_iter().map(|a| a.expect("every user belongs to a cell")).collect()
    }

    /// Advances one slot: decide, propagate, measure, update, adapt.
    pub fn run_slot(&mut self) -> SlotOutcome {
        let ctx = self.ctx;
        let m = self.scenario.num_rbs;
        let n = self.scenario.num_users();

        // (1) every cell decides from what it observed so far
        let allocations = self.decide();

        // (2) interference from other cells' transmissions, on every RB
        let mut on_rb: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
        for a in &allocations {
            for (&rb, &p) in a.rbs.iter().zip(&a.powers_w) {
                if p > 0.0 {
                    on_rb[rb].push((a.ms, p));
                }
            }
        }
        let mut interference = vec![vec![0.0; m]; n];
        for (rx, row) in interference.iter_mut().enumerate() {
            let cell = self.cell_of(rx);
            for (rb, slot) in row.iter_mut().enumerate() {
                *slot = on_rb[rb]
                    .iter()
                    .filter(|&&(tx, _)| self.cell_of(tx) != cell)
                    .map(|&(tx, p)| p * self.cross_gain(tx, rx, rb))
                    .sum();
            }
        }

        // (3) SINR and throughput per user
        let mut users = Vec::with_capacity(n);
        let mut measurements = Vec::with_capacity(n);
        for (u, a) in allocations.iter().enumerate() {
            let d = &self.demands[u];
            let target = ctx.mcs.min_sinr_db(d.mcs);
            let rate = ctx.numerology.rb_rate(ctx.mcs.efficiency(d.mcs));
            let cell = self.cell_of(u);
            let mut achieved = 0usize;
            let mut sinr_sum = 0.0;
            let mut active = 0usize;
            for (&rb, &p) in a.rbs.iter().zip(&a.powers_w) {
                if p <= 0.0 {
                    continue;
                }
                let s = p * self.gains.gain(cell, u, rb) / (interference[u][rb] + ctx.noise_w);
                sinr_sum += s;
                active += 1;
                if 10.0 * s.log10() >= target {
                    achieved += 1;
                }
            }
            let throughput = achieved as f64 * rate;
            let power = a.total_power_w();
            users.push(UserSlotMetrics {
                throughput_bps: throughput,
                achieved_rbs: achieved,
                tx_power_w: power,
                efficiency_bits_per_joule: if power > 0.0 { throughput / power } else { 0.0 },
                satisfied: throughput >= self.scenario.demands[u].desired_rate_bps,
            });
            measurements.push(SlotMeasurement {
                interference_w: interference[u].clone(),
                mean_sinr: (active > 0).then(|| sinr_sum / active as f64),
                throughput_bps: throughput,
            });
        }

        // (4) observations
        for (obs, meas) in self.observations.iter_mut().zip(&measurements) {
            obs.update(meas, ctx.icic.ema_weight);
        }

        // (5) link adaptation
        if self.policy == Policy::FuzzyLa {
            for u in 0..n {
                let d = &self.demands[u];
                let target = ctx.mcs.min_sinr_db(d.mcs);
                let next = link_adapt(self.observations[u].sinr_avg_db(), target, d.mcs);
                if next != d.mcs {
                    self.demands[u] = d.with_mcs(next, &ctx.mcs, ctx.numerology, self.scenario.num_rbs);
                }
            }
        }

        let outcome = SlotOutcome {
            slot: self.slot,
            metrics: SlotMetrics::from_users(users),
            allocations,
        };
        self.slot += 1;
        outcome
    }
}
