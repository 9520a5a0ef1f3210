//! Many scenarios, several policies, per-slot means.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelModel;
use crate::rng::child_seed;
use crate::scenario::Scenario;
use crate::{Error, Result};

use super::world::{Policy, SimContext, SlotOutcome, World};
use super::RunConfig;

/// The four headline metrics of one slot.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SlotSummary {
    pub throughput_bps: f64,
    pub energy_eff_bits_per_joule: f64,
    pub availability: f64,
    pub fairness: f64,
}

impl SlotSummary {
    pub fn from_outcome(o: &SlotOutcome) -> Self {
        SlotSummary {
            throughput_bps: o.metrics.system_throughput_bps,
            energy_eff_bits_per_joule: o.metrics.mean_efficiency_bits_per_joule,
            availability: o.metrics.availability,
            fairness: o.metrics.fairness,
        }
    }

    fn mean(rows: &[SlotSummary]) -> SlotSummary {
        let n = rows.len() as f64;
        let sum = |f: fn(&SlotSummary) -> f64| rows.iter().map(f).sum::<f64>() / n;
        SlotSummary {
            throughput_bps: sum(|s| s.throughput_bps),
            energy_eff_bits_per_joule: sum(|s| s.energy_eff_bits_per_joule),
            availability: sum(|s| s.availability),
            fairness: sum(|s| s.fairness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyResults {
    pub policy: Policy,
    /// `per_scenario[i][slot]`.
    pub per_scenario: Vec<Vec<SlotSummary>>,
    pub mean_per_slot: Vec<SlotSummary>,
}

impl PolicyResults {
    pub fn final_slot(&self) -> SlotSummary {
        *self.mean_per_slot.last().expect("at least one slot")
    }
}

/// Percentage gain of `a` over `b` for each metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gain {
    pub policy: Policy,
    pub versus: Policy,
    pub throughput_pct: f64,
    pub energy_eff_pct: f64,
    pub availability_pct: f64,
    pub fairness_pct: f64,
}

fn pct(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        if a == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        100.0 * (a / b - 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResults {
    pub seeds: Vec<u64>,
    pub policies: Vec<PolicyResults>,
    /// Users whose demand exceeded the RB count, summed over scenarios.
    pub infeasible_demands: usize,
}

impl RunResults {
    pub fn policy(&self, p: Policy) -> Option<&PolicyResults> {
        self.policies.iter().find(|r| r.policy == p)
    }

    /// Final-slot gains of each fuzzy policy over every other policy.
    pub fn gains(&self) -> Vec<Gain> {
        let mut out = Vec::new();
        for a in self.policies.iter().filter(|r| r.policy.uses_fuzzy()) {
            for b in self.policies.iter().filter(|r| r.policy != a.policy) {
                if a.policy == Policy::Fuzzy && b.policy == Policy::FuzzyLa {
                    continue;
                }
                let (fa, fb) = (a.final_slot(), b.final_slot());
                out.push(Gain {
                    policy: a.policy,
                    versus: b.policy,
                    throughput_pct: pct(fa.throughput_bps, fb.throughput_bps),
                    energy_eff_pct: pct(fa.energy_eff_bits_per_joule, fb.energy_eff_bits_per_joule),
                    availability_pct: pct(fa.availability, fb.availability),
                    fairness_pct: pct(fa.fairness, fb.fairness),
                });
            }
        }
        out
    }

    pub fn gain(&self, policy: Policy, versus: Policy) -> Option<Gain> {
        self.gains().into_iter().find(|g| g.policy == policy && g.versus == versus)
    }

    pub fn metrics_csv(&self) -> String {
        let mut s = String::from("slot,policy,mean_throughput_bps,mean_energy_eff_bits_per_joule,availability,fairness\n");
        for r in &self.policies {
            for (slot, m) in r.mean_per_slot.iter().enumerate() {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    slot + 1,
                    r.policy.name(),
                    m.throughput_bps,
                    m.energy_eff_bits_per_joule,
                    m.availability,
                    m.fairness
                ));
            }
        }
        s
    }

    pub fn summary_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Summary {
            scenarios: usize,
            slots: usize,
            infeasible_demands: usize,
            final_slot: BTreeMap<&'static str, SlotSummary>,
            gains: Vec<Gain>,
        }
        let summary = Summary {
            scenarios: self.seeds.len(),
            slots: self.policies.first().map_or(0, |p| p.mean_per_slot.len()),
            infeasible_demands: self.infeasible_demands,
            final_slot: self.policies.iter().map(|p| (p.policy.name(), p.final_slot())).collect(),
            gains: self.gains(),
        };
        Ok(serde_json::to_string_pretty(&summary)?)
    }
}

/// Prepared campaign: configuration plus shared read-only state.
pub struct Campaign {
    pub config: RunConfig,
    pub context: SimContext,
    pub channel: ChannelModel,
}

impl Campaign {
    pub fn new(config: RunConfig) -> Result<Self> {
        config.validate()?;
        let context = SimContext::from_config(&config)?;
        let channel = ChannelModel::new(config.channel_config(), config.scenario_config().area())?;
        Ok(Campaign { config, context, channel })
    }

    pub fn scenario_seed(&self, index: usize) -> u64 {
        child_seed(self.config.seed, index as u64)
    }

    pub fn scenario(&self, index: usize) -> Result<Scenario> {
        Scenario::generate(&self.config.scenario_config(), &self.context.mcs, self.scenario_seed(index))
    }

    /// Every slot of scenario `index` under `policy`.
    pub fn run_scenario(&self, index: usize, policy: Policy) -> Result<Vec<SlotOutcome>> {
        let seed = self.scenario_seed(index);
        let scenario = self.scenario(index)?;
        let gains = self.channel.realize(&scenario, seed);
        let mut world = World::new(&self.context, scenario, gains, policy, seed);
        Ok((0..self.config.time_slots).map(|_| world.run_slot()).collect())
    }

    fn run_all(&self) -> Result<RunResults> {
        let cfg = &self.config;
        let per_scenario: Vec<(usize, Vec<Vec<SlotSummary>>)> = (0..cfg.scenarios)
            .into_par_iter()
            .map(|i| {
                let seed = self.scenario_seed(i);
                let scenario = self.scenario(i)?;
                let gains = self.channel.realize(&scenario, seed);
                let infeasible = scenario.infeasible_demands;
                let rows = cfg
                    .policies
                    .iter()
                    .map(|&p| {
                        let mut world = World::new(&self.context, scenario.clone(), gains.clone(), p, seed);
                        (0..cfg.time_slots)
                            .map(|_| SlotSummary::from_outcome(&world.run_slot()))
                            .collect()
                    })
                    .collect();
                Ok((infeasible, rows))
            })
            .collect::<Result<_>>()?;

        let policies = cfg
            .policies
            .iter()
            .enumerate()
            .map(|(k, &policy)| {
                let rows: Vec<Vec<SlotSummary>> = per_scenario.iter().map(|(_, r)| r[k].clone()).collect();
                let mean_per_slot = (0..cfg.time_slots)
                    .map(|t| SlotSummary::mean(&rows.iter().map(|r| r[t]).collect::<Vec<_>>()))
                    .collect();
                PolicyResults {
                    policy,
                    per_scenario: rows,
                    mean_per_slot,
                }
            })
            .collect();
        Ok(RunResults {
            seeds: (0..cfg.scenarios).map(|i| self.scenario_seed(i)).collect(),
            policies,
            infeasible_demands: per_scenario.iter().map(|(n, _)| n).sum(),
        })
    }

    /// Runs every scenario on a pool of `workers` threads (0 = all cores).
    /// Results are collected in scenario order, so they do not depend on
    /// the worker count.
    pub fn run(&self) -> Result<RunResults> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.config.workers)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(|| self.run_all())
    }

    /// Decision trace of scenario `index` under `policy` as CSV
    /// `slot,cell,ms,rb,power_level,mcs,alloc_score`.
    pub fn trace_csv(&self, index: usize, policy: Policy) -> Result<String> {
        let scenario = self.scenario(index)?;
        let outcomes = self.run_scenario(index, policy)?;
        let mut s = String::from("slot,cell,ms,rb,power_level,mcs,alloc_score\n");
        for o in &outcomes {
            for a in &o.allocations {
                let cell = scenario.mobiles[a.ms].cell;
                for (k, &rb) in a.rbs.iter().enumerate() {
                    let level = if a.powers_w[k] == 0.0 { "blank" } else { a.levels[k].as_str() };
                    s.push_str(&format!("{},{},{},{},{},{},{}\n", o.slot + 1, cell, a.ms, rb, level, a.mcs, a.scores[k]));
                }
            }
        }
        Ok(s)
    }
}

pub fn run_campaign(config: &RunConfig) -> Result<RunResults> {
    Campaign::new(config.clone())?.run()
}

fn write(path: &Path, text: &str) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
    f.write_all(text.as_bytes())
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

/// Writes `metrics_per_slot.csv` and `summary.json` into `dir`, plus a
/// trace of scenario 0 per policy when `trace` is set.
pub fn write_outputs(campaign: &Campaign, results: &RunResults, dir: &Path, trace: bool) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    write(&dir.join("metrics_per_slot.csv"), &results.metrics_csv())?;
    write(&dir.join("summary.json"), &results.summary_json()?)?;
    if trace {
        for &p in &campaign.config.policies {
            write(&dir.join(format!("trace_{}.csv", p.name())), &campaign.trace_csv(0, p)?)?;
        }
    }
    Ok(())
}
