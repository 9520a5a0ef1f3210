//! Fuzzy-logic ICIC: RB scoring, selection, power levels, link adaptation
//! and multi-user scheduling inside one cell.
//!
//! Each FBS decides alone from its own time-averaged observations; there is
//! no signalling between cells.

pub mod observations;
pub mod rulebase;

use serde::{Deserialize, Serialize};

pub use observations::{ema, SlotMeasurement, UserObservations};
pub use rulebase::{allocation_rulebase, bundled_rulebase, MembershipAnchors};

use crate::fuzzy::{FuzzySystem, RulebaseDoc};
use crate::link_metrics::McsTable;
use crate::scenario::UserDemand;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerLevel {
    Half,
    Max,
}

impl PowerLevel {
    /// Per-RB power for a user spreading `p_max_w` over `n_rb` RBs.
    pub fn watts(self, p_max_w: f64, n_rb: usize) -> f64 {
        let full = p_max_w / n_rb as f64;
        match self {
            PowerLevel::Max => full,
            PowerLevel::Half => 0.5 * full,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PowerLevel::Half => "half",
            PowerLevel::Max => "max",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchedulerKind {
    Greedy,
    Pfs,
    Priority,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IcicConfig {
    pub ema_weight: f64,
    pub scheduler: SchedulerKind,
    pub contiguous: bool,
}

impl Default for IcicConfig {
    fn default() -> Self {
        IcicConfig {
            ema_weight: 0.5,
            scheduler: SchedulerKind::Greedy,
            contiguous: false,
        }
    }
}

/// Crisp outputs for one RB; lower allocation scores are better.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RbScore {
    pub rb: usize,
    pub alloc: f64,
    pub power: f64,
}

/// RBs, per-RB power and MCS assigned to one user for a slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MsAllocation {
    pub ms: usize,
    pub mcs: u8,
    pub rbs: Vec<usize>,
    pub levels: Vec<PowerLevel>,
    pub powers_w: Vec<f64>,
    /// Score that ranked each chosen RB.
    pub scores: Vec<f64>,
}

impl MsAllocation {
    pub fn total_power_w(&self) -> f64 {
        self.powers_w.iter().sum()
    }
}

/// Compiled allocation rulebase with resolved variable indices.
#[derive(Debug, Clone)]
pub struct AllocationFuzzy {
    system: FuzzySystem,
    rate: usize,
    signal: usize,
    interference: usize,
    fading: usize,
    alloc: usize,
    power: usize,
}

impl AllocationFuzzy {
    pub fn new(doc: RulebaseDoc) -> Result<Self> {
        let system = FuzzySystem::new(doc)?;
        Ok(AllocationFuzzy {
            rate: system.input_index(rulebase::RATE)?,
            signal: system.input_index(rulebase::SIGNAL)?,
            interference: system.input_index(rulebase::INTERFERENCE)?,
            fading: system.input_index(rulebase::FADING)?,
            alloc: system.output_index(rulebase::ALLOC)?,
            power: system.output_index(rulebase::POWER)?,
            system,
        })
    }

    pub fn system(&self) -> &FuzzySystem {
        &self.system
    }

    /// `(alloc, power)` scores for one set of crisp inputs.
    pub fn score(&self, rate_bps: f64, signal_dbm: f64, interference_dbm: f64, fading: f64) -> (f64, f64) {
        let mut crisp = [0.0; 4];
        crisp[self.rate] = rate_bps;
        crisp[self.signal] = signal_dbm;
        crisp[self.interference] = interference_dbm;
        crisp[self.fading] = fading;
        let out = self.system.infer_crisp(&crisp);
        (out[self.alloc], out[self.power])
    }

    /// Scores every RB for one user. Rate and signal are per-user
    /// constants; interference and fading vary per RB. Never-observed
    /// interference is scored as `default_interference_w`.
    pub fn score_rbs(
        &self,
        obs: &UserObservations,
        demand: &UserDemand,
        p_max_w: f64,
        default_interference_w: f64,
    ) -> Vec<RbScore> {
        let n_inputs = self.system.doc().inputs.len();
        let mut degrees: Vec<Vec<f64>> = vec![Vec::new(); n_inputs];
        degrees[self.rate] = self.system.fuzzify(self.rate, demand.desired_rate_bps);
        let signal = obs.signal_dbm(p_max_w / demand.n_rb as f64);
        degrees[self.signal] = self.system.fuzzify(self.signal, signal);
        (0..obs.fading.len())
            .map(|rb| {
                degrees[self.interference] = self
                    .system
                    .fuzzify(self.interference, obs.interference_dbm(rb, default_interference_w));
                degrees[self.fading] = self.system.fuzzify(self.fading, obs.fading[rb]);
                let refs: Vec<&[f64]> = degrees.iter().map(Vec::as_slice).collect();
                let out = self.system.infer(&refs);
                RbScore {
                    rb,
                    alloc: out[self.alloc],
                    power: out[self.power],
                }
            })
            .collect()
    }
}

/// Best `n` RBs by score among those with `available[rb]`.
///
/// Non-contiguous: the `n` lowest scores, ties to the lower index.
/// Contiguous: the length-`n` window of available RBs with the least score
/// sum, ties to the lower start; falls back to non-contiguous selection
/// when no such window exists.
pub fn select_available(scores: &[f64], n: usize, contiguous: bool, available: &[bool]) -> Vec<usize> {
    if contiguous && n > 0 {
        let mut best: Option<(f64, usize)> = None;
        for start in 0..scores.len().saturating_sub(n - 1) {
            if !available[start..start + n].iter().all(|&a| a) {
                continue;
            }
            let sum: f64 = scores[start..start + n].iter().sum();
            if best.is_none_or(|(s, _)| sum < s) {
                best = Some((sum, start));
            }
        }
        if let Some((_, start)) = best {
            return (start..start + n).collect();
        }
        log::debug!("no free contiguous window of {n} RBs, selecting non-contiguously");
    }
    let mut idx: Vec<usize> = (0..scores.len()).filter(|&i| available[i]).collect();
    idx.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]).then(a.cmp(&b)));
    idx.truncate(n);
    idx
}

pub fn select_rbs(scores: &[f64], n: usize, contiguous: bool) -> Vec<usize> {
    select_available(scores, n, contiguous, &vec![true; scores.len()])
}

/// Power score above 0.5 selects Max, otherwise Half.
pub fn power_level(score: f64) -> PowerLevel {
    if score > 0.5 {
        PowerLevel::Max
    } else {
        PowerLevel::Half
    }
}

pub fn assign_powers(power_scores: &[f64], n_rb: usize, p_max_w: f64) -> Vec<(PowerLevel, f64)> {
    power_scores
        .iter()
        .map(|&s| {
            let level = power_level(s);
            (level, level.watts(p_max_w, n_rb))
        })
        .collect()
}

/// MCS step for an SINR margin `Δγ` in dB.
pub fn mcs_step(delta_db: f64) -> i32 {
    match delta_db {
        d if d > 7.0 => 3,
        d if d > 5.0 => 2,
        d if d > 3.0 => 1,
        d if d < -7.0 => -3,
        d if d < -5.0 => -2,
        d if d < -3.0 => -1,
        _ => 0,
    }
}

pub fn link_adapt(sinr_avg_db: f64, target_db: f64, mcs: u8) -> u8 {
    let next = mcs as i32 + mcs_step(sinr_avg_db - target_db);
    next.clamp(McsTable::MIN_INDEX as i32, McsTable::MAX_INDEX as i32) as u8
}

/// One user's view for the scheduler.
#[derive(Debug, Clone, PartialEq)]
pub struct SchedulerInput {
    pub scores: Vec<f64>,
    pub n_rb: usize,
    pub desired_rate_bps: f64,
    pub achieved_rate_bps: f64,
}

/// Offset keeping PFS weights positive for users that achieved nothing.
pub const PFS_EPSILON_BPS: f64 = 1.0;

/// RB sets per user (input order). Sets are disjoint; users that find too
/// few free RBs get fewer than `n_rb`.
pub fn schedule_cell(users: &[SchedulerInput], kind: SchedulerKind, contiguous: bool) -> Vec<Vec<usize>> {
    let m = users.first().map_or(0, |u| u.scores.len());
    let mut available = vec![true; m];
    let mut out = vec![Vec::new(); users.len()];
    let serve_in_order = |order: &[usize], available: &mut Vec<bool>, out: &mut Vec<Vec<usize>>| {
        for &u in order {
            let rbs = select_available(&users[u].scores, users[u].n_rb, contiguous, available);
            for &rb in &rbs {
                available[rb] = false;
            }
            out[u] = rbs;
        }
    };
    match kind {
        SchedulerKind::Greedy => {
            let order: Vec<usize> = (0..users.len()).collect();
            serve_in_order(&order, &mut available, &mut out);
        }
        SchedulerKind::Priority => {
            let mut order: Vec<usize> = (0..users.len()).collect();
            order.sort_by(|&a, &b| {
                users[b]
                    .desired_rate_bps
                    .total_cmp(&users[a].desired_rate_bps)
                    .then(a.cmp(&b))
            });
            serve_in_order(&order, &mut available, &mut out);
        }
        SchedulerKind::Pfs => {
            let mut entries: Vec<(f64, usize, usize)> = Vec::with_capacity(users.len() * m);
            for (u, user) in users.iter().enumerate() {
                let w = (user.achieved_rate_bps + PFS_EPSILON_BPS) / user.desired_rate_bps.max(PFS_EPSILON_BPS);
                entries.extend(user.scores.iter().enumerate().map(|(rb, &s)| (s * w, u, rb)));
            }
            entries.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
            for (_, u, rb) in entries {
                if available[rb] && out[u].len() < users[u].n_rb {
                    available[rb] = false;
                    out[u].push(rb);
                }
            }
        }
    }
    for (u, rbs) in out.iter().enumerate() {
        if rbs.len() < users[u].n_rb {
            log::debug!("user {u} short of RBs: {} of {}", rbs.len(), users[u].n_rb);
        }
    }
    out
}

/// A cell's fuzzy decision for its users `(id, demand, observations)`.
/// Adds one to `evaluations` per input value fed to inference.
pub fn decide_fuzzy(
    fuzzy: &AllocationFuzzy,
    cfg: &IcicConfig,
    users: &[(usize, &UserDemand, &UserObservations)],
    p_max_w: f64,
    default_interference_w: f64,
    evaluations: &mut u64,
) -> Vec<MsAllocation> {
    let scored: Vec<Vec<RbScore>> = users
        .iter()
        .map(|(_, d, o)| fuzzy.score_rbs(o, d, p_max_w, default_interference_w))
        .collect();
    let inputs = fuzzy.system().doc().inputs.len();
    *evaluations += scored.iter().map(|s| (s.len() * inputs) as u64).sum::<u64>();
    let inputs: Vec<SchedulerInput> = users
        .iter()
        .zip(&scored)
        .map(|((_, d, o), s)| SchedulerInput {
            scores: s.iter().map(|r| r.alloc).collect(),
            n_rb: d.n_rb,
            desired_rate_bps: d.desired_rate_bps,
            achieved_rate_bps: o.last_throughput_bps,
        })
        .collect();
    let sets = schedule_cell(&inputs, cfg.scheduler, cfg.contiguous);
    users
        .iter()
        .zip(sets)
        .zip(&scored)
        .map(|(((id, d, _), rbs), s)| {
            let power_scores: Vec<f64> = rbs.iter().map(|&rb| s[rb].power).collect();
            let (levels, powers_w) = assign_powers(&power_scores, d.n_rb, p_max_w).into_iter().unzip();
            MsAllocation {
                ms: *id,
                mcs: d.mcs,
                scores: rbs.iter().map(|&rb| s[rb].alloc).collect(),
                rbs,
                levels,
                powers_w,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn select_lowest_scores() {
        let s = [0.2, 0.9, 0.1, 0.5];
        assert_eq!(select_rbs(&s, 2, false), vec![2, 0]);
        assert_eq!(select_rbs(&[0.4; 5], 2, false), vec![0, 1]);
    }

    #[test]
    fn select_contiguous_window() {
        let s: [f64; 4] = [0.2, 0.9, 0.1, 0.5];
        let oracle = (0..=2)
            .min_by(|&a, &b| (s[a] + s[a + 1]).total_cmp(&(s[b] + s[b + 1])))
            .unwrap();
        assert_eq!(select_rbs(&s, 2, true), vec![oracle, oracle + 1]);
        assert_eq!(select_rbs(&s, 2, true), vec![2, 3]);
    }

    #[test]
    fn contiguous_falls_back_when_fragmented() {
        let s = [0.1, 0.2, 0.3, 0.4];
        let avail = [true, false, true, false];
        assert_eq!(select_available(&s, 2, true, &avail), vec![0, 2]);
    }

    #[test]
    fn power_assignment() {
        let p_max = 0.01;
        let single = assign_powers(&[0.6], 1, p_max);
        assert_eq!(single[0].0, PowerLevel::Max);
        assert!((10.0 * (single[0].1 * 1e3).log10() - 10.0).abs() < 1e-12);
        let five = assign_powers(&[0.9; 5], 5, p_max);
        assert!(five.iter().all(|&(_, w)| (w - 0.002).abs() < 1e-15));
        let half = assign_powers(&[0.5, 0.1, 0.3], 3, p_max);
        let total: f64 = half.iter().map(|p| p.1).sum();
        assert!((total - p_max / 2.0).abs() < 1e-15);
        assert!(half.iter().all(|p| p.0 == PowerLevel::Half));
    }

    #[test]
    fn link_adaptation_table() {
        assert_eq!(mcs_step(4.0), 1);
        assert_eq!(mcs_step(0.0), 0);
        assert_eq!(mcs_step(7.5), 3);
        assert_eq!(mcs_step(-5.5), -2);
        assert_eq!(mcs_step(3.0), 0);
        assert_eq!(link_adapt(-8.0, 0.0, 2), 1);
        assert_eq!(link_adapt(10.0, 0.0, 14), 15);
        assert_eq!(link_adapt(4.0, 0.0, 7), 8);
    }

    fn input(scores: Vec<f64>, n_rb: usize, desired: f64, achieved: f64) -> SchedulerInput {
        SchedulerInput {
            scores,
            n_rb,
            desired_rate_bps: desired,
            achieved_rate_bps: achieved,
        }
    }

    #[test]
    fn single_user_matches_select() {
        let s = vec![0.3, 0.1, 0.7, 0.2, 0.9];
        for kind in [SchedulerKind::Greedy, SchedulerKind::Pfs, SchedulerKind::Priority] {
            let out = schedule_cell(&[input(s.clone(), 2, 1e6, 0.0)], kind, false);
            let mut got = out[0].clone();
            got.sort();
            assert_eq!(got, vec![1, 3]);
        }
    }

    #[test]
    fn disjoint_optima_both_served() {
        let a = input(vec![0.1, 0.2, 0.9, 0.9], 2, 1e6, 0.0);
        let b = input(vec![0.9, 0.9, 0.1, 0.2], 2, 1e6, 0.0);
        let out = schedule_cell(&[a, b], SchedulerKind::Greedy, false);
        assert_eq!(out, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn pfs_favours_starved_user() {
        let starved = input(vec![0.4; 4], 2, 1e6, 0.0);
        let served = input(vec![0.4; 4], 2, 1e6, 1e6);
        let out = schedule_cell(&[served, starved], SchedulerKind::Pfs, false);
        assert_eq!(out[1], vec![0, 1]);
        assert_eq!(out[0], vec![2, 3]);
    }

    #[test]
    fn shortfall_and_priority_order() {
        let small = input(vec![0.1, 0.2, 0.3], 2, 1e5, 0.0);
        let big = input(vec![0.1, 0.2, 0.3], 2, 2e6, 0.0);
        let out = schedule_cell(&[small, big], SchedulerKind::Priority, false);
        assert_eq!(out[1], vec![0, 1]);
        assert_eq!(out[0], vec![2]);
    }
}
