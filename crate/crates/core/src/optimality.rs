//! Desk-scale baselines: the exhaustive joint optimum, the greedy per-cell
//! SINR heuristic, and complexity counters.
//!
//! The exhaustive search runs over the same action space as the deployed
//! policies: RB subsets of the required size and a Half/Max level per RB.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelModel, GainTable};
use crate::harness::{Direction, Policy, RunConfig, SimContext, World};
use crate::icic::{MsAllocation, PowerLevel, UserObservations};
use crate::rng::{stream, LABEL_INSTANCE};
use crate::scenario::{draw_demand, Scenario, ScenarioConfig, UserCountTable, UserDemand};
use crate::{Error, Result};

pub const DEFAULT_NODE_BUDGET: u128 = 100_000_000;
const MAX_REDRAWS: usize = 1000;
/// Throughput differences below this are ties.
const TIE_BPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ComplexityCounters {
    pub fuzzy_evaluations: u64,
    pub heuristic_evaluations: u64,
    pub enumeration_nodes: u64,
}

/// Fuzzy membership evaluations per slot: four inputs on every RB.
pub fn fuzzy_evaluations_per_slot(users: usize, num_rbs: usize) -> u64 {
    (users * 4 * num_rbs) as u64
}

/// Greedy heuristic evaluations per slot: gain and interference per RB.
pub fn heuristic_evaluations_per_slot(users: usize, num_rbs: usize) -> u64 {
    (users * 2 * num_rbs) as u64
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `Π C(M, n_u) · levels^(Σ n_u)`.
pub fn enumeration_nodes(num_rbs: usize, n_rbs: &[usize], levels: u32) -> u128 {
    let subsets: u128 = n_rbs.iter().map(|&n| binomial(num_rbs, n)).product();
    let total: u32 = n_rbs.iter().map(|&n| n as u32).sum();
    subsets * (levels as u128).pow(total)
}

/// Heuristic allocation: per-RB potential SINR at `P_max/n_RB` against the
/// last recorded interference (zero where nothing was recorded), the
/// `n_RB` largest among RBs not `taken`, always at Max power.
pub fn greedy_sinr_allocate(
    ms: usize,
    demand: &UserDemand,
    serving_gains: &[f64],
    obs: &UserObservations,
    taken: &[bool],
    p_max_w: f64,
    noise_w: f64,
) -> MsAllocation {
    let p = PowerLevel::Max.watts(p_max_w, demand.n_rb);
    let sinr: Vec<f64> = serving_gains
        .iter()
        .enumerate()
        .map(|(rb, g)| p * g / (obs.interference_w[rb].unwrap_or(0.0) + noise_w))
        .collect();
    let mut idx: Vec<usize> = (0..sinr.len()).filter(|&rb| !taken[rb]).collect();
    idx.sort_by(|&a, &b| sinr[b].total_cmp(&sinr[a]).then(a.cmp(&b)));
    idx.truncate(demand.n_rb);
    MsAllocation {
        ms,
        mcs: demand.mcs,
        scores: idx.iter().map(|&rb| 10.0 * sinr[rb].log10()).collect(),
        levels: vec![PowerLevel::Max; idx.len()],
        powers_w: vec![p; idx.len()],
        rbs: idx,
    }
}

/// Size of generated desk instances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptConfig {
    pub cells: usize,
    pub num_rbs: usize,
    pub max_rbs_per_user: usize,
    pub node_budget: u128,
}

impl Default for OptConfig {
    fn default() -> Self {
        OptConfig {
            cells: 3,
            num_rbs: 8,
            max_rbs_per_user: 4,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

impl OptConfig {
    /// Physical parameters of the desk instances: the defaults with `M`
    /// replaced and one user per cell.
    pub fn run_config(&self) -> RunConfig {
        RunConfig {
            num_rbs: self.num_rbs,
            user_counts: UserCountTable::equal(1),
            min_active_fbs: self.cells,
            ..RunConfig::default()
        }
    }
}

/// Cells with one user each; user `u` is served by cell `u`.
#[derive(Debug, Clone)]
pub struct OptInstance {
    pub scenario: Scenario,
    pub gains: GainTable,
    pub seed: u64,
}

impl OptInstance {
    /// Distinct random apartments of the grid with one user each. Demands
    /// come from the campaign's rate and MCS distributions, redrawn per user
    /// until `n_RB ≤ max_rbs_per_user`, and jointly until the instance fits
    /// the node budget.
    pub fn generate(cfg: &OptConfig, ctx: &SimContext, channel: &ChannelModel, seed: u64) -> Result<Self> {
        let run = cfg.run_config();
        let sc = ScenarioConfig {
            fixed_active: Some(cfg.cells),
            ..run.scenario_config()
        };
        let mut scenario = Scenario::generate(&sc, &ctx.mcs, seed)?;
        let mut rng = stream(seed, &[LABEL_INSTANCE]);
        let cap = cfg.max_rbs_per_user.min(cfg.num_rbs);
        let mut fits = false;
        for _ in 0..MAX_REDRAWS {
            for d in scenario.demands.iter_mut() {
                *d = (0..MAX_REDRAWS)
                    .map(|_| draw_demand(&sc, &ctx.mcs, &mut rng))
                    .find(|d| !d.infeasible && d.n_rb <= cap)
                    .ok_or(Error::RedrawLimit(MAX_REDRAWS))?;
            }
            let needs: Vec<usize> = scenario.demands.iter().map(|d| d.n_rb).collect();
            if enumeration_nodes(cfg.num_rbs, &needs, 2) <= cfg.node_budget {
                fits = true;
                break;
            }
        }
        if !fits {
            return Err(Error::RedrawLimit(MAX_REDRAWS));
        }
        scenario.infeasible_demands = 0;
        let gains = channel.realize(&scenario, seed);
        Ok(OptInstance { scenario, gains, seed })
    }

    pub fn required_nodes(&self) -> u128 {
        let needs: Vec<usize> = self.scenario.demands.iter().map(|d| d.n_rb).collect();
        enumeration_nodes(self.scenario.num_rbs, &needs, 2)
    }

    /// Runs a policy for `slots` slots on this instance.
    pub fn simulate(&self, ctx: &SimContext, policy: Policy, slots: usize) -> Vec<crate::harness::SlotOutcome> {
        let mut w = World::new(ctx, self.scenario.clone(), self.gains.clone(), policy, self.seed);
        (0..slots).map(|_| w.run_slot()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimumResult {
    pub throughput_bps: f64,
    pub rbs: Vec<Vec<usize>>,
    pub levels: Vec<Vec<PowerLevel>>,
    pub nodes: u64,
}

/// All size-`k` subsets of `0..m` in lexicographic order.
pub fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > m {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < m - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

struct Problem<'a> {
    users: usize,
    num_rbs: usize,
    gains: &'a GainTable,
    direction: Direction,
    noise_w: f64,
    /// `[Half, Max]` per-RB watts per user.
    power: Vec<[f64; 2]>,
    threshold: Vec<f64>,
    rate: Vec<f64>,
    subsets: Vec<Vec<Vec<usize>>>,
}

impl Problem<'_> {
    fn cross(&self, tx: usize, rx: usize, rb: usize) -> f64 {
        match self.direction {
            Direction::Downlink => self.gains.gain(tx, rx, rb),
            Direction::Uplink => self.gains.gain(rx, tx, rb),
        }
    }

    /// Best leaf among those whose first user takes subset `first`:
    /// `(throughput, subset indices, power mask, leaves visited)`.
    ///
    /// Power masks are walked in Gray-code order so each step changes one
    /// RB; exact ties keep the smaller mask, which is the lexicographic order
    /// with Half before Max and bit 0 the most significant.
    fn search(&self, first: usize) -> (f64, Vec<usize>, u64, u64) {
        let k = self.users;
        let m = self.num_rbs;
        let mut choice = vec![0usize; k];
        choice[0] = first;
        let mut best = (f64::NEG_INFINITY, choice.clone(), 0u64);
        let mut leaves = 0u64;
        // per RB: (user, lsb bit index) of the transmitters on it
        let mut members: Vec<Vec<(usize, u32)>> = vec![Vec::new(); m];
        let mut sat = vec![false; m * k];
        let mut counts = vec![0usize; k];
        let mut bit_rb: Vec<usize> = Vec::new();
        loop {
            let nbits: u32 = (0..k).map(|u| self.subsets[u][choice[u]].len() as u32).sum();
            members.iter_mut().for_each(Vec::clear);
            bit_rb.clear();
            bit_rb.resize(nbits as usize, 0);
            let mut b = 0u32;
            for (u, &ci) in choice.iter().enumerate() {
                for &rb in &self.subsets[u][ci] {
                    members[rb].push((u, nbits - 1 - b));
                    bit_rb[(nbits - 1 - b) as usize] = rb;
                    b += 1;
                }
            }
            sat.iter_mut().for_each(|s| *s = false);
            counts.iter_mut().for_each(|c| *c = 0);
            for (rb, on_rb) in members.iter().enumerate() {
                self.refresh(rb, on_rb, 0, &mut sat, &mut counts);
            }
            let mut mask = 0u64;
            let total = 1u64 << nbits;
            for step in 1..=total {
                leaves += 1;
                let c: f64 = (0..k).map(|u| counts[u] as f64 * self.rate[u]).sum();
                if c > best.0 + TIE_BPS || (c >= best.0 - TIE_BPS && best.1 == choice && mask < best.2) {
                    best = (c, choice.clone(), mask);
                }
                if step == total {
                    break;
                }
                let bit = step.trailing_zeros();
                mask ^= 1 << bit;
                let rb = bit_rb[bit as usize];
                self.refresh(rb, &members[rb], mask, &mut sat, &mut counts);
            }
            // odometer over users 1..k, last user fastest
            let mut u = k;
            loop {
                u -= 1;
                if u == 0 {
                    return (best.0, best.1, best.2, leaves);
                }
                choice[u] += 1;
                if choice[u] < self.subsets[u].len() {
                    break;
                }
                choice[u] = 0;
            }
        }
    }

    fn refresh(&self, rb: usize, on: &[(usize, u32)], mask: u64, sat: &mut [bool], counts: &mut [usize]) {
        let k = self.users;
        for &(u, j) in on {
            let signal = self.power[u][((mask >> j) & 1) as usize] * self.gains.gain(u, u, rb);
            let mut interference = 0.0;
            for &(v, jv) in on {
                if v != u {
                    interference += self.power[v][((mask >> jv) & 1) as usize] * self.cross(v, u, rb);
                }
            }
            let ok = signal / (interference + self.noise_w) >= self.threshold[u];
            let slot = &mut sat[rb * k + u];
            if ok != *slot {
                *slot = ok;
                if ok {
                    counts[u] += 1;
                } else {
                    counts[u] -= 1;
                }
            }
        }
    }
}

/// Maximizes system throughput over every joint RB subset and Half/Max
/// level vector; ties go to the lexicographically smallest allocation.
pub fn exhaustive_optimum(instance: &OptInstance, ctx: &SimContext, budget: u128) -> Result<OptimumResult> {
    let required = instance.required_nodes();
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let sc = &instance.scenario;
    let m = sc.num_rbs;
    if sc.mobiles.iter().any(|ms| ms.cell != ms.id) || sc.num_users() != sc.num_cells() {
        return Err(Error::Config("exhaustive search needs exactly one user per cell".into()));
    }
    let demands = &sc.demands;
    let problem = Problem {
        users: sc.num_users(),
        num_rbs: m,
        gains: &instance.gains,
        direction: ctx.direction,
        noise_w: ctx.noise_w,
        power: demands
            .iter()
            .map(|d| [PowerLevel::Half.watts(ctx.p_max_w, d.n_rb), PowerLevel::Max.watts(ctx.p_max_w, d.n_rb)])
            .collect(),
        threshold: demands.iter().map(|d| 10f64.powf(ctx.mcs.min_sinr_db(d.mcs) / 10.0)).collect(),
        rate: demands.iter().map(|d| ctx.numerology.rb_rate(ctx.mcs.efficiency(d.mcs))).collect(),
        subsets: demands.iter().map(|d| combinations(m, d.n_rb)).collect(),
    };
    if problem.users == 0 {
        return Ok(OptimumResult { throughput_bps: 0.0, rbs: Vec::new(), levels: Vec::new(), nodes: 0 });
    }
    let partial: Vec<(f64, Vec<usize>, u64, u64)> = (0..problem.subsets[0].len())
        .into_par_iter()
        .map(|first| problem.search(first))
        .collect();
    let nodes = partial.iter().map(|p| p.3).sum();
    let mut best = &partial[0];
    for p in &partial[1..] {
        if p.0 > best.0 + TIE_BPS {
            best = p;
        }
    }
    let (c, choice, mask, _) = best;
    let rbs: Vec<Vec<usize>> = (0..problem.users).map(|u| problem.subsets[u][choice[u]].clone()).collect();
    let nbits: usize = rbs.iter().map(Vec::len).sum();
    let mut levels = Vec::with_capacity(problem.users);
    let mut b = 0;
    for set in &rbs {
        levels.push(
            set.iter()
                .map(|_| {
                    let l = if (mask >> (nbits - 1 - b)) & 1 == 1 { PowerLevel::Max } else { PowerLevel::Half };
                    b += 1;
                    l
                })
                .collect(),
        );
    }
    Ok(OptimumResult {
        throughput_bps: *c,
        rbs,
        levels,
        nodes,
    })
}

/// System throughput of a joint allocation on a one-user-per-cell instance.
pub fn joint_throughput(instance: &OptInstance, ctx: &SimContext, rbs: &[Vec<usize>], powers_w: &[Vec<f64>]) -> f64 {
    let sc = &instance.scenario;
    let cross = |tx: usize, rx: usize, rb: usize| match ctx.direction {
        Direction::Downlink => instance.gains.gain(tx, rx, rb),
        Direction::Uplink => instance.gains.gain(rx, tx, rb),
    };
    let mut total = 0.0;
    for (u, d) in sc.demands.iter().enumerate() {
        let threshold = 10f64.powf(ctx.mcs.min_sinr_db(d.mcs) / 10.0);
        let rate = ctx.numerology.rb_rate(ctx.mcs.efficiency(d.mcs));
        for (k, &rb) in rbs[u].iter().enumerate() {
            let p = powers_w[u][k];
            if p <= 0.0 {
                continue;
            }
            let interference: f64 = (0..sc.num_users())
                .filter(|&v| v != u)
                .filter_map(|v| rbs[v].iter().position(|&r| r == rb).map(|j| powers_w[v][j] * cross(v, u, rb)))
                .sum();
            if p * instance.gains.gain(u, u, rb) / (interference + ctx.noise_w) >= threshold {
                total += rate;
            }
        }
    }
    total
}

/// Optimum against the fuzzy policy and the greedy heuristic on one instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub run: usize,
    pub seed: u64,
    pub optimal_bps: f64,
    pub fuzzy_bps: f64,
    pub greedy_bps: f64,
    pub fuzzy_availability_early: f64,
    pub greedy_availability_early: f64,
    pub nodes: u64,
}

impl Comparison {
    pub const CSV_HEADER: &'static str =
        "run,seed,optimal_bps,fuzzy_bps,greedy_bps,fuzzy_availability_early,greedy_availability_early,nodes";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.run,
            self.seed,
            self.optimal_bps,
            self.fuzzy_bps,
            self.greedy_bps,
            self.fuzzy_availability_early,
            self.greedy_availability_early,
            self.nodes
        )
    }
}

/// Desk comparison over `runs` instances: final-slot throughput after
/// `slots` slots, availability at slot `early_slot` (1-based).
pub fn compare(cfg: &OptConfig, runs: usize, slots: usize, early_slot: usize, seed: u64) -> Result<Vec<Comparison>> {
    if slots == 0 || early_slot == 0 || early_slot > slots {
        return Err(Error::Config(format!("early slot {early_slot} outside 1..={slots}")));
    }
    let run_cfg = cfg.run_config();
    let ctx = SimContext::from_config(&run_cfg)?;
    let area = run_cfg.scenario_config().area();
    let channel = ChannelModel::new(run_cfg.channel_config(), area)?;
    (0..runs)
        .map(|run| {
            let s = crate::rng::child_seed(seed, run as u64);
            let inst = OptInstance::generate(cfg, &ctx, &channel, s)?;
            let opt = exhaustive_optimum(&inst, &ctx, cfg.node_budget)?;
            let fuzzy = inst.simulate(&ctx, Policy::Fuzzy, slots);
            let greedy = inst.simulate(&ctx, Policy::GreedySinr, slots);
            Ok(Comparison {
                run,
                seed: s,
                optimal_bps: opt.throughput_bps,
                fuzzy_bps: fuzzy[slots - 1].metrics.system_throughput_bps,
                greedy_bps: greedy[slots - 1].metrics.system_throughput_bps,
                fuzzy_availability_early: fuzzy[early_slot - 1].metrics.availability,
                greedy_availability_early: greedy[early_slot - 1].metrics.availability,
                nodes: opt.nodes,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting_formulas() {
        assert_eq!(fuzzy_evaluations_per_slot(10, 50), 2000);
        assert_eq!(heuristic_evaluations_per_slot(10, 50), 1000);
        assert_eq!(enumeration_nodes(8, &[4], 2), 1120);
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(4, 5), 0);
    }

    #[test]
    fn combinations_are_lexicographic() {
        let c = combinations(4, 2);
        assert_eq!(c, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(8, 4).len(), 70);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }
}
