//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero when any criterion fails.

mod common;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_distr::{Distribution, Normal};

use common::*;
use femto_icic::benchmarks::{abs_gate, Gate};
use femto_icic::channel::ChannelModel;
use femto_icic::fuzzy::{aggregate_terms, defuzzify, FuzzySystem, MembershipFunction, OUTPUT_GRID_POINTS};
use femto_icic::harness::{write_outputs, Campaign, Policy, RunConfig, SimContext, World};
use femto_icic::icic::{allocation_rulebase, link_adapt, MembershipAnchors};
use femto_icic::link_metrics::{
    achieved_rbs, availability, jain_fairness, power_efficiency, sinr, user_throughput, McsTable, NoiseModel,
    RbNumerology,
};
use femto_icic::optimality::{compare, exhaustive_optimum, OptConfig, OptInstance};
use femto_icic::rng::stream;
use femto_icic::scenario::{draw_demand, Scenario, ScenarioConfig, UserCountTable};
use femto_icic::signal_stats::{distance_pdf, signal_distributions, SignalStatsConfig};
use femto_icic::units::{dbm_to_watts, linear_to_db};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>, failures: &mut Vec<String>) -> bool {
    if !ok {
        failures.push(detail.into());
    }
    ok
}

fn finish(failures: Vec<String>, summary: String, elapsed: Duration, limit: Duration) -> Outcome {
    let mut failures = failures;
    if elapsed > limit {
        failures.push(format!("took {:.1}s, limit {:.0}s", elapsed.as_secs_f64(), limit.as_secs_f64()));
    }
    let pass = failures.is_empty();
    let detail = if pass {
        format!("{summary} ({:.2}s)", elapsed.as_secs_f64())
    } else {
        format!("{summary} ({:.2}s); failed: {}", elapsed.as_secs_f64(), failures.join("; "))
    };
    Outcome { pass, detail }
}

const YES: MembershipFunction = MembershipFunction::Triangle { a: 0.0, b: 0.0, c: 0.75 };
const NO: MembershipFunction = MembershipFunction::Triangle { a: 0.25, b: 1.0, c: 1.0 };

fn fuzzy_core() -> Outcome {
    let t = Instant::now();
    let mut f = Vec::new();
    let grid = OUTPUT_GRID_POINTS;

    let symmetric = [
        MembershipFunction::Triangle { a: 0.0, b: 0.5, c: 1.0 },
        MembershipFunction::Trapezoid { a: 0.1, b: 0.3, c: 0.7, d: 0.9 },
        MembershipFunction::Trapezoid { a: 0.0, b: 0.25, c: 0.75, d: 1.0 },
    ];
    let mut worst_sym: f64 = 0.0;
    for mf in symmetric {
        for act in [1.0, 0.6, 0.2] {
            let c = defuzzify(&aggregate_terms([0.0, 1.0], grid, &[(act, mf)]));
            worst_sym = worst_sym.max((c - 0.5).abs());
        }
    }
    check(worst_sym <= 1e-9, format!("symmetric centroid error {worst_sym:e}"), &mut f);

    let mut rng = stream(11, &[1]);
    let mut worst_clip: f64 = 0.0;
    for _ in 0..200 {
        let (a1, a2): (f64, f64) = (rng.random(), rng.random());
        if a1 + a2 < 1e-3 {
            continue;
        }
        let got = defuzzify(&aggregate_terms([0.0, 1.0], grid, &[(a1, YES), (a2, NO)]));
        let want = centroid_oracle(0.0, 1.0, 100_000, |x| {
            a1.min(degree_oracle(&YES, x)).max(a2.min(degree_oracle(&NO, x)))
        });
        worst_clip = worst_clip.max((got - want).abs());
    }
    check(worst_clip <= 1e-4, format!("clipped centroid error {worst_clip:e}"), &mut f);

    let table = McsTable::default();
    let anchors = MembershipAnchors::from_signal_stats(&SignalStatsConfig::default(), &table).expect("anchors");
    let doc = allocation_rulebase(&anchors);
    let system = FuzzySystem::new(doc.clone()).expect("rulebase");
    let mut worst_rule: f64 = 0.0;
    for _ in 0..1000 {
        let inputs: HashMap<String, f64> = [
            ("rate", rng.random_range(0.0..4e6)),
            ("signal", rng.random_range(-160.0..-90.0)),
            ("interference", rng.random_range(-160.0..-90.0)),
            ("fading", rng.random_range(0.0..3.0)),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        let fired = system.fire_all(&inputs).expect("fire");
        for (rule, &got) in doc.rules.iter().zip(&fired) {
            let degrees = rule.antecedents.iter().map(|a| {
                let var = doc.inputs.iter().find(|v| v.name == a.variable).unwrap();
                let term = var.terms.iter().find(|t| t.label == a.term).unwrap();
                let mu = degree_oracle(&term.mf, inputs[&a.variable]);
                if a.negated {
                    1.0 - mu
                } else {
                    mu
                }
            });
            let want = match rule.combiner {
                femto_icic::fuzzy::Combiner::And => degrees.fold(1.0, f64::min),
                femto_icic::fuzzy::Combiner::Or => degrees.fold(0.0, f64::max),
            };
            worst_rule = worst_rule.max((got - want).abs());
            worst_rule = worst_rule.max((rule.fire(&doc.inputs, &inputs).unwrap() - want).abs());
        }
    }
    check(worst_rule <= 1e-12, format!("rule firing error {worst_rule:e}"), &mut f);
    finish(
        f,
        format!("symmetric {worst_sym:.1e}, clipped {worst_clip:.1e}, rules {worst_rule:.1e}"),
        t.elapsed(),
        Duration::from_secs(1),
    )
}

fn metrics_arithmetic() -> Outcome {
    let t = Instant::now();
    let mut f = Vec::new();
    let noise = NoiseModel::default();
    let eta_oracle = -174.0 + 10.0 * 1.8e5f64.log10();
    check(
        (noise.noise_dbm() - eta_oracle).abs() < 1e-9 && (noise.noise_dbm() + 121.45).abs() < 0.01,
        format!("noise {} dBm", noise.noise_dbm()),
        &mut f,
    );
    let g = linear_to_db(sinr(dbm_to_watts(-90.0), 0.0, noise.noise_watts()));
    check((g - 31.45).abs() < 0.01, format!("isolated SINR {g} dB"), &mut f);
    let g = linear_to_db(sinr(1e-6, 1e-6, 1e-20));
    check(g.abs() < 1e-9, format!("S = I SINR {g} dB"), &mut f);

    let table = McsTable::default();
    let rb = RbNumerology::default();
    let eff = table.efficiency(7);
    check((eff - 1.4766).abs() < 1e-12, format!("MCS 7 efficiency {eff}"), &mut f);
    let target = table.min_sinr_db(7);
    let all = user_throughput(&[target + 1.0; 10], target, eff, rb);
    check((all - 10.0 * 12.0 * 15e3 * 1.4766).abs() < 1e-6, format!("10-RB throughput {all}"), &mut f);
    let mut mixed = vec![target; 5];
    mixed.extend([target - 0.01; 5]);
    let half = user_throughput(&mixed, target, eff, rb);
    check(half == all / 2.0, format!("5 of 10 throughput {half}"), &mut f);
    check(achieved_rbs(&mixed, target) == 5, "threshold counting", &mut f);
    check(user_throughput(&[target - 1.0; 10], target, eff, rb) == 0.0, "no RB meets target", &mut f);

    check(power_efficiency(1e6, &[0.01]) == 1e8, "efficiency 1e8 bits/J", &mut f);
    check(power_efficiency(0.0, &[]) == 0.0, "efficiency of silence", &mut f);
    check(availability(&[1.0, 1.0, 1.0, 0.0], &[1.0; 4]) == 0.75, "availability 3 of 4", &mut f);
    check(availability(&[2.0; 3], &[1.0; 3]) == 1.0, "availability all", &mut f);
    check(availability(&[0.0; 3], &[1.0; 3]) == 0.0, "availability none", &mut f);
    check(jain_fairness(&[5.0; 4]) == 1.0, "Jain equal", &mut f);
    check((jain_fairness(&[0.0, 0.0, 3.0, 0.0]) - 0.25).abs() < 1e-15, "Jain one of four", &mut f);
    check((jain_fairness(&[2.0, 4.0]) - 0.9).abs() < 1e-15, "Jain (2, 4)", &mut f);
    finish(f, "noise, SINR, throughput, efficiency, availability, Jain".into(), t.elapsed(), Duration::from_secs(1))
}

fn la_step_oracle(delta: f64) -> i32 {
    const BANDS: [(f64, i32); 3] = [(7.0, 3), (5.0, 2), (3.0, 1)];
    for (edge, step) in BANDS {
        if delta > edge {
            return step;
        }
        if delta < -edge {
            return -step;
        }
    }
    0
}

fn link_adaptation_table() -> Outcome {
    let t = Instant::now();
    let mut f = Vec::new();
    let table = McsTable::default();
    let rb = RbNumerology::default();
    let mut cases = 0;
    for delta in -10..=10 {
        for mcs in 1u8..=15 {
            let want = (mcs as i32 + la_step_oracle(delta as f64)).clamp(1, 15) as u8;
            let got = link_adapt(5.0 + delta as f64, 5.0, mcs);
            check(got == want, format!("delta {delta} at MCS {mcs}: {got} != {want}"), &mut f);
            let demand = femto_icic::scenario::UserDemand::new(1.25e6, mcs, &table, rb, 50).with_mcs(got, &table, rb, 50);
            let n = ((1.25e6 / rb.rb_rate(table.efficiency(got))).ceil() as usize).min(50);
            check(demand.n_rb == n, format!("n_RB after MCS {got}: {} != {n}", demand.n_rb), &mut f);
            cases += 1;
        }
    }
    finish(f, format!("{cases} (delta, MCS) cases"), t.elapsed(), Duration::from_secs(1))
}

fn statistics_validation() -> Outcome {
    let t = Instant::now();
    let mut f = Vec::new();
    let cfg = SignalStatsConfig::default();
    let table = McsTable::default();
    let dists = signal_distributions(&cfg, &table).expect("distributions");
    let n = 100_000;
    let mut rng = stream(2024, &[4]);
    let pl = |d: f64| cfg.pathloss.alpha + cfg.pathloss.beta * d.max(0.1).log10();

    // distance density, integrated numerically
    let dim = cfg.desired_dimension_m;
    let steps = 20_000;
    let h = std::f64::consts::SQRT_2 * dim / steps as f64;
    let mut cum = vec![0.0; steps + 1];
    for i in 1..=steps {
        let (a, b) = ((i - 1) as f64 * h, i as f64 * h);
        cum[i] = cum[i - 1] + 0.5 * h * (distance_pdf(a, dim) + distance_pdf(b, dim));
    }
    let cdf_d = |x: f64| {
        let k = ((x / h) as usize).min(steps - 1);
        let frac = x / h - k as f64;
        cum[k] + frac * (cum[k + 1] - cum[k])
    };
    let mut d: Vec<f64> = (0..n).map(|_| random_pair_distance(&mut rng, dim)).collect();
    d.sort_by(f64::total_cmp);
    let ks_d = ks_statistic(&d, cdf_d);
    check(ks_d < 0.02, format!("distance KS {ks_d:.4}"), &mut f);

    let mut ks_l: f64 = 0.0;
    for (dim, density) in [
        (cfg.desired_dimension_m, &dists.pathloss_desired),
        (cfg.interfering_dimension_m, &dists.pathloss_interfering),
    ] {
        let mut l: Vec<f64> = (0..n).map(|_| pl(random_pair_distance(&mut rng, dim))).collect();
        l.sort_by(f64::total_cmp);
        ks_l = ks_l.max(ks_statistic(&l, |x| density.cdf(x)));
    }
    check(ks_l < 0.02, format!("path-loss KS {ks_l:.4}"), &mut f);

    // transmit power atoms: P_max / n_RB
    let rb = cfg.numerology;
    let scale = cfg.average_rate_bps * (2.0 / std::f64::consts::PI).sqrt();
    let draw_n = |rng: &mut rand_chacha::ChaCha8Rng| {
        let u: f64 = rng.random();
        let rate = scale * (-2.0 * (1.0 - u).ln()).sqrt();
        let mcs: u8 = rng.random_range(1..=15);
        ((rate / rb.rb_rate(table.efficiency(mcs))).ceil() as usize).clamp(1, cfg.num_rbs)
    };
    let mut counts = vec![0usize; cfg.num_rbs + 1];
    for _ in 0..n {
        counts[draw_n(&mut rng)] += 1;
    }
    let mut worst_atom: f64 = 0.0;
    for atom in &dists.tx_power.atoms {
        let k = (10f64.powf((cfg.p_max_dbm - atom.at) / 10.0)).round() as usize;
        worst_atom = worst_atom.max((atom.mass - counts[k] as f64 / n as f64).abs());
    }
    let atom_mass: f64 = dists.tx_power.atoms.iter().map(|a| a.mass).sum();
    check(worst_atom <= 0.005, format!("transmit-power atom error {worst_atom:.4}"), &mut f);
    check((atom_mass - 1.0).abs() < 1e-9, format!("transmit-power mass {atom_mass}"), &mut f);

    // received power CDFs
    let shadow = Normal::new(0.0, cfg.shadowing_sigma_db).unwrap();
    let mut worst_shift: f64 = 0.0;
    for (dim, density) in [
        (cfg.desired_dimension_m, &dists.desired),
        (cfg.interfering_dimension_m, &dists.interfering),
    ] {
        let mut p: Vec<f64> = (0..n)
            .map(|_| {
                let k = draw_n(&mut rng);
                let tx = cfg.p_max_dbm - 10.0 * (k as f64).log10();
                tx - pl(random_pair_distance(&mut rng, dim)) - shadow.sample(&mut rng)
            })
            .collect();
        p.sort_by(f64::total_cmp);
        for i in 1..100 {
            let q = i as f64 / 100.0;
            let analytic = density.percentile(q).expect("percentile");
            worst_shift = worst_shift.max((analytic - quantile(&p, q)).abs());
        }
    }
    check(worst_shift <= 2.0, format!("received-power CDF shift {worst_shift:.2} dB"), &mut f);
    finish(
        f,
        format!(
            "KS distance {ks_d:.4}, KS path loss {ks_l:.4}, atoms {worst_atom:.4}, CDF shift {worst_shift:.2} dB"
        ),
        t.elapsed(),
        Duration::from_secs(30),
    )
}

fn two_cell_config() -> RunConfig {
    RunConfig {
        grid_rows: 1,
        grid_cols: 2,
        p_act: 1.0,
        min_active_fbs: 2,
        user_counts: UserCountTable::equal(1),
        num_rbs: 12,
        ..RunConfig::default()
    }
}

fn two_cell_instance(cfg: &RunConfig, ctx: &SimContext, seed: u64) -> Scenario {
    let sc = ScenarioConfig {
        fixed_active: Some(2),
        ..cfg.scenario_config()
    };
    let mut scenario = Scenario::generate(&sc, &ctx.mcs, seed).expect("scenario");
    let mut rng = stream(seed, &[77]);
    for d in scenario.demands.iter_mut() {
        *d = (0..10_000)
            .map(|_| draw_demand(&sc, &ctx.mcs, &mut rng))
            .find(|d| !d.infeasible && d.n_rb <= sc.num_rbs / 2)
            .expect("demand within half the band");
    }
    scenario
}

fn orthogonalization() -> Outcome {
    let t = Instant::now();
    let cfg = two_cell_config();
    let ctx = SimContext::from_config(&cfg).expect("context");
    let channel = ChannelModel::new(cfg.channel_config(), cfg.scenario_config().area()).expect("channel");
    let (runs, slots, deadline) = (100u64, cfg.time_slots, 10usize);
    let mut orthogonal = 0;
    for run in 0..runs {
        let seed = femto_icic::rng::child_seed(5, run);
        let scenario = two_cell_instance(&cfg, &ctx, seed);
        let gains = channel.realize(&scenario, seed);
        let cells: Vec<usize> = scenario.mobiles.iter().map(|m| m.cell).collect();
        let mut world = World::new(&ctx, scenario, gains, Policy::Fuzzy, seed);
        let disjoint: Vec<bool> = (0..slots)
            .map(|_| {
                let o = world.run_slot();
                let mut used = [vec![false; 12], vec![false; 12]];
                for a in &o.allocations {
                    for (k, &rb) in a.rbs.iter().enumerate() {
                        if a.powers_w[k] > 0.0 {
                            used[cells[a.ms]][rb] = true;
                        }
                    }
                }
                (0..12).all(|rb| !(used[0][rb] && used[1][rb]))
            })
            .collect();
        // first slot from which every later slot is disjoint
        let settle = (0..slots).find(|&s| disjoint[s..].iter().all(|&d| d));
        if settle.is_some_and(|s| s < deadline) {
            orthogonal += 1;
        }
    }
    let share = orthogonal as f64 / runs as f64;
    let mut f = Vec::new();
    check(share >= 0.95, format!("orthogonal share {share:.2} < 0.95"), &mut f);
    finish(f, format!("{orthogonal}/{runs} instances orthogonal by slot {deadline}"), t.elapsed(), Duration::from_secs(10))
}

fn desk_optimality() -> Outcome {
    let t = Instant::now();
    let rows = compare(&OptConfig::default(), 50, 25, 5, 42).expect("comparison");
    let n = rows.len() as f64;
    let optimal = rows.iter().map(|r| r.optimal_bps).sum::<f64>() / n;
    let fuzzy = rows.iter().map(|r| r.fuzzy_bps).sum::<f64>() / n;
    let greedy = rows.iter().map(|r| r.greedy_bps).sum::<f64>() / n;
    let fuzzy_av = rows.iter().map(|r| r.fuzzy_availability_early).sum::<f64>() / n;
    let greedy_av = rows.iter().map(|r| r.greedy_availability_early).sum::<f64>() / n;
    let ratio = fuzzy / optimal;
    let mut f = Vec::new();
    check(
        rows.iter().all(|r| r.optimal_bps + 1e-6 >= r.fuzzy_bps && r.optimal_bps + 1e-6 >= r.greedy_bps),
        "a policy beat the exhaustive optimum",
        &mut f,
    );
    check(ratio >= 0.90, format!("fuzzy/optimal throughput {ratio:.3} < 0.90"), &mut f);
    check(
        fuzzy_av >= greedy_av,
        format!("slot-5 availability fuzzy {fuzzy_av:.3} < greedy {greedy_av:.3}"),
        &mut f,
    );
    finish(
        f,
        format!(
            "fuzzy/optimal {ratio:.3}, greedy/optimal {:.3}, slot-5 availability fuzzy {fuzzy_av:.3} vs greedy {greedy_av:.3}",
            greedy / optimal
        ),
        t.elapsed(),
        Duration::from_secs(120),
    )
}

fn rank(v: [f64; 4]) -> [usize; 4] {
    let mut idx = [0, 1, 2, 3];
    idx.sort_by(|&a, &b| v[b].total_cmp(&v[a]));
    idx
}

fn benchmark_comparison() -> Outcome {
    let t = Instant::now();
    let cfg = RunConfig {
        policies: vec![Policy::FuzzyLa, Policy::Fuzzy, Policy::MaxPower, Policy::Abs],
        ..RunConfig::ci_preset()
    };
    let results = femto_icic::harness::run_campaign(&cfg).expect("campaign");
    let mp = results.gain(Policy::FuzzyLa, Policy::MaxPower).expect("gain");
    let abs = results.gain(Policy::FuzzyLa, Policy::Abs).expect("gain");
    let la_availability = results.policy(Policy::FuzzyLa).expect("results").final_slot().availability;
    let mut f = Vec::new();
    check(mp.throughput_pct >= 20.0, format!("throughput gain {:.1}% < 20%", mp.throughput_pct), &mut f);
    check(mp.energy_eff_pct >= 60.0, format!("energy-efficiency gain {:.1}% < 60%", mp.energy_eff_pct), &mut f);
    check(mp.availability_pct >= 25.0, format!("availability gain {:.1}% < 25%", mp.availability_pct), &mut f);
    check(mp.fairness_pct >= 15.0, format!("fairness gain {:.1}% < 15%", mp.fairness_pct), &mut f);
    let v_mp = [mp.throughput_pct, mp.energy_eff_pct, mp.availability_pct, mp.fairness_pct];
    let v_abs = [abs.throughput_pct, abs.energy_eff_pct, abs.availability_pct, abs.fairness_pct];
    check(
        v_mp.iter().zip(&v_abs).all(|(a, b)| a.signum() == b.signum()),
        format!("gain signs differ: {v_mp:.1?} vs {v_abs:.1?}"),
        &mut f,
    );
    check(rank(v_mp) == rank(v_abs), format!("gain ordering differs: {v_mp:.1?} vs {v_abs:.1?}"), &mut f);
    check(
        la_availability >= 0.85,
        format!("final-slot availability {la_availability:.3} < 0.85"),
        &mut f,
    );
    finish(
        f,
        format!(
            "vs max power {v_mp:.1?}%, vs ABS {v_abs:.1?}%, final availability {la_availability:.3}"
        ),
        t.elapsed(),
        Duration::from_secs(300),
    )
}

fn abs_gate_rate() -> Outcome {
    let t = Instant::now();
    let mut blanks = 0;
    for slot in 0..100 {
        for user in 0..100 {
            if abs_gate(42, slot, user, 0.1) == Gate::Blank {
                blanks += 1;
            }
        }
    }
    let rate = blanks as f64 / 1e4;
    let mut f = Vec::new();
    check((rate - 0.10).abs() <= 0.01, format!("blank rate {rate:.4}"), &mut f);
    check(
        (0..1000).all(|s| abs_gate(1, s, 0, 0.0) == Gate::Transmit && abs_gate(1, s, 0, 1.0) == Gate::Blank),
        "degenerate probabilities",
        &mut f,
    );
    finish(f, format!("blank rate {rate:.4} over 10^4 user-slots"), t.elapsed(), Duration::from_secs(5))
}

fn complexity_counters() -> Outcome {
    let t = Instant::now();
    let mut f = Vec::new();
    let cfg = RunConfig {
        scenarios: 3,
        time_slots: 5,
        ..RunConfig::default()
    };
    let campaign = Campaign::new(cfg.clone()).expect("campaign");
    for i in 0..3 {
        let scenario = campaign.scenario(i).expect("scenario");
        let gains = campaign.channel.realize(&scenario, campaign.scenario_seed(i));
        let (users, m) = (scenario.num_users() as u64, scenario.num_rbs as u64);
        for policy in [Policy::Fuzzy, Policy::FuzzyLa, Policy::GreedySinr] {
            let mut w = World::new(&campaign.context, scenario.clone(), gains.clone(), policy, campaign.scenario_seed(i));
            for slot in 1..=cfg.time_slots as u64 {
                w.run_slot();
                let (fz, gh) = match policy {
                    Policy::GreedySinr => (0, slot * users * 2 * m),
                    _ => (slot * users * 4 * m, 0),
                };
                check(
                    w.counters.fuzzy_evaluations == fz && w.counters.heuristic_evaluations == gh,
                    format!("{} slot {slot}: counters {:?}", policy.name(), w.counters),
                    &mut f,
                );
            }
        }
    }
    let opt = OptConfig {
        cells: 3,
        num_rbs: 6,
        max_rbs_per_user: 3,
        ..OptConfig::default()
    };
    let run = opt.run_config();
    let ctx = SimContext::from_config(&run).expect("context");
    let channel = ChannelModel::new(run.channel_config(), run.scenario_config().area()).expect("channel");
    for k in 0..10u64 {
        let inst = OptInstance::generate(&opt, &ctx, &channel, 900 + k).expect("instance");
        let needs: Vec<u64> = inst.scenario.demands.iter().map(|d| d.n_rb as u64).collect();
        let want: u128 = needs.iter().map(|&n| binomial_oracle(opt.num_rbs as u64, n)).product::<u128>()
            * (1u128 << needs.iter().sum::<u64>());
        let got = exhaustive_optimum(&inst, &ctx, opt.node_budget).expect("optimum").nodes;
        check(got as u128 == want, format!("instance {k}: {got} nodes, closed form {want}"), &mut f);
    }
    finish(f, "per-slot evaluations and enumeration nodes match closed forms".into(), t.elapsed(), Duration::from_secs(60))
}

fn determinism() -> Outcome {
    let t = Instant::now();
    let mut f = Vec::new();
    let base = RunConfig {
        scenarios: 6,
        time_slots: 8,
        policies: vec![Policy::FuzzyLa, Policy::Fuzzy, Policy::MaxPower, Policy::Abs, Policy::GreedySinr],
        seed: 7,
        ..RunConfig::default()
    };
    let root = std::env::temp_dir().join(format!("femto-acceptance-{}", std::process::id()));
    let mut outputs = Vec::new();
    for (tag, workers) in [("a", 1), ("b", 1), ("c", 8)] {
        let campaign = Campaign::new(RunConfig { workers, ..base.clone() }).expect("campaign");
        let results = campaign.run().expect("run");
        let dir = root.join(tag);
        write_outputs(&campaign, &results, &dir, true).expect("outputs");
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&dir)
            .expect("dir")
            .map(|e| {
                let p = e.expect("entry").path();
                (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).expect("read"))
            })
            .collect();
        files.sort();
        outputs.push(files);
    }
    let _ = std::fs::remove_dir_all(&root);
    check(outputs[0] == outputs[1], "repeated runs differ", &mut f);
    check(outputs[0] == outputs[2], "1 vs 8 workers differ", &mut f);
    check(outputs[0].len() == 7, format!("{} output files", outputs[0].len()), &mut f);
    finish(f, format!("{} files byte-identical across 3 runs", outputs[0].len()), t.elapsed(), Duration::from_secs(60))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("fuzzy core exactness", fuzzy_core),
        ("metrics arithmetic", metrics_arithmetic),
        ("link adaptation table", link_adaptation_table),
        ("signal statistics validation", statistics_validation),
        ("orthogonalization", orthogonalization),
        ("desk-scale optimality", desk_optimality),
        ("benchmark comparison", benchmark_comparison),
        ("ABS gate", abs_gate_rate),
        ("complexity counters", complexity_counters),
        ("determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || *f == (i + 1).to_string()) {
            continue;
        }
        ran += 1;
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} [{status}] {name}: {}", i + 1, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
