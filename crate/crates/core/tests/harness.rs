use std::collections::HashSet;

use femto_icic::harness::{Campaign, Policy, RunConfig};
use femto_icic::icic::PowerLevel;
use femto_icic::Error;

const ALL: [Policy; 5] = [Policy::Fuzzy, Policy::FuzzyLa, Policy::MaxPower, Policy::Abs, Policy::GreedySinr];

fn small() -> RunConfig {
    RunConfig {
        scenarios: 4,
        time_slots: 6,
        seed: 3,
        policies: ALL.to_vec(),
        workers: 1,
        ..RunConfig::default()
    }
}

#[test]
fn empty_document_is_the_default_config() {
    assert_eq!(RunConfig::from_json("{}").unwrap(), RunConfig::default());
}

#[test]
fn config_json_round_trips() {
    let cfg = small();
    let text = cfg.to_json().unwrap();
    assert!(text.contains("\"fuzzy-la\"") && text.contains("\"maxpower\"") && text.contains("\"greedy-sinr\""));
    assert_eq!(RunConfig::from_json(&text).unwrap(), cfg);
}

#[test]
fn bad_configs_are_rejected() {
    assert!(matches!(RunConfig::from_json(r#"{"no_such_field": 1}"#), Err(Error::Json(_))));
    assert!(matches!(RunConfig::from_json(r#"{"ema_weight": 0.0}"#), Err(Error::Config(_))));
    assert!(matches!(RunConfig::from_json(r#"{"time_slots": 0}"#), Err(Error::Config(_))));
    assert!(matches!(RunConfig::from_json(r#"{"policies": []}"#), Err(Error::Config(_))));
}

#[test]
fn policy_names_round_trip() {
    for p in ALL {
        assert_eq!(Policy::parse(p.name()).unwrap(), p);
        assert_eq!(serde_json::to_string(&p).unwrap(), format!("\"{}\"", p.name()));
    }
    assert!(Policy::parse("optimal").is_err());
}

#[test]
fn allocations_respect_demand_power_and_cell_exclusivity() {
    let cfg = small();
    let campaign = Campaign::new(cfg.clone()).unwrap();
    let p_max = campaign.context.p_max_w;
    for i in 0..cfg.scenarios {
        let scenario = campaign.scenario(i).unwrap();
        for p in ALL {
            for o in campaign.run_scenario(i, p).unwrap() {
                let mut used: Vec<HashSet<usize>> = vec![HashSet::new(); scenario.num_cells()];
                for a in &o.allocations {
                    let cell = scenario.mobiles[a.ms].cell;
                    assert!(a.rbs.iter().all(|&rb| rb < scenario.num_rbs));
                    assert!(a.rbs.iter().all(|&rb| used[cell].insert(rb)), "{p:?}: RB reused inside cell {cell}");
                    assert_eq!(a.rbs.len(), a.powers_w.len());
                    assert!(a.total_power_w() <= p_max * (1.0 + 1e-12));
                    if p == Policy::MaxPower || p == Policy::GreedySinr {
                        assert!(a.levels.iter().all(|&l| l == PowerLevel::Max));
                    }
                    if p != Policy::FuzzyLa {
                        assert_eq!(a.mcs, scenario.demands[a.ms].mcs);
                    }
                }
                for (u, m) in o.metrics.users.iter().enumerate() {
                    assert!(m.achieved_rbs <= o.allocations[u].rbs.len());
                }
            }
        }
    }
}

#[test]
fn campaign_is_reproducible_and_matches_single_runs() {
    let cfg = small();
    let campaign = Campaign::new(cfg.clone()).unwrap();
    let a = campaign.run().unwrap();
    let b = Campaign::new(RunConfig { workers: 3, ..cfg.clone() }).unwrap().run().unwrap();
    assert_eq!(a.metrics_csv(), b.metrics_csv());
    assert_eq!(a.summary_json().unwrap(), b.summary_json().unwrap());

    let fuzzy = a.policy(Policy::Fuzzy).unwrap();
    let outcomes = campaign.run_scenario(2, Policy::Fuzzy).unwrap();
    let last = &outcomes.last().unwrap().metrics;
    let total: f64 = last.users.iter().map(|m| m.throughput_bps).sum();
    assert!((last.system_throughput_bps - total).abs() <= 1e-9 * total.max(1.0));
    assert_eq!(fuzzy.per_scenario[2].last().unwrap().throughput_bps, last.system_throughput_bps);

    let lines = a.metrics_csv().lines().count();
    assert_eq!(lines, 1 + ALL.len() * cfg.time_slots);
}

#[test]
fn trace_lists_every_allocated_rb() {
    let campaign = Campaign::new(small()).unwrap();
    let trace = campaign.trace_csv(0, Policy::Abs).unwrap();
    let outcomes = campaign.run_scenario(0, Policy::Abs).unwrap();
    let rows: usize = outcomes.iter().flat_map(|o| &o.allocations).map(|a| a.rbs.len()).sum();
    let mut lines = trace.lines();
    assert_eq!(lines.next(), Some("slot,cell,ms,rb,power_level,mcs,alloc_score"));
    assert_eq!(lines.count(), rows);
    let blanks = outcomes
        .iter()
        .flat_map(|o| &o.allocations)
        .flat_map(|a| &a.powers_w)
        .filter(|&&p| p == 0.0)
        .count();
    assert_eq!(trace.matches(",blank,").count(), blanks);
}
