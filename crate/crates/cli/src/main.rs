use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use femto_icic::harness::{write_outputs, Campaign, Policy, RunConfig};
use femto_icic::icic::{allocation_rulebase, MembershipAnchors};
use femto_icic::link_metrics::McsTable;
use femto_icic::optimality::{compare, Comparison, OptConfig};
use femto_icic::signal_stats::signal_distributions;

#[derive(Parser)]
#[command(name = "femtosim", version, about = "Fuzzy-logic ICIC simulator for OFDMA femto-cell networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo campaign.
    Simulate {
        /// JSON configuration; omitted keys take their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated policies: fuzzy, fuzzy-la, maxpower, abs, greedy-sinr.
        #[arg(long, value_delimiter = ',')]
        policy: Vec<String>,
        #[arg(long)]
        scenarios: Option<usize>,
        #[arg(long)]
        slots: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Also write per-RB traces of scenario 0.
        #[arg(long)]
        trace: bool,
        /// Write scenario `N` as JSON into the output directory.
        #[arg(long, value_name = "N")]
        dump_scenario: Option<usize>,
    },
    /// Analytical signal distributions, membership anchors and the derived rulebase.
    Stats {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "stats")]
        out: PathBuf,
    },
    /// Exhaustive optimum against fuzzy ICIC and the greedy heuristic.
    Optcompare {
        #[arg(long, default_value_t = 3)]
        cells: usize,
        #[arg(long, default_value_t = 8)]
        rbs: usize,
        #[arg(long, default_value_t = 50)]
        runs: usize,
        #[arg(long, default_value_t = 4)]
        max_rbs_per_user: usize,
        #[arg(long, default_value_t = 25)]
        slots: usize,
        #[arg(long, default_value_t = 5)]
        early_slot: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(RunConfig::from_json(&text).with_context(|| format!("parsing {}", p.display()))?)
        }
        None => Ok(RunConfig::default()),
    }
}

fn write_density(dir: &Path, name: &str, d: &femto_icic::signal_stats::density::SampledDensity) -> Result<()> {
    let path = dir.join(format!("{name}.csv"));
    let f = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    d.write_csv(BufWriter::new(f))
        .with_context(|| format!("writing {}", path.display()))
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Simulate {
            config,
            policy,
            scenarios,
            slots,
            seed,
            workers,
            out,
            trace,
            dump_scenario,
        } => {
            let mut cfg = load_config(config.as_deref())?;
            if !policy.is_empty() {
                cfg.policies = policy.iter().map(|p| Policy::parse(p.trim())).collect::<Result<_, _>>()?;
            }
            if let Some(n) = scenarios {
                cfg.scenarios = n;
            }
            if let Some(n) = slots {
                cfg.time_slots = n;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(w) = workers {
                cfg.workers = w;
            }
            cfg.validate()?;
            let campaign = Campaign::new(cfg)?;
            if let Some(i) = dump_scenario {
                if i >= campaign.config.scenarios {
                    bail!("scenario {i} outside the campaign of {}", campaign.config.scenarios);
                }
                fs::create_dir_all(&out)?;
                let path = out.join(format!("scenario_{i}.json"));
                fs::write(&path, campaign.scenario(i)?.to_json()?)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            log::info!(
                "running {} scenarios x {} slots for {:?}",
                campaign.config.scenarios,
                campaign.config.time_slots,
                campaign.config.policies
            );
            let results = campaign.run()?;
            write_outputs(&campaign, &results, &out, trace)?;
            for g in results.gains() {
                println!(
                    "{} vs {}: throughput {:+.1}%, energy efficiency {:+.1}%, availability {:+.1}%, fairness {:+.1}%",
                    g.policy.name(),
                    g.versus.name(),
                    g.throughput_pct,
                    g.energy_eff_pct,
                    g.availability_pct,
                    g.fairness_pct
                );
            }
        }
        Command::Stats { config, out } => {
            let cfg = load_config(config.as_deref())?;
            let table = McsTable::default();
            let sc = cfg.signal_stats_config();
            let dists = signal_distributions(&sc, &table)?;
            fs::create_dir_all(&out)?;
            write_density(&out, "pathloss_desired", &dists.pathloss_desired)?;
            write_density(&out, "pathloss_interfering", &dists.pathloss_interfering)?;
            write_density(&out, "tx_power", &dists.tx_power)?;
            write_density(&out, "desired_signal", &dists.desired)?;
            write_density(&out, "interfering_signal", &dists.interfering)?;
            let anchors = MembershipAnchors::from_signal_stats(&sc, &table)?;
            fs::write(out.join("anchors.json"), serde_json::to_string_pretty(&anchors)?)?;
            fs::write(out.join("rulebase.json"), allocation_rulebase(&anchors).to_json()?)?;
            println!("desired signal anchors (dBm): {:?}", anchors.signal_dbm);
            println!("interference anchors (dBm): {:?}", anchors.interference_dbm);
        }
        Command::Optcompare {
            cells,
            rbs,
            runs,
            max_rbs_per_user,
            slots,
            early_slot,
            seed,
            out,
        } => {
            let cfg = OptConfig {
                cells,
                num_rbs: rbs,
                max_rbs_per_user,
                ..OptConfig::default()
            };
            let rows = compare(&cfg, runs, slots, early_slot, seed)?;
            let mut csv = String::from(Comparison::CSV_HEADER);
            csv.push('\n');
            for r in &rows {
                csv.push_str(&r.csv_row());
                csv.push('\n');
            }
            match out {
                Some(p) => fs::write(&p, csv).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{csv}"),
            }
            let n = rows.len().max(1) as f64;
            let ratio: f64 = rows
                .iter()
                .map(|r| if r.optimal_bps > 0.0 { r.fuzzy_bps / r.optimal_bps } else { 1.0 })
                .sum::<f64>()
                / n;
            eprintln!("mean fuzzy/optimal throughput ratio: {ratio:.3}");
        }
    }
    Ok(())
}
