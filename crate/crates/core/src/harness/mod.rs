//! Monte Carlo driver: configuration, the per-slot world, campaigns and
//! their CSV/JSON outputs.

pub mod campaign;
pub mod world;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub use campaign::{run_campaign, write_outputs, Campaign, Gain, PolicyResults, RunResults, SlotSummary};
pub use world::{Direction, Policy, SimContext, SlotOutcome, World};

use crate::benchmarks::AbsConfig;
use crate::channel::{ChannelConfig, FadingProfile, PathLossParams, ShadowingParams};
use crate::icic::{IcicConfig, SchedulerKind};
use crate::link_metrics::{NoiseModel, RbNumerology};
use crate::scenario::{ScenarioConfig, UserCountTable};
use crate::signal_stats::SignalStatsConfig;
use crate::{Error, Result};

/// Campaign configuration. Every field has a default, so `{}` is a valid
/// document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub apartment_width_m: f64,
    pub p_act: f64,
    pub num_rbs: usize,
    pub rb_bandwidth_hz: f64,
    pub average_rate_bps: f64,
    pub subcarriers_per_rb: f64,
    pub symbol_rate_sps: f64,
    pub time_slots: usize,
    pub abs_probability: f64,
    pub noise_density_dbm_per_hz: f64,
    pub total_tx_power_dbm: f64,
    pub pathloss_alpha: f64,
    pub pathloss_beta: f64,
    pub shadowing_sigma_db: f64,
    pub autocorrelation_distance_m: f64,

    pub grid_rows: usize,
    pub grid_cols: usize,
    pub min_active_fbs: usize,
    pub user_counts: UserCountTable,
    pub shadowing_resolution_m: f64,
    pub fading_taps: usize,
    pub rms_delay_spread_s: f64,
    pub ema_weight: f64,
    pub scheduler: SchedulerKind,
    pub contiguous: bool,
    pub direction: Direction,
    pub scenarios: usize,
    pub seed: u64,
    pub policies: Vec<Policy>,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    /// Rulebase JSON replacing the one derived from signal statistics.
    pub rulebase: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            apartment_width_m: 10.0,
            p_act: 0.5,
            num_rbs: 50,
            rb_bandwidth_hz: 180e3,
            average_rate_bps: 1.25e6,
            subcarriers_per_rb: 12.0,
            symbol_rate_sps: 15e3,
            time_slots: 25,
            abs_probability: 0.1,
            noise_density_dbm_per_hz: -174.0,
            total_tx_power_dbm: 10.0,
            pathloss_alpha: 97.0,
            pathloss_beta: 30.0,
            shadowing_sigma_db: 10.0,
            autocorrelation_distance_m: 50.0,
            grid_rows: 5,
            grid_cols: 5,
            min_active_fbs: 3,
            user_counts: UserCountTable::equal(3),
            shadowing_resolution_m: 1.0,
            fading_taps: 6,
            rms_delay_spread_s: 50e-9,
            ema_weight: 0.5,
            scheduler: SchedulerKind::Greedy,
            contiguous: false,
            direction: Direction::Downlink,
            scenarios: 2000,
            seed: 42,
            policies: vec![Policy::FuzzyLa, Policy::Fuzzy, Policy::MaxPower, Policy::Abs],
            workers: 0,
            rulebase: None,
        }
    }
}

impl RunConfig {
    /// Reduced campaign used for desk-scale checks.
    pub fn ci_preset() -> Self {
        RunConfig {
            scenarios: 200,
            ..Default::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.time_slots == 0 {
            return Err(Error::Config("at least one time slot is required".into()));
        }
        if self.scenarios == 0 {
            return Err(Error::Config("at least one scenario is required".into()));
        }
        if !(self.ema_weight > 0.0 && self.ema_weight <= 1.0) {
            return Err(Error::Config(format!("EMA weight {} outside (0, 1]", self.ema_weight)));
        }
        if self.policies.is_empty() {
            return Err(Error::Config("no policy selected".into()));
        }
        self.scenario_config().validate()?;
        self.channel_config().validate()?;
        self.abs_config().validate()
    }

    pub fn numerology(&self) -> RbNumerology {
        RbNumerology {
            subcarriers: self.subcarriers_per_rb,
            symbol_rate: self.symbol_rate_sps,
        }
    }

    pub fn scenario_config(&self) -> ScenarioConfig {
        ScenarioConfig {
            rows: self.grid_rows,
            cols: self.grid_cols,
            apartment_width_m: self.apartment_width_m,
            p_act: self.p_act,
            fixed_active: None,
            min_active: self.min_active_fbs,
            user_counts: self.user_counts.clone(),
            average_rate_bps: self.average_rate_bps,
            num_rbs: self.num_rbs,
            numerology: self.numerology(),
        }
    }

    pub fn channel_config(&self) -> ChannelConfig {
        ChannelConfig {
            pathloss: PathLossParams {
                alpha: self.pathloss_alpha,
                beta: self.pathloss_beta,
            },
            shadowing: ShadowingParams {
                sigma_db: self.shadowing_sigma_db,
                corr_distance_m: self.autocorrelation_distance_m,
                resolution_m: self.shadowing_resolution_m,
            },
            fading: FadingProfile::with_rms_delay_spread(self.fading_taps, self.rms_delay_spread_s),
            rb_bandwidth_hz: self.rb_bandwidth_hz,
        }
    }

    pub fn noise(&self) -> NoiseModel {
        NoiseModel {
            density_dbm_per_hz: self.noise_density_dbm_per_hz,
            rb_bandwidth_hz: self.rb_bandwidth_hz,
        }
    }

    pub fn icic_config(&self) -> IcicConfig {
        IcicConfig {
            ema_weight: self.ema_weight,
            scheduler: self.scheduler,
            contiguous: self.contiguous,
        }
    }

    pub fn abs_config(&self) -> AbsConfig {
        AbsConfig {
            blank_probability: self.abs_probability,
        }
    }

    pub fn signal_stats_config(&self) -> SignalStatsConfig {
        SignalStatsConfig {
            average_rate_bps: self.average_rate_bps,
            p_max_dbm: self.total_tx_power_dbm,
            num_rbs: self.num_rbs,
            numerology: self.numerology(),
            pathloss: PathLossParams {
                alpha: self.pathloss_alpha,
                beta: self.pathloss_beta,
            },
            shadowing_sigma_db: self.shadowing_sigma_db,
            desired_dimension_m: self.apartment_width_m,
            interfering_dimension_m: self.apartment_width_m * self.grid_rows.max(self.grid_cols) as f64,
            step_db: 0.1,
        }
    }
}
