//! Per-link, per-RB channel gains: path loss, correlated shadowing and
//! frequency-selective fading.
//!
//! Every link runs between an FBS and an MS. Shadowing maps are drawn per
//! FBS and sampled at the MS position, so a link has the same shadowing in
//! both directions.

pub mod fading;
pub mod shadowing;

use std::io::Write;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use fading::{fading_from_rng, fading_per_rb, FadingProfile};
pub use shadowing::{sample_shadowing, ShadowingGenerator, ShadowingMap, ShadowingParams};

use crate::rng::{derive, stream, LABEL_FADING, LABEL_SHADOWING};
use crate::scenario::{Point, Scenario};
use crate::units::db_to_linear;
use crate::{Error, Result};

pub const MIN_DISTANCE_M: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossParams {
    pub alpha: f64,
    pub beta: f64,
}

impl Default for PathLossParams {
    fn default() -> Self {
        PathLossParams { alpha: 97.0, beta: 30.0 }
    }
}

/// `α + β·log10(d)` in dB.
pub fn path_loss(d: f64, params: PathLossParams) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return Err(Error::Domain { what: "distance", value: d });
    }
    Ok(params.alpha + params.beta * d.log10())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGain {
    pub gain: f64,
    pub pathloss_db: f64,
    pub shadowing_db: f64,
    pub fading: f64,
}

impl LinkGain {
    pub fn compose(pathloss_db: f64, shadowing_db: f64, fading: f64) -> Self {
        LinkGain {
            gain: fading * db_to_linear(-pathloss_db + shadowing_db),
            pathloss_db,
            shadowing_db,
            fading,
        }
    }
}

/// Gain between an FBS and an MS on one RB.
pub fn link_gain(
    fbs: Point,
    ms: Point,
    params: PathLossParams,
    map: &ShadowingMap,
    fading: f64,
) -> LinkGain {
    let d = fbs.distance(&ms).max(MIN_DISTANCE_M);
    let pl = params.alpha + params.beta * d.log10();
    LinkGain::compose(pl, map.sample(ms), fading)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub pathloss: PathLossParams,
    pub shadowing: ShadowingParams,
    pub fading: FadingProfile,
    pub rb_bandwidth_hz: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            pathloss: PathLossParams::default(),
            shadowing: ShadowingParams::default(),
            fading: FadingProfile::default(),
            rb_bandwidth_hz: 180e3,
        }
    }
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.pathloss.beta > 0.0) {
            return Err(Error::Config("path-loss slope must be positive".into()));
        }
        let s = self.shadowing;
        if s.sigma_db < 0.0 || !(s.corr_distance_m > 0.0) || !(s.resolution_m > 0.0) {
            return Err(Error::Config("invalid shadowing parameters".into()));
        }
        if self.fading.taps == 0 {
            return Err(Error::Config("fading needs at least one tap".into()));
        }
        Ok(())
    }
}

/// Channel generator shared by all scenarios of one area.
#[derive(Debug, Clone)]
pub struct ChannelModel {
    pub config: ChannelConfig,
    shadowing: Arc<ShadowingGenerator>,
}

impl ChannelModel {
    pub fn new(config: ChannelConfig, area: [f64; 2]) -> Result<Self> {
        config.validate()?;
        Ok(ChannelModel {
            config,
            shadowing: Arc::new(ShadowingGenerator::new(area, config.shadowing)),
        })
    }

    pub fn generator(&self) -> &ShadowingGenerator {
        &self.shadowing
    }

    /// Gains of every FBS–MS pair on every RB, frozen for the run.
    pub fn realize(&self, scenario: &Scenario, seed: u64) -> GainTable {
        let mut rng = stream(seed, &[LABEL_SHADOWING]);
        let maps = if self.config.shadowing.sigma_db > 0.0 {
            self.shadowing.generate(scenario.num_cells(), &mut rng)
        } else {
            vec![ShadowingMap::zero(scenario.area, self.config.shadowing); scenario.num_cells()]
        };
        let (nc, nu, m) = (scenario.num_cells(), scenario.num_users(), scenario.num_rbs);
        let mut table = GainTable {
            num_cells: nc,
            num_users: nu,
            num_rbs: m,
            pathloss_db: vec![0.0; nc * nu],
            shadowing_db: vec![0.0; nc * nu],
            fading: vec![0.0; nc * nu * m],
            gain: vec![0.0; nc * nu * m],
        };
        for (c, fbs) in scenario.base_stations.iter().enumerate() {
            for (u, ms) in scenario.mobiles.iter().enumerate() {
                let link_seed = derive(seed, &[LABEL_FADING, c as u64, u as u64]);
                let h = fading_per_rb(link_seed, m, self.config.rb_bandwidth_hz, &self.config.fading);
                for (rb, &f) in h.iter().enumerate() {
                    let lg = link_gain(fbs.position, ms.position, self.config.pathloss, &maps[c], f);
                    table.set(c, u, rb, lg);
                }
            }
        }
        table
    }
}

/// Dense `cell × user × rb` gain table.
#[derive(Debug, Clone, PartialEq)]
pub struct GainTable {
    pub num_cells: usize,
    pub num_users: usize,
    pub num_rbs: usize,
    pathloss_db: Vec<f64>,
    shadowing_db: Vec<f64>,
    fading: Vec<f64>,
    gain: Vec<f64>,
}

impl GainTable {
    fn set(&mut self, cell: usize, user: usize, rb: usize, lg: LinkGain) {
        let link = cell * self.num_users + user;
        self.pathloss_db[link] = lg.pathloss_db;
        self.shadowing_db[link] = lg.shadowing_db;
        self.fading[link * self.num_rbs + rb] = lg.fading;
        self.gain[link * self.num_rbs + rb] = lg.gain;
    }

    /// Table built directly from linear gains, `gains[cell][user][rb]`.
    pub fn from_gains(gains: &[Vec<Vec<f64>>]) -> Self {
        let nc = gains.len();
        let nu = gains.first().map_or(0, |g| g.len());
        let m = gains.first().and_then(|g| g.first()).map_or(0, |g| g.len());
        let mut t = GainTable {
            num_cells: nc,
            num_users: nu,
            num_rbs: m,
            pathloss_db: vec![0.0; nc * nu],
            shadowing_db: vec![0.0; nc * nu],
            fading: vec![1.0; nc * nu * m],
            gain: vec![0.0; nc * nu * m],
        };
        for (c, per_user) in gains.iter().enumerate() {
            for (u, per_rb) in per_user.iter().enumerate() {
                let pl = -10.0 * (per_rb.iter().sum::<f64>() / m as f64).log10();
                t.pathloss_db[c * nu + u] = pl;
                for (rb, &g) in per_rb.iter().enumerate() {
                    t.fading[(c * nu + u) * m + rb] = g / db_to_linear(-pl);
                    t.gain[(c * nu + u) * m + rb] = g;
                }
            }
        }
        t
    }

    pub fn gain(&self, cell: usize, user: usize, rb: usize) -> f64 {
        self.gain[(cell * self.num_users + user) * self.num_rbs + rb]
    }

    /// Gains of one link across all RBs.
    pub fn gains(&self, cell: usize, user: usize) -> &[f64] {
        let start = (cell * self.num_users + user) * self.num_rbs;
        &self.gain[start..start + self.num_rbs]
    }

    pub fn fading(&self, cell: usize, user: usize) -> &[f64] {
        let start = (cell * self.num_users + user) * self.num_rbs;
        &self.fading[start..start + self.num_rbs]
    }

    pub fn link(&self, cell: usize, user: usize, rb: usize) -> LinkGain {
        let link = cell * self.num_users + user;
        LinkGain {
            gain: self.gain[link * self.num_rbs + rb],
            pathloss_db: self.pathloss_db[link],
            shadowing_db: self.shadowing_db[link],
            fading: self.fading[link * self.num_rbs + rb],
        }
    }

    /// Large-scale gain `10^((−L+X)/10)` without fading.
    pub fn large_scale(&self, cell: usize, user: usize) -> f64 {
        let link = cell * self.num_users + user;
        db_to_linear(-self.pathloss_db[link] + self.shadowing_db[link])
    }

    /// CSV with columns `tx_id,rx_id,rb,pathloss_db,shadow_db,fading_pow,gain_lin`
    /// (downlink orientation: FBS transmits).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::io("writing gain table", std::io::Error::other(e));
        w.write_record(["tx_id", "rx_id", "rb", "pathloss_db", "shadow_db", "fading_pow", "gain_lin"])
            .map_err(csv_err)?;
        for c in 0..self.num_cells {
            for u in 0..self.num_users {
                for rb in 0..self.num_rbs {
                    let l = self.link(c, u, rb);
                    w.write_record([
                        c.to_string(),
                        u.to_string(),
                        rb.to_string(),
                        l.pathloss_db.to_string(),
                        l.shadowing_db.to_string(),
                        l.fading.to_string(),
                        l.gain.to_string(),
                    ])
                    .map_err(csv_err)?;
                }
            }
        }
        w.flush().map_err(|e| Error::io("writing gain table", e))
    }
}
