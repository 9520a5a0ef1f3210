//! Randomized apartment-grid deployments.
//!
//! Each apartment of a `rows × cols` grid hosts an active femto base station
//! with probability `p_act`; active cells draw their user count from a
//! probability table and place the FBS and its users uniformly inside the
//! apartment. Access is closed: every user is served by the FBS of its own
//! apartment.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::link_metrics::{McsTable, RbNumerology};
use crate::rng::{stream, LABEL_SCENARIO};
use crate::{Error, Result};

const MAX_REDRAWS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Probability of 1, 2, … users in an active cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserCountTable {
    pub probabilities: Vec<f64>,
}

impl UserCountTable {
    /// Every count in `1..=max_users` equally likely.
    pub fn equal(max_users: usize) -> Self {
        UserCountTable {
            probabilities: vec![1.0 / max_users as f64; max_users],
        }
    }

    /// Probability halves with each additional user.
    pub fn halving(max_users: usize) -> Self {
        let total = (1u64 << max_users) as f64 - 1.0;
        UserCountTable {
            probabilities: (0..max_users)
                .map(|k| (1u64 << (max_users - 1 - k)) as f64 / total)
                .collect(),
        }
    }

    pub fn max_users(&self) -> usize {
        self.probabilities.len()
    }

    pub fn validate(&self) -> Result<()> {
        let sum: f64 = self.probabilities.iter().sum();
        if self.probabilities.is_empty() || self.probabilities.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Config("user-count probabilities must lie in [0, 1]".into()));
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!("user-count probabilities sum to {sum}, not 1")));
        }
        Ok(())
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (k, p) in self.probabilities.iter().enumerate() {
            acc += p;
            if u < acc {
                return k + 1;
            }
        }
        self.probabilities.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub rows: usize,
    pub cols: usize,
    pub apartment_width_m: f64,
    pub p_act: f64,
    /// When set, exactly this many distinct apartments are active and
    /// `p_act` is ignored.
    #[serde(default)]
    pub fixed_active: Option<usize>,
    pub min_active: usize,
    pub user_counts: UserCountTable,
    pub average_rate_bps: f64,
    pub num_rbs: usize,
    pub numerology: RbNumerology,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            rows: 5,
            cols: 5,
            apartment_width_m: 10.0,
            p_act: 0.5,
            fixed_active: None,
            min_active: 3,
            user_counts: UserCountTable::equal(3),
            average_rate_bps: 1.25e6,
            num_rbs: 50,
            numerology: RbNumerology::default(),
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.user_counts.validate()?;
        if !(0.0..=1.0).contains(&self.p_act) {
            return Err(Error::Config(format!("p_act = {} is not a probability", self.p_act)));
        }
        if self.num_rbs == 0 {
            return Err(Error::Config("at least one RB is required".into()));
        }
        if self.rows == 0 || self.cols == 0 || self.apartment_width_m <= 0.0 {
            return Err(Error::Config("empty apartment grid".into()));
        }
        if self.average_rate_bps <= 0.0 {
            return Err(Error::Config("average rate must be positive".into()));
        }
        let cells = self.rows * self.cols;
        if self.min_active > cells || self.fixed_active.is_some_and(|n| n > cells || n < self.min_active) {
            return Err(Error::Config("requested active-cell count does not fit the grid".into()));
        }
        Ok(())
    }

    /// Extent of the whole grid in metres, `[width, height]`.
    pub fn area(&self) -> [f64; 2] {
        [
            self.cols as f64 * self.apartment_width_m,
            self.rows as f64 * self.apartment_width_m,
        ]
    }
}

/// Rate demand and transmission requirement of one user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserDemand {
    pub desired_rate_bps: f64,
    pub mcs: u8,
    pub n_rb: usize,
    /// Set when the unclamped RB requirement exceeded the RB count.
    pub infeasible: bool,
}

/// ⌈C* / (k_sc s_sc ε)⌉ clamped to `[1, num_rbs]`, plus the clamp flag.
pub fn required_rbs(desired_rate: f64, efficiency: f64, numerology: RbNumerology, num_rbs: usize) -> (usize, bool) {
    let raw = (desired_rate / numerology.rb_rate(efficiency)).ceil();
    if raw > num_rbs as f64 {
        (num_rbs, true)
    } else {
        ((raw as usize).max(1), false)
    }
}

impl UserDemand {
    pub fn new(desired_rate_bps: f64, mcs: u8, table: &McsTable, numerology: RbNumerology, num_rbs: usize) -> Self {
        let (n_rb, infeasible) = required_rbs(desired_rate_bps, table.efficiency(mcs), numerology, num_rbs);
        UserDemand {
            desired_rate_bps,
            mcs,
            n_rb,
            infeasible,
        }
    }

    /// Same demand at another MCS, with the RB count recomputed.
    pub fn with_mcs(&self, mcs: u8, table: &McsTable, numerology: RbNumerology, num_rbs: usize) -> Self {
        UserDemand::new(self.desired_rate_bps, mcs, table, numerology, num_rbs)
    }
}

/// Rayleigh scale for a given mean.
pub fn rayleigh_scale(mean: f64) -> f64 {
    mean * (2.0 / std::f64::consts::PI).sqrt()
}

/// Desired rate ~ Rayleigh with the configured mean, MCS uniform on 1..=15.
pub fn draw_demand<R: Rng>(config: &ScenarioConfig, table: &McsTable, rng: &mut R) -> UserDemand {
    let scale = rayleigh_scale(config.average_rate_bps);
    let u: f64 = rng.random();
    let rate = scale * (-2.0 * (1.0 - u).ln()).sqrt();
    let mcs = rng.random_range(McsTable::MIN_INDEX..=McsTable::MAX_INDEX);
    UserDemand::new(rate, mcs, table, config.numerology, config.num_rbs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StationKind {
    Fbs,
    Ms,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Station {
    pub id: usize,
    pub kind: StationKind,
    pub position: Point,
    /// Serving cell; for an FBS its own index.
    pub cell: usize,
    /// Row-major apartment index.
    pub apartment: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub seed: u64,
    pub area: [f64; 2],
    pub num_rbs: usize,
    pub base_stations: Vec<Station>,
    pub mobiles: Vec<Station>,
    pub demands: Vec<UserDemand>,
    pub infeasible_demands: usize,
}

impl Scenario {
    pub fn generate(config: &ScenarioConfig, table: &McsTable, seed: u64) -> Result<Scenario> {
        config.validate()?;
        let mut rng = stream(seed, &[LABEL_SCENARIO]);
        let cells = config.rows * config.cols;
        let active = 'draw: {
            for _ in 0..MAX_REDRAWS {
                let active: Vec<usize> = match config.fixed_active {
                    Some(n) => rand::seq::index::sample(&mut rng, cells, n).into_vec(),
                    None => (0..cells).filter(|_| rng.random::<f64>() < config.p_act).collect(),
                };
                if active.len() >= config.min_active.max(1) {
                    break 'draw active;
                }
            }
            return Err(Error::RedrawLimit(MAX_REDRAWS));
        };
        let mut active = active;
        active.sort_unstable();

        let w = config.apartment_width_m;
        let mut base_stations = Vec::with_capacity(active.len());
        let mut mobiles = Vec::new();
        let mut demands = Vec::new();
        for (cell, &apt) in active.iter().enumerate() {
            let (ox, oy) = ((apt % config.cols) as f64 * w, (apt / config.cols) as f64 * w);
            let place = |rng: &mut rand_chacha::ChaCha8Rng| {
                Point::new(ox + w * rng.random::<f64>(), oy + w * rng.random::<f64>())
            };
            base_stations.push(Station {
                id: cell,
                kind: StationKind::Fbs,
                position: place(&mut rng),
                cell,
                apartment: apt,
            });
            for _ in 0..config.user_counts.sample(&mut rng) {
                mobiles.push(Station {
                    id: mobiles.len(),
                    kind: StationKind::Ms,
                    position: place(&mut rng),
                    cell,
                    apartment: apt,
                });
                demands.push(draw_demand(config, table, &mut rng));
            }
        }
        let infeasible_demands = demands.iter().filter(|d| d.infeasible).count();
        if infeasible_demands > 0 {
            log::debug!("scenario {seed}: {infeasible_demands} demands clamped to {} RBs", config.num_rbs);
        }
        Ok(Scenario {
            seed,
            area: config.area(),
            num_rbs: config.num_rbs,
            base_stations,
            mobiles,
            demands,
            infeasible_demands,
        })
    }

    pub fn num_cells(&self) -> usize {
        self.base_stations.len()
    }

    pub fn num_users(&self) -> usize {
        self.mobiles.len()
    }

    /// User indices served by `cell`, in id order.
    pub fn users_of(&self, cell: usize) -> impl Iterator<Item = usize> + '_ {
        self.mobiles.iter().filter(move |m| m.cell == cell).map(|m| m.id)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
