//! Analytical distributions of path loss, transmit power and received
//! signal power in the apartment grid.
//!
//! The desired-signal distribution uses a `D = 10 m` square (serving FBS and
//! user in one apartment), the interfering one `D = 50 m` (any two points of
//! the grid). Percentiles of both feed the fuzzy membership breakpoints.

pub mod density;

use serde::{Deserialize, Serialize};

pub use density::{Atom, SampledDensity};

use crate::channel::{PathLossParams, MIN_DISTANCE_M};
use crate::link_metrics::{McsTable, RbNumerology};
use crate::scenario::rayleigh_scale;
use crate::Result;

/// Density of the distance between two uniform points in a `D × D` square.
pub fn distance_pdf(d: f64, dim: f64) -> f64 {
    let r = d / dim;
    if !(0.0..=std::f64::consts::SQRT_2).contains(&r) {
        return 0.0;
    }
    let pi = std::f64::consts::PI;
    let shape = if r <= 1.0 {
        2.0 * r * (r * r - 4.0 * r + pi)
    } else {
        let s = (r * r - 1.0).sqrt();
        2.0 * r * (4.0 * s - (r * r + 2.0 - pi) - 4.0 * s.atan())
    };
    (shape / dim).max(0.0)
}

/// `P[d ≤ x]` for `x ≤ D`.
pub fn distance_cdf_near(x: f64, dim: f64) -> f64 {
    let r = (x / dim).clamp(0.0, 1.0);
    std::f64::consts::PI * r * r - 8.0 / 3.0 * r.powi(3) + 0.5 * r.powi(4)
}

/// Path loss at the minimum and maximum distance of a `D × D` square.
pub fn pathloss_support(dim: f64, params: PathLossParams) -> (f64, f64) {
    (
        params.alpha + params.beta * MIN_DISTANCE_M.log10(),
        params.alpha + params.beta * (std::f64::consts::SQRT_2 * dim).log10(),
    )
}

/// Density of `α + β·log10(d)` for the square distance; distances below the
/// minimum distance are excluded here and carried as an atom by
/// [`pathloss_density`].
pub fn pathloss_pdf(l: f64, dim: f64, params: PathLossParams) -> f64 {
    let (lo, hi) = pathloss_support(dim, params);
    if l < lo || l > hi {
        return 0.0;
    }
    let rho = 10f64.powf((l - params.alpha) / params.beta);
    std::f64::consts::LN_10 / params.beta * rho * distance_pdf(rho, dim)
}

/// Path-loss density on a lattice of `step` dB, with the mass of distances
/// below the minimum distance as an atom at the support's lower end.
pub fn pathloss_density(dim: f64, params: PathLossParams, step: f64) -> SampledDensity {
    let (lo, hi) = pathloss_support(dim, params);
    let mut d = SampledDensity::from_fn(lo, hi, step, |l| pathloss_pdf(l, dim, params));
    d.atoms.push(Atom {
        at: lo,
        mass: distance_cdf_near(MIN_DISTANCE_M, dim),
    });
    d
}

/// CDF of a Rayleigh variable with the given mean.
pub fn rayleigh_cdf(mean: f64) -> impl Fn(f64) -> f64 {
    let scale = rayleigh_scale(mean);
    move |r: f64| {
        if r <= 0.0 {
            0.0
        } else {
            1.0 - (-(r * r) / (2.0 * scale * scale)).exp()
        }
    }
}

/// Probability that a user needs `n` RBs, `n = 1..=num_rbs` (index `n-1`),
/// for a rate CDF and an MCS chosen uniformly from `efficiencies`.
/// Demands above `num_rbs` RBs are clamped to `num_rbs`.
pub fn txpower_pmf(
    rate_cdf: impl Fn(f64) -> f64,
    efficiencies: &[f64],
    numerology: RbNumerology,
    num_rbs: usize,
) -> Vec<f64> {
    let mut pmf = vec![0.0; num_rbs];
    let w = 1.0 / efficiencies.len() as f64;
    for &eff in efficiencies {
        let a = numerology.rb_rate(eff);
        for (k, p) in pmf.iter_mut().enumerate() {
            let n = (k + 1) as f64;
            let upper = if k + 1 == num_rbs { 1.0 } else { rate_cdf(n * a) };
            let lower = if k == 0 { 0.0 } else { rate_cdf((n - 1.0) * a) };
            *p += w * (upper - lower);
        }
    }
    pmf
}

/// Per-RB transmit power in dBm as atoms at `P_max/n`.
pub fn txpower_density_dbm(pmf: &[f64], p_max_dbm: f64, step: f64) -> SampledDensity {
    let atoms = pmf
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > 0.0)
        .map(|(k, &p)| Atom {
            at: p_max_dbm - 10.0 * ((k + 1) as f64).log10(),
            mass: p,
        })
        .collect();
    SampledDensity::discrete(step, atoms)
}

/// Received power `P_t − L` in dBm.
pub fn received_power_density(tx_dbm: &SampledDensity, loss_db: &SampledDensity) -> Result<SampledDensity> {
    tx_dbm.convolve(&loss_db.reflect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalStatsConfig {
    pub average_rate_bps: f64,
    pub p_max_dbm: f64,
    pub num_rbs: usize,
    pub numerology: RbNumerology,
    pub pathloss: PathLossParams,
    pub shadowing_sigma_db: f64,
    pub desired_dimension_m: f64,
    pub interfering_dimension_m: f64,
    pub step_db: f64,
}

impl Default for SignalStatsConfig {
    fn default() -> Self {
        SignalStatsConfig {
            average_rate_bps: 1.25e6,
            p_max_dbm: 10.0,
            num_rbs: 50,
            numerology: RbNumerology::default(),
            pathloss: PathLossParams::default(),
            shadowing_sigma_db: 10.0,
            desired_dimension_m: 10.0,
            interfering_dimension_m: 50.0,
            step_db: 0.1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SignalDistributions {
    pub pathloss_desired: SampledDensity,
    pub pathloss_interfering: SampledDensity,
    pub tx_power: SampledDensity,
    pub desired: SampledDensity,
    pub interfering: SampledDensity,
}

pub fn signal_distributions(cfg: &SignalStatsConfig, table: &McsTable) -> Result<SignalDistributions> {
    let effs: Vec<f64> = (McsTable::MIN_INDEX..=McsTable::MAX_INDEX)
        .map(|m| table.efficiency(m))
        .collect();
    let pmf = txpower_pmf(rayleigh_cdf(cfg.average_rate_bps), &effs, cfg.numerology, cfg.num_rbs);
    let tx_power = txpower_density_dbm(&pmf, cfg.p_max_dbm, cfg.step_db);
    let shadow = SampledDensity::gaussian(cfg.shadowing_sigma_db, cfg.step_db);
    let pathloss_desired = pathloss_density(cfg.desired_dimension_m, cfg.pathloss, cfg.step_db);
    let pathloss_interfering = pathloss_density(cfg.interfering_dimension_m, cfg.pathloss, cfg.step_db);
    let desired = received_power_density(&tx_power, &pathloss_desired.convolve(&shadow)?)?;
    let interfering = received_power_density(&tx_power, &pathloss_interfering.convolve(&shadow)?)?;
    Ok(SignalDistributions {
        pathloss_desired,
        pathloss_interfering,
        tx_power,
        desired,
        interfering,
    })
}

/// Percentiles used as Low/Medium/High breakpoints.
pub const ANCHOR_PERCENTILES: [f64; 4] = [0.28, 0.38, 0.62, 0.72];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignalAnchors {
    pub desired_dbm: [f64; 4],
    pub interfering_dbm: [f64; 4],
}

impl SignalDistributions {
    pub fn anchors(&self) -> Result<SignalAnchors> {
        let d = self.desired.percentiles(&ANCHOR_PERCENTILES)?;
        let i = self.interfering.percentiles(&ANCHOR_PERCENTILES)?;
        Ok(SignalAnchors {
            desired_dbm: [d[0], d[1], d[2], d[3]],
            interfering_dbm: [i[0], i[1], i[2], i[3]],
        })
    }
}
