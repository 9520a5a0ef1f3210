//! Radio KPI arithmetic and the MCS table.
//!
//! SINR, per-user throughput with hard SINR thresholding per RB, power
//! efficiency, availability and Jain fairness.

use serde::{Deserialize, Serialize};

use crate::units::dbm_to_watts;
use crate::{Error, Result};

const BUNDLED_MCS_CSV: &str = include_str!("../data/mcs_table.csv");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McsEntry {
    pub cqi: u8,
    /// `None` for index 0, which carries no data.
    pub min_sinr_db: Option<f64>,
    pub modulation: String,
    pub code_rate: Option<f64>,
    /// Bits per symbol.
    pub efficiency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McsTable {
    entries: Vec<McsEntry>,
}

impl Default for McsTable {
    fn default() -> Self {
        McsTable::from_csv(BUNDLED_MCS_CSV).expect("bundled MCS table is valid")
    }
}

impl McsTable {
    pub const MIN_INDEX: u8 = 1;
    pub const MAX_INDEX: u8 = 15;

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let opt = |s: &str| -> Result<Option<f64>> {
            if s == "-" {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| Error::Config(format!("bad MCS number `{s}`")))
            }
        };
        let mut entries = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| Error::Config(format!("MCS csv: {e}")))?;
            if rec.len() != 5 {
                return Err(Error::Config(format!("MCS csv row has {} columns", rec.len())));
            }
            entries.push(McsEntry {
                cqi: rec[0].parse().map_err(|_| Error::Config(format!("bad CQI `{}`", &rec[0])))?,
                min_sinr_db: opt(&rec[1])?,
                modulation: rec[2].to_string(),
                code_rate: opt(&rec[3])?,
                efficiency: opt(&rec[4])?.unwrap_or(0.0),
            });
        }
        let table = McsTable { entries };
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<()> {
        if self.entries.len() != 16 {
            return Err(Error::Config(format!("MCS table needs 16 rows, got {}", self.entries.len())));
        }
        for (i, e) in self.entries.iter().enumerate() {
            if e.cqi as usize != i {
                return Err(Error::Config(format!("MCS row {i} has CQI {}", e.cqi)));
            }
            if i >= 1 && e.min_sinr_db.is_none() {
                return Err(Error::Config(format!("MCS row {i} lacks a SINR threshold")));
            }
        }
        if self.entries[0].efficiency != 0.0 {
            return Err(Error::Config("CQI 0 must have zero efficiency".into()));
        }
        for w in self.entries[1..].windows(2) {
            if w[1].efficiency <= w[0].efficiency {
                return Err(Error::Config("efficiencies must increase with CQI".into()));
            }
            if w[1].min_sinr_db < w[0].min_sinr_db {
                return Err(Error::Config("SINR thresholds must not decrease with CQI".into()));
            }
        }
        Ok(())
    }

    pub fn entries(&self) -> &[McsEntry] {
        &self.entries
    }

    pub fn efficiency(&self, mcs: u8) -> f64 {
        self.entries[mcs as usize].efficiency
    }

    /// SINR target γ* in dB. Panics for CQI 0.
    pub fn min_sinr_db(&self, mcs: u8) -> f64 {
        self.entries[mcs as usize]
            .min_sinr_db
            .expect("CQI 0 has no SINR target")
    }
}

/// Thermal noise per resource block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub density_dbm_per_hz: f64,
    pub rb_bandwidth_hz: f64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            density_dbm_per_hz: -174.0,
            rb_bandwidth_hz: 180e3,
        }
    }
}

impl NoiseModel {
    pub fn noise_dbm(&self) -> f64 {
        self.density_dbm_per_hz + 10.0 * self.rb_bandwidth_hz.log10()
    }

    pub fn noise_watts(&self) -> f64 {
        dbm_to_watts(self.noise_dbm())
    }
}

/// Subcarrier count and symbol rate of one RB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RbNumerology {
    pub subcarriers: f64,
    pub symbol_rate: f64,
}

impl Default for RbNumerology {
    fn default() -> Self {
        RbNumerology {
            subcarriers: 12.0,
            symbol_rate: 15e3,
        }
    }
}

impl RbNumerology {
    /// Bits/s carried by one RB at `efficiency` bits/symbol.
    pub fn rb_rate(&self, efficiency: f64) -> f64 {
        self.subcarriers * self.symbol_rate * efficiency
    }
}

/// S / (I + η), all in watts.
pub fn sinr(signal: f64, interference: f64, noise: f64) -> f64 {
    debug_assert!(signal >= 0.0 && interference >= 0.0 && noise > 0.0);
    signal / (interference + noise)
}

/// Number of RBs whose SINR (dB) meets `target_db`.
pub fn achieved_rbs(sinr_db: &[f64], target_db: f64) -> usize {
    sinr_db.iter().filter(|&&g| g >= target_db).count()
}

/// ñ · k_sc · s_sc · ε.
pub fn user_throughput(sinr_db: &[f64], target_db: f64, efficiency: f64, rb: RbNumerology) -> f64 {
    achieved_rbs(sinr_db, target_db) as f64 * rb.rb_rate(efficiency)
}

/// Bits per joule; zero when nothing was transmitted.
pub fn power_efficiency(throughput: f64, rb_powers: &[f64]) -> f64 {
    let total: f64 = rb_powers.iter().sum();
    if total <= 0.0 {
        0.0
    } else {
        throughput / total
    }
}

/// Fraction of users whose achieved rate meets the desired rate.
pub fn availability(achieved: &[f64], desired: &[f64]) -> f64 {
    assert_eq!(achieved.len(), desired.len());
    if achieved.is_empty() {
        return 0.0;
    }
    let ok = achieved.iter().zip(desired).filter(|(c, d)| c >= d).count();
    ok as f64 / achieved.len() as f64
}

/// Jain's index (ΣC)² / (n ΣC²); 1 for an all-zero vector.
pub fn jain_fairness(rates: &[f64]) -> f64 {
    let sum: f64 = rates.iter().sum();
    let sq: f64 = rates.iter().map(|c| c * c).sum();
    if sq <= 0.0 {
        return 1.0;
    }
    sum * sum / (rates.len() as f64 * sq)
}

/// Per-user outcome of one slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserSlotMetrics {
    pub throughput_bps: f64,
    pub achieved_rbs: usize,
    pub tx_power_w: f64,
    pub efficiency_bits_per_joule: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlotMetrics {
    pub users: Vec<UserSlotMetrics>,
    pub system_throughput_bps: f64,
    pub mean_efficiency_bits_per_joule: f64,
    pub availability: f64,
    pub fairness: f64,
}

impl SlotMetrics {
    pub fn from_users(users: Vec<UserSlotMetrics>) -> Self {
        let rates: Vec<f64> = users.iter().map(|u| u.throughput_bps).collect();
        let n = users.len().max(1) as f64;
        SlotMetrics {
            system_throughput_bps: rates.iter().sum(),
            mean_efficiency_bits_per_joule: users.iter().map(|u| u.efficiency_bits_per_joule).sum::<f64>() / n,
            availability: users.iter().filter(|u| u.satisfied).count() as f64 / n,
            fairness: jain_fairness(&rates),
            users,
        }
    }
}
