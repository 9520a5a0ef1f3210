//! Time-averaged measurements feeding the fuzzy inputs.

use serde::{Deserialize, Serialize};

use crate::units::{linear_to_db, watts_to_dbm};

/// `(1−λ)·prev + λ·x`; the first measurement is taken as is.
pub fn ema(prev: Option<f64>, x: f64, lambda: f64) -> f64 {
    match prev {
        Some(p) => (1.0 - lambda) * p + lambda * x,
        None => x,
    }
}

/// What one user measured during a slot.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SlotMeasurement {
    /// Interference on every RB, watts.
    pub interference_w: Vec<f64>,
    /// Linear mean SINR over the RBs the user transmitted on, if any.
    pub mean_sinr: Option<f64>,
    pub throughput_bps: f64,
}

/// Per-user memory of one FBS.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserObservations {
    /// EMA interference per RB in watts; `None` until first measured.
    pub interference_w: Vec<Option<f64>>,
    /// Sounded fading power per RB.
    pub fading: Vec<f64>,
    /// Large-scale gain of the serving link.
    pub signal_gain: f64,
    /// EMA of the linear mean SINR.
    pub sinr_avg: f64,
    pub last_throughput_bps: f64,
}

impl UserObservations {
    /// Fresh memory; the SINR average starts at `target_db` so link
    /// adaptation idles until real measurements arrive.
    pub fn new(fading: Vec<f64>, signal_gain: f64, target_db: f64) -> Self {
        UserObservations {
            interference_w: vec![None; fading.len()],
            fading,
            signal_gain,
            sinr_avg: 10f64.powf(target_db / 10.0),
            last_throughput_bps: 0.0,
        }
    }

    /// Interference on `rb` in dBm, with never-observed RBs at `default_w`.
    pub fn interference_dbm(&self, rb: usize, default_w: f64) -> f64 {
        watts_to_dbm(self.interference_w[rb].unwrap_or(default_w))
    }

    /// Received desired power in dBm at `power_w` per RB.
    pub fn signal_dbm(&self, power_w: f64) -> f64 {
        watts_to_dbm(power_w * self.signal_gain)
    }

    pub fn sinr_avg_db(&self) -> f64 {
        linear_to_db(self.sinr_avg)
    }

    pub fn update(&mut self, m: &SlotMeasurement, lambda: f64) {
        for (slot, &x) in self.interference_w.iter_mut().zip(&m.interference_w) {
            *slot = Some(ema(*slot, x, lambda));
        }
        if let Some(s) = m.mean_sinr {
            self.sinr_avg = ema(Some(self.sinr_avg), s, lambda);
        }
        self.last_throughput_bps = m.throughput_bps;
    }
}
