//! dB / linear conversions.

/// Floor used when converting a zero power to dBm.
pub const FLOOR_DBM: f64 = -200.0;

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(w: f64) -> f64 {
    if w <= 0.0 {
        return FLOOR_DBM;
    }
    (10.0 * w.log10() + 30.0).max(FLOOR_DBM)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
