//! Frequency-selective fast fading from a tapped delay line.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::rng::stream;

/// Exponential power-delay profile on a uniform tap spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FadingProfile {
    pub taps: usize,
    pub tap_spacing_s: f64,
    /// Power decay constant; `f64::INFINITY` gives equal tap powers.
    pub decay_s: f64,
}

impl Default for FadingProfile {
    fn default() -> Self {
        FadingProfile::with_rms_delay_spread(6, 50e-9)
    }
}

impl FadingProfile {
    /// Single-tap, frequency-flat Rayleigh channel.
    pub fn flat() -> Self {
        FadingProfile {
            taps: 1,
            tap_spacing_s: 0.0,
            decay_s: f64::INFINITY,
        }
    }

    /// Profile whose RMS delay spread equals `rms_s`.
    ///
    /// The tap spacing is set to the target spread and the decay constant is
    /// found by bisection. Two taps cannot reach a spread equal to their
    /// spacing, so they are placed `2·rms` apart with equal power.
    pub fn with_rms_delay_spread(taps: usize, rms_s: f64) -> Self {
        let taps = taps.max(1);
        if taps == 1 || rms_s <= 0.0 {
            return FadingProfile::flat();
        }
        if taps == 2 {
            return FadingProfile {
                taps,
                tap_spacing_s: 2.0 * rms_s,
                decay_s: f64::INFINITY,
            };
        }
        let spread = |decay: f64| {
            FadingProfile {
                taps,
                tap_spacing_s: rms_s,
                decay_s: decay,
            }
            .rms_delay_spread()
        };
        let (mut lo, mut hi) = (rms_s * 1e-3, rms_s * 1e6);
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if spread(mid) < rms_s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        FadingProfile {
            taps,
            tap_spacing_s: rms_s,
            decay_s: 0.5 * (lo + hi),
        }
    }

    pub fn delays(&self) -> Vec<f64> {
        (0..self.taps).map(|l| l as f64 * self.tap_spacing_s).collect()
    }

    /// Tap powers normalized to sum to one.
    pub fn powers(&self) -> Vec<f64> {
        let raw: Vec<f64> = self
            .delays()
            .iter()
            .map(|&t| if self.decay_s.is_infinite() { 1.0 } else { (-t / self.decay_s).exp() })
            .collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|p| p / total).collect()
    }

    pub fn rms_delay_spread(&self) -> f64 {
        let (d, p) = (self.delays(), self.powers());
        let mean: f64 = d.iter().zip(&p).map(|(t, w)| t * w).sum();
        let second: f64 = d.iter().zip(&p).map(|(t, w)| t * t * w).sum();
        (second - mean * mean).max(0.0).sqrt()
    }
}

/// Per-RB power gain |H(f_m)|² at RB centres `f_m = m·Δf` for one tap draw.
pub fn fading_from_rng<R: Rng>(rng: &mut R, num_rbs: usize, rb_bandwidth_hz: f64, profile: &FadingProfile) -> Vec<f64> {
    let taps: Vec<(f64, Complex64)> = profile
        .delays()
        .into_iter()
        .zip(profile.powers())
        .map(|(tau, p)| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            (tau, Complex64::new(re, im) * (p / 2.0).sqrt())
        })
        .collect();
    (0..num_rbs)
        .map(|m| {
            let f = m as f64 * rb_bandwidth_hz;
            taps.iter()
                .map(|&(tau, h)| h * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * f * tau))
                .sum::<Complex64>()
                .norm_sqr()
        })
        .collect()
}

/// Per-RB |H|² for the link identified by `link_seed`.
pub fn fading_per_rb(link_seed: u64, num_rbs: usize, rb_bandwidth_hz: f64, profile: &FadingProfile) -> Vec<f64> {
    let mut rng = stream(link_seed, &[]);
    fading_from_rng(&mut rng, num_rbs, rb_bandwidth_hz, profile)
}
