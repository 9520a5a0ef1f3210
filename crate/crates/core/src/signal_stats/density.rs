//! Densities sampled on a uniform lattice, with optional point masses.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub at: f64,
    pub mass: f64,
}

/// Continuous part `pdf[i]` at `start + i·step` plus discrete atoms.
///
/// `start` is always an integer multiple of `step`, so densities built with
/// the same step share a lattice and convolve without resampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledDensity {
    pub start: f64,
    pub step: f64,
    pub pdf: Vec<f64>,
    pub atoms: Vec<Atom>,
}

fn lattice_floor(x: f64, step: f64) -> i64 {
    (x / step + 1e-9).floor() as i64
}

fn lattice_ceil(x: f64, step: f64) -> i64 {
    (x / step - 1e-9).ceil() as i64
}

impl SampledDensity {
    /// Samples `f` on the lattice points inside `[lo, hi]`.
    pub fn from_fn(lo: f64, hi: f64, step: f64, f: impl Fn(f64) -> f64) -> Self {
        let (i0, i1) = (lattice_ceil(lo, step), lattice_floor(hi, step));
        let pdf = (i0..=i1).map(|i| f(i as f64 * step)).collect();
        SampledDensity {
            start: i0 as f64 * step,
            step,
            pdf,
            atoms: Vec::new(),
        }
    }

    pub fn discrete(step: f64, atoms: Vec<Atom>) -> Self {
        SampledDensity {
            start: 0.0,
            step,
            pdf: Vec::new(),
            atoms,
        }
    }

    /// Zero-mean Gaussian truncated at ±8σ; a unit atom at zero when σ = 0.
    pub fn gaussian(sigma: f64, step: f64) -> Self {
        if sigma <= 0.0 {
            return SampledDensity::discrete(step, vec![Atom { at: 0.0, mass: 1.0 }]);
        }
        let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
        SampledDensity::from_fn(-8.0 * sigma, 8.0 * sigma, step, |x| {
            norm * (-0.5 * (x / sigma).powi(2)).exp()
        })
    }

    pub fn x(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.x(self.pdf.len().saturating_sub(1))
    }

    /// Linear interpolation of the continuous part, zero off the grid.
    pub fn value(&self, x: f64) -> f64 {
        if self.pdf.is_empty() {
            return 0.0;
        }
        let f = (x - self.start) / self.step;
        if f < -1e-9 || f > (self.pdf.len() - 1) as f64 + 1e-9 {
            return 0.0;
        }
        let f = f.clamp(0.0, (self.pdf.len() - 1) as f64);
        let i = (f.floor() as usize).min(self.pdf.len() - 1);
        if i + 1 == self.pdf.len() {
            return self.pdf[i];
        }
        let t = f - i as f64;
        self.pdf[i] * (1.0 - t) + self.pdf[i + 1] * t
    }

    fn cumulative(&self) -> Vec<f64> {
        let mut cum = Vec::with_capacity(self.pdf.len());
        let mut acc = 0.0;
        for (i, &v) in self.pdf.iter().enumerate() {
            if i > 0 {
                acc += 0.5 * (v + self.pdf[i - 1]) * self.step;
            }
            cum.push(acc);
        }
        cum
    }

    pub fn continuous_mass(&self) -> f64 {
        self.cumulative().last().copied().unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.continuous_mass() + self.atoms.iter().map(|a| a.mass).sum::<f64>()
    }

    /// Lowest and highest points carrying mass.
    pub fn support(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        if !self.pdf.is_empty() {
            lo = self.start;
            hi = self.end();
        }
        for a in &self.atoms {
            lo = lo.min(a.at);
            hi = hi.max(a.at);
        }
        (lo, hi)
    }

    fn cdf_with(&self, cum: &[f64], x: f64) -> f64 {
        let mut c: f64 = self.atoms.iter().filter(|a| a.at <= x).map(|a| a.mass).sum();
        if !cum.is_empty() && x >= self.start {
            let f = (x - self.start) / self.step;
            let last = cum.len() - 1;
            if f >= last as f64 {
                c += cum[last];
            } else {
                let i = f.floor() as usize;
                let t = f - i as f64;
                c += cum[i] * (1.0 - t) + cum[i + 1] * t;
            }
        }
        c
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.cdf_with(&self.cumulative(), x)
    }

    /// CDF at every lattice point of the continuous part.
    pub fn cdf_values(&self) -> Vec<f64> {
        let cum = self.cumulative();
        (0..self.pdf.len()).map(|i| self.cdf_with(&cum, self.x(i))).collect()
    }

    /// Inverse CDF; `p` must lie strictly inside (0, 1).
    pub fn percentiles(&self, ps: &[f64]) -> Result<Vec<f64>> {
        let cum = self.cumulative();
        let total = self.total_mass();
        let (lo, hi) = self.support();
        ps.iter()
            .map(|&p| {
                if !(p > 0.0 && p < 1.0) {
                    return Err(Error::Domain { what: "percentile", value: p });
                }
                let target = p * total;
                let (mut a, mut b) = (lo, hi);
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if self.cdf_with(&cum, mid) < target {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                Ok(0.5 * (a + b))
            })
            .collect()
    }

    pub fn percentile(&self, p: f64) -> Result<f64> {
        Ok(self.percentiles(&[p])?[0])
    }

    pub fn mean(&self) -> f64 {
        let n = self.pdf.len();
        let mut m = 0.0;
        for i in 1..n {
            m += 0.5 * (self.x(i) * self.pdf[i] + self.x(i - 1) * self.pdf[i - 1]) * self.step;
        }
        m + self.atoms.iter().map(|a| a.at * a.mass).sum::<f64>()
    }

    /// Density of `−X`.
    pub fn reflect(&self) -> Self {
        let mut pdf = self.pdf.clone();
        pdf.reverse();
        SampledDensity {
            start: if self.pdf.is_empty() { 0.0 } else { -self.end() },
            step: self.step,
            pdf,
            atoms: self.atoms.iter().map(|a| Atom { at: -a.at, mass: a.mass }).collect(),
        }
    }

    /// Density of the sum of independent variables with these densities.
    pub fn convolve(&self, other: &SampledDensity) -> Result<SampledDensity> {
        if (self.step - other.step).abs() > 1e-12 * self.step.abs().max(other.step.abs()) {
            return Err(Error::GridMismatch(format!(
                "steps {} and {} differ",
                self.step, other.step
            )));
        }
        let step = self.step;
        let mut atoms = Vec::new();
        for a in &self.atoms {
            for b in &other.atoms {
                atoms.push(Atom { at: a.at + b.at, mass: a.mass * b.mass });
            }
        }

        // Extent of the continuous result.
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        if !self.pdf.is_empty() && !other.pdf.is_empty() {
            lo = lo.min(self.start + other.start);
            hi = hi.max(self.end() + other.end());
        }
        for (atoms, dens) in [(&self.atoms, other), (&other.atoms, self)] {
            if dens.pdf.is_empty() {
                continue;
            }
            for a in atoms {
                lo = lo.min(dens.start + a.at);
                hi = hi.max(dens.end() + a.at);
            }
        }
        if lo > hi {
            return Ok(SampledDensity { start: 0.0, step, pdf: Vec::new(), atoms });
        }
        let (i0, i1) = (lattice_floor(lo, step), lattice_ceil(hi, step));
        let start = i0 as f64 * step;
        let mut pdf = vec![0.0; (i1 - i0 + 1) as usize];

        if !self.pdf.is_empty() && !other.pdf.is_empty() {
            let offset = ((self.start + other.start - start) / step).round() as usize;
            for (i, &a) in self.pdf.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (j, &b) in other.pdf.iter().enumerate() {
                    pdf[offset + i + j] += a * b * step;
                }
            }
        }
        for (atoms, dens) in [(&self.atoms, other), (&other.atoms, self)] {
            if dens.pdf.is_empty() {
                continue;
            }
            for a in atoms {
                for (k, v) in pdf.iter_mut().enumerate() {
                    let x = start + k as f64 * step;
                    *v += a.mass * dens.value(x - a.at);
                }
            }
        }
        Ok(SampledDensity { start, step, pdf, atoms })
    }

    /// CSV rows `value,pdf,cdf` over the lattice, then one row per atom
    /// with its mass in the pdf column.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "value,pdf,cdf")?;
        for (i, c) in self.cdf_values().into_iter().enumerate() {
            writeln!(out, "{},{},{}", self.x(i), self.pdf[i], c)?;
        }
        for a in &self.atoms {
            writeln!(out, "{},{},{}", a.at, a.mass, self.cdf(a.at))?;
        }
        Ok(())
    }
}
