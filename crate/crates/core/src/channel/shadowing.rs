//! Spatially correlated log-normal shadowing maps.
//!
//! Maps are Gaussian fields with exponential correlation `exp(-Δ/d_corr)`,
//! generated exactly on a periodic torus by circulant embedding and cropped
//! to the scenario area. One complex transform yields two independent maps.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::scenario::Point;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShadowingParams {
    pub sigma_db: f64,
    pub corr_distance_m: f64,
    pub resolution_m: f64,
}

impl Default for ShadowingParams {
    fn default() -> Self {
        ShadowingParams {
            sigma_db: 10.0,
            corr_distance_m: 50.0,
            resolution_m: 1.0,
        }
    }
}

/// Gridded shadowing values in dB with origin at `(0, 0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowingMap {
    pub nx: usize,
    pub ny: usize,
    pub resolution_m: f64,
    pub sigma_db: f64,
    pub corr_distance_m: f64,
    /// Row-major, `values[iy * nx + ix]`.
    pub values: Vec<f64>,
}

impl ShadowingMap {
    /// All-zero map, i.e. no shadowing.
    pub fn zero(area: [f64; 2], params: ShadowingParams) -> Self {
        let (nx, ny) = grid_dims(area, params.resolution_m);
        ShadowingMap {
            nx,
            ny,
            resolution_m: params.resolution_m,
            sigma_db: 0.0,
            corr_distance_m: params.corr_distance_m,
            values: vec![0.0; nx * ny],
        }
    }

    pub fn extent(&self) -> [f64; 2] {
        [
            (self.nx - 1) as f64 * self.resolution_m,
            (self.ny - 1) as f64 * self.resolution_m,
        ]
    }

    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    /// Bilinear interpolation; positions outside the grid are clamped.
    pub fn sample(&self, pos: Point) -> f64 {
        let [w, h] = self.extent();
        if !(0.0..=w).contains(&pos.x) || !(0.0..=h).contains(&pos.y) {
            log::warn!("shadowing sample at ({}, {}) outside map, clamped", pos.x, pos.y);
        }
        let fx = (pos.x.clamp(0.0, w) / self.resolution_m).min((self.nx - 1) as f64);
        let fy = (pos.y.clamp(0.0, h) / self.resolution_m).min((self.ny - 1) as f64);
        let (x0, y0) = (fx.floor() as usize, fy.floor() as usize);
        let (x1, y1) = ((x0 + 1).min(self.nx - 1), (y0 + 1).min(self.ny - 1));
        let (tx, ty) = (fx - x0 as f64, fy - y0 as f64);
        let top = self.at(x0, y0) * (1.0 - tx) + self.at(x1, y0) * tx;
        let bottom = self.at(x0, y1) * (1.0 - tx) + self.at(x1, y1) * tx;
        top * (1.0 - ty) + bottom * ty
    }
}

pub fn sample_shadowing(map: &ShadowingMap, pos: Point) -> f64 {
    map.sample(pos)
}

fn grid_dims(area: [f64; 2], resolution: f64) -> (usize, usize) {
    (
        (area[0] / resolution).ceil() as usize + 1,
        (area[1] / resolution).ceil() as usize + 1,
    )
}

/// Precomputed circulant embedding for one area and parameter set.
pub struct ShadowingGenerator {
    params: ShadowingParams,
    nx: usize,
    ny: usize,
    size: usize,
    sqrt_eigen: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
    clipped_mass: f64,
}

impl std::fmt::Debug for ShadowingGenerator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ShadowingGenerator")
            .field("params", &self.params)
            .field("nx", &self.nx)
            .field("ny", &self.ny)
            .field("size", &self.size)
            .finish()
    }
}

fn fft2(buf: &mut [Complex64], n: usize, fft: &dyn Fft<f64>) {
    for row in buf.chunks_exact_mut(n) {
        fft.process(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for x in 0..n {
        for y in 0..n {
            col[y] = buf[y * n + x];
        }
        fft.process(&mut col);
        for y in 0..n {
            buf[y * n + x] = col[y];
        }
    }
}

impl ShadowingGenerator {
    pub fn new(area: [f64; 2], params: ShadowingParams) -> Self {
        let (nx, ny) = grid_dims(area, params.resolution_m);
        let span = nx.max(ny) - 1;
        let reach = (4.0 * params.corr_distance_m / params.resolution_m).ceil() as usize;
        let size = (2 * span).max(span + reach).max(2).next_power_of_two();
        let fft = FftPlanner::new().plan_fft_forward(size);

        let wrap = |i: usize| i.min(size - i) as f64;
        let mut cov: Vec<Complex64> = (0..size * size)
            .map(|k| {
                let (x, y) = (wrap(k % size), wrap(k / size));
                let d = x.hypot(y) * params.resolution_m;
                Complex64::new((-d / params.corr_distance_m).exp(), 0.0)
            })
            .collect();
        fft2(&mut cov, size, fft.as_ref());
        let n = (size * size) as f64;
        let total: f64 = cov.iter().map(|c| c.re.abs()).sum();
        let negative: f64 = cov.iter().filter(|c| c.re < 0.0).map(|c| -c.re).sum();
        let sqrt_eigen = cov.iter().map(|c| (c.re.max(0.0) / n).sqrt()).collect();
        ShadowingGenerator {
            params,
            nx,
            ny,
            size,
            sqrt_eigen,
            fft,
            clipped_mass: negative / total,
        }
    }

    pub fn params(&self) -> ShadowingParams {
        self.params
    }

    /// Fraction of spectral mass lost to clipping negative eigenvalues.
    pub fn clipped_mass(&self) -> f64 {
        self.clipped_mass
    }

    /// Two independent maps from one complex field.
    pub fn generate_pair<R: Rng>(&self, rng: &mut R) -> (ShadowingMap, ShadowingMap) {
        let mut buf: Vec<Complex64> = self
            .sqrt_eigen
            .iter()
            .map(|&s| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im) * s
            })
            .collect();
        fft2(&mut buf, self.size, self.fft.as_ref());
        let crop = |part: fn(&Complex64) -> f64| {
            let mut values = Vec::with_capacity(self.nx * self.ny);
            for y in 0..self.ny {
                for x in 0..self.nx {
                    values.push(self.params.sigma_db * part(&buf[y * self.size + x]));
                }
            }
            ShadowingMap {
                nx: self.nx,
                ny: self.ny,
                resolution_m: self.params.resolution_m,
                sigma_db: self.params.sigma_db,
                corr_distance_m: self.params.corr_distance_m,
                values,
            }
        };
        (crop(|c| c.re), crop(|c| c.im))
    }

    pub fn generate<R: Rng>(&self, count: usize, rng: &mut R) -> Vec<ShadowingMap> {
        let mut maps = Vec::with_capacity(count + 1);
        while maps.len() < count {
            let (a, b) = self.generate_pair(rng);
            maps.push(a);
            maps.push(b);
        }
        maps.truncate(count);
        maps
    }
}
