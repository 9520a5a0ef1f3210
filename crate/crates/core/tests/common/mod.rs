#![allow(dead_code)]

use femto_icic::fuzzy::MembershipFunction;
use rand::Rng;

/// Membership written as `max(0, min(rise, 1, fall))`.
pub fn degree_oracle(mf: &MembershipFunction, x: f64) -> f64 {
    let rise = |a: f64, b: f64| {
        if x < a {
            0.0
        } else if b > a {
            ((x - a) / (b - a)).min(1.0)
        } else {
            1.0
        }
    };
    let fall = |c: f64, d: f64| {
        if x > d {
            0.0
        } else if d > c {
            ((d - x) / (d - c)).min(1.0)
        } else {
            1.0
        }
    };
    match *mf {
        MembershipFunction::Trapezoid { a, b, c, d } => rise(a, b).min(fall(c, d)),
        MembershipFunction::Triangle { a, b, c } => rise(a, b).min(fall(b, c)),
        MembershipFunction::OpenLeft { c, d } => fall(c, d),
        MembershipFunction::OpenRight { a, b } => rise(a, b),
    }
    .max(0.0)
}

/// Centroid of `mu` on `[lo, hi]` by an `n`-point midpoint rule.
pub fn centroid_oracle(lo: f64, hi: f64, n: usize, mu: impl Fn(f64) -> f64) -> f64 {
    let h = (hi - lo) / n as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..n {
        let x = lo + (i as f64 + 0.5) * h;
        let m = mu(x);
        num += x * m;
        den += m;
    }
    num / den
}

/// Distance between two uniform points of a `dim × dim` square.
pub fn random_pair_distance<R: Rng>(rng: &mut R, dim: f64) -> f64 {
    let (x1, y1, x2, y2): (f64, f64, f64, f64) = (rng.random(), rng.random(), rng.random(), rng.random());
    dim * (x1 - x2).hypot(y1 - y2)
}

/// Kolmogorov-Smirnov distance between sorted samples and a CDF.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// Empirical quantile of sorted samples.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let idx = ((sorted.len() as f64 * p).ceil() as usize).clamp(1, sorted.len()) - 1;
    sorted[idx]
}

/// `C(n, k)` as a product of ratios.
pub fn binomial_oracle(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (n - i) as u128;
        den *= (i + 1) as u128;
    }
    num / den
}
