use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Piecewise-linear membership function.
///
/// Breakpoints are in the units of the variable's universe. The value is 1 on
/// the plateau, 0 outside the support, and linear in between. Open shoulders
/// saturate at 1 toward their open side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum MembershipFunction {
    Trapezoid { a: f64, b: f64, c: f64, d: f64 },
    Triangle { a: f64, b: f64, c: f64 },
    /// 1 for x ≤ c, falling to 0 at d.
    OpenLeft { c: f64, d: f64 },
    /// 0 for x ≤ a, rising to 1 at b.
    OpenRight { a: f64, b: f64 },
}

impl MembershipFunction {
    /// Breakpoints as a trapezoid `(a, b, c, d)`; open sides are infinite.
    pub fn breakpoints(&self) -> (f64, f64, f64, f64) {
        match *self {
            MembershipFunction::Trapezoid { a, b, c, d } => (a, b, c, d),
            MembershipFunction::Triangle { a, b, c } => (a, b, b, c),
            MembershipFunction::OpenLeft { c, d } => (f64::NEG_INFINITY, f64::NEG_INFINITY, c, d),
            MembershipFunction::OpenRight { a, b } => (a, b, f64::INFINITY, f64::INFINITY),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite: Vec<f64> = match *self {
            MembershipFunction::Trapezoid { a, b, c, d } => vec![a, b, c, d],
            MembershipFunction::Triangle { a, b, c } => vec![a, b, c],
            MembershipFunction::OpenLeft { c, d } => vec![c, d],
            MembershipFunction::OpenRight { a, b } => vec![a, b],
        };
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config(format!("non-finite breakpoint in {self:?}")));
        }
        if finite.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Config(format!("breakpoints must be nondecreasing: {self:?}")));
        }
        Ok(())
    }

    /// Degree of membership of `x`.
    pub fn degree(&self, x: f64) -> f64 {
        let (a, b, c, d) = self.breakpoints();
        if x >= b && x <= c {
            1.0
        } else if x <= a || x >= d {
            0.0
        } else if x < b {
            (x - a) / (b - a)
        } else {
            (d - x) / (d - c)
        }
    }
}

/// Free-function form of [`MembershipFunction::degree`].
pub fn evaluate_membership(mf: &MembershipFunction, x: f64) -> f64 {
    mf.degree(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TRAP: MembershipFunction = MembershipFunction::Trapezoid { a: 0.0, b: 1.0, c: 2.0, d: 3.0 };

    #[test]
    fn trapezoid_examples() {
        assert_eq!(TRAP.degree(1.5), 1.0);
        assert_eq!(TRAP.degree(0.5), 0.5);
        assert_eq!(TRAP.degree(3.0), 0.0);
        assert_eq!(TRAP.degree(2.5), 0.5);
        assert_eq!(TRAP.degree(-4.0), 0.0);
    }

    #[test]
    fn exact_at_breakpoints() {
        assert_eq!(TRAP.degree(0.0), 0.0);
        assert_eq!(TRAP.degree(1.0), 1.0);
        assert_eq!(TRAP.degree(2.0), 1.0);
    }

    #[test]
    fn shoulders_saturate() {
        let left = MembershipFunction::OpenLeft { c: 1.0, d: 2.0 };
        assert_eq!(left.degree(-1e9), 1.0);
        assert_eq!(left.degree(1.5), 0.5);
        assert_eq!(left.degree(2.0), 0.0);
        let right = MembershipFunction::OpenRight { a: 1.0, b: 2.0 };
        assert_eq!(right.degree(1e9), 1.0);
        assert_eq!(right.degree(1.25), 0.25);
    }

    #[test]
    fn degenerate_edges_are_plateau() {
        let tri = MembershipFunction::Triangle { a: 0.0, b: 0.0, c: 0.75 };
        assert_eq!(tri.degree(0.0), 1.0);
        assert!((tri.degree(0.375) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_decreasing_breakpoints() {
        let bad = MembershipFunction::Trapezoid { a: 0.0, b: 2.0, c: 1.0, d: 3.0 };
        assert!(bad.validate().is_err());
        assert!(TRAP.validate().is_ok());
    }

    proptest! {
        #[test]
        fn degree_in_unit_interval(mut bp in prop::array::uniform4(-10.0f64..10.0), x in -20.0f64..20.0) {
            bp.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mf = MembershipFunction::Trapezoid { a: bp[0], b: bp[1], c: bp[2], d: bp[3] };
            let v = mf.degree(x);
            prop_assert!((0.0..=1.0).contains(&v));
            if x >= bp[1] && x <= bp[2] { prop_assert_eq!(v, 1.0); }
            if x < bp[0] || x > bp[3] { prop_assert_eq!(v, 0.0); }
        }
    }
}
