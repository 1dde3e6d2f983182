//! Approximation and dimension functions.

use serde::{Deserialize, Serialize};

/// A decreasing approximation function psi: R+ -> R+.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum ApproximationFunction {
    /// psi(t) = c * t^(-tau).
    Power { c: f64, tau: f64 },
    /// psi(t) = t^(-tau) (ln t)^(-(1+eps) tau / 2); defined for t > 1,
    /// +infinity below.
    PowerLog { tau: f64, eps: f64 },
    /// psi(t) = t^(-2) phi(ln t / a) for phi(u) = u^(-p): the change of
    /// variable linking a systole excursion rate to an approximation
    /// function. Defined for t > 1.
    Excursion { p: f64, a: f64 },
    /// Constant radius.
    Constant(f64),
    /// Piecewise-constant decreasing table (t_i ascending, value applies to
    /// t in [t_i, t_{i+1})); the last value extends to infinity.
    Table(Vec<(f64, f64)>),
}

impl ApproximationFunction {
    pub fn power(tau: f64) -> Self {
        ApproximationFunction::Power { c: 1.0, tau }
    }

    pub fn eval(&self, t: f64) -> f64 {
        assert!(t > 0.0, "approximation functions are defined on t > 0");
        match *self {
            ApproximationFunction::Power { c, tau } => c * t.powf(-tau),
            ApproximationFunction::PowerLog { tau, eps } => {
                if t <= 1.0 {
                    f64::INFINITY
                } else {
                    t.powf(-tau) * t.ln().powf(-(1.0 + eps) * tau / 2.0)
                }
            }
            ApproximationFunction::Excursion { p, a } => {
                if t <= 1.0 {
                    f64::INFINITY
                } else {
                    t.powi(-2) * (t.ln() / a).powf(-p)
                }
            }
            ApproximationFunction::Constant(c) => c,
            ApproximationFunction::Table(ref rows) => {
                let i = rows.partition_point(|r| r.0 <= t);
                if i == 0 {
                    f64::INFINITY
                } else {
                    rows[i - 1].1
                }
            }
        }
    }
}

/// A dimension function f: continuous increasing, with f(r)/r decreasing
/// and unbounded at 0 (power case), or the identity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum DimensionFunction {
    /// f(r) = r^s with 0 < s < 1.
    Power(f64),
    Identity,
}

impl DimensionFunction {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            DimensionFunction::Power(s) => r.powf(s),
            DimensionFunction::Identity => r,
        }
    }

    /// The exponent s with f = f_s (1 for the identity).
    pub fn exponent(&self) -> f64 {
        match *self {
            DimensionFunction::Power(s) => s,
            DimensionFunction::Identity => 1.0,
        }
    }

    /// f(r)/r grows without bound as r -> 0 (false for the identity).
    pub fn ratio_unbounded(&self) -> bool {
        matches!(self, DimensionFunction::Power(s) if *s < 1.0)
    }
}
