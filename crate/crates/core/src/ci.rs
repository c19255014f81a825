//! Confidence intervals for p₁ − p₂ by inverting the two-sided score test.
//!
//! The interval is {s₀ : |z(s₀)| ≤ z_α}. Both-ones and both-zeros data have
//! a closed form. When one arm is all-zero and the other all-one, the
//! observed difference ±1 is itself an endpoint. Everything else is found
//! by bisection, starting from the observed difference (where z = 0) and
//! searching outward toward ±1.

use serde::Serialize;

use crate::counts::{ArmExtreme, Margin, TrialCounts};
use crate::error::{Error, Result};
use crate::inference::z_only;
use crate::normal::normal_quantile;

/// Initial distance of the outer bracket end from ±1.
pub const BRACKET_EPS: f64 = 1e-9;
const BRACKET_EPS_FLOOR: f64 = 1e-15;
const MAX_BISECTIONS: usize = 200;
const WIDTH_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum EndpointMethod {
    ClosedForm,
    Bisection,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub method_lower: EndpointMethod,
    pub method_upper: EndpointMethod,
}

impl ConfidenceInterval {
    pub fn contains(&self, difference: f64) -> bool {
        self.lower <= difference && difference <= self.upper
    }
}

/// Two-sided critical value Φ⁻¹(1 − (1 − level)/2).
pub fn critical_value(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidLevel(level));
    }
    normal_quantile(0.5 * (1.0 + level))
}

/// Closed-form interval for data with both proportions at 1 (or both at 0).
///
/// Both ones: (−z²/(N₁ + z²), z²/(N₂ + z²)). Both zeros is the mirror image
/// with the group sizes exchanged.
pub fn ci_both_extreme_closed_form(counts: &TrialCounts, level: f64) -> Result<ConfidenceInterval> {
    let z2 = critical_value(level)?.powi(2);
    let (n_low, n_high) = match (counts.arm1(), counts.arm2()) {
        (ArmExtreme::One, ArmExtreme::One) => (counts.n1(), counts.n2()),
        (ArmExtreme::Zero, ArmExtreme::Zero) => (counts.n2(), counts.n1()),
        _ => return Err(Error::WrongCase),
    };
    Ok(ConfidenceInterval {
        lower: -z2 / (n_low as f64 + z2),
        upper: z2 / (n_high as f64 + z2),
        level,
        method_lower: EndpointMethod::ClosedForm,
        method_upper: EndpointMethod::ClosedForm,
    })
}

pub fn confidence_interval(counts: &TrialCounts, level: f64) -> Result<ConfidenceInterval> {
    use ArmExtreme::*;
    let z_crit = critical_value(level)?;
    let estimate = counts.observed_difference();

    let (lower, method_lower, upper, method_upper) = match (counts.arm1(), counts.arm2()) {
        (One, One) | (Zero, Zero) => return ci_both_extreme_closed_form(counts, level),
        (Zero, One) => (
            -1.0,
            EndpointMethod::Boundary,
            upper_limit(counts, estimate, z_crit)?,
            EndpointMethod::Bisection,
        ),
        (One, Zero) => (
            lower_limit(counts, estimate, z_crit)?,
            EndpointMethod::Bisection,
            1.0,
            EndpointMethod::Boundary,
        ),
        _ => (
            lower_limit(counts, estimate, z_crit)?,
            EndpointMethod::Bisection,
            upper_limit(counts, estimate, z_crit)?,
            EndpointMethod::Bisection,
        ),
    };
    Ok(ConfidenceInterval {
        lower,
        upper,
        level,
        method_lower,
        method_upper,
    })
}

/// z at margin `s0`, with a degenerate variance read as ±∞.
pub(crate) fn inverted_z(counts: &TrialCounts, s0: f64) -> Result<f64> {
    match z_only(counts, Margin::new(s0)?) {
        Ok((z, _, _)) => Ok(z),
        Err(Error::DegenerateVariance { numerator }) => Ok(f64::INFINITY.copysign(numerator)),
        Err(e) => Err(e),
    }
}

// z decreases through −z_crit somewhere in (estimate, 1).
fn upper_limit(counts: &TrialCounts, estimate: f64, z_crit: f64) -> Result<f64> {
    let g = |s: f64| inverted_z(counts, s).map(|z| z + z_crit);
    let outer = find_outer_end(estimate, 1.0, |s| Ok(g(s)? < 0.0))?;
    bisect(g, estimate, outer)
}

// z increases through +z_crit somewhere in (−1, estimate).
fn lower_limit(counts: &TrialCounts, estimate: f64, z_crit: f64) -> Result<f64> {
    let h = |s: f64| inverted_z(counts, s).map(|z| z - z_crit);
    let outer = find_outer_end(estimate, -1.0, |s| Ok(h(s)? > 0.0))?;
    bisect(h, outer, estimate)
}

/// Walks the outer end from `limit ∓ 1e−9` toward `limit` in decades until
/// `crossed` holds there.
fn find_outer_end(
    estimate: f64,
    limit: f64,
    mut crossed: impl FnMut(f64) -> Result<bool>,
) -> Result<f64> {
    let mut eps = BRACKET_EPS;
    let mut outer = limit - eps.copysign(limit);
    while eps >= BRACKET_EPS_FLOOR {
        outer = limit - eps.copysign(limit);
        if (outer - estimate) * limit > 0.0 && crossed(outer)? {
            return Ok(outer);
        }
        eps /= 100.0;
    }
    let (lower, upper) = if limit > 0.0 {
        (estimate, outer)
    } else {
        (outer, estimate)
    };
    Err(Error::BracketingFailure { lower, upper })
}

/// Bisection for a root of `f` between `positive` (where f > 0) and
/// `negative` (where f < 0); the end values themselves are never evaluated.
pub fn bisect(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut positive: f64,
    mut negative: f64,
) -> Result<f64> {
    for _ in 0..MAX_BISECTIONS {
        if (positive - negative).abs() <= WIDTH_TOL {
            break;
        }
        let mid = 0.5 * (positive + negative);
        if mid == positive || mid == negative {
            break;
        }
        let v = f(mid)?;
        if v > 0.0 {
            positive = mid;
        } else if v < 0.0 {
            negative = mid;
        } else {
            return Ok(mid);
        }
    }
    Ok(0.5 * (positive + negative))
}
