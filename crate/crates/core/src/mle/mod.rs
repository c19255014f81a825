//! Constrained maximum-likelihood estimates (p̃₁D, p̃₂D) under
//! p̃₁D − p̃₂D = s₀.
//!
//! Data with a sample proportion at exactly 0 or 1, and the zero margin, are
//! dispatched to closed forms obtained by factoring the score cubic. Every
//! other input goes through [`solve_cubic_three_real`]; all three roots are
//! filtered to the feasible interval and the survivor with the largest
//! log-likelihood wins. No particular trigonometric branch is trusted.

mod cubic;
mod oracle;

use serde::Serialize;

use crate::counts::{ArmExtreme, Margin, TrialCounts};
use crate::error::{Error, Result};

pub use cubic::{cubic_coefficients, solve_cubic_three_real, CubicCoefficients, ACOS_CLAMP_MARGIN};
pub use oracle::brute_force_mle;

/// Distance outside the feasible interval still accepted for a cubic root.
pub const FEASIBILITY_TOL: f64 = 1e-12;

/// Which formula produced a [`ConstrainedMle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CaseTag {
    General,
    BothOnes,
    BothZeros,
    ZeroOne,
    OneZero,
    ZeroMargin,
}

impl CaseTag {
    pub const ALL: [CaseTag; 6] = [
        CaseTag::General,
        CaseTag::BothOnes,
        CaseTag::BothZeros,
        CaseTag::ZeroOne,
        CaseTag::OneZero,
        CaseTag::ZeroMargin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::General => "General",
            CaseTag::BothOnes => "BothOnes",
            CaseTag::BothZeros => "BothZeros",
            CaseTag::ZeroOne => "ZeroOne",
            CaseTag::OneZero => "OneZero",
            CaseTag::ZeroMargin => "ZeroMargin",
        }
    }

    /// The dispatch decision for `counts` and `margin`, on integer counts only.
    pub fn classify(counts: &TrialCounts, margin: Margin) -> CaseTag {
        use ArmExtreme::*;
        if margin.value() == 0.0 {
            return CaseTag::ZeroMargin;
        }
        match (counts.arm1(), counts.arm2()) {
            (One, One) => CaseTag::BothOnes,
            (Zero, Zero) => CaseTag::BothZeros,
            (Zero, One) => CaseTag::ZeroOne,
            (One, Zero) => CaseTag::OneZero,
            _ => CaseTag::General,
        }
    }
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstrainedMle {
    pub p1d: f64,
    pub p2d: f64,
    pub q1d: f64,
    pub q2d: f64,
    pub case: CaseTag,
}

impl ConstrainedMle {
    /// Completes an estimate from p̃₁D, clamping it into the feasible
    /// interval so that p̃₂D = p̃₁D − s₀ is a proportion.
    pub fn from_p1d(p1d: f64, margin: Margin, case: CaseTag) -> Self {
        let (lower, upper) = feasible_interval(margin);
        let p1d = p1d.clamp(lower, upper);
        let p2d = (p1d - margin.value()).clamp(0.0, 1.0);
        Self {
            p1d,
            p2d,
            q1d: 1.0 - p1d,
            q2d: 1.0 - p2d,
            case,
        }
    }
}

/// Range of p̃₁D keeping both estimates in [0, 1]: [max(0, s₀), min(1, 1 + s₀)].
pub fn feasible_interval(margin: Margin) -> (f64, f64) {
    let s0 = margin.value();
    (s0.max(0.0), (1.0 + s0).min(1.0))
}

/// Log-likelihood of the two binomial arms at p₁ = `p1d`, p₂ = `p1d` − s₀.
///
/// Uses 0·ln 0 = 0, and returns −∞ where a positive count meets a zero
/// probability.
pub fn constrained_log_likelihood(counts: &TrialCounts, p1d: f64, margin: Margin) -> f64 {
    let p2d = p1d - margin.value();
    xlogy(counts.r1(), p1d)
        + xlogy(counts.n1() - counts.r1(), 1.0 - p1d)
        + xlogy(counts.r2(), p2d)
        + xlogy(counts.n2() - counts.r2(), 1.0 - p2d)
}

fn xlogy(k: u64, p: f64) -> f64 {
    if k == 0 {
        0.0
    } else if p <= 0.0 {
        f64::NEG_INFINITY
    } else {
        k as f64 * p.ln()
    }
}

pub fn constrained_mle(counts: &TrialCounts, margin: Margin) -> Result<ConstrainedMle> {
    let theta = counts.proportions().theta;
    Ok(match CaseTag::classify(counts, margin) {
        CaseTag::ZeroMargin => mle_zero_margin(counts),
        CaseTag::BothOnes => mle_both_ones(theta, margin),
        CaseTag::BothZeros => mle_both_zeros(theta, margin),
        CaseTag::ZeroOne => mle_zero_one(theta, margin),
        CaseTag::OneZero => mle_one_zero(theta, margin),
        CaseTag::General => return mle_general(counts, margin),
    })
}

/// The cubic-root path with no closed-form dispatch.
///
/// Valid for any input, although at s₀ = 0 or at extreme data the closed
/// forms are exact where this is only accurate to rounding.
pub fn mle_general(counts: &TrialCounts, margin: Margin) -> Result<ConstrainedMle> {
    let coeffs = cubic_coefficients(&counts.proportions(), margin);
    let roots = solve_cubic_three_real(&coeffs)?;
    let (lower, upper) = feasible_interval(margin);

    let mut best: Option<(f64, f64)> = None;
    for root in roots {
        if root < lower - FEASIBILITY_TOL || root > upper + FEASIBILITY_TOL {
            continue;
        }
        let x = root.clamp(lower, upper);
        let ll = constrained_log_likelihood(counts, x, margin);
        if best.is_none_or(|(_, best_ll)| ll > best_ll) {
            best = Some((x, ll));
        }
    }

    match best {
        Some((p1d, _)) => Ok(ConstrainedMle::from_p1d(p1d, margin, CaseTag::General)),
        None => Err(Error::NoFeasibleRoot {
            roots,
            lower,
            upper,
        }),
    }
}

/// p̂₁ = p̂₂ = 1: one estimate sits at 1, the other at 1 − |s₀|.
pub fn mle_both_ones(_theta: f64, margin: Margin) -> ConstrainedMle {
    let s0 = margin.value();
    let p1d = if s0 > 0.0 { 1.0 } else { 1.0 + s0 };
    ConstrainedMle::from_p1d(p1d, margin, CaseTag::BothOnes)
}

/// p̂₁ = p̂₂ = 0: one estimate sits at 0, the other at |s₀|.
pub fn mle_both_zeros(_theta: f64, margin: Margin) -> ConstrainedMle {
    let s0 = margin.value();
    let p1d = if s0 > 0.0 { s0 } else { 0.0 };
    ConstrainedMle::from_p1d(p1d, margin, CaseTag::BothZeros)
}

/// p̂₁ = 0, p̂₂ = 1. Roots of x(x − (1 + s₀))((1 + θ)x − (θ + s₀)); the
/// interior one maximizes the likelihood while θ + s₀ > 0.
pub fn mle_zero_one(theta: f64, margin: Margin) -> ConstrainedMle {
    let s0 = margin.value();
    let p1d = if theta + s0 > 0.0 {
        (theta + s0) / (1.0 + theta)
    } else {
        0.0
    };
    ConstrainedMle::from_p1d(p1d, margin, CaseTag::ZeroOne)
}

/// p̂₁ = 1, p̂₂ = 0. Roots of (x − 1)(x − s₀)((1 + θ)x − (1 + s₀)).
///
/// For 1 − s₀θ > 0 the middle root is the estimate. Otherwise the feasible
/// roots are compared on the likelihood, which is N₁[ln p̃₁D + θ ln(1 − p̃₂D)]
/// for this data.
pub fn mle_one_zero(theta: f64, margin: Margin) -> ConstrainedMle {
    let s0 = margin.value();
    if 1.0 - s0 * theta > 0.0 {
        let p1d = (1.0 + s0) / (1.0 + theta);
        return ConstrainedMle::from_p1d(p1d, margin, CaseTag::OneZero);
    }

    let (lower, upper) = feasible_interval(margin);
    let per_n1 = |p1d: f64| xlogy(1, p1d) + theta * ln_or_neg_inf(1.0 - (p1d - s0));
    let p1d = [s0, (1.0 + s0) / (1.0 + theta), 1.0]
        .into_iter()
        .filter(|x| (lower..=upper).contains(x))
        .map(|x| (x, per_n1(x)))
        .fold((lower, f64::NEG_INFINITY), |best, cand| {
            if cand.1 > best.1 {
                cand
            } else {
                best
            }
        })
        .0;
    ConstrainedMle::from_p1d(p1d, margin, CaseTag::OneZero)
}

fn ln_or_neg_inf(p: f64) -> f64 {
    if p <= 0.0 {
        f64::NEG_INFINITY
    } else {
        p.ln()
    }
}

/// s₀ = 0: both estimates equal the pooled proportion (r₁ + r₂)/(N₁ + N₂).
pub fn mle_zero_margin(counts: &TrialCounts) -> ConstrainedMle {
    let pooled = (counts.r1() + counts.r2()) as f64 / (counts.n1() + counts.n2()) as f64;
    ConstrainedMle {
        p1d: pooled,
        p2d: pooled,
        q1d: 1.0 - pooled,
        q2d: 1.0 - pooled,
        case: CaseTag::ZeroMargin,
    }
}

#[cfg(test)]
mod tests;
