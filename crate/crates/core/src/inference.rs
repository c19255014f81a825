//! Null variance, the score z statistic and its p-values.

use serde::{Deserialize, Serialize};

use crate::counts::{Margin, TrialCounts};
use crate::error::{Error, Result};
use crate::mle::{constrained_mle, ConstrainedMle};
use crate::normal::normal_cdf;

/// Direction of the alternative hypothesis relative to p₁ − p₂ = s₀.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Alternative {
    /// p₁ − p₂ ≠ s₀
    TwoSided,
    /// p₁ − p₂ > s₀
    Greater,
    /// p₁ − p₂ < s₀
    Less,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestResult {
    pub z: f64,
    pub v0: f64,
    /// P(Z ≤ z)
    pub p_lower: f64,
    /// P(Z ≥ z)
    pub p_upper: f64,
    pub p_two_sided: f64,
    pub mle: ConstrainedMle,
}

impl TestResult {
    pub fn p_value(&self, alternative: Alternative) -> f64 {
        match alternative {
            Alternative::TwoSided => self.p_two_sided,
            Alternative::Greater => self.p_upper,
            Alternative::Less => self.p_lower,
        }
    }

    /// Whether the null is rejected at significance `alpha`.
    pub fn rejects(&self, alternative: Alternative, alpha: f64) -> bool {
        self.p_value(alternative) < alpha
    }
}

/// p̃₁D q̃₁D / N₁ + p̃₂D q̃₂D / N₂
pub fn null_variance(mle: &ConstrainedMle, counts: &TrialCounts) -> f64 {
    mle.p1d * mle.q1d / counts.n1() as f64 + mle.p2d * mle.q2d / counts.n2() as f64
}

/// Score test of p₁ − p₂ = s₀.
///
/// z = (p̂₁ − p̂₂ − s₀)/√v̂₀ with v̂₀ evaluated at the constrained estimate.
/// A zero variance with a zero numerator gives z = 0; a zero variance with
/// a nonzero numerator is [`Error::DegenerateVariance`].
pub fn z_statistic(counts: &TrialCounts, margin: Margin) -> Result<TestResult> {
    let (z, v0, mle) = z_only(counts, margin)?;
    let p_lower = normal_cdf(z);
    let p_upper = normal_cdf(-z);
    Ok(TestResult {
        z,
        v0,
        p_lower,
        p_upper,
        p_two_sided: (2.0 * p_lower.min(p_upper)).min(1.0),
        mle,
    })
}

/// z, v̂₀ and the constrained estimate, without p-values.
pub(crate) fn z_only(counts: &TrialCounts, margin: Margin) -> Result<(f64, f64, ConstrainedMle)> {
    let mle = constrained_mle(counts, margin)?;
    let v0 = null_variance(&mle, counts);
    let numerator = counts.observed_difference() - margin.value();
    let z = if v0 > 0.0 {
        numerator / v0.sqrt()
    } else if numerator == 0.0 {
        0.0
    } else {
        return Err(Error::DegenerateVariance { numerator });
    };
    Ok((z, v0, mle))
}

/// Pearson X² of the 2×2 responders-by-group table, no continuity
/// correction.
pub fn chi_squared_stat(counts: &TrialCounts) -> Result<f64> {
    let (r1, n1, r2, n2) = (
        counts.r1() as f64,
        counts.n1() as f64,
        counts.r2() as f64,
        counts.n2() as f64,
    );
    let total = n1 + n2;
    let responders = r1 + r2;
    let non_responders = total - responders;
    if responders == 0.0 || non_responders == 0.0 {
        return Err(Error::DegenerateTable);
    }
    let cells = [
        (r1, n1 * responders),
        (n1 - r1, n1 * non_responders),
        (r2, n2 * responders),
        (n2 - r2, n2 * non_responders),
    ];
    Ok(cells
        .iter()
        .map(|&(observed, margin_product)| {
            let expected = margin_product / total;
            (observed - expected).powi(2) / expected
        })
        .sum())
}
