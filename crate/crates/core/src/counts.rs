//! Observed two-arm data, sample proportions and the null margin.

use serde::Serialize;

use crate::error::{Error, Result};

/// Responders and group sizes of a two-arm binomial trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TrialCounts {
    r1: u64,
    n1: u64,
    r2: u64,
    n2: u64,
}

impl TrialCounts {
    pub fn new(r1: u64, n1: u64, r2: u64, n2: u64) -> Result<Self> {
        let invalid = |reason| Error::InvalidCounts {
            r1,
            n1,
            r2,
            n2,
            reason,
        };
        if n1 == 0 || n2 == 0 {
            return Err(invalid("group sizes must be at least 1"));
        }
        if r1 > n1 || r2 > n2 {
            return Err(invalid("responders exceed group size"));
        }
        Ok(Self { r1, n1, r2, n2 })
    }

    pub fn r1(&self) -> u64 {
        self.r1
    }

    pub fn n1(&self) -> u64 {
        self.n1
    }

    pub fn r2(&self) -> u64 {
        self.r2
    }

    pub fn n2(&self) -> u64 {
        self.n2
    }

    pub fn proportions(&self) -> Proportions {
        derive_proportions(self)
    }

    /// Observed difference p̂₁ − p̂₂.
    pub fn observed_difference(&self) -> f64 {
        let p = self.proportions();
        p.p_hat1 - p.p_hat2
    }

    /// The same trial with the arms exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            r1: self.r2,
            n1: self.n2,
            r2: self.r1,
            n2: self.n1,
        }
    }

    pub(crate) fn arm1(&self) -> ArmExtreme {
        ArmExtreme::of(self.r1, self.n1)
    }

    pub(crate) fn arm2(&self) -> ArmExtreme {
        ArmExtreme::of(self.r2, self.n2)
    }
}

/// Where a sample proportion sits, decided on the integer counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ArmExtreme {
    Zero,
    Interior,
    One,
}

impl ArmExtreme {
    fn of(r: u64, n: u64) -> Self {
        if r == 0 {
            ArmExtreme::Zero
        } else if r == n {
            ArmExtreme::One
        } else {
            ArmExtreme::Interior
        }
    }
}

/// Checks raw counts and builds a [`TrialCounts`].
pub fn validate_counts(r1: u64, n1: u64, r2: u64, n2: u64) -> Result<TrialCounts> {
    TrialCounts::new(r1, n1, r2, n2)
}

/// Sample proportions and the group-size ratio θ = N₂/N₁.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Proportions {
    pub p_hat1: f64,
    pub p_hat2: f64,
    pub theta: f64,
}

pub fn derive_proportions(counts: &TrialCounts) -> Proportions {
    Proportions {
        p_hat1: counts.r1 as f64 / counts.n1 as f64,
        p_hat2: counts.r2 as f64 / counts.n2 as f64,
        theta: counts.n2 as f64 / counts.n1 as f64,
    }
}

/// Null-hypothesis difference s₀ = p₁ − p₂, restricted to (−1, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Margin(f64);

impl Margin {
    pub fn new(s0: f64) -> Result<Self> {
        if s0.is_finite() && s0 > -1.0 && s0 < 1.0 {
            Ok(Margin(s0))
        } else {
            Err(Error::InvalidMargin(s0))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn negated(self) -> Self {
        Margin(-self.0)
    }
}

impl TryFrom<f64> for Margin {
    type Error = Error;

    fn try_from(s0: f64) -> Result<Self> {
        Margin::new(s0)
    }
}
