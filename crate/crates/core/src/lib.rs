//! Farrington-Manning score test for the difference of two independent
//! binomial proportions.
//!
//! The constrained maximum-likelihood estimates behind the null variance come
//! from a cubic equation. That cubic degenerates whenever an observed
//! proportion is exactly 0 or 1, which is where most implementations break
//! down. This crate dispatches those cases to their closed-form solutions,
//! solves the general case with a clamped trigonometric cubic formula, and
//! selects among candidate roots by evaluating the likelihood.
//!
//! On top of the test itself it provides confidence intervals by test
//! inversion and a reproducible Monte Carlo simulator for operating
//! characteristics.
//!
//! ```
//! use fm_score::{confidence_interval, z_statistic, CaseTag, Margin, TrialCounts};
//!
//! let counts = TrialCounts::new(20, 20, 20, 20).unwrap();
//! let result = z_statistic(&counts, Margin::new(0.2).unwrap()).unwrap();
//! assert_eq!(result.mle.case, CaseTag::BothOnes);
//! assert!((result.z + (20.0f64 * 0.2 / 0.8).sqrt()).abs() < 1e-12);
//!
//! let ci = confidence_interval(&counts, 0.95).unwrap();
//! assert!(ci.lower < 0.0 && ci.upper > 0.0);
//! ```

pub mod ci;
pub mod cli;
pub mod counts;
pub mod error;
pub mod inference;
pub mod mle;
pub mod normal;
pub mod sim;

pub use ci::{
    ci_both_extreme_closed_form, confidence_interval, ConfidenceInterval, EndpointMethod,
};
pub use counts::{derive_proportions, validate_counts, Margin, Proportions, TrialCounts};
pub use error::{Error, Result};
pub use inference::{chi_squared_stat, null_variance, z_statistic, Alternative, TestResult};
pub use mle::{
    brute_force_mle, constrained_log_likelihood, constrained_mle, cubic_coefficients,
    solve_cubic_three_real, CaseTag, ConstrainedMle, CubicCoefficients,
};
pub use normal::{normal_cdf, normal_quantile};
pub use sim::{binomial_draw, simulate, SimConfig, SimResult};
