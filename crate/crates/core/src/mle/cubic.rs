//! The cubic score equation for the constrained estimate p̃₁D and its
//! trigonometric three-real-root solution.

use std::f64::consts::PI;

use num_traits::Num;

use crate::counts::{Margin, Proportions};
use crate::error::{Error, Result};

/// Arc-cosine arguments this far outside [−1, 1] are treated as rounding.
pub const ACOS_CLAMP_MARGIN: f64 = 1e-10;

// Depressed-cubic coefficients below this size mean a triple root.
const TRIPLE_ROOT_TOL: f64 = 1e-14;

/// Coefficients of `a x³ + b x² + c x + d`.
///
/// Generic so the same expressions can be evaluated in exact rational
/// arithmetic as well as in `f64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CubicCoefficients<T = f64> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Num + Clone> CubicCoefficients<T> {
    /// Builds the score-equation cubic from p̂₁, p̂₂, θ and s₀.
    pub fn from_parts(p_hat1: T, p_hat2: T, theta: T, s0: T) -> Self {
        let one = T::one();
        let two = one.clone() + one.clone();
        let a = one.clone() + theta.clone();
        let b = T::zero()
            - (one.clone()
                + theta.clone()
                + p_hat1.clone()
                + theta.clone() * p_hat2.clone()
                + s0.clone() * (theta.clone() + two.clone()));
        let c = s0.clone() * s0.clone()
            + s0.clone() * (two * p_hat1.clone() + theta.clone() + one.clone())
            + p_hat1.clone()
            + theta * p_hat2;
        let d = T::zero() - p_hat1 * s0.clone() * (one + s0);
        Self { a, b, c, d }
    }

    pub fn eval(&self, x: T) -> T {
        ((self.a.clone() * x.clone() + self.b.clone()) * x.clone() + self.c.clone()) * x
            + self.d.clone()
    }

    pub fn scaled(&self, k: T) -> Self {
        Self {
            a: self.a.clone() * k.clone(),
            b: self.b.clone() * k.clone(),
            c: self.c.clone() * k.clone(),
            d: self.d.clone() * k,
        }
    }
}

impl CubicCoefficients<f64> {
    fn derivative(&self, x: f64) -> f64 {
        (3.0 * self.a * x + 2.0 * self.b) * x + self.c
    }
}

pub fn cubic_coefficients(props: &Proportions, margin: Margin) -> CubicCoefficients {
    CubicCoefficients::from_parts(props.p_hat1, props.p_hat2, props.theta, margin.value())
}

/// All three real roots of a cubic known to have them, in nondecreasing
/// order.
///
/// Uses the trigonometric form on the depressed cubic. The arc-cosine
/// argument is clamped to [−1, 1] when it overshoots by at most
/// [`ACOS_CLAMP_MARGIN`]; a larger overshoot means the cubic has complex
/// roots and is reported as [`Error::NotThreeRealRoots`]. Each root gets a
/// few guarded Newton steps on the original polynomial.
// NaN must fail the negated comparisons below.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn solve_cubic_three_real(coeffs: &CubicCoefficients) -> Result<[f64; 3]> {
    let CubicCoefficients { a, b, c, d } = *coeffs;
    let (b, c, d) = (b / a, c / a, d / a);
    let shift = b / 3.0;
    // x = t - shift turns the monic cubic into t³ + p t + q
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

    let mut roots = if p.abs() <= TRIPLE_ROOT_TOL && q.abs() <= TRIPLE_ROOT_TOL {
        [-shift; 3]
    } else if p >= 0.0 {
        return Err(Error::NotThreeRealRoots {
            argument: f64::INFINITY,
        });
    } else {
        let argument = 1.5 * q / p * (-3.0 / p).sqrt();
        if !(argument.abs() <= 1.0 + ACOS_CLAMP_MARGIN) {
            return Err(Error::NotThreeRealRoots { argument });
        }
        let phi = argument.clamp(-1.0, 1.0).acos() / 3.0;
        let m = 2.0 * (-p / 3.0).sqrt();
        [0.0, 1.0, 2.0].map(|k| m * (phi - 2.0 * PI * k / 3.0).cos() - shift)
    };

    for r in roots.iter_mut() {
        *r = polish(coeffs, *r);
    }
    roots.sort_by(f64::total_cmp);
    snap_double_roots(coeffs, &mut roots);
    Ok(roots)
}

// Separation below which two roots are treated as one double root.
const DOUBLE_ROOT_GAP: f64 = 1e-6;

/// A double root is only found to about √ε from the cubic itself, but it is
/// also a simple root of the derivative. Adjacent roots closer than
/// [`DOUBLE_ROOT_GAP`] are replaced by the nearby stationary point when the
/// cubic is no larger there.
fn snap_double_roots(coeffs: &CubicCoefficients, roots: &mut [f64; 3]) {
    for i in 0..2 {
        let (x, y) = (roots[i], roots[i + 1]);
        if y - x > DOUBLE_ROOT_GAP * x.abs().max(1.0) {
            continue;
        }
        let mid = 0.5 * (x + y);
        let Some(stationary) = stationary_points(coeffs)
            .into_iter()
            .min_by(|p, q| (p - mid).abs().total_cmp(&(q - mid).abs()))
        else {
            continue;
        };
        let residual = coeffs.eval(stationary).abs();
        if (stationary - mid).abs() <= DOUBLE_ROOT_GAP * mid.abs().max(1.0)
            && residual <= coeffs.eval(x).abs().max(coeffs.eval(y).abs())
        {
            roots[i] = stationary;
            roots[i + 1] = stationary;
        }
    }
}

/// Real roots of 3a x² + 2b x + c, by the cancellation-free quadratic formula.
fn stationary_points(coeffs: &CubicCoefficients) -> Vec<f64> {
    let (qa, qb, qc) = (3.0 * coeffs.a, 2.0 * coeffs.b, coeffs.c);
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        // a double root makes this vanish exactly; rounding may push it negative
        return vec![-qb / (2.0 * qa)];
    }
    let t = -0.5 * (qb + disc.sqrt().copysign(qb));
    if t == 0.0 {
        return vec![0.0];
    }
    vec![t / qa, qc / t]
}

#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn polish(coeffs: &CubicCoefficients, mut x: f64) -> f64 {
    let mut fx = coeffs.eval(x);
    for _ in 0..4 {
        let slope = coeffs.derivative(x);
        if fx == 0.0 || slope == 0.0 {
            break;
        }
        let next = x - fx / slope;
        let f_next = coeffs.eval(next);
        if !(f_next.abs() < fx.abs()) {
            break;
        }
        x = next;
        fx = f_next;
    }
    x
}
