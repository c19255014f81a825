use crate::counts::{Margin, TrialCounts};

use super::{constrained_log_likelihood, feasible_interval, CaseTag, ConstrainedMle};

const BRACKET_WIDTH: f64 = 1e-12;

/// Grid-search maximizer of the constrained likelihood, independent of the
/// cubic.
///
/// Scans `grid_points` evenly spaced values of p̃₁D over the feasible
/// interval, then shrinks the bracket around the best grid point by the sign
/// of the score (the derivative of the log-likelihood) until it is narrower
/// than 1e−12. The log-likelihood is concave in p̃₁D, so the bracket always
/// holds the maximizer.
pub fn brute_force_mle(counts: &TrialCounts, margin: Margin, grid_points: usize) -> ConstrainedMle {
    assert!(grid_points >= 3, "grid needs at least 3 points");
    let (lower, upper) = feasible_interval(margin);
    let ll = |x: f64| constrained_log_likelihood(counts, x, margin);
    let step = (upper - lower) / (grid_points - 1) as f64;
    let at = |i: usize| {
        if i + 1 == grid_points {
            upper
        } else {
            lower + step * i as f64
        }
    };

    let mut best_i = 0;
    let mut best_ll = f64::NEG_INFINITY;
    for i in 0..grid_points {
        let v = ll(at(i));
        if v > best_ll {
            best_i = i;
            best_ll = v;
        }
    }

    let mut lo = at(best_i.saturating_sub(1));
    let mut hi = at((best_i + 1).min(grid_points - 1));
    while hi - lo > BRACKET_WIDTH {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if score(counts, mid, margin.value()) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let p1d = [0.5 * (lo + hi), lo, hi, lower, upper]
        .into_iter()
        .map(|x| (x, ll(x)))
        .fold((lower, f64::NEG_INFINITY), |best, cand| {
            if cand.1 > best.1 {
                cand
            } else {
                best
            }
        })
        .0;
    ConstrainedMle::from_p1d(p1d, margin, CaseTag::classify(counts, margin))
}

fn score(counts: &TrialCounts, p1d: f64, s0: f64) -> f64 {
    let ratio = |k: u64, p: f64| if k == 0 { 0.0 } else { k as f64 / p };
    let p2d = p1d - s0;
    ratio(counts.r1(), p1d) - ratio(counts.n1() - counts.r1(), 1.0 - p1d) + ratio(counts.r2(), p2d)
        - ratio(counts.n2() - counts.r2(), 1.0 - p2d)
}
