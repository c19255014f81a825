use super::*;
use crate::counts::validate_counts;
use num_rational::Ratio;
use proptest::prelude::*;

type Q = Ratio<i64>;

fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

fn margin(s0: f64) -> Margin {
    Margin::new(s0).unwrap()
}

fn counts(r1: u64, n1: u64, r2: u64, n2: u64) -> TrialCounts {
    validate_counts(r1, n1, r2, n2).unwrap()
}

fn assert_close(actual: f64, expected: f64, tol: f64) {
    assert!(
        (actual - expected).abs() <= tol,
        "{actual} differs from {expected} by more than {tol}"
    );
}

const THETAS: [(i64, i64); 5] = [(1, 4), (1, 2), (1, 1), (2, 1), (4, 1)];
const MARGINS: [(i64, i64); 8] = [
    (1, 10),
    (-1, 10),
    (3, 10),
    (-3, 10),
    (1, 2),
    (-1, 2),
    (4, 5),
    (-4, 5),
];

/// (x − r)(x − s)(m x − k) expanded into [x³, x², x, 1] coefficients.
fn expand(r: Q, s: Q, m: Q, k: Q) -> CubicCoefficients<Q> {
    // (x − r)(x − s) = x² − (r + s)x + rs
    let (u, v) = (-(r + s), r * s);
    CubicCoefficients {
        a: m,
        b: m * u - k,
        c: m * v - k * u,
        d: -k * v,
    }
}

#[test]
fn factored_forms_expand_to_the_score_cubic() {
    let one = q(1, 1);
    let zero = q(0, 1);
    for &(tn, td) in &THETAS {
        let theta = q(tn, td);
        for &(sn, sd) in &MARGINS {
            let s0 = q(sn, sd);
            // both ones: (x − 1)(x − (1 + s₀))((1 + θ)x − s₀)
            assert_eq!(
                CubicCoefficients::from_parts(one, one, theta, s0),
                expand(one, one + s0, one + theta, s0)
            );
            // both zeros: x(x − s₀)((1 + θ)x − (1 + θ + s₀))
            assert_eq!(
                CubicCoefficients::from_parts(zero, zero, theta, s0),
                expand(zero, s0, one + theta, one + theta + s0)
            );
            // zero/one: x(x − (1 + s₀))((1 + θ)x − (θ + s₀))
            assert_eq!(
                CubicCoefficients::from_parts(zero, one, theta, s0),
                expand(zero, one + s0, one + theta, theta + s0)
            );
            // one/zero: (x − 1)(x − s₀)((1 + θ)x − (1 + s₀))
            assert_eq!(
                CubicCoefficients::from_parts(one, zero, theta, s0),
                expand(one, s0, one + theta, one + s0)
            );
        }
        // zero margin with arbitrary proportions: x(x − 1)((1 + θ)x − (p̂₁ + θp̂₂))
        for (p1, p2) in [(q(1, 3), q(2, 7)), (q(0, 1), q(5, 9)), (q(1, 1), q(1, 2))] {
            assert_eq!(
                CubicCoefficients::from_parts(p1, p2, theta, zero),
                expand(zero, one, one + theta, p1 + theta * p2)
            );
        }
    }
}

#[test]
fn root_table_entries_solve_the_cubic() {
    for &(tn, td) in &THETAS {
        let theta = tn as f64 / td as f64;
        for &(sn, sd) in &MARGINS {
            let s0 = sn as f64 / sd as f64;
            let tables: [(f64, f64, [f64; 3]); 4] = [
                (1.0, 1.0, [1.0, 1.0 + s0, s0 / (1.0 + theta)]),
                (0.0, 0.0, [0.0, (1.0 + theta + s0) / (1.0 + theta), s0]),
                (0.0, 1.0, [0.0, (theta + s0) / (1.0 + theta), 1.0 + s0]),
                (1.0, 0.0, [s0, (1.0 + s0) / (1.0 + theta), 1.0]),
            ];
            for (p1, p2, roots) in tables {
                let k = CubicCoefficients::from_parts(p1, p2, theta, s0);
                for x in roots {
                    assert!(
                        k.eval(x).abs() <= 1e-12,
                        "p̂=({p1},{p2}) θ={theta} s₀={s0}: residual {} at {x}",
                        k.eval(x)
                    );
                }
            }
        }
    }
}

#[test]
fn dispatch_examples() {
    let m = constrained_mle(&counts(4, 4, 4, 4), margin(0.2)).unwrap();
    assert_eq!((m.p1d, m.case), (1.0, CaseTag::BothOnes));
    assert_close(m.p2d, 0.8, 1e-15);

    let m = constrained_mle(&counts(5, 10, 5, 10), margin(0.0)).unwrap();
    assert_eq!((m.p1d, m.p2d, m.case), (0.5, 0.5, CaseTag::ZeroMargin));

    let c = counts(30, 50, 20, 50);
    let m = constrained_mle(&c, margin(0.1)).unwrap();
    assert_eq!(m.case, CaseTag::General);
    let oracle = brute_force_mle(&c, margin(0.1), 1001);
    assert_close(m.p1d, oracle.p1d, 1e-6);
}

#[test]
fn both_ones_closed_form() {
    let m = mle_both_ones(1.0, margin(0.2));
    assert_eq!(m.p1d, 1.0);
    assert_close(m.p2d, 0.8, 1e-15);
    let m = mle_both_ones(2.0, margin(-0.3));
    assert_close(m.p1d, 0.7, 1e-15);
    assert_eq!(m.p2d, 1.0);
    assert_eq!(
        mle_both_ones(5.0, margin(0.2)),
        mle_both_ones(1.0, margin(0.2))
    );
}

#[test]
fn both_zeros_closed_form() {
    let m = mle_both_zeros(1.0, margin(0.2));
    assert_eq!((m.p1d, m.p2d), (0.2, 0.0));
    let m = mle_both_zeros(0.5, margin(-0.3));
    assert_eq!((m.p1d, m.p2d), (0.0, 0.3));
    assert_eq!(
        mle_both_zeros(3.0, margin(0.2)),
        mle_both_zeros(1.0, margin(0.2))
    );
}

#[test]
fn zero_one_closed_form() {
    let m = mle_zero_one(2.0, margin(0.5));
    assert_close(m.p1d, 5.0 / 6.0, 1e-15);
    assert_close(m.p2d, 1.0 / 3.0, 1e-15);
    // θ + s₀ = 0: double root at zero
    let m = mle_zero_one(0.5, margin(-0.5));
    assert_eq!((m.p1d, m.p2d), (0.0, 0.5));
    let m = mle_zero_one(0.5, margin(-0.8));
    assert_eq!((m.p1d, m.p2d), (0.0, 0.8));
}

#[test]
fn one_zero_closed_form() {
    let m = mle_one_zero(1.0, margin(0.5));
    assert_eq!((m.p1d, m.p2d), (0.75, 0.25));
    // 1 − s₀θ = 0: double root at s₀
    let m = mle_one_zero(2.0, margin(0.5));
    assert_eq!((m.p1d, m.p2d), (0.5, 0.0));
    // 1 − s₀θ < 0: the likelihood picks (s₀, 0), not the bullet's (0, −s₀)
    let m = mle_one_zero(4.0, margin(0.5));
    assert_eq!((m.p1d, m.p2d), (0.5, 0.0));
}

#[test]
fn one_zero_negative_branch_agrees_with_likelihood() {
    // N₂ = 4N₁ with s₀ = 0.5: compare the two feasible table columns directly
    let c = counts(10, 10, 0, 40);
    let s0 = margin(0.5);
    let at_s0 = constrained_log_likelihood(&c, 0.5, s0);
    let at_one = constrained_log_likelihood(&c, 1.0, s0);
    assert_close(at_s0, 10.0 * 0.5f64.ln(), 1e-12);
    assert_close(at_one, 40.0 * 0.5f64.ln(), 1e-12);
    assert!(at_s0 > at_one);
    let oracle = brute_force_mle(&c, s0, 501);
    assert_close(oracle.p1d, 0.5, 1e-9);
    assert_eq!(constrained_mle(&c, s0).unwrap().p1d, 0.5);
}

#[test]
fn zero_margin_pools_the_arms() {
    let m = mle_zero_margin(&counts(3, 10, 7, 10));
    assert_eq!((m.p1d, m.p2d), (0.5, 0.5));
    let m = mle_zero_margin(&counts(0, 10, 0, 20));
    assert_eq!((m.p1d, m.p2d), (0.0, 0.0));
    let m = mle_zero_margin(&counts(1, 3, 1, 2));
    assert_eq!((m.p1d, m.p2d), (0.4, 0.4));
}

#[test]
fn log_likelihood_values() {
    let ll = constrained_log_likelihood(&counts(50, 50, 50, 50), 1.0, margin(0.2));
    assert_close(ll, 50.0 * 0.8f64.ln(), 1e-12);
    assert_close(ll, -11.157177565710485, 1e-12);
    assert_eq!(
        constrained_log_likelihood(&counts(0, 10, 0, 10), 0.0, margin(0.0)),
        0.0
    );
    assert_eq!(
        constrained_log_likelihood(&counts(5, 10, 5, 10), 0.0, margin(0.2)),
        f64::NEG_INFINITY
    );
}

#[test]
fn oracle_examples() {
    let m = brute_force_mle(&counts(50, 50, 50, 50), margin(0.2), 101);
    assert_eq!(m.p1d, 1.0);
    assert_close(m.p2d, 0.8, 1e-15);

    // the irreducible cubic 20x³ − 44x² + 25x − 3
    let c = counts(10, 30, 10, 20);
    let oracle = brute_force_mle(&c, margin(0.5), 1001);
    let roots = solve_cubic_three_real(&CubicCoefficients {
        a: 20.0,
        b: -44.0,
        c: 25.0,
        d: -3.0,
    })
    .unwrap();
    let selected =
        roots
            .into_iter()
            .filter(|x| (0.5..=1.0).contains(x))
            .max_by(|x, y| {
                constrained_log_likelihood(&c, *x, margin(0.5))
                    .total_cmp(&constrained_log_likelihood(&c, *y, margin(0.5)))
            })
            .unwrap();
    assert_close(oracle.p1d, selected, 1e-8);
    assert_close(
        constrained_mle(&c, margin(0.5)).unwrap().p1d,
        selected,
        1e-12,
    );

    let m = brute_force_mle(&counts(0, 10, 10, 10), margin(0.5), 1001);
    assert_close(m.p1d, 0.75, 1e-9);
    assert_close(m.p2d, 0.25, 1e-9);
}

#[test]
fn zero_one_regression_through_dispatch() {
    let m = constrained_mle(&counts(0, 10, 20, 20), margin(0.5)).unwrap();
    assert_eq!(m.case, CaseTag::ZeroOne);
    assert_close(m.p1d, 5.0 / 6.0, 1e-12);
    assert_close(m.p2d, 1.0 / 3.0, 1e-12);
    // the undispatched path lands on the same point
    let g = mle_general(&counts(0, 10, 20, 20), margin(0.5)).unwrap();
    assert_close(g.p1d, 5.0 / 6.0, 1e-12);
}

#[test]
fn general_path_matches_closed_forms_at_the_boundary() {
    let cases = [
        (10, 10, 20, 20),
        (0, 10, 0, 20),
        (0, 10, 20, 20),
        (10, 10, 0, 20),
        (20, 20, 0, 5),
        (0, 40, 10, 10),
        (7, 7, 3, 3),
    ];
    for (r1, n1, r2, n2) in cases {
        let c = counts(r1, n1, r2, n2);
        for &(sn, sd) in &MARGINS {
            let s0 = margin(sn as f64 / sd as f64);
            let closed = constrained_mle(&c, s0).unwrap();
            if let Ok(general) = mle_general(&c, s0) {
                assert!(
                    (general.p1d - closed.p1d).abs() <= 1e-9,
                    "{c:?} s₀={s0:?}: general {} vs closed {}",
                    general.p1d,
                    closed.p1d
                );
            }
        }
    }
}

#[test]
fn general_path_converges_toward_the_closed_form() {
    // r₁ → n₁ with the other arm at 1
    let s0 = margin(0.2);
    let closed = constrained_mle(&counts(1000, 1000, 1000, 1000), s0)
        .unwrap()
        .p1d;
    let mut gaps = Vec::new();
    for n in [10u64, 100, 1000, 10000] {
        let general = constrained_mle(&counts(n - 1, n, n, n), s0).unwrap();
        assert_eq!(general.case, CaseTag::General);
        gaps.push((general.p1d - closed).abs());
    }
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps[3] < 1e-3);
}

fn arb_instance() -> impl Strategy<Value = (TrialCounts, Margin)> {
    (1u64..=500, 1u64..=500, -0.9f64..0.9)
        .prop_flat_map(|(n1, n2, s0)| (0..=n1, Just(n1), 0..=n2, Just(n2), Just(s0)))
        .prop_map(|(r1, n1, r2, n2, s0)| (counts(r1, n1, r2, n2), margin(s0)))
}

fn arb_extreme_instance() -> impl Strategy<Value = (TrialCounts, Margin)> {
    (1u64..=200, 1u64..=200, 0usize..4, -0.9f64..0.9).prop_map(|(n1, n2, which, s0)| {
        let (r1, r2) = [(0, 0), (0, n2), (n1, 0), (n1, n2)][which];
        (counts(r1, n1, r2, n2), margin(s0))
    })
}

proptest! {
    #[test]
    fn estimate_is_feasible((c, s0) in arb_instance()) {
        let m = constrained_mle(&c, s0).unwrap();
        let (lo, hi) = feasible_interval(s0);
        prop_assert!(m.p1d >= lo && m.p1d <= hi);
        prop_assert!((0.0..=1.0).contains(&m.p2d));
        prop_assert!((m.p1d - m.p2d - s0.value()).abs() <= 2.0 * f64::EPSILON);
        prop_assert_eq!(m.q1d, 1.0 - m.p1d);
    }

    #[test]
    fn general_estimate_solves_the_cubic((c, s0) in arb_instance()) {
        let m = constrained_mle(&c, s0).unwrap();
        if m.case == CaseTag::General {
            let k = cubic_coefficients(&c.proportions(), s0);
            prop_assert!(k.eval(m.p1d).abs() <= 1e-9, "residual {}", k.eval(m.p1d));
        }
    }

    #[test]
    fn agrees_with_the_oracle((c, s0) in arb_instance()) {
        let m = constrained_mle(&c, s0).unwrap();
        let oracle = brute_force_mle(&c, s0, 201);
        prop_assert!((m.p1d - oracle.p1d).abs() <= 1e-6, "{} vs {}", m.p1d, oracle.p1d);
    }

    #[test]
    fn extreme_cases_agree_with_the_oracle((c, s0) in arb_extreme_instance()) {
        let m = constrained_mle(&c, s0).unwrap();
        let oracle = brute_force_mle(&c, s0, 201);
        prop_assert!((m.p1d - oracle.p1d).abs() <= 1e-6, "{:?}: {} vs {}", m.case, m.p1d, oracle.p1d);
    }

    #[test]
    fn cubic_from_real_data_never_fails((c, s0) in arb_instance()) {
        let k = cubic_coefficients(&c.proportions(), s0);
        let roots = solve_cubic_three_real(&k).unwrap();
        prop_assert!(roots.iter().all(|r| r.is_finite()));
    }

    #[test]
    fn swapping_arms_mirrors_the_estimate((c, s0) in arb_instance()) {
        let m = constrained_mle(&c, s0).unwrap();
        let w = constrained_mle(&c.swapped(), s0.negated()).unwrap();
        prop_assert!((m.p1d - w.p2d).abs() <= 1e-12 && (m.p2d - w.p1d).abs() <= 1e-12,
            "{m:?} vs {w:?}");
    }
}
