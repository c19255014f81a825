//! Tables where an observed proportion is exactly 0 or 1.
//!
//! The cubic behind the constrained estimate degenerates for these; each is
//! dispatched to its closed form. The brute-force grid search is shown
//! alongside for comparison.

use fm_score::{brute_force_mle, z_statistic, Margin, TrialCounts};

fn main() -> fm_score::Result<()> {
    let tables = [
        ((20, 20, 20, 20), 0.2),
        ((0, 30, 0, 30), -0.1),
        ((0, 10, 20, 20), 0.5),
        ((15, 15, 0, 40), -0.3),
        ((0, 50, 7, 50), 0.0),
        ((12, 40, 18, 40), -0.1),
    ];
    println!(
        "{:>14} {:>6}  {:<10} {:>10} {:>10} {:>10}",
        "r1/n1 r2/n2", "s0", "case", "p̃₁", "grid p̃₁", "z"
    );
    for ((r1, n1, r2, n2), s0) in tables {
        let counts = TrialCounts::new(r1, n1, r2, n2)?;
        let margin = Margin::new(s0)?;
        let result = z_statistic(&counts, margin)?;
        let grid = brute_force_mle(&counts, margin, 10_000);
        println!(
            "{:>14} {:>6.2}  {:<10} {:>10.6} {:>10.6} {:>10.4}",
            format!("{r1}/{n1} {r2}/{n2}"),
            s0,
            result.mle.case.to_string(),
            result.mle.p1d,
            grid.p1d,
            result.z
        );
    }
    Ok(())
}
