//! Score intervals at several confidence levels, and how each endpoint was
//! obtained.

use fm_score::{confidence_interval, TrialCounts};

fn main() -> fm_score::Result<()> {
    let tables = [
        (41, 50, 33, 50),
        (20, 20, 20, 20),
        (0, 25, 25, 25),
        (1, 200, 0, 150),
    ];
    for (r1, n1, r2, n2) in tables {
        let counts = TrialCounts::new(r1, n1, r2, n2)?;
        println!(
            "{r1}/{n1} vs {r2}/{n2}  (difference {:+.4})",
            counts.observed_difference()
        );
        for level in [0.90, 0.95, 0.99] {
            let ci = confidence_interval(&counts, level)?;
            println!(
                "  {:>4.0}%  [{:+.6}, {:+.6}]  {:?} / {:?}",
                level * 100.0,
                ci.lower,
                ci.upper,
                ci.method_lower,
                ci.method_upper
            );
        }
    }
    Ok(())
}
