//! Type I error and power of a non-inferiority design by simulation.
//!
//! Results depend only on the seed, never on the number of threads.

use fm_score::{simulate, Alternative, Margin, SimConfig};

fn main() -> fm_score::Result<()> {
    let design = |p1_true: f64| SimConfig {
        n1: 120,
        n2: 120,
        p1_true,
        p2_true: 0.95,
        s0: Margin::new(-0.10).unwrap(),
        level: 0.95,
        alternative: Alternative::Greater,
        replicates: 20_000,
        seed: 2024,
    };

    let scenarios = [
        ("size  (p₁ − p₂ = s₀)", 0.85),
        ("power (p₁ = p₂)", 0.95),
        ("power (p₁ > p₂)", 0.99),
    ];
    for (label, p1) in scenarios {
        let result = simulate(&design(p1))?;
        println!(
            "{label:<22} rejection {:.4}  coverage {:.4}  failures {}",
            result.rejection_rate, result.coverage_rate, result.failures
        );
        for (case, n) in result.extreme_case_counts.iter().filter(|(_, &n)| n > 0) {
            println!("    {:<10} {n}", case.to_string());
        }
    }
    Ok(())
}
