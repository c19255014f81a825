//! The likelihood-equation cubic and its three real roots.

use fm_score::mle::feasible_interval;
use fm_score::{
    constrained_log_likelihood, cubic_coefficients, derive_proportions, solve_cubic_three_real,
    Margin, TrialCounts,
};

fn main() -> fm_score::Result<()> {
    let counts = TrialCounts::new(3, 12, 9, 15)?;
    let margin = Margin::new(-0.2)?;
    let coeffs = cubic_coefficients(&derive_proportions(&counts), margin);
    println!(
        "{:.6}·x³ + {:.6}·x² + {:.6}·x + {:.6}",
        coeffs.a, coeffs.b, coeffs.c, coeffs.d
    );

    let (lower, upper) = feasible_interval(margin);
    println!("feasible p̃₁ in [{lower}, {upper}]");
    for root in solve_cubic_three_real(&coeffs)? {
        let feasible = (lower..=upper).contains(&root);
        let loglik = if feasible {
            format!("{:.6}", constrained_log_likelihood(&counts, root, margin))
        } else {
            "—".to_owned()
        };
        println!(
            "root {root:>12.9}  residual {:>9.1e}  log-likelihood {loglik}",
            coeffs.eval(root)
        );
    }
    Ok(())
}
