//! Jacobi's minimal canon with the step-by-step trace.
//!
//! ```bash
//! cargo run -p jacobi --example minimal_canon
//! ```

use jacobi::canon::{brute_force_minimal_canon, minimal_canon_with, CanonOptions};
use jacobi::order_matrix::OrderMatrix;

fn main() -> jacobi::Result<()> {
    let a: OrderMatrix = "2 2 0 ; 1 1 0 ; 0 1 0".parse()?;
    let c = minimal_canon_with(&a, CanonOptions { trace: true })?;
    println!("A =\n{a}");
    for (k, step) in c.trace.iter().enumerate() {
        print!("step {k}: {:?} raise {:?}", step.kind, step.row_increments);
        if let Some(classes) = &step.classes {
            print!("  first {:?} second {:?} third {:?}", classes.first, classes.second, classes.third);
        }
        println!();
    }
    println!("ell = {:?}  Lambda = {}", c.ell, c.lambda);
    println!("alpha = {:?}  beta = {:?}  J = {}", c.alpha, c.beta, c.jacobi_number);
    println!("stars {:?}", c.starred);
    println!("raised:\n{}", c.raised_matrix(&a));
    println!("exhaustive minimum: {:?}", brute_force_minimal_canon(&a, c.lambda + 2)?);
    Ok(())
}
