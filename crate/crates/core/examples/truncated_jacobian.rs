//! Truncated Jacobian and the exact test of its determinant.
//!
//! ```bash
//! cargo run -p jacobi --example truncated_jacobian
//! ```

use jacobi::canon::minimal_canon;
use jacobi::diffpoly::{check_truncated_jacobian, symbolic_determinant, truncated_jacobian, DiffSystem, JacobianStatus};

fn show(text: &str) -> jacobi::Result<()> {
    let sys = DiffSystem::parse(text)?;
    let c = minimal_canon(&sys.order_matrix())?;
    let grid = truncated_jacobian(&sys, &c)?;
    println!("{sys}");
    for row in &grid {
        let cells: Vec<String> = row.iter().map(|p| p.display_with(sys.names()).to_string()).collect();
        println!("  [{}]", cells.join(", "));
    }
    println!("det = {}", symbolic_determinant(&grid)?.display_with(sys.names()));
    match check_truncated_jacobian(&grid) {
        JacobianStatus::NonzeroWitnessed { value, .. } => println!("nonzero, witnessed value {value}\n"),
        other => println!("{}\n", other.label()),
    }
    Ok(())
}

fn main() -> jacobi::Result<()> {
    show("u1: x1'' - x2 * x2' = 0\nu2: x1 * x2'' + x1' = 0")?;
    show("u1: x1' + x2' = 0\nu2: x1' + x2' + x1 = 0")
}
