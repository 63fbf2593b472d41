//! Jacobi's bound next to the Greenspan, Bézout-dual and weak bounds, and the
//! exact order of a linear constant-coefficient system.
//!
//! ```bash
//! cargo run -p jacobi --example bounds
//! ```

use jacobi::bounds::{bounds_report, characteristic_matrix, linear_system_order};
use jacobi::diffpoly::DiffSystem;
use jacobi::fixtures::fixture;
use jacobi::order_matrix::OrderMatrix;

fn main() -> jacobi::Result<()> {
    for name in ["greenspan_gap.json", "jacobi_example.json"] {
        let a = OrderMatrix::from_json_str(fixture(name).unwrap())?;
        let r = bounds_report(&a);
        println!("{name}:\n{a}");
        println!("  strong {}  weak {}  Bezout dual {}", r.jacobi_strong, r.jacobi_weak, r.bezout_dual);
        if let Some(g) = r.greenspan {
            println!("  Greenspan {g}");
        }
        println!("  {}", r.relations.join(", "));
    }

    let sys = DiffSystem::parse(fixture("linear_oscillators.txt").unwrap())?;
    let p = characteristic_matrix(&sys)?;
    println!("\n{sys}det P = {}", p.determinant());
    println!("order {} (Jacobi bound {})", linear_system_order(&p)?, jacobi::canon::jacobi_number(&sys.order_matrix()));
    Ok(())
}
