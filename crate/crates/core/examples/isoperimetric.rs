//! Euler–Lagrange systems have symmetric order matrices with `J = 2 Σ e_i`.
//!
//! ```bash
//! cargo run -p jacobi --example isoperimetric
//! ```

use jacobi::canon::minimal_canon;
use jacobi::diffpoly::{euler_lagrange, parse_polynomial};
use jacobi::order_matrix::isoperimetric_matrix;

fn main() -> jacobi::Result<()> {
    let names: Vec<String> = vec!["x".into(), "y".into()];
    let lagrangian = parse_polynomial("x'^2 + y''^2 + x*y'", &names)?;
    let sys = euler_lagrange(&lagrangian, names)?;
    let a = sys.order_matrix();
    println!("{sys}order matrix:\n{a}");
    let c = minimal_canon(&a)?;
    println!("J = {}, ell = {:?}", c.jacobi_number, c.ell);

    for e in [vec![1, 2], vec![0, 3, 1]] {
        let a = isoperimetric_matrix(&e)?;
        let c = minimal_canon(&a)?;
        println!("\ne = {e:?}:\n{a}\nJ = {} (2 * sum = {})", c.jacobi_number, 2 * e.iter().sum::<u64>());
    }
    Ok(())
}
