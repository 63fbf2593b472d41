//! Build order matrices from a system, from text and from JSON, and compare
//! the strong and weak conventions.
//!
//! ```bash
//! cargo run -p jacobi --example order_matrix
//! ```

use jacobi::diffpoly::DiffSystem;
use jacobi::fixtures::fixture;
use jacobi::order_matrix::{brute_force_jacobi_number, finite_transversal_witness, OrderMatrix};

fn main() -> jacobi::Result<()> {
    let sys = DiffSystem::parse(fixture("jacobi_example.txt").unwrap())?;
    let a = sys.order_matrix();
    println!("{sys}order matrix:\n{a}");
    println!("J by permutations: {}", brute_force_jacobi_number(&a)?);

    let b: OrderMatrix = "1 0 ; - -".parse()?;
    match finite_transversal_witness(&b) {
        Ok(sigma) => println!("transversal {:?}", sigma.images()),
        Err(hall) => println!("strong convention: {hall}"),
    }
    let weak = b.to_weak();
    println!("weak convention:\n{weak}\nJ = {}", brute_force_jacobi_number(&weak)?);

    let json = OrderMatrix::from_json_str(fixture("isoperimetric_1_2.json").unwrap())?;
    println!("from JSON:\n{json}\nsymmetric: {}", json.is_symmetric());
    Ok(())
}
