//! Differentiation orders for a resolvent in each unknown, checked against
//! maximal transversal sums of the minors.
//!
//! ```bash
//! cargo run -p jacobi --example resolvent
//! ```

use jacobi::canon::minimal_canon;
use jacobi::diffpoly::{resolvent_prolongation, DiffSystem};
use jacobi::fixtures::fixture;
use jacobi::resolvent::{forma_elegans_orders, orders_agree, resolvent_orders};

fn main() -> jacobi::Result<()> {
    let sys = DiffSystem::parse(fixture("jacobi_example.txt").unwrap())?;
    let a = sys.order_matrix();
    let c = minimal_canon(&a)?;
    for j0 in 0..sys.n() {
        let minors = forma_elegans_orders(&a, j0)?;
        let sums: Vec<String> = minors.iter().map(ToString::to_string).collect();
        let plan = match resolvent_orders(&a, &c, j0) {
            Ok(plan) => plan,
            Err(e) => {
                println!("resolvent in {}: {e}; minor sums ({})\n", sys.names()[j0], sums.join(", "));
                continue;
            }
        };
        println!("resolvent in {}: h = {:?}, order {}", sys.names()[j0], plan.h, plan.resolvent_order);
        println!("A''' =\n{}", plan.a_triple_prime);
        println!("minor sums agree: {}", orders_agree(&plan, &minors));
        let equations: usize = resolvent_prolongation(&sys, &plan)?.iter().map(|p| p.orders.len()).sum();
        println!("{equations} equations after prolongation\n");
    }
    Ok(())
}
