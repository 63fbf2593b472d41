//! Shortest reduction to normal form: which equations to differentiate, the
//! solved derivatives and the explicit normal form for an affine system.
//!
//! ```bash
//! cargo run -p jacobi --example shortest_reduction
//! ```

use jacobi::canon::minimal_canon;
use jacobi::diffpoly::{jacobi_order_compare, shortest_reduction_plan, DiffSystem};
use jacobi::fixtures::fixture;

fn main() -> jacobi::Result<()> {
    let sys = DiffSystem::parse(fixture("two_normal_forms.txt").unwrap())?;
    let c = minimal_canon(&sys.order_matrix())?;
    let plan = shortest_reduction_plan(&sys, &c)?;
    println!("ell = {:?}, total order {}", plan.ell, plan.order_total);
    for (i, k, eq) in plan.prolonged_equations(&sys) {
        println!("  D^{k} {} = {}", sys.equation_names()[i], eq.display_with(sys.names()));
    }
    let mut solved = plan.solved_set.clone();
    solved.sort_by(|&a, &b| jacobi_order_compare(a, b, &plan.beta).unwrap());
    let shown: Vec<String> = solved.iter().map(|&d| sys.display_var(d)).collect();
    println!("solved, in Jacobi order: {}", shown.join(" < "));
    for (d, value) in plan.explicit_normal_form(&sys)? {
        println!("  {} = {}", sys.display_var(d), value.display_with(sys.names()));
    }
    Ok(())
}
