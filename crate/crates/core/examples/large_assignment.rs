//! Timing of the canon algorithm on dense random order matrices.
//!
//! ```bash
//! cargo run --release -p jacobi --example large_assignment
//! ```

use std::time::Instant;

use jacobi::canon::{minimal_canon_with, CanonOptions};
use jacobi::order_matrix::{Finite, OrderMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut previous: Option<f64> = None;
    for n in [64usize, 128, 256, 512] {
        let a = OrderMatrix::from_fn(n, |_, _| Finite(rng.gen_range(0..=1000))).unwrap();
        for trace in [false, true] {
            let start = Instant::now();
            let c = minimal_canon_with(&a, CanonOptions { trace }).unwrap();
            let secs = start.elapsed().as_secs_f64();
            print!(
                "n = {n:>4}  trace = {trace:<5}  J = {}  Λ = {:>6}  steps = {:>6}  {:>8.3} s",
                c.jacobi_number,
                c.lambda,
                c.trace.len(),
                secs
            );
            if !trace {
                if let Some(p) = previous {
                    print!("  ratio {:.2}", secs / p);
                }
                previous = Some(secs);
            }
            println!();
        }
    }
}
