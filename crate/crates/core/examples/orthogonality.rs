// Quadrature check of the orthogonality of Hall–Littlewood functions with a convergence ladder.
//
// Run with `cargo run --example orthogonality`.

use qboson::fock::{delta_n, Weight};
use qboson::qnum::FloatContext;
use qboson::spectral::{build_grid, verify_orthogonality};

pub fn run_example() -> qboson::Result<()> {
    let ctx = FloatContext::float(0.5)?;
    let pairs = [([0, 0], [0, 0]), ([2, 1], [2, 1]), ([1, 0], [2, 1])];
    for (l, m) in pairs {
        let (lambda, mu) = (Weight::new(l.to_vec())?, Weight::new(m.to_vec())?);
        let target = if lambda == mu { 1.0 / delta_n(&ctx, &lambda).re } else { 0.0 };
        println!("<φ{lambda}, φ{mu}>_Δ, expected {target:.6}");
        let mut previous = f64::INFINITY;
        for order in [16, 24, 32, 48] {
            let value = verify_orthogonality(&ctx, &lambda, &mu, &build_grid(2, order)?);
            let error = (value - target).norm();
            println!("  M = {order:>2}: {value:.10}  error {error:.2e}");
            assert!(error <= 1.1 * previous || error < 1e-12);
            previous = error;
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qboson::Result<()> {
    run_example()
}
