// Gauge-transformed Fourier transform: round trip and diagonalization of the Hamiltonians.
//
// Run with `cargo run --example spectral_decomposition`.

use num_complex::Complex64;
use qboson::fock::{StateFn, Weight};
use qboson::hamiltonians::h_tilde;
use qboson::qnum::FloatContext;
use qboson::spectral::{apply_multiplier, build_grid, fourier_tilde, fourier_tilde_inverse, weights_in_box};

pub fn run_example() -> qboson::Result<()> {
    let ctx = FloatContext::float(0.5)?;
    let grid = build_grid(2, 32)?;
    let f = StateFn::from_pairs(
        2,
        [
            (Weight::new(vec![1, 0])?, Complex64::new(1.0, 0.0)),
            (Weight::new(vec![1, 1])?, Complex64::new(0.0, -0.5)),
            (Weight::new(vec![0, -2])?, Complex64::new(0.25, 0.25)),
        ],
    )?;
    let support = weights_in_box(2, -4, 4);
    let fhat = fourier_tilde(&ctx, &f, &grid);
    println!("{} quadrature nodes, ‖f̂‖² = {:.8}, ‖f‖² = {:.8}", grid.len(), fhat.norm_sq(), f.flat_norm_sq());
    let back = fourier_tilde_inverse(&ctx, &fhat, &support);
    println!("round trip error {:.2e}", back.max_abs_diff(&f));

    for r in 1..=2 {
        let lattice = h_tilde(&ctx, r, &f);
        let spectral = fourier_tilde_inverse(&ctx, &apply_multiplier(r, &fhat), &support);
        let gap = lattice.max_abs_diff(&spectral);
        println!("r = {r}: lattice H̃ vs spectral multiplier, max deviation {gap:.2e}");
        assert!(gap < 2e-3);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qboson::Result<()> {
    run_example()
}
