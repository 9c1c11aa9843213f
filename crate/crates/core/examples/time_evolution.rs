// Time evolution of a smooth spectral packet under the first two flows of the hierarchy.
//
// Run with `cargo run --example time_evolution`.

use num_complex::Complex64;
use qboson::qnum::FloatContext;
use qboson::scattering::BumpProfile;
use qboson::spectral::{build_box_grid, evolve, weights_in_box, SpectralFn};

pub fn run_example() -> qboson::Result<()> {
    let ctx = FloatContext::float(0.5)?;
    let profile = BumpProfile::new(vec![1.8, -0.9], vec![0.4, 0.4])?;
    let grid = build_box_grid(&profile.lower(), &profile.upper(), 24)?;
    let fhat = SpectralFn::from_fn(grid, |xi| Complex64::new(profile.eval(xi), 0.0));
    let expected = fhat.norm_sq().sqrt();
    let support = weights_in_box(2, -30, 30);
    println!("packet norm {expected:.6} on {} lattice weights", support.len());
    for r in 1..=2 {
        for t in [0.0, 4.0, 8.0] {
            let state = evolve(&ctx, r, &fhat, t, &support);
            let norm = state.flat_norm_sq().sqrt();
            let (peak, _) = state
                .iter()
                .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
                .expect("nonzero state");
            println!("r = {r}, t = {t:>3}: norm ratio {:.5}, peak at {peak}", norm / expected);
            assert!((norm / expected - 1.0).abs() < 5e-3);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qboson::Result<()> {
    run_example()
}
