// Hall–Littlewood eigenfunctions: eigenvalues of the hierarchy and the two forms of the
// gauge-transformed eigenfunction.
//
// Run with `cargo run --example eigenfunctions`.

use num_complex::Complex64;
use qboson::fock::Weight;
use qboson::hall_littlewood::{c_function, elementary_symmetric, phi_waves, psi, psi_alternating};
use qboson::hamiltonians::{h_explicit_at, Branch};
use qboson::qnum::FloatContext;

pub fn run_example() -> qboson::Result<()> {
    let ctx = FloatContext::float(0.4)?;
    let xi = [2.1, 0.3, -1.7];
    println!("C(ξ) = {:.6}", c_function(&ctx, &xi)?);
    let waves = phi_waves(&ctx, &xi)?;
    let phi = |mu: &Weight| waves.eval(mu.parts());

    let lambda = Weight::new(vec![2, 2, -1])?;
    let value = phi(&lambda);
    let z: Vec<Complex64> = xi.iter().map(|&x| Complex64::from_polar(1.0, -x)).collect();
    for r in 1..=3 {
        let lhs = h_explicit_at(&ctx, r, Branch::Lower, &lambda, phi);
        let rhs = elementary_symmetric(r, &z) * value;
        println!("r = {r}: (H_r φ)(λ) = {lhs:.6}, e_r(e^(-iξ)) φ(λ) = {rhs:.6}");
        assert!((lhs - rhs).norm() < 1e-10 * (1.0 + value.norm()));
    }

    for parts in [[0, 0, 0], [3, 1, -2], [1, 1, 1]] {
        let lambda = Weight::new(parts.to_vec())?;
        let a = psi(&ctx, &xi, &lambda)?;
        let b = psi_alternating(&ctx, &xi, &lambda);
        println!("Ψ_ξ{lambda}: {a:.8} vs alternating sum {b:.8}");
        assert!((a - b).norm() < 1e-10);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qboson::Result<()> {
    run_example()
}
