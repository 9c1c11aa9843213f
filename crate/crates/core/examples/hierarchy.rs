// The commuting hierarchy: closed form against the monomial definition, commutators,
// and the translation property of the top Hamiltonian.
//
// Run with `cargo run --example hierarchy`.

use num_rational::BigRational;
use qboson::fock::{random_state, StateFn, Weight};
use qboson::hamiltonians::{h_def, h_explicit, Branch};
use qboson::qnum::ExactContext;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> qboson::Result<()> {
    let ctx = ExactContext::exact(1, 3)?;
    let n = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f: StateFn<BigRational> = random_state(&mut rng, n, -2, 2, 5);
    println!("random state with {} terms", f.len());

    for r in 1..=n {
        for branch in [Branch::Lower, Branch::Raise] {
            let closed = h_explicit(&ctx, r, &f, branch);
            assert_eq!(closed, h_def(&ctx, r, &f, branch));
            println!("r = {r} {branch:?}: closed form matches the monomial expansion on {} weights", closed.len());
        }
    }

    for r in 1..=n {
        for s in 1..=n {
            let ab = h_explicit(&ctx, r, &h_explicit(&ctx, s, &f, Branch::Raise), Branch::Lower);
            let ba = h_explicit(&ctx, s, &h_explicit(&ctx, r, &f, Branch::Lower), Branch::Raise);
            assert_eq!(ab, ba);
        }
    }
    println!("[H_r, H*_s] = 0 for all r, s ≤ {n}");

    let g = h_explicit(&ctx, n, &f, Branch::Lower);
    for (lambda, value) in g.iter() {
        let back = Weight::new(lambda.parts().iter().map(|p| p - 1).collect())?;
        assert_eq!(*value, f.get(&back));
    }
    println!("(H_{n} f)(λ) = f(λ − (1,1,1)) on every weight");
    assert!(h_explicit(&ctx, n + 1, &f, Branch::Lower).is_zero());
    println!("H_{} f = 0", n + 1);
    Ok(())
}

#[allow(dead_code)]
fn main() -> qboson::Result<()> {
    run_example()
}
