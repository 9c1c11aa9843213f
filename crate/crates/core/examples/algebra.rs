// Exact q-boson field algebra on a few lattice states.
//
// Run with `cargo run --example algebra`.

use num_rational::BigRational;
use qboson::fock::{beta, beta_star, hop, hop_star, inner_product, num_op, StateFn, Weight};
use qboson::qnum::ExactContext;

fn show(label: &str, f: &StateFn<BigRational>) {
    let terms: Vec<String> = f.iter().map(|(w, v)| format!("{v}·1_{w}")).collect();
    println!("{label:<28} = {}", if terms.is_empty() { "0".into() } else { terms.join(" + ") });
}

pub fn run_example() -> qboson::Result<()> {
    let ctx = ExactContext::exact(1, 2)?;
    let f = StateFn::indicator(Weight::new(vec![1, 1, 0])?);
    show("f", &f);

    show("β*_1 f", &beta_star(&ctx, 1, &f));
    show("β_1 f", &beta(1, &f));

    let lhs = &beta(1, &beta_star(&ctx, 1, &f)) - &(&ctx * &beta_star(&ctx, 1, &beta(1, &f)));
    show("(β_1β*_1 − qβ*_1β_1) f", &lhs);
    assert_eq!(lhs, f);

    show("N_1 f", &num_op(&ctx, 1, &f));
    show("a_0 f (hop 0 → 1)", &hop(&ctx, 0, &f));
    show("a*_0 f (hop 1 → 0)", &hop_star(&ctx, 0, &f));

    let g = hop(&ctx, 0, &f);
    let left = inner_product(&ctx, &hop(&ctx, 0, &f), &g)?;
    let right = inner_product(&ctx, &f, &hop_star(&ctx, 0, &g))?;
    println!("<a_0 f, g> = {left}, <f, a*_0 g> = {right}");
    assert_eq!(left, right);
    Ok(())
}

#[allow(dead_code)]
fn main() -> qboson::Result<()> {
    run_example()
}
