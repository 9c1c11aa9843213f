macro_rules! example {
    ($module:ident, $file:literal) => {
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }
    };
}

example!(algebra, "algebra.rs");
example!(hierarchy, "hierarchy.rs");
example!(eigenfunctions, "eigenfunctions.rs");
example!(orthogonality, "orthogonality.rs");
example!(spectral_decomposition, "spectral_decomposition.rs");
example!(time_evolution, "time_evolution.rs");
example!(scattering, "scattering.rs");

#[test]
fn algebra_example_runs() {
    algebra::run_example().unwrap();
}

#[test]
fn hierarchy_example_runs() {
    hierarchy::run_example().unwrap();
}

#[test]
fn eigenfunctions_example_runs() {
    eigenfunctions::run_example().unwrap();
}

#[test]
fn orthogonality_example_runs() {
    orthogonality::run_example().unwrap();
}

#[test]
fn spectral_decomposition_example_runs() {
    spectral_decomposition::run_example().unwrap();
}

#[test]
fn time_evolution_example_runs() {
    time_evolution::run_example().unwrap();
}

#[test]
fn scattering_example_runs() {
    scattering::run_example().unwrap();
}
