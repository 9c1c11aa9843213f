//! Quadrature on the alcove and the Fourier transform pairs.
//!
//! Two grid layouts exist. A [`GridMode::Symmetrized`] grid is a Gauss–Legendre tensor grid on
//! the cube `(−π, π)^n`; integrals over the alcove are the cube integral divided by `n!`, which
//! is valid for integrands symmetric under permuting the components of `ξ`. A
//! [`GridMode::Direct`] grid is a Gauss–Legendre box lying inside the alcove, used for
//! wave-packet profiles supported in such a box.
//!
//! Nodes with two equal components lie on a wall of the alcove, where `Δ` vanishes. Integrands
//! carrying a factor `Δ` are set to zero there, as is the value of [`fourier_forward`].

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::fock::{delta_n, StateFn, Weight};
use crate::hall_littlewood::{density, epsilon_r, phi_waves, psi_waves, PlaneWaveSum};
use crate::qnum::FloatContext;

/// Nodes and weights of the `m`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (x * pm - pm1) / (x * x - 1.0);
            let dx = pm / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridMode {
    /// The full cube, integrals divided by `n!`.
    Symmetrized,
    /// A box inside the alcove, integrated as is.
    Direct,
}

#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    n: usize,
    order: usize,
    mode: GridMode,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    wall: Vec<bool>,
}

impl QuadratureGrid {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mode(&self) -> GridMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn is_wall(&self, i: usize) -> bool {
        self.wall[i]
    }

    /// Factor turning the weighted node sum into an alcove integral.
    pub fn alcove_factor(&self) -> f64 {
        match self.mode {
            GridMode::Symmetrized => 1.0 / (1..=self.n).product::<usize>() as f64,
            GridMode::Direct => 1.0,
        }
    }

    /// `∫_A g dξ` for nodal values `g`, summed in node order.
    pub fn integrate(&self, values: &[Complex64]) -> Complex64 {
        let sum: Complex64 = self.weights.iter().zip(values).map(|(w, v)| v * *w).sum();
        sum * self.alcove_factor()
    }

    fn normalisation(&self) -> f64 {
        self.alcove_factor() / (2.0 * PI).powi(self.n as i32)
    }
}

fn tensor_grid(order: usize, axes: &[(f64, f64)], mode: GridMode) -> QuadratureGrid {
    let (x, w) = gauss_legendre(order);
    let n = axes.len();
    let total = order.pow(n as u32);
    let mut nodes = Vec::with_capacity(total);
    let mut weights = Vec::with_capacity(total);
    let mut wall = Vec::with_capacity(total);
    for index in 0..total {
        let mut rem = index;
        let mut node = vec![0.0; n];
        let mut weight = 1.0;
        let mut digits = vec![0usize; n];
        for axis in (0..n).rev() {
            let d = rem % order;
            rem /= order;
            digits[axis] = d;
            let (lo, hi) = axes[axis];
            let half = (hi - lo) / 2.0;
            node[axis] = lo + half * (x[d] + 1.0);
            weight *= half * w[d];
        }
        let on_wall = mode == GridMode::Symmetrized
            && (0..n).any(|a| (a + 1..n).any(|b| digits[a] == digits[b]));
        nodes.push(node);
        weights.push(weight);
        wall.push(on_wall);
    }
    QuadratureGrid {
        n,
        order,
        mode,
        nodes,
        weights,
        wall,
    }
}

/// Gauss–Legendre tensor grid of order `m` per axis on `(−π, π)^n`.
pub fn build_grid(n: usize, m: usize) -> Result<Arc<QuadratureGrid>> {
    if m < 4 {
        return Err(Error::Config(format!("quadrature order must be at least 4, got {m}")));
    }
    Ok(Arc::new(tensor_grid(m, &vec![(-PI, PI); n], GridMode::Symmetrized)))
}

/// Gauss–Legendre tensor grid of order `m` per axis on the box `∏ [lo_j, hi_j]`, which must lie
/// inside the alcove.
pub fn build_box_grid(lo: &[f64], hi: &[f64], m: usize) -> Result<Arc<QuadratureGrid>> {
    if m < 4 {
        return Err(Error::Config(format!("quadrature order must be at least 4, got {m}")));
    }
    if lo.len() != hi.len() || lo.iter().zip(hi).any(|(a, b)| a >= b) {
        return Err(Error::Config("box bounds must satisfy lo < hi per axis".into()));
    }
    let n = lo.len();
    let inside = hi.first().is_none_or(|&h| h < PI)
        && lo.last().is_none_or(|&l| l > -PI)
        && (1..n).all(|j| lo[j - 1] > hi[j]);
    if !inside {
        return Err(Error::OutsideAlcove(lo.iter().chain(hi).copied().collect()));
    }
    let axes: Vec<(f64, f64)> = lo.iter().copied().zip(hi.iter().copied()).collect();
    Ok(Arc::new(tensor_grid(m, &axes, GridMode::Direct)))
}

/// Nodal values of a function on a quadrature grid.
#[derive(Clone, Debug)]
pub struct SpectralFn {
    grid: Arc<QuadratureGrid>,
    values: Vec<Complex64>,
}

impl SpectralFn {
    pub fn new(grid: Arc<QuadratureGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Config(format!(
                "expected {} nodal values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Config("spectral values must be finite".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Arc<QuadratureGrid>, f: impl Fn(&[f64]) -> Complex64 + Sync) -> Self {
        let values = grid.nodes.par_iter().map(|xi| f(xi)).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Nodewise product with `g(ξ)`.
    pub fn multiply(&self, g: impl Fn(&[f64]) -> Complex64 + Sync) -> Self {
        let values = self
            .grid
            .nodes
            .par_iter()
            .zip(&self.values)
            .map(|(xi, v)| v * g(xi))
            .collect();
        Self {
            grid: self.grid.clone(),
            values,
        }
    }

    /// `(2π)^{−n} ∫_A |f̂|² dξ`.
    pub fn norm_sq(&self) -> f64 {
        let sum: f64 = self
            .grid
            .weights
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v.norm_sqr())
            .sum();
        sum * self.grid.normalisation()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        let records = self
            .grid
            .nodes
            .iter()
            .zip(&self.values)
            .map(|(xi, v)| {
                let mut record = Map::new();
                record.insert("xi".into(), Value::from(xi.clone()));
                record.insert("re".into(), Value::from(v.re));
                record.insert("im".into(), Value::from(v.im));
                Value::Object(record)
            })
            .collect();
        Value::Array(records)
    }
}

struct NodeData {
    waves: Option<PlaneWaveSum>,
    density: f64,
}

fn phi_nodes(ctx: &FloatContext, grid: &QuadratureGrid) -> Vec<NodeData> {
    (0..grid.len())
        .into_par_iter()
        .map(|i| {
            if grid.wall[i] {
                return NodeData {
                    waves: None,
                    density: 0.0,
                };
            }
            let xi = &grid.nodes[i];
            NodeData {
                waves: phi_waves(ctx, xi).ok(),
                density: density(ctx, xi),
            }
        })
        .collect()
}

fn psi_nodes(ctx: &FloatContext, grid: &QuadratureGrid) -> Vec<PlaneWaveSum> {
    grid.nodes.par_iter().map(|xi| psi_waves(ctx, xi)).collect()
}

/// `(F_q f)(ξ) = Σ_λ f(λ) conj(φ_ξ(λ)) δ_n(λ)` at every node.
pub fn fourier_forward(ctx: &FloatContext, f: &StateFn<Complex64>, grid: &Arc<QuadratureGrid>) -> SpectralFn {
    let weighted: Vec<(Weight, Complex64)> = f
        .iter()
        .map(|(lambda, v)| (lambda.clone(), v * delta_n(ctx, lambda).re))
        .collect();
    let data = phi_nodes(ctx, grid);
    let values = data
        .par_iter()
        .map(|node| match &node.waves {
            None => Complex64::new(0.0, 0.0),
            Some(waves) => weighted
                .iter()
                .map(|(lambda, v)| v * waves.eval(lambda.parts()).conj())
                .sum(),
        })
        .collect();
    SpectralFn {
        grid: grid.clone(),
        values,
    }
}

/// `f(λ) = (2π)^{−n} ∫_A f̂(ξ) φ_ξ(λ) Δ(ξ) dξ` on the given support.
pub fn fourier_inverse(ctx: &FloatContext, fhat: &SpectralFn, support: &[Weight]) -> StateFn<Complex64> {
    let grid = &fhat.grid;
    let data = phi_nodes(ctx, grid);
    let norm = grid.normalisation();
    let values: Vec<Complex64> = support
        .par_iter()
        .map(|lambda| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, node) in data.iter().enumerate() {
                if let Some(waves) = &node.waves {
                    acc += fhat.values[i] * waves.eval(lambda.parts()) * (node.density * grid.weights[i]);
                }
            }
            acc * norm
        })
        .collect();
    collect_state(grid.n, support, values)
}

fn collect_state(n: usize, support: &[Weight], values: Vec<Complex64>) -> StateFn<Complex64> {
    let mut out = StateFn::zero(n);
    for (lambda, v) in support.iter().zip(values) {
        out.accumulate(lambda.clone(), v);
    }
    out
}

/// Quadrature estimate of `(2π)^{−n} ∫_A φ_ξ(λ) conj(φ_ξ(μ)) Δ(ξ) dξ`, which equals
/// `1/δ_n(λ)` when `λ = μ` and vanishes otherwise.
pub fn verify_orthogonality(
    ctx: &FloatContext,
    lambda: &Weight,
    mu: &Weight,
    grid: &Arc<QuadratureGrid>,
) -> Complex64 {
    let data = phi_nodes(ctx, grid);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, node) in data.iter().enumerate() {
        if let Some(waves) = &node.waves {
            let value = waves.eval(lambda.parts()) * waves.eval(mu.parts()).conj();
            acc += value * (node.density * grid.weights[i]);
        }
    }
    acc * grid.normalisation()
}

/// `(F̃_q f)(ξ) = Σ_λ f(λ) conj(Ψ_ξ(λ))` at every node.
pub fn fourier_tilde(ctx: &FloatContext, f: &StateFn<Complex64>, grid: &Arc<QuadratureGrid>) -> SpectralFn {
    let weighted: Vec<(Weight, Complex64)> = f
        .iter()
        .map(|(lambda, v)| (lambda.clone(), v * delta_n(ctx, lambda).re.sqrt()))
        .collect();
    let values = psi_nodes(ctx, grid)
        .par_iter()
        .map(|waves| {
            weighted
                .iter()
                .map(|(lambda, v)| v * waves.eval(lambda.parts()).conj())
                .sum()
        })
        .collect();
    SpectralFn {
        grid: grid.clone(),
        values,
    }
}

/// `f(λ) = (2π)^{−n} ∫_A f̂(ξ) Ψ_ξ(λ) dξ` on the given support.
pub fn fourier_tilde_inverse(ctx: &FloatContext, fhat: &SpectralFn, support: &[Weight]) -> StateFn<Complex64> {
    let grid = &fhat.grid;
    let waves = psi_nodes(ctx, grid);
    let norm = grid.normalisation();
    let values: Vec<Complex64> = support
        .par_iter()
        .map(|lambda| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, node) in waves.iter().enumerate() {
                acc += fhat.values[i] * node.eval(lambda.parts()) * grid.weights[i];
            }
            acc * norm * delta_n(ctx, lambda).re.sqrt()
        })
        .collect();
    collect_state(grid.n, support, values)
}

/// `(Ê_r f̂)(ξ) = ε_r(ξ) f̂(ξ)`.
pub fn apply_multiplier(r: usize, fhat: &SpectralFn) -> SpectralFn {
    fhat.multiply(|xi| Complex64::new(epsilon_r(r, xi), 0.0))
}

/// `(e^{it H̃_{q,r}} f)(λ) = (2π)^{−n} ∫_A e^{it ε_r(ξ)} f̂(ξ) Ψ_ξ(λ) dξ` on the given support.
pub fn evolve(ctx: &FloatContext, r: usize, fhat: &SpectralFn, t: f64, support: &[Weight]) -> StateFn<Complex64> {
    let moved = fhat.multiply(|xi| Complex64::from_polar(1.0, t * epsilon_r(r, xi)));
    fourier_tilde_inverse(ctx, &moved, support)
}

/// All dominant weights with every part in `lo..=hi`.
pub fn weights_in_box(n: usize, lo: i64, hi: i64) -> Vec<Weight> {
    fn rec(n: usize, lo: i64, max: i64, current: &mut Vec<i64>, out: &mut Vec<Weight>) {
        if current.len() == n {
            out.push(Weight::new(current.clone()).expect("built non-increasing"));
            return;
        }
        for p in (lo..=max).rev() {
            current.push(p);
            rec(n, lo, p, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if lo <= hi || n == 0 {
        rec(n, lo, hi, &mut Vec::new(), &mut out);
    }
    out
}

/// Dominant weights within `⌈2n|t|⌉` sites of the part range of `support`, clipped to `cap`.
/// Returns the set together with a flag telling whether clipping occurred.
pub fn ballistic_support(
    n: usize,
    part_range: (i64, i64),
    t: f64,
    cap: Option<(i64, i64)>,
) -> (Vec<Weight>, bool) {
    let reach = (2.0 * n as f64 * t.abs()).ceil() as i64;
    let (mut lo, mut hi) = (part_range.0 - reach, part_range.1 + reach);
    let mut clipped = false;
    if let Some((clo, chi)) = cap {
        if lo < clo || hi > chi {
            clipped = true;
            lo = lo.max(clo);
            hi = hi.min(chi);
        }
    }
    (weights_in_box(n, lo, hi), clipped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::random_state;
    use crate::hamiltonians::{h_explicit, h_tilde, Branch};
    use crate::qnum::QContext;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(parts: &[i64]) -> Weight {
        Weight::new(parts.to_vec()).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        for m in [1, 2, 5, 16, 33] {
            let (x, w) = gauss_legendre(m);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for k in 0..2 * m {
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                let approx: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k as i32)).sum();
                assert!((approx - exact).abs() < 1e-12, "m={m} k={k}");
            }
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn grid_shapes_and_volume() {
        let g = build_grid(1, 16).unwrap();
        assert_eq!(g.len(), 16);
        assert!((g.weights().iter().sum::<f64>() - 2.0 * PI).abs() < 1e-12);
        let g = build_grid(2, 24).unwrap();
        assert_eq!(g.len(), 576);
        assert!((g.weights().iter().sum::<f64>() - (2.0 * PI).powi(2)).abs() < 1e-10);
        let ones = vec![c(1.0); g.len()];
        assert!((g.integrate(&ones) - c((2.0 * PI).powi(2) / 2.0)).norm() < 1e-10);
        assert_eq!((0..g.len()).filter(|&i| g.is_wall(i)).count(), 24);
        assert!(build_grid(2, 3).is_err());
        assert!(g.nodes().iter().flatten().all(|x| x.abs() < PI));
    }

    #[test]
    fn symmetrized_matches_direct_alcove_sampling() {
        // For a smooth symmetric integrand the cube integral over n! equals the integral over
        // the alcove, which for n = 2 is the triangle ξ_1 > ξ_2 parametrised over a square.
        let ctx = QContext::float(0.5).unwrap();
        let g = build_grid(2, 40).unwrap();
        let values: Vec<Complex64> = g.nodes().iter().map(|xi| c(density(&ctx, xi) * (xi[0] + xi[1]).cos())).collect();
        let cube = g.integrate(&values).re;
        let (x, wts) = gauss_legendre(60);
        let mut triangle = 0.0;
        for (a, wa) in x.iter().zip(&wts) {
            let xi1 = PI * a;
            let half = (xi1 + PI) / 2.0;
            for (b, wb) in x.iter().zip(&wts) {
                let xi2 = -PI + half * (b + 1.0);
                triangle += PI * wa * half * wb * density(&ctx, &[xi1, xi2]) * (xi1 + xi2).cos();
            }
        }
        assert!((cube - triangle).abs() < 1e-6, "{cube} {triangle}");
    }

    #[test]
    fn forward_examples() {
        let ctx = QContext::float(0.5).unwrap();
        let g = build_grid(1, 16).unwrap();
        let f = fourier_forward(&ctx, &StateFn::indicator(w(&[0])), &g);
        assert!(f.values().iter().all(|v| (v - c(1.0)).norm() < 1e-14));
        let f = fourier_forward(&ctx, &StateFn::indicator(w(&[3])), &g);
        for (xi, v) in g.nodes().iter().zip(f.values()) {
            assert!((v - Complex64::from_polar(1.0, -3.0 * xi[0])).norm() < 1e-13);
        }
        let g2 = build_grid(2, 8).unwrap();
        let f = fourier_forward(&ctx, &StateFn::indicator(w(&[0, 0])), &g2);
        for (i, xi) in g2.nodes().iter().enumerate() {
            if g2.is_wall(i) {
                assert_eq!(f.values()[i], c(0.0));
            } else {
                let expected = crate::hall_littlewood::phi(&ctx, xi, &w(&[0, 0])).unwrap().conj() / 1.5;
                assert!((f.values()[i] - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn inverse_round_trips() {
        let ctx = QContext::float(0.5).unwrap();
        let g = build_grid(1, 32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_state::<Complex64, _>(&mut rng, 1, -3, 3, 5);
        let support = weights_in_box(1, -6, 6);
        let back = fourier_inverse(&ctx, &fourier_forward(&ctx, &f, &g), &support);
        assert!(back.max_abs_diff(&f) < 1e-10);

        let g = build_grid(2, 32).unwrap();
        let f = StateFn::indicator(w(&[1, 0]));
        let support = weights_in_box(2, -2, 3);
        let back = fourier_inverse(&ctx, &fourier_forward(&ctx, &f, &g), &support);
        assert!(back.max_abs_diff(&f) < 1e-3, "{}", back.max_abs_diff(&f));

        let zero = SpectralFn::new(g.clone(), vec![c(0.0); g.len()]).unwrap();
        assert!(fourier_inverse(&ctx, &zero, &support).is_zero());
    }

    #[test]
    fn orthogonality_targets_and_refinement() {
        let ctx = QContext::float(0.5).unwrap();
        let g1 = build_grid(1, 8).unwrap();
        assert!((verify_orthogonality(&ctx, &w(&[0]), &w(&[0]), &g1) - c(1.0)).norm() < 1e-12);
        let g = build_grid(2, 32).unwrap();
        let diag = verify_orthogonality(&ctx, &w(&[0, 0]), &w(&[0, 0]), &g);
        assert!((diag - c(1.5)).norm() < 1e-2, "{diag}");
        let off = verify_orthogonality(&ctx, &w(&[1, 0]), &w(&[0, 0]), &g);
        assert!(off.norm() < 1e-2);
        let coarse = build_grid(2, 24).unwrap();
        let fine = build_grid(2, 48).unwrap();
        let err = |g: &Arc<QuadratureGrid>| (verify_orthogonality(&ctx, &w(&[1, 1]), &w(&[1, 1]), g) - c(1.5)).norm();
        assert!(err(&fine) < err(&coarse));
    }

    #[test]
    fn tilde_round_trip_and_parseval() {
        let ctx = QContext::float(0.5).unwrap();
        let g = build_grid(2, 32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = random_state::<Complex64, _>(&mut rng, 2, -2, 2, 6);
        let fhat = fourier_tilde(&ctx, &f, &g);
        let back = fourier_tilde_inverse(&ctx, &fhat, &weights_in_box(2, -3, 3));
        assert!(back.max_abs_diff(&f) < 1e-3, "{}", back.max_abs_diff(&f));
        assert!((fhat.norm_sq() - f.flat_norm_sq()).abs() < 1e-3 * f.flat_norm_sq().max(1.0));

        let g1 = build_grid(1, 16).unwrap();
        let f1 = random_state::<Complex64, _>(&mut rng, 1, -3, 3, 4);
        assert!(fourier_tilde(&ctx, &f1, &g1).max_abs_diff(&fourier_forward(&ctx, &f1, &g1)) < 1e-13);
    }

    #[test]
    fn spectral_decomposition() {
        let ctx = QContext::float(0.5).unwrap();
        let g = build_grid(2, 32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = random_state::<Complex64, _>(&mut rng, 2, -2, 2, 6);
        let support = weights_in_box(2, -4, 4);
        for r in 1..=2 {
            let lattice = &h_explicit(&ctx, r, &f, Branch::Lower) + &h_explicit(&ctx, r, &f, Branch::Raise);
            let spectral = fourier_inverse(&ctx, &apply_multiplier(r, &fourier_forward(&ctx, &f, &g)), &support);
            assert!(lattice.max_abs_diff(&spectral) < 2e-3, "r={r} {}", lattice.max_abs_diff(&spectral));
            let lhs = fourier_tilde(&ctx, &h_tilde(&ctx, r, &f), &g);
            let rhs = apply_multiplier(r, &fourier_tilde(&ctx, &f, &g));
            assert!(lhs.max_abs_diff(&rhs) < 1e-3);
        }
    }

    #[test]
    fn evolution_is_unitary_and_matches_free_motion() {
        let ctx = QContext::float(0.5).unwrap();
        let g = build_grid(1, 128).unwrap();
        let f = StateFn::indicator(w(&[0]));
        let fhat = fourier_tilde(&ctx, &f, &g);
        let t = 3.0;
        let support = weights_in_box(1, -24, 24);
        let out = evolve(&ctx, 1, &fhat, t, &support);
        // e^{2it cos ξ} = Σ_m i^m J_m(2t) e^{imξ}, so (e^{itH} 1_0)(m) = i^m J_m(2t).
        let direct = fourier_tilde_inverse(&ctx, &fhat.multiply(|xi| Complex64::from_polar(1.0, 2.0 * t * xi[0].cos())), &support);
        assert!(out.max_abs_diff(&direct) < 1e-14);
        let j0_6 = 0.150_645_257_250_996_9;
        assert!((out.get(&w(&[0])) - c(j0_6)).norm() < 1e-10);
        assert!((out.flat_norm_sq() - 1.0).abs() < 1e-10);
        assert!(evolve(&ctx, 1, &fhat, 0.0, &support).max_abs_diff(&f) < 1e-12);

        let g2 = build_grid(2, 40).unwrap();
        let f2 = StateFn::indicator(w(&[0, 0]));
        let fhat2 = fourier_tilde(&ctx, &f2, &g2);
        let (support, _) = ballistic_support(2, (0, 0), 3.0, None);
        let norm = evolve(&ctx, 1, &fhat2, 3.0, &support).flat_norm_sq();
        assert!((norm - 1.0).abs() < 5e-3, "{norm}");
    }

    #[test]
    fn box_enumeration() {
        assert_eq!(weights_in_box(2, 0, 1), vec![w(&[1, 1]), w(&[1, 0]), w(&[0, 0])]);
        assert_eq!(weights_in_box(3, -1, 1).len(), 10);
        assert_eq!(weights_in_box(0, 0, 0), vec![Weight::vacuum()]);
        let (set, clipped) = ballistic_support(1, (0, 0), 2.0, Some((-2, 2)));
        assert!(clipped);
        assert_eq!(set.len(), 5);
        assert!(build_box_grid(&[1.0, -1.0], &[2.0, -0.5], 8).is_ok());
        assert!(build_box_grid(&[1.0, 0.5], &[2.0, 1.5], 8).is_err());
    }
}
