//! Hall–Littlewood eigenfunctions and the flat-gauge wave functions.
//!
//! For `ξ` in the alcove `A = {π > ξ_1 > … > ξ_n > −π}`,
//!
//! ```text
//! φ_ξ(λ) = Σ_{σ∈S_n} C(ξ_σ) e^{i λ·ξ_σ},     C(ξ) = ∏_{j<k} (1 − q e^{i(ξ_k−ξ_j)}) / (1 − e^{i(ξ_k−ξ_j)})
//! ```
//!
//! is a joint eigenfunction of the hierarchy. The wave function `Ψ_ξ` is available in its
//! defining form ([`psi`]) and in the alternating plane-wave form ([`psi_alternating`]), the
//! latter being smooth and antisymmetric on the whole torus.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{delta_n, Weight};
use crate::perm::{self, Perm};
use crate::qnum::FloatContext;

/// Distance below which two angles count as coinciding.
pub const SINGULAR_TOL: f64 = 1e-13;

/// A point of the open alcove `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralPoint {
    xi: Vec<f64>,
}

impl SpectralPoint {
    pub fn new(xi: Vec<f64>) -> Result<Self> {
        if in_alcove(&xi) {
            Ok(Self { xi })
        } else {
            Err(Error::OutsideAlcove(xi))
        }
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn dim(&self) -> usize {
        self.xi.len()
    }
}

pub fn in_alcove(xi: &[f64]) -> bool {
    let inside = xi.first().is_none_or(|&x| x < PI) && xi.last().is_none_or(|&x| x > -PI);
    inside && xi.windows(2).all(|w| w[0] > w[1])
}

/// `ρ = ((n−1)/2, (n−3)/2, …, (1−n)/2)`.
pub fn rho(n: usize) -> Vec<f64> {
    (0..n).map(|j| (n as f64 - 1.0) / 2.0 - j as f64).collect()
}

fn unit(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// `C(ξ)`; fails when two components coincide.
pub fn c_function(ctx: &FloatContext, xi: &[f64]) -> Result<Complex64> {
    let q = ctx.q_f64();
    let mut acc = Complex64::new(1.0, 0.0);
    for j in 0..xi.len() {
        for k in j + 1..xi.len() {
            let e = unit(xi[k] - xi[j]);
            let den = 1.0 - e;
            if den.norm() < SINGULAR_TOL {
                return Err(Error::Singular(xi.to_vec()));
            }
            acc *= (1.0 - q * e) / den;
        }
    }
    Ok(acc)
}

fn dot(lambda: &[i64], v: &[f64]) -> f64 {
    lambda.iter().zip(v).map(|(&l, &x)| l as f64 * x).sum()
}

/// A finite sum `Σ_k c_k e^{i λ·v_k}`, the shape shared by `φ_ξ` and the alternating `Ψ_ξ`.
/// Building it once per spectral point makes evaluation at many weights cheap.
#[derive(Clone, Debug)]
pub struct PlaneWaveSum {
    waves: Vec<(Vec<f64>, Complex64)>,
}

impl PlaneWaveSum {
    pub fn eval(&self, lambda: &[i64]) -> Complex64 {
        self.waves
            .iter()
            .map(|(v, c)| c * unit(dot(lambda, v)))
            .sum()
    }

    pub fn terms(&self) -> &[(Vec<f64>, Complex64)] {
        &self.waves
    }
}

/// The expansion of `φ_ξ` into plane waves.
pub fn phi_waves(ctx: &FloatContext, xi: &[f64]) -> Result<PlaneWaveSum> {
    let waves = perm::all(xi.len())
        .into_iter()
        .map(|sigma| {
            let v = perm::apply(&sigma, xi);
            c_function(ctx, &v).map(|c| (v, c))
        })
        .collect::<Result<_>>()?;
    Ok(PlaneWaveSum { waves })
}

/// `φ_ξ(λ)`.
pub fn phi(ctx: &FloatContext, xi: &[f64], lambda: &Weight) -> Result<Complex64> {
    Ok(phi_waves(ctx, xi)?.eval(lambda.parts()))
}

/// `e_r(x)`, the r-th elementary symmetric function; zero for `r > n`.
pub fn elementary_symmetric(r: usize, x: &[Complex64]) -> Complex64 {
    let mut e = vec![Complex64::new(0.0, 0.0); r + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for &xj in x {
        for k in (1..=r).rev() {
            e[k] = e[k] + e[k - 1] * xj;
        }
    }
    e[r]
}

/// `ε_r(ξ) = 2 Σ_{j_1<…<j_r} cos(ξ_{j_1} + … + ξ_{j_r})`.
pub fn epsilon_r(r: usize, xi: &[f64]) -> f64 {
    let n = xi.len();
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == r)
        .map(|m| {
            let angle: f64 = (0..n).filter(|&j| m >> j & 1 == 1).map(|j| xi[j]).sum();
            2.0 * angle.cos()
        })
        .sum()
}

/// The orthogonality density `Δ(ξ) = ∏_{j<k} |1 − e^{iθ}|² / |1 − q e^{iθ}|²`, `θ = ξ_k − ξ_j`.
/// It vanishes when two components coincide.
pub fn density(ctx: &FloatContext, xi: &[f64]) -> f64 {
    let q = ctx.q_f64();
    let mut acc = 1.0;
    for j in 0..xi.len() {
        for k in j + 1..xi.len() {
            let e = unit(xi[k] - xi[j]);
            acc *= (1.0 - e).norm_sqr() / (1.0 - q * e).norm_sqr();
        }
    }
    acc
}

/// `s(x) = (1 − q e^{ix}) / (1 − q e^{−ix})`.
pub fn s_phase(ctx: &FloatContext, x: f64) -> Complex64 {
    let q = ctx.q_f64();
    (1.0 - q * unit(x)) / (1.0 - q * unit(-x))
}

/// The principal square root `(1 − q e^{ix}) / |1 − q e^{ix}|` of [`s_phase`].
pub fn s_half(ctx: &FloatContext, x: f64) -> Complex64 {
    let num = 1.0 - ctx.q_f64() * unit(x);
    num / num.norm()
}

fn s_hat_generic(
    sigma: &Perm,
    xi: &[f64],
    s: impl Fn(f64) -> Complex64,
) -> Complex64 {
    let inv = perm::inverse(sigma);
    let mut acc = Complex64::new(1.0, 0.0);
    for j in 0..xi.len() {
        for k in j + 1..xi.len() {
            let factor = s(xi[k] - xi[j]);
            acc *= if inv[j] < inv[k] { factor } else { factor.conj() };
        }
    }
    acc
}

/// `Ŝ_σ(ξ)`: the product of `s(ξ_k − ξ_j)` over pairs `j<k` that `σ` keeps in order, times the
/// conjugates over the pairs it inverts.
pub fn s_hat_sigma(ctx: &FloatContext, sigma: &Perm, xi: &[f64]) -> Complex64 {
    s_hat_generic(sigma, xi, |x| s_phase(ctx, x))
}

/// `Ŝ_σ(ξ)^{1/2}`, the same product built from [`s_half`].
pub fn s_hat_sigma_half(ctx: &FloatContext, sigma: &Perm, xi: &[f64]) -> Complex64 {
    s_hat_generic(sigma, xi, |x| s_half(ctx, x))
}

fn i_power(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `Ψ_ξ(λ) = i^{n(n−1)/2} Δ(ξ)^{1/2} δ_n(λ)^{1/2} φ_ξ(λ)`.
pub fn psi(ctx: &FloatContext, xi: &[f64], lambda: &Weight) -> Result<Complex64> {
    let n = xi.len();
    let gauge = (density(ctx, xi) * delta_n(ctx, lambda).re).sqrt();
    Ok(i_power(n * n.saturating_sub(1) / 2) * gauge * phi(ctx, xi, lambda)?)
}

/// The plane-wave part `Σ_σ sign(σ) Ŝ_σ(ξ)^{1/2} e^{i(ρ+λ)·ξ_σ}` of the alternating form of `Ψ_ξ`;
/// multiply by `δ_n(λ)^{1/2}` to obtain `Ψ_ξ(λ)`.
pub fn psi_waves(ctx: &FloatContext, xi: &[f64]) -> PlaneWaveSum {
    let rho = rho(xi.len());
    let waves = perm::all(xi.len())
        .into_iter()
        .map(|sigma| {
            let v = perm::apply(&sigma, xi);
            let phase = unit(dot_f(&rho, &v));
            let c = perm::sign(&sigma) as f64 * s_hat_sigma_half(ctx, &sigma, xi) * phase;
            (v, c)
        })
        .collect();
    PlaneWaveSum { waves }
}

fn dot_f(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `Ψ_ξ(λ) = δ_n(λ)^{1/2} Σ_σ sign(σ) Ŝ_σ(ξ)^{1/2} e^{i(ρ+λ)·ξ_σ}`, defined on the whole torus.
pub fn psi_alternating(ctx: &FloatContext, xi: &[f64], lambda: &Weight) -> Complex64 {
    delta_n(ctx, lambda).re.sqrt() * psi_waves(ctx, xi).eval(lambda.parts())
}
