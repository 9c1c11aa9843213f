//! Comparison of the q-boson dynamics with the phase model (`q = 0`).
//!
//! A wave packet is a smooth bump `f̂` supported in a connected component of the regular domain
//! `A_r`, where the group velocity `∇ε_r` has pairwise distinct components. On such a component
//! the velocity-sorting permutation `σ_ξ` is constant and the scattering matrix is the
//! multiplier `Ŝ_r(ξ) = Ŝ_{σ_ξ}(ξ)`. Three lattice states are built from the same profile:
//!
//! ```text
//! f^(0)(t) = F̃_0^{−1}(e^{−itε_r} f̂)
//! f_±(t)   = F̃_q^{−1}(e^{−itε_r} Ŝ_r^{∓1/2} f̂)
//! ```
//!
//! and `f_±(t) − f^(0)(t) → 0` as `t → ±∞`. The classical packet `f^clas(t)` keeps only the
//! stationary plane wave and is supported on the ballistic region `t·V_clas`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{is_dominant, StateFn, Weight};
use crate::hall_littlewood::{epsilon_r, rho, s_hat_sigma, s_hat_sigma_half};
use crate::perm::{self, Perm};
use crate::qnum::{FloatContext, QContext};
use crate::spectral::{build_box_grid, fourier_tilde_inverse, QuadratureGrid, SpectralFn};

/// Minimal gap between velocity components for a point to count as regular.
pub const REGULAR_TOL: f64 = 1e-9;

/// Default inflation of the sampled velocity box.
pub const DEFAULT_CLASSICAL_MARGIN: f64 = 0.25;

/// Default number of lattice sites added around the classical box when measuring norms.
pub const DEFAULT_WINDOW_PAD: i64 = 30;

/// `∇ε_r(ξ)`, with `∂_j ε_r = −2 Σ_{|J|=r, J∋j} sin(Σ_{k∈J} ξ_k)`.
pub fn grad_epsilon(r: usize, xi: &[f64]) -> Vec<f64> {
    let n = xi.len();
    let mut grad = vec![0.0; n];
    for mask in (0u32..1 << n).filter(|m| m.count_ones() as usize == r) {
        let members: Vec<usize> = (0..n).filter(|&j| mask >> j & 1 == 1).collect();
        let s = (members.iter().map(|&k| xi[k]).sum::<f64>()).sin();
        for j in members {
            grad[j] -= 2.0 * s;
        }
    }
    grad
}

pub fn in_regular_domain(r: usize, xi: &[f64]) -> bool {
    let g = grad_epsilon(r, xi);
    (0..g.len()).all(|j| (j + 1..g.len()).all(|k| (g[j] - g[k]).abs() > REGULAR_TOL))
}

/// The permutation `σ_ξ` for which `(∇ε_r)_{σ_ξ}` is strictly decreasing.
pub fn sigma_xi(r: usize, xi: &[f64]) -> Result<Perm> {
    if !in_regular_domain(r, xi) {
        return Err(Error::NotRegular(xi.to_vec()));
    }
    let g = grad_epsilon(r, xi);
    let mut sigma: Perm = (0..g.len()).collect();
    sigma.sort_by(|&a, &b| g[b].partial_cmp(&g[a]).expect("finite gradient"));
    Ok(sigma)
}

/// `∏_j exp(−1/(1−u_j²))` with `u_j = (ξ_j − c_j)/w_j`, supported in the open box `|u_j| < 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BumpProfile {
    pub center: Vec<f64>,
    pub widths: Vec<f64>,
}

impl BumpProfile {
    pub fn new(center: Vec<f64>, widths: Vec<f64>) -> Result<Self> {
        if center.len() != widths.len() || widths.iter().any(|&w| w.is_nan() || w <= 0.0) {
            return Err(Error::Config(
                "packet centre and widths must have equal length and positive widths".into(),
            ));
        }
        Ok(Self { center, widths })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        let mut acc = 1.0;
        for ((x, c), w) in xi.iter().zip(&self.center).zip(&self.widths) {
            let u = (x - c) / w;
            if u.abs() >= 1.0 {
                return 0.0;
            }
            acc *= (-1.0 / (1.0 - u * u)).exp();
        }
        acc
    }

    pub fn lower(&self) -> Vec<f64> {
        self.center.iter().zip(&self.widths).map(|(c, w)| c - w).collect()
    }

    pub fn upper(&self) -> Vec<f64> {
        self.center.iter().zip(&self.widths).map(|(c, w)| c + w).collect()
    }
}

/// A validated wave packet: a bump profile in one component of `A_r` with its quadrature grid.
#[derive(Clone, Debug)]
pub struct WavePacket {
    profile: BumpProfile,
    r: usize,
    grid: Arc<QuadratureGrid>,
    sigma: Perm,
    velocity_lo: Vec<f64>,
    velocity_hi: Vec<f64>,
}

fn sample_points(lo: &[f64], hi: &[f64]) -> Vec<Vec<f64>> {
    let n = lo.len();
    let per_axis = (100f64.powf(1.0 / n as f64).ceil() as usize).max(2);
    let total = per_axis.pow(n as u32);
    (0..total)
        .map(|mut index| {
            let mut point = vec![0.0; n];
            for axis in (0..n).rev() {
                let k = index % per_axis;
                index /= per_axis;
                point[axis] = lo[axis] + (hi[axis] - lo[axis]) * k as f64 / (per_axis - 1) as f64;
            }
            point
        })
        .collect()
}

impl WavePacket {
    /// Validates the support by sampling at least 100 points of its closure plus every quadrature
    /// node: each must be in the alcove and regular, with one common `σ_ξ`.
    pub fn new(profile: BumpProfile, r: usize, order: usize) -> Result<Self> {
        let n = profile.dim();
        if r == 0 || r > n {
            return Err(Error::Config(format!("flow index r = {r} must lie in 1..={n}")));
        }
        let (lo, hi) = (profile.lower(), profile.upper());
        let grid = build_box_grid(&lo, &hi, order).map_err(|e| match e {
            Error::OutsideAlcove(point) => Error::PacketSupport {
                point,
                reason: "support box leaves the alcove".into(),
            },
            other => other,
        })?;
        let samples = sample_points(&lo, &hi);
        let mut sigma: Option<Perm> = None;
        let mut velocity_lo = vec![f64::INFINITY; n];
        let mut velocity_hi = vec![f64::NEG_INFINITY; n];
        for point in samples.iter().chain(grid.nodes()) {
            let here = sigma_xi(r, point).map_err(|_| Error::PacketSupport {
                point: point.clone(),
                reason: "velocity components coincide".into(),
            })?;
            match &sigma {
                None => sigma = Some(here),
                Some(s) if *s != here => {
                    return Err(Error::PacketSupport {
                        point: point.clone(),
                        reason: "support meets more than one component of the regular domain".into(),
                    })
                }
                Some(_) => {}
            }
            for (j, g) in grad_epsilon(r, point).into_iter().enumerate() {
                velocity_lo[j] = velocity_lo[j].min(g);
                velocity_hi[j] = velocity_hi[j].max(g);
            }
        }
        Ok(Self {
            profile,
            r,
            grid,
            sigma: sigma.expect("at least one sample"),
            velocity_lo,
            velocity_hi,
        })
    }

    pub fn profile(&self) -> &BumpProfile {
        &self.profile
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.profile.dim()
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    /// The ordering permutation `σ̂` shared by the whole support.
    pub fn sigma(&self) -> &Perm {
        &self.sigma
    }

    /// Componentwise range of `∇ε_r` over the sampled support.
    pub fn velocity_range(&self) -> (&[f64], &[f64]) {
        (&self.velocity_lo, &self.velocity_hi)
    }

    /// `f̂` at the nodes.
    pub fn spectral(&self) -> SpectralFn {
        SpectralFn::from_fn(self.grid.clone(), |xi| Complex64::new(self.profile.eval(xi), 0.0))
    }

    /// `e^{−itε_r} f̂`.
    pub fn free_evolution(&self, t: f64) -> SpectralFn {
        let r = self.r;
        self.spectral()
            .multiply(|xi| Complex64::from_polar(1.0, -t * epsilon_r(r, xi)))
    }
}

/// The exponent of the scattering multiplier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScatteringPower {
    Full,
    Inverse,
    Half,
    InverseHalf,
}

/// `Ŝ_r(ξ)^p` at a single point of the regular domain.
pub fn scattering_multiplier(ctx: &FloatContext, r: usize, xi: &[f64], power: ScatteringPower) -> Result<Complex64> {
    let sigma = sigma_xi(r, xi)?;
    Ok(match power {
        ScatteringPower::Full => s_hat_sigma(ctx, &sigma, xi),
        ScatteringPower::Inverse => s_hat_sigma(ctx, &sigma, xi).conj(),
        ScatteringPower::Half => s_hat_sigma_half(ctx, &sigma, xi),
        ScatteringPower::InverseHalf => s_hat_sigma_half(ctx, &sigma, xi).conj(),
    })
}

/// Nodewise multiplication of `fhat` (on the packet grid) by `Ŝ_r^p`.
pub fn scattering_matrix_apply(
    ctx: &FloatContext,
    packet: &WavePacket,
    fhat: &SpectralFn,
    power: ScatteringPower,
) -> Result<SpectralFn> {
    let r = packet.r;
    let factors: Vec<Complex64> = packet
        .grid
        .nodes()
        .iter()
        .map(|xi| scattering_multiplier(ctx, r, xi, power))
        .collect::<Result<_>>()?;
    let values = fhat.values().iter().zip(&factors).map(|(v, s)| v * s).collect();
    SpectralFn::new(fhat.grid().clone(), values)
}

/// The phase-model packet `f^(0)(t)` on the given support.
pub fn packet_q0(packet: &WavePacket, t: f64, support: &[Weight]) -> StateFn<Complex64> {
    fourier_tilde_inverse(&QContext::phase_model(), &packet.free_evolution(t), support)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Asymptote {
    /// `f_+`, matching `f^(0)` as `t → +∞`.
    Plus,
    /// `f_−`, matching `f^(0)` as `t → −∞`.
    Minus,
}

/// The q-boson packet `f_±(t) = F̃_q^{−1}(e^{−itε_r} Ŝ_r^{∓1/2} f̂)` on the given support.
pub fn packet_pm(
    ctx: &FloatContext,
    packet: &WavePacket,
    t: f64,
    which: Asymptote,
    support: &[Weight],
) -> Result<StateFn<Complex64>> {
    let power = match which {
        Asymptote::Plus => ScatteringPower::InverseHalf,
        Asymptote::Minus => ScatteringPower::Half,
    };
    let scattered = scattering_matrix_apply(ctx, packet, &packet.free_evolution(t), power)?;
    Ok(fourier_tilde_inverse(ctx, &scattered, support))
}

/// The ballistic region `Λ_n^clas(t)`: weights with `ρ + λ` in the box `t·(V_clas)_σ`, where
/// `V_clas` is the sampled velocity box inflated by a margin, `σ = σ̂` for `t > 0` and
/// `σ = σ̂∘σ_0` for `t < 0`, `σ_0` reversing the order.
#[derive(Clone, Debug, Serialize)]
pub struct ClassicalRegion {
    pub t: f64,
    pub sigma: Perm,
    pub sign: i32,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl ClassicalRegion {
    pub fn new(packet: &WavePacket, t: f64, margin: f64) -> Result<Self> {
        if t == 0.0 {
            return Err(Error::ZeroTime);
        }
        let n = packet.dim();
        let sigma = if t > 0.0 {
            packet.sigma.clone()
        } else {
            perm::compose(&packet.sigma, &perm::reversal(n))
        };
        let (lo, hi) = packet.velocity_range();
        let mut lower = vec![0.0; n];
        let mut upper = vec![0.0; n];
        for j in 0..n {
            let a = t * (lo[sigma[j]] - margin);
            let b = t * (hi[sigma[j]] + margin);
            lower[j] = a.min(b);
            upper[j] = a.max(b);
        }
        Ok(Self {
            t,
            sign: perm::sign(&sigma),
            sigma,
            lower,
            upper,
        })
    }

    pub fn contains(&self, lambda: &Weight) -> bool {
        let rho = rho(lambda.len());
        lambda
            .parts()
            .iter()
            .zip(&rho)
            .enumerate()
            .all(|(j, (&l, r))| {
                let x = l as f64 + r;
                x >= self.lower[j] && x <= self.upper[j]
            })
    }

    /// Dominant weights with `ρ + λ` in the box enlarged by `pad` sites per side.
    pub fn window(&self, pad: i64) -> Vec<Weight> {
        let n = self.lower.len();
        let rho = rho(n);
        let lo: Vec<i64> = (0..n).map(|j| (self.lower[j] - rho[j]).floor() as i64 - pad).collect();
        let hi: Vec<i64> = (0..n).map(|j| (self.upper[j] - rho[j]).ceil() as i64 + pad).collect();
        weights_in_rectangle(&lo, &hi)
    }

    pub fn weights(&self) -> Vec<Weight> {
        self.window(0).into_iter().filter(|l| self.contains(l)).collect()
    }
}

/// Dominant weights with `lo_j ≤ λ_j ≤ hi_j`.
pub fn weights_in_rectangle(lo: &[i64], hi: &[i64]) -> Vec<Weight> {
    fn rec(lo: &[i64], hi: &[i64], current: &mut Vec<i64>, out: &mut Vec<Weight>) {
        let j = current.len();
        if j == lo.len() {
            out.push(Weight::new(current.clone()).expect("non-increasing by construction"));
            return;
        }
        let top = current.last().map_or(hi[j], |&p| p.min(hi[j]));
        for p in (lo[j]..=top).rev() {
            current.push(p);
            rec(lo, hi, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(lo, hi, &mut Vec::new(), &mut out);
    debug_assert!(out.iter().all(|w| is_dominant(w.parts())));
    out
}

/// The classical packet `f^clas(t)` on `Λ_n^clas(t)`:
/// `sign(σ) (2π)^{−n} ∫ e^{i(ρ+λ)·ξ_σ − itε_r(ξ)} f̂(ξ) dξ`.
pub fn packet_classical(packet: &WavePacket, region: &ClassicalRegion) -> StateFn<Complex64> {
    let n = packet.dim();
    let rho = rho(n);
    let evolved = packet.free_evolution(region.t);
    let grid = packet.grid.clone();
    let permuted: Vec<Vec<f64>> = grid.nodes().iter().map(|xi| perm::apply(&region.sigma, xi)).collect();
    let support = region.weights();
    let norm = region.sign as f64 / (2.0 * PI).powi(n as i32);
    let values: Vec<Complex64> = support
        .par_iter()
        .map(|lambda| {
            let x: Vec<f64> = lambda.parts().iter().zip(&rho).map(|(&l, r)| l as f64 + r).collect();
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, v) in permuted.iter().enumerate() {
                let phase: f64 = x.iter().zip(v).map(|(a, b)| a * b).sum();
                acc += evolved.values()[i] * Complex64::from_polar(grid.weights()[i], phase);
            }
            acc * norm
        })
        .collect();
    let mut out = StateFn::zero(n);
    for (lambda, v) in support.into_iter().zip(values) {
        out.accumulate(lambda, v);
    }
    out
}

/// One time slice of [`asymptotics_scan`].
#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub t: f64,
    pub norm_fplus_minus_f0: f64,
    pub norm_fminus_minus_f0: f64,
    pub norm_f0_minus_fclas: f64,
    /// `‖f_+(t)‖` for `t ≥ 0`, `‖f_−(t)‖` for `t < 0`.
    pub norm_fpm: f64,
    pub norm_f0: f64,
    /// Share of `‖f^(0)‖²` carried by the outermost ring of the lattice window.
    pub tail_fraction: f64,
    pub window_size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanSettings {
    pub margin: f64,
    pub pad: i64,
}

impl Default for ScanSettings {
    fn default() -> Self {
        Self {
            margin: DEFAULT_CLASSICAL_MARGIN,
            pad: DEFAULT_WINDOW_PAD,
        }
    }
}

fn l2_diff(a: &StateFn<Complex64>, b: &StateFn<Complex64>) -> f64 {
    (a - b).flat_norm_sq().sqrt()
}

fn ring_fraction(f: &StateFn<Complex64>, window: &[Weight]) -> f64 {
    let n = f.grade();
    let total = f.flat_norm_sq();
    if total == 0.0 || window.is_empty() {
        return 0.0;
    }
    let lo: Vec<i64> = (0..n).map(|j| window.iter().map(|w| w.parts()[j]).min().unwrap()).collect();
    let hi: Vec<i64> = (0..n).map(|j| window.iter().map(|w| w.parts()[j]).max().unwrap()).collect();
    let ring: f64 = f
        .iter()
        .filter(|(w, _)| (0..n).any(|j| w.parts()[j] == lo[j] || w.parts()[j] == hi[j]))
        .map(|(_, v)| v.norm_sqr())
        .sum();
    ring / total
}

/// Difference norms between the q-boson, phase-model and classical packets at each time.
/// Rows are returned in ascending order of `t`; `t = 0` rows report a zero classical column.
pub fn asymptotics_scan(
    ctx: &FloatContext,
    packet: &WavePacket,
    times: &[f64],
    settings: &ScanSettings,
) -> Result<Vec<ScanRow>> {
    let mut times = times.to_vec();
    times.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
    let mut rows = Vec::with_capacity(times.len());
    for t in times {
        let (window, fclas) = if t == 0.0 {
            let lo: Vec<i64> = vec![-settings.pad; packet.dim()];
            let hi: Vec<i64> = vec![settings.pad; packet.dim()];
            (weights_in_rectangle(&lo, &hi), None)
        } else {
            let region = ClassicalRegion::new(packet, t, settings.margin)?;
            (region.window(settings.pad), Some(packet_classical(packet, &region)))
        };
        let f0 = packet_q0(packet, t, &window);
        let fplus = packet_pm(ctx, packet, t, Asymptote::Plus, &window)?;
        let fminus = packet_pm(ctx, packet, t, Asymptote::Minus, &window)?;
        let matched = if t >= 0.0 { &fplus } else { &fminus };
        rows.push(ScanRow {
            t,
            norm_fplus_minus_f0: l2_diff(&fplus, &f0),
            norm_fminus_minus_f0: l2_diff(&fminus, &f0),
            norm_f0_minus_fclas: fclas.as_ref().map_or(0.0, |c| l2_diff(&f0, c)),
            norm_fpm: matched.flat_norm_sq().sqrt(),
            norm_f0: f0.flat_norm_sq().sqrt(),
            tail_fraction: ring_fraction(&f0, &window),
            window_size: window.len(),
        });
    }
    Ok(rows)
}

/// `‖f̂‖ / (2π)^{n/2}`, the lattice norm every packet must carry.
pub fn expected_packet_norm(packet: &WavePacket) -> f64 {
    packet.spectral().norm_sq().sqrt()
}
