//! q-arithmetic at a fixed deformation parameter.
//!
//! Two scalar fields are supported: exact rationals ([`BigRational`]) for the algebraic
//! identities, which are polynomial in `q` and must hold without rounding, and complex
//! doubles ([`Complex64`]) for spectral and quadrature work.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::fock::Weight;

/// Absolute tolerance for floating-point identity checks.
pub const FLOAT_TOL: f64 = 1e-10;

/// Values below this magnitude are dropped from float-mode states.
pub const FLOAT_PRUNE: f64 = 1e-15;

/// A field element in one of the two supported modes.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// `true` for exact rational arithmetic.
    const EXACT: bool;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Complex conjugate; the identity on rationals.
    fn conj(&self) -> Self;

    /// Whether the value should be pruned from a state.
    fn is_negligible(&self) -> bool;

    fn magnitude(&self) -> f64;

    fn to_complex(&self) -> Complex64;

    /// Equality up to the mode's tolerance: exact for rationals, [`FLOAT_TOL`] otherwise.
    fn approx_eq(&self, other: &Self) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.clone() - other.clone()).magnitude() <= FLOAT_TOL
        }
    }

    fn write_json(&self, record: &mut Map<String, Value>);

    fn read_json(record: &Map<String, Value>) -> Result<Self>;
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn write_json(&self, record: &mut Map<String, Value>) {
        record.insert("num".into(), Value::String(self.numer().to_string()));
        record.insert("den".into(), Value::String(self.denom().to_string()));
    }

    fn read_json(record: &Map<String, Value>) -> Result<Self> {
        let field = |key: &str| -> Result<BigInt> {
            match record.get(key) {
                Some(Value::String(s)) => s
                    .parse()
                    .map_err(|_| Error::Config(format!("bad integer in field {key}: {s}"))),
                Some(Value::Number(n)) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| Error::Config(format!("field {key} is not an integer"))),
                _ => Err(Error::Config(format!("missing field {key}"))),
            }
        };
        let den = field("den")?;
        if den.is_zero() {
            return Err(Error::Config("zero denominator".into()));
        }
        Ok(BigRational::new(field("num")?, den))
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn is_negligible(&self) -> bool {
        self.norm() < FLOAT_PRUNE
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn write_json(&self, record: &mut Map<String, Value>) {
        record.insert("re".into(), Value::from(self.re));
        record.insert("im".into(), Value::from(self.im));
    }

    fn read_json(record: &Map<String, Value>) -> Result<Self> {
        let field = |key: &str| -> Result<f64> {
            record
                .get(key)
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::Config(format!("missing numeric field {key}")))
        };
        Ok(Complex64::new(field("re")?, field("im")?))
    }
}

/// The deformation parameter `q` in a given scalar mode.
#[derive(Clone, Debug)]
pub struct QContext<S> {
    q: S,
    q_f64: f64,
}

pub type ExactContext = QContext<BigRational>;
pub type FloatContext = QContext<Complex64>;

impl QContext<BigRational> {
    /// Exact mode at `q = num/den`, requiring `0 < q < 1`.
    pub fn exact(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidQ(format!("{num}/{den}")));
        }
        Self::from_rational(BigRational::from_ratio(num, den))
    }

    pub fn from_rational(q: BigRational) -> Result<Self> {
        if !(q > BigRational::zero() && q < BigRational::one()) {
            return Err(Error::InvalidQ(format!("{q} is not in (0, 1)")));
        }
        let q_f64 = q.to_f64().unwrap_or(f64::NAN);
        Ok(Self { q, q_f64 })
    }

    /// The same `q` in float mode.
    pub fn to_float(&self) -> FloatContext {
        QContext {
            q: Complex64::new(self.q_f64, 0.0),
            q_f64: self.q_f64,
        }
    }
}

impl QContext<Complex64> {
    /// Float mode, requiring `0 < q < 1`.
    pub fn float(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidQ(format!("{q} is not in (0, 1)")));
        }
        Ok(Self {
            q: Complex64::new(q, 0.0),
            q_f64: q,
        })
    }

    /// The `q = 0` limit (phase model of impenetrable bosons).
    pub fn phase_model() -> Self {
        Self {
            q: Complex64::zero(),
            q_f64: 0.0,
        }
    }
}

impl<S: Scalar> QContext<S> {
    pub fn q(&self) -> &S {
        &self.q
    }

    pub fn q_f64(&self) -> f64 {
        self.q_f64
    }

    pub fn is_exact(&self) -> bool {
        S::EXACT
    }

    /// `q^m`.
    pub fn q_pow(&self, m: usize) -> S {
        let mut acc = S::one();
        for _ in 0..m {
            acc = acc * self.q.clone();
        }
        acc
    }

    /// `[m] = 1 + q + … + q^{m-1}`, with `[0] = 0`.
    pub fn q_int(&self, m: usize) -> S {
        let mut acc = S::zero();
        let mut power = S::one();
        for _ in 0..m {
            acc = acc + power.clone();
            power = power * self.q.clone();
        }
        acc
    }

    /// `[m]! = [m][m-1]⋯[1]`, with `[0]! = 1`.
    pub fn q_factorial(&self, m: usize) -> S {
        (1..=m).fold(S::one(), |acc, k| acc * self.q_int(k))
    }

    /// The Gaussian binomial `[m]! / ([k]! [m-k]!)`.
    pub fn q_binomial(&self, m: i64, k: i64) -> Result<S> {
        if k < 0 || m < k {
            return Err(Error::InvalidBinomial { m, k });
        }
        let (m, k) = (m as usize, k as usize);
        Ok(self.q_factorial(m) / (self.q_factorial(k) * self.q_factorial(m - k)))
    }

    /// Poincaré polynomial of `S_n`, which equals `[n]!`.
    pub fn poincare_sym(&self, n: usize) -> S {
        self.q_factorial(n)
    }

    /// Poincaré polynomial of the stabilizer of `λ`: `∏_l [m_l(λ)]!`.
    pub fn poincare_stabilizer(&self, lambda: &Weight) -> S {
        lambda
            .multiplicities()
            .into_iter()
            .fold(S::one(), |acc, (_, m)| acc * self.q_factorial(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm;

    fn half() -> ExactContext {
        QContext::exact(1, 2).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    /// `Σ_σ q^{ℓ(σ)}` over the given permutations, computed by inversion counting.
    fn length_generating<'a>(ctx: &ExactContext, perms: impl Iterator<Item = &'a Vec<usize>>) -> BigRational {
        perms.fold(BigRational::zero(), |acc, s| acc + ctx.q_pow(perm::length(s)))
    }

    #[test]
    fn q_int_examples() {
        let ctx = half();
        assert_eq!(ctx.q_int(0), rat(0, 1));
        assert_eq!(ctx.q_int(1), rat(1, 1));
        assert_eq!(ctx.q_int(3), rat(7, 4));
    }

    #[test]
    fn q_factorial_examples() {
        let ctx = half();
        assert_eq!(ctx.q_factorial(0), rat(1, 1));
        assert_eq!(ctx.q_factorial(2), rat(3, 2));
        assert_eq!(ctx.q_factorial(3), rat(21, 8));
    }

    #[test]
    fn q_binomial_examples() {
        let ctx = half();
        let q = rat(1, 2);
        assert_eq!(ctx.q_binomial(5, 0).unwrap(), rat(1, 1));
        assert_eq!(ctx.q_binomial(2, 1).unwrap(), rat(1, 1) + q.clone());
        // 1 + q + 2q² + q³ + q⁴
        let expected = rat(1, 1) + q.clone() + rat(2, 1) * ctx.q_pow(2) + ctx.q_pow(3) + ctx.q_pow(4);
        assert_eq!(ctx.q_binomial(4, 2).unwrap(), expected);
        assert!(ctx.q_binomial(2, 3).is_err());
        assert!(ctx.q_binomial(2, -1).is_err());
    }

    #[test]
    fn q_binomial_symmetry_and_pascal() {
        for (num, den) in [(1, 2), (1, 3), (2, 7)] {
            let ctx = QContext::exact(num, den).unwrap();
            for m in 0..=8 {
                for k in 0..=m {
                    assert_eq!(ctx.q_binomial(m, k).unwrap(), ctx.q_binomial(m, m - k).unwrap());
                    if m >= 1 && k >= 1 && k < m {
                        let lhs = ctx.q_binomial(m, k).unwrap();
                        let rhs = ctx.q_binomial(m - 1, k - 1).unwrap()
                            + ctx.q_pow(k as usize) * ctx.q_binomial(m - 1, k).unwrap();
                        assert_eq!(lhs, rhs, "m={m} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn poincare_matches_length_generating_function() {
        let ctx = QContext::exact(2, 5).unwrap();
        for n in 0..=6 {
            let perms = perm::all(n);
            assert_eq!(ctx.poincare_sym(n), length_generating(&ctx, perms.iter()), "n={n}");
        }
        let ctx = half();
        assert_eq!(ctx.poincare_sym(1), rat(1, 1));
        assert_eq!(ctx.poincare_sym(2), rat(3, 2));
        assert_eq!(ctx.poincare_sym(3), rat(3, 2) * rat(7, 4));
    }

    #[test]
    fn stabilizer_matches_brute_force() {
        let ctx = QContext::exact(1, 3).unwrap();
        let weights: Vec<Vec<i64>> = vec![
            vec![3, 1, 0],
            vec![0, 0],
            vec![2, 2, 2],
            vec![1, 1, 0, 0],
            vec![2, 1, 1, 1, -1],
            vec![0, 0, 0, 0, 0],
            vec![4, 4, 1, 1, 1],
        ];
        for parts in weights {
            let lambda = Weight::new(parts.clone()).unwrap();
            let perms = perm::all(parts.len());
            let stabilizer = perms.iter().filter(|s| perm::apply(s, &parts) == parts);
            assert_eq!(ctx.poincare_stabilizer(&lambda), length_generating(&ctx, stabilizer), "{parts:?}");
        }
        let ctx = half();
        let w = |p: Vec<i64>| Weight::new(p).unwrap();
        assert_eq!(ctx.poincare_stabilizer(&w(vec![3, 1, 0])), rat(1, 1));
        assert_eq!(ctx.poincare_stabilizer(&w(vec![0, 0])), rat(3, 2));
        assert_eq!(ctx.poincare_stabilizer(&w(vec![2, 2, 2])), rat(21, 8));
    }

    #[test]
    fn float_mode_agrees_with_exact() {
        let exact = half();
        let float = exact.to_float();
        for m in 0..8 {
            assert!((float.q_factorial(m).re - exact.q_factorial(m).to_f64().unwrap()).abs() < FLOAT_TOL);
        }
    }

    #[test]
    fn rejects_bad_q() {
        assert!(QContext::exact(1, 1).is_err());
        assert!(QContext::exact(0, 3).is_err());
        assert!(QContext::exact(3, 2).is_err());
        assert!(QContext::float(0.0).is_err());
        assert!(QContext::float(1.5).is_err());
        assert_eq!(QContext::phase_model().q_int(4), Complex64::new(1.0, 0.0));
    }
}
