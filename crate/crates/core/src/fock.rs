//! Dominant weights, finitely supported states and the q-boson field algebra.
//!
//! A state of grade `n` is a finitely supported function on the cone
//! `Λ_n = {λ ∈ ℤ^n : λ_1 ≥ … ≥ λ_n}`. Operators act on functions, so e.g.
//! `(β_l f)(λ) = f(β*_l λ)`; on indicator states this reproduces the familiar
//! `β_l|λ⟩ = |β_l λ⟩`, `β*_l|λ⟩ = [m_l(λ)+1] |β*_l λ⟩`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::qnum::{QContext, Scalar};

/// A dominant weight: a non-increasing integer vector. The empty weight labels the vacuum.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(Vec<i64>);

pub fn is_dominant(parts: &[i64]) -> bool {
    parts.windows(2).all(|w| w[0] >= w[1])
}

impl Weight {
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if is_dominant(&parts) {
            Ok(Self(parts))
        } else {
            Err(Error::NotDominant(parts))
        }
    }

    /// Sorts the parts into the dominant representative of their `S_n`-orbit.
    pub fn from_unsorted(mut parts: Vec<i64>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    pub fn vacuum() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn into_parts(self) -> Vec<i64> {
        self.0
    }

    /// `m_l(λ)`: the number of parts equal to `l`.
    pub fn multiplicity(&self, l: i64) -> usize {
        self.0.iter().filter(|&&p| p == l).count()
    }

    /// Distinct part values with their multiplicities, in decreasing order of value.
    pub fn multiplicities(&self) -> Vec<(i64, usize)> {
        let mut out: Vec<(i64, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((value, count)) if *value == p => *count += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `β*_l λ`: insert a part equal to `l`.
    pub fn insert(&self, l: i64) -> Weight {
        let pos = self.0.iter().position(|&p| p < l).unwrap_or(self.0.len());
        let mut parts = Vec::with_capacity(self.0.len() + 1);
        parts.extend_from_slice(&self.0[..pos]);
        parts.push(l);
        parts.extend_from_slice(&self.0[pos..]);
        Weight(parts)
    }

    /// `β_l λ`: delete one part equal to `l`.
    pub fn delete(&self, l: i64) -> Result<Weight> {
        match self.0.iter().position(|&p| p == l) {
            Some(pos) => {
                let mut parts = self.0.clone();
                parts.remove(pos);
                Ok(Weight(parts))
            }
            None => Err(Error::MissingPart {
                weight: self.0.clone(),
                part: l,
            }),
        }
    }

    /// Replace one part equal to `from` by `to`, if such a part exists.
    fn replace_part(&self, from: i64, to: i64) -> Option<Weight> {
        let mut parts = self.0.clone();
        let pos = parts.iter().position(|&p| p == from)?;
        parts.remove(pos);
        let ins = parts.iter().position(|&p| p < to).unwrap_or(parts.len());
        parts.insert(ins, to);
        Some(Weight(parts))
    }

    /// `λ + offset`, if the result is dominant.
    pub fn shifted(&self, offset: &[i64]) -> Option<Weight> {
        debug_assert_eq!(offset.len(), self.0.len());
        let parts: Vec<i64> = self.0.iter().zip(offset).map(|(a, b)| a + b).collect();
        is_dominant(&parts).then_some(Weight(parts))
    }

    pub fn min_part(&self) -> Option<i64> {
        self.0.last().copied()
    }

    pub fn max_part(&self) -> Option<i64> {
        self.0.first().copied()
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// A finitely supported function `Λ_n → S`. Zero values are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct StateFn<S> {
    grade: usize,
    values: BTreeMap<Weight, S>,
}

impl<S: Scalar> StateFn<S> {
    pub fn zero(grade: usize) -> Self {
        Self {
            grade,
            values: BTreeMap::new(),
        }
    }

    /// The indicator `|λ⟩`.
    pub fn indicator(lambda: Weight) -> Self {
        let mut state = Self::zero(lambda.len());
        state.values.insert(lambda, S::one());
        state
    }

    pub fn from_pairs(grade: usize, pairs: impl IntoIterator<Item = (Weight, S)>) -> Result<Self> {
        let mut state = Self::zero(grade);
        for (w, v) in pairs {
            state.add_at(w, v)?;
        }
        Ok(state)
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn get(&self, lambda: &Weight) -> S {
        self.values.get(lambda).cloned().unwrap_or_else(S::zero)
    }

    /// Accumulate `value` at `lambda`, pruning the entry if it becomes negligible.
    pub fn add_at(&mut self, lambda: Weight, value: S) -> Result<()> {
        if lambda.len() != self.grade {
            return Err(Error::GradeMismatch {
                expected: self.grade,
                found: lambda.len(),
            });
        }
        if value.is_negligible() {
            return Ok(());
        }
        use std::collections::btree_map::Entry;
        match self.values.entry(lambda) {
            Entry::Vacant(e) => {
                e.insert(value);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + value;
                if sum.is_negligible() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    /// Internal accumulation for operator images, whose keys have the right grade by construction.
    pub(crate) fn accumulate(&mut self, lambda: Weight, value: S) {
        debug_assert_eq!(lambda.len(), self.grade);
        self.add_at(lambda, value).expect("grade checked by construction");
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, &S)> {
        self.values.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Weight> {
        self.values.keys()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.grade);
        for (w, v) in &self.values {
            out.accumulate(w.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn map_values(&self, mut f: impl FnMut(&Weight, &S) -> S) -> Self {
        let mut out = Self::zero(self.grade);
        for (w, v) in &self.values {
            out.accumulate(w.clone(), f(w, v));
        }
        out
    }

    /// Whether every value agrees with `other` up to the scalar mode's tolerance.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.grade == other.grade && (self - other).values.values().all(|v| v.approx_eq(&S::zero()))
    }

    /// Largest `|f(λ) - g(λ)|` over the union of supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other)
            .values
            .values()
            .map(Scalar::magnitude)
            .fold(0.0, f64::max)
    }

    /// Smallest and largest part over the support, if any part exists.
    pub fn part_range(&self) -> Option<(i64, i64)> {
        let lo = self.values.keys().filter_map(Weight::min_part).min()?;
        let hi = self.values.keys().filter_map(Weight::max_part).max()?;
        Some((lo, hi))
    }

    /// Flat `ℓ²` norm squared, `Σ |f(λ)|²`.
    pub fn flat_norm_sq(&self) -> f64 {
        self.values.values().map(|v| v.magnitude().powi(2)).sum()
    }

    pub fn to_json(&self) -> Value {
        let records = self
            .values
            .iter()
            .map(|(w, v)| {
                let mut record = Map::new();
                record.insert("weight".into(), Value::from(w.parts().to_vec()));
                v.write_json(&mut record);
                Value::Object(record)
            })
            .collect();
        Value::Array(records)
    }

    /// Parse the array-of-records format written by [`StateFn::to_json`].
    pub fn from_json(grade: usize, value: &Value) -> Result<Self> {
        let records = value
            .as_array()
            .ok_or_else(|| Error::Config("state must be a JSON array".into()))?;
        let mut state = Self::zero(grade);
        for record in records {
            let record = record
                .as_object()
                .ok_or_else(|| Error::Config("state record must be an object".into()))?;
            let parts: Vec<i64> = record
                .get("weight")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Config("record without weight".into()))?
                .iter()
                .map(|p| p.as_i64().ok_or_else(|| Error::Config("non-integer part".into())))
                .collect::<Result<_>>()?;
            state.add_at(Weight::new(parts)?, S::read_json(record)?)?;
        }
        Ok(state)
    }
}

impl<S: Scalar> Add for &StateFn<S> {
    type Output = StateFn<S>;
    fn add(self, rhs: Self) -> StateFn<S> {
        assert_eq!(self.grade, rhs.grade, "grade mismatch in state addition");
        let mut out = self.clone();
        for (w, v) in &rhs.values {
            out.accumulate(w.clone(), v.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for &StateFn<S> {
    type Output = StateFn<S>;
    fn sub(self, rhs: Self) -> StateFn<S> {
        assert_eq!(self.grade, rhs.grade, "grade mismatch in state subtraction");
        let mut out = self.clone();
        for (w, v) in &rhs.values {
            out.accumulate(w.clone(), -v.clone());
        }
        out
    }
}

impl<S: Scalar> Neg for &StateFn<S> {
    type Output = StateFn<S>;
    fn neg(self) -> StateFn<S> {
        self.map_values(|_, v| -v.clone())
    }
}

impl<S: Scalar> Mul<&StateFn<S>> for &QContext<S> {
    type Output = StateFn<S>;
    /// Multiplication by `q`.
    fn mul(self, rhs: &StateFn<S>) -> StateFn<S> {
        rhs.scale(self.q())
    }
}

/// `β_l`: grade `n → n-1`; the zero map on the vacuum grade.
pub fn beta<S: Scalar>(l: i64, f: &StateFn<S>) -> StateFn<S> {
    if f.grade == 0 {
        return StateFn::zero(0);
    }
    let mut out = StateFn::zero(f.grade - 1);
    for (mu, v) in f.iter() {
        if let Ok(lambda) = mu.delete(l) {
            out.accumulate(lambda, v.clone());
        }
    }
    out
}

/// `β*_l`: grade `n → n+1`.
pub fn beta_star<S: Scalar>(ctx: &QContext<S>, l: i64, f: &StateFn<S>) -> StateFn<S> {
    let mut out = StateFn::zero(f.grade + 1);
    for (mu, v) in f.iter() {
        let coeff = ctx.q_int(mu.multiplicity(l) + 1);
        out.accumulate(mu.insert(l), coeff * v.clone());
    }
    out
}

/// `N_l f = q^{m_l} f`.
pub fn num_op<S: Scalar>(ctx: &QContext<S>, l: i64, f: &StateFn<S>) -> StateFn<S> {
    f.map_values(|mu, v| ctx.q_pow(mu.multiplicity(l)) * v.clone())
}

/// The hopping operator `a_l = β*_{l+1} β_l`, moving a particle from `l` to `l+1`.
pub fn hop<S: Scalar>(ctx: &QContext<S>, l: i64, f: &StateFn<S>) -> StateFn<S> {
    let mut out = StateFn::zero(f.grade);
    for (mu, v) in f.iter() {
        if let Some(lambda) = mu.replace_part(l, l + 1) {
            let coeff = ctx.q_int(mu.multiplicity(l + 1) + 1);
            out.accumulate(lambda, coeff * v.clone());
        }
    }
    out
}

/// The hopping operator `a*_l = β_{l+1} β*_l`, moving a particle from `l+1` to `l`.
pub fn hop_star<S: Scalar>(ctx: &QContext<S>, l: i64, f: &StateFn<S>) -> StateFn<S> {
    let mut out = StateFn::zero(f.grade);
    for (mu, v) in f.iter() {
        if let Some(lambda) = mu.replace_part(l + 1, l) {
            let coeff = ctx.q_int(mu.multiplicity(l) + 1);
            out.accumulate(lambda, coeff * v.clone());
        }
    }
    out
}

/// `δ_n(λ) = 1 / ∏_l [m_l(λ)]!`.
pub fn delta_n<S: Scalar>(ctx: &QContext<S>, lambda: &Weight) -> S {
    S::one() / ctx.poincare_stabilizer(lambda)
}

/// `⟨f, g⟩_n = Σ_λ f(λ) conj(g(λ)) δ_n(λ)`.
pub fn inner_product<S: Scalar>(ctx: &QContext<S>, f: &StateFn<S>, g: &StateFn<S>) -> Result<S> {
    if f.grade != g.grade {
        return Err(Error::GradeMismatch {
            expected: f.grade,
            found: g.grade,
        });
    }
    let mut acc = S::zero();
    for (lambda, v) in f.iter() {
        if let Some(w) = g.values.get(lambda) {
            acc = acc + v.clone() * w.conj() * delta_n(ctx, lambda);
        }
    }
    Ok(acc)
}

/// A random state of the given grade with `terms` entries whose parts lie in `lo..=hi` and whose
/// values are small rationals `a/b` with `a ∈ [-5, 5]`, `b ∈ [1, 4]`.
pub fn random_state<S: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    grade: usize,
    lo: i64,
    hi: i64,
    terms: usize,
) -> StateFn<S> {
    let mut state = StateFn::zero(grade);
    for _ in 0..terms {
        let parts = (0..grade).map(|_| rng.gen_range(lo..=hi)).collect();
        let value = S::from_ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        state.accumulate(Weight::from_unsorted(parts), value);
    }
    state
}
