//! The commuting hierarchy `H_r`, `H*_r`.
//!
//! Two independent constructions are provided. [`h_def`] builds the operators from symmetric
//! monomials in the hopping operators and serves as a brute-force oracle; [`h_explicit`] applies
//! the closed-form action
//!
//! ```text
//! (H_r  f)(λ) = Σ_{|J|=r, λ−e_J ∈ Λ_n} V_{λ,J^c} f(λ − e_J)
//! (H*_r f)(λ) = Σ_{|J|=r, λ+e_J ∈ Λ_n} V_{λ,J}   f(λ + e_J)
//! ```
//!
//! with `V_{λ,J} = ∏_{j∈J, k∉J, j<k, λ_j=λ_k} [k−j+1]/[k−j]`.

use num_complex::Complex64;

use crate::fock::{delta_n, hop, hop_star, StateFn, Weight};
use crate::qnum::{QContext, Scalar};

/// A partition `η_1 ≥ … ≥ η_p ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionEta {
    parts: Vec<usize>,
}

impl PartitionEta {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `[η]! = [η_1]! ⋯ [η_p]!`.
    pub fn q_factorial<S: Scalar>(&self, ctx: &QContext<S>) -> S {
        self.parts
            .iter()
            .fold(S::one(), |acc, &p| acc * ctx.q_factorial(p))
    }

    /// All distinct reorderings of the parts, each listed once.
    pub fn distinct_compositions(&self) -> Vec<Vec<usize>> {
        fn rec(rest: &mut Vec<usize>, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if rest.is_empty() {
                out.push(current.clone());
                return;
            }
            let mut seen = Vec::new();
            for i in 0..rest.len() {
                let v = rest[i];
                if seen.contains(&v) {
                    continue;
                }
                seen.push(v);
                rest.remove(i);
                current.push(v);
                rec(rest, current, out);
                current.pop();
                rest.insert(i, v);
            }
        }
        let mut out = Vec::new();
        rec(&mut self.parts.clone(), &mut Vec::new(), &mut out);
        out
    }
}

/// All partitions of `r`, in reverse lexicographic order.
pub fn partitions_of(r: usize) -> Vec<PartitionEta> {
    fn rec(remaining: usize, max: usize, current: &mut Vec<usize>, out: &mut Vec<PartitionEta>) {
        if remaining == 0 {
            out.push(PartitionEta {
                parts: current.clone(),
            });
            return;
        }
        for part in (1..=remaining.min(max)).rev() {
            current.push(part);
            rec(remaining - part, part, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    if r > 0 {
        rec(r, r, &mut Vec::new(), &mut out);
    }
    out
}

/// Which half of the hierarchy is meant.
///
/// `Lower` is `H_r`, built from the hopping operators `a_l` and reading `f` at `λ − e_J`;
/// `Raise` is `H*_r`, built from `a*_l` and reading `f` at `λ + e_J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Lower,
    Raise,
}

impl Branch {
    pub fn adjoint(self) -> Self {
        match self {
            Branch::Lower => Branch::Raise,
            Branch::Raise => Branch::Lower,
        }
    }
}

/// A subset `J ⊂ {1, …, n}` stored as a bitmask, bit `j−1` for index `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MoveSet {
    mask: u32,
    n: usize,
}

impl MoveSet {
    pub fn from_mask(n: usize, mask: u32) -> Self {
        debug_assert!(n < 32 && mask < (1 << n));
        Self { mask, n }
    }

    /// Builds `J` from one-based indices.
    pub fn from_indices(n: usize, indices: &[usize]) -> Self {
        let mask = indices.iter().fold(0u32, |m, &j| m | (1 << (j - 1)));
        Self::from_mask(n, mask)
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn size(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Membership of the zero-based position `j`.
    pub fn contains(&self, j: usize) -> bool {
        self.mask >> j & 1 == 1
    }

    pub fn complement(&self) -> Self {
        Self {
            mask: !self.mask & ((1u32 << self.n) - 1),
            n: self.n,
        }
    }

    /// One-based indices in increasing order.
    pub fn indices(&self) -> Vec<usize> {
        (0..self.n).filter(|&j| self.contains(j)).map(|j| j + 1).collect()
    }

    /// The vector `±e_J`.
    pub fn offset(&self, sign: i64) -> Vec<i64> {
        (0..self.n)
            .map(|j| if self.contains(j) { sign } else { 0 })
            .collect()
    }

    /// All subsets of size `r`, by increasing bitmask.
    pub fn all_of_size(n: usize, r: usize) -> impl Iterator<Item = MoveSet> {
        (0u32..(1u32 << n))
            .filter(move |m| m.count_ones() as usize == r)
            .map(move |mask| MoveSet { mask, n })
    }
}

/// `V_{λ,J}`.
pub fn v_coeff<S: Scalar>(ctx: &QContext<S>, lambda: &Weight, set: MoveSet) -> S {
    let parts = lambda.parts();
    let n = parts.len();
    let mut acc = S::one();
    for j in 0..n {
        if !set.contains(j) {
            continue;
        }
        for k in j + 1..n {
            if parts[k] != parts[j] {
                break;
            }
            if !set.contains(k) {
                acc = acc * ctx.q_int(k - j + 1) / ctx.q_int(k - j);
            }
        }
    }
    acc
}

/// `m_η(a) f` for [`Branch::Lower`], `m_η(a*) f` for [`Branch::Raise`], summing over the site
/// window outside of which every term vanishes.
pub fn monomial_op<S: Scalar>(
    ctx: &QContext<S>,
    eta: &PartitionEta,
    f: &StateFn<S>,
    branch: Branch,
) -> StateFn<S> {
    let mut out = StateFn::zero(f.grade());
    let Some((lo, hi)) = f.part_range() else {
        return out;
    };
    let reach = eta.size() as i64 + 1;
    let (lo, hi) = (lo - reach, hi + reach);
    for composition in eta.distinct_compositions() {
        // The rightmost factor acts first. For `a` the sites increase left to right, so the
        // recursion walks the composition backwards with strictly decreasing sites; for `a*`
        // it walks backwards with strictly increasing sites.
        let term = monomial_tail(ctx, &composition, f, branch, lo, hi, None);
        out = &out + &term;
    }
    out
}

fn monomial_tail<S: Scalar>(
    ctx: &QContext<S>,
    composition: &[usize],
    f: &StateFn<S>,
    branch: Branch,
    lo: i64,
    hi: i64,
    bound: Option<i64>,
) -> StateFn<S> {
    let Some((&power, rest)) = composition.split_last() else {
        return f.clone();
    };
    let sites: Box<dyn Iterator<Item = i64>> = match branch {
        Branch::Lower => Box::new(lo..bound.unwrap_or(hi + 1)),
        Branch::Raise => Box::new(bound.map_or(lo, |b| b + 1)..=hi),
    };
    let mut out = StateFn::zero(f.grade());
    for l in sites {
        let mut g = f.clone();
        for _ in 0..power {
            g = match branch {
                Branch::Lower => hop(ctx, l, &g),
                Branch::Raise => hop_star(ctx, l, &g),
            };
            if g.is_zero() {
                break;
            }
        }
        if g.is_zero() {
            continue;
        }
        let term = monomial_tail(ctx, rest, &g, branch, lo, hi, Some(l));
        out = &out + &term;
    }
    out
}

/// `H_r f` or `H*_r f` from the monomial definition.
pub fn h_def<S: Scalar>(ctx: &QContext<S>, r: usize, f: &StateFn<S>, branch: Branch) -> StateFn<S> {
    let mut out = StateFn::zero(f.grade());
    for eta in partitions_of(r) {
        let norm = S::one() / eta.q_factorial(ctx);
        out = &out + &monomial_op(ctx, &eta, f, branch).scale(&norm);
    }
    out
}

/// `H_r f` or `H*_r f` from the closed-form action.
pub fn h_explicit<S: Scalar>(
    ctx: &QContext<S>,
    r: usize,
    f: &StateFn<S>,
    branch: Branch,
) -> StateFn<S> {
    h_explicit_with(r, f, branch, |lambda, set| v_coeff(ctx, lambda, set))
}

/// [`h_explicit`] with the coefficient `V_{λ,J}` supplied by the caller.
pub fn h_explicit_with<S: Scalar>(
    r: usize,
    f: &StateFn<S>,
    branch: Branch,
    v: impl Fn(&Weight, MoveSet) -> S,
) -> StateFn<S> {
    let n = f.grade();
    let mut out = StateFn::zero(n);
    if r > n {
        return out;
    }
    for (mu, value) in f.iter() {
        for set in MoveSet::all_of_size(n, r) {
            match branch {
                Branch::Lower => {
                    if let Some(lambda) = mu.shifted(&set.offset(1)) {
                        let c = v(&lambda, set.complement());
                        out.accumulate(lambda, c * value.clone());
                    }
                }
                Branch::Raise => {
                    if let Some(lambda) = mu.shifted(&set.offset(-1)) {
                        let c = v(&lambda, set);
                        out.accumulate(lambda, c * value.clone());
                    }
                }
            }
        }
    }
    out
}

/// `(H_r g)(λ)` or `(H*_r g)(λ)` for a function `g` given pointwise, e.g. an eigenfunction.
pub fn h_explicit_at<S: Scalar>(
    ctx: &QContext<S>,
    r: usize,
    branch: Branch,
    lambda: &Weight,
    g: impl Fn(&Weight) -> S,
) -> S {
    let n = lambda.len();
    let mut acc = S::zero();
    if r > n {
        return acc;
    }
    for set in MoveSet::all_of_size(n, r) {
        match branch {
            Branch::Lower => {
                if let Some(nu) = lambda.shifted(&set.offset(-1)) {
                    acc = acc + v_coeff(ctx, lambda, set.complement()) * g(&nu);
                }
            }
            Branch::Raise => {
                if let Some(nu) = lambda.shifted(&set.offset(1)) {
                    acc = acc + v_coeff(ctx, lambda, set) * g(&nu);
                }
            }
        }
    }
    acc
}

/// The q-boson Hamiltonian `(H_q f)(λ) = Σ_{j, ε=±1, λ+εe_j ∈ Λ_n} [m_{λ_j}(λ)] f(λ + εe_j)`.
pub fn hq<S: Scalar>(ctx: &QContext<S>, f: &StateFn<S>) -> StateFn<S> {
    let n = f.grade();
    let mut out = StateFn::zero(n);
    for (mu, value) in f.iter() {
        for j in 0..n {
            for eps in [1i64, -1] {
                let mut offset = vec![0; n];
                offset[j] = -eps;
                if let Some(lambda) = mu.shifted(&offset) {
                    let m = lambda.multiplicity(lambda.parts()[j]);
                    out.accumulate(lambda, ctx.q_int(m) * value.clone());
                }
            }
        }
    }
    out
}

/// `(a*_l)^m f`, using `((a*_l)^m f)(λ) = [m]! [m_l(λ) choose m] f(a_l^m λ)`.
pub fn creation_power<S: Scalar>(ctx: &QContext<S>, l: i64, m: usize, f: &StateFn<S>) -> StateFn<S> {
    if m == 0 {
        return f.clone();
    }
    let mut out = StateFn::zero(f.grade());
    let fact = ctx.q_factorial(m);
    for (mu, value) in f.iter() {
        if mu.multiplicity(l + 1) < m {
            continue;
        }
        let mut parts = mu.parts().to_vec();
        let last = parts.iter().rposition(|&p| p == l + 1).expect("multiplicity checked");
        for p in &mut parts[last + 1 - m..=last] {
            *p = l;
        }
        let lambda = Weight::new(parts).expect("lowering the trailing copies keeps dominance");
        let binom = ctx
            .q_binomial(lambda.multiplicity(l) as i64, m as i64)
            .expect("m ≤ m_l(λ) by construction");
        out.accumulate(lambda, fact.clone() * binom * value.clone());
    }
    out
}

/// The gauge-transformed operator `δ_n^{1/2} (H_r + H*_r) δ_n^{−1/2}`, from its explicit action.
pub fn h_tilde(ctx: &QContext<Complex64>, r: usize, f: &StateFn<Complex64>) -> StateFn<Complex64> {
    let n = f.grade();
    let mut out = StateFn::zero(n);
    if r > n {
        return out;
    }
    let v = |lambda: &Weight, set: MoveSet| v_coeff(ctx, lambda, set).re;
    for (mu, value) in f.iter() {
        for set in MoveSet::all_of_size(n, r) {
            if let Some(lambda) = mu.shifted(&set.offset(-1)) {
                let c = (v(&lambda, set) * v(mu, set.complement())).sqrt();
                out.accumulate(lambda, value * c);
            }
            if let Some(lambda) = mu.shifted(&set.offset(1)) {
                let c = (v(&lambda, set.complement()) * v(mu, set)).sqrt();
                out.accumulate(lambda, value * c);
            }
        }
    }
    out
}

/// Multiplication by `δ_n(λ)^{p}`.
pub fn delta_power(ctx: &QContext<Complex64>, f: &StateFn<Complex64>, p: f64) -> StateFn<Complex64> {
    f.map_values(|lambda, v| v * delta_n(ctx, lambda).re.powf(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{inner_product, random_state};
    use num_rational::BigRational;
    use num_traits::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type Q = BigRational;

    fn ctx() -> QContext<Q> {
        QContext::exact(1, 3).unwrap()
    }

    fn w(parts: &[i64]) -> Weight {
        Weight::new(parts.to_vec()).unwrap()
    }

    fn ind<S: Scalar>(parts: &[i64]) -> StateFn<S> {
        StateFn::indicator(w(parts))
    }

    #[test]
    fn partition_enumeration() {
        let counts: Vec<usize> = (1..=8).map(|r| partitions_of(r).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
        let three: Vec<Vec<usize>> = partitions_of(3).iter().map(|p| p.parts().to_vec()).collect();
        assert_eq!(three, vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
    }

    #[test]
    fn distinct_composition_counts() {
        assert_eq!(PartitionEta::new(vec![2, 1]).distinct_compositions().len(), 2);
        assert_eq!(PartitionEta::new(vec![1, 1]).distinct_compositions().len(), 1);
        assert_eq!(PartitionEta::new(vec![2, 1, 1]).distinct_compositions().len(), 3);
        assert_eq!(PartitionEta::new(vec![3, 2, 1]).distinct_compositions().len(), 6);
    }

    #[test]
    fn monomial_regressions() {
        let ctx = ctx();
        let eta = PartitionEta::new(vec![1]);
        assert_eq!(monomial_op(&ctx, &eta, &ind(&[0]), Branch::Lower), ind(&[1]));
        assert_eq!(monomial_op(&ctx, &eta, &ind(&[0, 0]), Branch::Raise), ind(&[0, -1]));
        assert_eq!(monomial_op(&ctx, &eta, &ind(&[0, 0]), Branch::Lower), ind(&[1, 0]));
    }

    #[test]
    fn h_def_degree_two_on_indicator() {
        let ctx = ctx();
        let f = ind::<Q>(&[0, 0]);
        let two = monomial_op(&ctx, &PartitionEta::new(vec![2]), &f, Branch::Lower);
        let ones = monomial_op(&ctx, &PartitionEta::new(vec![1, 1]), &f, Branch::Lower);
        let expected = &two.scale(&(Q::one() / ctx.q_factorial(2))) + &ones;
        assert_eq!(h_def(&ctx, 2, &f, Branch::Lower), expected);
        assert_eq!(expected, ind(&[1, 1]));
    }

    #[test]
    fn v_coeff_examples() {
        let ctx = ctx();
        let q = ctx.q().clone();
        assert_eq!(v_coeff(&ctx, &w(&[0, 0]), MoveSet::from_indices(2, &[1])), Q::one() + q.clone());
        for mask in 0..8 {
            assert_eq!(v_coeff(&ctx, &w(&[3, 1, 0]), MoveSet::from_mask(3, mask)), Q::one());
        }
        assert_eq!(
            v_coeff(&ctx, &w(&[2, 2, 2]), MoveSet::from_indices(3, &[1, 2])),
            ctx.q_binomial(3, 2).unwrap()
        );
    }

    #[test]
    fn v_coeff_matches_binomial_form() {
        let ctx = ctx();
        for parts in [vec![1, 1, 1, 0], vec![2, 2, 0, 0], vec![0, 0, 0, 0], vec![3, 1, 1, 1]] {
            let lambda = w(&parts);
            for set in (0..=4).flat_map(|r| MoveSet::all_of_size(4, r)) {
                if lambda.shifted(&set.offset(1)).is_none() {
                    continue;
                }
                let mut expected = Q::one();
                for (value, m) in lambda.multiplicities() {
                    let in_j = (0..4).filter(|&j| parts[j] == value && set.contains(j)).count();
                    expected *= ctx.q_binomial(m as i64, in_j as i64).unwrap();
                }
                assert_eq!(v_coeff(&ctx, &lambda, set), expected, "{lambda} {set:?}");
            }
        }
    }

    #[test]
    fn explicit_action_examples() {
        let ctx = ctx();
        let q = ctx.q().clone();
        let raise = h_explicit(&ctx, 1, &ind(&[1, 0]), Branch::Raise);
        assert_eq!(raise.get(&w(&[0, 0])), Q::one() + q);
        let f = random_state::<Q, _>(&mut ChaCha8Rng::seed_from_u64(3), 3, -2, 2, 6);
        let shifted = f.iter().map(|(mu, v)| (mu.shifted(&[1, 1, 1]).unwrap(), v.clone()));
        assert_eq!(h_explicit(&ctx, 3, &f, Branch::Lower), StateFn::from_pairs(3, shifted).unwrap());
        for branch in [Branch::Lower, Branch::Raise] {
            assert!(h_explicit(&ctx, 4, &f, branch).is_zero());
            assert!(h_def(&ctx, 4, &f, branch).is_zero());
        }
    }

    #[test]
    fn explicit_matches_definition() {
        let ctx = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=3 {
            for _ in 0..4 {
                let f = random_state::<Q, _>(&mut rng, n, -2, 2, 4);
                for r in 1..=n {
                    for branch in [Branch::Lower, Branch::Raise] {
                        assert_eq!(h_explicit(&ctx, r, &f, branch), h_def(&ctx, r, &f, branch));
                    }
                }
            }
        }
    }

    #[test]
    fn hierarchy_commutes() {
        let ctx = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 3;
        let f = random_state::<Q, _>(&mut rng, n, -3, 3, 6);
        let ops = [Branch::Lower, Branch::Raise];
        for r in 1..=n {
            for s in 1..=n {
                for a in ops {
                    for b in ops {
                        let ab = h_explicit(&ctx, r, &h_explicit(&ctx, s, &f, b), a);
                        let ba = h_explicit(&ctx, s, &h_explicit(&ctx, r, &f, a), b);
                        assert_eq!(ab, ba);
                    }
                }
            }
        }
    }

    #[test]
    fn raise_is_complementary_lower_shifted() {
        let ctx = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 1..=4 {
            let f = random_state::<Q, _>(&mut rng, n, -3, 3, 6);
            let ones = vec![1; n];
            for r in 1..n {
                let lhs = h_explicit(&ctx, r, &f, Branch::Raise);
                let rhs = h_explicit(&ctx, n - r, &f, Branch::Lower);
                let moved = rhs
                    .iter()
                    .map(|(lambda, v)| (lambda.shifted(&vec![-1; n]).unwrap(), v.clone()));
                assert_eq!(lhs, StateFn::from_pairs(n, moved).unwrap());
                for lambda in lhs.support() {
                    assert_eq!(lhs.get(lambda), rhs.get(&lambda.shifted(&ones).unwrap()));
                }
            }
        }
    }

    #[test]
    fn lower_and_raise_are_adjoint() {
        let ctx = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 1..=3 {
            for r in 1..=n {
                let f = random_state::<Q, _>(&mut rng, n, -2, 2, 6);
                let g = random_state::<Q, _>(&mut rng, n, -2, 2, 6);
                let lhs = inner_product(&ctx, &h_explicit(&ctx, r, &f, Branch::Lower), &g).unwrap();
                let rhs = inner_product(&ctx, &f, &h_explicit(&ctx, r, &g, Branch::Raise)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn hq_examples_and_decomposition() {
        let ctx = ctx();
        let q = ctx.q().clone();
        let f = StateFn::from_pairs(1, [(w(&[4]), Q::from_ratio(2, 1)), (w(&[2]), Q::from_ratio(-1, 3))]).unwrap();
        let out = hq(&ctx, &f);
        for l in 0..7 {
            assert_eq!(out.get(&w(&[l])), f.get(&w(&[l + 1])) + f.get(&w(&[l - 1])));
        }
        let at_10 = hq(&ctx, &StateFn::from_pairs(2, [
            (w(&[2, 0]), Q::from_ratio(1, 1)),
            (w(&[1, 1]), Q::from_ratio(10, 1)),
            (w(&[0, 0]), Q::from_ratio(100, 1)),
            (w(&[1, -1]), Q::from_ratio(1000, 1)),
        ]).unwrap());
        assert_eq!(at_10.get(&w(&[1, 0])), Q::from_ratio(1111, 1));
        let probe = StateFn::from_pairs(2, [(w(&[1, 0]), Q::from_ratio(3, 1)), (w(&[0, -1]), Q::from_ratio(5, 1))]).unwrap();
        assert_eq!(hq(&ctx, &probe).get(&w(&[0, 0])), (Q::one() + q) * Q::from_ratio(8, 1));

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 1..=4 {
            let f = random_state::<Q, _>(&mut rng, n, -3, 3, 8);
            let sum = &h_explicit(&ctx, 1, &f, Branch::Lower) + &h_explicit(&ctx, 1, &f, Branch::Raise);
            assert_eq!(hq(&ctx, &f), sum);
        }
    }

    #[test]
    fn creation_power_matches_iterated_hops() {
        let ctx = ctx();
        let q = ctx.q().clone();
        let out = creation_power(&ctx, 0, 2, &ind(&[1, 1]));
        assert_eq!(out.get(&w(&[0, 0])), Q::one() + q);
        assert!(creation_power(&ctx, 5, 1, &ind::<Q>(&[1, 1])).is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let f = random_state::<Q, _>(&mut rng, 4, -1, 2, 8);
            for l in -1..=1 {
                let mut iter = f.clone();
                for m in 1..=4 {
                    iter = hop_star(&ctx, l, &iter);
                    assert_eq!(creation_power(&ctx, l, m, &f), iter);
                }
            }
        }
    }

    #[test]
    fn gauge_identity() {
        let ctx = ctx();
        for parts in [vec![1, 1, 1], vec![2, 1, 1], vec![1, 1, 0, 0], vec![0, 0, 0, 0], vec![3, 3, 2, 2]] {
            let lambda = w(&parts);
            let n = parts.len();
            for set in (1..=n).flat_map(|r| MoveSet::all_of_size(n, r)) {
                if let Some(lower) = lambda.shifted(&set.offset(-1)) {
                    let lhs = delta_n(&ctx, &lower) * v_coeff(&ctx, &lower, set);
                    let rhs = delta_n(&ctx, &lambda) * v_coeff(&ctx, &lambda, set.complement());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn tilde_is_gauge_conjugate_and_symmetric() {
        let ctx = QContext::float(0.37).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..=4 {
            for r in 1..=n {
                let f = random_state::<Complex64, _>(&mut rng, n, -2, 2, 10);
                let inner = delta_power(&ctx, &f, -0.5);
                let sum = &h_explicit(&ctx, r, &inner, Branch::Lower) + &h_explicit(&ctx, r, &inner, Branch::Raise);
                let expected = delta_power(&ctx, &sum, 0.5);
                assert!(h_tilde(&ctx, r, &f).max_abs_diff(&expected) < 1e-12);
            }
        }
        let basis: Vec<Weight> = [[1, 0], [0, 0], [1, 1], [0, -1], [2, 0], [1, -1]].iter().map(|p| w(p)).collect();
        for a in &basis {
            let image = h_tilde(&ctx, 1, &ind(a.parts()));
            for b in &basis {
                let back = h_tilde(&ctx, 1, &ind(b.parts()));
                assert!((image.get(b) - back.get(a)).norm() < 1e-14);
            }
        }
        let raise_coeff = h_tilde(&ctx, 1, &ind(&[1, 0])).get(&w(&[0, 0]));
        assert!((raise_coeff - Complex64::new(1.37f64.sqrt(), 0.0)).norm() < 1e-14);
        let one = random_state::<Complex64, _>(&mut rng, 1, -4, 4, 5);
        assert!(h_tilde(&ctx, 1, &one).max_abs_diff(&hq(&ctx, &one)) < 1e-14);
    }
}
