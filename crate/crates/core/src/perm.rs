//! Permutations of `{0, …, n-1}` in one-line notation.
//!
//! A permutation `σ` is stored as the sequence `(σ_1, …, σ_n)` and acts on vectors by
//! `v_σ := (v_{σ_1}, …, v_{σ_n})`.

use itertools::Itertools;

pub type Perm = Vec<usize>;

/// All permutations of `0..n` in lexicographic order.
pub fn all(n: usize) -> Vec<Perm> {
    (0..n).permutations(n).collect()
}

pub fn identity(n: usize) -> Perm {
    (0..n).collect()
}

/// The order-reversing permutation `j ↦ n-1-j`.
pub fn reversal(n: usize) -> Perm {
    (0..n).rev().collect()
}

/// Coxeter length, i.e. the number of inversions.
pub fn length(sigma: &[usize]) -> usize {
    let mut count = 0;
    for i in 0..sigma.len() {
        for j in i + 1..sigma.len() {
            if sigma[i] > sigma[j] {
                count += 1;
            }
        }
    }
    count
}

/// Parity `(-1)^{ℓ(σ)}`.
pub fn sign(sigma: &[usize]) -> i32 {
    if length(sigma).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn inverse(sigma: &[usize]) -> Perm {
    let mut inv = vec![0; sigma.len()];
    for (i, &s) in sigma.iter().enumerate() {
        inv[s] = i;
    }
    inv
}

/// `(σ ∘ τ)_j = σ_{τ_j}`, so that `v_{σ∘τ} = (v_σ)_τ`.
pub fn compose(sigma: &[usize], tau: &[usize]) -> Perm {
    tau.iter().map(|&t| sigma[t]).collect()
}

/// `v_σ`.
pub fn apply<T: Copy>(sigma: &[usize], v: &[T]) -> Vec<T> {
    sigma.iter().map(|&s| v[s]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_signs() {
        assert_eq!(all(4).len(), 24);
        assert_eq!(length(&[2, 1, 0]), 3);
        assert_eq!(sign(&[1, 0, 2]), -1);
        assert_eq!(sign(&reversal(4)), 1);
    }

    #[test]
    fn inverse_and_compose() {
        for s in all(4) {
            let inv = inverse(&s);
            assert_eq!(compose(&s, &inv), identity(4));
            assert_eq!(compose(&inv, &s), identity(4));
        }
        let v = [10, 20, 30];
        let s = vec![2, 0, 1];
        let t = vec![1, 2, 0];
        assert_eq!(apply(&t, &apply(&s, &v)), apply(&compose(&s, &t), &v));
    }
}
