//! Seeded generators of small exact instances.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::finprob::{self, FiniteProbability, StochasticMorphism};
use crate::rational::{self, RatMatrix, Rational};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random composition of `den` into `len` non-negative parts,
/// as a probability vector with denominator `den`.
pub fn simplex_point<R: Rng>(rng: &mut R, len: usize, den: i64) -> Vec<Rational> {
    assert!(len > 0 && den > 0);
    let mut cuts: Vec<i64> = (0..len - 1).map(|_| rng.random_range(0..=den)).collect();
    cuts.sort_unstable();
    let mut prev = 0;
    let mut out = Vec::with_capacity(len);
    for c in cuts.into_iter().chain(core::iter::once(den)) {
        out.push(rational::rat(c - prev, den));
        prev = c;
    }
    out
}

/// Like [`simplex_point`] but with no zero entries; the denominator is
/// raised to `len` when smaller.
pub fn positive_simplex_point<R: Rng>(rng: &mut R, len: usize, den: i64) -> Vec<Rational> {
    let den = den.max(len as i64);
    let spare = den - len as i64;
    let unit = rational::rat(1, den);
    if spare == 0 {
        return alloc::vec![unit; len];
    }
    let scale = rational::rat(spare, den);
    simplex_point(rng, len, spare).into_iter().map(|x| x * &scale + &unit).collect()
}

pub fn probability<R: Rng>(rng: &mut R, len: usize, max_den: i64) -> FiniteProbability {
    let den = rng.random_range(1..=max_den);
    FiniteProbability::from_probs(simplex_point(rng, len, den)).expect("simplex point")
}

/// A probability vector supported on `support` inside `0..len`.
pub fn probability_on<R: Rng>(rng: &mut R, len: usize, support: &[usize], max_den: i64) -> FiniteProbability {
    let den = rng.random_range(1..=max_den);
    let inner = simplex_point(rng, support.len(), den);
    let mut probs = alloc::vec![rational::zero(); len];
    for (&s, p) in support.iter().zip(inner) {
        probs[s] = p;
    }
    FiniteProbability::from_probs(probs).expect("simplex point")
}

/// Random column-stochastic matrix with each column supported on `rows`.
#[allow(clippy::needless_range_loop)]
pub fn stochastic_matrix_on<R: Rng>(rng: &mut R, n_rows: usize, rows: &[usize], cols: usize, max_den: i64) -> RatMatrix {
    let mut m = alloc::vec![alloc::vec![rational::zero(); cols]; n_rows];
    for c in 0..cols {
        let den = rng.random_range(1..=max_den);
        for (&r, v) in rows.iter().zip(simplex_point(rng, rows.len(), den)) {
            m[r][c] = v;
        }
    }
    m
}

/// A random morphism out of `source` into `n_rows` points; the target is `S P`.
pub fn morphism_from<R: Rng>(rng: &mut R, source: &FiniteProbability, n_rows: usize, max_den: i64) -> StochasticMorphism {
    let rows: Vec<usize> = (0..n_rows).collect();
    morphism_from_on(rng, source, n_rows, &rows, max_den)
}

pub fn morphism_from_on<R: Rng>(
    rng: &mut R,
    source: &FiniteProbability,
    n_rows: usize,
    rows: &[usize],
    max_den: i64,
) -> StochasticMorphism {
    let m = stochastic_matrix_on(rng, n_rows, rows, source.len(), max_den);
    let q = FiniteProbability::from_probs(rational::mat_vec(&m, source.probs())).expect("pushforward");
    finprob::validate(m, source.clone(), q).expect("stochastic by construction")
}

/// A coupling matrix `R` with `R from = to`, built by the north-west corner
/// rule on shuffled orderings of both supports.
pub fn coupling<R: Rng>(rng: &mut R, from: &FiniteProbability, to: &FiniteProbability) -> StochasticMorphism {
    let mut cols: Vec<usize> = (0..from.len()).collect();
    let mut rows: Vec<usize> = (0..to.len()).collect();
    cols.shuffle(rng);
    rows.shuffle(rng);
    let mut plan = alloc::vec![alloc::vec![rational::zero(); from.len()]; to.len()];
    let mut rest_col: Vec<Rational> = from.probs().to_vec();
    let mut rest_row: Vec<Rational> = to.probs().to_vec();
    let (mut ci, mut ri) = (0, 0);
    while ci < cols.len() && ri < rows.len() {
        let (c, r) = (cols[ci], rows[ri]);
        let amount = core::cmp::min(rest_col[c].clone(), rest_row[r].clone());
        plan[r][c] += &amount;
        rest_col[c] -= &amount;
        rest_row[r] -= &amount;
        if num_traits::Zero::is_zero(&rest_col[c]) {
            ci += 1;
        } else {
            ri += 1;
        }
    }
    let fallback = simplex_point(rng, to.len(), 1);
    let mut matrix = alloc::vec![alloc::vec![rational::zero(); from.len()]; to.len()];
    for c in 0..from.len() {
        let mass = &from.probs()[c];
        for r in 0..to.len() {
            matrix[r][c] = if num_traits::Zero::is_zero(mass) { fallback[r].clone() } else { &plan[r][c] / mass };
        }
    }
    finprob::validate(matrix, from.clone(), to.clone()).expect("coupling marginals")
}

/// A random permutation morphism out of `p`.
pub fn permutation<R: Rng>(rng: &mut R, p: &FiniteProbability) -> StochasticMorphism {
    let mut perm: Vec<usize> = (0..p.len()).collect();
    perm.shuffle(rng);
    let mut m = alloc::vec![alloc::vec![rational::zero(); p.len()]; p.len()];
    let mut q = alloc::vec![rational::zero(); p.len()];
    for (c, &r) in perm.iter().enumerate() {
        m[r][c] = rational::one();
        q[r] = p.probs()[c].clone();
    }
    finprob::validate(m, p.clone(), FiniteProbability::from_probs(q).expect("permuted")).expect("permutation")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_points_normalize() {
        let mut r = rng(7);
        for len in 1..6 {
            for den in 1..13 {
                let p = simplex_point(&mut r, len, den);
                assert_eq!(rational::sum(&p), rational::one());
                let q = positive_simplex_point(&mut r, len, den);
                assert_eq!(rational::sum(&q), rational::one());
                assert!(q.iter().all(|x| *x > rational::zero()));
            }
        }
    }

    #[test]
    fn couplings_validate() {
        let mut r = rng(3);
        for _ in 0..50 {
            let a = probability(&mut r, 3, 12);
            let b = probability(&mut r, 4, 12);
            let c = coupling(&mut r, &a, &b);
            assert_eq!(c.target(), &b);
        }
    }
}
