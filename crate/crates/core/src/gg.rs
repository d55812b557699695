//! Green-Griffiths jet combinatorics.
//!
//! A jet monomial of order k in r coordinate directions is indexed by a
//! tuple (a_1, ..., a_k) of multi-indices, a_s in N^r, and carries the
//! weighted degree m = |a_1| + 2|a_2| + ... + k|a_k|. The number of
//! monomials of weighted degree m is the coefficient of t^m in the product
//! of (1 - t^s)^{-r} over s = 1..k; it grows like
//! m^{kr-1} / ((kr-1)! (k!)^r).

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, Zero};

use crate::error::Error;
use crate::rational::{big_factorial, Rational};
use crate::Result;

/// Jet order k and fiber coordinate count r, both at least 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct JetSpec {
    k: usize,
    r: usize,
}

impl JetSpec {
    pub fn new(k: usize, r: usize) -> Result<Self> {
        if k == 0 || r == 0 {
            return Err(Error::invalid(format!(
                "jet order and coordinate count must be >= 1, got k={k}, r={r}"
            )));
        }
        Ok(JetSpec { k, r })
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn coords(&self) -> usize {
        self.r
    }
}

/// Exponents of one jet monomial: `levels[s-1][j]` is the exponent of the
/// j-th coordinate of the order-s derivative. All levels have equal width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedMultiIndex {
    levels: Vec<Vec<u32>>,
}

impl WeightedMultiIndex {
    pub fn new(levels: Vec<Vec<u32>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::invalid("a weighted multi-index needs at least one level"));
        }
        let width = levels[0].len();
        if width == 0 {
            return Err(Error::invalid("levels must have at least one slot"));
        }
        if levels.iter().any(|lvl| lvl.len() != width) {
            return Err(Error::mismatch("all levels must have the same width"));
        }
        Ok(WeightedMultiIndex { levels })
    }

    pub fn levels(&self) -> &[Vec<u32>] {
        &self.levels
    }

    pub fn order(&self) -> usize {
        self.levels.len()
    }

    pub fn width(&self) -> usize {
        self.levels[0].len()
    }

    /// m = sum over levels s of s * |a_s|.
    pub fn weighted_degree(&self) -> u64 {
        self.levels
            .iter()
            .enumerate()
            .map(|(idx, lvl)| (idx as u64 + 1) * lvl.iter().map(|&e| e as u64).sum::<u64>())
            .sum()
    }
}

/// Scales a jet by the weighted torus action: level s is multiplied by
/// lambda^s. `lambda = 0` collapses the orbit and is rejected.
pub fn apply_weighted_action<T>(lambda: &T, jet: &[Vec<T>]) -> Result<Vec<Vec<T>>>
where
    T: num_traits::Num + Clone,
{
    if lambda.is_zero() {
        return Err(Error::invalid("weighted action is only defined for lambda != 0"));
    }
    let mut power = T::one();
    Ok(jet
        .iter()
        .map(|level| {
            power = power.clone() * lambda.clone();
            level.iter().map(|x| x.clone() * power.clone()).collect()
        })
        .collect())
}

/// Evaluates the monomial with exponents `idx` on a jet.
pub fn monomial_value<T>(idx: &WeightedMultiIndex, jet: &[Vec<T>]) -> Result<T>
where
    T: num_traits::Num + Clone,
{
    if jet.len() != idx.order() {
        return Err(Error::mismatch(format!(
            "jet has {} levels, index has {}",
            jet.len(),
            idx.order()
        )));
    }
    let mut acc = T::one();
    for (level, exps) in jet.iter().zip(idx.levels()) {
        if level.len() != exps.len() {
            return Err(Error::mismatch("jet level width differs from index width"));
        }
        for (x, &e) in level.iter().zip(exps) {
            for _ in 0..e {
                acc = acc * x.clone();
            }
        }
    }
    Ok(acc)
}

/// Coefficients of the product of (1 - t^s)^{-r}, s = 1..k, up to degree
/// `m_max`: entry m is the number of weighted-degree-m jet monomials.
/// Computed exactly by k*r cumulative-sum passes.
pub fn fiber_dimension_table(spec: JetSpec, m_max: usize) -> Vec<BigUint> {
    let mut coeffs = vec![BigUint::zero(); m_max + 1];
    coeffs[0] = BigUint::one();
    for s in 1..=spec.k {
        for _ in 0..spec.r {
            for m in s..=m_max {
                let prev = coeffs[m - s].clone();
                coeffs[m] += prev;
            }
        }
    }
    coeffs
}

/// Number of jet monomials of weighted degree exactly `m`.
pub fn fiber_dimension(spec: JetSpec, m: usize) -> BigUint {
    fiber_dimension_table(spec, m).pop().expect("table is nonempty")
}

/// Leading-order fiber dimension m^{kr-1} / ((kr-1)! (k!)^r), exact.
pub fn asymptotic_fiber_dimension(spec: JetSpec, m: u64) -> Result<Rational> {
    if m == 0 {
        return Err(Error::invalid("asymptotic fiber dimension needs m >= 1"));
    }
    let kr = (spec.k * spec.r) as u64;
    let numer = BigInt::from(m).pow((kr - 1) as u32);
    let denom = big_factorial(kr - 1) * big_factorial(spec.k as u64).pow(spec.r as u32);
    Ok(Rational::new(numer, denom))
}
