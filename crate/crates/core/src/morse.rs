//! Worked hypersurface examples: top intersection numbers, general-type
//! degree thresholds, the reciprocal-order sparsity test for jet-order
//! cuts, and the leading constant of the resulting growth estimate.
//!
//! Everything numeric here is exact rational arithmetic except the one
//! comparison against `delta * ln k`, which is inherently transcendental
//! and is done in floating point with a fixed slack.

use num_bigint::BigInt;

use crate::error::Error;
use crate::rational::{big_factorial, pow_i, rat, rat_int, to_f64, Rational};
use crate::semple::dim_gg_locus;
use crate::Result;

/// Absolute slack for the floating-point sparsity comparison, so exact
/// boundary cases are not lost to rounding of `ln k`.
pub const SPARSITY_SLACK: f64 = 1e-15;

/// Names of the uncontrolled correction terms in the growth estimate.
/// They are reported verbatim, never evaluated.
pub const ERROR_SLOTS: [&str; 2] = ["O(1/log k)", "O(delta)"];

/// A smooth degree-d hypersurface of dimension n in projective (n+1)-space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HypersurfaceSpec {
    n: usize,
    d: u64,
}

impl HypersurfaceSpec {
    pub fn new(n: usize, d: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("hypersurface dimension must be >= 1"));
        }
        if d == 0 {
            return Err(Error::invalid("hypersurface degree must be >= 1"));
        }
        Ok(HypersurfaceSpec { n, d })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u64 {
        self.d
    }
}

/// Top self-intersection (K - eps A)^n on the hypersurface, where A is
/// the hyperplane class: by adjunction K = (d - n - 2) A and A^n has
/// degree d, so the value is (d - n - 2 - eps)^n * d.
pub fn eta_top_intersection(spec: &HypersurfaceSpec, eps: &Rational) -> Result<Rational> {
    if eps < &rat_int(0) {
        return Err(Error::invalid("eps must be >= 0"));
    }
    let base = rat_int(spec.d as i64) - rat_int(spec.n as i64) - rat_int(2) - eps.clone();
    Ok(pow_i(&base, spec.n as i32) * rat_int(spec.d as i64))
}

/// Smallest degree whose canonical class is strictly positive after the
/// adjunction count: d = n + 3.
pub fn general_type_threshold(n: usize) -> Result<u64> {
    if n == 0 {
        return Err(Error::invalid("dimension must be >= 1"));
    }
    Ok(n as u64 + 3)
}

/// A complete-intersection cut of the weighted jet fiber: polynomials of
/// orders s_1 < ... < s_ell and degrees d_j, with the sparsity budget
/// parameter delta.
#[derive(Clone, Debug, PartialEq)]
pub struct CompleteIntersectionCut {
    k: usize,
    degrees: Vec<u64>,
    orders: Vec<u64>,
    delta: Rational,
}

impl CompleteIntersectionCut {
    pub fn new(k: usize, degrees: Vec<u64>, orders: Vec<u64>, delta: Rational) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("jet order must be >= 1"));
        }
        if degrees.len() != orders.len() {
            return Err(Error::mismatch(format!(
                "{} degrees vs {} orders",
                degrees.len(),
                orders.len()
            )));
        }
        if degrees.iter().any(|&d| d == 0) {
            return Err(Error::invalid("cut degrees must be >= 1"));
        }
        if orders.first().is_some_and(|&s| s == 0) || orders.last().is_some_and(|&s| s as usize > k)
        {
            return Err(Error::invalid(format!(
                "cut orders must lie in 1..={k}"
            )));
        }
        if orders.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("cut orders must be strictly increasing"));
        }
        if delta < rat_int(0) {
            return Err(Error::invalid("sparsity budget delta must be >= 0"));
        }
        Ok(CompleteIntersectionCut {
            k,
            degrees,
            orders,
            delta,
        })
    }

    pub fn jet_order(&self) -> usize {
        self.k
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    /// Number of cutting polynomials ell.
    pub fn cut_count(&self) -> usize {
        self.orders.len()
    }
}

/// Outcome of the reciprocal-order sparsity test.
#[derive(Clone, Debug, PartialEq)]
pub struct SparsityReport {
    /// Dimension of the cut locus: n + k r - 1 - ell.
    pub locus_dim: usize,
    /// Exact sum of 1/s_j over the cut orders.
    pub reciprocal_sum: Rational,
    /// delta * ln k, the budget the sum is compared against.
    pub budget: f64,
    pub passes: bool,
}

/// Tests whether the cut orders are sparse enough: sum of 1/s_j must not
/// exceed delta * ln k (up to [`SPARSITY_SLACK`]). Rank-one bundles are
/// rejected; the estimate needs r >= 2.
pub fn order_sparsity_check(
    cut: &CompleteIntersectionCut,
    n: usize,
    r: usize,
) -> Result<SparsityReport> {
    if r < 2 {
        return Err(Error::invalid("sparsity test needs bundle rank r >= 2"));
    }
    let locus_dim = dim_gg_locus(n, cut.k, r, cut.cut_count())?;
    let reciprocal_sum = cut
        .orders
        .iter()
        .fold(rat_int(0), |acc, &s| acc + rat(1, s as i64));
    let budget = to_f64(&cut.delta) * (cut.k as f64).ln();
    let passes = to_f64(&reciprocal_sum) <= budget + SPARSITY_SLACK;
    Ok(SparsityReport {
        locus_dim,
        reciprocal_sum,
        budget,
        passes,
    })
}

/// Leading factor of the growth estimate, with the log power and the
/// uncontrolled corrections carried symbolically.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingConstant {
    /// (prod d_j s_j) / ((n+kr-1)! n! (k!)^r) * morse_value, exactly.
    pub main_factor: Rational,
    /// Exponent of the symbolic log-k factor (equals n).
    pub log_power: usize,
    /// Unevaluated correction-term names, fixed as [`ERROR_SLOTS`].
    pub error_slots: [&'static str; 2],
}

/// Evaluates the main factor of the leading constant for a cut locus on
/// the level-k fiber, given the curvature-side value `morse_value`.
pub fn leading_constant(
    n: usize,
    r: usize,
    cut: &CompleteIntersectionCut,
    morse_value: &Rational,
) -> Result<LeadingConstant> {
    if n == 0 || r == 0 {
        return Err(Error::invalid("need n >= 1 and r >= 1"));
    }
    let k = cut.k;
    let mut numer = BigInt::from(1);
    for (&d, &s) in cut.degrees.iter().zip(&cut.orders) {
        numer *= BigInt::from(d) * BigInt::from(s);
    }
    let denom = big_factorial((n + k * r - 1) as u64)
        * big_factorial(n as u64)
        * big_factorial(k as u64).pow(r as u32);
    let main_factor = Rational::new(numer, denom) * morse_value;
    Ok(LeadingConstant {
        main_factor,
        log_power: n,
        error_slots: ERROR_SLOTS,
    })
}
