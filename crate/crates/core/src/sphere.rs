//! Moments of the unit sphere of C^M under block grouping.
//!
//! Splitting the coordinates of a uniform point on the unit sphere of C^M
//! into blocks of sizes (n_1, ..., n_k) makes the squared block norms
//! x_s = |z_s|^2 / |z|^2 a Dirichlet(n_1, ..., n_k) vector. Monomial
//! moments have the exact closed form
//! E[prod x_s^{a_s}] = prod rising(n_s, a_s) / rising(M, |a|),
//! and every closed form here is paired with a seeded Monte Carlo
//! estimator drawing normalized complex gaussians.

use num_complex::Complex64;

use crate::error::Error;
use crate::hermitian::HermitianForm;
use crate::parallel::{mean_estimate_vec, ScalarEstimate};
use crate::rational::{big_factorial, rat_int, rising, Rational};
use crate::rng::{sample_unit_vector, RandomStream};
use crate::Result;

/// Block sizes (n_1, ..., n_k) of a grouped sphere, every block nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockConfig {
    sizes: Vec<usize>,
}

impl BlockConfig {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::invalid("block configuration needs at least one block"));
        }
        if sizes.iter().any(|&n| n == 0) {
            return Err(Error::invalid("every block must have size >= 1"));
        }
        Ok(BlockConfig { sizes })
    }

    /// k blocks of equal size r.
    pub fn equal(k: usize, r: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("need at least one block"));
        }
        Self::new(vec![r; k])
    }

    /// k - ell blocks of size r followed by ell cut blocks of size r - 1.
    pub fn one_cut(k: usize, r: usize, ell: usize) -> Result<Self> {
        if ell > k {
            return Err(Error::invalid(format!("cut count {ell} exceeds block count {k}")));
        }
        if ell > 0 && r < 2 {
            return Err(Error::invalid("cut blocks need r >= 2"));
        }
        let mut sizes = vec![r; k - ell];
        sizes.extend(std::iter::repeat(r - 1).take(ell));
        Self::new(sizes)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn block_count(&self) -> usize {
        self.sizes.len()
    }

    /// Total complex dimension M.
    pub fn total(&self) -> usize {
        self.sizes.iter().sum()
    }

    fn check_alpha(&self, alpha: &[u64]) -> Result<()> {
        if alpha.len() != self.sizes.len() {
            return Err(Error::mismatch(format!(
                "moment index has {} entries for {} blocks",
                alpha.len(),
                self.sizes.len()
            )));
        }
        Ok(())
    }
}

/// Exact moment E[prod x_s^{alpha_s}] of the squared block norms.
pub fn dirichlet_moment(cfg: &BlockConfig, alpha: &[u64]) -> Result<Rational> {
    cfg.check_alpha(alpha)?;
    let total_order: u64 = alpha.iter().sum();
    let mut numer = num_bigint::BigInt::from(1);
    for (&n, &a) in cfg.sizes().iter().zip(alpha) {
        numer *= rising(n as u64, a);
    }
    let denom = rising(cfg.total() as u64, total_order);
    Ok(Rational::new(numer, denom))
}

/// Monte Carlo moments for several indices at once, all evaluated on the
/// same draws. One sample = one gaussian vector in C^M.
pub fn mc_moments(
    cfg: &BlockConfig,
    alphas: &[Vec<u64>],
    samples: u64,
    workers: usize,
    rng: &RandomStream,
) -> Result<Vec<ScalarEstimate>> {
    if samples < 2 {
        return Err(Error::invalid("need at least two samples"));
    }
    for alpha in alphas {
        cfg.check_alpha(alpha)?;
    }
    let sizes = cfg.sizes().to_vec();
    let total = cfg.total();
    let est = mean_estimate_vec(rng, samples, workers, alphas.len(), |rng, row| {
        let mut buf = vec![Complex64::ZERO; total];
        rng.fill_complex_gaussian(&mut buf);
        let mut x = Vec::with_capacity(sizes.len());
        let mut offset = 0;
        let mut norm_total = 0.0;
        for &n in &sizes {
            let block_norm: f64 = buf[offset..offset + n].iter().map(|z| z.norm_sqr()).sum();
            x.push(block_norm);
            norm_total += block_norm;
            offset += n;
        }
        for (slot, alpha) in row.iter_mut().zip(alphas) {
            let mut value = 1.0;
            for (&xs, &a) in x.iter().zip(alpha) {
                value *= (xs / norm_total).powi(a as i32);
            }
            *slot = value;
        }
    });
    Ok((0..alphas.len())
        .map(|i| ScalarEstimate {
            mean: est.mean[i],
            stderr: est.stderr[i],
            samples,
        })
        .collect())
}

/// Monte Carlo estimate of a single moment.
pub fn mc_moment(
    cfg: &BlockConfig,
    alpha: &[u64],
    samples: u64,
    workers: usize,
    rng: &RandomStream,
) -> Result<ScalarEstimate> {
    Ok(mc_moments(cfg, &[alpha.to_vec()], samples, workers, rng)?.remove(0))
}

/// The two first moments of a once-cut grouping and their convex
/// combination: ell cut blocks of size r-1 among k blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionIdentity {
    /// Mean squared norm of a cut block, (r-1)/(kr-ell).
    pub cut_moment: Rational,
    /// Mean squared norm of a free block, r/(kr-ell).
    pub free_moment: Rational,
    /// ell * cut + (k-ell) * free; always 1.
    pub combination: Rational,
}

/// Exact first moments of the once-cut grouping. Rejects r < 2 (a cut
/// block would be empty).
pub fn partition_identity(k: usize, r: usize, ell: usize) -> Result<PartitionIdentity> {
    if k == 0 {
        return Err(Error::invalid("need k >= 1 blocks"));
    }
    if r < 2 {
        return Err(Error::invalid("cut moments need r >= 2"));
    }
    if ell > k {
        return Err(Error::invalid(format!("cut count {ell} exceeds block count {k}")));
    }
    let m = rat_int((k * r - ell) as i64);
    let cut_moment = rat_int(r as i64 - 1) / m.clone();
    let free_moment = rat_int(r as i64) / m;
    let combination =
        rat_int(ell as i64) * cut_moment.clone() + rat_int((k - ell) as i64) * free_moment.clone();
    Ok(PartitionIdentity {
        cut_moment,
        free_moment,
        combination,
    })
}

/// Value of the sesquilinear form with entries `entry(a, b)` at u:
/// sum over (a, b) of entry(a, b) * u_a * conj(u_b), fixed summation order.
pub fn sesquilinear_value(
    dim: usize,
    entry: impl Fn(usize, usize) -> Complex64,
    u: &[Complex64],
) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for a in 0..dim {
        for b in 0..dim {
            acc += entry(a, b) * u[a] * u[b].conj();
        }
    }
    acc
}

/// Sphere average of a Hermitian quadratic form: exact value trace(Q)/r
/// next to its Monte Carlo estimate.
#[derive(Clone, Debug)]
pub struct QuadraticAverage {
    pub exact: f64,
    pub estimate: ScalarEstimate,
}

/// Averages u -> <Q u, u> over the unit sphere of C^r.
pub fn sphere_quadratic_average(
    q: &HermitianForm,
    samples: u64,
    workers: usize,
    rng: &RandomStream,
) -> Result<QuadraticAverage> {
    if samples < 2 {
        return Err(Error::invalid("need at least two samples"));
    }
    let dim = q.dim();
    let est = mean_estimate_vec(rng, samples, workers, 1, |rng, row| {
        let u = sample_unit_vector(dim, rng).expect("dim >= 1 by construction");
        row[0] = sesquilinear_value(dim, |a, b| q.entry(a, b), &u).re;
    });
    Ok(QuadraticAverage {
        exact: q.trace() / dim as f64,
        estimate: ScalarEstimate {
            mean: est.mean[0],
            stderr: est.stderr[0],
            samples,
        },
    })
}

/// Degree factor prod d_j s_j / (k!)^r of an intersection cut; the empty
/// cut gives 1/(k!)^r.
pub fn degree_factor(degrees: &[u64], orders: &[u64], k: usize, r: usize) -> Result<Rational> {
    if degrees.len() != orders.len() {
        return Err(Error::mismatch("degree and order lists differ in length"));
    }
    if k == 0 || r == 0 {
        return Err(Error::invalid("need k >= 1 and r >= 1"));
    }
    if degrees.iter().any(|&d| d == 0) || orders.iter().any(|&s| s == 0) {
        return Err(Error::invalid("degrees and orders must be >= 1"));
    }
    if orders.iter().any(|&s| s as usize > k) {
        return Err(Error::invalid("cut orders cannot exceed k"));
    }
    let mut numer = num_bigint::BigInt::from(1);
    for (&d, &s) in degrees.iter().zip(orders) {
        numer *= num_bigint::BigInt::from(d * s);
    }
    let denom = big_factorial(k as u64).pow(r as u32);
    Ok(Rational::new(numer, denom))
}
