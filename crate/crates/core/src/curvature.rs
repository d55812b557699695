//! Probabilistic curvature model on jet spaces.
//!
//! A jet metric of order k with weights eps and exponent p assigns a jet
//! (xi_1, ..., xi_k) the value
//! Psi = (sum_s (eps_s |xi_s|)^{2p/s})^{1/p},
//! which scales like |lambda|^2 under the weighted action. Polar
//! coordinates split a jet into simplex weights x_s and unit directions
//! u_s; the horizontal curvature form at such a point is
//! H[i][j] = sum_s (x_s / s) sum_{a,b} c[i][j][a][b] u_s[a] conj(u_s[b]),
//! whose average over uniformly sampled points is
//! (1 + 1/2 + ... + 1/k) / (k r) times the fiber trace of c.

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::hermitian::HermitianForm;
use crate::parallel::mean_estimate_vec;
use crate::rational::{rat_int, Rational};
use crate::rng::{normalize, RandomStream};
use crate::sphere::sesquilinear_value;
use crate::Result;

/// Curvature coefficients c[i][j][a][b] with n base and r fiber indices,
/// Hermitian under the simultaneous swap (i, a) <-> (j, b). Symmetry is
/// exact at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor {
    base_dim: usize,
    fiber_dim: usize,
    data: Vec<Complex64>,
}

impl CurvatureTensor {
    pub fn new(base_dim: usize, fiber_dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if base_dim == 0 || fiber_dim == 0 {
            return Err(Error::invalid("tensor dimensions must be >= 1"));
        }
        let expected = base_dim * base_dim * fiber_dim * fiber_dim;
        if data.len() != expected {
            return Err(Error::mismatch(format!(
                "expected {expected} entries, got {}",
                data.len()
            )));
        }
        let tensor = CurvatureTensor {
            base_dim,
            fiber_dim,
            data,
        };
        for i in 0..base_dim {
            for j in 0..base_dim {
                for a in 0..fiber_dim {
                    for b in 0..fiber_dim {
                        if tensor.entry(j, i, b, a) != tensor.entry(i, j, a, b).conj() {
                            return Err(Error::NotHermitian(format!(
                                "entry ({j},{i},{b},{a}) is not the conjugate of ({i},{j},{a},{b})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(tensor)
    }

    fn index(&self, i: usize, j: usize, a: usize, b: usize) -> usize {
        ((i * self.base_dim + j) * self.fiber_dim + a) * self.fiber_dim + b
    }

    pub fn entry(&self, i: usize, j: usize, a: usize, b: usize) -> Complex64 {
        self.data[self.index(i, j, a, b)]
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    pub fn zero(base_dim: usize, fiber_dim: usize) -> Result<Self> {
        let len = base_dim * base_dim * fiber_dim * fiber_dim;
        Self::new(base_dim, fiber_dim, vec![Complex64::ZERO; len])
    }

    /// c[i][j][a][b] = delta_ij delta_ab.
    pub fn kronecker(base_dim: usize, fiber_dim: usize) -> Result<Self> {
        let mut data =
            vec![Complex64::ZERO; base_dim * base_dim * fiber_dim * fiber_dim];
        for i in 0..base_dim {
            for a in 0..fiber_dim {
                let idx = ((i * base_dim + i) * fiber_dim + a) * fiber_dim + a;
                data[idx] = Complex64::new(1.0, 0.0);
            }
        }
        Self::new(base_dim, fiber_dim, data)
    }

    /// Gaussian random tensor, Hermitian by construction. Blocks (i, j)
    /// with i <= j are drawn row-major; the mirror block is the conjugate
    /// transpose; diagonal blocks are Hermitian with real diagonal.
    pub fn random(base_dim: usize, fiber_dim: usize, rng: &mut RandomStream) -> Result<Self> {
        let n = base_dim;
        let r = fiber_dim;
        let mut data = vec![Complex64::ZERO; n * n * r * r];
        let idx = |i: usize, j: usize, a: usize, b: usize| ((i * n + j) * r + a) * r + b;
        for i in 0..n {
            for j in i..n {
                if i == j {
                    for a in 0..r {
                        for b in a..r {
                            let z = rng.next_complex_gaussian();
                            if a == b {
                                data[idx(i, i, a, a)] = Complex64::new(z.re, 0.0);
                            } else {
                                data[idx(i, i, a, b)] = z;
                                data[idx(i, i, b, a)] = z.conj();
                            }
                        }
                    }
                } else {
                    for a in 0..r {
                        for b in 0..r {
                            let z = rng.next_complex_gaussian();
                            data[idx(i, j, a, b)] = z;
                            data[idx(j, i, b, a)] = z.conj();
                        }
                    }
                }
            }
        }
        Self::new(n, r, data)
    }

    /// Trace over the fiber indices: T[i][j] = sum_a c[i][j][a][a], a
    /// Hermitian form on the base.
    pub fn fiber_trace(&self) -> HermitianForm {
        HermitianForm::from_upper(self.base_dim, |i, j| {
            let mut acc = Complex64::ZERO;
            for a in 0..self.fiber_dim {
                acc += self.entry(i, j, a, a);
            }
            acc
        })
        .expect("base dimension is >= 1")
    }
}

/// A nonzero k-jet: level s holds the order-s component in C^r.
#[derive(Clone, Debug, PartialEq)]
pub struct JetVector {
    levels: Vec<Vec<Complex64>>,
}

impl JetVector {
    pub fn new(levels: Vec<Vec<Complex64>>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::invalid("a jet needs at least one level"));
        }
        let width = levels[0].len();
        if width == 0 {
            return Err(Error::invalid("jet levels must have width >= 1"));
        }
        if levels.iter().any(|lvl| lvl.len() != width) {
            return Err(Error::mismatch("all jet levels must have the same width"));
        }
        if levels
            .iter()
            .all(|lvl| lvl.iter().all(|z| *z == Complex64::ZERO))
        {
            return Err(Error::invalid("the zero jet is excluded"));
        }
        Ok(JetVector { levels })
    }

    pub fn levels(&self) -> &[Vec<Complex64>] {
        &self.levels
    }

    pub fn order(&self) -> usize {
        self.levels.len()
    }

    pub fn width(&self) -> usize {
        self.levels[0].len()
    }
}

/// Polar data of a jet: simplex weights x (nonnegative, summing to 1) and
/// one unit direction per level.
#[derive(Clone, Debug, PartialEq)]
pub struct JetPoint {
    pub x: Vec<f64>,
    pub u: Vec<Vec<Complex64>>,
}

impl JetPoint {
    pub fn new(x: Vec<f64>, u: Vec<Vec<Complex64>>) -> Result<Self> {
        if x.is_empty() || x.len() != u.len() {
            return Err(Error::mismatch(
                "weights and directions must have the same nonzero length",
            ));
        }
        if x.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return Err(Error::invalid("weights must be finite and >= 0"));
        }
        let total: f64 = x.iter().sum();
        if total <= 0.0 {
            return Err(Error::invalid("weights must not all vanish"));
        }
        for dir in &u {
            let norm_sq: f64 = dir.iter().map(|z| z.norm_sqr()).sum();
            if (norm_sq - 1.0).abs() > 1e-9 {
                return Err(Error::invalid("directions must be unit vectors"));
            }
        }
        let x = x.iter().map(|v| v / total).collect();
        Ok(JetPoint { x, u })
    }

    pub fn order(&self) -> usize {
        self.x.len()
    }
}

/// Default metric exponent p = k!.
pub fn default_exponent(k: usize) -> Result<u64> {
    if k == 0 || k > 20 {
        return Err(Error::invalid("default exponent is defined for 1 <= k <= 20"));
    }
    Ok((2..=k as u64).product())
}

fn check_eps(eps: &[f64], order: usize) -> Result<()> {
    if eps.len() != order {
        return Err(Error::mismatch(format!(
            "need one weight per level: {} levels, {} weights",
            order,
            eps.len()
        )));
    }
    if eps[0] != 1.0 {
        return Err(Error::invalid("the first weight must be exactly 1"));
    }
    if eps.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::invalid("weights must be > 0"));
    }
    if eps.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::invalid("weights must be nonincreasing"));
    }
    Ok(())
}

/// Jet metric value Psi(xi) = (sum_s (eps_s |xi_s|)^{2p/s})^{1/p}.
pub fn finsler_value(jet: &JetVector, eps: &[f64], p: u64) -> Result<f64> {
    if p == 0 {
        return Err(Error::invalid("metric exponent must be >= 1"));
    }
    check_eps(eps, jet.order())?;
    let p = p as f64;
    let mut sum = 0.0;
    for (s0, level) in jet.levels().iter().enumerate() {
        let s = (s0 + 1) as f64;
        let norm_sq: f64 = level.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq > 0.0 {
            sum += (eps[s0] * norm_sq.sqrt()).powf(2.0 * p / s);
        }
    }
    Ok(sum.powf(1.0 / p))
}

type ExactComplex = num_complex::Complex<Rational>;

/// Exact p-th power of the jet metric for rational jets: Psi^p =
/// sum_s (eps_s^2 |xi_s|^2)^{p/s}, defined whenever every level order
/// divides p (true for p = k!). The square root never appears, so the
/// value is an exact fraction.
pub fn finsler_value_pow_exact(
    jet: &[Vec<ExactComplex>],
    eps_sq: &[Rational],
    p: u64,
) -> Result<Rational> {
    if jet.is_empty() {
        return Err(Error::invalid("a jet needs at least one level"));
    }
    if eps_sq.len() != jet.len() {
        return Err(Error::mismatch("need one squared weight per level"));
    }
    if eps_sq.iter().any(|e| !e.is_positive()) {
        return Err(Error::invalid("squared weights must be > 0"));
    }
    let mut sum = Rational::zero();
    for (s0, level) in jet.iter().enumerate() {
        let s = s0 as u64 + 1;
        if p % s != 0 {
            return Err(Error::invalid(format!(
                "level order {s} must divide the exponent {p}"
            )));
        }
        let norm_sq: Rational = level
            .iter()
            .map(|z| z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone())
            .sum();
        if !norm_sq.is_zero() {
            sum += (eps_sq[s0].clone() * norm_sq).pow((p / s) as i32);
        }
    }
    Ok(sum)
}

/// Polar coordinates of a jet: x_s proportional to |xi_s|^{2p/s} and
/// u_s = xi_s / |xi_s|. A vanishing level gets weight 0 and, by
/// convention, the first coordinate vector as its direction.
pub fn to_polar(jet: &JetVector, p: u64) -> Result<JetPoint> {
    if p == 0 {
        return Err(Error::invalid("metric exponent must be >= 1"));
    }
    let p = p as f64;
    let width = jet.width();
    let mut raw = Vec::with_capacity(jet.order());
    let mut dirs = Vec::with_capacity(jet.order());
    for (s0, level) in jet.levels().iter().enumerate() {
        let s = (s0 + 1) as f64;
        let norm_sq: f64 = level.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq > 0.0 {
            raw.push(norm_sq.powf(p / s));
            let norm = norm_sq.sqrt();
            dirs.push(level.iter().map(|z| z / norm).collect());
        } else {
            raw.push(0.0);
            let mut e1 = vec![Complex64::ZERO; width];
            e1[0] = Complex64::new(1.0, 0.0);
            dirs.push(e1);
        }
    }
    let total: f64 = raw.iter().sum();
    let x = raw.iter().map(|t| t / total).collect();
    JetPoint::new(x, dirs)
}

/// Horizontal curvature form at a polar point:
/// H[i][j] = sum_s (x_s / s) sum_{a,b} c[i][j][a][b] u_s[a] conj(u_s[b]).
pub fn horizontal_curvature(tensor: &CurvatureTensor, point: &JetPoint) -> Result<HermitianForm> {
    let r = tensor.fiber_dim();
    if point.u.iter().any(|dir| dir.len() != r) {
        return Err(Error::mismatch("direction width differs from the fiber dimension"));
    }
    HermitianForm::from_upper(tensor.base_dim(), |i, j| {
        let mut acc = Complex64::ZERO;
        for (s0, dir) in point.u.iter().enumerate() {
            let weight = point.x[s0] / (s0 + 1) as f64;
            acc += sesquilinear_value(r, |a, b| tensor.entry(i, j, a, b), dir) * weight;
        }
        acc
    })
}

/// Harmonic number H(k) = 1 + 1/2 + ... + 1/k, exact.
pub fn harmonic_sum(k: u64) -> Result<Rational> {
    if k == 0 {
        return Err(Error::invalid("harmonic sum needs k >= 1"));
    }
    Ok(crate::rational::harmonic(k))
}

/// Mean of the horizontal curvature over uniformly sampled polar points:
/// H(k) / (k r) times the fiber trace of the tensor, exactly.
pub fn expected_curvature(tensor: &CurvatureTensor, k: usize) -> Result<HermitianForm> {
    if k == 0 {
        return Err(Error::invalid("jet order must be >= 1"));
    }
    let factor = crate::rational::to_f64(
        &(harmonic_sum(k as u64)? / rat_int((k * tensor.fiber_dim()) as i64)),
    );
    let trace = tensor.fiber_trace();
    HermitianForm::from_upper(tensor.base_dim(), |i, j| trace.entry(i, j) * factor)
}

/// One uniformly sampled polar point: a gaussian vector in C^{k r} yields
/// Dirichlet(r, ..., r) weights as squared block norms and independent
/// uniform unit directions as normalized blocks.
pub fn sample_jet_point(k: usize, r: usize, rng: &mut RandomStream) -> Result<JetPoint> {
    if k == 0 || r == 0 {
        return Err(Error::invalid("jet order and fiber dimension must be >= 1"));
    }
    let mut buf = vec![Complex64::ZERO; k * r];
    loop {
        rng.fill_complex_gaussian(&mut buf);
        let mut norms = Vec::with_capacity(k);
        for s in 0..k {
            let block_norm = normalize(&mut buf[s * r..(s + 1) * r]);
            if !(block_norm > 0.0) {
                norms.clear();
                break;
            }
            norms.push(block_norm);
        }
        if norms.len() != k {
            continue;
        }
        let total: f64 = norms.iter().sum();
        let x = norms.iter().map(|n| n / total).collect();
        let u = buf.chunks(r).map(|c| c.to_vec()).collect();
        return Ok(JetPoint { x, u });
    }
}

/// Monte Carlo mean of the horizontal curvature with per-entry standard
/// errors (stored row-major over the base indices).
#[derive(Clone, Debug)]
pub struct McCurvature {
    pub mean: HermitianForm,
    pub stderr: Vec<f64>,
    pub samples: u64,
}

impl McCurvature {
    pub fn stderr_entry(&self, i: usize, j: usize) -> f64 {
        self.stderr[i * self.mean.dim() + j]
    }
}

/// Estimates the expected horizontal curvature by sampling polar points.
pub fn mc_expected_curvature(
    tensor: &CurvatureTensor,
    k: usize,
    samples: u64,
    workers: usize,
    rng: &RandomStream,
) -> Result<McCurvature> {
    if k == 0 {
        return Err(Error::invalid("jet order must be >= 1"));
    }
    if samples < 2 {
        return Err(Error::invalid("need at least two samples"));
    }
    let n = tensor.base_dim();
    let r = tensor.fiber_dim();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .collect();
    let dim = 2 * pairs.len();
    let est = mean_estimate_vec(rng, samples, workers, dim, |rng, row| {
        let point = sample_jet_point(k, r, rng).expect("k, r >= 1 by construction");
        for (slot, &(i, j)) in pairs.iter().enumerate() {
            let mut acc = Complex64::ZERO;
            for (s0, dir) in point.u.iter().enumerate() {
                let weight = point.x[s0] / (s0 + 1) as f64;
                acc += sesquilinear_value(r, |a, b| tensor.entry(i, j, a, b), dir) * weight;
            }
            row[2 * slot] = acc.re;
            row[2 * slot + 1] = if i == j { 0.0 } else { acc.im };
        }
    });
    let mean = HermitianForm::from_upper(n, |i, j| {
        let slot = pairs.iter().position(|&p| p == (i, j)).expect("upper pair");
        Complex64::new(est.mean[2 * slot], est.mean[2 * slot + 1])
    })?;
    let mut stderr = vec![0.0; n * n];
    for (slot, &(i, j)) in pairs.iter().enumerate() {
        let var = est.variance[2 * slot] + est.variance[2 * slot + 1];
        let se = (var / samples as f64).sqrt();
        stderr[i * n + j] = se;
        stderr[j * n + i] = se;
    }
    Ok(McCurvature {
        mean,
        stderr,
        samples,
    })
}

/// Which negative-eigenvalue counts a Morse sum ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexMode {
    /// Counts 0, 1, ..., q.
    UpTo,
    /// Count exactly q.
    Exactly,
    /// Counts q-1, q, q+1 (clipped to the valid range).
    Band,
}

impl IndexMode {
    fn selects(self, q: usize, count: usize) -> bool {
        match self {
            IndexMode::UpTo => count <= q,
            IndexMode::Exactly => count == q,
            IndexMode::Band => count + 1 >= q && count <= q + 1,
        }
    }
}

/// Signed Morse contribution of a point set.
#[derive(Clone, Debug, PartialEq)]
pub struct MorseSum {
    /// sum of (-1)^q * (prod lambda_i) * w over the selected points.
    pub value: f64,
    /// Points with an eigenvalue inside [-tol, tol]; they contribute 0.
    pub degenerate: usize,
}

/// Morse sum over weighted eigenvalue lists. A point enters when its
/// negative-eigenvalue count lies in the index set of (q, mode); points
/// with a zero eigenvalue (within tol) are excluded and counted.
pub fn morse_sum(
    points: &[(Vec<f64>, f64)],
    q: usize,
    mode: IndexMode,
    tol: f64,
) -> Result<MorseSum> {
    if !(tol >= 0.0) {
        return Err(Error::invalid("tolerance must be finite and >= 0"));
    }
    let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
    let mut value = 0.0;
    let mut degenerate = 0;
    for (eigs, weight) in points {
        if !(*weight >= 0.0) || !weight.is_finite() {
            return Err(Error::invalid("weights must be finite and >= 0"));
        }
        if eigs.iter().any(|l| l.abs() <= tol) {
            degenerate += 1;
            continue;
        }
        let count = eigs.iter().filter(|&&l| l < 0.0).count();
        if mode.selects(q, count) {
            let product: f64 = eigs.iter().product();
            value += sign * product * weight;
        }
    }
    Ok(MorseSum { value, degenerate })
}

/// Exact Morse sum over rational eigenvalue lists; zero eigenvalues are
/// detected exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct MorseSumExact {
    pub value: Rational,
    pub degenerate: usize,
}

pub fn morse_sum_exact(
    points: &[(Vec<Rational>, Rational)],
    q: usize,
    mode: IndexMode,
) -> Result<MorseSumExact> {
    let sign = if q % 2 == 0 { rat_int(1) } else { rat_int(-1) };
    let mut value = Rational::zero();
    let mut degenerate = 0;
    for (eigs, weight) in points {
        if weight.is_negative() {
            return Err(Error::invalid("weights must be >= 0"));
        }
        if eigs.iter().any(|l| l.is_zero()) {
            degenerate += 1;
            continue;
        }
        let count = eigs.iter().filter(|l| l.is_negative()).count();
        if mode.selects(q, count) {
            let mut product = weight.clone();
            for l in eigs {
                product *= l.clone();
            }
            value += sign.clone() * product;
        }
    }
    Ok(MorseSumExact { value, degenerate })
}

/// Histogram of negative-eigenvalue counts over a point sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QIndexHistogram {
    /// Eigenvalues per point.
    pub dim: usize,
    /// buckets[q] counts the nondegenerate points of index q.
    pub buckets: Vec<usize>,
    /// Points with an eigenvalue inside [-tol, tol].
    pub degenerate: usize,
}

impl QIndexHistogram {
    /// Number of nondegenerate points of index <= q.
    pub fn cumulative(&self, q: usize) -> usize {
        self.buckets[..=q.min(self.dim)].iter().sum()
    }
}

/// Buckets eigenvalue lists by negative count. The product of the
/// eigenvalues of every nondegenerate bucket-q point has sign (-1)^q;
/// this is asserted.
pub fn q_index_partition(points: &[Vec<f64>], tol: f64) -> Result<QIndexHistogram> {
    if !(tol >= 0.0) {
        return Err(Error::invalid("tolerance must be finite and >= 0"));
    }
    let Some(first) = points.first() else {
        return Err(Error::invalid("need at least one point"));
    };
    let dim = first.len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::mismatch("all points must have the same eigenvalue count"));
    }
    let mut buckets = vec![0usize; dim + 1];
    let mut degenerate = 0;
    for eigs in points {
        if eigs.iter().any(|l| l.abs() <= tol) {
            degenerate += 1;
            continue;
        }
        let q = eigs.iter().filter(|&&l| l < 0.0).count();
        let product: f64 = eigs.iter().product();
        let expected_sign = if q % 2 == 0 { 1.0 } else { -1.0 };
        assert!(
            product.signum() == expected_sign,
            "bucket {q} point with product sign {}",
            product.signum()
        );
        buckets[q] += 1;
    }
    Ok(QIndexHistogram {
        dim,
        buckets,
        degenerate,
    })
}
