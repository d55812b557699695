//! One-shot verification suite: each check pits an implementation against
//! an independent route (closed form vs Monte Carlo, generating function
//! vs enumeration, closed form vs recursion) and reports expected value,
//! observed value, and tolerance.
//!
//! Everything is deterministic given (seed, sample count): estimates are
//! computed on fixed sample blocks with per-block substreams, so reports
//! never depend on the worker count. The rendered text deliberately
//! carries no timing or thread information.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::curvature::{
    default_exponent, expected_curvature, finsler_value, mc_expected_curvature, morse_sum_exact,
    q_index_partition, CurvatureTensor, IndexMode, JetVector,
};
use crate::error::Error;
use crate::gg::{
    apply_weighted_action, asymptotic_fiber_dimension, fiber_dimension, fiber_dimension_table,
    JetSpec,
};
use crate::hermitian::HermitianForm;
use crate::morse::{eta_top_intersection, general_type_threshold, HypersurfaceSpec};
use crate::rational::{rat, rat_int, to_f64, Rational};
use crate::rng::RandomStream;
use crate::semple::{
    det_vk_closed, det_vk_step, induced_weights, tautological_twist, validate_rank_sequence,
    PicardClass, RankSequence, TowerSpec,
};
use crate::sphere::{
    dirichlet_moment, mc_moments, partition_identity, sphere_quadratic_average, BlockConfig,
};
use crate::Result;

/// Default sample counts per statistical check; `CheckConfig::samples`
/// overrides all of them at once.
pub const DEFAULT_TRACE_SAMPLES: u64 = 100_000;
pub const DEFAULT_MOMENT_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_CURVATURE_SAMPLES: u64 = 100_000;

// Stream ids, one per check, so sampling in one check never shifts
// another check's draws.
const STREAM_TRACE: u64 = 1;
const STREAM_MOMENTS: u64 = 2;
const STREAM_CURVATURE: u64 = 4;
const STREAM_FINSLER: u64 = 7;
const STREAM_MORSE: u64 = 8;

/// Knobs of a verification run.
#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub seed: u64,
    /// Overrides every statistical check's sample count when set.
    pub samples: Option<u64>,
    /// Width of the statistical acceptance band, in standard errors.
    pub tol_sigma: f64,
    pub workers: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 0,
            samples: None,
            tol_sigma: 4.0,
            workers: 1,
        }
    }
}

impl CheckConfig {
    fn validate(&self) -> Result<()> {
        if let Some(n) = self.samples {
            if n < 2 {
                return Err(Error::invalid("need at least two samples"));
            }
        }
        if self.workers == 0 {
            return Err(Error::invalid("need at least one worker"));
        }
        if !(self.tol_sigma > 0.0) || !self.tol_sigma.is_finite() {
            return Err(Error::invalid("tolerance band must be positive and finite"));
        }
        Ok(())
    }

    fn samples_or(&self, default: u64) -> u64 {
        self.samples.unwrap_or(default)
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub tolerance: String,
    pub passed: bool,
}

impl CheckResult {
    fn new(
        name: &str,
        expected: impl Into<String>,
        observed: impl Into<String>,
        tolerance: impl Into<String>,
        passed: bool,
    ) -> Self {
        CheckResult {
            name: name.to_string(),
            expected: expected.into(),
            observed: observed.into(),
            tolerance: tolerance.into(),
            passed,
        }
    }
}

/// Sphere average of a Hermitian form vs trace(Q)/r for twenty seeded
/// forms of ranks 2, 3, 5; at most one excursion beyond the band.
pub fn check_trace_identity(cfg: &CheckConfig) -> Result<CheckResult> {
    cfg.validate()?;
    let samples = cfg.samples_or(DEFAULT_TRACE_SAMPLES);
    let rng = RandomStream::with_stream(cfg.seed, STREAM_TRACE);
    let ranks = [2usize, 3, 5];
    let runs = 20u64;
    let mut within = 0u64;
    let mut max_dev = 0.0f64;
    for case in 0..runs {
        let r = ranks[(case % ranks.len() as u64) as usize];
        let mut q_rng = rng.substream(2 * case);
        let q = HermitianForm::random(r, &mut q_rng)?;
        let avg = sphere_quadratic_average(&q, samples, cfg.workers, &rng.substream(2 * case + 1))?;
        let dev = (avg.estimate.mean - avg.exact).abs();
        if dev <= cfg.tol_sigma * avg.estimate.stderr {
            within += 1;
        }
        if avg.estimate.stderr > 0.0 {
            max_dev = max_dev.max(dev / avg.estimate.stderr);
        }
    }
    Ok(CheckResult::new(
        "sphere trace identity",
        format!("mean within {} sigma of tr(Q)/r in >= 19/{runs} runs", cfg.tol_sigma),
        format!("{within}/{runs} within band; max deviation {max_dev:.2} sigma"),
        format!("{} sigma, one excursion allowed", cfg.tol_sigma),
        within >= runs - 1,
    ))
}

fn moment_indices(blocks: usize) -> Vec<Vec<u64>> {
    let mut alphas = vec![vec![0u64; blocks]];
    for i in 0..blocks {
        let mut a = vec![0u64; blocks];
        a[i] = 1;
        alphas.push(a);
    }
    for i in 0..blocks {
        for j in i..blocks {
            let mut a = vec![0u64; blocks];
            a[i] += 1;
            a[j] += 1;
            alphas.push(a);
        }
    }
    alphas
}

/// Closed-form grouped-sphere moments vs Monte Carlo for equal and
/// once-cut block layouts, plus the exact first-moment identities.
pub fn check_dirichlet_moments(cfg: &CheckConfig) -> Result<CheckResult> {
    cfg.validate()?;
    let samples = cfg.samples_or(DEFAULT_MOMENT_SAMPLES);
    let rng = RandomStream::with_stream(cfg.seed, STREAM_MOMENTS);
    let configs = [
        BlockConfig::equal(3, 2)?,
        BlockConfig::equal(4, 3)?,
        BlockConfig::one_cut(3, 2, 1)?,
        BlockConfig::one_cut(4, 3, 2)?,
    ];
    let mut total = 0u64;
    let mut within = 0u64;
    let mut max_dev = 0.0f64;
    for (c_idx, blocks) in configs.iter().enumerate() {
        let alphas = moment_indices(blocks.block_count());
        let sub = rng.substream(c_idx as u64);
        let estimates = mc_moments(blocks, &alphas, samples, cfg.workers, &sub)?;
        for (alpha, est) in alphas.iter().zip(&estimates) {
            let exact = to_f64(&dirichlet_moment(blocks, alpha)?);
            let dev = (est.mean - exact).abs();
            total += 1;
            if dev <= cfg.tol_sigma * est.stderr {
                within += 1;
            }
            if est.stderr > 0.0 {
                max_dev = max_dev.max(dev / est.stderr);
            }
        }
    }
    // First moments of the cut layouts, exactly: the formulas, their
    // closed-form counterparts, and the convex combination summing to 1.
    let mut identities_exact = true;
    for (k, r, ell) in [(3usize, 2usize, 1usize), (4, 3, 2)] {
        let pid = partition_identity(k, r, ell)?;
        let m = rat_int((k * r - ell) as i64);
        identities_exact &= pid.cut_moment == rat_int(r as i64 - 1) / m.clone();
        identities_exact &= pid.free_moment == rat_int(r as i64) / m;
        identities_exact &= pid.combination == rat_int(1);
        let layout = BlockConfig::one_cut(k, r, ell)?;
        let mut cut_index = vec![0u64; k];
        cut_index[k - 1] = 1;
        let mut free_index = vec![0u64; k];
        free_index[0] = 1;
        identities_exact &= dirichlet_moment(&layout, &cut_index)? == pid.cut_moment;
        identities_exact &= dirichlet_moment(&layout, &free_index)? == pid.free_moment;
    }
    Ok(CheckResult::new(
        "dirichlet moments vs monte carlo",
        format!("all {total} moments within {} sigma; first-moment identities exact", cfg.tol_sigma),
        format!(
            "{within}/{total} within band; max deviation {max_dev:.2} sigma; identities {}",
            if identities_exact { "exact" } else { "violated" },
        ),
        format!("{} sigma; identities 0", cfg.tol_sigma),
        within == total && identities_exact,
    ))
}

/// Number of weighted monomials of degree `m` in r variables of each
/// weight 1..k, by direct slot recursion (no generating function).
fn brute_force_fiber_count(k: usize, r: usize, m: usize) -> u64 {
    fn rec(weights: &[usize], remaining: usize) -> u64 {
        match weights.split_first() {
            None => u64::from(remaining == 0),
            Some((&w, rest)) => {
                let mut acc = 0;
                let mut used = 0;
                while used <= remaining {
                    acc += rec(rest, remaining - used);
                    used += w;
                }
                acc
            }
        }
    }
    let weights: Vec<usize> = (1..=k).flat_map(|s| std::iter::repeat(s).take(r)).collect();
    rec(&weights, m)
}

fn dimension_ratio(k: usize, r: usize, m: u64) -> Result<f64> {
    let exact = fiber_dimension(JetSpec::new(k, r)?, m as usize);
    let exact_f = exact
        .to_f64()
        .ok_or_else(|| Error::invalid("fiber dimension overflows f64"))?;
    let asym = to_f64(&asymptotic_fiber_dimension(JetSpec::new(k, r)?, m)?);
    Ok((exact_f / asym - 1.0).abs())
}

/// Generating-function fiber dimensions vs brute-force enumeration, and
/// convergence to the closed asymptotic shape.
pub fn check_fiber_dimensions(cfg: &CheckConfig) -> Result<CheckResult> {
    cfg.validate()?;
    let m_max = 15usize;
    let mut total = 0u64;
    let mut matches = 0u64;
    for k in 1..=4 {
        for r in 1..=3 {
            let table = fiber_dimension_table(JetSpec::new(k, r)?, m_max);
            for (m, dim) in table.iter().enumerate() {
                total += 1;
                if *dim == BigUint::from(brute_force_fiber_count(k, r, m)) {
                    matches += 1;
                }
            }
        }
    }
    let ratio_line = dimension_ratio(2, 1, 100_000)?;
    let ratio_plane = dimension_ratio(2, 2, 10_000)?;
    Ok(CheckResult::new(
        "jet fiber dimensions",
        format!("{total}/{total} exact matches; asymptotic gaps <= 5% and <= 10%"),
        format!(
            "{matches}/{total} exact; gap {:.2}% at (k=2,r=1,m=1e5), {:.2}% at (k=2,r=2,m=1e4)",
            100.0 * ratio_line,
            100.0 * ratio_plane,
        ),
        "0; 5%; 10%".to_string(),
        matches == total && ratio_line <= 0.05 && ratio_plane <= 0.10,
    ))
}

/// Exact expected horizontal curvature vs Monte Carlo for three tensors,
/// and the bitwise jet-order-one reduction to the sphere average.
pub fn check_expected_curvature(cfg: &CheckConfig) -> Result<CheckResult> {
    cfg.validate()?;
    let samples = cfg.samples_or(DEFAULT_CURVATURE_SAMPLES);
    let rng = RandomStream::with_stream(cfg.seed, STREAM_CURVATURE);
    let mut tensor_rng = rng.substream(0);
    let tensors = [
        CurvatureTensor::zero(2, 2)?,
        CurvatureTensor::kronecker(2, 2)?,
        CurvatureTensor::random(2, 2, &mut tensor_rng)?,
    ];
    let k = 2usize;
    let mut all_within = true;
    let mut max_dev = 0.0f64;
    for (idx, tensor) in tensors.iter().enumerate() {
        let exact = expected_curvature(tensor, k)?;
        let mc = mc_expected_curvature(tensor, k, samples, cfg.workers, &rng.substream(1 + idx as u64))?;
        for i in 0..tensor.base_dim() {
            for j in i..tensor.base_dim() {
                let dev = (mc.mean.entry(i, j) - exact.entry(i, j)).norm();
                let se = mc.stderr_entry(i, j);
                if dev > cfg.tol_sigma * se {
                    all_within = false;
                }
                if se > 0.0 {
                    max_dev = max_dev.max(dev / se);
                }
            }
        }
    }
    // Jet order one: the estimator must literally be the sphere average,
    // bit for bit, because both route through the same draws and sums.
    let r = 3usize;
    let mut q_rng = rng.substream(10);
    let q = HermitianForm::random(r, &mut q_rng)?;
    let mut data = vec![Complex64::ZERO; r * r];
    for a in 0..r {
        for b in 0..r {
            data[a * r + b] = q.entry(a, b);
        }
    }
    let line_tensor = CurvatureTensor::new(1, r, data)?;
    let shared = rng.substream(11);
    let sphere_side = sphere_quadratic_average(&q, samples, cfg.workers, &shared)?;
    let jet_side = mc_expected_curvature(&line_tensor, 1, samples, cfg.workers, &shared)?;
    let reduction_exact = sphere_side.estimate.mean.to_bits() == jet_side.mean.entry(0, 0).re.to_bits()
        && jet_side.mean.entry(0, 0).im == 0.0
        && sphere_side.estimate.stderr.to_bits() == jet_side.stderr_entry(0, 0).to_bits();
    Ok(CheckResult::new(
        "expected horizontal curvature",
        format!(
            "entrywise within {} sigma for zero, kronecker, random tensors; order-1 reduction bit-identical",
            cfg.tol_sigma,
        ),
        format!(
            "max deviation {max_dev:.2} sigma; reduction {}",
            if reduction_exact { "bit-identical" } else { "diverged" },
        ),
        format!("{} sigma; 0 bits", cfg.tol_sigma),
        all_within && reduction_exact,
    ))
}

/// Determinant recursion vs closed form, twist duality, induced weights
/// of constant rank sequences, and an exhaustive admissibility scan.
pub fn check_tower_bookkeeping(cfg: &CheckConfig) -> Result<CheckResult> {
    cfg.validate()?;
    let mut det_cases = 0u64;
    let mut det_exact = true;
    for r in 1..=5usize {
        let mut stepped = PicardClass::generator("detV")?;
        for k in 1..=12usize {
            stepped = det_vk_step(&stepped, r)?;
            let closed = det_vk_closed(&TowerSpec::new(6, r, k)?)?;
            det_cases += 1;
            det_exact &= stepped == closed;
        }
    }
    let mut duals_exact = true;
    for r in 1..=5usize {
        let constant = RankSequence::new(vec![r as i64; 6])?;
        duals_exact &= induced_weights(&constant).components() == vec![r as i64 - 1; 5];
        for k in 1..=12usize {
            let det = det_vk_closed(&TowerSpec::new(6, r, k)?)?;
            let twist = tautological_twist(r, k, r)?;
            duals_exact &= det
                .weight()
                .components()
                .iter()
                .zip(twist.components())
                .all(|(a, b)| a + b == 0);
        }
    }
    // Exhaustive scan: admissible = nonincreasing with unit drops.
    let mut scanned = 0u64;
    let mut agree = 0u64;
    for len in 1..=6usize {
        for code in 0..4u64.pow(len as u32) {
            let mut seq = Vec::with_capacity(len);
            let mut rest = code;
            for _ in 0..len {
                seq.push((rest % 4) as i64 + 1);
                rest /= 4;
            }
            let accepted = validate_rank_sequence(&seq, None).is_empty();
            let reference = seq.windows(2).all(|w| w[1] <= w[0] && w[0] - w[1] <= 1);
            scanned += 1;
            if accepted == reference {
                agree += 1;
            }
        }
    }
    Ok(CheckResult::new(
        "tower class bookkeeping",
        format!("{det_cases} determinant identities exact; twists dual; {scanned} sequences classified"),
        format!(
            "determinants {}; duals {}; {agree}/{scanned} sequences agree",
            if det_exact { "exact" } else { "violated" },
            if duals_exact { "exact" } else { "violated" },
        ),
        "exact".to_string(),
        det_exact && duals_exact && agree == scanned,
    ))
}

/// Top intersections vs the plane-curve genus and surface canonical
/// square oracles; positivity threshold at degree n + 3.
pub fn check_hypersurface_intersections(cfg: &CheckConfig) -> Result<CheckResult> {
    cfg.validate()?;
    let mut oracle_cases = 0u64;
    let mut oracles_exact = true;
    for d in 3i64..=8 {
        let curve = HypersurfaceSpec::new(1, d as u64)?;
        let genus = (d - 1) * (d - 2) / 2;
        oracles_exact &=
            eta_top_intersection(&curve, &rat_int(0))? == rat_int(2 * genus - 2);
        let surface = HypersurfaceSpec::new(2, d as u64)?;
        oracles_exact &=
            eta_top_intersection(&surface, &rat_int(0))? == rat_int(d * (d - 4) * (d - 4));
        oracle_cases += 2;
    }
    // The intersection number vanishes exactly once, at the borderline
    // degree n+2, and is strictly positive from the threshold n+3 on
    // (for even n it is also positive below the borderline, where the
    // base is squared, so the threshold is read off the zero).
    let mut thresholds_hold = true;
    for n in 1..=6usize {
        let threshold = general_type_threshold(n)?;
        let mut zeros = Vec::new();
        for d in 1..=12u64 {
            let spec = HypersurfaceSpec::new(n, d)?;
            let eta = eta_top_intersection(&spec, &rat_int(0))?;
            if eta.is_zero() {
                zeros.push(d);
            }
            if d >= threshold {
                thresholds_hold &= eta > rat_int(0);
            }
        }
        thresholds_hold &= zeros == vec![threshold - 1];
        let at_threshold = HypersurfaceSpec::new(n, threshold)?;
        thresholds_hold &= eta_top_intersection(&at_threshold, &rat(1, 2))? > rat_int(0);
    }
    Ok(CheckResult::new(
        "hypersurface intersections",
        format!("{oracle_cases} adjunction values exact; eta vanishes at n+2 only, positive from n+3 (n <= 6)"),
        format!(
            "oracles {}; thresholds {}",
            if oracles_exact { "exact" } else { "violated" },
            if thresholds_hold { "confirmed" } else { "violated" },
        ),
        "exact".to_string(),
        oracles_exact && thresholds_hold,
    ))
}

/// Metric homogeneity under the weighted scaling action over a hundred
/// seeded jets across orders 1..4 and widths 1..3.
pub fn check_finsler_homogeneity(cfg: &CheckConfig) -> Result<CheckResult> {
    cfg.validate()?;
    let rng = RandomStream::with_stream(cfg.seed, STREAM_FINSLER);
    let bound = 1e-12f64;
    let mut max_rel = 0.0f64;
    for jet_index in 0..100u64 {
        let k = (jet_index % 4) as usize + 1;
        let r = (jet_index % 3) as usize + 1;
        let mut jrng = rng.substream(jet_index);
        let levels: Vec<Vec<Complex64>> = (0..k)
            .map(|_| (0..r).map(|_| jrng.next_complex_gaussian()).collect())
            .collect();
        let lambda = loop {
            let z = jrng.next_complex_gaussian();
            if z.norm() >= 0.1 {
                break z;
            }
        };
        let eps: Vec<f64> = (0..k).map(|s| 0.5f64.powi(s as i32)).collect();
        let p = default_exponent(k)?;
        let jet = JetVector::new(levels.clone())?;
        let scaled = JetVector::new(apply_weighted_action(&lambda, &levels)?)?;
        let lhs = finsler_value(&scaled, &eps, p)?;
        let rhs = lambda.norm_sqr() * finsler_value(&jet, &eps, p)?;
        max_rel = max_rel.max((lhs - rhs).abs() / rhs.abs());
    }
    Ok(CheckResult::new(
        "finsler homogeneity",
        format!("relative defect <= {bound:.0e} over 100 jets"),
        format!("max relative defect {max_rel:.2e}"),
        format!("{bound:.0e}"),
        max_rel <= bound,
    ))
}

/// Sign bookkeeping of index buckets and the exact full-index identity
/// of the signed sums.
pub fn check_morse_bookkeeping(cfg: &CheckConfig) -> Result<CheckResult> {
    cfg.validate()?;
    let rng = RandomStream::with_stream(cfg.seed, STREAM_MORSE);
    // Float route: bucket 500 seeded spectra and recount independently.
    let mut frng = rng.substream(0);
    let dim = 4usize;
    let spectra: Vec<Vec<f64>> = (0..500)
        .map(|_| (0..dim).map(|_| frng.next_complex_gaussian().re).collect())
        .collect();
    let tol = 1e-12;
    let hist = q_index_partition(&spectra, tol)?;
    let mut recount = vec![0usize; dim + 1];
    let mut degenerate = 0usize;
    let mut signs_hold = true;
    for eigs in &spectra {
        if eigs.iter().any(|l| l.abs() <= tol) {
            degenerate += 1;
            continue;
        }
        let q = eigs.iter().filter(|&&l| l < 0.0).count();
        let product: f64 = eigs.iter().product();
        let expected_sign = if q % 2 == 0 { 1.0 } else { -1.0 };
        signs_hold &= product.signum() == expected_sign;
        recount[q] += 1;
    }
    let buckets_match = hist.buckets == recount && hist.degenerate == degenerate;
    let accounted = hist.buckets.iter().sum::<usize>() + hist.degenerate == spectra.len();

    // Exact route: the full index range reproduces the signed total.
    let mut identities_exact = true;
    let mut skipped = 0usize;
    for n in 1..=4usize {
        let mut xrng = rng.substream(n as u64);
        let points: Vec<(Vec<Rational>, Rational)> = (0..60)
            .map(|_| {
                let eigs: Vec<Rational> = (0..n)
                    .map(|_| {
                        let num = (xrng.next_u64() % 19) as i64 - 9;
                        let den = (xrng.next_u64() % 4) as i64 + 1;
                        rat(num, den)
                    })
                    .collect();
                let weight = rat((xrng.next_u64() % 5) as i64, 1);
                (eigs, weight)
            })
            .collect();
        let full = morse_sum_exact(&points, n, IndexMode::UpTo)?;
        let mut signed_total = rat_int(0);
        let mut degenerate_ref = 0usize;
        for (eigs, weight) in &points {
            if eigs.iter().any(Zero::is_zero) {
                degenerate_ref += 1;
                continue;
            }
            signed_total += eigs.iter().fold(weight.clone(), |acc, l| acc * l.clone());
        }
        let sign = if n % 2 == 0 { rat_int(1) } else { rat_int(-1) };
        identities_exact &= full.value == sign * signed_total;
        identities_exact &= full.degenerate == degenerate_ref;
        skipped += degenerate_ref;
    }
    Ok(CheckResult::new(
        "morse index bookkeeping",
        "bucket signs (-1)^q; full-index sums equal signed totals exactly".to_string(),
        format!(
            "signs {}; buckets {}; identities {}; {skipped} degenerate excluded",
            if signs_hold { "consistent" } else { "violated" },
            if buckets_match && accounted { "consistent" } else { "inconsistent" },
            if identities_exact { "exact" } else { "violated" },
        ),
        "exact".to_string(),
        signs_hold && buckets_match && accounted && identities_exact,
    ))
}

fn run_core(cfg: &CheckConfig, workers: usize) -> Result<Vec<CheckResult>> {
    let sub = CheckConfig {
        workers,
        ..cfg.clone()
    };
    Ok(vec![
        check_trace_identity(&sub)?,
        check_dirichlet_moments(&sub)?,
        check_fiber_dimensions(&sub)?,
        check_expected_curvature(&sub)?,
        check_tower_bookkeeping(&sub)?,
        check_hypersurface_intersections(&sub)?,
        check_finsler_homogeneity(&sub)?,
        check_morse_bookkeeping(&sub)?,
    ])
}

fn first_divergence(a: &str, b: &str) -> String {
    let pos = a
        .bytes()
        .zip(b.bytes())
        .position(|(x, y)| x != y)
        .unwrap_or_else(|| a.len().min(b.len()));
    format!("reports differ at byte {pos} ({} vs {} bytes)", a.len(), b.len())
}

/// Runs the full suite: the eight substance checks at the configured
/// worker count, then the determinism check comparing rendered reports
/// across worker counts 1 and 4.
pub fn run_all(cfg: &CheckConfig) -> Result<Vec<CheckResult>> {
    cfg.validate()?;
    let results = run_core(cfg, cfg.workers)?;
    let report_one = if cfg.workers == 1 {
        render_text(&results)
    } else {
        render_text(&run_core(cfg, 1)?)
    };
    let report_four = if cfg.workers == 4 {
        render_text(&results)
    } else {
        render_text(&run_core(cfg, 4)?)
    };
    let identical = report_one == report_four;
    let mut results = results;
    results.push(CheckResult::new(
        "worker-count determinism",
        "byte-identical reports for 1 and 4 workers".to_string(),
        if identical {
            format!("identical ({} bytes)", report_one.len())
        } else {
            first_divergence(&report_one, &report_four)
        },
        "0 bytes".to_string(),
        identical,
    ));
    Ok(results)
}

/// One line per check plus a summary line; free of timing and worker
/// information so reports are comparable across runs.
pub fn render_text(results: &[CheckResult]) -> String {
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in results {
        out.push_str(&format!(
            "[{}] {:width$}  expected: {}; observed: {}; tolerance: {}\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.expected,
            r.observed,
            r.tolerance,
        ));
    }
    let passed = results.iter().filter(|r| r.passed).count();
    out.push_str(&format!("{passed}/{} checks passed\n", results.len()));
    out
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> CheckConfig {
        CheckConfig {
            seed: 7,
            samples: Some(4096),
            tol_sigma: 4.0,
            workers: 1,
        }
    }

    #[test]
    fn suite_has_stable_names_and_deterministic_rendering() {
        let cfg = small_config();
        let first = run_all(&cfg).unwrap();
        let names: Vec<&str> = first.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "sphere trace identity",
                "dirichlet moments vs monte carlo",
                "jet fiber dimensions",
                "expected horizontal curvature",
                "tower class bookkeeping",
                "hypersurface intersections",
                "finsler homogeneity",
                "morse index bookkeeping",
                "worker-count determinism",
            ],
        );
        let second = run_all(&cfg).unwrap();
        assert_eq!(render_text(&first), render_text(&second));
    }

    #[test]
    fn exact_checks_pass_at_any_sample_count() {
        let results = run_all(&small_config()).unwrap();
        for name in [
            "jet fiber dimensions",
            "tower class bookkeeping",
            "hypersurface intersections",
            "finsler homogeneity",
            "morse index bookkeeping",
            "worker-count determinism",
        ] {
            let check = results.iter().find(|r| r.name == name).unwrap();
            assert!(check.passed, "{name}: {}", check.observed);
        }
    }

    #[test]
    fn reports_are_worker_count_invariant() {
        let cfg = small_config();
        let multi = CheckConfig {
            workers: 3,
            ..cfg.clone()
        };
        let lhs = run_all(&cfg).unwrap();
        let rhs = run_all(&multi).unwrap();
        assert_eq!(render_text(&lhs), render_text(&rhs));
    }

    #[test]
    fn config_validation_rejects_bad_knobs() {
        let bad_samples = CheckConfig {
            samples: Some(1),
            ..CheckConfig::default()
        };
        assert!(run_all(&bad_samples).is_err());
        let bad_workers = CheckConfig {
            workers: 0,
            ..CheckConfig::default()
        };
        assert!(run_all(&bad_workers).is_err());
        let bad_band = CheckConfig {
            tol_sigma: 0.0,
            ..CheckConfig::default()
        };
        assert!(run_all(&bad_band).is_err());
    }
}
