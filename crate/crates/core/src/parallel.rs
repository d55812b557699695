//! Worker-count-independent Monte Carlo accumulation.
//!
//! Samples are grouped into fixed-size blocks; block `b` always draws from
//! `rng.substream(b)` and block results are merged in block order. Workers
//! only decide which thread evaluates a block, so the estimate is bitwise
//! identical for any worker count.

use crate::rng::RandomStream;

/// Samples per block. Fixed: changing it changes the substream layout and
/// therefore the sampled values.
pub const BLOCK_SAMPLES: u64 = 8192;

/// Mean and standard error of a scalar estimator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Componentwise means and spreads of a vector estimator.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorEstimate {
    pub mean: Vec<f64>,
    /// Sample variance per component; `stderr = sqrt(variance / samples)`.
    pub variance: Vec<f64>,
    pub stderr: Vec<f64>,
    pub samples: u64,
}

struct BlockSums {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

/// Runs `f` once per sample, filling a `dim`-component value row, and
/// returns componentwise mean and standard error of the mean.
pub fn mean_estimate_vec<F>(
    rng: &RandomStream,
    samples: u64,
    workers: usize,
    dim: usize,
    f: F,
) -> VectorEstimate
where
    F: Fn(&mut RandomStream, &mut [f64]) + Sync,
{
    assert!(samples >= 2, "need at least two samples for a standard error");
    assert!(workers >= 1, "need at least one worker");
    let blocks = samples.div_ceil(BLOCK_SAMPLES) as usize;
    let mut results: Vec<Option<BlockSums>> = Vec::new();
    results.resize_with(blocks, || None);

    let run_block = |b: usize| -> BlockSums {
        let lo = b as u64 * BLOCK_SAMPLES;
        let hi = (lo + BLOCK_SAMPLES).min(samples);
        let mut rng = rng.substream(b as u64);
        let mut sums = BlockSums {
            sum: vec![0.0; dim],
            sum_sq: vec![0.0; dim],
        };
        let mut row = vec![0.0; dim];
        for _ in lo..hi {
            f(&mut rng, &mut row);
            for (i, v) in row.iter().enumerate() {
                sums.sum[i] += v;
                sums.sum_sq[i] += v * v;
            }
        }
        sums
    };

    if workers == 1 {
        for (b, slot) in results.iter_mut().enumerate() {
            *slot = Some(run_block(b));
        }
    } else {
        let chunk = blocks.div_ceil(workers);
        std::thread::scope(|scope| {
            for (c, slice) in results.chunks_mut(chunk).enumerate() {
                let run_block = &run_block;
                scope.spawn(move || {
                    for (off, slot) in slice.iter_mut().enumerate() {
                        *slot = Some(run_block(c * chunk + off));
                    }
                });
            }
        });
    }

    // Merge strictly in block order: the reduction tree must not depend on
    // the worker count.
    let mut sum = vec![0.0; dim];
    let mut sum_sq = vec![0.0; dim];
    for slot in results {
        let block = slot.expect("every block was scheduled");
        for i in 0..dim {
            sum[i] += block.sum[i];
            sum_sq[i] += block.sum_sq[i];
        }
    }

    let n = samples as f64;
    let mean: Vec<f64> = sum.iter().map(|s| s / n).collect();
    let variance: Vec<f64> = (0..dim)
        .map(|i| ((sum_sq[i] - n * mean[i] * mean[i]) / (n - 1.0)).max(0.0))
        .collect();
    let stderr: Vec<f64> = variance.iter().map(|v| (v / n).sqrt()).collect();
    VectorEstimate {
        mean,
        variance,
        stderr,
        samples,
    }
}

/// Scalar specialization of [`mean_estimate_vec`].
pub fn mean_estimate<F>(rng: &RandomStream, samples: u64, workers: usize, f: F) -> ScalarEstimate
where
    F: Fn(&mut RandomStream) -> f64 + Sync,
{
    let est = mean_estimate_vec(rng, samples, workers, 1, |rng, row| row[0] = f(rng));
    ScalarEstimate {
        mean: est.mean[0],
        stderr: est.stderr[0],
        samples,
    }
}
