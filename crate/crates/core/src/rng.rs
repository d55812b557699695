//! Deterministic random streams.
//!
//! Every sampler in this crate draws from a counter-based ChaCha12 generator
//! addressed by `(seed, stream index)`. The same `(seed, stream, draw count)`
//! yields the same bits on every platform, so Monte Carlo results depend only
//! on the seed and the substream layout, never on scheduling.

use num_complex::Complex64;
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::Error;
use crate::Result;

/// SplitMix64 finalizer, used to spread substream indices over the 64-bit
/// stream space. Constants are the standard ones from the SplitMix64
/// reference implementation.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// A seeded, counter-based random stream with cheap independent substreams.
#[derive(Clone, Debug)]
pub struct RandomStream {
    rng: ChaCha12Rng,
    seed: u64,
    stream: u64,
}

impl RandomStream {
    /// Root stream for a seed (stream index 0).
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Stream `stream` of the generator family keyed by `seed`.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RandomStream { rng, seed, stream }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Derives an independent substream. Distinct indices are mixed into
    /// distinct ChaCha stream numbers; the derivation is pure, so the parent
    /// stream is not advanced.
    pub fn substream(&self, index: u64) -> Self {
        let derived = mix(self.stream ^ mix(index.wrapping_add(GOLDEN_GAMMA)));
        Self::with_stream(self.seed, derived)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on [0, 1), 53-bit resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform on (0, 1]; safe as a logarithm argument.
    fn next_open_f64(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Standard complex gaussian up to scale: independent N(0,1) real and
    /// imaginary parts from one Box-Muller pair. Two uniforms per call.
    pub fn next_complex_gaussian(&mut self) -> Complex64 {
        let u1 = self.next_open_f64();
        let u2 = self.next_f64();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        Complex64::new(radius * angle.cos(), radius * angle.sin())
    }

    pub fn fill_complex_gaussian(&mut self, buf: &mut [Complex64]) {
        for slot in buf.iter_mut() {
            *slot = self.next_complex_gaussian();
        }
    }
}

/// Divides by the euclidean norm in place and returns the squared norm of
/// the input. Shared by every sampler that needs a unit vector, so bitwise
/// agreement between estimators is by construction.
pub fn normalize(buf: &mut [Complex64]) -> f64 {
    let norm_sq: f64 = buf.iter().map(|z| z.norm_sqr()).sum();
    let norm = norm_sq.sqrt();
    for z in buf.iter_mut() {
        *z /= norm;
    }
    norm_sq
}

/// Uniform point on the unit sphere of C^r, via a normalized complex
/// gaussian; unitary invariance of the gaussian gives the uniform law.
pub fn sample_unit_vector(r: usize, rng: &mut RandomStream) -> Result<Vec<Complex64>> {
    if r == 0 {
        return Err(Error::invalid("unit vector dimension must be >= 1"));
    }
    let mut v = vec![Complex64::ZERO; r];
    loop {
        rng.fill_complex_gaussian(&mut v);
        // Underflow of the whole vector has probability ~0 but would divide
        // by zero; redraw instead.
        if normalize(&mut v) > 0.0 {
            return Ok(v);
        }
    }
}
