//! Small complex Hermitian forms: exact-symmetry storage, eigenvalues via
//! cyclic Jacobi sweeps, and inertia (signature) counting.

use num_complex::Complex64;

use crate::error::Error;
use crate::rng::RandomStream;
use crate::Result;

/// Off-diagonal Frobenius norm target for the Jacobi iteration, relative to
/// the largest entry modulus.
const JACOBI_RESIDUAL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 60;

/// Relative factor for the default zero-eigenvalue tolerance in
/// [`HermitianForm::signature`].
pub const DEFAULT_ZERO_TOLERANCE_FACTOR: f64 = 1e-10;

/// A complex Hermitian n x n form. Conjugate symmetry is exact at
/// construction: the mirror of every stored entry is its bitwise conjugate
/// and the diagonal is real.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianForm {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianForm {
    /// Validates and wraps a row-major matrix.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("hermitian form dimension must be >= 1"));
        }
        if entries.len() != dim * dim {
            return Err(Error::mismatch(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        for i in 0..dim {
            if entries[i * dim + i].im != 0.0 {
                return Err(Error::NotHermitian(format!(
                    "diagonal entry ({i},{i}) has imaginary part {}",
                    entries[i * dim + i].im
                )));
            }
            for j in (i + 1)..dim {
                let upper = entries[i * dim + j];
                let lower = entries[j * dim + i];
                if lower != upper.conj() {
                    return Err(Error::NotHermitian(format!(
                        "entry ({j},{i}) is not the conjugate of ({i},{j})"
                    )));
                }
            }
        }
        Ok(HermitianForm { dim, entries })
    }

    /// Builds from the upper triangle of `f`; the strict lower triangle is
    /// mirrored and the diagonal takes the real part, so the result is
    /// Hermitian by construction. `f` is evaluated row-major on i <= j.
    pub fn from_upper(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("hermitian form dimension must be >= 1"));
        }
        let mut entries = vec![Complex64::ZERO; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let z = f(i, j);
                if i == j {
                    entries[i * dim + i] = Complex64::new(z.re, 0.0);
                } else {
                    entries[i * dim + j] = z;
                    entries[j * dim + i] = z.conj();
                }
            }
        }
        Ok(HermitianForm { dim, entries })
    }

    /// Real diagonal form.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::from_upper(values.len(), |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::ZERO
            }
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::diagonal(&vec![1.0; dim])
    }

    /// Gaussian random Hermitian form; one complex gaussian is drawn per
    /// upper-triangle entry, row-major.
    pub fn random(dim: usize, rng: &mut RandomStream) -> Result<Self> {
        Self::from_upper(dim, |_, _| rng.next_complex_gaussian())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Sum of the (real) diagonal.
    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i].re).sum()
    }

    /// Largest entry modulus; the scale that tolerances are relative to.
    pub fn max_entry_modulus(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Default zero-eigenvalue tolerance: 1e-10 times the largest entry.
    pub fn default_zero_tolerance(&self) -> f64 {
        DEFAULT_ZERO_TOLERANCE_FACTOR * self.max_entry_modulus()
    }

    /// All eigenvalues, ascending. Cyclic Jacobi with phase absorption:
    /// each pivot is first rotated to a real entry, then annihilated by a
    /// plane rotation; sweeps stop once the off-diagonal Frobenius norm
    /// drops below 1e-13 of the largest entry.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.dim;
        let mut a = self.entries.clone();
        if n > 1 {
            let scale = self.max_entry_modulus();
            let target = JACOBI_RESIDUAL * scale;
            for _ in 0..JACOBI_MAX_SWEEPS {
                let off: f64 = (0..n)
                    .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                    .map(|(i, j)| a[i * n + j].norm_sqr())
                    .sum();
                if off.sqrt() <= target {
                    break;
                }
                for p in 0..n - 1 {
                    for q in (p + 1)..n {
                        jacobi_rotate(&mut a, n, p, q);
                    }
                }
            }
        }
        let mut eigs: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
        eigs.sort_by(f64::total_cmp);
        eigs
    }

    /// Inertia (n_plus, n_minus, n_zero): eigenvalue counts above `tol`,
    /// below `-tol`, and within `[-tol, tol]`.
    pub fn signature(&self, tol: f64) -> Result<(usize, usize, usize)> {
        if !(tol >= 0.0) {
            return Err(Error::invalid(format!(
                "zero tolerance must be finite and >= 0, got {tol}"
            )));
        }
        let mut plus = 0;
        let mut minus = 0;
        let mut zero = 0;
        for lambda in self.eigenvalues() {
            if lambda > tol {
                plus += 1;
            } else if lambda < -tol {
                minus += 1;
            } else {
                zero += 1;
            }
        }
        Ok((plus, minus, zero))
    }
}

/// One Jacobi step on the (p, q) plane of the row-major matrix `a`.
fn jacobi_rotate(a: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    // Phase absorption: conjugate by diag(..., e^{i psi} at q, ...) so the
    // pivot becomes the positive real |a_pq|. Skips (q, q), which a unit
    // phase cannot change.
    let phase = apq.conj() / g;
    if phase != Complex64::new(1.0, 0.0) {
        for i in 0..n {
            if i != q {
                a[i * n + q] *= phase;
            }
        }
        let conj_phase = phase.conj();
        for j in 0..n {
            if j != q {
                a[q * n + j] *= conj_phase;
            }
        }
    }
    // Classic symmetric rotation on the now-real 2x2 block.
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.abs() > 1e150 {
        1.0 / (2.0 * theta)
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    for i in 0..n {
        let aip = a[i * n + p];
        let aiq = a[i * n + q];
        a[i * n + p] = aip * c - aiq * s;
        a[i * n + q] = aip * s + aiq * c;
    }
    for j in 0..n {
        let apj = a[p * n + j];
        let aqj = a[q * n + j];
        a[p * n + j] = apj * c - aqj * s;
        a[q * n + j] = apj * s + aqj * c;
    }
    a[p * n + q] = Complex64::ZERO;
    a[q * n + p] = Complex64::ZERO;
    a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
    a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_signature_is_all_positive() {
        let h = HermitianForm::identity(3).unwrap();
        assert_eq!(h.signature(0.0).unwrap(), (3, 0, 0));
    }

    #[test]
    fn indefinite_diagonal_signature() {
        let h = HermitianForm::diagonal(&[1.0, -1.0]).unwrap();
        assert_eq!(h.signature(0.0).unwrap(), (1, 1, 0));
    }

    #[test]
    fn near_zero_eigenvalue_counts_as_zero_within_tolerance() {
        let h = HermitianForm::diagonal(&[1.0, 1e-15, -2.0]).unwrap();
        assert_eq!(h.signature(1e-12).unwrap(), (1, 1, 1));
    }

    #[test]
    fn construction_rejects_asymmetric_input() {
        let entries = vec![c(1.0, 0.0), c(2.0, 1.0), c(2.0, 1.0), c(1.0, 0.0)];
        assert!(HermitianForm::new(2, entries).is_err());
        let entries = vec![c(1.0, 0.5), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        assert!(HermitianForm::new(2, entries).is_err());
        assert!(HermitianForm::new(0, vec![]).is_err());
    }

    #[test]
    fn negative_tolerance_is_rejected() {
        let h = HermitianForm::identity(2).unwrap();
        assert!(h.signature(-1.0).is_err());
        assert!(h.signature(f64::NAN).is_err());
    }

    #[test]
    fn known_two_by_two_spectrum() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let h = HermitianForm::new(2, vec![c(2.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(2.0, 0.0)])
            .unwrap();
        let eigs = h.eigenvalues();
        assert!((eigs[0] - 1.0).abs() < 1e-12, "eigs={eigs:?}");
        assert!((eigs[1] - 3.0).abs() < 1e-12, "eigs={eigs:?}");
    }

    #[test]
    fn diagonal_spectrum_is_the_sorted_diagonal() {
        let h = HermitianForm::diagonal(&[3.0, -1.0, 0.5]).unwrap();
        assert_eq!(h.eigenvalues(), vec![-1.0, 0.5, 3.0]);
    }

    /// Trace and Frobenius norm are spectral invariants; both are sharp
    /// oracles for the Jacobi iteration on random input.
    #[test]
    fn random_spectra_match_trace_and_frobenius_invariants() {
        let mut rng = RandomStream::new(17);
        for dim in 1..=8 {
            let h = HermitianForm::random(dim, &mut rng).unwrap();
            let eigs = h.eigenvalues();
            let scale = h.max_entry_modulus().max(1.0);
            let trace: f64 = eigs.iter().sum();
            assert!(
                (trace - h.trace()).abs() < 1e-11 * scale,
                "dim={dim}: trace mismatch {} vs {}",
                trace,
                h.trace()
            );
            let frob_sq: f64 = h.entries().iter().map(|z| z.norm_sqr()).sum();
            let eig_sq: f64 = eigs.iter().map(|l| l * l).sum();
            assert!(
                (frob_sq - eig_sq).abs() < 1e-10 * scale * scale,
                "dim={dim}: frobenius mismatch {frob_sq} vs {eig_sq}"
            );
        }
    }

    /// Conjugating by a unitary must not move the inertia.
    #[test]
    fn signature_is_invariant_under_unitary_conjugation() {
        let mut rng = RandomStream::new(23);
        for dim in 2..=6 {
            let h = HermitianForm::random(dim, &mut rng).unwrap();
            let u = random_unitary(dim, &mut rng);
            let conjugated = HermitianForm::from_upper(dim, |i, j| {
                let mut acc = Complex64::ZERO;
                for a in 0..dim {
                    for b in 0..dim {
                        acc += u[a * dim + i].conj() * h.entry(a, b) * u[b * dim + j];
                    }
                }
                acc
            })
            .unwrap();
            let tol = h.default_zero_tolerance().max(1e-9);
            assert_eq!(
                h.signature(tol).unwrap(),
                conjugated.signature(tol).unwrap(),
                "dim={dim}"
            );
        }
    }

    /// Gram-Schmidt on a random gaussian matrix; good enough as a test
    /// unitary.
    fn random_unitary(dim: usize, rng: &mut RandomStream) -> Vec<Complex64> {
        let mut cols = vec![Complex64::ZERO; dim * dim];
        rng.fill_complex_gaussian(&mut cols);
        for j in 0..dim {
            for prev in 0..j {
                let mut proj = Complex64::ZERO;
                for i in 0..dim {
                    proj += cols[i * dim + prev].conj() * cols[i * dim + j];
                }
                for i in 0..dim {
                    let correction = proj * cols[i * dim + prev];
                    cols[i * dim + j] -= correction;
                }
            }
            let norm: f64 = (0..dim).map(|i| cols[i * dim + j].norm_sqr()).sum::<f64>().sqrt();
            for i in 0..dim {
                cols[i * dim + j] /= norm;
            }
        }
        cols
    }
}
