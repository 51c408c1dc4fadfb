//! Q-bit registers: pure states, density matrices, partial trace and
//! measurement.
//!
//! Basis convention: for an N-Q-bit register the ket `|σ_1 σ_2 … σ_N⟩` lives
//! at the integer index whose binary expansion reads `σ_1 σ_2 … σ_N`, i.e.
//! Q-bit 1 is the most significant bit (`|110⟩` is index 6). Q-bits are
//! labelled from 1.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register handled.
pub const MAX_QBITS: usize = 12;

/// Absolute tolerance for normalization and state comparisons.
pub const TOLERANCE: f64 = 1e-10;

/// Purity threshold used to decide that a reduced state is pure.
pub const PURITY_TOLERANCE: f64 = 1e-9;

/// Probabilities at or below this are treated as zero when listing outcomes.
pub const PROBABILITY_FLOOR: f64 = 1e-20;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_register(n_qbits: usize) -> Result<()> {
    if n_qbits == 0 || n_qbits > MAX_QBITS {
        return Err(Error::RegisterSize(n_qbits));
    }
    Ok(())
}

/// 1-based Q-bit label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QbitIndex(usize);

impl QbitIndex {
    pub fn new(index: usize, n_qbits: usize) -> Result<Self> {
        if index == 0 || index > n_qbits {
            return Err(Error::QbitOutOfRange { index, n_qbits });
        }
        Ok(QbitIndex(index))
    }

    /// Label without a register bound; checked when used against a register.
    pub const fn unchecked(index: usize) -> Self {
        QbitIndex(index)
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub(crate) fn check(self, n_qbits: usize) -> Result<()> {
        QbitIndex::new(self.0, n_qbits).map(|_| ())
    }

    /// Bit mask of this Q-bit inside a basis index of an `n_qbits` register.
    pub fn mask(self, n_qbits: usize) -> usize {
        1 << (n_qbits - self.0)
    }
}

impl fmt::Display for QbitIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Renders a basis index as its ket label, Q-bit 1 first.
pub fn bitstring(index: usize, n_qbits: usize) -> String {
    (1..=n_qbits)
        .map(|q| {
            if index & (1 << (n_qbits - q)) != 0 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Pure state of an N-Q-bit register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateWire", into = "StateWire")]
pub struct StateVector {
    n_qbits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state from already-normalized amplitudes.
    pub fn new(n_qbits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_register(n_qbits)?;
        let expected = 1usize << n_qbits;
        if amplitudes.len() != expected {
            return Err(Error::AmplitudeCount {
                expected,
                actual: amplitudes.len(),
            });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > TOLERANCE {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(StateVector {
            n_qbits,
            amplitudes,
        })
    }

    /// Builds a state from an arbitrary nonzero vector, rescaling it to unit norm.
    pub fn normalized(n_qbits: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        check_register(n_qbits)?;
        let expected = 1usize << n_qbits;
        if amplitudes.len() != expected {
            return Err(Error::AmplitudeCount {
                expected,
                actual: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(StateVector {
            n_qbits,
            amplitudes,
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qbits: usize, index: usize) -> Result<Self> {
        check_register(n_qbits)?;
        let dim = 1usize << n_qbits;
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} outside 0..{dim}"
            )));
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(StateVector {
            n_qbits,
            amplitudes,
        })
    }

    /// Basis state from a ket label such as `"110"`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let mut index = 0usize;
        for c in bits.chars() {
            index = match c {
                '0' => index << 1,
                '1' => (index << 1) | 1,
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "'{bits}' is not a bitstring"
                    )))
                }
            };
        }
        Self::basis(bits.len(), index)
    }

    pub(crate) fn from_raw(n_qbits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qbits);
        StateVector {
            n_qbits,
            amplitudes,
        }
    }

    pub fn n_qbits(&self) -> usize {
        self.n_qbits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `|a⟩ ⊗ |b⟩`, with `a`'s Q-bits first.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.n_qbits + other.n_qbits;
        check_register(n)?;
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|&x| other.amplitudes.iter().map(move |&y| x * y))
            .collect();
        Ok(StateVector::from_raw(n, amplitudes))
    }

    /// `⟨self|other⟩ = Σ conj(self_i)·other_i`.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qbits != other.n_qbits {
            return Err(Error::DimensionMismatch {
                left: self.n_qbits,
                right: other.n_qbits,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Projector `|s⟩⟨s|`.
    pub fn to_density(&self) -> DensityMatrix {
        let d = self.dim();
        let entries = DMatrix::from_fn(d, d, |i, j| self.amplitudes[i] * self.amplitudes[j].conj());
        DensityMatrix::from_raw(self.n_qbits, entries)
    }

    /// Whether the state factorizes across the cut after Q-bit `cut`.
    ///
    /// Decided from the purity of the left reduced state.
    pub fn is_product_state(&self, cut: usize) -> Result<bool> {
        if cut == 0 || cut >= self.n_qbits {
            return Err(Error::InvalidCut {
                cut,
                n_qbits: self.n_qbits,
            });
        }
        let left: Vec<QbitIndex> = (1..=cut).map(QbitIndex).collect();
        let reduced = self.to_density().partial_trace(&left)?;
        Ok(reduced.purity() >= 1.0 - PURITY_TOLERANCE)
    }

    /// Full computational-basis measurement distribution.
    pub fn measure_all(&self) -> Vec<MeasurementOutcome> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > PROBABILITY_FLOOR)
            .map(|(i, a)| {
                let probability = a.norm_sqr();
                let mut post = vec![ZERO; self.dim()];
                post[i] = a / probability.sqrt();
                MeasurementOutcome {
                    basis_index: i,
                    probability,
                    post_state: StateVector::from_raw(self.n_qbits, post),
                }
            })
            .collect()
    }

    /// Probability that Q-bit `q` reads 1.
    pub fn probability_of_one(&self, q: QbitIndex) -> Result<f64> {
        q.check(self.n_qbits)?;
        let mask = q.mask(self.n_qbits);
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Entrywise comparison.
    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.n_qbits == other.n_qbits
            && self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// `|⟨self|other⟩|`; equals 1 iff the states agree up to a global phase.
    pub fn fidelity_amplitude(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner_product(other)?.norm())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))
    }
}

/// On-disk form: `{"n": N, "amplitudes": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct StateWire {
    n: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl From<StateVector> for StateWire {
    fn from(s: StateVector) -> Self {
        StateWire {
            n: s.n_qbits,
            amplitudes: s.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

impl TryFrom<StateWire> for StateVector {
    type Error = Error;

    fn try_from(w: StateWire) -> Result<Self> {
        let amps = w
            .amplitudes
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        StateVector::new(w.n, amps)
    }
}

/// One branch of a computational-basis measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    pub basis_index: usize,
    pub probability: f64,
    pub post_state: StateVector,
}

impl MeasurementOutcome {
    pub fn bitstring(&self) -> String {
        bitstring(self.basis_index, self.post_state.n_qbits())
    }
}

/// Hermitian, unit-trace, positive semidefinite operator on N Q-bits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qbits: usize,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(n_qbits: usize, entries: DMatrix<Complex64>) -> Result<Self> {
        check_register(n_qbits)?;
        let d = 1usize << n_qbits;
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::InvalidDensity(format!(
                "expected {d}x{d}, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if !is_hermitian(&entries, TOLERANCE) {
            return Err(Error::InvalidDensity("not Hermitian".into()));
        }
        let trace = entries.trace();
        if (trace - ONE).norm() > TOLERANCE {
            return Err(Error::InvalidDensity(format!("trace {trace}")));
        }
        let rho = DensityMatrix { n_qbits, entries };
        let min = rho.min_eigenvalue();
        if min < -TOLERANCE {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(rho)
    }

    pub(crate) fn from_raw(n_qbits: usize, entries: DMatrix<Complex64>) -> Self {
        DensityMatrix { n_qbits, entries }
    }

    /// `(1/d)·1_d`.
    pub fn maximally_mixed(n_qbits: usize) -> Result<Self> {
        check_register(n_qbits)?;
        let d = 1usize << n_qbits;
        Ok(Self::from_raw(
            n_qbits,
            DMatrix::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0),
        ))
    }

    pub fn n_qbits(&self) -> usize {
        self.n_qbits
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    /// `Tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ_ij |ρ_ij|² for Hermitian ρ
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.entries)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// `ρ_self ⊗ ρ_other`.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let n = self.n_qbits + other.n_qbits;
        check_register(n)?;
        Ok(Self::from_raw(n, self.entries.kronecker(&other.entries)))
    }

    /// Reduced state on the Q-bits in `keep`, ordered by label.
    pub fn partial_trace(&self, keep: &[QbitIndex]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        let n = self.n_qbits;
        for q in keep {
            q.check(n)?;
        }
        let mut kept: Vec<usize> = keep.iter().map(|q| q.0).collect();
        kept.sort_unstable();
        kept.dedup();
        let traced: Vec<usize> = (1..=n).filter(|q| !kept.contains(q)).collect();

        let dk = 1usize << kept.len();
        let dt = 1usize << traced.len();
        let kept_offsets: Vec<usize> = (0..dk).map(|b| scatter(b, &kept, n)).collect();
        let traced_offsets: Vec<usize> = (0..dt).map(|b| scatter(b, &traced, n)).collect();

        let entries = DMatrix::from_fn(dk, dk, |i, j| {
            traced_offsets
                .iter()
                .map(|&t| self.entries[(kept_offsets[i] | t, kept_offsets[j] | t)])
                .sum()
        });
        Ok(Self::from_raw(kept.len(), entries))
    }

    pub fn approx_eq(&self, other: &DensityMatrix, tol: f64) -> bool {
        self.n_qbits == other.n_qbits
            && self
                .entries
                .iter()
                .zip(other.entries.iter())
                .all(|(a, b)| (a - b).norm() <= tol)
    }
}

/// Places the bits of `bits` (most significant first) at the register
/// positions of the Q-bits listed in `qbits`.
pub(crate) fn scatter(bits: usize, qbits: &[usize], n_qbits: usize) -> usize {
    let k = qbits.len();
    qbits
        .iter()
        .enumerate()
        .filter(|(pos, _)| bits & (1 << (k - 1 - pos)) != 0)
        .fold(0, |acc, (_, &q)| acc | (1 << (n_qbits - q)))
}

pub fn is_hermitian(m: &DMatrix<Complex64>, tol: f64) -> bool {
    m.is_square()
        && (0..m.nrows())
            .all(|i| (i..m.ncols()).all(|j| (m[(i, j)] - m[(j, i)].conj()).norm() <= tol))
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}
