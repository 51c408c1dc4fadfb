//! System-environment coupling and operation budgets.
//!
//! A register entangled with its environment as `Σ_i c_i |φ_i⟩ ⊗ |e_i⟩` is
//! described here by the branch amplitudes `c_i`, the orthonormal system
//! branches `|φ_i⟩`, and one scalar `overlap = ⟨e_i|e_j⟩` shared by every pair
//! `i ≠ j`. Overlap 1 is noiseless unitary evolution, overlap 0 a complete
//! loss of coherence between branches.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qstate::{is_hermitian, DensityMatrix, StateVector, TOLERANCE};

#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentModel {
    amplitudes: Vec<Complex64>,
    branches: Vec<StateVector>,
    overlap: f64,
}

impl EnvironmentModel {
    pub fn new(
        amplitudes: Vec<Complex64>,
        branches: Vec<StateVector>,
        overlap: f64,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidEnvironment(msg));
        if amplitudes.is_empty() {
            return invalid("at least one branch is required".into());
        }
        if amplitudes.len() != branches.len() {
            return invalid(format!(
                "{} amplitudes for {} branch states",
                amplitudes.len(),
                branches.len()
            ));
        }
        let weight: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if (weight - 1.0).abs() > TOLERANCE {
            return invalid(format!("Σ|c_i|² = {weight}"));
        }
        if !(0.0..=1.0).contains(&overlap) {
            return invalid(format!("overlap {overlap} outside [0, 1]"));
        }
        let n = branches[0].n_qbits();
        for (i, a) in branches.iter().enumerate() {
            if a.n_qbits() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: a.n_qbits(),
                });
            }
            for b in &branches[i + 1..] {
                let ip = a.inner_product(b)?.norm();
                if ip > TOLERANCE {
                    return invalid(format!(
                        "branch states not orthogonal (|⟨φ_i|φ_j⟩| = {ip:e})"
                    ));
                }
            }
        }
        Ok(EnvironmentModel {
            amplitudes,
            branches,
            overlap,
        })
    }

    pub fn with_overlap(&self, overlap: f64) -> Result<Self> {
        Self::new(self.amplitudes.clone(), self.branches.clone(), overlap)
    }

    pub fn branch_count(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn overlap(&self) -> f64 {
        self.overlap
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn branches(&self) -> &[StateVector] {
        &self.branches
    }

    pub fn n_qbits(&self) -> usize {
        self.branches[0].n_qbits()
    }

    fn dim(&self) -> usize {
        self.branches[0].dim()
    }
}

/// `⟨φ_i|A|φ_j⟩`
fn matrix_element(a: &StateVector, op: &DMatrix<Complex64>, b: &StateVector) -> Complex64 {
    let d = a.dim();
    (0..d)
        .map(|r| {
            let row: Complex64 = (0..d).map(|c| op[(r, c)] * b.amplitude(c)).sum();
            a.amplitude(r).conj() * row
        })
        .sum()
}

fn check_observable(env: &EnvironmentModel, op: &DMatrix<Complex64>) -> Result<()> {
    let d = env.dim();
    if op.nrows() != d || op.ncols() != d {
        return Err(Error::InvalidParameter(format!(
            "observable is {}x{}, branches live in dimension {d}",
            op.nrows(),
            op.ncols()
        )));
    }
    if !is_hermitian(op, TOLERANCE) {
        return Err(Error::NotHermitian);
    }
    Ok(())
}

/// Mean value of a system observable:
/// `Σ_i |c_i|² ⟨φ_i|A|φ_i⟩ + overlap · Σ_{i≠j} c_i* c_j ⟨φ_i|A|φ_j⟩`.
pub fn expectation(env: &EnvironmentModel, observable: &DMatrix<Complex64>) -> Result<f64> {
    check_observable(env, observable)?;
    let c = env.amplitudes();
    let phi = env.branches();
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..c.len() {
        for j in 0..c.len() {
            let weight = if i == j { 1.0 } else { env.overlap };
            if weight == 0.0 {
                continue;
            }
            total += c[i].conj() * c[j] * matrix_element(&phi[i], observable, &phi[j]) * weight;
        }
    }
    Ok(total.re)
}

/// The fully decohered mean value `Σ_i |c_i|² ⟨φ_i|A|φ_i⟩`.
pub fn diagonal_expectation(
    env: &EnvironmentModel,
    observable: &DMatrix<Complex64>,
) -> Result<f64> {
    check_observable(env, observable)?;
    Ok(env
        .amplitudes()
        .iter()
        .zip(env.branches())
        .map(|(c, phi)| c.norm_sqr() * matrix_element(phi, observable, phi).re)
        .sum())
}

/// Reduced system state
/// `Σ_i |c_i|² |φ_i⟩⟨φ_i| + overlap · Σ_{i≠j} c_i c_j* |φ_i⟩⟨φ_j|`.
pub fn decohered_density(env: &EnvironmentModel) -> DensityMatrix {
    let d = env.dim();
    let c = env.amplitudes();
    let phi = env.branches();
    let mut rho = DMatrix::<Complex64>::zeros(d, d);
    for i in 0..c.len() {
        for j in 0..c.len() {
            let weight = if i == j { 1.0 } else { env.overlap };
            if weight == 0.0 {
                continue;
            }
            let coeff = c[i] * c[j].conj() * weight;
            for r in 0..d {
                let left = coeff * phi[i].amplitude(r);
                for s in 0..d {
                    rho[(r, s)] += left * phi[j].amplitude(s).conj();
                }
            }
        }
    }
    DensityMatrix::from_raw(env.n_qbits(), rho)
}

/// Environment overlap after time `t`: `exp(−t/τ_dec)`.
pub fn overlap_at(t: f64, tau_dec: f64) -> Result<f64> {
    if tau_dec <= 0.0 || !tau_dec.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "tau_dec must be positive, got {tau_dec}"
        )));
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "elapsed time must be non-negative, got {t}"
        )));
    }
    Ok((-t / tau_dec).exp())
}

/// Decoherence time, gate time and the number of gates a computation needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceBudget {
    pub tau_dec: f64,
    pub tau_op: f64,
    pub required_ops: u64,
}

impl DecoherenceBudget {
    pub fn new(tau_dec: f64, tau_op: f64, required_ops: u64) -> Result<Self> {
        for (name, v) in [("tau_dec", tau_dec), ("tau_op", tau_op)] {
            if v <= 0.0 || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(DecoherenceBudget {
            tau_dec,
            tau_op,
            required_ops,
        })
    }

    /// `M = ⌊τ_dec / τ_op⌋`.
    pub fn max_operations(&self) -> u64 {
        let ratio = self.tau_dec / self.tau_op;
        // A quotient landing a rounding error below an integer (1e-1/1e-8)
        // still counts as that integer.
        let nearest = ratio.round();
        let m = if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
            nearest
        } else {
            ratio.floor()
        };
        m as u64
    }

    pub fn feasible(&self) -> bool {
        self.required_ops <= self.max_operations()
    }
}

pub fn max_operations(b: &DecoherenceBudget) -> u64 {
    b.max_operations()
}

pub fn feasible(b: &DecoherenceBudget) -> bool {
    b.feasible()
}

/// Cost of factoring a `bits`-bit number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShorRequirements {
    /// Gate count, log-linear between 10^6 at 4 bits and 10^12 at 400 bits.
    pub ops: u64,
    /// Q-bits needed for the largest `bits`-bit number, `2^bits − 1`.
    pub qbits: u32,
    /// False only at the two anchor sizes.
    pub interpolated: bool,
}

const ANCHOR_LOW: (f64, f64) = (4.0, 6.0);
const ANCHOR_HIGH: (f64, f64) = (400.0, 12.0);

pub fn shor_requirements(bits: u32) -> Result<ShorRequirements> {
    if bits < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 bits, got {bits}"
        )));
    }
    let slope = (ANCHOR_HIGH.1 - ANCHOR_LOW.1) / (ANCHOR_HIGH.0 - ANCHOR_LOW.0);
    let log_ops = ANCHOR_LOW.1 + slope * (bits as f64 - ANCHOR_LOW.0);
    if log_ops >= 19.0 {
        return Err(Error::InvalidParameter(format!(
            "{bits}-bit operation count exceeds 64-bit range"
        )));
    }
    Ok(ShorRequirements {
        ops: 10f64.powf(log_ops).round() as u64,
        qbits: bits - 1,
        interpolated: !(bits == 4 || bits == 400),
    })
}

/// Q-bits needed to factor `n`: the register holds `n/2`, so
/// `⌈log2(n/2)⌉ = ⌈log2 n⌉ − 1`.
pub fn qbits_for_number(n: u128) -> Result<u32> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!(
            "n must be at least 4, got {n}"
        )));
    }
    // ⌈log2 n⌉ is the bit length of n − 1
    let ceil_log2 = 128 - (n - 1).leading_zeros();
    Ok(ceil_log2 - 1)
}
