//! Bulk-spin (NMR) states: thermal populations, pseudo-pure states, Pauli
//! decomposition, and two separability tests.
//!
//! The separability certificate rewrites the Pauli expansion of ρ over the
//! `6^N` products of single-spin eigenprojectors `P_w^± = (1 ± σ_w)/2`,
//! `w ∈ {x, y, z}`, using `σ_w = P_w^+ − P_w^-` and
//! `1 = ⅓ Σ_w (P_w^+ + P_w^-)`. If every resulting weight is non-negative, ρ
//! is an explicit mixture of product states. The converse does not hold.
//!
//! The partial-transpose (PPT) test is independent of that expansion and is
//! exact for two Q-bits.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qstate::{hermitian_eigenvalues, DensityMatrix, StateVector, MAX_QBITS, TOLERANCE};

/// Largest register for [`pauli_decompose`].
pub const MAX_PAULI_QBITS: usize = 5;

/// Largest register for [`separability_certificate`].
pub const MAX_CERTIFICATE_QBITS: usize = 3;

/// Coefficients at or above `-CERTIFICATE_TOLERANCE` count as non-negative.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Spin-configuration energies at temperature `kT` (same units).
#[derive(Debug, Clone, PartialEq)]
pub struct BoltzmannModel {
    n_qbits: usize,
    energies: Vec<f64>,
    kt: f64,
}

impl BoltzmannModel {
    /// `energies[c]` is the energy of the configuration with basis index `c`.
    pub fn new(n_qbits: usize, energies: Vec<f64>, kt: f64) -> Result<Self> {
        if n_qbits == 0 || n_qbits > MAX_QBITS {
            return Err(Error::RegisterSize(n_qbits));
        }
        if energies.len() != 1 << n_qbits {
            return Err(Error::AmplitudeCount {
                expected: 1 << n_qbits,
                actual: energies.len(),
            });
        }
        if kt.is_nan() || kt <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "kT must be positive, got {kt}"
            )));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidParameter("energies must be finite".into()));
        }
        Ok(BoltzmannModel {
            n_qbits,
            energies,
            kt,
        })
    }

    pub fn n_qbits(&self) -> usize {
        self.n_qbits
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn kt(&self) -> f64 {
        self.kt
    }
}

/// `P_c = exp(−E_c/kT) / Z`, indexed by configuration.
pub fn boltzmann_populations(m: &BoltzmannModel) -> Vec<f64> {
    // shift by the ground energy so the largest weight is exactly 1
    let ground = m.energies.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = m
        .energies
        .iter()
        .map(|e| (-(e - ground) / m.kt).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / z).collect()
}

/// Diagonal thermal state `ρ_t` in the configuration basis.
pub fn thermal_density(m: &BoltzmannModel) -> DensityMatrix {
    let p = boltzmann_populations(m);
    let entries = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        p.len(),
        p.iter().map(|&x| Complex64::new(x, 0.0)),
    ));
    DensityMatrix::from_raw(m.n_qbits, entries)
}

/// The traceless deviation `ρ = ρ_t − (1/d)·1`.
pub fn deviation(rho: &DensityMatrix) -> DMatrix<Complex64> {
    let d = rho.dim();
    rho.entries() - DMatrix::<Complex64>::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0)
}

/// `ρ_ε = ((1−ε)/d)·1_d + ε·ρ_1` with `ρ_1` a pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoPureState {
    n_qbits: usize,
    epsilon: f64,
    pure_part: DensityMatrix,
}

impl PseudoPureState {
    pub fn n_qbits(&self) -> usize {
        self.n_qbits
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn pure_part(&self) -> &DensityMatrix {
        &self.pure_part
    }

    pub fn d(&self) -> usize {
        1 << self.n_qbits
    }

    pub fn realized(&self) -> DensityMatrix {
        let d = self.d();
        let mixed = DMatrix::<Complex64>::identity(d, d)
            * Complex64::new((1.0 - self.epsilon) / d as f64, 0.0);
        let entries = mixed + self.pure_part.entries() * Complex64::new(self.epsilon, 0.0);
        DensityMatrix::from_raw(self.n_qbits, entries)
    }

    /// Same pure part at a different polarization.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(PseudoPureState {
            epsilon,
            ..self.clone()
        })
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!(
            "epsilon {epsilon} outside [0, 1]"
        )));
    }
    Ok(())
}

pub fn make_pseudo_pure(
    n_qbits: usize,
    epsilon: f64,
    pure_state: &StateVector,
) -> Result<PseudoPureState> {
    check_epsilon(epsilon)?;
    if pure_state.n_qbits() != n_qbits {
        return Err(Error::DimensionMismatch {
            left: n_qbits,
            right: pure_state.n_qbits(),
        });
    }
    Ok(PseudoPureState {
        n_qbits,
        epsilon,
        pure_part: pure_state.to_density(),
    })
}

/// Achievable polarization at thermal deviation scale `delta = E/kT`.
///
/// Order-of-magnitude model: `ε = delta`, clipped at 1.
pub fn epsilon_thermal(n_qbits: usize, delta: f64) -> Result<f64> {
    if n_qbits == 0 || n_qbits > MAX_QBITS {
        return Err(Error::RegisterSize(n_qbits));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "delta must be positive, got {delta}"
        )));
    }
    Ok(delta.min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    /// Entry of column `bit` (the nonzero one).
    fn phase(self, bit: bool) -> Complex64 {
        match (self, bit) {
            (Pauli::I | Pauli::X, _) | (Pauli::Z, false) => Complex64::new(1.0, 0.0),
            (Pauli::Z, true) => Complex64::new(-1.0, 0.0),
            (Pauli::Y, false) => I,
            (Pauli::Y, true) => -I,
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of Paulis, Q-bit 1 first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString(pub Vec<Pauli>);

impl PauliString {
    /// The `code`-th string in base-4 order `I < X < Y < Z`, Q-bit 1 most
    /// significant.
    fn from_code(mut code: usize, n_qbits: usize) -> Self {
        let mut ops = vec![Pauli::I; n_qbits];
        for slot in ops.iter_mut().rev() {
            *slot = Pauli::ALL[code % 4];
            code /= 4;
        }
        PauliString(ops)
    }

    fn code(&self) -> usize {
        self.0.iter().fold(0, |acc, p| {
            acc * 4 + Pauli::ALL.iter().position(|q| q == p).unwrap()
        })
    }

    fn flip_mask(&self) -> usize {
        let n = self.0.len();
        self.0
            .iter()
            .enumerate()
            .filter(|(_, p)| p.flips())
            .fold(0, |acc, (k, _)| acc | (1 << (n - 1 - k)))
    }

    /// Nonzero entry of column `col`: `(row, value)`.
    fn column_entry(&self, col: usize) -> (usize, Complex64) {
        let n = self.0.len();
        let value = self
            .0
            .iter()
            .enumerate()
            .map(|(k, p)| p.phase(col & (1 << (n - 1 - k)) != 0))
            .product();
        (col ^ self.flip_mask(), value)
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        let d = 1usize << self.0.len();
        let mut m = DMatrix::zeros(d, d);
        for col in 0..d {
            let (row, v) = self.column_entry(col);
            m[(row, col)] = v;
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{}", p.symbol()))
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(Error::InvalidParameter(format!("bad Pauli string '{s}'"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PauliString)
    }
}

/// `ρ = Σ_α t_α σ_α` with `t_α = Tr(ρ σ_α)/2^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliDecomposition {
    n_qbits: usize,
    coefficients: Vec<f64>,
}

impl PauliDecomposition {
    pub fn n_qbits(&self) -> usize {
        self.n_qbits
    }

    pub fn coefficient(&self, label: &PauliString) -> Option<f64> {
        (label.0.len() == self.n_qbits).then(|| self.coefficients[label.code()])
    }

    /// Looks up a coefficient by label such as `"XZ"`.
    pub fn get(&self, label: &str) -> Option<f64> {
        self.coefficient(&label.parse().ok()?)
    }

    pub fn iter(&self) -> impl Iterator<Item = (PauliString, f64)> + '_ {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(code, &t)| (PauliString::from_code(code, self.n_qbits), t))
    }

    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let d = 1usize << self.n_qbits;
        let mut m = DMatrix::zeros(d, d);
        for (label, t) in self.iter().filter(|(_, t)| *t != 0.0) {
            for col in 0..d {
                let (row, v) = label.column_entry(col);
                m[(row, col)] += v * t;
            }
        }
        m
    }
}

pub fn pauli_decompose(rho: &DensityMatrix) -> Result<PauliDecomposition> {
    let n = rho.n_qbits();
    if n > MAX_PAULI_QBITS {
        return Err(Error::InvalidParameter(format!(
            "Pauli decomposition limited to {MAX_PAULI_QBITS} Q-bits, got {n}"
        )));
    }
    let d = 1usize << n;
    let entries = rho.entries();
    let coefficients = (0..1usize << (2 * n))
        .map(|code| {
            let label = PauliString::from_code(code, n);
            // Tr(ρσ) = Σ_col ρ[col, row(col)] · σ[row(col), col]
            let tr: Complex64 = (0..d)
                .map(|col| {
                    let (row, v) = label.column_entry(col);
                    entries[(col, row)] * v
                })
                .sum();
            tr.re / d as f64
        })
        .collect();
    Ok(PauliDecomposition {
        n_qbits: n,
        coefficients,
    })
}

/// Single-spin eigenprojector `P_w^±`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Projector {
    pub axis: Pauli,
    pub positive: bool,
}

const PROJECTORS: [Projector; 6] = [
    Projector {
        axis: Pauli::X,
        positive: true,
    },
    Projector {
        axis: Pauli::X,
        positive: false,
    },
    Projector {
        axis: Pauli::Y,
        positive: true,
    },
    Projector {
        axis: Pauli::Y,
        positive: false,
    },
    Projector {
        axis: Pauli::Z,
        positive: true,
    },
    Projector {
        axis: Pauli::Z,
        positive: false,
    },
];

impl fmt::Display for Projector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}",
            self.axis.symbol(),
            if self.positive { '+' } else { '-' }
        )
    }
}

/// Weights of ρ over all `6^N` projector products, in base-6 order of
/// `[x+, x-, y+, y-, z+, z-]` with Q-bit 1 most significant.
pub fn projector_expansion(rho: &DensityMatrix) -> Result<Vec<(Vec<Projector>, f64)>> {
    let n = rho.n_qbits();
    if n > MAX_CERTIFICATE_QBITS {
        return Err(Error::InvalidParameter(format!(
            "projector expansion limited to {MAX_CERTIFICATE_QBITS} Q-bits, got {n}"
        )));
    }
    let pauli = pauli_decompose(rho)?;
    let total = 6usize.pow(n as u32);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut c = code;
        let mut string = vec![PROJECTORS[0]; n];
        for slot in string.iter_mut().rev() {
            *slot = PROJECTORS[c % 6];
            c /= 6;
        }
        // Each factor comes from either the identity (weight 1/3) or its own
        // axis Pauli (weight ±1); sum over the 2^N choices.
        let mut weight = 0.0;
        for subset in 0..1usize << n {
            let mut factor = 1.0;
            let mut label = Vec::with_capacity(n);
            for (k, p) in string.iter().enumerate() {
                if subset & (1 << k) != 0 {
                    label.push(p.axis);
                    if !p.positive {
                        factor = -factor;
                    }
                } else {
                    label.push(Pauli::I);
                    factor /= 3.0;
                }
            }
            weight += factor * pauli.coefficients[PauliString(label).code()];
        }
        out.push((string, weight));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeparabilityCertificate {
    pub separable_certified: bool,
    pub min_coefficient: f64,
}

/// Sufficient separability test on an arbitrary density matrix (N ≤ 3).
pub fn certify_density(rho: &DensityMatrix) -> Result<SeparabilityCertificate> {
    let min_coefficient = projector_expansion(rho)?
        .into_iter()
        .map(|(_, w)| w)
        .fold(f64::INFINITY, f64::min);
    Ok(SeparabilityCertificate {
        separable_certified: min_coefficient >= -CERTIFICATE_TOLERANCE,
        min_coefficient,
    })
}

pub fn separability_certificate(p: &PseudoPureState) -> Result<SeparabilityCertificate> {
    certify_density(&p.realized())
}

/// Partial transpose over the Q-bits after `cut`.
pub fn partial_transpose(rho: &DensityMatrix, cut: usize) -> Result<DMatrix<Complex64>> {
    let n = rho.n_qbits();
    if cut == 0 || cut >= n {
        return Err(Error::InvalidCut { cut, n_qbits: n });
    }
    let low = (1usize << (n - cut)) - 1;
    let d = rho.dim();
    let m = rho.entries();
    Ok(DMatrix::from_fn(d, d, |i, j| {
        // swap the second-factor parts of row and column
        let row = (i & !low) | (j & low);
        let col = (j & !low) | (i & low);
        m[(row, col)]
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PptResult {
    pub ppt: bool,
    pub min_eigenvalue: f64,
}

pub fn ppt_check(rho: &DensityMatrix, cut: usize) -> Result<PptResult> {
    let pt = partial_transpose(rho, cut)?;
    let min_eigenvalue = hermitian_eigenvalues(&pt)[0];
    Ok(PptResult {
        ppt: min_eigenvalue >= -TOLERANCE,
        min_eigenvalue,
    })
}

/// Largest `x ∈ [0, 1]` with `holds(x)`, for a predicate true at 0 that stays
/// true on an interval `[0, x*]`. Bisects to within `tol`.
pub fn bisect_threshold(mut holds: impl FnMut(f64) -> Result<bool>, tol: f64) -> Result<f64> {
    if holds(1.0)? {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if holds(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Largest ε at which the pseudo-pure state with pure part `pure` is certified.
pub fn certificate_threshold(pure: &StateVector, tol: f64) -> Result<f64> {
    let base = make_pseudo_pure(pure.n_qbits(), 0.0, pure)?;
    bisect_threshold(
        |eps| Ok(separability_certificate(&base.with_epsilon(eps)?)?.separable_certified),
        tol,
    )
}

/// Largest ε at which the pseudo-pure state stays PPT across `cut`.
pub fn ppt_threshold(pure: &StateVector, cut: usize, tol: f64) -> Result<f64> {
    let base = make_pseudo_pure(pure.n_qbits(), 0.0, pure)?;
    bisect_threshold(
        |eps| Ok(ppt_check(&base.with_epsilon(eps)?.realized(), cut)?.ppt),
        tol,
    )
}

/// Named pure parts accepted by the `nmr-sep` command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PureKind {
    /// `(|00⟩ + |11⟩)/√2`, two Q-bits only.
    Bell,
    /// `(|0…0⟩ + |1…1⟩)/√2`.
    Ghz,
    /// `|0…0⟩`.
    Basis0,
}

impl PureKind {
    pub fn state(self, n_qbits: usize) -> Result<StateVector> {
        let d = 1usize << n_qbits.min(MAX_QBITS);
        match self {
            PureKind::Bell if n_qbits != 2 => Err(Error::InvalidParameter(format!(
                "bell is a 2-Q-bit state, got n = {n_qbits}"
            ))),
            PureKind::Bell | PureKind::Ghz => {
                if n_qbits < 2 {
                    return Err(Error::InvalidParameter("ghz needs n ≥ 2".into()));
                }
                let mut amps = vec![ZERO; d];
                amps[0] = Complex64::new(1.0, 0.0);
                amps[d - 1] = Complex64::new(1.0, 0.0);
                StateVector::normalized(n_qbits, amps)
            }
            PureKind::Basis0 => StateVector::basis(n_qbits, 0),
        }
    }
}

impl FromStr for PureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bell" => Ok(PureKind::Bell),
            "ghz" => Ok(PureKind::Ghz),
            "basis0" => Ok(PureKind::Basis0),
            _ => Err(Error::InvalidParameter(format!(
                "unknown pure state '{s}' (expected bell|ghz|basis0)"
            ))),
        }
    }
}
