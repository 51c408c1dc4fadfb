//! The two elementary gates, rotation `R_{θφ}` and `XOR`, acting on Q-bits of
//! a register.
//!
//! `XOR` here follows the zero-controlled convention: `C(n, m)` flips Q-bit
//! `n` exactly when Q-bit `m` is `|0⟩`. This is the opposite of the usual
//! CNOT, and the GHZ cascade and the disentangling example only come out
//! right under it.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qstate::{QbitIndex, StateVector, TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationParams {
    pub theta: f64,
    pub phi: f64,
}

impl RotationParams {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "rotation angles must be finite (theta={theta}, phi={phi})"
            )));
        }
        Ok(RotationParams { theta, phi })
    }

    /// `R_{θφ}^{-1} = R_{−θ,φ}`.
    pub fn inverse(self) -> Self {
        RotationParams {
            theta: -self.theta,
            phi: self.phi,
        }
    }
}

/// `R_{θφ}|0⟩ = cos θ|0⟩ + e^{−iφ} sin θ|1⟩`,
/// `R_{θφ}|1⟩ = −e^{iφ} sin θ|0⟩ + cos θ|1⟩`.
pub fn rotation_matrix(p: RotationParams) -> Matrix2<Complex64> {
    let (s, c) = p.theta.sin_cos();
    let c = Complex64::new(c, 0.0);
    let phase = Complex64::from_polar(1.0, p.phi);
    Matrix2::new(c, -phase * s, phase.conj() * s, c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateOp {
    Rotation {
        target: QbitIndex,
        params: RotationParams,
    },
    Xor {
        target: QbitIndex,
        control: QbitIndex,
    },
}

impl GateOp {
    pub fn rotation(target: usize, theta: f64, phi: f64) -> Result<Self> {
        Ok(GateOp::Rotation {
            target: QbitIndex::unchecked(target),
            params: RotationParams::new(theta, phi)?,
        })
    }

    pub fn xor(target: usize, control: usize) -> Result<Self> {
        if target == control {
            return Err(Error::SameTargetControl(target));
        }
        Ok(GateOp::Xor {
            target: QbitIndex::unchecked(target),
            control: QbitIndex::unchecked(control),
        })
    }

    pub fn inverse(&self) -> Self {
        match *self {
            GateOp::Rotation { target, params } => GateOp::Rotation {
                target,
                params: params.inverse(),
            },
            xor @ GateOp::Xor { .. } => xor,
        }
    }

    /// Q-bits touched by the gate.
    pub fn qbits(&self) -> Vec<QbitIndex> {
        match *self {
            GateOp::Rotation { target, .. } => vec![target],
            GateOp::Xor { target, control } => vec![target, control],
        }
    }

    pub fn validate(&self, n_qbits: usize) -> Result<()> {
        for q in self.qbits() {
            q.check(n_qbits)?;
        }
        if let GateOp::Xor { target, control } = self {
            if target == control {
                return Err(Error::SameTargetControl(target.get()));
            }
        }
        Ok(())
    }

    /// `U|s⟩`, updating amplitude pairs in place.
    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        let n = s.n_qbits();
        self.validate(n)?;
        let mut amps = s.amplitudes().to_vec();
        match *self {
            GateOp::Rotation { target, params } => {
                let u = rotation_matrix(params);
                let m = target.mask(n);
                for i in (0..amps.len()).filter(|i| i & m == 0) {
                    let (a0, a1) = (amps[i], amps[i | m]);
                    amps[i] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
                    amps[i | m] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
                }
            }
            GateOp::Xor { target, control } => {
                let (t, c) = (target.mask(n), control.mask(n));
                for i in (0..amps.len()).filter(|i| i & (t | c) == 0) {
                    amps.swap(i, i | t);
                }
            }
        }
        Ok(StateVector::from_raw(n, amps))
    }

    /// Full `2^N × 2^N` matrix, built by Kronecker embedding (rotation) or as
    /// a permutation (XOR).
    pub fn matrix(&self, n_qbits: usize) -> Result<DMatrix<Complex64>> {
        self.validate(n_qbits)?;
        let d = 1usize << n_qbits;
        match *self {
            GateOp::Rotation { target, params } => {
                let u = rotation_matrix(params);
                let u = DMatrix::from_fn(2, 2, |i, j| u[(i, j)]);
                let left = 1usize << (target.get() - 1);
                let right = 1usize << (n_qbits - target.get());
                Ok(DMatrix::<Complex64>::identity(left, left)
                    .kronecker(&u)
                    .kronecker(&DMatrix::identity(right, right)))
            }
            GateOp::Xor { target, control } => {
                let (t, c) = (target.mask(n_qbits), control.mask(n_qbits));
                let mut m = DMatrix::zeros(d, d);
                for col in 0..d {
                    let row = if col & c == 0 { col ^ t } else { col };
                    m[(row, col)] = Complex64::new(1.0, 0.0);
                }
                Ok(m)
            }
        }
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateOp::Rotation { target, params } => {
                write!(f, "rot {} {:?} {:?}", target, params.theta, params.phi)
            }
            GateOp::Xor { target, control } => write!(f, "xor {target} {control}"),
        }
    }
}

/// Parses `rot <target> <theta> <phi>` or `xor <target> <control>`.
impl FromStr for GateOp {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let index = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("bad Q-bit index '{s}'")))
        };
        let angle = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad angle '{s}'")))
        };
        match fields.as_slice() {
            ["rot", t, theta, phi] => GateOp::rotation(index(t)?, angle(theta)?, angle(phi)?),
            ["xor", t, c] => GateOp::xor(index(t)?, index(c)?),
            ["rot", ..] => Err(Error::InvalidParameter(
                "expected: rot <target> <theta> <phi>".into(),
            )),
            ["xor", ..] => Err(Error::InvalidParameter(
                "expected: xor <target> <control>".into(),
            )),
            [kw, ..] => Err(Error::InvalidParameter(format!("unknown gate '{kw}'"))),
            [] => Err(Error::InvalidParameter("empty gate".into())),
        }
    }
}

pub fn apply_gate(g: &GateOp, s: &StateVector) -> Result<StateVector> {
    g.apply(s)
}

/// Applies `gates` left to right.
pub fn compose(gates: &[GateOp], s: &StateVector) -> Result<StateVector> {
    gates.iter().try_fold(s.clone(), |state, g| g.apply(&state))
}

/// `U†U = 1` within `tol`, entrywise.
pub fn is_unitary(u: &DMatrix<Complex64>, tol: f64) -> bool {
    if !u.is_square() {
        return false;
    }
    let d = u.nrows();
    let product = u.adjoint() * u;
    (0..d).all(|i| {
        (0..d).all(|j| {
            let expected = if i == j { 1.0 } else { 0.0 };
            (product[(i, j)] - Complex64::new(expected, 0.0)).norm() <= tol
        })
    })
}

/// Realizes `g` on an `n_qbits` register and checks unitarity. Gates that do
/// not fit the register are reported as not unitary.
pub fn check_unitary(g: &GateOp, n_qbits: usize) -> bool {
    g.matrix(n_qbits)
        .map(|u| is_unitary(&u, TOLERANCE))
        .unwrap_or(false)
}
