//! Deutsch-Jozsa on one input bit, and GHZ preparation by a rotation followed
//! by an XOR cascade.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{compose, GateOp};
use crate::qstate::{QbitIndex, StateVector};

/// The four Boolean functions of one bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleId {
    /// `f(x) = 0`
    F1,
    /// `f(x) = 1`
    F2,
    /// `f(x) = x`
    F3,
    /// `f(x) = NOT x`
    F4,
}

impl OracleId {
    pub const ALL: [OracleId; 4] = [OracleId::F1, OracleId::F2, OracleId::F3, OracleId::F4];

    pub fn eval(self, x: bool) -> bool {
        match self {
            OracleId::F1 => false,
            OracleId::F2 => true,
            OracleId::F3 => x,
            OracleId::F4 => !x,
        }
    }

    pub fn is_constant(self) -> bool {
        matches!(self, OracleId::F1 | OracleId::F2)
    }
}

impl fmt::Display for OracleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            OracleId::F1 => "f1",
            OracleId::F2 => "f2",
            OracleId::F3 => "f3",
            OracleId::F4 => "f4",
        };
        f.write_str(name)
    }
}

impl FromStr for OracleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f1" => Ok(OracleId::F1),
            "f2" => Ok(OracleId::F2),
            "f3" => Ok(OracleId::F3),
            "f4" => Ok(OracleId::F4),
            _ => Err(Error::InvalidParameter(format!(
                "unknown oracle '{s}' (expected f1|f2|f3|f4)"
            ))),
        }
    }
}

/// A black-box function together with the number of times it was consulted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleFunction {
    id: OracleId,
    call_count: u64,
}

impl OracleFunction {
    pub fn new(id: OracleId) -> Self {
        OracleFunction { id, call_count: 0 }
    }

    pub fn id(&self) -> OracleId {
        self.id
    }

    pub fn call_count(&self) -> u64 {
        self.call_count
    }

    /// Classical query `f(x)`.
    pub fn evaluate(&mut self, x: bool) -> bool {
        self.call_count += 1;
        self.id.eval(x)
    }

    /// Quantum query `|x⟩|y⟩ ↦ |x⟩|y ⊕ f(x)⟩` on a 2-Q-bit register
    /// (Q-bit 1 is `x`, Q-bit 2 is `y`).
    pub fn apply(&mut self, s: &StateVector) -> Result<StateVector> {
        if s.n_qbits() != 2 {
            return Err(Error::OracleRegister(s.n_qbits()));
        }
        self.call_count += 1;
        let old = s.amplitudes();
        let mut new = old.to_vec();
        for x in 0..2usize {
            let fx = self.id.eval(x == 1) as usize;
            for y in 0..2usize {
                new[(x << 1) | (y ^ fx)] = old[(x << 1) | y];
            }
        }
        Ok(StateVector::from_raw(2, new))
    }
}

pub fn oracle_gate(f: &mut OracleFunction, s: &StateVector) -> Result<StateVector> {
    f.apply(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Constant,
    Balanced,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DJResult {
    pub verdict: Verdict,
    pub final_state: StateVector,
    pub oracle_calls: u64,
}

/// Step-2 rotations: `(π/4, 0)` on Q-bit 1 and `(π/4, π)` on Q-bit 2, taking
/// `|00⟩` to `½(|0⟩+|1⟩)(|0⟩−|1⟩)`.
pub fn dj_rotations() -> [GateOp; 2] {
    [
        GateOp::rotation(1, FRAC_PI_4, 0.0).expect("finite angles"),
        GateOp::rotation(2, FRAC_PI_4, PI).expect("finite angles"),
    ]
}

/// States after each of the four steps: preparation, superposition, oracle
/// call, inverse rotations.
#[derive(Debug, Clone, PartialEq)]
pub struct DJTrace {
    pub prepared: StateVector,
    pub superposed: StateVector,
    pub queried: StateVector,
    pub result: DJResult,
}

pub fn deutsch_jozsa_traced(id: OracleId) -> Result<DJTrace> {
    let mut oracle = OracleFunction::new(id);
    let prepared = StateVector::from_bits("00")?;
    let rotations = dj_rotations();
    let superposed = compose(&rotations, &prepared)?;
    let queried = oracle.apply(&superposed)?;
    let undo: Vec<GateOp> = rotations.iter().rev().map(GateOp::inverse).collect();
    let final_state = compose(&undo, &queried)?;

    // Q-bit 1 reads |0⟩ for constant f and |1⟩ for balanced f.
    let p_one = final_state.probability_of_one(QbitIndex::unchecked(1))?;
    let verdict = if p_one < 0.5 {
        Verdict::Constant
    } else {
        Verdict::Balanced
    };
    Ok(DJTrace {
        prepared,
        superposed,
        queried,
        result: DJResult {
            verdict,
            final_state,
            oracle_calls: oracle.call_count(),
        },
    })
}

/// One-query quantum decision between constant and balanced.
pub fn deutsch_jozsa(id: OracleId) -> Result<DJResult> {
    deutsch_jozsa_traced(id).map(|t| t.result)
}

/// Classical decision: query `f(0)` and `f(1)`. The reported state is the
/// classical record `|f(0) f(1)⟩`.
pub fn classical_distinguish(id: OracleId) -> DJResult {
    let mut oracle = OracleFunction::new(id);
    let f0 = oracle.evaluate(false);
    let f1 = oracle.evaluate(true);
    let verdict = if f0 == f1 {
        Verdict::Constant
    } else {
        Verdict::Balanced
    };
    let record = ((f0 as usize) << 1) | f1 as usize;
    DJResult {
        verdict,
        final_state: StateVector::basis(2, record).expect("2-Q-bit register"),
        oracle_calls: oracle.call_count(),
    }
}

/// GHZ cascade on `n` Q-bits starting from `|1…1⟩`: `R(π/4, π)` on Q-bit
/// `n`, then `XOR(k, k+1)` for `k = n−1` down to 1.
pub fn ghz_circuit(n_qbits: usize) -> Result<Vec<GateOp>> {
    if n_qbits < 2 {
        return Err(Error::InvalidParameter(format!(
            "GHZ needs at least 2 Q-bits, got {n_qbits}"
        )));
    }
    let mut gates = vec![GateOp::rotation(n_qbits, FRAC_PI_4, PI)?];
    for k in (1..n_qbits).rev() {
        gates.push(GateOp::xor(k, k + 1)?);
    }
    Ok(gates)
}

/// The initial `|1…1⟩` followed by the state after every gate of
/// [`ghz_circuit`].
pub fn ghz_trace(n_qbits: usize) -> Result<Vec<StateVector>> {
    let gates = ghz_circuit(n_qbits)?;
    let start = StateVector::from_bits(&"1".repeat(n_qbits))?;
    let mut states = vec![start];
    for g in &gates {
        let next = g.apply(states.last().expect("non-empty"))?;
        states.push(next);
    }
    Ok(states)
}

/// `(|1…1⟩ + |0…0⟩)/√2`.
pub fn ghz_prepare(n_qbits: usize) -> Result<StateVector> {
    Ok(ghz_trace(n_qbits)?.pop().expect("non-empty"))
}
