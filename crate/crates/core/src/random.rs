//! Random states, gates and environments for property checks.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::decoherence::EnvironmentModel;
use crate::error::Result;
use crate::gates::GateOp;
use crate::qstate::StateVector;

/// Haar-distributed pure state (normalized complex Gaussian vector).
pub fn state<R: Rng + ?Sized>(n_qbits: usize, rng: &mut R) -> StateVector {
    let amps = (0..1usize << n_qbits)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    StateVector::normalized(n_qbits, amps).expect("nonzero with probability 1")
}

/// Tensor product of random single-Q-bit states.
pub fn product_state<R: Rng + ?Sized>(n_qbits: usize, rng: &mut R) -> StateVector {
    (1..n_qbits).fold(state(1, rng), |acc, _| {
        acc.tensor(&state(1, rng)).expect("within register limit")
    })
}

/// Rotation with uniform angles or XOR on a random pair.
pub fn gate<R: Rng + ?Sized>(n_qbits: usize, rng: &mut R) -> GateOp {
    if n_qbits < 2 || rng.random_bool(0.5) {
        let target = rng.random_range(1..=n_qbits);
        GateOp::rotation(target, rng.random_range(-PI..PI), rng.random_range(-PI..PI))
            .expect("finite angles")
    } else {
        let target = rng.random_range(1..=n_qbits);
        let mut control = rng.random_range(1..n_qbits);
        if control >= target {
            control += 1;
        }
        GateOp::xor(target, control).expect("distinct Q-bits")
    }
}

/// `k` orthonormal states on `n_qbits` (Gram-Schmidt on Gaussian vectors).
pub fn orthonormal_states<R: Rng + ?Sized>(
    n_qbits: usize,
    k: usize,
    rng: &mut R,
) -> Vec<StateVector> {
    assert!(
        k <= 1 << n_qbits,
        "cannot fit {k} orthonormal states in {n_qbits} Q-bits"
    );
    let mut out: Vec<StateVector> = Vec::with_capacity(k);
    while out.len() < k {
        let mut v: Vec<Complex64> = state(n_qbits, rng).amplitudes().to_vec();
        // two passes keep the residual overlap at rounding level
        for _ in 0..2 {
            for u in &out {
                let proj: Complex64 = u
                    .amplitudes()
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                for (x, a) in v.iter_mut().zip(u.amplitudes()) {
                    *x -= proj * a;
                }
            }
        }
        if let Ok(s) = StateVector::normalized(n_qbits, v) {
            out.push(s);
        }
    }
    out
}

/// Environment with `k` branches on `n_qbits` and the given overlap.
pub fn environment<R: Rng + ?Sized>(
    n_qbits: usize,
    k: usize,
    overlap: f64,
    rng: &mut R,
) -> Result<EnvironmentModel> {
    let weights = (0..k)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect::<Vec<_>>();
    let norm = weights.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let amplitudes = weights.into_iter().map(|c| c / norm).collect();
    EnvironmentModel::new(amplitudes, orthonormal_states(n_qbits, k, rng), overlap)
}
