//! Dense statevector simulation: the empirical side of the dependence
//! theory.
//!
//! Amplitude indexing: bit `k` of the array index (least significant bit =
//! qubit 0) holds qubit `k`'s computational-basis value.

mod density;
mod probe;

pub use density::{partial_trace, ppt_negativity, DensityMatrix};
pub use probe::{
    empirical_picture, picture_from_report, probe_circuit, sample_assignments, sensitivity_probe,
    ParamAssignment, ProbeConfig, ProbeOutcome, ProbePair, ProbeReport,
};

use num_complex::Complex64;
use thiserror::Error;

use crate::circuit::{gate_matrix, Circuit, GateInstance, GateOp, Matrix2};

/// Memory guard: 2^24 amplitudes = 256 MiB of complex doubles.
pub const MAX_QUBITS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("circuit has {n} qubits; the statevector oracle supports at most {max}")]
pub struct CapacityError {
    pub n: usize,
    pub max: usize,
}

/// A dense `2^n` complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// The all-zeros computational basis state.
    pub fn zero_state(n: usize) -> Result<Self, CapacityError> {
        if n == 0 || n > MAX_QUBITS {
            return Err(CapacityError { n, max: MAX_QUBITS });
        }
        let mut amps = vec![Complex64::ZERO; 1 << n];
        amps[0] = Complex64::ONE;
        Ok(Statevector { n, amps })
    }

    pub fn qubit_count(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Apply a 2x2 unitary to one qubit.
    pub fn apply_unitary(&mut self, qubit: usize, m: &Matrix2) {
        assert!(qubit < self.n, "qubit {qubit} out of range");
        let bit = 1usize << qubit;
        let low_mask = bit - 1;
        for pair in 0..(self.amps.len() >> 1) {
            let i0 = ((pair & !low_mask) << 1) | (pair & low_mask);
            let i1 = i0 | bit;
            let a0 = self.amps[i0];
            let a1 = self.amps[i1];
            self.amps[i0] = m[0][0] * a0 + m[0][1] * a1;
            self.amps[i1] = m[1][0] * a0 + m[1][1] * a1;
        }
    }

    /// Apply a CNOT: flip `target` wherever `control` is set.
    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        assert!(control < self.n && target < self.n, "qubit out of range");
        assert_ne!(control, target, "CNOT control and target must differ");
        let cbit = 1usize << control;
        let tbit = 1usize << target;
        for i in 0..self.amps.len() {
            if i & cbit != 0 && i & tbit == 0 {
                self.amps.swap(i, i | tbit);
            }
        }
    }

    pub fn apply_gate(&mut self, g: &GateInstance) {
        match g.op {
            GateOp::Unitary { qubit, .. } => self.apply_unitary(qubit, &gate_matrix(g)),
            GateOp::Cnot { control, target } => self.apply_cnot(control, target),
        }
    }

    /// Probability of measuring |0> on qubit `k`.
    pub fn marginal_prob0(&self, k: usize) -> f64 {
        assert!(k < self.n, "qubit {k} out of range");
        let bit = 1usize << k;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// |0> probabilities of all qubits in one pass.
    pub fn all_marginal_prob0(&self) -> Vec<f64> {
        let mut probs = vec![0.0f64; self.n];
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            for (k, prob) in probs.iter_mut().enumerate() {
                if i & (1 << k) == 0 {
                    *prob += p;
                }
            }
        }
        probs
    }

    /// Joint distribution of qubits `i` and `j`: `out[b_i][b_j]`.
    pub fn joint_distribution(&self, i: usize, j: usize) -> [[f64; 2]; 2] {
        assert!(i < self.n && j < self.n, "qubit out of range");
        assert_ne!(i, j, "joint_distribution needs two distinct qubits");
        let ibit = 1usize << i;
        let jbit = 1usize << j;
        let mut out = [[0.0f64; 2]; 2];
        for (idx, a) in self.amps.iter().enumerate() {
            let bi = usize::from(idx & ibit != 0);
            let bj = usize::from(idx & jbit != 0);
            out[bi][bj] += a.norm_sqr();
        }
        out
    }

    /// `<self|other>`; modulus 1 means equal up to a global phase.
    pub fn overlap(&self, other: &Statevector) -> Complex64 {
        assert_eq!(self.n, other.n);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Evolve |0...0> through the circuit's gates in order.
pub fn simulate(c: &Circuit) -> Result<Statevector, CapacityError> {
    let mut state = Statevector::zero_state(c.qubit_count())?;
    for gate in c.gates() {
        state.apply_gate(gate);
    }
    Ok(state)
}
