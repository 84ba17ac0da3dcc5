//! Pure-state simulation: statevectors, gates, Z expectations and sampling.
//!
//! Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
//! basis-state index. Rotations use the half-angle convention
//! `RX(theta) = exp(-i theta X / 2)` and likewise for `RY`, `RZ`.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NORM_TOL: f64 = 1e-12;

/// A single gate acting on a circuit's qubits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GateOp {
    Cnot { control: usize, target: usize },
    Rx { qubit: usize, angle: f64 },
    Ry { qubit: usize, angle: f64 },
    Rz { qubit: usize, angle: f64 },
}

impl GateOp {
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let check = |index: usize| {
            if index >= num_qubits {
                Err(Error::QubitIndex { index, num_qubits })
            } else {
                Ok(())
            }
        };
        match *self {
            GateOp::Cnot { control, target } => {
                check(control)?;
                check(target)?;
                if control == target {
                    return Err(Error::InvalidArgument(format!(
                        "CNOT control and target coincide (qubit {control})"
                    )));
                }
                Ok(())
            }
            GateOp::Rx { qubit, .. } | GateOp::Ry { qubit, .. } | GateOp::Rz { qubit, .. } => {
                check(qubit)
            }
        }
    }

    /// The exact inverse gate: negated angle for rotations, CNOT is self-inverse.
    pub fn inverse(&self) -> GateOp {
        match *self {
            GateOp::Cnot { control, target } => GateOp::Cnot { control, target },
            GateOp::Rx { qubit, angle } => GateOp::Rx {
                qubit,
                angle: -angle,
            },
            GateOp::Ry { qubit, angle } => GateOp::Ry {
                qubit,
                angle: -angle,
            },
            GateOp::Rz { qubit, angle } => GateOp::Rz {
                qubit,
                angle: -angle,
            },
        }
    }
}

/// Pure state of an `N`-qubit register as 2^N complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The all-zero computational basis state |0...0>.
    pub fn zero(num_qubits: usize) -> StateVector {
        StateVector::basis(num_qubits, 0)
    }

    /// Computational basis state |index> (qubit 0 = most significant bit).
    pub fn basis(num_qubits: usize, index: usize) -> StateVector {
        assert!(num_qubits >= 1, "need at least one qubit");
        let dim = 1usize << num_qubits;
        assert!(index < dim, "basis index out of range");
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[index] = Complex64::ONE;
        StateVector {
            num_qubits,
            amplitudes,
        }
    }

    /// Build a state from raw amplitudes, checking length and normalization.
    pub fn from_amplitudes(num_qubits: usize, amplitudes: Vec<Complex64>) -> Result<StateVector> {
        let dim = 1usize << num_qubits;
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {dim} amplitudes for {num_qubits} qubits, got {}",
                amplitudes.len()
            )));
        }
        let state = StateVector {
            num_qubits,
            amplitudes,
        };
        if (state.norm() - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!(
                "statevector norm {} is not 1",
                state.norm()
            )));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Bit of qubit `qubit` in basis index `index` (0 or 1).
    #[inline]
    pub fn qubit_bit(&self, index: usize, qubit: usize) -> usize {
        (index >> (self.num_qubits - 1 - qubit)) & 1
    }

    #[inline]
    fn qubit_mask(&self, qubit: usize) -> usize {
        1usize << (self.num_qubits - 1 - qubit)
    }

    /// Apply a single gate, returning the new state.
    pub fn apply_gate(&self, gate: &GateOp) -> Result<StateVector> {
        gate.validate(self.num_qubits)?;
        let mut out = self.clone();
        out.apply_gate_in_place(gate);
        Ok(out)
    }

    pub(crate) fn apply_gate_in_place(&mut self, gate: &GateOp) {
        match *gate {
            GateOp::Cnot { control, target } => {
                let cmask = self.qubit_mask(control);
                let tmask = self.qubit_mask(target);
                for index in 0..self.amplitudes.len() {
                    if index & cmask != 0 && index & tmask == 0 {
                        self.amplitudes.swap(index, index | tmask);
                    }
                }
            }
            GateOp::Rx { qubit, angle } => {
                let (sin, cos) = (angle / 2.0).sin_cos();
                let off = Complex64::new(0.0, -sin);
                self.apply_single_qubit(qubit, [
                    [Complex64::new(cos, 0.0), off],
                    [off, Complex64::new(cos, 0.0)],
                ]);
            }
            GateOp::Ry { qubit, angle } => {
                let (sin, cos) = (angle / 2.0).sin_cos();
                self.apply_single_qubit(qubit, [
                    [Complex64::new(cos, 0.0), Complex64::new(-sin, 0.0)],
                    [Complex64::new(sin, 0.0), Complex64::new(cos, 0.0)],
                ]);
            }
            GateOp::Rz { qubit, angle } => {
                let phase0 = Complex64::from_polar(1.0, -angle / 2.0);
                let phase1 = Complex64::from_polar(1.0, angle / 2.0);
                self.apply_single_qubit(qubit, [
                    [phase0, Complex64::ZERO],
                    [Complex64::ZERO, phase1],
                ]);
            }
        }
    }

    fn apply_single_qubit(&mut self, qubit: usize, m: [[Complex64; 2]; 2]) {
        let mask = self.qubit_mask(qubit);
        for index in 0..self.amplitudes.len() {
            if index & mask == 0 {
                let a0 = self.amplitudes[index];
                let a1 = self.amplitudes[index | mask];
                self.amplitudes[index] = m[0][0] * a0 + m[0][1] * a1;
                self.amplitudes[index | mask] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// Expectation value of the Pauli Z operator on one qubit,
    /// `sum_b (-1)^{b_qubit} |amp_b|^2`.
    pub fn expect_z(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitIndex {
                index: qubit,
                num_qubits: self.num_qubits,
            });
        }
        let mask = self.qubit_mask(qubit);
        let mut value = 0.0;
        for (index, amp) in self.amplitudes.iter().enumerate() {
            let sign = if index & mask == 0 { 1.0 } else { -1.0 };
            value += sign * amp.norm_sqr();
        }
        Ok(value)
    }

    /// Draw `shots` bitstrings from the Born distribution. Returns counts
    /// indexed by basis-state index; the counts sum to `shots`.
    pub fn sample_bitstrings<R: Rng + ?Sized>(&self, shots: u64, rng: &mut R) -> Result<Vec<u64>> {
        if shots == 0 {
            return Err(Error::InvalidArgument("shot count must be >= 1".into()));
        }
        let mut cumulative = Vec::with_capacity(self.amplitudes.len());
        let mut acc = 0.0;
        for amp in &self.amplitudes {
            acc += amp.norm_sqr();
            cumulative.push(acc);
        }
        let total = acc;
        let mut counts = vec![0u64; self.amplitudes.len()];
        for _ in 0..shots {
            let draw: f64 = rng.gen::<f64>() * total;
            let index = cumulative
                .partition_point(|&c| c <= draw)
                .min(counts.len() - 1);
            counts[index] += 1;
        }
        Ok(counts)
    }

    /// Estimate <Z_qubit> from a bitstring histogram: (#0 - #1) / shots.
    pub fn z_estimate_from_counts(&self, counts: &[u64], qubit: usize) -> Result<f64> {
        if counts.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "histogram length {} does not match dimension {}",
                counts.len(),
                self.dim()
            )));
        }
        let mask = self.qubit_mask(qubit);
        let mut signed = 0i64;
        let mut total = 0u64;
        for (index, &count) in counts.iter().enumerate() {
            total += count;
            if index & mask == 0 {
                signed += count as i64;
            } else {
                signed -= count as i64;
            }
        }
        if total == 0 {
            return Err(Error::InvalidArgument("empty histogram".into()));
        }
        Ok(signed as f64 / total as f64)
    }
}
