//! Quantum echo-state network (qESN) simulator and benchmark harness.
//!
//! A qESN drives an N-qubit register with a scalar input sequence through a
//! stochastic mixture of two unitaries and a reset branch, reads the per-qubit
//! `<Z>` signals into a design matrix, and trains only a linear readout. This
//! crate provides:
//!
//! * exact statevector and density-matrix kernels ([`state`], [`density`]),
//! * the reservoir evolution, both as a Monte Carlo ensemble and as the exact
//!   averaged channel it is an unbiased estimator of ([`reservoir`]),
//! * pseudo-inverse readout training and the NMSE metric ([`readout`]),
//! * the three benchmark target generators ([`tasks`]),
//! * the short-term memory-capacity protocol ([`memory`]),
//! * experiment orchestration, sweeps and result records ([`harness`]).
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod circuit;
pub mod density;
pub mod error;
pub mod harness;
pub mod memory;
pub mod readout;
pub mod reservoir;
pub mod state;
pub mod tasks;

pub use circuit::{builtin_circuit, builtin_reservoir_pair, UnitaryCircuit};
pub use density::{pauli_expectation, pauli_node_value, DensityMatrix, Pauli, PauliString};
pub use error::{Error, Result};
pub use readout::{nmse, predict, train_readout, NmseNormalization, ReadoutWeights, SplitSpec};
pub use reservoir::{
    branch_probabilities, channel_step, evolve_channel, evolve_ensemble, DesignMatrix,
    InputSequence, MeasurementMode, ReservoirConfig,
};
pub use state::{GateOp, StateVector};
