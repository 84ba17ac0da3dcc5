//! The qESN reservoir: stochastic ensemble evolution, the exact averaged
//! channel, and extraction of the L x N design matrix of <Z_i> signals.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::UnitaryCircuit;
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::state::StateVector;

/// How <Z_i> signals are read from each ensemble member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasurementMode {
    /// Exact per-member expectation values.
    ExactExpectation,
    /// Finite-shot estimates from sampled bitstrings.
    ShotSampling { shots: u64 },
}

/// Full reservoir definition: circuits, reset rate, ensemble and seeding.
#[derive(Debug, Clone)]
pub struct ReservoirConfig {
    pub num_qubits: usize,
    pub epsilon: f64,
    pub u0: UnitaryCircuit,
    pub u1: UnitaryCircuit,
    pub reset_state: DensityMatrix,
    pub ensemble_size: usize,
    pub measurement_mode: MeasurementMode,
    pub master_seed: u64,
}

impl ReservoirConfig {
    pub fn new(
        epsilon: f64,
        u0: UnitaryCircuit,
        u1: UnitaryCircuit,
        ensemble_size: usize,
        measurement_mode: MeasurementMode,
        master_seed: u64,
    ) -> Result<ReservoirConfig> {
        if u0.num_qubits() != u1.num_qubits() {
            return Err(Error::DimensionMismatch(format!(
                "U0 acts on {} qubits, U1 on {}",
                u0.num_qubits(),
                u1.num_qubits()
            )));
        }
        let num_qubits = u0.num_qubits();
        let config = ReservoirConfig {
            num_qubits,
            epsilon,
            u0,
            u1,
            reset_state: DensityMatrix::zero_state(num_qubits),
            ensemble_size,
            measurement_mode,
            master_seed,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::InvalidArgument(format!(
                "reset rate {} outside [0, 1]",
                self.epsilon
            )));
        }
        if self.ensemble_size == 0 {
            return Err(Error::InvalidArgument("ensemble size must be >= 1".into()));
        }
        if self.u0.num_qubits() != self.num_qubits || self.u1.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch(
                "circuit width does not match num_qubits".into(),
            ));
        }
        if self.reset_state.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch(
                "reset state width does not match num_qubits".into(),
            ));
        }
        Ok(())
    }

    /// The pure state ensemble members reset to; errors if `reset_state`
    /// was overridden with a mixed state.
    pub fn reset_statevector(&self) -> Result<StateVector> {
        self.reset_state.as_pure_state()
    }
}

/// The driving sequence {u(k)}, every entry in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSequence {
    values: Vec<f64>,
}

impl InputSequence {
    pub fn new(values: Vec<f64>) -> Result<InputSequence> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty input sequence".into()));
        }
        for (k, &u) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&u) {
                return Err(Error::InvalidArgument(format!(
                    "input u({}) = {u} outside [0, 1]",
                    k + 1
                )));
            }
        }
        Ok(InputSequence { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// u(k) with the 1-based time index used throughout.
    pub fn at(&self, k: usize) -> f64 {
        self.values[k - 1]
    }
}

/// L x N matrix of reservoir signals; row k is the time step, column i the qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>, // row major
}

impl DesignMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<DesignMatrix> {
        if rows.is_empty() {
            return Err(Error::InvalidArgument("design matrix has no rows".into()));
        }
        let cols = rows[0].len();
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch("ragged design matrix".into()));
            }
            entries.extend_from_slice(row);
        }
        Ok(DesignMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    /// Dense copy of a half-open row window, for regression.
    pub fn window(&self, start_row: usize, end_row: usize) -> DMatrix<f64> {
        assert!(start_row <= end_row && end_row <= self.rows);
        DMatrix::from_fn(end_row - start_row, self.cols, |r, c| {
            self.entry(start_row + r, c)
        })
    }
}

/// The three branch probabilities of one evolution step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchProbabilities {
    pub apply_u0: f64,
    pub apply_u1: f64,
    pub reset: f64,
}

/// p0 = (1-eps)u, p1 = (1-eps)(1-u), p_reset = eps.
pub fn branch_probabilities(u: f64, epsilon: f64) -> Result<BranchProbabilities> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::InvalidArgument(format!("input {u} outside [0, 1]")));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!(
            "reset rate {epsilon} outside [0, 1]"
        )));
    }
    Ok(BranchProbabilities {
        apply_u0: (1.0 - epsilon) * u,
        apply_u1: (1.0 - epsilon) * (1.0 - u),
        reset: epsilon,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    ApplyU0,
    ApplyU1,
    Reset,
}

impl BranchProbabilities {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Branch {
        let x: f64 = rng.gen();
        if x < self.apply_u0 {
            Branch::ApplyU0
        } else if x < self.apply_u0 + self.apply_u1 {
            Branch::ApplyU1
        } else {
            Branch::Reset
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Independent substream for one (member, time step) pair, so results do not
/// depend on execution order or degree of concurrency.
pub fn substream_rng(master_seed: u64, member: u64, step: u64) -> ChaCha8Rng {
    let mixed = splitmix64(splitmix64(splitmix64(master_seed) ^ member) ^ step);
    ChaCha8Rng::seed_from_u64(mixed)
}

/// Advance one ensemble member by one step of the stochastic evolution.
/// `reset` is the precomputed pure reset state from
/// [`ReservoirConfig::reset_statevector`].
pub fn step_member<R: Rng + ?Sized>(
    state: &StateVector,
    u: f64,
    config: &ReservoirConfig,
    reset: &StateVector,
    rng: &mut R,
) -> Result<StateVector> {
    let probs = branch_probabilities(u, config.epsilon)?;
    match probs.draw(rng) {
        Branch::ApplyU0 => config.u0.apply(state),
        Branch::ApplyU1 => config.u1.apply(state),
        Branch::Reset => Ok(reset.clone()),
    }
}

/// A design matrix together with per-entry standard errors of the
/// ensemble mean (sample std over members / sqrt(N_c)).
#[derive(Debug, Clone)]
pub struct EnsembleRun {
    pub design: DesignMatrix,
    pub standard_errors: DesignMatrix,
}

/// Evolve the full ensemble over the input sequence, averaging member signals.
pub fn evolve_ensemble(inputs: &InputSequence, config: &ReservoirConfig) -> Result<DesignMatrix> {
    Ok(evolve_ensemble_stats(inputs, config)?.design)
}

/// Like [`evolve_ensemble`] but also reports per-entry standard errors.
pub fn evolve_ensemble_stats(
    inputs: &InputSequence,
    config: &ReservoirConfig,
) -> Result<EnsembleRun> {
    config.validate()?;
    let reset = config.reset_statevector()?;
    let steps = inputs.len();
    let cols = config.num_qubits;

    // Each member produces its own L x N signal trace; the reduction over
    // members is done afterwards in fixed member order.
    let traces: Vec<Result<Vec<f64>>> = (0..config.ensemble_size)
        .into_par_iter()
        .map(|member| member_trace(inputs, config, &reset, member as u64))
        .collect();

    let mut mean = vec![0.0f64; steps * cols];
    let mut m2 = vec![0.0f64; steps * cols];
    let mut count = 0.0f64;
    for trace in traces {
        let trace = trace?;
        count += 1.0;
        for (slot, &value) in trace.iter().enumerate() {
            // Welford update, deterministic because member order is fixed.
            let delta = value - mean[slot];
            mean[slot] += delta / count;
            m2[slot] += delta * (value - mean[slot]);
        }
    }

    let n = config.ensemble_size as f64;
    let stderr: Vec<f64> = m2
        .iter()
        .map(|&s| {
            if n > 1.0 {
                (s / (n - 1.0)).sqrt() / n.sqrt()
            } else {
                0.0
            }
        })
        .collect();

    let to_rows = |flat: Vec<f64>| {
        (0..steps)
            .map(|k| flat[k * cols..(k + 1) * cols].to_vec())
            .collect::<Vec<_>>()
    };
    Ok(EnsembleRun {
        design: DesignMatrix::from_rows(to_rows(mean))?,
        standard_errors: DesignMatrix::from_rows(to_rows(stderr))?,
    })
}

fn member_trace(
    inputs: &InputSequence,
    config: &ReservoirConfig,
    reset: &StateVector,
    member: u64,
) -> Result<Vec<f64>> {
    let mut state = reset.clone();
    let mut trace = Vec::with_capacity(inputs.len() * config.num_qubits);
    for k in 1..=inputs.len() {
        let mut rng = substream_rng(config.master_seed, member, k as u64);
        state = step_member(&state, inputs.at(k), config, reset, &mut rng)?;
        match config.measurement_mode {
            MeasurementMode::ExactExpectation => {
                for qubit in 0..config.num_qubits {
                    trace.push(state.expect_z(qubit)?);
                }
            }
            MeasurementMode::ShotSampling { shots } => {
                let counts = state.sample_bitstrings(shots, &mut rng)?;
                for qubit in 0..config.num_qubits {
                    trace.push(state.z_estimate_from_counts(&counts, qubit)?);
                }
            }
        }
    }
    Ok(trace)
}

/// One step of the exact averaged channel:
/// (1-eps)u U0 rho U0^dag + (1-eps)(1-u) U1 rho U1^dag + eps sigma.
pub fn channel_step(
    rho: &DensityMatrix,
    u: f64,
    config: &ReservoirConfig,
) -> Result<DensityMatrix> {
    let evolver = ChannelEvolver::new(config)?;
    evolver.step(rho, u)
}

/// Exact channel with the dense circuit unitaries precomputed.
pub struct ChannelEvolver {
    num_qubits: usize,
    epsilon: f64,
    u0: DMatrix<Complex64>,
    u1: DMatrix<Complex64>,
    reset: DMatrix<Complex64>,
}

impl ChannelEvolver {
    pub fn new(config: &ReservoirConfig) -> Result<ChannelEvolver> {
        config.validate()?;
        Ok(ChannelEvolver {
            num_qubits: config.num_qubits,
            epsilon: config.epsilon,
            u0: config.u0.unitary_matrix(),
            u1: config.u1.unitary_matrix(),
            reset: config.reset_state.entries().clone(),
        })
    }

    pub fn step(&self, rho: &DensityMatrix, u: f64) -> Result<DensityMatrix> {
        if rho.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch(format!(
                "channel acts on {} qubits, state has {}",
                self.num_qubits,
                rho.num_qubits()
            )));
        }
        let probs = branch_probabilities(u, self.epsilon)?;
        let scale = |p: f64| Complex64::new(p, 0.0);
        let next = (&self.u0 * rho.entries() * self.u0.adjoint()) * scale(probs.apply_u0)
            + (&self.u1 * rho.entries() * self.u1.adjoint()) * scale(probs.apply_u1)
            + &self.reset * scale(probs.reset);
        Ok(DensityMatrix::from_matrix_unchecked(self.num_qubits, next))
    }
}

/// Deterministic design matrix from the exact channel: row k holds
/// Tr(Z_i rho(k)). Equals the expectation of the stochastic ensemble.
pub fn evolve_channel(inputs: &InputSequence, config: &ReservoirConfig) -> Result<DesignMatrix> {
    let evolver = ChannelEvolver::new(config)?;
    let mut rho = config.reset_state.clone();
    let mut rows = Vec::with_capacity(inputs.len());
    for k in 1..=inputs.len() {
        rho = evolver.step(&rho, inputs.at(k))?;
        let mut row = Vec::with_capacity(config.num_qubits);
        for qubit in 0..config.num_qubits {
            row.push(rho.expect_z(qubit)?);
        }
        rows.push(row);
    }
    DesignMatrix::from_rows(rows)
}
