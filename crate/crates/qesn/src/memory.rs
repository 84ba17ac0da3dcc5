//! Short-term memory quantification: delayed-input reconstruction,
//! squared correlation C(tau) and memory capacity MC.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::readout::{predict, train_readout};
use crate::reservoir::{evolve_ensemble, InputSequence, ReservoirConfig};
use crate::tasks::generate_input;

/// Variance below which a series counts as constant; C(tau) = 0 there.
pub const ZERO_VARIANCE_TOL: f64 = 1e-14;

/// Delay-reconstruction protocol windows (1-based time indices).
/// Training covers k = discard+1 ..= train_end, testing k = train_end+1 ..= len.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemoryProtocolSpec {
    pub len: usize,
    pub discard: usize,
    pub train_end: usize,
    pub tau_max: usize,
}

impl MemoryProtocolSpec {
    /// The published protocol: L = 60, discard 14, train to 45, tau_max = 8.
    pub fn paper() -> MemoryProtocolSpec {
        MemoryProtocolSpec {
            len: 60,
            discard: 14,
            train_end: 45,
            tau_max: 8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tau_max >= self.discard {
            return Err(Error::Config(format!(
                "tau_max {} must be below the washout {} so delayed targets exist",
                self.tau_max, self.discard
            )));
        }
        if !(self.discard < self.train_end && self.train_end < self.len) {
            return Err(Error::Config(format!(
                "windows discard={} train_end={} len={} are not ordered",
                self.discard, self.train_end, self.len
            )));
        }
        Ok(())
    }
}

/// Per-delay squared correlations and their sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryCurve {
    pub c_values: Vec<f64>,
    pub mc: f64,
}

/// Entries u(k - tau) for 1-based k in `k_range` (inclusive).
pub fn delayed_target(
    u: &InputSequence,
    tau: usize,
    k_start: usize,
    k_end: usize,
) -> Result<Vec<f64>> {
    if k_start == 0 || k_start <= tau {
        return Err(Error::InvalidArgument(format!(
            "delay {tau} undefined at the window start k={k_start}"
        )));
    }
    if k_end > u.len() || k_start > k_end {
        return Err(Error::InvalidArgument(format!(
            "window [{k_start}, {k_end}] outside sequence of length {}",
            u.len()
        )));
    }
    Ok((k_start..=k_end).map(|k| u.at(k - tau)).collect())
}

/// Squared Pearson correlation COV^2(y, u_tau) / (var(y) var(u_tau)), with
/// population normalization. Zero by convention when either series is
/// constant.
pub fn correlation_c(y: &[f64], u_tau: &[f64]) -> Result<f64> {
    if y.len() != u_tau.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} outputs vs {} delayed inputs",
            y.len(),
            u_tau.len()
        )));
    }
    let n = y.len();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "need at least two points for a correlation".into(),
        ));
    }
    let mean = |s: &[f64]| s.iter().sum::<f64>() / n as f64;
    let my = mean(y);
    let mu = mean(u_tau);
    let mut cov = 0.0;
    let mut var_y = 0.0;
    let mut var_u = 0.0;
    for (a, b) in y.iter().zip(u_tau) {
        cov += (a - my) * (b - mu);
        var_y += (a - my) * (a - my);
        var_u += (b - mu) * (b - mu);
    }
    cov /= n as f64;
    var_y /= n as f64;
    var_u /= n as f64;
    if var_y <= ZERO_VARIANCE_TOL || var_u <= ZERO_VARIANCE_TOL {
        return Ok(0.0);
    }
    Ok((cov * cov / (var_y * var_u)).min(1.0))
}

/// Run the full delay-reconstruction protocol: one reservoir evolution, then
/// for each tau a fresh readout trained against the delayed input on the
/// training window and scored by C(tau) on the test window.
pub fn run_mc_protocol<R: Rng + ?Sized>(
    config: &ReservoirConfig,
    spec: &MemoryProtocolSpec,
    rng: &mut R,
) -> Result<MemoryCurve> {
    spec.validate()?;
    let inputs = generate_input(spec.len, rng)?;
    run_mc_protocol_on(config, spec, &inputs)
}

/// Same protocol on a caller-supplied input sequence.
pub fn run_mc_protocol_on(
    config: &ReservoirConfig,
    spec: &MemoryProtocolSpec,
    inputs: &InputSequence,
) -> Result<MemoryCurve> {
    spec.validate()?;
    if inputs.len() != spec.len {
        return Err(Error::DimensionMismatch(format!(
            "protocol length {} vs input length {}",
            spec.len,
            inputs.len()
        )));
    }
    let design = evolve_ensemble(inputs, config)?;
    let train_x = design.window(spec.discard, spec.train_end);
    let test_x = design.window(spec.train_end, spec.len);

    let mut c_values = Vec::with_capacity(spec.tau_max + 1);
    for tau in 0..=spec.tau_max {
        let train_y = delayed_target(inputs, tau, spec.discard + 1, spec.train_end)?;
        let test_y = delayed_target(inputs, tau, spec.train_end + 1, spec.len)?;
        let weights = train_readout(&train_x, &train_y, false)?;
        let predicted = predict(&test_x, &weights)?;
        c_values.push(correlation_c(&predicted, &test_y)?);
    }
    let mc = c_values.iter().sum();
    Ok(MemoryCurve { c_values, mc })
}
