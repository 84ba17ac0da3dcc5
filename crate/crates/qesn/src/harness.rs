//! Experiment orchestration: configuration, seeded sweeps over the reset
//! rate and qubit count, cost accounting and CSV/JSON result records.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{builtin_reservoir_pair, UnitaryCircuit};
use crate::error::{Error, Result};
use crate::memory::{run_mc_protocol_on, MemoryProtocolSpec};
use crate::readout::{nmse, predict, train_readout, NmseNormalization, SplitSpec};
use crate::reservoir::{
    evolve_ensemble, InputSequence, MeasurementMode, ReservoirConfig,
};
use crate::tasks::{
    generate_input, AircraftTask, LinearMapTask, MatrixKind, RudderMapping,
};

/// The benchmark a run targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TaskKind {
    Task1Dense,
    Task2Sparse,
    Task3Aircraft,
    MemoryCapacity,
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            TaskKind::Task1Dense => "task1-dense",
            TaskKind::Task2Sparse => "task2-sparse",
            TaskKind::Task3Aircraft => "task3-aircraft",
            TaskKind::MemoryCapacity => "memory-capacity",
        };
        f.write_str(name)
    }
}

impl FromStr for TaskKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<TaskKind> {
        match s {
            "task1-dense" => Ok(TaskKind::Task1Dense),
            "task2-sparse" => Ok(TaskKind::Task2Sparse),
            "task3-aircraft" => Ok(TaskKind::Task3Aircraft),
            "memory-capacity" => Ok(TaskKind::MemoryCapacity),
            other => Err(Error::Config(format!("unknown task `{other}`"))),
        }
    }
}

/// Parameter presets matching the two published experiment regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Profile {
    /// N_c = 1024, S = 4000, L = 60.
    Simulator,
    /// N_c = 300, S = 4000, L = 30 (still executed on the simulator).
    Hardware,
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Profile> {
        match s {
            "simulator" => Ok(Profile::Simulator),
            "hardware" => Ok(Profile::Hardware),
            other => Err(Error::Config(format!("unknown profile `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModeKind {
    Exact,
    Shots,
}

impl FromStr for ModeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<ModeKind> {
        match s {
            "exact" => Ok(ModeKind::Exact),
            "shots" => Ok(ModeKind::Shots),
            other => Err(Error::Config(format!("unknown measurement mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<OutputFormat> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown output format `{other}`"))),
        }
    }
}

/// Fully resolved experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub task: TaskKind,
    pub epsilon_grid: Vec<f64>,
    pub qubit_grid: Vec<usize>,
    pub ensemble_size: usize,
    pub shots: u64,
    pub input_len: usize,
    pub split: SplitSpec,
    pub tau_max: usize,
    pub mode: ModeKind,
    pub num_repeats: usize,
    pub master_seed: u64,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
    pub task_dimension: usize,
    pub rudder_mapping: RudderMapping,
    pub nmse_normalization: NmseNormalization,
    pub u0_circuit: Option<PathBuf>,
    pub u1_circuit: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn with_profile(task: TaskKind, profile: Profile) -> ExperimentConfig {
        let (ensemble_size, shots, input_len, split) = match profile {
            Profile::Simulator => (1024, 4000, 60, SplitSpec::simulator()),
            Profile::Hardware => (300, 4000, 30, SplitSpec::hardware()),
        };
        // The delay-reconstruction study uses its own windows (washout 14,
        // training to step 45).
        let split = if task == TaskKind::MemoryCapacity && profile == Profile::Simulator {
            SplitSpec::new(14, 31, 15)
        } else {
            split
        };
        ExperimentConfig {
            task,
            epsilon_grid: vec![0.5],
            qubit_grid: vec![5],
            ensemble_size,
            shots,
            input_len,
            split,
            tau_max: 8,
            mode: ModeKind::Exact,
            num_repeats: 15,
            master_seed: 42,
            output_path: None,
            format: OutputFormat::Csv,
            task_dimension: 2000,
            rudder_mapping: RudderMapping::RangeConsistent,
            nmse_normalization: NmseNormalization::Target,
            u0_circuit: None,
            u1_circuit: None,
        }
    }

    /// Apply one `key=value` assignment from a config file. Unknown keys are
    /// errors, not warnings.
    pub fn apply_key(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Config(format!("bad {what} `{value}` for key `{key}`"));
        match key {
            "task" => self.task = value.parse()?,
            "epsilon_grid" => {
                self.epsilon_grid = parse_list(value).map_err(|_| bad("float list"))?
            }
            "qubit_grid" => self.qubit_grid = parse_list(value).map_err(|_| bad("integer list"))?,
            "ensemble_size" => self.ensemble_size = value.parse().map_err(|_| bad("integer"))?,
            "shots" => self.shots = value.parse().map_err(|_| bad("integer"))?,
            "input_len" => self.input_len = value.parse().map_err(|_| bad("integer"))?,
            "discard" => self.split.discard = value.parse().map_err(|_| bad("integer"))?,
            "train_len" => self.split.train_len = value.parse().map_err(|_| bad("integer"))?,
            "test_len" => self.split.test_len = value.parse().map_err(|_| bad("integer"))?,
            "tau_max" => self.tau_max = value.parse().map_err(|_| bad("integer"))?,
            "mode" => self.mode = value.parse()?,
            "repeats" => self.num_repeats = value.parse().map_err(|_| bad("integer"))?,
            "seed" => self.master_seed = value.parse().map_err(|_| bad("integer"))?,
            "out" => self.output_path = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            "task_dimension" => self.task_dimension = value.parse().map_err(|_| bad("integer"))?,
            "rudder_mapping" => {
                self.rudder_mapping = match value {
                    "paper-literal" => RudderMapping::PaperLiteral,
                    "range-consistent" => RudderMapping::RangeConsistent,
                    _ => return Err(bad("rudder mapping")),
                }
            }
            "nmse_normalization" => {
                self.nmse_normalization = match value {
                    "target" => NmseNormalization::Target,
                    "predicted" => NmseNormalization::Predicted,
                    _ => return Err(bad("normalization")),
                }
            }
            "u0_circuit" => self.u0_circuit = Some(PathBuf::from(value)),
            "u1_circuit" => self.u1_circuit = Some(PathBuf::from(value)),
            other => return Err(Error::Config(format!("unknown config key `{other}`"))),
        }
        Ok(())
    }

    /// Parse a flat `key=value` config file over this base configuration.
    pub fn apply_file(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key=value", lineno + 1))
            })?;
            self.apply_key(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilon_grid.is_empty() || self.qubit_grid.is_empty() {
            return Err(Error::Config("empty epsilon or qubit grid".into()));
        }
        for &eps in &self.epsilon_grid {
            if !(0.0..=1.0).contains(&eps) {
                return Err(Error::Config(format!("reset rate {eps} outside [0, 1]")));
            }
        }
        if self.num_repeats == 0 {
            return Err(Error::Config("need at least one repeat".into()));
        }
        self.split.validate_for(self.input_len)?;
        if self.task == TaskKind::MemoryCapacity {
            self.memory_spec().validate()?;
        }
        for &qubits in &self.qubit_grid {
            self.resolve_circuits(qubits)?;
        }
        Ok(())
    }

    pub fn memory_spec(&self) -> MemoryProtocolSpec {
        MemoryProtocolSpec {
            len: self.input_len,
            discard: self.split.discard,
            train_end: self.split.discard + self.split.train_len,
            tau_max: self.tau_max,
        }
    }

    /// The (U0, U1) pair for a qubit count: user-supplied files win over the
    /// shipped circuits. Returns the circuits and their layout identifiers.
    pub fn resolve_circuits(
        &self,
        qubits: usize,
    ) -> Result<(UnitaryCircuit, UnitaryCircuit, String, String)> {
        let load = |path: &Path| -> Result<UnitaryCircuit> {
            let text = fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            })?;
            UnitaryCircuit::parse(&text, qubits)
        };
        match (&self.u0_circuit, &self.u1_circuit) {
            (Some(p0), Some(p1)) => Ok((
                load(p0)?,
                load(p1)?,
                p0.display().to_string(),
                p1.display().to_string(),
            )),
            (None, None) => {
                let (u0, u1) = builtin_reservoir_pair(qubits)?;
                Ok((u0, u1, format!("u0_{qubits}q"), format!("u1_{qubits}q")))
            }
            _ => Err(Error::Config(
                "u0_circuit and u1_circuit must be given together".into(),
            )),
        }
    }

    /// Rendered as config-file text (the `show-config` view).
    pub fn render(&self) -> String {
        let list = |xs: &[f64]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut out = String::new();
        out.push_str(&format!("task = {}\n", self.task));
        out.push_str(&format!("epsilon_grid = {}\n", list(&self.epsilon_grid)));
        out.push_str(&format!(
            "qubit_grid = {}\n",
            self.qubit_grid
                .iter()
                .map(|q| q.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ));
        out.push_str(&format!("ensemble_size = {}\n", self.ensemble_size));
        out.push_str(&format!("shots = {}\n", self.shots));
        out.push_str(&format!("input_len = {}\n", self.input_len));
        out.push_str(&format!("discard = {}\n", self.split.discard));
        out.push_str(&format!("train_len = {}\n", self.split.train_len));
        out.push_str(&format!("test_len = {}\n", self.split.test_len));
        out.push_str(&format!("tau_max = {}\n", self.tau_max));
        out.push_str(&format!(
            "mode = {}\n",
            match self.mode {
                ModeKind::Exact => "exact",
                ModeKind::Shots => "shots",
            }
        ));
        out.push_str(&format!("repeats = {}\n", self.num_repeats));
        out.push_str(&format!("seed = {}\n", self.master_seed));
        out.push_str(&format!("task_dimension = {}\n", self.task_dimension));
        out.push_str(&format!(
            "rudder_mapping = {}\n",
            match self.rudder_mapping {
                RudderMapping::PaperLiteral => "paper-literal",
                RudderMapping::RangeConsistent => "range-consistent",
            }
        ));
        out.push_str(&format!(
            "nmse_normalization = {}\n",
            match self.nmse_normalization {
                NmseNormalization::Target => "target",
                NmseNormalization::Predicted => "predicted",
            }
        ));
        out
    }
}

fn parse_list<T: FromStr>(value: &str) -> std::result::Result<Vec<T>, T::Err> {
    value.split(',').map(|s| s.trim().parse()).collect()
}

/// One metric produced by one repeat.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub name: String,
    pub value: f64,
}

/// Everything one repeat produced, sufficient to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatOutcome {
    pub repeat: usize,
    pub input_seed: u64,
    pub reservoir_seed: u64,
    pub input_hash: u64,
    pub metrics: Vec<MetricValue>,
    pub error: Option<String>,
    pub predicted: Vec<f64>,
    pub target: Vec<f64>,
}

/// Full result of one grid point, replayable from the embedded config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub task: TaskKind,
    pub qubits: usize,
    pub epsilon: f64,
    pub rotation_convention: String,
    pub u0_layout: String,
    pub u1_layout: String,
    pub ensemble_size: usize,
    pub shots: u64,
    pub mode: ModeKind,
    pub input_len: usize,
    pub split: SplitSpec,
    pub tau_max: usize,
    pub task_dimension: usize,
    pub rudder_mapping: RudderMapping,
    pub nmse_normalization: NmseNormalization,
    pub master_seed: u64,
    pub metric_name: String,
    pub repeats: Vec<RepeatOutcome>,
    pub mean: Option<f64>,
    pub std_dev: Option<f64>,
    pub duration_secs: f64,
}

fn derive_seed(master: u64, domain: u64, index: u64) -> u64 {
    fn mix(mut x: u64) -> u64 {
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
        x ^ (x >> 31)
    }
    mix(mix(master.wrapping_add(0x9e3779b97f4a7c15u64.wrapping_mul(domain))) ^ index)
}

fn hash_inputs(inputs: &InputSequence) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for v in inputs.values() {
        h ^= v.to_bits();
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Target series shared across grid points for one repeat.
enum TaskTargets {
    Series(Vec<f64>),
    Memory,
}

/// Per-repeat inputs and targets, generated once so every grid point in a
/// sweep sees the same input signal (paired comparison).
struct SweepContext {
    inputs: Vec<InputSequence>,
    input_seeds: Vec<u64>,
    targets: Vec<TaskTargets>,
}

impl SweepContext {
    fn prepare(config: &ExperimentConfig) -> Result<SweepContext> {
        let mut inputs = Vec::with_capacity(config.num_repeats);
        let mut input_seeds = Vec::with_capacity(config.num_repeats);
        for repeat in 0..config.num_repeats {
            let seed = derive_seed(config.master_seed, 1, repeat as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            inputs.push(generate_input(config.input_len, &mut rng)?);
            input_seeds.push(seed);
        }

        let targets = match config.task {
            TaskKind::Task1Dense | TaskKind::Task2Sparse => {
                let (kind, sigma) = if config.task == TaskKind::Task1Dense {
                    (MatrixKind::Dense, 0.5)
                } else {
                    (MatrixKind::Sparse95, 0.99)
                };
                let mut rng =
                    ChaCha8Rng::seed_from_u64(derive_seed(config.master_seed, 2, 0));
                let task =
                    LinearMapTask::generate(kind, config.task_dimension, sigma, &mut rng)?;
                inputs
                    .iter()
                    .map(|u| task.run(u).map(TaskTargets::Series))
                    .collect::<Result<Vec<_>>>()?
            }
            TaskKind::Task3Aircraft => {
                let task = AircraftTask {
                    input_mapping: config.rudder_mapping,
                    ..AircraftTask::default()
                };
                inputs
                    .iter()
                    .map(|u| task.integrate(u).map(TaskTargets::Series))
                    .collect::<Result<Vec<_>>>()?
            }
            TaskKind::MemoryCapacity => {
                (0..config.num_repeats).map(|_| TaskTargets::Memory).collect()
            }
        };
        Ok(SweepContext {
            inputs,
            input_seeds,
            targets,
        })
    }
}

fn reservoir_for(
    config: &ExperimentConfig,
    qubits: usize,
    epsilon: f64,
    seed: u64,
) -> Result<(ReservoirConfig, String, String)> {
    let (u0, u1, u0_name, u1_name) = config.resolve_circuits(qubits)?;
    let mode = match config.mode {
        ModeKind::Exact => MeasurementMode::ExactExpectation,
        ModeKind::Shots => MeasurementMode::ShotSampling {
            shots: config.shots,
        },
    };
    let reservoir = ReservoirConfig::new(epsilon, u0, u1, config.ensemble_size, mode, seed)?;
    Ok((reservoir, u0_name, u1_name))
}

fn run_point(
    config: &ExperimentConfig,
    context: &SweepContext,
    point_index: usize,
    qubits: usize,
    epsilon: f64,
) -> Result<ResultRecord> {
    let started = Instant::now();
    let metric_name = match config.task {
        TaskKind::MemoryCapacity => "mc",
        _ => "nmse",
    };
    let mut outcomes = Vec::with_capacity(config.num_repeats);
    let mut u0_layout = String::new();
    let mut u1_layout = String::new();

    for repeat in 0..config.num_repeats {
        let reservoir_seed =
            derive_seed(config.master_seed, 3 + point_index as u64, repeat as u64);
        let (reservoir, n0, n1) = reservoir_for(config, qubits, epsilon, reservoir_seed)?;
        u0_layout = n0;
        u1_layout = n1;
        let inputs = &context.inputs[repeat];
        let mut outcome = RepeatOutcome {
            repeat,
            input_seed: context.input_seeds[repeat],
            reservoir_seed,
            input_hash: hash_inputs(inputs),
            metrics: Vec::new(),
            error: None,
            predicted: Vec::new(),
            target: Vec::new(),
        };

        let result = match &context.targets[repeat] {
            TaskTargets::Series(targets) => {
                run_prediction_repeat(config, &reservoir, inputs, targets, &mut outcome)
            }
            TaskTargets::Memory => {
                run_memory_repeat(config, &reservoir, inputs, &mut outcome)
            }
        };
        if let Err(err) = result {
            match err {
                // A degenerate metric on one repeat is recorded, not fatal.
                Error::DegenerateNormalization => {
                    outcome.error = Some(err.to_string());
                }
                other => return Err(other),
            }
        }
        outcomes.push(outcome);
    }

    let values: Vec<f64> = outcomes
        .iter()
        .filter(|o| o.error.is_none())
        .filter_map(|o| {
            o.metrics
                .iter()
                .find(|m| m.name == metric_name)
                .map(|m| m.value)
        })
        .collect();
    let (mean, std_dev) = aggregate(&values);

    Ok(ResultRecord {
        task: config.task,
        qubits,
        epsilon,
        rotation_convention: "RX-RY-RZ".into(),
        u0_layout,
        u1_layout,
        ensemble_size: config.ensemble_size,
        shots: config.shots,
        mode: config.mode,
        input_len: config.input_len,
        split: config.split,
        tau_max: config.tau_max,
        task_dimension: config.task_dimension,
        rudder_mapping: config.rudder_mapping,
        nmse_normalization: config.nmse_normalization,
        master_seed: config.master_seed,
        metric_name: metric_name.into(),
        repeats: outcomes,
        mean,
        std_dev,
        duration_secs: started.elapsed().as_secs_f64(),
    })
}

fn run_prediction_repeat(
    config: &ExperimentConfig,
    reservoir: &ReservoirConfig,
    inputs: &InputSequence,
    targets: &[f64],
    outcome: &mut RepeatOutcome,
) -> Result<()> {
    let design = evolve_ensemble(inputs, reservoir)?;
    let train_range = config.split.train_range();
    let test_range = config.split.test_range();
    let train_x = design.window(train_range.start, train_range.end);
    let test_x = design.window(test_range.start, test_range.end);
    let train_y = &targets[train_range.clone()];
    let test_y = &targets[test_range.clone()];

    let weights = train_readout(&train_x, train_y, false)?;
    let predicted = predict(&test_x, &weights)?;
    outcome.predicted = predicted.clone();
    outcome.target = test_y.to_vec();
    let error = nmse(&predicted, test_y, config.nmse_normalization)?;
    outcome.metrics.push(MetricValue {
        name: "nmse".into(),
        value: error,
    });
    Ok(())
}

fn run_memory_repeat(
    config: &ExperimentConfig,
    reservoir: &ReservoirConfig,
    inputs: &InputSequence,
    outcome: &mut RepeatOutcome,
) -> Result<()> {
    let curve = run_mc_protocol_on(reservoir, &config.memory_spec(), inputs)?;
    for (tau, &c) in curve.c_values.iter().enumerate() {
        outcome.metrics.push(MetricValue {
            name: format!("c_tau_{tau}"),
            value: c,
        });
    }
    outcome.metrics.push(MetricValue {
        name: "mc".into(),
        value: curve.mc,
    });
    Ok(())
}

fn aggregate(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let std_dev = if values.len() > 1 {
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
            / (values.len() - 1) as f64;
        Some(var.sqrt())
    } else {
        None
    };
    (Some(mean), std_dev)
}

/// Run the single grid point of a non-sweep invocation.
pub fn run_task_experiment(config: &ExperimentConfig) -> Result<ResultRecord> {
    config.validate()?;
    if config.epsilon_grid.len() != 1 || config.qubit_grid.len() != 1 {
        return Err(Error::Config(
            "run expects exactly one epsilon and one qubit count; use sweep for grids".into(),
        ));
    }
    let context = SweepContext::prepare(config)?;
    run_point(config, &context, 0, config.qubit_grid[0], config.epsilon_grid[0])
}

/// Cartesian sweep over epsilon_grid x qubit_grid with paired inputs: every
/// grid point reuses the identical per-repeat input sequences.
pub fn sweep(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    config.validate()?;
    let context = SweepContext::prepare(config)?;
    let mut records = Vec::new();
    let mut point_index = 0;
    for &epsilon in &config.epsilon_grid {
        for &qubits in &config.qubit_grid {
            records.push(run_point(config, &context, point_index, qubits, epsilon)?);
            point_index += 1;
        }
    }
    Ok(records)
}

/// Hardware cost of processing an L-step signal with the measure-and-replay
/// protocol: (N_c * S * L total circuit runs, N_c * S * L(L+1)/2 total
/// evolution applications).
pub fn estimate_cost(length: u64, copies: u64, shots: u64) -> Result<(u128, u128)> {
    if length == 0 || copies == 0 || shots == 0 {
        return Err(Error::InvalidArgument(
            "cost arguments must be positive".into(),
        ));
    }
    let base = (copies as u128)
        .checked_mul(shots as u128)
        .ok_or(Error::CostOverflow)?;
    let runs = base
        .checked_mul(length as u128)
        .ok_or(Error::CostOverflow)?;
    let gauss = (length as u128)
        .checked_mul(length as u128 + 1)
        .ok_or(Error::CostOverflow)?
        / 2;
    let applications = base.checked_mul(gauss).ok_or(Error::CostOverflow)?;
    Ok((runs, applications))
}

pub const CSV_HEADER: &str = "task,seed,qubits,epsilon,repeat,metric_name,metric_value";

/// Serialize records as CSV, one row per repeat metric.
pub fn render_csv(records: &[ResultRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for record in records {
        for repeat in &record.repeats {
            for metric in &repeat.metrics {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    record.task,
                    repeat.input_seed,
                    record.qubits,
                    record.epsilon,
                    repeat.repeat,
                    metric.name,
                    metric.value
                ));
            }
            if let Some(err) = &repeat.error {
                out.push_str(&format!(
                    "{},{},{},{},{},error,\"{}\"\n",
                    record.task,
                    repeat.input_seed,
                    record.qubits,
                    record.epsilon,
                    repeat.repeat,
                    err
                ));
            }
        }
    }
    out
}

/// Write records to `path` in the requested format.
pub fn emit_results(records: &[ResultRecord], format: OutputFormat, path: &Path) -> Result<()> {
    let text = match format {
        OutputFormat::Csv => render_csv(records),
        OutputFormat::Json => serde_json::to_string_pretty(records)?,
    };
    let mut file = fs::File::create(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    file.write_all(text.as_bytes()).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(())
}
