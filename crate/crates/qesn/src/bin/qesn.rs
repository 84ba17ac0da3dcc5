//! Thin command-line front end over the experiment harness.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qesn::harness::{
    emit_results, estimate_cost, run_task_experiment, sweep, ExperimentConfig, OutputFormat,
    Profile, ResultRecord, TaskKind,
};

#[derive(Parser)]
#[command(name = "qesn", about = "Quantum echo-state network benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single experiment (one epsilon, one qubit count).
    Run(ExperimentOpts),
    /// Sweep the Cartesian product of the epsilon and qubit grids.
    Sweep(ExperimentOpts),
    /// Run the delay-reconstruction memory-capacity protocol.
    MemoryCapacity(ExperimentOpts),
    /// Print the hardware cost of the measure-and-replay protocol.
    EstimateCost {
        /// Input signal length L.
        #[arg(long, short = 'l')]
        length: u64,
        /// Circuit copies N_c.
        #[arg(long, short = 'c')]
        copies: u64,
        /// Shots per circuit per step S.
        #[arg(long, short = 's')]
        shots: u64,
    },
    /// Print the fully resolved configuration and exit.
    ShowConfig(ExperimentOpts),
}

#[derive(Args)]
struct ExperimentOpts {
    /// Flat key=value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parameter preset: `simulator` (N_c=1024, L=60) or `hardware` (N_c=300, L=30).
    #[arg(long, default_value = "simulator")]
    profile: String,
    /// Benchmark task (task1-dense, task2-sparse, task3-aircraft, memory-capacity).
    #[arg(long)]
    task: Option<String>,
    /// Reset rate grid, comma separated.
    #[arg(long)]
    epsilon: Option<String>,
    /// Qubit count grid, comma separated.
    #[arg(long)]
    qubits: Option<String>,
    /// Master seed; everything else derives from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of repeats with different inputs.
    #[arg(long)]
    repeats: Option<usize>,
    /// Measurement mode: `exact` or `shots`.
    #[arg(long)]
    mode: Option<String>,
    /// Output file path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: `csv` or `json`.
    #[arg(long)]
    format: Option<String>,
}

impl ExperimentOpts {
    fn resolve(&self, default_task: TaskKind) -> qesn::Result<ExperimentConfig> {
        let profile: Profile = self.profile.parse()?;
        // Task may come from the config file; parse the file onto a
        // provisional config, then rebuild if the task changed the defaults.
        let task = match &self.task {
            Some(t) => t.parse()?,
            None => {
                let mut probe = default_task;
                if let Some(path) = &self.config {
                    let text = read_config(path)?;
                    let mut tmp = ExperimentConfig::with_profile(default_task, profile);
                    tmp.apply_file(&text)?;
                    probe = tmp.task;
                }
                probe
            }
        };
        let mut config = ExperimentConfig::with_profile(task, profile);
        if let Some(path) = &self.config {
            config.apply_file(&read_config(path)?)?;
        }
        if let Some(t) = &self.task {
            config.apply_key("task", t)?;
        }
        if let Some(e) = &self.epsilon {
            config.apply_key("epsilon_grid", e)?;
        }
        if let Some(q) = &self.qubits {
            config.apply_key("qubit_grid", q)?;
        }
        if let Some(seed) = self.seed {
            config.master_seed = seed;
        }
        if let Some(repeats) = self.repeats {
            config.num_repeats = repeats;
        }
        if let Some(mode) = &self.mode {
            config.apply_key("mode", mode)?;
        }
        if let Some(out) = &self.out {
            config.output_path = Some(out.clone());
        }
        if let Some(format) = &self.format {
            config.apply_key("format", format)?;
        }
        Ok(config)
    }
}

fn read_config(path: &PathBuf) -> qesn::Result<String> {
    std::fs::read_to_string(path).map_err(|source| qesn::Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn deliver(records: &[ResultRecord], config: &ExperimentConfig) -> qesn::Result<()> {
    match &config.output_path {
        Some(path) => {
            emit_results(records, config.format, path)?;
            eprintln!("wrote {} record(s) to {}", records.len(), path.display());
        }
        None => {
            let text = match config.format {
                OutputFormat::Csv => qesn::harness::render_csv(records),
                OutputFormat::Json => serde_json::to_string_pretty(records)?,
            };
            print!("{text}");
            if config.format == OutputFormat::Json {
                println!();
            }
        }
    }
    for record in records {
        if let (Some(mean), name) = (record.mean, &record.metric_name) {
            eprintln!(
                "{} N={} eps={} mode={:?}: mean {} = {:.6}{}",
                record.task,
                record.qubits,
                record.epsilon,
                record.mode,
                name,
                mean,
                record
                    .std_dev
                    .map(|s| format!(" (std {s:.6})"))
                    .unwrap_or_default()
            );
        }
    }
    Ok(())
}

fn run(cli: Cli) -> qesn::Result<()> {
    match cli.command {
        Command::Run(opts) => {
            let config = opts.resolve(TaskKind::Task1Dense)?;
            let record = run_task_experiment(&config)?;
            deliver(std::slice::from_ref(&record), &config)
        }
        Command::Sweep(opts) => {
            let config = opts.resolve(TaskKind::Task1Dense)?;
            let records = sweep(&config)?;
            deliver(&records, &config)
        }
        Command::MemoryCapacity(mut opts) => {
            opts.task = Some("memory-capacity".into());
            let config = opts.resolve(TaskKind::MemoryCapacity)?;
            let records = sweep(&config)?;
            deliver(&records, &config)
        }
        Command::EstimateCost {
            length,
            copies,
            shots,
        } => {
            let (runs, applications) = estimate_cost(length, copies, shots)?;
            println!("total_circuit_runs = {runs}");
            println!("total_evolution_applications = {applications}");
            Ok(())
        }
        Command::ShowConfig(opts) => {
            let config = opts.resolve(TaskKind::Task1Dense)?;
            config.validate()?;
            print!("{}", config.render());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
