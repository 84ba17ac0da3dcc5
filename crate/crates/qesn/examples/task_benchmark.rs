//! Benchmark the reservoir on the three prediction tasks over a reset-rate
//! grid with paired inputs, printing the mean test NMSE per grid point.
//!
//! Run with: cargo run --release --example task_benchmark

use qesn::harness::{sweep, ExperimentConfig, Profile, TaskKind};

fn main() -> qesn::Result<()> {
    let tasks = [
        TaskKind::Task1Dense,
        TaskKind::Task2Sparse,
        TaskKind::Task3Aircraft,
    ];
    let grid = vec![0.1, 0.3, 0.5, 0.7, 0.9];

    println!("task            epsilon   mean NMSE   std dev");
    for task in tasks {
        let mut config = ExperimentConfig::with_profile(task, Profile::Simulator);
        config.epsilon_grid = grid.clone();
        config.qubit_grid = vec![5];
        config.num_repeats = 10;
        config.master_seed = 42;
        // Smaller internal dimension than the full benchmark keeps this demo
        // fast; pass 2000 for the published setting.
        config.task_dimension = 200;

        for record in sweep(&config)? {
            println!(
                "{:<15} {:>7.1}   {:>9.4}   {:>7.4}",
                record.task.to_string(),
                record.epsilon,
                record.mean.unwrap_or(f64::NAN),
                record.std_dev.unwrap_or(f64::NAN),
            );
        }
    }
    println!("\nCentral reset rates balance memory against staleness.");
    Ok(())
}
