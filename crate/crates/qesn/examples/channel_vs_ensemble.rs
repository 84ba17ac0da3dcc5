//! Drive the same 3-qubit reservoir with the stochastic ensemble and with
//! the exact averaged channel, and print how closely the ensemble mean
//! tracks the channel as the number of copies grows.
//!
//! Run with: cargo run --release --example channel_vs_ensemble

use qesn::reservoir::{evolve_channel, evolve_ensemble, MeasurementMode, ReservoirConfig};
use qesn::tasks::generate_input;
use qesn::builtin_reservoir_pair;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qesn::Result<()> {
    let (u0, u1) = builtin_reservoir_pair(3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let inputs = generate_input(40, &mut rng)?;

    println!("copies   worst |ensemble - channel| entry");
    for copies in [16usize, 64, 256, 1024, 4096] {
        let config = ReservoirConfig::new(
            0.5,
            u0.clone(),
            u1.clone(),
            copies,
            MeasurementMode::ExactExpectation,
            42,
        )?;
        let ensemble = evolve_ensemble(&inputs, &config)?;
        let channel = evolve_channel(&inputs, &config)?;
        let mut worst = 0.0f64;
        for row in 0..ensemble.nrows() {
            for col in 0..ensemble.ncols() {
                worst = worst.max((ensemble.entry(row, col) - channel.entry(row, col)).abs());
            }
        }
        println!("{copies:>6}   {worst:.6}");
    }
    println!("\nThe gap shrinks like 1/sqrt(copies): the channel is the ensemble mean.");
    Ok(())
}
