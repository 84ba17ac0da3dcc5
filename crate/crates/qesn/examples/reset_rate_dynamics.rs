//! Trace how the probabilistic memory reset shapes the reservoir signal:
//! evolve the exact channel at several reset rates on the same input and
//! print the first qubit's <Z> trajectory plus its fading-memory envelope.
//!
//! Run with: cargo run --example reset_rate_dynamics

use qesn::reservoir::{evolve_channel, MeasurementMode, ReservoirConfig};
use qesn::tasks::generate_input;
use qesn::builtin_reservoir_pair;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qesn::Result<()> {
    let (u0, u1) = builtin_reservoir_pair(3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let inputs = generate_input(12, &mut rng)?;

    println!("step    eps=0.0    eps=0.5    eps=0.9    eps=1.0");
    let rates = [0.0, 0.5, 0.9, 1.0];
    let mut columns = Vec::new();
    for &epsilon in &rates {
        let config = ReservoirConfig::new(
            epsilon,
            u0.clone(),
            u1.clone(),
            1,
            MeasurementMode::ExactExpectation,
            0,
        )?;
        columns.push(evolve_channel(&inputs, &config)?);
    }
    for k in 0..inputs.len() {
        print!("{:>4}", k + 1);
        for design in &columns {
            print!("   {:>8.4}", design.entry(k, 0));
        }
        println!();
    }
    println!("\nAt eps=1 the register is reset every step, so <Z> is pinned at 1;");
    println!("at eps=0 nothing is ever forgotten. Central rates trade the two off.");
    Ok(())
}
