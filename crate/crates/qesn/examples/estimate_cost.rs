//! Print the hardware cost of the measure-and-replay protocol for a few
//! experiment sizes: total circuit runs N_c*S*L and total evolution
//! applications N_c*S*L(L+1)/2.
//!
//! Run with: cargo run --example estimate_cost

use qesn::harness::estimate_cost;

fn main() -> qesn::Result<()> {
    println!("{:>4} {:>6} {:>6}   {:>16} {:>20}", "L", "N_c", "S", "circuit runs", "evolution steps");
    for (length, copies, shots) in [
        (30u64, 300u64, 4000u64),
        (60, 1024, 4000),
        (60, 300, 4000),
        (100, 1024, 8000),
    ] {
        let (runs, applications) = estimate_cost(length, copies, shots)?;
        println!("{length:>4} {copies:>6} {shots:>6}   {runs:>16} {applications:>20}");
    }
    println!("\nEach time step replays the whole prefix, hence the quadratic term.");
    Ok(())
}
