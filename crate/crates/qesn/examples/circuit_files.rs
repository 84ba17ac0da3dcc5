//! Show the shipped reservoir circuit pairs and the line-based definition
//! format, then parse a custom circuit from text and verify it is unitary.
//!
//! Run with: cargo run --example circuit_files

use nalgebra::DMatrix;
use num_complex::Complex64;
use qesn::{builtin_reservoir_pair, UnitaryCircuit};

fn main() -> qesn::Result<()> {
    for qubits in [3usize, 5, 7] {
        let (u0, u1) = builtin_reservoir_pair(qubits)?;
        println!(
            "{qubits} qubits: U0 has {} gates, U1 has {} gates",
            u0.gates().len(),
            u1.gates().len()
        );
    }

    let text = "\
# swap-like toy circuit
CNOT 0 1
CNOT 1 0
CNOT 0 1
RX 0 1.5708
RZ 1 -0.785
";
    let circuit = UnitaryCircuit::parse(text, 2)?;
    println!("\nparsed custom circuit:\n{}", circuit.to_definition());

    let u = circuit.unitary_matrix();
    let gram = u.adjoint() * &u;
    let eye = DMatrix::<Complex64>::identity(4, 4);
    println!("unitarity defect: {:.3e}", (gram - eye).norm());
    Ok(())
}
