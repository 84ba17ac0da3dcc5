//! Unitary circuits: ordered gate lists, the line-based definition format
//! and the builtin reservoir circuits.
//!
//! Definition format, one gate per line:
//!
//! ```text
//! # comment
//! CNOT <control> <target>
//! RX <qubit> <angle-radians>
//! RY <qubit> <angle-radians>
//! RZ <qubit> <angle-radians>
//! ```

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{GateOp, StateVector};

/// An ordered list of gates acting on a fixed-width qubit register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitaryCircuit {
    num_qubits: usize,
    gates: Vec<GateOp>,
}

impl UnitaryCircuit {
    pub fn new(num_qubits: usize, gates: Vec<GateOp>) -> Result<UnitaryCircuit> {
        if num_qubits == 0 {
            return Err(Error::InvalidArgument("circuit needs at least one qubit".into()));
        }
        for gate in &gates {
            gate.validate(num_qubits)?;
        }
        Ok(UnitaryCircuit { num_qubits, gates })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    /// Parse the line-based definition format.
    pub fn parse(text: &str, num_qubits: usize) -> Result<UnitaryCircuit> {
        let mut gates = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::CircuitParse {
                line: lineno + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let gate = match fields[0].to_ascii_uppercase().as_str() {
                "CNOT" => {
                    if fields.len() != 3 {
                        return Err(parse_err("CNOT takes exactly two qubit indices".into()));
                    }
                    let control = parse_index(fields[1], &parse_err)?;
                    let target = parse_index(fields[2], &parse_err)?;
                    GateOp::Cnot { control, target }
                }
                kind @ ("RX" | "RY" | "RZ") => {
                    if fields.len() != 3 {
                        return Err(parse_err(format!("{kind} takes a qubit index and an angle")));
                    }
                    let qubit = parse_index(fields[1], &parse_err)?;
                    let angle: f64 = fields[2]
                        .parse()
                        .map_err(|_| parse_err(format!("bad angle literal `{}`", fields[2])))?;
                    match kind {
                        "RX" => GateOp::Rx { qubit, angle },
                        "RY" => GateOp::Ry { qubit, angle },
                        _ => GateOp::Rz { qubit, angle },
                    }
                }
                other => return Err(parse_err(format!("unknown gate `{other}`"))),
            };
            gates.push(gate);
        }
        UnitaryCircuit::new(num_qubits, gates)
    }

    /// Render back to the definition format.
    pub fn to_definition(&self) -> String {
        let mut out = String::new();
        for gate in &self.gates {
            match *gate {
                GateOp::Cnot { control, target } => {
                    out.push_str(&format!("CNOT {control} {target}\n"))
                }
                GateOp::Rx { qubit, angle } => out.push_str(&format!("RX {qubit} {angle}\n")),
                GateOp::Ry { qubit, angle } => out.push_str(&format!("RY {qubit} {angle}\n")),
                GateOp::Rz { qubit, angle } => out.push_str(&format!("RZ {qubit} {angle}\n")),
            }
        }
        out
    }

    /// Apply all gates in list order, returning the evolved state.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch(format!(
                "circuit acts on {} qubits, state has {}",
                self.num_qubits,
                state.num_qubits()
            )));
        }
        let mut out = state.clone();
        for gate in &self.gates {
            out.apply_gate_in_place(gate);
        }
        Ok(out)
    }

    /// The exact inverse circuit: reversed gate list with inverted gates.
    pub fn inverse(&self) -> UnitaryCircuit {
        UnitaryCircuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().rev().map(GateOp::inverse).collect(),
        }
    }

    /// Dense 2^N x 2^N matrix of the whole circuit; column j is U|j>.
    pub fn unitary_matrix(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.num_qubits;
        let mut matrix = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            let column = self
                .apply(&StateVector::basis(self.num_qubits, j))
                .expect("matching qubit counts by construction");
            for (i, amp) in column.amplitudes().iter().enumerate() {
                matrix[(i, j)] = *amp;
            }
        }
        matrix
    }
}

fn parse_index(field: &str, err: &dyn Fn(String) -> Error) -> Result<usize> {
    field
        .parse()
        .map_err(|_| err(format!("bad qubit index `{field}`")))
}

/// Names of the shipped reservoir circuits.
pub const BUILTIN_CIRCUITS: [&str; 6] = ["u0_3q", "u1_3q", "u0_5q", "u1_5q", "u0_7q", "u1_7q"];

/// Load one of the shipped circuit definitions by name.
pub fn builtin_circuit(name: &str) -> Result<UnitaryCircuit> {
    let (text, num_qubits) = match name {
        "u0_3q" => (include_str!("../circuits/u0_3q.txt"), 3),
        "u1_3q" => (include_str!("../circuits/u1_3q.txt"), 3),
        "u0_5q" => (include_str!("../circuits/u0_5q.txt"), 5),
        "u1_5q" => (include_str!("../circuits/u1_5q.txt"), 5),
        "u0_7q" => (include_str!("../circuits/u0_7q.txt"), 7),
        "u1_7q" => (include_str!("../circuits/u1_7q.txt"), 7),
        other => return Err(Error::UnknownCircuit(other.into())),
    };
    UnitaryCircuit::parse(text, num_qubits)
}

/// The shipped reservoir pair (U0, U1) for a supported qubit count.
pub fn builtin_reservoir_pair(num_qubits: usize) -> Result<(UnitaryCircuit, UnitaryCircuit)> {
    match num_qubits {
        3 | 5 | 7 => Ok((
            builtin_circuit(&format!("u0_{num_qubits}q"))?,
            builtin_circuit(&format!("u1_{num_qubits}q"))?,
        )),
        other => Err(Error::Config(format!(
            "no shipped circuits for {other} qubits (3, 5 and 7 are available)"
        ))),
    }
}
