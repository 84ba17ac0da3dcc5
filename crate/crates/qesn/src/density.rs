//! Density matrices and the Pauli-operator node basis.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::StateVector;

pub const TRACE_TOL: f64 = 1e-10;
pub const HERMITICITY_TOL: f64 = 1e-10;
pub const EIGENVALUE_TOL: f64 = 1e-9;

/// Mixed state of an N-qubit register as a 2^N x 2^N operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// The pure reset state |0><0|^{tensor N}.
    pub fn zero_state(num_qubits: usize) -> DensityMatrix {
        DensityMatrix::from_statevector(&StateVector::zero(num_qubits))
    }

    /// The outer product |psi><psi| of a pure state.
    pub fn from_statevector(state: &StateVector) -> DensityMatrix {
        let dim = state.dim();
        let amps = state.amplitudes();
        let entries =
            DMatrix::from_fn(dim, dim, |row, col| amps[row] * amps[col].conj());
        DensityMatrix {
            num_qubits: state.num_qubits(),
            entries,
        }
    }

    /// Wrap a raw matrix, checking shape, trace, Hermiticity and positivity.
    pub fn from_matrix(num_qubits: usize, entries: DMatrix<Complex64>) -> Result<DensityMatrix> {
        let dim = 1usize << num_qubits;
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {dim}x{dim} matrix for {num_qubits} qubits, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let rho = DensityMatrix {
            num_qubits,
            entries,
        };
        rho.check_valid()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(
        num_qubits: usize,
        entries: DMatrix<Complex64>,
    ) -> DensityMatrix {
        DensityMatrix {
            num_qubits,
            entries,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.entries - self.entries.adjoint()).norm()
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let hermitian = (&self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0);
        let eigen = nalgebra::SymmetricEigen::new(hermitian);
        eigen
            .eigenvalues
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn check_valid(&self) -> Result<()> {
        let trace = self.trace();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidArgument(format!(
                "density matrix trace {trace} is not 1"
            )));
        }
        if self.hermiticity_defect() > HERMITICITY_TOL {
            return Err(Error::InvalidArgument(
                "density matrix is not Hermitian".into(),
            ));
        }
        if self.min_eigenvalue() < -EIGENVALUE_TOL {
            return Err(Error::InvalidArgument(
                "density matrix has a negative eigenvalue".into(),
            ));
        }
        Ok(())
    }

    /// Purity Tr(rho^2).
    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    /// Tr(Z_qubit rho), read off the diagonal.
    pub fn expect_z(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitIndex {
                index: qubit,
                num_qubits: self.num_qubits,
            });
        }
        let shift = self.num_qubits - 1 - qubit;
        let mut value = 0.0;
        for index in 0..self.dim() {
            let sign = if (index >> shift) & 1 == 0 { 1.0 } else { -1.0 };
            value += sign * self.entries[(index, index)].re;
        }
        Ok(value)
    }

    /// The dominant eigenvector as a pure state; errors unless the matrix is
    /// rank one (purity 1 within tolerance).
    pub fn as_pure_state(&self) -> Result<StateVector> {
        if (self.purity() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(
                "density matrix is not a pure state".into(),
            ));
        }
        // Rank one: any nonzero column is proportional to the state.
        let (col_index, _) = (0..self.dim())
            .map(|j| (j, self.entries.column(j).norm()))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        let column = self.entries.column(col_index);
        let norm = column.norm();
        let amps: Vec<Complex64> = column.iter().map(|a| a / norm).collect();
        StateVector::from_amplitudes(self.num_qubits, amps)
    }
}

/// One of the single-qubit Pauli operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let zero = Complex64::ZERO;
        let one = Complex64::ONE;
        let i = Complex64::I;
        match self {
            Pauli::I => DMatrix::from_row_slice(2, 2, &[one, zero, zero, one]),
            Pauli::X => DMatrix::from_row_slice(2, 2, &[zero, one, one, zero]),
            Pauli::Y => DMatrix::from_row_slice(2, 2, &[zero, -i, i, zero]),
            Pauli::Z => DMatrix::from_row_slice(2, 2, &[one, zero, zero, -one]),
        }
    }
}

/// A tensor product of single-qubit Paulis, one letter per qubit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> PauliString {
        assert!(!letters.is_empty(), "need at least one letter");
        PauliString { letters }
    }

    pub fn identity(num_qubits: usize) -> PauliString {
        PauliString::new(vec![Pauli::I; num_qubits])
    }

    /// Z on one qubit, identity elsewhere.
    pub fn single_z(num_qubits: usize, qubit: usize) -> PauliString {
        let mut letters = vec![Pauli::I; num_qubits];
        letters[qubit] = Pauli::Z;
        PauliString::new(letters)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    /// Dense 2^N x 2^N matrix, qubit 0 as the leftmost factor.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let mut out = self.letters[0].matrix();
        for letter in &self.letters[1..] {
            out = out.kronecker(&letter.matrix());
        }
        out
    }

    /// All 4^N strings in lexicographic (I, X, Y, Z) order.
    pub fn all(num_qubits: usize) -> Vec<PauliString> {
        let mut out = Vec::with_capacity(4usize.pow(num_qubits as u32));
        let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
        for code in 0..4usize.pow(num_qubits as u32) {
            let mut string = Vec::with_capacity(num_qubits);
            let mut rest = code;
            for _ in 0..num_qubits {
                string.push(letters[rest % 4]);
                rest /= 4;
            }
            string.reverse();
            out.push(PauliString::new(string));
        }
        out
    }
}

/// Raw Pauli expectation Tr(P rho).
pub fn pauli_expectation(rho: &DensityMatrix, p: &PauliString) -> Result<f64> {
    if p.len() != rho.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "Pauli string length {} vs {} qubits",
            p.len(),
            rho.num_qubits()
        )));
    }
    let value = (p.matrix() * rho.entries()).trace();
    Ok(value.re)
}

/// Node coordinate x = 2^{-N} Tr(P rho).
pub fn pauli_node_value(rho: &DensityMatrix, p: &PauliString) -> Result<f64> {
    Ok(pauli_expectation(rho, p)? / (1u64 << rho.num_qubits()) as f64)
}
