use std::ops::Mul;

use super::{dim_for, max_abs_diff, qubits_for_dim, CMatrix, CVector, Ket, C64};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// A square 2^N x 2^N complex matrix acting on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    n_qubits: usize,
    elements: CMatrix,
}

impl Operator {
    pub fn new(n_qubits: usize, elements: CMatrix) -> Result<Self> {
        let dim = dim_for(n_qubits)?;
        if elements.shape() != (dim, dim) {
            return Err(Error::domain(format!(
                "operator on {n_qubits} qubits must be {dim}x{dim}, got {}x{}",
                elements.nrows(),
                elements.ncols()
            )));
        }
        Ok(Self { n_qubits, elements })
    }

    /// Infers the qubit count from a square power-of-two matrix.
    pub fn from_matrix(elements: CMatrix) -> Result<Self> {
        if !elements.is_square() {
            return Err(Error::domain(format!(
                "operator must be square, got {}x{}",
                elements.nrows(),
                elements.ncols()
            )));
        }
        let n_qubits = qubits_for_dim(elements.nrows()).ok_or_else(|| {
            Error::domain(format!(
                "operator dimension {} is not a power of two >= 2",
                elements.nrows()
            ))
        })?;
        Self::new(n_qubits, elements)
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        let dim = dim_for(n_qubits)?;
        Ok(Self {
            n_qubits,
            elements: CMatrix::identity(dim, dim),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.elements
    }

    pub fn into_matrix(self) -> CMatrix {
        self.elements
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            n_qubits: self.n_qubits,
            elements: self.elements.adjoint(),
        }
    }

    /// `self * other`, failing on a dimension mismatch.
    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        if self.dim() != other.dim() {
            return Err(Error::domain(format!(
                "cannot compose operators of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(Operator {
            n_qubits: self.n_qubits,
            elements: &self.elements * &other.elements,
        })
    }

    /// Tensor product with `self` on the lower-numbered qubits.
    pub fn kron(&self, other: &Operator) -> Result<Operator> {
        let n_qubits = self.n_qubits + other.n_qubits;
        dim_for(n_qubits)?;
        Ok(Operator {
            n_qubits,
            elements: self.elements.kronecker(&other.elements),
        })
    }

    pub fn scale(&self, factor: C64) -> Operator {
        Operator {
            n_qubits: self.n_qubits,
            elements: &self.elements * factor,
        }
    }

    pub fn trace(&self) -> C64 {
        self.elements.trace()
    }

    /// Hilbert-Schmidt inner product Tr(self^dagger other).
    pub fn hs_inner(&self, other: &Operator) -> C64 {
        self.elements.dotc(&other.elements)
    }

    pub fn apply(&self, amplitudes: &CVector) -> CVector {
        &self.elements * amplitudes
    }

    /// max |U^dagger U - I|, elementwise.
    pub fn unitarity_residual(&self) -> f64 {
        let gram = self.elements.adjoint() * &self.elements;
        max_abs_diff(&gram, &CMatrix::identity(self.dim(), self.dim()))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        max_abs_diff(&self.elements, &other.elements)
    }
}

impl Mul<&Operator> for &Operator {
    type Output = Operator;

    /// Panics on a dimension mismatch; use [`Operator::compose`] to get an error instead.
    fn mul(self, rhs: &Operator) -> Operator {
        self.compose(rhs).expect("operator dimensions must agree")
    }
}

/// The ideal target unitary of a gate.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    n_qubits: usize,
    u00: Operator,
    name: Option<String>,
}

impl GateSpec {
    pub fn new(u00: Operator, name: Option<String>) -> Result<Self> {
        let residual = u00.unitarity_residual();
        if residual > Tolerances::DEFAULT.unitarity {
            return Err(Error::domain(format!(
                "gate matrix is not unitary (max |U^dag U - I| = {residual:e})"
            )));
        }
        Ok(Self {
            n_qubits: u00.n_qubits(),
            u00,
            name,
        })
    }

    pub fn from_matrix(matrix: CMatrix, name: Option<String>) -> Result<Self> {
        Self::new(Operator::from_matrix(matrix)?, name)
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::new(Operator::identity(n_qubits)?, Some("identity".into()))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.u00.dim()
    }

    pub fn unitary(&self) -> &Operator {
        &self.u00
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// U00 |ket>. The result stays normalized because U00 is unitary.
    pub fn apply(&self, ket: &Ket) -> Result<Ket> {
        if ket.dim() != self.dim() {
            return Err(Error::domain(format!(
                "ket dimension {} does not match gate dimension {}",
                ket.dim(),
                self.dim()
            )));
        }
        Ket::normalized(self.n_qubits, self.u00.apply(ket.amplitudes()))
    }
}
