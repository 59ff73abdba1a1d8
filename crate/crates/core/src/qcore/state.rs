use nalgebra::SymmetricEigen;

use super::{dim_for, max_abs_diff, qubits_for_dim, CMatrix, CVector, Operator, C64, ONE, ZERO};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// A normalized pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    n_qubits: usize,
    amplitudes: CVector,
}

impl Ket {
    /// Wraps an amplitude vector, checking its length and unit norm.
    pub fn new(n_qubits: usize, amplitudes: CVector) -> Result<Self> {
        let dim = dim_for(n_qubits)?;
        if amplitudes.len() != dim {
            return Err(Error::domain(format!(
                "ket for {n_qubits} qubits needs {dim} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let norm_sqr = amplitudes.norm_squared();
        if (norm_sqr - 1.0).abs() > Tolerances::DEFAULT.density {
            return Err(Error::domain(format!(
                "ket is not normalized: squared norm {norm_sqr}"
            )));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Normalizes `amplitudes` before wrapping. Fails on the zero vector.
    pub fn normalized(n_qubits: usize, amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 {
            return Err(Error::domain("cannot normalize the zero vector"));
        }
        Self::new(n_qubits, amplitudes.unscale(norm))
    }

    /// The N-qubit GHZ state (|0...0> + |1...1>)/sqrt(2).
    pub fn ghz(n_qubits: usize) -> Result<Self> {
        let dim = dim_for(n_qubits)?;
        let a = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut amps = CVector::zeros(dim);
        amps[0] = a;
        amps[dim - 1] = a;
        Ok(Self {
            n_qubits,
            amplitudes: amps,
        })
    }

    /// Tensor product, `self` on the left (lower qubit numbers).
    pub fn tensor(&self, other: &Ket) -> Result<Ket> {
        let n_qubits = self.n_qubits + other.n_qubits;
        dim_for(n_qubits)?;
        Ok(Ket {
            n_qubits,
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// <self|other>
    pub fn inner(&self, other: &Ket) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// |self><self|
    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            n_qubits: self.n_qubits,
            elements: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }
}

/// The computational-basis state |n_z>. Bit `N-1-k` of `index` is qubit `k`.
pub fn computational_ket(index: usize, n_qubits: usize) -> Result<Ket> {
    let dim = dim_for(n_qubits)?;
    if index >= dim {
        return Err(Error::domain(format!(
            "basis index {index} out of range for {n_qubits} qubits"
        )));
    }
    let mut amps = CVector::zeros(dim);
    amps[index] = ONE;
    Ok(Ket {
        n_qubits,
        amplitudes: amps,
    })
}

/// The complementary-basis state |n_x>: each qubit is (|0> + (-1)^b |1>)/sqrt(2)
/// where `b` is that qubit's bit of `index`.
pub fn complementary_ket(index: usize, n_qubits: usize) -> Result<Ket> {
    let dim = dim_for(n_qubits)?;
    if index >= dim {
        return Err(Error::domain(format!(
            "basis index {index} out of range for {n_qubits} qubits"
        )));
    }
    // <m|n_x> = (-1)^{popcount(m & n)} / sqrt(2^N)
    let scale = (dim as f64).sqrt().recip();
    let amps = CVector::from_fn(dim, |m, _| {
        if (m & index).count_ones().is_multiple_of(2) {
            C64::new(scale, 0.0)
        } else {
            C64::new(-scale, 0.0)
        }
    });
    Ok(Ket {
        n_qubits,
        amplitudes: amps,
    })
}

/// A Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    elements: CMatrix,
}

impl DensityMatrix {
    /// Validates `elements` against the density-matrix invariants.
    pub fn new(n_qubits: usize, elements: CMatrix) -> Result<Self> {
        let dim = dim_for(n_qubits)?;
        if elements.shape() != (dim, dim) {
            return Err(Error::domain(format!(
                "density matrix for {n_qubits} qubits must be {dim}x{dim}, got {:?}",
                elements.shape()
            )));
        }
        let rho = Self {
            n_qubits,
            elements,
        };
        rho.validate(&Tolerances::DEFAULT)?;
        Ok(rho)
    }

    /// Builds from a square matrix, inferring the qubit count, without validation.
    pub(crate) fn from_matrix_unchecked(elements: CMatrix) -> Self {
        let n_qubits = qubits_for_dim(elements.nrows()).expect("power-of-two dimension");
        Self {
            n_qubits,
            elements,
        }
    }

    pub fn from_ket(ket: &Ket) -> Self {
        ket.projector()
    }

    /// I / 2^N
    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        let dim = dim_for(n_qubits)?;
        Ok(Self {
            n_qubits,
            elements: CMatrix::identity(dim, dim).unscale(dim as f64),
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

    pub fn trace(&self) -> C64 {
        self.elements.trace()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        max_abs_diff(&self.elements, &self.elements.adjoint())
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.elements + self.elements.adjoint()).unscale(2.0);
        SymmetricEigen::new(herm).eigenvalues.min()
    }

    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let herm = self.hermiticity_residual();
        if herm > tol.density {
            return Err(Error::domain(format!(
                "density matrix is not Hermitian (residual {herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr - ONE).norm() > tol.density {
            return Err(Error::domain(format!(
                "density matrix trace is {tr}, expected 1"
            )));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < tol.psd_floor {
            return Err(Error::domain(format!(
                "density matrix has negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(())
    }

    /// Tr(op * rho)
    pub fn expectation(&self, op: &Operator) -> Result<C64> {
        if op.dim() != self.dim() {
            return Err(Error::domain(format!(
                "operator dimension {} does not match state dimension {}",
                op.dim(),
                self.dim()
            )));
        }
        // Tr(A B) = sum_{r,c} A[r,c] B[c,r]
        let a = op.matrix();
        let b = &self.elements;
        let mut acc = ZERO;
        for r in 0..a.nrows() {
            for c in 0..a.ncols() {
                acc += a[(r, c)] * b[(c, r)];
            }
        }
        Ok(acc)
    }

    /// <psi|rho|psi>, the overlap with a pure state.
    pub fn overlap(&self, ket: &Ket) -> Result<f64> {
        if ket.dim() != self.dim() {
            return Err(Error::domain(format!(
                "ket dimension {} does not match state dimension {}",
                ket.dim(),
                self.dim()
            )));
        }
        let psi = ket.amplitudes();
        Ok(psi.dotc(&(&self.elements * psi)).re)
    }

    /// alpha * self + (1 - alpha) * other
    pub fn mix(&self, other: &DensityMatrix, alpha: f64) -> Result<DensityMatrix> {
        if other.dim() != self.dim() {
            return Err(Error::domain("cannot mix states of different dimension"));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::domain(format!("mixing weight {alpha} outside [0, 1]")));
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            elements: self.elements.scale(alpha) + other.elements.scale(1.0 - alpha),
        })
    }
}
