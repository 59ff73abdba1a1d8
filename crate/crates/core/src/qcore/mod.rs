//! Dense complex value types (kets, density matrices, operators) and the
//! gate-relative orthogonal error basis.
//!
//! Qubit ordering is fixed crate-wide: qubit 0 is the leftmost tensor factor
//! and the most significant bit of every state index and every error mask.
//! For `N` qubits, qubit `k` therefore lives at bit `N - 1 - k`.

mod basis;
mod operator;
mod state;

pub use basis::{
    build_error_basis, build_error_basis_with_limit, error_operator, single_qubit_error_factor,
    ErrorBasis, ErrorIndex,
};
#[cfg(test)]
pub(crate) use basis::phase_sign;
pub use operator::{GateSpec, Operator};
pub use state::{complementary_ket, computational_ket, DensityMatrix, Ket};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::MAX_DENSE_QUBITS;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Bit mask selecting `qubit` in an `n_qubits`-wide index.
#[inline]
pub fn qubit_bit(qubit: usize, n_qubits: usize) -> usize {
    debug_assert!(qubit < n_qubits);
    1 << (n_qubits - 1 - qubit)
}

/// Hilbert-space dimension 2^N, rejecting qubit counts that cannot be stored densely.
pub(crate) fn dim_for(n_qubits: usize) -> Result<usize> {
    if n_qubits == 0 {
        return Err(Error::domain("qubit count must be at least 1"));
    }
    if n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::Capacity {
            n_qubits,
            max: MAX_DENSE_QUBITS,
        });
    }
    Ok(1 << n_qubits)
}

/// Inverse of `dim_for`: the qubit count of a power-of-two dimension.
pub(crate) fn qubits_for_dim(dim: usize) -> Option<usize> {
    if dim >= 2 && dim.is_power_of_two() {
        Some(dim.trailing_zeros() as usize)
    } else {
        None
    }
}

/// Largest elementwise modulus of `a - b`. Shapes must agree.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
