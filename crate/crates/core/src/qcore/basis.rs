use serde::{Deserialize, Serialize};

use super::{dim_for, CMatrix, GateSpec, Operator, C64, ONE, ZERO};
use crate::error::{Error, Result};
use crate::tolerance::DEFAULT_MAX_QUBITS;

/// Location of phase (Z) and amplitude (X) errors as a pair of bit masks.
///
/// Masks follow the state-index convention: qubit `k` of `N` is bit `N-1-k`,
/// so a Z error on qubit 0 of two qubits is `phase_mask = 0b10`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ErrorIndex {
    pub phase_mask: usize,
    pub amp_mask: usize,
}

impl ErrorIndex {
    /// The error-free index (0, 0).
    pub const IDENTITY: ErrorIndex = ErrorIndex {
        phase_mask: 0,
        amp_mask: 0,
    };

    pub fn new(phase_mask: usize, amp_mask: usize, n_qubits: usize) -> Result<Self> {
        let idx = ErrorIndex {
            phase_mask,
            amp_mask,
        };
        idx.check(n_qubits)?;
        Ok(idx)
    }

    fn check(&self, n_qubits: usize) -> Result<()> {
        let dim = dim_for(n_qubits)?;
        if self.phase_mask >= dim || self.amp_mask >= dim {
            return Err(Error::domain(format!(
                "error masks ({}, {}) out of range for {n_qubits} qubits",
                self.phase_mask, self.amp_mask
            )));
        }
        Ok(())
    }

    /// Row/column position in the process matrix: `phase_mask * 2^N + amp_mask`.
    pub fn flat(&self, n_qubits: usize) -> usize {
        (self.phase_mask << n_qubits) | self.amp_mask
    }

    pub fn from_flat(flat: usize, n_qubits: usize) -> Self {
        ErrorIndex {
            phase_mask: flat >> n_qubits,
            amp_mask: flat & ((1 << n_qubits) - 1),
        }
    }

    /// All 4^N indices in flat order.
    pub fn all(n_qubits: usize) -> impl Iterator<Item = ErrorIndex> {
        (0..1usize << (2 * n_qubits)).map(move |f| ErrorIndex::from_flat(f, n_qubits))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

/// (-1)^{popcount(phase_mask & row)}: the diagonal of the phase-error product.
#[cfg(test)]
#[inline]
pub(crate) fn phase_sign(phase_mask: usize, row: usize) -> f64 {
    if (phase_mask & row).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Z^z X^x on one qubit. With both bits set this is ZX = iY = ((0, 1), (-1, 0)).
pub fn single_qubit_error_factor(z: bool, x: bool) -> Operator {
    let o = ZERO;
    let l = ONE;
    let m = match (z, x) {
        (false, false) => [l, o, o, l],
        (true, false) => [l, o, o, -l],
        (false, true) => [o, l, l, o],
        (true, true) => [o, l, -l, o],
    };
    Operator::new(1, CMatrix::from_row_slice(2, 2, &m)).expect("2x2 factor")
}

/// The error operator Pi_ij = Phi_i A_j, built as the tensor product of
/// per-qubit factors Z^{i_k} X^{j_k} with qubit 0 leftmost.
pub fn error_operator(idx: ErrorIndex, n_qubits: usize) -> Result<Operator> {
    idx.check(n_qubits)?;
    let mut acc: Option<Operator> = None;
    for qubit in 0..n_qubits {
        let bit = 1 << (n_qubits - 1 - qubit);
        let factor = single_qubit_error_factor(idx.phase_mask & bit != 0, idx.amp_mask & bit != 0);
        acc = Some(match acc {
            None => factor,
            Some(a) => a.kron(&factor)?,
        });
    }
    Ok(acc.expect("at least one qubit"))
}

/// The 4^N operators U_ij = U00 Pi_ij, stored densely in flat-index order.
#[derive(Debug, Clone)]
pub struct ErrorBasis {
    gate: GateSpec,
    operators: Vec<Operator>,
}

pub fn build_error_basis(gate: &GateSpec) -> Result<ErrorBasis> {
    build_error_basis_with_limit(gate, DEFAULT_MAX_QUBITS)
}

pub fn build_error_basis_with_limit(gate: &GateSpec, max_qubits: usize) -> Result<ErrorBasis> {
    let n = gate.n_qubits();
    if n > max_qubits {
        return Err(Error::Capacity {
            n_qubits: n,
            max: max_qubits,
        });
    }
    let operators = ErrorIndex::all(n)
        .map(|idx| {
            if idx.is_identity() {
                Ok(gate.unitary().clone())
            } else {
                Ok(gate.unitary() * &error_operator(idx, n)?)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorBasis {
        gate: gate.clone(),
        operators,
    })
}

impl ErrorBasis {
    pub fn gate(&self) -> &GateSpec {
        &self.gate
    }

    pub fn n_qubits(&self) -> usize {
        self.gate.n_qubits()
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn get(&self, idx: ErrorIndex) -> &Operator {
        &self.operators[idx.flat(self.n_qubits())]
    }

    pub fn iter(&self) -> impl Iterator<Item = (ErrorIndex, &Operator)> {
        let n = self.n_qubits();
        self.operators
            .iter()
            .enumerate()
            .map(move |(f, op)| (ErrorIndex::from_flat(f, n), op))
    }

    /// Gram matrix G[a][b] = Tr(U_a^dagger U_b) over all basis pairs.
    pub fn gram(&self) -> CMatrix {
        let d2 = self.gate.dim() * self.gate.dim();
        let cols: Vec<_> = self
            .operators
            .iter()
            .map(|op| nalgebra::DVector::from_column_slice(op.matrix().as_slice()))
            .collect();
        let stacked = CMatrix::from_fn(d2, cols.len(), |r, c| cols[c][r]);
        stacked.adjoint() * &stacked
    }

    /// max |Tr(U_a^dagger U_b) - 2^N delta_ab| over all pairs.
    pub fn orthogonality_residual(&self) -> f64 {
        let dim = self.gate.dim() as f64;
        let gram = self.gram();
        let mut worst: f64 = 0.0;
        for r in 0..gram.nrows() {
            for c in 0..gram.ncols() {
                let expected = if r == c { dim } else { 0.0 };
                worst = worst.max((gram[(r, c)] - C64::new(expected, 0.0)).norm());
            }
        }
        worst
    }

    /// Expansion coefficients Tr(U_a^dagger M) / 2^N in flat order.
    pub fn coefficients(&self, m: &Operator) -> Result<Vec<C64>> {
        if m.dim() != self.gate.dim() {
            return Err(Error::domain(format!(
                "operator dimension {} does not match basis dimension {}",
                m.dim(),
                self.gate.dim()
            )));
        }
        let dim = self.gate.dim() as f64;
        Ok(self
            .operators
            .iter()
            .map(|u| u.hs_inner(m) / dim)
            .collect())
    }

    /// sum_a coeffs[a] U_a
    pub fn reconstruct(&self, coeffs: &[C64]) -> Result<Operator> {
        if coeffs.len() != self.operators.len() {
            return Err(Error::domain(format!(
                "expected {} coefficients, got {}",
                self.operators.len(),
                coeffs.len()
            )));
        }
        let d = self.gate.dim();
        let mut acc = CMatrix::zeros(d, d);
        for (c, u) in coeffs.iter().zip(&self.operators) {
            acc += u.matrix() * *c;
        }
        Operator::new(self.n_qubits(), acc)
    }
}
