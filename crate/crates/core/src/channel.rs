//! Kraus-form channels and their process matrix relative to a target gate.
//!
//! The process matrix is indexed by flattened error indices
//! `phase_mask * 2^N + amp_mask` on both axes, so entry `(a, b)` is
//! `chi_{ij,kl}` with `a = i*2^N + j` and `b = k*2^N + l`.

use std::collections::BTreeMap;

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::qcore::{
    max_abs_diff, CMatrix, DensityMatrix, ErrorBasis, ErrorIndex, GateSpec,
    Operator, C64, ONE, ZERO,
};
use crate::tolerance::{Tolerances, DEFAULT_MAX_QUBITS};

/// A completely positive map in Kraus form, rho -> sum_m K_m rho K_m^dagger.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    n_qubits: usize,
    kraus: Vec<Operator>,
}

impl Channel {
    /// Builds a channel and checks trace preservation at the default tolerance.
    pub fn new(kraus: Vec<Operator>) -> Result<Self> {
        let ch = Self::unvalidated(kraus)?;
        let report = validate_channel(&ch);
        if !report.passed {
            return Err(Error::domain(format!(
                "Kraus operators are not trace preserving (residual {:e})",
                report.trace_residual
            )));
        }
        Ok(ch)
    }

    /// Builds a channel checking only shapes and the Kraus count, so that
    /// [`validate_channel`] can diagnose it.
    pub fn unvalidated(kraus: Vec<Operator>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::domain("a channel needs at least one Kraus operator"))?;
        let n_qubits = first.n_qubits();
        if let Some(bad) = kraus.iter().find(|k| k.n_qubits() != n_qubits) {
            return Err(Error::domain(format!(
                "Kraus operators act on {} and {} qubits",
                n_qubits,
                bad.n_qubits()
            )));
        }
        let max_rank = 1usize << (2 * n_qubits);
        if kraus.len() > max_rank {
            return Err(Error::domain(format!(
                "{} Kraus operators exceeds the maximum of {max_rank} for {n_qubits} qubits",
                kraus.len()
            )));
        }
        Ok(Self { n_qubits, kraus })
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        Ok(Self {
            n_qubits,
            kraus: vec![Operator::identity(n_qubits)?],
        })
    }

    /// The noiseless channel of a gate.
    pub fn unitary(gate: &GateSpec) -> Self {
        Self {
            n_qubits: gate.n_qubits(),
            kraus: vec![gate.unitary().clone()],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn kraus(&self) -> &[Operator] {
        &self.kraus
    }

    pub fn rank(&self) -> usize {
        self.kraus.len()
    }

    /// E(rho)
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        apply(self, rho)
    }
}

/// E(rho) = sum_m K_m rho K_m^dagger
pub fn apply(ch: &Channel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != ch.dim() {
        return Err(Error::domain(format!(
            "state dimension {} does not match channel dimension {}",
            rho.dim(),
            ch.dim()
        )));
    }
    let d = ch.dim();
    let mut out = CMatrix::zeros(d, d);
    for k in &ch.kraus {
        let km = k.matrix();
        out += km * rho.matrix() * km.adjoint();
    }
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

/// Outcome of [`validate_channel`].
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelValidation {
    /// max |sum_m K_m^dagger K_m - I|, elementwise.
    pub trace_residual: f64,
    pub kraus_dims: Vec<usize>,
    pub passed: bool,
}

pub fn validate_channel(ch: &Channel) -> ChannelValidation {
    let d = ch.dim();
    let kraus_dims: Vec<usize> = ch.kraus.iter().map(|k| k.dim()).collect();
    let dims_ok = kraus_dims.iter().all(|&k| k == d);
    let trace_residual = if dims_ok {
        let mut sum = CMatrix::zeros(d, d);
        for k in &ch.kraus {
            sum += k.matrix().adjoint() * k.matrix();
        }
        max_abs_diff(&sum, &CMatrix::identity(d, d))
    } else {
        f64::INFINITY
    };
    ChannelValidation {
        trace_residual,
        passed: dims_ok && trace_residual <= Tolerances::DEFAULT.trace_preservation,
        kraus_dims,
    }
}

/// In-place unnormalized Walsh-Hadamard transform:
/// out[i] = sum_r (-1)^{popcount(i & r)} in[r].
fn walsh_hadamard(v: &mut [C64]) {
    let n = v.len();
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for r in block..block + h {
                let (a, b) = (v[r], v[r + h]);
                v[r] = a + b;
                v[r + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Coefficients Tr(Pi_ij^dagger M) / 2^N for every error index, flat order.
///
/// Pi_ij has one nonzero per column: Pi_ij |m> = s |m ^ j> with
/// s = (-1)^{popcount(i & (m ^ j))}. For fixed j the sum over columns is a
/// Walsh-Hadamard transform of the j-th "XOR diagonal" of M.
pub(crate) fn pauli_coefficients(m: &CMatrix, n_qubits: usize) -> Vec<C64> {
    let d = 1usize << n_qubits;
    let norm = d as f64;
    let mut out = vec![ZERO; d * d];
    let mut diag = vec![ZERO; d];
    for j in 0..d {
        for (row, slot) in diag.iter_mut().enumerate() {
            *slot = m[(row, row ^ j)];
        }
        walsh_hadamard(&mut diag);
        for (i, c) in diag.iter().enumerate() {
            out[(i << n_qubits) | j] = c / norm;
        }
    }
    out
}

/// Inverse of [`pauli_coefficients`]: sum_ij c_ij Pi_ij.
pub(crate) fn pauli_combination(coeffs: &[C64], n_qubits: usize) -> CMatrix {
    let d = 1usize << n_qubits;
    let mut out = CMatrix::zeros(d, d);
    let mut diag = vec![ZERO; d];
    for j in 0..d {
        for (i, slot) in diag.iter_mut().enumerate() {
            *slot = coeffs[(i << n_qubits) | j];
        }
        walsh_hadamard(&mut diag);
        for (row, v) in diag.iter().enumerate() {
            out[(row, row ^ j)] = *v;
        }
    }
    out
}

/// The process matrix chi of a channel, relative to the gate that defines
/// the error basis U_ij = U00 Pi_ij.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix {
    gate: GateSpec,
    entries: CMatrix,
}

/// Expands each Kraus operator in the gate-relative error basis and sums the
/// outer products of the coefficient vectors.
pub fn kraus_to_chi(ch: &Channel, gate: &GateSpec) -> Result<ChiMatrix> {
    kraus_to_chi_with_limit(ch, gate, DEFAULT_MAX_QUBITS)
}

pub fn kraus_to_chi_with_limit(
    ch: &Channel,
    gate: &GateSpec,
    max_qubits: usize,
) -> Result<ChiMatrix> {
    if ch.dim() != gate.dim() {
        return Err(Error::domain(format!(
            "channel acts on {} qubits but the gate on {}",
            ch.n_qubits(),
            gate.n_qubits()
        )));
    }
    let n = gate.n_qubits();
    if n > max_qubits {
        return Err(Error::Capacity {
            n_qubits: n,
            max: max_qubits,
        });
    }
    let tol = Tolerances::DEFAULT.reconstruction;
    let u = gate.unitary().matrix();
    let u_adj = u.adjoint();
    let n_basis = 1usize << (2 * n);
    let mut coeffs = CMatrix::zeros(ch.rank(), n_basis);
    for (m, k) in ch.kraus.iter().enumerate() {
        let rel = &u_adj * k.matrix();
        let c = pauli_coefficients(&rel, n);
        let rebuilt = u * pauli_combination(&c, n);
        let residual = max_abs_diff(&rebuilt, k.matrix());
        if residual > tol {
            return Err(Error::Consistency(format!(
                "Kraus operator {m} not reconstructed from its error-basis expansion \
                 (residual {residual:e})"
            )));
        }
        for (a, v) in c.into_iter().enumerate() {
            coeffs[(m, a)] = v;
        }
    }
    // chi_ab = sum_m c_{m,a} conj(c_{m,b})
    let entries = coeffs.transpose() * coeffs.conjugate();
    Ok(ChiMatrix {
        gate: gate.clone(),
        entries,
    })
}

/// chi_{00,00}
pub fn process_fidelity(chi: &ChiMatrix) -> f64 {
    chi.entries[(0, 0)].re
}

/// The diagonal of chi, read as the probability of each error.
pub fn error_probabilities(chi: &ChiMatrix) -> BTreeMap<ErrorIndex, f64> {
    let n = chi.n_qubits();
    (0..chi.entries.nrows())
        .map(|a| (ErrorIndex::from_flat(a, n), chi.entries[(a, a)].re))
        .collect()
}

/// Diagnostics for the process-matrix invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiValidation {
    pub hermiticity_residual: f64,
    pub trace: C64,
    pub min_diagonal: f64,
    pub max_diagonal: f64,
    pub min_eigenvalue: f64,
    pub passed: bool,
}

impl ChiMatrix {
    pub fn gate(&self) -> &GateSpec {
        &self.gate
    }

    pub fn n_qubits(&self) -> usize {
        self.gate.n_qubits()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// chi_{ij,kl}
    pub fn entry(&self, row: ErrorIndex, col: ErrorIndex) -> C64 {
        let n = self.n_qubits();
        self.entries[(row.flat(n), col.flat(n))]
    }

    /// Real part of chi_{ij,ij}.
    pub fn diagonal(&self, idx: ErrorIndex) -> f64 {
        self.entry(idx, idx).re
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    /// sum_i chi_{i0,i0}: weight of the errors that are pure phase errors.
    pub fn phase_only_weight(&self) -> f64 {
        let n = self.n_qubits();
        (0..1usize << n)
            .map(|i| self.entries[(i << n, i << n)].re)
            .sum()
    }

    /// sum_j chi_{0j,0j}: weight of the errors that are pure amplitude errors.
    pub fn amplitude_only_weight(&self) -> f64 {
        (0..1usize << self.n_qubits())
            .map(|j| self.entries[(j, j)].re)
            .sum()
    }

    pub fn validate(&self, tol: &Tolerances) -> ChiValidation {
        let hermiticity_residual = max_abs_diff(&self.entries, &self.entries.adjoint());
        let diag: Vec<f64> = (0..self.entries.nrows())
            .map(|a| self.entries[(a, a)].re)
            .collect();
        let min_diagonal = diag.iter().copied().fold(f64::INFINITY, f64::min);
        let max_diagonal = diag.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let herm = (&self.entries + self.entries.adjoint()).unscale(2.0);
        let min_eigenvalue = SymmetricEigen::new(herm).eigenvalues.min();
        let trace = self.trace();
        let imag_diag = (0..self.entries.nrows())
            .map(|a| self.entries[(a, a)].im.abs())
            .fold(0.0, f64::max);
        let passed = hermiticity_residual <= tol.chi
            && imag_diag <= tol.chi
            && min_diagonal >= -tol.chi
            && max_diagonal <= 1.0 + tol.chi
            && (trace - ONE).norm() <= tol.chi
            && min_eigenvalue >= tol.chi_psd_floor;
        ChiValidation {
            hermiticity_residual,
            trace,
            min_diagonal,
            max_diagonal,
            min_eigenvalue,
            passed,
        }
    }

    /// E(rho) = sum_{ab} chi_ab U_a rho U_b^dagger, evaluated as
    /// sum_a U_a rho W_a^dagger with W_a = sum_b conj(chi_ab) U_b.
    pub fn apply(&self, basis: &ErrorBasis, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if basis.gate().dim() != self.gate.dim() || rho.dim() != self.gate.dim() {
            return Err(Error::domain("basis, state and process matrix dimensions differ"));
        }
        let d = self.gate.dim();
        let ops: Vec<&Operator> = basis.iter().map(|(_, u)| u).collect();
        let mut out = CMatrix::zeros(d, d);
        for (a, ua) in ops.iter().enumerate() {
            let mut w = CMatrix::zeros(d, d);
            for (b, ub) in ops.iter().enumerate() {
                let c = self.entries[(a, b)];
                if c != ZERO {
                    w += ub.matrix() * c.conj();
                }
            }
            out += ua.matrix() * rho.matrix() * w.adjoint();
        }
        Ok(DensityMatrix::from_matrix_unchecked(out))
    }

    /// Row-major nested `[re, im]` pairs; magnitudes below `zero_below` become 0.
    pub fn to_pairs(&self, zero_below: f64) -> Vec<Vec<[f64; 2]>> {
        (0..self.entries.nrows())
            .map(|r| {
                (0..self.entries.ncols())
                    .map(|c| {
                        let z = self.entries[(r, c)];
                        if z.norm() < zero_below {
                            [0.0, 0.0]
                        } else {
                            [z.re, z.im]
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Direct O(8^N) evaluation of the error-basis coefficients.
#[cfg(test)]
fn dense_coefficients(m: &CMatrix, n_qubits: usize) -> Vec<C64> {
    let d = 1usize << n_qubits;
    let mut out = vec![ZERO; d * d];
    for i in 0..d {
        for j in 0..d {
            let mut acc = ZERO;
            for col in 0..d {
                let row = col ^ j;
                acc += m[(row, col)] * crate::qcore::phase_sign(i, row);
            }
            out[(i << n_qubits) | j] = acc / d as f64;
        }
    }
    out
}
