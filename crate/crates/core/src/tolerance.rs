//! Numerical tolerances and capacity limits, kept in one place.

/// Default upper bound on the qubit count for anything that materializes the
/// 4^N-element error basis or the 4^N x 4^N process matrix.
pub const DEFAULT_MAX_QUBITS: usize = 6;

/// Hard limit for dense state vectors and operators (2^12 = 4096 amplitudes).
pub const MAX_DENSE_QUBITS: usize = 12;

/// Tolerances used by every validity check in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max elementwise deviation of U^dagger U from the identity.
    pub unitarity: f64,
    /// Max deviation of Tr(U_ij^dagger U_kl) from 2^N delta.
    pub orthogonality: f64,
    /// Hermiticity and unit-trace tolerance for density matrices.
    pub density: f64,
    /// Smallest admissible density-matrix eigenvalue.
    pub psd_floor: f64,
    /// Max elementwise residual of sum K^dagger K - I.
    pub trace_preservation: f64,
    /// Elementwise tolerance when rebuilding Kraus operators from chi coefficients.
    pub reconstruction: f64,
    /// Hermiticity / trace tolerance for process matrices.
    pub chi: f64,
    /// Smallest admissible process-matrix eigenvalue.
    pub chi_psd_floor: f64,
    /// Residual allowed between classical fidelities and chi diagonal sums.
    pub diagonal_identity: f64,
    /// Slack on the upper process-fidelity bound.
    pub bound_slack: f64,
    /// Chi entries below this magnitude serialize as exact zeros.
    pub chi_print_zero: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        unitarity: 1e-10,
        orthogonality: 1e-10,
        density: 1e-10,
        psd_floor: -1e-9,
        trace_preservation: 1e-9,
        reconstruction: 1e-9,
        chi: 1e-9,
        chi_psd_floor: -1e-8,
        diagonal_identity: 1e-8,
        bound_slack: 1e-9,
        chi_print_zero: 1e-14,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
