//! Classical fidelities on the computational (Z) and complementary (X) input
//! bases, and what they certify about the quantum process.
//!
//! For any channel `E` and target gate `U00`:
//!
//! * `Fz` equals the total process-matrix weight of pure phase errors and
//!   `Fx` the weight of pure amplitude errors,
//! * `Fz + Fx - 1 <= F_process <= min(Fz, Fx)`,
//! * for the CNOT-chain gate, `(Fz + Fx) / 2 > 3/4` certifies that the gate
//!   can produce N-qubit GHZ entanglement, and at N = 3 `(Fz + Fx) / 2 > 7/8`
//!   certifies a violation of the GHZ (Mermin) local-realism bound `|K| <= 2`.
//!
//! None of these checks prepares an entangled input.

use serde::{Deserialize, Serialize};

use crate::channel::{apply, kraus_to_chi, process_fidelity, Channel, ChiMatrix};
use crate::error::{Error, Result};
use crate::qcore::{
    complementary_ket, computational_ket, CMatrix, DensityMatrix, GateSpec, Ket, Operator, C64,
    ONE, ZERO,
};
use crate::tolerance::Tolerances;

/// Average classical fidelity above which entanglement capability is certified.
pub const CAPABILITY_THRESHOLD: f64 = 0.75;
/// Average classical fidelity above which a GHZ local-realism violation is certified (N = 3).
pub const VIOLATION_THRESHOLD: f64 = 0.875;
/// Largest |<K_GHZ>| reachable by a local hidden-variable model.
pub const LOCAL_REALISM_BOUND: f64 = 2.0;

/// Which local input basis is prepared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Z,
    X,
}

impl Basis {
    /// The `index`-th input state of this basis.
    pub fn input(&self, index: usize, n_qubits: usize) -> Result<Ket> {
        match self {
            Basis::Z => computational_ket(index, n_qubits),
            Basis::X => complementary_ket(index, n_qubits),
        }
    }
}

/// Success probabilities p(out_n | in_n) for every input of one basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferTable {
    pub basis: Basis,
    pub probabilities: Vec<f64>,
}

impl TransferTable {
    pub fn fidelity(&self) -> f64 {
        self.probabilities.iter().sum::<f64>() / self.probabilities.len() as f64
    }
}

/// U00 |n_z> (Z) or U00 |n_x> (X) for all 2^N inputs.
pub fn ideal_outputs(gate: &GateSpec, basis: Basis) -> Result<Vec<Ket>> {
    (0..gate.dim())
        .map(|n| gate.apply(&basis.input(n, gate.n_qubits())?))
        .collect()
}

fn check_dims(ch: &Channel, gate: &GateSpec) -> Result<()> {
    if ch.dim() != gate.dim() {
        return Err(Error::domain(format!(
            "channel acts on {} qubits but the gate on {}",
            ch.n_qubits(),
            gate.n_qubits()
        )));
    }
    Ok(())
}

/// <out|E(|in><in|)|out> for a pure input and the ideal pure output,
/// evaluated as sum_m |<out|K_m|in>|^2.
fn pure_transfer(ch: &Channel, input: &Ket, output: &Ket) -> f64 {
    ch.kraus()
        .iter()
        .map(|k| output.amplitudes().dotc(&k.apply(input.amplitudes())).norm_sqr())
        .sum()
}

/// p(out_n | in_n) for one input index.
pub fn transfer_probability(ch: &Channel, gate: &GateSpec, basis: Basis, index: usize) -> Result<f64> {
    check_dims(ch, gate)?;
    let input = basis.input(index, gate.n_qubits())?;
    let output = gate.apply(&input)?;
    Ok(pure_transfer(ch, &input, &output))
}

/// The transfer table of one basis and its mean, the classical fidelity.
pub fn classical_fidelity(ch: &Channel, gate: &GateSpec, basis: Basis) -> Result<(TransferTable, f64)> {
    check_dims(ch, gate)?;
    let probabilities = (0..gate.dim())
        .map(|n| transfer_probability(ch, gate, basis, n))
        .collect::<Result<Vec<_>>>()?;
    let table = TransferTable {
        basis,
        probabilities,
    };
    let f = table.fidelity();
    Ok((table, f))
}

/// |Fz - sum_i chi_{i0,i0}| and |Fx - sum_j chi_{0j,0j}|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalResiduals {
    pub z: f64,
    pub x: f64,
}

impl DiagonalResiduals {
    pub fn from_chi(chi: &ChiMatrix, fz: f64, fx: f64) -> Self {
        Self {
            z: (fz - chi.phase_only_weight()).abs(),
            x: (fx - chi.amplitude_only_weight()).abs(),
        }
    }

    fn check(&self, tol: f64) -> Result<()> {
        if self.z > tol || self.x > tol {
            return Err(Error::Consistency(format!(
                "classical fidelities disagree with process-matrix diagonal sums \
                 (z residual {:e}, x residual {:e})",
                self.z, self.x
            )));
        }
        Ok(())
    }
}

/// Compares state-simulated classical fidelities with the process-matrix
/// diagonal sums; a breach is a consistency error.
pub fn verify_diagonal_identity(ch: &Channel, gate: &GateSpec) -> Result<DiagonalResiduals> {
    let (_, fz) = classical_fidelity(ch, gate, Basis::Z)?;
    let (_, fx) = classical_fidelity(ch, gate, Basis::X)?;
    let chi = kraus_to_chi(ch, gate)?;
    let residuals = DiagonalResiduals::from_chi(&chi, fz, fx);
    residuals.check(Tolerances::DEFAULT.diagonal_identity)?;
    Ok(residuals)
}

/// (Fz + Fx - 1, min(Fz, Fx)). The lower bound is not clamped at zero.
pub fn fidelity_bounds(fz: f64, fx: f64) -> (f64, f64) {
    (fz + fx - 1.0, fz.min(fx))
}

/// The CNOT chain |0><0| (x) I + |1><1| (x) X^(N-1): qubit 0 controls a flip of all others.
pub fn ghz_chain_gate(n_qubits: usize) -> Result<GateSpec> {
    if n_qubits < 2 {
        return Err(Error::domain(format!(
            "the GHZ chain needs at least 2 qubits, got {n_qubits}"
        )));
    }
    let dim = crate::qcore::dim_for(n_qubits)?;
    let control = dim >> 1;
    let targets = control - 1;
    let mut m = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let row = if col & control != 0 { col ^ targets } else { col };
        m[(row, col)] = ONE;
    }
    GateSpec::from_matrix(m, Some("ghz-chain".into()))
}

/// True when `gate` equals the GHZ chain on its qubit count.
pub fn is_ghz_chain(gate: &GateSpec) -> bool {
    gate.n_qubits() >= 2
        && ghz_chain_gate(gate.n_qubits())
            .map(|g| g.unitary().max_abs_diff(gate.unitary()) <= Tolerances::DEFAULT.unitarity)
            .unwrap_or(false)
}

/// |0_x, 0_z, ..., 0_z>, the product input that the GHZ chain entangles.
pub fn entangling_input(n_qubits: usize) -> Result<Ket> {
    let plus = complementary_ket(0, 1)?;
    if n_qubits == 1 {
        return Ok(plus);
    }
    plus.tensor(&computational_ket(0, n_qubits - 1)?)
}

/// (2 Fz + 2 Fx - 3, (Fz + Fx)/2 > 3/4)
pub fn capability_bound(fz: f64, fx: f64) -> (f64, bool) {
    (2.0 * fz + 2.0 * fx - 3.0, (fz + fx) / 2.0 > CAPABILITY_THRESHOLD)
}

/// (Fz + Fx)/2 > 7/8
pub fn violation_certified(fz: f64, fx: f64) -> bool {
    (fz + fx) / 2.0 > VIOLATION_THRESHOLD
}

fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

fn pauli_y() -> CMatrix {
    let i = C64::new(0.0, 1.0);
    CMatrix::from_row_slice(2, 2, &[ZERO, -i, i, ZERO])
}

/// K = XXX - XYY - YXY - YYX on three qubits.
pub fn mermin_operator() -> Operator {
    let (x, y) = (pauli_x(), pauli_y());
    let k3 = |a: &CMatrix, b: &CMatrix, c: &CMatrix| a.kronecker(b).kronecker(c);
    let k = k3(&x, &x, &x) - k3(&x, &y, &y) - k3(&y, &x, &y) - k3(&y, &y, &x);
    Operator::new(3, k).expect("8x8 operator")
}

/// Tr(K rho) for the three-qubit GHZ correlation K.
pub fn ghz_correlation(rho: &DensityMatrix) -> Result<f64> {
    if rho.n_qubits() != 3 {
        return Err(Error::domain(format!(
            "the GHZ correlation is defined for 3 qubits, got {}",
            rho.n_qubits()
        )));
    }
    let value = rho.expectation(&mermin_operator())?;
    debug_assert!(value.im.abs() < 1e-9, "Tr(K rho) = {value}");
    Ok(value.re)
}

/// 8 F_process - 4: the smallest |<K>| compatible with a process fidelity,
/// assuming every error flips the sign of K. Local realism is violated once
/// this exceeds 2, i.e. for F_process > 3/4.
pub fn ghz_floor(f_process: f64) -> f64 {
    8.0 * f_process - 4.0
}

/// Where each fidelity figure in a report came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Exact,
    Sampled,
    /// Known to the simulator but not observable by an experimenter.
    SimulatorGroundTruth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub fz: Source,
    pub fx: Source,
    pub f_process_exact: Source,
    pub ghz: Source,
}

impl Provenance {
    pub const EXACT: Provenance = Provenance {
        fz: Source::Exact,
        fx: Source::Exact,
        f_process_exact: Source::SimulatorGroundTruth,
        ghz: Source::SimulatorGroundTruth,
    };

    pub const SAMPLED: Provenance = Provenance {
        fz: Source::Sampled,
        fx: Source::Sampled,
        f_process_exact: Source::SimulatorGroundTruth,
        ghz: Source::SimulatorGroundTruth,
    };

    pub fn is_sampled(&self) -> bool {
        self.fz == Source::Sampled || self.fx == Source::Sampled
    }
}

/// Everything the two classical fidelities say about a gate, next to the
/// simulator's ground truth for comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub n_qubits: usize,
    pub fz: f64,
    pub fx: f64,
    /// chi_{00,00} from the known channel.
    pub f_process_exact: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub capability_bound: f64,
    pub capability_certified: bool,
    /// GHZ-state overlap of the output for the entangling input (GHZ-chain gates only).
    pub ghz_state_fidelity: Option<f64>,
    /// <K_GHZ> on that output (three-qubit GHZ chain only).
    pub ghz_expectation: Option<f64>,
    /// 8 F_process - 4 (three-qubit GHZ chain only).
    pub ghz_floor: Option<f64>,
    pub violation_certified: bool,
    pub provenance: Provenance,
}

/// Output-state figures of the GHZ chain, computed from the channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhzFigures {
    pub state_fidelity: f64,
    pub expectation: Option<f64>,
}

/// Runs the entangling input through `ch` and measures GHZ overlap and,
/// at N = 3, the GHZ correlation. `None` unless `gate` is the GHZ chain.
pub fn ghz_figures(ch: &Channel, gate: &GateSpec) -> Result<Option<GhzFigures>> {
    check_dims(ch, gate)?;
    if !is_ghz_chain(gate) {
        return Ok(None);
    }
    let n = gate.n_qubits();
    let out = apply(ch, &entangling_input(n)?.projector())?;
    let state_fidelity = out.overlap(&Ket::ghz(n)?)?;
    let expectation = if n == 3 {
        Some(ghz_correlation(&out)?)
    } else {
        None
    };
    Ok(Some(GhzFigures {
        state_fidelity,
        expectation,
    }))
}

impl FidelityReport {
    /// Derives bounds and flags from the two classical fidelities.
    pub fn assemble(
        n_qubits: usize,
        fz: f64,
        fx: f64,
        f_process_exact: f64,
        ghz: Option<GhzFigures>,
        provenance: Provenance,
    ) -> Self {
        let (lower_bound, upper_bound) = fidelity_bounds(fz, fx);
        let (capability_bound, capability_certified) = capability_bound(fz, fx);
        let ghz_expectation = ghz.and_then(|g| g.expectation);
        Self {
            n_qubits,
            fz,
            fx,
            f_process_exact,
            lower_bound,
            upper_bound,
            capability_bound,
            capability_certified,
            ghz_state_fidelity: ghz.map(|g| g.state_fidelity),
            ghz_expectation,
            ghz_floor: ghz_expectation.map(|_| ghz_floor(f_process_exact)),
            violation_certified: violation_certified(fz, fx),
            provenance,
        }
    }

    pub fn average_fidelity(&self) -> f64 {
        (self.fz + self.fx) / 2.0
    }
}

/// Exact certification of `ch` against `gate`.
///
/// Fails with [`Error::Consistency`] if the diagonal-sum identities or the
/// bound sandwich do not hold numerically.
pub fn certify(ch: &Channel, gate: &GateSpec) -> Result<FidelityReport> {
    let (report, _) = certify_with_chi(ch, gate)?;
    Ok(report)
}

/// [`certify`], also returning the process matrix it computed.
pub fn certify_with_chi(ch: &Channel, gate: &GateSpec) -> Result<(FidelityReport, ChiMatrix)> {
    let tol = Tolerances::DEFAULT;
    let (_, fz) = classical_fidelity(ch, gate, Basis::Z)?;
    let (_, fx) = classical_fidelity(ch, gate, Basis::X)?;
    let chi = kraus_to_chi(ch, gate)?;
    DiagonalResiduals::from_chi(&chi, fz, fx).check(tol.diagonal_identity)?;
    let fp = process_fidelity(&chi);
    let (lower, upper) = fidelity_bounds(fz, fx);
    if lower > fp + tol.bound_slack || fp > upper + tol.bound_slack {
        return Err(Error::Consistency(format!(
            "process fidelity {fp} outside [{lower}, {upper}]"
        )));
    }
    let ghz = ghz_figures(ch, gate)?;
    let report = FidelityReport::assemble(gate.n_qubits(), fz, fx, fp, ghz, Provenance::EXACT);
    Ok((report, chi))
}
