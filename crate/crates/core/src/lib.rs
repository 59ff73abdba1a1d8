//! Certify noisy multi-qubit gates from two classical fidelities.
//!
//! Preparing every computational-basis input (Z) and every complementary
//! product input (X) of an N-qubit gate, and checking how often the ideal
//! output comes out, gives two classical fidelities `Fz` and `Fx`. These
//! bound the quantum process fidelity,
//!
//! ```text
//! Fz + Fx - 1  <=  F_process  <=  min(Fz, Fx)
//! ```
//!
//! and for the CNOT-chain gate certify GHZ entanglement capability
//! (`(Fz + Fx)/2 > 3/4`) and, at three qubits, a GHZ local-realism violation
//! (`(Fz + Fx)/2 > 7/8`), all without preparing an entangled input.
//!
//! Modules:
//!
//! * [`qcore`]: kets, density matrices, operators, the error basis `U00 Pi_ij`.
//! * [`channel`]: Kraus channels and their process matrix.
//! * [`noise`]: depolarizing / dephasing / bit-flip families and random CPTP maps.
//! * [`certify`]: classical fidelities, bounds and certification flags.
//! * [`sampler`]: finite-shot estimates of `Fz` and `Fx`.
//! * [`cli`]: the `qgate-cert` command line and its JSON report.
//!
//! ```
//! use qgate_cert::{certify, ghz_chain_gate, noisy_gate, NoiseSpec};
//!
//! let gate = ghz_chain_gate(3).unwrap();
//! let channel = noisy_gate(&gate, &NoiseSpec::depolarizing(0.1)).unwrap();
//! let report = certify(&channel, &gate).unwrap();
//! assert!(report.lower_bound <= report.f_process_exact);
//! assert!(report.violation_certified);
//! ```

pub mod certify;
pub mod channel;
pub mod cli;
pub mod error;
pub mod noise;
pub mod qcore;
pub mod sampler;
pub mod tolerance;

pub use certify::{
    certify, classical_fidelity, ghz_chain_gate, Basis, FidelityReport, TransferTable,
};
pub use channel::{kraus_to_chi, process_fidelity, Channel, ChiMatrix};
pub use error::{Error, Result};
pub use noise::{make_noise, noisy_gate, random_cptp, NoiseKind, NoiseSpec};
pub use qcore::{DensityMatrix, ErrorBasis, ErrorIndex, GateSpec, Ket, Operator};
pub use sampler::{sampled_report, FidelityEstimate, ShotPlan};
pub use tolerance::Tolerances;
