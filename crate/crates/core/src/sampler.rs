//! Finite-shot estimation of the classical fidelities.
//!
//! Each input index owns its own random stream: the ChaCha20 generator is
//! seeded with the basis sub-seed (`seed ^ Z_SEED_TAG` or `seed ^ X_SEED_TAG`)
//! and its stream id is set to the input index. Results therefore do not
//! depend on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::certify::{
    ghz_figures, transfer_probability, Basis, FidelityReport, Provenance, CAPABILITY_THRESHOLD,
    VIOLATION_THRESHOLD,
};
use crate::channel::{kraus_to_chi, process_fidelity, Channel};
use crate::error::{Error, Result};
use crate::qcore::GateSpec;

pub const Z_SEED_TAG: u64 = 0x5a5a_5a5a_5a5a_5a5a;
pub const X_SEED_TAG: u64 = 0xa5a5_a5a5_a5a5_a5a5;

/// Basis-specific seed derived from the user seed.
pub fn sub_seed(seed: u64, basis: Basis) -> u64 {
    match basis {
        Basis::Z => seed ^ Z_SEED_TAG,
        Basis::X => seed ^ X_SEED_TAG,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotPlan {
    pub shots_per_input: u64,
    pub seed: u64,
    pub basis: Basis,
}

/// Sampled classical fidelity of one basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityEstimate {
    pub basis: Basis,
    pub mean: f64,
    /// sqrt(p(1-p) / total shots), pooling every shot of the basis.
    pub std_error: f64,
    pub shots_per_input: u64,
    pub shots_total: u64,
    /// Successes per input index.
    pub per_input_counts: Vec<u64>,
}

/// Draws `shots_per_input` Bernoulli trials per input, with success
/// probability equal to the exact transfer probability.
pub fn sample_transfer(ch: &Channel, gate: &GateSpec, plan: &ShotPlan) -> Result<FidelityEstimate> {
    if plan.shots_per_input == 0 {
        return Err(Error::domain("at least one shot per input is required"));
    }
    let seed = sub_seed(plan.seed, plan.basis);
    let mut per_input_counts = Vec::with_capacity(gate.dim());
    for n in 0..gate.dim() {
        let p = transfer_probability(ch, gate, plan.basis, n)?.clamp(0.0, 1.0);
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(n as u64);
        let draws = Binomial::new(plan.shots_per_input, p)
            .map_err(|e| Error::domain(format!("invalid success probability {p}: {e}")))?;
        per_input_counts.push(draws.sample(&mut rng));
    }
    let shots_total = plan.shots_per_input * gate.dim() as u64;
    let successes: u64 = per_input_counts.iter().sum();
    let mean = successes as f64 / shots_total as f64;
    let std_error = (mean * (1.0 - mean) / shots_total as f64).sqrt();
    Ok(FidelityEstimate {
        basis: plan.basis,
        mean,
        std_error,
        shots_per_input: plan.shots_per_input,
        shots_total,
        per_input_counts,
    })
}

/// Distance of the sampled average fidelity from each certification
/// threshold, in units of its standard error. `None` when the standard
/// error is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdMargins {
    pub average_std_error: f64,
    pub capability_sigmas: Option<f64>,
    pub violation_sigmas: Option<f64>,
}

impl ThresholdMargins {
    pub fn new(z: &FidelityEstimate, x: &FidelityEstimate) -> Self {
        let avg = (z.mean + x.mean) / 2.0;
        let se = 0.5 * (z.std_error.powi(2) + x.std_error.powi(2)).sqrt();
        let sigmas = |threshold: f64| (se > 0.0).then(|| (avg - threshold) / se);
        Self {
            average_std_error: se,
            capability_sigmas: sigmas(CAPABILITY_THRESHOLD),
            violation_sigmas: sigmas(VIOLATION_THRESHOLD),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledReport {
    pub report: FidelityReport,
    pub z: FidelityEstimate,
    pub x: FidelityEstimate,
    pub margins: ThresholdMargins,
}

/// Certification from sampled Fz and Fx. Bounds and flags use the estimates;
/// the process fidelity and GHZ figures remain exact simulator values.
///
/// Near a threshold the flags depend on the seed.
pub fn sampled_report(ch: &Channel, gate: &GateSpec, shots_per_input: u64, seed: u64) -> Result<SampledReport> {
    let plan = |basis| ShotPlan {
        shots_per_input,
        seed,
        basis,
    };
    let z = sample_transfer(ch, gate, &plan(Basis::Z))?;
    let x = sample_transfer(ch, gate, &plan(Basis::X))?;
    let fp = process_fidelity(&kraus_to_chi(ch, gate)?);
    let ghz = ghz_figures(ch, gate)?;
    let report = FidelityReport::assemble(gate.n_qubits(), z.mean, x.mean, fp, ghz, Provenance::SAMPLED);
    let margins = ThresholdMargins::new(&z, &x);
    Ok(SampledReport {
        report,
        z,
        x,
        margins,
    })
}
