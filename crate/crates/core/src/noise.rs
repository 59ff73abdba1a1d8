//! Noise families composed after an ideal gate, plus seeded random channels
//! and states for property testing.

use std::fmt;
use std::str::FromStr;

use nalgebra::linalg::QR;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::qcore::{
    dim_for, error_operator, CMatrix, DensityMatrix, ErrorIndex, GateSpec, Operator, C64,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    /// (1 - p) rho + p I / 2^N
    DepolarizingGlobal,
    /// Independent {sqrt(1-p) I, sqrt(p) Z} on every qubit.
    DephasingPerQubit,
    /// Independent {sqrt(1-p) I, sqrt(p) X} on every qubit.
    BitflipPerQubit,
    /// Same channel as `DephasingPerQubit`.
    PhaseflipPerQubit,
    /// Seeded random CPTP map of a given Kraus rank.
    RandomCptp,
}

impl NoiseKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            NoiseKind::DepolarizingGlobal => "depolarizing_global",
            NoiseKind::DephasingPerQubit => "dephasing_per_qubit",
            NoiseKind::BitflipPerQubit => "bitflip_per_qubit",
            NoiseKind::PhaseflipPerQubit => "phaseflip_per_qubit",
            NoiseKind::RandomCptp => "random_cptp",
        }
    }

    /// The four strength-parameterized families.
    pub const NAMED: [NoiseKind; 4] = [
        NoiseKind::DepolarizingGlobal,
        NoiseKind::DephasingPerQubit,
        NoiseKind::BitflipPerQubit,
        NoiseKind::PhaseflipPerQubit,
    ];
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            NoiseKind::DepolarizingGlobal,
            NoiseKind::DephasingPerQubit,
            NoiseKind::BitflipPerQubit,
            NoiseKind::PhaseflipPerQubit,
            NoiseKind::RandomCptp,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
        .ok_or_else(|| Error::domain(format!("unknown noise kind '{s}'")))
    }
}

/// A noise model. Serialized as `{"kind": "depolarizing_global", "p": 0.1}`
/// or `{"kind": "random_cptp", "rank": 4, "seed": 42}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    #[serde(rename = "p", default, skip_serializing_if = "Option::is_none")]
    pub strength: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, p: f64) -> Self {
        Self {
            kind,
            strength: Some(p),
            rank: None,
            seed: None,
        }
    }

    pub fn depolarizing(p: f64) -> Self {
        Self::new(NoiseKind::DepolarizingGlobal, p)
    }

    pub fn random(rank: usize, seed: u64) -> Self {
        Self {
            kind: NoiseKind::RandomCptp,
            strength: None,
            rank: Some(rank),
            seed: Some(seed),
        }
    }

    fn probability(&self) -> Result<f64> {
        let p = self.strength.ok_or_else(|| {
            Error::domain(format!("noise kind {} needs a strength p", self.kind.as_str()))
        })?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!("noise strength {p} outside [0, 1]")));
        }
        Ok(p)
    }
}

impl fmt::Display for NoiseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            NoiseKind::RandomCptp => write!(
                f,
                "random_cptp:{}:{}",
                self.rank.unwrap_or(0),
                self.seed.unwrap_or(0)
            ),
            kind => write!(f, "{}:{}", kind.as_str(), self.strength.unwrap_or(0.0)),
        }
    }
}

/// Parses `kind:p`, or `random_cptp:rank[:seed]` (seed defaults to 0).
impl FromStr for NoiseSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let kind: NoiseKind = parts.next().unwrap_or_default().parse()?;
        let bad = |what: &str| Error::domain(format!("cannot parse {what} in noise '{s}'"));
        let spec = if kind == NoiseKind::RandomCptp {
            let rank = parts
                .next()
                .ok_or_else(|| bad("rank"))?
                .parse()
                .map_err(|_| bad("rank"))?;
            let seed = match parts.next() {
                Some(v) => v.parse().map_err(|_| bad("seed"))?,
                None => 0,
            };
            NoiseSpec::random(rank, seed)
        } else {
            let p = parts
                .next()
                .ok_or_else(|| bad("strength"))?
                .parse()
                .map_err(|_| bad("strength"))?;
            NoiseSpec::new(kind, p)
        };
        if parts.next().is_some() {
            return Err(bad("trailing fields"));
        }
        Ok(spec)
    }
}

/// Builds the noise channel alone (no gate) on `n_qubits` qubits.
pub fn make_noise(spec: &NoiseSpec, n_qubits: usize) -> Result<Channel> {
    match spec.kind {
        NoiseKind::DepolarizingGlobal => depolarizing(n_qubits, spec.probability()?),
        NoiseKind::DephasingPerQubit | NoiseKind::PhaseflipPerQubit => {
            let all: Vec<usize> = (0..n_qubits).collect();
            per_qubit_flip(n_qubits, &all, Flip::Phase, spec.probability()?)
        }
        NoiseKind::BitflipPerQubit => {
            let all: Vec<usize> = (0..n_qubits).collect();
            per_qubit_flip(n_qubits, &all, Flip::Bit, spec.probability()?)
        }
        NoiseKind::RandomCptp => {
            let rank = spec
                .rank
                .ok_or_else(|| Error::domain("random_cptp needs a rank"))?;
            random_cptp(n_qubits, rank, spec.seed.unwrap_or(0))
        }
    }
}

/// Noise applied after the ideal unitary: Kraus operators N_k U00.
pub fn noisy_gate(gate: &GateSpec, spec: &NoiseSpec) -> Result<Channel> {
    let noise = make_noise(spec, gate.n_qubits())?;
    compose_after_gate(gate, &noise)
}

/// Kraus operators N_k U00 for an arbitrary noise channel.
pub fn compose_after_gate(gate: &GateSpec, noise: &Channel) -> Result<Channel> {
    let kraus = noise
        .kraus()
        .iter()
        .map(|k| k.compose(gate.unitary()))
        .collect::<Result<Vec<_>>>()?;
    Channel::new(kraus)
}

/// Global depolarizing noise. The identity Kraus weight absorbs the identity
/// term of the uniform Pauli twirl, so the map is exactly (1 - p) rho + p I / 2^N.
fn depolarizing(n_qubits: usize, p: f64) -> Result<Channel> {
    let dim = dim_for(n_qubits)?;
    let n_paulis = (dim * dim) as f64;
    let mut kraus = vec![Operator::identity(n_qubits)?
        .scale(C64::new((1.0 - p + p / n_paulis).sqrt(), 0.0))];
    if p > 0.0 {
        let w = C64::new((p / n_paulis).sqrt(), 0.0);
        for idx in ErrorIndex::all(n_qubits).skip(1) {
            kraus.push(error_operator(idx, n_qubits)?.scale(w));
        }
    }
    Channel::new(kraus)
}

/// Single-qubit Pauli flip used by the per-qubit noise families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flip {
    /// Z
    Phase,
    /// X
    Bit,
}

/// Independent flips with probability `p` on each listed qubit; other qubits untouched.
pub fn per_qubit_flip(n_qubits: usize, qubits: &[usize], flip: Flip, p: f64) -> Result<Channel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("flip probability {p} outside [0, 1]")));
    }
    dim_for(n_qubits)?;
    let mut masks = Vec::with_capacity(qubits.len());
    for &q in qubits {
        if q >= n_qubits {
            return Err(Error::domain(format!(
                "qubit {q} out of range for {n_qubits} qubits"
            )));
        }
        let bit = 1usize << (n_qubits - 1 - q);
        if !masks.contains(&bit) {
            masks.push(bit);
        }
    }
    let mut kraus = Vec::new();
    for subset in 0..1usize << masks.len() {
        let flipped = subset.count_ones() as i32;
        let weight = p.powi(flipped) * (1.0 - p).powi(masks.len() as i32 - flipped);
        if weight == 0.0 {
            continue;
        }
        let mask: usize = masks
            .iter()
            .enumerate()
            .filter(|(k, _)| subset & (1 << k) != 0)
            .map(|(_, m)| m)
            .sum();
        let idx = match flip {
            Flip::Phase => ErrorIndex::new(mask, 0, n_qubits)?,
            Flip::Bit => ErrorIndex::new(0, mask, n_qubits)?,
        };
        kraus.push(error_operator(idx, n_qubits)?.scale(C64::new(weight.sqrt(), 0.0)));
    }
    Channel::new(kraus)
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha20Rng) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            m[(r, c)] = C64::new(re, im);
        }
    }
    m
}

/// A random CPTP map: a (rank * 2^N) x 2^N complex Gaussian matrix is
/// orthonormalized into an isometry whose row blocks are the Kraus operators.
pub fn random_cptp(n_qubits: usize, rank: usize, seed: u64) -> Result<Channel> {
    let dim = dim_for(n_qubits)?;
    if rank == 0 || rank > dim * dim {
        return Err(Error::domain(format!(
            "Kraus rank {rank} outside 1..={} for {n_qubits} qubits",
            dim * dim
        )));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let g = gaussian_matrix(rank * dim, dim, &mut rng);
    let q = QR::new(g).q();
    let kraus = (0..rank)
        .map(|m| Operator::new(n_qubits, q.rows(m * dim, dim).into_owned()))
        .collect::<Result<Vec<_>>>()?;
    Channel::new(kraus)
}

/// A random density matrix G G^dagger / Tr(G G^dagger) with G of shape 2^N x rank.
pub fn random_density_matrix(n_qubits: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let dim = dim_for(n_qubits)?;
    if rank == 0 || rank > dim {
        return Err(Error::domain(format!(
            "state rank {rank} outside 1..={dim}"
        )));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let g = gaussian_matrix(dim, rank, &mut rng);
    let mut rho = &g * g.adjoint();
    let tr = rho.trace().re;
    rho.unscale_mut(tr);
    // Enforce exact Hermiticity after rounding.
    let rho = (&rho + rho.adjoint()).unscale(2.0);
    DensityMatrix::new(n_qubits, rho)
}
