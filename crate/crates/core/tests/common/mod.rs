//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's process-matrix or transfer-probability code.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use qgate_cert::certify::{entangling_input, ghz_chain_gate, Basis};
use qgate_cert::noise::{make_noise, noisy_gate, random_cptp, NoiseKind, NoiseSpec};
use qgate_cert::qcore::{error_operator, DensityMatrix, ErrorIndex, GateSpec, Ket};
use qgate_cert::Channel;

pub type CMatrix = DMatrix<C64>;

/// <out_n| E(|in_n><in_n|) |out_n>, averaged, by full density-matrix evolution.
pub fn fidelity_by_density(ch: &Channel, gate: &GateSpec, basis: Basis) -> f64 {
    let n = gate.n_qubits();
    let d = gate.dim();
    let mut total = 0.0;
    for idx in 0..d {
        let input = basis.input(idx, n).unwrap();
        let rho = input.projector();
        let mut out = CMatrix::zeros(d, d);
        for k in ch.kraus() {
            out += k.matrix() * rho.matrix() * k.matrix().adjoint();
        }
        let ideal = gate.unitary().matrix() * input.amplitudes();
        total += ideal.dotc(&(&out * &ideal)).re;
    }
    total / d as f64
}

/// Superoperator in column-stacking convention: vec(K rho K^dag) = (conj(K) (x) K) vec(rho).
fn superop_of(kraus: &[CMatrix]) -> CMatrix {
    let d = kraus[0].nrows();
    let mut s = CMatrix::zeros(d * d, d * d);
    for k in kraus {
        s += k.conjugate().kronecker(k);
    }
    s
}

/// Process matrix by solving the linear system
/// S = sum_ab chi_ab (conj(U_b) (x) U_a) for chi, with U_a = U00 Pi_a built
/// from explicit tensor products.
pub fn chi_by_least_squares(ch: &Channel, gate: &GateSpec) -> CMatrix {
    let n = gate.n_qubits();
    let basis: Vec<CMatrix> = ErrorIndex::all(n)
        .map(|idx| gate.unitary().matrix() * error_operator(idx, n).unwrap().matrix())
        .collect();
    let kraus: Vec<CMatrix> = ch.kraus().iter().map(|k| k.matrix().clone()).collect();
    let target = superop_of(&kraus);
    let nb = basis.len();
    let d2 = target.nrows();
    let mut design = CMatrix::zeros(d2 * d2, nb * nb);
    for a in 0..nb {
        for b in 0..nb {
            let term = basis[b].conjugate().kronecker(&basis[a]);
            let col = a * nb + b;
            for (r, v) in term.iter().enumerate() {
                design[(r, col)] = *v;
            }
        }
    }
    let rhs = nalgebra::DVector::from_column_slice(target.as_slice());
    let sol = design
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .expect("least-squares solve");
    CMatrix::from_fn(nb, nb, |a, b| sol[a * nb + b])
}

/// Three-qubit K = XXX - XYY - YXY - YYX written out from Pauli matrices.
pub fn mermin_matrix() -> CMatrix {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let x = CMatrix::from_row_slice(2, 2, &[o, l, l, o]);
    let y = CMatrix::from_row_slice(2, 2, &[o, -i, i, o]);
    let t = |a: &CMatrix, b: &CMatrix, c: &CMatrix| a.kronecker(b).kronecker(c);
    t(&x, &x, &x) - t(&x, &y, &y) - t(&y, &x, &y) - t(&y, &y, &x)
}

/// E(|0_x 0_z 0_z><.|) by explicit Kraus summation.
pub fn ghz_output(ch: &Channel) -> CMatrix {
    let n = ch.n_qubits();
    let psi = entangling_input(n).unwrap();
    let rho = psi.projector();
    let d = ch.dim();
    let mut out = CMatrix::zeros(d, d);
    for k in ch.kraus() {
        out += k.matrix() * rho.matrix() * k.matrix().adjoint();
    }
    out
}

pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    (a * b).trace()
}

pub fn ghz_overlap(rho: &CMatrix) -> f64 {
    let g = Ket::ghz(((rho.nrows() as f64).log2()) as usize).unwrap();
    g.amplitudes().dotc(&(rho * g.amplitudes())).re
}

/// The random-channel population: `count` channels per qubit count with
/// ranks cycling through 1..=4^N, composed after `gate` when given.
pub fn random_population(n_qubits: usize, count: usize, seed_base: u64) -> Vec<Channel> {
    let max_rank = 1usize << (2 * n_qubits);
    (0..count)
        .map(|i| random_cptp(n_qubits, 1 + i % max_rank, seed_base + i as u64).unwrap())
        .collect()
}

/// Named noise families after the GHZ chain at p = 0, 0.1, ..., 1.
pub fn named_family_population(n_qubits: usize) -> Vec<(NoiseSpec, Channel)> {
    let gate = ghz_chain_gate(n_qubits).unwrap();
    let mut out = Vec::new();
    for kind in NoiseKind::NAMED {
        for step in 0..=10 {
            let spec = NoiseSpec::new(kind, step as f64 / 10.0);
            out.push((spec.clone(), noisy_gate(&gate, &spec).unwrap()));
        }
    }
    out
}

pub fn depolarized_ghz(n_qubits: usize, p: f64) -> (GateSpec, Channel) {
    let gate = ghz_chain_gate(n_qubits).unwrap();
    let ch = noisy_gate(&gate, &NoiseSpec::depolarizing(p)).unwrap();
    (gate, ch)
}

pub fn noise_only(kind: NoiseKind, p: f64, n: usize) -> Channel {
    make_noise(&NoiseSpec::new(kind, p), n).unwrap()
}

pub fn density(m: CMatrix) -> DensityMatrix {
    DensityMatrix::new(((m.nrows() as f64).log2()) as usize, m).unwrap()
}
