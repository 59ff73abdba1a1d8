//! Process matrix of a depolarized CNOT in its own error basis.

use qgate_cert::certify::ghz_chain_gate;
use qgate_cert::channel::error_probabilities;
use qgate_cert::{kraus_to_chi, noisy_gate, process_fidelity, NoiseSpec, Tolerances};

fn main() -> qgate_cert::Result<()> {
    // The two-qubit GHZ chain is a CNOT controlled by qubit 0.
    let cnot = ghz_chain_gate(2)?;
    let ch = noisy_gate(&cnot, &NoiseSpec::depolarizing(0.16))?;
    let chi = kraus_to_chi(&ch, &cnot)?;

    let check = chi.validate(&Tolerances::DEFAULT);
    println!("chi valid: {} (trace {:.6})", check.passed, chi.trace().re);
    println!("process fidelity: {:.6}", process_fidelity(&chi));
    println!("\nerror probabilities:");
    for (idx, p) in error_probabilities(&chi) {
        println!("  Z {:02b}  X {:02b}  {:.4}", idx.phase_mask, idx.amp_mask, p);
    }
    println!("\nphase-only weight:     {:.4}", chi.phase_only_weight());
    println!("amplitude-only weight: {:.4}", chi.amplitude_only_weight());
    Ok(())
}
