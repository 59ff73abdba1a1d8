//! Builds the gate-relative error basis of the three-qubit GHZ chain and
//! checks that it is orthogonal.

use qgate_cert::certify::ghz_chain_gate;
use qgate_cert::qcore::{build_error_basis, ErrorIndex};

fn main() -> qgate_cert::Result<()> {
    let gate = ghz_chain_gate(3)?;
    let basis = build_error_basis(&gate)?;
    println!("{} operators for a {}-qubit gate", basis.len(), gate.n_qubits());
    println!("orthogonality residual: {:.2e}", basis.orthogonality_residual());

    // Phase errors are diagonal in Z, amplitude errors permute the Z basis.
    for idx in [ErrorIndex::new(0b100, 0, 3)?, ErrorIndex::new(0, 0b011, 3)?] {
        let op = basis.get(idx);
        println!(
            "\nU00 Pi with phase mask {:03b}, amplitude mask {:03b} (flat index {}):",
            idx.phase_mask,
            idx.amp_mask,
            idx.flat(3)
        );
        let m = op.matrix();
        for r in 0..m.nrows() {
            let row: Vec<String> = (0..m.ncols()).map(|c| format!("{:>3}", m[(r, c)].re)).collect();
            println!("  {}", row.join(""));
        }
    }
    Ok(())
}
