//! Builds the same JSON report the command-line tool writes, from a config
//! with an explicit unitary: a CNOT whose control is the second qubit.

use qgate_cert::cli::{build_report, RunConfig};

fn main() -> qgate_cert::Result<()> {
    let config = r#"{
        "gate": {"unitary": [
            [[1,0],[0,0],[0,0],[0,0]],
            [[0,0],[0,0],[0,0],[1,0]],
            [[0,0],[0,0],[1,0],[0,0]],
            [[0,0],[1,0],[0,0],[0,0]]
        ]},
        "noise": {"kind": "bitflip_per_qubit", "p": 0.03},
        "mode": "sampled",
        "shots": 20000,
        "seed": 7
    }"#;
    let report = build_report(&RunConfig::from_json(config)?)?;
    println!("{}", report.to_json()?);
    Ok(())
}
