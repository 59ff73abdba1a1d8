//! Random CPTP noise after the GHZ chain: how tight the classical bounds
//! on the process fidelity are as the noise strength grows.

use num_complex::Complex64;
use qgate_cert::certify::{certify, ghz_chain_gate};
use qgate_cert::{random_cptp, Channel};

fn main() -> qgate_cert::Result<()> {
    let gate = ghz_chain_gate(3)?;
    println!("{:>5} {:>10} {:>10} {:>8} {:>8}", "q", "mean gap", "max gap", "cap", "viol");
    for q in [0.05f64, 0.1, 0.2, 0.3] {
        let (mut sum, mut max, mut cap, mut viol) = (0.0f64, 0.0f64, 0, 0);
        let trials = 50;
        for seed in 0..trials {
            // (1 - q) of the ideal gate mixed with q of random rank-4 noise.
            let noise = random_cptp(3, 4, seed)?;
            let mut kraus = vec![gate.unitary().scale(Complex64::from((1.0 - q).sqrt()))];
            for k in noise.kraus() {
                kraus.push(k.compose(gate.unitary())?.scale(Complex64::from(q.sqrt())));
            }
            let r = certify(&Channel::new(kraus)?, &gate)?;
            let gap = r.upper_bound - r.lower_bound;
            sum += gap;
            max = max.max(gap);
            cap += r.capability_certified as u32;
            viol += r.violation_certified as u32;
        }
        println!("{:>5.2} {:>10.4} {:>10.4} {:>5}/{trials} {:>5}/{trials}", q, sum / trials as f64, max, cap, viol);
    }
    Ok(())
}
