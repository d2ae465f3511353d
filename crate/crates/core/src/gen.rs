//! Seeded random circuit generation for fixtures and benchmarks.

use crate::ir::{Circuit, GateType, LogicType};
use crate::rng::Rng;

/// A random explicit-NOT AIG with `num_pis` inputs, roughly `num_ands`
/// AND gates and `num_pos` outputs. Fully reproducible from the seed.
pub fn random_aig(seed: u64, num_pis: usize, num_ands: usize, num_pos: usize) -> Circuit {
    assert!(num_pis >= 2 && num_pos >= 1);
    let mut rng = Rng::new(seed);
    let mut c = Circuit::new(LogicType::Aig, format!("rand-{seed:016x}"));
    let mut signals: Vec<u32> = (0..num_pis).map(|i| c.add_pi(format!("x{i}"))).collect();
    for g in 0..num_ands {
        let pick = |rng: &mut Rng, c: &mut Circuit, signals: &[u32]| {
            let idx = signals[rng.below(signals.len() as u64) as usize];
            if rng.bool() {
                c.add_gate(GateType::Not, vec![idx], format!("i{}", c.len()))
                    .unwrap()
            } else {
                idx
            }
        };
        let a = pick(&mut rng, &mut c, &signals);
        let b = pick(&mut rng, &mut c, &signals);
        let n = c
            .add_gate(GateType::And2, vec![a, b], format!("g{g}"))
            .unwrap();
        signals.push(n);
    }
    // prefer recent gates as outputs so most of the circuit stays alive
    for p in 0..num_pos {
        let span = (signals.len() / 2).max(1) as u64;
        let idx = signals[signals.len() - 1 - rng.below(span) as usize];
        c.add_po(idx, format!("y{p}"));
    }
    c
}
