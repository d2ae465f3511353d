//! Bit-parallel simulation, exhaustive truth tables, signal-probability
//! labeling, structural support and miter-style equivalence checking.

use crate::error::{Error, Result};
use crate::ir::{Circuit, GateType};
use crate::rng::Rng;
use crate::tt::{self, Table};
use std::collections::BTreeSet;

/// Default number of random assignments for probability labeling.
pub const DEFAULT_PROBABILITY_VECTORS: usize = 16384;
/// Default random-miter budget in 64-assignment words (262144 assignments).
pub const DEFAULT_MITER_WORDS: usize = 4096;
/// PIs at or below this bound are checked exhaustively.
pub const EXHAUSTIVE_EQUIV_PIS: usize = 16;
/// PIs at or below this bound get exact probabilities.
pub const EXHAUSTIVE_PROB_PIS: usize = 14;
/// Hard bound for explicit exhaustive truth tables.
pub const EXHAUSTIVE_TT_PIS: usize = 20;

/// Packed input stimuli: one word stream per PI, 64 assignments per word.
#[derive(Clone, Debug)]
pub struct SimVectors {
    pub seed: u64,
    pub word_count: usize,
    pub words: Vec<Vec<u64>>,
}

impl SimVectors {
    pub fn random(pi_count: usize, word_count: usize, seed: u64) -> SimVectors {
        let mut rng = Rng::new(seed);
        let words = (0..pi_count)
            .map(|_| (0..word_count).map(|_| rng.next_u64()).collect())
            .collect();
        SimVectors {
            seed,
            word_count,
            words,
        }
    }

    /// All `2^pi_count` assignments; PI `i` carries the canonical
    /// variable-`i` pattern.
    pub fn exhaustive(pi_count: usize) -> SimVectors {
        let word_count = if pi_count >= 6 {
            1usize << (pi_count - 6)
        } else {
            1
        };
        let words = (0..pi_count)
            .map(|i| {
                if i < 6 {
                    vec![tt::VAR_MASKS[i]; word_count]
                } else {
                    (0..word_count)
                        .map(|j| if (j >> (i - 6)) & 1 == 1 { u64::MAX } else { 0 })
                        .collect()
                }
            })
            .collect();
        SimVectors {
            seed: 0,
            word_count,
            words,
        }
    }

    /// A single-assignment stimulus (used to replay counterexamples).
    pub fn single(assignment: &[bool]) -> SimVectors {
        SimVectors {
            seed: 0,
            word_count: 1,
            words: assignment
                .iter()
                .map(|&b| vec![if b { u64::MAX } else { 0 }])
                .collect(),
        }
    }
}

/// Computes every node's packed output words in topological order.
pub fn simulate(c: &Circuit, v: &SimVectors) -> Result<Vec<Vec<u64>>> {
    if v.words.len() != c.pis().len() {
        return Err(Error::usage(format!(
            "{} PI streams provided for {} PIs",
            v.words.len(),
            c.pis().len()
        )));
    }
    let order = c.topo_order()?;
    let wc = v.word_count;
    let mut out: Vec<Vec<u64>> = vec![Vec::new(); c.len()];
    let pi_pos: std::collections::HashMap<u32, usize> = c
        .pis()
        .iter()
        .enumerate()
        .map(|(p, &i)| (i, p))
        .collect();
    for &i in &order {
        let node = c.node(i);
        let words = match node.gate {
            GateType::Pi => v.words[pi_pos[&i]].clone(),
            GateType::Const0 => vec![0u64; wc],
            GateType::Const1 => vec![u64::MAX; wc],
            GateType::Po | GateType::Buffer => out[node.fanins[0] as usize].clone(),
            GateType::Not => out[node.fanins[0] as usize].iter().map(|w| !w).collect(),
            GateType::And2 => zip2(&out, node, |a, b| a & b),
            GateType::Nand2 => zip2(&out, node, |a, b| !(a & b)),
            GateType::Or2 => zip2(&out, node, |a, b| a | b),
            GateType::Nor2 => zip2(&out, node, |a, b| !(a | b)),
            GateType::Xor2 => zip2(&out, node, |a, b| a ^ b),
            GateType::Xnor2 => zip2(&out, node, |a, b| !(a ^ b)),
            _ => apply_tt(&out, node.tt, &node.fanins, wc),
        };
        out[i as usize] = words;
    }
    Ok(out)
}

fn zip2(out: &[Vec<u64>], node: &crate::ir::Node, f: impl Fn(u64, u64) -> u64) -> Vec<u64> {
    let a = &out[node.fanins[0] as usize];
    let b = &out[node.fanins[1] as usize];
    a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect()
}

/// Generic truth-table application: OR over the set minterms of the AND
/// of (possibly complemented) fanin words.
fn apply_tt(out: &[Vec<u64>], table: u64, fanins: &[u32], wc: usize) -> Vec<u64> {
    let k = fanins.len();
    let mut result = vec![0u64; wc];
    for m in 0..(1usize << k) {
        if (table >> m) & 1 == 0 {
            continue;
        }
        for w in 0..wc {
            let mut acc = u64::MAX;
            for (i, &f) in fanins.iter().enumerate() {
                let word = out[f as usize][w];
                acc &= if (m >> i) & 1 == 1 { word } else { !word };
            }
            result[w] |= acc;
        }
    }
    result
}

/// Exhaustive per-PO truth tables over all `2^pis` assignments.
pub fn exhaustive_truth_tables(c: &Circuit, pi_limit: usize) -> Result<Vec<Table>> {
    let pis = c.pis().len();
    if pis > pi_limit {
        return Err(Error::usage(format!(
            "{pis} PIs exceed the exhaustive limit of {pi_limit}"
        )));
    }
    let v = SimVectors::exhaustive(pis);
    let sim = simulate(c, &v)?;
    Ok(c.pos()
        .iter()
        .map(|&p| {
            let mut t = Table {
                nvars: pis,
                words: sim[p as usize].clone(),
            };
            trim_table(&mut t);
            t
        })
        .collect())
}

fn trim_table(t: &mut Table) {
    if t.nvars < 6 {
        t.words[0] &= (1u64 << (1 << t.nvars)) - 1;
    }
}

/// Per-node signal probability under independent uniform PIs. Exact for
/// circuits up to [`EXHAUSTIVE_PROB_PIS`] inputs, Monte-Carlo otherwise.
pub fn node_probability(c: &Circuit, vectors: usize, seed: u64) -> Result<Vec<f64>> {
    if vectors == 0 {
        return Err(Error::usage("probability labeling needs at least one vector"));
    }
    let pis = c.pis().len();
    if pis <= EXHAUSTIVE_PROB_PIS {
        let v = SimVectors::exhaustive(pis);
        let sim = simulate(c, &v)?;
        let total = 1u64 << pis;
        let valid_mask = if pis < 6 { (1u64 << (1 << pis)) - 1 } else { u64::MAX };
        Ok(sim
            .iter()
            .map(|words| {
                let ones: u64 = words
                    .iter()
                    .enumerate()
                    .map(|(j, w)| {
                        let w = if j == 0 && pis < 6 { w & valid_mask } else { *w };
                        w.count_ones() as u64
                    })
                    .sum();
                ones as f64 / total as f64
            })
            .collect())
    } else {
        let wc = vectors.div_ceil(64);
        let v = SimVectors::random(pis, wc, seed);
        let sim = simulate(c, &v)?;
        let total = (wc * 64) as f64;
        Ok(sim
            .iter()
            .map(|words| {
                words.iter().map(|w| w.count_ones() as u64).sum::<u64>() as f64 / total
            })
            .collect())
    }
}

/// PI positions in the transitive fanin of PO node `po`.
pub fn support(c: &Circuit, po: u32) -> Result<BTreeSet<usize>> {
    if po as usize >= c.len() || c.node(po).gate != GateType::Po {
        return Err(Error::usage(format!("node {po} is not a PO")));
    }
    let pi_pos: std::collections::HashMap<u32, usize> = c
        .pis()
        .iter()
        .enumerate()
        .map(|(p, &i)| (i, p))
        .collect();
    let mut seen = vec![false; c.len()];
    let mut stack = vec![po];
    let mut result = BTreeSet::new();
    while let Some(i) = stack.pop() {
        if seen[i as usize] {
            continue;
        }
        seen[i as usize] = true;
        if let Some(&p) = pi_pos.get(&i) {
            result.insert(p);
        }
        stack.extend(c.node(i).fanins.iter().copied());
    }
    Ok(result)
}

/// Outcome of an equivalence check. `NotFalsified` is the honest verdict
/// when the PI count rules out exhaustive proof and random vectors found
/// no difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivalenceVerdict {
    /// Exhaustive proof over all assignments.
    Equivalent { pi_count: usize },
    /// A concrete differing assignment, replayable via
    /// [`SimVectors::single`].
    NotEquivalent { counterexample: Vec<bool> },
    /// Survived `vector_count` random assignments.
    NotFalsified { vector_count: usize },
}

impl EquivalenceVerdict {
    pub fn holds(&self) -> bool {
        !matches!(self, EquivalenceVerdict::NotEquivalent { .. })
    }
}

/// Compares two circuits PO-by-PO (matched by position). Exhaustive up
/// to [`EXHAUSTIVE_EQUIV_PIS`] inputs, random-vector miter beyond.
pub fn check_equivalence(
    a: &Circuit,
    b: &Circuit,
    budget_words: usize,
) -> Result<EquivalenceVerdict> {
    if a.pis().len() != b.pis().len() || a.pos().len() != b.pos().len() {
        return Err(Error::usage(format!(
            "interface mismatch: {}x{} vs {}x{} PIs/POs",
            a.pis().len(),
            a.pos().len(),
            b.pis().len(),
            b.pos().len()
        )));
    }
    let pis = a.pis().len();
    if pis <= EXHAUSTIVE_EQUIV_PIS {
        let v = SimVectors::exhaustive(pis);
        let sa = simulate(a, &v)?;
        let sb = simulate(b, &v)?;
        let total = 1usize << pis;
        for (pa, pb) in a.pos().iter().zip(b.pos()) {
            let wa = &sa[*pa as usize];
            let wb = &sb[*pb as usize];
            for w in 0..v.word_count {
                let mut diff = wa[w] ^ wb[w];
                if pis < 6 {
                    diff &= (1u64 << (1 << pis)) - 1;
                }
                if diff != 0 {
                    let bit = diff.trailing_zeros() as usize;
                    let idx = w * 64 + bit;
                    debug_assert!(idx < total);
                    let assignment = (0..pis).map(|i| (idx >> i) & 1 == 1).collect();
                    return Ok(EquivalenceVerdict::NotEquivalent {
                        counterexample: assignment,
                    });
                }
            }
        }
        Ok(EquivalenceVerdict::Equivalent { pi_count: pis })
    } else {
        let budget = budget_words.max(1);
        let v = SimVectors::random(pis, budget, 0x6d69_7465_7221);
        let sa = simulate(a, &v)?;
        let sb = simulate(b, &v)?;
        for (pa, pb) in a.pos().iter().zip(b.pos()) {
            let wa = &sa[*pa as usize];
            let wb = &sb[*pb as usize];
            for w in 0..budget {
                let diff = wa[w] ^ wb[w];
                if diff != 0 {
                    let bit = diff.trailing_zeros() as usize;
                    let assignment = (0..pis)
                        .map(|i| (v.words[i][w] >> bit) & 1 == 1)
                        .collect();
                    return Ok(EquivalenceVerdict::NotEquivalent {
                        counterexample: assignment,
                    });
                }
            }
        }
        Ok(EquivalenceVerdict::NotFalsified {
            vector_count: budget * 64,
        })
    }
}

/// Evaluates all POs of `c` on one assignment.
pub fn evaluate(c: &Circuit, assignment: &[bool]) -> Result<Vec<bool>> {
    let sim = simulate(c, &SimVectors::single(assignment))?;
    Ok(c.pos().iter().map(|&p| sim[p as usize][0] & 1 == 1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::LogicType;

    fn two_pi_gate(gate: GateType) -> Circuit {
        let mut c = Circuit::new(LogicType::Gtg, "g");
        let a = c.add_pi("a");
        let b = c.add_pi("b");
        let g = c.add_gate(gate, vec![a, b], "g").unwrap();
        c.add_po(g, "y");
        c
    }

    #[test]
    fn packed_and_xor() {
        let c = two_pi_gate(GateType::And2);
        let v = SimVectors {
            seed: 0,
            word_count: 1,
            words: vec![vec![0b1100], vec![0b1010]],
        };
        let sim = simulate(&c, &v).unwrap();
        assert_eq!(sim[2][0], 0b1000);
        let x = two_pi_gate(GateType::Xor2);
        let sim = simulate(&x, &v).unwrap();
        assert_eq!(sim[2][0], 0b0110);
    }

    #[test]
    fn vector_mismatch_rejected() {
        let c = two_pi_gate(GateType::And2);
        let v = SimVectors::random(1, 1, 0);
        assert!(simulate(&c, &v).is_err());
    }

    #[test]
    fn exhaustive_tables() {
        // PO = PI0 for a single-input circuit: pattern 0b10.
        let mut c = Circuit::new(LogicType::Aig, "id");
        let a = c.add_pi("a");
        c.add_po(a, "y");
        let t = exhaustive_truth_tables(&c, EXHAUSTIVE_TT_PIS).unwrap();
        assert_eq!(t[0].words[0], 0b10);

        // Full-adder carry-out is MAJ3: 0xE8 over 3 PIs, checked against
        // per-assignment enumeration.
        let mut fa = Circuit::new(LogicType::Gtg, "fa");
        let x = fa.add_pi("x");
        let y = fa.add_pi("y");
        let z = fa.add_pi("z");
        let m = fa.add_gate(GateType::Maj3, vec![x, y, z], "m").unwrap();
        fa.add_po(m, "cout");
        let t = exhaustive_truth_tables(&fa, EXHAUSTIVE_TT_PIS).unwrap();
        let mut oracle = 0u64;
        for j in 0..8u64 {
            if j.count_ones() >= 2 {
                oracle |= 1 << j;
            }
        }
        assert_eq!(t[0].words[0], oracle);
        assert_eq!(oracle, 0xE8);
    }

    #[test]
    fn exhaustive_limit() {
        let mut c = Circuit::new(LogicType::Aig, "wide");
        let pis: Vec<u32> = (0..21).map(|i| c.add_pi(format!("i{i}"))).collect();
        c.add_po(pis[0], "y");
        assert!(exhaustive_truth_tables(&c, EXHAUSTIVE_TT_PIS).is_err());
    }

    #[test]
    fn probabilities() {
        let c = two_pi_gate(GateType::And2);
        let p = node_probability(&c, 1, 0).unwrap();
        assert_eq!(p[2], 0.25);
        assert_eq!(p[0], 0.5);
        let x = two_pi_gate(GateType::Xor2);
        assert_eq!(node_probability(&x, 1, 0).unwrap()[2], 0.5);
        let mut m = Circuit::new(LogicType::Mig, "m");
        let a = m.add_pi("a");
        let b = m.add_pi("b");
        let cc = m.add_pi("c");
        let g = m.add_gate(GateType::Maj3, vec![a, b, cc], "g").unwrap();
        m.add_po(g, "y");
        assert_eq!(node_probability(&m, 1, 0).unwrap()[3], 0.5);
        assert!(node_probability(&c, 0, 0).is_err());
    }

    #[test]
    fn support_sets() {
        let c = two_pi_gate(GateType::And2);
        assert_eq!(
            support(&c, c.pos()[0]).unwrap(),
            BTreeSet::from([0usize, 1])
        );
        let mut k = Circuit::new(LogicType::Aig, "k");
        k.add_pi("a");
        let z = k.add_const(false);
        let po = k.add_po(z, "y");
        assert!(support(&k, po).unwrap().is_empty());
        assert!(support(&c, 0).is_err()); // PI index, not a PO
    }

    #[test]
    fn equivalence_verdicts() {
        let c = two_pi_gate(GateType::And2);
        assert_eq!(
            check_equivalence(&c, &c, DEFAULT_MITER_WORDS).unwrap(),
            EquivalenceVerdict::Equivalent { pi_count: 2 }
        );
        let o = two_pi_gate(GateType::Or2);
        match check_equivalence(&c, &o, DEFAULT_MITER_WORDS).unwrap() {
            EquivalenceVerdict::NotEquivalent { counterexample } => {
                // first differing minterm is (a=1, b=0)
                assert_eq!(counterexample, vec![true, false]);
                // counterexamples replay to differing outputs
                let ya = evaluate(&c, &counterexample).unwrap();
                let yb = evaluate(&o, &counterexample).unwrap();
                assert_ne!(ya, yb);
            }
            v => panic!("expected NotEquivalent, got {v:?}"),
        }
        let mut narrow = two_pi_gate(GateType::And2);
        narrow.add_pi("extra");
        assert!(check_equivalence(&c, &narrow, DEFAULT_MITER_WORDS).is_err());
    }
}
