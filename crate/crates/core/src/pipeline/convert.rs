//! Frontend conversions: any loadable circuit into GTG (Step 1) and any
//! circuit into a strashed AIG (Step 2).

use crate::error::Result;
use crate::ir::{Circuit, GateType, LogicType};
use crate::opt::{synth, Saig};
use crate::tt;
use std::collections::HashMap;

/// Gates outside the GTG set are decomposed node-wise: MAJ3 becomes the
/// (A·B)+(A·C)+(B·C) cone, LUT/CELL nodes are expanded from their truth
/// tables via Shannon decomposition. Everything else embeds directly.
pub fn to_gtg(c: &Circuit) -> Result<Circuit> {
    let order = c.topo_order()?;
    let mut out = Circuit::new(LogicType::Gtg, c.name.clone());
    let mut map: HashMap<u32, u32> = HashMap::new();
    for &i in &order {
        let node = c.node(i);
        let idx = match node.gate {
            GateType::Pi => out.add_pi(node.name.clone()),
            GateType::Po => {
                out.add_po(map[&node.fanins[0]], node.name.clone());
                continue;
            }
            GateType::Const0 => out.add_const(false),
            GateType::Const1 => out.add_const(true),
            GateType::Maj3 => {
                let [a, b, c3] = [
                    map[&node.fanins[0]],
                    map[&node.fanins[1]],
                    map[&node.fanins[2]],
                ];
                let ab = gate2(&mut out, GateType::And2, a, b)?;
                let ac = gate2(&mut out, GateType::And2, a, c3)?;
                let bc = gate2(&mut out, GateType::And2, b, c3)?;
                let o1 = gate2(&mut out, GateType::Or2, ab, ac)?;
                gate2(&mut out, GateType::Or2, o1, bc)?
            }
            GateType::Lut | GateType::Cell => {
                let fanins: Vec<u32> = node.fanins.iter().map(|f| map[f]).collect();
                expand_tt(&mut out, node.tt, node.arity(), &fanins)?
            }
            gate if LogicType::Gtg.allows(gate) => {
                let fanins: Vec<u32> = node.fanins.iter().map(|f| map[f]).collect();
                out.add_gate(gate, fanins, node.name.clone())?
            }
            gate => {
                // any remaining gate: expand from its local function
                debug_assert!(!LogicType::Gtg.allows(gate));
                let fanins: Vec<u32> = node.fanins.iter().map(|f| map[f]).collect();
                expand_tt(&mut out, node.tt, node.arity(), &fanins)?
            }
        };
        map.insert(i, idx);
    }
    Ok(out)
}

fn gate2(out: &mut Circuit, gate: GateType, a: u32, b: u32) -> Result<u32> {
    let name = format!("n{}", out.len());
    out.add_gate(gate, vec![a, b], name)
}

/// Shannon decomposition of a tiled table into NOT/AND2/OR2 gates.
fn expand_tt(out: &mut Circuit, table: u64, k: usize, fanins: &[u32]) -> Result<u32> {
    let (value, m, support) = tt::compress(table, k);
    let leaves: Vec<u32> = support.iter().map(|&s| fanins[s]).collect();
    if m == 0 {
        return Ok(out.add_const(value & 1 == 1));
    }
    if m == 1 {
        return if value & 0b11 == 0b10 {
            Ok(leaves[0])
        } else {
            let name = format!("n{}", out.len());
            out.add_gate(GateType::Not, vec![leaves[0]], name)
        };
    }
    let tiled = tt::tile(value, m);
    let top = m - 1;
    let cof = |v: bool| {
        tt::from_fn(m, |j| {
            let idx = if v { j | (1 << top) } else { j & !(1 << top) };
            (tiled >> idx) & 1 == 1
        })
    };
    let f0 = expand_tt(out, cof(false), m, &leaves)?;
    let f1 = expand_tt(out, cof(true), m, &leaves)?;
    let x = leaves[top];
    let nx_name = format!("n{}", out.len());
    let nx = out.add_gate(GateType::Not, vec![x], nx_name)?;
    let t0 = gate2(out, GateType::And2, nx, f0)?;
    let t1 = gate2(out, GateType::And2, x, f1)?;
    gate2(out, GateType::Or2, t0, t1)
}

/// Node-wise decomposition of every gate into AND2/NOT via the internal
/// complement-edge representation, structurally hashed on the way out.
pub fn to_aig(c: &Circuit) -> Result<Circuit> {
    use crate::opt::saig::{Lit, LIT_FALSE, LIT_TRUE};
    let order = c.topo_order()?;
    let pi_names: Vec<String> = c.pis().iter().map(|&i| c.node(i).name.clone()).collect();
    let pi_pos: HashMap<u32, usize> = c
        .pis()
        .iter()
        .enumerate()
        .map(|(p, &i)| (i, p))
        .collect();
    let mut g = Saig::new(c.name.clone(), pi_names);
    let mut map: HashMap<u32, Lit> = HashMap::new();
    for &i in &order {
        let node = c.node(i);
        let f = |slot: usize| map[&node.fanins[slot]];
        let lit = match node.gate {
            GateType::Pi => g.pi_lit(pi_pos[&i]),
            GateType::Po => {
                g.add_po(f(0), node.name.clone());
                continue;
            }
            GateType::Const0 => LIT_FALSE,
            GateType::Const1 => LIT_TRUE,
            GateType::Not => f(0).not(),
            GateType::Buffer => f(0),
            GateType::And2 => g.and(f(0), f(1)),
            GateType::Nand2 => g.and(f(0), f(1)).not(),
            GateType::Or2 => g.or(f(0), f(1)),
            GateType::Nor2 => g.or(f(0), f(1)).not(),
            GateType::Xor2 => g.xor(f(0), f(1)),
            GateType::Xnor2 => g.xor(f(0), f(1)).not(),
            GateType::Nand3 => {
                let ab = g.and(f(0), f(1));
                g.and(ab, f(2)).not()
            }
            GateType::Nor3 => {
                let ab = g.or(f(0), f(1));
                g.or(ab, f(2)).not()
            }
            GateType::Mux21 => g.mux(f(2), f(1), f(0)),
            GateType::Nmux21 => g.mux(f(2), f(0), f(1)),
            GateType::Aoi21 => {
                let ab = g.and(f(0), f(1));
                g.or(ab, f(2)).not()
            }
            GateType::Oai21 => {
                let ab = g.or(f(0), f(1));
                g.and(ab, f(2)).not()
            }
            GateType::Maj3 => {
                let ab = g.and(f(0), f(1));
                let ac = g.and(f(0), f(2));
                let bc = g.and(f(1), f(2));
                let o = g.or(ab, ac);
                g.or(o, bc)
            }
            GateType::Lut | GateType::Cell => {
                let lits: Vec<Lit> = node.fanins.iter().map(|n| map[n]).collect();
                synth::build_u64(&mut g, node.tt, node.arity(), &lits)
            }
        };
        map.insert(i, lit);
    }
    Ok(g.to_circuit(LogicType::Aig))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blast::blast;
    use crate::gen::random_aig;
    use crate::ir::NETWORK_TYPES;
    use crate::opt::strash;
    use crate::sim::check_equivalence;

    #[test]
    fn aig_embeds_into_gtg() {
        let a = random_aig(61, 6, 40, 3);
        let g = to_gtg(&a).unwrap();
        assert!(g.validate().is_empty());
        assert!(g
            .nodes()
            .all(|(_, n)| matches!(n.gate, GateType::Pi | GateType::Po | GateType::Not
                | GateType::And2 | GateType::Const0 | GateType::Const1)));
        assert!(check_equivalence(&a, &g, 64).unwrap().holds());
    }

    #[test]
    fn lut_maj_expands_equivalently() {
        let mut c = Circuit::new(LogicType::FpgaNetlist, "maj-lut");
        let a = c.add_pi("a");
        let b = c.add_pi("b");
        let d = c.add_pi("c");
        let l = c.add_lut(vec![a, b, d], 0xe8, "l").unwrap();
        c.add_po(l, "y");
        let g = to_gtg(&c).unwrap();
        assert!(g.validate().is_empty());
        assert!(check_equivalence(&c, &g, 8).unwrap().holds());
        let aig = to_aig(&c).unwrap();
        assert_eq!(aig.logic_type, LogicType::Aig);
        assert!(check_equivalence(&c, &aig, 8).unwrap().holds());
    }

    #[test]
    fn mig_maj_nodes_become_and_or_cones() {
        let a = strash(&random_aig(62, 6, 50, 3)).unwrap();
        let mig = blast(&a, LogicType::Mig).unwrap();
        let g = to_gtg(&mig).unwrap();
        assert!(g.validate().is_empty());
        assert_eq!(g.stats().count(GateType::Maj3), 0);
        assert!(check_equivalence(&mig, &g, 64).unwrap().holds());
    }

    #[test]
    fn to_aig_inverts_blasting() {
        let a = strash(&random_aig(63, 7, 60, 3)).unwrap();
        for target in NETWORK_TYPES {
            let b = blast(&a, target).unwrap();
            let back = to_aig(&b).unwrap();
            assert_eq!(back.logic_type, LogicType::Aig);
            assert!(back.validate().is_empty());
            assert!(
                check_equivalence(&a, &back, 128).unwrap().holds(),
                "{target}"
            );
        }
    }

    #[test]
    fn or2_uses_de_morgan_form() {
        let mut c = Circuit::new(LogicType::Gtg, "or");
        let a = c.add_pi("a");
        let b = c.add_pi("b");
        let o = c.add_gate(GateType::Or2, vec![a, b], "o").unwrap();
        c.add_po(o, "y");
        let aig = to_aig(&c).unwrap();
        assert!(check_equivalence(&c, &aig, 4).unwrap().holds());
        assert_eq!(aig.stats().and2_count(), 1);
    }
}
