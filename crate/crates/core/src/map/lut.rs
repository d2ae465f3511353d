//! Cut-based LUT mapping for the FPGA backend.

use super::cuts::{enumerate_cuts, Cut, DEFAULT_CUT_LIMIT};
use crate::error::{Error, Result};
use crate::ir::{Circuit, GateType, LogicType};
use crate::sim::check_equivalence;

pub const DEFAULT_LUT_K: usize = 6;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LutMode {
    Area,
    Depth,
}

impl LutMode {
    pub fn name(self) -> &'static str {
        match self {
            LutMode::Area => "area",
            LutMode::Depth => "depth",
        }
    }

    pub fn from_name(s: &str) -> Result<LutMode> {
        match s {
            "area" => Ok(LutMode::Area),
            "depth" => Ok(LutMode::Depth),
            other => Err(Error::usage(format!("unknown LUT mapping mode `{other}`"))),
        }
    }
}

/// Covers an AIG with K-input LUTs. Depth mode picks per node the cut
/// minimizing the mapped level (tie-break fewer leaves), area mode
/// minimizes the leaf count (tie-break level); the cover is traced from
/// the POs backward and each chosen cut becomes one LUT whose table is
/// the cut function.
pub fn map_lut(a: &Circuit, k: usize, mode: LutMode) -> Result<Circuit> {
    if a.logic_type != LogicType::Aig {
        return Err(Error::usage(format!(
            "LUT mapping requires an AIG input, got {}",
            a.logic_type
        )));
    }
    let cuts = enumerate_cuts(a, k, DEFAULT_CUT_LIMIT)?;
    let order = a.topo_order()?;

    // phase 1: per-node best cut. Area mode scores a cut by the LUT
    // count of the cone it implies (1 + the leaves' costs), which is
    // what the cover actually pays; raw leaf count breaks ties.
    let mut level: Vec<u32> = vec![0; a.len()];
    let mut cost: Vec<u64> = vec![0; a.len()];
    let mut chosen: Vec<Option<usize>> = vec![None; a.len()];
    for &i in &order {
        let node = a.node(i);
        if matches!(
            node.gate,
            GateType::Pi | GateType::Po | GateType::Const0 | GateType::Const1
        ) {
            continue;
        }
        let mut best: Option<((u64, u64, u64), usize)> = None;
        for (ci, cut) in cuts[i as usize].iter().enumerate() {
            if cut.is_trivial(i) {
                continue;
            }
            let lvl = 1 + cut
                .leaves
                .iter()
                .map(|&l| level[l as usize] as u64)
                .max()
                .unwrap_or(0);
            let cone = 1 + cut
                .leaves
                .iter()
                .map(|&l| cost[l as usize])
                .sum::<u64>();
            let size = cut.leaves.len() as u64;
            let key = match mode {
                LutMode::Depth => (lvl, size, cone),
                LutMode::Area => (cone, size, lvl),
            };
            if best.is_none() || key < best.unwrap().0 {
                best = Some((key, ci));
            }
        }
        let (_, ci) = best
            .ok_or_else(|| Error::structure(format!("node {i}: no feasible cut at K={k}")))?;
        chosen[i as usize] = Some(ci);
        let cut = &cuts[i as usize][ci];
        level[i as usize] = 1 + cut
            .leaves
            .iter()
            .map(|&l| level[l as usize])
            .max()
            .unwrap_or(0);
        cost[i as usize] = 1 + cut.leaves.iter().map(|&l| cost[l as usize]).sum::<u64>();
    }

    // phase 2: trace the cover from the POs backward
    let mut needed = vec![false; a.len()];
    let mut stack: Vec<u32> = a.pos().iter().map(|&p| a.node(p).fanins[0]).collect();
    while let Some(i) = stack.pop() {
        if needed[i as usize] {
            continue;
        }
        needed[i as usize] = true;
        if let Some(ci) = chosen[i as usize] {
            stack.extend(cuts[i as usize][ci].leaves.iter().copied());
        }
    }

    let mut out = Circuit::new(LogicType::FpgaNetlist, a.name.clone());
    let mut map: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
    for &i in &order {
        let node = a.node(i);
        match node.gate {
            GateType::Pi => {
                map.insert(i, out.add_pi(node.name.clone()));
            }
            GateType::Po => {
                out.add_po(map[&node.fanins[0]], node.name.clone());
            }
            GateType::Const0 if needed[i as usize] => {
                map.insert(i, out.add_const(false));
            }
            GateType::Const1 if needed[i as usize] => {
                map.insert(i, out.add_const(true));
            }
            _ if needed[i as usize] => {
                let cut: &Cut = &cuts[i as usize][chosen[i as usize].unwrap()];
                let fanins: Vec<u32> = cut.leaves.iter().map(|l| map[l]).collect();
                map.insert(i, out.add_lut(fanins, cut.tt, node.name.clone())?);
            }
            _ => {}
        }
    }
    match check_equivalence(a, &out, 64)? {
        v if v.holds() => Ok(out),
        _ => Err(Error::Verification(
            "LUT mapping changed the function".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::random_aig;
    use crate::opt::strash;

    fn and_tree(n: usize) -> Circuit {
        let mut c = Circuit::new(LogicType::Aig, format!("and{n}"));
        let mut sig: Vec<u32> = (0..n).map(|i| c.add_pi(format!("x{i}"))).collect();
        while sig.len() > 1 {
            let mut next = Vec::new();
            for pair in sig.chunks(2) {
                if pair.len() == 2 {
                    next.push(
                        c.add_gate(GateType::And2, vec![pair[0], pair[1]], format!("g{}", c.len()))
                            .unwrap(),
                    );
                } else {
                    next.push(pair[0]);
                }
            }
            sig = next;
        }
        c.add_po(sig[0], "y");
        c
    }

    #[test]
    fn six_input_and_tree_is_one_lut() {
        let c = and_tree(6);
        let m = map_lut(&c, 6, LutMode::Area).unwrap();
        assert_eq!(m.stats().count(GateType::Lut), 1);
        assert_eq!(m.stats().depth, 1);
    }

    #[test]
    fn eight_input_and_tree_depth_mode_is_two_levels() {
        let c = and_tree(8);
        let m = map_lut(&c, 6, LutMode::Depth).unwrap();
        assert_eq!(m.stats().depth, 2);
    }

    #[test]
    fn mappings_are_equivalent_and_depth_mode_is_never_deeper() {
        for seed in [11u64, 12, 13] {
            let c = strash(&random_aig(seed, 10, 90, 4)).unwrap();
            let area = map_lut(&c, 6, LutMode::Area).unwrap();
            let depth = map_lut(&c, 6, LutMode::Depth).unwrap();
            assert!(check_equivalence(&c, &area, 256).unwrap().holds());
            assert!(check_equivalence(&c, &depth, 256).unwrap().holds());
            assert!(depth.stats().depth <= area.stats().depth);
            for (_, n) in area.nodes() {
                if n.gate == GateType::Lut {
                    assert!(n.arity() <= 6);
                }
            }
        }
    }
}
