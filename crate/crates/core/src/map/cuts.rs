//! Bottom-up priority-cut enumeration.

use crate::error::{Error, Result};
use crate::ir::{Circuit, GateType};
use crate::tt;

/// Default number of cuts kept per node.
pub const DEFAULT_CUT_LIMIT: usize = 8;

/// A K-feasible cut: a complete frontier of ≤K leaves below an implicit
/// root, with the root's function over the leaves (fanin order = leaf
/// order, tiled to 64 bits).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cut {
    pub leaves: Vec<u32>,
    pub tt: u64,
}

impl Cut {
    /// The single-leaf cut `{node}` with the identity function.
    pub fn trivial(node: u32) -> Cut {
        Cut {
            leaves: vec![node],
            tt: tt::VAR_MASKS[0],
        }
    }

    pub fn is_trivial(&self, root: u32) -> bool {
        self.leaves.len() == 1 && self.leaves[0] == root
    }
}

/// Evaluates a local gate function on per-minterm fanin words.
fn apply_local(node_tt: u64, fanin_words: &[u64], n: usize) -> u64 {
    tt::from_fn(n, |j| {
        let mut idx = 0usize;
        for (i, w) in fanin_words.iter().enumerate() {
            if (w >> j) & 1 == 1 {
                idx |= 1 << i;
            }
        }
        (node_tt >> idx) & 1 == 1
    })
}

/// Per-node cut lists: merged cartesian products of fanin cuts, filtered
/// to ≤K leaves, keeping the `limit` best (fewer leaves first, then
/// lower depth) plus the trivial cut. PO nodes get no cuts.
pub fn enumerate_cuts(c: &Circuit, k: usize, limit: usize) -> Result<Vec<Vec<Cut>>> {
    if k == 0 || k > 6 {
        return Err(Error::usage(format!("cut size K must be 1..=6, got {k}")));
    }
    if let Some(v) = c.validate().first() {
        return Err(Error::structure(format!("invalid circuit: {v}")));
    }
    let order = c.topo_order()?;
    let mut cuts: Vec<Vec<Cut>> = vec![Vec::new(); c.len()];
    // depth estimate used for cut priority: min over cuts of the cut level
    let mut best_level: Vec<u32> = vec![0; c.len()];
    for &i in &order {
        let node = c.node(i);
        match node.gate {
            GateType::Pi | GateType::Const0 | GateType::Const1 => {
                cuts[i as usize].push(Cut::trivial(i));
            }
            GateType::Po => {
                best_level[i as usize] = best_level[node.fanins[0] as usize];
            }
            _ => {
                let mut merged: Vec<(Cut, u32)> = Vec::new();
                let mut pick = vec![0usize; node.fanins.len()];
                'product: loop {
                    let parts: Vec<&Cut> = node
                        .fanins
                        .iter()
                        .zip(&pick)
                        .map(|(&f, &p)| &cuts[f as usize][p])
                        .collect();
                    if let Some(cut) = merge(node.tt, &parts, k) {
                        if !merged.iter().any(|(m, _)| m.leaves == cut.leaves) {
                            let level = 1 + cut
                                .leaves
                                .iter()
                                .map(|&l| best_level[l as usize])
                                .max()
                                .unwrap_or(0);
                            merged.push((cut, level));
                        }
                    }
                    for d in 0..pick.len() {
                        pick[d] += 1;
                        if pick[d] < cuts[node.fanins[d] as usize].len() {
                            continue 'product;
                        }
                        pick[d] = 0;
                    }
                    break;
                }
                merged.sort_by(|(a, la), (b, lb)| {
                    (a.leaves.len(), *la, &a.leaves).cmp(&(b.leaves.len(), *lb, &b.leaves))
                });
                // keep the lowest-level cut alive even if the size-first
                // truncation would drop it, so depth-optimal covers
                // stay reachable
                let depth_best = merged
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, (c, l))| (*l, c.leaves.len(), c.leaves.clone()))
                    .map(|(i, _)| i);
                if let Some(db) = depth_best {
                    if db >= limit && limit > 0 {
                        let keep = merged[db].clone();
                        merged.truncate(limit);
                        merged[limit - 1] = keep;
                    } else {
                        merged.truncate(limit);
                    }
                } else {
                    merged.truncate(limit);
                }
                best_level[i as usize] = merged
                    .iter()
                    .map(|(_, l)| *l)
                    .min()
                    .unwrap_or(u32::MAX / 2);
                let mut list: Vec<Cut> = merged.into_iter().map(|(c, _)| c).collect();
                list.push(Cut::trivial(i));
                cuts[i as usize] = list;
            }
        }
    }
    Ok(cuts)
}

/// Unions the leaf sets of the fanin cuts and recomputes the function.
fn merge(node_tt: u64, parts: &[&Cut], k: usize) -> Option<Cut> {
    let mut leaves: Vec<u32> = Vec::new();
    for p in parts {
        for &l in &p.leaves {
            if let Err(pos) = leaves.binary_search(&l) {
                leaves.insert(pos, l);
            }
        }
        if leaves.len() > k {
            return None;
        }
    }
    let n = leaves.len();
    let words: Vec<u64> = parts
        .iter()
        .map(|p| {
            let map: Vec<usize> = p
                .leaves
                .iter()
                .map(|l| leaves.binary_search(l).unwrap())
                .collect();
            tt::remap(p.tt, p.leaves.len(), &map, n)
        })
        .collect();
    let tt = apply_local(node_tt, &words, n);
    Some(Cut { leaves, tt })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::random_aig;
    use crate::ir::LogicType;

    #[test]
    fn and2_over_two_pis() {
        let mut c = Circuit::new(LogicType::Aig, "and");
        let a = c.add_pi("a");
        let b = c.add_pi("b");
        let g = c.add_gate(GateType::And2, vec![a, b], "g").unwrap();
        c.add_po(g, "y");
        let cuts = enumerate_cuts(&c, 4, 8).unwrap();
        let list = &cuts[g as usize];
        assert_eq!(list.len(), 2);
        assert_eq!(list[0].leaves, vec![a, b]);
        assert_eq!(list[0].tt, tt::tile(0x8, 2));
        assert!(list[1].is_trivial(g));
    }

    #[test]
    fn and_tree_root_has_four_pi_cut() {
        // 3-level structure: AND(AND(a,b), AND(c,d))
        let mut c = Circuit::new(LogicType::Aig, "and4");
        let pis: Vec<u32> = (0..4).map(|i| c.add_pi(format!("x{i}"))).collect();
        let l = c
            .add_gate(GateType::And2, vec![pis[0], pis[1]], "l")
            .unwrap();
        let r = c
            .add_gate(GateType::And2, vec![pis[2], pis[3]], "r")
            .unwrap();
        let root = c.add_gate(GateType::And2, vec![l, r], "root").unwrap();
        c.add_po(root, "y");
        let cuts = enumerate_cuts(&c, 4, 8).unwrap();
        let found = cuts[root as usize]
            .iter()
            .find(|cut| cut.leaves == pis)
            .expect("4-PI cut");
        // AND4: only the all-ones minterm is set
        assert_eq!(found.tt, tt::tile(1u64 << 15, 4));
    }

    #[test]
    fn leaf_sets_bounded_by_k() {
        for seed in 0..100u64 {
            let c = random_aig(seed, 6, 30, 2);
            for k in [2usize, 4, 6] {
                let cuts = enumerate_cuts(&c, k, 8).unwrap();
                for list in &cuts {
                    for cut in list {
                        assert!(cut.leaves.len() <= k);
                    }
                }
            }
        }
        assert!(enumerate_cuts(&random_aig(0, 4, 10, 1), 7, 8).is_err());
    }
}
