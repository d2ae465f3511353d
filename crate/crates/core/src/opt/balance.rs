//! Depth-minimizing AND-tree reassociation.
//!
//! Maximal conjunctions are flattened (descending through
//! non-complemented, single-fanout AND fanins) and rebuilt by repeatedly
//! pairing the two shallowest operands, so the result is never deeper
//! than the input tree over the same leaves.

use super::saig::{Lit, Saig, LIT_TRUE};
use crate::error::Result;
use crate::ir::{Circuit, LogicType};
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

pub fn run(c: &Circuit) -> Result<Circuit> {
    let old = Saig::from_circuit(c)?;
    let mut fresh = Saig::new(old.name.clone(), old.pi_names.clone());

    // fanout counts in the source graph; shared nodes stay shared
    let mut refs: HashMap<u32, u32> = HashMap::new();
    for i in 0..old.and_count() {
        let var = old.num_pis() as u32 + 1 + i as u32;
        let (a, b) = old.fanins(var);
        *refs.entry(a.var()).or_insert(0) += 1;
        *refs.entry(b.var()).or_insert(0) += 1;
    }
    for po in old.pos() {
        *refs.entry(po.var()).or_insert(0) += 1;
    }

    // image of every variable in the rebuilt graph, filled bottom-up
    let mut image: HashMap<u32, Lit> = HashMap::new();
    image.insert(0, super::saig::LIT_FALSE);
    for i in 0..old.num_pis() {
        image.insert(old.pi_lit(i).var(), fresh.pi_lit(i));
    }
    for i in 0..old.and_count() {
        let var = old.num_pis() as u32 + 1 + i as u32;
        let lit = balance_node(&old, &mut fresh, &refs, &image, var);
        image.insert(var, lit);
    }
    let po_names = old.po_names.clone();
    for (po, name) in old.pos().iter().zip(po_names) {
        let img = image[&po.var()];
        fresh.add_po(img.with_compl(img.compl() ^ po.compl()), name);
    }
    Ok(fresh.to_circuit(LogicType::Aig))
}

fn balance_node(
    old: &Saig,
    fresh: &mut Saig,
    refs: &HashMap<u32, u32>,
    image: &HashMap<u32, Lit>,
    root: u32,
) -> Lit {
    // flatten the maximal AND tree rooted here
    let mut leaves: Vec<Lit> = Vec::new();
    let (a, b) = old.fanins(root);
    let mut stack = vec![a, b];
    while let Some(lit) = stack.pop() {
        let v = lit.var();
        if !lit.compl() && old.is_and(v) && refs.get(&v).copied().unwrap_or(0) == 1 {
            let (fa, fb) = old.fanins(v);
            stack.push(fa);
            stack.push(fb);
        } else {
            let img = image[&v];
            leaves.push(img.with_compl(img.compl() ^ lit.compl()));
        }
    }
    // combine the two shallowest operands first (ties broken by literal
    // value for determinism)
    let mut heap: BinaryHeap<Reverse<(u32, u32)>> = leaves
        .into_iter()
        .map(|l| Reverse((fresh.matlvl(l), l.0)))
        .collect();
    let mut acc = LIT_TRUE;
    while let Some(Reverse((_, raw))) = heap.pop() {
        let lit = Lit(raw);
        if let Some(Reverse((_, raw2))) = heap.pop() {
            let joined = fresh.and(lit, Lit(raw2));
            heap.push(Reverse((fresh.matlvl(joined), joined.0)));
        } else {
            acc = lit;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::GateType;
    use crate::sim::check_equivalence;

    /// chain of ANDs: a&b&c&d&e&f&g&h built left to right, depth 7
    fn chain(n: usize) -> Circuit {
        let mut c = Circuit::new(LogicType::Aig, "chain");
        let pis: Vec<u32> = (0..n).map(|i| c.add_pi(format!("x{i}"))).collect();
        let mut acc = pis[0];
        for &p in &pis[1..] {
            acc = c
                .add_gate(GateType::And2, vec![acc, p], format!("a{p}"))
                .unwrap();
        }
        c.add_po(acc, "y");
        c
    }

    #[test]
    fn chain_becomes_logarithmic() {
        let c = chain(8);
        assert_eq!(c.stats().depth, 7);
        let b = run(&c).unwrap();
        assert_eq!(b.stats().depth, 3);
        assert!(check_equivalence(&c, &b, 64).unwrap().holds());
    }

    #[test]
    fn never_deepens() {
        let mut c = Circuit::new(LogicType::Aig, "t");
        let a = c.add_pi("a");
        let b = c.add_pi("b");
        let d = c.add_pi("d");
        let n1 = c.add_gate(GateType::Not, vec![a], "n1").unwrap();
        let g1 = c.add_gate(GateType::And2, vec![n1, b], "g1").unwrap();
        let g2 = c.add_gate(GateType::And2, vec![g1, d], "g2").unwrap();
        let n2 = c.add_gate(GateType::Not, vec![g2], "n2").unwrap();
        c.add_po(n2, "y");
        let before = c.stats().depth;
        let out = run(&c).unwrap();
        assert!(out.stats().depth <= before);
        assert!(check_equivalence(&c, &out, 64).unwrap().holds());
    }
}
