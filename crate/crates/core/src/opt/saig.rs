//! Internal structurally hashed AIG with complement edges.
//!
//! The optimization passes work on this compact literal representation
//! and convert back to the explicit-NOT [`Circuit`] form at their
//! boundaries. Conversion back materializes one shared NOT node per
//! distinct complemented literal, so circuit depth equals the
//! materialized level tracked here.

use crate::error::{Error, Result};
use crate::ir::{Circuit, GateType, LogicType};
use std::collections::HashMap;

/// A literal: variable index times two plus a complement bit. Variable 0
/// is constant false, variables `1..=num_pis` are the PIs, AND nodes
/// follow.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Lit(pub u32);

pub const LIT_FALSE: Lit = Lit(0);
pub const LIT_TRUE: Lit = Lit(1);

impl Lit {
    pub fn from_var(var: u32, compl: bool) -> Lit {
        Lit(var * 2 + compl as u32)
    }

    pub fn var(self) -> u32 {
        self.0 / 2
    }

    pub fn compl(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    pub fn with_compl(self, c: bool) -> Lit {
        Lit(self.0 & !1 | c as u32)
    }
}

#[derive(Clone, Debug)]
pub struct Saig {
    pub name: String,
    pub(crate) num_pis: usize,
    /// Fanins of AND node `i` (variable `num_pis + 1 + i`), stored in
    /// creation order, which is always topological.
    pub(crate) ands: Vec<(Lit, Lit)>,
    pub(crate) strash: HashMap<(Lit, Lit), u32>,
    /// Materialized level per variable (complement adds one on query).
    pub(crate) level: Vec<u32>,
    /// Replacement indirection used by the passes; identity by default.
    pub(crate) repl: Vec<Lit>,
    /// Variables excluded from hash reuse (candidates must build fresh
    /// copies instead of reviving them).
    pub(crate) no_reuse: Vec<bool>,
    pub(crate) pos: Vec<Lit>,
    pub(crate) pi_names: Vec<String>,
    pub(crate) po_names: Vec<String>,
}

impl Saig {
    pub fn new(name: impl Into<String>, pi_names: Vec<String>) -> Saig {
        let num_pis = pi_names.len();
        Saig {
            name: name.into(),
            num_pis,
            ands: Vec::new(),
            strash: HashMap::new(),
            level: vec![0; num_pis + 1],
            repl: (0..num_pis as u32 + 1).map(|v| Lit::from_var(v, false)).collect(),
            no_reuse: vec![false; num_pis + 1],
            pos: Vec::new(),
            pi_names,
            po_names: Vec::new(),
        }
    }

    pub fn num_pis(&self) -> usize {
        self.num_pis
    }

    pub fn num_vars(&self) -> u32 {
        (1 + self.num_pis + self.ands.len()) as u32
    }

    pub fn and_count(&self) -> usize {
        self.ands.len()
    }

    pub fn pi_lit(&self, i: usize) -> Lit {
        Lit::from_var(i as u32 + 1, false)
    }

    pub fn is_and(&self, var: u32) -> bool {
        var as usize > self.num_pis
    }

    pub fn fanins(&self, var: u32) -> (Lit, Lit) {
        self.ands[var as usize - self.num_pis - 1]
    }

    pub fn pos(&self) -> &[Lit] {
        &self.pos
    }

    pub fn add_po(&mut self, lit: Lit, name: impl Into<String>) {
        let r = self.resolve(lit);
        self.pos.push(r);
        self.po_names.push(name.into());
    }

    /// Chases the replacement indirection, composing complements.
    pub fn resolve(&self, mut lit: Lit) -> Lit {
        loop {
            let r = self.repl[lit.var() as usize];
            if r.var() == lit.var() {
                return lit.with_compl(lit.compl() ^ r.compl());
            }
            lit = Lit(r.0 ^ lit.compl() as u32);
        }
    }

    pub fn set_repl(&mut self, var: u32, lit: Lit) {
        self.repl[var as usize] = lit;
    }

    /// Level of the materialized node for `lit` (a complemented literal
    /// costs one extra level for its NOT node; complements of the
    /// constant are free).
    pub fn matlvl(&self, lit: Lit) -> u32 {
        let lit = self.resolve(lit);
        let base = self.level[lit.var() as usize];
        base + (lit.compl() && lit.var() != 0) as u32
    }

    /// Structurally hashed AND with constant propagation.
    pub fn and(&mut self, a: Lit, b: Lit) -> Lit {
        let a = self.resolve(a);
        let b = self.resolve(b);
        if a == LIT_FALSE || b == LIT_FALSE || a == b.not() {
            return LIT_FALSE;
        }
        if a == LIT_TRUE {
            return b;
        }
        if b == LIT_TRUE || a == b {
            return a;
        }
        let key = if a <= b { (a, b) } else { (b, a) };
        if let Some(&var) = self.strash.get(&key) {
            if !self.no_reuse[var as usize] {
                return Lit::from_var(var, false);
            }
        }
        let var = self.num_vars();
        self.ands.push(key);
        self.level
            .push(1 + self.matlvl(key.0).max(self.matlvl(key.1)));
        self.repl.push(Lit::from_var(var, false));
        self.no_reuse.push(false);
        self.strash.insert(key, var);
        Lit::from_var(var, false)
    }

    pub fn or(&mut self, a: Lit, b: Lit) -> Lit {
        self.and(a.not(), b.not()).not()
    }

    pub fn xor(&mut self, a: Lit, b: Lit) -> Lit {
        let t0 = self.and(a, b.not());
        let t1 = self.and(a.not(), b);
        self.or(t0, t1)
    }

    pub fn mux(&mut self, sel: Lit, then_lit: Lit, else_lit: Lit) -> Lit {
        let t = self.and(sel, then_lit);
        let e = self.and(sel.not(), else_lit);
        self.or(t, e)
    }

    /// Number of AND nodes created so far; used with
    /// [`Saig::rollback`] to discard rejected candidate logic.
    pub fn checkpoint(&self) -> usize {
        self.ands.len()
    }

    /// Removes all AND nodes created after `cp`. The caller guarantees
    /// nothing alive references them.
    pub fn rollback(&mut self, cp: usize) {
        while self.ands.len() > cp {
            let key = self.ands.pop().unwrap();
            let var = self.num_vars();
            if self.strash.get(&key) == Some(&var) {
                self.strash.remove(&key);
            }
            self.level.pop();
            self.repl.pop();
            self.no_reuse.pop();
        }
    }

    /// Builds the internal form from an explicit-NOT AIG circuit.
    pub fn from_circuit(c: &Circuit) -> Result<Saig> {
        let order = c.topo_order()?;
        let pi_names: Vec<String> = c.pis().iter().map(|&i| c.node(i).name.clone()).collect();
        let mut g = Saig::new(c.name.clone(), pi_names);
        let pi_pos: HashMap<u32, usize> =
            c.pis().iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let mut map: HashMap<u32, Lit> = HashMap::new();
        for &i in &order {
            let node = c.node(i);
            let lit = match node.gate {
                GateType::Pi => g.pi_lit(pi_pos[&i]),
                GateType::Const0 => LIT_FALSE,
                GateType::Const1 => LIT_TRUE,
                GateType::Not => map[&node.fanins[0]].not(),
                GateType::Buffer => map[&node.fanins[0]],
                GateType::And2 => {
                    let a = map[&node.fanins[0]];
                    let b = map[&node.fanins[1]];
                    g.and(a, b)
                }
                GateType::Po => {
                    let f = map[&node.fanins[0]];
                    g.add_po(f, node.name.clone());
                    continue;
                }
                other => {
                    return Err(Error::structure(format!(
                        "{other} is not an AIG gate"
                    )))
                }
            };
            map.insert(i, lit);
        }
        Ok(g)
    }

    /// Variables of AND nodes reachable from the POs, fanins first.
    /// Replacement indirection can point fanins at higher-numbered
    /// variables, so this is a post-order DFS rather than an index scan.
    fn alive_vars(&self) -> Vec<u32> {
        let mut order = Vec::new();
        let mut visited = vec![false; self.num_vars() as usize];
        let mut stack: Vec<(u32, bool)> = self
            .pos
            .iter()
            .rev()
            .map(|&l| self.resolve(l).var())
            .filter(|&v| self.is_and(v))
            .map(|v| (v, false))
            .collect();
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                order.push(v);
                continue;
            }
            if visited[v as usize] {
                continue;
            }
            visited[v as usize] = true;
            stack.push((v, true));
            let (a, b) = self.fanins(v);
            for f in [a, b] {
                let f = self.resolve(f);
                if self.is_and(f.var()) && !visited[f.var() as usize] {
                    stack.push((f.var(), false));
                }
            }
        }
        order
    }

    pub fn alive_and_count(&self) -> usize {
        self.alive_vars().len()
    }

    /// Materializes the explicit-NOT circuit: dead nodes dropped, one
    /// shared NOT per distinct complemented literal.
    pub fn to_circuit(&self, logic_type: LogicType) -> Circuit {
        let mut c = Circuit::new(logic_type, self.name.clone());
        let mut map: HashMap<u32, u32> = HashMap::new();
        let mut not_map: HashMap<u32, u32> = HashMap::new();
        for (i, name) in self.pi_names.iter().enumerate() {
            let idx = c.add_pi(name.clone());
            map.insert(self.pi_lit(i).var(), idx);
        }
        let alive = self.alive_vars();
        for &v in &alive {
            let (a, b) = self.fanins(v);
            let fa = self.lit_index(&mut c, &map, &mut not_map, a);
            let fb = self.lit_index(&mut c, &map, &mut not_map, b);
            let idx = c
                .add_gate(GateType::And2, vec![fa, fb], format!("n{}", c.len()))
                .unwrap();
            map.insert(v, idx);
        }
        for (po, name) in self.pos.iter().zip(&self.po_names) {
            let idx = self.lit_index(&mut c, &map, &mut not_map, *po);
            c.add_po(idx, name.clone());
        }
        c
    }

    fn lit_index(
        &self,
        c: &mut Circuit,
        map: &HashMap<u32, u32>,
        not_map: &mut HashMap<u32, u32>,
        lit: Lit,
    ) -> u32 {
        let lit = self.resolve(lit);
        if lit == LIT_FALSE {
            return c.add_const(false);
        }
        if lit == LIT_TRUE {
            return c.add_const(true);
        }
        let base = map[&lit.var()];
        if !lit.compl() {
            return base;
        }
        if let Some(&n) = not_map.get(&lit.var()) {
            return n;
        }
        let n = c
            .add_gate(GateType::Not, vec![base], format!("n{}", c.len()))
            .unwrap();
        not_map.insert(lit.var(), n);
        n
    }
}

/// Structural hashing as a circuit-to-circuit pass: merges identical
/// gates, propagates constants, collapses double inversion, eliminates
/// buffers and removes dead nodes.
pub fn strash(c: &Circuit) -> Result<Circuit> {
    if c.logic_type != LogicType::Aig {
        return Err(Error::usage(format!(
            "strash requires an AIG input, got {}",
            c.logic_type
        )));
    }
    Ok(Saig::from_circuit(c)?.to_circuit(LogicType::Aig))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_propagation() {
        let mut g = Saig::new("t", vec!["a".into(), "b".into()]);
        let a = g.pi_lit(0);
        let b = g.pi_lit(1);
        assert_eq!(g.and(a, LIT_FALSE), LIT_FALSE);
        assert_eq!(g.and(a, LIT_TRUE), a);
        assert_eq!(g.and(a, a), a);
        assert_eq!(g.and(a, a.not()), LIT_FALSE);
        let x = g.and(a, b);
        let y = g.and(b, a);
        assert_eq!(x, y);
        assert_eq!(g.and_count(), 1);
    }

    #[test]
    fn strash_merges_duplicates() {
        let mut c = Circuit::new(LogicType::Aig, "dup");
        let a = c.add_pi("a");
        let b = c.add_pi("b");
        let g1 = c.add_gate(GateType::And2, vec![a, b], "g1").unwrap();
        let g2 = c.add_gate(GateType::And2, vec![a, b], "g2").unwrap();
        let o = c.add_gate(GateType::And2, vec![g1, g2], "o").unwrap();
        c.add_po(o, "y");
        let s = strash(&c).unwrap();
        assert_eq!(s.stats().and2_count(), 1);
        let v = crate::sim::check_equivalence(&c, &s, 64).unwrap();
        assert!(v.holds());
    }

    #[test]
    fn double_negation_and_buffers() {
        let mut c = Circuit::new(LogicType::Aig, "nn");
        let a = c.add_pi("a");
        let n1 = c.add_gate(GateType::Not, vec![a], "n1").unwrap();
        let n2 = c.add_gate(GateType::Not, vec![n1], "n2").unwrap();
        let bf = c.add_gate(GateType::Buffer, vec![n2], "b").unwrap();
        c.add_po(bf, "y");
        let s = strash(&c).unwrap();
        // collapses to PO directly over the PI
        assert_eq!(s.stats().inverter_count(), 0);
        assert_eq!(s.stats().count(GateType::Buffer), 0);
        assert!(crate::sim::check_equivalence(&c, &s, 64).unwrap().holds());
    }

    #[test]
    fn materialized_levels_match_circuit_depth() {
        let mut g = Saig::new("t", vec!["a".into(), "b".into(), "c".into()]);
        let a = g.pi_lit(0);
        let b = g.pi_lit(1);
        let cc = g.pi_lit(2);
        let o = g.or(a, b); // complemented AND internally
        let x = g.and(o, cc);
        g.add_po(x, "y");
        let circuit = g.to_circuit(LogicType::Aig);
        assert_eq!(circuit.stats().depth as u32, g.matlvl(x));
    }

    #[test]
    fn rollback_discards_candidates() {
        let mut g = Saig::new("t", vec!["a".into(), "b".into()]);
        let a = g.pi_lit(0);
        let b = g.pi_lit(1);
        let keep = g.and(a, b);
        let cp = g.checkpoint();
        let tmp = g.and(a, b.not());
        assert_eq!(g.and_count(), 2);
        g.rollback(cp);
        assert_eq!(g.and_count(), 1);
        // the survivor is still hashed, the temporary is gone
        assert_eq!(g.and(a, b), keep);
        let again = g.and(a, b.not());
        assert_eq!(again.var(), tmp.var());
    }
}
