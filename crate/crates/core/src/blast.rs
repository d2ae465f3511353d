//! Logic blasting: node-wise conversion of an optimized AIG into each
//! of the six functionally complete network types.
//!
//! AIG and XAG embed directly; OIG uses the De Morgan template; MIG
//! expresses AND as a majority gate with a constant-0 third input; the
//! gate-rich targets (PRIMARY, GTG) start from an AIG copy and run a
//! greedy peephole pass that covers single-fanout regions with larger
//! gates, largest template first. All conversions preserve
//! equivalence and per-output support sets.

use crate::error::{Error, Result};
use crate::ir::{Circuit, GateType, LogicType};
use std::collections::HashMap;

pub fn blast(a: &Circuit, target: LogicType) -> Result<Circuit> {
    if a.logic_type != LogicType::Aig {
        return Err(Error::usage(format!(
            "blast requires an AIG input, got {}",
            a.logic_type
        )));
    }
    match target {
        LogicType::Aig => Ok(a.clone()),
        LogicType::Xag => {
            let mut c = a.clone();
            c.logic_type = LogicType::Xag;
            Ok(c)
        }
        LogicType::Oig => to_oig(a),
        LogicType::Mig => to_mig(a),
        LogicType::Primary | LogicType::Gtg => {
            let mut c = a.clone();
            c.logic_type = target;
            peephole_merge(&c, target)
        }
        other => Err(Error::usage(format!("cannot blast to {other}"))),
    }
}

/// AND(a,b) becomes NOT(OR(NOT a, NOT b)); inverters are shared per
/// source node, so the result has at most four nodes per AND.
fn to_oig(a: &Circuit) -> Result<Circuit> {
    let order = a.topo_order()?;
    let mut c = Circuit::new(LogicType::Oig, a.name.clone());
    let mut map: HashMap<u32, u32> = HashMap::new();
    let mut nots: HashMap<u32, u32> = HashMap::new();
    let negate = |c: &mut Circuit, nots: &mut HashMap<u32, u32>, idx: u32| -> u32 {
        if let Some(&n) = nots.get(&idx) {
            return n;
        }
        let n = c
            .add_gate(GateType::Not, vec![idx], format!("n{}", c.len()))
            .unwrap();
        nots.insert(idx, n);
        n
    };
    for &i in &order {
        let node = a.node(i);
        let idx = match node.gate {
            GateType::Pi => c.add_pi(node.name.clone()),
            GateType::Po => {
                c.add_po(map[&node.fanins[0]], node.name.clone());
                continue;
            }
            GateType::Const0 => c.add_const(false),
            GateType::Const1 => c.add_const(true),
            GateType::Not => {
                let f = map[&node.fanins[0]];
                c.add_gate(GateType::Not, vec![f], node.name.clone())?
            }
            GateType::Buffer => {
                let f = map[&node.fanins[0]];
                c.add_gate(GateType::Buffer, vec![f], node.name.clone())?
            }
            GateType::And2 => {
                let na = negate(&mut c, &mut nots, map[&node.fanins[0]]);
                let nb = negate(&mut c, &mut nots, map[&node.fanins[1]]);
                let or = c.add_gate(GateType::Or2, vec![na, nb], format!("n{}", c.len()))?;
                c.add_gate(GateType::Not, vec![or], node.name.clone())?
            }
            other => return Err(Error::structure(format!("{other} is not an AIG gate"))),
        };
        map.insert(i, idx);
    }
    Ok(c)
}

/// AND(a,b) becomes MAJ3(a, b, CONST0); the constant node is shared.
fn to_mig(a: &Circuit) -> Result<Circuit> {
    let order = a.topo_order()?;
    let mut c = Circuit::new(LogicType::Mig, a.name.clone());
    let mut map: HashMap<u32, u32> = HashMap::new();
    for &i in &order {
        let node = a.node(i);
        let idx = match node.gate {
            GateType::Pi => c.add_pi(node.name.clone()),
            GateType::Po => {
                c.add_po(map[&node.fanins[0]], node.name.clone());
                continue;
            }
            GateType::Const0 => c.add_const(false),
            GateType::Const1 => c.add_const(true),
            GateType::Not | GateType::Buffer => {
                let f = map[&node.fanins[0]];
                c.add_gate(node.gate, vec![f], node.name.clone())?
            }
            GateType::And2 => {
                let zero = c.add_const(false);
                let fa = map[&node.fanins[0]];
                let fb = map[&node.fanins[1]];
                c.add_gate(GateType::Maj3, vec![fa, fb, zero], node.name.clone())?
            }
            other => return Err(Error::structure(format!("{other} is not an AIG gate"))),
        };
        map.insert(i, idx);
    }
    Ok(c)
}

// ------------------------------------------------------------ peephole

struct Match {
    gate: GateType,
    leaves: Vec<u32>,
    interior: Vec<u32>,
}

struct Matcher<'a> {
    c: &'a Circuit,
    fanout: Vec<u32>,
    consumed: Vec<bool>,
}

impl<'a> Matcher<'a> {
    fn single(&self, v: u32) -> bool {
        self.fanout[v as usize] == 1 && !self.consumed[v as usize]
    }

    fn gate(&self, v: u32) -> GateType {
        self.c.node(v).gate
    }

    fn fanins(&self, v: u32) -> &[u32] {
        &self.c.node(v).fanins
    }

    /// `v` as NOT(x) where the NOT can be absorbed.
    fn as_not(&self, v: u32) -> Option<u32> {
        (self.gate(v) == GateType::Not).then(|| self.fanins(v)[0])
    }

    /// Reads `x` as OR(a, b): either a real OR2 node or the De Morgan
    /// form NOT(AND2(NOT a, NOT b)). Returns leaves plus the interior
    /// nodes that the view absorbs (including `x` itself).
    fn or_view(&self, x: u32) -> Option<(u32, u32, Vec<u32>)> {
        if !self.single(x) {
            return None;
        }
        if self.gate(x) == GateType::Or2 {
            let f = self.fanins(x);
            return Some((f[0], f[1], vec![x]));
        }
        if self.gate(x) == GateType::Not {
            let u = self.fanins(x)[0];
            if self.single(u) && self.gate(u) == GateType::And2 {
                let [na, nb] = [self.fanins(u)[0], self.fanins(u)[1]];
                if self.single(na)
                    && self.single(nb)
                    && na != nb
                    && self.gate(na) == GateType::Not
                    && self.gate(nb) == GateType::Not
                {
                    let a = self.fanins(na)[0];
                    let b = self.fanins(nb)[0];
                    return Some((a, b, vec![x, u, na, nb]));
                }
            }
        }
        None
    }

    fn try_match(&self, v: u32, target: LogicType) -> Option<Match> {
        if target == LogicType::Gtg {
            for m in [
                Self::m_aoi21,
                Self::m_oai21,
                Self::m_mux,
                Self::m_nand3,
                Self::m_nor3,
                Self::m_nand2,
                Self::m_nor2,
                Self::m_xnor2,
            ] {
                if let Some(m) = m(self, v) {
                    return Some(m);
                }
            }
        } else {
            for m in [Self::m_nand2, Self::m_nor2_direct, Self::m_xnor2] {
                if let Some(m) = m(self, v) {
                    return Some(m);
                }
            }
        }
        None
    }

    /// AOI21(a,b,c) = ~((a&b) | c): either NOT over an OR-view with an
    /// AND operand, or the all-AND form AND(NOT(AND(a,b)), NOT c).
    fn m_aoi21(&self, v: u32) -> Option<Match> {
        if let Some(u) = self.as_not(v) {
            if let Some((x, y, mut ints)) = self.or_view(u) {
                for (w, c) in [(x, y), (y, x)] {
                    if self.single(w) && self.gate(w) == GateType::And2 && c != w {
                        let f = self.fanins(w);
                        ints.push(w);
                        return Some(Match {
                            gate: GateType::Aoi21,
                            leaves: vec![f[0], f[1], c],
                            interior: ints,
                        });
                    }
                }
            }
        }
        if self.gate(v) == GateType::And2 {
            let [p, q] = [self.fanins(v)[0], self.fanins(v)[1]];
            for (p, q) in [(p, q), (q, p)] {
                if p == q {
                    continue;
                }
                if self.single(p)
                    && self.single(q)
                    && self.gate(p) == GateType::Not
                    && self.gate(q) == GateType::Not
                {
                    let w = self.fanins(p)[0];
                    let c = self.fanins(q)[0];
                    if self.single(w) && self.gate(w) == GateType::And2 && w != c {
                        let f = self.fanins(w);
                        return Some(Match {
                            gate: GateType::Aoi21,
                            leaves: vec![f[0], f[1], c],
                            interior: vec![p, q, w],
                        });
                    }
                }
            }
        }
        None
    }

    /// OAI21(a,b,c) = ~((a|b) & c).
    fn m_oai21(&self, v: u32) -> Option<Match> {
        let u = self.as_not(v)?;
        if !self.single(u) || self.gate(u) != GateType::And2 {
            return None;
        }
        let [x, y] = [self.fanins(u)[0], self.fanins(u)[1]];
        for (w, c) in [(x, y), (y, x)] {
            if w == c {
                continue;
            }
            if let Some((a, b, mut ints)) = self.or_view(w) {
                ints.push(u);
                return Some(Match {
                    gate: GateType::Oai21,
                    leaves: vec![a, b, c],
                    interior: ints,
                });
            }
        }
        None
    }

    /// MUX21(a,b,s) = (~s & a) | (s & b); NMUX21 swaps the polarity of
    /// the select.
    fn m_mux(&self, v: u32) -> Option<Match> {
        let (x, y, mut ints) = self.or_view(v)?;
        if x == y
            || !self.single(x)
            || !self.single(y)
            || self.gate(x) != GateType::And2
            || self.gate(y) != GateType::And2
        {
            return None;
        }
        let xf = [self.fanins(x)[0], self.fanins(x)[1]];
        let yf = [self.fanins(y)[0], self.fanins(y)[1]];
        for xi in 0..2 {
            for yi in 0..2 {
                // candidate select: NOT(s) in x against plain s in y
                let ns = xf[xi];
                let s = yf[yi];
                if self.single(ns) && self.gate(ns) == GateType::Not && self.fanins(ns)[0] == s
                {
                    let a = xf[1 - xi];
                    let b = yf[1 - yi];
                    ints.extend([x, y, ns]);
                    return Some(Match {
                        gate: GateType::Mux21,
                        leaves: vec![a, b, s],
                        interior: ints,
                    });
                }
                // plain s in x against NOT(s) in y
                let s = xf[xi];
                let ns = yf[yi];
                if self.single(ns) && self.gate(ns) == GateType::Not && self.fanins(ns)[0] == s
                {
                    let a = xf[1 - xi];
                    let b = yf[1 - yi];
                    ints.extend([x, y, ns]);
                    return Some(Match {
                        gate: GateType::Nmux21,
                        leaves: vec![a, b, s],
                        interior: ints,
                    });
                }
            }
        }
        None
    }

    fn m_nand3(&self, v: u32) -> Option<Match> {
        let u = self.as_not(v)?;
        if !self.single(u) || self.gate(u) != GateType::And2 {
            return None;
        }
        let [x, y] = [self.fanins(u)[0], self.fanins(u)[1]];
        for (w, c) in [(x, y), (y, x)] {
            if w != c && self.single(w) && self.gate(w) == GateType::And2 {
                let f = self.fanins(w);
                return Some(Match {
                    gate: GateType::Nand3,
                    leaves: vec![f[0], f[1], c],
                    interior: vec![u, w],
                });
            }
        }
        None
    }

    fn m_nor3(&self, v: u32) -> Option<Match> {
        let u = self.as_not(v)?;
        let (x, y, mut ints) = self.or_view_noouter(u)?;
        for (w, c) in [(x, y), (y, x)] {
            if w == c {
                continue;
            }
            if let Some((a, b, ints2)) = self.or_view(w) {
                ints.extend(ints2);
                return Some(Match {
                    gate: GateType::Nor3,
                    leaves: vec![a, b, c],
                    interior: ints,
                });
            }
        }
        None
    }

    /// OR view of `u` when the caller has already absorbed a NOT above
    /// it (so `u` itself must be a plain OR2 or AND-of-NOTs without the
    /// outer inverter).
    fn or_view_noouter(&self, u: u32) -> Option<(u32, u32, Vec<u32>)> {
        if !self.single(u) {
            return None;
        }
        if self.gate(u) == GateType::Or2 {
            let f = self.fanins(u);
            return Some((f[0], f[1], vec![u]));
        }
        None
    }

    fn m_nand2(&self, v: u32) -> Option<Match> {
        let u = self.as_not(v)?;
        if self.single(u) && self.gate(u) == GateType::And2 {
            let f = self.fanins(u);
            Some(Match {
                gate: GateType::Nand2,
                leaves: vec![f[0], f[1]],
                interior: vec![u],
            })
        } else {
            None
        }
    }

    /// GTG NOR2 also recovers the De Morgan form.
    fn m_nor2(&self, v: u32) -> Option<Match> {
        let u = self.as_not(v)?;
        if let Some((a, b, ints)) = self.or_view(u) {
            return Some(Match {
                gate: GateType::Nor2,
                leaves: vec![a, b],
                interior: ints,
            });
        }
        None
    }

    fn m_nor2_direct(&self, v: u32) -> Option<Match> {
        let u = self.as_not(v)?;
        if self.single(u) && self.gate(u) == GateType::Or2 {
            let f = self.fanins(u);
            Some(Match {
                gate: GateType::Nor2,
                leaves: vec![f[0], f[1]],
                interior: vec![u],
            })
        } else {
            None
        }
    }

    fn m_xnor2(&self, v: u32) -> Option<Match> {
        let u = self.as_not(v)?;
        if self.single(u) && self.gate(u) == GateType::Xor2 {
            let f = self.fanins(u);
            Some(Match {
                gate: GateType::Xnor2,
                leaves: vec![f[0], f[1]],
                interior: vec![u],
            })
        } else {
            None
        }
    }
}

/// Greedy covering by larger gates: roots are visited outputs-first so
/// outer structures win, templates are tried largest first, and a
/// pattern only applies when its interior nodes have a single fanout.
pub fn peephole_merge(c: &Circuit, target: LogicType) -> Result<Circuit> {
    if !matches!(target, LogicType::Primary | LogicType::Gtg) {
        return Err(Error::usage(format!("peephole target must be PRIMARY or GTG, got {target}")));
    }
    for (i, node) in c.nodes() {
        let legal = target.allows(node.gate)
            || matches!(
                node.gate,
                GateType::Not | GateType::And2 | GateType::Or2 | GateType::Xor2
            );
        if !legal {
            return Err(Error::structure(format!(
                "node {i}: {} is not legal peephole input for {target}",
                node.gate
            )));
        }
    }
    let order = c.topo_order()?;
    let mut matcher = Matcher {
        c,
        fanout: c.fanout_counts(),
        consumed: vec![false; c.len()],
    };
    let mut matches: Vec<Option<Match>> = (0..c.len()).map(|_| None).collect();
    for &v in order.iter().rev() {
        if matcher.consumed[v as usize] {
            continue;
        }
        if let Some(m) = matcher.try_match(v, target) {
            for &i in &m.interior {
                matcher.consumed[i as usize] = true;
            }
            matches[v as usize] = Some(m);
        }
    }
    let consumed = matcher.consumed;
    let mut out = Circuit::new(target, c.name.clone());
    let mut map: HashMap<u32, u32> = HashMap::new();
    for &i in &order {
        if consumed[i as usize] {
            continue;
        }
        let node = c.node(i);
        let idx = if let Some(m) = &matches[i as usize] {
            let fanins: Vec<u32> = m.leaves.iter().map(|l| map[l]).collect();
            out.add_gate(m.gate, fanins, node.name.clone())?
        } else {
            match node.gate {
                GateType::Pi => out.add_pi(node.name.clone()),
                GateType::Po => {
                    out.add_po(map[&node.fanins[0]], node.name.clone());
                    continue;
                }
                GateType::Const0 => out.add_const(false),
                GateType::Const1 => out.add_const(true),
                _ => {
                    let fanins: Vec<u32> = node.fanins.iter().map(|f| map[f]).collect();
                    out.add_gate(node.gate, fanins, node.name.clone())?
                }
            }
        };
        map.insert(i, idx);
    }
    Ok(out)
}
