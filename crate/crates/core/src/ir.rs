//! The universal circuit data model: a typed combinational DAG with a
//! 64-bit local truth table per node. Every representation the toolkit
//! handles (AIG, OIG, XAG, MIG, PRIMARY, GTG and mapped netlists) is an
//! instance of [`Circuit`] restricted to the gate set of its
//! [`LogicType`].

use crate::error::{Error, Result};
use crate::tt;
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

/// The gate pool. `Lut` and `Cell` carry their function in the node's
/// truth table; every other tag has a fixed arity and canonical function.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum GateType {
    Const0,
    Const1,
    Pi,
    Po,
    Not,
    Buffer,
    And2,
    Nand2,
    Or2,
    Nor2,
    Xor2,
    Xnor2,
    Maj3,
    Nand3,
    Nor3,
    Mux21,
    Nmux21,
    Aoi21,
    Oai21,
    Lut,
    Cell,
}

pub const GATE_TYPE_COUNT: usize = 21;

impl GateType {
    pub const ALL: [GateType; GATE_TYPE_COUNT] = [
        GateType::Const0,
        GateType::Const1,
        GateType::Pi,
        GateType::Po,
        GateType::Not,
        GateType::Buffer,
        GateType::And2,
        GateType::Nand2,
        GateType::Or2,
        GateType::Nor2,
        GateType::Xor2,
        GateType::Xnor2,
        GateType::Maj3,
        GateType::Nand3,
        GateType::Nor3,
        GateType::Mux21,
        GateType::Nmux21,
        GateType::Aoi21,
        GateType::Oai21,
        GateType::Lut,
        GateType::Cell,
    ];

    pub fn tag_index(self) -> usize {
        Self::ALL.iter().position(|&g| g == self).unwrap()
    }

    /// Fixed arity, or `None` for the variable-arity LUT/CELL tags.
    pub fn fixed_arity(self) -> Option<usize> {
        use GateType::*;
        Some(match self {
            Const0 | Const1 | Pi => 0,
            Po | Not | Buffer => 1,
            And2 | Nand2 | Or2 | Nor2 | Xor2 | Xnor2 => 2,
            Maj3 | Nand3 | Nor3 | Mux21 | Nmux21 | Aoi21 | Oai21 => 3,
            Lut | Cell => return None,
        })
    }

    /// Canonical 64-bit (tiled) function. Pins are A = fanin 0 (least
    /// significant), B = fanin 1, C = fanin 2.
    pub fn canonical_tt(self) -> Option<u64> {
        use GateType::*;
        let pattern = |k: usize, f: fn(usize) -> bool| tt::from_fn(k, f);
        Some(match self {
            Const0 => 0,
            Const1 => u64::MAX,
            Pi => tt::VAR_MASKS[0],
            Po | Buffer => tt::VAR_MASKS[0],
            Not => !tt::VAR_MASKS[0],
            And2 => pattern(2, |j| j & 1 != 0 && j & 2 != 0),
            Nand2 => pattern(2, |j| !(j & 1 != 0 && j & 2 != 0)),
            Or2 => pattern(2, |j| j & 3 != 0),
            Nor2 => pattern(2, |j| j & 3 == 0),
            Xor2 => pattern(2, |j| (j & 1 != 0) ^ (j & 2 != 0)),
            Xnor2 => pattern(2, |j| (j & 1 != 0) == (j & 2 != 0)),
            Maj3 => pattern(3, |j| j.count_ones() >= 2),
            Nand3 => pattern(3, |j| j & 7 != 7),
            Nor3 => pattern(3, |j| j & 7 == 0),
            Mux21 => pattern(3, |j| {
                let (a, b, c) = (j & 1 != 0, j & 2 != 0, j & 4 != 0);
                if c {
                    b
                } else {
                    a
                }
            }),
            Nmux21 => pattern(3, |j| {
                let (a, b, c) = (j & 1 != 0, j & 2 != 0, j & 4 != 0);
                if c {
                    a
                } else {
                    b
                }
            }),
            Aoi21 => pattern(3, |j| {
                let (a, b, c) = (j & 1 != 0, j & 2 != 0, j & 4 != 0);
                !((a && b) || c)
            }),
            Oai21 => pattern(3, |j| {
                let (a, b, c) = (j & 1 != 0, j & 2 != 0, j & 4 != 0);
                !((a || b) && c)
            }),
            Lut | Cell => return None,
        })
    }

    pub fn name(self) -> &'static str {
        use GateType::*;
        match self {
            Const0 => "CONST0",
            Const1 => "CONST1",
            Pi => "PI",
            Po => "PO",
            Not => "NOT",
            Buffer => "BUFFER",
            And2 => "AND2",
            Nand2 => "NAND2",
            Or2 => "OR2",
            Nor2 => "NOR2",
            Xor2 => "XOR2",
            Xnor2 => "XNOR2",
            Maj3 => "MAJ3",
            Nand3 => "NAND3",
            Nor3 => "NOR3",
            Mux21 => "MUX21",
            Nmux21 => "NMUX21",
            Aoi21 => "AOI21",
            Oai21 => "OAI21",
            Lut => "LUT",
            Cell => "CELL",
        }
    }

    pub fn from_name(s: &str) -> Option<GateType> {
        GateType::ALL.iter().copied().find(|g| g.name() == s)
    }
}

impl fmt::Display for GateType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The network kinds: six functionally complete Boolean network types
/// plus the two mapped netlist kinds.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum LogicType {
    Aig,
    Oig,
    Xag,
    Mig,
    Primary,
    Gtg,
    AsicNetlist,
    FpgaNetlist,
}

/// The six technology-independent network types, in canonical order.
pub const NETWORK_TYPES: [LogicType; 6] = [
    LogicType::Aig,
    LogicType::Oig,
    LogicType::Xag,
    LogicType::Mig,
    LogicType::Primary,
    LogicType::Gtg,
];

impl LogicType {
    /// Whether `gate` belongs to this type's allowed set. Constants,
    /// PIs, POs and buffers are allowed everywhere.
    pub fn allows(self, gate: GateType) -> bool {
        use GateType::*;
        if matches!(gate, Const0 | Const1 | Pi | Po | Buffer) {
            return true;
        }
        match self {
            LogicType::Aig => matches!(gate, Not | And2),
            LogicType::Oig => matches!(gate, Not | Or2),
            LogicType::Xag => matches!(gate, Not | Xor2 | And2),
            LogicType::Mig => matches!(gate, Not | Maj3),
            LogicType::Primary => {
                matches!(gate, Not | And2 | Nand2 | Or2 | Nor2 | Xor2 | Xnor2)
            }
            LogicType::Gtg => matches!(
                gate,
                Not | And2
                    | Nand2
                    | Or2
                    | Nor2
                    | Xor2
                    | Xnor2
                    | Nand3
                    | Nor3
                    | Mux21
                    | Nmux21
                    | Aoi21
                    | Oai21
            ),
            LogicType::AsicNetlist => gate == Cell,
            LogicType::FpgaNetlist => gate == Lut,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LogicType::Aig => "AIG",
            LogicType::Oig => "OIG",
            LogicType::Xag => "XAG",
            LogicType::Mig => "MIG",
            LogicType::Primary => "PRIMARY",
            LogicType::Gtg => "GTG",
            LogicType::AsicNetlist => "ASIC_NETLIST",
            LogicType::FpgaNetlist => "FPGA_NETLIST",
        }
    }

    pub fn from_name(s: &str) -> Option<LogicType> {
        [
            LogicType::Aig,
            LogicType::Oig,
            LogicType::Xag,
            LogicType::Mig,
            LogicType::Primary,
            LogicType::Gtg,
            LogicType::AsicNetlist,
            LogicType::FpgaNetlist,
        ]
        .into_iter()
        .find(|t| t.name() == s)
    }

    /// Lower-case name used for group directories and CLI values.
    pub fn key(self) -> &'static str {
        match self {
            LogicType::Aig => "aig",
            LogicType::Oig => "oig",
            LogicType::Xag => "xag",
            LogicType::Mig => "mig",
            LogicType::Primary => "primary",
            LogicType::Gtg => "gtg",
            LogicType::AsicNetlist => "asic",
            LogicType::FpgaNetlist => "fpga",
        }
    }
}

impl fmt::Display for LogicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Node {
    pub gate: GateType,
    pub name: String,
    /// Pin order A, B, C (or LUT input order); fanin 0 is the least
    /// significant truth-table variable.
    pub fanins: Vec<u32>,
    /// Local function over the fanins, tiled to 64 bits.
    pub tt: u64,
    /// External index preserved from the input file, when one exists.
    pub origin: Option<u64>,
}

impl Node {
    pub fn arity(&self) -> usize {
        self.fanins.len()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Circuit {
    pub logic_type: LogicType,
    pub name: String,
    nodes: Vec<Node>,
    pis: Vec<u32>,
    pos: Vec<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CircuitStats {
    pub pis: usize,
    pub pos: usize,
    pub gate_counts: [usize; GATE_TYPE_COUNT],
    pub edge_count: usize,
    /// Longest PI-to-PO path in logic levels. PIs sit at level 0 and PO
    /// nodes do not add a level; every other node (including NOT and
    /// BUFFER) counts as one level.
    pub depth: usize,
}

impl CircuitStats {
    pub fn count(&self, gate: GateType) -> usize {
        self.gate_counts[gate.tag_index()]
    }

    pub fn and2_count(&self) -> usize {
        self.count(GateType::And2)
    }

    pub fn inverter_count(&self) -> usize {
        self.count(GateType::Not)
    }

    /// Total internal gate nodes (everything except PI/PO/constants).
    pub fn gate_count(&self) -> usize {
        GateType::ALL
            .iter()
            .filter(|g| {
                !matches!(
                    g,
                    GateType::Pi | GateType::Po | GateType::Const0 | GateType::Const1
                )
            })
            .map(|g| self.count(*g))
            .sum()
    }
}

/// `[pis, pos, ands, invs, edges, depth]`
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct FeatureVector(pub [f64; 6]);

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub node: Option<u32>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Some(n) => write!(f, "node {}: {}", n, self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl Circuit {
    pub fn new(logic_type: LogicType, name: impl Into<String>) -> Circuit {
        Circuit {
            logic_type,
            name: name.into(),
            nodes: Vec::new(),
            pis: Vec::new(),
            pos: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, idx: u32) -> &Node {
        &self.nodes[idx as usize]
    }

    pub fn node_mut(&mut self, idx: u32) -> &mut Node {
        &mut self.nodes[idx as usize]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (u32, &Node)> {
        self.nodes.iter().enumerate().map(|(i, n)| (i as u32, n))
    }

    pub fn pis(&self) -> &[u32] {
        &self.pis
    }

    pub fn pos(&self) -> &[u32] {
        &self.pos
    }

    pub fn add_pi(&mut self, name: impl Into<String>) -> u32 {
        let idx = self.push(Node {
            gate: GateType::Pi,
            name: name.into(),
            fanins: Vec::new(),
            tt: GateType::Pi.canonical_tt().unwrap(),
            origin: None,
        });
        self.pis.push(idx);
        idx
    }

    pub fn add_po(&mut self, fanin: u32, name: impl Into<String>) -> u32 {
        let idx = self.push(Node {
            gate: GateType::Po,
            name: name.into(),
            fanins: vec![fanin],
            tt: GateType::Po.canonical_tt().unwrap(),
            origin: None,
        });
        self.pos.push(idx);
        idx
    }

    /// Constant nodes are deduplicated per circuit.
    pub fn add_const(&mut self, value: bool) -> u32 {
        let gate = if value {
            GateType::Const1
        } else {
            GateType::Const0
        };
        if let Some((idx, _)) = self.nodes().find(|(_, n)| n.gate == gate) {
            return idx;
        }
        self.push(Node {
            gate,
            name: gate.name().to_ascii_lowercase(),
            fanins: Vec::new(),
            tt: gate.canonical_tt().unwrap(),
            origin: None,
        })
    }

    /// Adds a fixed-function gate; the truth table is filled in from the
    /// gate's canonical function.
    pub fn add_gate(
        &mut self,
        gate: GateType,
        fanins: Vec<u32>,
        name: impl Into<String>,
    ) -> Result<u32> {
        let arity = gate.fixed_arity().ok_or_else(|| {
            Error::structure(format!("{gate} requires an explicit truth table"))
        })?;
        if fanins.len() != arity {
            return Err(Error::structure(format!(
                "{gate} expects {arity} fanins, got {}",
                fanins.len()
            )));
        }
        self.check_fanins(&fanins)?;
        Ok(self.push(Node {
            gate,
            name: name.into(),
            fanins,
            tt: gate.canonical_tt().unwrap(),
            origin: None,
        }))
    }

    pub fn add_lut(&mut self, fanins: Vec<u32>, tt: u64, name: impl Into<String>) -> Result<u32> {
        self.add_table_node(GateType::Lut, fanins, tt, name)
    }

    /// `name` is the matched standard-cell name.
    pub fn add_cell(&mut self, fanins: Vec<u32>, tt: u64, name: impl Into<String>) -> Result<u32> {
        self.add_table_node(GateType::Cell, fanins, tt, name)
    }

    fn add_table_node(
        &mut self,
        gate: GateType,
        fanins: Vec<u32>,
        table: u64,
        name: impl Into<String>,
    ) -> Result<u32> {
        if fanins.is_empty() || fanins.len() > 6 {
            return Err(Error::structure(format!(
                "{gate} arity must be 1..6, got {}",
                fanins.len()
            )));
        }
        self.check_fanins(&fanins)?;
        let k = fanins.len();
        Ok(self.push(Node {
            gate,
            name: name.into(),
            fanins,
            tt: tt::tile(table, k),
            origin: None,
        }))
    }

    /// Two-phase construction: creates a node without fanins. Used by
    /// the GraphML load path, which wires edges afterwards via
    /// [`Circuit::add_fanin`]. The node is invalid until its fanins are
    /// complete.
    pub fn add_node_deferred(&mut self, gate: GateType, tt: u64, name: impl Into<String>) -> u32 {
        let idx = self.push(Node {
            gate,
            name: name.into(),
            fanins: Vec::new(),
            tt,
            origin: None,
        });
        match gate {
            GateType::Pi => self.pis.push(idx),
            GateType::Po => self.pos.push(idx),
            _ => {}
        }
        idx
    }

    /// Appends one fanin at pin position `slot`. Slots must arrive in
    /// order for each node.
    pub fn add_fanin(&mut self, idx: u32, fanin: u32, slot: usize) -> Result<()> {
        if fanin as usize >= self.nodes.len() || idx as usize >= self.nodes.len() {
            return Err(Error::structure(format!(
                "dangling edge {fanin} -> {idx}"
            )));
        }
        let node = &mut self.nodes[idx as usize];
        if node.fanins.len() != slot {
            return Err(Error::structure(format!(
                "node {idx}: fanin slot {slot} out of order (have {})",
                node.fanins.len()
            )));
        }
        node.fanins.push(fanin);
        Ok(())
    }

    pub fn set_origin(&mut self, idx: u32, origin: u64) {
        self.nodes[idx as usize].origin = Some(origin);
    }

    fn push(&mut self, node: Node) -> u32 {
        let idx = self.nodes.len() as u32;
        self.nodes.push(node);
        idx
    }

    fn check_fanins(&self, fanins: &[u32]) -> Result<()> {
        for &f in fanins {
            if f as usize >= self.nodes.len() {
                return Err(Error::structure(format!("dangling fanin {f}")));
            }
        }
        Ok(())
    }

    /// Deterministic topological order: every node after its fanins,
    /// ties broken by ascending index.
    pub fn topo_order(&self) -> Result<Vec<u32>> {
        let n = self.nodes.len();
        let mut indegree = vec![0u32; n];
        let mut fanouts: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, node) in self.nodes.iter().enumerate() {
            for &f in &node.fanins {
                if (f as usize) < n {
                    indegree[i] += 1;
                    fanouts[f as usize].push(i as u32);
                }
            }
        }
        let mut heap: BinaryHeap<Reverse<u32>> = (0..n as u32)
            .filter(|&i| indegree[i as usize] == 0)
            .map(Reverse)
            .collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(i)) = heap.pop() {
            order.push(i);
            for &o in &fanouts[i as usize] {
                indegree[o as usize] -= 1;
                if indegree[o as usize] == 0 {
                    heap.push(Reverse(o));
                }
            }
        }
        if order.len() != n {
            // Walk the unresolved region to name one edge on a cycle.
            let start = (0..n).find(|&i| indegree[i] > 0).unwrap() as u32;
            let mut seen = vec![false; n];
            let mut cur = start;
            loop {
                if seen[cur as usize] {
                    break;
                }
                seen[cur as usize] = true;
                let next = self.nodes[cur as usize]
                    .fanins
                    .iter()
                    .copied()
                    .find(|&f| indegree[f as usize] > 0)
                    .unwrap();
                if seen[next as usize] {
                    return Err(Error::structure(format!(
                        "cycle detected through edge {next} -> {cur}"
                    )));
                }
                cur = next;
            }
            return Err(Error::structure("cycle detected".to_string()));
        }
        Ok(order)
    }

    /// Checks every structural invariant; returns all violations found
    /// rather than aborting on the first.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.nodes.len();
        for (i, node) in self.nodes.iter().enumerate() {
            let idx = i as u32;
            for &f in &node.fanins {
                if f as usize >= n {
                    out.push(Violation {
                        node: Some(idx),
                        message: format!("dangling fanin {f}"),
                    });
                }
            }
            match node.gate.fixed_arity() {
                Some(a) => {
                    if node.fanins.len() != a {
                        out.push(Violation {
                            node: Some(idx),
                            message: format!(
                                "{} expects {a} fanins, has {}",
                                node.gate,
                                node.fanins.len()
                            ),
                        });
                    }
                }
                None => {
                    if node.fanins.is_empty() || node.fanins.len() > 6 {
                        out.push(Violation {
                            node: Some(idx),
                            message: format!(
                                "{} arity must be 1..6, has {}",
                                node.gate,
                                node.fanins.len()
                            ),
                        });
                    }
                }
            }
            if !self.logic_type.allows(node.gate) {
                out.push(Violation {
                    node: Some(idx),
                    message: format!("{} not allowed in {}", node.gate, self.logic_type),
                });
            }
            if let Some(canon) = node.gate.canonical_tt() {
                if node.tt != canon {
                    out.push(Violation {
                        node: Some(idx),
                        message: format!(
                            "truth table {:016x} does not match canonical {:016x} for {}",
                            node.tt, canon, node.gate
                        ),
                    });
                }
            } else if !tt::is_tiled(node.tt, node.fanins.len().min(6)) {
                out.push(Violation {
                    node: Some(idx),
                    message: format!("truth table {:016x} is not tiled", node.tt),
                });
            }
        }
        for &p in &self.pis {
            if !self.nodes[p as usize].fanins.is_empty() {
                out.push(Violation {
                    node: Some(p),
                    message: "PI with fanins".to_string(),
                });
            }
        }
        if let Err(e) = self.topo_order() {
            out.push(Violation {
                node: None,
                message: e.to_string(),
            });
        }
        out
    }

    /// Per-node logic level: PIs and constants at 0, PO nodes mirror
    /// their fanin, every other node is one above its deepest fanin.
    pub fn levels(&self) -> Result<Vec<usize>> {
        let order = self.topo_order()?;
        let mut level = vec![0usize; self.nodes.len()];
        for &i in &order {
            let node = &self.nodes[i as usize];
            let fan_max = node
                .fanins
                .iter()
                .map(|&f| level[f as usize])
                .max()
                .unwrap_or(0);
            level[i as usize] = match node.gate {
                GateType::Pi | GateType::Const0 | GateType::Const1 => 0,
                GateType::Po => fan_max,
                _ => fan_max + 1,
            };
        }
        Ok(level)
    }

    pub fn stats(&self) -> CircuitStats {
        let level = self.levels().unwrap_or_else(|_| vec![0; self.nodes.len()]);
        let mut gate_counts = [0usize; GATE_TYPE_COUNT];
        let mut edge_count = 0usize;
        for node in &self.nodes {
            gate_counts[node.gate.tag_index()] += 1;
            edge_count += node.fanins.len();
        }
        let depth = if self.pos.is_empty() {
            level.iter().copied().max().unwrap_or(0)
        } else {
            self.pos
                .iter()
                .map(|&p| level[p as usize])
                .max()
                .unwrap_or(0)
        };
        CircuitStats {
            pis: self.pis.len(),
            pos: self.pos.len(),
            gate_counts,
            edge_count,
            depth,
        }
    }

    pub fn feature_vector(&self) -> FeatureVector {
        let s = self.stats();
        FeatureVector([
            s.pis as f64,
            s.pos as f64,
            s.and2_count() as f64,
            s.inverter_count() as f64,
            s.edge_count as f64,
            s.depth as f64,
        ])
    }

    /// Number of fanout references per node, PO references included.
    pub fn fanout_counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.nodes.len()];
        for node in &self.nodes {
            for &f in &node.fanins {
                counts[f as usize] += 1;
            }
        }
        counts
    }

    /// ML export: one feature row per node (one-hot gate tag followed by
    /// the 64 truth-table bits) and the directed edge list as
    /// `(fanin, node)` pairs. Node ordering is identical to the circuit
    /// indices; names are excluded.
    pub fn to_ml_graph(&self) -> MlGraph {
        let mut features = Vec::with_capacity(self.nodes.len());
        let mut edges = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            let mut row = [0.0f32; GATE_TYPE_COUNT + 64];
            row[node.gate.tag_index()] = 1.0;
            for b in 0..64 {
                row[GATE_TYPE_COUNT + b] = ((node.tt >> b) & 1) as f32;
            }
            features.push(row);
            for &f in &node.fanins {
                edges.push((f, i as u32));
            }
        }
        MlGraph { features, edges }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MlGraph {
    pub features: Vec<[f32; GATE_TYPE_COUNT + 64]>,
    pub edges: Vec<(u32, u32)>,
}

pub fn cosine_similarity(a: &FeatureVector, b: &FeatureVector) -> Result<f64> {
    let dot: f64 = a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum();
    let na: f64 = a.0.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.0.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::usage("cosine similarity undefined for zero vector"));
    }
    Ok(dot / (na * nb))
}
