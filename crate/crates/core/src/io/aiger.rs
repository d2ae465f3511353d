//! AIGER reader/writer, ascii (`aag`) and binary (`aig`, delta-encoded
//! AND literals). Combinational only: a nonzero latch count is
//! rejected. On write, NOT nodes are absorbed into complement bits; on
//! read, complemented literals become NOT nodes, one shared NOT per
//! distinct literal. AIGER carries no names, so nodes are synthesized
//! as `n<literal>`.

use crate::error::{Error, Result};
use crate::ir::{Circuit, GateType, LogicType};
use std::collections::HashMap;
use std::io::Write;

pub fn write_aiger(c: &Circuit, sink: &mut dyn Write, ascii: bool) -> Result<()> {
    if c.logic_type != LogicType::Aig {
        return Err(Error::usage(format!(
            "AIGER requires an AIG, got {}",
            c.logic_type
        )));
    }
    let order = c.topo_order()?;
    // map node index -> literal, absorbing NOT/BUFFER chains
    let mut lit: HashMap<u32, u64> = HashMap::new();
    let num_inputs = c.pis().len() as u64;
    for (i, &idx) in c.pis().iter().enumerate() {
        lit.insert(idx, 2 * (i as u64 + 1));
    }
    let mut ands: Vec<(u64, u64, u64)> = Vec::new(); // (lhs, rhs0, rhs1)
    for &i in &order {
        let node = c.node(i);
        match node.gate {
            GateType::Pi | GateType::Po => {}
            GateType::Const0 => {
                lit.insert(i, 0);
            }
            GateType::Const1 => {
                lit.insert(i, 1);
            }
            GateType::Not => {
                let f = lit[&node.fanins[0]];
                lit.insert(i, f ^ 1);
            }
            GateType::Buffer => {
                let f = lit[&node.fanins[0]];
                lit.insert(i, f);
            }
            GateType::And2 => {
                let lhs = 2 * (num_inputs + ands.len() as u64 + 1);
                let mut rhs0 = lit[&node.fanins[0]];
                let mut rhs1 = lit[&node.fanins[1]];
                if rhs0 < rhs1 {
                    std::mem::swap(&mut rhs0, &mut rhs1);
                }
                ands.push((lhs, rhs0, rhs1));
                lit.insert(i, lhs);
            }
            other => {
                return Err(Error::structure(format!("{other} is not an AIG gate")))
            }
        }
    }
    let outputs: Vec<u64> = c
        .pos()
        .iter()
        .map(|&p| lit[&c.node(p).fanins[0]])
        .collect();
    let m = num_inputs + ands.len() as u64;
    let mut out: Vec<u8> = Vec::new();
    if ascii {
        writeln!(
            out,
            "aag {m} {num_inputs} 0 {} {}",
            outputs.len(),
            ands.len()
        )?;
        for i in 0..num_inputs {
            writeln!(out, "{}", 2 * (i + 1))?;
        }
        for o in &outputs {
            writeln!(out, "{o}")?;
        }
        for (lhs, rhs0, rhs1) in &ands {
            writeln!(out, "{lhs} {rhs0} {rhs1}")?;
        }
    } else {
        writeln!(
            out,
            "aig {m} {num_inputs} 0 {} {}",
            outputs.len(),
            ands.len()
        )?;
        for o in &outputs {
            writeln!(out, "{o}")?;
        }
        for (lhs, rhs0, rhs1) in &ands {
            // binary encoding stores lhs-rhs0 and rhs0-rhs1, rhs0 >= rhs1
            push_varint(&mut out, lhs - rhs0);
            push_varint(&mut out, rhs0 - rhs1);
        }
    }
    sink.write_all(&out)?;
    Ok(())
}

fn push_varint(out: &mut Vec<u8>, mut x: u64) {
    loop {
        let byte = (x & 0x7f) as u8;
        x >>= 7;
        if x == 0 {
            out.push(byte);
            break;
        }
        out.push(byte | 0x80);
    }
}

pub fn read_aiger(source: &[u8]) -> Result<Circuit> {
    let header_end = source
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::format("AIGER header missing newline"))?;
    let header = std::str::from_utf8(&source[..header_end])
        .map_err(|_| Error::format("AIGER header is not ASCII"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 6 || (fields[0] != "aag" && fields[0] != "aig") {
        return Err(Error::format(format!("malformed AIGER header `{header}`")));
    }
    let nums: Vec<u64> = fields[1..]
        .iter()
        .map(|f| {
            f.parse()
                .map_err(|_| Error::format(format!("bad AIGER header field `{f}`")))
        })
        .collect::<Result<_>>()?;
    let (m, i, l, o, a) = (nums[0], nums[1], nums[2], nums[3], nums[4]);
    if l != 0 {
        return Err(Error::unsupported(
            "sequential AIGER (nonzero latch count) is not supported",
        ));
    }
    if m < i + a {
        return Err(Error::format("AIGER header: M < I + A"));
    }
    let max_lit = 2 * m + 1;
    let body = &source[header_end + 1..];

    let mut outputs: Vec<u64> = Vec::with_capacity(o as usize);
    let mut ands: Vec<(u64, u64, u64)> = Vec::with_capacity(a as usize);
    if fields[0] == "aag" {
        let text = std::str::from_utf8(body)
            .map_err(|_| Error::format("ascii AIGER body is not UTF-8"))?;
        let mut lines = text.lines();
        let mut next_num = |what: &str| -> Result<Vec<u64>> {
            let line = lines
                .next()
                .ok_or_else(|| Error::format(format!("AIGER truncated at {what}")))?;
            line.split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| Error::format(format!("bad literal `{t}`")))
                })
                .collect()
        };
        for k in 0..i {
            let v = next_num("inputs")?;
            if v.len() != 1 || v[0] != 2 * (k + 1) {
                return Err(Error::format(format!("input {k} must be literal {}", 2 * (k + 1))));
            }
        }
        for _ in 0..o {
            let v = next_num("outputs")?;
            if v.len() != 1 {
                return Err(Error::format("output line must hold one literal"));
            }
            outputs.push(v[0]);
        }
        for k in 0..a {
            let v = next_num("ands")?;
            if v.len() != 3 {
                return Err(Error::format("and line must hold three literals"));
            }
            let lhs = 2 * (i + k + 1);
            if v[0] != lhs {
                return Err(Error::format(format!(
                    "and {k}: lhs must be {lhs}, got {}",
                    v[0]
                )));
            }
            ands.push((v[0], v[1], v[2]));
        }
    } else {
        let mut pos = 0usize;
        let text_end = {
            // outputs are ascii lines before the binary and section
            let mut end = 0;
            for _ in 0..o {
                let nl = body[end..]
                    .iter()
                    .position(|&b| b == b'\n')
                    .ok_or_else(|| Error::format("AIGER truncated in outputs"))?;
                let line = std::str::from_utf8(&body[end..end + nl])
                    .map_err(|_| Error::format("bad output line"))?;
                outputs.push(
                    line.trim()
                        .parse()
                        .map_err(|_| Error::format(format!("bad output literal `{line}`")))?,
                );
                end += nl + 1;
            }
            end
        };
        pos += text_end;
        for k in 0..a {
            let lhs = 2 * (i + k + 1);
            let d0 = read_varint(body, &mut pos)?;
            let d1 = read_varint(body, &mut pos)?;
            let rhs0 = lhs
                .checked_sub(d0)
                .ok_or_else(|| Error::format("binary AIGER delta underflow"))?;
            let rhs1 = rhs0
                .checked_sub(d1)
                .ok_or_else(|| Error::format("binary AIGER delta underflow"))?;
            ands.push((lhs, rhs0, rhs1));
        }
    }

    for &lit in outputs.iter().chain(ands.iter().flat_map(|(a, b, c)| [a, b, c])) {
        if lit > max_lit {
            return Err(Error::format(format!(
                "literal {lit} out of range (max {max_lit})"
            )));
        }
    }

    // build the explicit-NOT circuit
    let mut c = Circuit::new(LogicType::Aig, "aiger");
    let mut var_node: HashMap<u64, u32> = HashMap::new();
    for k in 0..i {
        let lit = 2 * (k + 1);
        let idx = c.add_pi(format!("n{lit}"));
        var_node.insert(lit, idx);
    }
    for (lhs, rhs0, rhs1) in &ands {
        let fa = lit_node(&mut c, &mut var_node, *rhs0)?;
        let fb = lit_node(&mut c, &mut var_node, *rhs1)?;
        let idx = c.add_gate(GateType::And2, vec![fa, fb], format!("n{lhs}"))?;
        var_node.insert(*lhs, idx);
    }
    for (k, &o) in outputs.iter().enumerate() {
        let f = lit_node(&mut c, &mut var_node, o)?;
        c.add_po(f, format!("o{k}"));
    }
    Ok(c)
}

/// Node for a literal, creating the shared NOT (or constant) on demand.
fn lit_node(c: &mut Circuit, var_node: &mut HashMap<u64, u32>, lit: u64) -> Result<u32> {
    if let Some(&n) = var_node.get(&lit) {
        return Ok(n);
    }
    let idx = if lit == 0 {
        c.add_const(false)
    } else if lit == 1 {
        c.add_const(true)
    } else if lit & 1 == 1 {
        let base = var_node
            .get(&(lit ^ 1))
            .copied()
            .ok_or_else(|| Error::format(format!("literal {lit} used before definition")))?;
        c.add_gate(GateType::Not, vec![base], format!("n{lit}"))?
    } else {
        return Err(Error::format(format!(
            "literal {lit} used before definition"
        )));
    };
    var_node.insert(lit, idx);
    Ok(idx)
}

fn read_varint(body: &[u8], pos: &mut usize) -> Result<u64> {
    let mut x = 0u64;
    let mut shift = 0;
    loop {
        let byte = *body
            .get(*pos)
            .ok_or_else(|| Error::format("binary AIGER truncated"))?;
        *pos += 1;
        x |= ((byte & 0x7f) as u64) << shift;
        if byte & 0x80 == 0 {
            return Ok(x);
        }
        shift += 7;
        if shift > 63 {
            return Err(Error::format("binary AIGER varint overflow"));
        }
    }
}
