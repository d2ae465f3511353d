//! GraphML persistence.
//!
//! Schema: node data keys `type` (gate tag), `name`, and `tt` (16 hex
//! digits, LUT/CELL only); edge data key `slot` (pin position); graph
//! data key `logic_type`. Node ids are `n<index>`, nodes are written in
//! topological order, edges sorted by (target, slot), so serialization
//! is byte-deterministic and reading restores identical indices.

use super::xml::{escape, Event, Parser};
use crate::error::{Error, Result};
use crate::ir::{Circuit, GateType, LogicType};
use std::io::Write;

pub fn write_graphml(c: &Circuit, sink: &mut dyn Write) -> Result<()> {
    let violations = c.validate();
    if let Some(v) = violations.first() {
        return Err(Error::structure(format!("refusing to write: {v}")));
    }
    let order = c.topo_order()?;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    out.push_str("  <key id=\"type\" for=\"node\" attr.name=\"type\" attr.type=\"string\"/>\n");
    out.push_str("  <key id=\"name\" for=\"node\" attr.name=\"name\" attr.type=\"string\"/>\n");
    out.push_str("  <key id=\"tt\" for=\"node\" attr.name=\"tt\" attr.type=\"string\"/>\n");
    out.push_str("  <key id=\"slot\" for=\"edge\" attr.name=\"slot\" attr.type=\"int\"/>\n");
    out.push_str(
        "  <key id=\"logic_type\" for=\"graph\" attr.name=\"logic_type\" attr.type=\"string\"/>\n",
    );
    out.push_str(&format!(
        "  <graph id=\"{}\" edgedefault=\"directed\">\n",
        escape(&c.name)
    ));
    out.push_str(&format!(
        "    <data key=\"logic_type\">{}</data>\n",
        c.logic_type.name()
    ));
    for &i in &order {
        let node = c.node(i);
        out.push_str(&format!("    <node id=\"n{i}\">\n"));
        out.push_str(&format!(
            "      <data key=\"type\">{}</data>\n",
            node.gate.name()
        ));
        out.push_str(&format!(
            "      <data key=\"name\">{}</data>\n",
            escape(&node.name)
        ));
        if matches!(node.gate, GateType::Lut | GateType::Cell) {
            out.push_str(&format!("      <data key=\"tt\">{:016x}</data>\n", node.tt));
        }
        out.push_str("    </node>\n");
    }
    let mut edges: Vec<(u32, usize, u32)> = Vec::new();
    for (i, node) in c.nodes() {
        for (slot, &f) in node.fanins.iter().enumerate() {
            edges.push((i, slot, f));
        }
    }
    edges.sort_unstable();
    for (target, slot, source) in edges {
        out.push_str(&format!(
            "    <edge source=\"n{source}\" target=\"n{target}\">\n"
        ));
        out.push_str(&format!("      <data key=\"slot\">{slot}</data>\n"));
        out.push_str("    </edge>\n");
    }
    out.push_str("  </graph>\n");
    out.push_str("</graphml>\n");
    sink.write_all(out.as_bytes())?;
    Ok(())
}

struct NodeDef {
    gate: Option<GateType>,
    name: String,
    tt: Option<u64>,
}

pub fn read_graphml(source: &[u8]) -> Result<Circuit> {
    let text = std::str::from_utf8(source)
        .map_err(|_| Error::format("GraphML is not valid UTF-8"))?;
    let mut p = Parser::new(text);

    let mut graph_name = String::new();
    let mut logic_type: Option<LogicType> = None;
    let mut nodes: Vec<(u32, NodeDef)> = Vec::new();
    let mut edges: Vec<(u32, u32, Option<usize>)> = Vec::new(); // (source, target, slot)

    // current containers while walking the element tree
    let mut stack: Vec<String> = Vec::new();
    let mut cur_node: Option<(u32, NodeDef)> = None;
    let mut cur_edge: Option<(u32, u32, Option<usize>)> = None;
    let mut cur_data_key: Option<String> = None;
    let mut cur_text = String::new();

    while let Some(ev) = p.next_event()? {
        match ev {
            Event::Open {
                name,
                attrs,
                self_closing,
            } => {
                match name.as_str() {
                    "graph" => {
                        if let Some((_, v)) = attrs.iter().find(|(k, _)| k == "id") {
                            graph_name = v.clone();
                        }
                    }
                    "node" => {
                        let id = attr(&attrs, "id")
                            .ok_or_else(|| Error::format("node without id"))?;
                        let idx = parse_id(&id)?;
                        if nodes.iter().any(|(i, _)| *i == idx) {
                            return Err(Error::format(format!("duplicate node id n{idx}")));
                        }
                        cur_node = Some((
                            idx,
                            NodeDef {
                                gate: None,
                                name: String::new(),
                                tt: None,
                            },
                        ));
                    }
                    "edge" => {
                        let s = attr(&attrs, "source")
                            .ok_or_else(|| Error::format("edge without source"))?;
                        let t = attr(&attrs, "target")
                            .ok_or_else(|| Error::format("edge without target"))?;
                        cur_edge = Some((parse_id(&s)?, parse_id(&t)?, None));
                    }
                    "data" => {
                        cur_data_key = attr(&attrs, "key");
                        cur_text.clear();
                    }
                    _ => {}
                }
                if !self_closing {
                    stack.push(name);
                } else if name == "data" {
                    cur_data_key = None;
                } else if name == "node" {
                    if let Some(n) = cur_node.take() {
                        nodes.push(n);
                    }
                } else if name == "edge" {
                    if let Some(e) = cur_edge.take() {
                        edges.push(e);
                    }
                }
            }
            Event::Text(t) => {
                if cur_data_key.is_some() {
                    cur_text.push_str(&t);
                }
            }
            Event::Close(name) => {
                stack.pop();
                match name.as_str() {
                    "data" => {
                        let key = cur_data_key.take().unwrap_or_default();
                        let value = std::mem::take(&mut cur_text);
                        if let Some((_, def)) = cur_node.as_mut() {
                            match key.as_str() {
                                "type" => {
                                    def.gate = Some(GateType::from_name(&value).ok_or_else(
                                        || Error::format(format!("unknown gate tag `{value}`")),
                                    )?)
                                }
                                "name" => def.name = value,
                                "tt" => {
                                    def.tt = Some(u64::from_str_radix(&value, 16).map_err(
                                        |_| Error::format(format!("bad tt `{value}`")),
                                    )?)
                                }
                                _ => {}
                            }
                        } else if let Some((_, _, slot)) = cur_edge.as_mut() {
                            if key == "slot" {
                                *slot = Some(value.parse().map_err(|_| {
                                    Error::format(format!("bad slot `{value}`"))
                                })?);
                            }
                        } else if key == "logic_type" {
                            logic_type = Some(LogicType::from_name(&value).ok_or_else(
                                || Error::format(format!("unknown logic type `{value}`")),
                            )?);
                        }
                    }
                    "node" => {
                        if let Some(n) = cur_node.take() {
                            nodes.push(n);
                        }
                    }
                    "edge" => {
                        if let Some(e) = cur_edge.take() {
                            edges.push(e);
                        }
                    }
                    _ => {}
                }
            }
        }
    }

    let logic_type =
        logic_type.ok_or_else(|| Error::format("missing logic_type graph attribute"))?;
    // phase one: create all nodes at their original indices
    nodes.sort_by_key(|(i, _)| *i);
    for (pos, (i, _)) in nodes.iter().enumerate() {
        if *i as usize != pos {
            return Err(Error::format(format!(
                "node ids not contiguous at n{i}"
            )));
        }
    }
    let mut c = Circuit::new(logic_type, graph_name);
    for (_, def) in &nodes {
        let gate = def
            .gate
            .ok_or_else(|| Error::format("node without type"))?;
        let tt = match gate.canonical_tt() {
            Some(t) => t,
            None => def.tt.ok_or_else(|| {
                Error::format(format!("{gate} node requires a tt attribute"))
            })?,
        };
        c.add_node_deferred(gate, tt, def.name.clone());
    }
    // phase two: wire fanins in pin order
    let mut sorted = edges.clone();
    for (_, _, slot) in &sorted {
        if slot.is_none() {
            return Err(Error::format("edge missing slot attribute"));
        }
    }
    sorted.sort_by_key(|&(_, t, slot)| (t, slot));
    for (source, target, slot) in sorted {
        if source as usize >= c.len() || target as usize >= c.len() {
            return Err(Error::format(format!(
                "dangling edge n{source} -> n{target}"
            )));
        }
        c.add_fanin(target, source, slot.unwrap())?;
    }
    Ok(c)
}

fn attr(attrs: &[(String, String)], key: &str) -> Option<String> {
    attrs.iter().find(|(k, _)| k == key).map(|(_, v)| v.clone())
}

fn parse_id(id: &str) -> Result<u32> {
    id.strip_prefix('n')
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| Error::format(format!("bad node id `{id}`")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::random_aig;

    fn to_bytes(c: &Circuit) -> Vec<u8> {
        let mut buf = Vec::new();
        write_graphml(c, &mut buf).unwrap();
        buf
    }

    #[test]
    fn and2_round_trips_identically() {
        let mut c = Circuit::new(LogicType::Aig, "and2");
        let a = c.add_pi("a");
        let b = c.add_pi("b");
        let g = c.add_gate(GateType::And2, vec![a, b], "g").unwrap();
        c.add_po(g, "y");
        let back = read_graphml(&to_bytes(&c)).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn reserialization_is_byte_identical() {
        let c = random_aig(42, 5, 50, 3);
        let b1 = to_bytes(&c);
        let back = read_graphml(&b1).unwrap();
        assert_eq!(c, back);
        let b2 = to_bytes(&back);
        assert_eq!(b1, b2);
    }

    #[test]
    fn missing_slot_is_a_format_error() {
        let text = r#"<?xml version="1.0"?>
<graphml><graph id="g" edgedefault="directed">
  <data key="logic_type">AIG</data>
  <node id="n0"><data key="type">PI</data><data key="name">a</data></node>
  <node id="n1"><data key="type">PO</data><data key="name">y</data></node>
  <edge source="n0" target="n1"></edge>
</graph></graphml>"#;
        let err = read_graphml(text.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Format(_)), "{err}");
        assert!(err.to_string().contains("slot"));
    }

    #[test]
    fn names_with_xml_specials_survive() {
        let mut c = Circuit::new(LogicType::Aig, "a<b>&\"q\"");
        let a = c.add_pi("x&y<z>");
        c.add_po(a, "out'\"");
        let back = read_graphml(&to_bytes(&c)).unwrap();
        assert_eq!(c, back);
    }
}
