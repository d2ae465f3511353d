//! Static timing analysis over mapped netlists and QoR extraction.

use super::cell::CellLibrary;
use crate::error::{Error, Result};
use crate::io::{Backend, QorRecord};
use crate::ir::{Circuit, GateType, LogicType};

/// Topological arrival-time propagation: PIs arrive at 0, each cell
/// output at `max over pins(arrival(fanin) + pin_delay) +
/// wire_delay_per_fanout · (fanout(fanin) − 1)` with the fanout excess
/// floored at 0. The QoR arrival is the worst PO, the area the sum of
/// cell areas.
pub fn sta(n: &Circuit, lib: &CellLibrary, wire_delay_per_fanout: f64) -> Result<QorRecord> {
    if n.logic_type != LogicType::AsicNetlist {
        return Err(Error::usage(format!(
            "sta requires an ASIC netlist, got {}",
            n.logic_type
        )));
    }
    let order = n.topo_order()?;
    let fanout = n.fanout_counts();
    let mut arrival = vec![0.0f64; n.len()];
    let mut area = 0.0f64;
    let mut gate_count = 0u64;
    for &i in &order {
        let node = n.node(i);
        match node.gate {
            GateType::Pi | GateType::Const0 | GateType::Const1 => {}
            GateType::Po | GateType::Buffer => {
                arrival[i as usize] = arrival[node.fanins[0] as usize];
            }
            GateType::Cell => {
                let cell = lib
                    .cell_by_name(&node.name)
                    .ok_or_else(|| Error::usage(format!("unknown cell `{}`", node.name)))?;
                if cell.inputs() != node.arity() {
                    return Err(Error::structure(format!(
                        "node {i}: cell `{}` has {} pins, got {} fanins",
                        node.name,
                        cell.inputs(),
                        node.arity()
                    )));
                }
                area += cell.area;
                gate_count += 1;
                let mut arr = 0.0f64;
                for (pin, &f) in node.fanins.iter().enumerate() {
                    let wire =
                        wire_delay_per_fanout * (fanout[f as usize].saturating_sub(1)) as f64;
                    arr = arr.max(arrival[f as usize] + cell.pin_delays[pin] + wire);
                }
                arrival[i as usize] = arr;
            }
            other => {
                return Err(Error::structure(format!(
                    "node {i}: {other} not allowed in an ASIC netlist"
                )))
            }
        }
    }
    let worst = n
        .pos()
        .iter()
        .map(|&p| arrival[p as usize])
        .fold(0.0f64, f64::max);
    QorRecord::new(area, worst, gate_count, n.stats().depth as u64, Backend::Asic)
}

/// FPGA quality of results: area is the LUT count, depth the LUT
/// levels, and arrival equals the depth.
pub fn fpga_qor(n: &Circuit) -> Result<QorRecord> {
    if n.logic_type != LogicType::FpgaNetlist {
        return Err(Error::usage(format!(
            "fpga_qor requires an FPGA netlist, got {}",
            n.logic_type
        )));
    }
    let s = n.stats();
    let luts = s.count(GateType::Lut) as u64;
    let depth = s.depth as u64;
    QorRecord::new(luts as f64, depth as f64, luts, depth, Backend::Fpga)
}
