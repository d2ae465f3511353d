//! QoR (quality-of-results) records as JSON. Serialization is
//! deterministic: fixed key order and 17-significant-digit floats, so
//! identical records produce identical bytes.

use crate::error::{Error, Result};
use std::io::Write;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Backend {
    Asic,
    Fpga,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Asic => "asic",
            Backend::Fpga => "fpga",
        }
    }

    pub fn from_name(s: &str) -> Option<Backend> {
        match s {
            "asic" => Some(Backend::Asic),
            "fpga" => Some(Backend::Fpga),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct QorRecord {
    /// Total area in library units (LUT count for FPGA).
    pub area: f64,
    /// Worst-case arrival time; for FPGA records this is the depth
    /// timing proxy.
    pub arrival: f64,
    pub gate_count: u64,
    pub depth: u64,
    pub backend: Backend,
}

impl QorRecord {
    pub fn new(
        area: f64,
        arrival: f64,
        gate_count: u64,
        depth: u64,
        backend: Backend,
    ) -> Result<QorRecord> {
        let q = QorRecord {
            area,
            arrival,
            gate_count,
            depth,
            backend,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.area >= 0.0) {
            return Err(Error::format(format!("negative area {}", self.area)));
        }
        if !(self.arrival >= 0.0) {
            return Err(Error::format(format!("negative arrival {}", self.arrival)));
        }
        Ok(())
    }
}

/// 17 significant digits: enough to round-trip any f64 exactly.
fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

pub fn write_qor(q: &QorRecord, sink: &mut dyn Write) -> Result<()> {
    q.validate()?;
    let json = format!(
        "{{\"area\":{},\"arrival\":{},\"gate_count\":{},\"depth\":{},\"backend\":\"{}\"}}\n",
        fmt_f64(q.area),
        fmt_f64(q.arrival),
        q.gate_count,
        q.depth,
        q.backend.name()
    );
    sink.write_all(json.as_bytes())?;
    Ok(())
}

pub fn read_qor(source: &[u8]) -> Result<QorRecord> {
    let value: serde_json::Value = serde_json::from_slice(source)
        .map_err(|e| Error::format(format!("bad QoR JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::format("QoR record must be a JSON object"))?;
    let num = |key: &str| -> Result<Option<f64>> {
        match obj.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_f64()
                .map(Some)
                .ok_or_else(|| Error::format(format!("QoR field `{key}` must be a number"))),
        }
    };
    let require = |o: Option<f64>, key: &str| {
        o.ok_or_else(|| Error::format(format!("QoR record missing `{key}`")))
    };
    let backend = obj
        .get("backend")
        .and_then(|v| v.as_str())
        .and_then(Backend::from_name)
        .ok_or_else(|| Error::format("QoR record missing or invalid `backend`"))?;
    let area = require(num("area")?, "area")?;
    let gate_count = require(num("gate_count")?, "gate_count")? as u64;
    let depth = require(num("depth")?, "depth")? as u64;
    // FPGA records may omit arrival: depth is the timing proxy
    let arrival = match (num("arrival")?, backend) {
        (Some(a), _) => a,
        (None, Backend::Fpga) => depth as f64,
        (None, Backend::Asic) => return Err(Error::format("QoR record missing `arrival`")),
    };
    let q = QorRecord {
        area,
        arrival,
        gate_count,
        depth,
        backend,
    };
    q.validate()?;
    Ok(q)
}
