//! File formats: canonical JSON, signal and coefficient CSV, system files.
//!
//! Every JSON document is written with sorted object keys, two-space
//! indentation and floats printed like C's `%.17g`, so that identical inputs
//! give byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::embedding::VertexBlockMap;
use crate::error::{Error, Result};
use crate::framelets::{AtomKey, CoefficientVector, FrameletSystem};
use crate::hierarchy::{BlockId, HierarchicalPartition, PartitionJson};

/// `x` formatted as `printf("%.17g", x)`.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_g17(n.as_f64().expect("f64 number")));
            } else {
                write!(out, "{n}").expect("string write");
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string escape")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            // Short rows of scalars stay on one line.
            if items.len() <= 8 && items.iter().all(|i| !i.is_array() && !i.is_object()) {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, item, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                pad(out, indent + 2);
                write_value(out, item, indent + 2);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let sorted: BTreeMap<&String, &Value> = map.iter().collect();
            out.push_str("{\n");
            for (k, (key, item)) in sorted.iter().enumerate() {
                pad(out, indent + 2);
                out.push_str(&serde_json::to_string(key).expect("key escape"));
                out.push_str(": ");
                write_value(out, item, indent + 2);
                out.push_str(if k + 1 < sorted.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

/// Canonical text of any serializable value, newline-terminated.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_canonical_json(value)?)?;
    Ok(())
}

/// Reads and parses a JSON file; syntax and shape errors become [`Error::Parse`].
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn csv_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{}: {e}", path.display()))
}

/// `vertex_label,value` rows; a header row is optional on input.
pub fn read_signal_csv(path: &Path) -> Result<Vec<(String, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        if record.len() != 2 {
            return Err(csv_error(
                path,
                format!("row {} has {} fields", i + 1, record.len()),
            ));
        }
        if i == 0 && record[0].eq_ignore_ascii_case("vertex_label") {
            continue;
        }
        let value: f64 = record[1]
            .parse()
            .map_err(|e| csv_error(path, format!("row {}: {e}", i + 1)))?;
        rows.push((record[0].to_string(), value));
    }
    Ok(rows)
}

pub fn signal_csv(rows: &[(String, f64)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["vertex_label", "value"])
        .map_err(|e| Error::Parse(e.to_string()))?;
    for (label, value) in rows {
        w.write_record([label.as_str(), &format_g17(*value)])
            .map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8 csv"))
}

/// `level,parent_id,l1,l2,value`, with `φ0` as the row `-1,0,0,0,c`.
pub fn coefficients_csv(c: &CoefficientVector) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(["level", "parent_id", "l1", "l2", "value"])
        .map_err(err)?;
    w.write_record(["-1", "0", "0", "0", &format_g17(c.phi0)])
        .map_err(err)?;
    for (k, v) in c.iter() {
        w.write_record([
            k.level.to_string(),
            k.parent.0.to_string(),
            k.l1.to_string(),
            k.l2.to_string(),
            format_g17(v),
        ])
        .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8 csv"))
}

pub fn read_coefficients_csv(path: &Path) -> Result<CoefficientVector> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let mut phi0 = None;
    let mut entries = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        if record.len() != 5 {
            return Err(csv_error(
                path,
                format!("row {} has {} fields", i + 1, record.len()),
            ));
        }
        let bad = |e: &dyn std::fmt::Display| csv_error(path, format!("row {}: {e}", i + 1));
        let level: i64 = record[0].parse().map_err(|e| bad(&e))?;
        let value: f64 = record[4].parse().map_err(|e| bad(&e))?;
        if level < 0 {
            phi0 = Some(value);
            continue;
        }
        let parse = |s: &str| s.parse::<usize>().map_err(|e| bad(&e));
        entries.push((
            AtomKey {
                level: level as usize,
                parent: BlockId(parse(&record[1])?),
                l1: parse(&record[2])?,
                l2: parse(&record[3])?,
            },
            value,
        ));
    }
    let phi0 = phi0.ok_or_else(|| csv_error(path, "missing the -1 (phi0) row"))?;
    Ok(CoefficientVector::new(phi0, entries))
}

/// Which stage of the pipeline a system file holds.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    Full,
    Restricted,
    Pruned,
    Custom,
}

/// A framelet system on disk: its partition, cut-off depth and atom keys.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemFile {
    pub partition: PartitionJson,
    pub depth: usize,
    pub kind: SystemKind,
    pub atoms: Vec<AtomKey>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_blocks: Option<BTreeMap<String, usize>>,
}

/// A system loaded from disk, with the vertex blocks if it was built for a graph.
#[derive(Clone, Debug)]
pub struct LoadedSystem {
    pub kind: SystemKind,
    pub system: FrameletSystem,
    pub vertex_blocks: Option<VertexBlockMap>,
}

impl SystemFile {
    pub fn new(system: &FrameletSystem, kind: SystemKind, vbm: Option<&VertexBlockMap>) -> Self {
        Self {
            partition: PartitionJson::from(&**system.partition()),
            depth: system.depth(),
            kind,
            atoms: system.keys().collect(),
            vertex_blocks: vbm.map(VertexBlockMap::to_json),
        }
    }

    pub fn load(self) -> Result<LoadedSystem> {
        let partition: Arc<HierarchicalPartition> = Arc::new(self.partition.into_partition()?);
        let system = FrameletSystem::from_keys(partition.clone(), self.depth, self.atoms)?;
        let vertex_blocks = match self.vertex_blocks {
            Some(map) => {
                let vbm = VertexBlockMap::from_json(map);
                vbm.check_against(&partition)?;
                Some(vbm)
            }
            None => None,
        };
        Ok(LoadedSystem {
            kind: self.kind,
            system,
            vertex_blocks,
        })
    }
}
