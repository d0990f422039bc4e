// Copyright 2026 The qcnn Authors
// SPDX-License-Identifier: Apache-2.0

//! CSV tables with a fixed column schema and an optional metadata line.
//!
//! A table starts with `# meta {json}` when metadata is attached, followed
//! by an ordinary header and rows. Missing numbers are empty cells and
//! infinite sample complexities are written `∞`.

use std::io::{Read, Write};
use std::path::Path;

use super::complexity::{format_m_min, ComplexityRow};
use super::config::Metadata;
use super::resources::ResourceCount;
use crate::qec::CurvePoint;
use crate::train::{History, SweepRow, TrainingSet};
use crate::{Error, Result};

const META_PREFIX: &str = "# meta ";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnKind {
    Float,
    /// Float, `∞`, or empty.
    OptFloat,
    Int,
    Bool,
    Text,
}

impl ColumnKind {
    fn accepts(&self, cell: &str) -> bool {
        match self {
            ColumnKind::Float => cell.parse::<f64>().is_ok_and(f64::is_finite),
            ColumnKind::OptFloat => cell.is_empty() || cell == "∞" || cell.parse::<f64>().is_ok(),
            ColumnKind::Int => cell.parse::<i64>().is_ok(),
            ColumnKind::Bool => cell == "true" || cell == "false",
            ColumnKind::Text => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CsvSchema {
    pub name: String,
    pub columns: Vec<(String, ColumnKind)>,
}

impl CsvSchema {
    fn new(name: &str, cols: &[(&str, ColumnKind)]) -> CsvSchema {
        CsvSchema { name: name.into(), columns: cols.iter().map(|(c, k)| (c.to_string(), *k)).collect() }
    }

    pub fn header(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.0.as_str()).collect()
    }

    pub fn sweep() -> CsvSchema {
        use ColumnKind::*;
        CsvSchema::new("sweep", &[("h1", Float), ("h2", Float), ("output", OptFloat), ("error", Text)])
    }

    pub fn training_set() -> CsvSchema {
        use ColumnKind::*;
        CsvSchema::new("training_set", &[("h1", Float), ("h2", Float), ("label", Int), ("sop", OptFloat)])
    }

    pub fn history() -> CsvSchema {
        use ColumnKind::*;
        CsvSchema::new("history", &[("iteration", Int), ("mse", Float), ("eta", Float), ("accepted", Bool)])
    }

    pub fn qec_curve() -> CsvSchema {
        use ColumnKind::*;
        CsvSchema::new("qec_curve", &[("total_rate", Float), ("learned", Float), ("shor", Float), ("identity", Float)])
    }

    pub fn sop_expand() -> CsvSchema {
        use ColumnKind::*;
        CsvSchema::new("sop_expand", &[("pauli", Text), ("coefficient", Float), ("exact", Text)])
    }

    pub fn sample_complexity() -> CsvSchema {
        use ColumnKind::*;
        CsvSchema::new("sample_complexity", &[("p", Float), ("p0", Float), ("m_min", OptFloat)])
    }

    pub fn resources() -> CsvSchema {
        use ColumnKind::*;
        CsvSchema::new("resources", &[("layer", Text), ("czz", Float), ("cxcxx", Float), ("cxz", Float), ("total", Float)])
    }

    /// Depends on the string lengths compared.
    pub fn complexity(lens: &[usize]) -> CsvSchema {
        use ColumnKind::*;
        let mut s = CsvSchema::new("complexity", &[("h1", Float), ("h2", Float), ("qcnn", OptFloat), ("qcnn_m_min", OptFloat)]);
        for l in lens {
            s.columns.push((format!("sop{l}"), OptFloat));
            s.columns.push((format!("sop{l}_m_min"), OptFloat));
        }
        s.columns.push(("ratio".into(), OptFloat));
        s.columns.push(("error".into(), Text));
        s
    }

    pub fn check_row(&self, row: &[String]) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Schema(format!("{}: row has {} cells, expected {}", self.name, row.len(), self.columns.len())));
        }
        for ((name, kind), cell) in self.columns.iter().zip(row) {
            if !kind.accepts(cell) {
                return Err(Error::Schema(format!("{}: column {name} rejects {cell:?}", self.name)));
            }
        }
        Ok(())
    }
}

/// Empty for NaN, `∞` for infinity.
pub fn cell(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format_m_min(v)
    }
}

/// Validates every row, then writes the table.
pub fn write_table<W: Write>(mut w: W, meta: Option<&Metadata>, schema: &CsvSchema, rows: &[Vec<String>]) -> Result<()> {
    for r in rows {
        schema.check_row(r)?;
    }
    if let Some(m) = meta {
        writeln!(w, "{META_PREFIX}{}", serde_json::to_string(m)?)?;
    }
    let mut out = csv::Writer::from_writer(w);
    out.write_record(schema.header())?;
    for r in rows {
        out.write_record(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_table_file(path: &Path, meta: Option<&Metadata>, schema: &CsvSchema, rows: &[Vec<String>]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    write_table(std::fs::File::create(path)?, meta, schema, rows)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub meta: Option<Metadata>,
    pub rows: Vec<Vec<String>>,
}

/// Parses a table and checks it against `schema`.
pub fn read_table<R: Read>(mut r: R, schema: &CsvSchema) -> Result<Table> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    let (meta, body) = match text.strip_prefix(META_PREFIX) {
        Some(rest) => {
            let (line, body) = rest.split_once('\n').unwrap_or((rest, ""));
            let m: Metadata = serde_json::from_str(line)?;
            if !m.is_consistent() {
                return Err(Error::Schema("metadata config does not match its hash".into()));
            }
            (Some(m), body)
        }
        None => (None, text.as_str()),
    };
    let mut rd = csv::Reader::from_reader(body.as_bytes());
    let header: Vec<String> = rd.headers()?.iter().map(String::from).collect();
    if header != schema.header() {
        return Err(Error::Schema(format!("{}: header {header:?} does not match {:?}", schema.name, schema.header())));
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let row: Vec<String> = rec?.iter().map(String::from).collect();
        schema.check_row(&row)?;
        rows.push(row);
    }
    Ok(Table { meta, rows })
}

pub fn read_table_file(path: &Path, schema: &CsvSchema) -> Result<Table> {
    read_table(std::fs::File::open(path)?, schema)
}

pub fn sweep_rows(rows: &[SweepRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| vec![r.h1.to_string(), r.h2.to_string(), r.output.map(cell).unwrap_or_default(), r.error.clone().unwrap_or_default()])
        .collect()
}

pub fn training_set_rows(set: &TrainingSet) -> Vec<Vec<String>> {
    use crate::train::StateSpec;
    set.samples
        .iter()
        .map(|s| {
            let (h1, h2) = match &s.spec {
                StateSpec::Cluster { params, .. } => (params.h1, params.h2),
                StateSpec::Explicit => (f64::NAN, f64::NAN),
            };
            vec![h1.to_string(), h2.to_string(), (s.label as i64).to_string(), s.sop.map(cell).unwrap_or_default()]
        })
        .collect()
}

pub fn history_rows(h: &History) -> Vec<Vec<String>> {
    h.steps
        .iter()
        .map(|s| vec![s.iteration.to_string(), s.loss.to_string(), s.eta.to_string(), s.accepted.to_string()])
        .collect()
}

pub fn curve_rows(points: &[CurvePoint]) -> Vec<Vec<String>> {
    points
        .iter()
        .map(|p| vec![p.total_rate.to_string(), p.learned.to_string(), p.shor.to_string(), p.identity.to_string()])
        .collect()
}

pub fn complexity_rows(rows: &[ComplexityRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            let mut v = vec![r.h1.to_string(), r.h2.to_string(), cell(r.qcnn_expectation), cell(r.qcnn_m_min)];
            for s in &r.sops {
                v.push(cell(s.expectation));
                v.push(cell(s.m_min));
            }
            v.push(cell(r.ratio));
            v.push(r.error.clone().unwrap_or_default());
            v
        })
        .collect()
}

pub fn resource_rows(r: &ResourceCount) -> Vec<Vec<String>> {
    let mut rows: Vec<Vec<String>> = r
        .layers
        .iter()
        .map(|l| vec![l.k.to_string(), l.czz.to_string(), l.cxcxx.to_string(), l.cxz.to_string(), l.total().to_string()])
        .collect();
    rows.push(vec!["final".into(), r.final_czz.to_string(), "0".into(), "0".into(), r.final_czz.to_string()]);
    rows.push(vec!["closed_form".into(), "0".into(), "0".into(), "0".into(), r.multi_qubit_ops.to_string()]);
    rows
}
