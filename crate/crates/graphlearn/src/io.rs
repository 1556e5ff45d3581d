//! CSV and JSON formats.
//!
//! * Data CSV: header row of asset names, one observation per row, optional
//!   leading `date` column. Empty, `NA` and `NaN` cells mark missing values.
//! * Graph JSON: `{"p", "nodes", "edges": [{"i", "j", "weight"}], "method",
//!   "converged", "iterations", "config"}` with 0-based `i < j`; only weights
//!   above [`EMIT_THRESHOLD`] are written.
//! * Trace CSV: `iter,r_norm,s_norm,v_norm,lagrangian`.
//! * Labels CSV: `node,label`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ops::{edge_count, edge_index, edge_pairs, WeightVector};
use crate::solvers::{GraphEstimate, SolverTrace, TraceRecord};

/// Smallest weight written to graph JSON.
pub const EMIT_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub names: Vec<String>,
    pub timestamps: Option<Vec<String>>,
    /// Complete rows only.
    pub values: DMatrix<f64>,
    /// Number of rows dropped for missing values.
    pub dropped: usize,
}

fn parse_cell(s: &str) -> Option<Option<f64>> {
    let t = s.trim();
    if t.is_empty() || t.eq_ignore_ascii_case("na") || t.eq_ignore_ascii_case("nan") {
        return Some(None);
    }
    t.parse::<f64>().ok().filter(|v| v.is_finite()).map(Some)
}

/// Reads a numeric table, dropping rows with missing values.
pub fn read_table(path: impl AsRef<Path>) -> Result<Table> {
    let path = path.as_ref();
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let headers = rdr.headers()?.clone();
    let has_date = headers.get(0).is_some_and(|h| h.eq_ignore_ascii_case("date"));
    let skip = usize::from(has_date);
    let names: Vec<String> = headers.iter().skip(skip).map(str::to_owned).collect();
    if names.is_empty() {
        return Err(Error::Data(format!("{}: no data columns", path.display())));
    }
    let p = names.len();
    let mut data = Vec::new();
    let mut stamps = Vec::new();
    let mut dropped = 0;
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != p + skip {
            return Err(Error::Data(format!("{}: row {} has {} fields, expected {}", path.display(), r + 1, rec.len(), p + skip)));
        }
        let mut row = Vec::with_capacity(p);
        for (c, cell) in rec.iter().skip(skip).enumerate() {
            match parse_cell(cell) {
                Some(v) => row.push(v),
                None => {
                    return Err(Error::Data(format!(
                        "{}: row {}, column {}: cannot parse {cell:?}",
                        path.display(),
                        r + 1,
                        names[c]
                    )))
                }
            }
        }
        if row.iter().any(Option::is_none) {
            dropped += 1;
            continue;
        }
        data.extend(row.into_iter().flatten());
        if has_date {
            stamps.push(rec[0].to_owned());
        }
    }
    let n = data.len() / p;
    Ok(Table {
        names,
        timestamps: has_date.then_some(stamps),
        values: DMatrix::from_row_slice(n, p, &data),
        dropped,
    })
}

/// Writes an `n × p` table with a name header.
pub fn write_table(path: impl AsRef<Path>, names: &[String], values: &DMatrix<f64>) -> Result<()> {
    if names.len() != values.ncols() {
        return Err(Error::Dimension(format!("{} names for {} columns", names.len(), values.ncols())));
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(names)?;
    for row in values.row_iter() {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub p: usize,
    pub nodes: Vec<String>,
    pub edges: Vec<Edge>,
    pub method: String,
    pub converged: bool,
    pub iterations: usize,
    pub config: serde_json::Value,
    /// Ground-truth blocks for planted graphs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<usize>>,
}

fn edges_of(w: &WeightVector) -> Vec<Edge> {
    let p = w.p();
    let mut edges: Vec<Edge> = edge_pairs(p)
        .into_iter()
        .zip(w.as_slice())
        .filter(|(_, v)| **v > EMIT_THRESHOLD)
        .map(|((i, j), v)| Edge { i: j, j: i, weight: *v })
        .collect();
    edges.sort_by_key(|e| (e.i, e.j));
    edges
}

impl GraphFile {
    pub fn from_estimate(est: &GraphEstimate) -> Result<Self> {
        Ok(Self {
            p: est.p(),
            nodes: est.node_names.clone(),
            edges: edges_of(&est.weights),
            method: est.method.to_string(),
            converged: est.converged,
            iterations: est.iterations,
            config: serde_json::to_value(&est.config)?,
            labels: None,
        })
    }

    pub fn from_weights(w: &WeightVector, nodes: Vec<String>, method: &str, config: serde_json::Value) -> Result<Self> {
        if nodes.len() != w.p() {
            return Err(Error::Dimension(format!("{} node names for p = {}", nodes.len(), w.p())));
        }
        Ok(Self { p: w.p(), nodes, edges: edges_of(w), method: method.to_owned(), converged: true, iterations: 0, config, labels: None })
    }

    /// Rebuilds the weight vector, validating node count and edge indices.
    pub fn weights(&self) -> Result<WeightVector> {
        if self.nodes.len() != self.p {
            return Err(Error::Data(format!("graph declares p = {} but lists {} nodes", self.p, self.nodes.len())));
        }
        let mut w = DVector::zeros(edge_count(self.p));
        for e in &self.edges {
            if !(e.i < e.j && e.j < self.p) {
                return Err(Error::Data(format!("edge ({}, {}) out of range for p = {}", e.i, e.j, self.p)));
            }
            w[edge_index(e.j, e.i, self.p)] = e.weight;
        }
        WeightVector::new(self.p, w)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let f = File::open(path)?;
        Ok(serde_json::from_reader(std::io::BufReader::new(f))?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        write_json(path, self)
    }
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value)?;
    f.write_all(b"\n")?;
    f.flush()?;
    Ok(())
}

pub fn write_trace(path: impl AsRef<Path>, trace: &SolverTrace) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in &trace.records {
        w.serialize(r)?;
    }
    if trace.records.is_empty() {
        w.write_record(["iter", "r_norm", "s_norm", "v_norm", "lagrangian"])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace(path: impl AsRef<Path>) -> Result<SolverTrace> {
    let mut rdr = csv::Reader::from_path(path)?;
    let records = rdr.deserialize::<TraceRecord>().collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(SolverTrace { records })
}

/// Reads `node,label` rows.
pub fn read_labels(path: impl AsRef<Path>) -> Result<Vec<(String, String)>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() < 2 {
            return Err(Error::Data("labels CSV needs node,label columns".into()));
        }
        out.push((rec[0].to_owned(), rec[1].to_owned()));
    }
    Ok(out)
}

pub fn write_labels(path: impl AsRef<Path>, nodes: &[String], labels: &[usize]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["node", "label"])?;
    for (n, l) in nodes.iter().zip(labels) {
        w.write_record([n.as_str(), &l.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
