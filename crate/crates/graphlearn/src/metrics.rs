//! Graph comparison and structure metrics.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ops::{edge_pairs, WeightVector};

/// Weights above this count as edges.
pub const EDGE_THRESHOLD: f64 = 1e-4;

/// One integer type per node, `1..=t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeLabels {
    labels: Vec<usize>,
    types: usize,
}

impl NodeLabels {
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        if let Some(i) = labels.iter().position(|&l| l == 0) {
            return Err(Error::Data(format!("label of node {i} is 0; labels start at 1")));
        }
        let types = labels.iter().copied().max().unwrap_or(0);
        Ok(Self { labels, types })
    }

    /// Maps arbitrary names to `1..=t` in order of first appearance.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Self {
        let mut ids: BTreeMap<&str, usize> = BTreeMap::new();
        let mut labels = Vec::with_capacity(names.len());
        let mut next = 0;
        for n in names {
            let id = *ids.entry(n.as_ref()).or_insert_with(|| {
                next += 1;
                next
            });
            labels.push(id);
        }
        Self { labels, types: next }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn type_count(&self) -> usize {
        self.types
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

fn check_square(w: &DMatrix<f64>, labels: &NodeLabels) -> Result<()> {
    if !w.is_square() {
        return Err(Error::Dimension("adjacency matrix must be square".into()));
    }
    if labels.len() != w.nrows() {
        return Err(Error::Dimension(format!("{} labels for {} nodes", labels.len(), w.nrows())));
    }
    Ok(())
}

/// `Q = 1/(p(p-1)) Σ_ij (W_ij - d_i d_j / (p(p-1))) 1(t_i = t_j)` over all
/// ordered pairs, diagonal included.
///
/// Note the normalizer is `p(p-1)` rather than the total edge weight of the
/// classical definition.
pub fn modularity(w: &DMatrix<f64>, labels: &NodeLabels) -> Result<f64> {
    check_square(w, labels)?;
    let p = w.nrows();
    let norm = (p * (p - 1)) as f64;
    let deg: Vec<f64> = w.row_iter().map(|r| r.sum()).collect();
    let t = labels.labels();
    let mut q = 0.0;
    for i in 0..p {
        for j in 0..p {
            if t[i] == t[j] {
                q += w[(i, j)] - deg[i] * deg[j] / norm;
            }
        }
    }
    Ok(q / norm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FScore {
    pub fscore: f64,
    pub precision: f64,
    pub recall: f64,
}

/// Binary F1 over edge presence, `reference` taken as truth. Two empty edge
/// sets score 1.
pub fn edge_fscore(estimated: &WeightVector, reference: &WeightVector, threshold: f64) -> Result<FScore> {
    if estimated.p() != reference.p() {
        return Err(Error::Dimension(format!("graphs have {} and {} nodes", estimated.p(), reference.p())));
    }
    let (mut tp, mut fp, mut fneg) = (0usize, 0usize, 0usize);
    for (e, r) in estimated.as_slice().iter().zip(reference.as_slice()) {
        match (*e > threshold, *r > threshold) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fneg += 1,
            (false, false) => {}
        }
    }
    if tp + fp + fneg == 0 {
        return Ok(FScore { fscore: 1.0, precision: 1.0, recall: 1.0 });
    }
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fneg);
    let fscore = ratio(2 * tp, 2 * tp + fp + fneg);
    Ok(FScore { fscore, precision, recall })
}

/// `‖est - ref‖_F / ‖ref‖_F`; falls back to `‖est‖_F` when the reference is
/// zero.
pub fn relative_error(estimated: &DMatrix<f64>, reference: &DMatrix<f64>) -> Result<f64> {
    if estimated.shape() != reference.shape() {
        return Err(Error::Dimension(format!("shapes {:?} and {:?} differ", estimated.shape(), reference.shape())));
    }
    let den = reference.norm();
    let num = (estimated - reference).norm();
    Ok(if den == 0.0 { num } else { num / den })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDistribution {
    pub intra: usize,
    pub inter: usize,
}

/// Counts edges (weight above `threshold`) inside and across label groups.
pub fn edge_distribution(w: &DMatrix<f64>, labels: &NodeLabels, threshold: f64) -> Result<EdgeDistribution> {
    check_square(w, labels)?;
    let t = labels.labels();
    let mut out = EdgeDistribution { intra: 0, inter: 0 };
    for (i, j) in edge_pairs(w.nrows()) {
        if w[(i, j)] > threshold {
            if t[i] == t[j] {
                out.intra += 1;
            } else {
                out.inter += 1;
            }
        }
    }
    Ok(out)
}

/// Connected components of the graph keeping edges above `threshold`.
/// Component ids are `0..c`, numbered by smallest member node.
pub fn components(w: &DMatrix<f64>, threshold: f64) -> Vec<usize> {
    let p = w.nrows();
    let mut comp = vec![usize::MAX; p];
    let mut next = 0;
    let mut stack = Vec::new();
    for s in 0..p {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for v in 0..p {
                if v != u && comp[v] == usize::MAX && w[(u, v)] > threshold {
                    comp[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    comp
}

pub fn component_count(w: &DMatrix<f64>, threshold: f64) -> usize {
    components(w, threshold).into_iter().max().map_or(0, |m| m + 1)
}

/// Whether two labelings induce the same partition (ids may differ).
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && (0..a.len()).all(|i| (0..i).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}
