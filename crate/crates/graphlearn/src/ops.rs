//! Vectorized graph operators.
//!
//! Edge weights live in a vector of length `m = p(p-1)/2`. Edges are ordered
//! column-major over the strict lower triangle: `(1,0), (2,0), .., (p-1,0),
//! (2,1), ..`. In 1-based terms the linear index of edge `(i, j)` with `i > j`
//! is `i - j + (j-1)(2p-j)/2`; [`edge_index`] is the 0-based version and the
//! only place that formula is written down.

use std::ops::Deref;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Absolute asymmetry (relative to the largest entry) tolerated by
/// [`SymmetricMatrix::new`] before the input is rejected.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// Number of node pairs for `p` nodes.
pub fn edge_count(p: usize) -> usize {
    p * p.saturating_sub(1) / 2
}

/// 0-based linear index of the pair `(i, j)`, `i > j`.
pub fn edge_index(i: usize, j: usize, p: usize) -> usize {
    debug_assert!(i > j && i < p);
    i - j - 1 + j * (2 * p - j - 1) / 2
}

/// Inverse of [`edge_index`].
pub fn edge_pair(k: usize, p: usize) -> (usize, usize) {
    debug_assert!(k < edge_count(p));
    let mut j = 0;
    let mut start = 0;
    loop {
        let len = p - j - 1;
        if k < start + len {
            return (j + 1 + (k - start), j);
        }
        start += len;
        j += 1;
    }
}

/// All pairs `(i, j)` in linear-index order.
pub fn edge_pairs(p: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(edge_count(p));
    for j in 0..p {
        for i in j + 1..p {
            out.push((i, j));
        }
    }
    out
}

/// An edge addressed both by its endpoints and by its linear index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeIndex {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl EdgeIndex {
    pub fn from_pair(i: usize, j: usize, p: usize) -> Result<Self> {
        if i >= p || j >= i {
            return Err(Error::Parameter(format!(
                "edge ({i}, {j}) needs j < i < p = {p}"
            )));
        }
        Ok(Self { i, j, k: edge_index(i, j, p) })
    }

    pub fn from_linear(k: usize, p: usize) -> Result<Self> {
        if k >= edge_count(p) {
            return Err(Error::Parameter(format!(
                "edge index {k} out of range for p = {p}"
            )));
        }
        let (i, j) = edge_pair(k, p);
        Ok(Self { i, j, k })
    }
}

/// Dense symmetric matrix. Construction symmetrizes small floating-point drift
/// and rejects anything larger.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix(DMatrix<f64>);

impl SymmetricMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!(
                "expected a square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let scale = m.amax().max(1.0);
        let asym = (&m - m.transpose()).amax();
        if !asym.is_finite() || asym > SYMMETRY_TOL * scale {
            return Err(Error::Data(format!("matrix is not symmetric (max asymmetry {asym:e})")));
        }
        Ok(Self::symmetrize(m))
    }

    /// Symmetrizes without checking; for internal results that are symmetric
    /// up to rounding by construction.
    pub(crate) fn symmetrize(m: DMatrix<f64>) -> Self {
        let t = m.transpose();
        Self((m + t) * 0.5)
    }

    pub fn identity(p: usize) -> Self {
        Self(DMatrix::identity(p, p))
    }

    pub fn zeros(p: usize) -> Self {
        Self(DMatrix::zeros(p, p))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }
}

impl Deref for SymmetricMatrix {
    type Target = DMatrix<f64>;

    fn deref(&self) -> &DMatrix<f64> {
        &self.0
    }
}

impl From<SymmetricMatrix> for DMatrix<f64> {
    fn from(s: SymmetricMatrix) -> Self {
        s.0
    }
}

/// Nonnegative edge weights for a graph on `p` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    p: usize,
    values: DVector<f64>,
}

impl WeightVector {
    pub fn new(p: usize, values: impl Into<DVector<f64>>) -> Result<Self> {
        let values = values.into();
        if p < 2 {
            return Err(Error::Parameter(format!("need at least 2 nodes, got {p}")));
        }
        if values.len() != edge_count(p) {
            return Err(Error::Dimension(format!(
                "weight vector of length {} does not match p = {p} (expected {})",
                values.len(),
                edge_count(p)
            )));
        }
        if let Some(k) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::Data(format!("weight {k} is {} (must be finite and >= 0)", values[k])));
        }
        Ok(Self { p, values })
    }

    pub(crate) fn from_raw(p: usize, values: DVector<f64>) -> Self {
        debug_assert_eq!(values.len(), edge_count(p));
        Self { p, values }
    }

    pub fn zeros(p: usize) -> Self {
        Self { p, values: DVector::zeros(edge_count(p)) }
    }

    /// Reads the strict lower triangle of an adjacency matrix.
    pub fn from_adjacency(w: &DMatrix<f64>) -> Result<Self> {
        if !w.is_square() {
            return Err(Error::Dimension("adjacency matrix must be square".into()));
        }
        let p = w.nrows();
        let values = DVector::from_iterator(edge_count(p), edge_pairs(p).into_iter().map(|(i, j)| w[(i, j)]));
        Self::new(p, values)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.values
    }

    pub fn as_slice(&self) -> &[f64] {
        self.values.as_slice()
    }

    pub fn into_inner(self) -> DVector<f64> {
        self.values
    }
}

impl std::ops::Index<usize> for WeightVector {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.values[k]
    }
}

pub(crate) fn laplacian_raw(p: usize, w: &[f64]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(p, p);
    let mut k = 0;
    for j in 0..p {
        for i in j + 1..p {
            let v = w[k];
            m[(i, j)] = -v;
            m[(j, i)] = -v;
            m[(i, i)] += v;
            m[(j, j)] += v;
            k += 1;
        }
    }
    m
}

pub(crate) fn adjacency_raw(p: usize, w: &[f64]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(p, p);
    let mut k = 0;
    for j in 0..p {
        for i in j + 1..p {
            m[(i, j)] = w[k];
            m[(j, i)] = w[k];
            k += 1;
        }
    }
    m
}

pub(crate) fn degree_raw(p: usize, w: &[f64]) -> DVector<f64> {
    let mut d = DVector::zeros(p);
    let mut k = 0;
    for j in 0..p {
        for i in j + 1..p {
            d[i] += w[k];
            d[j] += w[k];
            k += 1;
        }
    }
    d
}

pub(crate) fn laplacian_adj_raw(m: &DMatrix<f64>) -> DVector<f64> {
    let p = m.nrows();
    let mut out = DVector::zeros(edge_count(p));
    let mut k = 0;
    for j in 0..p {
        for i in j + 1..p {
            out[k] = m[(i, i)] + m[(j, j)] - m[(i, j)] - m[(j, i)];
            k += 1;
        }
    }
    out
}

pub(crate) fn degree_adj_raw(y: &DVector<f64>) -> DVector<f64> {
    let p = y.len();
    let mut out = DVector::zeros(edge_count(p));
    let mut k = 0;
    for j in 0..p {
        for i in j + 1..p {
            out[k] = y[i] + y[j];
            k += 1;
        }
    }
    out
}

/// Laplacian `Lw`: off-diagonals `-w`, rows summing to zero.
pub fn laplacian_op(w: &WeightVector) -> SymmetricMatrix {
    SymmetricMatrix(laplacian_raw(w.p, w.as_slice()))
}

/// Adjacency `Aw`: off-diagonals `w`, zero diagonal.
pub fn adjacency_op(w: &WeightVector) -> SymmetricMatrix {
    SymmetricMatrix(adjacency_raw(w.p, w.as_slice()))
}

/// Weighted degrees `(Aw) 1`.
pub fn degree_op(w: &WeightVector) -> DVector<f64> {
    degree_raw(w.p, w.as_slice())
}

/// Adjoint of [`laplacian_op`]: entry `(i,j)` is `M_ii + M_jj - M_ij - M_ji`.
pub fn laplacian_adj(m: &SymmetricMatrix) -> DVector<f64> {
    laplacian_adj_raw(&m.0)
}

/// Adjoint of [`degree_op`]: entry `(i,j)` is `y_i + y_j`.
pub fn degree_adj(y: &DVector<f64>) -> Result<DVector<f64>> {
    if y.len() < 2 {
        return Err(Error::Dimension(format!("degree vector needs length >= 2, got {}", y.len())));
    }
    Ok(degree_adj_raw(y))
}

/// Step denominator of the projected gradient w-update: `rho` times the
/// largest eigenvalue of `d*d + L*L`, which is `4p - 2`.
pub fn mm_step_denominator(p: usize, rho: f64) -> f64 {
    2.0 * rho * (2.0 * p as f64 - 1.0)
}
