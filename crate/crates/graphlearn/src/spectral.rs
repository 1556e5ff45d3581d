//! Eigen-based building blocks: the log-determinant proximal map (full and
//! rank-restricted), the Fan subspace, pseudo-inverse square roots and a few
//! diagnostics.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::ops::SymmetricMatrix;

/// Relative threshold (against the largest eigenvalue) below which an
/// eigenvalue counts as zero.
pub const RANK_TOL: f64 = 1e-9;

/// Eigendecomposition with eigenvalues in ascending order.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

impl EigenPair {
    /// `U diag(f(λ)) Uᵀ` over the columns in `range`.
    pub fn reconstruct_with(&self, range: std::ops::Range<usize>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let p = self.vectors.nrows();
        let mut scaled = self.vectors.columns(range.start, range.len()).into_owned();
        for (c, idx) in range.clone().enumerate() {
            let s = f(self.values[idx]);
            scaled.column_mut(c).scale_mut(s);
        }
        let u = self.vectors.columns(range.start, range.len());
        let mut out = DMatrix::zeros(p, p);
        out.gemm(1.0, &scaled, &u.transpose(), 0.0);
        out
    }
}

/// Symmetric eigendecomposition, ascending. Ties keep the solver's order.
pub fn eigh(m: &DMatrix<f64>) -> Result<EigenPair> {
    if !m.is_square() {
        return Err(Error::Dimension("eigendecomposition needs a square matrix".into()));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("eigendecomposition input has non-finite entries".into()));
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 0).ok_or_else(|| {
        Error::Numerical(format!("symmetric eigensolver did not converge (p = {})", m.nrows()))
    })?;
    let p = m.nrows();
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let values = DVector::from_iterator(p, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(p, p);
    for (c, &i) in order.iter().enumerate() {
        vectors.set_column(c, &eig.eigenvectors.column(i));
    }
    Ok(EigenPair { values, vectors })
}

/// Positive root of `rho x^2 - gamma x - 1 = 0`.
#[inline]
pub fn prox_eigenvalue(gamma: f64, rho: f64) -> f64 {
    if gamma >= 0.0 {
        (gamma + (gamma * gamma + 4.0 * rho).sqrt()) / (2.0 * rho)
    } else {
        // Same root, written to avoid cancellation for very negative gamma.
        2.0 / ((gamma * gamma + 4.0 * rho).sqrt() - gamma)
    }
}

/// Result of a proximal evaluation, keeping the mapped eigenvalues so callers
/// can form `log det` without a second decomposition.
#[derive(Debug, Clone)]
pub(crate) struct ProxOut {
    pub matrix: DMatrix<f64>,
    pub log_det: f64,
}

pub(crate) fn prox_logdet_raw(m: &DMatrix<f64>, rho: f64, k: usize) -> Result<ProxOut> {
    let eig = eigh(m)?;
    let p = m.nrows();
    let log_det = (k..p).map(|i| prox_eigenvalue(eig.values[i], rho).ln()).sum();
    let matrix = eig.reconstruct_with(k..p, |g| prox_eigenvalue(g, rho));
    Ok(ProxOut { matrix: symmetrized(matrix), log_det })
}

fn symmetrized(m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    (m + t) * 0.5
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::Parameter(format!("rho must be positive, got {rho}")));
    }
    Ok(())
}

/// Minimizer of `-log det(Ω) + (rho/2)‖Ω - M/rho‖²`, i.e. the matrix solving
/// `-Ω⁻¹ + rho Ω = M`: `U (Γ + sqrt(Γ² + 4 rho I)) Uᵀ / (2 rho)`.
pub fn prox_logdet(m: &SymmetricMatrix, rho: f64) -> Result<SymmetricMatrix> {
    check_rho(rho)?;
    Ok(SymmetricMatrix::symmetrize(prox_logdet_raw(m, rho, 0)?.matrix))
}

/// Same eigenvalue map applied only to the `p - k` largest eigenvalues of `M`;
/// the output has rank `p - k`. `k = 0` is the full-rank map.
pub fn prox_logdet_rank(m: &SymmetricMatrix, rho: f64, k: usize) -> Result<SymmetricMatrix> {
    check_rho(rho)?;
    if k >= m.dim() {
        return Err(Error::Parameter(format!("k = {k} must be below p = {}", m.dim())));
    }
    Ok(SymmetricMatrix::symmetrize(prox_logdet_raw(m, rho, k)?.matrix))
}

/// Eigenvectors of the `k` smallest eigenvalues: the minimizer of `tr(VᵀLV)`
/// over orthonormal `p × k` matrices.
pub fn fan_subspace(l: &SymmetricMatrix, k: usize) -> Result<DMatrix<f64>> {
    if k == 0 || k >= l.dim() {
        return Err(Error::Parameter(format!("k = {k} must satisfy 1 <= k < p = {}", l.dim())));
    }
    fan_subspace_raw(l, k)
}

pub(crate) fn fan_subspace_raw(l: &DMatrix<f64>, k: usize) -> Result<DMatrix<f64>> {
    let eig = eigh(l)?;
    Ok(eig.vectors.columns(0, k).into_owned())
}

/// Factor `B = U₊ diag(λ₊^{-1/2})` with `B Bᵀ = M†`, keeping eigenvalues above
/// `rank_tol · λmax`.
pub fn psd_sqrt_pinv(m: &SymmetricMatrix, rank_tol: f64) -> Result<DMatrix<f64>> {
    let eig = eigh(m)?;
    let p = m.dim();
    let top = eig.values[p - 1];
    if top.is_nan() || top <= 0.0 {
        return Err(Error::Data("matrix has no positive eigenvalue".into()));
    }
    let keep: Vec<usize> = (0..p).filter(|&i| eig.values[i] > rank_tol * top).collect();
    let mut b = DMatrix::zeros(p, keep.len());
    for (c, &i) in keep.iter().enumerate() {
        b.set_column(c, &(eig.vectors.column(i) / eig.values[i].sqrt()));
    }
    Ok(b)
}

/// Moore-Penrose pseudo-inverse of a symmetric matrix.
pub fn pinv(m: &SymmetricMatrix, rank_tol: f64) -> Result<SymmetricMatrix> {
    let eig = eigh(m)?;
    let p = m.dim();
    let scale = eig.values.amax();
    let inv = eig.reconstruct_with(0..p, |g| if g.abs() > rank_tol * scale { 1.0 / g } else { 0.0 });
    Ok(SymmetricMatrix::symmetrize(inv))
}

/// Count of eigenvalues below `rank_tol · λmax`.
pub fn nullity(m: &SymmetricMatrix, rank_tol: f64) -> Result<usize> {
    let eig = eigh(m)?;
    let top = eig.values.max();
    Ok(eig.values.iter().filter(|&&v| v < rank_tol * top).count())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDiagnostics {
    /// `λmax / λmin`, or `+∞` when `singular` is set.
    pub condition_number: f64,
    /// Set when `λmin <= RANK_TOL · |λmax|`.
    pub singular: bool,
    /// Eigenvalues in descending order.
    pub eigenvalues: Vec<f64>,
    /// Sample variance (denominator `p - 1`) of each eigenvector's entries,
    /// in the same order as `eigenvalues`.
    pub eigenvector_variances: Vec<f64>,
}

/// Condition number and eigenvector spread. A near-constant leading
/// eigenvector (variance close to zero) is the signature of a market factor.
pub fn spectral_diagnostics(m: &SymmetricMatrix) -> Result<SpectralDiagnostics> {
    let eig = eigh(m)?;
    let p = m.dim();
    let lmax = eig.values[p - 1];
    let lmin = eig.values[0];
    let singular = lmin <= RANK_TOL * lmax.abs();
    let condition_number = if singular { f64::INFINITY } else { lmax / lmin };
    let mut eigenvalues = Vec::with_capacity(p);
    let mut eigenvector_variances = Vec::with_capacity(p);
    for c in (0..p).rev() {
        eigenvalues.push(eig.values[c]);
        let v = eig.vectors.column(c);
        let mean = v.mean();
        let ss: f64 = v.iter().map(|x| (x - mean).powi(2)).sum();
        eigenvector_variances.push(if p > 1 { ss / (p - 1) as f64 } else { 0.0 });
    }
    Ok(SpectralDiagnostics { condition_number, singular, eigenvalues, eigenvector_variances })
}
