//! Majorization-minimization steps on the edge weights.

use nalgebra::{DMatrix, DVector};

use super::{Method, SolverConfig};
use crate::error::{Error, Result};
use crate::ops::{self, SymmetricMatrix, WeightVector};

/// Smooth data term of the objective, as a function of `w`.
pub(crate) enum DataFit {
    /// `tr(S Lw) = <w, L*S>`; the gradient is constant.
    Gaussian { ls: DVector<f64> },
    /// `(p+ν)/n Σ log(1 + <w, u_i>/ν)` with `u_i = L*(x_i x_iᵀ)` stored as the
    /// rows of `u`.
    StudentT { u: DMatrix<f64>, nu: f64, p: usize },
}

impl DataFit {
    pub fn gaussian(s: &DMatrix<f64>) -> Self {
        DataFit::Gaussian { ls: ops::laplacian_adj_raw(s) }
    }

    pub fn student_t(x: &DMatrix<f64>, nu: f64) -> Self {
        let p = x.ncols();
        let pairs = ops::edge_pairs(p);
        let mut u = DMatrix::zeros(x.nrows(), pairs.len());
        for (k, &(i, j)) in pairs.iter().enumerate() {
            let mut col = u.column_mut(k);
            for (t, c) in col.iter_mut().enumerate() {
                let diff = x[(t, i)] - x[(t, j)];
                *c = diff * diff;
            }
        }
        DataFit::StudentT { u, nu, p }
    }

    /// Observation weights `(p+ν)/(<w,u_i> + ν)`.
    fn t_weights(u: &DMatrix<f64>, nu: f64, p: usize, w: &DVector<f64>) -> DVector<f64> {
        let mut q = u * w;
        let c = p as f64 + nu;
        q.apply(|v| *v = c / (*v + nu));
        q
    }

    /// `L*` of the (possibly reweighted) scatter at `w`.
    pub fn gradient(&self, w: &DVector<f64>) -> DVector<f64> {
        match self {
            DataFit::Gaussian { ls } => ls.clone(),
            DataFit::StudentT { u, nu, p } => {
                let c = Self::t_weights(u, *nu, *p, w);
                u.tr_mul(&c) / u.nrows() as f64
            }
        }
    }

    pub fn value(&self, w: &DVector<f64>) -> f64 {
        match self {
            DataFit::Gaussian { ls } => ls.dot(w),
            DataFit::StudentT { u, nu, p } => {
                let n = u.nrows() as f64;
                let q = u * w;
                (*p as f64 + nu) / n * q.iter().map(|v| (v / nu).ln_1p()).sum::<f64>()
            }
        }
    }
}

/// Fixed quantities of one w-subproblem.
pub(crate) struct Subproblem<'a> {
    pub p: usize,
    pub rho: f64,
    /// `L*(Y + rho Θ - η VVᵀ)`
    pub lin: &'a DVector<f64>,
    pub y: &'a DVector<f64>,
    pub d: &'a DVector<f64>,
}

/// Runs up to `inner` projected-gradient steps in place, stopping early once
/// the largest coordinate change drops below `stop`. Returns the number of
/// steps taken.
pub(crate) fn mm_steps(w: &mut DVector<f64>, sub: &Subproblem<'_>, fit: &DataFit, inner: usize, stop: f64) -> usize {
    let den = ops::mm_step_denominator(sub.p, sub.rho);
    let rho = sub.rho;
    for step in 1..=inner {
        let g = fit.gradient(w);
        let deg = ops::degree_raw(sub.p, w.as_slice());
        // a + b, using L*(Lw) = d*(dw) + 2w.
        let dual = sub.y - (sub.d - &deg) * rho;
        let mut change: f64 = 0.0;
        let mut k = 0;
        for j in 0..sub.p {
            for i in j + 1..sub.p {
                let lap_adj = deg[i] + deg[j] + 2.0 * w[k];
                let grad = g[k] - sub.lin[k] + rho * lap_adj + dual[i] + dual[j];
                let next = (w[k] - grad / den).max(0.0);
                change = change.max((next - w[k]).abs());
                w[k] = next;
                k += 1;
            }
        }
        if change < stop {
            return step;
        }
    }
    inner
}

/// One w-block update of the Gaussian methods: `config.inner_iter` projected
/// gradient steps of size `1 / (2 rho (2p-1))` on the quadratic subproblem.
///
/// `eta_term` is the already weighted spectral matrix `η VVᵀ` (k-component
/// methods) and is omitted for connected graphs.
pub fn w_inner_update_gaussian(
    w: &WeightVector,
    theta: &SymmetricMatrix,
    y_mat: &SymmetricMatrix,
    y: &DVector<f64>,
    s: &SymmetricMatrix,
    config: &SolverConfig,
    eta_term: Option<&SymmetricMatrix>,
) -> Result<WeightVector> {
    let p = w.p();
    for (name, dim) in [("theta", theta.dim()), ("Y", y_mat.dim()), ("S", s.dim()), ("y", y.len())] {
        if dim != p {
            return Err(Error::Dimension(format!("{name} has dimension {dim}, expected {p}")));
        }
    }
    if let Some(e) = eta_term {
        if e.dim() != p {
            return Err(Error::Dimension(format!("eta term has dimension {}, expected {p}", e.dim())));
        }
    }
    let method = if eta_term.is_some() { Method::KGaussian } else { Method::ConnectedGaussian };
    let mut cfg = config.clone();
    cfg.k = cfg.k.clamp(1, p - 1);
    cfg.validate(method, p)?;
    let d = config.degrees(p)?;
    let mut m = y_mat.as_matrix() + theta.as_matrix() * config.rho;
    if let Some(e) = eta_term {
        m -= e.as_matrix();
    }
    let lin = ops::laplacian_adj_raw(&m);
    let sub = Subproblem { p, rho: config.rho, lin: &lin, y, d: &d };
    let mut values = w.values().clone();
    mm_steps(&mut values, &sub, &DataFit::gaussian(s), config.inner_iter, config.tol / 10.0);
    Ok(WeightVector::from_raw(p, values))
}

/// Reweighted scatter `(1/n) Σ (p+ν)/(<w, L*(x_i x_iᵀ)> + ν) x_i x_iᵀ`.
pub fn weighted_scatter(x: &DMatrix<f64>, w: &WeightVector, nu: f64) -> Result<SymmetricMatrix> {
    if !(nu.is_finite() && nu > 2.0) {
        return Err(Error::Parameter(format!("nu must exceed 2, got {nu}")));
    }
    if x.nrows() == 0 || x.ncols() != w.p() {
        return Err(Error::Dimension(format!(
            "data is {}x{}, weights are for p = {}",
            x.nrows(),
            x.ncols(),
            w.p()
        )));
    }
    let p = w.p();
    let lw = ops::laplacian_raw(p, w.as_slice());
    let mut weighted = x.clone();
    for (t, mut row) in weighted.row_iter_mut().enumerate() {
        let xt = x.row(t);
        let quad = (xt * &lw).dot(&xt);
        row *= ((p as f64 + nu) / (quad + nu)).sqrt();
    }
    Ok(SymmetricMatrix::symmetrize(weighted.tr_mul(&weighted) / x.nrows() as f64))
}
