//! ADMM graph-learning solvers.
//!
//! All four variants share one outer loop (see `engine`): a proximal update of
//! the auxiliary precision `Θ`, a few projected-gradient MM steps on the edge
//! weights, an optional subspace update, then dual ascent on `Θ = Lw` and
//! `dw = d`. They differ only in
//!
//! * how `Θ` is proximated: connected variants shift by `J = 11ᵀ/p` so the
//!   full-rank map applies, k-component variants keep the top `p - k`
//!   eigenpairs;
//! * the data term: a fixed scatter matrix `S` (Gaussian) or a weighted scatter
//!   recomputed at every inner step (Student-t);
//! * whether the spectral penalty `η tr(VᵀLwV)` is active.

mod config;
mod engine;
mod mm;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

pub use config::{AdaptiveRho, InitMode, SolverConfig};
pub use mm::{w_inner_update_gaussian, weighted_scatter};

use crate::error::{Error, Result};
use crate::ops::{self, SymmetricMatrix, WeightVector};
use crate::spectral::{self, RANK_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ConnectedGaussian,
    KGaussian,
    ConnectedT,
    Kt,
}

impl Method {
    pub fn is_k_component(self) -> bool {
        matches!(self, Method::KGaussian | Method::Kt)
    }

    pub fn is_student_t(self) -> bool {
        matches!(self, Method::ConnectedT | Method::Kt)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::ConnectedGaussian => "connected-gaussian",
            Method::KGaussian => "k-gaussian",
            Method::ConnectedT => "connected-t",
            Method::Kt => "kt",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// ADMM dual pair plus the auxiliary precision variable.
#[derive(Debug, Clone)]
pub struct DualState {
    pub theta: DMatrix<f64>,
    /// Multiplier of `Θ = Lw`.
    pub y_mat: DMatrix<f64>,
    /// Multiplier of `dw = d`.
    pub y: DVector<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iter: usize,
    /// `max |Θ - Lw|`
    pub r_norm: f64,
    /// `max |dw - d|`
    pub s_norm: f64,
    /// `max |rho L*(Θ_l - Θ_{l-1})|`
    pub v_norm: f64,
    pub lagrangian: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverTrace {
    pub records: Vec<TraceRecord>,
}

impl SolverTrace {
    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct GraphEstimate {
    pub weights: WeightVector,
    pub laplacian: SymmetricMatrix,
    pub node_names: Vec<String>,
    pub method: Method,
    pub converged: bool,
    pub iterations: usize,
    pub trace: SolverTrace,
    /// Configuration as actually run (defaults such as `eta` resolved).
    pub config: SolverConfig,
    pub state: DualState,
    /// Final subspace `V` for k-component methods.
    pub subspace: Option<DMatrix<f64>>,
}

impl GraphEstimate {
    pub fn p(&self) -> usize {
        self.weights.p()
    }

    pub fn adjacency(&self) -> SymmetricMatrix {
        ops::adjacency_op(&self.weights)
    }

    pub fn degrees(&self) -> DVector<f64> {
        ops::degree_op(&self.weights)
    }
}

/// Data entering the objective.
#[derive(Debug, Clone, Copy)]
pub enum DataTerm<'a> {
    /// Similarity / scatter matrix `S` for the Gaussian methods.
    Scatter(&'a SymmetricMatrix),
    /// Raw `n × p` observations for the Student-t methods.
    Samples(&'a DMatrix<f64>),
}

/// Initial weights from the pseudo-inverse of `S`: the strict lower triangle
/// of `S†` projected onto `w >= 0`. With `negate` the off-diagonals are read
/// with flipped sign, which matches the sign convention of a Laplacian
/// (negative off-diagonals) and is the default used by the solvers.
pub fn init_weights(s: &SymmetricMatrix, negate: bool) -> Result<WeightVector> {
    let p = s.dim();
    let sp = spectral::pinv(s, RANK_TOL)?;
    let sign = if negate { -1.0 } else { 1.0 };
    let values = DVector::from_iterator(
        ops::edge_count(p),
        ops::edge_pairs(p).into_iter().map(|(i, j)| (sign * sp[(i, j)]).max(0.0)),
    );
    WeightVector::new(p, values)
}

/// Scale-relative default for the spectral penalty: `100 · mean |S_ij|`.
pub fn default_eta(s: &SymmetricMatrix) -> f64 {
    100.0 * s.iter().map(|v| v.abs()).sum::<f64>() / (s.len() as f64)
}

/// Uncentered second moment `XᵀX / n`.
pub fn second_moment(x: &DMatrix<f64>) -> SymmetricMatrix {
    let n = x.nrows() as f64;
    SymmetricMatrix::symmetrize(x.tr_mul(x) / n)
}

fn default_names(p: usize, names: Option<Vec<String>>) -> Result<Vec<String>> {
    match names {
        Some(n) if n.len() != p => Err(Error::Dimension(format!("{} node names for p = {p}", n.len()))),
        Some(n) => Ok(n),
        None => Ok((0..p).map(|i| format!("v{i}")).collect()),
    }
}

/// Dispatches to the requested method.
pub fn learn(method: Method, data: DataTerm<'_>, config: &SolverConfig, names: Option<Vec<String>>) -> Result<GraphEstimate> {
    match (method.is_student_t(), data) {
        (false, DataTerm::Scatter(_)) | (true, DataTerm::Samples(_)) => {}
        (false, DataTerm::Samples(_)) => {
            return Err(Error::Parameter(format!("{method} expects a similarity matrix, not raw samples")))
        }
        (true, DataTerm::Scatter(_)) => {
            return Err(Error::Parameter(format!("{method} expects raw samples, not a similarity matrix")))
        }
    }
    let p = match data {
        DataTerm::Scatter(s) => s.dim(),
        DataTerm::Samples(x) => x.ncols(),
    };
    let names = default_names(p, names)?;
    engine::run(method, data, config, names)
}

/// Connected graph under the Gaussian model.
pub fn learn_connected_gaussian(s: &SymmetricMatrix, config: &SolverConfig, names: Option<Vec<String>>) -> Result<GraphEstimate> {
    learn(Method::ConnectedGaussian, DataTerm::Scatter(s), config, names)
}

/// Graph with `config.k` components under the Gaussian model.
pub fn learn_k_component_gaussian(s: &SymmetricMatrix, config: &SolverConfig, names: Option<Vec<String>>) -> Result<GraphEstimate> {
    learn(Method::KGaussian, DataTerm::Scatter(s), config, names)
}

/// Connected graph under the Student-t model; `x` is `n × p`.
pub fn learn_connected_t(x: &DMatrix<f64>, config: &SolverConfig, names: Option<Vec<String>>) -> Result<GraphEstimate> {
    learn(Method::ConnectedT, DataTerm::Samples(x), config, names)
}

/// Graph with `config.k` components under the Student-t model.
pub fn learn_kt(x: &DMatrix<f64>, config: &SolverConfig, names: Option<Vec<String>>) -> Result<GraphEstimate> {
    learn(Method::Kt, DataTerm::Samples(x), config, names)
}

/// Augmented Lagrangian of `method` at the given point.
///
/// `subspace` is `V` and is required for the k-component methods. `config.eta`
/// must be set for those methods and `config.nu` for the Student-t ones.
pub fn augmented_lagrangian(
    state: &DualState,
    w: &WeightVector,
    data: DataTerm<'_>,
    subspace: Option<&DMatrix<f64>>,
    config: &SolverConfig,
    method: Method,
) -> Result<f64> {
    let p = w.p();
    let k = if method.is_k_component() { config.k } else { 1 };
    let log_det = if method.is_k_component() {
        let eig = spectral::eigh(&state.theta)?;
        let top = eig.values[p - 1];
        let pos: Vec<f64> = eig.values.iter().copied().filter(|&v| v > RANK_TOL * top && v > 0.0).collect();
        if pos.len() < p - k {
            return Err(Error::Numerical(format!(
                "Θ has {} positive eigenvalues, expected at least {}",
                pos.len(),
                p - k
            )));
        }
        pos.iter().map(|v| v.ln()).sum::<f64>()
    } else {
        let shifted = state.theta.add_scalar(1.0 / p as f64);
        let eig = spectral::eigh(&shifted)?;
        if eig.values[0] <= 0.0 {
            return Err(Error::Numerical("Θ + J is not positive definite".into()));
        }
        eig.values.iter().map(|v| v.ln()).sum::<f64>()
    };
    let data = engine::Objective::new(method, data, config)?;
    let eta = if method.is_k_component() {
        config.eta.ok_or_else(|| Error::Parameter("eta is required for k-component methods".into()))?
    } else {
        0.0
    };
    let v = match (method.is_k_component(), subspace) {
        (true, Some(v)) => Some(v),
        (true, None) => return Err(Error::Parameter("subspace V is required for k-component methods".into())),
        (false, _) => None,
    };
    let d = config.degrees(p)?;
    Ok(engine::lagrangian_value(&data, w.values(), state, v, eta, config.rho, log_det, &d))
}
