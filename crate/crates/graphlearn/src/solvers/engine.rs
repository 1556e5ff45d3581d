//! Shared ADMM outer loop.

use nalgebra::{DMatrix, DVector};

use super::mm::{mm_steps, DataFit, Subproblem};
use super::{default_eta, init_weights, second_moment, DataTerm, DualState, GraphEstimate, InitMode, Method, SolverConfig, SolverTrace, TraceRecord};
use crate::error::{Error, Result};
use crate::ops::{self, SymmetricMatrix, WeightVector};
use crate::spectral::{fan_subspace_raw, prox_logdet_raw};

pub(crate) struct Objective {
    pub fit: DataFit,
}

impl Objective {
    pub fn new(method: Method, data: DataTerm<'_>, config: &SolverConfig) -> Result<Self> {
        let fit = match data {
            DataTerm::Scatter(s) => DataFit::gaussian(s),
            DataTerm::Samples(x) => {
                let nu = config.nu.ok_or_else(|| Error::Parameter(format!("nu is required for {method}")))?;
                DataFit::student_t(x, nu)
            }
        };
        Ok(Self { fit })
    }
}

/// `L_rho` at the given point with a precomputed `log det*(Θ)`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn lagrangian_value(
    obj: &Objective,
    w: &DVector<f64>,
    state: &DualState,
    v: Option<&DMatrix<f64>>,
    eta: f64,
    rho: f64,
    log_det: f64,
    d: &DVector<f64>,
) -> f64 {
    let p = state.theta.nrows();
    let lw = ops::laplacian_raw(p, w.as_slice());
    let mut val = obj.fit.value(w) - log_det;
    if let Some(v) = v {
        val += eta * (v.transpose() * &lw * v).trace();
    }
    let r = &state.theta - &lw;
    let s = ops::degree_raw(p, w.as_slice()) - d;
    val += state.y.dot(&s) + 0.5 * rho * s.norm_squared();
    val += state.y_mat.dot(&r) + 0.5 * rho * r.norm_squared();
    val
}

fn all_finite<'a>(mut it: impl Iterator<Item = &'a f64>) -> bool {
    it.all(|v| v.is_finite())
}

pub(crate) fn run(method: Method, data: DataTerm<'_>, config: &SolverConfig, names: Vec<String>) -> Result<GraphEstimate> {
    let p = names.len();
    config.validate(method, p)?;
    let d = config.degrees(p)?;
    let k_comp = method.is_k_component();
    let k = config.k;

    // The initializer and the default η both read a similarity matrix; for raw
    // samples that is the second moment.
    let owned;
    let s_init: &SymmetricMatrix = match data {
        DataTerm::Scatter(s) => {
            if s.dim() != p {
                return Err(Error::Dimension(format!("S is {}x{0}, expected p = {p}", s.dim())));
            }
            s
        }
        DataTerm::Samples(x) => {
            if x.nrows() < 2 {
                return Err(Error::Data(format!("need at least 2 observations, got {}", x.nrows())));
            }
            if !all_finite(x.iter()) {
                return Err(Error::Data("observations contain non-finite values".into()));
            }
            owned = second_moment(x);
            &owned
        }
    };
    if !all_finite(s_init.iter()) {
        return Err(Error::Data("similarity matrix contains non-finite values".into()));
    }
    let eta = if k_comp { config.eta.unwrap_or_else(|| default_eta(s_init)) } else { 0.0 };
    let mut resolved = config.clone();
    if k_comp {
        resolved.eta = Some(eta);
    }

    let obj = Objective::new(method, data, config)?;
    let mut w = init_weights(s_init, config.init == InitMode::PinvNeg)?.into_inner();
    let mut rho = config.rho;
    let j_shift = 1.0 / p as f64;

    let mut lw = ops::laplacian_raw(p, w.as_slice());
    let mut v = if k_comp { Some(fan_subspace_raw(&lw, k)?) } else { None };
    let mut state = DualState { theta: lw.clone(), y_mat: DMatrix::zeros(p, p), y: DVector::zeros(p) };
    let mut trace = SolverTrace::default();
    let mut converged = false;
    let mut prev_al: Option<f64> = None;

    for iter in 1..=config.max_iter {
        // Θ-update
        let theta_prev = std::mem::replace(&mut state.theta, DMatrix::zeros(0, 0));
        let (theta, log_det) = if k_comp {
            let m = &lw * rho - &state.y_mat;
            let out = prox_logdet_raw(&m, rho, k)?;
            (out.matrix, out.log_det)
        } else {
            let m = lw.add_scalar(j_shift) * rho - &state.y_mat;
            let out = prox_logdet_raw(&m, rho, 0)?;
            (out.matrix.add_scalar(-j_shift), out.log_det)
        };
        if !all_finite(theta.iter()) {
            return Err(Error::Divergence { iter, what: "theta" });
        }
        state.theta = theta;

        // w-update
        let mut lin_m = &state.y_mat + &state.theta * rho;
        if let Some(v) = &v {
            lin_m -= (v * v.transpose()) * eta;
        }
        let lin = ops::laplacian_adj_raw(&lin_m);
        let sub = Subproblem { p, rho, lin: &lin, y: &state.y, d: &d };
        mm_steps(&mut w, &sub, &obj.fit, config.inner_iter, config.tol / 10.0);
        if !all_finite(w.iter()) {
            return Err(Error::Divergence { iter, what: "w" });
        }
        lw = ops::laplacian_raw(p, w.as_slice());

        // V-update
        if k_comp {
            v = Some(fan_subspace_raw(&lw, k)?);
        }

        // dual updates
        let r = &state.theta - &lw;
        let s = ops::degree_raw(p, w.as_slice()) - &d;
        state.y_mat += &r * rho;
        state.y += &s * rho;
        if !all_finite(state.y_mat.iter()) {
            return Err(Error::Divergence { iter, what: "Y" });
        }
        if !all_finite(state.y.iter()) {
            return Err(Error::Divergence { iter, what: "y" });
        }

        let r_norm = r.amax();
        let s_norm = s.amax();
        let v_norm = rho * ops::laplacian_adj_raw(&(&state.theta - &theta_prev)).amax();
        let al = lagrangian_value(&obj, &w, &state, v.as_ref(), eta, rho, log_det, &d);
        trace.records.push(TraceRecord { iter, r_norm, s_norm, v_norm, lagrangian: al });

        if r_norm <= config.tol && s_norm <= config.tol {
            converged = true;
            break;
        }
        if let Some(a) = config.adaptive_rho {
            if prev_al.is_some_and(|prev| al > prev) {
                rho = (rho * a.factor).min(a.max);
            }
        }
        prev_al = Some(al);
    }

    let weights = WeightVector::from_raw(p, w);
    let laplacian = ops::laplacian_op(&weights);
    Ok(GraphEstimate {
        iterations: trace.len(),
        weights,
        laplacian,
        node_names: names,
        method,
        converged,
        trace,
        config: resolved,
        state,
        subspace: v,
    })
}
