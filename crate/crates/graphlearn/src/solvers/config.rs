use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::Method;
use crate::error::{Error, Result};

/// How the initial weights are read off `S†`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitMode {
    /// `(S†)⁺` on the strict lower triangle.
    Pinv,
    /// `(-S†)⁺`, the Laplacian sign convention.
    #[default]
    PinvNeg,
}

/// Grow `rho` by `factor` (capped at `max`) whenever the augmented Lagrangian
/// increases between outer iterations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveRho {
    pub factor: f64,
    pub max: f64,
}

impl Default for AdaptiveRho {
    fn default() -> Self {
        Self { factor: 1.1, max: 1e4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub rho: f64,
    /// Spectral penalty weight; `None` means `100 · mean |S|`.
    pub eta: Option<f64>,
    /// Student-t degrees of freedom, required (> 2) for the t methods.
    pub nu: Option<f64>,
    /// Number of components; only read by the k-component methods.
    pub k: usize,
    /// Target degrees, all ones when `None`.
    pub degree_target: Option<Vec<f64>>,
    pub tol: f64,
    pub max_iter: usize,
    pub inner_iter: usize,
    pub adaptive_rho: Option<AdaptiveRho>,
    pub init: InitMode,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            rho: 1.0,
            eta: None,
            nu: None,
            k: 1,
            degree_target: None,
            tol: 1e-6,
            max_iter: 10_000,
            inner_iter: 5,
            adaptive_rho: None,
            init: InitMode::PinvNeg,
        }
    }
}

impl SolverConfig {
    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn with_nu(mut self, nu: f64) -> Self {
        self.nu = Some(nu);
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = Some(eta);
        self
    }

    pub fn with_rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    /// Degree targets as a vector, checking length and positivity.
    pub fn degrees(&self, p: usize) -> Result<DVector<f64>> {
        match &self.degree_target {
            None => Ok(DVector::from_element(p, 1.0)),
            Some(d) if d.len() != p => Err(Error::Dimension(format!("degree target has length {}, expected {p}", d.len()))),
            Some(d) => {
                if let Some(i) = d.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
                    return Err(Error::Parameter(format!("degree target {i} is {} (must be > 0)", d[i])));
                }
                Ok(DVector::from_column_slice(d))
            }
        }
    }

    pub fn validate(&self, method: Method, p: usize) -> Result<()> {
        if p < 2 {
            return Err(Error::Parameter(format!("need at least 2 nodes, got {p}")));
        }
        if !(self.rho.is_finite() && self.rho > 0.0) {
            return Err(Error::Parameter(format!("rho must be positive, got {}", self.rho)));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Parameter(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 || self.inner_iter == 0 {
            return Err(Error::Parameter("max_iter and inner_iter must be positive".into()));
        }
        if method.is_student_t() {
            match self.nu {
                None => return Err(Error::Parameter("nu is required for Student-t methods".into())),
                Some(nu) if !(nu.is_finite() && nu > 2.0) => {
                    return Err(Error::Parameter(format!("nu must exceed 2, got {nu}")))
                }
                _ => {}
            }
        }
        if method.is_k_component() {
            if self.k == 0 || self.k >= p {
                return Err(Error::Parameter(format!("k = {} must satisfy 1 <= k < p = {p}", self.k)));
            }
            if let Some(eta) = self.eta {
                if !(eta.is_finite() && eta > 0.0) {
                    return Err(Error::Parameter(format!("eta must be positive, got {eta}")));
                }
            }
        }
        if let Some(a) = self.adaptive_rho {
            if !(a.factor > 1.0 && a.max >= self.rho) {
                return Err(Error::Parameter("adaptive rho needs factor > 1 and max >= rho".into()));
            }
        }
        self.degrees(p)?;
        Ok(())
    }
}
