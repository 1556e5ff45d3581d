//! Turning prices into similarity matrices.
//!
//! Correlation (or covariance of unit-variance columns) is the preferred
//! input: with raw covariances the estimated degrees end up tied to each
//! asset's volatility. For equities the leading eigenvector of the
//! correlation matrix is close to constant (the market factor) and can be
//! removed before learning.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ops::SymmetricMatrix;
use crate::spectral;

/// Upper clip on squared correlations inside the mutual-information map.
pub const NMI_CLIP: f64 = 1.0 - 1e-12;

/// `n × p` returns with asset names and optional timestamps.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnsMatrix {
    values: DMatrix<f64>,
    names: Vec<String>,
    timestamps: Option<Vec<String>>,
}

impl ReturnsMatrix {
    pub fn new(values: DMatrix<f64>, names: Vec<String>, timestamps: Option<Vec<String>>) -> Result<Self> {
        let (n, p) = values.shape();
        if n < 2 || p < 2 {
            return Err(Error::Data(format!("returns need n >= 2 and p >= 2, got {n}x{p}")));
        }
        if names.len() != p {
            return Err(Error::Dimension(format!("{} names for {p} columns", names.len())));
        }
        if let Some(ts) = &timestamps {
            if ts.len() != n {
                return Err(Error::Dimension(format!("{} timestamps for {n} rows", ts.len())));
            }
        }
        if let Some(idx) = values.iter().position(|v| !v.is_finite()) {
            let (r, c) = (idx % n, idx / n);
            return Err(Error::Data(format!("non-finite return at row {r}, column {}", names[c])));
        }
        Ok(Self { values, names, timestamps })
    }

    /// Builds with generated names `x0, x1, ..`.
    pub fn from_matrix(values: DMatrix<f64>) -> Result<Self> {
        let names = (0..values.ncols()).map(|i| format!("x{i}")).collect();
        Self::new(values, names, None)
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn timestamps(&self) -> Option<&[String]> {
        self.timestamps.as_deref()
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn p(&self) -> usize {
        self.values.ncols()
    }

    pub fn into_values(self) -> DMatrix<f64> {
        self.values
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimilarityKind {
    Covariance,
    #[default]
    Correlation,
    /// Normalized mutual information of the Gaussian copula.
    Nmi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SimilaritySpec {
    pub kind: SimilarityKind,
    /// Zero the leading eigenvalue after computing the similarity.
    pub market_removed: bool,
    /// Scale columns to unit variance first. Implied by correlation and NMI.
    pub scaled: bool,
}

impl SimilaritySpec {
    pub fn correlation() -> Self {
        Self { kind: SimilarityKind::Correlation, market_removed: false, scaled: true }
    }

    pub fn covariance() -> Self {
        Self { kind: SimilarityKind::Covariance, market_removed: false, scaled: false }
    }

    pub fn nmi() -> Self {
        Self { kind: SimilarityKind::Nmi, market_removed: false, scaled: true }
    }

    pub fn without_market(mut self) -> Self {
        self.market_removed = true;
        self
    }

    /// True when the data are put on unit-variance scale before use.
    pub fn is_scaled(&self) -> bool {
        self.scaled || self.kind != SimilarityKind::Covariance
    }
}

/// Log-differences of consecutive rows: `X_ij = log P_ij - log P_(i-1)j`.
pub fn log_returns(prices: &DMatrix<f64>, names: Vec<String>, timestamps: Option<Vec<String>>) -> Result<ReturnsMatrix> {
    let (n, p) = prices.shape();
    for c in 0..p {
        for r in 0..n {
            let v = prices[(r, c)];
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Data(format!("price at row {r}, column {c} is {v} (must be positive)")));
            }
        }
    }
    if n < 3 {
        return Err(Error::Data(format!("need at least 3 price rows for 2 returns, got {n}")));
    }
    let logs = prices.map(f64::ln);
    let diff = logs.rows(1, n - 1) - logs.rows(0, n - 1);
    let ts = timestamps.map(|t| t.into_iter().skip(1).collect());
    ReturnsMatrix::new(diff, names, ts)
}

fn column_stats(x: &DMatrix<f64>) -> (Vec<f64>, Vec<f64>) {
    let n = x.nrows() as f64;
    let means: Vec<f64> = x.column_iter().map(|c| c.sum() / n).collect();
    let sds = x
        .column_iter()
        .zip(&means)
        .map(|(c, m)| (c.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n).sqrt())
        .collect();
    (means, sds)
}

fn check_variance(sds: &[f64], names: &[String]) -> Result<()> {
    match sds.iter().position(|s| s.is_nan() || *s <= 0.0) {
        Some(c) => Err(Error::Data(format!("column {} has zero variance", names[c]))),
        None => Ok(()),
    }
}

/// Divides each column by its standard deviation (denominator `n`), so the
/// covariance of the result equals the correlation of the input.
pub fn scale_columns(x: &ReturnsMatrix) -> Result<ReturnsMatrix> {
    let (_, sds) = column_stats(&x.values);
    check_variance(&sds, &x.names)?;
    let mut values = x.values.clone();
    for (mut col, s) in values.column_iter_mut().zip(&sds) {
        col /= *s;
    }
    Ok(ReturnsMatrix { values, names: x.names.clone(), timestamps: x.timestamps.clone() })
}

fn covariance(x: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows() as f64;
    let (means, _) = column_stats(x);
    let mut c = x.clone();
    for (mut col, m) in c.column_iter_mut().zip(&means) {
        col.add_scalar_mut(-m);
    }
    c.tr_mul(&c) / n
}

/// Similarity matrix per `spec`. Covariance uses denominator `n`.
pub fn similarity(x: &ReturnsMatrix, spec: SimilaritySpec) -> Result<SymmetricMatrix> {
    let mut s = if spec.is_scaled() {
        let (_, sds) = column_stats(&x.values);
        check_variance(&sds, &x.names)?;
        let mut c = covariance(&x.values);
        let p = c.nrows();
        for i in 0..p {
            for j in 0..p {
                c[(i, j)] /= sds[i] * sds[j];
            }
        }
        for i in 0..p {
            c[(i, i)] = 1.0;
        }
        c.apply(|v| *v = v.clamp(-1.0, 1.0));
        c
    } else {
        covariance(&x.values)
    };
    if spec.kind == SimilarityKind::Nmi {
        s = nmi_from_correlation(&s);
    }
    let s = SymmetricMatrix::symmetrize(s);
    if spec.market_removed {
        remove_market(&s)
    } else {
        Ok(s)
    }
}

/// `-½ log(1 - r²)` entrywise with unit diagonal; `r²` is clipped at
/// [`NMI_CLIP`] so perfectly correlated pairs stay finite.
pub fn nmi_from_correlation(c: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = c.map(|r| -0.5 * (1.0 - (r * r).min(NMI_CLIP)).ln());
    out.fill_diagonal(1.0);
    out
}

/// Sets the largest eigenvalue to zero and reconstructs.
pub fn remove_market(s: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    let eig = spectral::eigh(s)?;
    let p = s.dim();
    let rest = eig.reconstruct_with(0..p - 1, |g| g);
    Ok(SymmetricMatrix::symmetrize(rest))
}

/// Sample-space counterpart of [`remove_market`] for methods that consume
/// raw observations: projects each row off the leading eigenvector `u` of
/// `XᵀX/n`, so the second moment of the result is that matrix with its top
/// eigenvalue zeroed.
pub fn remove_market_samples(x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let p = x.ncols();
    let m = x.tr_mul(x) / x.nrows() as f64;
    let eig = spectral::eigh(&m)?;
    let u = eig.vectors.column(p - 1).into_owned();
    let proj = x * &u;
    Ok(x - proj * u.transpose())
}

/// Drops rows containing any non-finite value; returns the kept row indices.
pub fn drop_incomplete_rows(x: &DMatrix<f64>) -> (DMatrix<f64>, Vec<usize>) {
    let keep: Vec<usize> = (0..x.nrows()).filter(|&r| x.row(r).iter().all(|v| v.is_finite())).collect();
    (x.select_rows(keep.iter()), keep)
}
