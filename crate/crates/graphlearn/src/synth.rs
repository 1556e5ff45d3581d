//! Seeded ground-truth graphs and samplers.
//!
//! Every generator takes an explicit seed and owns its RNG, so identical seeds
//! give identical output on a given build.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::metrics::NodeLabels;
use crate::ops::{self, edge_index, SymmetricMatrix, WeightVector};
use crate::spectral::{psd_sqrt_pinv, RANK_TOL};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedGraph {
    pub weights: WeightVector,
    /// Block of each node, `1..=k`.
    pub partition: NodeLabels,
    pub seed: u64,
}

impl PlantedGraph {
    pub fn laplacian(&self) -> SymmetricMatrix {
        ops::laplacian_op(&self.weights)
    }
}

/// Block sizes for `p` nodes in `k` blocks, the remainder going to the first
/// blocks.
pub fn block_sizes(p: usize, k: usize) -> Vec<usize> {
    (0..k).map(|b| p / k + usize::from(b < p % k)).collect()
}

/// Graph with `k` disconnected blocks of consecutive nodes. Each block gets a
/// random spanning tree (so it is connected whatever `intra_prob` is) plus
/// every other intra-block pair independently with probability `intra_prob`.
/// Weights are uniform on `weight_range`.
pub fn planted_k_component(p: usize, k: usize, intra_prob: f64, weight_range: (f64, f64), seed: u64) -> Result<PlantedGraph> {
    if k == 0 || p < 2 || k > p / 2 {
        return Err(Error::Parameter(format!("need 1 <= k <= p/2, got p = {p}, k = {k}")));
    }
    if !(0.0..=1.0).contains(&intra_prob) {
        return Err(Error::Parameter(format!("intra_prob must be in [0, 1], got {intra_prob}")));
    }
    let (lo, hi) = weight_range;
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::Parameter(format!("weight range must satisfy 0 < lo <= hi, got ({lo}, {hi})")));
    }
    let mut rng = rng_from_seed(seed);
    let draw = |rng: &mut ChaCha8Rng| if hi > lo { rng.random_range(lo..hi) } else { lo };
    let mut w = DVector::zeros(ops::edge_count(p));
    let mut labels = Vec::with_capacity(p);
    let mut start = 0;
    for (b, size) in block_sizes(p, k).into_iter().enumerate() {
        let nodes: Vec<usize> = (start..start + size).collect();
        labels.extend(std::iter::repeat_n(b + 1, size));
        let mut perm = nodes.clone();
        perm.shuffle(&mut rng);
        for t in 1..size {
            let u = perm[t];
            let v = perm[rng.random_range(0..t)];
            let (i, j) = if u > v { (u, v) } else { (v, u) };
            w[edge_index(i, j, p)] = draw(&mut rng);
        }
        for &j in &nodes {
            for &i in nodes.iter().filter(|&&i| i > j) {
                let e = edge_index(i, j, p);
                if w[e] == 0.0 && rng.random::<f64>() < intra_prob {
                    w[e] = draw(&mut rng);
                }
            }
        }
        start += size;
    }
    Ok(PlantedGraph { weights: WeightVector::from_raw(p, w), partition: NodeLabels::new(labels)?, seed })
}

/// Rescales `w_ij ← x_i x_j w_ij` so every node has degree 1 (symmetric
/// Sinkhorn). Fails when no such scaling exists, e.g. for a star, whose
/// center degree is forced to equal the leaf count.
pub fn balance_degrees(w: &WeightVector) -> Result<WeightVector> {
    let p = w.p();
    let a = ops::adjacency_op(w).into_inner();
    if a.row_iter().any(|r| r.sum() <= 0.0) {
        return Err(Error::Parameter("cannot balance a graph with isolated nodes".into()));
    }
    let mut x = DVector::from_element(p, 1.0);
    for _ in 0..100_000 {
        let ax = &a * &x;
        let deg = x.component_mul(&ax);
        if deg.iter().all(|d| (d - 1.0).abs() < 1e-13) {
            break;
        }
        x = x.zip_map(&ax, |xi, ai| (xi / ai).sqrt());
        if x.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            break;
        }
    }
    let values = DVector::from_iterator(ops::edge_count(p), ops::edge_pairs(p).into_iter().zip(w.as_slice()).map(|((i, j), v)| x[i] * x[j] * v));
    let out = WeightVector::from_raw(p, values);
    let dev = (ops::degree_op(&out).add_scalar(-1.0)).amax();
    if dev.is_nan() || dev > 1e-8 {
        return Err(Error::Numerical(format!("degree balancing failed (max deviation {dev:e})")));
    }
    Ok(out)
}

fn gaussian_rows(l: &SymmetricMatrix, n: usize, rng: &mut ChaCha8Rng) -> Result<DMatrix<f64>> {
    let b = psd_sqrt_pinv(l, RANK_TOL)?;
    let z = DMatrix::from_fn(n, b.ncols(), |_, _| -> f64 { StandardNormal.sample(rng) });
    Ok(z * b.transpose())
}

/// `n` draws of `x = B z` with `B Bᵀ = L†`, one per row. Each row is exactly
/// orthogonal to the null space of `L` (in particular to `1`).
pub fn sample_lgmrf(l: &SymmetricMatrix, n: usize, seed: u64) -> Result<DMatrix<f64>> {
    let mut rng = rng_from_seed(seed);
    gaussian_rows(l, n, &mut rng)
}

/// Multivariate Student-t draws with scatter `L†`: a Gaussian row divided by
/// `sqrt(u/ν)`, `u ~ χ²(ν)`.
pub fn sample_student_t(l: &SymmetricMatrix, nu: f64, n: usize, seed: u64) -> Result<DMatrix<f64>> {
    if !(nu.is_finite() && nu > 2.0) {
        return Err(Error::Parameter(format!("nu must exceed 2, got {nu}")));
    }
    let mut rng = rng_from_seed(seed);
    let mut x = gaussian_rows(l, n, &mut rng)?;
    let chi = ChiSquared::new(nu).map_err(|e| Error::Parameter(e.to_string()))?;
    for mut row in x.row_iter_mut() {
        let u: f64 = chi.sample(&mut rng);
        row /= (u / nu).sqrt();
    }
    Ok(x)
}
