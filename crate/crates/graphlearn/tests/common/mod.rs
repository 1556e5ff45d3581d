//! Oracles shared by the integration tests. Everything here is written
//! independently of the library code it checks (plain loops, dense assembly).
#![allow(dead_code)]

use graphlearn::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| r.sample::<f64, _>(StandardNormal))
}

pub fn random_symmetric(r: &mut ChaCha8Rng, p: usize) -> DMatrix<f64> {
    let a = normal_matrix(r, p, p);
    (&a + a.transpose()) * 0.5
}

pub fn random_weights(r: &mut ChaCha8Rng, p: usize) -> Vec<f64> {
    (0..p * (p - 1) / 2).map(|_| r.random::<f64>()).collect()
}

/// Edge list in the documented order, from the 1-based formula.
pub fn pairs(p: usize) -> Vec<(usize, usize)> {
    let mut out = vec![(0, 0); p * (p - 1) / 2];
    for j1 in 1..=p {
        for i1 in j1 + 1..=p {
            let s = i1 - j1 + (j1 - 1) * (2 * p - j1) / 2;
            out[s - 1] = (i1 - 1, j1 - 1);
        }
    }
    out
}

/// Laplacian from weights, one edge at a time: `L = Σ w_k (e_i - e_j)(e_i - e_j)ᵀ`.
pub fn laplacian(p: usize, w: &[f64]) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(p, p);
    for (k, &(i, j)) in pairs(p).iter().enumerate() {
        let mut e = DVector::zeros(p);
        e[i] = 1.0;
        e[j] = -1.0;
        l += &e * e.transpose() * w[k];
    }
    l
}

pub fn inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Pearson correlation with two-pass loops.
pub fn correlation(x: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, p) = x.shape();
    let mean: Vec<f64> = (0..p).map(|c| (0..n).map(|r| x[(r, c)]).sum::<f64>() / n as f64).collect();
    let mut cov = DMatrix::zeros(p, p);
    for a in 0..p {
        for b in 0..p {
            cov[(a, b)] = (0..n).map(|r| (x[(r, a)] - mean[a]) * (x[(r, b)] - mean[b])).sum::<f64>() / n as f64;
        }
    }
    DMatrix::from_fn(p, p, |a, b| cov[(a, b)] / (cov[(a, a)] * cov[(b, b)]).sqrt())
}

/// Divides columns by their standard deviation (population convention).
pub fn unit_variance(x: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, p) = x.shape();
    let mut out = x.clone();
    for c in 0..p {
        let m = (0..n).map(|r| x[(r, c)]).sum::<f64>() / n as f64;
        let sd = ((0..n).map(|r| (x[(r, c)] - m).powi(2)).sum::<f64>() / n as f64).sqrt();
        for r in 0..n {
            out[(r, c)] /= sd;
        }
    }
    out
}

pub fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn rel_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm()
}

/// Same-partition check by pairwise co-membership.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len() && (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

/// Eigenvalues below `tol · λmax`, by a fresh decomposition.
pub fn count_small_eigenvalues(m: &DMatrix<f64>, tol: f64) -> usize {
    let ev = m.clone().symmetric_eigenvalues();
    let top = ev.max();
    ev.iter().filter(|&&v| v < tol * top).count()
}

/// Penalty-method solve of
/// `min <w, L*S> - log det(Lw + J) + μ/2 ‖dw - d‖²  s.t. w >= 0`
/// by projected Newton with Armijo backtracking, continuing `μ` from 1 to
/// 1e10. Small `p` only: the Hessian is assembled densely.
pub fn penalty_oracle(s: &DMatrix<f64>, d: &DVector<f64>, w0: &[f64]) -> Vec<f64> {
    let p = s.nrows();
    let e = pairs(p);
    let m = e.len();
    let jm = DMatrix::from_element(p, p, 1.0 / p as f64);
    let ls: Vec<f64> = e.iter().map(|&(i, j)| s[(i, i)] + s[(j, j)] - 2.0 * s[(i, j)]).collect();
    let mut b = DMatrix::zeros(p, m);
    for (k, &(i, j)) in e.iter().enumerate() {
        b[(i, k)] = 1.0;
        b[(j, k)] = 1.0;
    }
    let f = |w: &DVector<f64>, mu: f64| -> f64 {
        let a = laplacian(p, w.as_slice()) + &jm;
        let ev = a.symmetric_eigenvalues();
        if ev.min() <= 0.0 {
            return f64::INFINITY;
        }
        let lin: f64 = ls.iter().zip(w.iter()).map(|(a, b)| a * b).sum();
        lin - ev.iter().map(|v| v.ln()).sum::<f64>() + 0.5 * mu * (&b * w - d).norm_squared()
    };
    let mut w = DVector::from_iterator(m, w0.iter().map(|v| v + 0.1));
    let mut mu = 1.0;
    while mu <= 1e10 {
        for _ in 0..200 {
            let om = (laplacian(p, w.as_slice()) + &jm).try_inverse().expect("Lw + J singular");
            let mut g = DVector::zeros(m);
            let mut h = DMatrix::zeros(m, m);
            let ev: Vec<DVector<f64>> = e
                .iter()
                .map(|&(i, j)| {
                    let mut v = DVector::zeros(p);
                    v[i] = 1.0;
                    v[j] = -1.0;
                    v
                })
                .collect();
            let resid = &b * &w - d;
            let pen = b.transpose() * &resid * mu;
            for a in 0..m {
                let oa = &om * &ev[a];
                g[a] = ls[a] - ev[a].dot(&oa) + pen[a];
                for c in 0..m {
                    h[(a, c)] = ev[c].dot(&oa).powi(2);
                }
            }
            h += b.transpose() * &b * mu;
            let free: Vec<usize> = (0..m).filter(|&k| w[k] > 1e-12 || g[k] < 0.0).collect();
            let hf = DMatrix::from_fn(free.len(), free.len(), |a, c| h[(free[a], free[c])]);
            let gf = DVector::from_iterator(free.len(), free.iter().map(|&k| g[k]));
            let step = hf.cholesky().expect("Hessian not positive definite").solve(&gf);
            let mut dir = DVector::zeros(m);
            for (a, &k) in free.iter().enumerate() {
                dir[k] = -step[a];
            }
            let f0 = f(&w, mu);
            let mut t = 1.0;
            let next = loop {
                let cand = (&w + &dir * t).map(|v| v.max(0.0));
                if f(&cand, mu) <= f0 + 1e-4 * g.dot(&(&cand - &w)) || t < 1e-12 {
                    break cand;
                }
                t *= 0.5;
            };
            let change = (&next - &w).amax();
            w = next;
            if change < 1e-14 {
                break;
            }
        }
        mu *= 10.0;
    }
    w.iter().copied().collect()
}

/// Degree-preserving randomization of an unweighted graph by double edge
/// swaps `(a,b),(c,d) -> (a,d),(c,b)`, rejecting self-loops and multi-edges.
pub fn degree_matched_random(adj: &DMatrix<f64>, swaps: usize, r: &mut ChaCha8Rng) -> DMatrix<f64> {
    let p = adj.nrows();
    let mut a = adj.clone();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for i in 0..p {
        for j in i + 1..p {
            if a[(i, j)] > 0.0 {
                edges.push((i, j));
            }
        }
    }
    let mut done = 0;
    let mut tries = 0;
    while done < swaps && tries < swaps * 100 {
        tries += 1;
        let x = r.random_range(0..edges.len());
        let y = r.random_range(0..edges.len());
        let (ea, eb) = (edges[x], edges[y]);
        let (a1, b1) = if r.random::<bool>() { ea } else { (ea.1, ea.0) };
        let (c1, d1) = eb;
        if a1 == d1 || c1 == b1 || a1 == c1 || b1 == d1 {
            continue;
        }
        if a[(a1, d1)] > 0.0 || a[(c1, b1)] > 0.0 {
            continue;
        }
        for &(u, v) in &[(a1, b1), (c1, d1)] {
            a[(u, v)] = 0.0;
            a[(v, u)] = 0.0;
        }
        for &(u, v) in &[(a1, d1), (c1, b1)] {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        edges[x] = (a1.min(d1), a1.max(d1));
        edges[y] = (c1.min(b1), c1.max(b1));
        done += 1;
    }
    a
}
