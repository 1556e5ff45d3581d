//! Log-determinant proximal maps, the rank-restricted variant, and the
//! spectral diagnostics used to spot a market factor.

use graphlearn::ops::{self, SymmetricMatrix, WeightVector};
use graphlearn::spectral::{self, RANK_TOL};
use graphlearn::DMatrix;

fn main() -> graphlearn::Result<()> {
    for gamma in [-2.0, 0.0, 3.0] {
        println!("prox eigenvalue gamma = {gamma:>4}: {:.5}", spectral::prox_eigenvalue(gamma, 1.0));
    }

    let m = SymmetricMatrix::new(DMatrix::from_row_slice(3, 3, &[1.0, 0.5, 0.0, 0.5, -1.0, 0.2, 0.0, 0.2, 0.3]))?;
    let full = spectral::prox_logdet(&m, 1.0)?;
    let low = spectral::prox_logdet_rank(&m, 1.0, 1)?;
    println!("full-rank prox eigenvalues: {:.4?}", full.as_matrix().clone().symmetric_eigenvalues().as_slice());
    println!("rank-2 prox eigenvalues:    {:.4?}", low.as_matrix().clone().symmetric_eigenvalues().as_slice());

    // Two disjoint edges: the two smallest eigenvectors span the null space.
    let l = ops::laplacian_op(&WeightVector::new(4, vec![1.0, 0.0, 0.0, 0.0, 0.0, 1.0])?);
    let v = spectral::fan_subspace(&l, 2)?;
    println!("tr(V'LV) = {:.2e}, nullity = {}", (v.transpose() * l.as_matrix() * &v).trace(), spectral::nullity(&l, RANK_TOL)?);

    // A correlation matrix with one common factor.
    let c = SymmetricMatrix::new(DMatrix::from_fn(5, 5, |i, j| if i == j { 1.0 } else { 0.6 }))?;
    let d = spectral::spectral_diagnostics(&c)?;
    println!("condition number {:.2}", d.condition_number);
    for (val, var) in d.eigenvalues.iter().zip(&d.eigenvector_variances) {
        println!("  eigenvalue {val:.3}  eigenvector variance {var:.4}");
    }
    Ok(())
}
