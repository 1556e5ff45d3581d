//! Edge indexing and the Laplacian / adjacency / degree operators.
//!
//! Run with `cargo run --example operators`.

use graphlearn::ops::{self, EdgeIndex, SymmetricMatrix, WeightVector};
use graphlearn::DVector;

fn main() -> graphlearn::Result<()> {
    let p = 4;
    for k in 0..ops::edge_count(p) {
        let e = EdgeIndex::from_linear(k, p)?;
        println!("w[{k}] joins nodes {} and {}", e.j, e.i);
    }

    let w = WeightVector::new(p, vec![1.0, 0.0, 2.0, 0.5, 0.0, 3.0])?;
    println!("L(w) = {}", *ops::laplacian_op(&w));
    println!("A(w) = {}", *ops::adjacency_op(&w));
    println!("degrees = {:.3?}", ops::degree_op(&w).as_slice());

    // adjoints: <Lw, M> = <w, L*M>
    let m = SymmetricMatrix::new(ops::adjacency_op(&w).as_matrix().map(|v| v * v + 1.0))?;
    let lhs = ops::laplacian_op(&w).dot(m.as_matrix());
    let rhs = w.values().dot(&ops::laplacian_adj(&m));
    println!("<Lw, M> = {lhs:.6}, <w, L*M> = {rhs:.6}");

    let y = DVector::from_vec(vec![1.0, -1.0, 0.5, 2.0]);
    println!("d*(y) = {:.3?}", ops::degree_adj(&y)?.as_slice());
    println!("MM step denominator for p = {p}, rho = 1: {}", ops::mm_step_denominator(p, 1.0));
    Ok(())
}
