//! Clusters from heavy-tailed samples, plus the reweighted scatter the
//! solver works with internally.

use graphlearn::solvers::{self, SolverConfig};
use graphlearn::preprocess::{self, ReturnsMatrix};
use graphlearn::{metrics, synth};

fn main() -> graphlearn::Result<()> {
    let nu = 4.0;
    let truth = synth::planted_k_component(30, 3, 0.5, (0.5, 2.0), 21)?;
    let raw = synth::sample_student_t(&truth.laplacian(), nu, 3000, 22)?;
    // Unit-variance columns put every node on the same footing, as with
    // correlation input for the Gaussian solvers.
    let x = preprocess::scale_columns(&ReturnsMatrix::from_matrix(raw)?)?.into_values();

    let est = solvers::learn_kt(&x, &SolverConfig::default().with_k(3).with_nu(nu), None)?;
    let adj = est.adjacency().into_inner();
    let comps = metrics::components(&adj, metrics::EDGE_THRESHOLD);
    println!("converged = {} after {} iterations", est.converged, est.iterations);
    println!("partition recovered: {}", metrics::same_partition(&comps, truth.partition.labels()));

    // Observations with large Mahalanobis-type norm are down-weighted.
    let st = solvers::weighted_scatter(&x, &est.weights, nu)?;
    let plain = solvers::second_moment(&x);
    println!("trace of weighted scatter {:.3} vs plain second moment {:.3}", st.trace(), plain.trace());
    Ok(())
}
