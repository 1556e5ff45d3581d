//! Recovering a planted 3-cluster structure with the k-component solver.

use graphlearn::preprocess::{self, ReturnsMatrix, SimilaritySpec};
use graphlearn::solvers::{self, SolverConfig};
use graphlearn::{metrics, synth};

fn main() -> graphlearn::Result<()> {
    let truth = synth::planted_k_component(30, 3, 0.5, (0.5, 2.0), 6)?;
    let x = synth::sample_lgmrf(&truth.laplacian(), 3000, 7006)?;
    let s = preprocess::similarity(&ReturnsMatrix::from_matrix(x)?, SimilaritySpec::correlation())?;

    let est = solvers::learn_k_component_gaussian(&s, &SolverConfig::default().with_k(3), None)?;
    let adj = est.adjacency().into_inner();
    let comps = metrics::components(&adj, metrics::EDGE_THRESHOLD);
    println!("converged = {}, eta = {:.2}", est.converged, est.config.eta.unwrap_or_default());
    println!("components: {}", metrics::component_count(&adj, metrics::EDGE_THRESHOLD));
    println!("partition recovered: {}", metrics::same_partition(&comps, truth.partition.labels()));
    println!("modularity: {:.4}", metrics::modularity(&adj, &truth.partition)?);
    Ok(())
}
