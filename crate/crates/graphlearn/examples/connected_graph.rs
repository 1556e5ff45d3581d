//! Connected graph with unit degrees from Gaussian samples.

use graphlearn::preprocess::{self, ReturnsMatrix, SimilaritySpec};
use graphlearn::solvers::{self, SolverConfig};
use graphlearn::{metrics, synth};

fn main() -> graphlearn::Result<()> {
    let truth = synth::planted_k_component(10, 1, 0.5, (0.5, 2.0), 11)?;
    let x = synth::sample_lgmrf(&truth.laplacian(), 4000, 12)?;
    let s = preprocess::similarity(&ReturnsMatrix::from_matrix(x)?, SimilaritySpec::correlation())?;

    let est = solvers::learn_connected_gaussian(&s, &SolverConfig::default(), None)?;
    let last = est.trace.last().expect("at least one iteration");
    println!("converged = {} after {} iterations (r = {:.1e}, s = {:.1e})", est.converged, est.iterations, last.r_norm, last.s_norm);
    println!("degrees = {:.4?}", est.degrees().as_slice());
    let f = metrics::edge_fscore(&est.weights, &truth.weights, metrics::EDGE_THRESHOLD)?;
    println!("edge f-score against the planted graph: {:.3}", f.fscore);
    Ok(())
}
