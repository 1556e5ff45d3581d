//! Graph metrics on a labelled graph and a comparison between two graphs.

use graphlearn::metrics::{self, NodeLabels};
use graphlearn::ops::{self, WeightVector};
use graphlearn::synth;

fn main() -> graphlearn::Result<()> {
    // Two disjoint edges, each inside its own sector.
    let w = WeightVector::new(4, vec![1.0, 0.0, 0.0, 0.0, 0.0, 1.0])?;
    let sectors = NodeLabels::from_names(&["tech", "tech", "energy", "energy"]);
    let adj = ops::adjacency_op(&w).into_inner();
    println!("modularity {:.4} (10/36 = {:.4})", metrics::modularity(&adj, &sectors)?, 10.0 / 36.0);
    println!("edge distribution {:?}", metrics::edge_distribution(&adj, &sectors, metrics::EDGE_THRESHOLD)?);
    println!("components {:?}", metrics::components(&adj, metrics::EDGE_THRESHOLD));

    let a = synth::planted_k_component(20, 2, 0.3, (0.5, 2.0), 1)?;
    let b = synth::planted_k_component(20, 2, 0.3, (0.5, 2.0), 2)?;
    let f = metrics::edge_fscore(&b.weights, &a.weights, metrics::EDGE_THRESHOLD)?;
    let rel = metrics::relative_error(&b.laplacian(), &a.laplacian())?;
    println!("two random planted graphs: f-score {:.3}, relative error {:.3}", f.fscore, rel);
    Ok(())
}
