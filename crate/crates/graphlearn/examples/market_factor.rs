//! From prices to a similarity matrix: log-returns, correlation, NMI, and
//! removing the market factor before clustering.

use graphlearn::preprocess::{self, ReturnsMatrix, SimilaritySpec};
use graphlearn::solvers::{self, SolverConfig};
use graphlearn::{metrics, spectral, synth, DMatrix};
use rand::Rng;
use rand_distr::StandardNormal;

fn main() -> graphlearn::Result<()> {
    let truth = synth::planted_k_component(15, 3, 0.6, (0.5, 2.0), 3)?;
    let raw = synth::sample_lgmrf(&truth.laplacian(), 2000, 4)?;
    let idio = preprocess::scale_columns(&ReturnsMatrix::from_matrix(raw)?)?.into_values();
    let mut rng = synth::rng_from_seed(5);
    let market: Vec<f64> = (0..idio.nrows()).map(|_| rng.sample(StandardNormal)).collect();

    // Prices of 15 assets that share a common market return.
    let (n, p) = idio.shape();
    let mut prices = DMatrix::from_element(n + 1, p, 50.0);
    for t in 0..n {
        for a in 0..p {
            let r = 0.01 * (idio[(t, a)] + market[t]);
            prices[(t + 1, a)] = prices[(t, a)] * r.exp();
        }
    }
    let names = (0..p).map(|i| format!("asset{i:02}")).collect();
    let returns = preprocess::log_returns(&prices, names, None)?;

    let s = preprocess::similarity(&returns, SimilaritySpec::correlation())?;
    let d = spectral::spectral_diagnostics(&s)?;
    println!("top eigenvalue {:.2}, its eigenvector variance {:.2e}", d.eigenvalues[0], d.eigenvector_variances[0]);

    let nmi = preprocess::similarity(&returns, SimilaritySpec::nmi())?;
    println!("correlation vs NMI of assets 0 and 1: {:.3} / {:.3}", s[(0, 1)], nmi[(0, 1)]);

    let cfg = SolverConfig::default().with_k(3);
    for spec in [SimilaritySpec::correlation(), SimilaritySpec::correlation().without_market()] {
        let s = preprocess::similarity(&returns, spec)?;
        let est = solvers::learn_k_component_gaussian(&s, &cfg, Some(returns.names().to_vec()))?;
        let comps = metrics::components(&est.adjacency(), metrics::EDGE_THRESHOLD);
        println!(
            "market removed = {:<5} converged = {} clusters match = {}",
            spec.market_removed,
            est.converged,
            metrics::same_partition(&comps, truth.partition.labels())
        );
    }
    Ok(())
}
