//! Student-t data: the heavy-tailed estimator against the Gaussian one.

use graphlearn::solvers::{self, SolverConfig};
use graphlearn::{metrics, synth};

fn main() -> graphlearn::Result<()> {
    let truth = synth::planted_k_component(20, 1, 0.2, (0.5, 2.0), 500)?;
    let x = synth::sample_student_t(&truth.laplacian(), 4.0, 500, 600)?;
    let s = solvers::second_moment(&x);

    let gauss = solvers::learn_connected_gaussian(&s, &SolverConfig::default(), None)?;
    let heavy = solvers::learn_connected_t(&x, &SolverConfig::default().with_nu(4.0), None)?;
    for (name, est) in [("gaussian", &gauss), ("student-t", &heavy)] {
        let f = metrics::edge_fscore(&est.weights, &truth.weights, metrics::EDGE_THRESHOLD)?;
        let edges = est.weights.as_slice().iter().filter(|w| **w > metrics::EDGE_THRESHOLD).count();
        println!("{name:>9}: f-score {:.3}, precision {:.3}, {edges} edges, converged {}", f.fscore, f.precision, est.converged);
    }
    println!("planted edges: {}", truth.weights.as_slice().iter().filter(|w| **w > 0.0).count());
    Ok(())
}
