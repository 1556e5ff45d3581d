//! Planted graphs and the two samplers, with a few sanity statistics.

use graphlearn::{spectral, synth, DMatrix};

fn kurtosis(x: &DMatrix<f64>, c: usize) -> f64 {
    let col = x.column(c);
    let m = col.mean();
    let m2 = col.iter().map(|v| (v - m).powi(2)).sum::<f64>() / col.len() as f64;
    let m4 = col.iter().map(|v| (v - m).powi(4)).sum::<f64>() / col.len() as f64;
    m4 / (m2 * m2) - 3.0
}

fn main() -> graphlearn::Result<()> {
    let g = synth::planted_k_component(12, 3, 0.5, (0.5, 2.0), 42)?;
    let l = g.laplacian();
    println!("blocks {:?}, nullity {}", synth::block_sizes(12, 3), spectral::nullity(&l, spectral::RANK_TOL)?);

    let unit = synth::balance_degrees(&synth::planted_k_component(8, 1, 1.0, (0.5, 2.0), 1)?.weights)?;
    println!("balanced degrees: {:.6?}", graphlearn::ops::degree_op(&unit).as_slice());

    let gauss = synth::sample_lgmrf(&l, 20_000, 1)?;
    let heavy = synth::sample_student_t(&l, 4.0, 20_000, 1)?;
    println!("largest |row sum| of Gaussian samples: {:.1e}", gauss.row_iter().map(|r| r.sum().abs()).fold(0.0, f64::max));
    println!("excess kurtosis of node 0: gaussian {:.2}, student-t {:.2}", kurtosis(&gauss, 0), kurtosis(&heavy, 0));
    Ok(())
}
