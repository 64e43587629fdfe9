//! Principal components found one at a time: the direction of largest
//! variance, then the largest among directions perpendicular to it, and so
//! on. Compared with the all-at-once Jacobi eigendecomposition.

use pcakit::eigen::{
    greedy_max_variance_directions, jacobi_eigen_symmetric, JacobiOptions, PowerOptions,
};
use pcakit::matrix::Matrix;

fn main() -> pcakit::Result<()> {
    let c = Matrix::from_rows(&[
        [4.0, 1.0, 0.5, 0.0],
        [1.0, 3.0, 0.2, 0.1],
        [0.5, 0.2, 2.0, 0.3],
        [0.0, 0.1, 0.3, 1.0],
    ])?;

    let greedy = greedy_max_variance_directions(&c, c.rows(), PowerOptions::default())?;
    let eig = jacobi_eigen_symmetric(&c, JacobiOptions::default())?;
    for (i, g) in greedy.iter().enumerate() {
        let e = eig.eigenvector(i);
        let delta = g
            .direction
            .iter()
            .zip(&e)
            .map(|(a, b)| (a - b).abs().min((a + b).abs()))
            .fold(0.0, f64::max);
        println!(
            "direction {}: variance {:.10} (Jacobi {:.10}), max entry difference {delta:.1e}",
            i + 1,
            g.variance,
            eig.eigenvalues()[i]
        );
    }

    // Equal variances leave the greedy choice undefined.
    match greedy_max_variance_directions(&Matrix::identity(3), 1, PowerOptions::default()) {
        Ok(_) => println!("identity: unexpectedly succeeded"),
        Err(e) => println!("\nidentity: {e}"),
    }
    Ok(())
}
