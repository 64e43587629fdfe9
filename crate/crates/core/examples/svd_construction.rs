//! Building an SVD from the eigenvectors of XᵀX, then truncating it.
//! The error of each truncation equals the root-sum-square of the singular
//! values that were dropped.

use pcakit::eigen::{jacobi_eigen_symmetric, JacobiOptions};
use pcakit::matrix::{dot, norm, Matrix};
use pcakit::svd::{svd, truncate};

fn main() -> pcakit::Result<()> {
    let x = Matrix::from_rows(&[
        [2.0, 0.0, 1.0, -1.0],
        [0.5, 3.0, 0.0, 2.0],
        [1.0, 1.0, 1.0, 1.0],
        [-2.0, 0.5, 4.0, 0.0],
        [0.0, -1.0, 2.0, 3.0],
    ])?;
    println!("X ({}×{}):\n{x:?}\n", x.rows(), x.cols());

    // The images Xv̂ᵢ of the eigenvectors of XᵀX are orthogonal with length √λᵢ.
    let eig = jacobi_eigen_symmetric(&x.gram(), JacobiOptions::default())?;
    let images: Vec<Vec<f64>> = (0..x.cols())
        .map(|i| x.mul_vec(&eig.eigenvector(i)))
        .collect::<pcakit::Result<_>>()?;
    for (i, (image, lambda)) in images.iter().zip(eig.eigenvalues()).enumerate() {
        println!(
            "‖Xv̂{}‖ = {:.12}   √λ{} = {:.12}",
            i + 1,
            norm(image),
            i + 1,
            lambda.sqrt()
        );
    }
    println!("(Xv̂₁)·(Xv̂₂) = {:.1e}\n", dot(&images[0], &images[1]));

    let f = svd(&x)?;
    println!(
        "singular values {:.6?}, rank {}",
        f.singular_values(),
        f.rank()
    );
    println!(
        "‖X − UΣVᵀ‖ = {:.1e}, U orthogonal: {}, V orthogonal: {}\n",
        x.sub(&f.reconstruct())?.frobenius_norm(),
        f.u().is_orthogonal(1e-10)?,
        f.v().is_orthogonal(1e-10)?
    );

    let s = f.singular_values();
    for k in 0..=f.rank() {
        let err = x.sub(&truncate(&f, k)?.reconstruct())?.frobenius_norm();
        let dropped = s[k..].iter().fold(0.0, |acc, v| acc + v * v).sqrt();
        println!("rank {k}: error {err:.6}, dropped singular values {dropped:.6}");
    }
    Ok(())
}
