//! The same principal components two ways: eigenvectors of the covariance
//! matrix, and right singular vectors of the scaled, transposed data.

use pcakit::datagen::{generate_spring, SpringConfig};
use pcakit::pca::{
    center, compare_models, covariance_matrix, diagonalization_residual, fit_eigen, fit_svd,
    Normalization,
};

fn main() -> pcakit::Result<()> {
    let cfg = SpringConfig {
        duration: 30.0,
        ..SpringConfig::default()
    }
    .with_seed(3)
    .with_snr(5.0)?;
    let data = generate_spring(&cfg)?;

    for norm in [Normalization::Population, Normalization::Sample] {
        let by_eigen = fit_eigen(&data, norm)?;
        let by_svd = fit_svd(&data, norm)?;
        let agreement = compare_models(&by_eigen, &by_svd)?;

        let (centered, _) = center(&data);
        let cov = covariance_matrix(&centered, norm)?;
        println!("{norm:?} normalization");
        println!("  eigen variances: {:.6?}", by_eigen.variances());
        println!("  svd variances:   {:.6?}", by_svd.variances());
        println!(
            "  largest relative variance difference {:.1e}, component difference {:.1e}",
            agreement.max_variance_delta, agreement.max_component_delta
        );
        println!(
            "  off-diagonal of P·C·Pᵀ relative to its trace: eigen {:.1e}, svd {:.1e}",
            diagonalization_residual(&by_eigen, &cov)?,
            diagonalization_residual(&by_svd, &cov)?
        );
    }
    Ok(())
}
