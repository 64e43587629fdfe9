//! Two recordings of increasingly redundant quantities. As the correlation
//! grows, variance concentrates in the first component and the second one
//! carries less and less information.

use pcakit::datagen::generate_correlated_pair;
use pcakit::pca::{center, covariance_matrix, explained_variance_ratio, fit_eigen, Normalization};

fn main() -> pcakit::Result<()> {
    println!("  rho   cov(r1,r2)  ratio PC1  ratio PC2  PC1");
    for rho in [0.0, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0, -0.8] {
        let data = generate_correlated_pair(rho, 5000, 17)?;
        let (centered, _) = center(&data);
        let cov = covariance_matrix(&centered, Normalization::Population)?;
        let model = fit_eigen(&data, Normalization::Population)?;
        let ratios = explained_variance_ratio(&model)?;
        println!(
            "{rho:>5.2}   {:>9.4}   {:>8.4}   {:>8.4}   ({:+.3}, {:+.3})",
            cov.get(0, 1),
            ratios[0],
            ratios[1],
            model.component(0)[0],
            model.component(0)[1]
        );
    }
    Ok(())
}
