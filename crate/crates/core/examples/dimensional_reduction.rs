//! How many components are worth keeping: the variance spectrum of noisy
//! spring data next to the error of each rank-k reconstruction.

use pcakit::datagen::{generate_spring, SpringConfig};
use pcakit::pca::{
    center, explained_variance_ratio, fit_eigen, project, reconstruct, reconstruction_error,
    Normalization,
};

fn main() -> pcakit::Result<()> {
    let cfg = SpringConfig::default().with_seed(9).with_snr(20.0)?;
    let data = generate_spring(&cfg)?;
    let model = fit_eigen(&data, Normalization::Population)?;
    let ratios = explained_variance_ratio(&model)?;
    let (centered, _) = center(&data);
    let total = centered.data().frobenius_norm();

    println!(" k   cumulative ratio   relative error");
    let mut cumulative = 0.0;
    for k in 0..=data.measurements() {
        if k > 0 {
            cumulative += ratios[k - 1];
        }
        let err = reconstruction_error(&model, &data, k)? / total;
        println!("{k:>2}   {cumulative:>16.6}   {err:>14.6}");
    }

    // One component is enough to describe the motion.
    let y = project(&model, &data)?;
    let x1 = reconstruct(&model, &y, 1)?;
    println!(
        "\nfirst sample: measured {:?}\n        rank-1 estimate {:?}",
        rounded(&data.data().column(0)),
        rounded(&x1.column(0))
    );
    Ok(())
}

fn rounded(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 1e3).round() / 1e3).collect()
}
