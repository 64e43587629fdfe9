//! The ball-on-a-spring experiment: three cameras record a one-dimensional
//! oscillation as six noisy coordinates, and PCA recovers the single
//! direction of motion.
//!
//! ```text
//! cargo run --example spring_recovery -- [snr] [seed]
//! ```

use pcakit::datagen::{generate_spring, SpringConfig};
use pcakit::matrix::dot;
use pcakit::pca::{explained_variance_ratio, fit_eigen, Normalization};

fn main() -> pcakit::Result<()> {
    let mut args = std::env::args().skip(1);
    let snr: f64 = args
        .next()
        .map_or(100.0, |s| s.parse().expect("snr is a number"));
    let seed: u64 = args
        .next()
        .map_or(0, |s| s.parse().expect("seed is an integer"));

    let cfg = SpringConfig::default().with_seed(seed).with_snr(snr)?;
    let data = generate_spring(&cfg)?;
    println!(
        "{} samples of {} measurements ({}), noise sigma {:.4}",
        data.samples(),
        data.measurements(),
        data.names().join(", "),
        cfg.noise_sigma
    );

    let model = fit_eigen(&data, Normalization::Population)?;
    let ratios = explained_variance_ratio(&model)?;
    println!("\ncomponent  variance      ratio");
    for (i, (v, r)) in model.variances().iter().zip(&ratios).enumerate() {
        println!("PC{:<8} {v:<13.6e} {r:.4}", i + 1);
    }

    let truth = cfg.signal_direction();
    let len = dot(&truth, &truth).sqrt();
    let cosine = dot(model.component(0), &truth).abs() / len;
    println!("\nPC1            {:?}", rounded(model.component(0)));
    println!("true direction {:?}", rounded(&truth.map(|x| x / len)));
    println!(
        "angle between them: {:.3}°",
        cosine.min(1.0).acos().to_degrees()
    );
    Ok(())
}

fn rounded(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 1e4).round() / 1e4).collect()
}
