//! Two data sets where the principal components are not the interesting
//! directions: points on a circle (no single direction dominates) and two
//! clusters along axes 45° apart (the components bisect them).

use pcakit::datagen::{generate_failure, FailureConfig};
use pcakit::matrix::dot;
use pcakit::pca::{center, fit_eigen, reconstruction_error, Normalization};

fn main() -> pcakit::Result<()> {
    let wheel = generate_failure(&FailureConfig::ferris_wheel(10000, 1))?;
    let model = fit_eigen(&wheel, Normalization::Population)?;
    let v = model.variances();
    let (centered, _) = center(&wheel);
    let rel = reconstruction_error(&model, &wheel, 1)? / centered.data().frobenius_norm();
    println!("ferris wheel");
    println!("  variances {:.4?}, λ1/λ2 = {:.3}", v, v[0] / v[1]);
    println!(
        "  keeping one component loses {:.0}% of the signal norm",
        100.0 * rel
    );

    let clusters = generate_failure(&FailureConfig::non_orthogonal(10000, 1))?;
    let model = fit_eigen(&clusters, Normalization::Population)?;
    let s = 0.5f64.sqrt();
    let pc1 = model.component(0);
    println!("\ntwo clusters along 0° and 45°");
    println!("  PC1 = ({:+.4}, {:+.4})", pc1[0], pc1[1]);
    for (name, axis) in [("0°", [1.0, 0.0]), ("45°", [s, s])] {
        let angle = dot(pc1, &axis).abs().min(1.0).acos().to_degrees();
        println!("  angle to the {name} axis: {angle:.1}°");
    }
    Ok(())
}
