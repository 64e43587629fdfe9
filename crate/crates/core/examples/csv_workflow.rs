//! The file-based workflow behind the `pcakit` binary, driven from code:
//! write a CSV, analyze it into a report, and emit plot data.
//!
//! ```text
//! cargo run --example csv_workflow -- [output-dir]
//! ```

use std::path::PathBuf;

use pcakit::cli::{analyze_dataset, load_model, read_dataset, write_dataset, write_plot_files};
use pcakit::cli::{Orientation, RouteChoice};
use pcakit::datagen::{generate_spring, SpringConfig};
use pcakit::pca::Normalization;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("pcakit-demo"), PathBuf::from);
    std::fs::create_dir_all(&dir)?;

    let cfg = SpringConfig {
        duration: 10.0,
        ..SpringConfig::default()
    }
    .with_seed(2)
    .with_snr(50.0)?;
    let csv = dir.join("spring.csv");
    write_dataset(&csv, &generate_spring(&cfg)?)?;

    let data = read_dataset(&csv, Orientation::Samples)?;
    let report = analyze_dataset(&data, RouteChoice::Both, Normalization::Population)?;
    let report_path = dir.join("report.json");
    std::fs::write(&report_path, serde_json::to_string_pretty(&report)?)?;
    println!(
        "PC1 explains {:.2}% of the variance; routes agree to {:.1e}",
        100.0 * report.explained_variance_ratio[0],
        report
            .diagnostics
            .route_agreement
            .map_or(0.0, |a| a.max_component_delta)
    );

    let model = load_model(&report_path)?;
    for path in write_plot_files(&dir.join("spring"), &data, &model)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
