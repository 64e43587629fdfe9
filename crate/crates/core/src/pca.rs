//! Principal component analysis by two routes.
//!
//! Data sets follow the measurement-major layout: an `m×n` matrix whose rows
//! are measurement types and whose columns are samples. A fitted
//! [`PcaModel`] stores the principal components as the *rows* of `P`, so
//! that projecting is always `Y = P·(X − mean)`.
//!
//! * [`fit_eigen`] eigendecomposes the covariance matrix `C_X`.
//! * [`fit_svd`] takes the SVD of `Y = Xᵀ/√n`, whose right singular vectors
//!   are the eigenvectors of `YᵀY = C_X`.
//!
//! Both routes share the sign convention of [`crate::matrix::fix_sign`] and
//! return variances in descending order.

use serde::{Deserialize, Serialize};

use crate::eigen::{jacobi_eigen_symmetric, JacobiOptions};
use crate::error::{Error, Result};
use crate::matrix::{complete_orthonormal_basis, dot, Matrix};
use crate::svd::thin_svd;

/// Variances at or below this fraction of the largest one are reported as 0
/// by [`fit_eigen`], and their directions are replaced by a canonical
/// orthonormal completion.
pub const VARIANCE_REL_TOL: f64 = 1e-10;

/// Version written into (and required from) serialized models.
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Row means up to this size (relative to the row's largest magnitude) count
/// as centered.
const CENTERED_TOL: f64 = 1e-9;

/// Components whose neighbouring variances are closer than this (relative to
/// the largest variance) are not individually identifiable.
pub const DEGENERATE_GAP_REL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Divide by `n`.
    #[default]
    Population,
    /// Divide by `n − 1`.
    Sample,
}

impl Normalization {
    pub fn divisor(self, n: usize) -> f64 {
        match self {
            Normalization::Population => n as f64,
            Normalization::Sample => (n - 1) as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Eigen,
    Svd,
}

/// `m` measurement types by `n` samples, with one label per measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    data: Matrix,
    names: Vec<String>,
}

impl Dataset {
    pub fn new(data: Matrix, names: Vec<String>) -> Result<Self> {
        if data.cols() < 2 {
            return Err(Error::InvalidDataset(format!(
                "at least 2 samples are required, got {}",
                data.cols()
            )));
        }
        if names.len() != data.rows() {
            return Err(Error::InvalidDataset(format!(
                "{} names for {} measurement types",
                names.len(),
                data.rows()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::InvalidDataset(format!(
                    "duplicate measurement name {name:?}"
                )));
            }
        }
        Ok(Self { data, names })
    }

    /// Names the measurements `x1, x2, …`.
    pub fn unnamed(data: Matrix) -> Result<Self> {
        let names = (1..=data.rows()).map(|i| format!("x{i}")).collect();
        Self::new(data, names)
    }

    /// Builds a data set from one row per *sample* (the usual tabular layout).
    pub fn from_samples<R: AsRef<[f64]>>(samples: &[R], names: Vec<String>) -> Result<Self> {
        Self::new(Matrix::from_rows(samples)?.transpose(), names)
    }

    pub fn data(&self) -> &Matrix {
        &self.data
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// `m`, the number of measurement types.
    pub fn measurements(&self) -> usize {
        self.data.rows()
    }

    /// `n`, the number of samples.
    pub fn samples(&self) -> usize {
        self.data.cols()
    }

    fn with_data(&self, data: Matrix) -> Self {
        Self {
            data,
            names: self.names.clone(),
        }
    }
}

/// Covariance of two zero-mean series: `a·b / n` (or `/(n − 1)`).
pub fn covariance(a: &[f64], b: &[f64], normalization: Normalization) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            op: "covariance",
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::TooFewSamples(a.len()));
    }
    Ok(dot(a, b) / normalization.divisor(a.len()))
}

/// Subtracts each measurement's mean. Returns the centered data set and the
/// removed means.
pub fn center(d: &Dataset) -> (Dataset, Vec<f64>) {
    let (m, n) = d.data.shape();
    let mut data = d.data.as_slice().to_vec();
    let mut means = vec![0.0; m];
    for (i, mean) in means.iter_mut().enumerate() {
        let row = &mut data[i * n..(i + 1) * n];
        // Second pass removes the rounding left by the first.
        for _ in 0..2 {
            let mu = row.iter().sum::<f64>() / n as f64;
            row.iter_mut().for_each(|x| *x -= mu);
            *mean += mu;
        }
    }
    (d.with_data(Matrix::from_raw(m, n, data)), means)
}

fn check_centered(d: &Dataset) -> Result<()> {
    let n = d.samples();
    for row in 0..d.measurements() {
        let values = d.data.row(row);
        let mean = values.iter().sum::<f64>() / n as f64;
        let scale = values.iter().fold(1.0_f64, |acc, x| acc.max(x.abs()));
        if mean.abs() > CENTERED_TOL * scale {
            return Err(Error::NotCentered { row, mean });
        }
    }
    Ok(())
}

/// `C_X = X·Xᵀ / n` for a centered data set (divisor `n − 1` under
/// [`Normalization::Sample`]). Exactly symmetric.
pub fn covariance_matrix(d: &Dataset, normalization: Normalization) -> Result<Matrix> {
    check_centered(d)?;
    Ok(d.data
        .outer_gram()
        .scale(1.0 / normalization.divisor(d.samples())))
}

/// A fitted change of basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    mean: Vec<f64>,
    components: Matrix,
    variances: Vec<f64>,
    route: Route,
    normalization: Normalization,
    names: Vec<String>,
}

impl PcaModel {
    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// `P`, one principal component per row.
    pub fn components(&self) -> &Matrix {
        &self.components
    }

    pub fn component(&self, i: usize) -> &[f64] {
        self.components.row(i)
    }

    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    pub fn route(&self) -> Route {
        self.route
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn measurements(&self) -> usize {
        self.mean.len()
    }

    pub fn total_variance(&self) -> f64 {
        self.variances.iter().sum()
    }

    pub fn to_document(&self) -> ModelDocument {
        ModelDocument {
            version: MODEL_FORMAT_VERSION,
            route: self.route,
            normalization: self.normalization,
            names: self.names.clone(),
            mean: self.mean.clone(),
            variances: self.variances.clone(),
            components: self.components.to_rows(),
        }
    }

    pub fn from_document(doc: ModelDocument) -> Result<Self> {
        if doc.version != MODEL_FORMAT_VERSION {
            return Err(Error::InvalidConfig(format!(
                "unsupported model version {} (expected {MODEL_FORMAT_VERSION})",
                doc.version
            )));
        }
        let m = doc.mean.len();
        if m == 0 || doc.names.len() != m || doc.variances.len() != m || doc.components.len() != m {
            return Err(Error::InvalidConfig(format!(
                "model fields disagree on the number of measurements \
                 (names {}, mean {m}, variances {}, components {})",
                doc.names.len(),
                doc.variances.len(),
                doc.components.len()
            )));
        }
        let components = Matrix::from_rows(&doc.components)?;
        if components.cols() != m {
            return Err(Error::InvalidConfig(format!(
                "components have {} entries, expected {m}",
                components.cols()
            )));
        }
        if !components.transpose().is_orthogonal(1e-10)? {
            return Err(Error::InvalidConfig(
                "components are not orthonormal".to_string(),
            ));
        }
        Ok(Self {
            mean: doc.mean,
            components,
            variances: doc.variances,
            route: doc.route,
            normalization: doc.normalization,
            names: doc.names,
        })
    }
}

/// On-disk form of a [`PcaModel`]; components are listed row by row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub version: u32,
    pub route: Route,
    pub normalization: Normalization,
    pub names: Vec<String>,
    pub mean: Vec<f64>,
    pub variances: Vec<f64>,
    pub components: Vec<Vec<f64>>,
}

/// Principal components as the eigenvectors of the covariance matrix.
pub fn fit_eigen(d: &Dataset, normalization: Normalization) -> Result<PcaModel> {
    let (centered, mean) = center(d);
    let cov = covariance_matrix(&centered, normalization)?;
    if !(cov.trace() > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let eig = jacobi_eigen_symmetric(&cov, JacobiOptions::default())?;
    let m = d.measurements();
    let floor = VARIANCE_REL_TOL * eig.eigenvalues()[0];
    let rank = eig.eigenvalues().iter().take_while(|&&l| l > floor).count();

    let leading: Vec<Vec<f64>> = (0..rank).map(|i| eig.eigenvector(i)).collect();
    let rows = complete_orthonormal_basis(&leading, m)?;
    let mut variances = eig.eigenvalues().to_vec();
    variances[rank..].iter_mut().for_each(|v| *v = 0.0);

    Ok(PcaModel {
        mean,
        components: Matrix::from_rows(&rows)?,
        variances,
        route: Route::Eigen,
        normalization,
        names: d.names.clone(),
    })
}

/// Principal components as the right singular vectors of `Xᵀ/√n`.
pub fn fit_svd(d: &Dataset, normalization: Normalization) -> Result<PcaModel> {
    let (centered, mean) = center(d);
    check_centered(&centered)?;
    let divisor = normalization.divisor(d.samples());
    if !(centered.data.frobenius_norm() > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let y = centered.data.transpose().scale(1.0 / divisor.sqrt());
    let f = thin_svd(&y)?;
    let m = d.measurements();
    let mut variances: Vec<f64> = f.singular_values().iter().map(|s| s * s).collect();
    variances.resize(m, 0.0);

    Ok(PcaModel {
        mean,
        components: f.v().transpose(),
        variances,
        route: Route::Svd,
        normalization,
        names: d.names.clone(),
    })
}

fn check_model_dims(model: &PcaModel, m: usize) -> Result<()> {
    if m != model.measurements() {
        return Err(Error::DimensionMismatch {
            op: "project",
            left_rows: model.measurements(),
            left_cols: model.measurements(),
            right_rows: m,
            right_cols: 0,
        });
    }
    Ok(())
}

/// `Y = P·(X − mean)`, an `m×n` matrix whose `i`-th row holds the
/// coordinates along the `i`-th principal component.
pub fn project(model: &PcaModel, d: &Dataset) -> Result<Matrix> {
    check_model_dims(model, d.measurements())?;
    let (m, n) = d.data.shape();
    let mut shifted = d.data.as_slice().to_vec();
    for i in 0..m {
        shifted[i * n..(i + 1) * n]
            .iter_mut()
            .for_each(|x| *x -= model.mean[i]);
    }
    model.components.multiply(&Matrix::from_raw(m, n, shifted))
}

/// Rebuilds data from the first `k` rows of a projection:
/// `X̂ = Pₖᵀ·Yₖ + mean`. `y` may carry anywhere from `k` to `m` rows.
pub fn reconstruct(model: &PcaModel, y: &Matrix, k: usize) -> Result<Matrix> {
    let m = model.measurements();
    if k > m {
        return Err(Error::TooManyComponents {
            requested: k,
            available: m,
        });
    }
    if y.rows() < k || y.rows() > m {
        return Err(Error::DimensionMismatch {
            op: "reconstruct",
            left_rows: m,
            left_cols: m,
            right_rows: y.rows(),
            right_cols: y.cols(),
        });
    }
    let n = y.cols();
    let mut out = vec![0.0; m * n];
    for i in 0..m {
        out[i * n..(i + 1) * n].fill(model.mean[i]);
    }
    for c in 0..k {
        let p = model.component(c);
        let yc = y.row(c);
        for i in 0..m {
            let row = &mut out[i * n..(i + 1) * n];
            for (o, v) in row.iter_mut().zip(yc) {
                *o += p[i] * v;
            }
        }
    }
    Ok(Matrix::from_raw(m, n, out))
}

/// Each component's share of the total variance.
pub fn explained_variance_ratio(model: &PcaModel) -> Result<Vec<f64>> {
    let total = model.total_variance();
    if !(total > 0.0) {
        return Err(Error::ZeroVariance);
    }
    Ok(model.variances.iter().map(|v| v / total).collect())
}

/// Frobenius norm of `X − X̂` for the rank-`k` reconstruction of `d`.
pub fn reconstruction_error(model: &PcaModel, d: &Dataset, k: usize) -> Result<f64> {
    let y = project(model, d)?;
    let x_hat = reconstruct(model, &y, k)?;
    Ok(d.data.sub(&x_hat)?.frobenius_norm())
}

/// `max_{i≠j} |(P·C·Pᵀ)_ij| / trace(P·C·Pᵀ)`: zero when `P` diagonalizes `C`.
pub fn diagonalization_residual(model: &PcaModel, cov: &Matrix) -> Result<f64> {
    let p = &model.components;
    let cy = p.multiply(cov)?.multiply(&p.transpose())?;
    let trace = cy.trace();
    if !(trace > 0.0) {
        return Ok(cy.max_off_diagonal());
    }
    Ok(cy.max_off_diagonal() / trace)
}

/// How closely two fitted models agree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RouteAgreement {
    /// `max |λᵢ − μᵢ|` divided by the largest variance.
    pub max_variance_delta: f64,
    /// Largest entry-wise difference between matched components after
    /// aligning signs, over components that are individually identifiable.
    pub max_component_delta: f64,
    /// Components skipped because their variance is (nearly) repeated.
    pub degenerate_components: usize,
}

pub fn compare_models(a: &PcaModel, b: &PcaModel) -> Result<RouteAgreement> {
    let m = a.measurements();
    if b.measurements() != m {
        return Err(Error::LengthMismatch {
            op: "compare_models",
            left: m,
            right: b.measurements(),
        });
    }
    let scale = a.variances[0].max(b.variances[0]).max(f64::MIN_POSITIVE);
    let max_variance_delta = a
        .variances
        .iter()
        .zip(&b.variances)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
        / scale;

    let mut max_component_delta = 0.0_f64;
    let mut degenerate_components = 0;
    for i in 0..m {
        if is_degenerate(&a.variances, i, scale) {
            degenerate_components += 1;
            continue;
        }
        let (p, q) = (a.component(i), b.component(i));
        let plus = p
            .iter()
            .zip(q)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        let minus = p
            .iter()
            .zip(q)
            .map(|(x, y)| (x + y).abs())
            .fold(0.0, f64::max);
        max_component_delta = max_component_delta.max(plus.min(minus));
    }
    Ok(RouteAgreement {
        max_variance_delta,
        max_component_delta,
        degenerate_components,
    })
}

/// True when variance `i` sits within the degeneracy gap of a neighbour.
pub fn is_degenerate(variances: &[f64], i: usize, scale: f64) -> bool {
    let gap = DEGENERATE_GAP_REL * scale;
    let below = i + 1 < variances.len() && (variances[i] - variances[i + 1]).abs() < gap;
    let above = i > 0 && (variances[i - 1] - variances[i]).abs() < gap;
    below || above
}
