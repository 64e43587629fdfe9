//! Singular value decomposition assembled from the eigenvectors of `XᵀX`.
//!
//! For an `n×m` matrix `X`:
//!
//! 1. eigendecompose the symmetric `m×m` matrix `XᵀX`, giving orthonormal
//!    `v̂ᵢ` with eigenvalues `λᵢ`;
//! 2. take `σᵢ = ‖Xv̂ᵢ‖` (which equals `√λᵢ`) as the singular values, in
//!    descending order;
//! 3. for every `σᵢ` above the rank tolerance set `ûᵢ = Xv̂ᵢ / σᵢ`, so that
//!    `Xv̂ᵢ = σᵢûᵢ` holds column by column;
//! 4. complete both `{ûᵢ}` and `{v̂ᵢ}` to square orthogonal matrices.
//!
//! Between steps 2 and 3 the vectors `Xv̂ᵢ` get a one-sided Jacobi clean-up
//! so that the `ûᵢ` of small singular values stay orthogonal.
//!
//! The result satisfies `XV = UΣ` and therefore `X = UΣVᵀ`.
//!
//! Squaring `X` squares its condition number. That is fine for the small,
//! well-scaled matrices this crate targets; it is not a general purpose SVD.

use crate::eigen::{jacobi_eigen_symmetric, JacobiOptions};
use crate::error::{Error, Result};
use crate::matrix::{
    complete_orthonormal_basis, dot, extend_orthonormal_set, fix_sign, norm, Matrix,
};

/// Relative threshold (against the largest singular value) below which a
/// singular value counts as zero.
pub const RANK_REL_TOL: f64 = 1e-10;
/// Absolute floor on the rank threshold, used when every singular value is tiny.
pub const RANK_ABS_TOL: f64 = 1e-12;

const REFINE_TOL: f64 = 1e-15;
const MAX_REFINE_SWEEPS: usize = 30;

/// `X = U·Σ·Vᵀ`, with `V` m×m and the diagonal of `Σ` stored as
/// `singular_values` (length `min(n, m)`). `U` is n×n from [`svd`] and
/// n×min(n, m) from [`thin_svd`].
#[derive(Debug, Clone, PartialEq)]
pub struct SvdFactors {
    u: Matrix,
    singular_values: Vec<f64>,
    v: Matrix,
    rank: usize,
}

impl SvdFactors {
    pub fn u(&self) -> &Matrix {
        &self.u
    }

    pub fn v(&self) -> &Matrix {
        &self.v
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Shape `(n, m)` of the factored matrix.
    pub fn shape(&self) -> (usize, usize) {
        (self.u.rows(), self.v.rows())
    }

    /// The rectangular-diagonal `Σ`, shaped to sit between `U` and `Vᵀ`.
    pub fn sigma(&self) -> Matrix {
        let (r, m) = (self.u.cols(), self.v.rows());
        let mut data = vec![0.0; r * m];
        for (i, s) in self.singular_values.iter().enumerate() {
            data[i * m + i] = *s;
        }
        Matrix::from_raw(r, m, data)
    }

    pub fn reconstruct(&self) -> Matrix {
        reconstruct(self)
    }
}

pub fn rank_tolerance(max_singular_value: f64) -> f64 {
    (RANK_REL_TOL * max_singular_value).max(RANK_ABS_TOL)
}

/// Singular value decomposition of an `n×m` matrix via the eigenvectors of `XᵀX`.
pub fn svd(x: &Matrix) -> Result<SvdFactors> {
    factor(x, x.rows())
}

/// [`svd`] keeping only the first `min(n, m)` columns of `U`. This is what
/// a tall data matrix needs: `U` would otherwise be n×n.
pub fn thin_svd(x: &Matrix) -> Result<SvdFactors> {
    factor(x, x.rows().min(x.cols()))
}

fn factor(x: &Matrix, u_count: usize) -> Result<SvdFactors> {
    let (n, m) = x.shape();
    let eig = jacobi_eigen_symmetric(&x.gram(), JacobiOptions::default())?;

    let mut pairs: Vec<(f64, Vec<f64>, Vec<f64>)> = (0..m)
        .map(|i| {
            let v = eig.eigenvector(i);
            let xv = x.mul_vec(&v).expect("v has x.cols entries");
            (norm(&xv), v, xv)
        })
        .collect();
    // Already in eigenvalue order up to roundoff; the stable sort only fixes
    // near-ties where ‖Xv̂‖ and √λ disagree in the last bits.
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));

    let max_sigma = pairs.first().map_or(0.0, |p| p.0);
    let tol = rank_tolerance(max_sigma);
    let rank = pairs
        .iter()
        .take(n.min(m))
        .take_while(|p| p.0 > tol)
        .count();

    pairs.truncate(rank);
    let (mut v_cols, mut images): (Vec<Vec<f64>>, Vec<Vec<f64>>) =
        pairs.into_iter().map(|(_, v, xv)| (v, xv)).unzip();
    orthogonalize_images(&mut images, &mut v_cols);

    let mut order: Vec<(f64, usize)> = images.iter().map(|w| norm(w)).zip(0..).collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut singular_values = vec![0.0; n.min(m)];
    let mut u_cols = Vec::with_capacity(u_count);
    let mut sorted_v = Vec::with_capacity(m);
    for (i, &(sigma, j)) in order.iter().enumerate() {
        let mut v = std::mem::take(&mut v_cols[j]);
        let mut u: Vec<f64> = images[j].iter().map(|e| e / sigma).collect();
        let before = v.clone();
        fix_sign(&mut v);
        if v != before {
            u.iter_mut().for_each(|e| *e = -*e);
        }
        singular_values[i] = sigma;
        u_cols.push(u);
        sorted_v.push(v);
    }
    let v_cols = sorted_v;
    let v_cols = complete_orthonormal_basis(&v_cols, m)?;
    let u_cols = extend_orthonormal_set(&u_cols, n, u_count)?;

    Ok(SvdFactors {
        u: Matrix::from_columns(&u_cols)?,
        singular_values,
        v: Matrix::from_columns(&v_cols)?,
        rank,
    })
}

/// Rotates pairs of columns `wᵢ = Xv̂ᵢ` (and the matching `v̂ᵢ`) until the
/// `w` are mutually orthogonal to working precision (one-sided Jacobi).
///
/// Eigenvectors of `XᵀX` are accurate to about `ε·σ₁²/gap`, so for the
/// smaller singular values `Xv̂ᵢ/σᵢ` can be visibly non-orthogonal. The
/// rotations are tiny and keep `V` orthogonal and `XV = W` exact.
fn orthogonalize_images(w: &mut [Vec<f64>], v: &mut [Vec<f64>]) {
    let r = w.len();
    for _ in 0..MAX_REFINE_SWEEPS {
        let mut rotated = false;
        for p in 0..r {
            for q in p + 1..r {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                if gamma.abs() <= REFINE_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(w, p, q, c, s);
                rotate_pair(v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
}

fn rotate_pair(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    for (a, b) in left[p].iter_mut().zip(right[0].iter_mut()) {
        let (x, y) = (*a, *b);
        *a = c * x - s * y;
        *b = s * x + c * y;
    }
}

/// `U·Σ·Vᵀ`.
pub fn reconstruct(f: &SvdFactors) -> Matrix {
    let (n, m) = f.shape();
    let mut data = vec![0.0; n * m];
    for (k, &s) in f.singular_values.iter().enumerate() {
        if s == 0.0 {
            continue;
        }
        let u = f.u.column(k);
        let v = f.v.column(k);
        for i in 0..n {
            let su = s * u[i];
            for j in 0..m {
                data[i * m + j] += su * v[j];
            }
        }
    }
    Matrix::from_raw(n, m, data)
}

/// Keeps the `k` largest singular values and zeroes the rest. `U` and `V`
/// are unchanged.
pub fn truncate(f: &SvdFactors, k: usize) -> Result<SvdFactors> {
    if k > f.rank {
        return Err(Error::TooManyComponents {
            requested: k,
            available: f.rank,
        });
    }
    let mut out = f.clone();
    out.singular_values[k..].iter_mut().for_each(|s| *s = 0.0);
    out.rank = k;
    Ok(out)
}

/// Largest `|ûᵢ·ûⱼ|` over distinct pairs of the first `rank` left vectors.
pub fn left_vector_coherence(f: &SvdFactors) -> f64 {
    let cols: Vec<Vec<f64>> = (0..f.rank).map(|i| f.u.column(i)).collect();
    let mut worst = 0.0_f64;
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            worst = worst.max(dot(&cols[i], &cols[j]).abs());
        }
    }
    worst
}
