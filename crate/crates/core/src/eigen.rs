//! Symmetric eigendecomposition.
//!
//! [`jacobi_eigen_symmetric`] is the production solver: cyclic Jacobi sweeps,
//! unconditionally stable for real symmetric input. [`greedy_max_variance_directions`]
//! is a deliberately naive second route that picks one unit direction at a
//! time, maximizing `pᵀCp` over the orthogonal complement of everything chosen
//! before. It exists to cross-check the Jacobi route and is not used by the
//! PCA pipelines.

use crate::error::{Error, Result};
use crate::matrix::{dot, fix_sign, fix_sign_with_tie_tol, norm, orthogonalize_against, Matrix};

/// Maximum `|a_ij - a_ji|` accepted as "symmetric".
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Negative eigenvalues no larger than this fraction of the spectral radius
/// are treated as roundoff and clamped to zero.
pub const NEGATIVE_CLAMP_REL: f64 = 1e-10;

/// Power iteration directions are accurate to roughly `tol / gap`; entries
/// closer than this (relatively) count as tied when fixing the sign.
const GREEDY_SIGN_TIE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiOptions {
    /// Stop once the off-diagonal Frobenius norm is at most `tol` times its
    /// initial value.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_sweeps: 100,
        }
    }
}

/// `A = E·D·Eᵀ` with eigenvalues in descending order and the `i`-th column
/// of `E` paired with the `i`-th eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: Matrix,
}

impl EigenDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvectors as columns.
    pub fn eigenvectors(&self) -> &Matrix {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, i: usize) -> Vec<f64> {
        self.eigenvectors.column(i)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Rebuilds `E·D·Eᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.dim();
        let e = &self.eigenvectors;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v: f64 = (0..n)
                    .map(|k| e.get(i, k) * self.eigenvalues[k] * e.get(j, k))
                    .sum();
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Matrix::from_raw(n, n, data)
    }
}

fn off_diagonal_norm(w: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += w[i * n + j] * w[i * n + j];
            }
        }
    }
    sum.sqrt()
}

fn check_symmetric(a: &Matrix) -> Result<()> {
    let asym = a.max_asymmetry()?;
    if asym > SYMMETRY_TOL || asym.is_nan() {
        return Err(Error::NotSymmetric {
            max_asymmetry: asym,
        });
    }
    Ok(())
}

/// Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Each rotation annihilates one off-diagonal pair; sweeps visit every
/// `(p, q)` with `p < q` in row order. After the fourth sweep, entries that are
/// negligible next to both corresponding diagonal entries are zeroed outright
/// instead of rotated.
///
/// Eigenvalues come back sorted descending with a stable sort, so equal
/// eigenvalues keep the order in which the rotations left them. Each
/// eigenvector is sign-fixed with [`fix_sign`].
pub fn jacobi_eigen_symmetric(a: &Matrix, opts: JacobiOptions) -> Result<EigenDecomposition> {
    a.require_square()?;
    check_symmetric(a)?;
    let n = a.rows();

    // Work on the exactly-symmetrized copy.
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            w[i * n + j] = 0.5 * (a.get(i, j) + a.get(j, i));
        }
    }
    let mut v = Matrix::identity(n).as_slice().to_vec();

    let initial_off = off_diagonal_norm(&w, n);
    let target = opts.tol * initial_off;
    let mut converged = initial_off == 0.0;
    let mut sweep = 0;
    while !converged {
        if sweep == opts.max_sweeps {
            return Err(Error::NoConvergence {
                sweeps: sweep,
                residual: off_diagonal_norm(&w, n),
            });
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut w, &mut v, n, p, q, sweep);
            }
        }
        sweep += 1;
        let off = off_diagonal_norm(&w, n);
        converged = off <= target || off == 0.0;
    }

    let raw: Vec<f64> = (0..n).map(|i| w[i * n + i]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[j].total_cmp(&raw[i]));

    let spectral_radius = raw.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let eigenvalues: Vec<f64> = order
        .iter()
        .map(|&k| clamp_negative(raw[k], spectral_radius))
        .collect();

    let mut columns = Vec::with_capacity(n);
    for &k in &order {
        let mut col: Vec<f64> = (0..n).map(|i| v[i * n + k]).collect();
        fix_sign(&mut col);
        columns.push(col);
    }
    let eigenvectors = Matrix::from_columns(&columns)?;

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn clamp_negative(lambda: f64, spectral_radius: f64) -> f64 {
    if lambda < 0.0 && -lambda <= NEGATIVE_CLAMP_REL * spectral_radius {
        0.0
    } else {
        lambda
    }
}

/// One Jacobi rotation in the `(p, q)` plane, applied to the working matrix
/// `w` and accumulated into the eigenvector matrix `v` (both row-major n×n).
fn rotate(w: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize, sweep: usize) {
    let apq = w[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = w[p * n + p];
    let aqq = w[q * n + q];

    let g = 100.0 * apq.abs();
    if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
        w[p * n + q] = 0.0;
        w[q * n + p] = 0.0;
        return;
    }

    let h = aqq - app;
    let t = if h.abs() + g == h.abs() {
        apq / h
    } else {
        let theta = 0.5 * h / apq;
        let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let tau = s / (1.0 + c);

    w[p * n + p] = app - t * apq;
    w[q * n + q] = aqq + t * apq;
    w[p * n + q] = 0.0;
    w[q * n + p] = 0.0;

    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = w[r * n + p];
        let arq = w[r * n + q];
        let new_rp = arp - s * (arq + tau * arp);
        let new_rq = arq + s * (arp - tau * arq);
        w[r * n + p] = new_rp;
        w[p * n + r] = new_rp;
        w[r * n + q] = new_rq;
        w[q * n + r] = new_rq;
    }
    for r in 0..n {
        let vrp = v[r * n + p];
        let vrq = v[r * n + q];
        v[r * n + p] = vrp - s * (vrq + tau * vrp);
        v[r * n + q] = vrq + s * (vrp - tau * vrq);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    pub max_iters: usize,
    /// Convergence threshold on `‖Cp − λp‖`, relative to `‖C‖_F`.
    pub tol: f64,
    /// Smallest acceptable gap between consecutive eigenvalues, relative to `‖C‖_F`.
    pub min_gap: f64,
}

impl Default for PowerOptions {
    fn default() -> Self {
        Self {
            max_iters: 100_000,
            tol: 1e-12,
            min_gap: 1e-10,
        }
    }
}

/// A unit direction together with the variance `pᵀCp` along it.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceDirection {
    pub direction: Vec<f64>,
    pub variance: f64,
}

/// Picks `k` orthonormal directions one at a time: each maximizes `pᵀCp`
/// among unit vectors orthogonal to the directions already chosen.
///
/// The per-step maximization is power iteration on `C` restricted to the
/// orthogonal complement (deflation by explicit projection, `C` itself is
/// never modified). A direction is rejected when the iteration stalls or
/// when its eigenvalue is not separated from the next one, since the
/// maximizer is then not unique.
pub fn greedy_max_variance_directions(
    c: &Matrix,
    k: usize,
    opts: PowerOptions,
) -> Result<Vec<VarianceDirection>> {
    c.require_square()?;
    check_symmetric(c)?;
    let m = c.rows();
    if k > m {
        return Err(Error::TooManyComponents {
            requested: k,
            available: m,
        });
    }
    let scale = c.frobenius_norm();
    let mut accepted: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut out = Vec::with_capacity(k);
    if k == 0 {
        return Ok(out);
    }

    let mut current = Some(dominant_in_complement(c, &accepted, scale, opts));
    for index in 0..k {
        let step = current.take().expect("computed ahead of use");
        if !step.converged {
            return Err(Error::PowerIterationStalled {
                index,
                iterations: opts.max_iters,
                residual: step.residual,
            });
        }
        accepted.push(step.direction.clone());
        if accepted.len() < m {
            let next = dominant_in_complement(c, &accepted, scale, opts);
            let gap = step.value - next.value;
            if !(gap > opts.min_gap * scale) {
                return Err(Error::NoSpectralGap { index, gap });
            }
            current = Some(next);
        }
        let mut direction = step.direction;
        fix_sign_with_tie_tol(&mut direction, GREEDY_SIGN_TIE_TOL);
        out.push(VarianceDirection {
            direction,
            variance: clamp_negative(step.value, scale),
        });
    }
    Ok(out)
}

struct PowerStep {
    direction: Vec<f64>,
    value: f64,
    residual: f64,
    converged: bool,
}

/// Deterministic start vector with distinct positive entries, `1 + frac(i·φ)`.
fn start_vector(m: usize) -> Vec<f64> {
    const GOLDEN: f64 = 0.618_033_988_749_894_8;
    (1..=m).map(|i| 1.0 + (i as f64 * GOLDEN).fract()).collect()
}

fn dominant_in_complement(
    c: &Matrix,
    accepted: &[Vec<f64>],
    scale: f64,
    opts: PowerOptions,
) -> PowerStep {
    let m = c.rows();
    let mut p = start_vector(m);
    orthogonalize_against(&mut p, accepted);
    let mut r = norm(&p);
    // The start vector can only vanish against the accepted set in contrived
    // cases; fall back to the first canonical axis that survives.
    let mut axis = 0;
    while r <= 1e-6 && axis < m {
        p = vec![0.0; m];
        p[axis] = 1.0;
        orthogonalize_against(&mut p, accepted);
        r = norm(&p);
        axis += 1;
    }
    p.iter_mut().for_each(|x| *x /= r);

    let threshold = opts.tol * scale;
    let mut value = 0.0;
    let mut residual = f64::INFINITY;
    for _ in 0..=opts.max_iters {
        let mut y = c.mul_vec(&p).expect("square matrix");
        orthogonalize_against(&mut y, accepted);
        value = dot(&p, &y);
        residual = y
            .iter()
            .zip(&p)
            .map(|(yi, pi)| (yi - value * pi).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= threshold {
            return PowerStep {
                direction: p,
                value,
                residual,
                converged: true,
            };
        }
        let ny = norm(&y);
        if ny == 0.0 {
            // p lies in the null space of the restricted operator: value 0, exact.
            return PowerStep {
                direction: p,
                value: 0.0,
                residual: 0.0,
                converged: true,
            };
        }
        p = y.into_iter().map(|x| x / ny).collect();
        orthogonalize_against(&mut p, accepted);
        let np = norm(&p);
        p.iter_mut().for_each(|x| *x /= np);
    }
    PowerStep {
        direction: p,
        value,
        residual,
        converged: false,
    }
}
