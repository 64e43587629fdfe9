//! Dense real matrices and the handful of exact-contract operations the rest
//! of the crate is built on.
//!
//! Storage is row-major. A [`Matrix`] is a value: nothing mutates it after
//! construction, so it can be shared freely between threads.

use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};

/// Default absolute tolerance for entry-wise comparisons.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Pairwise tolerance accepted for the input of [`complete_orthonormal_basis`].
pub const ORTHONORMAL_INPUT_TOL: f64 = 1e-10;

/// A candidate whose residual after orthogonalization falls below this norm is
/// considered dependent on the accepted set and skipped.
const FILL_UP_RESIDUAL: f64 = 1e-6;

/// Relative slack used when deciding that two entries tie for largest magnitude.
const SIGN_TIE_TOL: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, rejecting empty shapes and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                actual: data.len(),
            });
        }
        if let Some(idx) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: idx / cols,
                col: idx % cols,
                value: data[idx],
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n_cols {
                return Err(Error::VectorDimension {
                    index: i,
                    expected: n_cols,
                    actual: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(n_rows, n_cols, data)
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns<C: AsRef<[f64]>>(columns: &[C]) -> Result<Self> {
        Ok(Self::from_rows(columns)?.transpose())
    }

    /// # Panics
    /// If either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Square diagonal matrix with `values` on the diagonal.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::EmptyMatrix { rows: 0, cols: 0 });
        }
        let mut data = vec![0.0; n * n];
        for (i, v) in values.iter().enumerate() {
            data[i * n + i] = *v;
        }
        Self::new(n, n, data)
    }

    /// Construction for values already known to be finite and well-shaped.
    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Standard matrix product `self · other`.
    pub fn multiply(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(self.mismatch("multiply", other));
        }
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = vec![0.0; n * m];
        for i in 0..n {
            let out_row = &mut out[i * m..(i + 1) * m];
            for p in 0..k {
                let a = self.data[i * k + p];
                if a == 0.0 {
                    continue;
                }
                let b_row = &other.data[p * m..(p + 1) * m];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(Self::from_raw(n, m, out))
    }

    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "mul_vec",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: v.len(),
                right_cols: 1,
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = vec![0.0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        Self::from_raw(self.cols, self.rows, out)
    }

    /// `AᵀA`, computed on the upper triangle and mirrored so the result is
    /// exactly symmetric.
    pub fn gram(&self) -> Matrix {
        let cols: Vec<Vec<f64>> = (0..self.cols).map(|j| self.column(j)).collect();
        symmetric_from_pairs(&cols)
    }

    /// `AAᵀ`, exactly symmetric by the same pairing as [`Matrix::gram`].
    pub fn outer_gram(&self) -> Matrix {
        let rows = self.to_rows();
        symmetric_from_pairs(&rows)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(self.mismatch("sub", other));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self::from_raw(self.rows, self.cols, data))
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(self.mismatch("add", other));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self::from_raw(self.rows, self.cols, data))
    }

    pub fn scale(&self, factor: f64) -> Matrix {
        Self::from_raw(
            self.rows,
            self.cols,
            self.data.iter().map(|x| x * factor).collect(),
        )
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Sum of the diagonal entries (of the leading square block).
    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn diagonal_entries(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i))
            .collect()
    }

    /// Largest `|a_ij|` with `i != j`.
    pub fn max_off_diagonal(&self) -> f64 {
        let mut max = 0.0_f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    max = max.max(self.get(i, j).abs());
                }
            }
        }
        max
    }

    /// `max |a_ij - a_ji|`; errors on non-square input.
    pub fn max_asymmetry(&self) -> Result<f64> {
        self.require_square()?;
        let n = self.rows;
        let mut max = 0.0_f64;
        for i in 0..n {
            for j in i + 1..n {
                max = max.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        Ok(max)
    }

    /// True iff `max |(AᵀA − I)_ij| <= tol`.
    pub fn is_orthogonal(&self, tol: f64) -> Result<bool> {
        self.require_square()?;
        Ok(orthogonality_defect(&self.gram()) <= tol)
    }

    pub(crate) fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn mismatch(&self, op: &'static str, other: &Matrix) -> Error {
        Error::DimensionMismatch {
            op,
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

fn symmetric_from_pairs(vectors: &[Vec<f64>]) -> Matrix {
    let n = vectors.len();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = dot(&vectors[i], &vectors[j]);
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    Matrix::from_raw(n, n, data)
}

fn orthogonality_defect(gram: &Matrix) -> f64 {
    let n = gram.rows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram.get(i, j) - target).abs());
        }
    }
    worst
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Flips `v` so its largest-magnitude entry is positive. When several entries
/// tie for the largest magnitude the first of them decides.
pub fn fix_sign(v: &mut [f64]) {
    fix_sign_with_tie_tol(v, SIGN_TIE_TOL);
}

/// [`fix_sign`] with an explicit relative tie tolerance, for vectors that are
/// only accurate to some known level.
pub(crate) fn fix_sign_with_tie_tol(v: &mut [f64], tie_tol: f64) {
    let max = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if max == 0.0 {
        return;
    }
    let lead = v
        .iter()
        .position(|x| x.abs() >= max * (1.0 - tie_tol))
        .expect("some entry attains the maximum");
    if v[lead] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Removes from `w` its components along each (unit) vector in `basis`.
/// Two passes of classical Gram–Schmidt.
pub(crate) fn orthogonalize_against(w: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(w, b);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= c * bi;
            }
        }
    }
}

/// Extends an orthonormal set of `dim`-vectors to a full orthonormal basis.
///
/// The inputs are returned unchanged, followed by new vectors drawn from the
/// canonical basis `e_1, …, e_dim` in index order: each candidate is
/// orthogonalized against everything accepted so far and kept if its residual
/// norm exceeds `1e-6`. Accepted vectors are normalized and sign-fixed with
/// [`fix_sign`].
pub fn complete_orthonormal_basis(partial: &[Vec<f64>], dim: usize) -> Result<Vec<Vec<f64>>> {
    extend_orthonormal_set(partial, dim, dim)
}

/// Like [`complete_orthonormal_basis`] but stops once `count` vectors
/// (`partial.len() ≤ count ≤ dim`) are in the set.
pub(crate) fn extend_orthonormal_set(
    partial: &[Vec<f64>],
    dim: usize,
    count: usize,
) -> Result<Vec<Vec<f64>>> {
    debug_assert!(count <= dim);
    if partial.len() > dim {
        return Err(Error::TooManyVectors {
            count: partial.len(),
            dim,
        });
    }
    for (index, v) in partial.iter().enumerate() {
        if v.len() != dim {
            return Err(Error::VectorDimension {
                index,
                expected: dim,
                actual: v.len(),
            });
        }
    }

    let mut worst = (0, 0, 0.0_f64);
    for i in 0..partial.len() {
        for j in i..partial.len() {
            let target = if i == j { 1.0 } else { 0.0 };
            let dev = (dot(&partial[i], &partial[j]) - target).abs();
            if dev > worst.2 || dev.is_nan() {
                worst = (i, j, dev);
            }
        }
    }
    if !(worst.2 <= ORTHONORMAL_INPUT_TOL) {
        return Err(Error::NotOrthonormal {
            i: worst.0,
            j: worst.1,
            deviation: worst.2,
        });
    }

    let mut basis = partial.to_vec();
    for k in 0..dim {
        if basis.len() >= count {
            break;
        }
        let mut w = vec![0.0; dim];
        w[k] = 1.0;
        orthogonalize_against(&mut w, &basis);
        let r = norm(&w);
        if r > FILL_UP_RESIDUAL {
            w.iter_mut().for_each(|x| *x /= r);
            fix_sign(&mut w);
            basis.push(w);
        }
    }
    debug_assert!(basis.len() >= count);
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(matches!(
            Matrix::new(0, 3, vec![]),
            Err(Error::EmptyMatrix { .. })
        ));
        assert!(matches!(
            Matrix::new(2, 2, vec![1.0; 3]),
            Err(Error::EntryCount { .. })
        ));
        assert!(matches!(
            Matrix::new(2, 2, vec![1.0, 2.0, f64::NAN, 4.0]),
            Err(Error::NonFinite { row: 1, col: 0, .. })
        ));
        assert!(Matrix::new(1, 1, vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn multiply_examples() {
        let x = m(&[&[3.0, 4.0], &[5.0, 6.0]]);
        assert_eq!(Matrix::identity(2).multiply(&x).unwrap(), x);

        let a = m(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let b = m(&[&[0.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(a.multiply(&b).unwrap(), Matrix::zeros(2, 2));

        // 1*5 + 2*6 = 17, 3*5 + 4*6 = 39
        let c = m(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let d = m(&[&[5.0], &[6.0]]);
        assert_eq!(c.multiply(&d).unwrap(), m(&[&[17.0], &[39.0]]));
    }

    #[test]
    fn multiply_reports_both_shapes() {
        let a = Matrix::zeros(2, 3);
        let b = Matrix::zeros(2, 3);
        let err = a.multiply(&b).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                op: "multiply",
                left_rows: 2,
                left_cols: 3,
                right_rows: 2,
                right_cols: 3
            }
        );
        let msg = err.to_string();
        assert!(msg.contains("2x3 and 2x3"), "{msg}");
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(Matrix::identity(3).transpose(), Matrix::identity(3));
        let row = m(&[&[1.0, 2.0, 3.0]]);
        assert_eq!(row.transpose(), m(&[&[1.0], &[2.0], &[3.0]]));
    }

    #[test]
    fn orthogonality_examples() {
        assert!(Matrix::identity(4).is_orthogonal(1e-12).unwrap());
        let (s, c) = (30f64.to_radians().sin(), 30f64.to_radians().cos());
        assert!(m(&[&[c, -s], &[s, c]]).is_orthogonal(1e-12).unwrap());
        assert!(!m(&[&[1.0, 1.0], &[0.0, 1.0]]).is_orthogonal(1e-12).unwrap());
        assert!(matches!(
            Matrix::zeros(2, 3).is_orthogonal(1e-12),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn fill_up_from_first_axis() {
        let basis = complete_orthonormal_basis(&[vec![1.0, 0.0, 0.0]], 3).unwrap();
        assert_eq!(
            basis,
            vec![
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0]
            ]
        );
    }

    #[test]
    fn fill_up_full_basis_is_identity_map() {
        let (s, c) = (0.6, 0.8);
        let input = vec![vec![c, s], vec![-s, c]];
        assert_eq!(complete_orthonormal_basis(&input, 2).unwrap(), input);
    }

    #[test]
    fn fill_up_diagonal_in_plane() {
        // e1 - ((1,1)/√2 · e1)(1,1)/√2 = (1/2, -1/2), normalized (1,-1)/√2;
        // the two entries tie in magnitude so the first one is made positive.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let basis = complete_orthonormal_basis(&[vec![h, h]], 2).unwrap();
        assert_eq!(basis[0], vec![h, h]);
        assert!((basis[1][0] - h).abs() < 1e-15);
        assert!((basis[1][1] + h).abs() < 1e-15);
    }

    #[test]
    fn fill_up_from_nothing_is_canonical() {
        let basis = complete_orthonormal_basis(&[], 3).unwrap();
        assert_eq!(Matrix::from_rows(&basis).unwrap(), Matrix::identity(3));
    }

    #[test]
    fn fill_up_rejects_non_orthonormal_input() {
        let err =
            complete_orthonormal_basis(&[vec![1.0, 0.0, 0.0], vec![0.6, 0.8, 0.0]], 3).unwrap_err();
        match err {
            Error::NotOrthonormal { i, j, deviation } => {
                assert_eq!((i, j), (0, 1));
                assert!((deviation - 0.6).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            complete_orthonormal_basis(&[vec![2.0, 0.0]], 2),
            Err(Error::NotOrthonormal { i: 0, j: 0, .. })
        ));
        assert!(matches!(
            complete_orthonormal_basis(&[vec![1.0, 0.0]], 3),
            Err(Error::VectorDimension { .. })
        ));
    }

    #[test]
    fn sign_convention() {
        let mut v = vec![0.1, -0.9, 0.3];
        fix_sign(&mut v);
        assert_eq!(v, vec![-0.1, 0.9, -0.3]);
        let mut tie = vec![-0.5, 0.5];
        fix_sign(&mut tie);
        assert_eq!(tie, vec![0.5, -0.5]);
        let mut zero = vec![0.0, 0.0];
        fix_sign(&mut zero);
        assert_eq!(zero, vec![0.0, 0.0]);
    }

    fn matrix_strategy(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        prop::collection::vec(-10.0..10.0f64, rows * cols)
            .prop_map(move |data| Matrix::new(rows, cols, data).unwrap())
    }

    fn rel_frobenius(a: &Matrix, b: &Matrix) -> f64 {
        let scale = a
            .frobenius_norm()
            .max(b.frobenius_norm())
            .max(f64::MIN_POSITIVE);
        a.sub(b).unwrap().frobenius_norm() / scale
    }

    proptest! {
        #[test]
        fn transpose_is_an_involution(a in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| matrix_strategy(r, c))) {
            prop_assert_eq!(a.transpose().transpose(), a);
        }

        #[test]
        fn multiply_is_associative(
            (a, b, c) in (1usize..6, 1usize..6, 1usize..6, 1usize..6).prop_flat_map(|(p, q, r, s)| {
                (matrix_strategy(p, q), matrix_strategy(q, r), matrix_strategy(r, s))
            })
        ) {
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert!(rel_frobenius(&left, &right) <= 1e-10);
        }

        #[test]
        fn transpose_reverses_products(
            (a, b) in (1usize..6, 1usize..6, 1usize..6).prop_flat_map(|(p, q, r)| {
                (matrix_strategy(p, q), matrix_strategy(q, r))
            })
        ) {
            let lhs = a.multiply(&b).unwrap().transpose();
            let rhs = b.transpose().multiply(&a.transpose()).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12);
        }

        #[test]
        fn gram_matrices_are_exactly_symmetric(a in (1usize..7, 1usize..7).prop_flat_map(|(r, c)| matrix_strategy(r, c))) {
            prop_assert_eq!(a.gram().max_asymmetry().unwrap(), 0.0);
            prop_assert_eq!(a.outer_gram().max_asymmetry().unwrap(), 0.0);
            let via_product = a.transpose().multiply(&a).unwrap();
            prop_assert!(via_product.max_asymmetry().unwrap() <= 1e-12 * (1.0 + via_product.max_abs()));
        }

        #[test]
        fn completed_bases_are_orthogonal(dim in 1usize..7, angle in 0.0..std::f64::consts::TAU, take in 0usize..3) {
            // Start from a rotated pair in the first two coordinates (when they exist).
            let mut partial = Vec::new();
            if dim >= 2 {
                let (s, c) = angle.sin_cos();
                let mut a = vec![0.0; dim];
                let mut b = vec![0.0; dim];
                a[0] = c; a[1] = s;
                b[0] = -s; b[1] = c;
                partial.push(a);
                partial.push(b);
            }
            partial.truncate(take);
            let basis = complete_orthonormal_basis(&partial, dim).unwrap();
            prop_assert_eq!(basis.len(), dim);
            prop_assert_eq!(&basis[..partial.len()], &partial[..]);
            prop_assert!(Matrix::from_rows(&basis).unwrap().is_orthogonal(1e-10).unwrap());
        }
    }
}
