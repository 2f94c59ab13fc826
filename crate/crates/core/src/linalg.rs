//! Dense complex matrix kernels.
//!
//! Everything here works on [`ComplexMatrix`], a row-major `Vec<Complex64>`
//! with explicit shape. The eigensolver is a cyclic complex Jacobi method,
//! which is accurate to a few ulps at the sizes this crate deals with
//! (at most a few dozen rows). The SVD uses one-sided Jacobi rotations.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Off-diagonal Frobenius norm, relative to the full norm, at which Jacobi stops.
pub const JACOBI_REL_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;
/// Inputs to the eigensolver may deviate from Hermitian by at most this much.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-10;
/// Singular values below this fraction of the largest are treated as zero.
pub const SVD_REL_CUTOFF: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting bad lengths and NaN/Inf.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", rows * cols),
                actual: format!("{} entries", data.len()),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        m
    }

    /// `|u><v|`
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<C64>]) -> Result<Self> {
        let rows = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::ShapeMismatch {
                expected: format!("columns of length {rows}"),
                actual: "ragged columns".into(),
            });
        }
        Ok(Self::from_fn(rows, cols.len(), |i, j| cols[j][i]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// `self += s * other`
    pub fn add_scaled(&mut self, s: f64, other: &ComplexMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * s;
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-entry distance. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-entry distance from `self†`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `(M + M†)/2`
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    /// Real part of the Frobenius inner product `Tr(A† B)`.
    pub fn inner_re(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.re * b.re + a.im * b.im)
            .sum()
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; n * p];
        for i in 0..n {
            let row = &mut out[i * p..(i + 1) * p];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == ZERO {
                    continue;
                }
                let orow = &other.data[k * p..(k + 1) * p];
                for (o, b) in row.iter_mut().zip(orow) {
                    *o += a * b;
                }
            }
        }
        Self {
            rows: n,
            cols: p,
            data: out,
        }
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `<v|M|v>`, real part.
    pub fn expectation(&self, v: &[C64]) -> f64 {
        dot(v, &self.mul_vec(v)).re
    }

    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        Self::from_fn(r, c, |i, j| {
            self[(i / other.rows, j / other.cols)] * other[(i % other.rows, j % other.cols)]
        })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// `<u|v>` (conjugate-linear in the first argument).
pub fn dot(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn kron_vec(u: &[C64], v: &[C64]) -> Vec<C64> {
    u.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect()
}

#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Nondecreasing.
    pub eigenvalues: Vec<f64>,
    /// Column `k` pairs with `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `U diag(λ) U†`
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|x| x)
    }

    /// `U diag(f(λ)) U†`
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let u = &self.eigenvectors;
        let n = u.rows();
        let mapped: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lam) in mapped.iter().enumerate() {
            if lam == 0.0 {
                continue;
            }
            for i in 0..n {
                let a = u[(i, k)] * lam;
                for j in 0..n {
                    out[(i, j)] += a * u[(j, k)].conj();
                }
            }
        }
        out
    }
}

fn check_hermitian_input(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_INPUT_TOL {
        return Err(Error::NotHermitian {
            deviation,
            tol: HERMITIAN_INPUT_TOL,
        });
    }
    Ok(m.hermitian_part())
}

fn off_diagonal_norm(a: &[C64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi on a Hermitian matrix stored row-major in `a`.
/// On return the diagonal of `a` holds the eigenvalues and, if given,
/// `v` has been right-multiplied by the accumulated rotations.
fn jacobi_in_place(a: &mut [C64], n: usize, mut v: Option<&mut [C64]>) -> Result<()> {
    let total = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = JACOBI_REL_TOL * total;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(a, n) <= threshold {
            return Ok(());
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let g = apq.norm();
                if g < f64::MIN_POSITIVE {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let phase = apq / g;
                let theta = (aqq - app) / (2.0 * g);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
                let gpp = C64::new(c, 0.0);
                let gpq = C64::new(s, 0.0);
                let gqp = phase.conj() * (-s);
                let gqq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * gpp + akq * gqp;
                    a[k * n + q] = akp * gpq + akq * gqq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = gpp.conj() * apk + gqp.conj() * aqk;
                    a[q * n + k] = gpq.conj() * apk + gqq.conj() * aqk;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p] = C64::new(app - t * g, 0.0);
                a[q * n + q] = C64::new(aqq + t * g, 0.0);

                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * gpp + vkq * gqp;
                        v[k * n + q] = vkp * gpq + vkq * gqq;
                    }
                }
            }
        }
    }
    if off_diagonal_norm(a, n) <= threshold {
        Ok(())
    } else {
        Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
        })
    }
}

fn sorted_eigen(diag: Vec<f64>, vectors: ComplexMatrix) -> HermitianEigen {
    let n = diag.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    HermitianEigen {
        eigenvalues,
        eigenvectors,
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
///
/// The input is symmetrized as `(M + M†)/2` after checking that it is
/// Hermitian to within [`HERMITIAN_INPUT_TOL`].
pub fn herm_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let sym = check_hermitian_input(m)?;
    let n = sym.rows();
    let mut a = sym.into_vec();
    let mut v = ComplexMatrix::identity(n);
    jacobi_in_place(&mut a, n, Some(v.as_mut_slice()))?;
    let diag = (0..n).map(|i| a[i * n + i].re).collect();
    Ok(sorted_eigen(diag, v))
}

/// Like [`herm_eig`], starting the rotations from a basis that nearly
/// diagonalizes `m` (for example the eigenvectors of a nearby matrix).
/// The guess is re-orthonormalized first, so drift in it does not leak into
/// the result.
pub fn herm_eig_warm(m: &ComplexMatrix, guess: &ComplexMatrix) -> Result<HermitianEigen> {
    let sym = check_hermitian_input(m)?;
    let n = sym.rows();
    if guess.rows() != n || guess.cols() != n {
        return Err(Error::ShapeMismatch {
            expected: format!("{n}x{n} guess"),
            actual: format!("{}x{}", guess.rows(), guess.cols()),
        });
    }
    let mut basis = guess.clone();
    orthonormalize_columns(&mut basis);
    let rotated = basis.adjoint().matmul(&sym).matmul(&basis);
    let mut a = rotated.hermitian_part().into_vec();
    jacobi_in_place(&mut a, n, Some(basis.as_mut_slice()))?;
    let diag = (0..n).map(|i| a[i * n + i].re).collect();
    Ok(sorted_eigen(diag, basis))
}

/// Eigenvalues only, ascending.
pub fn herm_eigvals(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let sym = check_hermitian_input(m)?;
    let n = sym.rows();
    let mut a = sym.into_vec();
    jacobi_in_place(&mut a, n, None)?;
    let mut diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    diag.sort_by(f64::total_cmp);
    Ok(diag)
}

pub fn min_eig(m: &ComplexMatrix) -> Result<f64> {
    let vals = herm_eigvals(m)?;
    Ok(vals.first().copied().unwrap_or(f64::NAN))
}

/// Modified Gram-Schmidt, applied twice, on the columns of a square matrix.
/// Columns that collapse numerically are replaced from the standard basis.
fn orthonormalize_columns(m: &mut ComplexMatrix) {
    let n = m.rows();
    let mut cols: Vec<Vec<C64>> = (0..m.cols()).map(|j| m.column(j)).collect();
    let mut done: Vec<Vec<C64>> = Vec::with_capacity(cols.len());
    for c in cols.iter_mut() {
        if let Some(v) = orthonormal_against(c.clone(), &done) {
            done.push(v);
        } else {
            let fill = (0..n)
                .find_map(|k| {
                    let mut e = vec![ZERO; n];
                    e[k] = ONE;
                    orthonormal_against(e, &done)
                })
                .expect("standard basis spans the space");
            done.push(fill);
        }
    }
    *m = ComplexMatrix::from_columns(&done).expect("uniform columns");
}

fn orthonormal_against(mut v: Vec<C64>, basis: &[Vec<C64>]) -> Option<Vec<C64>> {
    let start = norm(&v);
    if start == 0.0 {
        return None;
    }
    for _ in 0..2 {
        for b in basis {
            let c = dot(b, &v);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
    let nv = norm(&v);
    if nv <= 1e-10 * start {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= nv);
    Some(v)
}

#[derive(Clone, Debug)]
pub struct Svd {
    /// `rows x rows`, unitary.
    pub u: ComplexMatrix,
    /// `min(rows, cols)` values, descending, nonnegative.
    pub singular_values: Vec<f64>,
    /// `cols x cols`, unitary.
    pub w: ComplexMatrix,
}

impl Svd {
    /// `U diag(s) W†`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (m, n) = (self.u.rows(), self.w.rows());
        let mut out = ComplexMatrix::zeros(m, n);
        for (k, &s) in self.singular_values.iter().enumerate() {
            if s == 0.0 {
                continue;
            }
            for i in 0..m {
                let a = self.u[(i, k)] * s;
                for j in 0..n {
                    out[(i, j)] += a * self.w[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Full singular value decomposition `M = U diag(s) W†`, by one-sided
/// (Hestenes) Jacobi rotations on the columns of `M`. Singular values are
/// accurate to a few ulps of `‖M‖`, including the zero ones.
pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<C64>> = (0..cols).map(|j| m.column(j)).collect();
    let mut w: Vec<Vec<C64>> = (0..cols)
        .map(|j| {
            let mut e = vec![ZERO; cols];
            e[j] = ONE;
            e
        })
        .collect();

    let rel_tol = (rows.max(1) as f64) * f64::EPSILON;
    // Columns below this squared norm are numerically zero.
    let floor = (f64::EPSILON * m.frobenius_norm()).powi(2);
    let mut converged = cols < 2;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = a[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = a[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = dot(&a[p], &a[q]);
                let g = gamma.norm();
                if alpha <= floor || beta <= floor || g <= rel_tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotate column q's phase so the coupling is real, then
                // apply the real Jacobi rotation.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for cols_vec in [&mut a, &mut w] {
                    let (lo, hi) = cols_vec.split_at_mut(q);
                    let (x, y) = (&mut lo[p], &mut hi[0]);
                    for (xp, yq) in x.iter_mut().zip(y.iter_mut()) {
                        let yt = *yq * phase.conj();
                        let nx = *xp * c - yt * s;
                        let ny = *xp * s + yt * c;
                        *xp = nx;
                        *yq = ny;
                    }
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
        });
    }

    let norms: Vec<f64> = a.iter().map(|v| norm(v)).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let smax = order.first().map(|&i| norms[i]).unwrap_or(0.0);
    let cutoff = SVD_REL_CUTOFF * smax;

    let k = rows.min(cols);
    let singular_values: Vec<f64> = order.iter().take(k).map(|&i| norms[i]).collect();
    let mut ucols: Vec<Vec<C64>> = Vec::with_capacity(rows);
    for &i in order.iter().take(k) {
        if norms[i] <= cutoff || norms[i] == 0.0 {
            break;
        }
        let v: Vec<C64> = a[i].iter().map(|z| z / norms[i]).collect();
        // Re-orthogonalize against earlier columns to keep U unitary.
        match orthonormal_against(v, &ucols) {
            Some(u) => ucols.push(u),
            None => break,
        }
    }
    // Complete U from the standard basis.
    let mut e = 0;
    while ucols.len() < rows {
        let mut v = vec![ZERO; rows];
        v[e] = ONE;
        if let Some(u) = orthonormal_against(v, &ucols) {
            ucols.push(u);
        }
        e += 1;
    }
    let u = ComplexMatrix::from_columns(&ucols)?;
    let wcols: Vec<Vec<C64>> = order.iter().map(|&i| w[i].clone()).collect();
    let w = ComplexMatrix::from_columns(&wcols)?;
    Ok(Svd {
        u,
        singular_values,
        w,
    })
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(svd(m)?.singular_values.iter().sum())
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ComplexMatrix::from_fn(rows, cols, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        })
    }

    pub fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        random_matrix(n, n, seed).hermitian_part()
    }
}
