//! Bipartite-state machinery on `C^d ⊗ C^d`.
//!
//! Product basis index convention: `|i>|j>` has index `i*d + j`.

use crate::error::{Error, Result};
use crate::linalg::{self, dot, kron_vec, norm, ComplexMatrix, C64, ONE, ZERO};

/// Hermiticity and trace tolerance for states.
pub const STATE_TOL: f64 = 1e-10;
/// Most negative eigenvalue a density matrix may have.
pub const PSD_TOL: f64 = 1e-9;
/// Pure-state norm tolerance.
pub const NORM_TOL: f64 = 1e-10;
/// Default threshold on Schmidt weights (squared coefficients).
pub const DEFAULT_SCHMIDT_TOL: f64 = 1e-8;
/// Below this `Tr(P_A ρ)` a state is considered to have no antisymmetric part.
pub const MIN_ANTISYM_PROB: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BipartiteDim {
    d: usize,
}

impl BipartiteDim {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        Ok(Self { d })
    }

    /// Local dimension.
    pub fn d(self) -> usize {
        self.d
    }

    /// `d(d+1)/2`
    pub fn sym_dim(self) -> usize {
        self.d * (self.d + 1) / 2
    }

    /// `d(d-1)/2`
    pub fn antisym_dim(self) -> usize {
        self.d * (self.d - 1) / 2
    }

    /// `d²`
    pub fn total(self) -> usize {
        self.d * self.d
    }

    /// Recovers the local dimension from a total dimension `d²`.
    pub fn from_total(n: usize) -> Result<Self> {
        let d = (n as f64).sqrt().round() as usize;
        if d * d != n {
            return Err(Error::ShapeMismatch {
                expected: "a square total dimension d²".into(),
                actual: n.to_string(),
            });
        }
        Self::new(d)
    }
}

/// A normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Accepts amplitudes whose norm is 1 within [`NORM_TOL`].
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = norm(&amplitudes);
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "vector norm {n} deviates from 1"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes the given vector.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let n = norm(&amplitudes);
        if !n.is_finite() {
            return Err(Error::NonFinite);
        }
        if n < 1e-300 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|z| *z /= n);
        Ok(Self { amplitudes })
    }

    pub fn basis(n: usize, k: usize) -> Self {
        let mut a = vec![ZERO; n];
        a[k] = ONE;
        Self { amplitudes: a }
    }

    /// `|α>|β>`
    pub fn product(alpha: &PureState, beta: &PureState) -> Self {
        Self {
            amplitudes: kron_vec(&alpha.amplitudes, &beta.amplitudes),
        }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &PureState) -> C64 {
        dot(&self.amplitudes, &other.amplitudes)
    }

    /// `|ψ><ψ|`
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }
}

/// A Hermitian, positive semidefinite, unit-trace operator on `C^d ⊗ C^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dim: BipartiteDim,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity, then stores the
    /// Hermitian part of `matrix`.
    pub fn new(dim: BipartiteDim, matrix: ComplexMatrix) -> Result<Self> {
        let n = dim.total();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::ShapeMismatch {
                expected: format!("{n}x{n}"),
                actual: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        let dev = matrix.hermitian_deviation();
        if dev > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {dev:.3e})"
            )));
        }
        let matrix = matrix.hermitian_part();
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} deviates from 1")));
        }
        let lam = linalg::min_eig(&matrix)?;
        if lam < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (min eigenvalue {lam:.3e})"
            )));
        }
        Ok(Self { dim, matrix })
    }

    /// Skips validation; used where the construction guarantees validity.
    pub(crate) fn from_parts_unchecked(dim: BipartiteDim, matrix: ComplexMatrix) -> Self {
        Self { dim, matrix }
    }

    pub fn from_pure(dim: BipartiteDim, psi: &PureState) -> Result<Self> {
        check_len(psi, dim.total())?;
        Ok(Self {
            dim,
            matrix: psi.projector(),
        })
    }

    pub fn dim(&self) -> BipartiteDim {
        self.dim
    }

    pub fn local_dim(&self) -> usize {
        self.dim.d()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `Tr(P_A ρ) = (1 - Tr(Vρ))/2`
    pub fn antisym_weight(&self) -> f64 {
        let d = self.dim.d();
        let mut tr_v = 0.0;
        for i in 0..d {
            for j in 0..d {
                tr_v += self.matrix[(i * d + j, j * d + i)].re;
            }
        }
        0.5 * (self.matrix.trace().re - tr_v)
    }

    /// `ρ^Γ` on the chosen side.
    pub fn partial_transpose(&self, side: Side) -> ComplexMatrix {
        partial_transpose(&self.matrix, self.dim.d(), side).expect("shape checked on construction")
    }
}

pub(crate) fn check_len(psi: &PureState, n: usize) -> Result<()> {
    if psi.len() != n {
        return Err(Error::ShapeMismatch {
            expected: format!("vector of length {n}"),
            actual: psi.len().to_string(),
        });
    }
    Ok(())
}

fn check_square(m: &ComplexMatrix, n: usize) -> Result<()> {
    if m.rows() != n || m.cols() != n {
        return Err(Error::ShapeMismatch {
            expected: format!("{n}x{n}"),
            actual: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Side {
    #[default]
    A,
    B,
}

/// Swap operator `V|i>|j> = |j>|i>` on `C^d ⊗ C^d`.
pub fn swap_operator(d: usize) -> Result<ComplexMatrix> {
    let dim = BipartiteDim::new(d)?;
    let mut v = ComplexMatrix::zeros(dim.total(), dim.total());
    for i in 0..d {
        for j in 0..d {
            v[(j * d + i, i * d + j)] = ONE;
        }
    }
    Ok(v)
}

/// `V M V`, computed by permuting indices.
pub fn conjugate_by_swap(m: &ComplexMatrix, d: usize) -> ComplexMatrix {
    let swap = |r: usize| (r % d) * d + r / d;
    ComplexMatrix::from_fn(m.rows(), m.cols(), |r, c| m[(swap(r), swap(c))])
}

#[derive(Clone, Debug)]
pub struct SubspaceProjectors {
    pub dim: BipartiteDim,
    /// `V`
    pub swap: ComplexMatrix,
    /// `P_S = (I + V)/2`
    pub sym: ComplexMatrix,
    /// `P_A = (I - V)/2`
    pub antisym: ComplexMatrix,
}

pub fn projectors(d: usize) -> Result<SubspaceProjectors> {
    let dim = BipartiteDim::new(d)?;
    let swap = swap_operator(d)?;
    let id = ComplexMatrix::identity(dim.total());
    let sym = (&id + &swap).scale(0.5);
    let antisym = (&id - &swap).scale(0.5);
    Ok(SubspaceProjectors {
        dim,
        swap,
        sym,
        antisym,
    })
}

/// Transposes the chosen tensor factor in the computational basis.
///
/// Side A maps entry `((i,j),(k,l))` to `((k,j),(i,l))`; side B maps it to
/// `((i,l),(k,j))`.
pub fn partial_transpose(m: &ComplexMatrix, d: usize, side: Side) -> Result<ComplexMatrix> {
    BipartiteDim::new(d)?;
    check_square(m, d * d)?;
    Ok(ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        let (i, j) = (r / d, r % d);
        let (k, l) = (c / d, c % d);
        match side {
            Side::A => m[(k * d + j, i * d + l)],
            Side::B => m[(i * d + l, k * d + j)],
        }
    }))
}

/// `|ψ+> = Σ_i |i>|i> / √d`
pub fn max_entangled(d: usize) -> Result<PureState> {
    let dim = BipartiteDim::new(d)?;
    let mut a = vec![ZERO; dim.total()];
    let c = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        a[i * d + i] = C64::new(c, 0.0);
    }
    Ok(PureState { amplitudes: a })
}

/// `|ψ-_{k,l}> = (|k>|l> - |l>|k>)/√2`, zero-based labels, `k != l`.
pub fn singlet_pair(d: usize, k: usize, l: usize) -> Result<PureState> {
    BipartiteDim::new(d)?;
    if k == l || k >= d || l >= d {
        return Err(Error::InvalidParameter(format!(
            "singlet pair ({k},{l}) invalid for d = {d}"
        )));
    }
    let mut a = vec![ZERO; d * d];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    a[k * d + l] = C64::new(s, 0.0);
    a[l * d + k] = C64::new(-s, 0.0);
    Ok(PureState { amplitudes: a })
}

/// Orthonormal basis of the antisymmetric subspace: `|ψ-_{k,l}>`, `k < l`.
pub fn antisym_basis(d: usize) -> Result<Vec<PureState>> {
    let mut out = Vec::with_capacity(d * d.saturating_sub(1) / 2);
    for k in 0..d {
        for l in (k + 1)..d {
            out.push(singlet_pair(d, k, l)?);
        }
    }
    Ok(out)
}

/// Orthonormal basis of the symmetric subspace: `|kk>` then
/// `(|kl> + |lk>)/√2` for `k < l`.
pub fn sym_basis(d: usize) -> Result<Vec<PureState>> {
    BipartiteDim::new(d)?;
    let mut out = Vec::with_capacity(d * (d + 1) / 2);
    for k in 0..d {
        out.push(PureState::basis(d * d, k * d + k));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for k in 0..d {
        for l in (k + 1)..d {
            let mut a = vec![ZERO; d * d];
            a[k * d + l] = C64::new(s, 0.0);
            a[l * d + k] = C64::new(s, 0.0);
            out.push(PureState { amplitudes: a });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    /// Schmidt weights `p_i` (squared coefficients), descending, nonzero.
    pub weights: Vec<f64>,
    pub basis_a: Vec<Vec<C64>>,
    pub basis_b: Vec<Vec<C64>>,
}

impl SchmidtDecomposition {
    /// `Σ_i √p_i |a_i>|b_i>`
    pub fn reconstruct(&self) -> Vec<C64> {
        let n = self.basis_a.first().map_or(0, Vec::len);
        let mut out = vec![ZERO; n * n];
        for ((p, a), b) in self.weights.iter().zip(&self.basis_a).zip(&self.basis_b) {
            let s = p.sqrt();
            for (o, x) in out.iter_mut().zip(kron_vec(a, b)) {
                *o += x * s;
            }
        }
        out
    }
}

/// Schmidt decomposition of a pure state on `C^d ⊗ C^d`.
pub fn schmidt_decompose(psi: &PureState, d: usize) -> Result<SchmidtDecomposition> {
    BipartiteDim::new(d)?;
    check_len(psi, d * d)?;
    let n = norm(psi.amplitudes());
    if (n - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidState(format!("vector norm {n} deviates from 1")));
    }
    let coeffs = ComplexMatrix::from_vec(d, d, psi.amplitudes().to_vec())?;
    let svd = linalg::svd(&coeffs)?;
    let mut out = SchmidtDecomposition {
        weights: Vec::new(),
        basis_a: Vec::new(),
        basis_b: Vec::new(),
    };
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s == 0.0 {
            continue;
        }
        out.weights.push(s * s);
        out.basis_a.push(svd.u.column(k));
        out.basis_b.push(svd.w.column(k).iter().map(|z| z.conj()).collect());
    }
    Ok(out)
}

/// Number of Schmidt weights above `tol`.
pub fn schmidt_rank(psi: &PureState, d: usize, tol: f64) -> Result<usize> {
    Ok(schmidt_decompose(psi, d)?
        .weights
        .iter()
        .filter(|&&p| p > tol)
        .count())
}

/// `(σ + VσV)/2`, which equals `P_A σ P_A + P_S σ P_S`.
pub fn v_twirl(sigma: &DensityMatrix) -> DensityMatrix {
    let d = sigma.local_dim();
    let swapped = conjugate_by_swap(sigma.matrix(), d);
    let m = (sigma.matrix() + &swapped).scale(0.5);
    DensityMatrix::from_parts_unchecked(sigma.dim(), m)
}

/// `P_A X P_A` without forming the projector products densely.
pub fn compress_antisym(m: &ComplexMatrix, d: usize) -> ComplexMatrix {
    let swapped_rows = ComplexMatrix::from_fn(m.rows(), m.cols(), |r, c| {
        m[(r, c)] - m[((r % d) * d + r / d, c)]
    });
    ComplexMatrix::from_fn(m.rows(), m.cols(), |r, c| {
        0.25 * (swapped_rows[(r, c)] - swapped_rows[(r, (c % d) * d + c / d)])
    })
}

/// `P_S X P_S`
pub fn compress_sym(m: &ComplexMatrix, d: usize) -> ComplexMatrix {
    let swapped_rows = ComplexMatrix::from_fn(m.rows(), m.cols(), |r, c| {
        m[(r, c)] + m[((r % d) * d + r / d, c)]
    });
    ComplexMatrix::from_fn(m.rows(), m.cols(), |r, c| {
        0.25 * (swapped_rows[(r, c)] + swapped_rows[(r, (c % d) * d + c / d)])
    })
}

/// `(P_A ρ P_A / Tr(P_A ρ), Tr(P_A ρ))`
pub fn project_antisym(rho: &DensityMatrix) -> Result<(DensityMatrix, f64)> {
    let prob = rho.antisym_weight();
    if prob < MIN_ANTISYM_PROB {
        return Err(Error::NoAntisymmetricComponent(prob));
    }
    let block = compress_antisym(rho.matrix(), rho.local_dim()).scale(1.0 / prob);
    Ok((
        DensityMatrix::from_parts_unchecked(rho.dim(), block.hermitian_part()),
        prob,
    ))
}

/// Replaces `β` by the normalized component of `β` orthogonal to `α`.
///
/// `P_A|α>|β'>` then has norm exactly `1/√2` and spans the same ray as
/// `P_A|α>|β>`.
pub fn canonicalize_product(alpha: &PureState, beta: &PureState) -> Result<(PureState, PureState)> {
    if alpha.len() != beta.len() {
        return Err(Error::ShapeMismatch {
            expected: format!("factors of equal length {}", alpha.len()),
            actual: beta.len().to_string(),
        });
    }
    let overlap = alpha.inner(beta);
    let abs = overlap.norm();
    if abs >= 1.0 - 1e-10 {
        return Err(Error::ParallelFactors(abs));
    }
    let perp: Vec<C64> = beta
        .amplitudes()
        .iter()
        .zip(alpha.amplitudes())
        .map(|(b, a)| b - overlap * a)
        .collect();
    Ok((alpha.clone(), PureState::normalized(perp)?))
}

/// `P_A (|α>|β>)` as a raw (unnormalized) vector.
pub fn antisymmetrize_product(alpha: &PureState, beta: &PureState) -> Vec<C64> {
    let ab = kron_vec(alpha.amplitudes(), beta.amplitudes());
    let ba = kron_vec(beta.amplitudes(), alpha.amplitudes());
    ab.iter().zip(&ba).map(|(x, y)| (x - y) * 0.5).collect()
}

/// Max-entry distance between the rank-1 projectors of two vectors,
/// after normalizing each. Zero iff the vectors span the same ray.
pub fn ray_distance(u: &[C64], v: &[C64]) -> f64 {
    let nu = norm(u);
    let nv = norm(v);
    let pu = ComplexMatrix::outer(u, u).scale(1.0 / (nu * nu));
    let pv = ComplexMatrix::outer(v, v).scale(1.0 / (nv * nv));
    pu.max_abs_diff(&pv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{random_density, random_pure, rng_from_seed};
    use crate::linalg::{herm_eigvals, min_eig};

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn dims() {
        let dim = BipartiteDim::new(4).unwrap();
        assert_eq!((dim.sym_dim(), dim.antisym_dim(), dim.total()), (10, 6, 16));
        assert_eq!(BipartiteDim::new(1).unwrap_err(), Error::InvalidDimension(1));
        assert_eq!(BipartiteDim::from_total(9).unwrap().d(), 3);
        assert!(BipartiteDim::from_total(8).is_err());
    }

    #[test]
    fn swap_acts_on_products() {
        let v = swap_operator(2).unwrap();
        let ket01 = PureState::basis(4, 1);
        assert_eq!(v.mul_vec(ket01.amplitudes()), PureState::basis(4, 2).amplitudes());
        assert!(v.matmul(&v).max_abs_diff(&ComplexMatrix::identity(4)) == 0.0);
        assert_eq!(swap_operator(3).unwrap().trace(), c(3.0));
        assert!(swap_operator(1).is_err());
    }

    #[test]
    fn swap_entries_follow_index_rule() {
        let d = 3;
        let v = swap_operator(d).unwrap();
        for (r, cidx) in (0..81).map(|x| (x / 9, x % 9)) {
            let (i, j, k, l) = (r / d, r % d, cidx / d, cidx % d);
            let expected = if i == l && j == k { 1.0 } else { 0.0 };
            assert_eq!(v[(r, cidx)], c(expected));
        }
    }

    #[test]
    fn projector_traces_and_identities() {
        for d in 2..=6 {
            let p = projectors(d).unwrap();
            let n = d * d;
            assert_eq!(p.antisym.trace().re, p.dim.antisym_dim() as f64);
            assert_eq!(p.sym.trace().re, p.dim.sym_dim() as f64);
            assert!(p.sym.matmul(&p.antisym).max_abs() < 1e-12);
            assert!((&p.sym + &p.antisym).max_abs_diff(&ComplexMatrix::identity(n)) < 1e-12);
        }
        let p = projectors(2).unwrap();
        assert_eq!((p.antisym.trace().re, p.sym.trace().re), (1.0, 3.0));
    }

    #[test]
    fn antisym_kills_identical_factors() {
        let mut rng = rng_from_seed(3);
        let a = random_pure(3, &mut rng);
        let v = antisymmetrize_product(&a, &a);
        assert!(norm(&v) < 1e-15);
        let p = projectors(3).unwrap();
        let ab = PureState::product(&a, &a);
        assert!(norm(&p.antisym.mul_vec(ab.amplitudes())) < 1e-15);
    }

    #[test]
    fn antisym_overlap_orthonormal_pair() {
        let p = projectors(3).unwrap();
        let ab = PureState::product(&PureState::basis(3, 0), &PureState::basis(3, 2));
        assert!((p.antisym.expectation(ab.amplitudes()) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn antisym_overlap_formula() {
        // <αβ|P_A|αβ> = (1 - |<α|β>|²)/2 for random pairs.
        let mut rng = rng_from_seed(11);
        let p = projectors(4).unwrap();
        for _ in 0..50 {
            let a = random_pure(4, &mut rng);
            let b = random_pure(4, &mut rng);
            let ab = PureState::product(&a, &b);
            let lhs = p.antisym.expectation(ab.amplitudes());
            let rhs = 0.5 * (1.0 - a.inner(&b).norm_sqr());
            assert!((lhs - rhs).abs() < 1e-14);
            assert!(lhs <= 0.5 + 1e-15);
        }
    }

    #[test]
    fn pt_of_max_entangled_is_swap_over_d() {
        let d = 3;
        let phi = max_entangled(d).unwrap().projector();
        let pt = partial_transpose(&phi, d, Side::A).unwrap();
        let v = swap_operator(d).unwrap().scale(1.0 / d as f64);
        assert!(pt.max_abs_diff(&v) < 1e-15);
        // Trace consistency: Tr(ρ^Γ) = 1 = Tr(V)/d.
        assert!((pt.trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pt_of_product_state() {
        let a = random_density(2, 2, 1).unwrap();
        let b = random_density(2, 3, 2).unwrap();
        // Use 4x4 single-party blocks to build a 16x16 product on d = 4.
        let prod = a.matrix().kron(b.matrix());
        let pt = partial_transpose(&prod, 4, Side::A).unwrap();
        let expected = a.matrix().transpose().kron(b.matrix());
        assert!(pt.max_abs_diff(&expected) < 1e-15);
        assert!(min_eig(&pt).unwrap() >= -1e-12);
    }

    #[test]
    fn singlet_pt_spectrum() {
        let s = singlet_pair(2, 0, 1).unwrap().projector();
        let pt = partial_transpose(&s, 2, Side::A).unwrap();
        let vals = herm_eigvals(&pt).unwrap();
        // Oracle: nalgebra diagonalization of the same 4x4 matrix.
        let na = nalgebra::DMatrix::from_fn(4, 4, |i, j| nalgebra::Complex::new(pt[(i, j)].re, pt[(i, j)].im));
        let mut oracle: Vec<f64> = na.symmetric_eigenvalues().iter().copied().collect();
        oracle.sort_by(f64::total_cmp);
        for (x, y) in vals.iter().zip(&oracle) {
            assert!((x - y).abs() < 1e-12);
        }
        let expected = [-0.5, 0.5, 0.5, 0.5];
        for (x, y) in vals.iter().zip(expected) {
            assert!((x - y).abs() < 1e-14);
        }
        assert!((min_eig(&pt).unwrap() + 0.5).abs() < 1e-14);
    }

    #[test]
    fn pt_shape_mismatch() {
        assert!(partial_transpose(&ComplexMatrix::identity(5), 2, Side::A).is_err());
    }

    #[test]
    fn max_entangled_basics() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [c(s), c(0.0), c(0.0), c(s)];
        for (a, b) in max_entangled(2).unwrap().amplitudes().iter().zip(expected) {
            assert!((a - b).norm() < 1e-15);
        }
        let psi = max_entangled(4).unwrap();
        assert_eq!(schmidt_rank(&psi, 4, DEFAULT_SCHMIDT_TOL).unwrap(), 4);
        let v = swap_operator(4).unwrap();
        assert!((v.expectation(psi.amplitudes()) - 1.0).abs() < 1e-15);
        assert!(max_entangled(1).is_err());
    }

    #[test]
    fn schmidt_examples() {
        let prod = PureState::basis(4, 1);
        let dec = schmidt_decompose(&prod, 2).unwrap();
        assert_eq!(dec.weights.len(), 1);
        assert!((dec.weights[0] - 1.0).abs() < 1e-15);

        let singlet = singlet_pair(3, 0, 1).unwrap();
        let dec = schmidt_decompose(&singlet, 3).unwrap();
        assert_eq!(dec.weights.len(), 2);
        for w in &dec.weights {
            assert!((w - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn schmidt_reconstructs_random_states() {
        let mut rng = rng_from_seed(8);
        for d in 2..=5 {
            let psi = random_pure(d * d, &mut rng);
            let dec = schmidt_decompose(&psi, d).unwrap();
            let back = dec.reconstruct();
            let err = back
                .iter()
                .zip(psi.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-10);
            assert!((dec.weights.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            assert!(dec.weights.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn schmidt_rejects_unnormalized() {
        let psi = PureState { amplitudes: vec![c(1.0), c(1.0), c(0.0), c(0.0)] };
        assert!(schmidt_decompose(&psi, 2).is_err());
    }

    #[test]
    fn antisymmetrized_product_has_rank_two() {
        let mut rng = rng_from_seed(21);
        for d in 2..=6 {
            for _ in 0..20 {
                let a = random_pure(d, &mut rng);
                let b = random_pure(d, &mut rng);
                let v = PureState::normalized(antisymmetrize_product(&a, &b)).unwrap();
                assert_eq!(schmidt_rank(&v, d, DEFAULT_SCHMIDT_TOL).unwrap(), 2);
            }
        }
    }

    #[test]
    fn twirl_examples() {
        let w = crate::constructions::werner(3, 0.4).unwrap();
        assert!(v_twirl(&w).matrix().max_abs_diff(w.matrix()) < 1e-15);

        let dim = BipartiteDim::new(2).unwrap();
        let rho = DensityMatrix::from_pure(dim, &PureState::basis(4, 1)).unwrap();
        let tw = v_twirl(&rho);
        let expected = (&PureState::basis(4, 1).projector() + &PureState::basis(4, 2).projector()).scale(0.5);
        assert!(tw.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn twirl_preserves_antisym_block_and_ppt() {
        for seed in 0..10 {
            let sigma = random_density(3, 9, seed).unwrap();
            let tw = v_twirl(&sigma);
            let a1 = compress_antisym(tw.matrix(), 3);
            let a2 = compress_antisym(sigma.matrix(), 3);
            assert!(a1.max_abs_diff(&a2) < 1e-12);
            let split = &compress_antisym(sigma.matrix(), 3) + &compress_sym(sigma.matrix(), 3);
            assert!(split.max_abs_diff(tw.matrix()) < 1e-12);
        }
        // A PPT input stays PPT.
        let sep = crate::constructions::random_separable(3, 6, 2).unwrap().density();
        let tw = v_twirl(&sep);
        assert!(min_eig(&tw.partial_transpose(Side::A)).unwrap() >= -1e-12);
    }

    #[test]
    fn project_antisym_examples() {
        let w = crate::constructions::werner(3, 0.3).unwrap();
        let (ra, p) = project_antisym(&w).unwrap();
        assert!((p - 0.3).abs() < 1e-14);
        let pa = projectors(3).unwrap().antisym.scale(1.0 / 3.0);
        assert!(ra.matrix().max_abs_diff(&pa) < 1e-14);

        let dim = BipartiteDim::new(3).unwrap();
        let ab = PureState::product(&PureState::basis(3, 0), &PureState::basis(3, 1));
        let (_, p) = project_antisym(&DensityMatrix::from_pure(dim, &ab).unwrap()).unwrap();
        assert!((p - 0.5).abs() < 1e-15);

        let aa = PureState::product(&PureState::basis(3, 2), &PureState::basis(3, 2));
        assert!(matches!(
            project_antisym(&DensityMatrix::from_pure(dim, &aa).unwrap()),
            Err(Error::NoAntisymmetricComponent(_))
        ));
    }

    #[test]
    fn canonicalize_examples() {
        let a = PureState::basis(3, 0);
        let b = PureState::new(vec![c(0.0), C64::new(0.0, 1.0), c(0.0)]).unwrap();
        let (a2, b2) = canonicalize_product(&a, &b).unwrap();
        assert_eq!(a2, a);
        assert!(ray_distance(b2.amplitudes(), b.amplitudes()) < 1e-15);

        // <α|β> = cos θ.
        let theta: f64 = 0.7;
        let b = PureState::new(vec![c(theta.cos()), c(theta.sin()), c(0.0)]).unwrap();
        let raw = antisymmetrize_product(&a, &b);
        assert!((norm(&raw).powi(2) - theta.sin().powi(2) / 2.0).abs() < 1e-15);
        let (a2, b2) = canonicalize_product(&a, &b).unwrap();
        let canon = antisymmetrize_product(&a2, &b2);
        assert!((norm(&canon).powi(2) - 0.5).abs() < 1e-14);
        assert!(ray_distance(&canon, &raw) < 1e-10);

        assert!(matches!(canonicalize_product(&a, &a), Err(Error::ParallelFactors(_))));
    }

    #[test]
    fn canonicalize_random_pairs() {
        let mut rng = rng_from_seed(4);
        for d in 2..=5 {
            for _ in 0..20 {
                let a = random_pure(d, &mut rng);
                let b = random_pure(d, &mut rng);
                let (a2, b2) = canonicalize_product(&a, &b).unwrap();
                let canon = antisymmetrize_product(&a2, &b2);
                assert!((norm(&canon) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
                let raw = antisymmetrize_product(&a, &b);
                let scaled: Vec<C64> = canon.iter().map(|z| z * 2f64.sqrt()).collect();
                let unit_raw: Vec<C64> = raw.iter().map(|z| z / norm(&raw)).collect();
                assert!(ray_distance(&scaled, &unit_raw) < 1e-10);
            }
        }
    }

    #[test]
    fn density_validation() {
        let dim = BipartiteDim::new(2).unwrap();
        assert!(DensityMatrix::new(dim, ComplexMatrix::identity(4)).is_err());
        assert!(DensityMatrix::new(dim, ComplexMatrix::identity(4).scale(0.25)).is_ok());
        let mut m = ComplexMatrix::from_real_diagonal(&[0.5, 0.5, 0.5, -0.5]);
        assert!(DensityMatrix::new(dim, m.clone()).is_err());
        m[(0, 1)] = c(0.1);
        assert!(DensityMatrix::new(dim, m).is_err());
        assert!(DensityMatrix::new(dim, ComplexMatrix::identity(3)).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn pt_spectrum_independent_of_side(d in 2usize..5, rank in 1usize..5, seed in any::<u64>()) {
                let rho = random_density(d, rank.min(d * d), seed).unwrap();
                let a = herm_eigvals(&rho.partial_transpose(Side::A)).unwrap();
                let b = herm_eigvals(&rho.partial_transpose(Side::B)).unwrap();
                for (x, y) in a.iter().zip(&b) {
                    prop_assert!((x - y).abs() < 1e-9);
                }
            }

            #[test]
            fn pt_involution_trace_hermiticity(d in 2usize..5, seed in any::<u64>()) {
                let rho = random_density(d, d, seed).unwrap();
                let pt = rho.partial_transpose(Side::A);
                let back = partial_transpose(&pt, d, Side::A).unwrap();
                prop_assert!(back.max_abs_diff(rho.matrix()) < 1e-12);
                prop_assert!((pt.trace().re - 1.0).abs() < 1e-12);
                prop_assert!(pt.hermitian_deviation() < 1e-12);
            }

            #[test]
            fn pt_min_eig_above_minus_half(d in 2usize..5, rank in 1usize..4, seed in any::<u64>()) {
                let rho = random_density(d, rank, seed).unwrap();
                prop_assert!(min_eig(&rho.partial_transpose(Side::A)).unwrap() >= -0.5 - 1e-9);
            }
        }
    }
}
