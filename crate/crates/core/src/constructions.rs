//! Named state families and seeded random generators.
//!
//! All randomness flows through an explicit `u64` seed fed to ChaCha8, so a
//! given `(generator, parameters, seed)` always produces the same state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64, ZERO};
use crate::quantum::{
    self, compress_antisym, compress_sym, BipartiteDim, DensityMatrix, PureState,
};

/// Tolerance on mixing-weight constraints.
pub const WEIGHT_TOL: f64 = 1e-12;
/// Tolerance for "supported on the antisymmetric subspace".
pub const ANTISYM_TOL: f64 = 1e-10;
/// How many fresh draws `random_antisym_state` makes before giving up.
pub const ANTISYM_RETRIES: usize = 16;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Normalized complex-Gaussian vector of length `n`.
pub fn random_pure(n: usize, rng: &mut impl Rng) -> PureState {
    loop {
        let v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
        if let Ok(psi) = PureState::normalized(v) {
            return psi;
        }
    }
}

fn check_weight(name: &str, p: f64) -> Result<()> {
    if !(-WEIGHT_TOL..=1.0 + WEIGHT_TOL).contains(&p) || !p.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "{name} = {p} must lie in [0, 1]"
        )));
    }
    Ok(())
}

/// Max-entry deviation of `P_A ρ P_A` from `ρ`.
pub fn antisym_deviation(rho: &ComplexMatrix, d: usize) -> f64 {
    compress_antisym(rho, d).max_abs_diff(rho)
}

/// Max-entry deviation of `Vψ` from `-ψ`.
pub fn antisym_vector_deviation(psi: &PureState, d: usize) -> f64 {
    let a = psi.amplitudes();
    (0..a.len())
        .map(|r| (a[(r % d) * d + r / d] + a[r]).norm())
        .fold(0.0, f64::max)
}

fn require_antisym(rho: &DensityMatrix) -> Result<()> {
    let dev = antisym_deviation(rho.matrix(), rho.local_dim());
    if dev > ANTISYM_TOL {
        return Err(Error::NotAntisymmetric(dev));
    }
    Ok(())
}

/// `P_A/d_A` and `P_S/d_S`
fn normalized_projectors(dim: BipartiteDim) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let proj = quantum::projectors(dim.d())?;
    Ok((
        proj.antisym.scale(1.0 / dim.antisym_dim() as f64),
        proj.sym.scale(1.0 / dim.sym_dim() as f64),
    ))
}

/// Werner state `p P_A/d_A + (1-p) P_S/d_S`.
pub fn werner(d: usize, p: f64) -> Result<DensityMatrix> {
    let dim = BipartiteDim::new(d)?;
    check_weight("p", p)?;
    let (a, s) = normalized_projectors(dim)?;
    let mut m = a.scale(p);
    m.add_scaled(1.0 - p, &s);
    Ok(DensityMatrix::from_parts_unchecked(dim, m))
}

/// `Σ_i c_i |ψ-_{2i-1,2i}>` for `d = 2m`, with 1-based pair labels
/// `(2i-1, 2i)` mapped to zero-based `(2i-2, 2i-1)`.
pub fn multilevel_singlet(c: &[C64], d: usize) -> Result<PureState> {
    BipartiteDim::new(d)?;
    if !d.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "multilevel singlet needs even d, got {d}"
        )));
    }
    let m = d / 2;
    if c.len() != m {
        return Err(Error::InvalidParameter(format!(
            "expected {m} amplitudes for d = {d}, got {}",
            c.len()
        )));
    }
    let n2: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    if (n2 - 1.0).abs() > quantum::NORM_TOL {
        return Err(Error::InvalidParameter(format!(
            "amplitudes must satisfy Σ|c_i|² = 1, got {n2}"
        )));
    }
    let mut amps = vec![ZERO; d * d];
    for (i, ci) in c.iter().enumerate() {
        let pair = quantum::singlet_pair(d, 2 * i, 2 * i + 1)?;
        for (a, x) in amps.iter_mut().zip(pair.amplitudes()) {
            *a += ci * x;
        }
    }
    PureState::new(amps)
}

/// `σ(p) = p ρ_A + (1-p) P_S/d_S` for an antisymmetric `ρ_A`.
pub fn sigma_p(rho_a: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    require_antisym(rho_a)?;
    check_weight("p", p)?;
    let dim = rho_a.dim();
    let (_, s) = normalized_projectors(dim)?;
    let mut m = rho_a.matrix().scale(p);
    m.add_scaled(1.0 - p, &s);
    Ok(DensityMatrix::from_parts_unchecked(dim, m))
}

/// `(1-p_A-p_S)|ψ_A><ψ_A| + p_A P_A/d_A + p_S P_S/d_S`.
pub fn family_two_param(psi_a: &PureState, d: usize, p_a: f64, p_s: f64) -> Result<DensityMatrix> {
    let dim = BipartiteDim::new(d)?;
    quantum::check_len(psi_a, dim.total())?;
    let dev = antisym_vector_deviation(psi_a, d);
    if dev > ANTISYM_TOL {
        return Err(Error::NotAntisymmetric(dev));
    }
    check_weight("p_A", p_a)?;
    check_weight("p_S", p_s)?;
    if p_a + p_s > 1.0 + WEIGHT_TOL {
        return Err(Error::InvalidParameter(format!(
            "p_A + p_S = {} exceeds 1",
            p_a + p_s
        )));
    }
    let (a, s) = normalized_projectors(dim)?;
    let mut m = psi_a.projector().scale((1.0 - p_a - p_s).max(0.0));
    m.add_scaled(p_a, &a);
    m.add_scaled(p_s, &s);
    Ok(DensityMatrix::from_parts_unchecked(dim, m))
}

/// Pure state from the same draw as `random_density(d, 1, seed)`.
pub fn random_pure_bipartite(d: usize, seed: u64) -> Result<PureState> {
    let dim = BipartiteDim::new(d)?;
    let mut rng = rng_from_seed(seed);
    Ok(random_pure(dim.total(), &mut rng))
}

/// Antisymmetric pure state from the same draw as
/// `random_antisym_state(d, 1, seed)`.
pub fn random_antisym_pure(d: usize, seed: u64) -> Result<PureState> {
    let dim = BipartiteDim::new(d)?;
    if dim.antisym_dim() == 0 {
        return Err(Error::InvalidDimension(d));
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..ANTISYM_RETRIES {
        let g: Vec<C64> = (0..dim.total()).map(|_| gaussian(&mut rng)).collect();
        let pg: Vec<C64> = (0..g.len())
            .map(|r| (g[r] - g[(r % d) * d + r / d]) * 0.5)
            .collect();
        if let Ok(psi) = PureState::normalized(pg) {
            return Ok(psi);
        }
    }
    Err(Error::NoAntisymmetricComponent(0.0))
}

fn ginibre(n: usize, rank: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, rank, |_, _| gaussian(rng))
}

fn normalized_gram(g: &ComplexMatrix) -> Option<ComplexMatrix> {
    let m = g.matmul(&g.adjoint()).hermitian_part();
    let tr = m.trace().re;
    (tr > 1e-300).then(|| m.scale(1.0 / tr))
}

/// `G G† / Tr(G G†)` for a seeded complex-Gaussian `d² x rank` matrix `G`.
pub fn random_density(d: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let dim = BipartiteDim::new(d)?;
    if rank == 0 || rank > dim.total() {
        return Err(Error::InvalidParameter(format!(
            "rank must lie in [1, {}], got {rank}",
            dim.total()
        )));
    }
    let mut rng = rng_from_seed(seed);
    loop {
        if let Some(m) = normalized_gram(&ginibre(dim.total(), rank, &mut rng)) {
            return Ok(DensityMatrix::from_parts_unchecked(dim, m));
        }
    }
}

/// Random state supported on the antisymmetric subspace, obtained by
/// projecting a seeded Ginibre factor with `P_A` and renormalizing.
pub fn random_antisym_state(d: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let dim = BipartiteDim::new(d)?;
    if rank == 0 || rank > dim.antisym_dim() {
        return Err(Error::InvalidParameter(format!(
            "rank must lie in [1, {}], got {rank}",
            dim.antisym_dim()
        )));
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..ANTISYM_RETRIES {
        let g = ginibre(dim.total(), rank, &mut rng);
        // P_A G: antisymmetrize each column.
        let pg = ComplexMatrix::from_fn(g.rows(), g.cols(), |r, c| {
            (g[(r, c)] - g[((r % d) * d + r / d, c)]) * 0.5
        });
        if let Some(m) = normalized_gram(&pg) {
            let m = compress_antisym(&m, d).hermitian_part();
            return Ok(DensityMatrix::from_parts_unchecked(dim, m));
        }
    }
    Err(Error::NoAntisymmetricComponent(0.0))
}

/// An explicit separable state `Σ_k q_k |α_k><α_k| ⊗ |β_k><β_k|`.
#[derive(Clone, Debug)]
pub struct SeparableMixture {
    pub dim: BipartiteDim,
    pub weights: Vec<f64>,
    pub terms: Vec<(PureState, PureState)>,
}

impl SeparableMixture {
    pub fn new(dim: BipartiteDim, weights: Vec<f64>, terms: Vec<(PureState, PureState)>) -> Result<Self> {
        if weights.len() != terms.len() || terms.is_empty() {
            return Err(Error::InvalidParameter(
                "separable mixture needs one weight per term and at least one term".into(),
            ));
        }
        if weights.iter().any(|&w| !w.is_finite() || w < -WEIGHT_TOL) {
            return Err(Error::InvalidParameter("negative mixture weight".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        for (a, b) in &terms {
            quantum::check_len(a, dim.d())?;
            quantum::check_len(b, dim.d())?;
        }
        Ok(Self { dim, weights, terms })
    }

    pub fn density(&self) -> DensityMatrix {
        let n = self.dim.total();
        let mut m = ComplexMatrix::zeros(n, n);
        for (q, (a, b)) in self.weights.iter().zip(&self.terms) {
            m.add_scaled(*q, &PureState::product(a, b).projector());
        }
        DensityMatrix::from_parts_unchecked(self.dim, m)
    }
}

/// Mixture of `terms` random product states with flat-simplex weights
/// (normalized exponential variates).
pub fn random_separable(d: usize, terms: usize, seed: u64) -> Result<SeparableMixture> {
    let dim = BipartiteDim::new(d)?;
    if terms == 0 {
        return Err(Error::InvalidParameter("terms must be at least 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let raw: Vec<f64> = (0..terms).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.iter().map(|w| w / total).collect();
    let pairs = (0..terms)
        .map(|_| (random_pure(d, &mut rng), random_pure(d, &mut rng)))
        .collect();
    SeparableMixture::new(dim, weights, pairs)
}

/// `P_S σ P_S`-supported part of a state, normalized; used in tests and
/// by the reduced solver to read back the symmetric block.
pub fn symmetric_block(rho: &DensityMatrix) -> ComplexMatrix {
    compress_sym(rho.matrix(), rho.local_dim())
}
