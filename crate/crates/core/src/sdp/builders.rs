//! Encodings of `max Tr(P_A σ)` over PPT states `σ` with
//! `P_A σ P_A = Tr(P_A σ) ρ_A`.

use crate::constructions::{antisym_deviation, ANTISYM_TOL};
use crate::error::{Error, Result};
use crate::linalg::{min_eig, ComplexMatrix, C64, ONE};
use crate::quantum::{
    self, compress_antisym, compress_sym, partial_transpose, BipartiteDim, DensityMatrix, Side,
};

use super::solver::{orthonormalize_constraints, solve_prepared};
use super::{Block, SdpProblem, SdpSolution, SolveStatus, SolverConfig, RANK_DROP_TOL};

/// Largest local dimension accepted by the full formulation.
pub const MAX_D_FULL: usize = 4;
/// Largest local dimension accepted by the reduced formulation.
pub const MAX_D_REDUCED: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SdpForm {
    #[default]
    Full,
    Reduced,
}

impl SdpForm {
    pub fn as_str(self) -> &'static str {
        match self {
            SdpForm::Full => "full",
            SdpForm::Reduced => "reduced",
        }
    }
}

impl std::str::FromStr for SdpForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(SdpForm::Full),
            "reduced" => Ok(SdpForm::Reduced),
            other => Err(Error::InvalidParameter(format!(
                "unknown form '{other}' (expected full or reduced)"
            ))),
        }
    }
}

/// Orthonormal basis (Frobenius inner product) of `n x n` Hermitian
/// matrices: `E_ii`, then `(E_ij + E_ji)/√2` and `i(E_ij - E_ji)/√2`.
pub fn hermitian_basis(n: usize) -> Vec<ComplexMatrix> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let mut m = ComplexMatrix::zeros(n, n);
        m[(i, i)] = ONE;
        out.push(m);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let mut re = ComplexMatrix::zeros(n, n);
            re[(i, j)] = C64::new(h, 0.0);
            re[(j, i)] = C64::new(h, 0.0);
            out.push(re);
            let mut im = ComplexMatrix::zeros(n, n);
            im[(i, j)] = C64::new(0.0, h);
            im[(j, i)] = C64::new(0.0, -h);
            out.push(im);
        }
    }
    out
}

fn check_input(rho_a: &DensityMatrix, max_d: usize, form: SdpForm) -> Result<()> {
    let d = rho_a.local_dim();
    if d > max_d {
        return Err(Error::ProblemTooLarge(format!(
            "{} form supports d <= {max_d}, got d = {d}",
            form.as_str()
        )));
    }
    let dev = antisym_deviation(rho_a.matrix(), d);
    if dev > ANTISYM_TOL {
        return Err(Error::NotAntisymmetric(dev));
    }
    Ok(())
}

/// Isometry whose columns are an orthonormal basis of the given vectors.
fn isometry(basis: &[quantum::PureState]) -> ComplexMatrix {
    let cols: Vec<Vec<C64>> = basis.iter().map(|v| v.amplitudes().to_vec()).collect();
    ComplexMatrix::from_columns(&cols).expect("basis vectors share a length")
}

/// Full formulation: blocks `σ` and `τ` (both `d² x d²`), objective
/// `<P_A, σ>`, and constraints
///
/// 1. `Tr σ = 1`;
/// 2. `<E_m, τ> - <E_m^Γ, σ> = 0` for every element `E_m` of an orthonormal
///    Hermitian basis, i.e. `τ = σ^Γ`;
/// 3. `<F_k - <F_k, ρ_A> P_A, σ> = 0` for an orthonormal Hermitian basis
///    `F_k` of operators on the antisymmetric subspace, i.e.
///    `P_A σ P_A = Tr(P_A σ) ρ_A`.
pub fn build_ppt_projection_sdp(rho_a: &DensityMatrix) -> Result<SdpProblem> {
    check_input(rho_a, MAX_D_FULL, SdpForm::Full)?;
    let dim = rho_a.dim();
    let d = dim.d();
    let n = dim.total();
    let proj = quantum::projectors(d)?;

    let mut p = SdpProblem::new(vec![
        Block {
            name: "sigma".into(),
            size: n,
        },
        Block {
            name: "tau".into(),
            size: n,
        },
    ]);
    p.set_objective(0, proj.antisym.clone());
    p.add_constraint(vec![(0, ComplexMatrix::identity(n))], 1.0);

    for e in hermitian_basis(n) {
        let e_pt = partial_transpose(&e, d, Side::A)?;
        p.add_constraint(vec![(0, e_pt.scale(-1.0)), (1, e)], 0.0);
    }

    let qa = isometry(&quantum::antisym_basis(d)?);
    for h in hermitian_basis(dim.antisym_dim()) {
        let f = qa.matmul(&h).matmul(&qa.adjoint());
        let overlap = f.inner_re(rho_a.matrix());
        let scale = f.frobenius_norm();
        let mut coeff = f;
        coeff.add_scaled(-overlap, &proj.antisym);
        let coeff = coeff.hermitian_part();
        // Rounding residue of a row that vanishes identically.
        if coeff.frobenius_norm() <= RANK_DROP_TOL * scale {
            continue;
        }
        p.add_constraint(vec![(0, coeff)], 0.0);
    }
    Ok(p)
}

/// Twirl-reduced formulation: `σ = p ρ_A + Q_S R Q_S†` with blocks
/// `R` (`d_S x d_S`, holding `(1-p) ρ_S` in the symmetric basis `Q_S`),
/// the scalar `p`, and `τ = σ^Γ` (`d² x d²`). Objective `p`; constraints
/// `Tr R + p = 1` and `<E_m, τ> - p <E_m^Γ, ρ_A> - <Q_S† E_m^Γ Q_S, R> = 0`.
pub fn build_reduced_sdp(rho_a: &DensityMatrix) -> Result<SdpProblem> {
    check_input(rho_a, MAX_D_REDUCED, SdpForm::Reduced)?;
    let dim = rho_a.dim();
    let d = dim.d();
    let n = dim.total();
    let ds = dim.sym_dim();
    let qs = isometry(&quantum::sym_basis(d)?);
    let qs_adj = qs.adjoint();

    let mut p = SdpProblem::new(vec![
        Block {
            name: "rho_s".into(),
            size: ds,
        },
        Block {
            name: "p".into(),
            size: 1,
        },
        Block {
            name: "tau".into(),
            size: n,
        },
    ]);
    p.set_objective(1, ComplexMatrix::identity(1));
    p.add_constraint(
        vec![(0, ComplexMatrix::identity(ds)), (1, ComplexMatrix::identity(1))],
        1.0,
    );
    for e in hermitian_basis(n) {
        let e_pt = partial_transpose(&e, d, Side::A)?;
        let on_rho_a = e_pt.inner_re(rho_a.matrix());
        let on_r = qs_adj.matmul(&e_pt).matmul(&qs).hermitian_part();
        p.add_constraint(
            vec![
                (0, on_r.scale(-1.0)),
                (1, ComplexMatrix::from_real_diagonal(&[-on_rho_a])),
                (2, e),
            ],
            0.0,
        );
    }
    Ok(p)
}

/// Rebuilds `σ` (as a `d² x d²` matrix) from the solver's primal blocks.
pub fn reconstruct_sigma(
    form: SdpForm,
    rho_a: &DensityMatrix,
    solution: &SdpSolution,
) -> Result<ComplexMatrix> {
    match form {
        SdpForm::Full => Ok(solution.primal_blocks[0].clone()),
        SdpForm::Reduced => {
            let d = rho_a.local_dim();
            let qs = isometry(&quantum::sym_basis(d)?);
            let r = &solution.primal_blocks[0];
            let p = solution.primal_blocks[1][(0, 0)].re;
            let mut sigma = qs.matmul(r).matmul(&qs.adjoint());
            sigma.add_scaled(p, rho_a.matrix());
            Ok(sigma)
        }
    }
}

#[derive(Clone, Debug)]
pub struct PptSolution {
    pub form: SdpForm,
    /// Solved objective `Tr(P_A σ*)`.
    pub value: f64,
    /// Optimal state, with `P_A σ* P_A ∝ ρ_A` and the twirl structure.
    pub sigma: DensityMatrix,
    /// `min_eig(σ*^Γ)`
    pub min_eig_pt: f64,
    /// `max |P_A σ* P_A - Tr(P_A σ*) ρ_A|`
    pub projection_error: f64,
    pub solution: SdpSolution,
    pub config: SolverConfig,
}

/// Cleans the raw solver state into an exactly valid state with the
/// optimal-point structure `v ρ_A ⊕ P_S σ P_S`, where `v` is the solved
/// value. If `σ^Γ` then has a (residual-sized) negative part, mixes in the
/// smallest amount of `P_S/d_S` that makes it PSD; that mixture keeps the
/// antisymmetric block proportional to `ρ_A`.
fn polish(rho_a: &DensityMatrix, raw: &ComplexMatrix, value: f64) -> Result<ComplexMatrix> {
    let dim = rho_a.dim();
    let d = dim.d();
    let v = value.clamp(0.0, 1.0);
    let mut sym = compress_sym(raw, d).hermitian_part();
    let sym_tr = sym.trace().re;
    if sym_tr > 0.0 {
        sym = sym.scale((1.0 - v) / sym_tr);
    }
    // Clip any negative eigenvalues of the symmetric block.
    let eig = crate::linalg::herm_eig(&sym)?;
    if eig.eigenvalues[0] < 0.0 {
        sym = eig.reconstruct_with(|x| x.max(0.0));
        let tr = sym.trace().re;
        if tr > 0.0 {
            sym = sym.scale((1.0 - v) / tr);
        }
    }
    let mut sigma = rho_a.matrix().scale(v);
    sigma.add_scaled(1.0, &sym);

    let lam = min_eig(&partial_transpose(&sigma, d, Side::A)?)?;
    if lam < 0.0 {
        // (P_S/d_S)^Γ ⪰ I/(2 d_S), so weight ε with
        // (1-ε)λ + ε/(2 d_S) >= 0 restores positivity.
        let floor = 1.0 / (2.0 * dim.sym_dim() as f64);
        let eps = (-lam / (floor - lam)).min(1.0);
        let ps = quantum::projectors(d)?.sym.scale(1.0 / dim.sym_dim() as f64);
        sigma = sigma.scale(1.0 - eps);
        sigma.add_scaled(eps, &ps);
    }
    Ok(sigma)
}

/// Maximal probability with which a PPT state projects onto `ρ_A` under
/// `P_A`, together with an optimal state.
pub fn p_ppt(rho_a: &DensityMatrix, config: &SolverConfig, form: SdpForm) -> Result<PptSolution> {
    config.validate()?;
    let problem = match form {
        SdpForm::Full => build_ppt_projection_sdp(rho_a)?,
        SdpForm::Reduced => build_reduced_sdp(rho_a)?,
    };
    let rows = orthonormalize_constraints(&problem)?;
    let solution = solve_prepared(&problem, &rows, config)?;
    match solution.status {
        SolveStatus::Optimal => {}
        SolveStatus::InfeasibleDetected => return Err(Error::Infeasible),
        SolveStatus::MaxIterations => {
            return Err(Error::SolverNotConverged {
                iterations: solution.iterations,
                primal: solution.residual_primal,
                dual: solution.residual_dual,
                gap: solution.gap,
            })
        }
    }
    let value = solution.value;
    let raw = reconstruct_sigma(form, rho_a, &solution)?;
    let sigma_m = polish(rho_a, &raw, value)?;

    let d = rho_a.local_dim();
    let tol = 10.0 * config.tol();
    let sigma = DensityMatrix::new(BipartiteDim::new(d)?, sigma_m).map_err(|e| {
        Error::Tolerance(format!("reconstructed optimal state is not a valid state: {e}"))
    })?;
    let min_eig_pt = min_eig(&sigma.partial_transpose(Side::A))?;
    let weight = sigma.antisym_weight();
    let projection_error = compress_antisym(sigma.matrix(), d)
        .max_abs_diff(&rho_a.matrix().scale(weight));
    if min_eig_pt < -tol {
        return Err(Error::Tolerance(format!(
            "optimal state has partial-transpose eigenvalue {min_eig_pt:.3e} below -{tol:.1e}"
        )));
    }
    if projection_error > tol {
        return Err(Error::Tolerance(format!(
            "antisymmetric block deviates from Tr(P_A σ)·ρ_A by {projection_error:.3e} > {tol:.1e}"
        )));
    }
    Ok(PptSolution {
        form,
        value,
        sigma,
        min_eig_pt,
        projection_error,
        solution,
        config: config.clone(),
    })
}
