use crate::error::{Error, Result};
use crate::linalg::{herm_eig, herm_eig_warm, ComplexMatrix};

use super::{smat, svec, SdpProblem, SdpSolution, SolveStatus, SolverConfig, RANK_DROP_TOL};

/// Residuals are evaluated every this many iterations.
const CHECK_INTERVAL: usize = 10;
/// Penalty adaptation happens at most this often.
const ADAPT_INTERVAL: usize = 50;
/// Adapt when primal and dual residuals differ by more than this factor.
const ADAPT_RATIO: f64 = 10.0;
const RHO_MIN: f64 = 1e-6;
const RHO_MAX: f64 = 1e6;
/// Stall detection for infeasible problems.
const STALL_MIN_ITER: usize = 5_000;
const STALL_WINDOW: usize = 1_000;
const STALL_REL_CHANGE: f64 = 1e-6;
const STALL_PRIMAL_FACTOR: f64 = 1e3;

/// Constraint rows in packed coordinates after modified Gram-Schmidt, so
/// that the affine projection is `v - Qᵀ(Qv - β)`.
#[derive(Clone, Debug)]
pub struct OrthonormalRows {
    /// Length of a packed variable vector.
    pub dim: usize,
    /// Row-major `rank x dim`.
    rows: Vec<f64>,
    pub rhs: Vec<f64>,
    /// Rows removed as linearly dependent.
    pub dropped: usize,
}

impl OrthonormalRows {
    pub fn rank(&self) -> usize {
        self.rhs.len()
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.rows[k * self.dim..(k + 1) * self.dim]
    }

    /// `Q v`
    fn apply(&self, v: &[f64], out: &mut [f64]) {
        for (k, o) in out.iter_mut().enumerate() {
            *o = dot(self.row(k), v);
        }
    }

    /// `v -= Qᵀ y`
    fn subtract_adjoint(&self, y: &[f64], v: &mut [f64]) {
        for (k, &yk) in y.iter().enumerate() {
            if yk == 0.0 {
                continue;
            }
            for (a, b) in v.iter_mut().zip(self.row(k)) {
                *a -= yk * b;
            }
        }
    }

    /// In-place projection onto `{v : Qv = β}`.
    fn project_affine(&self, v: &mut [f64], scratch: &mut [f64]) {
        self.apply(v, scratch);
        for (s, b) in scratch.iter_mut().zip(&self.rhs) {
            *s -= b;
        }
        self.subtract_adjoint(scratch, v);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn block_offsets(problem: &SdpProblem) -> Vec<usize> {
    let mut offs = Vec::with_capacity(problem.blocks.len() + 1);
    let mut acc = 0;
    offs.push(0);
    for b in &problem.blocks {
        acc += b.size * b.size;
        offs.push(acc);
    }
    offs
}

fn pack(problem: &SdpProblem, offs: &[usize], terms: &[(usize, ComplexMatrix)]) -> Vec<f64> {
    let mut v = vec![0.0; *offs.last().unwrap()];
    let mut buf = Vec::new();
    for (b, m) in terms {
        let n = problem.blocks[*b].size;
        buf.resize(n * n, 0.0);
        svec(m, &mut buf);
        for (dst, src) in v[offs[*b]..offs[b + 1]].iter_mut().zip(&buf) {
            *dst += src;
        }
    }
    v
}

/// Modified Gram-Schmidt (two passes) over the packed constraint rows.
///
/// Dependent rows are dropped; a dependent row whose right-hand side is
/// inconsistent with the others makes the affine set empty and is reported
/// as [`Error::Infeasible`].
pub fn orthonormalize_constraints(problem: &SdpProblem) -> Result<OrthonormalRows> {
    problem.validate()?;
    let offs = block_offsets(problem);
    let dim = *offs.last().unwrap();
    let mut rows: Vec<f64> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    let mut dropped = 0;
    for con in &problem.constraints {
        let mut a = pack(problem, &offs, &con.terms);
        let mut r = con.rhs;
        let norm0 = norm(&a);
        if norm0 > 0.0 {
            for _pass in 0..2 {
                for (k, beta) in rhs.iter().enumerate() {
                    let q = &rows[k * dim..(k + 1) * dim];
                    let c = dot(q, &a);
                    if c != 0.0 {
                        for (x, y) in a.iter_mut().zip(q) {
                            *x -= c * y;
                        }
                        r -= c * beta;
                    }
                }
            }
        }
        let nr = norm(&a);
        if norm0 == 0.0 || nr <= RANK_DROP_TOL * norm0 {
            if r.abs() > 1e-8 * norm0.max(con.rhs.abs()).max(1.0) {
                return Err(Error::Infeasible);
            }
            dropped += 1;
            continue;
        }
        rows.extend(a.iter().map(|x| x / nr));
        rhs.push(r / nr);
    }
    Ok(OrthonormalRows {
        dim,
        rows,
        rhs,
        dropped,
    })
}

struct ConeProjector {
    sizes: Vec<usize>,
    offs: Vec<usize>,
    /// Previous eigenbasis per block, used to warm-start Jacobi.
    bases: Vec<Option<ComplexMatrix>>,
}

impl ConeProjector {
    fn project(&mut self, v: &mut [f64]) -> Result<()> {
        for (b, &n) in self.sizes.iter().enumerate() {
            let slot = &mut v[self.offs[b]..self.offs[b + 1]];
            if n == 1 {
                slot[0] = slot[0].max(0.0);
                continue;
            }
            let m = smat(slot, n);
            let eig = match &self.bases[b] {
                Some(basis) => herm_eig_warm(&m, basis)?,
                None => herm_eig(&m)?,
            };
            if eig.eigenvalues[0] >= 0.0 {
                // Already inside the cone.
                self.bases[b] = Some(eig.eigenvectors);
                continue;
            }
            let clipped = eig.reconstruct_with(|x| x.max(0.0));
            svec(&clipped, slot);
            self.bases[b] = Some(eig.eigenvectors);
        }
        Ok(())
    }
}

struct Residuals {
    primal: f64,
    dual: f64,
    gap: f64,
    value: f64,
}

/// Solves `problem` with ADMM. Deterministic for a given problem and config.
///
/// Running out of iterations is not an error: the returned solution carries
/// [`SolveStatus::MaxIterations`] and the last iterate.
pub fn solve(problem: &SdpProblem, config: &SolverConfig) -> Result<SdpSolution> {
    config.validate()?;
    let rows = orthonormalize_constraints(problem)?;
    solve_prepared(problem, &rows, config)
}

pub(crate) fn solve_prepared(
    problem: &SdpProblem,
    rows: &OrthonormalRows,
    config: &SolverConfig,
) -> Result<SdpSolution> {
    let offs = block_offsets(problem);
    let n = rows.dim;
    let m = rows.rank();
    let alpha = config.over_relaxation;

    let mut c = vec![0.0; n];
    for (b, coeff) in problem.objective.iter().enumerate() {
        svec(coeff, &mut c[offs[b]..offs[b + 1]]);
    }

    let mut cone = ConeProjector {
        sizes: problem.blocks.iter().map(|b| b.size).collect(),
        offs: offs.clone(),
        bases: vec![None; problem.blocks.len()],
    };

    let mut rho = config.step_rho;
    let mut x = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut u = vec![0.0; n];
    let mut scratch = vec![0.0; m];
    let mut work = vec![0.0; n];

    let residuals = |z: &[f64], u: &[f64], rho: f64, scratch: &mut [f64], work: &mut [f64]| {
        rows.apply(z, scratch);
        let primal = scratch
            .iter()
            .zip(&rows.rhs)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        // Dual slack S = -ρu lies in the cone by construction.
        for ((w, ci), ui) in work.iter_mut().zip(&c).zip(u) {
            *w = ci - rho * ui;
        }
        rows.apply(work, scratch);
        let dual_obj = dot(scratch, &rows.rhs);
        rows.subtract_adjoint(scratch, work);
        let dual = norm(work);
        let value = dot(&c, z);
        Residuals {
            primal,
            dual,
            gap: (dual_obj - value).abs(),
            value,
        }
    };

    let mut last = Residuals {
        primal: f64::INFINITY,
        dual: f64::INFINITY,
        gap: f64::INFINITY,
        value: 0.0,
    };
    let mut status = SolveStatus::MaxIterations;
    let mut iterations = config.max_iterations;
    let mut stall_ref: Option<(usize, f64)> = None;

    for it in 1..=config.max_iterations {
        // x-update: affine projection of z - u + c/ρ.
        for i in 0..n {
            x[i] = z[i] - u[i] + c[i] / rho;
        }
        rows.project_affine(&mut x, &mut scratch);

        // z-update with over-relaxation.
        for i in 0..n {
            let xh = alpha * x[i] + (1.0 - alpha) * z[i];
            work[i] = xh;
            z[i] = xh + u[i];
        }
        cone.project(&mut z)?;
        for i in 0..n {
            u[i] += work[i] - z[i];
        }

        if it % CHECK_INTERVAL != 0 && it != config.max_iterations {
            continue;
        }
        last = residuals(&z, &u, rho, &mut scratch, &mut work);
        if last.primal <= config.tol_primal
            && last.dual <= config.tol_dual
            && last.gap <= config.tol_gap
        {
            status = SolveStatus::Optimal;
            iterations = it;
            break;
        }

        if it >= STALL_MIN_ITER && last.primal > STALL_PRIMAL_FACTOR * config.tol_primal {
            match stall_ref {
                Some((start, p0)) if it - start >= STALL_WINDOW => {
                    if (p0 - last.primal).abs() <= STALL_REL_CHANGE * last.primal {
                        status = SolveStatus::InfeasibleDetected;
                        iterations = it;
                        break;
                    }
                    stall_ref = Some((it, last.primal));
                }
                None => stall_ref = Some((it, last.primal)),
                _ => {}
            }
        } else {
            stall_ref = None;
        }

        if it % ADAPT_INTERVAL == 0 {
            let scale = if last.primal > ADAPT_RATIO * last.dual && rho < RHO_MAX {
                2.0
            } else if last.dual > ADAPT_RATIO * last.primal && rho > RHO_MIN {
                0.5
            } else {
                1.0
            };
            if scale != 1.0 {
                rho *= scale;
                u.iter_mut().for_each(|ui| *ui /= scale);
            }
        }
    }

    let primal_blocks = problem
        .blocks
        .iter()
        .enumerate()
        .map(|(b, blk)| smat(&z[offs[b]..offs[b + 1]], blk.size))
        .collect();
    Ok(SdpSolution {
        status,
        value: last.value,
        primal_blocks,
        residual_primal: last.primal,
        residual_dual: last.dual,
        gap: last.gap,
        iterations,
        final_rho: rho,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::min_eig;
    use crate::sdp::Block;
    use crate::C64;

    fn single_block(n: usize) -> SdpProblem {
        SdpProblem::new(vec![Block {
            name: "x".into(),
            size: n,
        }])
    }

    #[test]
    fn trivial_trace_problem() {
        for n in [2, 3, 5] {
            let mut p = single_block(n);
            p.set_objective(0, ComplexMatrix::identity(n).scale(1.0 / n as f64));
            p.add_constraint(vec![(0, ComplexMatrix::identity(n))], 1.0);
            let sol = solve(&p, &SolverConfig::default()).unwrap();
            assert_eq!(sol.status, SolveStatus::Optimal);
            assert!((sol.value - 1.0 / n as f64).abs() < 1e-7);
        }
    }

    #[test]
    fn max_eigenvalue_problem() {
        // max <C, X> s.t. Tr X = 1 is the largest eigenvalue of C.
        let c = crate::linalg::testutil::random_hermitian(4, 12);
        let top = *crate::linalg::herm_eigvals(&c).unwrap().last().unwrap();
        let mut p = single_block(4);
        p.set_objective(0, c);
        p.add_constraint(vec![(0, ComplexMatrix::identity(4))], 1.0);
        let sol = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.value - top).abs() < 1e-6, "{} vs {top}", sol.value);
        assert!(min_eig(&sol.primal_blocks[0]).unwrap() >= -1e-6);
    }

    #[test]
    fn complex_coupling_constraint() {
        // max Re X_01 s.t. X_00 = X_11 = 1/2: optimum 1/2 at the all-halves matrix.
        let mut p = single_block(2);
        let mut obj = ComplexMatrix::zeros(2, 2);
        obj[(0, 1)] = C64::new(0.5, 0.0);
        obj[(1, 0)] = C64::new(0.5, 0.0);
        p.set_objective(0, obj);
        p.add_constraint(vec![(0, ComplexMatrix::from_real_diagonal(&[1.0, 0.0]))], 0.5);
        p.add_constraint(vec![(0, ComplexMatrix::from_real_diagonal(&[0.0, 1.0]))], 0.5);
        let sol = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.value - 0.5).abs() < 1e-6);
    }

    #[test]
    fn dependent_rows_are_dropped() {
        let mut p = single_block(2);
        p.add_constraint(vec![(0, ComplexMatrix::identity(2))], 1.0);
        p.add_constraint(vec![(0, ComplexMatrix::identity(2).scale(2.0))], 2.0);
        let rows = orthonormalize_constraints(&p).unwrap();
        assert_eq!((rows.rank(), rows.dropped), (1, 1));
        for k in 0..rows.rank() {
            assert!((norm(rows.row(k)) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn inconsistent_rows_are_infeasible() {
        let mut p = single_block(2);
        p.add_constraint(vec![(0, ComplexMatrix::identity(2))], 1.0);
        p.add_constraint(vec![(0, ComplexMatrix::identity(2))], -1.0);
        assert_eq!(solve(&p, &SolverConfig::default()).unwrap_err(), Error::Infeasible);
    }

    #[test]
    fn cone_infeasibility_is_detected() {
        // X ⪰ 0 with X_00 = -1.
        let mut p = single_block(2);
        p.add_constraint(vec![(0, ComplexMatrix::from_real_diagonal(&[1.0, 0.0]))], -1.0);
        let sol = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::InfeasibleDetected);
    }

    #[test]
    fn iteration_budget_is_reported() {
        let c = crate::linalg::testutil::random_hermitian(4, 3);
        let mut p = single_block(4);
        p.set_objective(0, c);
        p.add_constraint(vec![(0, ComplexMatrix::identity(4))], 1.0);
        let cfg = SolverConfig {
            max_iterations: 3,
            ..SolverConfig::default()
        };
        let sol = solve(&p, &cfg).unwrap();
        assert_eq!(sol.status, SolveStatus::MaxIterations);
        assert_eq!(sol.iterations, 3);
        assert_eq!(sol.primal_blocks.len(), 1);
    }

    #[test]
    fn deterministic() {
        let c = crate::linalg::testutil::random_hermitian(5, 8);
        let mut p = single_block(5);
        p.set_objective(0, c);
        p.add_constraint(vec![(0, ComplexMatrix::identity(5))], 1.0);
        let a = solve(&p, &SolverConfig::default()).unwrap();
        let b = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(a.iterations, b.iterations);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }
}
