//! Small dense conic programs over Hermitian PSD blocks.
//!
//! A problem is
//!
//! ```text
//! maximize    Σ_b <C_b, X_b>
//! subject to  Σ_b <A_kb, X_b> = r_k   for every constraint k
//!             X_b ⪰ 0                 for every block b
//! ```
//!
//! with `<A, X> = Re Tr(A† X)`. [`solve`] runs an ADMM / Douglas-Rachford
//! splitting between the affine set (projected with an orthonormalized copy
//! of the constraint rows) and the product of Hermitian PSD cones (projected
//! by eigenvalue clipping). [`builders`] encodes the maximal antisymmetric
//! projection probability of PPT states, in full and twirl-reduced form.

mod builders;
mod solver;

pub use builders::{
    build_ppt_projection_sdp, build_reduced_sdp, hermitian_basis, p_ppt, reconstruct_sigma,
    PptSolution, SdpForm, MAX_D_FULL, MAX_D_REDUCED,
};
pub use solver::{orthonormalize_constraints, solve, OrthonormalRows};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Coefficient matrices must be Hermitian to this accuracy.
pub const COEFF_HERMITIAN_TOL: f64 = 1e-12;
/// Rows whose residual norm after orthogonalization falls below this
/// fraction of their original norm are considered dependent.
pub const RANK_DROP_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub name: String,
    pub size: usize,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    /// `(block index, coefficient)` pairs; blocks not listed have zero coefficient.
    pub terms: Vec<(usize, ComplexMatrix)>,
    pub rhs: f64,
}

#[derive(Clone, Debug)]
pub struct SdpProblem {
    pub blocks: Vec<Block>,
    /// One coefficient matrix per block.
    pub objective: Vec<ComplexMatrix>,
    pub constraints: Vec<Constraint>,
}

impl SdpProblem {
    pub fn new(blocks: Vec<Block>) -> Self {
        let objective = blocks
            .iter()
            .map(|b| ComplexMatrix::zeros(b.size, b.size))
            .collect();
        Self {
            blocks,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn set_objective(&mut self, block: usize, coeff: ComplexMatrix) {
        self.objective[block] = coeff;
    }

    pub fn add_constraint(&mut self, terms: Vec<(usize, ComplexMatrix)>, rhs: f64) {
        self.constraints.push(Constraint { terms, rhs });
    }

    /// Real degrees of freedom: `n²` per Hermitian `n x n` block.
    pub fn num_variables(&self) -> usize {
        self.blocks.iter().map(|b| b.size * b.size).sum()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// Checks shapes, finiteness and Hermiticity of every coefficient.
    pub fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::MalformedProblem("no variable blocks".into()));
        }
        if self.objective.len() != self.blocks.len() {
            return Err(Error::MalformedProblem(
                "objective must have one coefficient per block".into(),
            ));
        }
        let check = |what: &str, b: usize, m: &ComplexMatrix| -> Result<()> {
            let Some(block) = self.blocks.get(b) else {
                return Err(Error::MalformedProblem(format!("{what}: block {b} does not exist")));
            };
            if m.rows() != block.size || m.cols() != block.size {
                return Err(Error::MalformedProblem(format!(
                    "{what}: coefficient for block '{}' is {}x{}, expected {}x{}",
                    block.name,
                    m.rows(),
                    m.cols(),
                    block.size,
                    block.size
                )));
            }
            if !m.is_finite() {
                return Err(Error::MalformedProblem(format!("{what}: non-finite coefficient")));
            }
            let dev = m.hermitian_deviation();
            if dev > COEFF_HERMITIAN_TOL {
                return Err(Error::MalformedProblem(format!(
                    "{what}: coefficient for block '{}' is not Hermitian ({dev:.2e})",
                    block.name
                )));
            }
            Ok(())
        };
        for (b, c) in self.objective.iter().enumerate() {
            check("objective", b, c)?;
        }
        for (k, con) in self.constraints.iter().enumerate() {
            if !con.rhs.is_finite() {
                return Err(Error::MalformedProblem(format!("constraint {k}: non-finite rhs")));
            }
            for (b, m) in &con.terms {
                check(&format!("constraint {k}"), *b, m)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub tol_primal: f64,
    pub tol_dual: f64,
    pub tol_gap: f64,
    pub max_iterations: usize,
    /// Initial ADMM penalty; adapted during the run.
    pub step_rho: f64,
    /// In `[1, 2)`.
    pub over_relaxation: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol_primal: 1e-7,
            tol_dual: 1e-7,
            tol_gap: 1e-7,
            max_iterations: 200_000,
            step_rho: 1.0,
            over_relaxation: 1.6,
        }
    }
}

impl SolverConfig {
    /// Same tolerance for all three residuals.
    pub fn with_tolerance(tol: f64) -> Self {
        Self {
            tol_primal: tol,
            tol_dual: tol,
            tol_gap: tol,
            ..Self::default()
        }
    }

    /// Largest of the three tolerances.
    pub fn tol(&self) -> f64 {
        self.tol_primal.max(self.tol_dual).max(self.tol_gap)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tol_primal", self.tol_primal),
            ("tol_dual", self.tol_dual),
            ("tol_gap", self.tol_gap),
            ("step_rho", self.step_rho),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !(1.0..2.0).contains(&self.over_relaxation) {
            return Err(Error::InvalidParameter(format!(
                "over_relaxation must lie in [1, 2), got {}",
                self.over_relaxation
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    MaxIterations,
    InfeasibleDetected,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::MaxIterations => "max_iterations",
            SolveStatus::InfeasibleDetected => "infeasible_detected",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SdpSolution {
    pub status: SolveStatus,
    /// Objective at the returned (cone-feasible) primal point.
    pub value: f64,
    /// One PSD matrix per block.
    pub primal_blocks: Vec<ComplexMatrix>,
    /// `||A(X) - r||` at the returned point (constraint rows orthonormalized).
    pub residual_primal: f64,
    /// Distance of the dual slack from the range of the constraint map.
    pub residual_dual: f64,
    /// `|dual objective - primal objective|`.
    pub gap: f64,
    pub iterations: usize,
    pub final_rho: f64,
}

/// Packs a Hermitian matrix into `n²` reals so that the Euclidean inner
/// product equals `Re Tr(A† B)`: diagonal entries, then `√2 Re`, `√2 Im`
/// of each strict upper entry.
pub fn svec(m: &ComplexMatrix, out: &mut [f64]) {
    let n = m.rows();
    debug_assert_eq!(out.len(), n * n);
    let s2 = std::f64::consts::SQRT_2;
    let mut k = 0;
    for i in 0..n {
        out[k] = m[(i, i)].re;
        k += 1;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let z = m[(i, j)];
            out[k] = s2 * z.re;
            out[k + 1] = s2 * z.im;
            k += 2;
        }
    }
}

/// Inverse of [`svec`].
pub fn smat(v: &[f64], n: usize) -> ComplexMatrix {
    debug_assert_eq!(v.len(), n * n);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = ComplexMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        m[(i, i)] = crate::C64::new(v[k], 0.0);
        k += 1;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let z = crate::C64::new(h * v[k], h * v[k + 1]);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            k += 2;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::testutil::random_hermitian;

    #[test]
    fn svec_is_isometric_and_invertible() {
        let a = random_hermitian(5, 1);
        let b = random_hermitian(5, 2);
        let mut va = vec![0.0; 25];
        let mut vb = vec![0.0; 25];
        svec(&a, &mut va);
        svec(&b, &mut vb);
        let dotv: f64 = va.iter().zip(&vb).map(|(x, y)| x * y).sum();
        assert!((dotv - a.inner_re(&b)).abs() < 1e-12);
        assert!(smat(&va, 5).max_abs_diff(&a) < 1e-15);
    }

    #[test]
    fn validate_catches_bad_coefficients() {
        let mut p = SdpProblem::new(vec![Block { name: "x".into(), size: 2 }]);
        p.add_constraint(vec![(0, ComplexMatrix::identity(3))], 1.0);
        assert!(p.validate().is_err());

        let mut p = SdpProblem::new(vec![Block { name: "x".into(), size: 2 }]);
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = crate::C64::new(1.0, 0.0);
        p.add_constraint(vec![(0, m)], 1.0);
        assert!(p.validate().is_err());

        let mut p = SdpProblem::new(vec![Block { name: "x".into(), size: 2 }]);
        p.add_constraint(vec![(1, ComplexMatrix::identity(2))], 1.0);
        assert!(p.validate().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let c = SolverConfig {
            over_relaxation: 2.0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
        let c = SolverConfig {
            tol_gap: 0.0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }
}
