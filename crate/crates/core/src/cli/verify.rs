//! Self-check suites behind `verify`.

use crate::certify::{theorem1_bounds, verify_lemma1, PPT_TOL};
use crate::constructions::{random_antisym_state, random_separable, sigma_p, werner};
use crate::error::Result;
use crate::linalg::{min_eig, ComplexMatrix};
use crate::quantum::{self, BipartiteDim, Side};
use crate::sdp::{p_ppt, solve, Block, SdpForm, SdpProblem, SolveStatus, SolverConfig, MAX_D_FULL};

pub const PROJECTOR_TOL: f64 = 1e-12;
pub const BRACKET_SLACK: f64 = 1e-6;
pub const VALUE_TOL: f64 = 1e-5;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(suite: &'static str, name: String, passed: bool, detail: String) -> Self {
        Self {
            suite,
            name,
            passed,
            detail,
        }
    }

    pub fn line(&self) -> String {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        format!("{mark} {} {} ({})", self.suite, self.name, self.detail)
    }
}

pub fn projectors(ds: &[usize]) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &d in ds {
        let dim = BipartiteDim::new(d)?;
        let p = quantum::projectors(d)?;
        let n = dim.total();
        let id = ComplexMatrix::identity(n);
        let zero = ComplexMatrix::zeros(n, n);
        let dev = |name: &str, err: f64, out: &mut Vec<Check>| {
            out.push(Check::new(
                "projectors",
                format!("d={d} {name}"),
                err <= PROJECTOR_TOL,
                format!("deviation {err:.2e}, tol {PROJECTOR_TOL:.0e}"),
            ));
        };
        dev("swap_squared_is_identity", p.swap.matmul(&p.swap).max_abs_diff(&id), &mut out);
        dev("projectors_sum_to_identity", (&p.sym + &p.antisym).max_abs_diff(&id), &mut out);
        dev("projectors_are_orthogonal", p.sym.matmul(&p.antisym).max_abs_diff(&zero), &mut out);
        dev("sym_is_idempotent", p.sym.matmul(&p.sym).max_abs_diff(&p.sym), &mut out);
        dev(
            "sym_trace",
            (p.sym.trace().re - dim.sym_dim() as f64).abs(),
            &mut out,
        );
        dev(
            "antisym_trace",
            (p.antisym.trace().re - dim.antisym_dim() as f64).abs(),
            &mut out,
        );
    }
    Ok(out)
}

pub fn lemma1(ds: &[usize], seed: u64, count: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &d in ds {
        let mut worst = (0.0f64, 0.0f64);
        let mut failures = 0;
        for k in 0..count as u64 {
            let s = seed.wrapping_add(k);
            let terms = 1 + (s % 20) as usize;
            let mix = random_separable(d, terms, s)?;
            let (_, rep) = verify_lemma1(&mix)?;
            worst.0 = worst.0.max((rep.output_weight - 0.5).abs());
            worst.1 = worst.1.max(rep.block_error);
            if !rep.passed {
                failures += 1;
            }
        }
        out.push(Check::new(
            "lemma1",
            format!("d={d} mixtures={count}"),
            failures == 0,
            format!(
                "failures {failures}, max |Tr(P_A ρ') - 1/2| {:.2e}, max block error {:.2e}",
                worst.0, worst.1
            ),
        ));
    }
    Ok(out)
}

fn form_for(d: usize) -> SdpForm {
    if d <= MAX_D_FULL {
        SdpForm::Full
    } else {
        SdpForm::Reduced
    }
}

pub fn bounds(ds: &[usize], seed: u64, count: usize, config: &SolverConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &d in ds {
        let dim = BipartiteDim::new(d)?;
        let (lo, hi) = theorem1_bounds(d)?;
        for k in 0..count as u64 {
            let s = seed.wrapping_add(k);
            let rank = 1 + (s as usize) % dim.antisym_dim();
            let rho_a = random_antisym_state(d, rank, s)?;
            let lam = min_eig(&sigma_p(&rho_a, lo)?.partial_transpose(Side::A))?;
            out.push(Check::new(
                "bounds",
                format!("d={d} seed={s} sigma_pbar_is_ppt"),
                lam >= -PPT_TOL,
                format!("min eigenvalue {lam:.3e}"),
            ));
            let form = form_for(d);
            let sol = p_ppt(&rho_a, config, form)?;
            let ok = sol.value >= lo - BRACKET_SLACK && sol.value <= hi + BRACKET_SLACK;
            out.push(Check::new(
                "bounds",
                format!("d={d} seed={s} rank={rank} p_ppt_in_bracket"),
                ok,
                format!(
                    "p_ppt {:.9} in [{lo:.9}, {hi}] ± {BRACKET_SLACK:.0e}, form {}",
                    sol.value,
                    form.as_str()
                ),
            ));
        }
    }
    Ok(out)
}

pub fn solver(ds: &[usize], seed: u64, config: &SolverConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();

    let n = 4;
    let mut trivial = SdpProblem::new(vec![Block {
        name: "x".into(),
        size: n,
    }]);
    trivial.set_objective(0, ComplexMatrix::identity(n).scale(1.0 / n as f64));
    trivial.add_constraint(vec![(0, ComplexMatrix::identity(n))], 1.0);
    let sol = solve(&trivial, config)?;
    let err = (sol.value - 1.0 / n as f64).abs();
    out.push(Check::new(
        "solver",
        "trivial_trace_problem".into(),
        sol.status == SolveStatus::Optimal && err <= VALUE_TOL,
        format!("status {}, |value - 1/{n}| {err:.2e}", sol.status.as_str()),
    ));

    for &d in ds {
        let form = form_for(d);
        let w = p_ppt(&werner(d, 1.0)?, config, form)?;
        let err = (w.value - 0.5).abs();
        out.push(Check::new(
            "solver",
            format!("d={d} werner_block_value"),
            err <= VALUE_TOL,
            format!("|p_ppt - 1/2| {err:.2e}, tol {VALUE_TOL:.0e}, form {}", form.as_str()),
        ));

        let dim = BipartiteDim::new(d)?;
        let rank = 1 + (seed as usize) % dim.antisym_dim();
        let rho_a = random_antisym_state(d, rank, seed)?;
        let a = p_ppt(&rho_a, config, form)?;
        let b = p_ppt(&rho_a, config, form)?;
        out.push(Check::new(
            "solver",
            format!("d={d} seed={seed} deterministic"),
            a.value.to_bits() == b.value.to_bits()
                && a.solution.iterations == b.solution.iterations,
            format!("iterations {} and {}", a.solution.iterations, b.solution.iterations),
        ));
        if d <= MAX_D_FULL {
            let other = match form {
                SdpForm::Full => SdpForm::Reduced,
                SdpForm::Reduced => SdpForm::Full,
            };
            let c = p_ppt(&rho_a, config, other)?;
            let err = (a.value - c.value).abs();
            out.push(Check::new(
                "solver",
                format!("d={d} seed={seed} full_matches_reduced"),
                err <= VALUE_TOL,
                format!("|full - reduced| {err:.2e}, tol {VALUE_TOL:.0e}"),
            ));
        }
    }
    Ok(out)
}
