//! Entanglement decision procedures: PPT test, the `p_ppt` bracket, the
//! SDP-based bound-entanglement certificate, the Schmidt-rank certificate
//! for the two-parameter family, and a realignment cross-check.

use serde::{Deserialize, Serialize};

use crate::constructions::{antisym_vector_deviation, family_two_param, SeparableMixture, ANTISYM_TOL};
use crate::error::{Error, Result};
use crate::linalg::{min_eig, trace_norm, ComplexMatrix};
use crate::quantum::{
    canonicalize_product, project_antisym, schmidt_rank, BipartiteDim, DensityMatrix, PureState,
    Side, DEFAULT_SCHMIDT_TOL,
};
use crate::sdp::{p_ppt, SdpForm, SolverConfig};

/// Default tolerance for [`is_ppt`].
pub const PPT_TOL: f64 = 1e-9;
/// A value must sit this many `tol_gap` below 1/2 to certify.
pub const MARGIN_FACTOR: f64 = 100.0;
/// Realignment flags a state when its trace norm exceeds `1 + REALIGNMENT_TOL`.
pub const REALIGNMENT_TOL: f64 = 1e-9;
/// Accuracy required of the canonical separable rebuild.
pub const LEMMA1_TOL: f64 = 1e-9;
/// Mixtures with less antisymmetric weight than this are rejected.
pub const LEMMA1_MIN_WEIGHT: f64 = 1e-10;

/// `(min_eig(σ^Γ) ≥ -tol, min_eig(σ^Γ))`
pub fn is_ppt(sigma: &DensityMatrix, tol: f64) -> Result<(bool, f64)> {
    let lam = min_eig(&sigma.partial_transpose(Side::A))?;
    Ok((lam >= -tol, lam))
}

/// `(2/(d(d+1)+2), 1/2)`
pub fn theorem1_bounds(d: usize) -> Result<(f64, f64)> {
    let dim = BipartiteDim::new(d)?;
    Ok((1.0 / (dim.sym_dim() as f64 + 1.0), 0.5))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    PptEntangledViaSdp,
    EntangledViaSchmidtRank,
    PptOnly,
    Inconclusive,
}

impl CertificateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateKind::PptEntangledViaSdp => "ppt_entangled_via_sdp",
            CertificateKind::EntangledViaSchmidtRank => "entangled_via_schmidt_rank",
            CertificateKind::PptOnly => "ppt_only",
            CertificateKind::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverResiduals {
    pub status: String,
    pub form: String,
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
    pub iterations: usize,
    pub tol_primal: f64,
    pub tol_dual: f64,
    pub tol_gap: f64,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub p_ppt: Option<f64>,
    /// `1/2 - p_ppt`
    pub margin: Option<f64>,
    /// The certified state (`σ*` for SDP certificates).
    pub state: DensityMatrix,
    /// The antisymmetric input, when there is one.
    pub rho_a: Option<DensityMatrix>,
    pub min_eig_pt: f64,
    pub is_ppt: bool,
    pub schmidt_rank_witness: Option<usize>,
    pub solver_residuals: Option<SolverResiduals>,
    /// `max |P_A σ P_A / Tr(P_A σ) - ρ_A|`
    pub projection_error: Option<f64>,
    pub realignment_value: f64,
    pub realignment_flags: bool,
    /// Inputs of a two-parameter-family certificate.
    pub family: Option<FamilyParams>,
    pub seed_provenance: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyParams {
    pub psi_a: PureState,
    pub p_a: f64,
    pub p_s: f64,
}

impl Certificate {
    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.seed_provenance = provenance.into();
        self
    }
}

/// Result of re-deriving a certificate's claims from its raw matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Recheck {
    pub min_eig_pt: f64,
    pub is_ppt: bool,
    pub antisym_weight: f64,
    pub projection_error: Option<f64>,
    pub consistent: bool,
    pub problems: Vec<String>,
}

/// Recomputes PPT-ness and projection consistency from `state` and
/// `rho_a`, ignoring every stored verdict.
pub fn recheck(cert: &Certificate, tol: f64) -> Result<Recheck> {
    let (ppt, lam) = is_ppt(&cert.state, tol)?;
    let weight = cert.state.antisym_weight();
    let mut problems = Vec::new();
    let mut projection_error = None;
    if let Some(rho_a) = &cert.rho_a {
        if rho_a.dim() != cert.state.dim() {
            problems.push("rho_a and state have different dimensions".to_string());
        } else {
            let (block, w) = project_antisym(&cert.state)?;
            let err = block.matrix().max_abs_diff(rho_a.matrix());
            projection_error = Some(err);
            if err > tol {
                problems.push(format!("antisymmetric block differs from rho_a by {err:.3e}"));
            }
            if let Some(p) = cert.p_ppt {
                if (w - p).abs() > tol {
                    problems.push(format!("Tr(P_A σ) = {w} but p_ppt = {p}"));
                }
            }
        }
    }
    match cert.kind {
        CertificateKind::PptEntangledViaSdp => {
            if !ppt {
                problems.push(format!("state is not PPT (min eigenvalue {lam:.3e})"));
            }
            if cert.rho_a.is_none() {
                problems.push("SDP certificate without rho_a".to_string());
            }
            match cert.p_ppt {
                Some(p) if p < 0.5 => {}
                _ => problems.push("SDP certificate without p_ppt < 1/2".to_string()),
            }
        }
        CertificateKind::EntangledViaSchmidtRank => match &cert.family {
            None => problems.push("Schmidt-rank certificate without family parameters".to_string()),
            Some(f) => {
                let d = cert.state.local_dim();
                let rank = schmidt_rank(&f.psi_a, d, DEFAULT_SCHMIDT_TOL)?;
                if !schmidt_witness_applicable(rank, f.p_a, f.p_s) {
                    problems.push(format!(
                        "Schmidt-rank argument does not apply (rank {rank}, p_A = {}, p_S = {})",
                        f.p_a, f.p_s
                    ));
                }
                if cert.schmidt_rank_witness != Some(rank) {
                    problems.push(format!(
                        "stored witness {:?} differs from recomputed rank {rank}",
                        cert.schmidt_rank_witness
                    ));
                }
                match family_two_param(&f.psi_a, d, f.p_a, f.p_s) {
                    Ok(rebuilt) => {
                        let err = rebuilt.matrix().max_abs_diff(cert.state.matrix());
                        if err > tol {
                            problems.push(format!(
                                "state differs from the family expression by {err:.3e}"
                            ));
                        }
                    }
                    Err(e) => problems.push(format!("family parameters are invalid: {e}")),
                }
            }
        },
        CertificateKind::PptOnly => {
            if !ppt {
                problems.push(format!("state is not PPT (min eigenvalue {lam:.3e})"));
            }
        }
        CertificateKind::Inconclusive => {}
    }
    Ok(Recheck {
        min_eig_pt: lam,
        is_ppt: ppt,
        antisym_weight: weight,
        projection_error,
        consistent: problems.is_empty(),
        problems,
    })
}

/// Solves for `p_ppt(ρ_A)` and certifies the optimal state `σ*` as PPT
/// entangled when the value is at least `100·tol_gap` below 1/2.
pub fn certify_bound_entangled(
    rho_a: &DensityMatrix,
    config: &SolverConfig,
    form: SdpForm,
) -> Result<Certificate> {
    let sol = p_ppt(rho_a, config, form)?;
    let tol = 10.0 * config.tol();
    let (ppt, lam) = is_ppt(&sol.sigma, tol)?;
    if !ppt {
        return Err(Error::Tolerance(format!(
            "optimal state fails the PPT recheck (min eigenvalue {lam:.3e})"
        )));
    }
    let (block, weight) = project_antisym(&sol.sigma)?;
    let projection_error = block.matrix().max_abs_diff(rho_a.matrix());
    if projection_error > tol || (weight - sol.value).abs() > tol {
        return Err(Error::Tolerance(format!(
            "optimal state does not project onto rho_a (block error {projection_error:.3e}, weight {weight} vs {})",
            sol.value
        )));
    }
    let margin = 0.5 - sol.value;
    let kind = if margin > MARGIN_FACTOR * config.tol_gap {
        CertificateKind::PptEntangledViaSdp
    } else {
        CertificateKind::Inconclusive
    };
    let (realignment_value, realignment_flags) = realignment_check(&sol.sigma)?;
    let s = &sol.solution;
    Ok(Certificate {
        kind,
        p_ppt: Some(sol.value),
        margin: Some(margin),
        state: sol.sigma.clone(),
        rho_a: Some(rho_a.clone()),
        min_eig_pt: lam,
        is_ppt: ppt,
        schmidt_rank_witness: None,
        solver_residuals: Some(SolverResiduals {
            status: s.status.as_str().to_string(),
            form: form.as_str().to_string(),
            primal: s.residual_primal,
            dual: s.residual_dual,
            gap: s.gap,
            iterations: s.iterations,
            tol_primal: config.tol_primal,
            tol_dual: config.tol_dual,
            tol_gap: config.tol_gap,
        }),
        projection_error: Some(projection_error),
        realignment_value,
        realignment_flags,
        family: None,
        seed_provenance: String::new(),
    })
}

/// Whether the Schmidt-rank argument applies to the two-parameter family
/// state with these weights: no `P_A/d_A` admixture, a nonzero pure weight,
/// and a pure component of Schmidt rank at least 3.
pub fn schmidt_witness_applicable(rank: usize, p_a: f64, p_s: f64) -> bool {
    p_a == 0.0 && 1.0 - p_a - p_s > 0.0 && rank >= 3
}

/// Certificate for `(1-p_A-p_S)|ψ_A><ψ_A| + p_A P_A/d_A + p_S P_S/d_S`.
///
/// With `p_A = 0` the antisymmetric block is `|ψ_A><ψ_A|`; no separable
/// state projects onto a pure antisymmetric state of Schmidt rank above 2,
/// so rank `>= 3` certifies entanglement. For `p_A > 0` only the rank of
/// `ψ_A` is reported.
pub fn schmidt_rank_certificate(psi_a: &PureState, p_a: f64, p_s: f64) -> Result<Certificate> {
    let dim = BipartiteDim::from_total(psi_a.len())?;
    let d = dim.d();
    let dev = antisym_vector_deviation(psi_a, d);
    if dev > ANTISYM_TOL {
        return Err(Error::NotAntisymmetric(dev));
    }
    if 1.0 - p_a - p_s <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "pure-state weight 1 - p_A - p_S must be positive, got {}",
            1.0 - p_a - p_s
        )));
    }
    let state = family_two_param(psi_a, d, p_a, p_s)?;
    let rank = schmidt_rank(psi_a, d, DEFAULT_SCHMIDT_TOL)?;
    let (ppt, lam) = is_ppt(&state, PPT_TOL)?;
    let kind = if schmidt_witness_applicable(rank, p_a, p_s) {
        CertificateKind::EntangledViaSchmidtRank
    } else if ppt {
        CertificateKind::PptOnly
    } else {
        CertificateKind::Inconclusive
    };
    let (realignment_value, realignment_flags) = realignment_check(&state)?;
    Ok(Certificate {
        kind,
        p_ppt: None,
        margin: None,
        state,
        rho_a: None,
        min_eig_pt: lam,
        is_ppt: ppt,
        schmidt_rank_witness: Some(rank),
        solver_residuals: None,
        projection_error: None,
        realignment_value,
        realignment_flags,
        family: Some(FamilyParams {
            psi_a: psi_a.clone(),
            p_a,
            p_s,
        }),
        seed_provenance: String::new(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Lemma1Report {
    /// `Tr(P_A ρ_sep)`
    pub input_weight: f64,
    /// `Tr(P_A ρ'_sep)`
    pub output_weight: f64,
    /// Max-entry distance of the normalized antisymmetric blocks.
    pub block_error: f64,
    /// Terms with parallel factors; they carry no antisymmetric weight.
    pub dropped_terms: usize,
    pub passed: bool,
}

/// Rebuilds a separable mixture so that every term is an orthogonal
/// product pair, reweighted by its antisymmetric overlap. The result has
/// `Tr(P_A ρ') = 1/2` and the same normalized antisymmetric block.
pub fn verify_lemma1(mix: &SeparableMixture) -> Result<(SeparableMixture, Lemma1Report)> {
    let rho = mix.density();
    let input_weight = rho.antisym_weight();
    if input_weight <= LEMMA1_MIN_WEIGHT {
        return Err(Error::NoAntisymmetricComponent(input_weight));
    }
    let mut weights = Vec::with_capacity(mix.terms.len());
    let mut terms = Vec::with_capacity(mix.terms.len());
    let mut dropped = 0;
    for (q, (a, b)) in mix.weights.iter().zip(&mix.terms) {
        match canonicalize_product(a, b) {
            Ok(pair) => {
                let overlap = 0.5 * (1.0 - a.inner(b).norm_sqr());
                weights.push(q * overlap / input_weight);
                terms.push(pair);
            }
            Err(Error::ParallelFactors(_)) => dropped += 1,
            Err(e) => return Err(e),
        }
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let out = SeparableMixture::new(mix.dim, weights, terms)?;
    let rho_out = out.density();
    let output_weight = rho_out.antisym_weight();
    let (block_in, _) = project_antisym(&rho)?;
    let (block_out, _) = project_antisym(&rho_out)?;
    let block_error = block_in.matrix().max_abs_diff(block_out.matrix());
    let passed = (output_weight - 0.5).abs() <= LEMMA1_TOL && block_error <= LEMMA1_TOL;
    Ok((
        out,
        Lemma1Report {
            input_weight,
            output_weight,
            block_error,
            dropped_terms: dropped,
            passed,
        },
    ))
}

/// `R_{(i,j),(k,l)} = σ_{(i,k),(j,l)}`
pub fn realign(m: &ComplexMatrix, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d * d, d * d, |r, c| {
        let (i, j) = (r / d, r % d);
        let (k, l) = (c / d, c % d);
        m[(i * d + k, j * d + l)]
    })
}

/// `(‖R(σ)‖_1, ‖R(σ)‖_1 > 1 + 1e-9)`
pub fn realignment_check(sigma: &DensityMatrix) -> Result<(f64, bool)> {
    let value = trace_norm(&realign(sigma.matrix(), sigma.local_dim()))?;
    Ok((value, value > 1.0 + REALIGNMENT_TOL))
}
