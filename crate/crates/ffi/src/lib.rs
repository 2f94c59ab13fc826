//! C ABI over `ppt_antisym`.
//!
//! States are opaque `PptState` handles created by the constructor
//! functions and released with `ppt_state_free`. Every fallible function
//! returns a `PptStatus`; on failure `ppt_last_error` describes the cause.
//! Outputs are written only on success.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ppt_antisym::certify::{certify_bound_entangled, is_ppt, CertificateKind, PPT_TOL};
use ppt_antisym::constructions::{multilevel_singlet, random_antisym_state, random_density, werner};
use ppt_antisym::linalg::ComplexMatrix;
use ppt_antisym::sdp::{p_ppt, SdpForm, SolverConfig};
use ppt_antisym::{BipartiteDim, DensityMatrix, Error, C64};

/// Opaque bipartite density matrix.
pub struct PptState {
    rho: DensityMatrix,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PptStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotConverged = 3,
    ToleranceViolation = 4,
    Panic = 5,
}

/// Values accepted by the `form` arguments.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PptForm {
    Full = 0,
    Reduced = 1,
}

/// Values of `PptCertificate::kind`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PptCertificateKind {
    PptEntangledViaSdp = 0,
    EntangledViaSchmidtRank = 1,
    PptOnly = 2,
    Inconclusive = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PptSolverConfig {
    pub tol_primal: f64,
    pub tol_dual: f64,
    pub tol_gap: f64,
    pub max_iterations: u64,
    pub step_rho: f64,
    pub over_relaxation: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PptCertificate {
    /// A `PptCertificateKind` value.
    pub kind: i32,
    pub p_ppt: f64,
    pub margin: f64,
    pub min_eig_pt: f64,
    pub is_ppt: i32,
    pub projection_error: f64,
    pub realignment_value: f64,
    pub residual_primal: f64,
    pub residual_dual: f64,
    pub gap: f64,
    pub iterations: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_for(e: &Error) -> PptStatus {
    match e {
        Error::SolverNotConverged { .. } | Error::NoConvergence { .. } | Error::Infeasible => {
            PptStatus::NotConverged
        }
        Error::Tolerance(_) => PptStatus::ToleranceViolation,
        _ => PptStatus::InvalidArgument,
    }
}

struct Failure {
    status: PptStatus,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            status: status_for(&e),
            message: e.to_string(),
        }
    }
}

fn null(what: &str) -> Failure {
    Failure {
        status: PptStatus::NullPointer,
        message: format!("{what} is null"),
    }
}

fn invalid(message: String) -> Failure {
    Failure {
        status: PptStatus::InvalidArgument,
        message,
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PptStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PptStatus::Ok,
        Ok(Err(fail)) => {
            set_last_error(fail.message);
            fail.status
        }
        Err(_) => {
            set_last_error("internal panic".to_string());
            PptStatus::Panic
        }
    }
}

unsafe fn state_ref<'a>(s: *const PptState, what: &str) -> Result<&'a PptState, Failure> {
    s.as_ref().ok_or_else(|| null(what))
}

unsafe fn emit_state(out: *mut *mut PptState, rho: DensityMatrix) {
    *out = Box::into_raw(Box::new(PptState { rho }));
}

fn parse_form(form: i32) -> Result<SdpForm, Failure> {
    match form {
        0 => Ok(SdpForm::Full),
        1 => Ok(SdpForm::Reduced),
        f => Err(invalid(format!("unknown form {f}"))),
    }
}

unsafe fn parse_config(cfg: *const PptSolverConfig) -> Result<SolverConfig, Failure> {
    let Some(c) = cfg.as_ref() else {
        return Ok(SolverConfig::default());
    };
    let config = SolverConfig {
        tol_primal: c.tol_primal,
        tol_dual: c.tol_dual,
        tol_gap: c.tol_gap,
        max_iterations: usize::try_from(c.max_iterations)
            .map_err(|_| invalid("max_iterations does not fit in usize".into()))?,
        step_rho: c.step_rho,
        over_relaxation: c.over_relaxation,
    };
    config.validate()?;
    Ok(config)
}

/// The library's default solver settings.
#[no_mangle]
pub extern "C" fn ppt_solver_config_default() -> PptSolverConfig {
    let c = SolverConfig::default();
    PptSolverConfig {
        tol_primal: c.tol_primal,
        tol_dual: c.tol_dual,
        tol_gap: c.tol_gap,
        max_iterations: c.max_iterations as u64,
        step_rho: c.step_rho,
        over_relaxation: c.over_relaxation,
    }
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ppt_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Werner state `p P_A/d_A + (1-p) P_S/d_S`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ppt_werner(d: usize, p: f64, out: *mut *mut PptState) -> PptStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let rho = werner(d, p)?;
        emit_state(out, rho);
        Ok(())
    })
}

/// Projector onto `Σ_i c_i |ψ-_{2i-1,2i}>`, `m = d/2` amplitudes with
/// `Σ|c_i|² = 1`. `c_im` may be NULL for real amplitudes.
///
/// # Safety
/// `c_re` (and `c_im` when non-NULL) must point to `m` readable doubles;
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn ppt_multilevel_singlet(
    d: usize,
    c_re: *const f64,
    c_im: *const f64,
    m: usize,
    out: *mut *mut PptState,
) -> PptStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if c_re.is_null() {
            return Err(null("c_re"));
        }
        let re = std::slice::from_raw_parts(c_re, m);
        let c: Vec<C64> = if c_im.is_null() {
            re.iter().map(|&x| C64::new(x, 0.0)).collect()
        } else {
            let im = std::slice::from_raw_parts(c_im, m);
            re.iter().zip(im).map(|(&x, &y)| C64::new(x, y)).collect()
        };
        let psi = multilevel_singlet(&c, d)?;
        let rho = DensityMatrix::from_pure(BipartiteDim::new(d)?, &psi)?;
        emit_state(out, rho);
        Ok(())
    })
}

/// Seeded random state of the given rank on the antisymmetric subspace.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn ppt_random_antisym(
    d: usize,
    rank: usize,
    seed: u64,
    out: *mut *mut PptState,
) -> PptStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        emit_state(out, random_antisym_state(d, rank, seed)?);
        Ok(())
    })
}

/// Seeded random state `G G†/Tr(G G†)` with a `d² x rank` Gaussian `G`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn ppt_random_density(
    d: usize,
    rank: usize,
    seed: u64,
    out: *mut *mut PptState,
) -> PptStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        emit_state(out, random_density(d, rank, seed)?);
        Ok(())
    })
}

/// State from `len = d⁴` row-major entries; validated as a density matrix.
/// `im` may be NULL for a real matrix.
///
/// # Safety
/// `re` (and `im` when non-NULL) must point to `len` readable doubles;
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn ppt_state_from_matrix(
    d: usize,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut PptState,
) -> PptStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if re.is_null() {
            return Err(null("re"));
        }
        let dim = BipartiteDim::new(d)?;
        let n = dim.total();
        if len != n * n {
            return Err(invalid(format!("expected {} entries for d = {d}, got {len}", n * n)));
        }
        let re = std::slice::from_raw_parts(re, len);
        let data: Vec<C64> = if im.is_null() {
            re.iter().map(|&x| C64::new(x, 0.0)).collect()
        } else {
            let im = std::slice::from_raw_parts(im, len);
            re.iter().zip(im).map(|(&x, &y)| C64::new(x, y)).collect()
        };
        let rho = DensityMatrix::new(dim, ComplexMatrix::from_vec(n, n, data)?)?;
        emit_state(out, rho);
        Ok(())
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `state` must be NULL or a handle returned by this library that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn ppt_state_free(state: *mut PptState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Local dimension `d` of a state on `C^d ⊗ C^d`.
///
/// # Safety
/// `state` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn ppt_state_local_dim(state: *const PptState, out: *mut usize) -> PptStatus {
    guard(|| {
        let s = state_ref(state, "state")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = s.rho.local_dim();
        Ok(())
    })
}

/// Copies the `d⁴` row-major entries into `re` and `im`.
///
/// # Safety
/// `state` must be a live handle; `re` and `im` must each have room for
/// `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ppt_state_copy_matrix(
    state: *const PptState,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> PptStatus {
    guard(|| {
        let s = state_ref(state, "state")?;
        if re.is_null() || im.is_null() {
            return Err(null("output buffer"));
        }
        let data = s.rho.matrix().as_slice();
        if len != data.len() {
            return Err(invalid(format!("buffers need {} entries, got {len}", data.len())));
        }
        let re = std::slice::from_raw_parts_mut(re, len);
        let im = std::slice::from_raw_parts_mut(im, len);
        for (k, z) in data.iter().enumerate() {
            re[k] = z.re;
            im[k] = z.im;
        }
        Ok(())
    })
}

/// Smallest eigenvalue of the partial transpose.
///
/// # Safety
/// `state` must be a live handle; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn ppt_state_min_eig_pt(state: *const PptState, out: *mut f64) -> PptStatus {
    guard(|| {
        let s = state_ref(state, "state")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let (_, lam) = is_ppt(&s.rho, PPT_TOL)?;
        *out = lam;
        Ok(())
    })
}

/// Maximal probability with which a PPT state projects onto `rho_a`.
/// `config` may be NULL for defaults; `sigma_out` may be NULL when the
/// optimal state is not needed.
///
/// # Safety
/// `rho_a` must be a live handle; `config` NULL or valid; `value_out` valid
/// for one write; `sigma_out` NULL or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn ppt_p_ppt(
    rho_a: *const PptState,
    config: *const PptSolverConfig,
    form: i32,
    value_out: *mut f64,
    sigma_out: *mut *mut PptState,
) -> PptStatus {
    guard(|| {
        let s = state_ref(rho_a, "rho_a")?;
        if value_out.is_null() {
            return Err(null("value_out"));
        }
        let cfg = parse_config(config)?;
        let sol = p_ppt(&s.rho, &cfg, parse_form(form)?)?;
        *value_out = sol.value;
        if !sigma_out.is_null() {
            emit_state(sigma_out, sol.sigma);
        }
        Ok(())
    })
}

/// Solves for `p_ppt(rho_a)` and certifies the optimal state as PPT
/// entangled when the value is clearly below 1/2.
///
/// # Safety
/// `rho_a` must be a live handle; `config` NULL or valid; `cert_out` valid
/// for one write; `sigma_out` NULL or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn ppt_certify(
    rho_a: *const PptState,
    config: *const PptSolverConfig,
    form: i32,
    cert_out: *mut PptCertificate,
    sigma_out: *mut *mut PptState,
) -> PptStatus {
    guard(|| {
        let s = state_ref(rho_a, "rho_a")?;
        if cert_out.is_null() {
            return Err(null("cert_out"));
        }
        let cfg = parse_config(config)?;
        let cert = certify_bound_entangled(&s.rho, &cfg, parse_form(form)?)?;
        let kind = match cert.kind {
            CertificateKind::PptEntangledViaSdp => PptCertificateKind::PptEntangledViaSdp,
            CertificateKind::EntangledViaSchmidtRank => PptCertificateKind::EntangledViaSchmidtRank,
            CertificateKind::PptOnly => PptCertificateKind::PptOnly,
            CertificateKind::Inconclusive => PptCertificateKind::Inconclusive,
        };
        let r = cert.solver_residuals.as_ref();
        *cert_out = PptCertificate {
            kind: kind as i32,
            p_ppt: cert.p_ppt.unwrap_or(f64::NAN),
            margin: cert.margin.unwrap_or(f64::NAN),
            min_eig_pt: cert.min_eig_pt,
            is_ppt: i32::from(cert.is_ppt),
            projection_error: cert.projection_error.unwrap_or(f64::NAN),
            realignment_value: cert.realignment_value,
            residual_primal: r.map_or(f64::NAN, |r| r.primal),
            residual_dual: r.map_or(f64::NAN, |r| r.dual),
            gap: r.map_or(f64::NAN, |r| r.gap),
            iterations: r.map_or(0, |r| r.iterations as u64),
        };
        if !sigma_out.is_null() {
            emit_state(sigma_out, cert.state);
        }
        Ok(())
    })
}
