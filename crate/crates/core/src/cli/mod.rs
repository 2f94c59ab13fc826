//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 solver
//! non-convergence, 4 failed consistency check (tolerance violation,
//! certificate recheck, or a failing `verify` suite).

pub mod files;
pub mod verify;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::certify::{
    certify_bound_entangled, is_ppt, realignment_check, recheck, schmidt_rank_certificate,
    schmidt_witness_applicable, theorem1_bounds, CertificateKind, PPT_TOL,
};
use crate::constructions::{
    family_two_param, multilevel_singlet, random_antisym_pure, random_antisym_state,
    random_density, random_pure_bipartite, sigma_p, werner,
};
use crate::error::Error;
use crate::linalg::C64;
use crate::quantum::{schmidt_rank, BipartiteDim, DensityMatrix, PureState, DEFAULT_SCHMIDT_TOL, STATE_TOL};
use crate::sdp::{p_ppt, SdpForm, SolverConfig};

pub use files::{
    CertificateRecord, Metadata, Source, StateFile, StateKind, ZooEntry, FORMAT_VERSION,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;

/// Fixed header of `scan` output.
pub const SCAN_HEADER: [&str; 6] = [
    "p_A",
    "p_S",
    "min_eig_pt",
    "is_ppt",
    "schmidt_witness_applicable",
    "realignment_value",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self::new(EXIT_INVALID, message)
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self::new(EXIT_IO, format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::SolverNotConverged { .. } | Error::NoConvergence { .. } | Error::Infeasible => {
            EXIT_SOLVER
        }
        Error::Tolerance(_) => EXIT_INCONSISTENT,
        _ => EXIT_INVALID,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::new(exit_code_for(&e), e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "ppt-antisym", version, about = "Construct, solve for, and certify PPT entangled states via the antisymmetric subspace")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a state from a named family.
    Construct(ConstructArgs),
    /// Draw a seeded random state.
    Random(RandomArgs),
    /// Compute p_ppt of an antisymmetric state.
    Solve(SolveArgs),
    /// Certify PPT entanglement of the optimal state, or of a two-parameter family state.
    Certify(CertifyArgs),
    /// Tabulate the two-parameter family over a grid of (p_A, p_S).
    Scan(ScanArgs),
    /// Run built-in self-check suites.
    Verify(VerifyArgs),
    /// Inspect a directory of certified states.
    Zoo(ZooArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Werner,
    Singlet,
    Family12,
    #[value(name = "sigma_p")]
    SigmaP,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Full,
    Reduced,
}

impl From<FormArg> for SdpForm {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Full => SdpForm::Full,
            FormArg::Reduced => SdpForm::Reduced,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Projectors,
    Lemma1,
    Bounds,
    Solver,
}

#[derive(Args, Debug, Clone)]
pub struct SolverFlags {
    /// Primal, dual and gap tolerance (each can be overridden).
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[arg(long)]
    pub tol_primal: Option<f64>,
    #[arg(long)]
    pub tol_dual: Option<f64>,
    #[arg(long)]
    pub tol_gap: Option<f64>,
    #[arg(long, default_value_t = 200_000)]
    pub max_iter: usize,
    /// Initial ADMM penalty.
    #[arg(long, default_value_t = 1.0)]
    pub step_rho: f64,
    #[arg(long, default_value_t = 1.6)]
    pub over_relaxation: f64,
    #[arg(long, value_enum, default_value_t = FormArg::Full)]
    pub form: FormArg,
}

impl SolverFlags {
    pub fn config(&self) -> CliResult<SolverConfig> {
        let cfg = SolverConfig {
            tol_primal: self.tol_primal.unwrap_or(self.tol),
            tol_dual: self.tol_dual.unwrap_or(self.tol),
            tol_gap: self.tol_gap.unwrap_or(self.tol),
            max_iterations: self.max_iter,
            step_rho: self.step_rho,
            over_relaxation: self.over_relaxation,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct AmplitudeFlags {
    /// Real parts of the multilevel-singlet amplitudes c_1..c_{d/2} (normalized on use).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub c: Vec<f64>,
    /// Imaginary parts of the amplitudes.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub c_im: Vec<f64>,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[arg(long)]
    pub d: Option<usize>,
    /// Werner / sigma_p weight (sigma_p defaults to 2/(d(d+1)+2)).
    #[arg(long)]
    pub p: Option<f64>,
    #[command(flatten)]
    pub amplitudes: AmplitudeFlags,
    /// Pure antisymmetric state file for family12.
    #[arg(long)]
    pub psi_a: Option<PathBuf>,
    #[arg(long)]
    pub p_a: Option<f64>,
    #[arg(long)]
    pub p_s: Option<f64>,
    /// Antisymmetric state file for sigma_p.
    #[arg(long)]
    pub rho_a: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record the creation time in the metadata.
    #[arg(long)]
    pub stamp: bool,
}

#[derive(Args, Debug)]
pub struct RandomArgs {
    #[arg(long)]
    pub d: usize,
    /// Defaults to full rank (d² or, with --antisym, d(d-1)/2).
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Support the state on the antisymmetric subspace.
    #[arg(long)]
    pub antisym: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub stamp: bool,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// State file of the antisymmetric state.
    pub state: PathBuf,
    #[command(flatten)]
    pub solver: SolverFlags,
    /// Write the optimal state here.
    #[arg(long)]
    pub sigma_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// Antisymmetric state file (or, with --p-a/--p-s, a pure antisymmetric state).
    pub state: Option<PathBuf>,
    /// Two-parameter family weight of P_A/d_A.
    #[arg(long)]
    pub p_a: Option<f64>,
    /// Two-parameter family weight of P_S/d_S.
    #[arg(long)]
    pub p_s: Option<f64>,
    /// Multilevel-singlet dimension when no state file is given.
    #[arg(long)]
    pub d: Option<usize>,
    #[command(flatten)]
    pub amplitudes: AmplitudeFlags,
    #[command(flatten)]
    pub solver: SolverFlags,
    /// Persist certified PPT entangled states here.
    #[arg(long)]
    pub zoo: Option<PathBuf>,
    /// Write the certified state here.
    #[arg(long)]
    pub state_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// Pure antisymmetric state file.
    pub psi_a: PathBuf,
    /// Grid spacing in (0, 0.5].
    #[arg(long, default_value_t = 0.05)]
    pub grid: f64,
    #[arg(long, default_value_t = PPT_TOL)]
    pub ppt_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Restrict to one local dimension.
    #[arg(long)]
    pub d: Option<usize>,
    /// Instances per dimension (lemma1 default 20, bounds default 3).
    #[arg(long)]
    pub count: Option<usize>,
    #[command(flatten)]
    pub solver: SolverFlags,
}

#[derive(Args, Debug)]
pub struct ZooArgs {
    #[command(subcommand)]
    pub action: ZooAction,
}

#[derive(Subcommand, Debug)]
pub enum ZooAction {
    /// One line per entry.
    List {
        #[arg(long)]
        zoo: PathBuf,
    },
    /// Print an entry (after rechecking it).
    Show {
        /// Entry id or unique prefix.
        id: String,
        #[arg(long)]
        zoo: PathBuf,
    },
    /// Re-derive every entry's claims from its stored matrices.
    Recheck {
        #[arg(long)]
        zoo: PathBuf,
    },
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::new(EXIT_IO, format!("writing output: {e}")))
}

fn emit_json(out: &mut dyn Write, v: &Value) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    emit(out, &s)
}

fn require<T>(v: Option<T>, flag: &str, context: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::invalid(format!("{context} requires {flag}")))
}

fn stamp(meta: &mut Metadata, enabled: bool) {
    if enabled {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        meta.timestamps
            .insert("created_unix".to_string(), secs.to_string());
    }
}

fn source(role: &str, file: &StateFile, sha: &str) -> Source {
    Source {
        role: role.to_string(),
        sha256: sha.to_string(),
        metadata: file.metadata.clone(),
    }
}

/// Normalized amplitudes from `--c`/`--c-im`.
fn amplitudes(flags: &AmplitudeFlags) -> CliResult<Vec<C64>> {
    if flags.c.is_empty() {
        return Err(CliError::invalid("--c amplitudes are required"));
    }
    if !flags.c_im.is_empty() && flags.c_im.len() != flags.c.len() {
        return Err(CliError::invalid(format!(
            "--c-im has {} values but --c has {}",
            flags.c_im.len(),
            flags.c.len()
        )));
    }
    let c: Vec<C64> = flags
        .c
        .iter()
        .enumerate()
        .map(|(i, &re)| C64::new(re, flags.c_im.get(i).copied().unwrap_or(0.0)))
        .collect();
    if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(CliError::invalid("amplitudes must be finite"));
    }
    let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(CliError::invalid("amplitudes must not all vanish"));
    }
    Ok(c.into_iter().map(|z| z / norm).collect())
}

fn singlet_from_flags(d: Option<usize>, flags: &AmplitudeFlags) -> CliResult<(usize, PureState, Metadata)> {
    let c = amplitudes(flags)?;
    let d = d.unwrap_or(2 * c.len());
    let psi = multilevel_singlet(&c, d)?;
    let meta = Metadata::new("singlet")
        .param("d", d)
        .param("c", flags.c.clone())
        .param("c_im", flags.c_im.clone())
        .param(
            "normalized_c",
            c.iter().map(|z| vec![z.re, z.im]).collect::<Vec<_>>(),
        );
    Ok((d, psi, meta))
}

fn write_or_print_state(
    out: &mut dyn Write,
    file: &StateFile,
    path: Option<&Path>,
) -> CliResult<()> {
    let Some(path) = path else {
        return emit(out, &file.to_json());
    };
    files::write_text(path, &file.to_json())?;
    let rho = file.density()?;
    let (ppt, lam) = is_ppt(&rho, PPT_TOL)?;
    let mut summary = json!({
        "out": path.display().to_string(),
        "sha256": file.content_hash(),
        "d": file.d,
        "kind": file.kind,
        "trace": rho.matrix().trace().re,
        "min_eig_pt": lam,
        "is_ppt": ppt,
        "ppt_tol": PPT_TOL,
    });
    if file.kind == StateKind::Pure {
        let rank = schmidt_rank(&file.pure_state()?, file.d, DEFAULT_SCHMIDT_TOL)?;
        summary["schmidt_rank"] = json!(rank);
        summary["schmidt_tol"] = json!(DEFAULT_SCHMIDT_TOL);
    }
    emit_json(out, &summary)
}

fn cmd_construct(a: &ConstructArgs, out: &mut dyn Write) -> CliResult<()> {
    let mut file = match a.family {
        Family::Werner => {
            let d = require(a.d, "--d", "werner")?;
            let p = require(a.p, "--p", "werner")?;
            let rho = werner(d, p)?;
            StateFile::from_density(&rho, Metadata::new("werner").param("d", d).param("p", p))
        }
        Family::Singlet => {
            let (d, psi, meta) = singlet_from_flags(a.d, &a.amplitudes)?;
            StateFile::from_pure(d, &psi, meta)
        }
        Family::Family12 => {
            let p_a = require(a.p_a, "--p-a", "family12")?;
            let p_s = require(a.p_s, "--p-s", "family12")?;
            let (d, psi, src) = match &a.psi_a {
                Some(path) => {
                    let (f, sha) = files::read_state(path)?;
                    (f.d, f.pure_state()?, vec![source("psi_a", &f, &sha)])
                }
                None => {
                    let (d, psi, meta) = singlet_from_flags(a.d, &a.amplitudes)?;
                    let f = StateFile::from_pure(d, &psi, meta);
                    let sha = f.content_hash();
                    (d, psi, vec![source("psi_a", &f, &sha)])
                }
            };
            let rho = family_two_param(&psi, d, p_a, p_s)?;
            let mut meta = Metadata::new("family12").param("d", d).param("p_a", p_a).param("p_s", p_s);
            meta.sources = src;
            StateFile::from_density(&rho, meta)
        }
        Family::SigmaP => {
            let path = require(a.rho_a.as_ref(), "--rho-a", "sigma_p")?;
            let (f, sha) = files::read_state(path)?;
            if let Some(d) = a.d.filter(|&d| d != f.d) {
                return Err(CliError::invalid(format!(
                    "--d {d} does not match the rho_a file (d = {})",
                    f.d
                )));
            }
            let rho_a = f.density()?;
            let p = match a.p {
                Some(p) => p,
                None => theorem1_bounds(f.d)?.0,
            };
            let rho = sigma_p(&rho_a, p)?;
            let mut meta = Metadata::new("sigma_p").param("d", f.d).param("p", p);
            meta.sources = vec![source("rho_a", &f, &sha)];
            StateFile::from_density(&rho, meta)
        }
    };
    file.metadata = file.metadata.clone().tolerance("state", STATE_TOL);
    stamp(&mut file.metadata, a.stamp);
    write_or_print_state(out, &file, a.out.as_deref())
}

fn cmd_random(a: &RandomArgs, out: &mut dyn Write) -> CliResult<()> {
    let dim = BipartiteDim::new(a.d)?;
    let rank = a
        .rank
        .unwrap_or(if a.antisym { dim.antisym_dim() } else { dim.total() });
    let mut meta = Metadata::new("random")
        .param("d", a.d)
        .param("rank", rank)
        .param("antisym", a.antisym)
        .tolerance("state", STATE_TOL);
    meta.seed = Some(a.seed);
    stamp(&mut meta, a.stamp);
    let file = match (rank, a.antisym) {
        (1, true) => StateFile::from_pure(a.d, &random_antisym_pure(a.d, a.seed)?, meta),
        (1, false) => StateFile::from_pure(a.d, &random_pure_bipartite(a.d, a.seed)?, meta),
        (r, true) => StateFile::from_density(&random_antisym_state(a.d, r, a.seed)?, meta),
        (r, false) => StateFile::from_density(&random_density(a.d, r, a.seed)?, meta),
    };
    write_or_print_state(out, &file, a.out.as_deref())
}

fn config_json(cfg: &SolverConfig, form: SdpForm) -> Value {
    json!({
        "tol_primal": cfg.tol_primal,
        "tol_dual": cfg.tol_dual,
        "tol_gap": cfg.tol_gap,
        "max_iterations": cfg.max_iterations,
        "step_rho": cfg.step_rho,
        "over_relaxation": cfg.over_relaxation,
        "form": form.as_str(),
    })
}

fn optimum_metadata(form: SdpForm, value: f64, cfg: &SolverConfig, input: &StateFile, sha: &str) -> Metadata {
    let mut meta = Metadata::new("p_ppt_optimum")
        .param("form", form.as_str())
        .param("p_ppt", value)
        .tolerance("tol_primal", cfg.tol_primal)
        .tolerance("tol_dual", cfg.tol_dual)
        .tolerance("tol_gap", cfg.tol_gap);
    meta.sources = vec![source("rho_a", input, sha)];
    meta
}

fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> CliResult<()> {
    let cfg = a.solver.config()?;
    let form = SdpForm::from(a.solver.form);
    let (file, sha) = files::read_state(&a.state)?;
    let rho_a = file.density()?;
    let sol = p_ppt(&rho_a, &cfg, form)?;
    let (lo, hi) = theorem1_bounds(file.d)?;
    let s = &sol.solution;
    let mut report = json!({
        "input": a.state.display().to_string(),
        "input_sha256": sha,
        "d": file.d,
        "p_ppt": sol.value,
        "theorem1_bracket": [lo, hi],
        "status": s.status.as_str(),
        "iterations": s.iterations,
        "residuals": {"primal": s.residual_primal, "dual": s.residual_dual, "gap": s.gap},
        "min_eig_pt": sol.min_eig_pt,
        "projection_error": sol.projection_error,
        "tolerances": config_json(&cfg, form),
    });
    if let Some(path) = &a.sigma_out {
        let meta = optimum_metadata(form, sol.value, &cfg, &file, &sha);
        let sf = StateFile::from_density(&sol.sigma, meta);
        files::write_text(path, &sf.to_json())?;
        report["sigma_out"] = json!(path.display().to_string());
    }
    emit_json(out, &report)
}

fn cmd_certify(a: &CertifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let family_mode = a.p_a.is_some() || a.p_s.is_some();
    let (cert, state_meta, input_meta) = if family_mode {
        let p_a = require(a.p_a, "--p-a", "family certification")?;
        let p_s = require(a.p_s, "--p-s", "family certification")?;
        let (psi_file, sha) = match &a.state {
            Some(path) => files::read_state(path)?,
            None => {
                let (d, psi, meta) = singlet_from_flags(a.d, &a.amplitudes)?;
                let f = StateFile::from_pure(d, &psi, meta);
                let sha = f.content_hash();
                (f, sha)
            }
        };
        let psi = psi_file.pure_state()?;
        let cert = schmidt_rank_certificate(&psi, p_a, p_s)?
            .with_provenance(psi_file.metadata.provenance(&sha));
        let mut meta = Metadata::new("family12")
            .param("d", psi_file.d)
            .param("p_a", p_a)
            .param("p_s", p_s)
            .tolerance("ppt", PPT_TOL);
        meta.sources = vec![source("psi_a", &psi_file, &sha)];
        (cert, meta, psi_file.metadata.clone())
    } else {
        let path = require(a.state.as_ref(), "a state file", "certification")?;
        let cfg = a.solver.config()?;
        let form = SdpForm::from(a.solver.form);
        let (file, sha) = files::read_state(path)?;
        let rho_a = file.density()?;
        let cert = certify_bound_entangled(&rho_a, &cfg, form)?
            .with_provenance(file.metadata.provenance(&sha));
        let value = cert.p_ppt.unwrap_or(f64::NAN);
        let meta = optimum_metadata(form, value, &cfg, &file, &sha);
        (cert, meta, file.metadata.clone())
    };

    let certified = match cert.kind {
        CertificateKind::PptEntangledViaSdp => true,
        CertificateKind::EntangledViaSchmidtRank => cert.is_ppt,
        _ => false,
    };
    let entry = ZooEntry::new(&cert, state_meta, Some(input_meta));
    let mut report = json!({
        "certificate": entry.certificate,
        "ppt_entangled": certified,
        "state_sha256": entry.id,
        "persisted": Value::Null,
    });
    if let Some(path) = &a.state_out {
        files::write_text(path, &entry.state.to_json())?;
        report["state_out"] = json!(path.display().to_string());
    }
    if let (Some(dir), true) = (&a.zoo, certified) {
        let path = dir.join(format!("{}.json", entry.id));
        files::write_text(&path, &entry.to_json())?;
        report["persisted"] = json!(path.display().to_string());
    }
    emit_json(out, &report)
}

/// Grid indices `(i, j)` with `i + j <= n`, where `n = floor(1/step)`.
fn scan_grid(step: f64) -> CliResult<Vec<(f64, f64)>> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(CliError::invalid(format!(
            "--grid must lie in (0, 0.5], got {step}"
        )));
    }
    let n = (1.0 / step + 1e-9).floor() as usize;
    let mut pts = Vec::new();
    for i in 0..=n {
        for j in 0..=(n - i) {
            let p_a = i as f64 * step;
            let mut p_s = j as f64 * step;
            if (p_a + p_s - 1.0).abs() < 1e-9 {
                p_s = 1.0 - p_a;
            }
            pts.push((p_a, p_s));
        }
    }
    Ok(pts)
}

fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

/// Scan rows as CSV text (header included).
pub fn scan_csv(psi: &PureState, d: usize, step: f64, ppt_tol: f64) -> std::result::Result<String, CliError> {
    let pts = scan_grid(step)?;
    let rank = schmidt_rank(psi, d, DEFAULT_SCHMIDT_TOL)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::new(EXIT_IO, format!("writing CSV: {e}"));
    w.write_record(SCAN_HEADER).map_err(csv_err)?;
    for (p_a, p_s) in pts {
        let rho: DensityMatrix = family_two_param(psi, d, p_a, p_s)?;
        let (ppt, lam) = is_ppt(&rho, ppt_tol)?;
        let (realign, _) = realignment_check(&rho)?;
        let applicable = 1.0 - p_a - p_s > 1e-12 && schmidt_witness_applicable(rank, p_a, p_s);
        w.write_record([
            fmt_f(p_a),
            fmt_f(p_s),
            fmt_f(lam),
            ppt.to_string(),
            applicable.to_string(),
            fmt_f(realign),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::new(EXIT_IO, format!("writing CSV: {e}")))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

fn cmd_scan(a: &ScanArgs, out: &mut dyn Write) -> CliResult<()> {
    if a.ppt_tol.is_nan() || a.ppt_tol < 0.0 {
        return Err(CliError::invalid("--ppt-tol must be nonnegative"));
    }
    let (file, sha) = files::read_state(&a.psi_a)?;
    let psi = file.pure_state()?;
    let text = scan_csv(&psi, file.d, a.grid, a.ppt_tol)?;
    match &a.out {
        None => emit(out, &text),
        Some(path) => {
            files::write_text(path, &text)?;
            let rank = schmidt_rank(&psi, file.d, DEFAULT_SCHMIDT_TOL)?;
            emit_json(
                out,
                &json!({
                    "out": path.display().to_string(),
                    "rows": text.lines().count() - 1,
                    "grid": a.grid,
                    "ppt_tol": a.ppt_tol,
                    "schmidt_rank": rank,
                    "input_sha256": sha,
                }),
            )
        }
    }
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let cfg = a.solver.config()?;
    let ds = |default: std::ops::RangeInclusive<usize>| -> Vec<usize> {
        a.d.map_or_else(|| default.collect(), |d| vec![d])
    };
    let checks = match a.suite {
        Suite::Projectors => verify::projectors(&ds(2..=6))?,
        Suite::Lemma1 => verify::lemma1(&ds(2..=4), a.seed, a.count.unwrap_or(20))?,
        Suite::Bounds => verify::bounds(&ds(2..=4), a.seed, a.count.unwrap_or(3), &cfg)?,
        Suite::Solver => verify::solver(&ds(3..=3), a.seed, &cfg)?,
    };
    let mut text = format!(
        "# tolerances: projector {:.0e}, bracket slack {:.0e}, value {:.0e}, ppt {:.0e}, solver tol_primal {:.0e} tol_dual {:.0e} tol_gap {:.0e}\n",
        verify::PROJECTOR_TOL,
        verify::BRACKET_SLACK,
        verify::VALUE_TOL,
        PPT_TOL,
        cfg.tol_primal,
        cfg.tol_dual,
        cfg.tol_gap
    );
    for c in &checks {
        text.push_str(&c.line());
        text.push('\n');
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    text.push_str(&format!("{} checks, {failed} failed\n", checks.len()));
    emit(out, &text)?;
    if failed > 0 {
        return Err(CliError::new(EXIT_INCONSISTENT, format!("{failed} checks failed")));
    }
    Ok(())
}

struct LoadedEntry {
    path: PathBuf,
    entry: std::result::Result<ZooEntry, String>,
}

fn load_zoo(dir: &Path) -> CliResult<Vec<LoadedEntry>> {
    files::zoo_files(dir)?
        .into_iter()
        .map(|path| {
            let text = files::read_text(&path)?;
            let entry = ZooEntry::from_json(&text).map_err(|e| e.to_string());
            Ok(LoadedEntry { path, entry })
        })
        .collect()
}

/// Problems found when re-deriving an entry from its raw data.
fn recheck_entry(entry: &ZooEntry) -> Vec<String> {
    let mut problems = Vec::new();
    let hash = entry.state.content_hash();
    if hash != entry.id {
        problems.push(format!("id does not match state content hash {hash}"));
    }
    let cert = match entry.to_certificate() {
        Ok(c) => c,
        Err(e) => {
            problems.push(format!("stored matrices are invalid: {e}"));
            return problems;
        }
    };
    let tol = files::check_tolerance(cert.solver_residuals.as_ref());
    match recheck(&cert, tol) {
        Ok(r) => {
            problems.extend(r.problems);
            if !r.is_ppt {
                problems.push(format!("state is not PPT (min eigenvalue {:.3e})", r.min_eig_pt));
            }
        }
        Err(e) => problems.push(format!("recheck failed: {e}")),
    }
    problems
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or("-".to_string(), |v| format!("{v:.9}"))
}

fn cmd_zoo(a: &ZooArgs, out: &mut dyn Write) -> CliResult<()> {
    match &a.action {
        ZooAction::List { zoo } => {
            let mut text = String::from("id\td\tkind\tp_ppt\tmargin\tschmidt_rank_witness\n");
            for le in load_zoo(zoo)? {
                match le.entry {
                    Ok(e) => text.push_str(&format!(
                        "{}\t{}\t{}\t{}\t{}\t{}\n",
                        e.id,
                        e.d,
                        e.kind.as_str(),
                        fmt_opt(e.p_ppt),
                        fmt_opt(e.margin),
                        e.schmidt_rank_witness.map_or("-".to_string(), |r| r.to_string())
                    )),
                    Err(err) => text.push_str(&format!("{}\tunreadable: {err}\n", le.path.display())),
                }
            }
            emit(out, &text)
        }
        ZooAction::Show { id, zoo } => {
            let matches: Vec<LoadedEntry> = load_zoo(zoo)?
                .into_iter()
                .filter(|le| {
                    le.path
                        .file_stem()
                        .is_some_and(|s| s.to_string_lossy().starts_with(id.as_str()))
                })
                .collect();
            let le = match matches.len() {
                0 => return Err(CliError::invalid(format!("no zoo entry matches '{id}'"))),
                1 => matches.into_iter().next().expect("one match"),
                n => return Err(CliError::invalid(format!("'{id}' matches {n} entries"))),
            };
            let entry = le.entry.map_err(|e| {
                CliError::new(EXIT_INCONSISTENT, format!("{}: {e}", le.path.display()))
            })?;
            emit(out, &entry.to_json())?;
            let problems = recheck_entry(&entry);
            if !problems.is_empty() {
                return Err(CliError::new(
                    EXIT_INCONSISTENT,
                    format!("entry fails recheck: {}", problems.join("; ")),
                ));
            }
            Ok(())
        }
        ZooAction::Recheck { zoo } => {
            let mut text = String::new();
            let mut failed = 0;
            let loaded = load_zoo(zoo)?;
            for le in &loaded {
                let problems = match &le.entry {
                    Ok(e) => recheck_entry(e),
                    Err(err) => vec![err.clone()],
                };
                let name = le.path.file_name().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
                if problems.is_empty() {
                    text.push_str(&format!("PASS {name}\n"));
                } else {
                    failed += 1;
                    text.push_str(&format!("FAIL {name}: {}\n", problems.join("; ")));
                }
            }
            text.push_str(&format!("{} entries, {failed} failed\n", loaded.len()));
            emit(out, &text)?;
            if failed > 0 {
                return Err(CliError::new(EXIT_INCONSISTENT, format!("{failed} zoo entries failed recheck")));
            }
            Ok(())
        }
    }
}

/// Runs one command, writing its report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Construct(a) => cmd_construct(a, out),
        Command::Random(a) => cmd_random(a, out),
        Command::Solve(a) => cmd_solve(a, out),
        Command::Certify(a) => cmd_certify(a, out),
        Command::Scan(a) => cmd_scan(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Zoo(a) => cmd_zoo(a, out),
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match run(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        let pts = scan_grid(0.05).unwrap();
        assert_eq!(pts.len(), 21 * 22 / 2);
        assert!(pts.iter().all(|(a, s)| a + s <= 1.0 + 1e-15));
        assert!(pts.contains(&(0.5, 0.5)));
        assert!(scan_grid(0.0).is_err());
        assert!(scan_grid(0.6).is_err());
        assert_eq!(scan_grid(0.5).unwrap().len(), 6);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code_for(&Error::Infeasible), EXIT_SOLVER);
        assert_eq!(exit_code_for(&Error::Tolerance("x".into())), EXIT_INCONSISTENT);
        assert_eq!(exit_code_for(&Error::InvalidDimension(1)), EXIT_INVALID);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn amplitudes_are_normalized() {
        let flags = AmplitudeFlags {
            c: vec![0.70710678, 0.70710678],
            c_im: vec![],
        };
        let c = amplitudes(&flags).unwrap();
        let n: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-15);
        assert!(amplitudes(&AmplitudeFlags { c: vec![0.0], c_im: vec![] }).is_err());
        assert!(amplitudes(&AmplitudeFlags { c: vec![1.0], c_im: vec![1.0, 2.0] }).is_err());
    }
}
