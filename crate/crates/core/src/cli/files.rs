//! State files, certificate records and the on-disk zoo.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::certify::{
    Certificate, CertificateKind, FamilyParams, SolverResiduals, MARGIN_FACTOR, PPT_TOL,
};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::quantum::{BipartiteDim, DensityMatrix, PureState};

use super::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub construction: String,
    #[serde(default)]
    pub parameters: BTreeMap<String, Value>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub timestamps: BTreeMap<String, String>,
    /// Input files this state was derived from.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sources: Vec<Source>,
}

impl Metadata {
    pub fn new(construction: &str) -> Self {
        Self {
            construction: construction.to_string(),
            ..Self::default()
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn tolerance(mut self, key: &str, value: f64) -> Self {
        self.tolerances.insert(key.to_string(), value);
        self
    }

    /// One-line summary used as a certificate's provenance.
    pub fn provenance(&self, sha256: &str) -> String {
        let params = serde_json::to_string(&self.parameters).unwrap_or_default();
        let seed = self.seed.map_or("none".to_string(), |s| s.to_string());
        format!("{} {params} seed={seed} sha256={sha256}", self.construction)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Source {
    pub role: String,
    pub sha256: String,
    pub metadata: Metadata,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub format_version: u32,
    pub d: usize,
    pub kind: StateKind,
    /// Amplitudes (pure) or row-major matrix entries (mixed) as `[re, im]`.
    pub data: Vec<[f64; 2]>,
    pub metadata: Metadata,
}

fn pairs(z: &[C64]) -> Vec<[f64; 2]> {
    z.iter().map(|c| [c.re, c.im]).collect()
}

fn complexes(p: &[[f64; 2]]) -> Vec<C64> {
    p.iter().map(|[re, im]| C64::new(*re, *im)).collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl StateFile {
    pub fn from_pure(d: usize, psi: &PureState, metadata: Metadata) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            d,
            kind: StateKind::Pure,
            data: pairs(psi.amplitudes()),
            metadata,
        }
    }

    pub fn from_density(rho: &DensityMatrix, metadata: Metadata) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            d: rho.local_dim(),
            kind: StateKind::Mixed,
            data: pairs(rho.matrix().as_slice()),
            metadata,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("state files serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: StateFile = serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("malformed state file: {e}")))?;
        f.validate()?;
        Ok(f)
    }

    /// SHA-256 of the compact JSON encoding.
    pub fn content_hash(&self) -> String {
        sha256_hex(serde_json::to_string(self).expect("state files serialize").as_bytes())
    }

    pub fn validate(&self) -> Result<()> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::InvalidParameter(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        let dim = BipartiteDim::new(self.d)?;
        let expected = match self.kind {
            StateKind::Pure => dim.total(),
            StateKind::Mixed => dim.total() * dim.total(),
        };
        if self.data.len() != expected {
            return Err(Error::InvalidParameter(format!(
                "{:?} state with d = {} needs {expected} entries, file has {}",
                self.kind,
                self.d,
                self.data.len()
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> Result<BipartiteDim> {
        BipartiteDim::new(self.d)
    }

    pub fn pure_state(&self) -> Result<PureState> {
        self.validate()?;
        match self.kind {
            StateKind::Pure => PureState::new(complexes(&self.data)),
            StateKind::Mixed => Err(Error::InvalidParameter(
                "expected a pure state file, got a mixed state".into(),
            )),
        }
    }

    /// The state as a density matrix; pure states become projectors.
    pub fn density(&self) -> Result<DensityMatrix> {
        self.validate()?;
        let dim = self.dim()?;
        match self.kind {
            StateKind::Pure => DensityMatrix::from_pure(dim, &self.pure_state()?),
            StateKind::Mixed => {
                let n = dim.total();
                DensityMatrix::new(dim, ComplexMatrix::from_vec(n, n, complexes(&self.data))?)
            }
        }
    }
}

pub fn read_text(path: &Path) -> std::result::Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> std::result::Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Reads and validates a state file, returning it with the hash of its bytes.
pub fn read_state(path: &Path) -> std::result::Result<(StateFile, String), CliError> {
    let text = read_text(path)?;
    let file = StateFile::from_json(&text)
        .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    Ok((file, sha256_hex(text.as_bytes())))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub p_a: f64,
    pub p_s: f64,
}

/// Serialized certificate, without the matrices it refers to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub kind: CertificateKind,
    pub p_ppt: Option<f64>,
    pub margin: Option<f64>,
    pub min_eig_pt: f64,
    pub is_ppt: bool,
    pub schmidt_rank_witness: Option<usize>,
    pub solver_residuals: Option<SolverResiduals>,
    pub projection_error: Option<f64>,
    pub realignment_value: f64,
    pub realignment_flags: bool,
    pub family: Option<FamilyRecord>,
    pub seed_provenance: String,
    pub tolerances: BTreeMap<String, f64>,
}

/// Tolerance a certificate's claims are checked at: `10·tol` of the
/// solver run when there was one, the PPT default otherwise.
pub fn check_tolerance(residuals: Option<&SolverResiduals>) -> f64 {
    residuals.map_or(PPT_TOL, |r| 10.0 * r.tol_primal.max(r.tol_dual).max(r.tol_gap))
}

impl CertificateRecord {
    pub fn from_certificate(cert: &Certificate) -> Self {
        let mut tolerances = BTreeMap::new();
        tolerances.insert(
            "check".to_string(),
            check_tolerance(cert.solver_residuals.as_ref()),
        );
        if let Some(r) = &cert.solver_residuals {
            tolerances.insert("tol_primal".into(), r.tol_primal);
            tolerances.insert("tol_dual".into(), r.tol_dual);
            tolerances.insert("tol_gap".into(), r.tol_gap);
            tolerances.insert("margin".into(), MARGIN_FACTOR * r.tol_gap);
        }
        Self {
            kind: cert.kind,
            p_ppt: cert.p_ppt,
            margin: cert.margin,
            min_eig_pt: cert.min_eig_pt,
            is_ppt: cert.is_ppt,
            schmidt_rank_witness: cert.schmidt_rank_witness,
            solver_residuals: cert.solver_residuals.clone(),
            projection_error: cert.projection_error,
            realignment_value: cert.realignment_value,
            realignment_flags: cert.realignment_flags,
            family: cert.family.as_ref().map(|f| FamilyRecord {
                p_a: f.p_a,
                p_s: f.p_s,
            }),
            seed_provenance: cert.seed_provenance.clone(),
            tolerances,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZooEntry {
    /// Content hash of `state`.
    pub id: String,
    pub d: usize,
    pub kind: CertificateKind,
    pub schmidt_rank_witness: Option<usize>,
    pub p_ppt: Option<f64>,
    pub margin: Option<f64>,
    pub certificate: CertificateRecord,
    pub state: StateFile,
    pub rho_a: Option<StateFile>,
    pub psi_a: Option<StateFile>,
}

impl ZooEntry {
    pub fn new(cert: &Certificate, state_meta: Metadata, input_meta: Option<Metadata>) -> Self {
        let d = cert.state.local_dim();
        let state = StateFile::from_density(&cert.state, state_meta);
        let input = input_meta.unwrap_or_else(|| Metadata::new("input"));
        let rho_a = cert
            .rho_a
            .as_ref()
            .map(|r| StateFile::from_density(r, input.clone()));
        let psi_a = cert
            .family
            .as_ref()
            .map(|f| StateFile::from_pure(d, &f.psi_a, input.clone()));
        Self {
            id: state.content_hash(),
            d,
            kind: cert.kind,
            schmidt_rank_witness: cert.schmidt_rank_witness,
            p_ppt: cert.p_ppt,
            margin: cert.margin,
            certificate: CertificateRecord::from_certificate(cert),
            state,
            rho_a,
            psi_a,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("zoo entries serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("malformed zoo entry: {e}")))
    }

    /// Rebuilds the certificate from the stored raw matrices.
    pub fn to_certificate(&self) -> Result<Certificate> {
        let state = self.state.density()?;
        let rho_a = self.rho_a.as_ref().map(StateFile::density).transpose()?;
        let family = match (&self.psi_a, &self.certificate.family) {
            (Some(psi), Some(f)) => Some(FamilyParams {
                psi_a: psi.pure_state()?,
                p_a: f.p_a,
                p_s: f.p_s,
            }),
            (None, None) => None,
            _ => {
                return Err(Error::InvalidParameter(
                    "zoo entry has family parameters without psi_a or vice versa".into(),
                ))
            }
        };
        let c = &self.certificate;
        Ok(Certificate {
            kind: c.kind,
            p_ppt: c.p_ppt,
            margin: c.margin,
            state,
            rho_a,
            min_eig_pt: c.min_eig_pt,
            is_ppt: c.is_ppt,
            schmidt_rank_witness: c.schmidt_rank_witness,
            solver_residuals: c.solver_residuals.clone(),
            projection_error: c.projection_error,
            realignment_value: c.realignment_value,
            realignment_flags: c.realignment_flags,
            family,
            seed_provenance: c.seed_provenance.clone(),
        })
    }
}

/// Zoo file paths, sorted by name.
pub fn zoo_files(dir: &Path) -> std::result::Result<Vec<PathBuf>, CliError> {
    let rd = fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut out = Vec::new();
    for entry in rd {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        if path.extension().is_some_and(|e| e == "json") {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{random_antisym_pure, random_density};

    #[test]
    fn round_trip_is_bit_exact() {
        let rho = random_density(3, 4, 2).unwrap();
        let f = StateFile::from_density(&rho, Metadata::new("random").param("d", 3));
        let back = StateFile::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        let m = back.density().unwrap();
        for (a, b) in m.matrix().as_slice().iter().zip(rho.matrix().as_slice()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }

        let psi = random_antisym_pure(4, 1).unwrap();
        let f = StateFile::from_pure(4, &psi, Metadata::new("random"));
        let back = StateFile::from_json(&f.to_json()).unwrap();
        assert_eq!(back.pure_state().unwrap(), psi);
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(StateFile::from_json("{").is_err());
        let psi = random_antisym_pure(3, 1).unwrap();
        let mut f = StateFile::from_pure(3, &psi, Metadata::new("x"));
        f.data.pop();
        assert!(StateFile::from_json(&f.to_json()).is_err());
        let mut f = StateFile::from_pure(3, &psi, Metadata::new("x"));
        f.format_version = 2;
        assert!(StateFile::from_json(&f.to_json()).is_err());
        let f = StateFile::from_pure(3, &psi, Metadata::new("x"));
        assert!(f.density().is_ok());
        assert!(StateFile { kind: StateKind::Mixed, ..f }.validate().is_err());
    }

    #[test]
    fn hash_depends_on_content() {
        let rho = random_density(2, 2, 0).unwrap();
        let a = StateFile::from_density(&rho, Metadata::new("a"));
        let b = StateFile::from_density(&rho, Metadata::new("b"));
        assert_eq!(a.content_hash(), a.clone().content_hash());
        assert_ne!(a.content_hash(), b.content_hash());
        assert_eq!(a.content_hash().len(), 64);
    }
}
