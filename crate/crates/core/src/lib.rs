//! Numerical toolkit for PPT (bound) entangled states built from the
//! symmetric/antisymmetric decomposition of two identical qudits.
//!
//! The crate is layered bottom-up:
//!
//! - [`linalg`]: dense complex kernels (Jacobi eigensolver, SVD).
//! - [`quantum`]: bipartite states, swap operator, projectors, partial
//!   transposition, Schmidt decomposition.
//! - [`constructions`]: Werner states, multilevel singlets, the `σ(p)`
//!   family, the two-parameter family, and seeded random generators.
//! - [`sdp`]: a small dense ADMM conic solver and the builders for the
//!   maximal antisymmetric-projection probability of PPT states.
//! - [`certify`]: PPT tests, the lower/upper bracket on that probability,
//!   bound-entanglement and Schmidt-rank certificates, separable-state
//!   canonicalization, and the realignment cross-check.
//! - [`cli`]: file formats, the certified-state zoo, and the command
//!   implementations behind the `ppt-antisym` binary.

pub mod certify;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod linalg;
pub mod quantum;
pub mod sdp;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use quantum::{BipartiteDim, DensityMatrix, PureState, Side, SubspaceProjectors};
